//! Generic rank of a formal map at truncation order.

use rand::Rng;

use crate::fps::linalg::{combinations, series_det};
use crate::fps::{vars, Gq, Series, Vars};

/// Draws tried on random lines before falling back to symbolic minors.
pub const DEFAULT_SAMPLES: usize = 8;
/// Height bound of the random Gaussian rationals.
pub const SAMPLE_HEIGHT: i64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    /// Truncation order of the Jacobian entries.
    pub order: u32,
    /// Whether the verdict needed the exhaustive minor check.
    pub symbolic: bool,
}

/// Jacobian matrix `∂F_i/∂x_j` over the common variables of `f`.
pub fn jacobian(f: &[Series]) -> Vec<Vec<Series>> {
    f.iter().map(|s| (0..s.nvars()).map(|j| s.derive_idx(j)).collect()).collect()
}

pub(crate) fn line_vars() -> Vars {
    vars(&["s"])
}

/// Restriction of a series matrix to the line `x = a·s`.
pub fn matrix_on_line(m: &[Vec<Series>], dir: &[Gq]) -> Vec<Vec<Series>> {
    let sv = line_vars();
    m.iter().map(|row| row.iter().map(|e| e.on_line(dir, &sv)).collect()).collect()
}

/// Rank of a matrix of univariate truncated series over the Laurent
/// field, by elimination with minimal-valuation pivots. Every pivot is
/// nonzero within its known precision, so the result never exceeds the
/// true rank.
pub fn univariate_rank(m: &[Vec<Series>]) -> usize {
    let mut a: Vec<Vec<Series>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let sv = line_vars();
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, e) in row.iter().enumerate().skip(r) {
                if let Some(v) = e.valuation() {
                    if best.map_or(true, |b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(r, pi);
        for row in a.iter_mut() {
            row.swap(r, pj);
        }
        let sv_pow = Series::monomial(&sv, a[r][r].order(), vec![v as u8], Gq::one());
        let unit = match a[r][r].divide_exact(&sv_pow).and_then(|u| u.invert_unit()) {
            Ok(u) => u,
            Err(_) => break,
        };
        let prow: Vec<Series> = a[r].iter().map(|e| e * &unit).collect();
        for i in r + 1..rows {
            if a[i][r].is_zero() {
                continue;
            }
            let Ok(f) = a[i][r].divide_exact(&sv_pow) else { continue };
            for j in r..cols {
                let t = &f * &prow[j];
                a[i][j] = &a[i][j] - &t;
            }
        }
        r += 1;
    }
    r
}

fn random_dir<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Gq> {
    (0..n).map(|_| Gq::random_small(rng, SAMPLE_HEIGHT)).collect()
}

/// Generic rank of a matrix of series: random-line elimination for lower
/// bounds, exhaustive minors only to confirm that the next size vanishes.
/// `upper` caps the answer when a structural bound is known.
pub fn matrix_generic_rank<R: Rng + ?Sized>(m: &[Vec<Series>], upper: usize, samples: usize, rng: &mut R) -> RankCertificate {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let order = m.iter().flatten().map(|s| s.order()).min().unwrap_or(0);
    let cap = upper.min(rows).min(cols);
    let Some(first) = m.iter().flatten().next() else {
        return RankCertificate { rank: 0, order, symbolic: false };
    };
    let nv = first.nvars();
    let mut best = 0;
    for _ in 0..samples {
        let dir = random_dir(rng, nv);
        best = best.max(univariate_rank(&matrix_on_line(m, &dir)));
        if best == cap {
            return RankCertificate { rank: best, order, symbolic: false };
        }
    }
    let vs = first.vars().clone();
    let mut r = best;
    while r < cap && has_nonzero_minor(m, r + 1, &vs, order) {
        r += 1;
    }
    RankCertificate { rank: r, order, symbolic: true }
}

fn has_nonzero_minor(m: &[Vec<Series>], k: usize, vs: &Vars, order: u32) -> bool {
    let rows = m.len();
    let cols = m[0].len();
    for rs in combinations(rows, k) {
        for cs in combinations(cols, k) {
            let sub: Vec<Vec<Series>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
            if !series_det(&sub, vs, order).is_zero() {
                return true;
            }
        }
    }
    false
}

/// Generic rank of `F` viewed as a map of its variables.
pub fn generic_rank<R: Rng + ?Sized>(f: &[Series], rng: &mut R) -> RankCertificate {
    let j = jacobian(f);
    matrix_generic_rank(&j, usize::MAX, DEFAULT_SAMPLES, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_of_simple_maps() {
        let vs = vars(&["a", "b"]);
        let a = Series::var(&vs, "a", 6).unwrap();
        let b = Series::var(&vs, "b", 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(generic_rank(&[a.clone(), &a * &b], &mut rng).rank, 2);
        let cert = generic_rank(&[&a + &b, (&a + &b).pow(2)], &mut rng);
        assert_eq!(cert.rank, 1);
        assert!(cert.symbolic);
    }

    #[test]
    fn valuation_pivots_survive_high_vanishing() {
        let vs = vars(&["a", "b"]);
        let a = Series::var(&vs, "a", 8).unwrap();
        let b = Series::var(&vs, "b", 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(generic_rank(&[a.pow(3), b.pow(4)], &mut rng).rank, 2);
    }
}
