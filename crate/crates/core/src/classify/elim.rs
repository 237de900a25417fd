//! Elimination by resultants in a few of the variables of a series ring.

use itertools::Itertools;
use num_integer::Integer;

use crate::fps::linalg::series_det;
use crate::fps::Series;

/// Largest pool kept between elimination rounds.
const POOL_CAP: usize = 12;

/// Coefficients of `s` as a polynomial in `y = x^g`.
fn coefficients(s: &Series, x: usize, g: u32) -> Vec<Series> {
    let deg = s.degree_in(x) / g;
    let mut out: Vec<Vec<(Vec<u8>, crate::fps::Gq)>> = vec![Vec::new(); deg as usize + 1];
    for (e, c) in s.terms() {
        let mut e2 = e.clone();
        let k = e2[x] as u32 / g;
        e2[x] = 0;
        out[k as usize].push((e2, c.clone()));
    }
    out.into_iter().map(|t| Series::from_terms(s.vars(), s.order(), t)).collect()
}

/// Resultant of `a` and `b` with respect to variable `x`, after the
/// substitution `y = x^g` for the gcd `g` of the exponents of `x`.
pub fn resultant(a: &Series, b: &Series, x: usize) -> Series {
    let g = a.terms().keys().chain(b.terms().keys()).map(|e| e[x] as u32).filter(|&k| k > 0).fold(0u32, |acc, k| acc.gcd(&k)).max(1);
    let ca = coefficients(a, x, g);
    let cb = coefficients(b, x, g);
    let (p, q) = (ca.len() - 1, cb.len() - 1);
    let order = a.order().min(b.order());
    let vs = a.vars().clone();
    let n = p + q;
    if n == 0 {
        return Series::one(&vs, order);
    }
    let mut m = vec![vec![Series::zero(&vs, order); n]; n];
    for i in 0..q {
        for k in 0..=p {
            m[i][i + k] = ca[p - k].clone();
        }
    }
    for i in 0..p {
        for k in 0..=q {
            m[q + i][i + k] = cb[q - k].clone();
        }
    }
    series_det(&m, &vs, order)
}

fn only_unknown(s: &Series, target: usize, unknowns: &[usize]) -> bool {
    s.degree_in(target) > 0 && unknowns.iter().all(|&u| u == target || s.degree_in(u) == 0)
}

/// Divides by the coefficient of the top power of `x` when it is a unit.
fn make_monic(s: &Series, x: usize) -> Option<Series> {
    let top = s.degree_in(x);
    let lead = Series::from_terms(
        s.vars(),
        s.order(),
        s.terms().iter().filter(|(e, _)| e[x] as u32 == top).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[x] = 0;
            (e2, c.clone())
        }),
    );
    Some(s * &lead.invert_unit().ok()?)
}

/// A nonzero polynomial in the unknown `target` alone (other variables not
/// in `unknowns` act as parameters) in the ideal of `gens`, obtained by
/// eliminating the remaining unknowns with pairwise resultants. With
/// `monic`, the leading coefficient must be a unit and is normalized to 1.
pub(crate) fn eliminate_univariate(gens: &[Series], target: usize, unknowns: &[usize], monic: bool) -> Option<Series> {
    let others: Vec<usize> = unknowns.iter().copied().filter(|&u| u != target).collect();
    for perm in others.iter().copied().permutations(others.len()) {
        let mut pool: Vec<Series> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        for &x in &perm {
            let (with, mut next): (Vec<Series>, Vec<Series>) = pool.into_iter().partition(|s| s.degree_in(x) > 0);
            for (i, j) in (0..with.len()).tuple_combinations() {
                let r = resultant(&with[i], &with[j], x);
                if !r.is_zero() && !next.contains(&r) {
                    next.push(r);
                }
            }
            next.sort_by_key(|s| s.len());
            next.truncate(POOL_CAP);
            pool = next;
        }
        let mut cands: Vec<Series> = pool
            .into_iter()
            .filter(|s| only_unknown(s, target, unknowns))
            .filter_map(|s| if monic { make_monic(&s, target) } else { Some(s) })
            .collect();
        cands.sort_by_key(|s| (s.degree_in(target), s.len()));
        if let Some(p) = cands.into_iter().next() {
            return Some(p);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::{parse_series, vars};

    #[test]
    fn resultant_of_quadratics() {
        let vs = vars(&["a", "x"]);
        let p = |t: &str| parse_series(t, &vs, 10).unwrap();
        // (x − 1)(x − a) and x − 2: value of the first at x = 2, up to sign.
        let r = resultant(&p("x^2 - x - a*x + a"), &p("x - 2"), 1);
        assert_eq!(r, p("2 - a"));
        // even polynomials reduce to y = x².
        let r = resultant(&p("x^2 - a"), &p("x^2 - 1"), 1);
        assert_eq!(r, p("a - 1"));
    }

    #[test]
    fn eliminates_to_one_variable() {
        let vs = vars(&["a", "b"]);
        let p = |t: &str| parse_series(t, &vs, 10).unwrap();
        let gens = [p("a - b^2"), p("b^3")];
        let u = eliminate_univariate(&gens, 0, &[0, 1], true).unwrap();
        assert_eq!(u.degree_in(1), 0);
        assert!(u.degree_in(0) > 0);
    }
}
