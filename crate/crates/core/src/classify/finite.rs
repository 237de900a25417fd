//! Zero-dimensionality of the variety cut out by `R'_γ(0, 0, t') = 0`.

use crate::error::Result;
use crate::fps::linalg::rank;
use crate::fps::{implicit_solve, vars, Gq, Series};
use crate::manifold::FormalMap;
use crate::reflection::{multi_indices, multi_indices_upto, ReflectionSystem};

use super::elim::eliminate_univariate;
use super::{check_maps_into, linear_part, row_keys, FiniteEntry, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalDim {
    Zero,
    /// A curve through the origin lies in the variety.
    Positive,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EssentialVariety {
    /// Nonzero `R'^{l'}_γ(0, 0, t')` with their labels.
    pub generators: Vec<(Vec<u32>, usize, Series)>,
    pub n_prime: usize,
    pub dim_at_origin: LocalDim,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FiniteWitness {
    /// Least `K` with `m^K ⊂ I + m^{K+1}` from known terms.
    pub nakayama: Option<u32>,
    /// Nonzero univariate polynomials in each `t'_j` from elimination.
    pub univariate: Option<Vec<Series>>,
    /// Parametrized curve `t'(s)` inside the variety.
    pub curve: Option<Vec<Series>>,
}

fn generators_from(sys: &ReflectionSystem, bound: u32) -> Vec<(Vec<u32>, usize, Series)> {
    row_keys(sys, bound)
        .into_iter()
        .filter_map(|(g, l)| {
            let s = sys.at_origin(&g).expect("computed")[l].clone();
            (!s.is_zero()).then_some((g, l, s))
        })
        .collect()
}

/// Least `K ≤ k_max` such that every monomial of degree `K` lies in the span
/// of `x^α g` modulo degree `K + 1`, using only products whose terms up to
/// degree `K` are known. By Nakayama this forces `m^K ⊂ I`.
pub fn nakayama_exponent(gens: &[Series], n: usize, k_max: u32) -> Option<u32> {
    if gens.is_empty() {
        return None;
    }
    for k in 1..=k_max {
        let monos: Vec<Vec<u32>> = multi_indices_upto(n, k);
        let col = |e: &[u32]| monos.binary_search_by(|m| (m.iter().sum::<u32>(), m.as_slice()).cmp(&(e.iter().sum::<u32>(), e))).ok();
        let mut rows: Vec<Vec<Gq>> = Vec::new();
        for g in gens {
            for alpha in multi_indices_upto(n, k) {
                let a: u32 = alpha.iter().sum();
                if a + g.order() < k + 1 {
                    continue;
                }
                let mut row = vec![Gq::zero(); monos.len()];
                for (e, c) in g.terms() {
                    let e32: Vec<u32> = e.iter().zip(&alpha).map(|(&x, &y)| x as u32 + y).collect();
                    if let Some(j) = col(&e32) {
                        row[j] = c.clone();
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let base = rank(&rows);
        for target in multi_indices(n, k) {
            let mut row = vec![Gq::zero(); monos.len()];
            row[col(&target).expect("monomial listed")] = Gq::one();
            rows.push(row);
        }
        if rank(&rows) == base {
            return Some(k);
        }
    }
    None
}

/// A curve `s ↦ t'(s)` with `t'_c = s` along which every generator vanishes
/// at its order, found by solving `n − 1` generators with invertible linear
/// part for the remaining coordinates.
pub fn find_curve(gens: &[Series], n: usize) -> Option<Vec<Series>> {
    let first = gens.first()?;
    let vs = first.vars().clone();
    let order = gens.iter().map(|g| g.order()).min()?;
    let sv = vars(&["s"]);
    for c in 0..n {
        let others: Vec<usize> = (0..n).filter(|&k| k != c).collect();
        let mut chosen: Vec<&Series> = Vec::new();
        let mut rows: Vec<Vec<Gq>> = Vec::new();
        for g in gens {
            let lp = linear_part(g);
            let mut cand = rows.clone();
            cand.push(others.iter().map(|&k| lp[k].clone()).collect());
            if rank(&cand) > rows.len() {
                rows = cand;
                chosen.push(g);
            }
            if chosen.len() == others.len() {
                break;
            }
        }
        if chosen.len() < others.len() {
            continue;
        }
        let names: Vec<&str> = others.iter().map(|&k| vs[k].as_str()).collect();
        let sys: Vec<Series> = chosen.iter().map(|g| g.truncate(order)).collect();
        let sol = if names.is_empty() { Vec::new() } else { implicit_solve(&sys, &names).ok()? };
        let mut curve = vec![Series::var_idx(&sv, 0, order); n];
        for (k, y) in others.iter().zip(sol) {
            curve[*k] = y.rename(&sv);
        }
        if gens.iter().all(|g| g.compose(&curve).map_or(false, |r| r.is_zero())) {
            return Some(curve);
        }
    }
    None
}

pub(crate) fn finite_from(sys: &ReflectionSystem, gamma_bound: u32) -> Result<FiniteEntry> {
    let gens: Vec<Series> = generators_from(sys, gamma_bound).into_iter().map(|g| g.2).collect();
    let n = sys.map.target.n();
    let k_max = gens.iter().map(|g| g.order()).max().unwrap_or(1).saturating_sub(1);
    let mut witness = FiniteWitness { nakayama: nakayama_exponent(&gens, n, k_max), ..Default::default() };
    if n <= 3 && !gens.is_empty() {
        witness.univariate = (0..n).map(|j| eliminate_univariate(&gens, j, &(0..n).collect::<Vec<_>>(), false)).collect::<Option<Vec<_>>>();
    }
    let verdict = if witness.nakayama.is_some() {
        Verdict::True
    } else {
        witness.curve = find_curve(&gens, n);
        if witness.curve.is_some() {
            Verdict::False
        } else {
            Verdict::Inconclusive(gamma_bound)
        }
    };
    Ok(FiniteEntry { verdict, witness })
}

fn variety_from(sys: &ReflectionSystem, gamma_bound: u32) -> EssentialVariety {
    let generators = generators_from(sys, gamma_bound);
    let gens: Vec<Series> = generators.iter().map(|g| g.2.clone()).collect();
    let n_prime = sys.map.target.n();
    let k_max = gens.iter().map(|g| g.order()).max().unwrap_or(1).saturating_sub(1);
    let dim_at_origin = if nakayama_exponent(&gens, n_prime, k_max).is_some() {
        LocalDim::Zero
    } else if find_curve(&gens, n_prime).is_some() || gens.is_empty() {
        LocalDim::Positive
    } else {
        LocalDim::Unknown
    };
    EssentialVariety { generators, n_prime, dim_at_origin }
}

/// Generators `R'_γ(0, 0, t')`, `|γ| ≤ gamma_bound`, of the essential
/// variety at the origin.
pub fn essential_variety(h: &FormalMap, gamma_bound: u32) -> Result<EssentialVariety> {
    check_maps_into(h)?;
    Ok(variety_from(&ReflectionSystem::new(h, gamma_bound)?, gamma_bound))
}

/// Whether the essential variety is zero-dimensional at the origin.
pub fn s_finite(h: &FormalMap, gamma_bound: u32) -> Result<FiniteEntry> {
    check_maps_into(h)?;
    finite_from(&ReflectionSystem::new(h, gamma_bound)?, gamma_bound)
}
