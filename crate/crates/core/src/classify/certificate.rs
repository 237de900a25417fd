//! Explicit certificates: `h` solved from the derived identities, and monic
//! polynomials annihilating its components.

use crate::error::{Error, Result};
use crate::fps::linalg::rank;
use crate::fps::{implicit_solve, Series};
use crate::manifold::{Blocks, FormalMap};
use crate::reflection::ReflectionSystem;

use super::elim::eliminate_univariate;
use super::finite::finite_from;
use super::{check_maps_into, linear_part, row_keys, Verdict};

#[derive(Clone, Debug, PartialEq)]
pub struct SolvabilityCertificate {
    pub kappa0: u32,
    /// The `(γ, l')` equations solved for `t'`.
    pub rows: Vec<(Vec<u32>, usize)>,
    /// `A'_j(t, τ)` over `(w, z, ζ, ξ)`, the jets of `h̄` already inserted.
    pub a: Vec<Series>,
    /// `A'_j − h_j` on the complexification; zero when verified.
    pub residual: Vec<Series>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassCertificate {
    /// `P'_j` over `(t, τ, t')`, involving `t'_j` alone among the target
    /// variables.
    pub p: Vec<Series>,
    pub residual: Vec<Series>,
}

impl WeierstrassCertificate {
    /// Coefficients `A'_{j,k}(t, τ)` of `P'_j` by increasing power of `t'_j`.
    pub fn coefficients(&self, j: usize, h: &FormalMap) -> Vec<Series> {
        let n2 = 2 * h.source.n();
        let amb = h.source.blocks().ambient();
        let p = &self.p[j];
        (0..=p.degree_in(n2 + j))
            .map(|k| {
                let terms = p.terms().iter().filter(|(e, _)| e[n2 + j] as u32 == k).map(|(e, c)| (e[..n2].to_vec(), c.clone()));
                Series::from_terms(&amb, p.order(), terms)
            })
            .collect()
    }
}

/// Substitution of the ambient variables `(w, z, ζ, ξ)` onto the
/// complexification, parametrized by `(w, ζ, z)`.
pub(crate) fn ambient_on_m(h: &FormalMap) -> Vec<Series> {
    let src = &h.source;
    let (m, d) = (src.m, src.d);
    let v = src.blocks().theta_vars();
    let order = h.order;
    let mut sub: Vec<Series> = (0..m).map(|i| Series::var_idx(&v, i, order)).collect();
    sub.extend((0..d).map(|l| Series::var_idx(&v, 2 * m + l, order)));
    sub.extend((0..m).map(|i| Series::var_idx(&v, m + i, order)));
    sub.extend(src.xi_on_m());
    sub
}

/// `h_j(w, z)` over `(w, ζ, z)`.
pub(crate) fn h_on_m(h: &FormalMap) -> Result<Vec<Series>> {
    let sub = ambient_on_m(h);
    let t_sub = [&sub[..h.source.m], &sub[h.source.m..h.source.n()]].concat();
    h.h().iter().map(|c| c.compose(&t_sub)).collect()
}

/// Solves `n'` of the equations `R'_γ = 0`, `|γ| ≤ κ₀`, for `t'` and checks
/// that the solution reproduces `h` on the complexification.
pub fn solvability_certificate(h: &FormalMap, kappa0: u32) -> Result<SolvabilityCertificate> {
    check_maps_into(h)?;
    let sys = ReflectionSystem::new(h, kappa0)?;
    let np = h.target.n();
    let mut rows = Vec::new();
    let mut lin = Vec::new();
    for (g, l) in row_keys(&sys, kappa0) {
        let mut cand = lin.clone();
        cand.push(linear_part(&sys.at_origin(&g).expect("computed")[l]));
        if rank(&cand) > lin.len() {
            lin = cand;
            rows.push((g, l));
        }
        if rows.len() == np {
            break;
        }
    }
    if rows.len() < np {
        return Err(Error::Precondition(format!("jet map of {} is not an immersion at order {kappa0}", h.name)));
    }
    let f: Vec<Series> = rows.iter().map(|(g, l)| sys.get(g).expect("computed")[*l].clone()).collect();
    let tp = Blocks::primed(h.target.m, h.target.d).t();
    let names: Vec<&str> = tp.iter().map(|s| s.as_str()).collect();
    let a = implicit_solve(&f, &names)?;
    let sub = ambient_on_m(h);
    let hm = h_on_m(h)?;
    let residual = a.iter().zip(&hm).map(|(aj, hj)| Ok(&aj.compose(&sub)? - hj)).collect::<Result<Vec<_>>>()?;
    if residual.iter().any(|r| !r.is_zero()) {
        return Err(Error::Verification(format!("solved jets of {} differ from h", h.name)));
    }
    Ok(SolvabilityCertificate { kappa0, rows, a, residual })
}

/// Checks `P'_j(t, τ, h_j(t)) ≡ 0` on the complexification for polynomials
/// given over `(t, τ, t')`.
pub fn weierstrass_certificate(h: &FormalMap, p: Vec<Series>) -> Result<WeierstrassCertificate> {
    let np = h.target.n();
    let n2 = 2 * h.source.n();
    if p.len() != np {
        return Err(Error::Dimension(format!("{} polynomials for {np} target coordinates", p.len())));
    }
    let mut sub = ambient_on_m(h);
    sub.extend(h_on_m(h)?);
    let mut residual = Vec::new();
    for (j, pj) in p.iter().enumerate() {
        if (0..np).any(|k| k != j && pj.degree_in(n2 + k) > 0) {
            return Err(Error::Precondition(format!("P{} involves other target variables", j + 1)));
        }
        residual.push(pj.compose(&sub)?);
    }
    if let Some(j) = residual.iter().position(|r| !r.is_zero()) {
        return Err(Error::Verification(format!("P{} does not vanish at h", j + 1)));
    }
    Ok(WeierstrassCertificate { p, residual })
}

/// Monic polynomials for `h` obtained by eliminating the other target
/// variables from the `R'_γ`, `|γ| ≤ gamma_bound`, then verified.
pub fn weierstrass_derive(h: &FormalMap, gamma_bound: u32) -> Result<WeierstrassCertificate> {
    check_maps_into(h)?;
    let np = h.target.n();
    if np > 3 {
        return Err(Error::Inconclusive(format!("elimination is limited to n' <= 3, got {np}")));
    }
    let sys = ReflectionSystem::new(h, gamma_bound)?;
    if finite_from(&sys, gamma_bound)?.verdict != Verdict::True {
        return Err(Error::Precondition(format!("{} is not known to be S-finite", h.name)));
    }
    let gens: Vec<Series> = sys.r.values().flatten().filter(|s| !s.is_zero()).cloned().collect();
    let n2 = 2 * h.source.n();
    let unknowns: Vec<usize> = (n2..n2 + np).collect();
    let p = (0..np)
        .map(|j| eliminate_univariate(&gens, n2 + j, &unknowns, true).ok_or_else(|| Error::Verification(format!("no monic polynomial in t'{}", j + 1))))
        .collect::<Result<Vec<_>>>()?;
    weierstrass_certificate(h, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fps::Gq;
    use crate::reflection::r_vars;

    #[test]
    fn solved_jets_reproduce_h() {
        let h = corpus::id_quadric(8).unwrap();
        let c = solvability_certificate(&h, 1).unwrap();
        assert_eq!(c.rows, vec![(vec![0], 0), (vec![1], 0)]);
        assert!(solvability_certificate(&corpus::quadric_embedding(2, 8).unwrap(), 6).is_err());
    }

    #[test]
    fn degree_one_polynomials_from_solution() {
        let h = corpus::id_quadric(8).unwrap();
        let c = solvability_certificate(&h, 1).unwrap();
        let rv = r_vars(&h);
        let p: Vec<Series> = c.a.iter().enumerate().map(|(j, a)| &Series::var_idx(&rv, 4 + j, a.order()) - &a.embed(&rv).unwrap()).collect();
        assert!(weierstrass_certificate(&h, p.clone()).is_ok());
        let mut bad = p;
        bad[0] = &bad[0] + &Series::constant(&rv, 8, Gq::one());
        assert!(matches!(weierstrass_certificate(&h, bad), Err(Error::Verification(_))));
    }

    #[test]
    fn eliminated_polynomials_for_finite_map() {
        let h = corpus::quartic_embedding(8).unwrap();
        let w = weierstrass_derive(&h, 4).unwrap();
        assert!(w.residual.iter().all(|r| r.is_zero()));
        let degs: Vec<u32> = (0..3).map(|j| w.p[j].degree_in(4 + j)).collect();
        assert_eq!(degs, vec![2, 2, 1]);
    }
}
