//! Reflection identities: the derived family `R'_γ = 𝓛̄^γ ρ'(t', h̄(τ))`,
//! the Cramer recursion for the ζ'-derivatives of Θ' along a map, and its
//! adjugate variant for rectangular Jacobians.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fps::linalg::{series_adjugate, series_det};
use crate::fps::{join_vars, Gq, Series, Vars};
use crate::manifold::{conj_swap, Blocks, FormalMap, GenericManifold};

/// Multi-indices of length `m` with total degree exactly `k`, in
/// lexicographic order.
pub fn multi_indices(m: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(m: usize, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == m {
            cur.push(k);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=k).rev() {
            cur.push(a);
            rec(m, k - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(m, k, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All multi-indices of length `m` with `|γ| ≤ bound`, by increasing degree.
pub fn multi_indices_upto(m: usize, bound: u32) -> Vec<Vec<u32>> {
    (0..=bound).flat_map(|k| multi_indices(m, k)).collect()
}

/// The jets `∂_τ^α h̄_j` for `|α| ≤ κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetVector {
    pub kappa: u32,
    pub base_vars: Vars,
    pub entries: BTreeMap<(usize, Vec<u32>), Series>,
}

impl JetVector {
    pub fn new(h: &FormalMap, kappa: u32) -> Self {
        let hb = h.h_bar();
        let base_vars = h.source.blocks().tau();
        let n = base_vars.len();
        let mut entries = BTreeMap::new();
        for (j, c) in hb.iter().enumerate() {
            for a in multi_indices_upto(n, kappa) {
                entries.insert((j, a.clone()), c.derive_multi(&a));
            }
        }
        JetVector { kappa, base_vars, entries }
    }

    /// Number of entries, `n'·binom(κ + n, n)`.
    pub fn count(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, j: usize, alpha: &[u32]) -> Option<&Series> {
        self.entries.get(&(j, alpha.to_vec()))
    }

    /// Values of all entries at `τ = 0`.
    pub fn at_origin(&self) -> BTreeMap<(usize, Vec<u32>), Gq> {
        self.entries.iter().map(|(k, s)| (k.clone(), s.constant_term())).collect()
    }
}

/// Variables `(t, τ, t')` of the derived identities.
pub fn r_vars(h: &FormalMap) -> Vars {
    let src = h.source.blocks();
    let tgt = Blocks::primed(h.target.m, h.target.d);
    join_vars(&[&src.ambient(), &tgt.t()])
}

/// Coefficients of `𝓛̄_j` over the variables of [`r_vars`].
pub fn lbar_on_r(h: &FormalMap) -> Result<Vec<Vec<Series>>> {
    let src = &h.source;
    let (m, d, n) = (src.m, src.d, src.n());
    let rv = r_vars(h);
    let order = h.order;
    let theta: Vec<Series> = src.theta.iter().map(|s| s.embed(&rv)).collect::<Result<_>>()?;
    let mi = Gq::from_ints(0, -1);
    Ok((0..m)
        .map(|j| {
            let mut c = vec![Series::zero(&rv, order); rv.len()];
            c[n + j] = Series::one(&rv, order);
            for l in 0..d {
                c[n + m + l] = theta[l].derive_idx(n + j).scale(&mi);
            }
            c
        })
        .collect())
}

/// The derived identities `R'^{l'}_γ` for `|γ| ≤ gamma_bound`.
#[derive(Clone, Debug)]
pub struct ReflectionSystem {
    pub map: FormalMap,
    pub vars: Vars,
    pub gamma_bound: u32,
    pub r: BTreeMap<Vec<u32>, Vec<Series>>,
}

/// `R'_0 = ρ'(t', h̄(τ)) = f̄(τ) − z' + iΘ'(w', ḡ(τ), z')`.
pub fn r_zero(h: &FormalMap) -> Result<Vec<Series>> {
    let rv = r_vars(h);
    let (mp, dp) = (h.target.m, h.target.d);
    let order = h.order;
    let n2 = 2 * h.source.n();
    let hb: Vec<Series> = h.h_bar().iter().map(|s| s.embed(&rv)).collect::<Result<_>>()?;
    let mut sub = Vec::new();
    for a in 0..mp {
        sub.push(Series::var_idx(&rv, n2 + a, order));
    }
    sub.extend(hb[..mp].iter().cloned());
    for l in 0..dp {
        sub.push(Series::var_idx(&rv, n2 + mp + l, order));
    }
    (0..dp)
        .map(|l| {
            let th = h.target.theta[l].compose(&sub)?;
            let zp = Series::var_idx(&rv, n2 + mp + l, order);
            Ok(&(&hb[mp + l] - &zp) + &th.scale(&Gq::i()))
        })
        .collect()
}

impl ReflectionSystem {
    pub fn new(h: &FormalMap, gamma_bound: u32) -> Result<Self> {
        if h.order < gamma_bound + 2 {
            return Err(Error::OrderExhausted(format!("order {} cannot carry {} derivations", h.order, gamma_bound)));
        }
        let m = h.source.m;
        let lbar = lbar_on_r(h)?;
        let mut r: BTreeMap<Vec<u32>, Vec<Series>> = BTreeMap::new();
        r.insert(vec![0; m], r_zero(h)?);
        for g in multi_indices_upto(m, gamma_bound).into_iter().skip(1) {
            let j = g.iter().position(|&x| x > 0).expect("nonzero index");
            let mut prev = g.clone();
            prev[j] -= 1;
            let base = &r[&prev];
            let next: Vec<Series> = base.iter().map(|s| crate::segre::apply_field(&lbar[j], s)).collect::<Result<_>>()?;
            r.insert(g, next);
        }
        Ok(ReflectionSystem { map: h.clone(), vars: r_vars(h), gamma_bound, r })
    }

    pub fn get(&self, gamma: &[u32]) -> Option<&[Series]> {
        self.r.get(gamma).map(|v| v.as_slice())
    }

    /// `R'_γ(0, 0, t')` as series in the target variables `t'`.
    pub fn at_origin(&self, gamma: &[u32]) -> Option<Vec<Series>> {
        let n2 = 2 * self.map.source.n();
        let tp = Blocks::primed(self.map.target.m, self.map.target.d).t();
        self.get(gamma).map(|v| v.iter().map(|s| project_tail(s, n2, &tp)).collect())
    }

    /// Residuals of the identities after `t' := h(t)` on the
    /// complexification, over `(w, ζ, z)`; zero when `h` maps into `M'`.
    pub fn vanishing_residuals(&self) -> Result<BTreeMap<Vec<u32>, Vec<Series>>> {
        let src = &self.map.source;
        let (m, d) = (src.m, src.d);
        let v = src.blocks().theta_vars();
        let order = self.map.order;
        let mut t_sub: Vec<Series> = (0..m).map(|i| Series::var_idx(&v, i, order)).collect();
        t_sub.extend((0..d).map(|l| Series::var_idx(&v, 2 * m + l, order)));
        let mut sub = t_sub.clone();
        sub.extend((0..m).map(|i| Series::var_idx(&v, m + i, order)));
        sub.extend(src.xi_on_m());
        for c in self.map.h() {
            sub.push(c.compose(&t_sub)?);
        }
        self.r.iter().map(|(g, rs)| Ok((g.clone(), rs.iter().map(|s| s.compose(&sub)).collect::<Result<Vec<_>>>()?))).collect()
    }
}

/// Keeps the first `keep` variables, setting the others to zero.
pub(crate) fn project_head(s: &Series, keep: usize, target: &Vars) -> Series {
    let terms = s.terms().iter().filter(|(e, _)| e[keep..].iter().all(|&x| x == 0)).map(|(e, c)| (e[..keep].to_vec(), c.clone()));
    Series::from_terms(target, s.order(), terms)
}

/// Keeps the variables from index `skip` on, setting the others to zero.
pub(crate) fn project_tail(s: &Series, skip: usize, target: &Vars) -> Series {
    let terms = s.terms().iter().filter(|(e, _)| e[..skip].iter().all(|&x| x == 0)).map(|(e, c)| (e[skip..].to_vec(), c.clone()));
    Series::from_terms(target, s.order(), terms)
}

pub fn compute_r(h: &FormalMap, gamma: &[u32]) -> Result<Vec<Series>> {
    let k: u32 = gamma.iter().sum();
    let sys = ReflectionSystem::new(h, k)?;
    Ok(sys.get(gamma).expect("computed").to_vec())
}

fn zeta_exponents(beta: &[u32], m: usize, d: usize) -> Vec<u32> {
    let mut a = vec![0u32; 2 * m + d];
    a[m..2 * m].copy_from_slice(beta);
    a
}

/// `θ̄'_β(w, ζ, ξ) = Θ'_{ζ'^β}(g(w,z), ḡ(ζ,ξ), f(w,z))` with `z := ξ + iΘ̄(ζ,w,ξ)`.
pub fn theta_beta_direct(h: &FormalMap, beta: &[u32]) -> Result<Vec<Series>> {
    let src = &h.source;
    let tgt = &h.target;
    let (m, d) = (src.m, src.d);
    let mp = tgt.m;
    if beta.len() != mp {
        return Err(Error::Dimension(format!("β must have {mp} entries")));
    }
    let v = src.blocks().theta_bar_vars();
    let order = h.order;
    let mut t_sub: Vec<Series> = (0..m).map(|i| Series::var_idx(&v, i, order)).collect();
    t_sub.extend(src.z_on_m());
    let mut tau_sub: Vec<Series> = (0..m).map(|i| Series::var_idx(&v, m + i, order)).collect();
    tau_sub.extend((0..d).map(|l| Series::var_idx(&v, 2 * m + l, order)));
    let hv: Vec<Series> = h.h().iter().map(|s| s.compose(&t_sub)).collect::<Result<_>>()?;
    let hb: Vec<Series> = h.h_bar().iter().map(|s| s.compose(&tau_sub)).collect::<Result<_>>()?;
    let mut sub: Vec<Series> = hv[..mp].to_vec();
    sub.extend(hb[..mp].iter().cloned());
    sub.extend(hv[mp..].iter().cloned());
    let alpha = zeta_exponents(beta, mp, tgt.d);
    tgt.theta.iter().map(|th| th.derive_multi(&alpha).compose(&sub)).collect()
}

/// `θ'_β(w, ζ, z) = Θ̄'_{w'^β}(ḡ(ζ,ξ), g(w,z), f̄(ζ,ξ))` with `ξ := z − iΘ(w,ζ,z)`:
/// the 𝓛-side counterpart of [`theta_beta_direct`].
pub fn theta_beta_conjugate_side(h: &FormalMap, beta: &[u32]) -> Result<Vec<Series>> {
    let src = &h.source;
    let tgt = &h.target;
    let (m, d) = (src.m, src.d);
    let mp = tgt.m;
    let v = src.blocks().theta_vars();
    let order = h.order;
    let mut t_sub: Vec<Series> = (0..m).map(|i| Series::var_idx(&v, i, order)).collect();
    t_sub.extend((0..d).map(|l| Series::var_idx(&v, 2 * m + l, order)));
    let mut tau_sub: Vec<Series> = (0..m).map(|i| Series::var_idx(&v, m + i, order)).collect();
    tau_sub.extend(src.xi_on_m());
    let hv: Vec<Series> = h.h().iter().map(|s| s.compose(&t_sub)).collect::<Result<_>>()?;
    let hb: Vec<Series> = h.h_bar().iter().map(|s| s.compose(&tau_sub)).collect::<Result<_>>()?;
    let mut sub: Vec<Series> = hv[..mp].to_vec();
    sub.extend(hb[..mp].iter().cloned());
    sub.extend(hb[mp..].iter().cloned());
    let mut alpha = vec![0u32; 2 * mp + tgt.d];
    alpha[..mp].copy_from_slice(beta);
    tgt.theta_bar.iter().map(|th| th.derive_multi(&alpha).compose(&sub)).collect()
}

/// Residual of the conjugation relation between the two sides: the
/// conjugate of θ̄'_β, read over `(w, ζ, z)`, minus θ'_β.
pub fn conjugate_reflection_check(h: &FormalMap, beta: &[u32]) -> Result<Vec<Series>> {
    let src = &h.source;
    let tv = src.blocks().theta_vars();
    let direct = theta_beta_direct(h, beta)?;
    let other = theta_beta_conjugate_side(h, beta)?;
    Ok(direct.iter().zip(&other).map(|(a, b)| &conj_swap(a, src.m, &tv) - b).collect())
}

/// Data of the Cramer recursion in the coordinates `(w, ζ, z)` of the
/// complexification, where `𝓛̄_j = ∂/∂ζ_j`.
struct RecursionData {
    /// `i(F̄ − f)` with `F̄ = f̄(ζ, z − iΘ)`.
    theta0: Vec<Series>,
    /// `A_{jk} = ∂_{ζ_j} Ḡ_k` for the selected rows `j`.
    a: Vec<Vec<Series>>,
    rows: Vec<usize>,
    m: usize,
    vars: Vars,
}

fn recursion_data(h: &FormalMap, rows: &[usize]) -> Result<RecursionData> {
    let src = &h.source;
    let (m, d) = (src.m, src.d);
    let mp = h.target.m;
    let v = src.blocks().theta_vars();
    let order = h.order;
    let mut t_sub: Vec<Series> = (0..m).map(|i| Series::var_idx(&v, i, order)).collect();
    t_sub.extend((0..d).map(|l| Series::var_idx(&v, 2 * m + l, order)));
    let mut tau_sub: Vec<Series> = (0..m).map(|i| Series::var_idx(&v, m + i, order)).collect();
    tau_sub.extend(src.xi_on_m());
    let hv: Vec<Series> = h.h().iter().map(|s| s.compose(&t_sub)).collect::<Result<_>>()?;
    let hb: Vec<Series> = h.h_bar().iter().map(|s| s.compose(&tau_sub)).collect::<Result<_>>()?;
    let theta0 = (0..h.target.d).map(|l| (&hb[mp + l] - &hv[mp + l]).scale(&Gq::i())).collect();
    let a = rows.iter().map(|&j| (0..mp).map(|k| hb[k].derive_idx(m + j)).collect()).collect();
    Ok(RecursionData { theta0, a, rows: rows.to_vec(), m, vars: v })
}

/// Numerators `N_β` with `θ_β = N_β / Δ^{2|β|−1}` (and `N_0 = θ_0`),
/// obtained by repeated differentiation and Cramer's rule with the
/// adjugate of the selected square block.
fn recursion_numerators(data: &RecursionData, beta: &[u32]) -> Result<(Vec<Series>, Series)> {
    let order = data.theta0.iter().map(|s| s.order()).min().unwrap_or(0);
    let delta = series_det(&data.a, &data.vars, order);
    let adj = series_adjugate(&data.a, &data.vars, order);
    let mut num = data.theta0.clone();
    let mut e: u32 = 0;
    let mut path = Vec::new();
    for (k, &b) in beta.iter().enumerate() {
        for _ in 0..b {
            path.push(k);
        }
    }
    for &k in &path {
        let next: Vec<Series> = num
            .iter()
            .map(|nl| {
                let mut acc: Option<Series> = None;
                for (r, &j) in data.rows.iter().enumerate() {
                    let dn = nl.derive_idx(data.m + j);
                    let term = if e == 0 {
                        dn
                    } else {
                        let dd = delta.derive_idx(data.m + j);
                        &(&delta * &dn) - &(nl * &dd).scale(&Gq::int(e as i64))
                    };
                    let t = &adj[k][r] * &term;
                    acc = Some(match acc {
                        None => t,
                        Some(a) => &a + &t,
                    });
                }
                acc.unwrap_or_else(|| Series::zero(&data.vars, order))
            })
            .collect();
        num = next;
        e = if e == 0 { 1 } else { e + 2 };
    }
    Ok((num, delta))
}

fn to_theta_bar_coords(src: &GenericManifold, s: &Series) -> Result<Series> {
    let v = src.blocks().theta_bar_vars();
    let order = s.order();
    let mut sub: Vec<Series> = (0..2 * src.m).map(|i| Series::var_idx(&v, i, order)).collect();
    sub.extend(src.z_on_m());
    s.compose(&sub)
}

/// θ̄'_β by the Cramer recursion, requiring `m = m'` and an invertible
/// `det(𝓛̄ḡ)(0)`.
pub fn theta_beta_recursive(h: &FormalMap, beta: &[u32]) -> Result<Vec<Series>> {
    let m = h.source.m;
    if h.target.m != m || h.source.d != h.target.d {
        return Err(Error::Precondition("recursive mode needs equal dimensions".into()));
    }
    let data = recursion_data(h, &(0..m).collect::<Vec<_>>())?;
    let (num, delta) = recursion_numerators(&data, beta)?;
    let k: u32 = beta.iter().sum();
    let e = if k == 0 { 0 } else { 2 * k - 1 };
    let inv = delta.invert_unit().map_err(|_| Error::SingularJacobian)?.pow(e);
    num.iter().map(|n| to_theta_bar_coords(&h.source, &(n * &inv))).collect()
}

/// `Δ̄(w, ζ, ξ) = det(𝓛̄_j ḡ_k)` over a square selection of rows `j` and
/// columns `k`, computed with the ambient 𝓛̄ and then restricted by
/// `z := ξ + iΘ̄(ζ, w, ξ)`.
pub fn delta_det(h: &FormalMap, rows: &[usize], cols: &[usize]) -> Result<Series> {
    let src = &h.source;
    if rows.len() != cols.len() || rows.iter().any(|&j| j >= src.m) || cols.iter().any(|&k| k >= h.target.m) {
        return Err(Error::Dimension("selection is not a square block of 𝓛̄ḡ".into()));
    }
    let fields = crate::segre::build_fields(src)?;
    let amb = src.blocks().ambient();
    let hb: Vec<Series> = h.h_bar().iter().map(|s| s.embed(&amb)).collect::<Result<_>>()?;
    let a: Vec<Vec<Series>> = rows
        .iter()
        .map(|&j| cols.iter().map(|&k| crate::segre::apply_field(&fields.lbar[j], &hb[k])).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let order = a.iter().flatten().map(|s| s.order()).min().unwrap_or(h.order);
    let det = series_det(&a, &amb, order);
    let v = src.blocks().theta_bar_vars();
    let (m, d) = (src.m, src.d);
    let mut sub: Vec<Series> = (0..m).map(|i| Series::var_idx(&v, i, order)).collect();
    sub.extend(src.z_on_m());
    sub.extend((0..m).map(|i| Series::var_idx(&v, m + i, order)));
    sub.extend((0..d).map(|l| Series::var_idx(&v, 2 * m + l, order)));
    det.compose(&sub)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinorVariant {
    /// `Δ̄^{2|β|−1}·θ̄'_β` from the direct substitution.
    pub lhs: Vec<Series>,
    /// The numerator built from 𝓛̄-jets by the adjugate recursion.
    pub rhs: Vec<Series>,
    /// Lexicographically minimal γ with `𝓛̄^γ Δ̄ ≠ 0` at the origin.
    pub gamma_sharp: Vec<u32>,
}

/// Both sides of the adjugate form of the recursion for a square
/// selection of `m'` rows out of `m`.
pub fn minor_variant(h: &FormalMap, beta: &[u32], rows: &[usize]) -> Result<MinorVariant> {
    let (m, mp) = (h.source.m, h.target.m);
    if m < mp || rows.len() != mp || rows.iter().any(|&j| j >= m) {
        return Err(Error::Precondition("selection must pick m' of the m rows".into()));
    }
    let data = recursion_data(h, rows)?;
    let (num, delta) = recursion_numerators(&data, beta)?;
    let k: u32 = beta.iter().sum();
    let e = if k == 0 { 0 } else { 2 * k - 1 };
    let dbar = to_theta_bar_coords(&h.source, &delta)?;
    let direct = theta_beta_direct(h, beta)?;
    let pw = dbar.pow(e);
    let lhs = direct.iter().map(|t| t * &pw).collect();
    let rhs = num.iter().map(|n| to_theta_bar_coords(&h.source, n)).collect::<Result<_>>()?;
    // In (w, ζ, z) coordinates 𝓛̄^γ is ∂_ζ^γ.
    let mut gamma_sharp = None;
    let on_zeta = delta.restrict_zero(&(0..m).chain(2 * m..2 * m + h.source.d).collect::<Vec<_>>());
    for g in multi_indices_upto(m, delta.order().saturating_sub(1)) {
        let mut alpha = vec![0u32; delta.nvars()];
        alpha[m..2 * m].copy_from_slice(&g);
        if !on_zeta.derive_multi(&alpha).constant_term().is_zero() && gamma_sharp.as_ref().map_or(true, |b: &Vec<u32>| g < *b) {
            gamma_sharp = Some(g);
        }
    }
    let gamma_sharp = gamma_sharp.ok_or_else(|| Error::Inconclusive("Δ̄(0, ζ, 0) vanishes to the working order".into()))?;
    Ok(MinorVariant { lhs, rhs, gamma_sharp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn shown(v: &[Series]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn derived_identities_at_origin() {
        let id = corpus::id_quadric(6).unwrap();
        let sys = ReflectionSystem::new(&id, 2).unwrap();
        assert_eq!(shown(&sys.at_origin(&[0]).unwrap()), ["-zp1"]);
        assert_eq!(shown(&sys.at_origin(&[1]).unwrap()), ["1*i*wp1"]);
        let id3 = corpus::id_bidegree(6).unwrap();
        let sys3 = ReflectionSystem::new(&id3, 2).unwrap();
        assert_eq!(shown(&sys3.at_origin(&[1, 1]).unwrap()), ["1*i*wp1*wp2"]);
        for res in sys3.vanishing_residuals().unwrap().values() {
            assert!(res.iter().all(|r| r.is_zero()));
        }
    }

    #[test]
    fn recursion_matches_direct() {
        for id in [corpus::id_quadric(6).unwrap(), corpus::id_bidegree(6).unwrap()] {
            let m = id.source.m;
            for beta in multi_indices_upto(m, 2) {
                let direct = theta_beta_direct(&id, &beta).unwrap();
                let rec = theta_beta_recursive(&id, &beta).unwrap();
                for (a, b) in direct.iter().zip(&rec) {
                    let o = a.order().min(b.order());
                    assert_eq!(a.truncate(o), b.truncate(o), "beta {beta:?}");
                }
                assert!(conjugate_reflection_check(&id, &beta).unwrap().iter().all(|r| r.is_zero()));
            }
        }
    }

    #[test]
    fn delta_and_minor_variant() {
        let id = corpus::id_bidegree(6).unwrap();
        let one = Series::one(&id.source.blocks().theta_bar_vars(), 5);
        assert_eq!(delta_det(&id, &[0, 1], &[0, 1]).unwrap(), one);
        let h = corpus::quadric_embedding(1, 6).unwrap();
        let d = delta_det(&h, &[0], &[0]).unwrap();
        assert_eq!(d.to_string(), "1");
        let mv = minor_variant(&id, &[1, 1], &[0, 1]).unwrap();
        assert_eq!(mv.gamma_sharp, vec![0, 0]);
        for (a, b) in mv.lhs.iter().zip(&mv.rhs) {
            let o = a.order().min(b.order());
            assert_eq!(a.truncate(o), b.truncate(o));
        }
    }

    #[test]
    fn gamma_sharp_for_degenerate_delta() {
        let src = std::sync::Arc::new(corpus::quadric(6).unwrap());
        let flat = std::sync::Arc::new(corpus::levi_flat(6));
        let h = corpus::map("sq", &src, &flat, &["w1^2", "0"]).unwrap();
        assert!(crate::manifold::verify_maps_into(&h).unwrap().iter().all(|r| r.is_zero()));
        let mv = minor_variant(&h, &[1], &[0]).unwrap();
        assert_eq!(mv.gamma_sharp, vec![1]);
        assert!(theta_beta_recursive(&h, &[1]).is_err());
    }
}
