//! Nondegeneracy conditions for formal maps and manifolds: S-solvability,
//! S-finiteness and S-nondegeneracy, with witnesses and audits.

mod certificate;
mod elim;
mod finite;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fps::linalg::{combinations, rank, series_det};
use crate::fps::{Gq, Series, Vars};
use crate::manifold::{verify_maps_into, verify_normal, Blocks, FormalMap, GenericManifold};
use crate::reflection::{multi_indices_upto, ReflectionSystem};

pub(crate) use certificate::{ambient_on_m, h_on_m};
pub use certificate::{solvability_certificate, weierstrass_certificate, weierstrass_derive, SolvabilityCertificate, WeierstrassCertificate};
pub use elim::resultant;
pub use finite::{essential_variety, find_curve, nakayama_exponent, s_finite, EssentialVariety, FiniteWitness, LocalDim};

/// Outcome of one bounded test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    /// No witness within the given bound.
    FalseUpTo(u32),
    /// Neither certificate found within the given bound.
    Inconclusive(u32),
}

impl Verdict {
    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::True)
    }

    pub fn is_definite(&self) -> bool {
        matches!(self, Verdict::True | Verdict::False)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => write!(f, "true"),
            Verdict::False => write!(f, "false"),
            Verdict::FalseUpTo(b) => write!(f, "false-up-to({b})"),
            Verdict::Inconclusive(b) => write!(f, "inconclusive({b})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub kappa_max: u32,
    pub gamma_bound: u32,
    pub beta_bound: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { kappa_max: 6, gamma_bound: 4, beta_bound: 4 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolvableEntry {
    pub verdict: Verdict,
    pub kappa0: Option<u32>,
    /// Rank of the stacked linear parts at each κ.
    pub ranks: Vec<usize>,
}

/// A nonvanishing determinant: the chosen rows and its lowest term.
#[derive(Clone, Debug, PartialEq)]
pub struct NondegWitness {
    /// Multi-indices `γ_j` (or `β_j` for the manifold test).
    pub indices: Vec<Vec<u32>>,
    /// Component choices `l'_j`, zero-based.
    pub components: Vec<usize>,
    pub det: Series,
    pub leading: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NondegEntry {
    pub verdict: Verdict,
    pub witness: Option<NondegWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteEntry {
    pub verdict: Verdict,
    pub witness: FiniteWitness,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub subject: String,
    pub solvable: SolvableEntry,
    pub finite: FiniteEntry,
    pub nondeg: NondegEntry,
    /// The manifold-level determinant test, for manifold reports.
    pub nondeg_manifold: Option<NondegEntry>,
    pub order_used: u32,
    pub bounds: Bounds,
    pub audit_ok: bool,
}

impl ClassificationReport {
    /// True when the two S-nondegeneracy routes give the same verdict.
    pub fn routes_agree(&self) -> bool {
        self.nondeg_manifold.as_ref().map_or(true, |e| e.verdict.is_true() == self.nondeg.verdict.is_true())
    }

    pub fn all_inconclusive(&self) -> bool {
        [&self.solvable.verdict, &self.finite.verdict, &self.nondeg.verdict].iter().all(|v| matches!(v, Verdict::Inconclusive(_)))
    }
}

/// Checks the one-way implications solvable ⇒ finite ⇒ nondegenerate on
/// definite flags only.
pub fn implication_audit(report: &ClassificationReport) -> bool {
    audit_flags(&report.solvable.verdict, &report.finite.verdict, &report.nondeg.verdict, report.nondeg_manifold.is_some())
}

/// The audit on bare flags; the second implication is only checked for
/// manifolds (identity maps).
pub fn audit_flags(solvable: &Verdict, finite: &Verdict, nondeg: &Verdict, manifold: bool) -> bool {
    let implies = |a: &Verdict, b: &Verdict| !(a == &Verdict::True && b == &Verdict::False);
    implies(solvable, finite) && (!manifold || (implies(finite, nondeg) && implies(solvable, nondeg)))
}

pub(crate) fn check_maps_into(h: &FormalMap) -> Result<()> {
    if verify_maps_into(h)?.iter().any(|s| !s.is_zero()) {
        return Err(Error::Precondition(format!("{} does not map {} into {}", h.name, h.source.name, h.target.name)));
    }
    Ok(())
}

/// Rows `(γ, l')` in search order.
pub(crate) fn row_keys(sys: &ReflectionSystem, bound: u32) -> Vec<(Vec<u32>, usize)> {
    let dp = sys.map.target.d;
    multi_indices_upto(sys.map.source.m, bound).into_iter().flat_map(|g| (0..dp).map(move |l| (g.clone(), l))).collect()
}

/// Constant gradient in `t'` of `R'_γ(0, 0, t')`.
pub(crate) fn linear_part(s: &Series) -> Vec<Gq> {
    (0..s.nvars())
        .map(|k| {
            let mut e = vec![0u8; s.nvars()];
            e[k] = 1;
            s.coeff(&e)
        })
        .collect()
}

fn solvable_from(sys: &ReflectionSystem, kappa_max: u32) -> SolvableEntry {
    let np = sys.map.target.n();
    let mut rows = Vec::new();
    let mut ranks = Vec::new();
    for kappa in 0..=kappa_max {
        for (g, l) in row_keys(sys, kappa_max) {
            if g.iter().sum::<u32>() == kappa {
                rows.push(linear_part(&sys.at_origin(&g).expect("computed")[l]));
            }
        }
        let r = rank(&rows);
        ranks.push(r);
        if r == np {
            return SolvableEntry { verdict: Verdict::True, kappa0: Some(kappa), ranks };
        }
    }
    SolvableEntry { verdict: Verdict::FalseUpTo(kappa_max), kappa0: None, ranks }
}

/// Least `κ₀ ≤ kappa_max` for which the jet map at the origin is an
/// immersion.
pub fn s_solvable(h: &FormalMap, kappa_max: u32) -> Result<SolvableEntry> {
    check_maps_into(h)?;
    Ok(solvable_from(&ReflectionSystem::new(h, kappa_max)?, kappa_max))
}

fn leading_string(det: &Series) -> String {
    match det.leading_term() {
        Some((m, c)) => Series::monomial(det.vars(), det.order(), m, c).to_string(),
        None => "0".into(),
    }
}

/// Searches `n`-subsets of the candidate rows by increasing total weight
/// for a determinant that is not zero at its order.
fn det_search(rows: &[(Vec<u32>, usize, Vec<Series>)], n: usize, vars: &Vars) -> Option<NondegWitness> {
    let live: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].2.iter().any(|e| !e.is_zero())).collect();
    let mut subsets = combinations(live.len(), n);
    let weight = |s: &Vec<usize>| s.iter().map(|&i| rows[live[i]].0.iter().sum::<u32>()).sum::<u32>();
    subsets.sort_by_key(|s| (weight(s), s.clone()));
    for s in subsets {
        let m: Vec<Vec<Series>> = s.iter().map(|&i| rows[live[i]].2.clone()).collect();
        let order = m.iter().flatten().map(|e| e.order()).min().unwrap_or(0);
        let det = series_det(&m, vars, order);
        if !det.is_zero() {
            return Some(NondegWitness {
                indices: s.iter().map(|&i| rows[live[i]].0.clone()).collect(),
                components: s.iter().map(|&i| rows[live[i]].1).collect(),
                leading: leading_string(&det),
                det,
            });
        }
    }
    None
}

fn require_normal(mf: &GenericManifold) -> Result<()> {
    if !verify_normal(mf) {
        return Err(Error::NotNormal);
    }
    Ok(())
}

fn nondeg_from(sys: &ReflectionSystem, gamma_bound: u32) -> Result<NondegEntry> {
    let h = &sys.map;
    let src = &h.source;
    let m = src.m;
    let np = h.target.n();
    let wv: Vars = Blocks::new(m, src.d).w;
    let order = h.order;
    let mut on_segre: Vec<Series> = (0..m).map(|i| Series::var_idx(&wv, i, order)).collect();
    on_segre.extend((0..src.d).map(|_| Series::zero(&wv, order)));
    let hw: Vec<Series> = h.h().iter().map(|c| c.compose(&on_segre)).collect::<Result<_>>()?;
    let mut sub = on_segre.clone();
    sub.extend((0..src.n()).map(|_| Series::zero(&wv, order)));
    sub.extend(hw);
    let n2 = 2 * src.n();
    let mut rows = Vec::new();
    for (g, l) in row_keys(sys, gamma_bound) {
        let r = &sys.get(&g).expect("computed")[l];
        let grad = (0..np).map(|k| r.derive_idx(n2 + k).compose(&sub)).collect::<Result<Vec<_>>>()?;
        rows.push((g, l, grad));
    }
    Ok(match det_search(&rows, np, &wv) {
        Some(w) => NondegEntry { verdict: Verdict::True, witness: Some(w) },
        None => NondegEntry { verdict: Verdict::FalseUpTo(gamma_bound), witness: None },
    })
}

/// S-nondegeneracy of a map: a nonvanishing determinant of `t'`-gradients
/// of the `R'_γ` along the Segre variety `t = (w, 0)`.
pub fn s_nondegenerate_map(h: &FormalMap, gamma_bound: u32) -> Result<NondegEntry> {
    check_maps_into(h)?;
    require_normal(&h.source)?;
    nondeg_from(&ReflectionSystem::new(h, gamma_bound)?, gamma_bound)
}

/// S-nondegeneracy of a manifold from `det(∂_w Θ^{l_i}_{ζ^{β_i}}(w,0,0))`.
pub fn s_nondegenerate_manifold(mf: &GenericManifold, beta_bound: u32) -> Result<NondegEntry> {
    require_normal(mf)?;
    let (m, d) = (mf.m, mf.d);
    let wv: Vars = Blocks::new(m, d).w;
    let zero: Vec<usize> = (m..2 * m + d).collect();
    let mut rows = Vec::new();
    for beta in multi_indices_upto(m, beta_bound).into_iter().skip(1) {
        let mut alpha = vec![0u32; 2 * m + d];
        alpha[m..2 * m].copy_from_slice(&beta);
        for l in 0..d {
            let th = mf.theta[l].derive_multi(&alpha).restrict_zero(&zero);
            let th = crate::reflection::project_head(&th, m, &wv);
            rows.push((beta.clone(), l, (0..m).map(|j| th.derive_idx(j)).collect()));
        }
    }
    Ok(match det_search(&rows, m, &wv) {
        Some(w) => NondegEntry { verdict: Verdict::True, witness: Some(w) },
        None => NondegEntry { verdict: Verdict::FalseUpTo(beta_bound), witness: None },
    })
}

/// All three tests on one map, sharing a single derived system.
pub fn classify_map(h: &FormalMap, bounds: Bounds) -> Result<ClassificationReport> {
    check_maps_into(h)?;
    require_normal(&h.source)?;
    let top = bounds.kappa_max.max(bounds.gamma_bound);
    let sys = ReflectionSystem::new(h, top)?;
    let solvable = solvable_from(&sys, bounds.kappa_max);
    let finite = finite::finite_from(&sys, bounds.gamma_bound)?;
    let nondeg = nondeg_from(&sys, bounds.gamma_bound)?;
    let mut report = ClassificationReport {
        subject: h.name.clone(),
        solvable,
        finite,
        nondeg,
        nondeg_manifold: None,
        order_used: h.order,
        bounds,
        audit_ok: true,
    };
    report.audit_ok = implication_audit(&report);
    Ok(report)
}

/// Finite nondegeneracy, essential finiteness and S-nondegeneracy of `M`
/// at 0 through its identity map, with the manifold-level determinant as a
/// second route.
pub fn manifold_classify(mf: &GenericManifold, bounds: Bounds) -> Result<ClassificationReport> {
    require_normal(mf)?;
    let id = FormalMap::identity(Arc::new(mf.clone()));
    let mut report = classify_map(&id, bounds)?;
    report.subject = mf.name.clone();
    report.nondeg_manifold = Some(s_nondegenerate_manifold(mf, bounds.beta_bound)?);
    report.audit_ok = implication_audit(&report) && report.routes_agree();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn solvability_on_corpus() {
        let e = s_solvable(&corpus::id_quadric(8).unwrap(), 6).unwrap();
        assert_eq!((e.verdict, e.kappa0), (Verdict::True, Some(1)));
        let e = s_solvable(&corpus::quadric_embedding(2, 8).unwrap(), 6).unwrap();
        assert_eq!(e.verdict, Verdict::FalseUpTo(6));
    }

    #[test]
    fn nondegeneracy_witnesses() {
        let e = s_nondegenerate_map(&corpus::id_quadric(8).unwrap(), 4).unwrap();
        let w = e.witness.unwrap();
        assert_eq!(w.indices, vec![vec![0], vec![1]]);
        assert!(w.det.degree() == Some(0));
        let e = s_nondegenerate_map(&corpus::id_bidegree(8).unwrap(), 4).unwrap();
        let w = e.witness.unwrap();
        assert_eq!(w.indices, vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        assert_eq!(w.det.valuation(), Some(1));
        let e = s_nondegenerate_map(&corpus::quartic_embedding(8).unwrap(), 4).unwrap();
        assert_eq!(e.verdict, Verdict::FalseUpTo(4));
    }

    #[test]
    fn manifold_determinants() {
        let e = s_nondegenerate_manifold(&corpus::quadric(8).unwrap(), 4).unwrap();
        assert_eq!(e.witness.unwrap().leading, "1");
        let e = s_nondegenerate_manifold(&corpus::bidegree(8).unwrap(), 4).unwrap();
        let w = e.witness.unwrap();
        assert_eq!(w.indices, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(w.leading, "w1");
        let e = s_nondegenerate_manifold(&corpus::rational_graph(8).unwrap(), 4).unwrap();
        assert_eq!(e.verdict, Verdict::FalseUpTo(4));
    }

    #[test]
    fn manifold_reports() {
        let flags = |r: &ClassificationReport| (r.solvable.verdict.is_true(), r.finite.verdict.is_true(), r.nondeg.verdict.is_true());
        let r = manifold_classify(&corpus::quadric(8).unwrap(), Bounds::default()).unwrap();
        assert_eq!(flags(&r), (true, true, true));
        assert!(r.audit_ok);
        let r = manifold_classify(&corpus::bidegree(8).unwrap(), Bounds::default()).unwrap();
        assert_eq!(flags(&r), (false, false, true));
        assert_eq!(r.finite.verdict, Verdict::False);
        assert!(r.audit_ok);
        let r = manifold_classify(&corpus::levi_flat(8), Bounds::default()).unwrap();
        assert_eq!(flags(&r), (false, false, false));
        assert!(r.audit_ok);
    }

    #[test]
    fn audit_rejects_broken_implication() {
        assert!(audit_flags(&Verdict::True, &Verdict::True, &Verdict::True, true));
        assert!(!audit_flags(&Verdict::True, &Verdict::False, &Verdict::True, false));
        assert!(audit_flags(&Verdict::True, &Verdict::Inconclusive(4), &Verdict::FalseUpTo(4), true));
    }
}
