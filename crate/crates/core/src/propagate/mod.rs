//! Fundamental identity systems along Segre chains, the jet tables they
//! determine, and the lifting and determination experiments built on them.
//!
//! Jets of the conjugate map enter the systems through explicit slot
//! variables `J_{k,α} = ∂^α h̄_k(τ) − ∂^α h̄_k(0)`, so the same series can be
//! evaluated on any chain once the jets there are known.

pub mod artin;
pub mod solvable;
pub mod table;

use std::collections::BTreeMap;

use crate::classify::ClassificationReport;
use crate::error::{Error, Result};
use crate::fps::linalg::series_det;
use crate::fps::{join_vars, vars, Gq, Series, Vars};
use crate::manifold::{Blocks, FormalMap, GenericManifold};
use crate::reflection::{multi_indices_upto, r_vars, ReflectionSystem};
use crate::segre::{apply_field, chain_map, origin, upsilon_bar_flow_closed, upsilon_flow_closed, ChainWord, Start};

pub use artin::{
    artin_hypothesis_check, determination_experiment, launch_system, monic_lift, quadric_automorphisms, ArtinOutcome, DeterminationBound,
    DeterminationContext, PolyX, Trial,
};
pub use solvable::iterate_solvable;
pub use table::{direct_table, origin_table, propagate_jets, solve_adjugate, step1_solve_jets, step2_transfer, ChainJetTable};

/// Shifted jet slots of order `κ` for `n'` components in `n` arguments.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSlots {
    pub kappa: u32,
    pub n: usize,
    pub keys: Vec<(usize, Vec<u32>)>,
    pub names: Vec<String>,
    /// `∂^α h̄_k(0)` for each key.
    pub base: Vec<Gq>,
}

impl JetSlots {
    pub fn new(h: &FormalMap, kappa: u32) -> Self {
        let n = h.source.n();
        let mut keys = Vec::new();
        let mut names = Vec::new();
        let mut base = Vec::new();
        for (k, c) in h.h_bar().iter().enumerate() {
            for a in multi_indices_upto(n, kappa) {
                let idx: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                names.push(format!("jb{}_{}", k + 1, idx.join("_")));
                base.push(c.derive_multi(&a).constant_term());
                keys.push((k, a));
            }
        }
        JetSlots { kappa, n, keys, names, base }
    }

    pub fn index(&self, k: usize, alpha: &[u32]) -> Option<usize> {
        self.keys.iter().position(|(j, a)| *j == k && a.as_slice() == alpha)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Slot values `jet(k, α) − base`, for either side.
    pub fn values<F>(&self, base: &[Gq], mut jet: F) -> Result<Vec<Series>>
    where
        F: FnMut(usize, &[u32]) -> Result<Series>,
    {
        self.keys
            .iter()
            .zip(base)
            .map(|((k, a), c)| {
                let v = jet(*k, a)?;
                let one = Series::one(v.vars(), v.order());
                Ok(&v - &one.scale(c))
            })
            .collect()
    }

    pub fn conj_base(&self) -> Vec<Gq> {
        self.base.iter().map(|c| c.conj()).collect()
    }
}

/// The derived identities over `(t, τ, t', J)` with jets held in slots.
#[derive(Clone, Debug)]
pub struct SymbolicReflection {
    pub vars: Vars,
    pub slots: JetSlots,
    pub r: BTreeMap<Vec<u32>, Vec<Series>>,
}

/// Total derivatives `D_j = 𝓛̄_j` extended to the slots: a slot of order
/// below `κ` moves to its successors, the top slots are left fixed.
pub(crate) fn slot_fields(mf: &GenericManifold, ext: &Vars, slots: &JetSlots, offset: usize, order: u32) -> Result<Vec<Vec<Series>>> {
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let theta: Vec<Series> = mf.theta.iter().map(|s| s.embed(ext)).collect::<Result<_>>()?;
    let mi = Gq::from_ints(0, -1);
    let full = |i: usize| -> Series {
        let v = Series::var_idx(ext, offset + i, order);
        &v + &Series::one(ext, order).scale(&slots.base[i])
    };
    let mut out = Vec::new();
    for j in 0..m {
        let mut c = vec![Series::zero(ext, order); ext.len()];
        c[n + j] = Series::one(ext, order);
        let dxi: Vec<Series> = (0..d).map(|l| theta[l].derive_idx(n + j).scale(&mi)).collect();
        for l in 0..d {
            c[n + m + l] = dxi[l].clone();
        }
        for (i, (k, a)) in slots.keys.iter().enumerate() {
            if a.iter().sum::<u32>() >= slots.kappa {
                continue;
            }
            let mut aj = a.clone();
            aj[j] += 1;
            let mut acc = full(slots.index(*k, &aj).expect("slot below top order"));
            for (l, dx) in dxi.iter().enumerate() {
                let mut al = a.clone();
                al[m + l] += 1;
                acc = &acc + &(dx * &full(slots.index(*k, &al).expect("slot below top order")));
            }
            c[offset + i] = acc;
        }
        out.push(c);
    }
    Ok(out)
}

/// `R'_γ` for `|γ| ≤ gamma_bound` over `(t, τ, t', J)` with slots of
/// order `slot_kappa ≥ gamma_bound`.
pub fn symbolic_reflection(h: &FormalMap, gamma_bound: u32, slot_kappa: u32) -> Result<SymbolicReflection> {
    if slot_kappa < gamma_bound {
        return Err(Error::Precondition(format!("slots of order {slot_kappa} cannot carry {gamma_bound} derivations")));
    }
    let slots = JetSlots::new(h, slot_kappa);
    let rv = r_vars(h);
    let ext = join_vars(&[&rv, &vars(&slots.names)]);
    let order = h.order;
    let (mp, dp) = (h.target.m, h.target.d);
    let n2 = 2 * h.source.n();
    let off = rv.len();
    let hb: Vec<Series> = (0..mp + dp)
        .map(|k| {
            let i = slots.index(k, &vec![0; h.source.n()]).expect("zeroth slot");
            &Series::var_idx(&ext, off + i, order) + &Series::one(&ext, order).scale(&slots.base[i])
        })
        .collect();
    let mut sub: Vec<Series> = (0..mp).map(|a| Series::var_idx(&ext, n2 + a, order)).collect();
    sub.extend(hb[..mp].iter().cloned());
    sub.extend((0..dp).map(|l| Series::var_idx(&ext, n2 + mp + l, order)));
    let r0: Vec<Series> = (0..dp)
        .map(|l| {
            let th = h.target.theta[l].compose(&sub)?;
            Ok(&(&hb[mp + l] - &Series::var_idx(&ext, n2 + mp + l, order)) + &th.scale(&Gq::i()))
        })
        .collect::<Result<_>>()?;
    let fields = slot_fields(&h.source, &ext, &slots, off, order)?;
    let m = h.source.m;
    let mut r = BTreeMap::new();
    r.insert(vec![0; m], r0);
    for g in multi_indices_upto(m, gamma_bound).into_iter().skip(1) {
        let j = g.iter().position(|&x| x > 0).expect("nonzero index");
        let mut prev = g.clone();
        prev[j] -= 1;
        let next = r[&prev].iter().map(|s| apply_field(&fields[j], s)).collect::<Result<Vec<_>>>()?;
        r.insert(g, next);
    }
    Ok(SymbolicReflection { vars: ext, slots, r })
}

/// Which half of a chain point a computation is about: `T` for `h` on the
/// `t` side, `Tau` for `h̄` on the `τ` side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    T,
    Tau,
}

impl Side {
    /// The side moved by the last step of an 𝓛-first chain of length `k`.
    pub fn of_step(k: usize) -> Side {
        if k % 2 == 1 {
            Side::T
        } else {
            Side::Tau
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::T => Side::Tau,
            Side::Tau => Side::T,
        }
    }

    /// Offset of this side's block in a `2n` point.
    pub fn offset(self, n: usize) -> usize {
        match self {
            Side::T => 0,
            Side::Tau => n,
        }
    }
}

/// A fundamental system `𝓧'(t, τ, t', J) = 0` extracted from the derived
/// identities, with the rows of its nondegenerate Jacobian.
#[derive(Clone, Debug)]
pub struct FundamentalSystem {
    pub map: FormalMap,
    pub kappa0: u32,
    pub witness_rows: Vec<(Vec<u32>, usize)>,
    pub slots: JetSlots,
    pub vars: Vars,
    pub x: Vec<Series>,
    /// `det ∂𝓧'/∂t'` at `t = (w, 0)`, `τ = 0`, `t' = h(w, 0)`, over `w`.
    pub det: Series,
}

impl FundamentalSystem {
    /// Packages the given rows and re-verifies them: the slot form against
    /// the direct identities, vanishing on the complexification, and the
    /// determinant along the Segre variety.
    pub fn from_rows(h: &FormalMap, rows: &[(Vec<u32>, usize)]) -> Result<Self> {
        let np = h.target.n();
        if rows.len() != np {
            return Err(Error::Dimension(format!("{} rows for {} target coordinates", rows.len(), np)));
        }
        let kappa0 = rows.iter().map(|(g, _)| g.iter().sum::<u32>()).max().unwrap_or(0);
        let sym = symbolic_reflection(h, kappa0, kappa0)?;
        let x: Vec<Series> = rows
            .iter()
            .map(|(g, l)| sym.r.get(g).and_then(|v| v.get(*l)).cloned().ok_or_else(|| Error::Dimension(format!("no identity for {g:?}, {l}"))))
            .collect::<Result<_>>()?;
        let sys = FundamentalSystem { map: h.clone(), kappa0, witness_rows: rows.to_vec(), slots: sym.slots, vars: sym.vars, x, det: Series::zero(&vars::<&str>(&[]), 0) };
        let direct = ReflectionSystem::new(h, kappa0)?;
        let filled = sys.fill_symbolic(h)?;
        for ((g, l), f) in rows.iter().zip(&filled) {
            let d = &direct.get(g).expect("computed")[*l];
            let ord = f.order().min(d.order());
            if f.truncate(ord) != d.truncate(ord) {
                return Err(Error::Verification(format!("slot form of row ({g:?}, {l}) disagrees with the direct identity")));
            }
        }
        if let Some(r) = sys.residual_on_m(h)?.into_iter().find(|r| !r.is_zero()) {
            return Err(Error::Verification(format!("system does not vanish on the complexification: {r}")));
        }
        let det = sys.segre_det()?;
        if det.is_zero() {
            return Err(Error::Verification(format!("determinant vanishes along the Segre variety mod order {}", det.order())));
        }
        Ok(FundamentalSystem { det, ..sys })
    }

    fn n(&self) -> usize {
        self.map.source.n()
    }

    /// 𝓧' with the slots replaced by the jets of `h̄`, over `(t, τ, t')`.
    fn fill_symbolic(&self, h: &FormalMap) -> Result<Vec<Series>> {
        let rv = r_vars(h);
        let order = h.order;
        let hb: Vec<Series> = h.h_bar().iter().map(|s| s.embed(&rv)).collect::<Result<_>>()?;
        let n = self.n();
        let mut sub: Vec<Series> = (0..rv.len()).map(|i| Series::var_idx(&rv, i, order)).collect();
        let vals = self.slots.values(&self.slots.base, |k, a| {
            let mut e = vec![0u32; rv.len()];
            e[n..2 * n].copy_from_slice(a);
            Ok(hb[k].derive_multi(&e))
        })?;
        sub.extend(vals);
        self.x.iter().map(|s| s.compose(&sub)).collect()
    }

    /// 𝓧' at `(t, τ, h(t), J(τ))` on the complexification, over `(w, ζ, z)`.
    pub fn residual_on_m(&self, h: &FormalMap) -> Result<Vec<Series>> {
        let amb = crate::classify::ambient_on_m(h);
        let n = self.n();
        let hm = crate::classify::h_on_m(h)?;
        let tau = &amb[n..];
        let hb = h.h_bar();
        let slots = self.slots.values(&self.slots.base, |k, a| hb[k].derive_multi(a).compose(tau))?;
        self.eval(Side::T, &self.x, &amb, &hm, &slots)
    }

    /// `det ∂𝓧'/∂t'` at `t = (w, 0)`, `τ = 0`, `t' = h(w, 0)`, jets of `h̄`
    /// at the origin.
    pub fn segre_det(&self) -> Result<Series> {
        let src = &self.map.source;
        let wv: Vars = Blocks::new(src.m, src.d).w;
        let order = self.map.order;
        let n = self.n();
        let mut pt: Vec<Series> = (0..src.m).map(|i| Series::var_idx(&wv, i, order)).collect();
        pt.extend((src.m..2 * n).map(|_| Series::zero(&wv, order)));
        let hw: Vec<Series> = self.map.h().iter().map(|c| c.compose(&pt[..n])).collect::<Result<_>>()?;
        let slots = vec![Series::zero(&wv, order); self.slots.len()];
        let jac = self.jacobian(Side::T, &pt, &hw, &slots)?;
        Ok(series_det(&jac, &wv, order))
    }

    /// Evaluates rows of the system (or, on the `Tau` side, their
    /// conjugates with the roles of `t` and `τ` exchanged) at a point,
    /// target values and slot values.
    pub fn eval(&self, side: Side, rows: &[Series], point: &[Series], tprime: &[Series], slots: &[Series]) -> Result<Vec<Series>> {
        let n = self.n();
        let mut sub: Vec<Series> = match side {
            Side::T => point.to_vec(),
            Side::Tau => point[n..].iter().chain(&point[..n]).cloned().collect(),
        };
        sub.extend(tprime.iter().cloned());
        sub.extend(slots.iter().cloned());
        rows.iter()
            .map(|r| match side {
                Side::T => r.compose(&sub),
                Side::Tau => r.conj().compose(&sub),
            })
            .collect()
    }

    /// `∂𝓧'/∂t'` (or its conjugate counterpart) at a point.
    pub fn jacobian(&self, side: Side, point: &[Series], tprime: &[Series], slots: &[Series]) -> Result<Vec<Vec<Series>>> {
        let n2 = 2 * self.n();
        let np = self.map.target.n();
        self.x
            .iter()
            .map(|r| {
                let grads: Vec<Series> = (0..np).map(|k| r.derive_idx(n2 + k)).collect();
                self.eval(side, &grads, point, tprime, slots)
            })
            .collect()
    }

    /// Slot base values for the given side.
    pub fn base(&self, side: Side) -> Vec<Gq> {
        match side {
            Side::T => self.slots.base.clone(),
            Side::Tau => self.slots.conj_base(),
        }
    }

    /// The slot values for `side` built from the jets of the opposite map
    /// evaluated at the opposite block of `point`.
    pub fn slots_at(&self, side: Side, h: &FormalMap, point: &[Series]) -> Result<Vec<Series>> {
        let n = self.n();
        let (jets, arg): (Vec<Series>, &[Series]) = match side {
            Side::T => (h.h_bar(), &point[n..]),
            Side::Tau => (h.h(), &point[..n]),
        };
        self.slots.values(&self.base(side), |k, a| jets[k].derive_multi(a).compose(arg))
    }

    /// `h` on the `t` block of `point` (or `h̄` on the `τ` block).
    pub fn own_values(&self, side: Side, h: &FormalMap, point: &[Series]) -> Result<Vec<Series>> {
        let n = self.n();
        match side {
            Side::T => h.h().iter().map(|c| c.compose(&point[..n])).collect(),
            Side::Tau => h.h_bar().iter().map(|c| c.compose(&point[n..])).collect(),
        }
    }
}

/// Packages the nondegeneracy witness of a classification report.
pub fn default_fundamental_system(h: &FormalMap, report: &ClassificationReport) -> Result<FundamentalSystem> {
    let w = report
        .nondeg
        .witness
        .as_ref()
        .ok_or_else(|| Error::Precondition(format!("{} has no S-nondegeneracy witness ({})", h.name, report.nondeg.verdict)))?;
    let rows: Vec<(Vec<u32>, usize)> = w.indices.iter().cloned().zip(w.components.iter().copied()).collect();
    FundamentalSystem::from_rows(h, &rows)
}

/// Residuals of a fundamental system on the chain `Γᵏ`, directly and in the
/// form where the jets are read on the shorter chain behind a Υ-type flow.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainResiduals {
    pub k: usize,
    pub direct: Vec<Series>,
    pub simplified: Vec<Series>,
}

impl ChainResiduals {
    /// Number of nonzero coefficients over both families.
    pub fn nonzero_coefficients(&self) -> usize {
        self.direct.iter().chain(&self.simplified).map(|s| s.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_coefficients() == 0
    }

    pub fn order(&self) -> u32 {
        self.direct.iter().chain(&self.simplified).map(|s| s.order()).min().unwrap_or(0)
    }
}

/// Names `s1, …, s_d` of the Υ-flow parameter.
pub(crate) fn flow_param_names(d: usize) -> Vec<String> {
    (1..=d).map(|l| format!("s{l}")).collect()
}

/// Applies the Υ-type flow that moves the opposite block of `side`.
pub(crate) fn prefix_flow(mf: &GenericManifold, side: Side, s: &[Series], p: &[Series]) -> Result<Vec<Series>> {
    match side {
        Side::T => upsilon_bar_flow_closed(mf, s, p),
        Side::Tau => upsilon_flow_closed(mf, s, p),
    }
}

/// The 𝓛-first chain of length `k` re-expressed over `params`.
pub(crate) fn chain_over(mf: &GenericManifold, k: usize, params: &Vars, order: u32) -> Result<Vec<Series>> {
    if k == 0 {
        return Ok(origin(mf, params, order));
    }
    let ch = chain_map(mf, ChainWord::new(Start::L, k))?;
    ch.gamma.iter().map(|g| g.embed(params).map(|s| s.truncate(order))).collect()
}

/// Substitutes `Γᵏ`, `h∘Γᵏ` and the jets of `h̄` into the system, and the
/// same after a Υ-type prefix with the jets read on `Γᵏ⁻¹`: for odd `k`
/// through Ῡ and 𝓧', for even `k` through Υ and the conjugate system.
pub fn verify_on_chain(sys: &FundamentalSystem, h: &FormalMap, k: usize) -> Result<ChainResiduals> {
    if k == 0 {
        return Err(Error::Precondition("chain length must be at least 1".into()));
    }
    let mf = &h.source;
    let order = h.order.min(sys.map.order);
    let ch = chain_map(mf, ChainWord::new(Start::L, k))?;
    let gamma: Vec<Series> = ch.gamma.iter().map(|g| g.truncate(order)).collect();
    let u = sys.own_values(Side::T, h, &gamma)?;
    let sl = sys.slots_at(Side::T, h, &gamma)?;
    let direct = sys.eval(Side::T, &sys.x, &gamma, &u, &sl)?;

    let side = Side::of_step(k);
    let ext = join_vars(&[&ch.params, &vars(&flow_param_names(mf.d))]);
    let s: Vec<Series> = (0..mf.d).map(|l| Series::var_idx(&ext, ch.params.len() + l, order)).collect();
    let g_ext: Vec<Series> = gamma.iter().map(|g| g.embed(&ext)).collect::<Result<_>>()?;
    let q = prefix_flow(mf, side, &s, &g_ext)?;
    let prev = chain_over(mf, k - 1, &ext, order)?;
    let q_prev = prefix_flow(mf, side, &s, &prev)?;
    let u = sys.own_values(side, h, &q)?;
    let sl = sys.slots_at(side, h, &q_prev)?;
    let simplified = sys.eval(side, &sys.x, &q, &u, &sl)?;
    Ok(ChainResiduals { k, direct, simplified })
}

/// Argument list picking three blocks of a point by position.
pub(crate) fn pick(p: &[Series], blocks: &[std::ops::Range<usize>]) -> Vec<Series> {
    blocks.iter().flat_map(|r| p[r.clone()].iter().cloned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_map, Bounds};
    use crate::corpus;

    fn system(h: &FormalMap) -> FundamentalSystem {
        let rep = classify_map(h, Bounds::default()).unwrap();
        default_fundamental_system(h, &rep).unwrap()
    }

    #[test]
    fn systems_of_corpus_maps() {
        let h = corpus::id_quadric(8).unwrap();
        let sys = system(&h);
        assert_eq!(sys.kappa0, 1);
        assert_eq!(sys.det.valuation(), Some(0));
        let h = corpus::id_bidegree(8).unwrap();
        let sys = system(&h);
        assert_eq!(sys.witness_rows.len(), 3);
        assert_eq!(sys.det.valuation(), Some(1));
        let h = corpus::quartic_embedding(8).unwrap();
        let rep = classify_map(&h, Bounds::default()).unwrap();
        assert!(matches!(default_fundamental_system(&h, &rep), Err(Error::Precondition(_))));
    }

    #[test]
    fn chain_residuals_vanish() {
        let h = corpus::id_quadric(8).unwrap();
        let sys = system(&h);
        for k in 1..=4 {
            let r = verify_on_chain(&sys, &h, k).unwrap();
            assert!(r.is_zero(), "k = {k}");
        }
    }

    #[test]
    fn corrupted_map_is_caught() {
        let h = corpus::id_quadric(8).unwrap();
        let sys = system(&h);
        let t = h.source.blocks().t();
        let mut comps = h.h();
        comps[0] = &comps[0] + &crate::fps::parse_series("w1^3", &t, 8).unwrap();
        let bad = FormalMap::new("bad", h.source.clone(), h.target.clone(), comps).unwrap();
        assert!(!verify_on_chain(&sys, &bad, 1).unwrap().is_zero());
    }
}
