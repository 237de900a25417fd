//! Jets of `h` and `h̄` along Segre chains: the derive-then-compose oracle
//! and the pipeline that solves them from a fundamental system.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fps::linalg::{series_adjugate, series_det};
use crate::fps::{join_vars, vars, Gq, Series, Vars};
use crate::manifold::FormalMap;
use crate::reflection::{multi_indices, multi_indices_upto};
use crate::segre::{chain_param_names, ChainWord, Start};

use super::{chain_over, flow_param_names, pick, prefix_flow, FundamentalSystem, Side};

pub type JetMap = BTreeMap<(usize, Vec<u32>), Series>;

/// `(∇^κ h)∘Γᵏ` and `(∇^κ h̄)∘Γᵏ` as series in the chain parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainJetTable {
    pub k: usize,
    pub kappa: u32,
    pub params: Vars,
    /// `(∂_t^β h_j)∘Γᵏ` keyed by `(j, β)`.
    pub h: JetMap,
    /// `(∂_τ^β h̄_j)∘Γᵏ` keyed by `(j, β)`.
    pub h_bar: JetMap,
}

fn complete_to(map: &JetMap) -> u32 {
    let Some(((_, b), _)) = map.iter().next() else { return 0 };
    let n = b.len();
    let comps = map.keys().map(|(j, _)| *j).max().map_or(0, |j| j + 1);
    let mut kappa = 0;
    while (0..comps).all(|j| multi_indices(n, kappa + 1).into_iter().all(|b| map.contains_key(&(j, b)))) {
        kappa += 1;
    }
    kappa
}

impl ChainJetTable {
    pub fn side(&self, side: Side) -> &JetMap {
        match side {
            Side::T => &self.h,
            Side::Tau => &self.h_bar,
        }
    }

    fn side_mut(&mut self, side: Side) -> &mut JetMap {
        match side {
            Side::T => &mut self.h,
            Side::Tau => &mut self.h_bar,
        }
    }

    /// Jet order reached on the given side.
    pub fn side_kappa(&self, side: Side) -> u32 {
        complete_to(self.side(side))
    }

    /// Least truncation order among the entries.
    pub fn order(&self) -> u32 {
        self.h.values().chain(self.h_bar.values()).map(|s| s.order()).min().unwrap_or(0)
    }

    /// Entries with `|β| ≤ kappa`.
    pub fn restrict(&self, kappa: u32) -> Self {
        let keep = |m: &JetMap| m.iter().filter(|((_, b), _)| b.iter().sum::<u32>() <= kappa).map(|(k, v)| (k.clone(), v.clone())).collect();
        ChainJetTable { k: self.k, kappa: self.kappa.min(kappa), params: self.params.clone(), h: keep(&self.h), h_bar: keep(&self.h_bar) }
    }

    /// Keys of `self` that are missing from `other` or whose entries differ
    /// modulo their common order.
    pub fn mismatches(&self, other: &ChainJetTable) -> Vec<(Side, usize, Vec<u32>)> {
        let mut out = Vec::new();
        for side in [Side::T, Side::Tau] {
            for ((j, b), s) in self.side(side) {
                let same = other.side(side).get(&(*j, b.clone())).map_or(false, |o| {
                    let ord = s.order().min(o.order());
                    s.vars() == o.vars() && s.truncate(ord) == o.truncate(ord)
                });
                if !same {
                    out.push((side, *j, b.clone()));
                }
            }
        }
        out
    }

    pub fn agrees_with(&self, other: &ChainJetTable) -> bool {
        self.mismatches(other).is_empty()
    }

    /// FNV-1a hash of the printed entries, for reports.
    pub fn checksum(&self) -> u64 {
        let mut hsh: u64 = 0xcbf2_9ce4_8422_2325;
        for (tag, map) in [("h", &self.h), ("hb", &self.h_bar)] {
            for ((j, b), s) in map {
                let line = format!("{tag}{j}{b:?}={s};");
                for byte in line.bytes() {
                    hsh ^= byte as u64;
                    hsh = hsh.wrapping_mul(0x0100_0000_01b3);
                }
            }
        }
        hsh
    }

    fn embedded(map: &JetMap, target: &Vars) -> Result<JetMap> {
        map.iter().map(|(k, s)| Ok((k.clone(), s.embed(target)?))).collect()
    }
}

pub(crate) fn chain_params(m: usize, k: usize) -> Vars {
    vars(&chain_param_names(ChainWord::new(Start::L, k), m))
}

/// The oracle: derivatives of `h` and `h̄` composed with the chain.
pub fn direct_table(h: &FormalMap, k: usize, kappa: u32) -> Result<ChainJetTable> {
    let mf = &h.source;
    let n = mf.n();
    let params = chain_params(mf.m, k);
    let gamma = chain_over(mf, k, &params, h.order)?;
    let jets = |comps: Vec<Series>, arg: &[Series]| -> Result<JetMap> {
        let mut out = BTreeMap::new();
        for (j, c) in comps.iter().enumerate() {
            for b in multi_indices_upto(n, kappa) {
                out.insert((j, b.clone()), c.derive_multi(&b).compose(arg)?);
            }
        }
        Ok(out)
    };
    Ok(ChainJetTable { k, kappa, params, h: jets(h.h(), &gamma[..n])?, h_bar: jets(h.h_bar(), &gamma[n..])? })
}

/// The jets of both maps at the origin: the data the pipeline starts from.
pub fn origin_table(h: &FormalMap, kappa: u32) -> Result<ChainJetTable> {
    direct_table(h, 0, kappa)
}

/// Solves `X·H + A = 0` as `(det X)·H = −adj(X)·A`, dividing exactly.
pub fn solve_adjugate(x: &[Vec<Series>], a: &[Series]) -> Result<Vec<Series>> {
    let first = a.first().ok_or_else(|| Error::Dimension("empty system".into()))?;
    let vs = first.vars().clone();
    let order = x.iter().flatten().chain(a).map(|s| s.order()).min().unwrap_or(0);
    let det = series_det(x, &vs, order);
    if det.is_zero() {
        return Err(Error::SingularJacobian);
    }
    let adj = series_adjugate(x, &vs, order);
    adj.iter()
        .map(|row| {
            let num = row.iter().zip(a).fold(Series::zero(&vs, order), |acc, (p, q)| &acc - &(p * q));
            num.divide_exact(&det)
        })
        .collect()
}

/// Slot values for `side` read from the other side's jet map.
fn slots_from_map(sys: &FundamentalSystem, side: Side, other: &JetMap) -> Result<Vec<Series>> {
    sys.slots.values(&sys.base(side), |k, a| {
        other.get(&(k, a.to_vec())).cloned().ok_or_else(|| Error::OrderExhausted(format!("missing jet ({k}, {a:?}) on the shorter chain")))
    })
}

/// Checks that `det` survives setting all but the last parameter block to
/// zero.
fn check_specialized(det: &Series, m: usize, k: usize, what: &str) -> Result<()> {
    let zero: Vec<usize> = (0..(k - 1) * m).collect();
    if det.restrict_zero(&zero).is_zero() {
        return Err(Error::Verification(format!("{what} determinant vanishes on the last chain step mod order {}", det.order())));
    }
    Ok(())
}

/// Moves from chain `k` to `k + 1`: the jets of the side not moved by the
/// new step are carried over, the zeroth jets of the moved side are
/// computed by composition and certified against the identity system,
/// after checking its determinant on the last step.
pub fn step2_transfer(sys: &FundamentalSystem, h: &FormalMap, prev: &ChainJetTable) -> Result<ChainJetTable> {
    let mf = &h.source;
    let k = prev.k + 1;
    let side = Side::of_step(k);
    let order = h.order.min(sys.map.order);
    let params = chain_params(mf.m, k);
    let gamma = chain_over(mf, k, &params, order)?;
    let other = ChainJetTable::embedded(prev.side(side.other()), &params)?;
    let own0 = sys.own_values(side, h, &gamma)?;
    let slots = slots_from_map(sys, side, &other)?;
    let jac = sys.jacobian(side, &gamma, &own0, &slots)?;
    let det = series_det(&jac, &params, order);
    if det.is_zero() {
        return Err(Error::Verification(format!("identity determinant vanishes on chain {k} mod order {order}")));
    }
    check_specialized(&det, mf.m, k, "identity")?;
    if let Some(r) = sys.eval(side, &sys.x, &gamma, &own0, &slots)?.into_iter().find(|r| !r.is_zero()) {
        return Err(Error::Verification(format!("chain {k}: composed values violate the identity system, residual {r}")));
    }
    let n = mf.n();
    let own: JetMap = own0.into_iter().enumerate().map(|(j, s)| ((j, vec![0; n]), s)).collect();
    let mut t = ChainJetTable { k, kappa: 0, params, h: BTreeMap::new(), h_bar: BTreeMap::new() };
    *t.side_mut(side) = own;
    *t.side_mut(side.other()) = other;
    Ok(t)
}

/// Coefficient of `s^δ` in a series over `(p, s)`, as a series over `p`.
fn s_coefficient(s: &Series, np: usize, delta: &[u32], params: &Vars) -> Series {
    let dd: u32 = delta.iter().sum();
    let terms = s
        .terms()
        .iter()
        .filter(|(e, _)| e[np..].iter().zip(delta).all(|(&x, &y)| x as u32 == y))
        .map(|(e, c)| (e[..np].to_vec(), c.clone()));
    Series::from_terms(params, s.order().saturating_sub(dd), terms)
}

fn factorial(b: &[u32]) -> Gq {
    let mut f: i64 = 1;
    for &x in b {
        for k in 2..=x as i64 {
            f *= k;
        }
    }
    Gq::frac(1, f)
}

fn monomial_power(base: &[Series], b: &[u32], vs: &Vars, order: u32) -> Series {
    base.iter().zip(b).fold(Series::one(vs, order), |acc, (x, &e)| &acc * &x.pow(e))
}

/// Raises the jets of the side moved by the last step of chain `cur.k`
/// from order `λ` to `λ + 1`.
///
/// The identity is differentiated `λ + 1` times along the Υ-type flow that
/// moves the other side: the jets there come from `prev` (Taylor expansion
/// in the flow parameter), the known lower jets of the moved side enter a
/// Taylor polynomial, and the remaining top-order terms form the linear
/// system `X·H + A = 0`, solved by the adjugate with exact division. Mixed
/// partials then follow by differentiating along the last chain step.
pub fn step1_solve_jets(sys: &FundamentalSystem, h: &FormalMap, prev: &ChainJetTable, cur: &ChainJetTable, lambda: u32) -> Result<ChainJetTable> {
    let mf = &h.source;
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let k = cur.k;
    if prev.k + 1 != k {
        return Err(Error::Precondition(format!("tables for chains {} and {k} are not consecutive", prev.k)));
    }
    let side = Side::of_step(k);
    let own_off = side.offset(n);
    if cur.side_kappa(side) < lambda {
        return Err(Error::Precondition(format!("chain {k} jets known only to order {}", cur.side_kappa(side))));
    }
    let need = sys.kappa0 + lambda + 1;
    if prev.side_kappa(side.other()) < need {
        return Err(Error::Precondition(format!("chain {} jets needed to order {need}", prev.k)));
    }
    let order = h.order.min(sys.map.order);
    let params = cur.params.clone();
    let np = params.len();
    let ext = join_vars(&[&params, &vars(&flow_param_names(d))]);
    let s: Vec<Series> = (0..d).map(|l| Series::var_idx(&ext, np + l, order)).collect();
    let gamma = chain_over(mf, k, &params, order)?;
    let g_ext: Vec<Series> = gamma.iter().map(|g| g.embed(&ext)).collect::<Result<_>>()?;
    let q = prefix_flow(mf, side, &s, &g_ext)?;
    let delta: Vec<Series> = (0..d).map(|l| &q[own_off + m + l] - &g_ext[own_off + m + l]).collect();
    let own = cur.side(side);
    let np_t = h.target.n();
    let zm = vec![0u32; m];
    let key = |j: usize, a: &[u32], b: &[u32]| -> (usize, Vec<u32>) { (j, a.iter().chain(b).copied().collect()) };

    let mut u = Vec::new();
    for j in 0..np_t {
        let mut acc = Series::zero(&ext, order);
        for b in multi_indices_upto(d, lambda) {
            let e = own.get(&key(j, &zm, &b)).expect("lower jets present").embed(&ext)?;
            acc = &acc + &(&e * &monomial_power(&delta, &b, &ext, order)).scale(&factorial(&b));
        }
        u.push(acc);
    }
    let other = prev.side(side.other());
    let slots = sys.slots.values(&sys.base(side), |kk, a| {
        let mut acc = Series::zero(&ext, order);
        for b in multi_indices_upto(d, lambda + 1) {
            let mut ab = a.to_vec();
            for l in 0..d {
                ab[m + l] += b[l];
            }
            let e = other.get(&(kk, ab)).expect("checked jet order").embed(&ext)?;
            acc = &acc + &(&e * &monomial_power(&s, &b, &ext, order)).scale(&factorial(&b));
        }
        Ok(acc)
    })?;
    let e = sys.eval(side, &sys.x, &q, &u, &slots)?;

    let own0: Vec<Series> = (0..np_t).map(|j| own[&(j, vec![0; n])].clone()).collect();
    let slots0 = slots_from_map(sys, side, &ChainJetTable::embedded(other, &params)?)?;
    let jac = sys.jacobian(side, &gamma, &own0, &slots0)?;
    let det = series_det(&jac, &params, order);
    if det.is_zero() {
        return Err(Error::SingularJacobian);
    }
    check_specialized(&det, m, k, "jet system")?;

    // Linear part of the flow displacement and its symmetric powers.
    let lin: Vec<Series> = (0..d)
        .map(|l| {
            (0..d).fold(Series::zero(&ext, order), |acc, r| {
                let mut er = vec![0u32; d];
                er[r] = 1;
                let c = s_coefficient(&delta[l], np, &er, &params).embed(&ext).expect("params embed");
                &acc + &(&c * &s[r])
            })
        })
        .collect();
    let top = multi_indices(d, lambda + 1);
    let cmat: Vec<Vec<Series>> = top
        .iter()
        .map(|dl| top.iter().map(|b| s_coefficient(&monomial_power(&lin, b, &ext, order).scale(&factorial(b)), np, dl, &params)).collect())
        .collect();
    let cdet = series_det(&cmat, &params, order).invert_unit()?;
    let cadj = series_adjugate(&cmat, &params, order);

    let qs: Vec<Vec<Series>> = top
        .iter()
        .map(|dl| {
            let a: Vec<Series> = e.iter().map(|x| s_coefficient(x, np, dl, &params)).collect();
            solve_adjugate(&jac, &a)
        })
        .collect::<Result<_>>()?;
    let mut out = cur.clone();
    let ownm = out.side_mut(side);
    for j in 0..np_t {
        for (bi, b) in top.iter().enumerate() {
            let mut acc = Series::zero(&params, order);
            for (di, qd) in qs.iter().enumerate() {
                acc = &acc + &(&cadj[bi][di] * &qd[j]);
            }
            ownm.insert(key(j, &zm, b), &acc * &cdet);
        }
    }

    // Mixed partials along the last step: ∂_w F∘Γ = ∂_p(F∘Γ) − Σ G ∂_z F∘Γ.
    let p0 = (k - 1) * m;
    let g = step_coefficients(h, side, &gamma)?;
    for aw in 1..=lambda + 1 {
        for a in multi_indices(m, aw) {
            for b in multi_indices(d, lambda + 1 - aw) {
                let jw = a.iter().position(|&x| x > 0).expect("nonzero index");
                let mut a1 = a.clone();
                a1[jw] -= 1;
                for j in 0..np_t {
                    let lower = ownm.get(&key(j, &a1, &b)).expect("lower jet").derive_idx(p0 + jw);
                    let mut acc = lower;
                    for l in 0..d {
                        let mut bl = b.clone();
                        bl[l] += 1;
                        let z = &ownm[&key(j, &a1, &bl)];
                        acc = &acc - &(&g[jw][l] * z);
                    }
                    ownm.insert(key(j, &a, &b), acc);
                }
            }
        }
    }
    out.kappa = out.side_kappa(Side::T).min(out.side_kappa(Side::Tau));
    Ok(out)
}

/// `∂(own z_l)/∂(own w_j)` along the last step at `Γ`: `iΘ̄^l_{w_j}` for an
/// 𝓛 step, `−iΘ^l_{ζ_j}` for an 𝓛̄ step.
fn step_coefficients(h: &FormalMap, side: Side, gamma: &[Series]) -> Result<Vec<Vec<Series>>> {
    let mf = &h.source;
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let (funcs, args, c, shift) = match side {
        Side::T => (&mf.theta_bar, pick(gamma, &[0..m, n..n + m, n + m..2 * n]), Gq::i(), 0),
        Side::Tau => (&mf.theta, pick(gamma, &[0..m, n..n + m, m..n]), Gq::from_ints(0, -1), m),
    };
    (0..m).map(|j| (0..d).map(|l| Ok(funcs[l].derive_idx(shift + j).compose(&args)?.scale(&c))).collect()).collect()
}

/// The full pipeline from the jets at the origin: tables for chains
/// `0..=k_max`, each with jets of order `κ` at the end and higher on the
/// way, as the later steps consume `κ₀` orders per chain.
pub fn propagate_jets(sys: &FundamentalSystem, h: &FormalMap, k_max: usize, kappa: u32) -> Result<Vec<ChainJetTable>> {
    let need = |k: usize| kappa + (k_max - k) as u32 * sys.kappa0;
    let mut tables = vec![origin_table(h, need(0))?];
    for k in 1..=k_max {
        let prev = &tables[k - 1];
        let mut t = step2_transfer(sys, h, prev)?;
        for lambda in 0..need(k) {
            t = step1_solve_jets(sys, h, prev, &t, lambda)?;
        }
        let mut t = t.restrict(need(k));
        t.kappa = need(k);
        if let Some(((j, b), _)) = t.side(Side::of_step(k)).iter().find(|(_, s)| s.order() == 0) {
            return Err(Error::OrderExhausted(format!("chain {k}: jet {b:?} of component {j} has no known terms; raise the order")));
        }
        tables.push(t);
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_map, Bounds};
    use crate::corpus;
    use crate::fps::parse_series;
    use crate::propagate::default_fundamental_system;

    fn system(h: &FormalMap) -> FundamentalSystem {
        let rep = classify_map(h, Bounds::default()).unwrap();
        default_fundamental_system(h, &rep).unwrap()
    }

    #[test]
    fn division_step() {
        let vs = vars(&["w1", "w2"]);
        let p = |t: &str| parse_series(t, &vs, 6).unwrap();
        let c = solve_adjugate(&[vec![p("w1")]], &[p("-w1*(1 + w1)")]).unwrap();
        assert_eq!(c[0], p("1 + w1").truncate(5));
        assert!(matches!(solve_adjugate(&[vec![p("w1")]], &[p("w2")]), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn first_jets_on_quadric() {
        let h = corpus::id_quadric(8).unwrap();
        let sys = system(&h);
        let t0 = origin_table(&h, 2).unwrap();
        let t1 = step2_transfer(&sys, &h, &t0).unwrap();
        let t1 = step1_solve_jets(&sys, &h, &t0, &t1, 0).unwrap();
        assert!(t1.agrees_with(&direct_table(&h, 1, 2).unwrap()));
        assert_eq!(t1.side_kappa(Side::T), 1);
    }

    #[test]
    fn pipeline_matches_oracle() {
        let h = corpus::id_quadric(20).unwrap();
        let sys = system(&h);
        let tables = propagate_jets(&sys, &h, 3, 2).unwrap();
        for t in &tables {
            let oracle = direct_table(&h, t.k, t.kappa).unwrap();
            assert!(t.agrees_with(&oracle), "k = {}: {:?}", t.k, t.mismatches(&oracle));
        }
    }

    #[test]
    fn pipeline_with_degenerate_determinant() {
        let h = corpus::id_bidegree(20).unwrap();
        let sys = system(&h);
        for t in propagate_jets(&sys, &h, 2, 1).unwrap() {
            let oracle = direct_table(&h, t.k, t.kappa).unwrap();
            assert!(t.agrees_with(&oracle), "k = {}: {:?}", t.k, t.mismatches(&oracle));
        }
    }

    #[test]
    fn shallow_order_is_reported() {
        let h = corpus::id_quadric(8).unwrap();
        let sys = system(&h);
        assert!(propagate_jets(&sys, &h, 3, 2).is_err());
    }

    #[test]
    fn corrupted_jets_fail_the_residual() {
        let h = corpus::id_quadric(8).unwrap();
        let sys = system(&h);
        let t0 = origin_table(&h, 3).unwrap();
        let t1 = step2_transfer(&sys, &h, &t0).unwrap();
        let mut t1 = step1_solve_jets(&sys, &h, &t0, &t1, 0).unwrap();
        let t1b = step1_solve_jets(&sys, &h, &t0, &t1, 1).unwrap();
        t1 = t1b;
        let key = (1, vec![0, 0]);
        let bump = parse_series("w1^2", &t1.params, 8).unwrap();
        let e = &t1.h[&key] + &bump;
        t1.h.insert(key, e);
        let err = step2_transfer(&sys, &h, &t1).unwrap_err();
        assert!(matches!(err, Error::Verification(ref s) if s.contains("residual")), "{err}");
    }
}
