//! The Artin-type hypothesis on formal solutions, monic lifting of
//! truncated roots, and empirical finite-determination experiments.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fps::linalg::{combinations, series_det};
use crate::fps::{join_vars, parse_series, Gq, Series, Vars};
use crate::manifold::{verify_maps_into, Blocks, FormalMap, GenericManifold};

use super::table::chain_params;
use super::{chain_over, FundamentalSystem, Side};

#[derive(Clone, Debug, PartialEq)]
pub enum ArtinOutcome {
    /// Rows whose Jacobian in `y` along the solution is not zero mod order.
    Holds { rows: Vec<usize>, det: Series },
    Fails,
}

impl ArtinOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, ArtinOutcome::Holds { .. })
    }
}

/// Checks `R(w, ĝ(w)) ≡ 0` and searches `m`-row subsets of `∂R/∂y` along
/// `ĝ` for a determinant not vanishing mod `order`. `R` lives over
/// `(w, y)` with the `m` unknowns `y` last; `ĝ` lives over `w`.
pub fn artin_hypothesis_check(r: &[Series], g_hat: &[Series], order: u32) -> Result<ArtinOutcome> {
    let m = g_hat.len();
    let first = g_hat.first().ok_or_else(|| Error::Dimension("empty solution".into()))?;
    let wv = first.vars().clone();
    let nw = wv.len();
    if r.iter().any(|s| s.nvars() != nw + m) {
        return Err(Error::Dimension(format!("system must live over {} + {m} variables", nw)));
    }
    let mut sub: Vec<Series> = (0..nw).map(|i| Series::var_idx(&wv, i, order)).collect();
    sub.extend(g_hat.iter().map(|g| g.truncate(order)));
    for s in r {
        let res = s.truncate(order).compose(&sub)?;
        if !res.is_zero() {
            return Err(Error::Precondition(format!("ĝ does not solve the system mod order {order}: residual {res}")));
        }
    }
    let jac: Vec<Vec<Series>> =
        r.iter().map(|s| (0..m).map(|k| s.truncate(order).derive_idx(nw + k).compose(&sub)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    for rows in combinations(r.len(), m) {
        let mat: Vec<Vec<Series>> = rows.iter().map(|&i| jac[i].clone()).collect();
        let ord = mat.iter().flatten().map(|s| s.order()).min().unwrap_or(order);
        let det = series_det(&mat, &wv, ord);
        if !det.is_zero() {
            return Ok(ArtinOutcome::Holds { rows, det });
        }
    }
    Ok(ArtinOutcome::Fails)
}

/// The system that launches the jet propagation: `𝓧'(Γ¹(p), y, J(0))` over
/// `(p, y)`, with its solution `h∘Γ¹`.
pub fn launch_system(sys: &FundamentalSystem, h: &FormalMap) -> Result<(Vec<Series>, Vec<Series>)> {
    let mf = &h.source;
    let order = h.order.min(sys.map.order);
    let params = chain_params(mf.m, 1);
    let tp = Blocks::primed(h.target.m, h.target.d).t();
    let ext = join_vars(&[&params, &tp]);
    let gamma = chain_over(mf, 1, &ext, order)?;
    let y: Vec<Series> = (0..tp.len()).map(|k| Series::var_idx(&ext, params.len() + k, order)).collect();
    let slots = vec![Series::zero(&ext, order); sys.slots.len()];
    let r = sys.eval(Side::T, &sys.x, &gamma, &y, &slots)?;
    let g_gamma = chain_over(mf, 1, &params, order)?;
    let g_hat = sys.own_values(Side::T, h, &g_gamma)?;
    Ok((r, g_hat))
}

/// A polynomial `Σ a_k(w) X^k` with series coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyX {
    pub coeffs: Vec<Series>,
}

impl PolyX {
    /// Splits a series over `(X, w…)` with `X` first by powers of `X`.
    pub fn from_series(p: &Series, w: &Vars) -> Result<Self> {
        if p.nvars() != w.len() + 1 {
            return Err(Error::Dimension("polynomial must live over (X, w)".into()));
        }
        let deg = p.degree_in(0);
        let coeffs = (0..=deg)
            .map(|k| {
                let terms = p.terms().iter().filter(|(e, _)| e[0] as u32 == k).map(|(e, c)| (e[1..].to_vec(), c.clone()));
                Series::from_terms(w, p.order().saturating_sub(k), terms)
            })
            .collect();
        Ok(PolyX { coeffs })
    }

    /// Parses `text` over `X` and the given `w` names.
    pub fn parse(text: &str, w: &[&str], order: u32) -> Result<Self> {
        let mut names = vec!["X"];
        names.extend_from_slice(w);
        let all = crate::fps::vars(&names);
        PolyX::from_series(&parse_series(text, &all, order)?, &crate::fps::vars(w))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.constant_term().is_one() && c.terms().len() == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `P(x)` by Horner's rule.
    pub fn eval(&self, x: &Series) -> Series {
        let mut acc = Series::zero(x.vars(), x.order());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> PolyX {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(&Gq::int(k as i64))).collect();
        PolyX { coeffs }
    }

    fn order(&self) -> u32 {
        self.coeffs.iter().map(|c| c.order()).min().unwrap_or(0)
    }
}

/// Extends a root `h_jet` of `P` known below degree `n0` to a root known
/// below `order`. The separant `∂P/∂X` along the jet fixes the valuation
/// `v`; each new homogeneous part is the quotient of the next residual by
/// the separant's leading form. When the separant vanishes to order `n0`
/// the derivative polynomial takes the place of `P`.
pub fn monic_lift(p: &PolyX, h_jet: &Series, n0: u32, order: u32) -> Result<Series> {
    if !p.is_monic() {
        return Err(Error::Precondition("polynomial is not monic".into()));
    }
    let jet = h_jet.truncate(n0);
    if jet.order() < n0 {
        return Err(Error::OrderExhausted(format!("jet known to order {} < {n0}", jet.order())));
    }
    if !p.eval(&jet).truncate(n0).is_zero() {
        return Err(Error::Precondition(format!("jet is not a root mod order {n0}")));
    }
    let mut q = p.clone();
    let sep = loop {
        let dq = q.derivative();
        if dq.is_zero() {
            return Err(Error::Inconsistent("separant vanishes identically".into()));
        }
        let s = dq.eval(&jet).truncate(n0);
        if !s.is_zero() {
            break s;
        }
        if !q.eval(&jet).truncate(n0).is_zero() {
            return Err(Error::Inconsistent("jet is a multiple root of no derivative".into()));
        }
        q = dq;
    };
    let v = sep.valuation().expect("nonzero separant");
    let lead = sep.homogeneous_part(v);
    let big = order + v;
    if q.order() < big {
        return Err(Error::OrderExhausted(format!("polynomial data known to order {} < {big}", q.order())));
    }
    let mut h = jet.assume_exact_to(big);
    for d in n0..order {
        let r = q.eval(&h);
        if let Some(e) = (0..d + v).find(|&e| !r.homogeneous_part(e).is_zero()) {
            return Err(Error::Inconsistent(format!("no consistent extension: residual of degree {e} at step {d}")));
        }
        let target = -r.homogeneous_part(d + v);
        if target.is_zero() {
            continue;
        }
        let delta = target.truncate(d + v + 1).divide_exact(&lead.assume_exact_to(d + v + 1)).map_err(|_| {
            Error::Inconsistent(format!("degree {d} coefficient not determined by the separant"))
        })?;
        h = &h + &delta.homogeneous_part(d).assume_exact_to(big);
    }
    let h = h.truncate(order);
    let res = p.eval(&h);
    if !res.is_zero() {
        return Err(Error::Verification(format!("lifted series is not a root of P mod order {order}: {res}")));
    }
    Ok(h)
}

/// Objects whose determination by jets is tested.
#[derive(Clone, Debug)]
pub enum DeterminationContext {
    /// Roots of one polynomial.
    Polynomial { p: PolyX, solutions: Vec<Series> },
    /// Maps between the same manifolds.
    Maps { maps: Vec<FormalMap> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trial {
    pub nu: u32,
    pub pair: (usize, usize),
    pub jets_agree: bool,
    pub full_agree: bool,
}

impl Trial {
    /// A counterexample to determination at this `ν`.
    pub fn failed(&self) -> bool {
        self.jets_agree && !self.full_agree
    }
}

/// The least tested `ν` for which agreement of `ν`-jets at the origin
/// implied full agreement on every tested pair. Empirical only.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminationBound {
    pub context: String,
    pub nu: Option<u32>,
    pub order: u32,
    pub evidence: Vec<Trial>,
}

fn same_mod(a: &Series, b: &Series, order: u32) -> bool {
    let ord = order.min(a.order()).min(b.order());
    a.truncate(ord) == b.truncate(ord)
}

pub fn determination_experiment(ctx: &DeterminationContext, nu_candidates: &[u32]) -> Result<DeterminationBound> {
    let (label, objects, order, full): (String, Vec<Vec<Series>>, u32, Vec<Vec<Series>>) = match ctx {
        DeterminationContext::Polynomial { p, solutions } => {
            let order = solutions.iter().map(|s| s.order()).min().unwrap_or(0);
            for s in solutions {
                if !p.eval(s).is_zero() {
                    return Err(Error::Precondition(format!("{s} is not a root mod order {}", s.order())));
                }
            }
            let objs: Vec<Vec<Series>> = solutions.iter().map(|s| vec![s.clone()]).collect();
            ("polynomial".into(), objs.clone(), order, objs)
        }
        DeterminationContext::Maps { maps } => {
            let order = maps.iter().map(|h| h.order).min().unwrap_or(0);
            for h in maps {
                if verify_maps_into(h)?.iter().any(|r| !r.is_zero()) {
                    return Err(Error::Precondition(format!("{} does not map into its target", h.name)));
                }
            }
            let objs: Vec<Vec<Series>> = maps.iter().map(|h| h.h()).collect();
            ("maps".into(), objs.clone(), order, objs)
        }
    };
    let mut evidence = Vec::new();
    let mut nu = None;
    for &cand in nu_candidates {
        let mut ok = true;
        for i in 0..objects.len() {
            for j in i + 1..objects.len() {
                let jets_agree = objects[i].iter().zip(&objects[j]).all(|(a, b)| same_mod(a, b, cand + 1));
                let full_agree = full[i].iter().zip(&full[j]).all(|(a, b)| same_mod(a, b, order));
                let t = Trial { nu: cand, pair: (i, j), jets_agree, full_agree };
                ok &= !t.failed();
                evidence.push(t);
            }
        }
        if ok && nu.is_none() {
            nu = Some(cand);
        }
    }
    Ok(DeterminationBound { context: label, nu, order, evidence })
}

/// Self-maps of the quadric `z = z̄ + i w w̄` in `ℂ²`:
/// `w ↦ λ(w + b z)/D`, `z ↦ |λ|² z/D` with
/// `D = 1 − i b̄ w − (r + i|b|²/2) z`, for the given parameter triples.
pub fn quadric_automorphisms(mf: &Arc<GenericManifold>, params: &[(Gq, Gq, Gq)]) -> Result<Vec<FormalMap>> {
    let t = mf.blocks().t();
    let order = mf.order;
    let w = Series::var_idx(&t, 0, order);
    let z = Series::var_idx(&t, 1, order);
    let one = Series::one(&t, order);
    params
        .iter()
        .enumerate()
        .map(|(idx, (lam, b, r))| {
            let bb = b.conj();
            let half = Gq::frac(1, 2);
            let zc = r + &(&(&(b * &bb) * &half) * &Gq::i());
            let dn = &(&one - &w.scale(&(&bb * &Gq::i()))) - &z.scale(&zc);
            let inv = dn.invert_unit()?;
            let g = (&(&w + &z.scale(b)) * &inv).scale(lam);
            let f = (&z * &inv).scale(&(lam * &lam.conj()));
            FormalMap::new(&format!("aut{idx}"), mf.clone(), mf.clone(), vec![g, f])
        })
        .collect()
}
