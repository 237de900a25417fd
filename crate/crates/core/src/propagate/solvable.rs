//! Closed-form propagation for S-solvable maps: `h = A(t, τ, ∇^{κ₀}h̄(τ))`
//! on the complexification, differentiated by total derivatives and
//! iterated along the chain with its conjugate.

use std::collections::BTreeMap;

use crate::classify::SolvabilityCertificate;
use crate::error::{Error, Result};
use crate::fps::{implicit_solve, Gq, Series, Vars};
use crate::manifold::{Blocks, FormalMap};
use crate::reflection::multi_indices_upto;
use crate::segre::apply_field;

use super::table::{chain_params, origin_table, ChainJetTable, JetMap};
use super::{chain_over, pick, symbolic_reflection, JetSlots, Side};

/// Total derivatives in the moved side's coordinates on the
/// complexification, acting on series over `(own, other, J)`: the other
/// side's `z`-block follows the graph, and the slots follow the other
/// side's `z`-derivatives.
fn total_fields(h: &FormalMap, side: Side, avars: &Vars, slots: &JetSlots, base: &[Gq], order: u32) -> Result<Vec<Vec<Series>>> {
    let mf = &h.source;
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let x: Vec<Series> = (0..avars.len()).map(|i| Series::var_idx(avars, i, order)).collect();
    let (funcs, args, c, w_shift) = match side {
        Side::T => (&mf.theta, pick(&x, &[0..m, n..n + m, m..n]), Gq::from_ints(0, -1), 0),
        Side::Tau => (&mf.theta_bar, pick(&x, &[n..n + m, 0..m, m..n]), Gq::i(), m),
    };
    let grad = |l: usize, i: usize| -> Result<Series> { Ok(funcs[l].derive_idx(i).compose(&args)?.scale(&c)) };
    let off = 2 * n;
    let full = |i: usize| &x[off + i] + &Series::one(avars, order).scale(&base[i]);
    let mut out = Vec::new();
    for v in 0..n {
        let coef: Vec<Series> = (0..d)
            .map(|l| {
                if v < m {
                    grad(l, w_shift + v)
                } else {
                    let r = v - m;
                    let g = grad(l, 2 * m + r)?;
                    Ok(if l == r { &g + &Series::one(avars, order) } else { g })
                }
            })
            .collect::<Result<_>>()?;
        let mut f = vec![Series::zero(avars, order); avars.len()];
        f[v] = Series::one(avars, order);
        for l in 0..d {
            f[n + m + l] = coef[l].clone();
        }
        for (i, (k, a)) in slots.keys.iter().enumerate() {
            if a.iter().sum::<u32>() >= slots.kappa {
                continue;
            }
            let mut acc = Series::zero(avars, order);
            for (l, cl) in coef.iter().enumerate() {
                let mut al = a.clone();
                al[m + l] += 1;
                acc = &acc + &(cl * &full(slots.index(*k, &al).expect("slot below top order")));
            }
            f[off + i] = acc;
        }
        out.push(f);
    }
    Ok(out)
}

/// Iterates the solved form along the 𝓛-first chain: tables for chains
/// `0..=k_max` with jets of order `κ` at the end, each side obtained from
/// total derivatives of `A` (or its conjugate) and the opposite jets on
/// the previous chain.
pub fn iterate_solvable(cert: &SolvabilityCertificate, h: &FormalMap, k_max: usize, kappa: u32) -> Result<Vec<ChainJetTable>> {
    if cert.residual.iter().any(|r| !r.is_zero()) {
        return Err(Error::Precondition("solvability certificate does not verify".into()));
    }
    let mf = &h.source;
    let n = mf.n();
    let order = h.order;
    let k0 = cert.kappa0;
    let need = |k: usize| kappa + (k_max - k) as u32 * k0;
    let sym = symbolic_reflection(h, k0, need(0))?;
    let rows: Vec<Series> = cert.rows.iter().map(|(g, l)| sym.r[g][*l].clone()).collect();
    let tp = Blocks::primed(h.target.m, h.target.d).t();
    let names: Vec<&str> = tp.iter().map(|s| s.as_str()).collect();
    let a = implicit_solve(&rows, &names)?;
    let avars = a.first().map(|s| s.vars().clone()).ok_or_else(|| Error::Dimension("empty certificate".into()))?;
    check_against_certificate(cert, h, &a, &sym.slots)?;

    let mut derivs: Vec<BTreeMap<Vec<u32>, Vec<Series>>> = Vec::new();
    for side in [Side::T, Side::Tau] {
        let base = match side {
            Side::T => sym.slots.base.clone(),
            Side::Tau => sym.slots.conj_base(),
        };
        let f0: Vec<Series> = match side {
            Side::T => a.clone(),
            Side::Tau => a.iter().map(|s| s.conj()).collect(),
        };
        let fields = total_fields(h, side, &avars, &sym.slots, &base, order)?;
        let mut memo: BTreeMap<Vec<u32>, Vec<Series>> = BTreeMap::new();
        memo.insert(vec![0; n], f0);
        for b in multi_indices_upto(n, need(1)).into_iter().skip(1) {
            let v = b.iter().position(|&x| x > 0).expect("nonzero index");
            let mut prev = b.clone();
            prev[v] -= 1;
            let next = memo[&prev].iter().map(|s| apply_field(&fields[v], s)).collect::<Result<Vec<_>>>()?;
            memo.insert(b, next);
        }
        derivs.push(memo);
    }

    let mut tables = vec![origin_table(h, need(0))?];
    for k in 1..=k_max {
        let side = Side::of_step(k);
        let params = chain_params(mf.m, k);
        let gamma = chain_over(mf, k, &params, order)?;
        let prev = &tables[k - 1];
        let other: JetMap = prev.side(side.other()).iter().map(|(key, s)| Ok((key.clone(), s.embed(&params)?))).collect::<Result<_>>()?;
        let base = match side {
            Side::T => sym.slots.base.clone(),
            Side::Tau => sym.slots.conj_base(),
        };
        let mut sub: Vec<Series> = match side {
            Side::T => gamma.clone(),
            Side::Tau => gamma[n..].iter().chain(&gamma[..n]).cloned().collect(),
        };
        let memo = &derivs[if side == Side::T { 0 } else { 1 }];
        let mut own = BTreeMap::new();
        // Slots beyond the previous chain's jets do not occur in the
        // derivatives requested here.
        let slot_vals: Vec<Series> = sym
            .slots
            .keys
            .iter()
            .zip(&base)
            .map(|(key, c)| match other.get(key) {
                Some(s) => s - &Series::one(&params, s.order()).scale(c),
                None => Series::zero(&params, order),
            })
            .collect();
        sub.extend(slot_vals);
        for b in multi_indices_upto(n, need(k)) {
            for (j, s) in memo[&b].iter().enumerate() {
                own.insert((j, b.clone()), s.compose(&sub)?);
            }
        }
        let mut t = ChainJetTable { k, kappa: need(k), params: params.clone(), h: BTreeMap::new(), h_bar: BTreeMap::new() };
        let other_r: JetMap = other.into_iter().filter(|((_, b), _)| b.iter().sum::<u32>() <= need(k)).collect();
        match side {
            Side::T => {
                t.h = own;
                t.h_bar = other_r;
            }
            Side::Tau => {
                t.h_bar = own;
                t.h = other_r;
            }
        }
        tables.push(t);
    }
    Ok(tables)
}

/// `A` with the slots filled by the jets of `h̄` must equal the
/// certificate's own solution.
fn check_against_certificate(cert: &SolvabilityCertificate, h: &FormalMap, a: &[Series], slots: &JetSlots) -> Result<()> {
    let amb = h.source.blocks().ambient();
    let n = h.source.n();
    let order = h.order;
    let hb: Vec<Series> = h.h_bar().iter().map(|s| s.embed(&amb)).collect::<Result<_>>()?;
    let mut sub: Vec<Series> = (0..amb.len()).map(|i| Series::var_idx(&amb, i, order)).collect();
    let vals = slots.values(&slots.base, |k, al| {
        let mut e = vec![0u32; amb.len()];
        e[n..].copy_from_slice(al);
        Ok(hb[k].derive_multi(&e))
    })?;
    sub.extend(vals);
    for (x, y) in a.iter().zip(&cert.a) {
        let filled = x.compose(&sub)?;
        let ord = filled.order().min(y.order());
        if filled.truncate(ord) != y.truncate(ord) {
            return Err(Error::Verification("slot form of the solved identities disagrees with the certificate".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{s_solvable, solvability_certificate};
    use crate::corpus;
    use crate::propagate::table::direct_table;

    #[test]
    fn solved_form_matches_oracle() {
        let h = corpus::id_quadric(12).unwrap();
        let k0 = s_solvable(&h, 4).unwrap().kappa0.unwrap();
        let cert = solvability_certificate(&h, k0).unwrap();
        for t in iterate_solvable(&cert, &h, 3, 2).unwrap() {
            let oracle = direct_table(&h, t.k, t.kappa).unwrap();
            assert!(t.agrees_with(&oracle), "k = {}: {:?}", t.k, t.mismatches(&oracle));
        }
    }

    #[test]
    fn unsolvable_map_has_no_certificate() {
        let h = corpus::quadric_embedding(2, 8).unwrap();
        assert!(solvability_certificate(&h, 4).is_err());
    }
}
