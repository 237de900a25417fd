//! The example manifolds and maps used throughout the tests, examples and
//! golden files, built directly in code.

use std::sync::Arc;

use crate::error::Result;
use crate::fps::{parse_series, Gq, Series};
use rand::Rng;

use crate::manifold::{graph_vars, theta_from_graph, Blocks, FormalMap, GenericManifold};

/// A manifold from Θ̄ components written in the expression grammar.
pub fn manifold(name: &str, m: usize, d: usize, order: u32, theta_bar: &[&str]) -> Result<GenericManifold> {
    let v = Blocks::new(m, d).theta_bar_vars();
    let tb = theta_bar.iter().map(|t| parse_series(t, &v, order)).collect::<Result<Vec<_>>>()?;
    GenericManifold::from_theta_bar(name, m, d, tb)
}

/// A map from its components written over `w*, z*`.
pub fn map(name: &str, source: &Arc<GenericManifold>, target: &Arc<GenericManifold>, h: &[&str]) -> Result<FormalMap> {
    let t = source.blocks().t();
    let comps = h.iter().map(|c| parse_series(c, &t, source.order)).collect::<Result<Vec<_>>>()?;
    FormalMap::new(name, source.clone(), target.clone(), comps)
}

/// `z = z̄ + i z₁z̄₁` in ℂ².
pub fn quadric(order: u32) -> Result<GenericManifold> {
    manifold("quadric", 1, 1, order, &["w1*zeta1"])
}

/// `z = z̄ + i(z₁z̄₁ + z₁^a z̄₂^a + z̄₁^a z₂^a)` in ℂ³.
pub fn quadric_target(a: u32, order: u32) -> Result<GenericManifold> {
    let t = format!("w1*zeta1 + w1^{a}*zeta2^{a} + zeta1^{a}*w2^{a}");
    manifold(&format!("quadric_target_a{a}"), 2, 1, order, &[&t])
}

/// `(z₁, z₃) ↦ (z₁, 0, z₃)` into [`quadric_target`].
pub fn quadric_embedding(a: u32, order: u32) -> Result<FormalMap> {
    let s = Arc::new(quadric(order)?);
    let t = Arc::new(quadric_target(a, order)?);
    map(&format!("quadric_embedding_a{a}"), &s, &t, &["w1", "0", "z1"])
}

pub fn quartic(order: u32) -> Result<GenericManifold> {
    manifold("quartic", 1, 1, order, &["w1^2*zeta1^2"])
}

pub fn quartic_target(order: u32) -> Result<GenericManifold> {
    manifold("quartic_target", 2, 1, order, &["w1^2*zeta1^2 + w1*zeta2^2 + zeta1*w2^2"])
}

pub fn quartic_embedding(order: u32) -> Result<FormalMap> {
    let s = Arc::new(quartic(order)?);
    let t = Arc::new(quartic_target(order)?);
    map("quartic_embedding", &s, &t, &["w1", "0", "z1"])
}

pub fn bidegree(order: u32) -> Result<GenericManifold> {
    manifold("bidegree", 2, 1, order, &["w1*zeta1*(1 + w2*zeta2)"])
}

pub fn id_bidegree(order: u32) -> Result<FormalMap> {
    Ok(FormalMap::identity(Arc::new(bidegree(order)?)))
}

/// Graph function of a rational hypersurface in ℂ³,
/// `y = |z₁|²|1 + z₁z̄₂|²/(1 + Re z₁z̄₂) − x·Im(z₁z̄₂)/(1 + Re z₁z̄₂)`.
pub fn rational_graph_function(order: u32) -> Result<Series> {
    let gv = graph_vars(2, 1);
    let p = |t: &str| parse_series(t, &gv, order);
    let re = p("1/2*w1*wbar2 + 1/2*wbar1*w2")?;
    let im = p("w1*wbar2 - wbar1*w2")?.scale(&(Gq::frac(-1, 2) * Gq::i()));
    let inv = (&Series::one(&gv, order) + &re).invert_unit()?;
    let num = &(&p("w1*wbar1")? * &p("1 + w1*wbar2")?) * &p("1 + wbar1*w2")?;
    let x = p("x1")?;
    Ok(&(&num * &inv) - &(&(&x * &im) * &inv))
}

/// Θ of the hypersurface of [`rational_graph_function`].
pub fn rational_graph(order: u32) -> Result<GenericManifold> {
    theta_from_graph("rational_graph", 2, 1, &[rational_graph_function(order)?], order)
}

pub fn levi_flat(order: u32) -> GenericManifold {
    GenericManifold::levi_flat(1, 1, order)
}

/// Identity map of [`quadric`].
pub fn id_quadric(order: u32) -> Result<FormalMap> {
    Ok(FormalMap::identity(Arc::new(quadric(order)?)))
}

/// A random real graph `y = h(w, w̄, x)` with `terms` hermitian pairs of
/// monomials of degree 2 to 4 and coefficients of height at most `height`,
/// converted to Θ and Θ̄.
pub fn random_graph_manifold<R: Rng + ?Sized>(rng: &mut R, m: usize, d: usize, terms: usize, height: i64, order: u32) -> Result<GenericManifold> {
    let gv = graph_vars(m, d);
    let nv = gv.len();
    let mut comps = Vec::new();
    for _ in 0..d {
        let mut h = Series::zero(&gv, order);
        for _ in 0..terms {
            let deg = rng.gen_range(2..=4u32);
            let mut e = vec![0u8; nv];
            for _ in 0..deg {
                e[rng.gen_range(0..nv)] += 1;
            }
            let mut swapped = e.clone();
            swapped[..m].copy_from_slice(&e[m..2 * m]);
            swapped[m..2 * m].copy_from_slice(&e[..m]);
            let c = Gq::random_small(rng, height);
            let term = Series::monomial(&gv, order, e, c.clone());
            let partner = Series::monomial(&gv, order, swapped, c.conj());
            h = &(&h + &term) + &partner;
        }
        comps.push(h);
    }
    theta_from_graph("random_graph", m, d, &comps, order)
}
