//! Generic submanifolds in graph form and formal maps between them.
//!
//! A manifold of CR dimension `m` and codimension `d` is stored through
//! both solved forms of its complexification,
//! `z = ξ + iΘ̄(ζ, w, ξ)` and `ξ = z − iΘ(w, ζ, z)`.
//! Θ lives over the variables `(w, ζ, z)` and Θ̄ over `(w, ζ, ξ)`, always
//! with the names `w1.., zeta1.., z1.., xi1..`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fps::linalg::inverse;
use crate::fps::{implicit_solve, join_vars, mono_degree, vars, Gq, Series, Vars};

pub fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

/// Variable blocks of a space with `m` CR directions and `d` transversal ones.
#[derive(Clone, Debug)]
pub struct Blocks {
    pub w: Vars,
    pub z: Vars,
    pub zeta: Vars,
    pub xi: Vars,
}

impl Blocks {
    pub fn new(m: usize, d: usize) -> Self {
        Self::with_suffix(m, d, "")
    }

    /// Blocks for the target space, named `wp1.., zp1.., zetap1.., xip1..`.
    pub fn primed(m: usize, d: usize) -> Self {
        Self::with_suffix(m, d, "p")
    }

    fn with_suffix(m: usize, d: usize, p: &str) -> Self {
        Blocks {
            w: vars(&names(&format!("w{p}"), m)),
            z: vars(&names(&format!("z{p}"), d)),
            zeta: vars(&names(&format!("zeta{p}"), m)),
            xi: vars(&names(&format!("xi{p}"), d)),
        }
    }

    /// `(w, z)`
    pub fn t(&self) -> Vars {
        join_vars(&[&self.w, &self.z])
    }

    /// `(ζ, ξ)`
    pub fn tau(&self) -> Vars {
        join_vars(&[&self.zeta, &self.xi])
    }

    /// `(w, z, ζ, ξ)`
    pub fn ambient(&self) -> Vars {
        join_vars(&[&self.w, &self.z, &self.zeta, &self.xi])
    }

    /// `(w, ζ, z)`, the variables of Θ.
    pub fn theta_vars(&self) -> Vars {
        join_vars(&[&self.w, &self.zeta, &self.z])
    }

    /// `(w, ζ, ξ)`, the variables of Θ̄.
    pub fn theta_bar_vars(&self) -> Vars {
        join_vars(&[&self.w, &self.zeta, &self.xi])
    }
}

/// Coefficient conjugation combined with the `w ↔ ζ` swap, mapping a
/// series over `(w, ζ, a)` to one over `(w, ζ, b)` with `target` naming.
/// This is how Θ̄ is read off Θ for a real manifold, and vice versa.
pub fn conj_swap(s: &Series, m: usize, target: &Vars) -> Series {
    let terms = s.terms().iter().map(|(e, c)| {
        let mut e2 = e.clone();
        e2[..m].copy_from_slice(&e[m..2 * m]);
        e2[m..2 * m].copy_from_slice(&e[..m]);
        (e2, c.conj())
    });
    Series::from_terms(target, s.order(), terms)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericManifold {
    pub name: String,
    pub m: usize,
    pub d: usize,
    pub order: u32,
    /// Θ(w, ζ, z), `d` components over [`Blocks::theta_vars`].
    pub theta: Vec<Series>,
    /// Θ̄(ζ, w, ξ), `d` components over [`Blocks::theta_bar_vars`].
    pub theta_bar: Vec<Series>,
    pub normal: bool,
}

fn check_vanishing_jet(s: &[Series], what: &str) -> Result<()> {
    for c in s {
        if c.terms().keys().any(|e| mono_degree(e) < 2) {
            return Err(Error::Precondition(format!("{what} must vanish to second order at 0")));
        }
    }
    Ok(())
}

impl GenericManifold {
    pub fn blocks(&self) -> Blocks {
        Blocks::new(self.m, self.d)
    }

    pub fn n(&self) -> usize {
        self.m + self.d
    }

    fn assemble(name: &str, m: usize, d: usize, order: u32, theta: Vec<Series>, theta_bar: Vec<Series>) -> Self {
        let mut mf = GenericManifold { name: name.to_string(), m, d, order, theta, theta_bar, normal: false };
        mf.normal = verify_normal(&mf);
        mf
    }

    /// Builds a manifold from Θ̄ as given in input files; Θ is its
    /// conjugate and the reality identities are verified, not assumed.
    pub fn from_theta_bar(name: &str, m: usize, d: usize, theta_bar: Vec<Series>) -> Result<Self> {
        let b = Blocks::new(m, d);
        if theta_bar.len() != d {
            return Err(Error::Dimension(format!("expected {d} components of theta_bar")));
        }
        let order = theta_bar.iter().map(|s| s.order()).min().unwrap_or(0);
        let theta_bar: Vec<Series> = theta_bar.iter().map(|s| s.embed(&b.theta_bar_vars()).map(|x| x.truncate(order))).collect::<Result<_>>()?;
        check_vanishing_jet(&theta_bar, "theta_bar")?;
        let theta = theta_bar.iter().map(|s| conj_swap(s, m, &b.theta_vars())).collect();
        let mf = Self::assemble(name, m, d, order, theta, theta_bar);
        let (r1, r2) = verify_reality(&mf)?;
        if r1.iter().chain(r2.iter()).any(|r| !r.is_zero()) {
            return Err(Error::Reality(format!("{name}: reality identities fail")));
        }
        Ok(mf)
    }

    /// Builds a manifold from Θ alone, solving for Θ̄ by the fixed point.
    pub fn from_theta(name: &str, m: usize, d: usize, theta: Vec<Series>) -> Result<Self> {
        let b = Blocks::new(m, d);
        let order = theta.iter().map(|s| s.order()).min().unwrap_or(0);
        let theta: Vec<Series> = theta.iter().map(|s| s.embed(&b.theta_vars()).map(|x| x.truncate(order))).collect::<Result<_>>()?;
        check_vanishing_jet(&theta, "theta")?;
        let theta_bar = conjugate_theta(&theta, m, d)?;
        Ok(Self::assemble(name, m, d, order, theta, theta_bar))
    }

    /// Assembles a manifold from an explicit pair without any check; used
    /// to exercise [`verify_reality`] on deliberately broken data.
    pub fn from_pair_unchecked(name: &str, m: usize, d: usize, theta: Vec<Series>, theta_bar: Vec<Series>) -> Self {
        let order = theta.iter().chain(theta_bar.iter()).map(|s| s.order()).min().unwrap_or(0);
        Self::assemble(name, m, d, order, theta, theta_bar)
    }

    /// The Levi-flat manifold `z = z̄` in ℂ^{m+d}.
    pub fn levi_flat(m: usize, d: usize, order: u32) -> Self {
        let b = Blocks::new(m, d);
        let theta = vec![Series::zero(&b.theta_vars(), order); d];
        let theta_bar = vec![Series::zero(&b.theta_bar_vars(), order); d];
        Self::assemble("levi_flat", m, d, order, theta, theta_bar)
    }

    pub fn with_order(&self, order: u32) -> Self {
        let order = order.min(self.order);
        GenericManifold {
            order,
            theta: self.theta.iter().map(|s| s.truncate(order)).collect(),
            theta_bar: self.theta_bar.iter().map(|s| s.truncate(order)).collect(),
            ..self.clone()
        }
    }

    /// The same manifold at another order; raising the order reads the
    /// stored Θ̄ as exact polynomial data.
    pub fn reorder(&self, order: u32) -> Result<Self> {
        if order <= self.order {
            return Ok(self.with_order(order));
        }
        let tb = self.theta_bar.iter().map(|s| s.assume_exact_to(order)).collect();
        Self::from_theta_bar(&self.name, self.m, self.d, tb)
    }

    /// `ρ = ξ − z + iΘ(w, ζ, z)` over the ambient variables `(w, z, ζ, ξ)`.
    pub fn rho(&self) -> Result<Vec<Series>> {
        let b = self.blocks();
        let amb = b.ambient();
        (0..self.d)
            .map(|l| {
                let th = self.theta[l].embed(&amb)?;
                let xi = Series::var(&amb, &b.xi[l], self.order)?;
                let z = Series::var(&amb, &b.z[l], self.order)?;
                Ok(&(&xi - &z) + &th.scale(&Gq::i()))
            })
            .collect()
    }

    /// `ξ(w, ζ, z) = z − iΘ(w, ζ, z)` over Θ's variables.
    pub fn xi_on_m(&self) -> Vec<Series> {
        let tv = self.blocks().theta_vars();
        (0..self.d)
            .map(|l| {
                let z = Series::var_idx(&tv, 2 * self.m + l, self.order);
                &z - &self.theta[l].scale(&Gq::i())
            })
            .collect()
    }

    /// `z(w, ζ, ξ) = ξ + iΘ̄(ζ, w, ξ)` over Θ̄'s variables.
    pub fn z_on_m(&self) -> Vec<Series> {
        let tv = self.blocks().theta_bar_vars();
        (0..self.d)
            .map(|l| {
                let xi = Series::var_idx(&tv, 2 * self.m + l, self.order);
                &xi + &self.theta_bar[l].scale(&Gq::i())
            })
            .collect()
    }
}

/// Solves `Θ̄(ζ, w, ξ) = Θ(w, ζ, ξ + iΘ̄(ζ, w, ξ))` degree by degree.
///
/// For a real Θ the result coincides with [`conj_swap`] of Θ; for a
/// non-real Θ it is still the unique formal solution, and the discrepancy
/// with the coefficientwise conjugate is what [`verify_reality`] reports.
pub fn conjugate_theta(theta: &[Series], m: usize, d: usize) -> Result<Vec<Series>> {
    let b = Blocks::new(m, d);
    let order = theta.iter().map(|s| s.order()).min().unwrap_or(0);
    check_vanishing_jet(theta, "theta")?;
    let u = vars(&names("u", d));
    let all = join_vars(&[&b.theta_bar_vars(), &u]);
    let mut subs = Vec::new();
    for i in 0..2 * m {
        subs.push(Series::var_idx(&all, i, order));
    }
    for l in 0..d {
        let xi = Series::var_idx(&all, 2 * m + l, order);
        let ul = Series::var_idx(&all, 2 * m + d + l, order);
        subs.push(&xi + &ul.scale(&Gq::i()));
    }
    let f: Vec<Series> = (0..d)
        .map(|l| Ok(&Series::var_idx(&all, 2 * m + d + l, order) - &theta[l].compose(&subs)?))
        .collect::<Result<_>>()?;
    let unames: Vec<&str> = u.iter().map(|s| s.as_str()).collect();
    implicit_solve(&f, &unames).map_err(|e| match e {
        Error::Inconsistent(msg) => Error::Reality(format!("fixed point for theta_bar: {msg}")),
        other => other,
    })
}

/// Inverse of [`conjugate_theta`]: solves `Θ(w, ζ, z) = Θ̄(ζ, w, z − iΘ(w, ζ, z))`.
pub fn theta_from_conjugate(theta_bar: &[Series], m: usize, d: usize) -> Result<Vec<Series>> {
    let b = Blocks::new(m, d);
    let order = theta_bar.iter().map(|s| s.order()).min().unwrap_or(0);
    let u = vars(&names("u", d));
    let all = join_vars(&[&b.theta_vars(), &u]);
    let mut subs = Vec::new();
    for i in 0..2 * m {
        subs.push(Series::var_idx(&all, i, order));
    }
    for l in 0..d {
        let z = Series::var_idx(&all, 2 * m + l, order);
        let ul = Series::var_idx(&all, 2 * m + d + l, order);
        subs.push(&z - &ul.scale(&Gq::i()));
    }
    let f: Vec<Series> = (0..d)
        .map(|l| Ok(&Series::var_idx(&all, 2 * m + d + l, order) - &theta_bar[l].compose(&subs)?))
        .collect::<Result<_>>()?;
    let unames: Vec<&str> = u.iter().map(|s| s.as_str()).collect();
    implicit_solve(&f, &unames)
}

/// Variables of graph data `y = h(w, w̄, x)`: `w1.., wbar1.., x1..`.
pub fn graph_vars(m: usize, d: usize) -> Vars {
    join_vars(&[&vars(&names("w", m)), &vars(&names("wbar", m)), &vars(&names("x", d))])
}

/// Converts graph data `y = h(w, w̄, x)` to the solved forms Θ, Θ̄ by
/// substituting `y = (z − z̄)/2i`, `x = (z + z̄)/2` and solving implicitly.
pub fn theta_from_graph(name: &str, m: usize, d: usize, h: &[Series], order: u32) -> Result<GenericManifold> {
    let gv = graph_vars(m, d);
    if h.len() != d {
        return Err(Error::Dimension(format!("expected {d} graph components")));
    }
    let h: Vec<Series> = h.iter().map(|s| s.embed(&gv).map(|x| x.truncate(order))).collect::<Result<_>>()?;
    check_vanishing_jet(&h, "graph function")?;
    for s in &h {
        for (e, c) in s.terms() {
            let mut e2 = e.clone();
            e2[..m].copy_from_slice(&e[m..2 * m]);
            e2[m..2 * m].copy_from_slice(&e[..m]);
            if s.coeff(&e2) != c.conj() {
                return Err(Error::Reality(format!("graph coefficient at {e:?} is not hermitian")));
            }
        }
    }
    let order = h.iter().map(|s| s.order()).min().unwrap_or(order);
    let b = Blocks::new(m, d);
    let tbv = b.theta_bar_vars();
    let tv = b.theta_vars();
    // z over (w, ζ, ξ) gives Θ̄ = (z − ξ)/i; ξ over (w, ζ, z) gives Θ = (z − ξ)/i.
    let z_sol = solve_graph_side(&h, m, d, order, true)?;
    let xi_sol = solve_graph_side(&h, m, d, order, false)?;
    let minus_i = Gq::from_ints(0, -1);
    let theta_bar: Vec<Series> = (0..d).map(|l| (&z_sol[l] - &Series::var_idx(&tbv, 2 * m + l, order)).scale(&minus_i)).collect();
    let theta: Vec<Series> = (0..d).map(|l| (&Series::var_idx(&tv, 2 * m + l, order) - &xi_sol[l]).scale(&minus_i)).collect();
    let mf = GenericManifold::assemble(name, m, d, order, theta, theta_bar);
    let (r1, r2) = verify_reality(&mf)?;
    if r1.iter().chain(r2.iter()).any(|r| !r.is_zero()) {
        return Err(Error::Reality(format!("{name}: graph conversion fails the reality identities")));
    }
    Ok(mf)
}

/// Solves `z − ξ = 2i·h(w, ζ, (z + ξ)/2)` for `z` (given ξ) or for `ξ` (given z).
fn solve_graph_side(h: &[Series], m: usize, d: usize, order: u32, for_z: bool) -> Result<Vec<Series>> {
    let b = Blocks::new(m, d);
    let (known, base) = if for_z { (&b.xi, b.theta_bar_vars()) } else { (&b.z, b.theta_vars()) };
    let u = vars(&names("u", d));
    let all = join_vars(&[&b.w, &b.zeta, known, &u]);
    let half = Gq::frac(1, 2);
    let two_i = Gq::from_ints(0, 2);
    let mut subs = Vec::new();
    for i in 0..2 * m {
        subs.push(Series::var_idx(&all, i, order));
    }
    for l in 0..d {
        let k = Series::var_idx(&all, 2 * m + l, order);
        let ul = Series::var_idx(&all, 2 * m + d + l, order);
        subs.push((&k + &ul).scale(&half));
    }
    let f: Vec<Series> = (0..d)
        .map(|l| {
            let k = Series::var_idx(&all, 2 * m + l, order);
            let ul = Series::var_idx(&all, 2 * m + d + l, order);
            let diff = if for_z { &ul - &k } else { &k - &ul };
            Ok(&diff - &h[l].compose(&subs)?.scale(&two_i))
        })
        .collect::<Result<_>>()?;
    let unames: Vec<&str> = u.iter().map(|s| s.as_str()).collect();
    let sol = implicit_solve(&f, &unames)?;
    Ok(sol.into_iter().map(|s| s.rename(&base)).collect())
}

/// Both residuals of the reality identities:
/// `Θ − Θ̄(ζ, w, z − iΘ)` over `(w, ζ, z)` and `Θ̄ − Θ(w, ζ, ξ + iΘ̄)` over
/// `(w, ζ, ξ)`. Empty (all zero) means the pair is consistent.
pub fn verify_reality(mf: &GenericManifold) -> Result<(Vec<Series>, Vec<Series>)> {
    let (m, d) = (mf.m, mf.d);
    let tv = mf.blocks().theta_vars();
    let tbv = mf.blocks().theta_bar_vars();
    let mut sub1 = Vec::new();
    for i in 0..2 * m {
        sub1.push(Series::var_idx(&tv, i, mf.order));
    }
    sub1.extend(mf.xi_on_m());
    let mut sub2 = Vec::new();
    for i in 0..2 * m {
        sub2.push(Series::var_idx(&tbv, i, mf.order));
    }
    sub2.extend(mf.z_on_m());
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for l in 0..d {
        r1.push(&mf.theta[l] - &mf.theta_bar[l].compose(&sub1)?);
        r2.push(&mf.theta_bar[l] - &mf.theta[l].compose(&sub2)?);
    }
    Ok((r1, r2))
}

/// `Θ(0, ζ, z) ≡ 0` and `Θ(w, 0, z) ≡ 0` at the stored order.
pub fn verify_normal(mf: &GenericManifold) -> bool {
    let m = mf.m;
    let w_idx: Vec<usize> = (0..m).collect();
    let zeta_idx: Vec<usize> = (m..2 * m).collect();
    mf.theta.iter().all(|s| s.restrict_zero(&w_idx).is_zero() && s.restrict_zero(&zeta_idx).is_zero())
}

/// A formal map `h = (g, f)` from `(ℂ^n, source)` to `(ℂ^{n'}, target)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalMap {
    pub name: String,
    pub source: Arc<GenericManifold>,
    pub target: Arc<GenericManifold>,
    /// `m'` components over the source `t = (w, z)`.
    pub g: Vec<Series>,
    /// `d'` components over the source `t = (w, z)`.
    pub f: Vec<Series>,
    pub order: u32,
}

impl FormalMap {
    pub fn new(name: &str, source: Arc<GenericManifold>, target: Arc<GenericManifold>, h: Vec<Series>) -> Result<Self> {
        let t = source.blocks().t();
        let (mp, dp) = (target.m, target.d);
        if h.len() != mp + dp {
            return Err(Error::Dimension(format!("map needs {} components, got {}", mp + dp, h.len())));
        }
        let order = h.iter().map(|s| s.order()).min().unwrap_or(0).min(source.order).min(target.order);
        let h: Vec<Series> = h.iter().map(|s| s.embed(&t).map(|x| x.truncate(order))).collect::<Result<_>>()?;
        for c in &h {
            if !c.constant_term().is_zero() {
                return Err(Error::Precondition("map must send 0 to 0".into()));
            }
        }
        let f = h[mp..].to_vec();
        let g = h[..mp].to_vec();
        Ok(FormalMap { name: name.to_string(), source, target, g, f, order })
    }

    pub fn identity(mf: Arc<GenericManifold>) -> Self {
        let t = mf.blocks().t();
        let h: Vec<Series> = (0..mf.n()).map(|i| Series::var_idx(&t, i, mf.order)).collect();
        FormalMap::new(&format!("id_{}", mf.name), mf.clone(), mf, h).expect("identity map is well formed")
    }

    /// All components `(g, f)` over the source `t`.
    pub fn h(&self) -> Vec<Series> {
        self.g.iter().chain(self.f.iter()).cloned().collect()
    }

    /// `h̄(τ)`: conjugated coefficients, `t` renamed to `τ = (ζ, ξ)`.
    pub fn h_bar(&self) -> Vec<Series> {
        let tau = self.source.blocks().tau();
        self.h().iter().map(|s| s.conj().rename(&tau)).collect()
    }

    pub fn with_order(&self, order: u32) -> Self {
        let order = order.min(self.order);
        FormalMap {
            g: self.g.iter().map(|s| s.truncate(order)).collect(),
            f: self.f.iter().map(|s| s.truncate(order)).collect(),
            order,
            ..self.clone()
        }
    }

    /// The same map at another order; raising the order reads the stored
    /// components and both manifolds as exact polynomial data.
    pub fn reorder(&self, order: u32) -> Result<Self> {
        if order <= self.order {
            return Ok(self.with_order(order));
        }
        let source = Arc::new(self.source.reorder(order)?);
        let target = if Arc::ptr_eq(&self.source, &self.target) { source.clone() } else { Arc::new(self.target.reorder(order)?) };
        let h = self.h().iter().map(|s| s.assume_exact_to(order)).collect();
        FormalMap::new(&self.name, source, target, h)
    }
}

/// A linear change of coordinates `(w, z) ↦ (Aw, Bz)` with `A` invertible
/// and `B` real invertible, which keeps the graph form.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearChange {
    pub a: Vec<Vec<Gq>>,
    pub b: Vec<Vec<Gq>>,
}

fn lin_images(mat: &[Vec<Gq>], vs: &Vars, offset: usize, order: u32) -> Vec<Series> {
    mat.iter()
        .map(|row| row.iter().enumerate().fold(Series::zero(vs, order), |acc, (j, c)| &acc + &Series::var_idx(vs, offset + j, order).scale(c)))
        .collect()
}

fn conj_matrix(mat: &[Vec<Gq>]) -> Vec<Vec<Gq>> {
    mat.iter().map(|r| r.iter().map(|c| c.conj()).collect()).collect()
}

impl LinearChange {
    pub fn new(a: Vec<Vec<Gq>>, b: Vec<Vec<Gq>>) -> Result<Self> {
        if b.iter().flatten().any(|c| !c.conj().eq(c)) {
            return Err(Error::Precondition("the transversal block of a linear change must be real".into()));
        }
        if inverse(&a).is_none() || inverse(&b).is_none() {
            return Err(Error::Precondition("linear change is not invertible".into()));
        }
        Ok(LinearChange { a, b })
    }

    fn inverse(&self) -> Self {
        LinearChange { a: inverse(&self.a).expect("checked"), b: inverse(&self.b).expect("checked") }
    }

    /// `(Aw, Bz)` over the given `t`-type variables.
    fn apply_t(&self, vs: &Vars, order: u32) -> Vec<Series> {
        let m = self.a.len();
        let mut out = lin_images(&self.a, vs, 0, order);
        out.extend(lin_images(&self.b, vs, m, order));
        out
    }

    /// The manifold in the new coordinates:
    /// `Θ̄_new(w, ζ, ξ) = B Θ̄(A⁻¹w, Ā⁻¹ζ, B⁻¹ξ)`.
    pub fn manifold(&self, mf: &GenericManifold) -> Result<GenericManifold> {
        let (m, d) = (mf.m, mf.d);
        if self.a.len() != m || self.b.len() != d {
            return Err(Error::Dimension("linear change does not match the manifold".into()));
        }
        let inv = self.inverse();
        let v = mf.blocks().theta_bar_vars();
        let mut sub = lin_images(&inv.a, &v, 0, mf.order);
        sub.extend(lin_images(&conj_matrix(&inv.a), &v, m, mf.order));
        sub.extend(lin_images(&inv.b, &v, 2 * m, mf.order));
        let old: Vec<Series> = mf.theta_bar.iter().map(|s| s.compose(&sub)).collect::<Result<_>>()?;
        let tb = self
            .b
            .iter()
            .map(|row| row.iter().zip(&old).fold(Series::zero(&v, mf.order), |acc, (c, s)| &acc + &s.scale(c)))
            .collect();
        GenericManifold::from_theta_bar(&mf.name, m, d, tb)
    }

    /// `L' ∘ h ∘ L⁻¹` between the transformed manifolds.
    pub fn map(h: &FormalMap, src: &LinearChange, tgt: &LinearChange) -> Result<FormalMap> {
        let source = Arc::new(src.manifold(&h.source)?);
        let target = if Arc::ptr_eq(&h.source, &h.target) && src == tgt { source.clone() } else { Arc::new(tgt.manifold(&h.target)?) };
        let t = h.source.blocks().t();
        let back = src.inverse().apply_t(&t, h.order);
        let inner: Vec<Series> = h.h().iter().map(|s| s.compose(&back)).collect::<Result<_>>()?;
        let mp = h.target.m;
        let mut comps = Vec::new();
        for row in &tgt.a {
            comps.push(row.iter().zip(&inner[..mp]).fold(Series::zero(&t, h.order), |acc, (c, s)| &acc + &s.scale(c)));
        }
        for row in &tgt.b {
            comps.push(row.iter().zip(&inner[mp..]).fold(Series::zero(&t, h.order), |acc, (c, s)| &acc + &s.scale(c)));
        }
        FormalMap::new(&h.name, source, target, comps)
    }

    /// The change itself as a map from `mf` to its image.
    pub fn as_map(&self, mf: &Arc<GenericManifold>) -> Result<FormalMap> {
        let image = Arc::new(self.manifold(mf)?);
        let t = mf.blocks().t();
        FormalMap::new("linear_change", mf.clone(), image, self.apply_t(&t, mf.order))
    }
}

/// Residual `f(w,z) − [f̄(ζ,ξ) + iΘ̄'(ḡ(ζ,ξ), g(w,z), f̄(ζ,ξ))]` with
/// `ξ := z − iΘ(w,ζ,z)`, over `(w, ζ, z)`. Zero certifies that `h` maps
/// the source into the target at the working order.
pub fn verify_maps_into(h: &FormalMap) -> Result<Vec<Series>> {
    let src = &h.source;
    let tgt = &h.target;
    let (m, d) = (src.m, src.d);
    let (mp, dp) = (tgt.m, tgt.d);
    let order = h.order;
    let v = src.blocks().theta_vars();
    // (w, z) and (ζ, ξ(w, ζ, z)) expressed over v = (w, ζ, z).
    let mut t_sub = Vec::new();
    for i in 0..m {
        t_sub.push(Series::var_idx(&v, i, order));
    }
    for l in 0..d {
        t_sub.push(Series::var_idx(&v, 2 * m + l, order));
    }
    let mut tau_sub = Vec::new();
    for i in 0..m {
        tau_sub.push(Series::var_idx(&v, m + i, order));
    }
    tau_sub.extend(src.xi_on_m().into_iter().map(|s| s.truncate(order)));
    let hv: Vec<Series> = h.h().iter().map(|s| s.compose(&t_sub)).collect::<Result<_>>()?;
    let hbv: Vec<Series> = h.h_bar().iter().map(|s| s.compose(&tau_sub)).collect::<Result<_>>()?;
    // Θ̄' over (w', ζ', ξ'): w' ← g, ζ' ← ḡ, ξ' ← f̄.
    let mut sub = Vec::new();
    sub.extend(hv[..mp].iter().cloned());
    sub.extend(hbv[..mp].iter().cloned());
    sub.extend(hbv[mp..].iter().cloned());
    (0..dp)
        .map(|l| {
            let tb = tgt.theta_bar[l].compose(&sub)?;
            Ok(&(&hv[mp + l] - &hbv[mp + l]) - &tb.scale(&Gq::i()))
        })
        .collect()
}

/// The σ-counterpart: `f̄(ζ,ξ) − [f(w,z) − iΘ'(g(w,z), ḡ(ζ,ξ), f(w,z))]`
/// with `z := ξ + iΘ̄(ζ,w,ξ)`, over `(w, ζ, ξ)`.
pub fn verify_maps_into_conj(h: &FormalMap) -> Result<Vec<Series>> {
    let src = &h.source;
    let tgt = &h.target;
    let (m, d) = (src.m, src.d);
    let (mp, dp) = (tgt.m, tgt.d);
    let order = h.order;
    let v = src.blocks().theta_bar_vars();
    let mut t_sub = Vec::new();
    for i in 0..m {
        t_sub.push(Series::var_idx(&v, i, order));
    }
    t_sub.extend(src.z_on_m().into_iter().map(|s| s.truncate(order)));
    let mut tau_sub = Vec::new();
    for i in 0..m {
        tau_sub.push(Series::var_idx(&v, m + i, order));
    }
    for l in 0..d {
        tau_sub.push(Series::var_idx(&v, 2 * m + l, order));
    }
    let hv: Vec<Series> = h.h().iter().map(|s| s.compose(&t_sub)).collect::<Result<_>>()?;
    let hbv: Vec<Series> = h.h_bar().iter().map(|s| s.compose(&tau_sub)).collect::<Result<_>>()?;
    let mut sub = Vec::new();
    sub.extend(hv[..mp].iter().cloned());
    sub.extend(hbv[..mp].iter().cloned());
    sub.extend(hv[mp..].iter().cloned());
    (0..dp)
        .map(|l| {
            let th = tgt.theta[l].compose(&sub)?;
            Ok(&(&hbv[mp + l] - &hv[mp + l]) + &th.scale(&Gq::i()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadric_manifold(order: u32) -> GenericManifold {
        let b = Blocks::new(1, 1);
        let tb = b.theta_bar_vars();
        let s = &Series::var(&tb, "w1", order).unwrap() * &Series::var(&tb, "zeta1", order).unwrap();
        GenericManifold::from_theta_bar("quadric", 1, 1, vec![s]).unwrap()
    }

    #[test]
    fn real_theta_is_its_own_conjugate() {
        let mf = quadric_manifold(6);
        assert_eq!(mf.theta[0].to_string(), "w1*zeta1");
        assert!(mf.normal);
        let tb = conjugate_theta(&mf.theta, 1, 1).unwrap();
        assert_eq!(tb, mf.theta_bar);
    }

    #[test]
    fn non_real_theta_fixed_point() {
        let b = Blocks::new(1, 1);
        let tv = b.theta_vars();
        let w = Series::var(&tv, "w1", 8).unwrap();
        let ze = Series::var(&tv, "zeta1", 8).unwrap();
        let z = Series::var(&tv, "z1", 8).unwrap();
        let theta = &(&w * &ze) + &(&(&(&w * &w) * &(&ze * &ze)) * &z);
        let tb = conjugate_theta(&[theta.clone()], 1, 1).unwrap();
        let tbv = b.theta_bar_vars();
        let expect = Series::from_terms(&tbv, 8, [(vec![1, 1, 0], Gq::one()), (vec![2, 2, 1], Gq::one()), (vec![3, 3, 0], Gq::i())]);
        assert_eq!(tb[0].truncate(7), expect.truncate(7));
        let back = theta_from_conjugate(&tb, 1, 1).unwrap();
        assert_eq!(back[0], theta);
    }

    #[test]
    fn graph_conversion_doubles_levi_form() {
        let gv = graph_vars(1, 1);
        let h = &Series::var(&gv, "w1", 6).unwrap() * &Series::var(&gv, "wbar1", 6).unwrap();
        let mf = theta_from_graph("g", 1, 1, &[h], 6).unwrap();
        assert_eq!(mf.theta_bar[0].to_string(), "2*w1*zeta1");
        assert_eq!(mf.theta[0].to_string(), "2*w1*zeta1");
    }

    #[test]
    fn corrupted_pair_fails_reality() {
        let mf = quadric_manifold(5);
        let broken = GenericManifold::from_pair_unchecked("bad", 1, 1, mf.theta.clone(), vec![mf.theta_bar[0].scale(&Gq::int(2))]);
        let (r1, _) = verify_reality(&broken).unwrap();
        assert_eq!(r1[0].valuation(), Some(2));
    }

    #[test]
    fn identity_maps_into_itself() {
        let mf = Arc::new(quadric_manifold(6));
        let id = FormalMap::identity(mf);
        assert!(verify_maps_into(&id).unwrap().iter().all(|r| r.is_zero()));
        assert!(verify_maps_into_conj(&id).unwrap().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn linear_change_maps_into_image() {
        let src = crate::corpus::bidegree(6).unwrap();
        let mf = Arc::new(src);
        let ch = LinearChange::new(
            vec![vec![Gq::int(1), Gq::i()], vec![Gq::from_ints(2, -1), Gq::int(3)]],
            vec![vec![Gq::frac(1, 2)]],
        )
        .unwrap();
        let l = ch.as_map(&mf).unwrap();
        assert!(verify_maps_into(&l).unwrap().iter().all(|r| r.is_zero()));
        let id = FormalMap::identity(mf.clone());
        let moved = LinearChange::map(&id, &ch, &ch).unwrap();
        assert!(verify_maps_into(&moved).unwrap().iter().all(|r| r.is_zero()));
        assert!(LinearChange::new(vec![vec![Gq::one()]], vec![vec![Gq::i()]]).is_err());
    }
}
