//! Complexified CR vector fields, their flows, Segre chains and the
//! Segre type of a generic manifold.
//!
//! Points of the complexification are `2n`-vectors ordered `(w, z, ζ, ξ)`
//! whose entries are series in some parameter variables, all vanishing
//! at the origin.

mod rank;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rank::{
    generic_rank, jacobian, matrix_generic_rank, matrix_on_line, univariate_rank, RankCertificate, DEFAULT_SAMPLES,
    SAMPLE_HEIGHT,
};

use crate::error::{Error, Result};
use crate::fps::{join_vars, vars, Gq, Series, Vars};
use crate::manifold::GenericManifold;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    L,
    Lbar,
    Upsilon,
    UpsilonBar,
}

/// The four families of vector fields on the complexification, each
/// component stored as its `2n` coefficients over `(w, z, ζ, ξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldSystem {
    pub vars: Vars,
    pub l: Vec<Vec<Series>>,
    pub lbar: Vec<Vec<Series>>,
    pub upsilon: Vec<Vec<Series>>,
    pub upsilon_bar: Vec<Vec<Series>>,
}

impl VectorFieldSystem {
    pub fn family(&self, f: Field) -> &[Vec<Series>] {
        match f {
            Field::L => &self.l,
            Field::Lbar => &self.lbar,
            Field::Upsilon => &self.upsilon,
            Field::UpsilonBar => &self.upsilon_bar,
        }
    }
}

pub fn build_fields(mf: &GenericManifold) -> Result<VectorFieldSystem> {
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let b = mf.blocks();
    let amb = b.ambient();
    let order = mf.order;
    let theta: Vec<Series> = mf.theta.iter().map(|s| s.embed(&amb)).collect::<Result<_>>()?;
    let theta_bar: Vec<Series> = mf.theta_bar.iter().map(|s| s.embed(&amb)).collect::<Result<_>>()?;
    let zero = Series::zero(&amb, order);
    let one = Series::one(&amb, order);
    let i = Gq::i();
    let mi = Gq::from_ints(0, -1);
    let (wi, zi, zetai, xii) = (0, m, n, n + m);
    let mut l = Vec::new();
    let mut lbar = Vec::new();
    for j in 0..m {
        let mut c = vec![zero.clone(); 2 * n];
        c[wi + j] = one.clone();
        for k in 0..d {
            c[zi + k] = theta_bar[k].derive_idx(wi + j).scale(&i);
        }
        l.push(c);
        let mut c = vec![zero.clone(); 2 * n];
        c[zetai + j] = one.clone();
        for k in 0..d {
            c[xii + k] = theta[k].derive_idx(zetai + j).scale(&mi);
        }
        lbar.push(c);
    }
    let mut upsilon = Vec::new();
    let mut upsilon_bar = Vec::new();
    for j in 0..d {
        let mut c = vec![zero.clone(); 2 * n];
        c[zi + j] = one.clone();
        for k in 0..d {
            let delta = if j == k { one.clone() } else { zero.clone() };
            c[xii + k] = &delta - &theta[k].derive_idx(zi + j).scale(&i);
        }
        upsilon.push(c);
        let mut c = vec![zero.clone(); 2 * n];
        c[xii + j] = one.clone();
        for k in 0..d {
            let delta = if j == k { one.clone() } else { zero.clone() };
            c[zi + k] = &delta + &theta_bar[k].derive_idx(xii + j).scale(&i);
        }
        upsilon_bar.push(c);
    }
    Ok(VectorFieldSystem { vars: amb, l, lbar, upsilon, upsilon_bar })
}

/// Applies one field component, given by its coefficients, as a derivation.
pub fn apply_field(coeffs: &[Series], f: &Series) -> Result<Series> {
    if coeffs.len() != f.nvars() {
        return Err(Error::Dimension("field and series live on different spaces".into()));
    }
    let mut acc = Series::zero(f.vars(), f.order().saturating_sub(1));
    for (k, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if a.vars() != f.vars() {
            return Err(Error::VarMismatch("field coefficients".into()));
        }
        acc = &acc + &(a * &f.derive_idx(k));
    }
    Ok(acc)
}

/// `ρ(p) = ξ − z + iΘ(w, ζ, z)` evaluated on a point.
pub fn m_residual(mf: &GenericManifold, p: &[Series]) -> Result<Vec<Series>> {
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let sub = theta_args(p, m, n);
    (0..d)
        .map(|l| {
            let th = mf.theta[l].compose(&sub)?;
            Ok(&(&p[n + m + l] - &p[m + l]) + &th.scale(&Gq::i()))
        })
        .collect()
}

fn theta_args(p: &[Series], m: usize, n: usize) -> Vec<Series> {
    let mut v: Vec<Series> = p[..m].to_vec();
    v.extend(p[n..n + m].iter().cloned());
    v.extend(p[m..n].iter().cloned());
    v
}

fn theta_bar_args(p: &[Series], m: usize, n: usize) -> Vec<Series> {
    let mut v: Vec<Series> = p[..m].to_vec();
    v.extend(p[n..n + m].iter().cloned());
    v.extend(p[n + m..].iter().cloned());
    v
}

fn check_point(mf: &GenericManifold, p: &[Series]) -> Result<()> {
    if p.len() != 2 * mf.n() {
        return Err(Error::Dimension(format!("point has {} components, expected {}", p.len(), 2 * mf.n())));
    }
    if let Some(r) = m_residual(mf, p)?.into_iter().find(|r| !r.is_zero()) {
        return Err(Error::Precondition(format!("point off the complexification: residual {r}")));
    }
    Ok(())
}

/// Multi-flow of a field family from `p` with parameter vector `param`.
///
/// 𝓛 and 𝓛̄ use the closed forms obtained by shifting `w` (resp. `ζ`) and
/// re-solving the opposite coordinate; Υ and Ῡ are integrated as formal
/// ODEs, one component after the other.
pub fn flow(mf: &GenericManifold, fields: &VectorFieldSystem, field: Field, param: &[Series], p: &[Series]) -> Result<Vec<Series>> {
    check_point(mf, p)?;
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let want = if matches!(field, Field::L | Field::Lbar) { m } else { d };
    if param.len() != want {
        return Err(Error::Dimension(format!("flow parameter has {} components, expected {want}", param.len())));
    }
    let mut q = p.to_vec();
    match field {
        Field::L => {
            for j in 0..m {
                q[j] = &p[j] + &param[j];
            }
            let args = theta_bar_args(&q, m, n);
            for l in 0..d {
                q[m + l] = &p[n + m + l] + &mf.theta_bar[l].compose(&args)?.scale(&Gq::i());
            }
        }
        Field::Lbar => {
            for j in 0..m {
                q[n + j] = &p[n + j] + &param[j];
            }
            let args = theta_args(&q, m, n);
            for l in 0..d {
                q[n + m + l] = &p[m + l] - &mf.theta[l].compose(&args)?.scale(&Gq::i());
            }
        }
        Field::Upsilon | Field::UpsilonBar => {
            for (j, coeffs) in fields.family(field).iter().enumerate() {
                q = integrate_flow(coeffs, &param[j], &q)?;
            }
        }
    }
    Ok(q)
}

/// Flow of a single vector field by Picard iteration on `x' = a(x)`,
/// exact degree by degree, then evaluated at time `t`.
pub fn integrate_flow(coeffs: &[Series], t: &Series, p: &[Series]) -> Result<Vec<Series>> {
    let pv = t.vars().clone();
    let tname = "__flow_t";
    let ext = join_vars(&[&pv, &vars(&[tname])]);
    let ti = ext.len() - 1;
    let order = p.iter().chain(std::iter::once(t)).map(|s| s.order()).min().unwrap_or(0);
    let p_ext: Vec<Series> = p.iter().map(|s| s.embed(&ext).map(|x| x.truncate(order))).collect::<Result<_>>()?;
    let mut x = p_ext.clone();
    for _ in 0..order {
        let ax: Vec<Series> = coeffs.iter().map(|a| a.compose(&x)).collect::<Result<_>>()?;
        let next: Vec<Series> = p_ext.iter().zip(&ax).map(|(p0, a)| (p0 + &a.integrate_idx(ti)).truncate(order)).collect();
        if next == x {
            break;
        }
        x = next;
    }
    x.iter().map(|s| s.subst(&pv, &[(tname, t.clone())], order)).collect()
}

/// Closed form of the Υ-flow: `z ↦ z + z₁`, `ξ ↦ ξ + z₁ − i[Θ(w,ζ,z+z₁) − Θ(w,ζ,z)]`.
pub fn upsilon_flow_closed(mf: &GenericManifold, param: &[Series], p: &[Series]) -> Result<Vec<Series>> {
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let mut q = p.to_vec();
    for l in 0..d {
        q[m + l] = &p[m + l] + &param[l];
    }
    let a0 = theta_args(p, m, n);
    let a1 = theta_args(&q, m, n);
    for l in 0..d {
        let dth = &mf.theta[l].compose(&a1)? - &mf.theta[l].compose(&a0)?;
        q[n + m + l] = &(&p[n + m + l] + &param[l]) - &dth.scale(&Gq::i());
    }
    Ok(q)
}

/// Closed form of the Ῡ-flow: `ξ ↦ ξ + ξ₁`, `z ↦ z + ξ₁ + i[Θ̄(ζ,w,ξ+ξ₁) − Θ̄(ζ,w,ξ)]`.
pub fn upsilon_bar_flow_closed(mf: &GenericManifold, param: &[Series], p: &[Series]) -> Result<Vec<Series>> {
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let mut q = p.to_vec();
    for l in 0..d {
        q[n + m + l] = &p[n + m + l] + &param[l];
    }
    let a0 = theta_bar_args(p, m, n);
    let a1 = theta_bar_args(&q, m, n);
    for l in 0..d {
        let dth = &mf.theta_bar[l].compose(&a1)? - &mf.theta_bar[l].compose(&a0)?;
        q[m + l] = &(&p[m + l] + &param[l]) + &dth.scale(&Gq::i());
    }
    Ok(q)
}

/// `σ(t, τ) = (τ̄, t̄)` on a point with parameter coefficients conjugated.
pub fn sigma(p: &[Series]) -> Vec<Series> {
    let n = p.len() / 2;
    p[n..].iter().chain(p[..n].iter()).map(|s| s.conj()).collect()
}

/// The origin as a point over the given parameter variables.
pub fn origin(mf: &GenericManifold, params: &Vars, order: u32) -> Vec<Series> {
    vec![Series::zero(params, order); 2 * mf.n()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Start {
    L,
    Lbar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainWord {
    pub start: Start,
    pub length: usize,
}

impl ChainWord {
    pub fn new(start: Start, length: usize) -> Self {
        ChainWord { start, length }
    }

    /// Field used at step `s` (0-based).
    pub fn step(&self, s: usize) -> Field {
        match (self.start, s % 2) {
            (Start::L, 0) | (Start::Lbar, 1) => Field::L,
            _ => Field::Lbar,
        }
    }

    pub fn conjugate(&self) -> Self {
        let start = match self.start {
            Start::L => Start::Lbar,
            Start::Lbar => Start::L,
        };
        ChainWord { start, length: self.length }
    }
}

/// Names of the chain parameters, step by step: `w1, zeta1, w2, …` for an
/// 𝓛-first word (`zeta1, w1, …` otherwise), with `_a` suffixes when `m > 1`.
pub fn chain_param_names(word: ChainWord, m: usize) -> Vec<String> {
    let mut out = Vec::new();
    for s in 0..word.length {
        let base = match word.step(s) {
            Field::L => "w",
            _ => "zeta",
        };
        let j = s / 2 + 1;
        for a in 1..=m {
            if m == 1 {
                out.push(format!("{base}{j}"));
            } else {
                out.push(format!("{base}{j}_{a}"));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub word: ChainWord,
    pub params: Vars,
    pub gamma: Vec<Series>,
    pub order: u32,
}

/// Applies the alternating flows of `word` starting from `base`, with the
/// `m`-vector parameters given step by step.
pub fn chain_apply(mf: &GenericManifold, fields: &VectorFieldSystem, word: ChainWord, steps: &[Vec<Series>], base: &[Series]) -> Result<Vec<Series>> {
    if steps.len() != word.length {
        return Err(Error::Dimension(format!("{} parameter blocks for a word of length {}", steps.len(), word.length)));
    }
    let mut p = base.to_vec();
    for (s, prm) in steps.iter().enumerate() {
        p = flow(mf, fields, word.step(s), prm, &p)?;
    }
    Ok(p)
}

pub fn chain_map(mf: &GenericManifold, word: ChainWord) -> Result<ChainMap> {
    let m = mf.m;
    let params = vars(&chain_param_names(word, m));
    let order = mf.order;
    let fields = build_fields(mf)?;
    let steps: Vec<Vec<Series>> = (0..word.length).map(|s| (0..m).map(|a| Series::var_idx(&params, s * m + a, order)).collect()).collect();
    let gamma = chain_apply(mf, &fields, word, &steps, &origin(mf, &params, order))?;
    if m_residual(mf, &gamma)?.iter().any(|r| !r.is_zero()) {
        return Err(Error::Verification("chain leaves the complexification".into()));
    }
    Ok(ChainMap { word, params, gamma, order })
}

/// Rank of a chain map. Only the `(w, z, ζ)` rows enter: on the
/// complexification ξ is a function of them, so the rank is capped by
/// `2m + d`.
pub fn chain_rank<R: Rng + ?Sized>(mf: &GenericManifold, chain: &ChainMap, rng: &mut R) -> RankCertificate {
    let rows = &chain.gamma[..2 * mf.m + mf.d];
    let j = jacobian(rows);
    matrix_generic_rank(&j, 2 * mf.m + mf.d, DEFAULT_SAMPLES, rng)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegreTypeReport {
    pub mu: usize,
    pub kappa: usize,
    pub e: Vec<usize>,
    /// `e₁ + … + e_k` for `k = 1..κ`.
    pub partial_sums: Vec<usize>,
    /// Generic rank of Γᵏ for `k = 1..k_max`.
    pub ranks: Vec<usize>,
    pub order_used: u32,
    pub minimal: bool,
}

impl SegreTypeReport {
    /// `(m, m, e₁, …, e_κ)`.
    pub fn multitype(&self, m: usize) -> Vec<usize> {
        let mut v = vec![m, m];
        v.extend(self.e.iter().copied());
        v
    }
}

pub fn segre_multitype(mf: &GenericManifold, k_max: usize, seed: u64) -> Result<SegreTypeReport> {
    if k_max < 3 {
        return Err(Error::Precondition("k_max must be at least 3".into()));
    }
    if k_max > 6 * mf.n() {
        return Err(Error::Precondition("k_max exceeds 3(2n)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 2 * mf.m + mf.d;
    let mut ranks = Vec::new();
    for k in 1..=k_max {
        let ch = chain_map(mf, ChainWord::new(Start::L, k))?;
        ranks.push(chain_rank(mf, &ch, &mut rng).rank);
    }
    let mu = (1..k_max).find(|&k| ranks[k - 1] == ranks[k]).ok_or_else(|| {
        Error::Inconclusive(format!("ranks {ranks:?} not stabilized by k = {k_max} at order {}", mf.order))
    })?;
    let kappa = mu.saturating_sub(2);
    let e: Vec<usize> = (0..kappa).map(|j| ranks[j + 2] - ranks[j + 1]).collect();
    let partial_sums = e.iter().scan(0, |acc, x| {
        *acc += x;
        Some(*acc)
    });
    Ok(SegreTypeReport {
        mu,
        kappa,
        e: e.clone(),
        partial_sums: partial_sums.collect(),
        minimal: ranks[mu - 1] == dim,
        ranks,
        order_used: mf.order,
    })
}

/// Runs [`segre_multitype`] at increasing orders of the polynomial data
/// until two consecutive reports agree or `max_order` is reached.
pub fn segre_multitype_escalating(mf: &GenericManifold, k_max: usize, seed: u64, max_order: u32) -> Result<SegreTypeReport> {
    let mut prev: Option<SegreTypeReport> = None;
    let mut order = mf.order;
    loop {
        let cur = segre_multitype(&mf.reorder(order)?, k_max, seed);
        if let (Some(p), Ok(c)) = (&prev, &cur) {
            if p.ranks == c.ranks {
                return cur;
            }
        }
        if order >= max_order {
            return cur;
        }
        prev = cur.ok();
        order += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalityWitness {
    pub mu: usize,
    /// The `2μ` parameter blocks, as multiples of the line parameter `s`.
    pub tuple: Vec<Vec<Gq>>,
    pub returns: bool,
    pub rank_t: usize,
    pub rank_tau: usize,
    pub conj_rank_t: usize,
    pub conj_rank_tau: usize,
    pub order_used: u32,
}

impl MinimalityWitness {
    pub fn full_rank(&self, n: usize) -> bool {
        self.returns && [self.rank_t, self.rank_tau, self.conj_rank_t, self.conj_rank_tau].iter().all(|&r| r == n)
    }
}

/// Searches for parameters on the line `s·(x₁, …, x_{μ−1}, 0, −x_{μ−1}, …, −x₁, 0)`
/// where Γ^{2μ} returns to the origin and both projections have rank `n`
/// for small `s ≠ 0`; the conjugate tuple is checked on the 𝓛̄-first chain.
pub fn minimality_witness(mf: &GenericManifold, seed: u64, trials: usize) -> Result<MinimalityWitness> {
    let rep = segre_multitype(mf, (mf.d + 3).min(6 * mf.n()).max(3), seed)?;
    if !rep.minimal {
        return Err(Error::Precondition(format!("{} is not minimal", mf.name)));
    }
    let (m, n) = (mf.m, mf.n());
    let mu = rep.mu;
    let len = 2 * mu;
    let ch = chain_map(mf, ChainWord::new(Start::L, len))?;
    let cch = chain_map(mf, ChainWord::new(Start::Lbar, len))?;
    let jt = jacobian(&ch.gamma[..n]);
    let jtau = jacobian(&ch.gamma[n..]);
    let cjt = jacobian(&cch.gamma[..n]);
    let cjtau = jacobian(&cch.gamma[n..]);
    let sv = vars(&["s"]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut last = None;
    for _ in 0..trials.max(1) {
        let half: Vec<Vec<Gq>> = (0..mu - 1).map(|_| (0..m).map(|_| Gq::random_small(&mut rng, SAMPLE_HEIGHT)).collect()).collect();
        let zero = vec![Gq::zero(); m];
        let mut tuple = half.clone();
        tuple.push(zero.clone());
        tuple.extend(half.iter().rev().map(|x| x.iter().map(|c| -c).collect::<Vec<_>>()));
        tuple.push(zero);
        let dir: Vec<Gq> = tuple.iter().flatten().cloned().collect();
        let cdir: Vec<Gq> = dir.iter().map(|c| c.conj()).collect();
        let returns = ch.gamma.iter().all(|g| g.on_line(&dir, &sv).is_zero()) && cch.gamma.iter().all(|g| g.on_line(&cdir, &sv).is_zero());
        let w = MinimalityWitness {
            mu,
            returns,
            rank_t: univariate_rank(&matrix_on_line(&jt, &dir)),
            rank_tau: univariate_rank(&matrix_on_line(&jtau, &dir)),
            conj_rank_t: univariate_rank(&matrix_on_line(&cjt, &cdir)),
            conj_rank_tau: univariate_rank(&matrix_on_line(&cjtau, &cdir)),
            tuple,
            order_used: mf.order,
        };
        if w.full_rank(n) {
            return Ok(w);
        }
        last = Some(w);
    }
    Err(Error::Inconclusive(format!("no full-rank witness in {trials} trials; last {last:?}")))
}

/// A random point of the complexification over the given parameters:
/// `(w, ζ, z)` are random linear forms, ξ is solved from the equation.
pub fn random_point<R: Rng + ?Sized>(mf: &GenericManifold, params: &Vars, order: u32, rng: &mut R) -> Result<Vec<Series>> {
    let (m, d) = (mf.m, mf.d);
    let n = m + d;
    let lin = |rng: &mut R| {
        let terms: Vec<(Vec<u8>, Gq)> = (0..params.len())
            .map(|i| {
                let mut e = vec![0u8; params.len()];
                e[i] = 1;
                (e, Gq::random_small(rng, 8))
            })
            .collect();
        Series::from_terms(params, order, terms)
    };
    let mut p = vec![Series::zero(params, order); 2 * n];
    for j in 0..m {
        p[j] = lin(rng);
        p[n + j] = lin(rng);
    }
    for l in 0..d {
        p[m + l] = lin(rng);
    }
    let args = theta_args(&p, m, n);
    for l in 0..d {
        p[n + m + l] = &p[m + l] - &mf.theta[l].compose(&args)?.scale(&Gq::i());
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::Blocks;

    fn quadric_manifold(order: u32) -> GenericManifold {
        let b = Blocks::new(1, 1);
        let tb = b.theta_bar_vars();
        let s = &Series::var(&tb, "w1", order).unwrap() * &Series::var(&tb, "zeta1", order).unwrap();
        GenericManifold::from_theta_bar("quadric", 1, 1, vec![s]).unwrap()
    }

    #[test]
    fn fields_of_quadric() {
        let mf = quadric_manifold(6);
        let f = build_fields(&mf).unwrap();
        assert_eq!(f.l[0][1].to_string(), "1*i*zeta1");
        assert_eq!(f.lbar[0][3].to_string(), "-1*i*w1");
        let rho = &mf.rho().unwrap()[0];
        assert!(apply_field(&f.lbar[0], rho).unwrap().is_zero());
        let xi = Series::var(&f.vars, "xi1", 6).unwrap();
        assert_eq!(apply_field(&f.lbar[0], &xi).unwrap().to_string(), "-1*i*w1");
    }

    #[test]
    fn chains_on_quadric() {
        let mf = quadric_manifold(6);
        let g3 = chain_map(&mf, ChainWord::new(Start::L, 3)).unwrap();
        let shown: Vec<String> = g3.gamma.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["w1 + w2", "1*i*zeta1*w2", "zeta1", "-1*i*w1*zeta1"]);
    }

    #[test]
    fn segre_type_of_quadric_and_flat() {
        let rep = segre_multitype(&quadric_manifold(6), 4, 7).unwrap();
        assert_eq!((rep.mu, rep.minimal), (3, true));
        assert_eq!(rep.multitype(1), vec![1, 1, 1]);
        assert_eq!(rep.ranks, vec![1, 2, 3, 3]);
        let flat = segre_multitype(&GenericManifold::levi_flat(1, 1, 6), 5, 7).unwrap();
        assert_eq!((flat.mu, flat.minimal), (2, false));
        assert_eq!(flat.ranks, vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn upsilon_integrator_matches_closed_form() {
        let mf = quadric_manifold(6);
        let f = build_fields(&mf).unwrap();
        let pv = vars(&["a", "b", "c", "t"]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_point(&mf, &pv, 6, &mut rng).unwrap();
        let t = vec![Series::var(&pv, "t", 6).unwrap()];
        assert_eq!(flow(&mf, &f, Field::Upsilon, &t, &p).unwrap(), upsilon_flow_closed(&mf, &t, &p).unwrap());
        assert_eq!(flow(&mf, &f, Field::UpsilonBar, &t, &p).unwrap(), upsilon_bar_flow_closed(&mf, &t, &p).unwrap());
    }

    #[test]
    fn witness_on_quadric() {
        let w = minimality_witness(&quadric_manifold(8), 1, 8).unwrap();
        assert!(w.full_rank(2));
        assert!(minimality_witness(&GenericManifold::levi_flat(1, 1, 6), 1, 2).is_err());
    }
}
