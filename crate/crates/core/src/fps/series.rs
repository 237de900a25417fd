use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use super::gauss::Gq;
use crate::error::{Error, Result};

/// Ordered variable names shared between series.
pub type Vars = Arc<[String]>;

/// Exponent multiindex, one entry per variable.
pub type Mono = Vec<u8>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Concatenates variable lists.
pub fn join_vars(parts: &[&Vars]) -> Vars {
    parts.iter().flat_map(|v| v.iter().cloned()).collect::<Vec<_>>().into()
}

pub fn mono_degree(m: &[u8]) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// Sparse multivariate power series truncated at total degree `order`.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    vars: Vars,
    order: u32,
    terms: BTreeMap<Mono, Gq>,
}

impl Series {
    pub fn zero(vars: &Vars, order: u32) -> Self {
        Series { vars: vars.clone(), order, terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, order: u32, c: Gq) -> Self {
        let mut s = Self::zero(vars, order);
        if order > 0 && !c.is_zero() {
            s.terms.insert(vec![0; vars.len()], c);
        }
        s
    }

    pub fn one(vars: &Vars, order: u32) -> Self {
        Self::constant(vars, order, Gq::one())
    }

    pub fn var(vars: &Vars, name: &str, order: u32) -> Result<Self> {
        let i = index_of(vars, name)?;
        Ok(Self::var_idx(vars, i, order))
    }

    pub fn var_idx(vars: &Vars, i: usize, order: u32) -> Self {
        let mut m = vec![0; vars.len()];
        m[i] = 1;
        Self::monomial(vars, order, m, Gq::one())
    }

    pub fn monomial(vars: &Vars, order: u32, m: Mono, c: Gq) -> Self {
        let mut s = Self::zero(vars, order);
        s.insert_add(m, c);
        s
    }

    /// Builds a series from raw terms, summing duplicates and dropping
    /// zero coefficients and terms of degree `>= order`.
    pub fn from_terms<I: IntoIterator<Item = (Mono, Gq)>>(vars: &Vars, order: u32, terms: I) -> Self {
        let mut s = Self::zero(vars, order);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "exponent length does not match variables");
            s.insert_add(m, c);
        }
        s
    }

    fn insert_add(&mut self, m: Mono, c: Gq) {
        if c.is_zero() || mono_degree(&m) >= self.order {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Gq> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// "Identically zero" at the current truncation order.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u8]) -> Gq {
        self.terms.get(m).cloned().unwrap_or_else(Gq::zero)
    }

    pub fn constant_term(&self) -> Gq {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        index_of(&self.vars, name)
    }

    /// Lowest total degree of a stored term.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_degree(m)).min()
    }

    /// Largest total degree of a stored term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_degree(m)).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i] as u32).max().unwrap_or(0)
    }

    pub fn homogeneous_part(&self, d: u32) -> Series {
        let terms = self.terms.iter().filter(|(m, _)| mono_degree(m) == d).map(|(m, c)| (m.clone(), c.clone()));
        Series::from_terms(&self.vars, self.order, terms)
    }

    /// Lowest-degree homogeneous part; zero for the zero series.
    pub fn leading_form(&self) -> Series {
        match self.valuation() {
            Some(v) => self.homogeneous_part(v),
            None => self.clone(),
        }
    }

    /// Coefficientwise complex conjugation.
    pub fn conj(&self) -> Series {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect();
        Series { vars: self.vars.clone(), order: self.order, terms }
    }

    /// Lowers the truncation order; never raises it.
    pub fn truncate(&self, order: u32) -> Series {
        let order = order.min(self.order);
        let terms = self.terms.iter().filter(|(m, _)| mono_degree(m) < order).map(|(m, c)| (m.clone(), c.clone())).collect();
        Series { vars: self.vars.clone(), order, terms }
    }

    /// Reinterprets the stored terms as an exact polynomial known to the
    /// given (possibly higher) order.
    pub fn assume_exact_to(&self, order: u32) -> Series {
        let mut s = self.clone();
        s.order = order;
        s.terms.retain(|m, _| mono_degree(m) < order);
        s
    }

    pub fn scale(&self, c: &Gq) -> Series {
        if c.is_zero() {
            return Series::zero(&self.vars, self.order);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        Series { vars: self.vars.clone(), order: self.order, terms }
    }

    fn check_vars(&self, o: &Series) -> Result<()> {
        if self.vars != o.vars {
            return Err(Error::VarMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
        Ok(())
    }

    fn check_same(&self, o: &Series) -> Result<()> {
        self.check_vars(o)?;
        if self.order != o.order {
            return Err(Error::OrderMismatch(self.order, o.order));
        }
        Ok(())
    }

    /// Addition that enforces equal variables and equal orders.
    pub fn checked_add(&self, o: &Series) -> Result<Series> {
        self.check_same(o)?;
        Ok(self + o)
    }

    pub fn checked_sub(&self, o: &Series) -> Result<Series> {
        self.check_same(o)?;
        Ok(self - o)
    }

    pub fn checked_mul(&self, o: &Series) -> Result<Series> {
        self.check_same(o)?;
        Ok(self * o)
    }

    fn add_impl(&self, o: &Series, sign: bool) -> Series {
        self.check_vars(o).expect("series variable mismatch");
        let order = self.order.min(o.order);
        let mut out = self.truncate(order);
        for (m, c) in &o.terms {
            if mono_degree(m) >= order {
                continue;
            }
            let c = if sign { c.clone() } else { -c };
            out.insert_add(m.clone(), c);
        }
        out
    }

    fn mul_impl(&self, o: &Series) -> Series {
        self.check_vars(o).expect("series variable mismatch");
        let order = self.order.min(o.order);
        let mut a: Vec<(u32, &Mono, &Gq)> = self.terms.iter().map(|(m, c)| (mono_degree(m), m, c)).collect();
        let mut b: Vec<(u32, &Mono, &Gq)> = o.terms.iter().map(|(m, c)| (mono_degree(m), m, c)).collect();
        a.sort_by_key(|t| t.0);
        b.sort_by_key(|t| t.0);
        let mut acc: HashMap<Mono, Gq> = HashMap::new();
        for (da, ma, ca) in &a {
            if *da >= order {
                break;
            }
            for (db, mb, cb) in &b {
                if da + db >= order {
                    break;
                }
                let m: Mono = ma.iter().zip(mb.iter()).map(|(x, y)| x + y).collect();
                let p = *ca * *cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += &p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Series { vars: self.vars.clone(), order, terms }
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut r = Series::one(&self.vars, self.order);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn derive(&self, name: &str) -> Result<Series> {
        Ok(self.derive_idx(self.index_of(name)?))
    }

    /// Partial derivative; the result order drops by one.
    pub fn derive_idx(&self, i: usize) -> Series {
        let order = self.order.saturating_sub(1);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            if mono_degree(&m2) < order {
                terms.insert(m2, c * &Gq::int(m[i] as i64));
            }
        }
        Series { vars: self.vars.clone(), order, terms }
    }

    /// Antiderivative in variable `i` vanishing on `x_i = 0`. Integration
    /// raises every degree by one, so the result is known one order higher.
    pub fn integrate_idx(&self, i: usize) -> Series {
        let order = self.order + 1;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2[i] += 1;
                (m2, c * &Gq::frac(1, m[i] as i64 + 1))
            })
            .collect();
        Series { vars: self.vars.clone(), order, terms }
    }

    /// Iterated partial derivative ∂^α.
    pub fn derive_multi(&self, alpha: &[u32]) -> Series {
        let mut s = self.clone();
        for (i, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                s = s.derive_idx(i);
            }
        }
        s
    }

    /// Substitutes `subs[i]` for the i-th variable. Every substitute must
    /// share one variable list and have zero constant term; the result is
    /// truncated at the minimum of all orders.
    pub fn compose(&self, subs: &[Series]) -> Result<Series> {
        if subs.len() != self.nvars() {
            return Err(Error::VarMismatch(format!("compose expects {} substitutes, got {}", self.nvars(), subs.len())));
        }
        let Some(first) = subs.first() else {
            let out_vars: Vars = Vec::<String>::new().into();
            return Ok(Series::constant(&out_vars, self.order, self.constant_term()));
        };
        let target = first.vars.clone();
        let mut order = self.order;
        for (i, s) in subs.iter().enumerate() {
            if s.vars != target {
                return Err(Error::VarMismatch("compose substitutes over different variables".into()));
            }
            if !s.constant_term().is_zero() {
                return Err(Error::ConstantTerm(self.vars[i].clone()));
            }
            order = order.min(s.order);
        }
        let mut cache: Vec<Vec<Series>> = subs.iter().map(|s| vec![Series::one(&target, order), s.truncate(order)]).collect();
        let terms: Vec<(&Mono, &Gq)> = self.terms.iter().filter(|(m, _)| mono_degree(m) < order).collect();
        Ok(compose_rec(&terms, 0, &target, order, &mut cache))
    }

    /// Composition where variables of `self` are looked up by name in
    /// `map`; unmapped variables are sent to the same-named variable of
    /// `target`.
    pub fn subst(&self, target: &Vars, map: &[(&str, Series)], order: u32) -> Result<Series> {
        let mut subs = Vec::with_capacity(self.nvars());
        for name in self.vars.iter() {
            if let Some((_, s)) = map.iter().find(|(n, _)| n == name) {
                subs.push(s.clone());
            } else {
                subs.push(Series::var(target, name, order)?);
            }
        }
        if subs.is_empty() {
            return Ok(Series::constant(target, self.order.min(order), self.constant_term()));
        }
        self.compose(&subs)
    }

    /// Re-expresses the series over a superset of its variables.
    pub fn embed(&self, target: &Vars) -> Result<Series> {
        let idx: Vec<usize> = self.vars.iter().map(|v| index_of(target, v)).collect::<Result<_>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = vec![0u8; target.len()];
            for (k, &e) in m.iter().enumerate() {
                m2[idx[k]] = e;
            }
            (m2, c.clone())
        });
        Ok(Series::from_terms(target, self.order, terms))
    }

    /// Renames variables one-to-one, keeping exponents.
    pub fn rename(&self, new_vars: &Vars) -> Series {
        assert_eq!(new_vars.len(), self.nvars());
        Series { vars: new_vars.clone(), order: self.order, terms: self.terms.clone() }
    }

    /// Sets the listed variables to zero.
    pub fn restrict_zero(&self, zero: &[usize]) -> Series {
        let terms = self.terms.iter().filter(|(m, _)| zero.iter().all(|&i| m[i] == 0)).map(|(m, c)| (m.clone(), c.clone())).collect();
        Series { vars: self.vars.clone(), order: self.order, terms }
    }

    /// Multiplicative inverse of a unit.
    pub fn invert_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        let inv0 = c0.inv().ok_or(Error::NotUnit)?;
        let mut r = Series::constant(&self.vars, self.order, inv0);
        let two = Series::constant(&self.vars, self.order, Gq::int(2));
        let mut correct = 1u32;
        while correct < self.order {
            r = &r * &(&two - &(self * &r));
            correct *= 2;
        }
        Ok(r)
    }

    /// Exact division `self / b` of truncated series where `b` need not be
    /// a unit: solves `b·c ≡ self` degree by degree using the leading form
    /// of `b`. The quotient is known to `order − val(b)`.
    pub fn divide_exact(&self, b: &Series) -> Result<Series> {
        self.check_vars(b)?;
        let v = b.valuation().ok_or(Error::InexactDivision("division by the zero series".into()))?;
        let order = self.order.min(b.order);
        if order <= v {
            return Err(Error::OrderExhausted(format!("divisor valuation {v} at order {order}")));
        }
        let qorder = order - v;
        let bv = b.homogeneous_part(v);
        let mut c = Series::zero(&self.vars, order);
        for j in 0..qorder {
            let rest = self.truncate(order) - &(b * &c);
            let target = rest.homogeneous_part(v + j);
            if target.is_zero() {
                continue;
            }
            let q = divide_homogeneous(&target, &bv)?;
            c = &c + &q;
        }
        let rem = self.truncate(order) - &(b * &c);
        if !rem.is_zero() {
            return Err(Error::InexactDivision(format!("remainder {rem}")));
        }
        Ok(c.truncate(qorder))
    }

    /// Lowest-degree term in lexicographic exponent order, as a monomial
    /// series.
    pub fn leading_term(&self) -> Option<(Mono, Gq)> {
        let v = self.valuation()?;
        self.terms.iter().filter(|(m, _)| mono_degree(m) == v).max_by(|a, b| a.0.cmp(b.0)).map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Restriction to the line `x_i = a_i·s`, as a univariate series in `s`.
    pub fn on_line(&self, dir: &[Gq], s_vars: &Vars) -> Series {
        assert_eq!(dir.len(), self.nvars());
        let mut out = vec![Gq::zero(); self.order as usize];
        for (m, c) in &self.terms {
            let mut x = c.clone();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    x = &x * &dir[k];
                }
            }
            let d = mono_degree(m) as usize;
            out[d] += &x;
        }
        Series::from_terms(s_vars, self.order, out.into_iter().enumerate().map(|(d, c)| (vec![d as u8], c)))
    }
}

fn index_of(vars: &Vars, name: &str) -> Result<usize> {
    vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVar(name.to_string()))
}

fn compose_rec(terms: &[(&Mono, &Gq)], i: usize, target: &Vars, order: u32, cache: &mut [Vec<Series>]) -> Series {
    if terms.is_empty() {
        return Series::zero(target, order);
    }
    if i == cache.len() {
        let mut c = Gq::zero();
        for (_, x) in terms {
            c += x;
        }
        return Series::constant(target, order, c);
    }
    let mut out = Series::zero(target, order);
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0[i];
        let mut end = start;
        while end < terms.len() && terms[end].0[i] == e {
            end += 1;
        }
        let inner = compose_rec(&terms[start..end], i + 1, target, order, cache);
        if !inner.is_zero() {
            if e == 0 {
                out = &out + &inner;
            } else {
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &cache[i][1];
                    cache[i].push(next);
                }
                out = &out + &(&cache[i][e as usize] * &inner);
            }
        }
        start = end;
    }
    out
}

/// Exact division of a homogeneous polynomial by another, by multivariate
/// long division in lexicographic order.
fn divide_homogeneous(a: &Series, b: &Series) -> Result<Series> {
    let big = a.order.max(b.order) + 64;
    let mut rem = a.assume_exact_to(big);
    let bb = b.assume_exact_to(big);
    let (lb, lc) = bb.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero divisor");
    let lc_inv = lc.inv().expect("nonzero coefficient");
    let mut q = Series::zero(&a.vars, big);
    while let Some((lm, c)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        if lm.iter().zip(lb.iter()).any(|(x, y)| x < y) {
            return Err(Error::InexactDivision(format!("{a} by {b}")));
        }
        let m: Mono = lm.iter().zip(lb.iter()).map(|(x, y)| x - y).collect();
        let t = Series::monomial(&a.vars, big, m, &c * &lc_inv);
        rem = &rem - &(&t * &bb);
        q = &q + &t;
    }
    Ok(q.truncate(a.order))
}

macro_rules! series_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Series> for &Series {
            type Output = Series;
            fn $m(self, o: &Series) -> Series {
                $body(self, o)
            }
        }
        impl $tr<Series> for Series {
            type Output = Series;
            fn $m(self, o: Series) -> Series {
                $body(&self, &o)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $m(self, o: &Series) -> Series {
                $body(&self, o)
            }
        }
        impl $tr<Series> for &Series {
            type Output = Series;
            fn $m(self, o: Series) -> Series {
                $body(self, &o)
            }
        }
    };
}
series_binop!(Add, add, |a: &Series, b: &Series| a.add_impl(b, true));
series_binop!(Sub, sub, |a: &Series, b: &Series| a.add_impl(b, false));
series_binop!(Mul, mul, |a: &Series, b: &Series| a.mul_impl(b));

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&Gq::int(-1))
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        (&self).neg()
    }
}

impl fmt::Display for Series {
    /// Prints in the polynomial input grammar, highest degree last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut items: Vec<(&Mono, &Gq)> = self.terms.iter().collect();
        items.sort_by(|a, b| mono_degree(a.0).cmp(&mono_degree(b.0)).then(b.0.cmp(a.0)));
        for (k, (m, c)) in items.iter().enumerate() {
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            let zero = num_rational::BigRational::from_integer(0.into());
            let (neg, mag) = if (c.im.is_zero() && c.re < zero) || (c.re.is_zero() && c.im < zero) {
                (true, -(*c).clone())
            } else {
                (false, (*c).clone())
            };
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; O({})] {}", self.vars.join(","), self.order, self)
    }
}

/// Components sharing variables and order, such as the d entries of Θ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesVector(Vec<Series>);

impl SeriesVector {
    pub fn new(components: Vec<Series>) -> Result<Self> {
        if let Some(first) = components.first() {
            for c in &components[1..] {
                if c.vars() != first.vars() {
                    return Err(Error::VarMismatch("vector components over different variables".into()));
                }
                if c.order() != first.order() {
                    return Err(Error::OrderMismatch(first.order(), c.order()));
                }
            }
        }
        Ok(SeriesVector(components))
    }

    /// Builds a vector after truncating every component to the least order.
    pub fn aligned(components: Vec<Series>) -> Self {
        let order = components.iter().map(|c| c.order()).min().unwrap_or(0);
        SeriesVector(components.into_iter().map(|c| c.truncate(order)).collect())
    }

    pub fn components(&self) -> &[Series] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Series> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn order(&self) -> Option<u32> {
        self.0.first().map(|c| c.order())
    }
}

impl std::ops::Index<usize> for SeriesVector {
    type Output = Series;
    fn index(&self, i: usize) -> &Series {
        &self.0[i]
    }
}
