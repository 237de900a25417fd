use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact element of ℚ(i).
///
/// `BigRational` keeps both parts reduced with a positive denominator, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gq {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gq {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gq { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Gq {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Gq {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::from_ints(n, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn real(re: BigRational) -> Self {
        Gq { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Gq { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gq { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Gq { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn mul_i(&self) -> Self {
        Gq { re: -self.im.clone(), im: self.re.clone() }
    }

    /// Random Gaussian rational with numerators in `-h..=h` and
    /// denominators in `1..=h`.
    pub fn random_small<R: rand::Rng + ?Sized>(rng: &mut R, h: i64) -> Self {
        let mut part = || BigRational::new(BigInt::from(rng.gen_range(-h..=h)), BigInt::from(rng.gen_range(1..=h)));
        Gq { re: part(), im: part() }
    }

    /// Largest absolute numerator or denominator, a crude height.
    pub fn height(&self) -> BigInt {
        let parts = [self.re.numer(), self.re.denom(), self.im.numer(), self.im.denom()];
        parts.iter().map(|p| p.abs()).max().unwrap_or_default()
    }
}

impl From<i64> for Gq {
    fn from(n: i64) -> Self {
        Gq::int(n)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gq {
    /// Prints in the input grammar: `a/b`, `a/b*i` or `(a/b+c/d*i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rat(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}*i", fmt_rat(&self.im))
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(f, "({}{}{}*i)", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
        }
    }
}

impl fmt::Debug for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Gq {
    type Output = Gq;
    fn add(self, o: &Gq) -> Gq {
        Gq { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Gq {
    type Output = Gq;
    fn sub(self, o: &Gq) -> Gq {
        Gq { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &Gq {
    type Output = Gq;
    fn mul(self, o: &Gq) -> Gq {
        if self.im.is_zero() && o.im.is_zero() {
            return Gq::real(&self.re * &o.re);
        }
        Gq {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for &Gq {
    type Output = Gq;
    fn div(self, o: &Gq) -> Gq {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for &Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq { re: -self.re, im: -self.im }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Gq {
            type Output = Gq;
            fn $m(self, o: Gq) -> Gq {
                (&self).$m(&o)
            }
        }
        impl $tr<&Gq> for Gq {
            type Output = Gq;
            fn $m(self, o: &Gq) -> Gq {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Gq> for Gq {
    fn add_assign(&mut self, o: &Gq) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Gq> for Gq {
    fn sub_assign(&mut self, o: &Gq) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_grammar() {
        assert_eq!(Gq::frac(3, 6).to_string(), "1/2");
        assert_eq!(Gq::from_ints(0, -2).to_string(), "-2*i");
        assert_eq!(Gq::from_ints(1, -1).to_string(), "(1-1*i)");
    }

    #[test]
    fn inverse_round_trip() {
        let a = Gq::from_ints(3, -4);
        assert!((&a * &a.inv().unwrap()).is_one());
        assert!(Gq::zero().inv().is_none());
    }

    #[test]
    fn conj_is_involution() {
        let a = Gq::new(BigRational::new(2.into(), 7.into()), BigRational::new((-5).into(), 3.into()));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(Gq::i().mul_i(), Gq::int(-1));
    }
}
