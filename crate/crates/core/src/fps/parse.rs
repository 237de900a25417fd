//! Reader for polynomial expressions such as `w1*zeta1 - (1/2+3*i)*z1^2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Gq, Series, Vars};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
    order: u32,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: 1, col: self.pos + 1, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Series> {
        let mut acc = Series::zero(self.vars, self.order);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Series> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn factor(&mut self) -> Result<Series> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut den = BigInt::from(1);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    den = self.integer()?;
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                }
                Ok(Series::constant(self.vars, self.order, Gq::real(BigRational::new(num, den))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                if name == "i" {
                    return Ok(Series::constant(self.vars, self.order, Gq::i()));
                }
                let Some(idx) = self.vars.iter().position(|v| v == name) else {
                    self.pos = start;
                    return self.err(format!("unknown variable `{name}`"));
                };
                let mut e = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let k = self.integer()?;
                    e = match u32::try_from(k) {
                        Ok(k) if k < 256 => k,
                        _ => return self.err("exponent too large"),
                    };
                }
                let mut mono = vec![0u8; self.vars.len()];
                mono[idx] = e as u8;
                Ok(Series::monomial(self.vars, self.order, mono, Gq::one()))
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses an expression over `vars`, truncated at `order`.
pub fn parse_series(text: &str, vars: &Vars, order: u32) -> Result<Series> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars, order };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let s = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::vars;

    #[test]
    fn parses_and_prints_back() {
        let vs = vars(&["w1", "zeta1", "z1"]);
        for text in ["w1*zeta1", "1/2*w1^2 - 3*i*zeta1*z1", "(1-1*i)*w1 + 2/3*i*z1^3"] {
            let s = parse_series(text, &vs, 6).unwrap();
            assert_eq!(parse_series(&s.to_string(), &vs, 6).unwrap(), s);
        }
        assert_eq!(parse_series("(w1 + zeta1)^1", &vs, 4).is_err(), true);
    }

    #[test]
    fn reports_bad_input() {
        let vs = vars(&["w1"]);
        assert!(matches!(parse_series("1/0*w1", &vs, 4), Err(Error::Parse { col: 4, .. })));
        assert!(matches!(parse_series("w1 + q", &vs, 4), Err(Error::Parse { col: 6, .. })));
        assert!(parse_series("w1 +", &vs, 4).is_err());
    }
}
