use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Scalar;
use crate::error::{Error, Result};

/// The square roots adjoined to the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Radical {
    One,
    Two,
    Five,
    Ten,
}

impl Radical {
    pub const ALL: [Radical; 4] = [Radical::One, Radical::Two, Radical::Five, Radical::Ten];

    fn index(self) -> usize {
        self as usize
    }

    /// The radicand, `1` for the rational part.
    pub fn radicand(self) -> i64 {
        match self {
            Radical::One => 1,
            Radical::Two => 2,
            Radical::Five => 5,
            Radical::Ten => 10,
        }
    }

    fn from_radicand(k: i64) -> Option<Self> {
        match k {
            1 => Some(Radical::One),
            2 => Some(Radical::Two),
            5 => Some(Radical::Five),
            10 => Some(Radical::Ten),
            _ => None,
        }
    }

    /// `√a·√b = factor·√c`.
    fn product(a: Radical, b: Radical) -> (i64, Radical) {
        use Radical::*;
        match (a, b) {
            (One, x) | (x, One) => (1, x),
            (Two, Two) => (2, One),
            (Five, Five) => (5, One),
            (Ten, Ten) => (10, One),
            (Two, Five) | (Five, Two) => (1, Ten),
            (Two, Ten) | (Ten, Two) => (2, Five),
            (Five, Ten) | (Ten, Five) => (5, Two),
        }
    }
}

/// An element `q0 + q2·√2 + q5·√5 + q10·√10` of `ℚ(√2, √5)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    q: [BigRational; 4],
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl ExactScalar {
    pub fn new(q0: BigRational, q2: BigRational, q5: BigRational, q10: BigRational) -> Self {
        ExactScalar {
            q: [q0, q2, q5, q10],
        }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::term(num, den, Radical::One)
    }

    /// `num/den · √radicand`.
    pub fn term(num: i64, den: i64, radical: Radical) -> Self {
        let mut x = Self::zero();
        x.q[radical.index()] = rat(num, den);
        x
    }

    pub fn sqrt2() -> Self {
        Self::term(1, 1, Radical::Two)
    }

    pub fn sqrt5() -> Self {
        Self::term(1, 1, Radical::Five)
    }

    pub fn sqrt10() -> Self {
        Self::term(1, 1, Radical::Ten)
    }

    pub fn component(&self, radical: Radical) -> &BigRational {
        &self.q[radical.index()]
    }

    pub fn is_rational(&self) -> bool {
        self.q[1..].iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> f64 {
        Radical::ALL
            .iter()
            .map(|&r| {
                let c = &self.q[r.index()];
                if c.is_zero() {
                    0.0
                } else {
                    ratio_to_f64(c) * (r.radicand() as f64).sqrt()
                }
            })
            .sum()
    }

    /// Matrix of multiplication by `self` on the basis `{1, √2, √5, √10}`.
    fn multiplication_matrix(&self) -> [[BigRational; 4]; 4] {
        let mut m: [[BigRational; 4]; 4] = Default::default();
        for (col, &basis) in Radical::ALL.iter().enumerate() {
            for &r in &Radical::ALL {
                let c = &self.q[r.index()];
                if c.is_zero() {
                    continue;
                }
                let (factor, out) = Radical::product(r, basis);
                m[out.index()][col] += c * BigRational::from_integer(factor.into());
            }
        }
        m
    }

    /// Exact quotient; solves the rational system `rhs · x = self`.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut m = rhs.multiplication_matrix();
        let mut b = self.q.clone();
        for col in 0..4 {
            let pivot = (col..4)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(col, pivot);
            b.swap(col, pivot);
            let inv = m[col][col].recip();
            for k in col..4 {
                m[col][k] = &m[col][k] * &inv;
            }
            b[col] = &b[col] * &inv;
            for r in 0..4 {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for k in col..4 {
                        let delta = &factor * &m[col][k];
                        m[r][k] -= delta;
                    }
                    let delta = &factor * &b[col];
                    b[r] -= delta;
                }
            }
        }
        Ok(ExactScalar { q: b })
    }

    /// Parses the literal grammar, e.g. `sqrt(10)/4`, `-3/2*sqrt(5)`, `1+sqrt(5)`.
    pub fn parse(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Literal(s.to_string()));
        }
        let mut out = Self::zero();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'(') {
                out = out + parse_term(&compact[start..i]).ok_or_else(|| Error::Literal(s.to_string()))?;
                start = i;
            }
        }
        Ok(out)
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

fn parse_term(term: &str) -> Option<ExactScalar> {
    let (sign, body) = match term.as_bytes().first()? {
        b'+' => (1, &term[1..]),
        b'-' => (-1, &term[1..]),
        _ => (1, term),
    };
    let mut coeff;
    let radical;
    if let Some(pos) = body.find("sqrt(") {
        let close = body[pos..].find(')')? + pos;
        let k: i64 = body[pos + 5..close].parse().ok()?;
        radical = Radical::from_radicand(k)?;
        let prefix = body[..pos].strip_suffix('*').unwrap_or(&body[..pos]);
        coeff = if prefix.is_empty() {
            BigRational::one()
        } else {
            parse_rational(prefix)?
        };
        let suffix = &body[close + 1..];
        if let Some(den) = suffix.strip_prefix('/') {
            let den: BigInt = den.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            coeff /= BigRational::from_integer(den);
        } else if !suffix.is_empty() {
            return None;
        }
    } else {
        coeff = parse_rational(body)?;
        radical = Radical::One;
    }
    if sign < 0 {
        coeff = -coeff;
    }
    let mut out = ExactScalar::zero();
    out.q[radical.index()] = coeff;
    Some(out)
}

impl FromStr for ExactScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for ExactScalar {
    /// Canonical literal form; parses back to the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &r in &Radical::ALL {
            let c = &self.q[r.index()];
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { "-" } else { "+" })?;
            }
            first = false;
            if r == Radical::One {
                write!(f, "{abs}")?;
            } else if abs.numer().is_one() {
                write!(f, "sqrt({})", r.radicand())?;
                if !abs.denom().is_one() {
                    write!(f, "/{}", abs.denom())?;
                }
            } else {
                write!(f, "{abs}*sqrt({})", r.radicand())?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for ExactScalar {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.q.iter_mut().zip(rhs.q) {
            *a += b;
        }
        self
    }
}

impl Sub for ExactScalar {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.q.iter_mut().zip(rhs.q) {
            *a -= b;
        }
        self
    }
}

impl Neg for ExactScalar {
    type Output = Self;
    fn neg(self) -> Self {
        ExactScalar {
            q: self.q.map(|c| -c),
        }
    }
}

impl Mul for ExactScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for &a in &Radical::ALL {
            let ca = &self.q[a.index()];
            if ca.is_zero() {
                continue;
            }
            for &b in &Radical::ALL {
                let cb = &rhs.q[b.index()];
                if cb.is_zero() {
                    continue;
                }
                let (factor, r) = Radical::product(a, b);
                out.q[r.index()] += ca * cb * BigRational::from_integer(factor.into());
            }
        }
        out
    }
}

impl Div for ExactScalar {
    type Output = Self;
    /// Panics on a zero divisor; use [`ExactScalar::checked_div`] for a `Result`.
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("exact division by zero")
    }
}

impl Scalar for ExactScalar {
    fn zero() -> Self {
        ExactScalar {
            q: [
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
        }
    }
    fn one() -> Self {
        Self::rational(1, 1)
    }
    fn from_i64(n: i64) -> Self {
        Self::rational(n, 1)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(num, den)
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.clone()
    }
    fn is_zero(&self) -> bool {
        self.q.iter().all(Zero::is_zero)
    }
    fn value(&self) -> f64 {
        self.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> ExactScalar {
        ExactScalar::parse(s).unwrap()
    }

    #[test]
    fn radical_products() {
        assert_eq!(ExactScalar::sqrt2() * ExactScalar::sqrt5(), ExactScalar::sqrt10());
        assert_eq!(
            ExactScalar::sqrt2() * ExactScalar::sqrt10(),
            ExactScalar::term(2, 1, Radical::Five)
        );
        assert_eq!(
            ExactScalar::sqrt5() * ExactScalar::sqrt10(),
            ExactScalar::term(5, 1, Radical::Two)
        );
        assert_eq!(ExactScalar::sqrt10() * ExactScalar::sqrt10(), ExactScalar::from_i64(10));
    }

    #[test]
    fn quarter_times_half_root_ten() {
        assert_eq!(lit("sqrt(10)/4") * lit("sqrt(10)/2"), ExactScalar::rational(5, 4));
    }

    #[test]
    fn rationalized_inverse() {
        let q = ExactScalar::one().checked_div(&lit("1+sqrt(5)")).unwrap();
        assert_eq!(q, lit("-1/4+sqrt(5)/4"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            ExactScalar::one().checked_div(&ExactScalar::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn literal_forms() {
        assert_eq!(lit("-3/2*sqrt(5)"), ExactScalar::term(-3, 2, Radical::Five));
        assert_eq!(lit("sqrt(10)/4"), ExactScalar::term(1, 4, Radical::Ten));
        assert_eq!(lit(" 2 - sqrt(2) "), ExactScalar::from_i64(2) - ExactScalar::sqrt2());
        assert_eq!(lit("-sqrt(10)/2"), ExactScalar::term(-1, 2, Radical::Ten));
        assert_eq!(lit("0"), ExactScalar::zero());
        assert!(ExactScalar::parse("sqrt(3)").is_err());
        assert!(ExactScalar::parse("1/0").is_err());
        assert!(ExactScalar::parse("").is_err());
        assert!(ExactScalar::parse("abc").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["sqrt(10)/4", "-3/2*sqrt(5)", "-1/4+sqrt(5)/4", "0", "7", "1-sqrt(2)+2*sqrt(10)/3"] {
            let x = lit(s);
            assert_eq!(lit(&x.to_string()), x, "{s}");
        }
        assert_eq!(lit("3/2*sqrt(5)").to_string(), "3/2*sqrt(5)");
        assert_eq!(lit("sqrt(10)/4").to_string(), "sqrt(10)/4");
    }

    #[test]
    fn float_value() {
        assert!((lit("1+sqrt(5)").to_f64() - (1.0 + 5f64.sqrt())).abs() < 1e-15);
    }
}
