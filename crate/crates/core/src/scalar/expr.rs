//! Interval functions of the cone parameter `t`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use super::Jet2;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sinh,
    Cosh,
    Tanh,
    Acos,
    Asin,
    Atan,
    Sqrt,
}

impl Func {
    const ALL: [Func; 12] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Ln,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Acos,
        Func::Asin,
        Func::Atan,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Acos => "acos",
            Func::Asin => "asin",
            Func::Atan => "atan",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        let alias = match s {
            "arccos" => "acos",
            "arcsin" => "asin",
            "arctan" => "atan",
            "log" => "ln",
            other => other,
        };
        Self::ALL.into_iter().find(|f| f.name() == alias)
    }

    fn check(self, x: f64) -> Result<()> {
        let ok = match self {
            Func::Acos | Func::Asin => (-1.0..=1.0).contains(&x),
            Func::Ln => x > 0.0,
            Func::Sqrt => x >= 0.0,
            _ => true,
        };
        if ok && x.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain {
                func: self.name(),
                value: x,
            })
        }
    }

    fn apply_f64(self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Acos => x.acos(),
            Func::Asin => x.asin(),
            Func::Atan => x.atan(),
            Func::Sqrt => x.sqrt(),
        })
    }

    fn apply_jet(self, x: Jet2) -> Result<Jet2> {
        self.check(x.v)?;
        Ok(match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Acos => x.acos(),
            Func::Asin => x.asin(),
            Func::Atan => x.atan(),
            Func::Sqrt => x.sqrt(),
        })
    }
}

/// Expression tree in the single variable `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    T,
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn t() -> Self {
        Expr::T
    }

    pub fn c(x: f64) -> Self {
        Expr::Const(x)
    }

    pub fn call(self, f: Func) -> Self {
        Expr::Call(f, Box::new(self))
    }

    pub fn sin(self) -> Self {
        self.call(Func::Sin)
    }
    pub fn cos(self) -> Self {
        self.call(Func::Cos)
    }
    pub fn tan(self) -> Self {
        self.call(Func::Tan)
    }
    pub fn exp(self) -> Self {
        self.call(Func::Exp)
    }
    pub fn sinh(self) -> Self {
        self.call(Func::Sinh)
    }
    pub fn cosh(self) -> Self {
        self.call(Func::Cosh)
    }
    pub fn tanh(self) -> Self {
        self.call(Func::Tanh)
    }
    pub fn acos(self) -> Self {
        self.call(Func::Acos)
    }
    pub fn atan(self) -> Self {
        self.call(Func::Atan)
    }
    pub fn sqrt(self) -> Self {
        self.call(Func::Sqrt)
    }

    pub fn pow(self, e: Expr) -> Self {
        Expr::Pow(Box::new(self), Box::new(e))
    }

    pub fn depends_on_t(&self) -> bool {
        match self {
            Expr::T => true,
            Expr::Const(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on_t(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on_t() || b.depends_on_t()
            }
        }
    }

    /// Value and first two `t`-derivatives.
    pub fn jet(&self, t: f64) -> Result<Jet2> {
        Ok(match self {
            Expr::T => Jet2::variable(t),
            Expr::Const(c) => Jet2::constant(*c),
            Expr::Add(a, b) => a.jet(t)? + b.jet(t)?,
            Expr::Sub(a, b) => a.jet(t)? - b.jet(t)?,
            Expr::Mul(a, b) => a.jet(t)? * b.jet(t)?,
            Expr::Div(a, b) => {
                let d = b.jet(t)?;
                if d.v == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                a.jet(t)? / d
            }
            Expr::Neg(a) => -a.jet(t)?,
            Expr::Call(f, a) => f.apply_jet(a.jet(t)?)?,
            Expr::Pow(a, b) => {
                let base = a.jet(t)?;
                if b.depends_on_t() {
                    if base.v <= 0.0 {
                        return Err(Error::Domain {
                            func: "pow",
                            value: base.v,
                        });
                    }
                    (b.jet(t)? * base.ln()).exp()
                } else {
                    let p = b.value(t)?;
                    if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
                        if base.v == 0.0 && p < 0.0 {
                            return Err(Error::DivisionByZero);
                        }
                        base.powi(p as i32)
                    } else if base.v > 0.0 {
                        base.powf(p)
                    } else {
                        return Err(Error::Domain {
                            func: "pow",
                            value: base.v,
                        });
                    }
                }
            }
        })
    }

    /// Plain real evaluation, independent of the jet arithmetic.
    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(match self {
            Expr::T => t,
            Expr::Const(c) => *c,
            Expr::Add(a, b) => a.value(t)? + b.value(t)?,
            Expr::Sub(a, b) => a.value(t)? - b.value(t)?,
            Expr::Mul(a, b) => a.value(t)? * b.value(t)?,
            Expr::Div(a, b) => {
                let d = b.value(t)?;
                if d == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                a.value(t)? / d
            }
            Expr::Neg(a) => -a.value(t)?,
            Expr::Call(f, a) => f.apply_f64(a.value(t)?)?,
            Expr::Pow(a, b) => {
                let (x, p) = (a.value(t)?, b.value(t)?);
                if x < 0.0 && p.fract() != 0.0 {
                    return Err(Error::Domain {
                        func: "pow",
                        value: x,
                    });
                }
                x.powf(p)
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if *c < 0.0 => 3,
            _ => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::T => f.write_str("t"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Add(a, b) => {
                side(f, a, 1)?;
                f.write_str(" + ")?;
                side(f, b, 2)
            }
            Expr::Sub(a, b) => {
                side(f, a, 1)?;
                f.write_str(" - ")?;
                side(f, b, 2)
            }
            Expr::Mul(a, b) => {
                side(f, a, 2)?;
                f.write_str("*")?;
                side(f, b, 3)
            }
            Expr::Div(a, b) => {
                side(f, a, 2)?;
                f.write_str("/")?;
                side(f, b, 3)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                side(f, a, 3)
            }
            Expr::Pow(a, b) => {
                side(f, a, 5)?;
                f.write_str("^")?;
                side(f, b, 4)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $v:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$v(Box::new(self), Box::new(rhs))
            }
        }
        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $m(self, rhs: f64) -> Expr {
                Expr::$v(Box::new(self), Box::new(Expr::Const(rhs)))
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$v(Box::new(Expr::Const(self)), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Expr(format!("unexpected trailing input in `{s}`")));
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part, e.g. 1e-3
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse()
                .map_err(|_| Error::Expr(format!("bad number `{text}`")))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Expr(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Expr(format!("expected `{c}`")))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let r = self.product()?;
            e = if op == '+' { e + r } else { e - r };
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let r = self.unary()?;
            e = if op == '*' { e * r } else { e / r };
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(match self.unary()? {
                    Expr::Const(c) => Expr::Const(-c),
                    e => -e,
                })
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let e = self.unary()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Expr("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Op('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "t" => Ok(Expr::T),
                "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                "pow" => {
                    self.expect('(')?;
                    let a = self.sum()?;
                    self.expect(',')?;
                    let b = self.sum()?;
                    self.expect(')')?;
                    Ok(a.pow(b))
                }
                _ => {
                    let f = Func::from_name(&name)
                        .ok_or_else(|| Error::Expr(format!("unknown identifier `{name}`")))?;
                    self.expect('(')?;
                    let a = self.sum()?;
                    self.expect(')')?;
                    Ok(a.call(f))
                }
            },
            Tok::Op(c) => Err(Error::Expr(format!("unexpected `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn parses_and_prints() {
        for s in [
            "sin(t)",
            "2*atan(exp(0.5)*tan(t/2))",
            "t^2 - 3*cosh(t)",
            "-t/(1 + t^2)",
            "sqrt(10 - 9*cos(t)^2)/-3.1622776601683795",
            "acos(-2*cosh(t)/2.23606797749979)",
        ] {
            let e = parse(s);
            let again = parse(&e.to_string());
            assert_eq!(e, again, "{s} -> {e}");
        }
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("1+2*3").value(0.0).unwrap(), 7.0);
        assert_eq!(parse("2^3^2").value(0.0).unwrap(), 512.0);
        assert_eq!(parse("-2^2").value(0.0).unwrap(), -4.0);
        assert_eq!(parse("(1-t)*(1+t)").value(3.0).unwrap(), -8.0);
    }

    #[test]
    fn domain_violation_reports_argument() {
        match parse("acos(t)").jet(1.5) {
            Err(Error::Domain { func, value }) => {
                assert_eq!(func, "acos");
                assert_eq!(value, 1.5);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("ln(t)").jet(-1.0).is_err());
        assert!(parse("1/t").jet(0.0).is_err());
    }

    #[test]
    fn jet_of_composite() {
        // d/dt sin(t^2) = 2t cos(t^2); second: 2cos(t^2) - 4t^2 sin(t^2)
        let j = parse("sin(t^2)").jet(0.7).unwrap();
        let u: f64 = 0.49;
        assert!((j.v - u.sin()).abs() < 1e-15);
        assert!((j.d1 - 1.4 * u.cos()).abs() < 1e-14);
        assert!((j.d2 - (2.0 * u.cos() - 4.0 * u * u.sin())).abs() < 1e-14);
    }

    #[test]
    fn variable_exponent() {
        let j = parse("t^t").jet(2.0).unwrap();
        // (t^t)' = t^t (ln t + 1)
        assert!((j.d1 - 4.0 * (2f64.ln() + 1.0)).abs() < 1e-12);
    }
}
