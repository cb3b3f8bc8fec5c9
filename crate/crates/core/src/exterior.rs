//! Dense exterior algebra over an oriented orthonormal coframe `e^1..e^n`,
//! `n ≤ 8`.
//!
//! A `p`-form stores one coefficient per increasing index tuple, in
//! lexicographic tuple order. Monomials are addressed internally by a bit
//! mask (bit `i` is `e^{i+1}`).

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 8;

struct Basis {
    /// masks[p] = degree-p monomials in lexicographic tuple order.
    masks: Vec<Vec<u16>>,
    /// position of a mask within its degree.
    rank: Vec<usize>,
}

fn combinations(n: usize, p: usize) -> Vec<u16> {
    fn rec(start: usize, n: usize, left: usize, acc: u16, out: &mut Vec<u16>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            rec(i + 1, n, left - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, 0, &mut out);
    out
}

static BASES: LazyLock<Vec<Basis>> = LazyLock::new(|| {
    (0..=MAX_DIM)
        .map(|n| {
            let masks: Vec<Vec<u16>> = (0..=n).map(|p| combinations(n, p)).collect();
            let mut rank = vec![0; 1 << n];
            for list in &masks {
                for (i, &m) in list.iter().enumerate() {
                    rank[m as usize] = i;
                }
            }
            Basis { masks, rank }
        })
        .collect()
});

pub(crate) fn masks(n: usize, p: usize) -> &'static [u16] {
    &BASES[n].masks[p]
}

pub(crate) fn rank(n: usize, mask: u16) -> usize {
    BASES[n].rank[mask as usize]
}

/// `true` when `e^a ∧ e^b = −e^{a∪b}` (a, b disjoint).
pub(crate) fn wedge_sign_negative(a: u16, b: u16) -> bool {
    let mut count = 0;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        count += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    count % 2 == 1
}

pub(crate) fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    masks(n, k).len()
}

/// A homogeneous differential form with constant coefficients in `S`.
#[derive(Clone, PartialEq)]
pub struct Form<S> {
    dim: usize,
    degree: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM && degree <= dim, "degree {degree} in dimension {dim}");
        Form {
            dim,
            degree,
            coeffs: vec![S::zero(); binomial(dim, degree)],
        }
    }

    /// Degree-0 form.
    pub fn scalar(dim: usize, value: S) -> Self {
        let mut f = Self::zero(dim, 0);
        f.coeffs[0] = value;
        f
    }

    /// `coeff · e^{i1} ∧ … ∧ e^{ip}`; indices are 1-based and may come in any
    /// order (the permutation sign is applied). Repeated indices give zero.
    pub fn term(dim: usize, coeff: S, indices: &[usize]) -> Self {
        let mut f = Self::zero(dim, indices.len());
        let mut mask: u16 = 0;
        let mut negative = false;
        for &i in indices {
            assert!((1..=dim).contains(&i), "index {i} out of range 1..={dim}");
            let bit = 1u16 << (i - 1);
            if mask & bit != 0 {
                return f;
            }
            negative ^= wedge_sign_negative(mask, bit);
            mask |= bit;
        }
        f.coeffs[rank(dim, mask)] = if negative { -coeff } else { coeff };
        f
    }

    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Self::term(dim, S::one(), indices)
    }

    /// Sum of monomials written as digit strings, e.g. `[(1, "127"), (-1, "146")]`.
    pub fn from_digits(dim: usize, terms: &[(i64, &str)]) -> Self {
        let degree = terms.first().map_or(0, |t| t.1.len());
        let mut out = Self::zero(dim, degree);
        for (c, digits) in terms {
            let idx: Vec<usize> = digits
                .chars()
                .map(|ch| ch.to_digit(10).expect("digit index") as usize)
                .collect();
            out = out + Self::term(dim, S::from_i64(*c), &idx);
        }
        out
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), binomial(dim, degree));
        Form { dim, degree, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn masks(&self) -> &'static [u16] {
        masks(self.dim, self.degree)
    }

    /// Coefficient of `e^{indices}` (sorted, 1-based).
    pub fn get(&self, indices: &[usize]) -> S {
        let probe = Self::term(self.dim, S::one(), indices);
        match probe.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => probe.coeffs[i].clone() * self.coeffs[i].clone(),
            None => S::zero(),
        }
    }

    pub(crate) fn add_to_mask(&mut self, mask: u16, value: S) {
        let r = rank(self.dim, mask);
        let c = std::mem::replace(&mut self.coeffs[r], S::zero());
        self.coeffs[r] = c + value;
    }

    /// Nonzero terms as `(mask, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (u16, &S)> {
        self.masks()
            .iter()
            .copied()
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
    }

    /// Nonzero terms with 1-based index tuples.
    pub fn monomials(&self) -> Vec<(Vec<usize>, S)> {
        self.terms().map(|(m, c)| (mask_indices(m), c.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// The value of a degree-0 form.
    pub fn scalar_part(&self) -> S {
        assert_eq!(self.degree, 0);
        self.coeffs[0].clone()
    }

    /// Coefficient of the volume form `e^{1…n}` of a top-degree form.
    pub fn top(&self) -> S {
        assert_eq!(self.degree, self.dim);
        self.coeffs[0].clone()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Coefficient-wise map that may depend on the monomial.
    pub fn map_masked<T: Scalar>(&self, f: impl Fn(u16, &S) -> T) -> Form<T> {
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .masks()
                .iter()
                .zip(&self.coeffs)
                .map(|(&m, c)| f(m, c))
                .collect(),
        }
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map(|c| c.value())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&S::from_ratio(num, den))
    }

    /// Largest coefficient magnitude (numeric view).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.value().abs()).fold(0.0, f64::max)
    }

    pub fn checked_wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension(self.dim, other.dim));
        }
        let n = self.dim;
        let p = self.degree + other.degree;
        if p > n {
            // The zero form of degree p+q does not fit the dense layout;
            // callers only ever see it as "nothing".
            return Err(Error::Degree(p, n));
        }
        let mut out = Self::zero(n, p);
        for (ma, a) in self.terms() {
            for (mb, b) in other.terms() {
                if ma & mb != 0 {
                    continue;
                }
                let prod = a.clone() * b.clone();
                let v = if wedge_sign_negative(ma, mb) { -prod } else { prod };
                out.add_to_mask(ma | mb, v);
            }
        }
        Ok(out)
    }

    /// Exterior product. Panics on a dimension mismatch or when the degree
    /// exceeds the dimension (use [`Form::checked_wedge`] to handle those).
    pub fn wedge(&self, other: &Self) -> Self {
        self.checked_wedge(other).expect("wedge")
    }

    /// `e^I ∧ *e^I = vol`, orientation `e^1 ∧ … ∧ e^n`.
    pub fn hodge(&self) -> Self {
        let n = self.dim;
        let full: u16 = ((1u32 << n) - 1) as u16;
        let mut out = Self::zero(n, n - self.degree);
        for (m, c) in self.terms() {
            let comp = full ^ m;
            let v = if wedge_sign_negative(m, comp) { -c.clone() } else { c.clone() };
            out.add_to_mask(comp, v);
        }
        out
    }

    pub fn checked_inner(&self, other: &Self) -> Result<S> {
        if self.dim != other.dim {
            return Err(Error::Dimension(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(Error::Degree(self.degree, other.degree));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    /// Pointwise inner product, `⟨e^I, e^J⟩ = δ_IJ`.
    pub fn inner(&self, other: &Self) -> S {
        self.checked_inner(other).expect("inner")
    }

    pub fn norm2(&self) -> S {
        self.inner(self)
    }

    /// Interior product with the dual vector `e_i` (1-based).
    pub fn interior(&self, i: usize) -> Self {
        assert!(self.degree > 0);
        let bit = 1u16 << (i - 1);
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (m, c) in self.terms() {
            if m & bit == 0 {
                continue;
            }
            let below = (m & (bit - 1)).count_ones();
            let v = if below % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_to_mask(m ^ bit, v);
        }
        out
    }

    /// The same form viewed in a higher dimension (extra coframe elements
    /// appended after the existing ones).
    pub fn extend(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        let mut out = Self::zero(dim, self.degree);
        for (m, c) in self.terms() {
            out.add_to_mask(m, c.clone());
        }
        out
    }

    /// Restriction to the first `dim` coframe elements; terms involving the
    /// dropped ones are discarded.
    pub fn truncate(&self, dim: usize) -> Self {
        let keep: u16 = ((1u32 << dim) - 1) as u16;
        let mut out = Self::zero(dim, self.degree);
        for (m, c) in self.terms() {
            if m & !keep == 0 {
                out.add_to_mask(m, c.clone());
            }
        }
        out
    }

    /// Substitutes `e^k ↦ images[k-1]` (each a 1-form, possibly in another
    /// dimension) and expands.
    pub fn substitute(&self, images: &[Form<S>]) -> Self {
        assert_eq!(images.len(), self.dim);
        let target = images[0].dim;
        let mut out = Self::zero(target, self.degree);
        for (m, c) in self.terms() {
            let mut acc = Form::scalar(target, c.clone());
            for i in mask_indices(m) {
                acc = acc.wedge(&images[i - 1]);
            }
            out = out + acc;
        }
        out
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree), "adding forms of different shape");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            if b.is_zero() {
                continue;
            }
            let old = std::mem::replace(a, S::zero());
            *a = old + b;
        }
        self
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<'a, S: Scalar> Add for &'a Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Self) -> Form<S> {
        self.clone() + rhs.clone()
    }
}

impl<'a, S: Scalar> Sub for &'a Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Self) -> Form<S> {
        self.clone() - rhs.clone()
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            let digits: String = mask_indices(m).iter().map(|i| i.to_string()).collect();
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, text),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let body = if body.contains(['+', '-']) { format!("({body})") } else { body };
            if self.degree == 0 {
                f.write_str(&body)?;
            } else if body == "1" {
                write!(f, "e{digits}")?;
            } else {
                write!(f, "{body}*e{digits}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}|{}](", self.dim, self.degree)?;
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            let digits: String = mask_indices(m).iter().map(|i| i.to_string()).collect();
            write!(f, "e{digits}: {c:?}")?;
        }
        f.write_str(")")
    }
}
