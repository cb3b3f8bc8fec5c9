//! Frame algebras: constant structure equations `de^i = Σ c^i_{jk} e^{jk}` on
//! an orthonormal coframe, with exterior derivative, codifferential,
//! validation and change of basis.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{self, Form};
use crate::linalg::{self, Matrix};
use crate::scalar::{ExactScalar, Scalar};

pub type ExactForm = Form<ExactScalar>;

#[derive(Debug)]
pub struct FrameAlgebra {
    names: Vec<String>,
    de: Vec<ExactForm>,
    /// d(e^I) for every monomial, per degree, built on first use.
    d_basis: Vec<OnceLock<Vec<ExactForm>>>,
}

impl Clone for FrameAlgebra {
    fn clone(&self) -> Self {
        FrameAlgebra::build(self.names.clone(), self.de.clone())
    }
}

impl PartialEq for FrameAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.de == other.de
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// `(i, d(de^i))` for every coframe element with `d² e^i ≠ 0`.
    pub failures: Vec<(usize, ExactForm)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn default_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("e{i}")).collect()
}

impl FrameAlgebra {
    fn build(names: Vec<String>, de: Vec<ExactForm>) -> Self {
        let dim = de.len();
        FrameAlgebra {
            names,
            de,
            d_basis: (0..=dim).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Frame with coframe names `e1..en`. Does not check `d² = 0`; see
    /// [`FrameAlgebra::validate`].
    pub fn new(de: Vec<ExactForm>) -> Result<Self> {
        Self::with_names(default_names(de.len()), de)
    }

    pub fn with_names(names: Vec<String>, de: Vec<ExactForm>) -> Result<Self> {
        let n = de.len();
        if n == 0 || n > exterior::MAX_DIM {
            return Err(Error::Frame(format!("unsupported dimension {n}")));
        }
        if names.len() != n {
            return Err(Error::Frame(format!("{} names for {n} coframe elements", names.len())));
        }
        for (i, f) in de.iter().enumerate() {
            if f.dim() != n || f.degree() != 2 {
                return Err(Error::Frame(format!(
                    "d{} must be a 2-form in dimension {n}",
                    names[i]
                )));
            }
        }
        Ok(Self::build(names, de))
    }

    /// Structure equations written as digit monomials, e.g.
    /// `[[(one, "23")], [(-one, "13")], …]`.
    pub fn from_table(dim: usize, rows: &[Vec<(ExactScalar, &str)>]) -> Result<Self> {
        let de = rows
            .iter()
            .map(|row| {
                row.iter().fold(ExactForm::zero(dim, 2), |acc, (c, digits)| {
                    let idx: Vec<usize> = digits
                        .chars()
                        .map(|ch| ch.to_digit(10).expect("digit index") as usize)
                        .collect();
                    acc + ExactForm::term(dim, c.clone(), &idx)
                })
            })
            .collect();
        Self::new(de)
    }

    pub fn abelian(dim: usize) -> Self {
        Self::build(default_names(dim), vec![ExactForm::zero(dim, 2); dim])
    }

    pub fn dim(&self) -> usize {
        self.de.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `de^i`, 1-based.
    pub fn de(&self, i: usize) -> &ExactForm {
        &self.de[i - 1]
    }

    pub fn differentials(&self) -> &[ExactForm] {
        &self.de
    }

    fn d_monomials(&self, p: usize) -> &[ExactForm] {
        self.d_basis[p].get_or_init(|| {
            let n = self.dim();
            exterior::masks(n, p)
                .iter()
                .map(|&m| {
                    let idx = exterior::mask_indices(m);
                    let mut out = ExactForm::zero(n, p + 1);
                    for (k, &i) in idx.iter().enumerate() {
                        let before = ExactForm::basis(n, &idx[..k]);
                        let after = ExactForm::basis(n, &idx[k + 1..]);
                        let term = before.wedge(&self.de[i - 1]).wedge(&after);
                        out = if k % 2 == 0 { out + term } else { out - term };
                    }
                    out
                })
                .collect()
        })
    }

    pub fn checked_d<S: Scalar>(&self, a: &Form<S>) -> Result<Form<S>> {
        let n = self.dim();
        if a.dim() != n {
            return Err(Error::Dimension(a.dim(), n));
        }
        if a.degree() == n {
            return Err(Error::Degree(n + 1, n));
        }
        let basis = self.d_monomials(a.degree());
        let mut out = Form::zero(n, a.degree() + 1);
        for (i, c) in a.coeffs().iter().enumerate() {
            if c.is_zero() || basis[i].is_zero() {
                continue;
            }
            out = out + basis[i].map(|x| S::from_exact(x) * c.clone());
        }
        Ok(out)
    }

    /// Exterior derivative of a constant-coefficient form (Leibniz rule on
    /// the coframe). Panics on a dimension mismatch or a top-degree input.
    pub fn d<S: Scalar>(&self, a: &Form<S>) -> Form<S> {
        self.checked_d(a).expect("exterior derivative")
    }

    /// `δ = (−1)^{n(p+1)+1} * d *` on `p`-forms, `p ≥ 1`.
    pub fn checked_codifferential<S: Scalar>(&self, a: &Form<S>) -> Result<Form<S>> {
        if a.degree() == 0 {
            return Err(Error::Degree(0, 1));
        }
        let n = self.dim();
        let p = a.degree();
        let r = self.checked_d(&a.hodge())?.hodge();
        Ok(if (n * (p + 1) + 1) % 2 == 1 { -r } else { r })
    }

    pub fn codifferential<S: Scalar>(&self, a: &Form<S>) -> Form<S> {
        self.checked_codifferential(a).expect("codifferential")
    }

    pub fn validate(&self) -> ValidationReport {
        let failures = self
            .de
            .iter()
            .enumerate()
            .filter_map(|(i, de)| {
                let dd = self.d(de);
                (!dd.is_zero()).then(|| (i + 1, dd))
            })
            .collect();
        ValidationReport { failures }
    }

    /// Rewrites the structure equations in the coframe `h^i = Σ_j B_ij e^j`.
    pub fn change_basis(&self, b: &Matrix<ExactScalar>) -> Result<Self> {
        let n = self.dim();
        if b.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(b.len(), n));
        }
        let b_inv = linalg::inverse(b)?;
        // e^k = Σ_l (B⁻¹)_kl h^l
        let e_in_h: Vec<ExactForm> = (0..n)
            .map(|k| {
                (0..n).fold(ExactForm::zero(n, 1), |acc, l| {
                    acc + ExactForm::term(n, b_inv[k][l].clone(), &[l + 1])
                })
            })
            .collect();
        let dh: Vec<ExactForm> = (0..n)
            .map(|i| {
                let de_i = (0..n).fold(ExactForm::zero(n, 2), |acc, j| {
                    if b[i][j].is_zero() {
                        acc
                    } else {
                        acc + self.de[j].scale(&b[i][j])
                    }
                });
                de_i.substitute(&e_in_h)
            })
            .collect();
        Self::with_names(self.names.clone(), dh)
    }

    /// Antisymmetric structure constants in floating point:
    /// `de^k = Σ_{i<j} c[k][i][j] e^i ∧ e^j`, with `c[k][j][i] = −c[k][i][j]`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<f64>>> {
        let n = self.dim();
        let mut c = vec![vec![vec![0.0; n]; n]; n];
        for (k, de) in self.de.iter().enumerate() {
            for (m, v) in de.terms() {
                let idx = exterior::mask_indices(m);
                let (i, j) = (idx[0] - 1, idx[1] - 1);
                c[k][i][j] = v.to_f64();
                c[k][j][i] = -v.to_f64();
            }
        }
        c
    }

    /// Adds `extra` closed coframe elements after the existing ones.
    pub fn extend_abelian(&self, extra: usize) -> Self {
        let n = self.dim() + extra;
        let mut de: Vec<ExactForm> = self.de.iter().map(|f| f.extend(n)).collect();
        de.extend((0..extra).map(|_| ExactForm::zero(n, 2)));
        Self::build(default_names(n), de)
    }

    pub fn to_file(&self) -> FrameFile {
        let d = self
            .de
            .iter()
            .zip(&self.names)
            .map(|(de, name)| {
                let terms = de
                    .terms()
                    .map(|(m, c)| {
                        let mono = exterior::mask_indices(m)
                            .iter()
                            .map(|&i| self.names[i - 1].as_str())
                            .collect::<Vec<_>>()
                            .join("^");
                        (c.to_string(), mono)
                    })
                    .collect();
                (name.clone(), terms)
            })
            .collect();
        FrameFile {
            dim: self.dim(),
            coframe: self.names.clone(),
            d,
        }
    }

    pub fn from_file(file: &FrameFile) -> Result<Self> {
        let n = file.dim;
        if file.coframe.len() != n {
            return Err(Error::Frame(format!(
                "dim is {n} but {} coframe names given",
                file.coframe.len()
            )));
        }
        if n == 0 || n > exterior::MAX_DIM {
            return Err(Error::Frame(format!("unsupported dimension {n}")));
        }
        let lookup = |name: &str| -> Result<usize> {
            file.coframe
                .iter()
                .position(|c| c == name.trim())
                .map(|i| i + 1)
                .ok_or_else(|| Error::Frame(format!("unknown coframe element `{name}`")))
        };
        for key in file.d.keys() {
            lookup(key)?;
        }
        let mut de = Vec::with_capacity(n);
        for name in &file.coframe {
            let mut form = ExactForm::zero(n, 2);
            for (lit, mono) in file.d.get(name).map(Vec::as_slice).unwrap_or(&[]) {
                let idx = mono.split('^').map(lookup).collect::<Result<Vec<_>>>()?;
                if idx.len() != 2 {
                    return Err(Error::Frame(format!("`{mono}` is not a 2-form monomial")));
                }
                form = form + ExactForm::term(n, ExactScalar::parse(lit)?, &idx);
            }
            de.push(form);
        }
        Self::with_names(file.coframe.clone(), de)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("frame serializes")
    }
}

/// On-disk frame description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFile {
    pub dim: usize,
    pub coframe: Vec<String>,
    /// coframe name → list of `[coefficient literal, "ea^eb"]`.
    #[serde(default)]
    pub d: BTreeMap<String, Vec<(String, String)>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> ExactScalar {
        ExactScalar::one()
    }

    fn su2() -> FrameAlgebra {
        FrameAlgebra::from_table(
            3,
            &[vec![(one(), "23")], vec![(-one(), "13")], vec![(one(), "12")]],
        )
        .unwrap()
    }

    #[test]
    fn su2_d_squared() {
        let f = su2();
        assert_eq!(f.d(&ExactForm::basis(3, &[1])), ExactForm::basis(3, &[2, 3]));
        assert!(f.validate().passed());
    }

    #[test]
    fn corrupted_frame_fails_on_first_element() {
        let f = FrameAlgebra::from_table(3, &[vec![(one(), "23")], vec![(one(), "12")], vec![]]).unwrap();
        let report = f.validate();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].0, 1);
    }

    #[test]
    fn json_round_trip() {
        let f = su2();
        let text = f.to_json();
        let g = FrameAlgebra::from_json(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.to_json(), text);
    }

    #[test]
    fn json_rejects_unknown_names() {
        let text = r#"{"dim": 2, "coframe": ["a", "b"], "d": {"a": [["1", "a^c"]]}}"#;
        assert!(FrameAlgebra::from_json(text).is_err());
    }

    #[test]
    fn identity_change_of_basis() {
        let f = su2();
        assert_eq!(f.change_basis(&linalg::identity(3)).unwrap(), f);
    }

    #[test]
    fn top_degree_has_no_derivative() {
        let f = su2();
        assert!(f.checked_d(&ExactForm::basis(3, &[1, 2, 3])).is_err());
    }
}
