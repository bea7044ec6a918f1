//! Arrangements of eight planes in P^3 and their exact incidence census.
//!
//! An arrangement is the octic `F = lambda * L_1 ... L_8`. Forms are kept in
//! canonical scaling (primitive integer coefficients, first nonzero entry
//! positive); the product of the scale factors removed during
//! canonicalisation is remembered so that `F` itself never changes.

mod census;
mod parse;

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{primitive, q, Vec4, Q};

pub use census::{incidence_census, Census, IncidenceLine, IncidencePoint};
pub use parse::{parse_arrangement, parse_arrangement_file, parse_product};

pub const VARS: [char; 4] = ['x', 'y', 'z', 't'];

/// A plane `ax + by + cz + dt = 0` in canonical scaling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinearForm {
    coeffs: [i64; 4],
}

impl LinearForm {
    /// Canonicalises `v`; returns the form and the scale `c` with `v = c * form`.
    pub fn from_rational(v: &Vec4) -> Result<(Self, Q)> {
        let (coeffs, c) = primitive(v)?;
        Ok((Self { coeffs }, c))
    }

    pub fn new(v: [i64; 4]) -> Result<Self> {
        Ok(Self::from_rational(&v.map(q))?.0)
    }

    pub fn coeffs(&self) -> &[i64; 4] {
        &self.coeffs
    }

    pub fn to_rational(&self) -> Vec4 {
        self.coeffs.map(q)
    }

    pub fn eval(&self, p: &Vec4) -> Q {
        self.coeffs.iter().zip(p).fold(Q::zero(), |s, (&a, x)| s + q(a) * x)
    }
}

/// Writes `a x + b y + ...` with the given variable names, omitting zeros.
pub(crate) fn write_linear(f: &mut fmt::Formatter<'_>, coeffs: &[Q], names: &[&str]) -> fmt::Result {
    let mut first = true;
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let neg = c < &Q::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
            (true, false) => {}
        }
        if name.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{name}")?;
        } else {
            write!(f, "{mag}{name}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, &self.to_rational(), &["x", "y", "z", "t"])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub label: String,
    forms: Vec<LinearForm>,
    lambda: Q,
    form_scale: Q,
    pub b2: Option<u32>,
}

impl Arrangement {
    /// Builds an arrangement from eight (not necessarily canonical) forms.
    pub fn new(label: impl Into<String>, raw: &[Vec4], lambda: Q) -> Result<Self> {
        if raw.len() != 8 {
            return Err(Error::FactorCount(raw.len()));
        }
        if lambda.is_zero() {
            return Err(Error::ZeroLambda);
        }
        let mut forms = Vec::with_capacity(8);
        let mut form_scale = Q::one();
        for v in raw {
            let (form, c) = LinearForm::from_rational(v)?;
            if forms.contains(&form) {
                return Err(Error::RepeatedPlane(form.to_string()));
            }
            form_scale *= c;
            forms.push(form);
        }
        Ok(Self { label: label.into(), forms, lambda, form_scale, b2: None })
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    /// The scaling as written next to the equation.
    pub fn lambda(&self) -> &Q {
        &self.lambda
    }

    /// The constant `c` with `F = c * prod(canonical forms)`.
    pub fn octic_scale(&self) -> Q {
        &self.lambda * &self.form_scale
    }

    /// Same planes, octic multiplied by `mu`.
    pub fn with_scaled_lambda(&self, mu: &Q) -> Result<Self> {
        if mu.is_zero() {
            return Err(Error::ZeroLambda);
        }
        Ok(Self { lambda: &self.lambda * mu, ..self.clone() })
    }

    pub fn equation(&self) -> String {
        let mut s = String::new();
        for f in &self.forms {
            let c = f.coeffs();
            if c.iter().filter(|&&x| x != 0).count() == 1 {
                s.push_str(&f.to_string());
            } else {
                s.push_str(&format!("({f})"));
            }
        }
        s
    }
}

/// `b3` of the smoothing from `b3` of the partial resolution and of the
/// rigid resolution (`b3_tilde = 2`).
pub fn betti_relations(b3_hat: i64, b3_tilde: i64) -> Result<i64> {
    if b3_tilde < 0 || b3_hat < b3_tilde {
        return Err(Error::InvalidBetti { b3_hat, b3_tilde });
    }
    Ok(2 * b3_hat - b3_tilde)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiData {
    pub b2_tilde: Option<u32>,
    pub b3_tilde: i64,
    pub b3_hat: i64,
    pub b3_smoothing: i64,
    pub p4_generic: usize,
}
