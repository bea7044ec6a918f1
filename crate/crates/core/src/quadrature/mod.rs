//! Period integrals `2 * int_C dx dy dz / sqrt(|lambda F|)` over cells.
//!
//! The main path is an iterated tanh-sinh rule over x-slabs of the cell
//! (outer x, middle y, inner z). The power substitution of the integrand
//! followed by a Gauss-Legendre product rule is an independent cross-check.

mod gauss;
mod power;
mod slab;
mod tanh_sinh;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, Census};
use crate::chamber::{chamber_decomposition, AffineArrangement, Cell3D, Chamber, Line2};
use crate::error::{Error, Result};
use crate::exact::{to_f64, Q};

pub use gauss::gauss_legendre;
pub use power::power_substitution;
pub use slab::{slabs, Slab};
pub use tanh_sinh::{integrate as tanh_sinh, Estimate, Rule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    Real,
    Imaginary,
}

impl Axis {
    pub fn flipped(self) -> Self {
        match self {
            Axis::Real => Axis::Imaginary,
            Axis::Imaginary => Axis::Real,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadSettings {
    /// Relative tolerance of the outer integral.
    pub tol: f64,
    /// Maximum number of integrand evaluations per cell.
    pub budget: u64,
    pub min_level: u32,
    pub max_level: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self { tol: 1e-11, budget: 1 << 30, min_level: 3, max_level: 10 }
    }
}

impl QuadSettings {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodValue {
    pub value: f64,
    pub axis: Axis,
    pub est_rel_err: f64,
    pub cell_ref: String,
    pub settings: QuadSettings,
    pub evaluations: u64,
}

/// The integration domain and integrand of one cell, chart independent:
/// `prefactor * prod |factor|^{-1/2}` over `polygon x [lower, upper]`.
#[derive(Clone, Debug)]
pub struct Prism {
    pub polygon: Vec<[Q; 2]>,
    pub lower: Line2,
    pub upper: Line2,
    /// `[a, b, c, d]` for `a x + b y + c z + d`, with the sign it has inside.
    pub factors: Vec<([Q; 4], i8)>,
    pub prefactor: f64,
}

impl Prism {
    /// `2 |det| |lambda'|^{-1/2} prod |L_i|^{-1/2}` where `lambda'` absorbs
    /// the constants of planes sent to infinity.
    pub fn from_cell(cell: &Cell3D, aff: &AffineArrangement) -> Self {
        let factors = aff
            .forms
            .iter()
            .enumerate()
            .filter(|(i, _)| !aff.excluded.contains(i))
            .map(|(i, f)| (f.coeffs.clone(), cell.sign_vector[i]))
            .collect();
        let lam = aff.effective_lambda().abs();
        let prefactor = 2.0 * to_f64(&aff.volume_factor) / to_f64(&lam).sqrt();
        Prism {
            polygon: cell.region.vertices.clone(),
            lower: aff.forms[cell.lower_sheet].graph().expect("graph"),
            upper: aff.forms[cell.upper_sheet].graph().expect("graph"),
            factors,
            prefactor,
        }
    }

    pub fn slabs(&self) -> Result<Vec<Slab>> {
        let f: Vec<[Q; 4]> = self.factors.iter().map(|(f, _)| f.clone()).collect();
        slabs(&self.polygon, &self.lower, &self.upper, &f)
    }

    /// Volume, exact.
    pub fn volume(&self) -> Q {
        let n = self.polygon.len();
        let area = (0..n)
            .fold(Q::zero(), |s, i| {
                let (a, b) = (&self.polygon[i], &self.polygon[(i + 1) % n]);
                s + &a[0] * &b[1] - &b[0] * &a[1]
            })
            .abs()
            / Q::from_integer(2.into());
        let c = self.polygon.iter().fold([Q::zero(), Q::zero()], |acc, p| [&acc[0] + &p[0], &acc[1] + &p[1]]);
        let m = Q::from_integer(n.into());
        let c = [&c[0] / &m, &c[1] / &m];
        area * (self.upper.eval(&c) - self.lower.eval(&c))
    }
}

/// Integrand at the slab point given by distances to both ends of each
/// level. `None` means the node sits on a zero of some factor within
/// rounding and is dropped.
#[inline]
pub(crate) fn integrand(slab: &Slab, signs: &[i8], prefactor: f64, d: &[[f64; 2]; 3]) -> Result<Option<f64>> {
    let mut denom = 1.0;
    for (i, f) in slab.factors.iter().enumerate() {
        let (v, bound) = f.eval(d);
        let noise = 64.0 * f64::EPSILON * bound;
        let s = signs[i] as f64;
        if v * s <= noise {
            if v * s < -noise.max(f64::MIN_POSITIVE) {
                return Err(Error::SignInconsistent { form: i, value: v });
            }
            return Ok(None);
        }
        denom *= (v * s).sqrt();
    }
    Ok(Some(prefactor / denom))
}

fn slab_integral(slab: &Slab, signs: &[i8], prefactor: f64, settings: &QuadSettings) -> Result<Estimate> {
    let outer = Rule { tol: settings.tol, min_level: settings.min_level, max_level: settings.max_level };
    let middle = Rule { tol: settings.tol * 0.1, ..outer };
    let inner = Rule { tol: settings.tol * 0.01, ..outer };
    let eval_x = |d1: [f64; 2]| -> Result<(f64, u64)> {
        let y = slab.y_at(&d1);
        if y <= 0.0 {
            return Ok((0.0, 0));
        }
        let r = tanh_sinh::integrate(y, &middle, |d2: [f64; 2]| -> Result<(f64, u64)> {
            let z = slab.z_at(&d1, &d2);
            if z <= 0.0 {
                return Ok((0.0, 0));
            }
            let r = tanh_sinh::integrate(z, &inner, |d3: [f64; 2]| -> Result<(f64, u64)> {
                Ok((integrand(slab, signs, prefactor, &[d1, d2, d3])?.unwrap_or(0.0), 1))
            })?;
            Ok((r.value, r.evaluations))
        })?;
        Ok((r.value, r.evaluations))
    };
    outer_parallel(slab.width, &outer, settings.budget, eval_x)
}

/// Outer tanh-sinh level with the nodes of each refinement evaluated in
/// parallel and summed in a fixed order.
fn outer_parallel<F>(w: f64, rule: &Rule, budget: u64, f: F) -> Result<Estimate>
where
    F: Fn([f64; 2]) -> Result<(f64, u64)> + Sync,
{
    let mut sum = tanh_sinh::Sum::default();
    let mut evaluations = 0u64;
    let mut prev = f64::NAN;
    let mut h = 1.0;
    let mut abs_err = f64::INFINITY;
    for level in 0..=rule.max_level.min(tanh_sinh::MAX_LEVEL) {
        if level > 0 {
            h *= 0.5;
        }
        let nodes = tanh_sinh::level_nodes(level);
        let vals: Vec<(f64, u64)> = nodes.par_iter().map(|nd| f(nd.distances(w))).collect::<Result<_>>()?;
        for (nd, (v, n)) in nodes.iter().zip(vals) {
            evaluations += n;
            sum.add(nd.weight * v);
        }
        let value = 0.5 * w * h * sum.value();
        if level > 0 {
            abs_err = (value - prev).abs();
            if level >= rule.min_level && abs_err <= rule.tol * value.abs() {
                return Ok(Estimate { value, abs_err, evaluations, converged: true });
            }
        }
        prev = value;
        if evaluations > budget {
            break;
        }
    }
    Ok(Estimate { value: prev, abs_err, evaluations, converged: false })
}

/// Integral of a prism by nested tanh-sinh, summed over its slabs.
pub fn prism_integral(prism: &Prism, settings: &QuadSettings) -> Result<Estimate> {
    let signs: Vec<i8> = prism.factors.iter().map(|(_, s)| *s).collect();
    let mut total = tanh_sinh::Sum::default();
    let mut err = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    for slab in prism.slabs()? {
        let mut s = *settings;
        s.budget = settings.budget.saturating_sub(evaluations);
        let r = slab_integral(&slab, &signs, prism.prefactor, &s)?;
        total.add(r.value);
        err += r.abs_err;
        evaluations += r.evaluations;
        converged &= r.converged;
    }
    let value = total.value();
    let est = Estimate { value, abs_err: err, evaluations, converged };
    if !converged || err > settings.tol * value.abs() || evaluations > settings.budget {
        return Err(Error::ToleranceNotReached {
            estimate: value,
            achieved: err / value.abs(),
            evaluations,
        });
    }
    Ok(est)
}

pub fn cell_axis(cell: &Cell3D) -> Axis {
    if cell.f_sign > 0 {
        Axis::Real
    } else {
        Axis::Imaginary
    }
}

/// `2 int_C |lambda F|^{-1/2}` with its axis: real where `lambda F > 0`.
pub fn cell_period(cell: &Cell3D, aff: &AffineArrangement, settings: &QuadSettings) -> Result<PeriodValue> {
    if !cell.closed {
        return Err(Error::NotBoxReducible("cell is not closed".into()));
    }
    let prism = Prism::from_cell(cell, aff);
    let r = prism_integral(&prism, settings)?;
    Ok(PeriodValue {
        value: r.value,
        axis: cell_axis(cell),
        est_rel_err: r.abs_err / r.value.abs(),
        cell_ref: String::new(),
        settings: *settings,
        evaluations: r.evaluations,
    })
}

/// Period of a whole chamber of the projective arrangement, summed over its
/// cells in a chart where it is bounded.
pub fn chamber_period(arr: &Arrangement, census: &Census, chamber: &Chamber, settings: &QuadSettings) -> Result<PeriodValue> {
    let d = chamber_decomposition(arr, census, chamber)?;
    let cells = chamber.cells(&d);
    if cells.is_empty() {
        return Err(Error::NotBoxReducible("chamber has no bounded cell".into()));
    }
    let mut total = tanh_sinh::Sum::default();
    let (mut err, mut evaluations) = (0.0, 0);
    for cell in &cells {
        let mut s = *settings;
        s.budget = settings.budget.saturating_sub(evaluations);
        let r = prism_integral(&Prism::from_cell(cell, &d.affine), &s)?;
        total.add(r.value);
        err += r.abs_err;
        evaluations += r.evaluations;
    }
    let value = total.value();
    Ok(PeriodValue {
        value,
        axis: if chamber.f_sign > 0 { Axis::Real } else { Axis::Imaginary },
        est_rel_err: err / value,
        cell_ref: chamber.sign_vector.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect(),
        settings: *settings,
        evaluations,
    })
}

/// Same period through the power substitution and a Gauss-Legendre rule.
pub fn power_substitution_period(cell: &Cell3D, aff: &AffineArrangement, k: u32, tol: f64) -> Result<PeriodValue> {
    let prism = Prism::from_cell(cell, aff);
    let r = power_substitution(&prism, k, tol)?;
    Ok(PeriodValue {
        value: r.value,
        axis: cell_axis(cell),
        est_rel_err: r.abs_err / r.value.abs(),
        cell_ref: String::new(),
        settings: QuadSettings { tol, ..QuadSettings::default() },
        evaluations: r.evaluations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRecord {
    pub mu: String,
    pub base: f64,
    pub scaled: f64,
    pub expected_ratio: f64,
    pub ratio: f64,
    pub base_axis: Axis,
    pub flipped_axis: Axis,
    pub flipped: f64,
}

/// Checks `period(mu lambda F) = mu^{-1/2} period(lambda F)` and that
/// `-lambda` swaps the axis keeping the magnitude.
pub fn scaling_check(cell: &Cell3D, aff: &AffineArrangement, mu: &Q, settings: &QuadSettings) -> Result<ScalingRecord> {
    if !mu.is_positive() {
        return Err(Error::ZeroLambda);
    }
    let base = cell_period(cell, aff, settings)?;
    let mut scaled_aff = aff.clone();
    scaled_aff.lambda = &aff.lambda * mu;
    let scaled = cell_period(cell, &scaled_aff, settings)?;
    let mut neg_aff = aff.clone();
    neg_aff.lambda = -aff.lambda.clone();
    let mut neg_cell = cell.clone();
    neg_cell.f_sign = -cell.f_sign;
    let flipped = cell_period(&neg_cell, &neg_aff, settings)?;
    let expected_ratio = 1.0 / mu.to_f64().unwrap_or(f64::NAN).sqrt();
    let ratio = scaled.value / base.value;
    let rec = ScalingRecord {
        mu: mu.to_string(),
        base: base.value,
        scaled: scaled.value,
        expected_ratio,
        ratio,
        base_axis: base.axis,
        flipped_axis: flipped.axis,
        flipped: flipped.value,
    };
    if (ratio - expected_ratio).abs() > 2.0 * settings.tol * expected_ratio {
        return Err(Error::ScalingMismatch { expected: expected_ratio * base.value, got: scaled.value });
    }
    if flipped.axis != base.axis.flipped() || (flipped.value - base.value).abs() > 2.0 * settings.tol * base.value {
        return Err(Error::ScalingMismatch { expected: base.value, got: flipped.value });
    }
    Ok(rec)
}
