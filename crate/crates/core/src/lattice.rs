//! Rational recognition, the rectangular period lattice and the invariants
//! of the normalized lattice `Z + tau Z`.

use num_integer::Integer;
use num_rational::Rational64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{Axis, PeriodValue};

/// Working precision of the Eisenstein series, in bits.
pub const PREC: u32 = 160;

/// Continued fraction convergents of `x / y` with denominator at most
/// `max_den`; the first within `tol` (relative to `x / y`) wins.
pub fn recognize_rational(x: f64, y: f64, max_den: i64, tol: f64) -> Option<Rational64> {
    if y == 0.0 || !x.is_finite() || !y.is_finite() {
        return None;
    }
    let r = x / y;
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut v = r;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let cand = h1 as f64 / k1 as f64;
        if (cand - r).abs() <= tol * r.abs().max(f64::MIN_POSITIVE) {
            return Some(Rational64::new(h1, k1));
        }
        let frac = v - a as f64;
        if frac == 0.0 {
            break;
        }
        v = 1.0 / frac;
    }
    None
}

/// The real number of which all inputs are integer multiples, given their
/// ratios to the first.
fn rational_gcd(first: f64, ratios: &[Rational64]) -> (f64, Vec<i64>) {
    let l = ratios.iter().fold(1i64, |l, r| l.lcm(r.denom()));
    let ints: Vec<i64> = ratios.iter().map(|r| r.numer() * (l / r.denom())).collect();
    let g = ints.iter().fold(0i64, |g, &n| g.gcd(&n));
    (first * g as f64 / l as f64, ints.iter().map(|n| n / g).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Multiplier {
    pub value: f64,
    pub axis: Axis,
    pub multiple: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodLattice {
    pub omega_re: f64,
    pub omega_im: f64,
    pub multipliers: Vec<Multiplier>,
}

/// Generators on each axis by the rational gcd of the magnitudes.
pub fn lattice_generators(periods: &[PeriodValue], max_den: i64, tol: f64) -> Result<PeriodLattice> {
    let mut omega = [0.0; 2];
    let mut multipliers = Vec::new();
    for (slot, axis) in [Axis::Real, Axis::Imaginary].into_iter().enumerate() {
        let vals: Vec<f64> = periods.iter().filter(|p| p.axis == axis).map(|p| p.value).collect();
        let Some(&first) = vals.first() else {
            return Err(Error::MissingAxis(axis));
        };
        let ratios = vals
            .iter()
            .map(|&v| recognize_rational(v, first, max_den, tol).ok_or(Error::NoRationalRatio { a: v, b: first }))
            .collect::<Result<Vec<_>>>()?;
        let (g, ints) = rational_gcd(first, &ratios);
        omega[slot] = g;
        multipliers.extend(vals.iter().zip(ints).map(|(&value, multiple)| Multiplier { value, axis, multiple }));
    }
    Ok(PeriodLattice { omega_re: omega[0], omega_im: omega[1], multipliers })
}

fn pi() -> Float {
    Float::with_val(PREC, Constant::Pi)
}

/// `(E4, E6)` at `tau = i t` by their q-series, `q = exp(-2 pi t)`.
pub fn eisenstein(tau_over_i: &Float) -> Result<(Float, Float)> {
    if *tau_over_i <= 0 {
        return Err(Error::NotUpperHalfPlane);
    }
    let q: Float = (Float::with_val(PREC, -2) * pi() * tau_over_i).exp();
    let eps = Float::with_val(PREC, 10).pow(-40);
    let mut e4 = Float::with_val(PREC, 0);
    let mut e6 = Float::with_val(PREC, 0);
    let mut qn = q.clone();
    let mut n: u64 = 1;
    loop {
        let (mut s3, mut s5) = (0u128, 0u128);
        for d in 1..=n {
            if n % d == 0 {
                let d = d as u128;
                s3 += d.pow(3);
                s5 += d.pow(5);
            }
        }
        e4 += Float::with_val(PREC, s3) * &qn;
        e6 += Float::with_val(PREC, s5) * &qn;
        // sigma_5(m) q^m <= m^6 q^m; stop once the whole tail is negligible
        let bound = Float::with_val(PREC, (n + 1) as f64).pow(6) * &qn * &q / (Float::with_val(PREC, 1) - &q).square();
        if bound < eps {
            break;
        }
        qn *= &q;
        n += 1;
    }
    Ok((1 + Float::with_val(PREC, 240) * e4, 1 - Float::with_val(PREC, 504) * e6))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipticInvariants {
    pub tau_over_i: Float,
    pub g2: Float,
    pub g3: Float,
    pub j: Float,
}

impl EllipticInvariants {
    pub fn to_f64(&self) -> [f64; 4] {
        [self.tau_over_i.to_f64(), self.g2.to_f64(), self.g3.to_f64(), self.j.to_f64()]
    }
}

/// `g2`, `g3`, `j` of `Z + tau Z`.
pub fn invariants_from_tau(tau_over_i: &Float) -> Result<EllipticInvariants> {
    let (e4, e6) = eisenstein(tau_over_i)?;
    let p = pi();
    let g2 = Float::with_val(PREC, 4) * p.clone().pow(4) / 3 * &e4;
    let g3 = Float::with_val(PREC, 8) * p.pow(6) / 27 * &e6;
    let e4c = e4.clone().pow(3);
    let den = Float::with_val(PREC, &e4c - e6.square());
    if den.is_zero() {
        return Err(Error::JPole);
    }
    let j = Float::with_val(PREC, 1728) * e4c / den;
    Ok(EllipticInvariants { tau_over_i: tau_over_i.clone(), g2, g3, j })
}

pub fn elliptic_invariants(lat: &PeriodLattice) -> Result<EllipticInvariants> {
    let t = Float::with_val(PREC, lat.omega_im) / Float::with_val(PREC, lat.omega_re);
    invariants_from_tau(&t)
}

/// `|a - b| <= 5 * 10^(floor(log10 |reference|) - digits)`: agreement to
/// `digits` significant figures of the reference.
pub fn agrees_to_digits(value: f64, reference: f64, digits: i32) -> bool {
    let scale = if reference == 0.0 { 0 } else { reference.abs().log10().floor() as i32 };
    (value - reference).abs() <= 5.0 * 10f64.powi(scale - digits)
}
