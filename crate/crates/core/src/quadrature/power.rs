//! Power substitution of a prism integral onto the unit cube.
//!
//! Each slab is mapped to `[0, 1]^3` by the nested map
//! `xi = X u1`, `eta = Y(xi) u2`, `zeta = Z(xi, eta) u3`. Ends of each
//! direction where a factor or the map degenerates get `u = s^k`, or
//! `s^k / (s^k + (1 - s)^k)` when both ends do. Inverse square roots are
//! then bounded for `k >= 2`. A tensor Gauss-Legendre rule of doubling order finishes it.

use num_traits::Zero;

use super::gauss::gauss_legendre;
use super::slab::Slab;
use super::tanh_sinh::{Estimate, Sum};
use super::{integrand, Prism};
use crate::error::{Error, Result};

const ORDERS: [usize; 5] = [8, 16, 32, 64, 128];
const GROWTH_LIMIT: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ends {
    None,
    Low,
    High,
    Both,
}

/// `(u, 1 - u, du/ds)` for `s`, given also `1 - s`.
fn warp(e: Ends, k: u32, s: f64, sc: f64) -> (f64, f64, f64) {
    let kf = k as f64;
    match e {
        Ends::None => (s, sc, 1.0),
        Ends::Low => {
            let u = s.powi(k as i32);
            (u, 1.0 - u, kf * s.powi(k as i32 - 1))
        }
        Ends::High => {
            let u = sc.powi(k as i32);
            (1.0 - u, u, kf * sc.powi(k as i32 - 1))
        }
        Ends::Both => {
            let (a, b) = (s.powi(k as i32), sc.powi(k as i32));
            let den = a + b;
            let du = kf * s.powi(k as i32 - 1) * sc.powi(k as i32 - 1) / (den * den);
            (a / den, b / den, du)
        }
    }
}

/// Which ends of each direction touch a zero of a factor or of `Y`, `Z`.
fn singular_ends(slab: &Slab) -> [Ends; 3] {
    let mut low = [false; 3];
    let mut high = [false; 3];
    for m in 0..8u8 {
        let e = [m & 1, (m >> 1) & 1, (m >> 2) & 1];
        let p = slab.corner(e);
        let y = &slab.exact_y[0] + &slab.exact_y[1] * &p[0];
        let z = &slab.exact_z[0] + &slab.exact_z[1] * &p[0] + &slab.exact_z[2] * &p[1];
        let bad = y.is_zero()
            || z.is_zero()
            || (0..slab.exact_factors.len()).any(|i| slab.exact_factor(i, &p).is_zero());
        if bad {
            for d in 0..3 {
                if e[d] == 0 {
                    low[d] = true;
                } else {
                    high[d] = true;
                }
            }
        }
    }
    std::array::from_fn(|d| match (low[d], high[d]) {
        (false, false) => Ends::None,
        (true, false) => Ends::Low,
        (false, true) => Ends::High,
        (true, true) => Ends::Both,
    })
}

struct Mapped<'a> {
    slab: &'a Slab,
    signs: &'a [i8],
    prefactor: f64,
    ends: [Ends; 3],
    k: u32,
}

impl Mapped<'_> {
    /// Transformed integrand at `s` (with complements).
    fn eval(&self, s: [(f64, f64); 3]) -> Result<f64> {
        let w: [(f64, f64, f64); 3] = std::array::from_fn(|d| warp(self.ends[d], self.k, s[d].0, s[d].1));
        let x = self.slab.width;
        let d1 = [x * w[0].0, x * w[0].1];
        let y = self.slab.y_at(&d1);
        let d2 = [y * w[1].0, y * w[1].1];
        let z = self.slab.z_at(&d1, &d2);
        let d3 = [z * w[2].0, z * w[2].1];
        let jac = x * y * z * w[0].2 * w[1].2 * w[2].2;
        if jac == 0.0 {
            return Ok(0.0);
        }
        Ok(integrand(self.slab, self.signs, self.prefactor, &[d1, d2, d3])?.map_or(0.0, |v| v * jac))
    }

    /// Largest ratio of the integrand at `10^-j` from a corner to its value
    /// at `10^-1`.
    fn growth(&self) -> Result<f64> {
        let mut worst: f64 = 1.0;
        for m in 0..8u8 {
            let at = |t: f64| -> [(f64, f64); 3] {
                std::array::from_fn(|d| if (m >> d) & 1 == 0 { (t, 1.0 - t) } else { (1.0 - t, t) })
            };
            let base = self.eval(at(0.1))?.abs();
            if base == 0.0 {
                continue;
            }
            for j in 2..=8 {
                let v = self.eval(at(10f64.powi(-j)))?.abs();
                worst = worst.max(v / base);
            }
        }
        Ok(worst)
    }

    fn tensor(&self, n: usize) -> Result<f64> {
        let g: Vec<(f64, f64, f64)> = gauss_legendre(n)
            .into_iter()
            .map(|(x, c, w)| (0.5 * (1.0 + x), 0.5 * c, 0.5 * w))
            .collect();
        let mut total = Sum::default();
        for a in &g {
            for b in &g {
                for c in &g {
                    let v = self.eval([(a.0, a.1), (b.0, b.1), (c.0, c.1)])?;
                    total.add(a.2 * b.2 * c.2 * v);
                }
            }
        }
        Ok(total.value())
    }
}

/// Integral of a prism with the power substitution of exponent `k`.
pub fn power_substitution(prism: &Prism, k: u32, tol: f64) -> Result<Estimate> {
    if k == 0 {
        return Err(Error::UnboundedIntegrand { k });
    }
    let signs: Vec<i8> = prism.factors.iter().map(|(_, s)| *s).collect();
    let slabs = prism.slabs()?;
    let maps: Vec<Mapped> = slabs
        .iter()
        .map(|slab| Mapped { slab, signs: &signs, prefactor: prism.prefactor, ends: singular_ends(slab), k })
        .collect();
    for m in &maps {
        if m.growth()? > GROWTH_LIMIT {
            return Err(Error::UnboundedIntegrand { k });
        }
    }
    let mut prev = f64::NAN;
    let mut evaluations = 0;
    for n in ORDERS {
        let mut s = Sum::default();
        for m in &maps {
            s.add(m.tensor(n)?);
        }
        evaluations += (n * n * n * maps.len()) as u64;
        let value = s.value();
        let err = (value - prev).abs();
        if err <= tol * value.abs() {
            return Ok(Estimate { value, abs_err: err, evaluations, converged: true });
        }
        prev = value;
    }
    Err(Error::ToleranceNotReached { estimate: prev, achieved: f64::NAN, evaluations })
}
