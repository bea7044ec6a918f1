//! Cylindrical pieces of a prism and cancellation-free evaluation of affine
//! functions on them.
//!
//! A slab is `x = x0 + xi`, `y = y_lo(x) + eta`, `z = z_lo(x, y) + zeta` with
//! `xi in [0, X]`, `eta in [0, Y(xi)]`, `zeta in [0, Z(xi, eta)]`. Each
//! variable can be measured from either end of its range, which gives eight
//! "anchors". Every affine function is stored exactly (then rounded once) in
//! all eight anchors; at a node the anchor with the smallest sum of absolute
//! terms is used, so functions vanishing on a face, edge or vertex of the
//! cell are evaluated to full relative precision right up to it.

use num_traits::Zero;

use crate::chamber::Line2;
use crate::error::{Error, Result};
use crate::exact::{q, to_f64, Q};

/// Affine function of `(d1, d2, d3)` as `[const, c1, c2, c3]`.
type Aff = [Q; 4];

/// Replace variable `v` (1-based) by `base - v'`, where `base` is affine in
/// the variables before `v`.
fn flip(f: &Aff, v: usize, base: &Aff) -> Aff {
    let c = f[v].clone();
    let mut out = f.clone();
    out[v] = -c.clone();
    for i in 0..v {
        out[i] += &c * &base[i];
    }
    out
}

#[derive(Clone, Debug)]
pub struct AnchoredAffine {
    /// Indexed by `e1 + 2 e2 + 4 e3`, `e = 1` meaning "from the far end".
    pub anchors: [[f64; 4]; 8],
}

impl AnchoredAffine {
    #[inline]
    fn eval_anchor(&self, a: usize, d: &[[f64; 2]; 3]) -> (f64, f64) {
        let c = &self.anchors[a];
        let t1 = c[1] * d[0][a & 1];
        let t2 = c[2] * d[1][(a >> 1) & 1];
        let t3 = c[3] * d[2][(a >> 2) & 1];
        let v = c[0] + t1 + t2 + t3;
        (v, c[0].abs() + t1.abs() + t2.abs() + t3.abs())
    }

    /// Value and rounding bound (sum of absolute terms).
    #[inline]
    pub fn eval(&self, d: &[[f64; 2]; 3]) -> (f64, f64) {
        let near = |p: &[f64; 2]| usize::from(p[1] < p[0]);
        let a = near(&d[0]) | near(&d[1]) << 1 | near(&d[2]) << 2;
        let (v, b) = self.eval_anchor(a, d);
        if b <= 8.0 * v.abs() {
            return (v, b);
        }
        (0..8).map(|a| self.eval_anchor(a, d)).min_by(|x, y| x.1.total_cmp(&y.1)).unwrap()
    }
}

#[derive(Clone, Debug)]
pub struct Slab {
    pub x0: Q,
    pub width: f64,
    /// `Y` from either end of `xi`: `[c0, c1]`.
    pub y_width: [[f64; 2]; 2],
    /// `Z` in the four `(xi, eta)` anchors: `[c0, c1, c2]`.
    pub z_width: [[f64; 3]; 4],
    pub factors: Vec<AnchoredAffine>,
    /// Exact data kept for corner tests.
    pub exact_width: Q,
    pub exact_y: Aff,
    pub exact_z: Aff,
    pub exact_factors: Vec<Aff>,
}

impl Slab {
    #[inline]
    pub fn y_at(&self, d1: &[f64; 2]) -> f64 {
        let a = usize::from(d1[1] < d1[0]);
        let c = &self.y_width[a];
        c[0] + c[1] * d1[a]
    }

    #[inline]
    pub fn z_at(&self, d1: &[f64; 2], d2: &[f64; 2]) -> f64 {
        let a1 = usize::from(d1[1] < d1[0]);
        let a2 = usize::from(d2[1] < d2[0]);
        let c = &self.z_width[a1 | a2 << 1];
        c[0] + c[1] * d1[a1] + c[2] * d2[a2]
    }

    /// Exact `(xi, eta, zeta)` of a corner of the parameter box given by the
    /// ends `e` (0 = near, 1 = far), with `xi`-end chosen first.
    pub fn corner(&self, e: [u8; 3]) -> [Q; 3] {
        let xi = if e[0] == 1 { self.exact_width.clone() } else { Q::zero() };
        let y = &self.exact_y[0] + &self.exact_y[1] * &xi;
        let eta = if e[1] == 1 { y } else { Q::zero() };
        let z = &self.exact_z[0] + &self.exact_z[1] * &xi + &self.exact_z[2] * &eta;
        let zeta = if e[2] == 1 { z } else { Q::zero() };
        [xi, eta, zeta]
    }

    pub fn exact_factor(&self, i: usize, p: &[Q; 3]) -> Q {
        let f = &self.exact_factors[i];
        &f[0] + &f[1] * &p[0] + &f[2] * &p[1] + &f[3] * &p[2]
    }
}

/// Lower and upper boundary lines of a convex polygon over `[xa, xb]`.
fn chains(poly: &[[Q; 2]], xa: &Q, xb: &Q) -> Option<(Line2, Line2)> {
    let mid = (xa + xb) / q(2);
    let n = poly.len();
    let mut spans: Vec<(Q, Line2)> = Vec::new();
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        if a[0] == b[0] {
            continue;
        }
        let (lo, hi) = if a[0] < b[0] { (a, b) } else { (b, a) };
        if lo[0] <= *xa && hi[0] >= *xb {
            // y = s x + c
            let s = (&hi[1] - &lo[1]) / (&hi[0] - &lo[0]);
            let c = &lo[1] - &s * &lo[0];
            let y_mid = &s * &mid + &c;
            spans.push((y_mid, Line2::new([s, Q::zero(), c])));
        }
    }
    if spans.len() != 2 {
        return None;
    }
    spans.sort_by(|a, b| a.0.cmp(&b.0));
    Some((spans[0].1.clone(), spans[1].1.clone()))
}

/// Cuts the prism `polygon x [lower, upper]` into x-slabs. `factors` are
/// `[a, b, c, d]` meaning `a x + b y + c z + d`.
pub fn slabs(polygon: &[[Q; 2]], lower: &Line2, upper: &Line2, factors: &[[Q; 4]]) -> Result<Vec<Slab>> {
    let mut xs: Vec<Q> = polygon.iter().map(|p| p[0].clone()).collect();
    xs.sort();
    xs.dedup();
    if xs.len() < 2 {
        return Err(Error::NotBoxReducible("degenerate polygon".into()));
    }
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (xa, xb) = (&w[0], &w[1]);
        let (ylo, yhi) = chains(polygon, xa, xb).ok_or_else(|| Error::NotBoxReducible("polygon is not convex".into()))?;
        let (sl, cl) = (&ylo.coeffs[0], &ylo.coeffs[2]);
        let (sh, ch) = (&yhi.coeffs[0], &yhi.coeffs[2]);
        let width = xb - xa;
        // y = y_lo(x0 + xi) + eta
        let y_const = sl * xa + cl;
        let exact_y: Aff = [sh * xa + ch - &y_const, sh - sl, Q::zero(), Q::zero()];
        // z_lo(x, y) = l0 x + l1 y + l2 in terms of xi, eta
        let in_slab = |f: &Line2| -> Aff {
            let [a, b, c] = &f.coeffs;
            [a * xa + b * &y_const + c, a + b * sl, b.clone(), Q::zero()]
        };
        let zl = in_slab(lower);
        let zu = in_slab(upper);
        let exact_z: Aff = std::array::from_fn(|i| &zu[i] - &zl[i]);
        let exact_factors: Vec<Aff> = factors
            .iter()
            .map(|f| {
                let [a, b, c, d] = f;
                // x = xa + xi, y = y_const + sl xi + eta, z = zl + zeta
                [
                    a * xa + b * &y_const + c * &zl[0] + d,
                    a + b * sl + c * &zl[1],
                    b + c * &zl[2],
                    c.clone(),
                ]
            })
            .collect();

        let x_base: Aff = [width.clone(), Q::zero(), Q::zero(), Q::zero()];
        let anchored = |f: &Aff| -> AnchoredAffine {
            let mut anchors = [[0.0; 4]; 8];
            for (a, slot) in anchors.iter_mut().enumerate() {
                let mut g = f.clone();
                if a & 4 != 0 {
                    g = flip(&g, 3, &exact_z);
                }
                if a & 2 != 0 {
                    g = flip(&g, 2, &exact_y);
                }
                if a & 1 != 0 {
                    g = flip(&g, 1, &x_base);
                }
                *slot = g.each_ref().map(to_f64);
            }
            AnchoredAffine { anchors }
        };
        let y_width = [0, 1].map(|a| {
            let g = if a == 1 { flip(&exact_y, 1, &x_base) } else { exact_y.clone() };
            [to_f64(&g[0]), to_f64(&g[1])]
        });
        let z_width = [0, 1, 2, 3].map(|a| {
            let mut g = exact_z.clone();
            if a & 2 != 0 {
                g = flip(&g, 2, &exact_y);
            }
            if a & 1 != 0 {
                g = flip(&g, 1, &x_base);
            }
            [to_f64(&g[0]), to_f64(&g[1]), to_f64(&g[2])]
        });
        out.push(Slab {
            x0: xa.clone(),
            width: to_f64(&width),
            y_width,
            z_width,
            factors: exact_factors.iter().map(anchored).collect(),
            exact_width: width,
            exact_y,
            exact_z,
            exact_factors,
        });
    }
    Ok(out)
}
