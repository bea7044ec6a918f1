//! Small exact linear algebra over the rationals.
//!
//! Everything here works on fixed-size arrays of [`Q`]; the matrices that
//! occur (4x4 charts, at most 8 rows of forms) are tiny, so plain Gaussian
//! elimination is all that is needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type Vec4 = [Q; 4];
pub type Mat4 = [[Q; 4]; 4];

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn vec4(v: [i64; 4]) -> Vec4 {
    v.map(q)
}

pub fn dot<const N: usize>(a: &[Q; N], b: &[Q; N]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Clears denominators, divides by the content and makes the first nonzero
/// entry positive. Returns the primitive integer vector together with the
/// factor `c` such that `v = c * primitive`.
pub fn primitive<const N: usize>(v: &[Q; N]) -> Result<([i64; N], Q)> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return Err(Error::ZeroForm);
    }
    let lead = ints.iter().find(|x| !x.is_zero()).expect("nonzero vector");
    if lead.is_negative() {
        g = -g;
    }
    let mut out = [0i64; N];
    for (o, x) in out.iter_mut().zip(&ints) {
        *o = (x / &g).to_i64().ok_or(Error::Overflow)?;
    }
    Ok((out, Q::new(g, lcm)))
}

/// Row echelon form in place; returns the pivot columns.
fn echelon<const N: usize>(rows: &mut [[Q; N]]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..N {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..N {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<const N: usize>(rows: &[[Q; N]]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).len()
}

/// Basis of `{v : rows . v = 0}`.
pub fn null_space<const N: usize>(rows: &[[Q; N]]) -> Vec<[Q; N]> {
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m);
    let free: Vec<usize> = (0..N).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v: [Q; N] = std::array::from_fn(|_| Q::zero());
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).fold(Q::zero(), |s, k| s + &a[i][k] * &b[k][j])))
}

pub fn mat_vec(a: &Mat4, v: &Vec4) -> Vec4 {
    std::array::from_fn(|i| dot(&a[i], v))
}

/// Row vector times matrix.
pub fn vec_mat(v: &Vec4, a: &Mat4) -> Vec4 {
    std::array::from_fn(|j| (0..4).fold(Q::zero(), |s, k| s + &v[k] * &a[k][j]))
}

pub fn identity() -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Q::one() } else { Q::zero() }))
}

pub fn det(a: &Mat4) -> Q {
    let mut m = a.to_vec();
    let mut d = Q::one();
    for c in 0..4 {
        let Some(p) = (c..4).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..4 {
            let f = &m[i][c] / &m[c][c];
            for k in c..4 {
                let t = &f * &m[c][k];
                m[i][k] -= t;
            }
        }
    }
    d
}

pub fn inverse(a: &Mat4) -> Option<Mat4> {
    let mut aug: Vec<[Q; 8]> = (0..4)
        .map(|i| std::array::from_fn(|j| if j < 4 { a[i][j].clone() } else if j - 4 == i { Q::one() } else { Q::zero() }))
        .collect();
    let piv = echelon(&mut aug);
    if piv != [0, 1, 2, 3] {
        return None;
    }
    Some(std::array::from_fn(|i| std::array::from_fn(|j| aug[i][j + 4].clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_normalises_sign_and_content() {
        let (v, c) = primitive(&[q(0), q(-4), q_frac(2, 3), q(0)]).unwrap();
        assert_eq!(v, [0, 6, -1, 0]);
        assert_eq!(c, q_frac(-2, 3));
        assert!(primitive(&[q(0), q(0)]).is_err());
    }

    #[test]
    fn null_space_of_two_planes_is_a_line() {
        let ns = null_space(&[vec4([1, 0, 0, 0]), vec4([0, 1, 1, 0])]);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(v[0].is_zero());
            assert_eq!(&v[1] + &v[2], q(0));
        }
    }

    #[test]
    fn inverse_round_trips() {
        let m: Mat4 = [vec4([1, 0, 0, 0]), vec4([0, 1, 0, 0]), vec4([0, 0, 1, 0]), vec4([-1, 0, 0, 1])];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity());
        assert_eq!(det(&m), q(1));
        let singular: Mat4 = [vec4([1, 1, 0, 0]), vec4([2, 2, 0, 0]), vec4([0, 0, 1, 0]), vec4([0, 0, 0, 1])];
        assert!(inverse(&singular).is_none());
        assert_eq!(det(&singular), q(0));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("-2"), Some(q(-2)));
        assert_eq!(parse_rational(" 3/6 "), Some(q_frac(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
