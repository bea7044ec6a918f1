//! Integer combinations of cells with vanishing incidence at the generic
//! fourfold points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{AffineArrangement, Cell3D};
use crate::exact::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyhedralCycle {
    /// Cell index to coefficient.
    pub terms: BTreeMap<usize, i64>,
    pub incidence_ok: bool,
}

impl PolyhedralCycle {
    pub fn singleton(&self) -> Option<usize> {
        match self.terms.iter().collect::<Vec<_>>()[..] {
            [(&c, &n)] if n.abs() == 1 => Some(c),
            _ => None,
        }
    }
}

/// `M[p][C] = 1` iff point `p` lies in the closure of cell `C`.
pub fn incidence_matrix(cells: &[Cell3D], aff: &AffineArrangement, points: &[[Q; 3]]) -> Vec<Vec<i64>> {
    points
        .iter()
        .map(|p| cells.iter().map(|c| i64::from(c.contains_closed(aff, p))).collect())
        .collect()
}

/// Basis of `{n in Z^cols : M n = 0}` by unimodular column reduction.
pub fn integer_kernel(m: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    // u tracks the column operations: a_original * u = a
    let mut u: Vec<Vec<BigInt>> =
        (0..cols).map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let col_op = |mat: &mut Vec<Vec<BigInt>>, i: usize, j: usize, coef: [&BigInt; 4]| {
        // (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for row in mat.iter_mut() {
            let (x, y) = (row[i].clone(), row[j].clone());
            row[i] = coef[0] * &x + coef[1] * &y;
            row[j] = coef[2] * &x + coef[3] * &y;
        }
    };
    let mut pivot = 0;
    for r in 0..a.len() {
        if pivot == cols {
            break;
        }
        for j in pivot + 1..cols {
            if a[r][j].is_zero() {
                continue;
            }
            if a[r][pivot].is_zero() {
                col_op(&mut a, pivot, j, [&BigInt::zero(), &BigInt::one(), &BigInt::one(), &BigInt::zero()]);
                col_op(&mut u, pivot, j, [&BigInt::zero(), &BigInt::one(), &BigInt::one(), &BigInt::zero()]);
                continue;
            }
            let (x, y) = (a[r][pivot].clone(), a[r][j].clone());
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            // [s t; -y/g x/g] has determinant 1
            let (yg, xg) = (-(&y / &g), &x / &g);
            col_op(&mut a, pivot, j, [&s, &t, &yg, &xg]);
            col_op(&mut u, pivot, j, [&s, &t, &yg, &xg]);
        }
        if !a[r][pivot].is_zero() {
            pivot += 1;
        }
    }
    (pivot..cols)
        .map(|j| {
            let v: Vec<BigInt> = (0..cols).map(|i| u[i][j].clone()).collect();
            let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let lead_neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
            v.iter()
                .map(|x| {
                    let x = x / &g;
                    (if lead_neg { -x } else { x }).to_i64().expect("small kernel entry")
                })
                .collect()
        })
        .collect()
}

/// Cycles from closed cells. Cells touching no affine generic fourfold point
/// are singletons; the rest come from the integer kernel of the incidence
/// matrix restricted to them.
pub fn polyhedral_cycles(cells: &[Cell3D], aff: &AffineArrangement, points: &[[Q; 3]]) -> Vec<PolyhedralCycle> {
    let m = incidence_matrix(cells, aff, points);
    let touched: Vec<usize> = (0..cells.len()).filter(|&c| m.iter().any(|r| r[c] != 0)).collect();
    let mut out: Vec<PolyhedralCycle> = (0..cells.len())
        .filter(|c| !touched.contains(c))
        .map(|c| PolyhedralCycle { terms: BTreeMap::from([(c, 1)]), incidence_ok: true })
        .collect();
    let sub: Vec<Vec<i64>> = m.iter().map(|r| touched.iter().map(|&c| r[c]).collect()).collect();
    for v in integer_kernel(&sub, touched.len()) {
        let terms: BTreeMap<usize, i64> = touched.iter().zip(&v).filter(|(_, &n)| n != 0).map(|(&c, &n)| (c, n)).collect();
        let incidence_ok = m.iter().all(|r| terms.iter().map(|(&c, &n)| r[c] * n).sum::<i64>() == 0);
        out.push(PolyhedralCycle { terms, incidence_ok });
    }
    out
}
