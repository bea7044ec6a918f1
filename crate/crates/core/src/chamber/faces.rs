//! Bounded faces of a planar line arrangement, in exact arithmetic.
//!
//! Every bounded face has a vertex of the arrangement on its boundary, so
//! the faces are found by sampling each angular sector around each vertex
//! close enough that no other line is crossed. Faces are identified by their
//! sign vectors; the polygon of a face is the set of arrangement vertices
//! satisfying its weak inequalities, in angular order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::Line2;
use crate::exact::{q, sign, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region2D {
    pub sign_vector: Vec<i8>,
    #[serde(serialize_with = "ser_pts")]
    pub vertices: Vec<[Q; 2]>,
    pub bounded: bool,
}

fn ser_pts<S: serde::Serializer>(v: &[[Q; 2]], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pts: Vec<[String; 2]> = v.iter().map(|p| [p[0].to_string(), p[1].to_string()]).collect();
    serde::Serialize::serialize(&pts, s)
}

impl Region2D {
    pub fn centroid(&self) -> [Q; 2] {
        let n = q(self.vertices.len() as i64);
        let (sx, sy) = self.vertices.iter().fold((Q::zero(), Q::zero()), |(x, y), v| (x + &v[0], y + &v[1]));
        [sx / &n, sy / n]
    }

    pub fn area(&self) -> Q {
        let n = self.vertices.len();
        let twice = (0..n).fold(Q::zero(), |s, i| {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
            s + &a[0] * &b[1] - &b[0] * &a[1]
        });
        twice.abs() / q(2)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&[Q; 2], &[Q; 2])> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// A point strictly inside: convex combination with the given positive
    /// weights (one per vertex).
    pub fn interior_point(&self, weights: &[Q]) -> [Q; 2] {
        let total = weights.iter().fold(Q::zero(), |s, w| s + w);
        let mut p = [Q::zero(), Q::zero()];
        for (v, w) in self.vertices.iter().zip(weights) {
            p[0] += &v[0] * w;
            p[1] += &v[1] * w;
        }
        [&p[0] / &total, &p[1] / &total]
    }
}

/// Half-plane then cross-product order of directions by angle.
fn angle_cmp(a: &[Q; 2], b: &[Q; 2]) -> Ordering {
    let upper = |d: &[Q; 2]| d[1].is_positive() || (d[1].is_zero() && d[0].is_positive());
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let cross = &a[0] * &b[1] - &a[1] * &b[0];
            q(0).cmp(&cross)
        }
    }
}

fn signs_at(lines: &[Line2], p: &[Q; 2]) -> Vec<i8> {
    lines.iter().map(|l| sign(&l.eval(p))).collect()
}

fn is_bounded(lines: &[Line2], sv: &[i8]) -> bool {
    // An unbounded face has a recession ray, and some extreme ray of the
    // recession cone runs along one of the lines.
    for l in lines {
        let d = [-l.coeffs[1].clone(), l.coeffs[0].clone()];
        for dir in [d.clone(), [-d[0].clone(), -d[1].clone()]] {
            if lines.iter().zip(sv).all(|(m, &s)| s as i32 * sign(&m.slope(&dir)) as i32 >= 0) {
                return false;
            }
        }
    }
    true
}

/// All bounded open faces, ordered by sign vector.
pub fn bounded_faces(lines: &[Line2]) -> Vec<Region2D> {
    let mut vertices: BTreeSet<[Q; 2]> = BTreeSet::new();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if let Some(p) = a.intersect(b) {
                vertices.insert(p);
            }
        }
    }

    let mut faces: BTreeMap<Vec<i8>, ()> = BTreeMap::new();
    for v in &vertices {
        let through: Vec<&Line2> = lines.iter().filter(|l| l.eval(v).is_zero()).collect();
        let mut dirs: Vec<[Q; 2]> = Vec::new();
        for l in &through {
            let d = [-l.coeffs[1].clone(), l.coeffs[0].clone()];
            dirs.push([-d[0].clone(), -d[1].clone()]);
            dirs.push(d);
        }
        dirs.sort_by(angle_cmp);
        dirs.dedup_by(|a, b| angle_cmp(a, b) == Ordering::Equal);
        for k in 0..dirs.len() {
            let (d0, d1) = (&dirs[k], &dirs[(k + 1) % dirs.len()]);
            let w = [&d0[0] + &d1[0], &d0[1] + &d1[1]];
            let mut eps = q(1);
            for l in lines {
                let val = l.eval(v);
                let slope = l.slope(&w);
                if !val.is_zero() && !slope.is_zero() {
                    let bound = val.abs() / slope.abs() / q(2);
                    if bound < eps {
                        eps = bound;
                    }
                }
            }
            let p = [&v[0] + &eps * &w[0], &v[1] + &eps * &w[1]];
            let sv = signs_at(lines, &p);
            debug_assert!(sv.iter().all(|&s| s != 0));
            faces.insert(sv, ());
        }
    }

    let mut out = Vec::new();
    for sv in faces.into_keys() {
        if !is_bounded(lines, &sv) {
            continue;
        }
        let mut poly: Vec<[Q; 2]> = vertices
            .iter()
            .filter(|v| lines.iter().zip(&sv).all(|(l, &s)| s as i32 * sign(&l.eval(v)) as i32 >= 0))
            .cloned()
            .collect();
        let n = q(poly.len() as i64);
        let c = poly.iter().fold([Q::zero(), Q::zero()], |acc, p| [&acc[0] + &p[0], &acc[1] + &p[1]]);
        let c = [&c[0] / &n, &c[1] / &n];
        poly.sort_by(|a, b| angle_cmp(&[&a[0] - &c[0], &a[1] - &c[1]], &[&b[0] - &c[0], &b[1] - &c[1]]));
        out.push(Region2D { sign_vector: sv, vertices: poly, bounded: true });
    }
    out
}
