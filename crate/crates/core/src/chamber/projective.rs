//! Chambers of the real projective arrangement, and cycles made of chambers
//! that are opposite at generic fourfold points.
//!
//! A chamber is a sign vector of the eight forms up to a global sign. Every
//! chamber has a vertex among the census points, so the chambers are found
//! from the local cones at each point. Two chambers are opposite at a
//! fourfold point `p` when their signs differ exactly on the four planes
//! through `p`. With all chambers oriented by one affine chart and the
//! principal branch of the square root, the boundaries of a chamber and its
//! opposite on the exceptional divisor over `p` cancel when both carry the
//! same coefficient, so the connected classes of this relation are cycles
//! whose periods are sums of chamber periods on one axis.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{decompose, Chart, Decomposition};
use crate::arrangement::{Arrangement, Census, LinearForm};
use crate::error::Result;
use crate::exact::{dot, null_space, q, sign, Vec4};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chamber {
    /// Signs of the eight forms, first entry `+1`.
    pub sign_vector: Vec<i8>,
    /// Indices into `Census::points` of the vertices of the closure.
    pub vertices: Vec<usize>,
    /// The vertices that are generic fourfold points.
    pub p4: Vec<usize>,
    /// `+1` where `lambda F > 0`.
    pub f_sign: i8,
}

impl Chamber {
    /// `sum s_i L_i`, positive on the closed chamber minus the origin; the
    /// chart sending it to infinity makes the chamber bounded.
    pub fn positive_form(&self, arr: &Arrangement) -> Vec4 {
        let mut h: Vec4 = std::array::from_fn(|_| q(0));
        for (f, &s) in arr.forms().iter().zip(&self.sign_vector) {
            for (hk, &c) in h.iter_mut().zip(f.coeffs()) {
                *hk += q(c * s as i64);
            }
        }
        h
    }

    pub fn bounding_chart(&self, arr: &Arrangement) -> Result<Chart> {
        let (form, _) = LinearForm::from_rational(&self.positive_form(arr))?;
        Chart::sending_to_infinity(&form)
    }

    /// Cells of `d` making up this chamber; `d` must be in a chart where the
    /// chamber is bounded.
    pub fn cells<'a>(&self, d: &'a Decomposition) -> Vec<&'a super::Cell3D> {
        d.cells.iter().filter(|c| normalized(c.sign_vector.clone()) == self.sign_vector).collect()
    }
}

fn normalized(mut s: Vec<i8>) -> Vec<i8> {
    if s[0] < 0 {
        s.iter_mut().for_each(|x| *x = -*x);
    }
    s
}

/// A form vanishing at no census point.
fn transversal(points: &[Vec4]) -> Vec4 {
    (1i64..)
        .map(|k| [q(1), q(k + 1), q(k * k + 3), q(k * k * k + 7)])
        .find(|h| points.iter().all(|p| dot(h, p) != q(0)))
        .expect("finitely many points")
}

pub fn chambers(arr: &Arrangement, census: &Census) -> Vec<Chamber> {
    let forms: Vec<Vec4> = arr.forms().iter().map(|f| f.to_rational()).collect();
    let pts: Vec<Vec4> = census.points.iter().map(|p| p.to_rational()).collect();
    let h = transversal(&pts);
    let eval = |f: &Vec4, p: &Vec4| dot(f, p);

    let mut found: BTreeMap<Vec<i8>, ()> = BTreeMap::new();
    for (pi, p) in census.points.iter().enumerate() {
        let through = &p.planes;
        // rays of the local arrangement in the slice h = 0
        let mut rays: Vec<Vec4> = Vec::new();
        for a in 0..through.len() {
            for b in a + 1..through.len() {
                let ns = null_space(&[forms[through[a]].clone(), forms[through[b]].clone(), h.clone()]);
                if ns.len() == 1 {
                    let r = ns[0].clone();
                    rays.push(r.clone());
                    rays.push(r.map(|x| -x));
                }
            }
        }
        for mask in 0u32..1 << through.len() {
            let sigma: Vec<i8> = (0..through.len()).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            let ok = |r: &Vec4, strict: bool| {
                through.iter().zip(&sigma).all(|(&m, &s)| {
                    let v = sign(&eval(&forms[m], r)) * s;
                    if strict {
                        v > 0
                    } else {
                        v >= 0
                    }
                })
            };
            let mut d: Vec4 = std::array::from_fn(|_| q(0));
            for r in rays.iter().filter(|r| ok(r, false)) {
                for k in 0..4 {
                    d[k] += &r[k];
                }
            }
            if !ok(&d, true) {
                continue;
            }
            let s: Vec<i8> = (0..forms.len())
                .map(|m| match through.iter().position(|&t| t == m) {
                    Some(k) => sigma[k],
                    None => sign(&eval(&forms[m], &pts[pi])),
                })
                .collect();
            found.insert(normalized(s), ());
        }
    }

    let lambda_sign = sign(&arr.octic_scale());
    found
        .into_keys()
        .map(|s| {
            let vertices: Vec<usize> = (0..pts.len())
                .filter(|&i| {
                    let signs: Vec<i8> = forms.iter().zip(&s).map(|(f, &si)| sign(&eval(f, &pts[i])) * si).collect();
                    signs.iter().all(|&x| x >= 0) || signs.iter().all(|&x| x <= 0)
                })
                .collect();
            let p4 = vertices.iter().copied().filter(|&i| census.points[i].is_generic_fourfold()).collect();
            let f_sign = s.iter().fold(lambda_sign, |a, &b| a * b);
            Chamber { sign_vector: s, vertices, p4, f_sign }
        })
        .collect()
}

/// The chamber with the signs on the planes through `p` reversed.
pub fn opposite(chamber: &Chamber, census: &Census, p: usize) -> Vec<i8> {
    let mut s = chamber.sign_vector.clone();
    for &m in &census.points[p].planes {
        s[m] = -s[m];
    }
    normalized(s)
}

/// Classes of chambers under "opposite at a generic fourfold point", each
/// as a sorted list of chamber indices. Chambers touching no such point are
/// classes of their own.
pub fn opposite_classes(chambers: &[Chamber], census: &Census) -> Vec<Vec<usize>> {
    let index: BTreeMap<&[i8], usize> = chambers.iter().enumerate().map(|(i, c)| (c.sign_vector.as_slice(), i)).collect();
    let mut parent: Vec<usize> = (0..chambers.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, c) in chambers.iter().enumerate() {
        for &p in &c.p4 {
            let o = opposite(c, census, p);
            let j = *index.get(o.as_slice()).expect("opposite chamber exists");
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..chambers.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    classes.into_values().collect()
}

/// Decomposition in the chart bounding `chamber`.
pub fn chamber_decomposition(arr: &Arrangement, census: &Census, chamber: &Chamber) -> Result<Decomposition> {
    decompose(arr, census, &chamber.bounding_chart(arr)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{incidence_census, parse_arrangement};

    #[test]
    fn general_position_count() {
        // eight planes in general position cut P^3 into
        // C(7,0) + C(7,1) + C(7,2) + C(7,3) = 64 chambers
        let arr = parse_arrangement(
            "g",
            "xyzt(x+y+z+t)(x+2y+3z+5t)(x-3y+4z-t)(2x+y-z+7t)",
            q(1),
        )
        .unwrap();
        let c = incidence_census(&arr);
        assert_eq!(chambers(&arr, &c).len(), 64);
    }

    #[test]
    fn arrangement_one_pairs() {
        let arr = parse_arrangement("1", "xyzt(x+y)(y+z)(z+t)(t+x)", q(-1)).unwrap();
        let census = incidence_census(&arr);
        let ch = chambers(&arr, &census);
        let touching = ch.iter().filter(|c| !c.p4.is_empty()).count();
        // four planes in general position through a point: 14 local cones
        assert_eq!(touching, 14);
        let classes = opposite_classes(&ch, &census);
        assert_eq!(classes.len(), ch.len() - 7);
        for cl in &classes {
            let axis: Vec<i8> = cl.iter().map(|&i| ch[i].f_sign).collect();
            assert!(axis.iter().all(|&a| a == axis[0]));
        }
    }
}
