//! Cells between consecutive sheets over a bounded face.

use serde::Serialize;

use super::{AffineArrangement, Region2D};
use crate::exact::{q, sign, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell3D {
    /// Index of the face in the decomposition it came from.
    pub face: usize,
    pub region: Region2D,
    /// Arrangement indices of the planes bounding the cell below and above.
    pub lower_sheet: usize,
    pub upper_sheet: usize,
    /// Signs of all eight forms on the interior.
    pub sign_vector: Vec<i8>,
    pub f_sign: i8,
    pub closed: bool,
}

impl Cell3D {
    /// Interior point over `p` in the region, halfway between the sheets.
    pub fn lift(&self, aff: &AffineArrangement, p: &[Q; 2]) -> [Q; 3] {
        let lo = aff.forms[self.lower_sheet].graph().expect("graph").eval(p);
        let hi = aff.forms[self.upper_sheet].graph().expect("graph").eval(p);
        [p[0].clone(), p[1].clone(), (lo + hi) / q(2)]
    }

    pub fn volume(&self, aff: &AffineArrangement) -> Q {
        let c = self.region.centroid();
        let lo = aff.forms[self.lower_sheet].graph().expect("graph").eval(&c);
        let hi = aff.forms[self.upper_sheet].graph().expect("graph").eval(&c);
        self.region.area() * (hi - lo)
    }

    /// Whether `p` lies in the closed cell.
    pub fn contains_closed(&self, aff: &AffineArrangement, p: &[Q; 3]) -> bool {
        let xy = [p[0].clone(), p[1].clone()];
        let lo = aff.forms[self.lower_sheet].graph().expect("graph").eval(&xy);
        let hi = aff.forms[self.upper_sheet].graph().expect("graph").eval(&xy);
        if p[2] < lo || p[2] > hi {
            return false;
        }
        // weak inequalities of the polygon, by its edges
        let n = self.region.vertices.len();
        let c = self.region.centroid();
        (0..n).all(|i| {
            let (a, b) = (&self.region.vertices[i], &self.region.vertices[(i + 1) % n]);
            let side = |r: &[Q; 2]| (&b[0] - &a[0]) * (&r[1] - &a[1]) - (&b[1] - &a[1]) * (&r[0] - &a[0]);
            sign(&side(&xy)) as i32 * sign(&side(&c)) as i32 >= 0
        })
    }
}

pub fn stack_cells(aff: &AffineArrangement, region: &Region2D) -> Vec<Cell3D> {
    let c = region.centroid();
    let mut sheets: Vec<(Q, usize)> = aff
        .graph
        .iter()
        .map(|&i| (aff.forms[i].graph().expect("graph").eval(&c), i))
        .collect();
    sheets.sort();

    let mut out = Vec::new();
    for w in sheets.windows(2) {
        let (lo, hi) = (w[0].1, w[1].1);
        let f_lo = aff.forms[lo].graph().expect("graph");
        let f_hi = aff.forms[hi].graph().expect("graph");
        let mid = [c[0].clone(), c[1].clone(), (&w[0].0 + &w[1].0) / q(2)];
        let sign_vector: Vec<i8> = aff.forms.iter().map(|f| sign(&f.eval(&mid))).collect();
        let f_sign = sign_vector.iter().fold(sign(&aff.lambda), |s, &x| s * x);
        let closed = region.edges().all(|(a, b)| {
            let on_wall = aff.vertical.iter().any(|&i| {
                let t = aff.forms[i].trace().expect("vertical");
                t.eval(a) == q(0) && t.eval(b) == q(0)
            });
            on_wall || (f_lo.eval(a) == f_hi.eval(a) && f_lo.eval(b) == f_hi.eval(b))
        });
        out.push(Cell3D {
            face: 0,
            region: region.clone(),
            lower_sheet: lo,
            upper_sheet: hi,
            sign_vector,
            f_sign,
            closed,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::tests::shear_chart;
    use super::super::{apply_chart, bounded_faces, project_lines};
    use super::*;
    use crate::arrangement::parse_arrangement;

    #[test]
    fn arrangement_one_cells() {
        let arr = parse_arrangement("1", "xyzt(x+y)(y+z)(z+t)(t+x)", q(-1)).unwrap();
        let aff = apply_chart(&arr, &shear_chart()).unwrap();
        let lines: Vec<_> = project_lines(&aff).into_iter().map(|l| l.line).collect();
        let faces = bounded_faces(&lines);
        assert_eq!(faces.len(), 2);
        let tri1 = faces.iter().find(|f| f.centroid()[1] > q(0)).unwrap();
        let tri2 = faces.iter().find(|f| f.centroid()[1] < q(0)).unwrap();
        // z = x - 1 is form 6, z = -y is form 5, z = 0 is form 2
        let c1 = stack_cells(&aff, tri1);
        let pairs: Vec<_> = c1.iter().map(|c| (c.lower_sheet, c.upper_sheet, c.closed)).collect();
        // the side over x + y = 1 is not an arrangement plane
        assert_eq!(pairs, [(6, 5, true), (5, 2, false)]);
        let c2 = stack_cells(&aff, tri2);
        let pairs: Vec<_> = c2.iter().map(|c| (c.lower_sheet, c.upper_sheet, c.closed)).collect();
        // every edge of this triangle lies on a wall, so both cells are closed
        assert_eq!(pairs, [(6, 2, true), (2, 5, true)]);
        for c in c1.iter().chain(&c2) {
            assert_eq!(c.sign_vector.iter().fold(-1, |s, &x| s * x), c.f_sign);
        }
    }
}
