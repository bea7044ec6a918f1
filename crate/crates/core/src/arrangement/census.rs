//! Lines and points where several planes of an arrangement meet.

use std::collections::BTreeMap;

use serde::Serialize;

use super::Arrangement;
use crate::exact::{null_space, primitive, q, rank, Vec4};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidencePoint {
    pub coords: [i64; 4],
    /// Indices of the forms vanishing at the point.
    pub planes: Vec<usize>,
    pub multiplicity: usize,
    pub on_triple_line: bool,
}

impl IncidencePoint {
    pub fn is_generic_fourfold(&self) -> bool {
        self.multiplicity == 4 && !self.on_triple_line
    }

    pub fn to_rational(&self) -> Vec4 {
        self.coords.map(q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceLine {
    pub span: [[i64; 4]; 2],
    /// Indices of the forms containing the line.
    pub planes: Vec<usize>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub lines: Vec<IncidenceLine>,
    pub points: Vec<IncidencePoint>,
    pub double_lines: usize,
    pub triple_lines: usize,
    pub points_mult3: usize,
    pub points_mult4: usize,
    pub points_mult5: usize,
    pub p4_generic: usize,
    pub max_point_multiplicity: usize,
    pub max_line_multiplicity: usize,
    pub admissible: bool,
}

impl Census {
    pub fn generic_fourfold_points(&self) -> impl Iterator<Item = &IncidencePoint> {
        self.points.iter().filter(|p| p.is_generic_fourfold())
    }
}

pub fn incidence_census(arr: &Arrangement) -> Census {
    let forms: Vec<Vec4> = arr.forms().iter().map(|f| f.to_rational()).collect();
    let n = forms.len();

    let mut lines: BTreeMap<Vec<usize>, IncidenceLine> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let pair = [forms[i].clone(), forms[j].clone()];
            let planes: Vec<usize> = (0..n)
                .filter(|&k| k == i || k == j || rank(&[forms[i].clone(), forms[j].clone(), forms[k].clone()]) == 2)
                .collect();
            lines.entry(planes.clone()).or_insert_with(|| {
                let basis = null_space(&pair);
                let span = [primitive(&basis[0]).unwrap().0, primitive(&basis[1]).unwrap().0];
                IncidenceLine { span, multiplicity: planes.len(), planes }
            });
        }
    }

    let mut points: BTreeMap<Vec<usize>, IncidencePoint> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let triple = [forms[i].clone(), forms[j].clone(), forms[k].clone()];
                if rank(&triple) != 3 {
                    continue;
                }
                let p = null_space(&triple).remove(0);
                let coords = primitive(&p).expect("null vector is nonzero").0;
                let pr = coords.map(q);
                let planes: Vec<usize> = (0..n).filter(|&m| arr.forms()[m].eval(&pr) == q(0)).collect();
                points.entry(planes.clone()).or_insert_with(|| IncidencePoint {
                    coords,
                    multiplicity: planes.len(),
                    on_triple_line: false,
                    planes,
                });
            }
        }
    }

    let lines: Vec<IncidenceLine> = lines.into_values().collect();
    let mut points: Vec<IncidencePoint> = points.into_values().collect();
    for p in &mut points {
        p.on_triple_line = lines
            .iter()
            .any(|l| l.multiplicity >= 3 && l.planes.iter().all(|k| p.planes.contains(k)));
    }
    points.sort_by(|a, b| a.planes.cmp(&b.planes));

    let count_lines = |m: usize| lines.iter().filter(|l| l.multiplicity == m).count();
    let count_points = |m: usize| points.iter().filter(|p| p.multiplicity == m).count();
    let max_point_multiplicity = points.iter().map(|p| p.multiplicity).max().unwrap_or(0);
    let max_line_multiplicity = lines.iter().map(|l| l.multiplicity).max().unwrap_or(0);
    Census {
        double_lines: count_lines(2),
        triple_lines: count_lines(3),
        points_mult3: count_points(3),
        points_mult4: count_points(4),
        points_mult5: count_points(5),
        p4_generic: points.iter().filter(|p| p.is_generic_fourfold()).count(),
        max_point_multiplicity,
        max_line_multiplicity,
        admissible: max_point_multiplicity <= 5 && max_line_multiplicity <= 3,
        lines,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::parse_arrangement;

    #[test]
    fn arrangement_one() {
        let arr = parse_arrangement("1", "xyzt(x+y)(y+z)(z+t)(t+x)", q(-1)).unwrap();
        let c = incidence_census(&arr);
        assert!(c.admissible);
        assert_eq!(c.p4_generic, 1);
        let p: Vec<_> = c.generic_fourfold_points().collect();
        assert_eq!(p[0].coords, [1, -1, 1, -1]);
        for p in &c.points {
            let zeros = arr.forms().iter().filter(|f| f.eval(&p.to_rational()) == q(0)).count();
            assert_eq!(zeros, p.multiplicity);
        }
    }

    #[test]
    fn general_position() {
        let raw = [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [1, 1, 1, 1],
            [1, 2, 3, 5],
            [1, 3, 7, 11],
            [2, 9, 1, 17],
        ]
        .map(crate::exact::vec4);
        let arr = Arrangement::new("g", &raw, q(1)).unwrap();
        let c = incidence_census(&arr);
        assert_eq!(c.double_lines, 28);
        assert_eq!(c.triple_lines, 0);
        assert_eq!(c.points_mult4, 0);
        assert_eq!(c.points_mult3, 56);
        assert!(c.admissible);
    }

    #[test]
    fn six_planes_through_a_point_is_not_admissible() {
        let arr = parse_arrangement("bad", "xyz(x+y)(x+z)(y+z)(x+y+z)t", q(1)).unwrap();
        let c = incidence_census(&arr);
        assert_eq!(c.max_point_multiplicity, 7);
        assert!(!c.admissible);
    }
}
