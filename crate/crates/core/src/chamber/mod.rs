//! Bounded chambers of a real arrangement in an affine chart.
//!
//! After a chart change every plane is either a vertical wall `a x + b y + d = 0`,
//! the graph of `z = f_i(x, y)`, or a nonzero constant (the plane at
//! infinity). Projecting walls and pairwise sheet crossings to the (x, y)
//! plane gives a line arrangement whose bounded faces carry stacks of cells
//! between consecutive sheets.

mod cells;
mod chart;
mod cycles;
mod faces;
mod projective;

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arrangement::{write_linear, Arrangement, Census};
use crate::error::Result;
use crate::exact::{primitive, q, sign, to_f64, Vec4, Q};

pub use cells::{stack_cells, Cell3D};
pub use chart::Chart;
pub use cycles::{incidence_matrix, integer_kernel, polyhedral_cycles, PolyhedralCycle};
pub use faces::{bounded_faces, Region2D};
pub use projective::{chamber_decomposition, chambers, opposite, opposite_classes, Chamber};

/// `a x + b y + c z + d` in the coordinates of a chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineForm {
    #[serde(serialize_with = "ser_q4")]
    pub coeffs: [Q; 4],
}

fn ser_q4<S: serde::Serializer>(v: &[Q; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>(), s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FormKind {
    Vertical,
    Graph,
    Excluded,
}

impl AffineForm {
    pub fn new(coeffs: [Q; 4]) -> Self {
        Self { coeffs }
    }

    pub fn kind(&self) -> FormKind {
        let [a, b, c, _] = &self.coeffs;
        if !c.is_zero() {
            FormKind::Graph
        } else if a.is_zero() && b.is_zero() {
            FormKind::Excluded
        } else {
            FormKind::Vertical
        }
    }

    pub fn eval(&self, p: &[Q; 3]) -> Q {
        let [a, b, c, d] = &self.coeffs;
        a * &p[0] + b * &p[1] + c * &p[2] + d
    }

    /// `z = f(x, y)` for a graph form, as `[a, b, d]` with `f = a x + b y + d`.
    pub fn graph(&self) -> Option<Line2> {
        let [a, b, c, d] = &self.coeffs;
        (!c.is_zero()).then(|| Line2::new([-(a / c), -(b / c), -(d / c)]))
    }

    /// The trace `a x + b y + d` of a vertical form.
    pub fn trace(&self) -> Option<Line2> {
        (self.kind() == FormKind::Vertical).then(|| {
            let [a, b, _, d] = &self.coeffs;
            Line2::new([a.clone(), b.clone(), d.clone()])
        })
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.coeffs.each_ref().map(to_f64)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, &self.coeffs, &["x", "y", "z", ""])
    }
}

/// An affine function `a x + b y + c` on the plane; also the line where it
/// vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Line2 {
    #[serde(serialize_with = "ser_q3")]
    pub coeffs: [Q; 3],
}

fn ser_q3<S: serde::Serializer>(v: &[Q; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>(), s)
}

impl Line2 {
    pub fn new(coeffs: [Q; 3]) -> Self {
        Self { coeffs }
    }

    pub fn eval(&self, p: &[Q; 2]) -> Q {
        &self.coeffs[0] * &p[0] + &self.coeffs[1] * &p[1] + &self.coeffs[2]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[0].is_zero() && self.coeffs[1].is_zero()
    }

    /// Primitive integer scaling with the first nonzero of `(a, b)` positive.
    pub fn canonical(&self) -> Option<Line2> {
        if self.is_constant() {
            return None;
        }
        let (ints, _) = primitive(&self.coeffs).ok()?;
        Some(Line2::new(ints.map(q)))
    }

    pub fn sub(&self, other: &Line2) -> Line2 {
        Line2::new(std::array::from_fn(|i| &self.coeffs[i] - &other.coeffs[i]))
    }

    /// Gradient dotted with a direction.
    pub fn slope(&self, d: &[Q; 2]) -> Q {
        &self.coeffs[0] * &d[0] + &self.coeffs[1] * &d[1]
    }

    pub fn intersect(&self, other: &Line2) -> Option<[Q; 2]> {
        let [a1, b1, c1] = &self.coeffs;
        let [a2, b2, c2] = &other.coeffs;
        let den = a1 * b2 - a2 * b1;
        if den.is_zero() {
            return None;
        }
        Some([(b1 * c2 - b2 * c1) / &den, (a2 * c1 - a1 * c2) / &den])
    }
}

impl fmt::Display for Line2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, &self.coeffs, &["x", "y", ""])?;
        write!(f, " = 0")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineArrangement {
    pub chart: Chart,
    /// All eight transformed forms, in arrangement order.
    pub forms: Vec<AffineForm>,
    pub vertical: Vec<usize>,
    pub graph: Vec<usize>,
    pub excluded: Vec<usize>,
    /// `F = lambda * prod(forms)` in the chart.
    pub lambda: Q,
    /// `|det|` of the chart; the period picks up this factor.
    pub volume_factor: Q,
}

impl AffineArrangement {
    /// Product form, e.g. `xyz(-x + 1)(x + y)(y + z)(-x + z + 1)`, with
    /// excluded planes omitted.
    pub fn equation(&self) -> String {
        let mut s = String::new();
        for (i, f) in self.forms.iter().enumerate() {
            if self.excluded.contains(&i) {
                continue;
            }
            let nonzero = f.coeffs.iter().filter(|c| !c.is_zero()).count();
            if nonzero == 1 && f.coeffs[3].is_zero() && f.coeffs.iter().all(|c| c.is_zero() || c.is_one()) {
                s.push_str(&f.to_string());
            } else {
                s.push_str(&format!("({f})"));
            }
        }
        s
    }

    /// Sign of `F` at a point where no form vanishes.
    pub fn sign_at(&self, p: &[Q; 3]) -> i8 {
        self.forms.iter().fold(sign(&self.lambda), |s, f| s * sign(&f.eval(p)))
    }

    /// `lambda` times the product of the constants of the excluded planes.
    pub fn effective_lambda(&self) -> Q {
        self.excluded.iter().fold(self.lambda.clone(), |l, &i| l * &self.forms[i].coeffs[3])
    }
}

pub fn apply_chart(arr: &Arrangement, chart: &Chart) -> Result<AffineArrangement> {
    let mut forms = Vec::with_capacity(8);
    let (mut vertical, mut graph, mut excluded) = (Vec::new(), Vec::new(), Vec::new());
    for (i, lf) in arr.forms().iter().enumerate() {
        let v = chart.transform_form(&lf.to_rational());
        let (xyz, w) = chart.split(&v);
        let form = AffineForm::new([xyz[0].clone(), xyz[1].clone(), xyz[2].clone(), w]);
        match form.kind() {
            FormKind::Vertical => vertical.push(i),
            FormKind::Graph => graph.push(i),
            FormKind::Excluded => excluded.push(i),
        }
        forms.push(form);
    }
    Ok(AffineArrangement {
        chart: chart.clone(),
        forms,
        vertical,
        graph,
        excluded,
        lambda: arr.octic_scale(),
        volume_factor: chart.abs_det(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P4Image {
    /// Index into `Census::points`.
    pub point: usize,
    #[serde(serialize_with = "ser_q4")]
    pub homogeneous: Vec4,
    #[serde(skip)]
    pub affine: Option<[Q; 3]>,
    pub at_infinity: bool,
}

pub fn p4_images(census: &Census, chart: &Chart) -> Vec<P4Image> {
    census
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_generic_fourfold())
        .map(|(i, p)| {
            let homogeneous = chart.point_to_new(&p.to_rational());
            let affine = chart.dehomogenise(&homogeneous);
            P4Image { point: i, at_infinity: affine.is_none(), affine, homogeneous }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum LineSource {
    /// Trace of a vertical plane.
    Trace(usize),
    /// Shadow of the crossing of two sheets.
    Crossing(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectedLine {
    pub line: Line2,
    pub sources: Vec<LineSource>,
}

pub fn project_lines(aff: &AffineArrangement) -> Vec<ProjectedLine> {
    let mut out: Vec<ProjectedLine> = Vec::new();
    let mut add = |line: Line2, src: LineSource| {
        let Some(line) = line.canonical() else { return };
        match out.iter_mut().find(|p| p.line == line) {
            Some(p) => p.sources.push(src),
            None => out.push(ProjectedLine { line, sources: vec![src] }),
        }
    };
    for &i in &aff.vertical {
        add(aff.forms[i].trace().expect("vertical"), LineSource::Trace(i));
    }
    for (k, &i) in aff.graph.iter().enumerate() {
        for &j in &aff.graph[k + 1..] {
            let fi = aff.forms[i].graph().expect("graph");
            let fj = aff.forms[j].graph().expect("graph");
            add(fi.sub(&fj), LineSource::Crossing(i, j));
        }
    }
    out
}

/// Everything computed for one arrangement in one chart.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub affine: AffineArrangement,
    pub lines: Vec<ProjectedLine>,
    pub faces: Vec<Region2D>,
    pub cells: Vec<Cell3D>,
    pub p4: Vec<P4Image>,
    pub cycles: Vec<PolyhedralCycle>,
}

impl Decomposition {
    pub fn closed_cells(&self) -> impl Iterator<Item = (usize, &Cell3D)> {
        self.cells.iter().enumerate().filter(|(_, c)| c.closed)
    }
}

pub fn decompose(arr: &Arrangement, census: &Census, chart: &Chart) -> Result<Decomposition> {
    let affine = apply_chart(arr, chart)?;
    let lines = project_lines(&affine);
    let raw: Vec<Line2> = lines.iter().map(|l| l.line.clone()).collect();
    let faces = bounded_faces(&raw);
    let mut cells = Vec::new();
    for (k, face) in faces.iter().enumerate() {
        for mut c in stack_cells(&affine, face) {
            c.face = k;
            cells.push(c);
        }
    }
    let p4 = p4_images(census, chart);
    let points: Vec<[Q; 3]> = p4.iter().filter_map(|p| p.affine.clone()).collect();
    let closed: Vec<Cell3D> = cells.iter().filter(|c| c.closed).cloned().collect();
    let closed_idx: Vec<usize> = cells.iter().enumerate().filter(|(_, c)| c.closed).map(|(i, _)| i).collect();
    let cycles = polyhedral_cycles(&closed, &affine, &points)
        .into_iter()
        .map(|mut c| {
            c.terms = c.terms.into_iter().map(|(k, n)| (closed_idx[k], n)).collect();
            c
        })
        .collect();
    Ok(Decomposition { affine, lines, faces, cells, p4, cycles })
}
