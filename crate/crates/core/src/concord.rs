//! Rational relations between periods and the critical values
//! `pi^2 L(f, 1)` and `pi L(f, 2)`.

use num_rational::Rational64;
use rug::float::Constant;
use rug::Float;
use serde::Serialize;

use crate::golden::ProportionalityRow;
use crate::lattice::{recognize_rational, PeriodLattice};
use crate::modular::LValues;
use crate::quadrature::Axis;

/// `pi^2 L(f, 1)` and `pi L(f, 2)` in double precision.
pub fn l_bases(lv: &LValues) -> (f64, f64) {
    let prec = lv.l1().prec();
    let pi = Float::with_val(prec, Constant::Pi);
    let re = Float::with_val(prec, pi.square_ref()) * lv.l1();
    let im = pi * lv.l2();
    (re.to_f64(), im.to_f64())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ratio {
    pub period: f64,
    pub base: f64,
    /// `period / base` as a rational, `None` when not recognized.
    #[serde(serialize_with = "ser_ratio")]
    pub rho: Option<Rational64>,
    pub residual: f64,
}

fn ser_ratio<S: serde::Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_str("NONE"),
    }
}

impl Ratio {
    fn new(period: f64, base: f64, max_den: i64, tol: f64) -> Ratio {
        let rho = recognize_rational(period, base, max_den, tol);
        let residual = match rho {
            Some(r) => rel(period, base * *r.numer() as f64 / *r.denom() as f64),
            None => rel(period / base, (period / base).round()),
        };
        Ratio { period, base, rho, residual }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.rho.is_some() && self.residual <= tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommensurabilityReport {
    pub label: String,
    pub form: String,
    pub re: Ratio,
    pub im: Ratio,
    /// Every period of the lattice against its base.
    pub periods: Vec<(Axis, Ratio)>,
}

impl CommensurabilityReport {
    pub fn rho_re(&self) -> Option<Rational64> {
        self.re.rho
    }

    pub fn rho_im(&self) -> Option<Rational64> {
        self.im.rho
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.re.holds(tol) && self.im.holds(tol)
    }
}

pub fn match_periods(label: &str, lat: &PeriodLattice, lv: &LValues, max_den: i64, tol: f64) -> CommensurabilityReport {
    let (bre, bim) = l_bases(lv);
    let periods = lat
        .multipliers
        .iter()
        .map(|m| {
            let base = if m.axis == Axis::Real { bre } else { bim };
            (m.axis, Ratio::new(m.value, base, max_den, tol))
        })
        .collect();
    CommensurabilityReport {
        label: label.to_string(),
        form: lv.form.clone(),
        re: Ratio::new(lat.omega_re, bre, max_den, tol),
        im: Ratio::new(lat.omega_im, bim, max_den, tol),
        periods,
    }
}

/// A printed equality `period = rho * base`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrintedEquality {
    pub label: u32,
    pub axis: Axis,
    pub printed: f64,
    pub rho: i64,
    pub value: f64,
    pub residual: f64,
}

/// Both equalities of a printed proportionality row, evaluated with `lv`.
pub fn printed_equalities(row: &ProportionalityRow, lv: &LValues) -> Vec<PrintedEquality> {
    let (bre, bim) = l_bases(lv);
    [(Axis::Real, &row.real, row.rho_re, bre), (Axis::Imaginary, &row.imaginary, row.rho_im, bim)]
        .into_iter()
        .map(|(axis, printed, rho, base)| {
            let printed: f64 = printed.parse().unwrap_or(f64::NAN);
            let value = rho as f64 * base;
            PrintedEquality { label: row.number, axis, printed, rho, value, residual: rel(value, printed) }
        })
        .collect()
}

/// The comparison table: one line per arrangement.
pub fn render_table(reports: &[CommensurabilityReport]) -> String {
    let rho = |r: &Ratio| r.rho.map_or("NONE".to_string(), |x| x.to_string());
    let mut out = format!(
        "{:>5}  {:>5}  {:>16} {:>6} {:>10}  {:>16} {:>6} {:>10}\n",
        "arr", "form", "omega_re", "rho", "resid", "omega_im", "rho", "resid"
    );
    for r in reports {
        out += &format!(
            "{:>5}  {:>5}  {:>16.10} {:>6} {:>10.1e}  {:>16.10} {:>6} {:>10.1e}\n",
            r.label,
            r.form,
            r.re.period,
            rho(&r.re),
            r.re.residual,
            r.im.period,
            rho(&r.im),
            r.im.residual
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::{builtin_form_text, golden};
    use crate::lattice::Multiplier;
    use crate::modular::{l_values, load_form_text};

    fn lv(name: &str) -> LValues {
        l_values(&load_form_text(builtin_form_text(name).unwrap()).unwrap(), 32).unwrap()
    }

    fn lattice(re: f64, im: f64) -> PeriodLattice {
        PeriodLattice {
            omega_re: re,
            omega_im: im,
            multipliers: vec![
                Multiplier { value: re, axis: Axis::Real, multiple: 1 },
                Multiplier { value: im, axis: Axis::Imaginary, multiple: 1 },
            ],
        }
    }

    #[test]
    fn arrangement_one() {
        let r = match_periods("1", &lattice(55.9805041334, 69.3694986501), &lv("8/1"), 64, 1e-9);
        assert_eq!(r.rho_re(), Some(Rational64::from(16)));
        assert_eq!(r.rho_im(), Some(Rational64::from(32)));
        assert!(r.holds(1e-9));
    }

    #[test]
    fn arrangement_nineteen() {
        let r = match_periods("19", &lattice(72.1085316452, 72.1085316452), &lv("32/1"), 64, 1e-9);
        assert_eq!(r.rho_re(), Some(Rational64::from(4)));
        assert_eq!(r.rho_im(), Some(Rational64::from(16)));
    }

    #[test]
    fn unrecognized_ratio() {
        let r = match_periods("x", &lattice(55.9805041334 * std::f64::consts::E, 69.3694986501), &lv("8/1"), 64, 1e-9);
        assert_eq!(r.rho_re(), None);
        assert!(!r.holds(1e-9));
        assert!(render_table(&[r]).contains("NONE"));
    }

    #[test]
    fn scaling_divides_rho() {
        // lambda -> 4 lambda halves every period
        let r = match_periods("1", &lattice(55.9805041334 / 2.0, 69.3694986501 / 2.0), &lv("8/1"), 64, 1e-9);
        assert_eq!(r.rho_re(), Some(Rational64::from(8)));
        assert_eq!(r.rho_im(), Some(Rational64::from(16)));
    }

    #[test]
    fn printed_rows() {
        let row = golden().proportionality_row("240").unwrap();
        for e in printed_equalities(row, &lv("6/1")) {
            assert!(e.residual < 1e-8, "{e:?}");
        }
    }
}
