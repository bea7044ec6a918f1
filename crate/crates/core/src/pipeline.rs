//! Stages of the end to end computation over a set of arrangements, and the
//! comparison of their results with the reference tables.
//!
//! Periods are integrated per chamber of the real projective arrangement and
//! summed over classes of chambers that are opposite at generic fourfold
//! points. For each axis the smallest classes are integrated first; the
//! rational gcd of their sums gives the lattice generators.

use std::path::PathBuf;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{betti_relations, incidence_census, Arrangement, Census};
use crate::cache::{period_key, PeriodCache};
use crate::chamber::{chambers, opposite_classes, Chamber};
use crate::concord::{match_periods, printed_equalities, CommensurabilityReport};
use crate::error::{Error, Result};
use crate::exact::{q, Q};
use crate::golden::{self, assignment, builtin_arrangement, golden};
use crate::lattice::{agrees_to_digits, elliptic_invariants, lattice_generators, recognize_rational, Multiplier, PeriodLattice};
use crate::modular::{self, resolve_form, LValues, ModularForm};
use crate::quadrature::{chamber_period, Axis, PeriodValue, QuadSettings};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub arrangements: Vec<String>,
    pub settings: QuadSettings,
    /// Opposite classes integrated on each axis.
    pub classes_per_axis: usize,
    pub max_den: i64,
    /// Relative tolerance of rational recognition.
    pub recognize_tol: f64,
    pub lvalue_digits: u32,
    pub form_dir: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    /// Multiplies the scaling of every arrangement.
    pub lambda_factor: Q,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            arrangements: golden::arrangement_labels().map(String::from).collect(),
            settings: QuadSettings::default(),
            classes_per_axis: 3,
            max_den: 64,
            recognize_tol: 1e-9,
            lvalue_digits: 32,
            form_dir: None,
            cache: None,
            lambda_factor: q(1),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let s = &self.settings;
        if !(s.tol > 0.0) || s.budget == 0 || !(self.recognize_tol > 0.0) {
            return Err(Error::Data("tolerances and budget must be positive".into()));
        }
        if self.classes_per_axis == 0 || self.max_den < 1 {
            return Err(Error::Data("classes per axis and max denominator must be positive".into()));
        }
        if let Some(d) = &self.form_dir {
            if !d.is_dir() {
                return Err(Error::Data(format!("form directory {} does not exist", d.display())));
            }
        }
        for l in &self.arrangements {
            builtin_arrangement(l)?;
        }
        Ok(())
    }

    pub fn open_cache(&self) -> Result<PeriodCache> {
        match &self.cache {
            Some(p) => PeriodCache::open(p),
            None => Ok(PeriodCache::in_memory()),
        }
    }

    pub fn load_arrangements(&self) -> Result<Vec<Arrangement>> {
        self.arrangements
            .iter()
            .map(|l| builtin_arrangement(l)?.with_scaled_lambda(&self.lambda_factor))
            .collect()
    }

    /// Assigned forms of the selected arrangements, each once, in order.
    pub fn forms(&self) -> Result<Vec<String>> {
        let mut out: Vec<String> = Vec::new();
        for l in &self.arrangements {
            let f = assignment().get(l).ok_or_else(|| Error::UnknownArrangement(l.clone()))?;
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRecord {
    pub label: String,
    pub equation: String,
    pub lambda: String,
    pub double_lines: usize,
    pub triple_lines: usize,
    pub points_mult3: usize,
    pub points_mult4: usize,
    pub points_mult5: usize,
    pub p4_generic: usize,
    pub admissible: bool,
    pub b3_hat: Option<i64>,
    pub b3_smoothing: Option<i64>,
}

pub fn census_stage(cfg: &RunConfig) -> Result<Vec<CensusRecord>> {
    cfg.load_arrangements()?
        .iter()
        .map(|arr| {
            let c = incidence_census(arr);
            let b3_hat = golden().census_row(&arr.label).map(|r| r.b3_hat);
            Ok(CensusRecord {
                label: arr.label.clone(),
                equation: arr.equation(),
                lambda: arr.lambda().to_string(),
                double_lines: c.double_lines,
                triple_lines: c.triple_lines,
                points_mult3: c.points_mult3,
                points_mult4: c.points_mult4,
                points_mult5: c.points_mult5,
                p4_generic: c.p4_generic,
                admissible: c.admissible,
                b3_hat,
                b3_smoothing: b3_hat.map(|b| betti_relations(b, 2)).transpose()?,
            })
        })
        .collect()
}

fn signs(s: &[i8]) -> String {
    s.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    /// Sign vectors of the member chambers.
    pub members: Vec<String>,
    pub axis: Axis,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellsRecord {
    pub label: String,
    pub chambers: usize,
    pub touching_p4: usize,
    pub classes: Vec<ClassRecord>,
}

struct Prepared {
    arr: Arrangement,
    census: Census,
    chambers: Vec<Chamber>,
    /// Classes ordered by size, then by first member.
    classes: Vec<Vec<usize>>,
}

fn prepare(arr: Arrangement) -> Prepared {
    let census = incidence_census(&arr);
    let chambers = chambers(&arr, &census);
    let mut classes = opposite_classes(&chambers, &census);
    classes.sort_by_key(|c| (c.len(), c[0]));
    Prepared { arr, census, chambers, classes }
}

impl Prepared {
    fn axis(&self, class: &[usize]) -> Axis {
        if self.chambers[class[0]].f_sign > 0 {
            Axis::Real
        } else {
            Axis::Imaginary
        }
    }

    fn class_record(&self, class: &[usize]) -> ClassRecord {
        ClassRecord { members: class.iter().map(|&i| signs(&self.chambers[i].sign_vector)).collect(), axis: self.axis(class) }
    }
}

pub fn cells_stage(cfg: &RunConfig) -> Result<Vec<CellsRecord>> {
    Ok(cfg
        .load_arrangements()?
        .into_par_iter()
        .map(|arr| {
            let p = prepare(arr);
            CellsRecord {
                label: p.arr.label.clone(),
                chambers: p.chambers.len(),
                touching_p4: p.chambers.iter().filter(|c| !c.p4.is_empty()).count(),
                classes: p.classes.iter().map(|c| p.class_record(c)).collect(),
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclePeriod {
    pub class: ClassRecord,
    pub value: f64,
    pub est_rel_err: f64,
    pub evaluations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub class: ClassRecord,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodsRecord {
    pub label: String,
    pub lambda: String,
    pub settings: QuadSettings,
    pub periods: Vec<CyclePeriod>,
    pub skipped: Vec<Skipped>,
}

impl PeriodsRecord {
    pub fn values(&self) -> Vec<PeriodValue> {
        self.periods
            .iter()
            .map(|p| PeriodValue {
                value: p.value,
                axis: p.class.axis,
                est_rel_err: p.est_rel_err,
                cell_ref: p.class.members.join(" "),
                settings: self.settings,
                evaluations: p.evaluations,
            })
            .collect()
    }
}

/// Chamber periods, from the cache when present. The second component
/// counts the chambers actually integrated.
fn class_period(p: &Prepared, class: &[usize], settings: &QuadSettings, cache: &PeriodCache) -> Result<(CyclePeriod, usize)> {
    let (mut value, mut err, mut evaluations, mut integrated) = (0.0, 0.0, 0, 0);
    for &i in class {
        let ch = &p.chambers[i];
        let key = period_key(&p.arr, &ch.sign_vector, settings);
        let v = match cache.get(&key) {
            Some(v) => v,
            None => {
                let v = chamber_period(&p.arr, &p.census, ch, settings)?;
                cache.insert(key, v.clone())?;
                integrated += 1;
                v
            }
        };
        value += v.value;
        err += v.value * v.est_rel_err;
        evaluations += v.evaluations;
    }
    Ok((CyclePeriod { class: p.class_record(class), value, est_rel_err: err / value, evaluations }, integrated))
}

/// Periods of one arrangement and the number of chambers integrated.
pub fn arrangement_periods(arr: Arrangement, cfg: &RunConfig, cache: &PeriodCache) -> Result<(PeriodsRecord, usize)> {
    let p = prepare(arr);
    let mut periods = Vec::new();
    let mut skipped = Vec::new();
    let mut integrated = 0;
    for axis in [Axis::Real, Axis::Imaginary] {
        let mut found = 0;
        for class in p.classes.iter().filter(|c| p.axis(c) == axis) {
            if found == cfg.classes_per_axis {
                break;
            }
            match class_period(&p, class, &cfg.settings, cache) {
                Ok((cp, n)) => {
                    periods.push(cp);
                    integrated += n;
                    found += 1;
                }
                Err(e) => skipped.push(Skipped { class: p.class_record(class), error: e.to_string() }),
            }
        }
        if found == 0 {
            return Err(Error::NoCycles(p.arr.label.clone()));
        }
    }
    let rec = PeriodsRecord {
        label: p.arr.label.clone(),
        lambda: p.arr.lambda().to_string(),
        settings: cfg.settings,
        periods,
        skipped,
    };
    Ok((rec, integrated))
}

pub fn periods_stage(cfg: &RunConfig, cache: &PeriodCache) -> Result<Vec<PeriodsRecord>> {
    cfg.load_arrangements()?
        .into_par_iter()
        .map(|arr| arrangement_periods(arr, cfg, cache).map(|(r, _)| r))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeRecord {
    pub label: String,
    pub omega_re: f64,
    pub omega_im: f64,
    pub multipliers: Vec<Multiplier>,
    pub tau_over_i: f64,
    pub g2: f64,
    pub g3: f64,
    pub j: f64,
}

impl LatticeRecord {
    pub fn lattice(&self) -> PeriodLattice {
        PeriodLattice { omega_re: self.omega_re, omega_im: self.omega_im, multipliers: self.multipliers.clone() }
    }
}

pub fn lattice_record(label: &str, periods: &[PeriodValue], cfg: &RunConfig) -> Result<LatticeRecord> {
    let lat = lattice_generators(periods, cfg.max_den, cfg.recognize_tol)?;
    let [tau_over_i, g2, g3, j] = elliptic_invariants(&lat)?.to_f64();
    Ok(LatticeRecord {
        label: label.to_string(),
        omega_re: lat.omega_re,
        omega_im: lat.omega_im,
        multipliers: lat.multipliers,
        tau_over_i,
        g2,
        g3,
        j,
    })
}

pub fn lattice_stage(periods: &[PeriodsRecord], cfg: &RunConfig) -> Result<Vec<LatticeRecord>> {
    periods.iter().map(|p| lattice_record(&p.label, &p.values(), cfg)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LValuesRecord {
    pub form: String,
    pub level: u64,
    pub l1: String,
    pub l2: String,
    pub l3: String,
    pub terms: u64,
}

impl LValuesRecord {
    fn new(f: &ModularForm, lv: &LValues) -> Self {
        let s = |x: &rug::Float| format!("{x:.32}");
        Self { form: f.name.clone(), level: f.level, l1: s(lv.l1()), l2: s(lv.l2()), l3: s(lv.l3()), terms: lv.terms }
    }
}

pub fn load_lvalues(name: &str, cfg: &RunConfig) -> Result<(ModularForm, LValues)> {
    let f = resolve_form(name, cfg.form_dir.as_deref())?;
    let lv = modular::l_values(&f, cfg.lvalue_digits)?;
    Ok((f, lv))
}

pub fn lvalues_stage(cfg: &RunConfig) -> Result<Vec<LValuesRecord>> {
    cfg.forms()?
        .iter()
        .map(|n| load_lvalues(n, cfg).map(|(f, lv)| LValuesRecord::new(&f, &lv)))
        .collect()
}

/// Commensurability of each computed lattice with its assigned form.
pub fn report_stage(lattices: &[LatticeRecord], cfg: &RunConfig) -> Result<Vec<CommensurabilityReport>> {
    lattices
        .iter()
        .map(|l| {
            let form = assignment().get(&l.label).ok_or_else(|| Error::UnknownArrangement(l.label.clone()))?;
            let (_, lv) = load_lvalues(form, cfg)?;
            Ok(match_periods(&l.label, &l.lattice(), &lv, cfg.max_den, cfg.recognize_tol))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub table: String,
    pub item: String,
    pub pass: bool,
    pub residual: Option<f64>,
    pub detail: String,
}

impl Check {
    fn new(table: &str, item: impl Into<String>, pass: bool, residual: Option<f64>, detail: impl Into<String>) -> Self {
        Self { table: table.into(), item: item.into(), pass, residual, detail: detail.into() }
    }

    fn failed(table: &str, item: impl Into<String>, e: &Error) -> Self {
        Self::new(table, item, false, None, e.to_string())
    }
}

/// Relative tolerance for printed periods and printed equalities.
pub const TABLE_TOL: f64 = 1e-8;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn parse(s: &str) -> f64 {
    s.parse().unwrap_or(f64::NAN)
}

pub fn census_checks(records: &[CensusRecord]) -> Vec<Check> {
    records
        .iter()
        .map(|r| match golden().census_row(&r.label) {
            Some(row) => Check::new(
                "census",
                &r.label,
                r.admissible && r.p4_generic == row.p4,
                None,
                format!("p4 {} (table {}), admissible {}", r.p4_generic, row.p4, r.admissible),
            ),
            None => Check::new("census", &r.label, r.admissible, None, "no table row"),
        })
        .collect()
}

/// Every printed period is a rational multiple of the computed generator on
/// its axis.
pub fn period_checks(lat: &LatticeRecord, cfg: &RunConfig) -> Vec<Check> {
    let Some(row) = golden().period_row(&lat.label) else {
        return vec![];
    };
    let mut out = Vec::new();
    for (axis, values, gen) in [(Axis::Real, &row.real, lat.omega_re), (Axis::Imaginary, &row.imaginary, lat.omega_im)] {
        for v in values {
            let x = parse(v);
            let item = format!("{} {:?} {v}", lat.label, axis);
            match recognize_rational(x, gen, cfg.max_den, TABLE_TOL) {
                Some(r) => {
                    let res = rel(x, gen * *r.numer() as f64 / *r.denom() as f64);
                    out.push(Check::new("periods", item, res <= TABLE_TOL, Some(res), format!("{r} x {gen:.11}")));
                }
                None => out.push(Check::new("periods", item, false, None, format!("not a rational multiple of {gen:.11}"))),
            }
        }
    }
    out
}

pub fn invariant_checks(lat: &LatticeRecord) -> Vec<Check> {
    let Some(row) = golden().invariant_row(&lat.label) else {
        return vec![];
    };
    [("tau/i", lat.tau_over_i, &row.tau_over_i), ("g2", lat.g2, &row.g2), ("g3", lat.g3, &row.g3), ("j", lat.j, &row.j)]
        .into_iter()
        .map(|(name, v, r)| {
            let reference = parse(r);
            let pass = if reference == 0.0 { v.abs() < 1e-9 } else { agrees_to_digits(v, reference, 9) };
            let res = if reference == 0.0 { v.abs() } else { rel(v, reference) };
            Check::new("invariants", format!("{} {name}", lat.label), pass, Some(res), format!("{v:.12e} (table {r})"))
        })
        .collect()
}

pub fn lvalue_checks(name: &str, lv: &LValues) -> Vec<Check> {
    let Some(row) = golden().lvalue_row(name) else {
        return vec![];
    };
    let mut out: Vec<Check> = [("L1", lv.l1(), &row.l1), ("L2", lv.l2(), &row.l2)]
        .into_iter()
        .map(|(s, v, r)| {
            Check::new("lvalues", format!("{name} {s}"), modular::agrees_to_digits(v, r, 25), None, format!("{v:.30} (table {r})"))
        })
        .collect();
    let pi = rug::Float::with_val(v_prec(lv), rug::float::Constant::Pi);
    let level = golden().form_row(name).map_or(1, |r| r.level);
    let id = rug::Float::with_val(v_prec(lv), lv.l3() * level) - rug::Float::with_val(v_prec(lv), pi.square() * 2u32) * lv.l1();
    let id = id.to_f64().abs();
    out.push(Check::new("lvalues", format!("{name} N L3 = 2 pi^2 L1"), id < 1e-20, Some(id), ""));
    out
}

fn v_prec(lv: &LValues) -> u32 {
    lv.l1().prec()
}

pub fn commensurability_checks(r: &CommensurabilityReport) -> Vec<Check> {
    let rho = |x: Option<Rational64>| x.map_or("NONE".to_string(), |x| x.to_string());
    [("re", &r.re), ("im", &r.im)]
        .into_iter()
        .map(|(s, ratio)| {
            Check::new(
                "commensurability",
                format!("{} {} rho_{s}", r.label, r.form),
                ratio.holds(TABLE_TOL),
                Some(ratio.residual),
                format!("{:.11} = {} x {:.11}", ratio.period, rho(ratio.rho), ratio.base),
            )
        })
        .collect()
}

pub fn printed_row_checks(label: &str, lv: &LValues) -> Vec<Check> {
    let Some(row) = golden().proportionality_row(label) else {
        return vec![];
    };
    printed_equalities(row, lv)
        .into_iter()
        .map(|e| {
            Check::new(
                "proportionality",
                format!("{label} {:?}", e.axis),
                e.residual <= TABLE_TOL,
                Some(e.residual),
                format!("{} = {} x base ({:.11})", e.printed, e.rho, e.value),
            )
        })
        .collect()
}

/// All stages and all comparisons; stage errors become failed checks.
pub fn verify(cfg: &RunConfig, cache: &PeriodCache) -> Result<Vec<Check>> {
    let mut checks = census_checks(&census_stage(cfg)?);

    let mut lvs = Vec::new();
    for name in cfg.forms()? {
        match load_lvalues(&name, cfg) {
            Ok((_, lv)) => {
                checks.push(Check::new("forms", &name, true, None, "q-expansion checksum"));
                checks.extend(lvalue_checks(&name, &lv));
                lvs.push((name, lv));
            }
            Err(e) => checks.push(Check::failed("forms", &name, &e)),
        }
    }

    let arrs = cfg.load_arrangements()?;
    let results: Vec<Result<(PeriodsRecord, usize)>> = arrs.into_par_iter().map(|a| arrangement_periods(a, cfg, cache)).collect();
    for (label, res) in cfg.arrangements.iter().zip(results) {
        let lat = res.and_then(|(p, _)| lattice_record(label, &p.values(), cfg));
        let lat = match lat {
            Ok(l) => l,
            Err(e) => {
                checks.push(Check::failed("periods", label, &e));
                continue;
            }
        };
        checks.extend(period_checks(&lat, cfg));
        checks.extend(invariant_checks(&lat));
        let form = &assignment()[label];
        if let Some((_, lv)) = lvs.iter().find(|(n, _)| n == form) {
            let r = match_periods(label, &lat.lattice(), lv, cfg.max_den, cfg.recognize_tol);
            checks.extend(commensurability_checks(&r));
            checks.extend(printed_row_checks(label, lv));
        }
    }
    Ok(checks)
}

pub fn render_checks(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let res = c.residual.map_or(String::new(), |r| format!(" [{r:.1e}]"));
        out += &format!("{} {:<17} {:<28} {}{res}\n", if c.pass { "PASS" } else { "FAIL" }, c.table, c.item, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    out += &format!("{} checks, {} failed\n", checks.len(), failed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(label: &str) -> RunConfig {
        RunConfig { arrangements: vec![label.into()], ..RunConfig::default() }
    }

    #[test]
    fn census_all() {
        let cfg = RunConfig::default();
        let checks = census_checks(&census_stage(&cfg).unwrap());
        assert_eq!(checks.len(), 11);
        assert!(checks.iter().all(|c| c.pass));
        let empty = RunConfig { arrangements: vec![], ..RunConfig::default() };
        assert!(census_stage(&empty).unwrap().is_empty());
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let mut cfg = RunConfig::default();
        cfg.settings.tol = 0.0;
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { form_dir: Some("/nonexistent/forms".into()), ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        assert!(matches!(one("7").validate(), Err(Error::UnknownArrangement(_))));
    }

    #[test]
    fn forms_in_order() {
        let cfg = RunConfig { arrangements: vec!["1".into(), "32".into(), "240".into()], ..RunConfig::default() };
        assert_eq!(cfg.forms().unwrap(), ["8/1", "6/1"]);
    }

    #[test]
    fn lvalue_stage_checks() {
        let cfg = one("1");
        let (_, lv) = load_lvalues("8/1", &cfg).unwrap();
        assert!(lvalue_checks("8/1", &lv).iter().all(|c| c.pass));
        assert!(printed_row_checks("1", &lv).iter().all(|c| c.pass));
    }

    #[test]
    fn invariants_from_table_periods() {
        let cfg = one("1");
        let mk = |v: f64, axis| PeriodValue {
            value: v,
            axis,
            est_rel_err: 0.0,
            cell_ref: String::new(),
            settings: cfg.settings,
            evaluations: 0,
        };
        let lat = lattice_record(
            "1",
            &[mk(55.9805041334, Axis::Real), mk(111.961008267, Axis::Real), mk(69.3694986501, Axis::Imaginary)],
            &cfg,
        )
        .unwrap();
        assert!(period_checks(&lat, &cfg).iter().all(|c| c.pass));
        assert!(invariant_checks(&lat).iter().all(|c| c.pass));
    }
}
