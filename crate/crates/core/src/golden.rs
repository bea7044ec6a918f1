//! Reference tables and bundled data files.
//!
//! The eleven arrangement files, the coefficient files of the five newforms,
//! the arrangement-to-form assignment and the published numerical tables are
//! compiled into the library so that every run compares against the same
//! versioned copy.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::arrangement::{parse_arrangement_file, Arrangement};
use crate::error::{Error, Result};

const ARRANGEMENTS: [(&str, &str); 11] = [
    ("1", include_str!("../data/arrangements/001.arr")),
    ("3", include_str!("../data/arrangements/003.arr")),
    ("19", include_str!("../data/arrangements/019.arr")),
    ("32", include_str!("../data/arrangements/032.arr")),
    ("69", include_str!("../data/arrangements/069.arr")),
    ("93", include_str!("../data/arrangements/093.arr")),
    ("238", include_str!("../data/arrangements/238.arr")),
    ("239", include_str!("../data/arrangements/239.arr")),
    ("240", include_str!("../data/arrangements/240.arr")),
    ("241", include_str!("../data/arrangements/241.arr")),
    ("245", include_str!("../data/arrangements/245.arr")),
];

const FORMS: [(&str, &str); 5] = [
    ("6/1", include_str!("../data/forms/6_1.coef")),
    ("8/1", include_str!("../data/forms/8_1.coef")),
    ("12/1", include_str!("../data/forms/12_1.coef")),
    ("32/1", include_str!("../data/forms/32_1.coef")),
    ("32/2", include_str!("../data/forms/32_2.coef")),
];

const GOLDEN: &str = include_str!("../data/golden.toml");
const ASSIGNMENT: &str = include_str!("../data/assignment.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct CensusRow {
    pub number: u32,
    pub b3_hat: i64,
    pub b3_smoothing: i64,
    pub p4: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PeriodRow {
    pub number: u32,
    pub real: Vec<String>,
    pub imaginary: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct InvariantRow {
    pub number: u32,
    pub tau_over_i: String,
    pub j: String,
    pub g2: String,
    pub g3: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FormRow {
    pub name: String,
    pub level: u64,
    pub expansion: Vec<i64>,
    pub arrangements: Vec<u32>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LValueRow {
    pub form: String,
    pub l1: String,
    pub l2: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ProportionalityRow {
    pub number: u32,
    pub form: String,
    pub real: String,
    pub rho_re: i64,
    pub imaginary: String,
    pub rho_im: i64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GoldenTables {
    pub version: u32,
    pub census: Vec<CensusRow>,
    pub periods: Vec<PeriodRow>,
    pub invariants: Vec<InvariantRow>,
    pub forms: Vec<FormRow>,
    pub lvalues: Vec<LValueRow>,
    pub proportionality: Vec<ProportionalityRow>,
}

impl GoldenTables {
    pub fn census_row(&self, label: &str) -> Option<&CensusRow> {
        self.census.iter().find(|r| r.number.to_string() == label)
    }

    pub fn period_row(&self, label: &str) -> Option<&PeriodRow> {
        self.periods.iter().find(|r| r.number.to_string() == label)
    }

    pub fn invariant_row(&self, label: &str) -> Option<&InvariantRow> {
        self.invariants.iter().find(|r| r.number.to_string() == label)
    }

    pub fn form_row(&self, name: &str) -> Option<&FormRow> {
        self.forms.iter().find(|r| r.name == name)
    }

    pub fn lvalue_row(&self, name: &str) -> Option<&LValueRow> {
        self.lvalues.iter().find(|r| r.form == name)
    }

    pub fn proportionality_row(&self, label: &str) -> Option<&ProportionalityRow> {
        self.proportionality.iter().find(|r| r.number.to_string() == label)
    }
}

pub fn golden() -> &'static GoldenTables {
    static TABLES: OnceLock<GoldenTables> = OnceLock::new();
    TABLES.get_or_init(|| toml::from_str(GOLDEN).expect("bundled golden.toml is valid"))
}

/// Arrangement label to newform name.
pub fn assignment() -> &'static BTreeMap<String, String> {
    static MAP: OnceLock<BTreeMap<String, String>> = OnceLock::new();
    MAP.get_or_init(|| toml::from_str(ASSIGNMENT).expect("bundled assignment.toml is valid"))
}

pub fn arrangement_labels() -> impl Iterator<Item = &'static str> {
    ARRANGEMENTS.iter().map(|(l, _)| *l)
}

pub fn builtin_arrangement(label: &str) -> Result<Arrangement> {
    let (_, text) = ARRANGEMENTS
        .iter()
        .find(|(l, _)| *l == label)
        .ok_or_else(|| Error::UnknownArrangement(label.to_string()))?;
    parse_arrangement_file(text)
}

pub fn builtin_arrangements() -> Result<Vec<Arrangement>> {
    arrangement_labels().map(builtin_arrangement).collect()
}

pub fn form_names() -> impl Iterator<Item = &'static str> {
    FORMS.iter().map(|(n, _)| *n)
}

/// Text of the bundled coefficient file for `name`.
pub fn builtin_form_text(name: &str) -> Result<&'static str> {
    FORMS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownForm(name.to_string()))
}

/// File name used for a form in a coefficient directory (`8/1` -> `8_1.coef`).
pub fn form_file_name(name: &str) -> String {
    format!("{}.coef", name.replace('/', "_"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{betti_relations, incidence_census};

    #[test]
    fn tables_load() {
        let g = golden();
        assert_eq!(g.version, 1);
        assert_eq!(g.census.len(), 11);
        assert_eq!(g.periods.len(), 11);
        assert_eq!(g.invariants.len(), 11);
        assert_eq!(g.forms.len(), 5);
        assert_eq!(g.lvalues.len(), 5);
        assert_eq!(assignment().len(), 11);
        for label in arrangement_labels() {
            assert!(assignment().contains_key(label));
            assert!(g.census_row(label).is_some());
        }
    }

    #[test]
    fn census_matches_table() {
        let g = golden();
        for arr in builtin_arrangements().unwrap() {
            let c = incidence_census(&arr);
            let row = g.census_row(&arr.label).unwrap();
            assert!(c.admissible, "{}", arr.label);
            assert_eq!(c.p4_generic, row.p4, "{}", arr.label);
            assert_eq!(betti_relations(row.b3_hat, 2).unwrap(), row.b3_smoothing);
        }
    }

    #[test]
    fn form_assignment_agrees_with_table() {
        for row in &golden().forms {
            for a in &row.arrangements {
                assert_eq!(assignment()[&a.to_string()], row.name);
            }
        }
    }
}
