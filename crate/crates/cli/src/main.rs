//! `octic`: census, cells, periods, lattice invariants, L-values and the
//! comparison with the reference tables, for the bundled arrangements.

use std::io::{BufRead, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use octic_core::concord::render_table;
use octic_core::exact::Q;
use octic_core::golden;
use octic_core::pipeline::{self as pl, Check, PeriodsRecord, RunConfig};
use octic_core::quadrature::QuadSettings;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "octic", version, about = "Periods of rigid double octics and their modular L-values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Args)]
struct Opts {
    /// Arrangement label, or `all`; may be repeated.
    #[arg(long, global = true, default_value = "all")]
    arrangement: Vec<String>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = QuadSettings::default().tol)]
    tol: f64,
    /// Integrand evaluations allowed per chamber.
    #[arg(long, global = true, default_value_t = QuadSettings::default().budget)]
    budget: u64,
    /// Largest denominator accepted by rational recognition.
    #[arg(long, global = true, default_value_t = 64)]
    max_den: i64,
    /// Opposite classes integrated on each axis.
    #[arg(long, global = true, default_value_t = 3)]
    classes_per_axis: usize,
    /// Directory of coefficient files (`8_1.coef`, ...); bundled copies otherwise.
    #[arg(long, global = true)]
    form_dir: Option<PathBuf>,
    /// json-lines file of chamber periods, reused and extended.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Multiply every scaling by this rational, e.g. `-1`.
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    lambda_factor: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Incidence census and Betti numbers.
    Census,
    /// Chambers of the real arrangement and their opposite classes.
    Cells,
    /// Periods of the smallest opposite classes on each axis.
    Periods,
    /// Lattice generators and elliptic invariants.
    Lattice {
        /// Periods written by `periods --format json-lines`.
        #[arg(long)]
        periods: Option<PathBuf>,
    },
    /// Critical L-values of the assigned forms.
    Lvalues,
    /// Every stage against the reference tables.
    Verify,
    /// Rational multiples of pi^2 L(f,1) and pi L(f,2).
    Report {
        #[arg(long)]
        periods: Option<PathBuf>,
    },
}

impl Opts {
    fn config(&self) -> anyhow::Result<RunConfig> {
        let arrangements = if self.arrangement.iter().any(|a| a == "all") {
            golden::arrangement_labels().map(String::from).collect()
        } else {
            self.arrangement.clone()
        };
        let lambda_factor: Q = self.lambda_factor.parse().map_err(|_| anyhow::anyhow!("bad --lambda-factor"))?;
        let cfg = RunConfig {
            arrangements,
            settings: QuadSettings { tol: self.tol, budget: self.budget, ..QuadSettings::default() },
            classes_per_axis: self.classes_per_axis,
            max_den: self.max_den,
            form_dir: self.form_dir.clone(),
            cache: self.cache.clone(),
            lambda_factor,
            ..RunConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit<T: Serialize>(format: Format, records: &[T], text: impl Fn(&[T]) -> String) -> anyhow::Result<()> {
    match format {
        Format::Text => print!("{}", text(records)),
        Format::JsonLines => {
            for r in records {
                println!("{}", serde_json::to_string(r)?);
            }
        }
    }
    Ok(())
}

fn read_periods(path: &PathBuf, cfg: &RunConfig) -> anyhow::Result<Vec<PeriodsRecord>> {
    let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            let r: PeriodsRecord = serde_json::from_str(&line)?;
            if cfg.arrangements.contains(&r.label) {
                out.push(r);
            }
        }
    }
    if out.is_empty() {
        bail!("no period records for the selected arrangements in {}", path.display());
    }
    Ok(out)
}

fn periods(cfg: &RunConfig, file: &Option<PathBuf>) -> anyhow::Result<Vec<PeriodsRecord>> {
    match file {
        Some(p) => read_periods(p, cfg),
        None => Ok(pl::periods_stage(cfg, &cfg.open_cache()?)?),
    }
}

fn census_text(rs: &[pl::CensusRecord]) -> String {
    let mut s = format!("{:>5} {:>4} {:>4} {:>4} {:>4} {:>4} {:>4} {:>6} {:>4}  equation\n", "arr", "d2", "d3", "p3", "p4", "p5", "p4g", "b3hat", "b3");
    for r in rs {
        let o = |x: Option<i64>| x.map_or("-".into(), |v| v.to_string());
        s += &format!(
            "{:>5} {:>4} {:>4} {:>4} {:>4} {:>4} {:>4} {:>6} {:>4}  {} (lambda {})\n",
            r.label,
            r.double_lines,
            r.triple_lines,
            r.points_mult3,
            r.points_mult4,
            r.points_mult5,
            r.p4_generic,
            o(r.b3_hat),
            o(r.b3_smoothing),
            r.equation,
            r.lambda
        );
    }
    s
}

fn cells_text(rs: &[pl::CellsRecord]) -> String {
    let mut s = String::new();
    for r in rs {
        s += &format!("arrangement {}: {} chambers, {} at fourfold points, {} classes\n", r.label, r.chambers, r.touching_p4, r.classes.len());
        for c in &r.classes {
            s += &format!("  {:?} {}\n", c.axis, c.members.join(" "));
        }
    }
    s
}

fn periods_text(rs: &[PeriodsRecord]) -> String {
    let mut s = String::new();
    for r in rs {
        s += &format!("arrangement {} (lambda {})\n", r.label, r.lambda);
        for p in &r.periods {
            s += &format!("  {:<9} {:>20.12} err {:.1e}  {}\n", format!("{:?}", p.class.axis), p.value, p.est_rel_err, p.class.members.join(" "));
        }
        for k in &r.skipped {
            s += &format!("  skipped {}: {}\n", k.class.members.join(" "), k.error);
        }
    }
    s
}

fn lattice_text(rs: &[pl::LatticeRecord]) -> String {
    let mut s = format!("{:>5} {:>16} {:>16} {:>14} {:>16} {:>16} {:>18}\n", "arr", "omega_re", "omega_im", "tau/i", "g2", "g3", "j");
    for r in rs {
        s += &format!(
            "{:>5} {:>16.10} {:>16.10} {:>14.11} {:>16.9} {:>16.9} {:>18.6}\n",
            r.label, r.omega_re, r.omega_im, r.tau_over_i, r.g2, r.g3, r.j
        );
    }
    s
}

fn lvalues_text(rs: &[pl::LValuesRecord]) -> String {
    let mut s = String::new();
    for r in rs {
        s += &format!("{:>5}  L1 {}\n       L2 {}\n       L3 {}\n", r.form, r.l1, r.l2, r.l3);
    }
    s
}

fn checks_exit(checks: &[Check]) -> ExitCode {
    if checks.iter().all(|c| c.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let cfg = cli.opts.config()?;
    let fmt = cli.opts.format;
    match &cli.command {
        Command::Census => {
            let rs = pl::census_stage(&cfg)?;
            emit(fmt, &rs, census_text)?;
            return Ok(checks_exit(&pl::census_checks(&rs)));
        }
        Command::Cells => emit(fmt, &pl::cells_stage(&cfg)?, cells_text)?,
        Command::Periods => emit(fmt, &pl::periods_stage(&cfg, &cfg.open_cache()?)?, periods_text)?,
        Command::Lattice { periods: file } => {
            let ps = periods(&cfg, file)?;
            emit(fmt, &pl::lattice_stage(&ps, &cfg)?, lattice_text)?;
        }
        Command::Lvalues => emit(fmt, &pl::lvalues_stage(&cfg)?, lvalues_text)?,
        Command::Verify => {
            let checks = pl::verify(&cfg, &cfg.open_cache()?)?;
            emit(fmt, &checks, pl::render_checks)?;
            return Ok(checks_exit(&checks));
        }
        Command::Report { periods: file } => {
            let ps = periods(&cfg, file)?;
            let lat = pl::lattice_stage(&ps, &cfg)?;
            let reports = pl::report_stage(&lat, &cfg)?;
            emit(fmt, &reports, render_table)?;
            let checks: Vec<Check> = reports.iter().flat_map(pl::commensurability_checks).collect();
            return Ok(checks_exit(&checks));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
