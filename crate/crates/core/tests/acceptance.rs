//! Acceptance criteria, one PASS/FAIL line each.
//!
//! The process exits with status 0 and prints a summary line; set
//! `ACCEPTANCE_STRICT=1` to make any failing criterion a nonzero exit.

use std::time::{Duration, Instant};

use num_integer::Integer;
use octic_core::arrangement::incidence_census;
use octic_core::chamber::{apply_chart, bounded_faces, decompose, incidence_matrix, project_lines, stack_cells, Chart, Line2};
use octic_core::concord::{match_periods, printed_equalities};
use octic_core::exact::{q, vec4, Q};
use octic_core::golden::{builtin_arrangement, builtin_form_text, form_names, golden};
use octic_core::lattice::{agrees_to_digits, elliptic_invariants, invariants_from_tau, lattice_generators, recognize_rational, PREC};
use octic_core::modular::{self, extend_coefficients, l_values, load_form_text};
use octic_core::pipeline::{arrangement_periods, RunConfig};
use octic_core::quadrature::{prism_integral, scaling_check, Axis, PeriodValue, Prism, QuadSettings};
use rug::Float;

struct Report {
    results: Vec<(String, bool)>,
}

impl Report {
    fn criterion(&mut self, id: &str, pass: bool, summary: String, details: &[String]) {
        println!("{id} {} {summary}", if pass { "PASS" } else { "FAIL" });
        for d in details {
            println!("    {d}");
        }
        self.results.push((id.to_string(), pass));
    }
}

fn table_periods(label: &str) -> Vec<PeriodValue> {
    let row = golden().period_row(label).unwrap();
    let pv = |v: &String, axis| PeriodValue {
        value: v.parse().unwrap(),
        axis,
        est_rel_err: 0.0,
        cell_ref: String::new(),
        settings: QuadSettings::default(),
        evaluations: 0,
    };
    row.real.iter().map(|v| pv(v, Axis::Real)).chain(row.imaginary.iter().map(|v| pv(v, Axis::Imaginary))).collect()
}

fn shear_chart() -> Chart {
    Chart::from_new_coordinates([vec4([1, 0, 0, 0]), vec4([0, 1, 0, 0]), vec4([0, 0, 1, 0]), vec4([1, 0, 0, 1])]).unwrap()
}

fn c1(r: &mut Report) {
    let expected = [1, 3, 4, 5, 5, 6, 12, 10, 10, 10, 9];
    let order = ["1", "3", "19", "32", "69", "93", "238", "239", "240", "241", "245"];
    let mut ok = true;
    let mut got = Vec::new();
    let mut slowest = Duration::ZERO;
    for (l, e) in order.iter().zip(expected) {
        let arr = builtin_arrangement(l).unwrap();
        let t = Instant::now();
        let c = incidence_census(&arr);
        slowest = slowest.max(t.elapsed());
        ok &= c.p4_generic == e && c.admissible;
        got.push(c.p4_generic.to_string());
    }
    ok &= slowest < Duration::from_secs(1);
    r.criterion("C1", ok, format!("census p4_generic = ({}), slowest {:.3?}", got.join(","), slowest), &[]);
}

fn c2(r: &mut Report) {
    let arr = builtin_arrangement("1").unwrap();
    let aff = apply_chart(&arr, &shear_chart()).unwrap();
    let eq = aff.equation();
    let lines: Vec<Line2> = project_lines(&aff).into_iter().map(|l| l.line).collect();
    let faces = bounded_faces(&lines);
    let triangles = faces.iter().filter(|f| f.vertices.len() == 3).count();
    let cells: Vec<_> = faces.iter().flat_map(|f| stack_cells(&aff, f)).collect();
    let closed = cells.iter().filter(|c| c.closed).count();
    let flagged = cells.len() - closed;
    // the two cells of the displayed integrals: z from x-1 up to -y over
    // triangle I and z from x-1 up to 0 over triangle II
    let used_closed = cells.iter().filter(|c| c.lower_sheet == 6 && (c.upper_sheet == 5 || c.upper_sheet == 2)).all(|c| c.closed);
    let ok = eq == "xyz(-x + 1)(x + y)(y + z)(-x + z + 1)"
        && lines.len() == 5
        && faces.len() == 2
        && triangles == 2
        && closed == 3
        && flagged == 1
        && used_closed;
    r.criterion(
        "C2",
        ok,
        format!("chart t -> t - x: {eq}, {} lines, {triangles} triangles, {closed} closed cells, {flagged} flagged", lines.len()),
        &[],
    );
}

struct Computed {
    label: &'static str,
    periods: Vec<PeriodValue>,
}

fn c3(r: &mut Report) -> Vec<Computed> {
    let cfg = RunConfig { arrangements: vec![], ..RunConfig::default() };
    let cache = cfg.open_cache().unwrap();
    let mut out = Vec::new();
    let mut ok = true;
    let mut details = Vec::new();
    for (label, tol) in [("1", 1e-9), ("245", 1e-8)] {
        let t = Instant::now();
        let rec = arrangement_periods(builtin_arrangement(label).unwrap(), &cfg, &cache);
        let elapsed = t.elapsed();
        let periods = match rec {
            Ok((p, _)) => p.values(),
            Err(e) => {
                ok = false;
                details.push(format!("{label}: {e}"));
                continue;
            }
        };
        let lat = match lattice_generators(&periods, cfg.max_den, cfg.recognize_tol) {
            Ok(l) => l,
            Err(e) => {
                ok = false;
                details.push(format!("{label}: {e}"));
                continue;
            }
        };
        details.push(format!(
            "{label}: {} class periods in {elapsed:.1?}; generators re {:.11} im {:.11}",
            periods.len(),
            lat.omega_re,
            lat.omega_im
        ));
        ok &= elapsed <= Duration::from_secs(15 * 60);
        for p in table_periods(label) {
            let gen = if p.axis == Axis::Real { lat.omega_re } else { lat.omega_im };
            let other = if p.axis == Axis::Real { lat.omega_im } else { lat.omega_re };
            let hit = recognize_rational(p.value, gen, 64, tol).map(|m| {
                let res = (p.value - gen * *m.numer() as f64 / *m.denom() as f64).abs() / p.value;
                (m, res)
            });
            let line = match hit {
                Some((m, res)) if res <= tol => format!("{label} {:?} {:.11} = {m} x generator [{res:.1e}]", p.axis, p.value),
                _ => {
                    ok = false;
                    let swapped = recognize_rational(p.value, other, 64, tol)
                        .map_or(String::new(), |m| format!("; it is {m} x the generator of the other axis"));
                    format!("{label} {:?} {:.11}: no rational multiple of the {:?} generator{swapped}", p.axis, p.value, p.axis)
                }
            };
            details.push(line);
        }
        out.push(Computed { label, periods });
    }
    r.criterion("C3", ok, "computed periods of 1 (1e-9) and 245 (1e-8) generate the table periods on their axes".into(), &details);
    out
}

fn c4(r: &mut Report, computed: &[Computed]) {
    let mut ok = !computed.is_empty();
    let mut pairs = 0;
    let mut details = Vec::new();
    for c in computed {
        for (i, a) in c.periods.iter().enumerate() {
            for b in &c.periods[i + 1..] {
                if a.axis != b.axis {
                    continue;
                }
                pairs += 1;
                match recognize_rational(a.value, b.value, 64, 1e-9) {
                    Some(_) => {}
                    None => {
                        ok = false;
                        details.push(format!("{}: {:.11} / {:.11} not rational", c.label, a.value, b.value));
                    }
                }
            }
        }
    }
    r.criterion("C4", ok, format!("{pairs} same-axis ratios of computed periods recognized (max_den 64)"), &details);
}

fn c5(r: &mut Report) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut slowest = Duration::ZERO;
    for row in &golden().invariants {
        let label = row.number.to_string();
        let t = Instant::now();
        let inv = lattice_generators(&table_periods(&label), 64, 1e-8).and_then(|lat| elliptic_invariants(&lat));
        slowest = slowest.max(t.elapsed());
        let [tau, g2, g3, j] = match inv {
            Ok(i) => i.to_f64(),
            Err(e) => {
                ok = false;
                details.push(format!("{label}: {e}"));
                continue;
            }
        };
        for (name, v, reference) in [("tau/i", tau, &row.tau_over_i), ("g2", g2, &row.g2), ("g3", g3, &row.g3), ("j", j, &row.j)] {
            let rf: f64 = reference.parse().unwrap();
            let pass = if rf == 0.0 { v.abs() < 1e-9 } else { agrees_to_digits(v, rf, 9) };
            if !pass {
                ok = false;
                details.push(format!("{label} {name}: {v:.12e} vs table {reference} (rel {:.1e})", ((v - rf) / rf).abs()));
            }
        }
    }
    ok &= slowest < Duration::from_secs(1);
    r.criterion("C5", ok, format!("tau/i, g2, g3, j of 11 rows to 9 digits from the table periods, slowest {slowest:.3?}"), &details);
}

fn c6(r: &mut Report) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut slowest = Duration::ZERO;
    for row in &golden().lvalues {
        let t = Instant::now();
        let f = load_form_text(builtin_form_text(&row.form).unwrap()).unwrap();
        let lv = l_values(&f, 32).unwrap();
        slowest = slowest.max(t.elapsed());
        for (s, v, reference) in [("L1", lv.l1(), &row.l1), ("L2", lv.l2(), &row.l2)] {
            if !modular::agrees_to_digits(v, reference, 25) {
                ok = false;
                details.push(format!("{} {s}: computed {v:.30} vs table {reference}", row.form));
            }
        }
        let pi = Float::with_val(PREC, rug::float::Constant::Pi);
        let id = Float::with_val(PREC, lv.l3() * f.level) - Float::with_val(PREC, pi.square() * 2u32) * lv.l1();
        if id.to_f64().abs() >= 1e-20 {
            ok = false;
            details.push(format!("{}: N L3 - 2 pi^2 L1 = {:.1e}", row.form, id.to_f64()));
        }
    }
    ok &= slowest < Duration::from_secs(1);
    r.criterion("C6", ok, format!("L(f,1), L(f,2) of 5 forms to 25 digits, L3 identity to 1e-20, slowest {slowest:.3?}"), &details);
}

fn c7(r: &mut Report) {
    let mut ok = true;
    let mut details = Vec::new();
    let lv = |name: &str| l_values(&load_form_text(builtin_form_text(name).unwrap()).unwrap(), 32).unwrap();
    let mut n = 0;
    for row in &golden().proportionality {
        for e in printed_equalities(row, &lv(&row.form)) {
            n += 1;
            if e.residual > 1e-8 {
                ok = false;
                details.push(format!("{} {:?}: {} vs {} x base = {:.11} [{:.1e}]", e.label, e.axis, e.printed, e.rho, e.value, e.residual));
            }
        }
    }
    // row 241 has no printed equality; its table periods through the generator match
    let lat = lattice_generators(&table_periods("241"), 64, 1e-8).unwrap();
    let rep = match_periods("241", &lat, &lv("8/1"), 64, 1e-8);
    let rho = |x: Option<num_rational::Rational64>| x.map_or("NONE".to_string(), |v| v.to_string());
    ok &= rep.holds(1e-8);
    details.push(format!(
        "241: {:.9} = {} pi^2 L(f,1) [{:.1e}], {:.10} = {} pi L(f,2) [{:.1e}]",
        rep.re.period,
        rho(rep.rho_re()),
        rep.re.residual,
        rep.im.period,
        rho(rep.rho_im()),
        rep.im.residual
    ));
    r.criterion("C7", ok, format!("{n} printed equalities hold to 1e-8, row 241 by its generators"), &details);
}

fn cube(exps: [bool; 3]) -> Prism {
    let factors = (0..3)
        .filter(|&i| exps[i])
        .map(|i| {
            let mut f: [Q; 4] = std::array::from_fn(|_| q(0));
            f[i] = q(1);
            (f, 1)
        })
        .collect();
    Prism {
        polygon: vec![[q(0), q(0)], [q(1), q(0)], [q(1), q(1)], [q(0), q(1)]],
        lower: Line2::new([q(0), q(0), q(0)]),
        upper: Line2::new([q(0), q(0), q(1)]),
        factors,
        prefactor: 2.0,
    }
}

fn c8(r: &mut Report) {
    let mut fails = Vec::new();
    let mut passes = Vec::new();
    let mut note = |name: &str, ok: bool, detail: String| {
        if ok {
            passes.push(name.to_string());
        } else {
            fails.push(format!("{name}: {detail}"));
        }
    };

    let arr = builtin_arrangement("1").unwrap();
    let census = incidence_census(&arr);
    let d = decompose(&arr, &census, &shear_chart()).unwrap();
    let (_, cell) = d.closed_cells().next().unwrap();
    let settings = QuadSettings::with_tol(1e-11);
    match scaling_check(cell, &d.affine, &q(4), &settings) {
        Ok(rec) => {
            let rel = (rec.ratio - 0.5).abs() / 0.5;
            note("scaling", rel <= 1e-9, format!("ratio {} [{rel:.1e}]", rec.ratio));
            note("axis swap", rec.flipped_axis == rec.base_axis.flipped(), format!("{:?} -> {:?}", rec.base_axis, rec.flipped_axis));
        }
        Err(e) => note("scaling", false, e.to_string()),
    }

    let mut cube_ok = true;
    for m in 0..8 {
        let e = [m & 1 != 0, m & 2 != 0, m & 4 != 0];
        let expect = 2.0 * 2f64.powi(e.iter().filter(|&&b| b).count() as i32);
        let s = QuadSettings::with_tol(1e-12);
        cube_ok &= prism_integral(&cube(e), &s).map_or(false, |v| (v.value - expect).abs() <= s.tol * expect);
    }
    note("separable cube", cube_ok, "oracle mismatch".into());

    let mut hecke_ok = true;
    for name in form_names() {
        match load_form_text(builtin_form_text(name).unwrap()) {
            Ok(f) => {
                let a = extend_coefficients(&f, 1000).unwrap();
                for m in 1..=1000u64 {
                    for n in 1..=1000 / m {
                        if m.gcd(&n) == 1 && a[(m * n) as usize] != a[m as usize] * a[n as usize] {
                            hecke_ok = false;
                        }
                    }
                }
                for (&p, &ap) in f.coeffs.iter().filter(|(&p, _)| p > 1 && f.level % p != 0) {
                    hecke_ok &= (ap as f64).powi(2) <= 4.0 * (p as f64).powi(3);
                }
            }
            Err(_) => hecke_ok = false,
        }
    }
    note("Hecke and Deligne", hecke_ok, "shipped coefficients fail validation".into());

    let mut j_ok = true;
    for row in &golden().invariants {
        let t = Float::with_val(PREC, Float::parse(&row.tau_over_i).unwrap());
        let a = invariants_from_tau(&t).unwrap();
        let b = invariants_from_tau(&Float::with_val(PREC, t.recip_ref())).unwrap();
        let rel = (Float::with_val(PREC, &a.j - &b.j) / &a.j).abs().to_f64();
        j_ok &= rel < 1e-15;
    }
    note("j(tau) = j(-1/tau)", j_ok, "relative difference above 1e-15".into());

    let mut kernel_ok = true;
    let mut cycles = 0;
    for f in arr.forms() {
        let d = decompose(&arr, &census, &Chart::sending_to_infinity(f).unwrap()).unwrap();
        let closed: Vec<_> = d.closed_cells().map(|(i, c)| (i, c.clone())).collect();
        let cells: Vec<_> = closed.iter().map(|(_, c)| c.clone()).collect();
        let points: Vec<[Q; 3]> = d.p4.iter().filter_map(|p| p.affine.clone()).collect();
        let m = incidence_matrix(&cells, &d.affine, &points);
        for cyc in &d.cycles {
            cycles += 1;
            for row in &m {
                let s: i64 = closed.iter().zip(row).map(|((i, _), &e)| e * cyc.terms.get(i).copied().unwrap_or(0)).sum();
                kernel_ok &= s == 0;
            }
        }
    }
    note("integer kernel", kernel_ok && cycles > 0, format!("{cycles} cycles"));

    let ok = fails.is_empty();
    r.criterion("C8", ok, format!("property suites: {}", passes.join(", ")), &fails);
}

fn main() {
    let mut r = Report { results: Vec::new() };
    c1(&mut r);
    c2(&mut r);
    let computed = c3(&mut r);
    c4(&mut r, &computed);
    c5(&mut r);
    c6(&mut r);
    c7(&mut r);
    c8(&mut r);
    let failed: Vec<&str> = r.results.iter().filter(|(_, p)| !p).map(|(id, _)| id.as_str()).collect();
    println!("acceptance: {} of {} criteria pass{}", r.results.len() - failed.len(), r.results.len(), if failed.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", failed.join(", "))
    });
    if !failed.is_empty() && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
