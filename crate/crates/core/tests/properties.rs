use num_rational::Rational64;
use octic_core::arrangement::{betti_relations, incidence_census, Arrangement};
use octic_core::chamber::{apply_chart, bounded_faces, decompose, incidence_matrix, integer_kernel, Chart, Line2};
use octic_core::exact::{det, q, q_frac, vec_mat, Mat4, Vec4, Q};
use octic_core::golden::{builtin_arrangement, builtin_form_text, form_names};
use octic_core::lattice::{invariants_from_tau, lattice_generators, recognize_rational, PREC};
use octic_core::modular::{extend_coefficients, load_form_text};
use octic_core::quadrature::{scaling_check, Axis, PeriodValue, QuadSettings};
use proptest::prelude::*;
use rug::Float;

fn census_key(arr: &Arrangement) -> [usize; 7] {
    let c = incidence_census(arr);
    [c.double_lines, c.triple_lines, c.points_mult3, c.points_mult4, c.points_mult5, c.p4_generic, c.admissible as usize]
}

fn rational_forms(arr: &Arrangement) -> Vec<Vec4> {
    arr.forms().iter().map(|f| f.to_rational()).collect()
}

fn label() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["1", "3", "19", "32", "69", "93", "238", "239", "240", "241", "245"])
}

fn unimodular_ish() -> impl Strategy<Value = Mat4> {
    prop::array::uniform4(prop::array::uniform4(-2i64..=2))
        .prop_map(|m| m.map(|r| r.map(q)))
        .prop_filter("invertible", |m| det(m) != q(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn census_invariant_under_relabelling_and_rescaling(l in label(), perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(), scales in prop::array::uniform8(1i64..5)) {
        let arr = builtin_arrangement(l).unwrap();
        let forms = rational_forms(&arr);
        let raw: Vec<Vec4> = perm.iter().zip(scales).map(|(&i, s)| forms[i].clone().map(|c| c * q_frac(if s % 2 == 0 { -s } else { s }, 3))).collect();
        let moved = Arrangement::new("m", &raw, arr.lambda().clone()).unwrap();
        prop_assert_eq!(census_key(&arr), census_key(&moved));
    }

    #[test]
    fn census_invariant_under_coordinate_change(l in label(), m in unimodular_ish()) {
        let arr = builtin_arrangement(l).unwrap();
        let raw: Vec<Vec4> = rational_forms(&arr).iter().map(|f| vec_mat(f, &m)).collect();
        let moved = Arrangement::new("m", &raw, q(1)).unwrap();
        prop_assert_eq!(census_key(&arr), census_key(&moved));
    }

    #[test]
    fn chart_round_trip(m in unimodular_ish(), p in prop::array::uniform4(-9i64..9)) {
        let chart = Chart::new(m, 3).unwrap();
        let p: Vec4 = p.map(q);
        prop_assert_eq!(chart.point_to_old(&chart.point_to_new(&p)), p.clone());
        let arr = builtin_arrangement("1").unwrap();
        let aff = apply_chart(&arr, &chart).unwrap();
        let back: Vec<Vec4> = (0..8).map(|i| chart.inverse().transform_form(&chart.transform_form(&arr.forms()[i].to_rational()))).collect();
        prop_assert_eq!(back, rational_forms(&arr));
        prop_assert_eq!(aff.forms.len(), 8);
    }

    #[test]
    fn face_areas_do_not_depend_on_line_order(
        lines in prop::collection::vec(prop::array::uniform3(-4i64..=4), 3..7).prop_shuffle(),
        perm_seed in any::<u64>(),
    ) {
        let ls: Vec<Line2> = lines.iter().filter(|c| c[0] != 0 || c[1] != 0).map(|c| Line2::new(c.map(q))).collect();
        let total = |ls: &[Line2]| bounded_faces(ls).iter().fold(q(0), |s, f| s + f.area());
        let mut shuffled = ls.clone();
        let n = shuffled.len();
        if n > 1 {
            shuffled.rotate_left((perm_seed % n as u64) as usize);
            shuffled.reverse();
        }
        prop_assert_eq!(total(&ls), total(&shuffled));
    }

    #[test]
    fn integer_kernel_is_exact(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..5)) {
        let k = integer_kernel(&rows, 6);
        for v in &k {
            for r in &rows {
                prop_assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn recognize_recovers_small_rationals(p in -200i64..200, den in 1i64..=64, y in 0.1f64..1e3, eps in -0.4f64..0.4) {
        prop_assume!(p != 0);
        let r = Rational64::new(p, den);
        let tol = 1e-9;
        let x = y * p as f64 / den as f64 * (1.0 + eps * tol);
        prop_assert_eq!(recognize_rational(x, y, 64, tol), Some(r));
    }

    #[test]
    fn generators_are_idempotent(re in 1.0f64..200.0, im in 1.0f64..200.0, a in 1i64..6, b in 1i64..6) {
        let pv = |value, axis| PeriodValue { value, axis, est_rel_err: 0.0, cell_ref: String::new(), settings: QuadSettings::default(), evaluations: 0 };
        let lat = lattice_generators(&[pv(re * a as f64, Axis::Real), pv(re * (a + 1) as f64, Axis::Real), pv(im * b as f64, Axis::Imaginary)], 64, 1e-9).unwrap();
        let again = lattice_generators(&[pv(lat.omega_re, Axis::Real), pv(lat.omega_im, Axis::Imaginary)], 64, 1e-9).unwrap();
        prop_assert!((again.omega_re - lat.omega_re).abs() <= 1e-12 * lat.omega_re);
        prop_assert!((again.omega_im - lat.omega_im).abs() <= 1e-12 * lat.omega_im);
        prop_assert!(again.multipliers.iter().all(|m| m.multiple == 1));
        prop_assert!((lat.omega_re - re).abs() <= 1e-9 * re);
    }

    #[test]
    fn j_is_modular_and_discriminant_positive(t in 0.3f64..3.0) {
        let t = Float::with_val(PREC, t);
        let a = invariants_from_tau(&t).unwrap();
        let b = invariants_from_tau(&Float::with_val(PREC, t.recip_ref())).unwrap();
        let rel = Float::with_val(PREC, &a.j - &b.j).abs() / a.j.clone().abs();
        prop_assert!(rel < 1e-15);
        let disc = Float::with_val(PREC, a.g2.clone() * &a.g2 * &a.g2) - Float::with_val(PREC, a.g3.clone() * &a.g3 * 27u32);
        prop_assert!(disc > 0);
    }

    #[test]
    fn hecke_multiplicativity(m in 1u64..=60, n in 1u64..=16, which in 0usize..5) {
        use num_integer::Integer;
        prop_assume!(m.gcd(&n) == 1);
        let name = form_names().nth(which).unwrap();
        let f = load_form_text(builtin_form_text(name).unwrap()).unwrap();
        let a = extend_coefficients(&f, 1000).unwrap();
        prop_assert_eq!(a[(m * n) as usize], a[m as usize] * a[n as usize]);
    }
}

#[test]
fn betti_symmetry() {
    for b in 2..40 {
        assert_eq!(betti_relations(b, 2).unwrap() - b, b - 2);
    }
}

#[test]
fn deligne_bound_on_shipped_coefficients() {
    for name in form_names() {
        let f = load_form_text(builtin_form_text(name).unwrap()).unwrap();
        for (&p, &a) in f.coeffs.iter().filter(|(&p, _)| p > 1 && f.level % p != 0) {
            assert!((a as f64).powi(2) <= 4.0 * (p as f64).powi(3), "{name} a_{p}");
        }
    }
}

#[test]
fn closed_cells_have_constant_signs_and_cycles_are_kernel_vectors() {
    let arr = builtin_arrangement("1").unwrap();
    let census = incidence_census(&arr);
    let mut rng_state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        q((rng_state % 97 + 1) as i64)
    };
    for f in arr.forms() {
        let chart = Chart::sending_to_infinity(f).unwrap();
        let d = decompose(&arr, &census, &chart).unwrap();
        for (_, cell) in d.closed_cells() {
            for _ in 0..10 {
                let w: Vec<Q> = cell.region.vertices.iter().map(|_| next()).collect();
                let xy = cell.region.interior_point(&w);
                let lo = d.affine.forms[cell.lower_sheet].graph().unwrap().eval(&xy);
                let hi = d.affine.forms[cell.upper_sheet].graph().unwrap().eval(&xy);
                let (a, b) = (next(), next());
                let z = (&lo * &a + &hi * &b) / (a + b);
                let p = [xy[0].clone(), xy[1].clone(), z];
                let s: Vec<i8> = d
                    .affine
                    .forms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !d.affine.excluded.contains(i))
                    .map(|(_, f)| octic_core::exact::sign(&f.eval(&p)))
                    .collect();
                let expect: Vec<i8> =
                    cell.sign_vector.iter().enumerate().filter(|(i, _)| !d.affine.excluded.contains(i)).map(|(_, &s)| s).collect();
                assert_eq!(s, expect);
            }
        }
        let closed: Vec<_> = d.closed_cells().map(|(i, c)| (i, c.clone())).collect();
        let cells: Vec<_> = closed.iter().map(|(_, c)| c.clone()).collect();
        let points: Vec<[Q; 3]> = d.p4.iter().filter_map(|p| p.affine.clone()).collect();
        let m = incidence_matrix(&cells, &d.affine, &points);
        for cyc in &d.cycles {
            for row in &m {
                let s: i64 = closed.iter().zip(row).map(|((i, _), &e)| e * cyc.terms.get(i).copied().unwrap_or(0)).sum();
                assert_eq!(s, 0);
            }
        }
    }
}

#[test]
fn scaling_and_axis_swap_on_arrangement_one() {
    let arr = builtin_arrangement("1").unwrap();
    let census = incidence_census(&arr);
    let chart = Chart::from_new_coordinates([
        [q(1), q(0), q(0), q(0)],
        [q(0), q(1), q(0), q(0)],
        [q(0), q(0), q(1), q(0)],
        [q(1), q(0), q(0), q(1)],
    ])
    .unwrap();
    let d = decompose(&arr, &census, &chart).unwrap();
    let (_, cell) = d.closed_cells().next().unwrap();
    let settings = QuadSettings::with_tol(1e-10);
    for mu in [q(4), q_frac(9, 4), q_frac(1, 9)] {
        let rec = scaling_check(cell, &d.affine, &mu, &settings).unwrap();
        assert!((rec.ratio - rec.expected_ratio).abs() <= 1e-9 * rec.expected_ratio, "{rec:?}");
        assert_eq!(rec.flipped_axis, rec.base_axis.flipped());
    }
}
