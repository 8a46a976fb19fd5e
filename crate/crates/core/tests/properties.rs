mod common;

use caustics::birational::{
    is_projection_birational, kernel_curve, projection_fiber_count, recover_point_from_b, veronese_image_defect,
    FiberSize, KernelCurve, MatrixCurve, Verdict,
};
use caustics::caustic::{envelope_point, sample_curve_points};
use caustics::cli::parse::{parse_curve, parse_matrix_curve_json};
use caustics::detgeom::{
    classify_pencil, delta_l_members, delta_s_members, image_is_kernel_perp, is_veronese, pencil_det_form, rank,
    satisfies_definition, veronese_point, Pencil, PencilClass,
};
use caustics::euclid::{cross, dot, norm, to_cx, SymMat};
use caustics::poly::{
    complex_roots, rat, resultant_wrt, solve_system, BinForm, Cx, Field, GRat, MPoly, Rat, UniPoly,
    DEFAULT_ROOT_TOL,
};
use proptest::prelude::*;
use rand::SeedableRng;

use common::*;

fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

fn g(v: i64) -> GRat {
    GRat::int(v, 0)
}

fn gpoint(v: [i64; 3]) -> [GRat; 3] {
    v.map(g)
}

fn nonzero_point() -> impl Strategy<Value = [i64; 3]> {
    prop::array::uniform3(-6i64..=6).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

fn proportional(a: &[GRat; 3], b: &[GRat; 3]) -> bool {
    cross(a, b).iter().all(|c| c.is_zero())
}

fn random_sym(seed: u64, rank: usize) -> SymMat<GRat> {
    let mut r = rng(seed);
    let mut m = SymMat::zero();
    for _ in 0..rank {
        let v: [GRat; 3] = std::array::from_fn(|_| g(caustics::rng::random_int(&mut r, 7)));
        let c = g(caustics::rng::random_int(&mut r, 3));
        m = m.add(&veronese_point(&v).scale(&c));
    }
    m
}

fn linear_form(a: i64, b: i64) -> BinForm<Rat> {
    BinForm::from_coeffs(vec![rat(a), rat(b)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn arithmetic_preserves_homogeneity(d in 1u32..4, e in 1u32..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = MPoly::random(d, &mut r, 5);
        let h = MPoly::random(e, &mut r, 5);
        let f2 = MPoly::random(d, &mut r, 5);
        for p in [&f * &h, &f + &f2, &f - &f2, f.partial(0), f.partial(2), f.pow(2), -&h] {
            prop_assert!(p.is_homogeneous());
            let n = p.nominal_degree();
            prop_assert!(p.terms().all(|(x, _)| x.iter().sum::<u32>() == n));
        }
    }

    #[test]
    fn euler_relation(d in 1u32..6, seed in any::<u64>()) {
        let f = MPoly::random(d, &mut rng(seed), 7);
        let mut acc = MPoly::zero(d);
        for i in 0..3 {
            acc = &acc + &(&MPoly::var(i) * &f.partial(i));
        }
        prop_assert_eq!(acc, f.scale(&rat(d as i64)));
    }

    #[test]
    fn parser_round_trips_display(d in 1u32..5, seed in any::<u64>()) {
        let f = MPoly::random(d, &mut rng(seed), 9);
        prop_assert_eq!(parse_curve(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn resultant_degree_is_product(d in 1u32..4, e in 1u32..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = MPoly::random(d, &mut r, 5);
        let h = MPoly::random(e, &mut r, 5);
        prop_assume!(f.degree_in(2) == d && h.degree_in(2) == e);
        let res = resultant_wrt(&f, &h, 2).unwrap();
        prop_assert_eq!(res.degree(), (d * e) as usize);
    }

    #[test]
    fn root_clusters_match_distinct_count(
        roots in prop::collection::vec((-5i64..=5, 1i64..=4, 1usize..=3), 1..5),
    ) {
        let mut form = BinForm::from_coeffs(vec![rat(1)]);
        for &(a, b, m) in &roots {
            for _ in 0..m {
                form = form.mul(&linear_form(a, b));
            }
        }
        prop_assume!(form.degree() <= 20);
        let clusters = complex_roots(&form, DEFAULT_ROOT_TOL).unwrap();
        prop_assert_eq!(clusters.len(), form.count_distinct_roots().unwrap());
    }

    #[test]
    fn squarefree_is_idempotent(
        roots in prop::collection::vec((-5i64..=5, 1i64..=4, 1usize..=3), 1..5),
    ) {
        let mut form = BinForm::from_coeffs(vec![rat(1)]);
        for &(a, b, m) in &roots {
            for _ in 0..m {
                form = form.mul(&linear_form(a, b));
            }
        }
        let s = form.squarefree().unwrap();
        let ss = s.squarefree().unwrap();
        prop_assert_eq!(ss.degree(), s.degree());
        prop_assert!(ss.exact_div(&s).is_constant());
        let gcd = form.gcd_form(&s);
        prop_assert_eq!(gcd.degree(), s.degree());
        prop_assert!(gcd.exact_div(&s).is_constant());
    }

    #[test]
    fn reflection_incidences_on_curve(seed in any::<u64>(), degree in 2u32..4, s in nonzero_point()) {
        let c = random_curve(degree, seed);
        let sc = to_cx(&s.map(rat));
        let samples = sample_curve_points(&c, 4, seed).unwrap();
        for p in &samples {
            let (Ok(l), Ok(lam)) = (c.incident_ray(&p.point, &sc, 1e-10), c.reflected_ray(&p.point, &sc, 1e-10)) else {
                continue;
            };
            let scale = norm(&p.point) * norm(&sc);
            prop_assert!(dot(&lam, &p.point).norm() < 1e-8 * norm(&p.point));
            prop_assert!(dot(&l, &sc).norm() < 1e-8 * scale);
            prop_assert!(dot(&l, &p.point).norm() < 1e-8 * norm(&p.point));
        }
    }

    #[test]
    fn source_on_normal_reflects_to_itself(seed in any::<u64>(), a in -5i64..=5, b in -5i64..=5) {
        let c = random_curve(2, seed);
        let samples = sample_curve_points(&c, 3, seed).unwrap();
        for p in &samples {
            let Ok(n) = c.normal_line(&p.point, 1e-10) else { continue };
            let other = [Cx::new(a as f64, 0.3), Cx::new(b as f64, -0.7), Cx::new(1.0, 0.0)];
            let s = cross(&n, &other);
            if norm(&s) < 1e-6 {
                continue;
            }
            let (Ok(l), Ok(lam)) = (c.incident_ray(&p.point, &s, 1e-10), c.reflected_ray(&p.point, &s, 1e-10)) else {
                continue;
            };
            prop_assert!(norm(&cross(&l, &lam)) < 1e-7);
        }
    }

    #[test]
    fn envelope_points_lie_on_reflected_rays(seed in any::<u64>(), s in nonzero_point()) {
        let c = conic();
        let sc = to_cx(&s.map(rat));
        for p in &sample_curve_points(&c, 5, seed).unwrap() {
            let Ok(e) = envelope_point(&c, &sc, p) else { continue };
            let lam = c.reflected_numeric(&p.point, &sc);
            prop_assert!(dot(&lam, &e).norm() < 1e-8 * norm(&lam) * norm(&e));
        }
    }

    #[test]
    fn image_is_orthogonal_to_kernel(seed in any::<u64>(), r in 1usize..=3) {
        let m = random_sym(seed, r);
        prop_assume!(!m.is_zero());
        prop_assert!(image_is_kernel_perp(&m));
    }

    #[test]
    fn no_line_in_the_veronese_surface(p in nonzero_point(), q in nonzero_point()) {
        let (p, q) = (gpoint(p), gpoint(q));
        prop_assume!(!proportional(&p, &q));
        let pencil = Pencil::new(veronese_point(&p), veronese_point(&q)).unwrap();
        let some_member_off_v = [(1, 1), (1, -1), (2, 1)]
            .iter()
            .any(|&(l, m)| !is_veronese(&pencil.member(&g(l), &g(m))));
        prop_assert!(some_member_off_v);
    }

    #[test]
    fn delta_s_pencils_round_trip(s in nonzero_point(), c in prop::array::uniform3(-3i64..=3)) {
        let s = gpoint(s);
        let [m0, m1, m2] = delta_s_members(&s).unwrap();
        let b1 = m1.add(&m0.scale(&g(c[0]))).add(&m2.scale(&g(c[1])));
        let Ok(p) = Pencil::new(m0.add(&m2.scale(&g(c[2]))), b1) else { return Ok(()) };
        let class = classify_pencil(&p).unwrap();
        let PencilClass::InDelta { delta_s, .. } = &class else {
            return Err(TestCaseError::fail(format!("{class:?}")));
        };
        prop_assert!(delta_s.as_ref().is_some_and(|d| proportional(d, &s)));
        prop_assert!(satisfies_definition(&p, &class));
        prop_assert!(pencil_det_form(&p).is_zero());
    }

    #[test]
    fn delta_l_pencils_round_trip(l in nonzero_point(), c in prop::array::uniform3(-3i64..=3)) {
        let l = gpoint(l);
        let [m0, m1, m2] = delta_l_members(&l).unwrap();
        let b1 = m1.add(&m0.scale(&g(c[0]))).add(&m2.scale(&g(c[1])));
        let Ok(p) = Pencil::new(m0.add(&m2.scale(&g(c[2]))), b1) else { return Ok(()) };
        let class = classify_pencil(&p).unwrap();
        let PencilClass::InDelta { delta_l, .. } = &class else {
            return Err(TestCaseError::fail(format!("{class:?}")));
        };
        prop_assert!(delta_l.as_ref().is_some_and(|d| proportional(d, &l)));
        prop_assert!(satisfies_definition(&p, &class));
    }

    #[test]
    fn det_form_vanishes_exactly_in_delta(seed in any::<u64>(), r0 in 1usize..=3, r1 in 1usize..=3) {
        let Ok(p) = Pencil::new(random_sym(seed, r0), random_sym(seed ^ 0x5555, r1)) else { return Ok(()) };
        let in_delta = matches!(classify_pencil(&p).unwrap(), PencilClass::InDelta { .. });
        prop_assert_eq!(pencil_det_form(&p).is_zero(), in_delta);
    }

    #[test]
    fn exact_point_recovery(a in -6i64..=6, b in 1i64..=6) {
        // the parabola x0·x2 = x1² through (a², ab, b²)
        let c = curve("x0*x2 - x1^2");
        let p = gpoint([a * a, a * b, b * b]);
        let m = c.mat_b().eval(&p);
        prop_assume!(rank(&m) == 2);
        let r = recover_point_from_b(&c, &m).unwrap();
        prop_assert!(r.on_curve);
        prop_assert!(proportional(&r.point, &p));
    }

    #[test]
    fn veronese_projection_is_injective(s in nonzero_point(), t0 in -20i64..=20) {
        let d = MatrixCurve::veronese();
        let s = gpoint(s);
        prop_assert!(veronese_image_defect(&s).iter().all(|c| c.is_zero()));
        match projection_fiber_count(&d, &s, &GRat::new(caustics::poly::ratio(t0, 3), rat(0))) {
            Ok(fiber) => prop_assert_eq!(fiber, FiberSize::Finite(1)),
            Err(caustics::Error::BaseParameter) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn images_orthogonal_to_common_kernel(s in nonzero_point()) {
        let d = MatrixCurve::new(parse_matrix_curve_json(exceptional_json()).unwrap()).unwrap();
        let KernelCurve::Point(sp) = kernel_curve(&d) else {
            return Err(TestCaseError::fail("kernel point expected"));
        };
        let v = d.apply(&gpoint(s));
        let mut acc = UniPoly::zero();
        for i in 0..3 {
            acc = &acc + &v[i].scale(&sp[i]);
        }
        prop_assert!(acc.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn conic_meets_cubic_in_six_points(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = MPoly::random(2, &mut r, 20);
        let h = MPoly::random(3, &mut r, 20);
        // a line pair meets the cubic at its node with multiplicity two
        prop_assume!(!SymMat::from_quadric(&f).det().is_zero());
        let out = solve_system(&f, &h, seed).unwrap();
        prop_assert_eq!(out.count, 6);
        prop_assert_eq!(out.points.len(), 6);
    }
}

#[test]
fn projection_verdicts_are_seed_independent() {
    let corpus = [
        (veronese_json(), "birational"),
        (exceptional_json(), "exceptional"),
        (kernel_line_json(), "birational"),
    ];
    for (json, want) in corpus {
        let d = MatrixCurve::new(parse_matrix_curve_json(json).unwrap()).unwrap();
        for seed in 0..3 {
            let r = is_projection_birational(&d, 5, seed).unwrap();
            assert_eq!(r.verdict.name(), want, "{json} seed {seed}");
        }
    }
}

#[test]
fn exceptional_kernel_is_the_third_axis() {
    let d = MatrixCurve::new(parse_matrix_curve_json(exceptional_json()).unwrap()).unwrap();
    let r = is_projection_birational(&d, 5, 0).unwrap();
    let Verdict::Exceptional { kernel } = r.verdict else { panic!("{:?}", r.verdict) };
    assert_eq!(kernel, ["0", "0", "1"].map(String::from));
}

#[test]
fn circle_rank_drops_only_at_cyclic_points() {
    let c = circle();
    for p in [gpoint([3, 4, 5]), gpoint([1, 0, 1]), gpoint([0, -1, 1])] {
        assert_eq!(rank(&c.mat_b().eval(&p)), 2);
    }
    let i = [GRat::int(1, 0), GRat::int(0, 1), GRat::int(0, 0)];
    assert!(rank(&c.mat_b().eval(&i)) < 2);
}
