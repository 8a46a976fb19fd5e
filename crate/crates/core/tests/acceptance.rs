//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use caustics::birational::{
    is_caustic_birational, is_projection_birational, recover_point_numeric, veronese_image_defect, FiberSize,
    MatrixCurve, Verdict,
};
use caustics::caustic::{degree_d, gamma_degree, sample_curve_points};
use caustics::cli::{self, parse::parse_matrix_curve_json, RunConfig};
use caustics::detgeom::{classify_pencil, pencil_det_form, satisfies_definition, Pencil, PencilClass};
use caustics::euclid::{cross_ratio, proj_eq, to_cx, Curve, SymMat};
use caustics::poly::{rat, Cx, GRat, MPoly, Rat};
use caustics::rng::{random_int, random_rat_point, rng_for};
use clap::Parser;

use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

const SEEDS: [u64; 3] = [1, 2, 3];

fn class_formula() -> Outcome {
    let mut worst = Duration::ZERO;
    for (name, c, want) in [("conic", conic(), 6), ("cubic", fermat_cubic(), 15)] {
        for seed in SEEDS {
            let t = Instant::now();
            let r = gamma_degree(&c, &point(3, 1, 1), seed).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            let el = t.elapsed();
            worst = worst.max(el);
            check(r.degree_gamma == want, format!("{name} seed {seed}: degree {} != {want}", r.degree_gamma))?;
            check(el < Duration::from_secs(10), format!("{name} seed {seed}: took {el:?}"))?;
        }
    }
    Ok(format!("conic 6, cubic 15 on seeds {SEEDS:?}; slowest run {worst:.2?}"))
}

fn line_degeneration() -> Outcome {
    let line = curve("x0 + x1 + x2");
    let r = gamma_degree(&line, &point(3, 1, 1), 1).map_err(|e| e.to_string())?;
    check(r.degree_gamma == 1, format!("degree_gamma {}", r.degree_gamma))?;
    let cfg = RunConfig::try_parse_from(["caustics", "envelope", "--curve", "x0+x1+x2", "--source", "3,1,1", "--samples", "8"])
        .map_err(|e| e.to_string())?;
    let report = cli::cmd_envelope(&cfg).map_err(|e| e.to_string())?;
    check(report["caustic"] == "point caustic", format!("envelope reported {}", report["caustic"]))?;
    Ok("degree_gamma 1; envelope reports point caustic".into())
}

fn birationality() -> Outcome {
    for (name, c) in [("conic", conic()), ("cubic", fermat_cubic())] {
        for seed in SEEDS {
            let r = is_caustic_birational(&c, &point(3, 1, 1), 5, seed).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            check(r.samples.len() == 5, format!("{name}: {} samples", r.samples.len()))?;
            check(
                r.verdict == Verdict::Birational && r.generic_fiber == FiberSize::Finite(1),
                format!("{name} seed {seed}: verdict {:?}, fiber {}", r.verdict, r.generic_fiber),
            )?;
        }
    }
    let r = is_caustic_birational(&circle(), &point(0, 0, 1), 5, 1).map_err(|e| format!("circle: {e}"))?;
    check(r.generic_fiber == FiberSize::Finite(2), format!("circle centre fiber {}", r.generic_fiber))?;
    Ok("conic and cubic birational on 3 seeds; circle from its centre has fiber 2".into())
}

fn matrix_projection() -> Outcome {
    let ver = MatrixCurve::new(parse_matrix_curve_json(veronese_json()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let r = is_projection_birational(&ver, 5, 1).map_err(|e| e.to_string())?;
    check(r.verdict == Verdict::Birational, format!("veronese verdict {:?}", r.verdict))?;
    let mut rng = rng_for(11, 0);
    for _ in 0..5 {
        let s: [GRat; 3] = std::array::from_fn(|_| GRat::int(random_int(&mut rng, 9), 0));
        check(veronese_image_defect(&s).iter().all(|c| c.is_zero()), "π_S(B(t)) not proportional to x(t)")?;
    }
    let exc = MatrixCurve::new(parse_matrix_curve_json(exceptional_json()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let r = is_projection_birational(&exc, 5, 1).map_err(|e| e.to_string())?;
    let want = Verdict::Exceptional { kernel: ["0".into(), "0".into(), "1".into()] };
    check(r.verdict == want, format!("exceptional verdict {:?}", r.verdict))?;
    for _ in 0..5 {
        let s: [GRat; 3] = std::array::from_fn(|_| GRat::int(random_int(&mut rng, 9), 0));
        check(exc.apply(&s)[2].is_zero(), "image not on (S′)^⊥")?;
    }
    let line = MatrixCurve::new(parse_matrix_curve_json(kernel_line_json()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let r = is_projection_birational(&line, 5, 1).map_err(|e| e.to_string())?;
    check(line.is_line() && r.verdict == Verdict::Birational, format!("line verdict {:?}", r.verdict))?;
    Ok("veronese birational with zero residual; Δ(S′) curve exceptional with S′ = (0,0,1); line birational".into())
}

fn quadric(text: &str) -> SymMat<GRat> {
    let q = cli::parse::parse_curve(text).unwrap().map_coeffs(|c| GRat::real(c.clone()));
    SymMat::from_quadric(&q)
}

fn g3(a: i64, b: i64, c: i64) -> [GRat; 3] {
    [GRat::int(a, 0), GRat::int(b, 0), GRat::int(c, 0)]
}

fn pencil_classification() -> Outcome {
    let worked = [
        (quadric("x0^2"), quadric("x1^2"), Some(g3(0, 0, 1)), None),
        (quadric("x0*x1"), quadric("x0*x2"), None, Some(g3(1, 0, 0))),
        (quadric("x0^2"), quadric("x0*x1"), Some(g3(0, 0, 1)), Some(g3(1, 0, 0))),
    ];
    for (b0, b1, s, l) in worked {
        let p = Pencil::new(b0, b1).map_err(|e| e.to_string())?;
        let c = classify_pencil(&p).map_err(|e| e.to_string())?;
        check(c == PencilClass::InDelta { delta_s: s.clone(), delta_l: l.clone() }, format!("worked pencil gave {c:?}"))?;
        check(satisfies_definition(&p, &c), "defining identity fails")?;
    }
    let mut rng = rng_for(5, 0);
    let mut generic = 0;
    while generic < 100 {
        let b0 = SymMat::new(std::array::from_fn(|_| GRat::int(random_int(&mut rng, 9), 0)));
        let b1 = SymMat::new(std::array::from_fn(|_| GRat::int(random_int(&mut rng, 9), 0)));
        let Ok(p) = Pencil::new(b0, b1) else { continue };
        if pencil_det_form(&p).is_zero() {
            continue;
        }
        generic += 1;
        check(classify_pencil(&p) == Ok(PencilClass::NotInDelta), "generic pencil classified in Δ")?;
    }
    Ok("three worked pencils classified; 100 random pencils not in Δ".into())
}

fn exact_identities(c: &Curve) -> Result<(), String> {
    let d = c.degree();
    let b = c.mat_b();
    let a = c.mat_a();
    let f = c.equation();
    for e in b.entries() {
        check(e.is_zero() || e.degree() == Ok(2 * d - 1), "B entry degree")?;
    }
    for e in a.entries() {
        check(e.is_zero() || e.degree() == Ok(2 * d - 1), "A entry degree")?;
    }
    let x: [MPoly; 3] = [MPoly::var(0), MPoly::var(1), MPoly::var(2)];
    let g = c.gradient();
    let b00_want = -&(&(&x[2] * &g[0]) * &g[1]).scale(&rat(2));
    check(*b.get(0, 0) == b00_want, "B00 != −2 x2 f0 f1")?;
    check((b.get(0, 0) + b.get(1, 1)).is_zero(), "B00 + B11 != 0")?;
    let [a01, a02, a12] = a.entries().clone();
    let z = MPoly::zero(2 * d - 1);
    let ar = [[z.clone(), a01.clone(), a02.clone()], [-&a01, z.clone(), a12.clone()], [-&a02, -&a12, z]];
    for i in 0..3 {
        for j in 0..3 {
            check(ar[i][j] == -&ar[j][i], "A not skew")?;
            check(b.get(i, j) == b.get(j, i), "B not symmetric")?;
        }
    }
    let n = c.normal_vector();
    let dfn: Vec<MPoly> = n.iter().map(|ni| (f * ni).scale(&rat(d as i64))).collect();
    for i in 0..3 {
        let mut bx = MPoly::zero(2 * d);
        let mut axv = MPoly::zero(2 * d);
        for j in 0..3 {
            bx = &bx + &(b.get(i, j) * &x[j]);
            axv = &axv + &(&ar[i][j] * &x[j]);
        }
        check(bx == dfn[i], "B(x)x != d f N(x)")?;
        check(axv == dfn[i], "A(x)x != d f N(x)")?;
    }
    Ok(())
}

fn matrix_identities() -> Outcome {
    let mut worst_cr = 0.0f64;
    for k in 0..10u64 {
        let degree = 2 + (k % 3) as u32;
        let c = random_curve(degree, 100 + k);
        exact_identities(&c).map_err(|e| format!("curve {k} (degree {degree}): {e}"))?;
        let mut rng = rng_for(200 + k, 0);
        let s: [Rat; 3] = random_rat_point(&mut rng, 9);
        let sc = to_cx(&s);
        let samples = sample_curve_points(&c, 20, 300 + k).map_err(|e| format!("curve {k}: {e}"))?;
        for p in &samples {
            let (t, n) = c.tn_numeric(&p.point);
            let l = c.incident_ray(&p.point, &sc, 1e-10).map_err(|e| format!("curve {k}: {e}"))?;
            let lam = c.reflected_ray(&p.point, &sc, 1e-10).map_err(|e| format!("curve {k}: {e}"))?;
            let cr = cross_ratio(&n, &t, &l, &lam, 1e-8).map_err(|e| format!("curve {k}: {e}"))?;
            worst_cr = worst_cr.max((cr + Cx::new(1.0, 0.0)).norm());
            let bp = c.mat_b().eval(&p.point);
            let r = recover_point_numeric(&c, &bp, 1e-8).map_err(|e| format!("curve {k}: {e}"))?;
            check(proj_eq(&r.point, &p.point, 1e-8) && r.on_curve, format!("curve {k}: recovery failed"))?;
        }
    }
    check(worst_cr < 1e-8, format!("|CR + 1| = {worst_cr:.3e}"))?;
    Ok(format!("10 random curves of degree 2 to 4; max |CR + 1| = {worst_cr:.2e}"))
}

fn degree_formula() -> Outcome {
    for seed in SEEDS {
        let c = degree_d(&circle(), seed).map_err(|e| format!("circle: {e}"))?;
        check(
            c.degree_d == 4 && c.dual_degree == 2 && c.normals.mu == 2 && c.normals.nu == 1,
            format!("circle seed {seed}: {c:?}"),
        )?;
        let g = degree_d(&conic(), seed).map_err(|e| format!("conic: {e}"))?;
        check(
            g.degree_d == 6 && g.dual_degree == 2 && g.normals.mu == 1 && g.normals.nu == 4,
            format!("conic seed {seed}: {g:?}"),
        )?;
        let h = degree_d(&fermat_cubic(), seed).map_err(|e| format!("cubic: {e}"))?;
        check(h.degree_d >= 4, format!("cubic seed {seed}: degree_D {}", h.degree_d))?;
    }
    Ok("circle 4 = 2 + 2·1, conic 6 = 2 + 1·4, cubic ≥ 4 on 3 seeds".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("class formula", class_formula),
        ("line degeneration", line_degeneration),
        ("birationality", birationality),
        ("matrix projection dichotomy", matrix_projection),
        ("pencil classification", pencil_classification),
        ("matrix identity suite", matrix_identities),
        ("degree formula", degree_formula),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("criterion {} ({name}): PASS [{:.1?}] {detail}", k + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{:.1?}] {why}", k + 1, t.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
