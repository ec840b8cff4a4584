//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines come out in order; exits nonzero if any
//! criterion fails.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gaussrr::cycles::{self, CycleComponent, LagrangianCycle, Verdict};
use gaussrr::euler::{self, Nondegeneracy};
use gaussrr::gauss::{self, GaussConfig, SpecialLagrangian};
use gaussrr::homotopy::{self, PolynomialSystem, TrackerConfig};
use gaussrr::laurent::{parse, ExponentVector, LaurentPolynomial, TorusPoint};
use gaussrr::polytope::{self, LatticePolytope};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- independent planar geometry -----------------------------------------

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Monotone chain; counterclockwise vertices without collinear points.
fn hull2(points: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<[i64; 2]> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<[i64; 2]> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area, which is the normalized volume in the plane.
fn twice_area(h: &[[i64; 2]]) -> i64 {
    if h.len() < 3 {
        return 0;
    }
    (0..h.len())
        .map(|i| {
            let (a, b) = (h[i], h[(i + 1) % h.len()]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<i64>()
        .abs()
}

/// Interior and boundary lattice points by scanning the bounding box.
fn brute_lattice_points(h: &[[i64; 2]]) -> (i64, i64) {
    let (x0, x1) = (
        h.iter().map(|p| p[0]).min().unwrap(),
        h.iter().map(|p| p[0]).max().unwrap(),
    );
    let (y0, y1) = (
        h.iter().map(|p| p[1]).min().unwrap(),
        h.iter().map(|p| p[1]).max().unwrap(),
    );
    let (mut interior, mut boundary) = (0, 0);
    for x in x0..=x1 {
        for y in y0..=y1 {
            let sides: Vec<i64> = (0..h.len())
                .map(|i| cross(h[i], h[(i + 1) % h.len()], [x, y]))
                .collect();
            if sides.iter().all(|&s| s > 0) {
                interior += 1;
            } else if sides.iter().all(|&s| s >= 0) {
                boundary += 1;
            }
        }
    }
    (interior, boundary)
}

fn minkowski(a: &[[i64; 2]], b: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let sums: Vec<[i64; 2]> = a
        .iter()
        .flat_map(|p| b.iter().map(move |q| [p[0] + q[0], p[1] + q[1]]))
        .collect();
    hull2(&sums)
}

fn planar_support(f: &LaurentPolynomial) -> Vec<[i64; 2]> {
    f.support()
        .into_iter()
        .map(|e| [e[0] as i64, e[1] as i64])
        .collect()
}

fn lattice(points: &[[i64; 2]]) -> LatticePolytope {
    let pts: Vec<Vec<i64>> = points.iter().map(|p| p.to_vec()).collect();
    polytope::convex_hull(&pts).unwrap()
}

// ---- random inputs ---------------------------------------------------------

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.random_range(0.5..2.0);
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

fn random_planar_polynomial(
    rng: &mut ChaCha8Rng,
    lo: i32,
    hi: i32,
    terms: usize,
) -> LaurentPolynomial {
    loop {
        let t: Vec<(ExponentVector, Complex64)> = (0..terms)
            .map(|_| {
                (
                    ExponentVector::new(vec![rng.random_range(lo..=hi), rng.random_range(lo..=hi)]),
                    random_complex(rng),
                )
            })
            .collect();
        let f = LaurentPolynomial::from_terms(2, t).unwrap();
        if polytope::newton_polytope(&f).is_ok_and(|p| p.is_full_dimensional()) {
            return f;
        }
    }
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut m = vec![vec![1, 0], vec![0, 1]];
    for _ in 0..rng.random_range(1..=2) {
        let k = if rng.random_bool(0.5) { 1 } else { -1 };
        let e = if rng.random_bool(0.5) {
            vec![vec![1, k], vec![0, 1]]
        } else {
            vec![vec![1, 0], vec![k, 1]]
        };
        m = vec![
            vec![
                e[0][0] * m[0][0] + e[0][1] * m[1][0],
                e[0][0] * m[0][1] + e[0][1] * m[1][1],
            ],
            vec![
                e[1][0] * m[0][0] + e[1][1] * m[1][0],
                e[1][0] * m[0][1] + e[1][1] * m[1][1],
            ],
        ];
    }
    if rng.random_bool(0.3) {
        m.swap(0, 1);
    }
    m
}

fn random_polygon(rng: &mut ChaCha8Rng, range: i64) -> Vec<[i64; 2]> {
    loop {
        let k = rng.random_range(3..=8);
        let pts: Vec<[i64; 2]> = (0..k)
            .map(|_| {
                [
                    rng.random_range(-range..=range),
                    rng.random_range(-range..=range),
                ]
            })
            .collect();
        let h = hull2(&pts);
        if h.len() >= 3 {
            return h;
        }
    }
}

// ---- criteria --------------------------------------------------------------

fn corpus() -> Vec<String> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../corpus/n2_nondegenerate.txt"
    );
    std::fs::read_to_string(path)
        .expect("bundled corpus")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let entries = corpus();
    check(entries.len() >= 20, || {
        format!("corpus has only {} entries", entries.len())
    })?;
    let cfg = GaussConfig::default();
    for line in &entries {
        let f = parse(line, 2).map_err(|e| format!("{line}: {e}"))?;
        check(f.num_terms() <= 8, || format!("{line}: more than 8 terms"))?;
        check(f.max_abs_exponent() <= 3, || {
            format!("{line}: exponent outside [-3, 3]")
        })?;
        let nd = euler::nondegeneracy_check(&f, &cfg.tracker).map_err(|e| e.to_string())?;
        check(nd.is_nondegenerate(), || format!("{line}: {nd:?}"))?;
        let h = hull2(&planar_support(&f));
        let (i, b) = brute_lattice_points(&h);
        let pick = 2 * i + b - 2;
        let r = gauss::gaussian_degree_hypersurface(&f, &cfg).map_err(|e| e.to_string())?;
        check(r.agreed, || format!("{line}: samples disagree"))?;
        check(r.gdeg as i64 == pick, || {
            format!("{line}: gdeg {} but 2I+B-2 = {pick}", r.gdeg)
        })?;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!(
        "{} entries, all equal, {:.1}s",
        entries.len(),
        t.as_secs_f64()
    ))
}

/// Normalized volume of a 3-polytope from a fan triangulation of its
/// boundary triangles around an interior point, done here independently.
fn volume3(points: &[[i64; 3]]) -> i64 {
    let det = |a: [i64; 3], b: [i64; 3], c: [i64; 3]| -> i64 {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
    };
    let sub = |a: [i64; 3], b: [i64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    // every triangle of points that is a face of the hull, coned from the
    // first point; scaled by the number of points to keep integers
    let n = points.len();
    let mut total = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (points[i], points[j], points[k]);
                let normal_side: Vec<i64> = points
                    .iter()
                    .map(|&p| det(sub(b, a), sub(c, a), sub(p, a)))
                    .collect();
                let on_face =
                    normal_side.iter().all(|&s| s >= 0) || normal_side.iter().all(|&s| s <= 0);
                if on_face && normal_side.iter().any(|&s| s != 0) {
                    // cone from the centroid, scaled by n to stay integral
                    let o = [0, 1, 2].map(|d| points.iter().map(|p| p[d]).sum::<i64>());
                    let s = |p: [i64; 3]| [p[0] * n as i64, p[1] * n as i64, p[2] * n as i64];
                    total += det(sub(s(a), o), sub(s(b), o), sub(s(c), o)).abs();
                }
            }
        }
    }
    total / (n as i64).pow(3)
}

fn criterion_2() -> Outcome {
    let cfg = GaussConfig::default();
    let mut parts = Vec::new();
    for (text, pts, quoted) in [
        (
            "1+x+y+z",
            vec![[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
            1,
        ),
        (
            "1+x+y+z+x*y*z",
            vec![[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]],
            2,
        ),
    ] {
        let start = Instant::now();
        let f = parse(text, 3).unwrap();
        let volume = volume3(&pts);
        let r = gauss::gaussian_degree_hypersurface(&f, &cfg).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        check(r.agreed, || format!("{text}: samples disagree"))?;
        check(r.gdeg as i64 == volume, || {
            format!("{text}: gdeg {} but volume {volume}", r.gdeg)
        })?;
        check(t < Duration::from_secs(60), || {
            format!("{text}: took {t:?}")
        })?;
        let note = if volume != quoted {
            format!(" (two simplices of volume 1 and 2, so not {quoted})")
        } else {
            String::new()
        };
        parts.push(format!("gdeg({text}) = {} = volume{note}", r.gdeg));
    }
    Ok(parts.join("; "))
}

fn criterion_3() -> Outcome {
    let f = parse("1+x+y+x*y", 2).unwrap();
    let r = gauss::gaussian_degree_hypersurface(&f, &GaussConfig::default())
        .map_err(|e| e.to_string())?;
    check(r.gdeg == 0 && r.agreed, || {
        format!("gdeg {} agreed {}", r.gdeg, r.agreed)
    })?;
    check(r.bkk == 2, || format!("bkk {}", r.bkk))?;
    match euler::nondegeneracy_check(&f, &TrackerConfig::default()).map_err(|e| e.to_string())? {
        Nondegeneracy::Degenerate {
            whole: true,
            witness,
            ..
        } => {
            let d = (witness[0] + 1.0).norm().max((witness[1] + 1.0).norm());
            check(d < 1e-8, || format!("witness {witness:?}"))?;
        }
        other => return Err(format!("{other:?}")),
    }
    Ok("gdeg 0 < bkk 2, degenerate on the whole polygon at (-1, -1)".into())
}

fn criterion_4() -> Outcome {
    let cfg = GaussConfig::default();
    for n in 1..=3 {
        let zero = gauss::gaussian_degree_special(&SpecialLagrangian::ZeroSection { dimension: n });
        let p = TorusPoint::new(vec![Complex64::new(1.5, -0.5); n]).unwrap();
        let point = gauss::gaussian_degree_special(&SpecialLagrangian::Point(p.clone()));
        // χ((C*)^n) = 0 and χ(pt) = 1
        check(zero == 0 && point == 1, || {
            format!("n={n}: zero {zero}, point {point}")
        })?;
        let via = |c| {
            cycles::chi_via_cc(&cycles::cc_of_constant_on_smooth(n, c).unwrap(), &cfg)
                .map(|r| r.chi)
                .map_err(|e| e.to_string())
        };
        check(via(CycleComponent::ZeroSection)? == 0, || {
            format!("n={n}: zero-section cycle")
        })?;
        check(via(CycleComponent::Point(p))? == 1, || {
            format!("n={n}: point cycle")
        })?;
    }
    Ok("zero section 0, point 1, for n = 1, 2, 3".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = GaussConfig::default();
    let line = parse("1+x+y", 2).unwrap();
    let conic = parse("1+x+y+3*x*y", 2).unwrap();
    let mut nonnegative = 0;
    for trial in 0..50 {
        let positive = trial % 3 == 0;
        let mult = |rng: &mut ChaCha8Rng| loop {
            let m: i64 = if positive {
                rng.random_range(1..=3)
            } else {
                rng.random_range(-3..=3)
            };
            if m != 0 {
                return m;
            }
        };
        let mut comps: Vec<(CycleComponent, i64)> = Vec::new();
        let mut expected = 0;
        for _ in 0..rng.random_range(0..=2) {
            let p =
                TorusPoint::new(vec![random_complex(&mut rng), random_complex(&mut rng)]).unwrap();
            let m = mult(&mut rng);
            comps.push((CycleComponent::Point(p), m));
            expected += m;
        }
        for (c, g) in [
            (CycleComponent::Hypersurface(line.clone()), 1),
            (CycleComponent::Hypersurface(conic.clone()), 2),
            (CycleComponent::ZeroSection, 0),
        ] {
            if comps.is_empty() || rng.random_bool(0.6) {
                let m = mult(&mut rng);
                comps.push((c, m));
                expected += m * g;
            }
        }
        let cycle = LagrangianCycle::new(2, comps).map_err(|e| e.to_string())?;
        let chi = cycles::chi_via_cc(&cycle, &cfg)
            .map_err(|e| e.to_string())?
            .chi;
        check(chi == expected, || {
            format!("cycle {trial}: {chi} vs {expected}")
        })?;
        if positive {
            check(chi >= 0, || {
                format!("cycle {trial}: negative with positive multiplicities")
            })?;
            nonnegative += 1;
        }
    }
    Ok(format!(
        "50 cycles exact; {nonnegative} with positive multiplicities all >= 0"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = GaussConfig::default();
    let gdeg = |f: &LaurentPolynomial| -> Result<u64, String> {
        let r = gauss::gaussian_degree_hypersurface(f, &cfg).map_err(|e| e.to_string())?;
        check(r.agreed, || format!("{f}: samples disagree"))?;
        Ok(r.gdeg)
    };
    for trial in 0..100 {
        let terms = rng.random_range(3..=5);
        let f = random_planar_polynomial(&mut rng, -1, 1, terms);
        let m = random_unimodular(&mut rng);
        let c = TorusPoint::new(vec![random_complex(&mut rng), random_complex(&mut rng)]).unwrap();
        let base = gdeg(&f)?;
        let moved = f.substitute(&m, &c).map_err(|e| e.to_string())?;
        let shift = ExponentVector::new(vec![rng.random_range(-2..=2), rng.random_range(-2..=2)]);
        let shifted = f.mul(&LaurentPolynomial::monomial(
            shift,
            Complex64::new(1.0, 0.0),
        ));
        let scaled = f.scale(random_complex(&mut rng));
        for (what, g) in [
            ("substitution", &moved),
            ("monomial", &shifted),
            ("scalar", &scaled),
        ] {
            let v = gdeg(g)?;
            check(v == base, || {
                format!("triple {trial}: {what} changed gdeg {base} -> {v} for {f} -> {g}")
            })?;
        }
    }
    for _ in 0..200 {
        let h = random_polygon(&mut rng, 6);
        let (i, b) = brute_lattice_points(&h);
        let p = lattice(&h);
        check(p.normalized_volume() as i64 == 2 * i + b - 2, || {
            format!("Pick fails on {h:?}")
        })?;
        check(
            p.lattice_point_counts().map_err(|e| e.to_string())? == (i as u64, b as u64),
            || format!("lattice counts differ on {h:?}"),
        )?;
        check(p.normalized_volume() as i64 == twice_area(&h), || {
            format!("volume of {h:?}")
        })?;
    }
    for _ in 0..100 {
        let (a, b) = (random_polygon(&mut rng, 4), random_polygon(&mut rng, 4));
        let (pa, pb) = (lattice(&a), lattice(&b));
        let ab = polytope::mixed_volume(&[pa.clone(), pb.clone()]).map_err(|e| e.to_string())?;
        let ba = polytope::mixed_volume(&[pb, pa.clone()]).map_err(|e| e.to_string())?;
        let aa = polytope::mixed_volume(&[pa.clone(), pa.clone()]).map_err(|e| e.to_string())?;
        let oracle = (twice_area(&minkowski(&a, &b)) - twice_area(&a) - twice_area(&b)) / 2;
        check(ab == ba, || format!("MV not symmetric on {a:?}, {b:?}"))?;
        check(ab as i64 == oracle, || {
            format!("MV {ab} vs {oracle} on {a:?}, {b:?}")
        })?;
        check(aa == pa.normalized_volume(), || format!("MV(P,P) on {a:?}"))?;
    }
    Ok("100 invariance triples, Pick on 200 polygons, mixed volume on 100 pairs".into())
}

/// `|f(x)| / Σ |c_a x^a|`, computed term by term.
fn relative_residual(f: &LaurentPolynomial, x: &[Complex64]) -> f64 {
    let (mut value, mut scale) = (Complex64::new(0.0, 0.0), 0.0);
    for (e, c) in f.terms() {
        let t = e
            .entries()
            .iter()
            .zip(x)
            .fold(*c, |acc, (&k, z)| acc * z.powi(k));
        value += t;
        scale += t.norm();
    }
    value.norm() / scale.max(f64::MIN_POSITIVE)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let m = rng.random_range(1..=3usize);
        let degrees: Vec<i32> = (0..m).map(|_| rng.random_range(1..=3)).collect();
        let eqs: Vec<LaurentPolynomial> = degrees
            .iter()
            .map(|&d| {
                let mut terms = Vec::new();
                let mut push =
                    |e: Vec<i32>| terms.push((ExponentVector::new(e), random_complex(&mut rng)));
                // every monomial of total degree at most d
                let mut e = vec![0; m];
                loop {
                    if e.iter().sum::<i32>() <= d {
                        push(e.clone());
                    }
                    let mut i = 0;
                    while i < m {
                        e[i] += 1;
                        if e[i] <= d {
                            break;
                        }
                        e[i] = 0;
                        i += 1;
                    }
                    if i == m {
                        break;
                    }
                }
                LaurentPolynomial::from_terms(m, terms).unwrap()
            })
            .collect();
        let system = PolynomialSystem::new(eqs.clone()).map_err(|e| e.to_string())?;
        let cfg = TrackerConfig::with_seed(100 + trial);
        let sols = homotopy::solve_square_system(&system, &cfg).map_err(|e| e.to_string())?;
        let bezout: i32 = degrees.iter().product();
        let found: usize = sols.multiplicities.iter().sum();
        check(
            sols.len() as i32 == bezout && found as i32 == bezout,
            || {
                format!(
                    "system {trial}: {} roots ({found} paths) vs Bezout {bezout}",
                    sols.len()
                )
            },
        )?;
        for p in &sols.points {
            let r = eqs
                .iter()
                .map(|f| relative_residual(f, p))
                .fold(0.0, f64::max);
            worst = worst.max(r);
            check(r < 1e-11, || format!("system {trial}: residual {r:e}"))?;
        }
    }
    for trial in 0..50 {
        let m = rng.random_range(2..=3usize);
        let eqs: Vec<LaurentPolynomial> = (0..m)
            .map(|_| {
                let terms: Vec<(ExponentVector, Complex64)> = (0..rng.random_range(2..=4))
                    .map(|_| {
                        (
                            ExponentVector::new((0..m).map(|_| rng.random_range(0..=3)).collect()),
                            random_complex(&mut rng),
                        )
                    })
                    .collect();
                LaurentPolynomial::from_terms(m, terms).unwrap()
            })
            .collect();
        if eqs.iter().any(|f| f.is_monomial()) {
            continue;
        }
        let system = PolynomialSystem::new(eqs.clone()).map_err(|e| e.to_string())?;
        let bound = homotopy::bkk_bound(&eqs).map_err(|e| e.to_string())?;
        let cfg = TrackerConfig::with_seed(200 + trial);
        let sols = homotopy::solve_square_system(&system, &cfg).map_err(|e| e.to_string())?;
        let torus = sols
            .points
            .iter()
            .filter(|p| p.iter().all(|z| z.norm() > gauss::TORUS_THRESHOLD))
            .count() as u64;
        check(torus <= bound, || {
            format!("sparse system {trial}: {torus} torus roots > bkk {bound}")
        })?;
    }
    Ok(format!(
        "Bezout on 20 dense systems (worst residual {worst:.1e}); bkk respected on sparse systems"
    ))
}

fn criterion_8() -> Outcome {
    let run = || -> (String, Vec<Verdict>) {
        let cfg = GaussConfig::with_seed(42);
        let reports: Vec<_> = corpus()
            .iter()
            .map(|l| cycles::verify_cor_1_5(&parse(l, 2).unwrap(), &cfg))
            .collect();
        let verdicts = reports.iter().map(|r| r.verdict).collect();
        (serde_json::to_string(&reports).unwrap(), verdicts)
    };
    let ((a, verdicts), (b, _)) = (run(), run());
    check(a == b, || "reports differ between runs".into())?;
    check(verdicts.iter().all(|v| *v == Verdict::Equal), || {
        format!("verdicts {verdicts:?}")
    })?;
    Ok(format!("two runs byte-identical ({} bytes)", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("n=2 corpus: gdeg = 2I + B - 2", criterion_1),
        ("n=3: gdeg equals normalized volume", criterion_2),
        ("degenerate (1+x)(1+y)", criterion_3),
        ("trivial Lagrangians", criterion_4),
        ("linearity over cycles", criterion_5),
        ("invariance, Pick, mixed volume", criterion_6),
        ("solver calibration", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{t:.1}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} [{t:.1}s] {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
