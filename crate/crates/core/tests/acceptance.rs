mod support;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mixfib::analysis::{analyze, Config};
use mixfib::atinfinity::{estimate_asymptotic_values, EstimatorOptions, ValueKind};
use mixfib::nondegen::{self, Aggregate, FaceStatus, Mode, Scope, SearchOptions};
use mixfib::{catalog, homogeneity, Complex64};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn homogeneity_types() -> Outcome {
    let t = Instant::now();
    let norm = catalog::load("radial_norm").unwrap();
    let quartic = catalog::load("polar_quartic").unwrap();
    let r = homogeneity::radial_type(&norm).unwrap().ok_or("|x|²+|y|² has no radial type")?;
    ensure(r.weights == vec![1, 1] && r.degree == 2, format!("radial type {:?}; {}", r.weights, r.degree))?;
    ensure(homogeneity::polar_type(&norm).unwrap().is_none(), "|x|²+|y|² has a polar type")?;
    let p = homogeneity::polar_type(&quartic).unwrap().ok_or("x²+x⁴ȳ²+y² has no polar type")?;
    ensure(p.weights == vec![1, 1] && p.degree == 2, format!("polar type {:?}; {}", p.weights, p.degree))?;
    ensure(homogeneity::radial_type(&quartic).unwrap().is_none(), "x²+x⁴ȳ²+y² has a radial type")?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("radial (1,1);2 and polar (1,1);2 in {:.2?}", t.elapsed()))
}

fn semitame_strong_refuted() -> Outcome {
    let t = Instant::now();
    let f = catalog::load("semitame").unwrap();
    let v = nondegen::classify(&f, Mode::StronglyNondegenerate, Scope::GammaPlus, true, &SearchOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(matches!(v.aggregate, Aggregate::Refuted { .. }), "strong non-degeneracy not refuted")?;
    let rec = v
        .faces
        .iter()
        .find(|r| r.face == "{(2,0)}" && r.coordinates == vec![1, 2])
        .ok_or("no record for the face {(2,0)}")?;
    let FaceStatus::Degenerate { witness } = &rec.status else {
        return Err("no witness on {(2,0)}".into());
    };
    let g = mixfib::parser::parse_polynomial(&rec.restriction, Some(2)).map_err(|e| e.to_string())?;
    let res = nondegen::normalized_singularity_residual(&g, &witness.point).unwrap().0;
    ensure(res <= 1e-8, format!("re-evaluated residual {res:e}"))?;
    let s_f = estimate_asymptotic_values(&f, ValueKind::SF, &EstimatorOptions::default()).unwrap();
    ensure(s_f.clusters.is_empty(), format!("S(f) has {} clusters", s_f.clusters.len()))?;
    within(t.elapsed(), Duration::from_secs(120))?;
    Ok(format!("witness on {{(2,0)}} with residual {res:.1e}; S(f) empty; {:.2?}", t.elapsed()))
}

fn semitame_singular_locus() -> Outcome {
    let f = catalog::load("semitame").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let z2 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        worst = worst.max(nondegen::singularity_residual(&f, &[Complex64::new(0.0, 0.0), z2]).unwrap().0);
    }
    for dir in [PI / 4.0, -PI / 4.0] {
        // z₁ = ± i z̄₁ is the real line through e^{±iπ/4}
        for _ in 0..50 {
            let z1 = Complex64::from_polar(rng.gen_range(-2.0..2.0), dir);
            worst = worst.max(nondegen::singularity_residual(&f, &[z1, -z1]).unwrap().0);
        }
    }
    ensure(worst <= 1e-9, format!("max residual on Sing f {worst:e}"))?;
    let mut least = f64::INFINITY;
    for _ in 0..50 {
        let z: Vec<Complex64> = (0..2)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        least = least.min(nondegen::singularity_residual(&f, &z).unwrap().0);
    }
    ensure(least >= 1e-3, format!("generic point with residual {least:e}"))?;
    Ok(format!("max on Sing f {worst:.1e}, min generic {least:.1e}"))
}

fn semitame_phi_values() -> Outcome {
    let t = Instant::now();
    let f = catalog::load("semitame").unwrap();
    let opts = EstimatorOptions::default();
    let s = estimate_asymptotic_values(&f, ValueKind::SPhi, &opts).unwrap();
    let expected = [
        Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        Complex64::new(2.0, 1.0) / 5f64.sqrt(),
        Complex64::new(2.0, -1.0) / 5f64.sqrt(),
    ];
    ensure(s.clusters.len() == 3, format!("{} clusters", s.clusters.len()))?;
    let mut worst: f64 = 0.0;
    for e in expected {
        let d = s
            .clusters
            .iter()
            .map(|c| (c.center.arg() - e.arg() + PI).rem_euclid(2.0 * PI) - PI)
            .map(f64::abs)
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    ensure(worst <= 1e-3, format!("angular error {worst:e}"))?;
    ensure(s.unbounded_evidence, "no solutions at some radius")?;
    within(t.elapsed(), Duration::from_secs(600))?;
    Ok(format!("3 values, angular error {worst:.1e}, solutions at every radius; {:.2?}", t.elapsed()))
}

fn fermat_consistency() -> Outcome {
    let t = Instant::now();
    let f = catalog::load("fermat_cubic").unwrap();
    let s = estimate_asymptotic_values(&f, ValueKind::SPhi, &EstimatorOptions::default()).unwrap();
    ensure(s.clusters.is_empty(), "S(φ) estimate is not empty")?;
    let late: usize = s.per_radius.iter().filter(|r| r.radius >= 100.0).map(|r| r.accepted).sum();
    ensure(late == 0, format!("{late} solutions accepted at R ≥ 100"))?;
    let r = analyze(&f, "fermat_cubic", &Config::default()).map_err(|e| e.to_string())?;
    ensure(r.verdict.clauses.iter().any(|c| c.id == 'c'), format!("verdict: {}", r.verdict.summary))?;
    within(t.elapsed(), Duration::from_secs(120))?;
    Ok(format!("S(φ) empty, none accepted at R ≥ 100, clause (c) emitted; {:.2?}", t.elapsed()))
}

fn property_suites() -> Outcome {
    let t = Instant::now();
    let fd = support::gradients_vs_differences(100, 1)?;
    let (types, euler) = support::euler_identity()?;
    let faces = support::face_lattices(50, 2)?;
    let lambdas = support::lambda_optimality()?;
    let sag = support::phi_solutions_in_milnor_set()?;
    let drift = support::flow_paths()?;
    Ok(format!(
        "(i) 100 gradients, max error {fd:.1e}; (ii) {types} radial types, Euler {euler:.1e}; \
         (iii) {faces} faces equal to oracle; (iv) {lambdas} λ/θ fits optimal; \
         (v) {sag} M(φ) solutions in M(f); (vi) 10 paths, drift {drift:.1e}; {:.2?}",
        t.elapsed()
    ))
}

fn determinism() -> Outcome {
    let t = Instant::now();
    let cfg = Config {
        flow_paths: 2,
        ..Config::default()
    };
    for name in catalog::names() {
        let f = catalog::load(name).unwrap();
        let a = analyze(&f, name, &cfg).map_err(|e| e.to_string())?.to_json();
        let b = analyze(&f, name, &cfg).map_err(|e| e.to_string())?.to_json();
        ensure(a == b, format!("{name}: reports differ"))?;
    }
    Ok(format!("{} examples byte-identical; {:.2?}", catalog::EXAMPLES.len(), t.elapsed()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 radial/polar homogeneity types", homogeneity_types),
        ("2 semitame: strong non-degeneracy refuted, S(f) empty", semitame_strong_refuted),
        ("3 semitame: singular locus components", semitame_singular_locus),
        ("4 semitame: three values of S(φ), M(φ) unbounded", semitame_phi_values),
        ("5 z1³+z2³: S(φ) empty, Milnor fibration clause", fermat_consistency),
        ("6 property suites", property_suites),
        ("7 report determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
