// Independent oracles shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mixfib::atinfinity::{self, estimate_asymptotic_values, EstimatorOptions, FlowOptions, ValueKind};
use mixfib::parser::parse_polynomial;
use mixfib::{catalog, homogeneity, newton, Complex64, GaussianRational, MixedPolynomial, MixedTerm};

pub type Check<T> = Result<T, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check<()> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn bundled() -> Vec<(&'static str, MixedPolynomial)> {
    catalog::names().map(|n| (n, catalog::load(n).unwrap())).collect()
}

pub fn point(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
        .collect()
}

pub fn eval(f: &MixedPolynomial, z: &[Complex64]) -> Complex64 {
    f.evaluate(z).unwrap()
}

pub fn random_poly(rng: &mut ChaCha8Rng) -> MixedPolynomial {
    let n = rng.gen_range(1..=3);
    let terms: Vec<MixedTerm> = (0..rng.gen_range(1..6))
        .map(|_| {
            MixedTerm::new(
                GaussianRational::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3)),
                (0..n).map(|_| rng.gen_range(0..=3)).collect(),
                (0..n).map(|_| rng.gen_range(0..=3)).collect(),
            )
        })
        .collect();
    MixedPolynomial::canonicalize(terms, n).unwrap()
}

/// `Σ z^p` over up to 12 random points `p ∈ {0..3}ⁿ`, `n ≤ 4`.
pub fn random_support_poly(rng: &mut ChaCha8Rng) -> MixedPolynomial {
    let n = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=12);
    let pts: BTreeSet<Vec<u32>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect();
    support_poly(n, pts)
}

pub fn support_poly(n: usize, pts: BTreeSet<Vec<u32>>) -> MixedPolynomial {
    let terms = pts
        .into_iter()
        .map(|p| MixedTerm::new(GaussianRational::from_ints(1, 0), p, vec![0; n]));
    MixedPolynomial::canonicalize(terms, n).unwrap()
}

/// Largest deviation of the Wirtinger gradients from central differences of
/// `f` in the `2n` real coordinates.
pub fn fd_gradient_error(f: &MixedPolynomial, z: &[Complex64]) -> f64 {
    let g = f.wirtinger_gradients(z).unwrap();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for k in 0..z.len() {
        let diff = |step: Complex64| {
            let (mut p, mut m) = (z.to_vec(), z.to_vec());
            p[k] += step;
            m[k] -= step;
            (eval(f, &p) - eval(f, &m)) / (2.0 * h)
        };
        let dx = diff(Complex64::new(h, 0.0));
        let dy = diff(Complex64::new(0.0, h));
        worst = worst.max((0.5 * (dx - Complex64::i() * dy) - g.d_z[k]).norm());
        worst = worst.max((0.5 * (dx + Complex64::i() * dy) - g.d_zbar[k]).norm());
    }
    worst
}

pub fn gradients_vs_differences(cases: usize, seed: u64) -> Check<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for k in 0..cases {
        let f = random_poly(&mut rng);
        let z = point(f.n_vars(), seed ^ k as u64);
        let e = fd_gradient_error(&f, &z);
        ensure(e <= 1e-6, || format!("{f} at {z:?}: {e:e}"))?;
        worst = worst.max(e);
    }
    Ok(worst)
}

fn euler_oracle(f: &MixedPolynomial, w: &[i64], d: i64, z: &[Complex64]) -> f64 {
    let g = f.wirtinger_gradients(z).unwrap();
    let mut s = Complex64::new(0.0, 0.0);
    for k in 0..z.len() {
        s += w[k] as f64 * (z[k] * g.d_z[k] + z[k].conj() * g.d_zbar[k]);
    }
    (s - d as f64 * eval(f, z)).norm()
}

/// Euler identity at 100 points for every radial type found among the
/// bundled examples and a few weighted ones. Returns (types, max residual).
pub fn euler_identity() -> Check<(usize, f64)> {
    let mut polys: Vec<MixedPolynomial> = bundled().into_iter().map(|(_, f)| f).collect();
    for s in ["z1^2*zbar1 + z2^3", "z1*zbar1^2 + z2", "z1*zbar2 + (2+i)*z2*zbar1"] {
        polys.push(parse_polynomial(s, None).unwrap());
    }
    let (mut types, mut worst) = (0, 0f64);
    for f in &polys {
        if let Some(ty) = homogeneity::radial_type(f).unwrap() {
            for k in 0..100 {
                let z = point(f.n_vars(), k);
                let e = homogeneity::euler_residual(f, &ty, &z).unwrap().norm();
                let o = euler_oracle(f, &ty.weights, ty.degree, &z);
                ensure(e <= 1e-9 && o <= 1e-9, || format!("{f}: {e:e} / {o:e}"))?;
                worst = worst.max(e).max(o);
            }
            types += 1;
        }
    }
    ensure(types >= 4, || format!("only {types} radial examples"))?;
    Ok((types, worst))
}

// Exact feasibility of `{c·a = r} ∪ {c·a ≥ r}` by Gaussian substitution of
// the equalities followed by Fourier–Motzkin elimination.

type Q = BigRational;

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    c: Vec<Q>,
    r: Q,
}

fn normalize(row: Row) -> Row {
    match row.c.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
        Some(m) => Row {
            c: row.c.iter().map(|x| x / &m).collect(),
            r: &row.r / &m,
        },
        None => row,
    }
}

fn feasible(n: usize, mut eqs: Vec<Row>, ineqs: Vec<Row>) -> bool {
    let mut ineqs: BTreeSet<Row> = ineqs.into_iter().map(normalize).collect();
    while let Some(e) = eqs.pop() {
        let Some(j) = (0..n).find(|&j| !e.c[j].is_zero()) else {
            if !e.r.is_zero() {
                return false;
            }
            continue;
        };
        let sub = |row: &Row| -> Row {
            let t = &row.c[j] / &e.c[j];
            Row {
                c: row.c.iter().zip(&e.c).map(|(x, y)| x - &t * y).collect(),
                r: &row.r - &t * &e.r,
            }
        };
        eqs = eqs.iter().map(sub).collect();
        ineqs = ineqs.iter().map(|r| normalize(sub(r))).collect();
    }
    for j in 0..n {
        let (mut pos, mut neg, mut rest) = (vec![], vec![], BTreeSet::new());
        for r in ineqs {
            if r.c[j].is_positive() {
                pos.push(r);
            } else if r.c[j].is_negative() {
                neg.push(r);
            } else {
                rest.insert(r);
            }
        }
        for p in &pos {
            for m in &neg {
                let (a, b) = (p.c[j].clone(), -m.c[j].clone());
                rest.insert(normalize(Row {
                    c: p.c.iter().zip(&m.c).map(|(x, y)| x * &b + y * &a).collect(),
                    r: &p.r * &b + &m.r * &a,
                }));
            }
        }
        ineqs = rest;
    }
    ineqs.iter().all(|r| !r.r.is_positive())
}

fn to_q(p: &[u32]) -> Vec<Q> {
    p.iter().map(|&x| qi(x as i64)).collect()
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Every subset `S` of `points` that is the point set of a face: some `a`
/// is constant on `S` and strictly larger on every other point.
pub fn oracle_faces(points: &BTreeSet<Vec<u32>>) -> BTreeSet<BTreeSet<Vec<u32>>> {
    let pts: Vec<Vec<u32>> = points.iter().cloned().collect();
    let n = pts[0].len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << pts.len()) {
        let on: Vec<&Vec<u32>> = (0..pts.len()).filter(|k| mask >> k & 1 == 1).map(|k| &pts[k]).collect();
        let s0 = to_q(on[0]);
        let eqs = on[1..].iter().map(|p| Row { c: sub(&to_q(p), &s0), r: qi(0) }).collect();
        let ineqs = (0..pts.len())
            .filter(|k| mask >> k & 1 == 0)
            .map(|k| Row { c: sub(&to_q(&pts[k]), &s0), r: qi(1) })
            .collect();
        if feasible(n, eqs, ineqs) {
            out.insert(on.into_iter().cloned().collect());
        }
    }
    out
}

/// A mixed-sign `a` with `a·p = 0` on `on` and `a·q > 0` on the rest.
fn oracle_bad(on: &BTreeSet<Vec<u32>>, all: &BTreeSet<Vec<u32>>) -> bool {
    let n = all.iter().next().unwrap().len();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let eqs = on.iter().map(|p| Row { c: to_q(p), r: qi(0) }).collect();
            let mut ineqs: Vec<Row> = all
                .iter()
                .filter(|p| !on.contains(*p))
                .map(|p| Row { c: to_q(p), r: qi(1) })
                .collect();
            let mut ei = vec![qi(0); n];
            ei[i] = qi(-1);
            ineqs.push(Row { c: ei, r: qi(1) });
            let mut ej = vec![qi(0); n];
            ej[j] = qi(1);
            ineqs.push(Row { c: ej, r: qi(1) });
            if feasible(n, eqs, ineqs) {
                return true;
            }
        }
    }
    false
}

/// Face lattices of `Γ₀(f)` and `conv(supp f ∖ 0)`, and the (strictly) bad
/// flags, against the oracles. Returns the number of faces compared.
pub fn check_lattices(f: &MixedPolynomial) -> Check<usize> {
    let mut with_origin = newton::support(f).unwrap();
    with_origin.insert(vec![0; f.n_vars()]);
    let gamma = newton::newton_polyhedron(f).unwrap();
    ensure(gamma.point_sets() == oracle_faces(&with_origin), || format!("Γ₀ of {f}"))?;
    let mut compared = gamma.faces.len();

    let mut hull_pts = newton::support(f).unwrap();
    hull_pts.remove(&vec![0; f.n_vars()]);
    if hull_pts.is_empty() {
        return Ok(compared);
    }
    let hull = newton::support_hull(f).unwrap();
    ensure(hull.point_sets() == oracle_faces(&hull_pts), || format!("hull of {f}"))?;
    for face in &hull.faces {
        let bad = oracle_bad(&face.lattice_points, &hull_pts);
        ensure(face.flags.bad == bad, || format!("bad flag of {} in {f}", face.label()))?;
        // 0 ∈ aff(Δ) iff no `a` has a·p = 1 on all of Δ
        let eqs = face.lattice_points.iter().map(|p| Row { c: to_q(p), r: qi(1) }).collect();
        let origin_in_span = !feasible(f.n_vars(), eqs, vec![]);
        ensure(face.flags.strictly_bad == (bad && origin_in_span), || {
            format!("strictly bad flag of {} in {f}", face.label())
        })?;
    }
    compared += hull.faces.len();
    Ok(compared)
}

pub fn face_lattices(random_cases: usize, seed: u64) -> Check<usize> {
    let mut faces = 0;
    for (_, f) in bundled() {
        faces += check_lattices(&f)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_cases {
        faces += check_lattices(&random_support_poly(&mut rng))?;
    }
    Ok(faces)
}

fn w_at(a: &[Complex64], b: &[Complex64], t: f64) -> Vec<Complex64> {
    let e = Complex64::from_polar(1.0, t);
    a.iter().zip(b).map(|(x, y)| e * x + e.conj() * y).collect()
}

fn dist2(w: &[Complex64], z: &[Complex64], l: f64) -> f64 {
    w.iter().zip(z).map(|(wi, zi)| (l * zi - wi).norm_sqr()).sum()
}

/// The closed-form `λ` is no worse than any of 10⁴ grid values around it,
/// and the fitted residual no worse than a 10⁴-point `θ` grid, both up to
/// `1e-9`. Returns the number of points checked.
pub fn lambda_optimality() -> Check<usize> {
    let mut checked = 0;
    for (k, (name, f)) in bundled().into_iter().enumerate() {
        for s in 0..5 {
            let z = point(f.n_vars(), 1000 * k as u64 + s);
            let g = f.wirtinger_gradients(&z).unwrap();
            let a: Vec<Complex64> = g.d_z.iter().map(|v| v.conj()).collect();
            let b = g.d_zbar.clone();
            let fit = atinfinity::milnor_residual(&f, &z).unwrap();
            let w = w_at(&a, &b, fit.theta);
            let best = dist2(&w, &z, fit.lambda);
            let span = 1.0 + 2.0 * fit.lambda.abs();
            let grid_min = (0..10_000)
                .map(|i| fit.lambda - span + 2.0 * span * i as f64 / 9_999.0)
                .map(|l| dist2(&w, &z, l))
                .fold(f64::INFINITY, f64::min);
            ensure(best <= grid_min + 1e-9, || format!("{name}: λ gives {best:e} > grid {grid_min:e}"))?;

            let zz: f64 = z.iter().map(|v| v.norm_sqr()).sum();
            let theta_min = (0..10_000)
                .map(|i| std::f64::consts::PI * i as f64 / 10_000.0)
                .map(|t| {
                    let w = w_at(&a, &b, t);
                    let l = (0..z.len()).map(|i| (w[i] * z[i].conj()).re).sum::<f64>() / zz;
                    dist2(&w, &z, l)
                })
                .fold(f64::INFINITY, f64::min)
                / f.gradient_scale(&z).powi(2);
            ensure(fit.residual <= theta_min + 1e-9, || {
                format!("{name}: residual {:e} > θ grid {theta_min:e}", fit.residual)
            })?;
            checked += 1;
        }
    }
    Ok(checked)
}

/// Every accepted `M(φ)` solution lies in `M(f)` and off `V(f)`. Returns
/// the number of solutions checked.
pub fn phi_solutions_in_milnor_set() -> Check<usize> {
    let opts = EstimatorOptions::default();
    let mut seen = 0;
    for (name, f) in bundled() {
        let set = estimate_asymptotic_values(&f, ValueKind::SPhi, &opts).unwrap();
        for s in &set.solutions {
            ensure(eval(&f, &s.point).norm() > 0.0, || format!("{name}: solution on V(f)"))?;
            let r = atinfinity::milnor_residual(&f, &s.point).unwrap().residual;
            ensure(r <= 10.0 * opts.tol, || format!("{name}: Milnor residual {r:e}"))?;
            seen += 1;
        }
    }
    ensure(seen > 0, || "no accepted solutions to check".into())?;
    Ok(seen)
}

/// Ten flow paths out to ‖z‖ = 40: monotone, with argument drift ≤ 1e-6.
/// Returns the largest drift.
pub fn flow_paths() -> Check<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut traced, mut worst) = (0, 0f64);
    for name in ["fermat_cubic", "polar_quartic", "semitame", "diagonal_segment"] {
        let f = catalog::load(name).unwrap();
        let mut k = 0;
        while k < 3 && traced < 10 {
            let z: Vec<Complex64> = (0..2)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            if eval(&f, &z).norm() < 0.1 {
                continue;
            }
            let p = atinfinity::trace_flow(&f, &z, &FlowOptions::to_radius(40.0)).map_err(|e| format!("{name}: {e}"))?;
            ensure(p.is_monotone(), || format!("{name}: not monotone"))?;
            ensure(p.max_arg_drift <= 1e-6, || format!("{name}: drift {:e}", p.max_arg_drift))?;
            worst = worst.max(p.max_arg_drift);
            k += 1;
            traced += 1;
        }
    }
    ensure(traced == 10, || format!("only {traced} paths"))?;
    Ok(worst)
}
