//! Asymptotic non-regular values of `f` and `φ`, estimated on a schedule of
//! growing spheres.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::{milnor_residual, norm, pair, phi_field, phi_milnor_residual, re_inner, sing_phi_residual};
use crate::error::{Error, Result};
use crate::mixedpoly::MixedPolynomial;
use crate::newton;
use crate::nondegen::zero_tolerance;
use crate::optimize::{derive_seed, levenberg_marquardt, LmOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ValueKind {
    #[serde(rename = "S_phi")]
    SPhi,
    #[serde(rename = "S_f")]
    SF,
}

impl ValueKind {
    fn label(self) -> &'static str {
        match self {
            ValueKind::SPhi => "S_phi",
            ValueKind::SF => "S_f",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorOptions {
    pub radii: Vec<f64>,
    pub starts_per_radius: usize,
    /// Acceptance threshold on the normalized residual.
    pub tol: f64,
    /// Angular (for `S_phi`) or relative (for `S_f`) cluster tolerance.
    pub tol_cluster: f64,
    /// `|f|` above which an `S_f` value counts as escaping.
    pub divergence: f64,
    /// Slack allowed when checking that spreads do not grow with `R`.
    pub spread_floor: f64,
    /// Minimum of `|f| / Σ|c||z^ν z̄^μ|` for an `S_phi` solution.
    pub zero_exclusion: f64,
    pub seed: u64,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            radii: vec![1e1, 1e2, 1e3, 1e4, 1e5],
            starts_per_radius: 48,
            tol: 1e-8,
            tol_cluster: 1e-3,
            divergence: 1e6,
            spread_floor: 1e-6,
            zero_exclusion: 1e-6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub radius: f64,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub point: Vec<Complex64>,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex")]
    pub value: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    #[serde(serialize_with = "crate::serde_helpers::ser_complex")]
    pub center: Complex64,
    /// `(R, spread)` for every radius at which the cluster was seen.
    pub spread_per_radius: Vec<(f64, f64)>,
    pub member_count: usize,
}

impl Cluster {
    /// Angle of the center in degrees, in `(−180, 180]`.
    pub fn angle_degrees(&self) -> f64 {
        self.center.arg().to_degrees()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusSummary {
    pub radius: f64,
    pub starts: usize,
    pub accepted: usize,
    /// `S_f` only: accepted solutions whose value exceeded the divergence
    /// threshold.
    pub escaping: usize,
    pub best_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleValueClusterSet {
    pub kind: ValueKind,
    pub radii_schedule: Vec<f64>,
    /// Limit values: clusters whose center settled over the last two radii.
    pub clusters: Vec<Cluster>,
    /// Value tracks that did not settle.
    pub transient: Vec<Cluster>,
    pub per_radius: Vec<RadiusSummary>,
    /// Accepted solutions exist at every radius of the schedule.
    pub unbounded_evidence: bool,
    /// Set when the `φ` machinery is vacuous (`G ≡ 0`, e.g. real-valued `f`).
    pub degenerate: Option<String>,
    pub options: EstimatorOptions,
    #[serde(skip)]
    pub solutions: Vec<Solution>,
}

fn random_sphere(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-8 {
            return x.into_iter().map(|v| v / n).collect();
        }
    }
}

fn to_point(x: &[f64], radius: f64) -> Vec<Complex64> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.chunks(2).map(|p| Complex64::new(p[0], p[1]) * (radius / n)).collect()
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

// S_phi residual vector: (G − λz) / (|f|(‖A‖ + ‖B‖))
fn phi_vector(f: &MixedPolynomial, z: &[Complex64]) -> Vec<f64> {
    let fz = f.eval_unchecked(z);
    let (a, b) = pair(f, z);
    let g = phi_field(fz, &a, &b);
    let lambda = re_inner(&g, z) / re_inner(z, z);
    let s = fz.norm() * f.gradient_scale(z) + 1e-300;
    g.iter()
        .zip(z)
        .flat_map(|(gi, zi)| {
            let d = (gi - lambda * zi) / s;
            [d.re, d.im]
        })
        .collect()
}

// S_f residual vector over (z, θ): (λz − e^{iθ}A − e^{−iθ}B) / (‖A‖ + ‖B‖)
fn milnor_vector(f: &MixedPolynomial, z: &[Complex64], theta: f64) -> Vec<f64> {
    let (a, b) = pair(f, z);
    let e = Complex64::from_polar(1.0, theta);
    let w: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| e * x + e.conj() * y).collect();
    let lambda = re_inner(&w, z) / re_inner(z, z);
    let s = f.gradient_scale(z) + 1e-300;
    w.iter()
        .zip(z)
        .flat_map(|(wi, zi)| {
            let d = (lambda * zi - wi) / s;
            [d.re, d.im]
        })
        .collect()
}

fn phi_is_vacuous(f: &MixedPolynomial, radius: f64, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "vacuity", 0));
    let mut seen = 0;
    for _ in 0..64 {
        let z = to_point(&random_sphere(&mut rng, 2 * f.n_vars()), radius);
        let fz = f.eval_unchecked(&z);
        if fz.norm() <= zero_tolerance(f, &z) {
            continue;
        }
        seen += 1;
        let (a, b) = pair(f, &z);
        let g = phi_field(fz, &a, &b);
        if norm(&g) > 1e-12 * fz.norm() * f.gradient_scale(&z) {
            return false;
        }
    }
    seen > 0
}

struct Candidate {
    residual: f64,
    point: Vec<Complex64>,
    value: Complex64,
    ok: bool,
}

fn solve_on_sphere(f: &MixedPolynomial, kind: ValueKind, radius: f64, x0: Vec<f64>, opts: &EstimatorOptions) -> Candidate {
    let dim = 2 * f.n_vars();
    let lm = LmOptions::default();
    let (z, residual) = match kind {
        ValueKind::SPhi => {
            let out = levenberg_marquardt(|x: &[f64]| phi_vector(f, &to_point(x, radius)), x0, normalize, &lm);
            let z = to_point(&out.x, radius);
            let r = phi_milnor_residual(f, &z).map(|(r, _)| r).unwrap_or(f64::INFINITY);
            (z, r)
        }
        ValueKind::SF => {
            let mut x0 = x0;
            x0.push(0.0);
            let proj = |x: &mut [f64]| normalize(&mut x[..dim]);
            let out = levenberg_marquardt(
                |x: &[f64]| milnor_vector(f, &to_point(&x[..dim], radius), x[dim]),
                x0,
                proj,
                &lm,
            );
            let z = to_point(&out.x[..dim], radius);
            let r = milnor_residual(f, &z).map(|m| m.residual).unwrap_or(f64::INFINITY);
            (z, r)
        }
    };
    let fz = f.eval_unchecked(&z);
    let (value, mut ok) = match kind {
        ValueKind::SPhi => {
            let ratio = fz.norm() / (f.term_scale(&z) + 1e-300);
            (fz / fz.norm(), ratio >= opts.zero_exclusion && fz.norm() > 0.0)
        }
        ValueKind::SF => (fz, true),
    };
    ok &= residual <= opts.tol && residual.is_finite();
    Candidate {
        residual,
        point: z,
        value,
        ok,
    }
}

fn distance(kind: ValueKind, a: Complex64, b: Complex64) -> f64 {
    match kind {
        ValueKind::SPhi => (a / b).arg().abs(),
        ValueKind::SF => (a - b).norm() / (1.0 + a.norm().max(b.norm())),
    }
}

fn center_of(kind: ValueKind, values: &[Complex64]) -> Complex64 {
    let sum: Complex64 = values.iter().sum();
    match kind {
        ValueKind::SPhi => sum / sum.norm(),
        ValueKind::SF => sum / values.len() as f64,
    }
}

fn sort_key(kind: ValueKind, v: Complex64) -> (f64, f64) {
    match kind {
        ValueKind::SPhi => (v.arg(), 0.0),
        ValueKind::SF => (v.re, v.im),
    }
}

// (center, spread, count), greedy in sorted order
fn cluster_values(kind: ValueKind, mut values: Vec<Complex64>, radius: f64) -> Vec<(Complex64, f64, usize)> {
    values.sort_by(|a, b| sort_key(kind, *a).partial_cmp(&sort_key(kind, *b)).unwrap());
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for v in values {
        match groups.iter_mut().find(|g| distance(kind, g[0], v) <= radius) {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let c = center_of(kind, &g);
            let spread = g.iter().map(|v| distance(kind, *v, c)).fold(0.0, f64::max);
            (c, spread, g.len())
        })
        .collect()
}

struct Track {
    // per radius index
    points: BTreeMap<usize, (Complex64, f64, usize)>,
}

const LINK_DISTANCE: f64 = 0.1;

fn link_tracks(kind: ValueKind, per_radius: &[Vec<(Complex64, f64, usize)>]) -> Vec<Track> {
    let mut tracks: Vec<Track> = Vec::new();
    for (k, clusters) in per_radius.iter().enumerate() {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (ci, (c, _, _)) in clusters.iter().enumerate() {
            for (ti, t) in tracks.iter().enumerate() {
                if k > 0 {
                    if let Some((tc, _, _)) = t.points.get(&(k - 1)) {
                        let d = distance(kind, *c, *tc);
                        if d <= LINK_DISTANCE {
                            pairs.push((d, ci, ti));
                        }
                    }
                }
            }
        }
        pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut used_c = vec![false; clusters.len()];
        let mut used_t = vec![false; tracks.len()];
        for (_, ci, ti) in pairs {
            if !used_c[ci] && !used_t[ti] {
                used_c[ci] = true;
                used_t[ti] = true;
                tracks[ti].points.insert(k, clusters[ci]);
            }
        }
        for (ci, c) in clusters.iter().enumerate() {
            if !used_c[ci] {
                tracks.push(Track {
                    points: [(k, *c)].into_iter().collect(),
                });
            }
        }
    }
    tracks
}

fn settled(kind: ValueKind, t: &Track, last: usize, opts: &EstimatorOptions) -> bool {
    if last == 0 {
        return false;
    }
    let (Some(a), Some(b)) = (t.points.get(&(last - 1)), t.points.get(&last)) else {
        return false;
    };
    if distance(kind, a.0, b.0) >= opts.tol_cluster {
        return false;
    }
    if kind == ValueKind::SF && (b.0.norm() - a.0.norm()).abs() >= 1e-2 * a.0.norm().max(b.0.norm()).max(1e-300) {
        // a vanishing limit has no meaningful relative change; the absolute
        // test above already covers it
        if b.0.norm() > opts.tol_cluster {
            return false;
        }
    }
    let spreads: Vec<f64> = t.points.range(last.saturating_sub(2)..=last).map(|(_, p)| p.1).collect();
    spreads.windows(2).all(|w| w[1] <= w[0] + opts.spread_floor)
}

/// Multistart estimate of `S(φ)` (`kind = SPhi`) or `S(f)` (`kind = SF`).
///
/// On each sphere `‖z‖ = R` of the schedule the relevant residual is
/// minimized from `starts_per_radius` random starts (`z = R·u`, `u`
/// renormalized after every step). Values at accepted solutions are
/// clustered per radius and the clusters are linked across radii; a
/// cluster whose center moves less than `tol_cluster` between the last two
/// radii is reported as a limit value.
pub fn estimate_asymptotic_values(
    f: &MixedPolynomial,
    kind: ValueKind,
    opts: &EstimatorOptions,
) -> Result<CircleValueClusterSet> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::EmptySupport);
    }
    if opts.radii.is_empty() || opts.radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Config("radii must be positive and nonempty".into()));
    }
    let empty = |degenerate: Option<String>| CircleValueClusterSet {
        kind,
        radii_schedule: opts.radii.clone(),
        clusters: Vec::new(),
        transient: Vec::new(),
        per_radius: Vec::new(),
        unbounded_evidence: false,
        degenerate,
        options: opts.clone(),
        solutions: Vec::new(),
    };
    if kind == ValueKind::SPhi && phi_is_vacuous(f, opts.radii[0], opts.seed) {
        return Ok(empty(Some(
            "i·f̄·d̄f − i·f·conj(df) vanishes at every sample: Sing φ is everything off V(f)".into(),
        )));
    }

    let dim = 2 * f.n_vars();
    let jobs: Vec<(usize, usize)> = (0..opts.radii.len())
        .flat_map(|k| (0..opts.starts_per_radius).map(move |s| (k, s)))
        .collect();
    let label = kind.label();
    let results: Vec<(usize, Candidate)> = jobs
        .par_iter()
        .map(|&(k, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, label, (k * 1_000_003 + s) as u64));
            let x0 = random_sphere(&mut rng, dim);
            (k, solve_on_sphere(f, kind, opts.radii[k], x0, opts))
        })
        .collect();

    let mut per_radius = Vec::new();
    let mut clusters_per_radius = Vec::new();
    let mut solutions = Vec::new();
    for (k, &radius) in opts.radii.iter().enumerate() {
        let mine: Vec<&Candidate> = results.iter().filter(|(kk, _)| *kk == k).map(|(_, c)| c).collect();
        let best = mine.iter().map(|c| c.residual).fold(f64::INFINITY, f64::min);
        let accepted: Vec<&&Candidate> = mine.iter().filter(|c| c.ok).collect();
        let mut escaping = 0;
        let mut values = Vec::new();
        for c in &accepted {
            solutions.push(Solution {
                radius,
                point: c.point.clone(),
                value: c.value,
                residual: c.residual,
            });
            if kind == ValueKind::SF && c.value.norm() > opts.divergence {
                escaping += 1;
            } else {
                values.push(c.value);
            }
        }
        per_radius.push(RadiusSummary {
            radius,
            starts: mine.len(),
            accepted: accepted.len(),
            escaping,
            best_residual: best,
        });
        clusters_per_radius.push(cluster_values(kind, values, 10.0 * opts.tol_cluster));
    }

    let last = opts.radii.len() - 1;
    let tracks = link_tracks(kind, &clusters_per_radius);
    let mut clusters = Vec::new();
    let mut transient = Vec::new();
    for t in &tracks {
        let (_, &(center, _, _)) = t.points.iter().next_back().unwrap();
        let c = Cluster {
            center,
            spread_per_radius: t.points.iter().map(|(k, p)| (opts.radii[*k], p.1)).collect(),
            member_count: t.points.values().map(|p| p.2).sum(),
        };
        if settled(kind, t, last, opts) {
            clusters.push(c);
        } else {
            transient.push(c);
        }
    }
    let by_key = |a: &Cluster, b: &Cluster| sort_key(kind, a.center).partial_cmp(&sort_key(kind, b.center)).unwrap();
    clusters.sort_by(by_key);
    transient.sort_by(by_key);
    let unbounded_evidence = per_radius.iter().all(|r| r.accepted > 0);
    Ok(CircleValueClusterSet {
        kind,
        radii_schedule: opts.radii.clone(),
        clusters,
        transient,
        per_radius,
        unbounded_evidence,
        degenerate: None,
        options: opts.clone(),
        solutions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceValues {
    pub face: String,
    pub restriction: String,
    pub trials: usize,
    pub accepted: usize,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupersetReport {
    /// `f(0) = 0`, decided exactly.
    pub constant_term_zero: bool,
    /// Every variable occurs in `f`, decided exactly.
    pub effective: bool,
    pub faces: Vec<FaceValues>,
    /// Clustered union of `φ_Δ(Sing φ_Δ ∩ ℂ*ⁿ)` over strictly bad faces.
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub values: Vec<Complex64>,
    pub tol: f64,
    pub seed: u64,
}

/// Samples `φ_Δ(Sing φ_Δ ∩ ℂ*ⁿ)` for every strictly bad face `Δ`; the union
/// contains `S(φ)` when `f` is strongly non-degenerate, depends on all
/// variables, `f(0) = 0` and `0 ∉ S(f)`. The two exact hypotheses are
/// recorded here; the heuristic ones are left to the caller.
pub fn strictly_bad_superset(f: &MixedPolynomial, trials: usize, tol: f64, seed: u64) -> Result<SupersetReport> {
    let faces = newton::strictly_bad_faces(f)?;
    let mut out = Vec::new();
    for face in &faces {
        let g = f.restrict_to_face(&face.lattice_points);
        let label = face.label();
        let found = sample_sing_phi(&g, &label, trials, tol, seed)?;
        out.push(FaceValues {
            face: label,
            restriction: g.to_string(),
            trials,
            accepted: found.len(),
            values: found,
        });
    }
    let all: Vec<Complex64> = out.iter().flat_map(|fv| fv.values.iter().copied()).collect();
    let values = cluster_values(ValueKind::SPhi, all, 1e-2).into_iter().map(|c| c.0).collect();
    Ok(SupersetReport {
        constant_term_zero: f.constant_term().is_zero(),
        effective: f.effective_variables().len() == f.n_vars(),
        faces: out,
        values,
        tol,
        seed,
    })
}

const BOX: f64 = 3.0;

fn sample_sing_phi(g: &MixedPolynomial, label: &str, trials: usize, tol: f64, seed: u64) -> Result<Vec<Complex64>> {
    let n = g.n_vars();
    let vars: Vec<usize> = g.effective_variables().into_iter().collect();
    if vars.is_empty() {
        return Ok(Vec::new());
    }
    let embed = |x: &[f64]| -> Vec<Complex64> {
        let mut z = vec![Complex64::new(1.0, 0.0); n];
        for (k, &v) in vars.iter().enumerate() {
            z[v] = Complex64::from_polar(x[2 * k].exp(), x[2 * k + 1]);
        }
        z
    };
    let residual = |x: &[f64]| -> Vec<f64> {
        let z = embed(x);
        let fz = g.eval_unchecked(&z);
        let (a, b) = pair(g, &z);
        let s = fz.norm() * g.gradient_scale(&z) + 1e-300;
        vars.iter()
            .flat_map(|&v| {
                let d = (fz.conj() * b[v] - fz * a[v]) / s;
                [d.re, d.im]
            })
            .collect()
    };
    let project = |x: &mut [f64]| {
        for k in 0..vars.len() {
            x[2 * k] = x[2 * k].clamp(-BOX, BOX);
        }
    };
    let lm = LmOptions::default();
    let found: Vec<Option<Complex64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, label, t as u64));
            let x0: Vec<f64> = (0..vars.len())
                .flat_map(|_| [rng.gen_range(-BOX..BOX), rng.gen_range(0.0..std::f64::consts::TAU)])
                .collect();
            let out = levenberg_marquardt(&residual, x0, project, &lm);
            let z = embed(&out.x);
            let r = sing_phi_residual(g, &z).ok()?;
            let fz = g.eval_unchecked(&z);
            (r <= tol).then(|| fz / fz.norm())
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::testing::{f_rad, fermat};

    fn quick() -> EstimatorOptions {
        EstimatorOptions {
            radii: vec![1e1, 1e2, 1e3],
            starts_per_radius: 16,
            ..EstimatorOptions::default()
        }
    }

    #[test]
    fn real_valued_input_is_vacuous() {
        let s = estimate_asymptotic_values(&f_rad(), ValueKind::SPhi, &quick()).unwrap();
        assert!(s.degenerate.is_some());
        assert!(s.clusters.is_empty());
    }

    #[test]
    fn fermat_has_no_phi_solutions() {
        let s = estimate_asymptotic_values(&fermat(), ValueKind::SPhi, &quick()).unwrap();
        assert!(s.clusters.is_empty());
        assert!(s.per_radius.iter().all(|r| r.accepted == 0));
        assert!(!s.unbounded_evidence);
    }

    #[test]
    fn diagonal_segment_superset() {
        let f = catalog::load("diagonal_segment").unwrap();
        let rep = strictly_bad_superset(&f, 32, 1e-8, 0).unwrap();
        assert_eq!(rep.faces.len(), 1);
        assert_eq!(rep.values.len(), 1);
        // arg f is critical where d/dw (w + w²) = 0, i.e. w = −1/2, f = −1/4
        assert!((rep.values[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-6);
        assert!(strictly_bad_superset(&fermat(), 8, 1e-8, 0).unwrap().values.is_empty());
    }

    #[test]
    fn clustering_is_greedy_on_the_circle() {
        let v = vec![
            Complex64::from_polar(1.0, 0.5),
            Complex64::from_polar(1.0, 0.5005),
            Complex64::from_polar(1.0, -2.0),
        ];
        let cl = cluster_values(ValueKind::SPhi, v, 1e-2);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[1].2, 2);
        assert!((cl[1].0.arg() - 0.50025).abs() < 1e-9);
    }
}
