//! Mixed singular points and Newton (strong) non-degeneracy.
//!
//! A point `z` is a mixed singularity of `f` iff `conj(df) = λ·d̄f` for some
//! `|λ| = 1`. With `A = conj(df)`, `B = d̄f` the best `λ` is the phase of
//! `⟨A, B⟩ = Σ A_i conj(B_i)`, giving the residual
//! `‖A‖² + ‖B‖² − 2|⟨A, B⟩|`, which vanishes exactly on `Sing f`.
//!
//! Non-degeneracy asks that no face restriction `f_Δ` has such a point on
//! the torus `ℂ*ⁿ` (strong mode), or none on `f_Δ⁻¹(0) ∩ ℂ*ⁿ` (plain mode).
//! A numerical search can exhibit a singular point but cannot prove that
//! none exists, so verdicts are either `refuted` with a checked witness or
//! `heuristically_nondegenerate`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixedpoly::MixedPolynomial;
use crate::newton::{self, Face};
use crate::optimize::{derive_seed, levenberg_marquardt, LmOptions};

/// Largest `n` for which the coordinate-subset sweep is run.
pub const MAX_SWEEP_VARS: usize = 6;

/// `(‖A − λB‖² minimized over |λ| = 1, the minimizing λ)`.
pub fn singularity_residual(f: &MixedPolynomial, z: &[Complex64]) -> Result<(f64, Complex64)> {
    let g = f.wirtinger_gradients(z)?;
    let a: Vec<Complex64> = g.d_z.iter().map(|v| v.conj()).collect();
    Ok(residual_from_pair(&a, &g.d_zbar))
}

pub(crate) fn residual_from_pair(a: &[Complex64], b: &[Complex64]) -> (f64, Complex64) {
    let na: f64 = a.iter().map(|v| v.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|v| v.norm_sqr()).sum();
    let inner: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    let m = inner.norm();
    let lambda = if m > 0.0 { inner / m } else { Complex64::new(1.0, 0.0) };
    ((na + nb - 2.0 * m).max(0.0), lambda)
}

/// Residual divided by `‖A‖² + ‖B‖² + ε`; scale free, in `[0, 2]`.
pub fn normalized_singularity_residual(f: &MixedPolynomial, z: &[Complex64]) -> Result<(f64, Complex64)> {
    let g = f.wirtinger_gradients(z)?;
    let a: Vec<Complex64> = g.d_z.iter().map(|v| v.conj()).collect();
    let (res, lambda) = residual_from_pair(&a, &g.d_zbar);
    let scale: f64 = a.iter().chain(&g.d_zbar).map(|v| v.norm_sqr()).sum();
    Ok((res / (scale + f64::EPSILON), lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    pub trials: usize,
    /// Acceptance threshold on the normalized residual.
    pub tol: f64,
    /// Search box `log|z_i| ∈ [−L, L]`.
    pub box_log_radius: f64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            trials: 64,
            tol: 1e-8,
            box_log_radius: 3.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityWitness {
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub point: Vec<Complex64>,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex")]
    pub lambda: Complex64,
    /// Normalized residual re-evaluated at `point`.
    pub residual: f64,
    pub face: String,
    pub on_zero_locus: bool,
    pub f_modulus: f64,
    pub min_modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub witness: Option<SingularityWitness>,
    pub best_residual: f64,
    pub trials: usize,
}

/// `1e−6·(1 + Σ|c||z^ν z̄^μ|)`.
pub fn zero_tolerance(g: &MixedPolynomial, z: &[Complex64]) -> f64 {
    1e-6 * (1.0 + g.term_scale(z))
}

/// Multistart search for a point of `Sing g ∩ ℂ*ⁿ` (optionally also on
/// `g⁻¹(0)` when `on_zero_locus` is set).
///
/// Only the effective variables of `g` are searched, written as
/// `z_k = exp(s_k + iθ_k)` with `s_k` clamped to `[−L, L]`; the other
/// coordinates are fixed to 1.
pub fn find_singularity(
    g: &MixedPolynomial,
    label: &str,
    on_zero_locus: bool,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = g.n_vars();
    let vars: Vec<usize> = g.effective_variables().into_iter().collect();
    let l = opts.box_log_radius;

    let embed = |x: &[f64]| -> Vec<Complex64> {
        let mut z = vec![Complex64::new(1.0, 0.0); n];
        for (k, &v) in vars.iter().enumerate() {
            z[v] = Complex64::from_polar(x[2 * k].exp(), x[2 * k + 1]);
        }
        z
    };

    if vars.is_empty() {
        // constant: both gradients vanish identically
        let z = embed(&[]);
        let (res, lambda) = normalized_singularity_residual(g, &z)?;
        let fz = g.eval_unchecked(&z).norm();
        let on_zero = fz <= zero_tolerance(g, &z);
        let witness = (!on_zero_locus || on_zero).then(|| SingularityWitness {
            point: z,
            lambda,
            residual: res,
            face: label.to_string(),
            on_zero_locus: on_zero,
            f_modulus: fz,
            min_modulus: 1.0,
        });
        return Ok(SearchOutcome {
            witness,
            best_residual: res,
            trials: 1,
        });
    }

    let residual = |x: &[f64]| -> Vec<f64> {
        let z = embed(x);
        let grad = g.gradients_unchecked(&z);
        let a: Vec<Complex64> = vars.iter().map(|&v| grad.d_z[v].conj()).collect();
        let b: Vec<Complex64> = vars.iter().map(|&v| grad.d_zbar[v]).collect();
        let (_, lambda) = residual_from_pair(&a, &b);
        let scale: f64 = a.iter().chain(&b).map(|v| v.norm_sqr()).sum::<f64>() + f64::EPSILON;
        let s = scale.sqrt();
        let mut out = Vec::with_capacity(2 * vars.len() + 2);
        for (ai, bi) in a.iter().zip(&b) {
            let d = (ai - lambda * bi) / s;
            out.push(d.re);
            out.push(d.im);
        }
        if on_zero_locus {
            let v = g.eval_unchecked(&z) / (g.term_scale(&z) + f64::MIN_POSITIVE);
            out.push(v.re);
            out.push(v.im);
        }
        out
    };
    let project = |x: &mut [f64]| {
        for k in 0..vars.len() {
            x[2 * k] = x[2 * k].clamp(-l, l);
        }
    };

    let lm = LmOptions::default();
    let results: Vec<(f64, Vec<f64>)> = (0..opts.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, label, t as u64));
            let x0: Vec<f64> = (0..vars.len())
                .flat_map(|_| {
                    let s = rng.gen_range(-l..l);
                    let th = rng.gen_range(0.0..std::f64::consts::TAU);
                    [s, th]
                })
                .collect();
            let out = levenberg_marquardt(&residual, x0, project, &lm);
            let z = embed(&out.x);
            let (res, _) = normalized_singularity_residual(g, &z).expect("arity");
            (res, out.x)
        })
        .collect();

    let mut best: Option<(f64, Vec<Complex64>)> = None;
    let mut accepted: Option<SingularityWitness> = None;
    for (res, x) in results {
        let z = embed(&x);
        if best.as_ref().map_or(true, |(b, bz)| less(res, &z, *b, bz)) {
            best = Some((res, z.clone()));
        }
        let min_modulus = z.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        let fz = g.eval_unchecked(&z).norm();
        let on_zero = fz <= zero_tolerance(g, &z);
        let ok = res <= opts.tol && min_modulus >= (-l).exp() * (1.0 - 1e-12) && (!on_zero_locus || on_zero);
        if !ok {
            continue;
        }
        let better = accepted
            .as_ref()
            .map_or(true, |w| less(res, &z, w.residual, &w.point));
        if better {
            let (_, lambda) = normalized_singularity_residual(g, &z)?;
            accepted = Some(SingularityWitness {
                point: z,
                lambda,
                residual: res,
                face: label.to_string(),
                on_zero_locus: on_zero,
                f_modulus: fz,
                min_modulus,
            });
        }
    }
    Ok(SearchOutcome {
        witness: accepted,
        best_residual: best.map_or(f64::INFINITY, |(b, _)| b),
        trials: opts.trials,
    })
}

// residual first, then lexicographic on the point
fn less(r1: f64, z1: &[Complex64], r2: f64, z2: &[Complex64]) -> bool {
    if r1 != r2 {
        return r1 < r2;
    }
    for (a, b) in z1.iter().zip(z2) {
        if a.re != b.re {
            return a.re < b.re;
        }
        if a.im != b.im {
            return a.im < b.im;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Nondegenerate,
    StronglyNondegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Faces of `Γ⁺(f)`.
    GammaPlus,
    /// All faces of `conv(supp f ∖ {0})`.
    AllSupportHullFaces,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FaceStatus {
    Degenerate { witness: SingularityWitness },
    NoWitnessFound { trials: usize, best_residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceRecord {
    /// 1-based coordinate subset `I` of the restriction `f^I`.
    pub coordinates: Vec<usize>,
    pub face: String,
    pub face_dim: usize,
    pub restriction: String,
    #[serde(flatten)]
    pub status: FaceStatus,
    /// Plain mode: a singular point of `f_Δ` off its zero locus.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub informational: Option<SingularityWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Aggregate {
    Refuted { witness: SingularityWitness, face: String, coordinates: Vec<usize> },
    HeuristicallyNondegenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonDegeneracyVerdict {
    pub mode: Mode,
    pub scope: Scope,
    pub aggregate: Aggregate,
    pub faces: Vec<FaceRecord>,
    pub coordinate_subsets_checked: Vec<Vec<usize>>,
    pub search: SearchOptions,
}

impl NonDegeneracyVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self.aggregate, Aggregate::Refuted { .. })
    }
}

/// Runs the witness search over every face in `scope`, for `f` and, when
/// requested, for every coordinate restriction `f^I ≠ 0`.
pub fn classify(
    f: &MixedPolynomial,
    mode: Mode,
    scope: Scope,
    with_coordinate_restrictions: bool,
    opts: &SearchOptions,
) -> Result<NonDegeneracyVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.n_vars();
    if f.is_constant() {
        return Err(Error::EmptySupport);
    }
    if with_coordinate_restrictions && n > MAX_SWEEP_VARS {
        return Err(Error::Config(format!(
            "coordinate sweep limited to n <= {MAX_SWEEP_VARS}"
        )));
    }
    let subsets: Vec<BTreeSet<usize>> = if with_coordinate_restrictions {
        (1u32..(1 << n))
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    } else {
        vec![(0..n).collect()]
    };

    let mut cache: BTreeMap<(String, bool), SearchOutcome> = BTreeMap::new();
    let mut records = Vec::new();
    let mut checked = Vec::new();
    for subset in subsets {
        let fi = f.restrict_to_coordinates(&subset);
        if fi.is_zero() {
            continue;
        }
        let faces: Vec<Face> = match scope {
            Scope::GammaPlus => newton::boundary_at_infinity(&fi)?,
            Scope::AllSupportHullFaces => match newton::support_hull(&fi) {
                Ok(l) => l.faces,
                Err(Error::EmptySupport) => continue,
                Err(e) => return Err(e),
            },
        };
        let coords: Vec<usize> = subset.iter().map(|i| i + 1).collect();
        checked.push(coords.clone());
        for face in faces {
            let g = fi.restrict_to_face(&face.lattice_points);
            let restriction = g.to_string();
            let label = face.label();
            let mut search = |zero: bool| -> Result<SearchOutcome> {
                let key = (restriction.clone(), zero);
                if let Some(hit) = cache.get(&key) {
                    return Ok(hit.clone());
                }
                let out = find_singularity(&g, &label_for(&restriction, zero), zero, opts)?;
                let mut out = out;
                if let Some(w) = out.witness.as_mut() {
                    w.face = label.clone();
                }
                cache.insert(key, out.clone());
                Ok(out)
            };
            let sing = search(false)?;
            let (status, informational) = match mode {
                Mode::StronglyNondegenerate => (status_of(sing), None),
                Mode::Nondegenerate => match sing.witness {
                    Some(ref w) if w.on_zero_locus => (status_of(sing), None),
                    _ => {
                        let info = sing.witness.clone();
                        let joint = search(true)?;
                        (status_of(joint), info)
                    }
                },
            };
            records.push(FaceRecord {
                coordinates: coords.clone(),
                face: label.clone(),
                face_dim: face.dim,
                restriction,
                status,
                informational,
            });
        }
    }

    let aggregate = records
        .iter()
        .find_map(|r| match &r.status {
            FaceStatus::Degenerate { witness } => Some(Aggregate::Refuted {
                witness: witness.clone(),
                face: r.face.clone(),
                coordinates: r.coordinates.clone(),
            }),
            _ => None,
        })
        .unwrap_or(Aggregate::HeuristicallyNondegenerate);

    Ok(NonDegeneracyVerdict {
        mode,
        scope,
        aggregate,
        faces: records,
        coordinate_subsets_checked: checked,
        search: *opts,
    })
}

fn label_for(restriction: &str, zero: bool) -> String {
    format!("{restriction}|{zero}")
}

fn status_of(out: SearchOutcome) -> FaceStatus {
    match out.witness {
        Some(witness) => FaceStatus::Degenerate { witness },
        None => FaceStatus::NoWitnessFound {
            trials: out.trials,
            best_residual: out.best_residual,
        },
    }
}
