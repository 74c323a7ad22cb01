//! Radial and polar weighted homogeneity.
//!
//! `f` is radially weighted homogeneous of type `(q; m_r)` when
//! `Σ q_j (ν_j + μ_j) = m_r` for every term, and polar weighted homogeneous
//! of type `(p; m_p)` when `Σ p_j (ν_j − μ_j) = m_p`. Both are decided from
//! the rational nullspace of the term system in the unknowns `(w, m)`.

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, primitive_integer, q, Q};
use crate::mixedpoly::MixedPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomogeneityKind {
    Radial,
    Polar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomogeneityType {
    pub kind: HomogeneityKind,
    pub weights: Vec<i64>,
    pub degree: i64,
    /// False when the solution space has more than one direction with
    /// positive degree; `weights` is then one deterministic choice.
    pub unique: bool,
}

pub fn radial_type(f: &MixedPolynomial) -> Result<Option<HomogeneityType>> {
    detect(f, HomogeneityKind::Radial)
}

pub fn polar_type(f: &MixedPolynomial) -> Result<Option<HomogeneityType>> {
    detect(f, HomogeneityKind::Polar)
}

fn detect(f: &MixedPolynomial, kind: HomogeneityKind) -> Result<Option<HomogeneityType>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.n_vars();
    let rows: Vec<Vec<Q>> = f
        .terms()
        .iter()
        .map(|t| {
            let mut row: Vec<Q> = (0..n)
                .map(|j| match kind {
                    HomogeneityKind::Radial => q(t.nu[j] as i64 + t.mu[j] as i64),
                    HomogeneityKind::Polar => q(t.nu[j] as i64 - t.mu[j] as i64),
                })
                .collect();
            row.push(q(-1));
            row
        })
        .collect();
    let basis = nullspace(&rows, n + 1);

    let mut candidates: Vec<(Vec<i64>, i64)> = Vec::new();
    for v in &basis {
        if v[n].is_zero() {
            continue;
        }
        let mut v = v.clone();
        if v[n].is_negative() {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
        let weights = primitive_integer(&v[..n]);
        let Some(weights) = weights.iter().map(|w| w.to_i64()).collect::<Option<Vec<i64>>>() else {
            continue;
        };
        // degree recomputed from any term
        let t = &f.terms()[0];
        let degree: i64 = (0..n)
            .map(|j| {
                weights[j]
                    * match kind {
                        HomogeneityKind::Radial => t.nu[j] as i64 + t.mu[j] as i64,
                        HomogeneityKind::Polar => t.nu[j] as i64 - t.mu[j] as i64,
                    }
            })
            .sum();
        if degree > 0 {
            candidates.push((weights, degree));
        }
    }
    let positive_dirs = basis.iter().filter(|v| !v[n].is_zero()).count();
    let unique = basis.len() == 1;
    candidates.sort();
    Ok(candidates.into_iter().next().map(|(weights, degree)| HomogeneityType {
        kind,
        weights,
        degree,
        unique: unique && positive_dirs == 1,
    }))
}

/// Applies the weighted action to `z`: `t∘z` for radial types (`scale` is
/// the real `t > 0`), `λ∘z` for polar types (`scale` is the unit `λ`).
pub fn act(ty: &HomogeneityType, scale: Complex64, z: &[Complex64]) -> Vec<Complex64> {
    z.iter()
        .zip(&ty.weights)
        .map(|(zi, &w)| match ty.kind {
            HomogeneityKind::Radial => zi * scale.re.powi(w as i32),
            HomogeneityKind::Polar => zi * scale.powi(w as i32),
        })
        .collect()
}

/// Maximum of `|f(action z) − factor·f(z)| / (1 + |f(z)|)` over random
/// unit-scale points and random `t ∈ [½, 2]` or `λ ∈ S¹`.
pub fn verify_scaling(f: &MixedPolynomial, ty: &HomogeneityType, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.n_vars();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let z: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let (scale, factor) = match ty.kind {
            HomogeneityKind::Radial => {
                let t: f64 = rng.gen_range(0.5..2.0);
                (Complex64::new(t, 0.0), Complex64::new(t.powi(ty.degree as i32), 0.0))
            }
            HomogeneityKind::Polar => {
                let lam = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                (lam, lam.powi(ty.degree as i32))
            }
        };
        let fz = f.eval_unchecked(&z);
        let moved = f.eval_unchecked(&act(ty, scale, &z));
        worst = worst.max((moved - factor * fz).norm() / (1.0 + fz.norm()));
    }
    worst
}

/// `Σ q_i z_i ∂f/∂z_i + Σ q_i z̄_i ∂f/∂z̄_i − m_r f` at `z`.
pub fn euler_residual(f: &MixedPolynomial, ty: &HomogeneityType, z: &[Complex64]) -> Result<Complex64> {
    let g = f.wirtinger_gradients(z)?;
    let fz = f.eval_unchecked(z);
    let mut acc = -fz * ty.degree as f64;
    for i in 0..f.n_vars() {
        let w = ty.weights[i] as f64;
        acc += w * (z[i] * g.d_z[i] + z[i].conj() * g.d_zbar[i]);
    }
    Ok(acc)
}
