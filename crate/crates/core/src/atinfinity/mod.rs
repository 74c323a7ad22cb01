//! Regularity at infinity: Milnor-set residuals for `f` and `φ = f/|f|`,
//! estimators for the asymptotic non-regular values `S(f)` and `S(φ)`, the
//! `(z, v₁, v₂)` frame test and the flow that carries `f⁻¹(S¹_δ)` out to a
//! large sphere.
//!
//! All residuals are scale free so that the same tolerances work for every
//! radius of the schedule. They are divided by the termwise gradient bound
//! `T(z)` of [`MixedPolynomial::gradient_scale`] rather than by `‖df‖ + ‖d̄f‖`,
//! which vanishes at critical points and would turn them into `0/0`.

mod flow;
mod values;

pub use flow::{trace_flow, write_csv, FieldMode, FlowOptions, FlowPath, FlowSample, FlowStop, Termination};
pub use values::{
    estimate_asymptotic_values, strictly_bad_superset, CircleValueClusterSet, Cluster, EstimatorOptions,
    FaceValues, RadiusSummary, Solution, SupersetReport, ValueKind,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixedpoly::MixedPolynomial;
use crate::nondegen::zero_tolerance;

const EPS: f64 = 1e-300;
const THETA_GRID: usize = 256;

pub(crate) fn re_inner(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

// (A, B) = (conj(d_z f), d_zbar f)
pub(crate) fn pair(f: &MixedPolynomial, z: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let g = f.gradients_unchecked(z);
    (g.d_z.iter().map(|v| v.conj()).collect(), g.d_zbar)
}

fn check_point(f: &MixedPolynomial, z: &[Complex64]) -> Result<()> {
    if z.len() != f.n_vars() {
        return Err(Error::MismatchedArity {
            expected: f.n_vars(),
            found: z.len(),
        });
    }
    if z.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Best fit of `λz ≈ e^{iθ}A + e^{−iθ}B` over `θ` and real `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MilnorFit {
    /// `min ‖λz − w(θ)‖² / (T(z)² + ε)`, `T` the termwise gradient bound.
    pub residual: f64,
    pub theta: f64,
    pub lambda: f64,
}

fn milnor_profile(a: &[Complex64], b: &[Complex64], z: &[Complex64], theta: f64) -> (f64, f64) {
    let e = Complex64::from_polar(1.0, theta);
    let w: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| e * x + e.conj() * y).collect();
    let zz = re_inner(z, z);
    let lambda = re_inner(&w, z) / zz;
    let r: f64 = w
        .iter()
        .zip(z)
        .map(|(wi, zi)| (lambda * zi - wi).norm_sqr())
        .sum();
    (r, lambda)
}

/// Distance of `z` from the Milnor set `M(f)`: zero iff some sphere
/// through `z` is tangent to the fibre structure of `f`. `μ` is normalized to
/// `S¹`; `θ` comes from a 256-point grid refined by golden-section search.
pub fn milnor_residual(f: &MixedPolynomial, z: &[Complex64]) -> Result<MilnorFit> {
    check_point(f, z)?;
    let (a, b) = pair(f, z);
    let scale = f.gradient_scale(z).powi(2) + EPS;
    let step = std::f64::consts::PI / THETA_GRID as f64;
    // w(θ + π) = −w(θ), so half a turn suffices
    let (mut best_t, mut best_r) = (0.0, f64::INFINITY);
    for k in 0..THETA_GRID {
        let t = k as f64 * step;
        let (r, _) = milnor_profile(&a, &b, z, t);
        if r < best_r {
            best_r = r;
            best_t = t;
        }
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (best_t - step, best_t + step);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (milnor_profile(&a, &b, z, x1).0, milnor_profile(&a, &b, z, x2).0);
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = milnor_profile(&a, &b, z, x1).0;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = milnor_profile(&a, &b, z, x2).0;
        }
    }
    let t = 0.5 * (lo + hi);
    let (r, lambda) = milnor_profile(&a, &b, z, t);
    let (theta, r, lambda) = if r <= best_r {
        (t, r, lambda)
    } else {
        let (r, l) = milnor_profile(&a, &b, z, best_t);
        (best_t, r, l)
    };
    Ok(MilnorFit {
        residual: r / scale,
        theta: theta.rem_euclid(std::f64::consts::TAU),
        lambda,
    })
}

fn off_zero_locus(f: &MixedPolynomial, z: &[Complex64]) -> Result<Complex64> {
    check_point(f, z)?;
    let fz = f.eval_unchecked(z);
    if fz.norm() <= zero_tolerance(f, z) {
        return Err(Error::OnZeroLocus { modulus: fz.norm() });
    }
    Ok(fz)
}

/// `G(z) = i·f̄·d̄f − i·f·conj(df)`; `λz = G` with real `λ` is the
/// `ρ`-non-regularity condition for `φ`.
pub(crate) fn phi_field(fz: Complex64, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let i = Complex64::i();
    a.iter().zip(b).map(|(ai, bi)| i * fz.conj() * bi - i * fz * ai).collect()
}

// (|f|·T(z))² with T the termwise gradient bound
pub(crate) fn phi_scale(f: &MixedPolynomial, fz: Complex64, z: &[Complex64]) -> f64 {
    (fz.norm() * f.gradient_scale(z)).powi(2) + EPS
}

/// `(residual, λ)` for membership of `z` in `M(φ)`.
pub fn phi_milnor_residual(f: &MixedPolynomial, z: &[Complex64]) -> Result<(f64, f64)> {
    let fz = off_zero_locus(f, z)?;
    let (a, b) = pair(f, z);
    let g = phi_field(fz, &a, &b);
    let lambda = re_inner(&g, z) / re_inner(z, z);
    let r: f64 = g.iter().zip(z).map(|(gi, zi)| (gi - lambda * zi).norm_sqr()).sum();
    Ok((r / phi_scale(f, fz, z), lambda))
}

/// `‖f̄·d̄f − f·conj(df)‖²`, normalized; zero iff `z ∈ Sing φ`.
pub fn sing_phi_residual(f: &MixedPolynomial, z: &[Complex64]) -> Result<f64> {
    let fz = off_zero_locus(f, z)?;
    let (a, b) = pair(f, z);
    let r: f64 = a
        .iter()
        .zip(&b)
        .map(|(ai, bi)| (fz.conj() * bi - fz * ai).norm_sqr())
        .sum();
    Ok(r / phi_scale(f, fz, z))
}

/// `v₁`: normal of `log|f|`; `v₂`: normal of `arg f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameVectors {
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub v1: Vec<Complex64>,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub v2: Vec<Complex64>,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub at: Vec<Complex64>,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex")]
    pub f_value: Complex64,
}

pub fn frame_vectors(f: &MixedPolynomial, z: &[Complex64]) -> Result<FrameVectors> {
    let fz = off_zero_locus(f, z)?;
    Ok(frame_from(fz, z, &pair(f, z)))
}

pub(crate) fn frame_from(fz: Complex64, z: &[Complex64], (a, b): &(Vec<Complex64>, Vec<Complex64>)) -> FrameVectors {
    let p: Vec<Complex64> = a.iter().map(|ai| ai / fz.conj()).collect();
    let q: Vec<Complex64> = b.iter().map(|bi| bi / fz).collect();
    FrameVectors {
        v1: p.iter().zip(&q).map(|(x, y)| x + y).collect(),
        v2: p.iter().zip(&q).map(|(x, y)| Complex64::i() * (x - y)).collect(),
        at: z.to_vec(),
        f_value: fz,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FrameClass {
    Independent,
    DependentWith { a: f64, b: f64 },
    OnSingPhi,
}

fn real_columns(cols: &[&[Complex64]]) -> DMatrix<f64> {
    let n = cols[0].len();
    DMatrix::from_fn(2 * n, cols.len(), |r, c| {
        let v = cols[c][r / 2];
        if r % 2 == 0 {
            v.re
        } else {
            v.im
        }
    })
}

// columns scaled to unit length; a zero column makes the set dependent
fn dependent(cols: &[&[Complex64]], tol: f64) -> bool {
    if cols.iter().any(|c| norm(c) == 0.0) {
        return true;
    }
    let scaled: Vec<Vec<Complex64>> = cols.iter().map(|c| c.iter().map(|v| v / norm(c)).collect()).collect();
    let refs: Vec<&[Complex64]> = scaled.iter().map(Vec::as_slice).collect();
    let sv = real_columns(&refs).singular_values();
    let max = sv.max();
    sv.min() <= tol * max
}

/// Real-linear position of `z`, `v₁`, `v₂` in `ℝ²ⁿ`.
pub fn frame_classification(f: &MixedPolynomial, z: &[Complex64], tol: f64) -> Result<FrameClass> {
    let fr = frame_vectors(f, z)?;
    if dependent(&[&fr.v1, &fr.v2], tol) {
        return Ok(FrameClass::OnSingPhi);
    }
    if !dependent(&[z, &fr.v1, &fr.v2], tol) {
        return Ok(FrameClass::Independent);
    }
    let m = real_columns(&[&fr.v1, &fr.v2]);
    let rhs = real_columns(&[z]);
    let sol = m
        .svd(true, true)
        .solve(&rhs, 1e-300)
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(FrameClass::DependentWith {
        a: sol[(0, 0)],
        b: sol[(1, 0)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nondegen::singularity_residual;
    use crate::testing::{c, f_ex, f_rad, fermat};

    #[test]
    fn milnor_residual_examples() {
        let m = milnor_residual(&f_rad(), &[c(0.3, -0.2), c(1.5, 0.7)]).unwrap();
        assert!(m.residual <= 1e-12);
        let m = milnor_residual(&fermat(), &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(m.residual <= 1e-12);
        assert!((m.lambda.abs() - 3.0).abs() < 1e-9);
        let m = milnor_residual(&fermat(), &[c(1.0, 0.0), c(0.0, 0.37)]).unwrap();
        assert!(m.residual > 1e-3);
        assert_eq!(milnor_residual(&fermat(), &[c(0.0, 0.0); 2]), Err(Error::ZeroVector));
    }

    #[test]
    fn phi_residual_examples() {
        let z = [c(0.4, 1.0), c(-2.0, 0.5)];
        assert!(sing_phi_residual(&f_rad(), &z).unwrap() <= 1e-14);
        assert!(phi_milnor_residual(&f_rad(), &z).unwrap().0 <= 1e-14);

        let (r, _) = phi_milnor_residual(&fermat(), &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(r > 0.1);
        assert!(matches!(
            sing_phi_residual(&fermat(), &[c(1.0, 0.0), c(-1.0, 0.0)]),
            Err(Error::OnZeroLocus { .. })
        ));

        // points of Sing f off V(f) for the radially homogeneous example
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for z in [[c(0.0, 0.0), c(1.3, -0.4)], [c(2.0 * s, 2.0 * s), c(-2.0 * s, -2.0 * s)]] {
            assert!(singularity_residual(&f_ex(), &z).unwrap().0 <= 1e-12);
            assert!(sing_phi_residual(&f_ex(), &z).unwrap() <= 1e-14);
            assert!(phi_milnor_residual(&f_ex(), &z).unwrap().0 <= 1e-14);
        }
    }

    #[test]
    fn frames() {
        match frame_classification(&fermat(), &[c(2.0, 0.0), c(2.0, 0.0)], 1e-9).unwrap() {
            FrameClass::DependentWith { a, .. } => assert!(a > 0.0),
            other => panic!("{other:?}"),
        }
        let fr = frame_vectors(&fermat(), &[c(2.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!((fr.v1[0] - c(0.75, 0.0)).norm() < 1e-15);
        assert!((fr.v2[0] - c(0.0, 0.75)).norm() < 1e-15);
        assert_eq!(
            frame_classification(&f_rad(), &[c(1.0, 0.0), c(1.0, 0.0)], 1e-9).unwrap(),
            FrameClass::OnSingPhi
        );
        assert_eq!(
            frame_classification(&fermat(), &[c(1.0, 0.3), c(0.2, -1.1)], 1e-9).unwrap(),
            FrameClass::Independent
        );
    }
}
