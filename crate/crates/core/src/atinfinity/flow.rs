//! Integral curves of a field `w` with `Re⟨w, v₂⟩ = 0`, `Re⟨w, v₁⟩ > 0`,
//! `Re⟨w, z⟩ > 0`: `arg f` is constant along them while `|f|` and `‖z‖`
//! increase.

use num_complex::Complex64;
use serde::Serialize;

use super::{frame_from, norm, pair, re_inner};
use crate::error::{Error, Result};
use crate::mixedpoly::MixedPolynomial;
use crate::nondegen::zero_tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum FlowStop {
    TargetRadius(f64),
    TargetModulus(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowOptions {
    pub stop: FlowStop,
    /// Lower bound `δ` on `|f(z₀)|`.
    pub delta: f64,
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
    /// Allowed `|Δ arg f|` per unit growth of `‖z‖`.
    pub arg_tol: f64,
}

impl FlowOptions {
    pub fn to_radius(r: f64) -> Self {
        Self {
            stop: FlowStop::TargetRadius(r),
            delta: 0.0,
            rtol: 1e-11,
            atol: 1e-12,
            initial_step: 1e-2,
            min_step: 1e-12,
            max_steps: 200_000,
            arg_tol: 1e-7,
        }
    }

    pub fn to_modulus(m: f64) -> Self {
        Self {
            stop: FlowStop::TargetModulus(m),
            ..Self::to_radius(0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    RadiusReached,
    ModulusReached,
    StepFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMode {
    /// Sum of the unit projections of `v₁` and `z` onto `v₂^⊥`.
    Frame,
    /// `v₂ ≡ 0` (Sing φ): plain ascent of `log|f|` along `v₁`.
    RadialFallback,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub z: Vec<Complex64>,
    pub abs_f: f64,
    pub arg_f: f64,
    pub norm_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowPath {
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub start: Vec<Complex64>,
    pub samples: Vec<FlowSample>,
    pub terminated_at: Termination,
    pub field_mode: FieldMode,
    /// `max |arg f(z(t)) − arg f(z₀)|` over the samples.
    pub max_arg_drift: f64,
    pub rejected_steps: usize,
}

impl FlowPath {
    pub fn end(&self) -> &FlowSample {
        self.samples.last().expect("a path has at least its start")
    }

    /// `|f|` and `‖z‖` strictly increase from sample to sample.
    pub fn is_monotone(&self) -> bool {
        self.samples
            .windows(2)
            .all(|w| w[1].abs_f > w[0].abs_f && w[1].norm_z > w[0].norm_z)
    }
}

fn failure(z: &[Complex64], reason: impl Into<String>) -> Error {
    Error::FieldConstructionFailed {
        point: z.iter().map(|v| (v.re, v.im)).collect(),
        reason: reason.into(),
    }
}

fn project_out(x: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let vv = re_inner(v, v);
    if vv == 0.0 {
        return x.to_vec();
    }
    let c = re_inner(x, v) / vv;
    x.iter().zip(v).map(|(a, b)| a - c * b).collect()
}

fn unit(x: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = norm(&x);
    (n > 0.0 && n.is_finite()).then(|| x.into_iter().map(|v| v / n).collect())
}

// the field, rescaled so that d‖z‖/dt = 1
fn field(f: &MixedPolynomial, z: &[Complex64]) -> Result<(Vec<Complex64>, FieldMode)> {
    let fz = f.eval_unchecked(z);
    if fz.norm() <= zero_tolerance(f, z) {
        return Err(failure(z, "reached the zero locus of f"));
    }
    let fr = frame_from(fz, z, &pair(f, z));
    let (w, mode) = if norm(&fr.v2) <= 1e-12 * norm(&fr.v1) {
        (fr.v1.clone(), FieldMode::RadialFallback)
    } else {
        let a = unit(project_out(&fr.v1, &fr.v2)).ok_or_else(|| failure(z, "v1 is parallel to v2"))?;
        let b = unit(project_out(z, &fr.v2)).ok_or_else(|| failure(z, "z is parallel to v2"))?;
        let w: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        (w, FieldMode::Frame)
    };
    let nw = norm(&w);
    let s1 = re_inner(&w, &fr.v1);
    let s2 = re_inner(&w, z);
    let eps = 1e-12 * nw;
    if !(s1 > eps * norm(&fr.v1)) || !(s2 > eps * norm(z)) {
        return Err(failure(
            z,
            format!("positivity fails: Re<w,v1> = {s1:e}, Re<w,z> = {s2:e} (z = a v1 + b v2 with a < 0)"),
        ));
    }
    let k = norm(z) / s2;
    Ok((w.into_iter().map(|v| v * k).collect(), mode))
}

fn sample(f: &MixedPolynomial, t: f64, z: Vec<Complex64>) -> FlowSample {
    let fz = f.eval_unchecked(&z);
    FlowSample {
        t,
        abs_f: fz.norm(),
        arg_f: fz.arg(),
        norm_z: norm(&z),
        z,
    }
}

fn axpy(z: &[Complex64], h: f64, terms: &[(f64, &[Complex64])]) -> Vec<Complex64> {
    z.iter()
        .enumerate()
        .map(|(i, zi)| zi + h * terms.iter().map(|(c, k)| c * k[i]).sum::<Complex64>())
        .collect()
}

// Dormand–Prince 5(4)
const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn dp_step(f: &MixedPolynomial, z: &[Complex64], k1: &[Complex64], h: f64) -> Result<(Vec<Complex64>, Vec<Complex64>, f64)> {
    let mut ks: Vec<Vec<Complex64>> = vec![k1.to_vec()];
    for row in A {
        let terms: Vec<(f64, &[Complex64])> = row.iter().zip(&ks).map(|(c, k)| (*c, k.as_slice())).collect();
        let zi = axpy(z, h, &terms);
        ks.push(field(f, &zi)?.0);
    }
    // the last stage is evaluated at the 5th-order solution (FSAL)
    let terms: Vec<(f64, &[Complex64])> = A[5].iter().zip(&ks).map(|(c, k)| (*c, k.as_slice())).collect();
    let znew = axpy(z, h, &terms);
    let err_terms: Vec<(f64, &[Complex64])> = E.iter().zip(&ks).map(|(c, k)| (*c, k.as_slice())).collect();
    let err = axpy(&vec![Complex64::new(0.0, 0.0); z.len()], h, &err_terms);
    Ok((znew, ks.pop().unwrap(), norm(&err)))
}

/// Follows the field from `z0` until the stop condition, with adaptive
/// Dormand–Prince steps. A step is rejected when its error estimate is too
/// large, when `|f|` or `‖z‖` fails to increase, or when `arg f` drifts by
/// more than `arg_tol` per unit of `‖z‖`.
pub fn trace_flow(f: &MixedPolynomial, z0: &[Complex64], opts: &FlowOptions) -> Result<FlowPath> {
    if z0.len() != f.n_vars() {
        return Err(Error::MismatchedArity {
            expected: f.n_vars(),
            found: z0.len(),
        });
    }
    if norm(z0) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let f0 = f.eval_unchecked(z0);
    if f0.norm() <= zero_tolerance(f, z0).max(opts.delta) {
        return Err(Error::OnZeroLocus { modulus: f0.norm() });
    }
    let r0 = norm(z0);
    let (k0, mode) = field(f, z0)?;
    let mut path = FlowPath {
        start: z0.to_vec(),
        samples: vec![sample(f, 0.0, z0.to_vec())],
        terminated_at: Termination::StepFailure,
        field_mode: mode,
        max_arg_drift: 0.0,
        rejected_steps: 0,
    };
    let reached = |s: &FlowSample| match opts.stop {
        FlowStop::TargetRadius(r) => s.norm_z >= r * (1.0 - 1e-10),
        FlowStop::TargetModulus(m) => s.abs_f >= m * (1.0 - 1e-10),
    };
    let done = |p: &mut FlowPath| {
        p.terminated_at = match opts.stop {
            FlowStop::TargetRadius(_) => Termination::RadiusReached,
            FlowStop::TargetModulus(_) => Termination::ModulusReached,
        };
    };
    if reached(&path.samples[0]) {
        done(&mut path);
        return Ok(path);
    }

    let mut z = z0.to_vec();
    let mut k1 = k0;
    let mut t = 0.0;
    let mut h = opts.initial_step * r0.max(1.0);
    for _ in 0..opts.max_steps {
        if let FlowStop::TargetRadius(r) = opts.stop {
            // d‖z‖/dt = 1 along the rescaled field
            h = h.min(r - norm(&z));
        }
        let prev = path.samples.last().unwrap().clone();
        let attempt = dp_step(f, &z, &k1, h);
        let (znew, knew, err) = match attempt {
            Ok(v) => v,
            Err(_) => {
                path.rejected_steps += 1;
                h *= 0.25;
                if h < opts.min_step {
                    return Ok(path);
                }
                continue;
            }
        };
        let scale = opts.atol + opts.rtol * norm(&z).max(norm(&znew));
        let ratio = err / scale;
        let s = sample(f, t + h, znew.clone());
        let darg = (Complex64::from_polar(1.0, s.arg_f) / Complex64::from_polar(1.0, prev.arg_f)).arg().abs();
        let drift_ok = darg <= opts.arg_tol * (s.norm_z - prev.norm_z).max(0.0) + 1e-15;
        let monotone = s.abs_f > prev.abs_f && s.norm_z > prev.norm_z;
        let overshoot = matches!(opts.stop, FlowStop::TargetModulus(m) if s.abs_f > m * (1.0 + 1e-9));
        if ratio <= 1.0 && drift_ok && monotone && !overshoot {
            t += h;
            z = znew;
            k1 = knew;
            let drift = (Complex64::from_polar(1.0, s.arg_f) / f0).arg().abs();
            path.max_arg_drift = path.max_arg_drift.max(drift);
            path.samples.push(s);
            if reached(path.samples.last().unwrap()) {
                done(&mut path);
                return Ok(path);
            }
            let grow = if ratio > 0.0 { 0.9 * ratio.powf(-0.2) } else { 5.0 };
            h *= grow.clamp(0.2, 5.0);
        } else {
            path.rejected_steps += 1;
            h *= if overshoot && ratio <= 1.0 {
                // secant guess for the crossing of |f| = m
                let FlowStop::TargetModulus(m) = opts.stop else { unreachable!() };
                ((m - prev.abs_f) / (s.abs_f - prev.abs_f)).clamp(0.05, 0.99)
            } else if ratio > 1.0 {
                (0.9 * ratio.powf(-0.25)).clamp(0.1, 0.9)
            } else {
                0.5
            };
        }
        if h < opts.min_step {
            return Ok(path);
        }
    }
    Ok(path)
}

/// Writes the path as CSV: `t, re_z1, im_z1, …, abs_f, arg_f, norm_z`.
pub fn write_csv(path: &FlowPath, out: &mut impl std::io::Write) -> std::io::Result<()> {
    let n = path.start.len();
    let mut header = vec!["t".to_string()];
    for i in 1..=n {
        header.push(format!("re_z{i}"));
        header.push(format!("im_z{i}"));
    }
    header.extend(["abs_f", "arg_f", "norm_z"].map(String::from));
    writeln!(out, "{}", header.join(","))?;
    for s in &path.samples {
        let mut row = vec![format!("{:.17e}", s.t)];
        for v in &s.z {
            row.push(format!("{:.17e}", v.re));
            row.push(format!("{:.17e}", v.im));
        }
        row.push(format!("{:.17e}", s.abs_f));
        row.push(format!("{:.17e}", s.arg_f));
        row.push(format!("{:.17e}", s.norm_z));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
