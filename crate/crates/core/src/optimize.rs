//! Levenberg–Marquardt on a residual vector with a central-difference
//! Jacobian, plus the seeding helpers shared by the multistart searches.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Stop once `½‖r‖²` drops below this.
    pub cost_floor: f64,
    /// Relative finite-difference step.
    pub fd_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            cost_floor: 1e-30,
            fd_step: 1e-7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    /// `½‖r(x)‖²` at the returned point.
    pub cost: f64,
    pub iterations: usize,
}

fn cost_of(r: &[f64]) -> f64 {
    0.5 * r.iter().map(|v| v * v).sum::<f64>()
}

/// Minimizes `½‖residual(x)‖²` from `x0`. `project` is applied to every
/// trial point (box clamping, sphere renormalization). Non-finite residuals
/// are treated as rejected steps.
pub fn levenberg_marquardt<R, P>(residual: R, x0: Vec<f64>, project: P, opts: &LmOptions) -> LmOutcome
where
    R: Fn(&[f64]) -> Vec<f64>,
    P: Fn(&mut [f64]),
{
    let mut x = x0;
    project(&mut x);
    let mut r = residual(&x);
    let mut cost = cost_of(&r);
    let n = x.len();
    let mut mu = 1e-3;
    let mut iterations = 0;
    if !cost.is_finite() {
        return LmOutcome { x, cost, iterations };
    }

    while iterations < opts.max_iter && cost > opts.cost_floor {
        iterations += 1;
        let m = r.len();
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let h = opts.fd_step * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let rp = residual(&xp);
            let rm = residual(&xm);
            for i in 0..m {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rv = DVector::from_column_slice(&r);
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &rv;
        if grad.amax() < 1e-300 {
            break;
        }

        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for k in 0..n {
                a[(k, k)] += mu * (jtj[(k, k)].max(1e-12));
            }
            let Some(step) = a.cholesky().map(|ch| ch.solve(&(-&grad))) else {
                mu *= 10.0;
                continue;
            };
            let mut xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            project(&mut xn);
            let rn = residual(&xn);
            let cn = cost_of(&rn);
            if cn.is_finite() && cn < cost {
                let rel = (cost - cn) / cost.max(1e-300);
                x = xn;
                r = rn;
                cost = cn;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                if rel < 1e-14 {
                    return LmOutcome { x, cost, iterations };
                }
                break;
            }
            mu *= 4.0;
            if mu > 1e16 {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    LmOutcome { x, cost, iterations }
}

/// Stable 64-bit FNV-1a, used to derive per-task seeds from labels.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Mixes a master seed with a stream label and an index.
pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    let mut h = fnv1a(label.as_bytes()) ^ master.rotate_left(17);
    h ^= index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    // splitmix64 finalizer
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}
