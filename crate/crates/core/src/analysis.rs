//! The full pipeline: parse → Newton data → homogeneity → non-degeneracy →
//! estimates at infinity → hypothesis ledger → fibration verdict.
//!
//! The report never states that `f` *is* non-degenerate or that a
//! fibration *exists* without qualification: every clause carries a status
//! `exact`, `heuristic` or `refuted`. The theorems themselves are not
//! re-proved; the verdict only records which hypotheses hold and how the
//! numerical estimates compare with the conclusions.

use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::atinfinity::{
    self, CircleValueClusterSet, EstimatorOptions, FlowOptions, FlowPath, SupersetReport, Termination, ValueKind,
};
use crate::error::{Error, Result};
use crate::homogeneity::{self, HomogeneityType};
use crate::mixedpoly::MixedPolynomial;
use crate::newton::{self, FaceLattice, LatticePoint};
use crate::nondegen::{self, Aggregate, Mode, NonDegeneracyVerdict, Scope, SearchOptions};
use crate::optimize::derive_seed;

pub const SCHEMA: u32 = 1;

/// Run parameters. Read from `key = value` lines; later assignments win,
/// so command-line overrides are applied with [`Config::set`] after the
/// file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub box_log_radius: f64,
    pub coordinate_sweep: bool,
    pub radii: Vec<f64>,
    pub starts_per_radius: usize,
    pub tol_cluster: f64,
    pub divergence: f64,
    pub spread_floor: f64,
    pub superset_trials: usize,
    /// Used by the `nondegen` subcommand; `analyze` always runs every
    /// mode and scope.
    pub mode: Option<Mode>,
    pub scope: Option<Scope>,
    pub flow_paths: usize,
    pub flow_radius: f64,
    pub flow_delta: f64,
    pub singular_samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        let s = SearchOptions::default();
        let e = EstimatorOptions::default();
        Self {
            seed: 0,
            trials: s.trials,
            tol: s.tol,
            box_log_radius: s.box_log_radius,
            coordinate_sweep: true,
            radii: e.radii,
            starts_per_radius: e.starts_per_radius,
            tol_cluster: e.tol_cluster,
            divergence: e.divergence,
            spread_floor: e.spread_floor,
            superset_trials: 64,
            mode: None,
            scope: None,
            flow_paths: 0,
            flow_radius: 100.0,
            flow_delta: 1.0,
            singular_samples: 32,
        }
    }
}

fn bad(key: &str, value: &str) -> Error {
    Error::Config(format!("invalid value `{value}` for `{key}`"))
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| bad(key, value))
}

impl Config {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "seed" => self.seed = num(key, v)?,
            "trials" => self.trials = num(key, v)?,
            "tol" => self.tol = num(key, v)?,
            "box_log_radius" => self.box_log_radius = num(key, v)?,
            "coordinate_sweep" => self.coordinate_sweep = num(key, v)?,
            "radii" => {
                self.radii = v
                    .split(',')
                    .map(|r| num::<f64>(key, r.trim()))
                    .collect::<Result<Vec<_>>>()?;
                if self.radii.is_empty() || self.radii.iter().any(|r| !(*r > 0.0)) {
                    return Err(bad(key, v));
                }
            }
            "starts_per_radius" => self.starts_per_radius = num(key, v)?,
            "tol_cluster" => self.tol_cluster = num(key, v)?,
            "divergence" => self.divergence = num(key, v)?,
            "spread_floor" => self.spread_floor = num(key, v)?,
            "superset_trials" => self.superset_trials = num(key, v)?,
            "mode" => {
                self.mode = match v {
                    "plain" | "nondegenerate" => Some(Mode::Nondegenerate),
                    "strong" | "strongly_nondegenerate" => Some(Mode::StronglyNondegenerate),
                    "both" => None,
                    _ => return Err(bad(key, v)),
                }
            }
            "scope" => {
                self.scope = match v {
                    "gamma_plus" => Some(Scope::GammaPlus),
                    "all_support_hull_faces" | "all" => Some(Scope::AllSupportHullFaces),
                    "both" => None,
                    _ => return Err(bad(key, v)),
                }
            }
            "flow_paths" => self.flow_paths = num(key, v)?,
            "flow_radius" => self.flow_radius = num(key, v)?,
            "flow_delta" => self.flow_delta = num(key, v)?,
            "singular_samples" => self.singular_samples = num(key, v)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", k + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(&std::fs::read_to_string(path)?)?;
        Ok(c)
    }

    pub fn search(&self) -> SearchOptions {
        SearchOptions {
            trials: self.trials,
            tol: self.tol,
            box_log_radius: self.box_log_radius,
            seed: self.seed,
        }
    }

    pub fn estimator(&self) -> EstimatorOptions {
        EstimatorOptions {
            radii: self.radii.clone(),
            starts_per_radius: self.starts_per_radius,
            tol: self.tol,
            tol_cluster: self.tol_cluster,
            divergence: self.divergence,
            spread_floor: self.spread_floor,
            seed: self.seed,
            ..EstimatorOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Decided by exact computation.
    Exact,
    /// Supported by numerical search; not proved.
    Heuristic,
    /// Shown false (exactly, or by a checked witness).
    Refuted,
}

/// Hypotheses of the fibration theorems, as far as they were evaluated.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct HypothesisLedger {
    pub strongly_nondegenerate: Option<Status>,
    /// Same, over every face of `conv(supp f ∖ {0})` instead of `Γ⁺(f)`.
    pub strongly_nondegenerate_all_faces: Option<Status>,
    pub nondegenerate: Option<Status>,
    pub convenient: Option<Status>,
    pub constant_term_zero: Option<Status>,
    pub effective: Option<Status>,
    /// `0 ∉ S(f)`, from the `S(f)` estimate.
    pub zero_not_in_s_f: Option<Status>,
    /// Number of `S(φ)` limit values estimated.
    pub s_phi_estimate: Option<usize>,
    /// `φ` is locally constant in argument (e.g. real-valued `f`).
    pub phi_vacuous: Option<bool>,
    /// Every sampled point is a mixed singular point.
    pub singular_everywhere: Option<bool>,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub superset: Vec<Complex64>,
}

fn holds(s: Option<Status>) -> bool {
    matches!(s, Some(Status::Exact | Status::Heuristic))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clause {
    pub id: char,
    pub status: Status,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FibrationVerdict {
    pub summary: String,
    pub clauses: Vec<Clause>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_of_scope: Option<String>,
    /// How the strong non-degeneracy hypothesis reads when every face of
    /// `conv(supp f ∖ {0})` is required.
    pub all_faces_reading: String,
}

fn require<T: Copy>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or(Error::IncompleteLedger(name))
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Exact => "holds (exact)",
        Status::Heuristic => "holds (heuristic)",
        Status::Refuted => "refuted",
    }
}

fn fmt_values(v: &[Complex64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{:.6}{:+.6}i", c.re, c.im)).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Decision tree over the ledger.
///
/// (a) strong non-degeneracy refuted: no fibration claim.
/// (b) strong non-degeneracy holds: `f/|f| : S_R ∖ f⁻¹(D_δ) → S¹` is a
///     locally trivial fibration equivalent to `f : f⁻¹(S¹_δ) → S¹_δ`.
/// (c) additionally convenient: the Milnor fibration `S_R ∖ K → S¹` exists.
/// (d) `f(0) = 0`, `f` effective in every variable and `0 ∉ S(f)`: `S(φ)`
///     lies in the strictly-bad-face superset.
pub fn fibration_verdict(ledger: &HypothesisLedger) -> Result<FibrationVerdict> {
    let strong = require(ledger.strongly_nondegenerate, "strongly_nondegenerate")?;
    let strong_all = require(ledger.strongly_nondegenerate_all_faces, "strongly_nondegenerate_all_faces")?;
    let convenient = require(ledger.convenient, "convenient")?;
    let c0 = require(ledger.constant_term_zero, "constant_term_zero")?;
    let effective = require(ledger.effective, "effective")?;
    let zero_sf = require(ledger.zero_not_in_s_f, "zero_not_in_s_f")?;
    let s_phi = require(ledger.s_phi_estimate, "s_phi_estimate")?;
    let vacuous = require(ledger.phi_vacuous, "phi_vacuous")?;
    let everywhere = require(ledger.singular_everywhere, "singular_everywhere")?;

    let mut clauses = Vec::new();
    if strong == Status::Refuted {
        let mut statement = "Newton strong non-degeneracy at infinity fails; no fibration claim is made. \
                             See the S(phi) estimate."
            .to_string();
        if s_phi > 0 {
            statement.push_str(&format!(
                " The S(phi) estimate has {s_phi} value(s): as for semitame mixed polynomials, \
                 S(f) ⊆ {{0}} does not by itself give the Milnor fibration at infinity."
            ));
        }
        clauses.push(Clause {
            id: 'a',
            status: Status::Refuted,
            statement,
        });
    } else {
        clauses.push(Clause {
            id: 'b',
            status: Status::Heuristic,
            statement: "f/|f| : S_R \\ f^-1(D_delta) -> S^1 is a locally trivial fibration for large R and delta, \
                        equivalent to the global fibration f : f^-1(S^1_delta) -> S^1_delta."
                .into(),
        });
        if convenient == Status::Exact {
            clauses.push(Clause {
                id: 'c',
                status: Status::Heuristic,
                statement: "f is convenient: the Milnor fibration at infinity f/|f| : S_R \\ K -> S^1, \
                            K = S_R ∩ f^-1(0), exists for large R and is equivalent to the global fibration."
                    .into(),
            });
        }
        if c0 == Status::Exact && effective == Status::Exact && holds(Some(zero_sf)) {
            clauses.push(Clause {
                id: 'd',
                status: Status::Heuristic,
                statement: format!(
                    "f(0) = 0, f depends on every variable and 0 is not in S(f): S(phi) is contained in \
                     the strictly-bad-face values {}.",
                    fmt_values(&ledger.superset)
                ),
            });
        }
    }

    let out_of_scope = if vacuous || everywhere {
        Some(
            match (vacuous, everywhere) {
                (true, true) => "f is real-valued up to a constant phase and singular at every sampled point",
                (true, false) => "arg f is locally constant off V(f): the f/|f| machinery is vacuous",
                _ => "every sampled point is a mixed singular point",
            }
            .to_string(),
        )
    } else {
        None
    };

    let summary = if let Some(reason) = &out_of_scope {
        format!("out of theorem scope: {reason}")
    } else if strong == Status::Refuted {
        "fibration theorem hypotheses REFUTED (strong non-degeneracy fails); no fibration claim".into()
    } else if clauses.iter().any(|c| c.id == 'c') {
        "Milnor fibration at infinity exists (heuristic: strong non-degeneracy found no witness; convenience exact)"
            .into()
    } else {
        "fibration f/|f| on S_R \\ f^-1(D_delta) exists (heuristic: strong non-degeneracy found no witness)".into()
    };

    Ok(FibrationVerdict {
        summary,
        clauses,
        out_of_scope,
        all_faces_reading: format!(
            "strong non-degeneracy over all faces of conv(supp f \\ 0): {}",
            status_word(strong_all)
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputEcho {
    pub name: String,
    pub canonical: String,
    pub n_vars: usize,
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogeneityReport {
    pub radial: Option<HomogeneityType>,
    pub polar: Option<HomogeneityType>,
    /// Largest Euler-identity residual over sampled points, radial type only.
    pub euler_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowSummary {
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub start: Vec<Complex64>,
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub end: Vec<Complex64>,
    pub terminated_at: Termination,
    pub samples: usize,
    pub monotone: bool,
    pub max_arg_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowFailure {
    #[serde(serialize_with = "crate::serde_helpers::ser_complex_vec")]
    pub start: Vec<Complex64>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub input: InputEcho,
    pub config: Config,
    pub support: Vec<LatticePoint>,
    pub convenient: bool,
    pub newton_polyhedron: FaceLattice,
    pub support_hull: FaceLattice,
    pub homogeneity: HomogeneityReport,
    pub nondegeneracy: Vec<NonDegeneracyVerdict>,
    pub s_f: CircleValueClusterSet,
    pub s_phi: CircleValueClusterSet,
    pub strictly_bad_superset: SupersetReport,
    pub ledger: HypothesisLedger,
    pub verdict: FibrationVerdict,
    pub flows: Vec<FlowSummary>,
    pub flow_failures: Vec<FlowFailure>,
    #[serde(skip)]
    pub flow_paths: Vec<FlowPath>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn verdict_for(&self, mode: Mode, scope: Scope) -> Option<&NonDegeneracyVerdict> {
        self.nondegeneracy.iter().find(|v| v.mode == mode && v.scope == scope)
    }
}

fn unit_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Complex64> {
    let x: Vec<f64> = (0..2 * n).map(|_| StandardNormal.sample(rng)).collect();
    let s = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.chunks(2).map(|p| Complex64::new(p[0], p[1]) * (radius / s)).collect()
}

fn singular_everywhere(f: &MixedPolynomial, cfg: &Config) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, "singular_everywhere", 0));
    for _ in 0..cfg.singular_samples {
        let z = unit_point(&mut rng, f.n_vars(), 1.0);
        if nondegen::normalized_singularity_residual(f, &z)?.0 > cfg.tol {
            return Ok(false);
        }
    }
    Ok(cfg.singular_samples > 0)
}

fn nondegen_status(v: &NonDegeneracyVerdict) -> Status {
    if v.is_refuted() {
        Status::Refuted
    } else {
        Status::Heuristic
    }
}

fn exact(b: bool) -> Status {
    if b {
        Status::Exact
    } else {
        Status::Refuted
    }
}

/// Flow paths from random starts on the unit sphere scaled until
/// `|f| ≥ flow_delta`, traced out to `flow_radius`.
pub fn trace_sample_flows(f: &MixedPolynomial, cfg: &Config) -> (Vec<FlowPath>, Vec<FlowFailure>) {
    let mut paths = Vec::new();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, "flow", 0));
    let mut attempts = 0;
    while paths.len() + failures.len() < cfg.flow_paths && attempts < 100 * cfg.flow_paths.max(1) {
        attempts += 1;
        let mut z = unit_point(&mut rng, f.n_vars(), 1.0);
        let mut ok = false;
        for _ in 0..60 {
            if f.eval_unchecked(&z).norm() > cfg.flow_delta {
                ok = true;
                break;
            }
            z.iter_mut().for_each(|v| *v *= 1.25);
        }
        if !ok || atinfinity::norm(&z) >= cfg.flow_radius {
            continue;
        }
        let opts = FlowOptions {
            delta: cfg.flow_delta,
            ..FlowOptions::to_radius(cfg.flow_radius)
        };
        match atinfinity::trace_flow(f, &z, &opts) {
            Ok(p) => paths.push(p),
            Err(e) => failures.push(FlowFailure {
                start: z,
                error: e.to_string(),
            }),
        }
    }
    (paths, failures)
}

/// Runs the whole pipeline on `f`. Deterministic given `cfg.seed`.
pub fn analyze(f: &MixedPolynomial, name: &str, cfg: &Config) -> Result<AnalysisReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::EmptySupport);
    }
    let support: Vec<LatticePoint> = newton::support(f)?.into_iter().collect();
    let convenient = newton::is_convenient(f)?;
    let newton_polyhedron = newton::newton_polyhedron(f)?;
    let support_hull = newton::support_hull(f)?;

    let radial = homogeneity::radial_type(f)?;
    let polar = homogeneity::polar_type(f)?;
    let euler_residual = match &radial {
        Some(ty) => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, "euler", 0));
            let mut worst: f64 = 0.0;
            for _ in 0..16 {
                let z = unit_point(&mut rng, f.n_vars(), 1.0);
                let r = homogeneity::euler_residual(f, ty, &z)?.norm() / (1.0 + f.term_scale(&z));
                worst = worst.max(r);
            }
            Some(worst)
        }
        None => None,
    };

    let sweep = cfg.coordinate_sweep && f.n_vars() <= nondegen::MAX_SWEEP_VARS;
    let search = cfg.search();
    let mut nondegeneracy = Vec::new();
    for mode in [Mode::StronglyNondegenerate, Mode::Nondegenerate] {
        for scope in [Scope::GammaPlus, Scope::AllSupportHullFaces] {
            nondegeneracy.push(nondegen::classify(f, mode, scope, sweep, &search)?);
        }
    }
    let find = |m: Mode, s: Scope| nondegeneracy.iter().find(|v| v.mode == m && v.scope == s).unwrap();

    let est = cfg.estimator();
    let s_f = atinfinity::estimate_asymptotic_values(f, ValueKind::SF, &est)?;
    let s_phi = atinfinity::estimate_asymptotic_values(f, ValueKind::SPhi, &est)?;
    let superset = atinfinity::strictly_bad_superset(f, cfg.superset_trials, cfg.tol, cfg.seed)?;

    let zero_in_sf = s_f.clusters.iter().any(|c| c.center.norm() <= 10.0 * cfg.tol_cluster);
    let ledger = HypothesisLedger {
        strongly_nondegenerate: Some(nondegen_status(find(Mode::StronglyNondegenerate, Scope::GammaPlus))),
        strongly_nondegenerate_all_faces: Some(nondegen_status(find(
            Mode::StronglyNondegenerate,
            Scope::AllSupportHullFaces,
        ))),
        nondegenerate: Some(nondegen_status(find(Mode::Nondegenerate, Scope::GammaPlus))),
        convenient: Some(exact(convenient)),
        constant_term_zero: Some(exact(superset.constant_term_zero)),
        effective: Some(exact(superset.effective)),
        zero_not_in_s_f: Some(if zero_in_sf { Status::Refuted } else { Status::Heuristic }),
        s_phi_estimate: Some(s_phi.clusters.len()),
        phi_vacuous: Some(s_phi.degenerate.is_some()),
        singular_everywhere: Some(singular_everywhere(f, cfg)?),
        superset: superset.values.clone(),
    };
    let verdict = fibration_verdict(&ledger)?;

    let (flow_paths, flow_failures) = if cfg.flow_paths > 0 {
        trace_sample_flows(f, cfg)
    } else {
        (Vec::new(), Vec::new())
    };
    let flows = flow_paths
        .iter()
        .map(|p| FlowSummary {
            start: p.start.clone(),
            end: p.end().z.clone(),
            terminated_at: p.terminated_at,
            samples: p.samples.len(),
            monotone: p.is_monotone(),
            max_arg_drift: p.max_arg_drift,
        })
        .collect();

    Ok(AnalysisReport {
        schema: SCHEMA,
        input: InputEcho {
            name: name.to_string(),
            canonical: f.to_string(),
            n_vars: f.n_vars(),
            terms: f.terms().len(),
        },
        config: cfg.clone(),
        support,
        convenient,
        newton_polyhedron,
        support_hull,
        homogeneity: HomogeneityReport {
            radial,
            polar,
            euler_residual,
        },
        nondegeneracy,
        s_f,
        s_phi,
        strictly_bad_superset: superset,
        ledger,
        verdict,
        flows,
        flow_failures,
        flow_paths,
    })
}

/// Human-readable summary of a report.
pub fn render_text(r: &AnalysisReport) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let _ = writeln!(s, "input      {} ({} vars, {} terms)", r.input.canonical, r.input.n_vars, r.input.terms);
    let _ = writeln!(s, "support    {:?}", r.support);
    let _ = writeln!(s, "convenient {}", r.convenient);
    let gp: Vec<String> = r
        .newton_polyhedron
        .faces
        .iter()
        .filter(|f| f.flags.at_infinity)
        .map(|f| f.label())
        .collect();
    let _ = writeln!(s, "Γ⁺ faces   {}", gp.join(" "));
    let sb: Vec<String> = r
        .support_hull
        .faces
        .iter()
        .filter(|f| f.flags.bad)
        .map(|f| format!("{}{}", f.label(), if f.flags.strictly_bad { "*" } else { "" }))
        .collect();
    let _ = writeln!(s, "bad faces  {} (* strictly bad)", if sb.is_empty() { "none".into() } else { sb.join(" ") });
    let ty = |t: &Option<HomogeneityType>| match t {
        Some(t) => format!("{:?}; {}", t.weights, t.degree),
        None => "none".into(),
    };
    let _ = writeln!(s, "radial     {}", ty(&r.homogeneity.radial));
    let _ = writeln!(s, "polar      {}", ty(&r.homogeneity.polar));
    for v in &r.nondegeneracy {
        let agg = match &v.aggregate {
            Aggregate::Refuted { face, witness, .. } => {
                format!("refuted on {face} (residual {:.2e})", witness.residual)
            }
            Aggregate::HeuristicallyNondegenerate => "no witness found (heuristic)".into(),
        };
        let _ = writeln!(s, "{:?}/{:?}: {agg}", v.mode, v.scope);
    }
    for set in [&r.s_f, &r.s_phi] {
        let vals: Vec<String> = set
            .clusters
            .iter()
            .map(|c| format!("{:.6}{:+.6}i", c.center.re, c.center.im))
            .collect();
        let _ = writeln!(
            s,
            "{:?}: {} limit value(s) {}; solutions at every radius: {}{}",
            set.kind,
            vals.len(),
            if vals.is_empty() { String::new() } else { format!("{{{}}}", vals.join(", ")) },
            set.unbounded_evidence,
            set.degenerate.as_ref().map(|d| format!(" [{d}]")).unwrap_or_default()
        );
    }
    let _ = writeln!(s, "verdict    {}", r.verdict.summary);
    for c in &r.verdict.clauses {
        let _ = writeln!(s, "  ({}) [{:?}] {}", c.id, c.status, c.statement);
    }
    let _ = writeln!(s, "  {}", r.verdict.all_faces_reading);
    let _ = writeln!(s, "seed {} · tol {:e} · cluster tol {:e}", r.config.seed, r.config.tol, r.config.tol_cluster);
    s
}
