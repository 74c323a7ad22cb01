use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use mixfib::analysis::{self, Config};
use mixfib::atinfinity::{self, FlowOptions, ValueKind};
use mixfib::nondegen::{self, Mode, Scope};
use mixfib::{catalog, homogeneity, newton, parser, plots, Error, MixedPolynomial, Result};

#[derive(Parser)]
#[command(name = "mixfib", version, about = "Milnor fibrations at infinity of mixed polynomials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// `.mpoly` file, or `@name` for a bundled example.
    input: String,
    /// Number of variables (can only raise the inferred arity).
    #[arg(long)]
    vars: Option<usize>,
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set seed=3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    SPhi,
    #[value(name = "s-f")]
    SF,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical form of the input.
    Parse(Common),
    /// Support, Newton boundary at infinity and (strictly) bad faces.
    Newton(Common),
    /// Radial and polar weighted homogeneity types.
    Homogeneity(Common),
    /// Witness search for (strong) non-degeneracy on faces.
    Nondegen(Common),
    /// Estimates of the asymptotic values S(f) and S(f/|f|).
    Atinfinity {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "both")]
        kind: Kind,
    },
    /// Traces the fibration flow from a point.
    Flow {
        #[command(flatten)]
        common: Common,
        /// Start point as `re,im;re,im;...`.
        #[arg(long)]
        start: String,
        #[arg(long, conflicts_with = "modulus")]
        radius: Option<f64>,
        #[arg(long)]
        modulus: Option<f64>,
        /// Write the sampled path as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Full pipeline and fibration verdict.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Directory for CSV and SVG output.
        #[arg(long)]
        plots: Option<PathBuf>,
    },
}

fn load(c: &Common) -> Result<(MixedPolynomial, String)> {
    if let Some(name) = c.input.strip_prefix('@') {
        let src = catalog::source(name).ok_or_else(|| Error::Config(format!("no bundled example `{name}`")))?;
        return Ok((parser::parse_polynomial(src, c.vars)?, name.to_string()));
    }
    let p = Path::new(&c.input);
    let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok((parser::read_mpoly(p, c.vars)?, name))
}

fn config(c: &Common) -> Result<Config> {
    let mut cfg = match &c.config {
        Some(p) => Config::from_file(p)?,
        None => Config::default(),
    };
    for kv in &c.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("`--set {kv}`: expected KEY=VALUE")))?;
        cfg.set(k, v)?;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn parse_point(s: &str) -> Result<Vec<Complex64>> {
    s.split(';')
        .map(|p| {
            let (re, im) = p.split_once(',').unwrap_or((p, "0"));
            match (re.trim().parse(), im.trim().parse()) {
                (Ok(a), Ok(b)) => Ok(Complex64::new(a, b)),
                _ => Err(Error::Config(format!("bad coordinate `{p}`"))),
            }
        })
        .collect()
}

fn emit<T: Serialize>(c: &Common, value: &T, text: impl FnOnce() -> String) {
    if c.json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

#[derive(Serialize)]
struct ParseOut {
    canonical: String,
    n_vars: usize,
    terms: Vec<TermOut>,
}

#[derive(Serialize)]
struct TermOut {
    coeff: String,
    nu: Vec<u32>,
    mu: Vec<u32>,
}

#[derive(Serialize)]
struct NewtonOut {
    support: Vec<Vec<u32>>,
    convenient: bool,
    newton_polyhedron: newton::FaceLattice,
    support_hull: newton::FaceLattice,
}

#[derive(Serialize)]
struct HomogeneityOut {
    radial: Option<homogeneity::HomogeneityType>,
    polar: Option<homogeneity::HomogeneityType>,
}

fn labels<'a>(faces: impl Iterator<Item = &'a newton::Face>) -> String {
    let v: Vec<String> = faces.map(|f| f.label()).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(" ")
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Parse(c) => {
            let (f, _) = load(&c)?;
            let out = ParseOut {
                canonical: f.to_string(),
                n_vars: f.n_vars(),
                terms: f
                    .terms()
                    .iter()
                    .map(|t| TermOut {
                        coeff: t.coeff.to_string(),
                        nu: t.nu.clone(),
                        mu: t.mu.clone(),
                    })
                    .collect(),
            };
            emit(&c, &out, || format!("{}\nvars {}\n", out.canonical, out.n_vars));
        }
        Cmd::Newton(c) => {
            let (f, _) = load(&c)?;
            let out = NewtonOut {
                support: newton::support(&f)?.into_iter().collect(),
                convenient: newton::is_convenient(&f)?,
                newton_polyhedron: newton::newton_polyhedron(&f)?,
                support_hull: newton::support_hull(&f)?,
            };
            emit(&c, &out, || {
                format!(
                    "support     {:?}\nconvenient  {}\nΓ⁺ faces    {}\nbad         {}\nstrictly bad {}\n",
                    out.support,
                    out.convenient,
                    labels(out.newton_polyhedron.faces.iter().filter(|f| f.flags.at_infinity)),
                    labels(out.support_hull.faces.iter().filter(|f| f.flags.bad)),
                    labels(out.support_hull.faces.iter().filter(|f| f.flags.strictly_bad)),
                )
            });
        }
        Cmd::Homogeneity(c) => {
            let (f, _) = load(&c)?;
            let out = HomogeneityOut {
                radial: homogeneity::radial_type(&f)?,
                polar: homogeneity::polar_type(&f)?,
            };
            let show = |t: &Option<homogeneity::HomogeneityType>| match t {
                Some(t) => format!("weights {:?} degree {}", t.weights, t.degree),
                None => "none".into(),
            };
            emit(&c, &out, || format!("radial {}\npolar  {}\n", show(&out.radial), show(&out.polar)));
        }
        Cmd::Nondegen(c) => {
            let (f, _) = load(&c)?;
            let cfg = config(&c)?;
            let modes = cfg.mode.map(|m| vec![m]).unwrap_or(vec![Mode::StronglyNondegenerate, Mode::Nondegenerate]);
            let scopes = cfg.scope.map(|s| vec![s]).unwrap_or(vec![Scope::GammaPlus, Scope::AllSupportHullFaces]);
            let sweep = cfg.coordinate_sweep && f.n_vars() <= nondegen::MAX_SWEEP_VARS;
            let mut out = Vec::new();
            for &m in &modes {
                for &s in &scopes {
                    out.push(nondegen::classify(&f, m, s, sweep, &cfg.search())?);
                }
            }
            emit(&c, &out, || {
                out.iter()
                    .map(|v| match &v.aggregate {
                        nondegen::Aggregate::Refuted { face, witness, coordinates } => format!(
                            "{:?}/{:?}: refuted on {face} (coordinates {coordinates:?}, residual {:.2e})\n",
                            v.mode, v.scope, witness.residual
                        ),
                        nondegen::Aggregate::HeuristicallyNondegenerate => {
                            format!("{:?}/{:?}: no witness found (heuristic)\n", v.mode, v.scope)
                        }
                    })
                    .collect()
            });
        }
        Cmd::Atinfinity { common: c, kind } => {
            let (f, _) = load(&c)?;
            let cfg = config(&c)?;
            let kinds = match kind {
                Kind::SPhi => vec![ValueKind::SPhi],
                Kind::SF => vec![ValueKind::SF],
                Kind::Both => vec![ValueKind::SF, ValueKind::SPhi],
            };
            let sets = kinds
                .into_iter()
                .map(|k| atinfinity::estimate_asymptotic_values(&f, k, &cfg.estimator()))
                .collect::<Result<Vec<_>>>()?;
            emit(&c, &sets, || {
                let mut s = String::new();
                for set in &sets {
                    s.push_str(&format!("{:?}: {} value(s)\n", set.kind, set.clusters.len()));
                    for cl in &set.clusters {
                        s.push_str(&format!(
                            "  {:.9}{:+.9}i  |{:.6}|  arg {:.6}°\n",
                            cl.center.re,
                            cl.center.im,
                            cl.center.norm(),
                            cl.angle_degrees()
                        ));
                    }
                    if let Some(d) = &set.degenerate {
                        s.push_str(&format!("  {d}\n"));
                    }
                }
                s
            });
        }
        Cmd::Flow {
            common: c,
            start,
            radius,
            modulus,
            csv,
        } => {
            let (f, _) = load(&c)?;
            let cfg = config(&c)?;
            let z0 = parse_point(&start)?;
            let base = match modulus {
                Some(m) => FlowOptions::to_modulus(m),
                None => FlowOptions::to_radius(radius.unwrap_or(cfg.flow_radius)),
            };
            let path = atinfinity::trace_flow(&f, &z0, &base)?;
            if let Some(p) = csv {
                let mut out = std::io::BufWriter::new(std::fs::File::create(p)?);
                atinfinity::write_csv(&path, &mut out)?;
            }
            emit(&c, &path, || {
                let e = path.end();
                format!(
                    "{:?} after {} samples: |z| = {:.9}, |f| = {:.9}, arg f = {:.9}\nmax arg drift {:.2e}, monotone {}\n",
                    path.terminated_at,
                    path.samples.len(),
                    e.norm_z,
                    e.abs_f,
                    e.arg_f,
                    path.max_arg_drift,
                    path.is_monotone()
                )
            });
        }
        Cmd::Analyze { common: c, plots: dir } => {
            let (f, name) = load(&c)?;
            let cfg = config(&c)?;
            let report = analysis::analyze(&f, &name, &cfg)?;
            if let Some(d) = dir {
                plots::emit_plots(&report, &d)?;
            }
            if c.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", analysis::render_text(&report));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
