// Witness search for Newton (strong) non-degeneracy at infinity on the
// semitame example, in both modes.

use mixfib::catalog;
use mixfib::nondegen::{self, Aggregate, FaceStatus, Mode, NonDegeneracyVerdict, Scope, SearchOptions};

pub fn run_example() -> Vec<NonDegeneracyVerdict> {
    let f = catalog::load("semitame").unwrap();
    println!("f = {f}");
    let opts = SearchOptions::default();
    let mut out = Vec::new();
    for mode in [Mode::StronglyNondegenerate, Mode::Nondegenerate] {
        let v = nondegen::classify(&f, mode, Scope::GammaPlus, true, &opts).unwrap();
        println!("{mode:?}:");
        for r in v.faces.iter().filter(|r| r.coordinates.len() == f.n_vars()) {
            match &r.status {
                FaceStatus::Degenerate { witness } => {
                    println!("  {:<16} degenerate, residual {:.1e}", r.face, witness.residual)
                }
                FaceStatus::NoWitnessFound { best_residual, .. } => {
                    println!("  {:<16} no witness (best residual {best_residual:.1e})", r.face)
                }
            }
        }
        match &v.aggregate {
            Aggregate::Refuted { face, .. } => println!("  => refuted on {face}"),
            Aggregate::HeuristicallyNondegenerate => println!("  => no witness found (heuristic)"),
        }
        out.push(v);
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
