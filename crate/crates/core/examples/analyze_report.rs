// Full pipeline on every bundled example: hypothesis ledger and fibration
// verdict, plus CSV/SVG output for the semitame example.

use mixfib::analysis::{analyze, AnalysisReport, Config};
use mixfib::{catalog, plots};

pub fn run_example() -> Vec<AnalysisReport> {
    let cfg = Config {
        flow_paths: 2,
        ..Config::default()
    };
    let mut reports = Vec::new();
    for name in catalog::names() {
        let f = catalog::load(name).unwrap();
        let r = analyze(&f, name, &cfg).unwrap();
        println!("{name:<24} {}", r.verdict.summary);
        for c in &r.verdict.clauses {
            println!("{:<24} ({}) {:?}", "", c.id, c.status);
        }
        if name == "semitame" {
            let dir = std::env::temp_dir().join("mixfib_semitame");
            for p in plots::emit_plots(&r, &dir).unwrap() {
                println!("{:<24} wrote {}", "", p.display());
            }
        }
        reports.push(r);
    }
    reports
}

#[allow(dead_code)]
fn main() {
    run_example();
}
