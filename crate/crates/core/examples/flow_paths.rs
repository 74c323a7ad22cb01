// Integrates the fibration flow of z1³ + z2³ from a few starting points:
// along each path |f| and ‖z‖ increase while arg f stays fixed.

use mixfib::atinfinity::{trace_flow, FlowOptions, FlowPath};
use mixfib::{catalog, Complex64};

pub fn run_example() -> Vec<FlowPath> {
    let f = catalog::load("fermat_cubic").unwrap();
    let starts = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.2)],
        [Complex64::new(-0.4, 0.9), Complex64::new(0.7, -0.3)],
        [Complex64::new(0.2, 0.2), Complex64::new(1.1, 0.6)],
    ];
    let opts = FlowOptions::to_radius(50.0);
    let mut paths = Vec::new();
    for z0 in starts {
        let p = trace_flow(&f, &z0, &opts).unwrap();
        let (a, b) = (&p.samples[0], p.end());
        println!(
            "|z| {:.3} -> {:.3}   |f| {:.3e} -> {:.3e}   arg f {:+.9} -> {:+.9}   ({} steps, {:?})",
            a.norm_z, b.norm_z, a.abs_f, b.abs_f, a.arg_f, b.arg_f, p.samples.len() - 1, p.terminated_at
        );
        paths.push(p);
    }
    paths
}

#[allow(dead_code)]
fn main() {
    run_example();
}
