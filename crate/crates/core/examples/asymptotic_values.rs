// Estimates of S(f) and of the asymptotic non-regular values of f/|f| for
// the semitame example, over the radii 10 .. 10⁵.

use mixfib::atinfinity::{estimate_asymptotic_values, CircleValueClusterSet, EstimatorOptions, ValueKind};
use mixfib::catalog;

pub fn run_example() -> (CircleValueClusterSet, CircleValueClusterSet) {
    let f = catalog::load("semitame").unwrap();
    let opts = EstimatorOptions::default();
    let s_f = estimate_asymptotic_values(&f, ValueKind::SF, &opts).unwrap();
    let s_phi = estimate_asymptotic_values(&f, ValueKind::SPhi, &opts).unwrap();
    for set in [&s_f, &s_phi] {
        println!("{:?}: {} limit value(s)", set.kind, set.clusters.len());
        for c in &set.clusters {
            println!("  {:+.9} {:+.9}i   arg {:8.3}°", c.center.re, c.center.im, c.angle_degrees());
        }
        for r in &set.per_radius {
            println!("  R = {:.0e}: {} of {} starts accepted, {} escaping", r.radius, r.accepted, r.starts, r.escaping);
        }
    }
    (s_f, s_phi)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
