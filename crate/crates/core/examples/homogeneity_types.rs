// Radial and polar weighted homogeneity of two small examples, with the
// scaling identities checked at random points.

use mixfib::catalog;
use mixfib::homogeneity::{self, HomogeneityType};

pub struct Types {
    pub radial_norm: (Option<HomogeneityType>, Option<HomogeneityType>),
    pub polar_quartic: (Option<HomogeneityType>, Option<HomogeneityType>),
}

pub fn run_example() -> Types {
    let mut out = Vec::new();
    for name in ["radial_norm", "polar_quartic"] {
        let f = catalog::load(name).unwrap();
        let radial = homogeneity::radial_type(&f).unwrap();
        let polar = homogeneity::polar_type(&f).unwrap();
        println!("{name}: f = {f}");
        for ty in radial.iter().chain(polar.iter()) {
            let err = homogeneity::verify_scaling(&f, ty, 32, 0);
            println!("  {:?} weights {:?} degree {}  (scaling error {err:.1e})", ty.kind, ty.weights, ty.degree);
        }
        if radial.is_none() {
            println!("  not radially weighted homogeneous");
        }
        if polar.is_none() {
            println!("  not polar weighted homogeneous");
        }
        out.push((radial, polar));
    }
    let polar_quartic = out.pop().unwrap();
    let radial_norm = out.pop().unwrap();
    Types { radial_norm, polar_quartic }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
