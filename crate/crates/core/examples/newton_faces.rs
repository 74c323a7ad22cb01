// Newton boundary at infinity and bad faces of a non-convenient mixed
// polynomial whose support is a segment on the diagonal.

use mixfib::catalog;
use mixfib::newton;

pub struct NewtonSummary {
    pub convenient: bool,
    pub gamma_plus: Vec<String>,
    pub bad: Vec<String>,
    pub strictly_bad: Vec<String>,
}

pub fn run_example() -> NewtonSummary {
    let f = catalog::load("diagonal_segment").unwrap();
    println!("f = {f}");
    let support = newton::support(&f).unwrap();
    println!("supp f = {support:?}");

    let labels = |faces: Vec<newton::Face>| faces.iter().map(|x| x.label()).collect::<Vec<_>>();
    let s = NewtonSummary {
        convenient: newton::is_convenient(&f).unwrap(),
        gamma_plus: labels(newton::boundary_at_infinity(&f).unwrap()),
        bad: labels(newton::bad_faces(&f).unwrap()),
        strictly_bad: labels(newton::strictly_bad_faces(&f).unwrap()),
    };
    println!("convenient   {}", s.convenient);
    println!("Γ⁺ faces     {:?}", s.gamma_plus);
    println!("bad          {:?}", s.bad);
    println!("strictly bad {:?}", s.strictly_bad);
    for face in newton::support_hull(&f).unwrap().faces.iter().filter(|x| x.flags.bad) {
        println!("  {} cut by {:?}", face.label(), face.bad_normal.as_ref().unwrap());
    }
    s
}

#[allow(dead_code)]
fn main() {
    run_example();
}
