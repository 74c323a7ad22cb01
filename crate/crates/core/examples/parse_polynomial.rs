// Parse a mixed polynomial, print its canonical form and check that the
// canonical form reparses to the same polynomial.

use mixfib::parser::parse_polynomial;
use mixfib::{Complex64, MixedPolynomial};

pub fn run_example() -> MixedPolynomial {
    let text = "vars: 2\n(1/4)*z1^2 - (1/4)*conj(z1)^2 + z1*zbar1 - (1+i)*(z1+z2)*conj(z1+z2)";
    let f = parse_polynomial(text, None).expect("example parses");
    println!("f      = {f}");
    println!("vars   = {}", f.n_vars());
    let again = parse_polynomial(&f.to_string(), Some(f.n_vars())).expect("canonical form parses");
    assert_eq!(again, f);

    let z = [Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5)];
    let g = f.wirtinger_gradients(&z).expect("arity matches");
    println!("f(z)   = {}", f.evaluate(&z).unwrap());
    println!("df     = {:?}", g.d_z);
    println!("dbar f = {:?}", g.d_zbar);
    f
}

#[allow(dead_code)]
fn main() {
    run_example();
}
