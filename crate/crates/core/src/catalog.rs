//! Named example polynomials shipped with the crate.

use crate::mixedpoly::MixedPolynomial;
use crate::parser::parse_polynomial;

/// `(name, .mpoly source)` for every bundled example.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("semitame", include_str!("../data/semitame.mpoly")),
    ("radial_norm", include_str!("../data/radial_norm.mpoly")),
    ("polar_quartic", include_str!("../data/polar_quartic.mpoly")),
    ("fermat_cubic", include_str!("../data/fermat_cubic.mpoly")),
    ("diagonal_segment", include_str!("../data/diagonal_segment.mpoly")),
    ("diagonal_segment_linear", include_str!("../data/diagonal_segment_linear.mpoly")),
];

pub fn source(name: &str) -> Option<&'static str> {
    EXAMPLES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Option<MixedPolynomial> {
    source(name).map(|s| parse_polynomial(s, None).expect("bundled example parses"))
}

pub fn names() -> impl Iterator<Item = &'static str> {
    EXAMPLES.iter().map(|(n, _)| *n)
}
