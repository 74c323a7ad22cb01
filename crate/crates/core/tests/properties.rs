mod support;

use proptest::prelude::*;

use mixfib::parser::parse_polynomial;
use mixfib::{GaussianRational, MixedPolynomial, MixedTerm};
use support::{eval, point};

fn term_strategy(n: usize) -> impl Strategy<Value = MixedTerm> {
    (
        -3i64..=3,
        -3i64..=3,
        prop::collection::vec(0u32..=3, n),
        prop::collection::vec(0u32..=3, n),
    )
        .prop_map(|(re, im, nu, mu)| MixedTerm::new(GaussianRational::from_ints(re, im), nu, mu))
}

fn poly_strategy() -> impl Strategy<Value = MixedPolynomial> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(term_strategy(n), 1..6)
            .prop_map(move |ts| MixedPolynomial::canonicalize(ts, n).unwrap())
    })
}

fn support_strategy() -> impl Strategy<Value = MixedPolynomial> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::btree_set(prop::collection::vec(0u32..=3, n), 1..=12)
            .prop_map(move |pts| support::support_poly(n, pts))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn gradients_match_central_differences(f in poly_strategy(), seed in any::<u64>()) {
        let e = support::fd_gradient_error(&f, &point(f.n_vars(), seed));
        prop_assert!(e <= 1e-6, "{}", e);
    }

    #[test]
    fn canonicalize_is_idempotent(f in poly_strategy()) {
        let again = MixedPolynomial::canonicalize(f.terms().to_vec(), f.n_vars()).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn conjugation_is_an_involution_and_commutes_with_evaluation(f in poly_strategy(), seed in any::<u64>()) {
        prop_assert_eq!(f.conjugate().conjugate(), f.clone());
        let z = point(f.n_vars(), seed);
        let (a, b) = (eval(&f.conjugate(), &z), eval(&f, &z).conj());
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()));
    }

    #[test]
    fn canonical_text_round_trips(f in poly_strategy()) {
        let g = parse_polynomial(&f.to_string(), Some(f.n_vars())).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn conj_syntax_agrees_with_evaluation(f in poly_strategy(), seed in any::<u64>()) {
        let g = parse_polynomial(&format!("conj({f})"), Some(f.n_vars())).unwrap();
        let z = point(f.n_vars(), seed);
        prop_assert!((eval(&g, &z) - eval(&f, &z).conj()).norm() <= 1e-9 * (1.0 + eval(&f, &z).norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn face_lattices_of_random_supports_match_oracle(f in support_strategy()) {
        prop_assert!(support::check_lattices(&f).is_ok(), "{:?}", support::check_lattices(&f));
    }
}

#[test]
fn euler_identity_for_radial_types() {
    support::euler_identity().unwrap();
}

#[test]
fn face_lattices_of_bundled_examples_match_oracle() {
    support::face_lattices(0, 0).unwrap();
}

#[test]
fn lambda_closed_form_beats_grid() {
    support::lambda_optimality().unwrap();
}

#[test]
fn accepted_phi_solutions_lie_in_the_milnor_set_of_f() {
    support::phi_solutions_in_milnor_set().unwrap();
}

#[test]
fn flow_paths_are_monotone_with_fixed_argument() {
    support::flow_paths().unwrap();
}
