//! Mixed polynomials `f(z, z̄) = Σ c_{ν,μ} z^ν z̄^μ` with exact coefficients.
//!
//! The representation is canonical: terms are merged on `(ν, μ)`, zero
//! coefficients are dropped and the remaining terms are sorted
//! lexicographically on the concatenated exponent vector `(ν, μ)`. Two
//! polynomials are equal iff their canonical term lists are equal.
//!
//! Numerics (evaluation, Wirtinger gradients) run in `f64` complex
//! arithmetic; a floating copy of every coefficient is cached at
//! construction time.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;

/// Largest exponent entry accepted anywhere in the crate.
pub const MAX_EXPONENT: u32 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedTerm {
    pub coeff: GaussianRational,
    /// Exponent of `z`.
    pub nu: Vec<u32>,
    /// Exponent of `z̄`.
    pub mu: Vec<u32>,
}

impl MixedTerm {
    pub fn new(coeff: GaussianRational, nu: Vec<u32>, mu: Vec<u32>) -> Self {
        Self { coeff, nu, mu }
    }

    /// The lattice point `ν + μ` this term contributes to `supp(f)`.
    pub fn support_point(&self) -> Vec<u32> {
        self.nu.iter().zip(&self.mu).map(|(a, b)| a + b).collect()
    }

    fn key(&self) -> (Vec<u32>, Vec<u32>) {
        (self.nu.clone(), self.mu.clone())
    }
}

/// Wirtinger gradients `(∂f/∂z_i, ∂f/∂z̄_i)` evaluated at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct WirtingerGradient {
    pub d_z: Vec<Complex64>,
    pub d_zbar: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct MixedPolynomial {
    n_vars: usize,
    terms: Vec<MixedTerm>,
    numeric: Vec<Complex64>,
}

impl PartialEq for MixedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.n_vars == other.n_vars && self.terms == other.terms
    }
}

impl Eq for MixedPolynomial {}

impl Hash for MixedPolynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n_vars.hash(state);
        self.terms.hash(state);
    }
}

impl MixedPolynomial {
    /// Merges duplicate `(ν, μ)` pairs, drops zero coefficients and sorts.
    pub fn canonicalize(raw_terms: impl IntoIterator<Item = MixedTerm>, n: usize) -> Result<Self> {
        let mut merged: BTreeMap<(Vec<u32>, Vec<u32>), GaussianRational> = BTreeMap::new();
        for t in raw_terms {
            if t.nu.len() != n || t.mu.len() != n {
                return Err(Error::MismatchedArity {
                    expected: n,
                    found: if t.nu.len() != n { t.nu.len() } else { t.mu.len() },
                });
            }
            if let Some(&e) = t.nu.iter().chain(&t.mu).find(|&&e| e > MAX_EXPONENT) {
                return Err(Error::ExponentOverflow(e as u64));
            }
            let key = t.key();
            merged
                .entry(key)
                .and_modify(|c| *c += &t.coeff)
                .or_insert(t.coeff);
        }
        Ok(Self::from_sorted(
            n,
            merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((nu, mu), coeff)| MixedTerm { coeff, nu, mu })
                .collect(),
        ))
    }

    // Terms must already be canonical.
    fn from_sorted(n_vars: usize, terms: Vec<MixedTerm>) -> Self {
        let numeric = terms.iter().map(|t| t.coeff.to_complex()).collect();
        Self {
            n_vars,
            terms,
            numeric,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn constant(c: GaussianRational, n: usize) -> Self {
        Self::monomial(c, vec![0; n], vec![0; n])
    }

    pub fn monomial(c: GaussianRational, nu: Vec<u32>, mu: Vec<u32>) -> Self {
        let n = nu.len();
        Self::canonicalize([MixedTerm::new(c, nu, mu)], n).expect("monomial arity")
    }

    /// `z_i` (0-based index).
    pub fn var(i: usize, n: usize) -> Self {
        let mut nu = vec![0; n];
        nu[i] = 1;
        Self::monomial(GaussianRational::one(), nu, vec![0; n])
    }

    /// `z̄_i` (0-based index).
    pub fn conj_var(i: usize, n: usize) -> Self {
        let mut mu = vec![0; n];
        mu[i] = 1;
        Self::monomial(GaussianRational::one(), vec![0; n], mu)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &[MixedTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term has `ν = μ = 0` (including the zero polynomial).
    pub fn is_constant(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.nu.iter().chain(&t.mu).all(|&e| e == 0))
    }

    /// Exact constant coefficient `f(0)`.
    pub fn constant_term(&self) -> GaussianRational {
        self.terms
            .iter()
            .find(|t| t.nu.iter().chain(&t.mu).all(|&e| e == 0))
            .map(|t| t.coeff.clone())
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Lifts the polynomial into `n ≥ n_vars` variables.
    pub fn with_arity(&self, n: usize) -> Self {
        assert!(n >= self.n_vars, "arity can only grow");
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut nu = t.nu.clone();
                let mut mu = t.mu.clone();
                nu.resize(n, 0);
                mu.resize(n, 0);
                MixedTerm::new(t.coeff.clone(), nu, mu)
            })
            .collect::<Vec<_>>();
        Self::canonicalize(terms, n).expect("arity lift")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_arity(other)?;
        Self::canonicalize(
            self.terms.iter().chain(&other.terms).cloned(),
            self.n_vars,
        )
    }

    pub fn neg(&self) -> Self {
        Self::from_sorted(
            self.n_vars,
            self.terms
                .iter()
                .map(|t| MixedTerm::new(-&t.coeff, t.nu.clone(), t.mu.clone()))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        Self::from_sorted(
            self.n_vars,
            self.terms
                .iter()
                .map(|t| MixedTerm::new(&t.coeff * c, t.nu.clone(), t.mu.clone()))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_arity(other)?;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let nu = add_exponents(&a.nu, &b.nu)?;
                let mu = add_exponents(&a.mu, &b.mu)?;
                raw.push(MixedTerm::new(&a.coeff * &b.coeff, nu, mu));
            }
        }
        Self::canonicalize(raw, self.n_vars)
    }

    /// Exponentiation by squaring.
    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::constant(GaussianRational::one(), self.n_vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Termwise `(c, ν, μ) ↦ (c̄, μ, ν)`.
    pub fn conjugate(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| MixedTerm::new(t.coeff.conj(), t.mu.clone(), t.nu.clone()))
            .collect::<Vec<_>>();
        Self::canonicalize(terms, self.n_vars).expect("conjugate keeps arity")
    }

    /// Symbolic `∂f/∂z_i` (0-based), treating `z̄` as independent.
    pub fn derivative_z(&self, i: usize) -> Self {
        self.derivative(i, false)
    }

    /// Symbolic `∂f/∂z̄_i` (0-based).
    pub fn derivative_zbar(&self, i: usize) -> Self {
        self.derivative(i, true)
    }

    fn derivative(&self, i: usize, bar: bool) -> Self {
        let raw = self.terms.iter().filter_map(|t| {
            let e = if bar { t.mu[i] } else { t.nu[i] };
            if e == 0 {
                return None;
            }
            let mut nu = t.nu.clone();
            let mut mu = t.mu.clone();
            if bar {
                mu[i] -= 1;
            } else {
                nu[i] -= 1;
            }
            Some(MixedTerm::new(t.coeff.scale_int(e as u64), nu, mu))
        });
        Self::canonicalize(raw.collect::<Vec<_>>(), self.n_vars).expect("derivative arity")
    }

    /// `Σ c z^ν z̄^μ` in double precision.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check_point(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: &[Complex64]) -> Complex64 {
        let zb: Vec<Complex64> = z.iter().map(|w| w.conj()).collect();
        self.terms
            .iter()
            .zip(&self.numeric)
            .map(|(t, c)| c * monomial_value(z, &zb, &t.nu, &t.mu))
            .sum()
    }

    /// Sum of term moduli `Σ |c||z^ν z̄^μ|` at `z`; used to scale zero tests.
    pub fn term_scale(&self, z: &[Complex64]) -> f64 {
        let zb: Vec<Complex64> = z.iter().map(|w| w.conj()).collect();
        self.terms
            .iter()
            .zip(&self.numeric)
            .map(|(t, c)| c.norm() * monomial_value(z, &zb, &t.nu, &t.mu).norm())
            .sum()
    }

    /// Termwise bound `Σ_t |c_t| Σ_i (ν_i + μ_i) |z|^{ν+μ−e_i}` on
    /// `Σ_i |∂f/∂z_i| + |∂f/∂z̄_i|`. Unlike the gradients themselves it does
    /// not vanish at critical points, so residuals divided by it stay
    /// meaningful there.
    pub fn gradient_scale(&self, z: &[Complex64]) -> f64 {
        let m: Vec<f64> = z.iter().map(|w| w.norm()).collect();
        let mut total = 0.0;
        for (t, c) in self.terms.iter().zip(&self.numeric) {
            for i in 0..self.n_vars {
                let d = t.nu[i] + t.mu[i];
                if d == 0 {
                    continue;
                }
                let mut p = d as f64 * c.norm();
                for (k, mk) in m.iter().enumerate() {
                    let e = t.nu[k] + t.mu[k] - u32::from(k == i);
                    p *= mk.powi(e as i32);
                }
                total += p;
            }
        }
        total
    }

    pub fn wirtinger_gradients(&self, z: &[Complex64]) -> Result<WirtingerGradient> {
        self.check_point(z)?;
        Ok(self.gradients_unchecked(z))
    }

    pub(crate) fn gradients_unchecked(&self, z: &[Complex64]) -> WirtingerGradient {
        let n = self.n_vars;
        let zb: Vec<Complex64> = z.iter().map(|w| w.conj()).collect();
        let mut d_z = vec![Complex64::zero(); n];
        let mut d_zbar = vec![Complex64::zero(); n];
        for (t, c) in self.terms.iter().zip(&self.numeric) {
            let pz: Vec<Complex64> = (0..n).map(|k| z[k].powu(t.nu[k])).collect();
            let pzb: Vec<Complex64> = (0..n).map(|k| zb[k].powu(t.mu[k])).collect();
            for i in 0..n {
                if t.nu[i] > 0 {
                    let mut v = c * t.nu[i] as f64 * z[i].powu(t.nu[i] - 1);
                    for k in 0..n {
                        if k != i {
                            v *= pz[k];
                        }
                        v *= pzb[k];
                    }
                    d_z[i] += v;
                }
                if t.mu[i] > 0 {
                    let mut v = c * t.mu[i] as f64 * zb[i].powu(t.mu[i] - 1);
                    for k in 0..n {
                        if k != i {
                            v *= pzb[k];
                        }
                        v *= pz[k];
                    }
                    d_zbar[i] += v;
                }
            }
        }
        WirtingerGradient { d_z, d_zbar }
    }

    /// `f_Δ`: the terms whose lattice point `ν + μ` lies in `face_points`.
    pub fn restrict_to_face(&self, face_points: &BTreeSet<Vec<u32>>) -> Self {
        Self::from_sorted(
            self.n_vars,
            self.terms
                .iter()
                .filter(|t| face_points.contains(&t.support_point()))
                .cloned()
                .collect(),
        )
    }

    /// `f^I`: sets `z_j = z̄_j = 0` for every `j ∉ I` (0-based indices).
    pub fn restrict_to_coordinates(&self, keep: &BTreeSet<usize>) -> Self {
        Self::from_sorted(
            self.n_vars,
            self.terms
                .iter()
                .filter(|t| {
                    (0..self.n_vars).all(|j| keep.contains(&j) || (t.nu[j] == 0 && t.mu[j] == 0))
                })
                .cloned()
                .collect(),
        )
    }

    /// Indices `i` (0-based) with `ν_i + μ_i > 0` for some term.
    pub fn effective_variables(&self) -> BTreeSet<usize> {
        (0..self.n_vars)
            .filter(|&i| self.terms.iter().any(|t| t.nu[i] + t.mu[i] > 0))
            .collect()
    }

    /// Lattice points `ν + μ`, one per distinct value.
    pub fn support_points(&self) -> BTreeSet<Vec<u32>> {
        self.terms.iter().map(MixedTerm::support_point).collect()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .iter()
            .map(|t| t.nu.iter().chain(&t.mu).map(|&e| e as u64).sum::<u64>())
            .max()
            .unwrap_or(0)
    }

    fn check_same_arity(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::MismatchedArity {
                expected: self.n_vars,
                found: other.n_vars,
            });
        }
        Ok(())
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.n_vars {
            return Err(Error::MismatchedArity {
                expected: self.n_vars,
                found: z.len(),
            });
        }
        Ok(())
    }
}

fn add_exponents(a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let s = x as u64 + y as u64;
            if s > MAX_EXPONENT as u64 {
                Err(Error::ExponentOverflow(s))
            } else {
                Ok(s as u32)
            }
        })
        .collect()
}

fn monomial_value(z: &[Complex64], zb: &[Complex64], nu: &[u32], mu: &[u32]) -> Complex64 {
    let mut v = Complex64::one();
    for k in 0..z.len() {
        if nu[k] > 0 {
            v *= z[k].powu(nu[k]);
        }
        if mu[k] > 0 {
            v *= zb[k].powu(mu[k]);
        }
    }
    v
}

impl fmt::Display for MixedPolynomial {
    /// Canonical serialization in the `.mpoly` expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            for (i, &e) in t.nu.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{}", i + 1)?,
                    _ => write!(f, "*z{}^{}", i + 1, e)?,
                }
            }
            for (i, &e) in t.mu.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*zbar{}", i + 1)?,
                    _ => write!(f, "*zbar{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{c, f_ex, f_rad, g_pol};

    fn term(cf: GaussianRational, nu: &[u32], mu: &[u32]) -> MixedTerm {
        MixedTerm::new(cf, nu.to_vec(), mu.to_vec())
    }

    #[test]
    fn canonicalize_merges_coefficients() {
        let p = MixedPolynomial::canonicalize(
            [
                term(GaussianRational::from_ints(1, 0), &[1, 0], &[1, 0]),
                term(GaussianRational::from_ints(0, -1), &[1, 0], &[1, 0]),
            ],
            2,
        )
        .unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].coeff, GaussianRational::from_ints(1, -1));
    }

    #[test]
    fn canonicalize_cancels_to_zero() {
        let p = MixedPolynomial::canonicalize(
            [
                term(GaussianRational::from_ints(1, 0), &[2, 0], &[0, 0]),
                term(GaussianRational::from_ints(-1, 0), &[2, 0], &[0, 0]),
            ],
            2,
        )
        .unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn canonicalize_rejects_wrong_arity() {
        let err = MixedPolynomial::canonicalize(
            [term(GaussianRational::one(), &[1, 0, 0], &[0, 0, 0])],
            2,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MismatchedArity { .. }));
    }

    #[test]
    fn f_ex_has_six_canonical_terms() {
        let f = f_ex();
        let minus_one_minus_i = GaussianRational::from_ints(-1, -1);
        let expected = MixedPolynomial::canonicalize(
            [
                term(GaussianRational::ratio(1, 4), &[2, 0], &[0, 0]),
                term(GaussianRational::ratio(-1, 4), &[0, 0], &[2, 0]),
                term(GaussianRational::from_ints(0, -1), &[1, 0], &[1, 0]),
                term(minus_one_minus_i.clone(), &[1, 0], &[0, 1]),
                term(minus_one_minus_i.clone(), &[0, 1], &[1, 0]),
                term(minus_one_minus_i, &[0, 1], &[0, 1]),
            ],
            2,
        )
        .unwrap();
        assert_eq!(f, expected);
        assert_eq!(f.terms().len(), 6);
    }

    #[test]
    fn evaluate_examples() {
        let v = f_rad().evaluate(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-15);
        let v = f_ex().evaluate(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((v - c(-1.0, -1.0)).norm() < 1e-15);
        let v = g_pol().evaluate(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((v - c(3.0, 0.0)).norm() < 1e-15);
        assert!(f_rad().evaluate(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn gradient_examples() {
        let (a, b) = (c(0.3, -1.2), c(2.0, 0.5));
        let g = f_rad().wirtinger_gradients(&[a, b]).unwrap();
        assert!((g.d_z[0] - a.conj()).norm() < 1e-15);
        assert!((g.d_z[1] - b.conj()).norm() < 1e-15);
        assert!((g.d_zbar[0] - a).norm() < 1e-15);
        assert!((g.d_zbar[1] - b).norm() < 1e-15);

        let g = f_ex().wirtinger_gradients(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        for v in g.d_z.iter().chain(&g.d_zbar) {
            assert!((v - c(-1.0, -1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn symbolic_derivative_matches_numeric() {
        let f = f_ex();
        let z = [c(0.7, -0.2), c(-1.1, 0.4)];
        let g = f.wirtinger_gradients(&z).unwrap();
        for i in 0..2 {
            let dz = f.derivative_z(i).evaluate(&z).unwrap();
            let dzb = f.derivative_zbar(i).evaluate(&z).unwrap();
            assert!((dz - g.d_z[i]).norm() < 1e-13);
            assert!((dzb - g.d_zbar[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn face_and_coordinate_restrictions() {
        let f = f_ex();
        let expected = MixedPolynomial::canonicalize(
            [
                term(GaussianRational::ratio(1, 4), &[2, 0], &[0, 0]),
                term(GaussianRational::ratio(-1, 4), &[0, 0], &[2, 0]),
                term(GaussianRational::from_ints(0, -1), &[1, 0], &[1, 0]),
            ],
            2,
        )
        .unwrap();
        let face: BTreeSet<Vec<u32>> = [vec![2, 0]].into_iter().collect();
        assert_eq!(f.restrict_to_face(&face), expected);
        let whole: BTreeSet<Vec<u32>> = [vec![2, 0], vec![1, 1], vec![0, 2]].into_iter().collect();
        assert_eq!(f.restrict_to_face(&whole), f);

        assert_eq!(f.restrict_to_coordinates(&[0].into_iter().collect()), expected);
        assert_eq!(f.restrict_to_coordinates(&[0, 1].into_iter().collect()), f);
        let r = f_rad().restrict_to_coordinates(&[1].into_iter().collect());
        assert_eq!(r, MixedPolynomial::monomial(GaussianRational::one(), vec![0, 1], vec![0, 1]));

        let cubic = MixedPolynomial::var(0, 2)
            .pow(3)
            .unwrap()
            .add(&MixedPolynomial::var(1, 2).pow(3).unwrap())
            .unwrap();
        let face: BTreeSet<Vec<u32>> = [vec![3, 0]].into_iter().collect();
        assert_eq!(cubic.restrict_to_face(&face), MixedPolynomial::var(0, 2).pow(3).unwrap());
    }

    #[test]
    fn effective_variables_examples() {
        assert_eq!(f_ex().effective_variables(), [0, 1].into_iter().collect());
        let p = MixedPolynomial::monomial(GaussianRational::one(), vec![1, 0], vec![1, 0]);
        assert_eq!(p.effective_variables(), [0].into_iter().collect());
        assert!(MixedPolynomial::zero(2).effective_variables().is_empty());
    }

    #[test]
    fn conjugation_examples() {
        let z1sq = MixedPolynomial::var(0, 1).pow(2).unwrap();
        let zb1sq = MixedPolynomial::conj_var(0, 1).pow(2).unwrap();
        assert_eq!(z1sq.conjugate(), zb1sq);
        assert_eq!(f_rad().conjugate(), f_rad());
        let v = f_ex().conjugate().evaluate(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((v - c(-1.0, 1.0)).norm() < 1e-15);
        assert_eq!(f_ex().conjugate().conjugate(), f_ex());
    }

    #[test]
    fn exponent_overflow_is_rejected() {
        let big = MixedPolynomial::monomial(GaussianRational::one(), vec![MAX_EXPONENT], vec![0]);
        assert!(matches!(big.mul(&MixedPolynomial::var(0, 1)), Err(Error::ExponentOverflow(_))));
    }
}
