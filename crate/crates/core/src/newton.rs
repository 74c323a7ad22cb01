//! Exact polyhedral data of a mixed polynomial: support, the Newton
//! polyhedron `Γ₀(f) = conv({0} ∪ supp f)`, its boundary at infinity
//! `Γ⁺(f)`, the hull `conv(supp f ∖ {0})` with its complete face lattice,
//! and bad / strictly bad faces.
//!
//! Everything is computed over ℚ. A face is identified by the set of input
//! lattice points lying on it, not by its vertex set.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, find_feasible, nullspace, primitive_integer, q, Constraint, Q};
use crate::mixedpoly::MixedPolynomial;

pub type LatticePoint = Vec<u32>;

/// `supp(f) = { ν + μ : c_{ν,μ} ≠ 0 }`.
pub fn support(f: &MixedPolynomial) -> Result<BTreeSet<LatticePoint>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.support_points())
}

/// Every coordinate axis carries a support point.
pub fn is_convenient(f: &MixedPolynomial) -> Result<bool> {
    let supp = support(f)?;
    Ok((0..f.n_vars()).all(|i| {
        supp.iter().any(|p| {
            p.iter()
                .enumerate()
                .all(|(k, &x)| if k == i { x > 0 } else { x == 0 })
        })
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FaceFlags {
    pub at_infinity: bool,
    pub bad: bool,
    pub strictly_bad: bool,
}

/// A face of a lattice polytope, with the minimizing functional `l(x) = a·x`
/// that takes the value `offset` exactly on the face and larger values on
/// every other input point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    #[serde(serialize_with = "ser_points")]
    pub vertices: Vec<LatticePoint>,
    #[serde(serialize_with = "ser_point_set")]
    pub lattice_points: BTreeSet<LatticePoint>,
    pub dim: usize,
    #[serde(serialize_with = "ser_ints")]
    pub functional: Vec<BigInt>,
    #[serde(serialize_with = "ser_int")]
    pub offset: BigInt,
    pub flags: FaceFlags,
    /// For bad faces: a mixed-sign normal `a` with `{a·x = 0} ∩ hull = Δ`.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_ints")]
    pub bad_normal: Option<Vec<BigInt>>,
}

impl Face {
    pub fn contains_origin(&self) -> bool {
        self.lattice_points.iter().any(|p| p.iter().all(|&x| x == 0))
    }

    /// Short label such as `{(2,0)}` or `{(1,1),(2,2)}`.
    pub fn label(&self) -> String {
        let pts: Vec<String> = self
            .lattice_points
            .iter()
            .map(|p| {
                let xs: Vec<String> = p.iter().map(u32::to_string).collect();
                format!("({})", xs.join(","))
            })
            .collect();
        format!("{{{}}}", pts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polytope {
    #[serde(serialize_with = "ser_points")]
    pub vertices: Vec<LatticePoint>,
    pub dim: usize,
}

/// All faces of a polytope (ranked by dimension) and their covering relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceLattice {
    pub polytope: Polytope,
    pub faces: Vec<Face>,
    /// `(i, j)`: face `i` is a facet of face `j`.
    pub incidence: Vec<(usize, usize)>,
}

impl FaceLattice {
    pub fn point_sets(&self) -> BTreeSet<BTreeSet<LatticePoint>> {
        self.faces.iter().map(|f| f.lattice_points.clone()).collect()
    }

    pub fn find(&self, points: &BTreeSet<LatticePoint>) -> Option<&Face> {
        self.faces.iter().find(|f| &f.lattice_points == points)
    }
}

fn to_q(p: &[u32]) -> Vec<Q> {
    p.iter().map(|&x| q(x as i64)).collect()
}

fn diff(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Affine dimension of a finite point set (0 for a single point).
pub fn affine_dim(points: &[Vec<Q>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => linalg::rank(&rest.iter().map(|p| diff(p, p0)).collect::<Vec<_>>()),
    }
}

/// Whether the origin lies in the affine span of the points.
pub fn affine_span_contains_origin(points: &[Vec<Q>]) -> bool {
    linalg::rank(points) == affine_dim(points)
}

/// Face lattice of `conv(points)`. Points must be distinct and nonempty.
///
/// Facets come from `dim`-subsets of affinely independent points whose
/// hyperplane (taken inside the affine hull) leaves every point on one side;
/// every other face is an intersection of facets.
pub fn face_lattice(points: &BTreeSet<LatticePoint>) -> FaceLattice {
    assert!(!points.is_empty(), "face lattice of an empty point set");
    let pts: Vec<LatticePoint> = points.iter().cloned().collect();
    let qpts: Vec<Vec<Q>> = pts.iter().map(|p| to_q(p)).collect();
    let n = pts[0].len();
    let dim = affine_dim(&qpts);
    let all: BTreeSet<usize> = (0..pts.len()).collect();

    // facets as index sets, with primitive minimizing normals
    let mut facets: BTreeMap<BTreeSet<usize>, Vec<Q>> = BTreeMap::new();
    if dim > 0 {
        let mut hull_rows: Vec<Vec<Q>> = qpts[1..].iter().map(|p| diff(p, &qpts[0])).collect();
        let pivots = linalg::rref(&mut hull_rows);
        let basis: Vec<Vec<Q>> = hull_rows.into_iter().take(pivots.len()).collect();
        for combo in combinations(pts.len(), dim) {
            let diffs: Vec<Vec<Q>> = combo[1..]
                .iter()
                .map(|&k| diff(&qpts[k], &qpts[combo[0]]))
                .collect();
            if linalg::rank(&diffs) != dim - 1 {
                continue;
            }
            // normal a = Σ β_k basis_k with a ⟂ diffs
            let system: Vec<Vec<Q>> = diffs
                .iter()
                .map(|d| basis.iter().map(|b| dot(b, d)).collect())
                .collect();
            let betas = nullspace(&system, dim);
            debug_assert_eq!(betas.len(), 1);
            let mut a = vec![Q::zero(); n];
            for (beta, b) in betas[0].iter().zip(&basis) {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += beta * y;
                }
            }
            let c = dot(&a, &qpts[combo[0]]);
            let vals: Vec<Q> = qpts.iter().map(|p| dot(&a, p) - &c).collect();
            let pos = vals.iter().any(|v| v.is_positive());
            let neg = vals.iter().any(|v| v.is_negative());
            if pos && neg {
                continue;
            }
            if neg {
                a.iter_mut().for_each(|x| *x = -x.clone());
            }
            let on: BTreeSet<usize> = (0..pts.len()).filter(|&k| vals[k].is_zero()).collect();
            let a = primitive_integer(&a).into_iter().map(Q::from_integer).collect();
            facets.entry(on).or_insert(a);
        }
    }

    // close under intersection
    let mut face_sets: BTreeSet<BTreeSet<usize>> = facets.keys().cloned().collect();
    let mut frontier: Vec<BTreeSet<usize>> = face_sets.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for fct in facets.keys() {
            let meet: BTreeSet<usize> = x.intersection(fct).copied().collect();
            if !meet.is_empty() && face_sets.insert(meet.clone()) {
                frontier.push(meet);
            }
        }
    }
    face_sets.insert(all.clone());

    let mut faces: Vec<(BTreeSet<usize>, Face)> = face_sets
        .into_iter()
        .map(|set| {
            let mut a = vec![Q::zero(); n];
            for (fct, normal) in &facets {
                if set.is_subset(fct) {
                    for (x, y) in a.iter_mut().zip(normal) {
                        *x += y;
                    }
                }
            }
            let functional = if a.iter().all(Zero::is_zero) {
                vec![BigInt::zero(); n]
            } else {
                primitive_integer(&a)
            };
            let af: Vec<Q> = functional.iter().cloned().map(Q::from_integer).collect();
            let first = *set.iter().next().unwrap();
            let offset = dot(&af, &qpts[first]).to_integer();
            let member_q: Vec<Vec<Q>> = set.iter().map(|&k| qpts[k].clone()).collect();
            let face = Face {
                vertices: Vec::new(),
                lattice_points: set.iter().map(|&k| pts[k].clone()).collect(),
                dim: affine_dim(&member_q),
                functional,
                offset,
                flags: FaceFlags::default(),
                bad_normal: None,
            };
            (set, face)
        })
        .collect();
    faces.sort_by(|a, b| (a.1.dim, &a.1.lattice_points).cmp(&(b.1.dim, &b.1.lattice_points)));

    let vertex_points: Vec<LatticePoint> = faces
        .iter()
        .filter(|(_, f)| f.dim == 0)
        .map(|(_, f)| f.lattice_points.iter().next().unwrap().clone())
        .collect();
    for (_, f) in faces.iter_mut() {
        f.vertices = vertex_points
            .iter()
            .filter(|v| f.lattice_points.contains(*v))
            .cloned()
            .collect();
    }

    let mut incidence = Vec::new();
    for (i, (si, fi)) in faces.iter().enumerate() {
        for (j, (sj, fj)) in faces.iter().enumerate() {
            if fj.dim == fi.dim + 1 && si.is_subset(sj) {
                incidence.push((i, j));
            }
        }
    }

    FaceLattice {
        polytope: Polytope {
            vertices: vertex_points,
            dim,
        },
        faces: faces.into_iter().map(|(_, f)| f).collect(),
        incidence,
    }
}

/// `Γ₀(f)` with its full face lattice; faces missing the origin are flagged
/// `at_infinity`.
pub fn newton_polyhedron(f: &MixedPolynomial) -> Result<FaceLattice> {
    let mut pts = support(f)?;
    pts.insert(vec![0; f.n_vars()]);
    let mut lattice = face_lattice(&pts);
    for face in lattice.faces.iter_mut() {
        face.flags.at_infinity = !face.contains_origin();
    }
    Ok(lattice)
}

/// The faces of `Γ₀(f)` that do not contain the origin. Their lattice
/// points are exactly `supp(f) ∩ Δ`.
pub fn boundary_at_infinity(f: &MixedPolynomial) -> Result<Vec<Face>> {
    Ok(newton_polyhedron(f)?
        .faces
        .into_iter()
        .filter(|face| face.flags.at_infinity)
        .collect())
}

/// `conv(supp f ∖ {0})` with complete face lattice and bad / strictly bad
/// flags. `at_infinity` is set on faces that are also faces of `Γ⁺(f)`.
pub fn support_hull(f: &MixedPolynomial) -> Result<FaceLattice> {
    let mut pts = support(f)?;
    pts.remove(&vec![0; f.n_vars()]);
    if pts.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut lattice = face_lattice(&pts);
    let gamma_plus: BTreeSet<BTreeSet<LatticePoint>> = boundary_at_infinity(f)?
        .into_iter()
        .map(|face| face.lattice_points)
        .collect();
    let all_points: Vec<Vec<Q>> = pts.iter().map(|p| to_q(p)).collect();
    for face in lattice.faces.iter_mut() {
        face.flags.at_infinity = gamma_plus.contains(&face.lattice_points);
        let on: Vec<Vec<Q>> = face.lattice_points.iter().map(|p| to_q(p)).collect();
        let off: Vec<Vec<Q>> = pts
            .iter()
            .filter(|p| !face.lattice_points.contains(*p))
            .map(|p| to_q(p))
            .collect();
        debug_assert_eq!(on.len() + off.len(), all_points.len());
        if let Some(a) = mixed_sign_cut(&on, &off, f.n_vars()) {
            face.flags.bad = true;
            face.flags.strictly_bad = affine_span_contains_origin(&on);
            face.bad_normal = Some(a);
        }
    }
    Ok(lattice)
}

/// Searches for `a` with `a·p = 0` on `on`, `a·q > 0` on `off` and mixed
/// signs among its coordinates. The strict system is a cone, so it is
/// normalized to `≥ 1` and decided exactly, one LP per ordered pair
/// `(i, j)` forcing `a_i ≤ −1` and `a_j ≥ 1`. Flipping the sign of `a`
/// swaps the pair, so one orientation of `off` suffices.
fn mixed_sign_cut(on: &[Vec<Q>], off: &[Vec<Q>], n: usize) -> Option<Vec<BigInt>> {
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut cs: Vec<Constraint> = on.iter().map(|p| Constraint::eq(p.clone(), q(0))).collect();
            cs.extend(off.iter().map(|p| Constraint::ge(p.clone(), q(1))));
            let mut ei = vec![q(0); n];
            ei[i] = q(1);
            cs.push(Constraint::le(ei, q(-1)));
            let mut ej = vec![q(0); n];
            ej[j] = q(1);
            cs.push(Constraint::ge(ej, q(1)));
            if let Some(a) = find_feasible(n, &cs) {
                return Some(primitive_integer(&a));
            }
        }
    }
    None
}

/// Bad faces of `conv(supp f ∖ {0})`.
pub fn bad_faces(f: &MixedPolynomial) -> Result<Vec<Face>> {
    Ok(support_hull(f)?
        .faces
        .into_iter()
        .filter(|face| face.flags.bad)
        .collect())
}

/// Strictly bad faces: bad faces whose affine span contains the origin.
pub fn strictly_bad_faces(f: &MixedPolynomial) -> Result<Vec<Face>> {
    Ok(support_hull(f)?
        .faces
        .into_iter()
        .filter(|face| face.flags.strictly_bad)
        .collect())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn ser_points<S: serde::Serializer>(pts: &[LatticePoint], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = pts
        .iter()
        .map(|p| p.iter().map(|x| x.to_string()).collect())
        .collect();
    v.serialize(s)
}

fn ser_point_set<S: serde::Serializer>(
    pts: &BTreeSet<LatticePoint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<LatticePoint> = pts.iter().cloned().collect();
    ser_points(&v, s)
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<String> = v.iter().map(BigInt::to_string).collect();
    v.serialize(s)
}

fn ser_opt_ints<S: serde::Serializer>(
    v: &Option<Vec<BigInt>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_ints(v, s),
        None => s.serialize_none(),
    }
}

fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
