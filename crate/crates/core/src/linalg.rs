//! Exact rational linear algebra: row reduction, nullspaces and a small
//! Phase-I simplex used to decide feasibility of polyhedral systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in 0..cols {
                    let t = &factor * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows · x = 0}` for vectors of length `ncols`.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same ray (positive multiple, gcd 1).
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// A linear constraint `coeffs · x (=|>=) rhs` over free variables.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rhs: Q,
    pub equality: bool,
}

impl Constraint {
    pub fn eq(coeffs: Vec<Q>, rhs: Q) -> Self {
        Self {
            coeffs,
            rhs,
            equality: true,
        }
    }

    pub fn ge(coeffs: Vec<Q>, rhs: Q) -> Self {
        Self {
            coeffs,
            rhs,
            equality: false,
        }
    }

    pub fn le(coeffs: Vec<Q>, rhs: Q) -> Self {
        Self::ge(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }
}

/// Returns a point satisfying every constraint, or `None` when the system is
/// infeasible. Variables are unrestricted in sign.
///
/// Phase-I simplex with Bland's rule over `x = x⁺ − x⁻`, one surplus per
/// inequality and one artificial per row.
pub fn find_feasible(n: usize, constraints: &[Constraint]) -> Option<Vec<Q>> {
    if constraints.is_empty() {
        return Some(vec![Q::zero(); n]);
    }
    let m = constraints.len();
    let n_ineq = constraints.iter().filter(|c| !c.equality).count();
    // columns: x⁺ (n), x⁻ (n), surplus (n_ineq), artificial (m), rhs
    let n_struct = 2 * n + n_ineq;
    let width = n_struct + m + 1;
    let mut t = vec![vec![Q::zero(); width]; m];
    let mut slack = 0;
    for (i, c) in constraints.iter().enumerate() {
        debug_assert_eq!(c.coeffs.len(), n);
        for j in 0..n {
            t[i][j] = c.coeffs[j].clone();
            t[i][n + j] = -c.coeffs[j].clone();
        }
        if !c.equality {
            t[i][2 * n + slack] = -Q::one();
            slack += 1;
        }
        t[i][width - 1] = c.rhs.clone();
        if c.rhs.is_negative() {
            for x in t[i].iter_mut() {
                *x = -x.clone();
            }
        }
        t[i][n_struct + i] = Q::one();
    }
    let mut basis: Vec<usize> = (0..m).map(|i| n_struct + i).collect();

    // objective row: minimise the sum of artificials, stored as reduced costs
    let mut obj = vec![Q::zero(); width];
    for row in &t {
        for j in 0..n_struct {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }

    loop {
        let Some(enter) = (0..n_struct + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // unbounded direction in phase I cannot happen (objective ≥ 0)
            break;
        };
        pivot(&mut t, &mut obj, r, enter);
        basis[r] = enter;
    }

    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); 2 * n];
    for (i, &b) in basis.iter().enumerate() {
        if b < 2 * n {
            x[b] = t[i][width - 1].clone();
        }
    }
    Some((0..n).map(|j| &x[j] - &x[n + j]).collect())
}

fn pivot(t: &mut [Vec<Q>], obj: &mut [Q], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for (x, p) in obj.iter_mut().zip(&pivot_row) {
            *x -= &f * p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
    }

    #[test]
    fn primitive_vector() {
        let p = primitive_integer(&[Q::new(2.into(), 3.into()), Q::new((-4).into(), 3.into())]);
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2)]);
    }

    #[test]
    fn feasibility_decisions() {
        // x + y = 1, x >= 2, y >= 0 : infeasible
        let cs = vec![
            Constraint::eq(v(&[1, 1]), q(1)),
            Constraint::ge(v(&[1, 0]), q(2)),
            Constraint::ge(v(&[0, 1]), q(0)),
        ];
        assert!(find_feasible(2, &cs).is_none());

        // x - y = 0, x >= 1, y <= 3
        let cs = vec![
            Constraint::eq(v(&[1, -1]), q(0)),
            Constraint::ge(v(&[1, 0]), q(1)),
            Constraint::le(v(&[0, 1]), q(3)),
        ];
        let x = find_feasible(2, &cs).unwrap();
        assert_eq!(x[0], x[1]);
        assert!(x[0] >= q(1) && x[1] <= q(3));

        // negative values for free variables
        let cs = vec![Constraint::le(v(&[1]), q(-5))];
        let x = find_feasible(1, &cs).unwrap();
        assert!(x[0] <= q(-5));
    }
}
