//! Exact linear algebra over the integers and rationals: Hermite normal
//! form, reduced row echelon form, inversion and span membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Output rows are nonzero, in echelon form with strictly increasing pivot
/// columns, positive pivots, and entries above each pivot reduced into
/// `[0, pivot)`. Two generating sets span the same lattice iff their HNFs
/// are equal.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> IntMatrix {
    let mut m: IntMatrix = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut top = 0;
    for col in 0..ncols {
        if top >= m.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in this column at or below `top`
            let pick = (top..m.len())
                .filter(|&r| !m[r][col].is_zero())
                .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(p) = pick else { break };
            m.swap(top, p);
            let mut done = true;
            for r in top + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = m[r][col].div_floor(&m[top][col]);
                for c in col..ncols {
                    let d = &q * &m[top][c];
                    m[r][c] -= d;
                }
                if !m[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < m.len() && !m[top][col].is_zero() {
            if m[top][col].is_negative() {
                for c in col..ncols {
                    m[top][c] = -m[top][c].clone();
                }
            }
            for r in 0..top {
                let q = m[r][col].div_floor(&m[top][col]);
                if !q.is_zero() {
                    for c in col..ncols {
                        let d = &q * &m[top][c];
                        m[r][c] -= d;
                    }
                }
            }
            top += 1;
        }
    }
    m.truncate(top);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// Pivot column of each HNF row.
pub fn pivots(hnf: &[Vec<BigInt>]) -> Vec<usize> {
    hnf.iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("zero row in HNF"))
        .collect()
}

/// Scales a rational vector to a primitive-free integer vector by clearing
/// denominators (no gcd division of numerators).
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect()
}

/// Reduced row echelon form; returns the nonzero rows and their pivots.
pub fn rref(rows: &[Vec<BigRational>]) -> (RatMatrix, Vec<usize>) {
    let mut m: RatMatrix = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut piv = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let Some(p) = (top..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(top, p);
        let inv = m[top][col].recip();
        for c in 0..ncols {
            m[top][c] = &m[top][c] * &inv;
        }
        for r in 0..m.len() {
            if r != top && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let d = &f * &m[top][c];
                    m[r][c] -= d;
                }
            }
        }
        piv.push(col);
        top += 1;
        if top == m.len() {
            break;
        }
    }
    m.truncate(top);
    (m, piv)
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    rref(rows).1.len()
}

/// Coefficients `c` with `sum c_i * basis_i = v`, if `v` lies in the span.
/// `basis` must be linearly independent.
pub fn solve_in_span(basis: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = basis.len();
    let dim = v.len();
    // columns = basis vectors, augmented with v
    let mut aug: RatMatrix = (0..dim)
        .map(|r| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![BigRational::zero(); n]);
    }
    let (red, piv) = rref(&aug);
    if piv.contains(&n) || piv.len() < n {
        return None;
    }
    aug = red;
    Some((0..n).map(|i| aug[i][n].clone()).collect())
}

pub fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> RatMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(BigRational::zero(), |acc, k| {
                        if row[k].is_zero() {
                            acc
                        } else {
                            acc + &row[k] * &b[k][j]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse(a: &[Vec<BigRational>]) -> Option<RatMatrix> {
    let n = a.len();
    let aug: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn rats(rows: &[&[i64]]) -> RatMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect()
    }

    #[test]
    fn hnf_of_small_lattice() {
        let h = hermite_normal_form(&ints(&[&[2, 4], &[3, 1]]));
        // lattice spanned by (2,4),(3,1) has determinant 10
        assert_eq!(h, ints(&[&[1, 7], &[0, 10]]));
        assert_eq!(pivots(&h), vec![0, 1]);
    }

    #[test]
    fn hnf_is_a_lattice_invariant() {
        let a = hermite_normal_form(&ints(&[&[1, 2, 3], &[0, 4, 5]]));
        let b = hermite_normal_form(&ints(&[&[1, 6, 8], &[0, 4, 5], &[1, 2, 3]]));
        assert_eq!(a, b);
    }

    #[test]
    fn hnf_drops_dependent_rows() {
        let h = hermite_normal_form(&ints(&[&[2, 2], &[1, 1], &[0, 0]]));
        assert_eq!(h, ints(&[&[1, 1]]));
    }

    #[test]
    fn inverse_and_solve() {
        let a = rats(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&rats(&[&[1, 2], &[2, 4]])).is_none());
        let basis = rats(&[&[1, 0, 1], &[0, 1, 1]]);
        let v = rats(&[&[2, 3, 5]])[0].clone();
        let c = solve_in_span(&basis, &v).unwrap();
        assert_eq!(c, rats(&[&[2, 3]])[0]);
        assert!(solve_in_span(&basis, &rats(&[&[1, 1, 1]])[0]).is_none());
    }
}
