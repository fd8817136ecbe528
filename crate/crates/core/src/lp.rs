//! Exact phase-1 simplex over the rationals.
//!
//! Decides feasibility of `A x = b, x >= 0` and returns a vertex solution.
//! Bland's rule keeps it terminating; sizes here are desk scale.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{IntMat, RatMat};

/// A nonnegative solution of `a x = b`, or `None` if none exists.
pub fn feasible_point(a: &RatMat, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.nrows();
    let n = a.ncols();
    assert_eq!(b.len(), m, "right-hand side length");
    let width = n + m + 1;
    let rhs = n + m;

    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut row = vec![BigRational::zero(); width];
            for (j, x) in row.iter_mut().take(n).enumerate() {
                *x = if flip { -a.get(i, j) } else { a.get(i, j).clone() };
            }
            row[n + i] = BigRational::one();
            row[rhs] = if flip { -&b[i] } else { b[i].clone() };
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of min sum(artificials)
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[rhs] -= &row[rhs];
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = &t[l][rhs] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // phase 1 is bounded below by zero
        let Some(l) = leave else { break };
        pivot(&mut t, &mut cost, l, enter);
        basis[l] = enter;
    }

    if !cost[rhs].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], cost: &mut [BigRational], l: usize, e: usize) {
    let inv = t[l][e].recip();
    for v in t[l].iter_mut() {
        *v = &*v * &inv;
    }
    let prow = t[l].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == l || row[e].is_zero() {
            continue;
        }
        let f = row[e].clone();
        for (x, p) in row.iter_mut().zip(&prow) {
            *x -= &f * p;
        }
    }
    if !cost[e].is_zero() {
        let f = cost[e].clone();
        for (x, p) in cost.iter_mut().zip(&prow) {
            *x -= &f * p;
        }
    }
}

/// Nonnegative coefficients expressing `x` in the cone spanned by the
/// columns of `gens`.
pub fn cone_coefficients(gens: &RatMat, x: &[BigRational]) -> Option<Vec<BigRational>> {
    feasible_point(gens, x)
}

/// A rational row combination `y` with `(y * b)_j >= 1` for every `j` in
/// `cols`, if one exists.
pub fn positive_row_combination(b: &IntMat, cols: &[usize]) -> Option<Vec<BigRational>> {
    let k = b.nrows();
    let s = cols.len();
    // variables: y+ (k), y- (k), surplus (s)
    let a = RatMat::from_fn(s, 2 * k + s, |row, v| {
        let j = cols[row];
        if v < k {
            BigRational::from_integer(b.get(v, j).clone())
        } else if v < 2 * k {
            -BigRational::from_integer(b.get(v - k, j).clone())
        } else if v - 2 * k == row {
            -BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    let rhs = vec![BigRational::one(); s];
    let x = feasible_point(&a, &rhs)?;
    Some((0..k).map(|i| &x[i] - &x[i + k]).collect())
}

/// Integer multiple of a rational vector clearing all denominators.
pub fn clear_vector(v: &[BigRational]) -> Vec<BigInt> {
    let d = v
        .iter()
        .fold(BigInt::one(), |l, x| num_integer::Integer::lcm(&l, x.denom()));
    v.iter()
        .map(|x| (x * BigRational::from_integer(d.clone())).to_integer())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn simple_feasible_and_infeasible() {
        let a = IntMat::from_i64(&[&[1, 1]]).to_rat();
        let x = feasible_point(&a, &[rat(3, 1)]).unwrap();
        assert_eq!(&x[0] + &x[1], rat(3, 1));
        assert!(feasible_point(&a, &[rat(-1, 1)]).is_none());
    }

    #[test]
    fn cone_membership() {
        let gens = IntMat::from_i64(&[&[1, 1], &[0, 2]]).to_rat();
        let c = cone_coefficients(&gens, &[rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(c, vec![rat(1, 2), rat(1, 2)]);
        assert!(cone_coefficients(&gens, &[rat(-1, 1), rat(0, 1)]).is_none());
    }

    #[test]
    fn positive_combination() {
        let q = IntMat::from_i64(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let y = positive_row_combination(&q, &[0, 1, 2, 3]).unwrap();
        let w = q.to_rat().left_mul_vec(&y).unwrap();
        assert!(w.iter().all(|v| *v >= rat(1, 1)));
        let bad = IntMat::from_i64(&[&[1, -1]]);
        assert!(positive_row_combination(&bad, &[0, 1]).is_none());
    }

    #[test]
    fn degenerate_rows() {
        // redundant equality rows must not break phase 1
        let a = IntMat::from_i64(&[&[1, 2, 0], &[2, 4, 0], &[0, 0, 1]]).to_rat();
        let x = feasible_point(&a, &[rat(2, 1), rat(4, 1), rat(0, 1)]).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![rat(2, 1), rat(4, 1), rat(0, 1)]);
    }
}
