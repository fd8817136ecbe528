//! F-completeness and W-positivity, the F/W/CF-matrix classifiers,
//! positivization of W-positive matrices, and F/W reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{combinations, gcd_all, ExactLinAlg, IntMat};
use crate::gale::{gale_dual, row_equivalent};
use crate::lattice::{lattice_intersection, row_quotient, Lattice};
use crate::lp;
use crate::normal_forms::{hnf, snf};

fn to_rat_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

/// Nonnegative coefficients of `x` over the columns `cols` of `a`, found by
/// solving over every maximal linearly independent subset of those
/// columns. Coefficients are indexed like `cols`.
pub fn cone_combination(a: &IntMat, cols: &[usize], x: &[BigRational]) -> Option<Vec<BigRational>> {
    if x.iter().all(Zero::is_zero) {
        return Some(vec![BigRational::zero(); cols.len()]);
    }
    let sub = a.select_cols(cols).to_rat();
    let k = sub.rank_exact();
    for pick in combinations(cols.len(), k) {
        let basis = sub.select_cols(&pick);
        if basis.rank_exact() != k {
            continue;
        }
        let Ok(Some(sol)) = crate::exact::solve_linear(&basis, x) else {
            continue;
        };
        if basis.mul_vec(&sol).ok().as_deref() != Some(x) {
            continue;
        }
        if sol.iter().all(|c| !c.is_negative()) {
            let mut out = vec![BigRational::zero(); cols.len()];
            for (p, c) in pick.iter().zip(sol) {
                out[*p] = c;
            }
            return Some(out);
        }
    }
    None
}

/// `true` iff the columns of `a` positively span `R^d`.
pub fn is_f_complete(a: &IntMat) -> bool {
    let d = a.nrows();
    if a.rank_exact() != d {
        return false;
    }
    (0..a.ncols()).all(|i| {
        let others: Vec<usize> = (0..a.ncols()).filter(|&j| j != i).collect();
        let target: Vec<BigRational> = a.col(i).iter().map(|v| -BigRational::from_integer(v.clone())).collect();
        cone_combination(a, &others, &target).is_some()
    })
}

/// Same test through the exact simplex; used to cross-check the subset
/// enumeration.
pub fn is_f_complete_lp(a: &IntMat) -> bool {
    if a.rank_exact() != a.nrows() {
        return false;
    }
    let ar = a.to_rat();
    (0..a.ncols()).all(|i| {
        let others: Vec<usize> = (0..a.ncols()).filter(|&j| j != i).collect();
        let target: Vec<BigRational> = ar.col(i).iter().map(|v| -v).collect();
        lp::cone_coefficients(&ar.select_cols(&others), &target).is_some()
    })
}

fn nonzero_cols(a: &IntMat) -> Vec<usize> {
    (0..a.ncols()).filter(|&j| !a.col_is_zero(j)).collect()
}

/// Integer coefficients `y` (content 1) with `y * a` positive on `cols`.
fn positive_coords(a: &IntMat, cols: &[usize]) -> Option<Vec<BigInt>> {
    let y = lp::positive_row_combination(a, cols)?;
    let mut yi = lp::clear_vector(&y);
    let g = gcd_all(&yi);
    if !g.is_zero() && !g.is_one() {
        yi.iter_mut().for_each(|v| *v = &*v / &g);
    }
    Some(yi)
}

/// A strictly positive vector of `L_r(a)`, or `None` if there is none.
pub fn w_positive_witness(a: &IntMat) -> Result<Option<Vec<BigInt>>> {
    if let Some(j) = (0..a.ncols()).find(|&j| a.col_is_zero(j)) {
        return Err(Error::Precondition(format!("column {} is zero", j + 1)));
    }
    let all: Vec<usize> = (0..a.ncols()).collect();
    Ok(positive_coords(a, &all).map(|y| a.left_mul_vec(&y).expect("length matches rows")))
}

pub fn is_w_positive(a: &IntMat) -> Result<bool> {
    Ok(w_positive_witness(a)?.is_some())
}

/// Positive matrix with the row lattice of `b` (full row rank), whose
/// first row is `y * b`. `y` must be primitive with `y * b` positive on
/// the nonzero columns. Returns `(positive, gamma)` with `gamma * b =
/// positive`.
fn positivize_from(b: &IntMat, y: &[BigInt]) -> Result<(IntMat, IntMat)> {
    let k = b.nrows();
    let col = IntMat::from_rows(y.iter().map(|v| vec![v.clone()]).collect())?;
    let w = hnf(&col).u;
    if w.mul(&col)?.get(0, 0) != &BigInt::one() {
        return Err(Error::Invariant("coefficient vector is not primitive".into()));
    }
    let w_inv_t = w
        .to_rat()
        .inverse()?
        .to_int()
        .ok_or_else(|| Error::Invariant("inverse of a unimodular matrix is not integral".into()))?
        .transpose();
    let mut gamma = w_inv_t;
    let mut p = gamma.mul(b)?;
    let c = p.row(0).to_vec();
    for i in 1..k {
        let mut t = BigInt::zero();
        for (x, cj) in p.row(i).iter().zip(&c) {
            if x.is_negative() && cj.is_positive() {
                let need = (-x).div_ceil(cj);
                if need > t {
                    t = need;
                }
            }
        }
        if t.is_zero() {
            continue;
        }
        for (j, cj) in c.iter().enumerate() {
            let v = p.get(i, j) + &t * cj;
            p.set(i, j, v);
        }
        for j in 0..k {
            let v = gamma.get(i, j) + &t * gamma.get(0, j);
            gamma.set(i, j, v);
        }
    }
    if !p.is_nonnegative() {
        return Err(Error::Invariant("lift did not produce a positive matrix".into()));
    }
    Ok((p, gamma))
}

/// Positive matrix `alpha * a` for a W-positive `a` of any rank, with
/// `alpha` unimodular. Zero rows of the Hermite form stay zero.
pub fn positivize_general(a: &IntMat) -> Result<(IntMat, IntMat)> {
    let d = a.nrows();
    let cols = nonzero_cols(a);
    if cols.is_empty() {
        return Ok((a.clone(), IntMat::identity(d)));
    }
    let h = hnf(a);
    let r = h.rank();
    let b = h.h.row_range(0, r);
    let y = positive_coords(&b, &cols).ok_or(Error::NotWPositive)?;
    let (p, gamma) = positivize_from(&b, &y)?;
    let mut alpha_block = IntMat::identity(d);
    for i in 0..r {
        for j in 0..r {
            alpha_block.set(i, j, gamma.get(i, j).clone());
        }
    }
    let alpha = alpha_block.mul(&h.u)?;
    let out = alpha.mul(a)?;
    debug_assert_eq!(out.row_range(0, r), p);
    Ok((out, alpha))
}

/// Strictly positive primitive relation among the columns of an
/// F-complete `v`, built by summing one relation per column.
fn positive_relation(v: &IntMat) -> Result<Vec<BigInt>> {
    let m = v.ncols();
    let mut total = vec![BigInt::zero(); m];
    for i in 0..m {
        let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        let target: Vec<BigRational> = v.col(i).iter().map(|x| -BigRational::from_integer(x.clone())).collect();
        let coeffs = cone_combination(v, &others, &target)
            .ok_or_else(|| Error::Invariant(format!("no positive relation through column {}", i + 1)))?;
        let mut rel = vec![BigRational::zero(); m];
        rel[i] = BigRational::one();
        for (p, c) in others.iter().zip(coeffs) {
            rel[*p] = c;
        }
        for (t, x) in total.iter_mut().zip(lp::clear_vector(&rel)) {
            *t += x;
        }
    }
    let g = gcd_all(&total);
    Ok(total.into_iter().map(|x| x / &g).collect())
}

/// Positive matrix row-equivalent to a W-matrix, following the relation
/// route: a strictly positive relation `c` among the columns of `G(q)` is
/// placed as first row, then added to the other rows just enough to make
/// them nonnegative.
pub fn positivize(q: &IntMat) -> Result<IntMat> {
    let report = classify_w(q);
    if !report.is_w_matrix {
        return Err(Error::NotWMatrix(report.violated_string()));
    }
    let v = gale_dual(q)?;
    let c = positive_relation(&v)?;
    let y = Lattice::row_lattice(q);
    if !y.contains_int(&c) {
        return Err(Error::Invariant("positive relation outside the row lattice".into()));
    }
    let coords = crate::exact::solve_linear(&q.transpose().to_rat(), &to_rat_vec(&c))?
        .ok_or_else(|| Error::Invariant("relation outside the row space".into()))?;
    let lambda: Vec<BigInt> = coords.iter().map(BigRational::to_integer).collect();
    Ok(positivize_from(q, &lambda)?.0)
}

/// Per-clause result of the F-matrix test. Clause `e` is the CF clause
/// `L_c(v) = Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrixReport {
    pub is_f_matrix: bool,
    pub is_cf_matrix: bool,
    pub violated: Vec<char>,
}

impl FMatrixReport {
    pub fn violated_string(&self) -> String {
        self.violated.iter().map(char::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Per-clause result of the W-matrix test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WMatrixReport {
    pub is_w_matrix: bool,
    pub violated: Vec<char>,
    /// Vector of `L_r(q)` positive on every nonzero column.
    pub positive_witness: Option<Vec<BigInt>>,
}

impl WMatrixReport {
    pub fn violated_string(&self) -> String {
        self.violated.iter().map(char::to_string).collect::<Vec<_>>().join(",")
    }
}

/// `true` when `v` has two distinct columns, one a positive multiple of
/// the other. Returns the first such pair (0-based).
pub fn proportional_pair(v: &IntMat) -> Option<(usize, usize)> {
    let m = v.ncols();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (v.col(i), v.col(j));
            if a.iter().all(Zero::is_zero) || b.iter().all(Zero::is_zero) {
                continue;
            }
            let parallel = (0..a.len()).all(|s| (0..a.len()).all(|t| &a[s] * &b[t] == &a[t] * &b[s]));
            let dot: BigInt = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            if parallel && dot.is_positive() {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn classify_f(v: &IntMat) -> FMatrixReport {
    let n = v.nrows();
    let mut violated = Vec::new();
    if v.rank_exact() != n {
        violated.push('a');
    }
    if !is_f_complete(v) {
        violated.push('b');
    }
    if (0..v.ncols()).any(|j| v.col_is_zero(j)) {
        violated.push('c');
    }
    if proportional_pair(v).is_some() {
        violated.push('d');
    }
    let is_f_matrix = violated.is_empty();
    if Lattice::column_lattice(v) != Lattice::standard(n) {
        violated.push('e');
    }
    FMatrixReport {
        is_f_matrix,
        is_cf_matrix: is_f_matrix && !violated.contains(&'e'),
        violated,
    }
}

/// `true` iff `HNF(q^T) = (I_r; 0)`, equivalent to clauses `a` and `b`.
pub fn has_identity_hnf(q: &IntMat) -> bool {
    let r = q.nrows();
    let h = hnf(&q.transpose()).h;
    (0..h.nrows()).all(|i| (0..r).all(|j| *h.get(i, j) == if i == j { BigInt::one() } else { BigInt::zero() }))
}

/// `true` when `L_r(q)` meets the coordinate plane of `i`, `j` in a vector
/// with entries of opposite signs.
fn mixed_sign_pair(l: &Lattice, i: usize, j: usize) -> bool {
    let m = l.ambient_dim();
    let mut plane = IntMat::zeros(2, m);
    plane.set(0, i, BigInt::one());
    plane.set(1, j, BigInt::one());
    let inter = lattice_intersection(&[l.clone(), Lattice::row_lattice(&plane)]).expect("same ambient dimension");
    match inter.rank() {
        0 => false,
        1 => {
            let g = inter.basis().row(0);
            (&g[i] * &g[j]).is_negative()
        }
        _ => true,
    }
}

pub fn classify_w(q: &IntMat) -> WMatrixReport {
    let r = q.nrows();
    let m = q.ncols();
    let mut violated = Vec::new();
    if q.rank_exact() != r {
        violated.push('a');
    }
    let lat = Lattice::row_lattice(q);
    let quotient = lat
        .int_basis()
        .map(|b| row_quotient(&b))
        .expect("row lattice of an integer matrix is integral");
    if !quotient.is_free() {
        violated.push('b');
    }
    let cols = nonzero_cols(q);
    let positive_witness = positive_coords(q, &cols).map(|y| q.left_mul_vec(&y).expect("length matches rows"));
    if positive_witness.is_none() {
        violated.push('c');
    }
    if cols.len() != m {
        violated.push('d');
    }
    let unit_vector = (0..m).any(|i| {
        let mut e = vec![BigInt::zero(); m];
        e[i] = BigInt::one();
        lat.contains_int(&e)
    });
    if unit_vector {
        violated.push('e');
    }
    let mixed = (0..m).any(|i| (i + 1..m).any(|j| mixed_sign_pair(&lat, i, j)));
    if mixed {
        violated.push('f');
    }
    WMatrixReport {
        is_w_matrix: violated.is_empty(),
        violated,
        positive_witness,
    }
}

/// Divides every column of an F-matrix by the gcd of its entries.
pub fn f_reduce(v: &IntMat) -> Result<(IntMat, Vec<BigInt>)> {
    let report = classify_f(v);
    if !report.is_f_matrix {
        return Err(Error::NotFMatrix(report.violated_string()));
    }
    let d: Vec<BigInt> = (0..v.ncols()).map(|j| v.col_gcd(j)).collect();
    let red = IntMat::from_fn(v.nrows(), v.ncols(), |i, j| v.get(i, j) / &d[j]);
    Ok((red, d))
}

/// One `i`-reduction step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    /// 1-based column index
    pub column: usize,
    /// gcd of the column of the Gale dual that was divided out
    pub divisor: BigInt,
    pub result: IntMat,
}

fn require_w(q: &IntMat) -> Result<()> {
    let report = classify_w(q);
    if !report.is_w_matrix {
        return Err(Error::NotWMatrix(report.violated_string()));
    }
    Ok(())
}

fn i_reduction(q: &IntMat, i: usize, d: &BigInt) -> Result<IntMat> {
    let r = q.nrows();
    let others: Vec<usize> = (0..q.ncols()).filter(|&j| j != i).collect();
    let s = snf(&q.select_cols(&others));
    if s.factors.len() != r || s.factors[r - 1] != *d {
        return Err(Error::Invariant(format!(
            "quotient after removing column {} is not cyclic of order {d}",
            i + 1
        )));
    }
    let mut p = s.alpha.mul(q)?;
    for row in 0..r {
        let v = p.get(row, i) * d;
        p.set(row, i, v);
    }
    for j in 0..p.ncols() {
        let (quo, rem) = p.get(r - 1, j).div_rem(d);
        if !rem.is_zero() {
            return Err(Error::Invariant(format!(
                "last row not divisible by {d} in the reduction of column {}",
                i + 1
            )));
        }
        p.set(r - 1, j, quo);
    }
    Ok(p)
}

/// The chain of `i`-reductions for `i = 1..n+r`, skipping columns whose
/// Gale dual column is already primitive.
pub fn w_reduce_steps(q: &IntMat) -> Result<Vec<ReductionStep>> {
    require_w(q)?;
    let mut cur = q.clone();
    let mut steps = Vec::new();
    for i in 0..q.ncols() {
        let v = gale_dual(&cur)?;
        let d = v.col_gcd(i);
        if d.is_one() {
            continue;
        }
        cur = i_reduction(&cur, i, &d)?;
        steps.push(ReductionStep {
            column: i + 1,
            divisor: d,
            result: cur.clone(),
        });
    }
    Ok(steps)
}

/// W-reduction by iterated `i`-reductions, checked against
/// `G(G(q)^{F-red})`.
pub fn w_reduce(q: &IntMat) -> Result<IntMat> {
    let steps = w_reduce_steps(q)?;
    let out = steps.last().map_or_else(|| q.clone(), |s| s.result.clone());
    let (v_red, _) = f_reduce(&gale_dual(q)?)?;
    let expected = gale_dual(&v_red)?;
    if !row_equivalent(&out, &expected) {
        return Err(Error::Invariant("i-reductions disagree with the Gale route".into()));
    }
    Ok(out)
}

/// `true` iff no `L_r(q^i)` has cotorsion, cross-checked against the
/// column gcds of `G(q)`.
pub fn is_w_reduced(q: &IntMat) -> Result<bool> {
    require_w(q)?;
    let intrinsic = (0..q.ncols()).all(|i| {
        let others: Vec<usize> = (0..q.ncols()).filter(|&j| j != i).collect();
        row_quotient(&q.select_cols(&others)).is_free()
    });
    let v = gale_dual(q)?;
    let via_dual = (0..v.ncols()).all(|j| v.col_gcd(j).is_one());
    if intrinsic != via_dual {
        return Err(Error::Invariant("reducedness criteria disagree".into()));
    }
    Ok(intrinsic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn imat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_i64(rows)
    }

    #[test]
    fn f_completeness() {
        let v = imat(&[&[1, -1, 1, 0], &[0, 0, 2, -1]]);
        assert!(is_f_complete(&v));
        assert!(is_f_complete_lp(&v));
        assert!(!is_f_complete(&imat(&[&[1, 0], &[0, 1]])));
        assert!(!is_f_complete(&imat(&[&[1, 0, 1], &[0, 1, 1]])));
        assert!(!is_f_complete_lp(&imat(&[&[1, 0, 1], &[0, 1, 1]])));
    }

    #[test]
    fn w_positivity() {
        let q = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let w = w_positive_witness(&q).unwrap().unwrap();
        assert!(w.iter().all(|x| x.is_positive()));
        assert!(Lattice::row_lattice(&q).contains_int(&w));
        assert!(!is_w_positive(&imat(&[&[1, -1]])).unwrap());
        assert!(is_w_positive(&imat(&[&[2, 2, 15, 15], &[-1, -1, -7, -7]])).unwrap());
        assert!(is_w_positive(&imat(&[&[1, 0]])).is_err());
    }

    #[test]
    fn positivize_examples() {
        let q = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let p = positivize(&q).unwrap();
        assert!(p.is_nonnegative());
        assert!(row_equivalent(&p, &q));

        let scrambled = imat(&[&[1, 1, 0, 0], &[-1, 0, 1, 2]]);
        let p = positivize(&scrambled).unwrap();
        assert!(p.is_nonnegative());
        assert!(p.row(0).iter().all(|x| x.is_positive()));
        assert!(row_equivalent(&p, &scrambled));

        let red = imat(&[&[2, 2, 15, 15], &[-1, -1, -7, -7]]);
        let p = positivize(&red).unwrap();
        assert!(p.is_nonnegative());
        assert!(row_equivalent(&p, &imat(&[&[1, 1, 0, 0], &[0, 0, 1, 1]])));

        assert!(matches!(
            positivize(&imat(&[&[1, 0], &[0, 1]])),
            Err(Error::NotWMatrix(_))
        ));
    }

    #[test]
    fn general_positivization_handles_rank_and_zero_columns() {
        let a = imat(&[&[1, -1, 0, 2], &[2, -2, 0, 4], &[0, 1, 0, 1]]);
        let (p, alpha) = positivize_general(&a).unwrap();
        assert!(p.is_nonnegative());
        assert_eq!(alpha.mul(&a).unwrap(), p);
        assert_eq!(alpha.det().unwrap().abs(), int(1));
        assert!(matches!(
            positivize_general(&imat(&[&[1, -1]])),
            Err(Error::NotWPositive)
        ));
    }

    #[test]
    fn f_classification() {
        let v = imat(&[&[1, -1, 1, 0], &[0, 0, 2, -1]]);
        let rep = classify_f(&v);
        assert!(rep.is_f_matrix && rep.is_cf_matrix && rep.violated.is_empty());
        let rep = classify_f(&imat(&[&[1, 0, 2], &[0, 1, 0]]));
        assert!(rep.violated.contains(&'d'));
        assert!(!rep.is_f_matrix);
        let rep = classify_f(&imat(&[&[2, -1, 0, 0], &[0, 0, 5, -3]]));
        assert!(rep.is_f_matrix && rep.is_cf_matrix);
        let rep = classify_f(&imat(&[&[2, 0, -2], &[0, 1, -1]]));
        assert!(rep.is_f_matrix && !rep.is_cf_matrix);
        assert_eq!(rep.violated, vec!['e']);
    }

    #[test]
    fn w_classification() {
        let rep = classify_w(&imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]));
        assert!(rep.is_w_matrix, "{:?}", rep.violated);
        assert!(rep.positive_witness.is_some());
        let rep = classify_w(&imat(&[&[1, 0], &[0, 1]]));
        assert!(rep.violated.contains(&'e'));
        assert!(classify_w(&imat(&[&[1, 2, 0, 0], &[0, 0, 3, 5]])).is_w_matrix);
        // contains (1, -1, 0)
        let rep = classify_w(&imat(&[&[1, -1, 0], &[0, 1, 1]]));
        assert!(rep.violated.contains(&'f'));
        let rep = classify_w(&imat(&[&[2, 0, 2], &[0, 2, 2]]));
        assert!(rep.violated.contains(&'b'));
        assert!(has_identity_hnf(&imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]])));
        assert!(!has_identity_hnf(&imat(&[&[2, 0, 2], &[0, 2, 2]])));
    }

    #[test]
    fn f_reduction() {
        let (red, d) = f_reduce(&imat(&[&[2, -1, 0, 0], &[0, 0, 5, -3]])).unwrap();
        assert_eq!(red, imat(&[&[1, -1, 0, 0], &[0, 0, 1, -1]]));
        assert_eq!(d, vec![int(2), int(1), int(5), int(3)]);
        let v = imat(&[&[1, -1, 1, 0], &[0, 0, 2, -1]]);
        let (red, d) = f_reduce(&v).unwrap();
        assert_eq!(red, v);
        assert!(d.iter().all(One::is_one));
    }

    #[test]
    fn w_reduction_chain() {
        let q = imat(&[&[1, 2, 0, 0], &[0, 0, 3, 5]]);
        let steps = w_reduce_steps(&q).unwrap();
        let cols: Vec<usize> = steps.iter().map(|s| s.column).collect();
        assert_eq!(cols, vec![1, 3, 4]);
        let expected = [
            imat(&[&[2, 2, 3, 5], &[-1, -1, 0, 0]]),
            imat(&[&[2, 2, 15, 5], &[-1, -1, -6, -2]]),
            imat(&[&[2, 2, 15, 15], &[-1, -1, -7, -7]]),
        ];
        for (s, e) in steps.iter().zip(&expected) {
            assert!(row_equivalent(&s.result, e));
        }
        let out = w_reduce(&q).unwrap();
        assert_eq!(gale_dual(&out).unwrap(), imat(&[&[1, -1, 0, 0], &[0, 0, 1, -1]]));
    }

    #[test]
    fn reducedness() {
        assert!(is_w_reduced(&imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]])).unwrap());
        assert!(!is_w_reduced(&imat(&[&[1, 2, 0, 0], &[0, 0, 3, 5]])).unwrap());
        assert!(is_w_reduced(&imat(&[&[1, 1, 1]])).unwrap());
    }
}
