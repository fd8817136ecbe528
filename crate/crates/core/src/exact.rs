//! Exact arithmetic and dense matrix primitives.
//!
//! Every other module works on [`IntMat`] (arbitrary precision integers) or
//! [`RatMat`] (rationals in lowest terms). Matrices are values: operations
//! return new matrices and never mutate their inputs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Shorthand for building a `BigInt` from a machine integer.
pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Shorthand for building a rational `num/den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(vals: I) -> BigInt {
    vals.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

pub fn lcm_all<'a, I: IntoIterator<Item = &'a BigInt>>(vals: I) -> BigInt {
    vals.into_iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::one(), |l, v| l.lcm(v))
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Dense row-major matrix.
///
/// Zero-sized shapes are allowed for intermediate results (e.g. the
/// complement of a full column selection); the text parser never produces
/// them.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMat = Matrix<BigInt>;
pub type RatMat = Matrix<BigRational>;

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows_iter().map(<[T]>::to_vec).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Columns selected by 0-based indices, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Rows selected by 0-based indices, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn row_range(&self, start: usize, end: usize) -> Self {
        let idx: Vec<usize> = (start..end).collect();
        self.select_rows(&idx)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.rows > 0 && other.rows > 0 && self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j).is_zero())
    }

    /// Drops all-zero rows.
    pub fn nonzero_rows(&self) -> Self {
        let idx: Vec<usize> = (0..self.rows).filter(|&i| !self.row_is_zero(i)).collect();
        let mut m = self.select_rows(&idx);
        if idx.is_empty() {
            m.cols = self.cols;
        }
        m
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].clone() + a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        Ok((0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .fold(T::zero(), |acc, (i, x)| acc + x * self.get(i, j))
            })
            .collect())
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, x)| acc + a * x))
            .collect())
    }
}

impl IntMat {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Matrix::from_rows(rows).expect("ragged literal")
    }

    pub fn from_vec_i64(rows: Vec<Vec<i64>>) -> Self {
        let rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        Matrix::from_rows(rows).expect("ragged literal")
    }

    pub fn to_rat(&self) -> RatMat {
        self.map(|v| BigRational::from_integer(v.clone()))
    }

    pub fn scale(&self, k: &BigInt) -> IntMat {
        self.map(|v| v * k)
    }

    pub fn neg(&self) -> IntMat {
        self.map(|v| -v)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    /// gcd of the entries of column `j` (0 for a zero column).
    pub fn col_gcd(&self, j: usize) -> BigInt {
        (0..self.rows).fold(BigInt::zero(), |g, i| g.gcd(self.get(i, j)))
    }

    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(bareiss_det(self.to_rows()))
    }
}

impl RatMat {
    pub fn from_i64(rows: &[&[(i64, i64)]]) -> Self {
        let rows: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect())
            .collect();
        Matrix::from_rows(rows).expect("ragged literal")
    }

    /// Least common multiple of all denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()))
    }

    /// `D * self` as an integer matrix, `D` the common denominator.
    pub fn clear_denominators(&self) -> (IntMat, BigInt) {
        let d = self.common_denominator();
        let m = self.map(|v| (v * BigRational::from_integer(d.clone())).to_integer());
        (m, d)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(BigRational::is_integer)
    }

    pub fn to_int(&self) -> Option<IntMat> {
        if self.is_integral() {
            Some(self.map(BigRational::to_integer))
        } else {
            None
        }
    }

    pub fn scale(&self, k: &BigRational) -> RatMat {
        self.map(|v| v * k)
    }

    pub fn det(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (m, d) = self.clear_denominators();
        let num = bareiss_det(m.to_rows());
        let den = num_traits::pow(d, self.rows);
        Ok(BigRational::new(num, den))
    }

    /// Exact inverse of a non-singular square matrix.
    pub fn inverse(&self) -> Result<RatMat> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                r
            })
            .collect();
        let pivots = rref(&mut aug, n);
        if pivots.len() < n {
            return Err(Error::Precondition("matrix is singular".into()));
        }
        let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(rows)
    }
}

/// Fraction-free (Bareiss) determinant.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Fraction-free rank over the rationals.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&m[i][j] * &m[rank][c] - &m[i][c] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// In-place reduced row echelon form over Q on the first `ncols` columns.
/// Returns the pivot columns.
pub(crate) fn rref(m: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact determinant and rank for both integer and rational matrices.
pub trait ExactLinAlg {
    fn det_exact(&self) -> Result<BigRational>;
    fn rank_exact(&self) -> usize;
}

impl ExactLinAlg for IntMat {
    fn det_exact(&self) -> Result<BigRational> {
        self.det().map(BigRational::from_integer)
    }

    fn rank_exact(&self) -> usize {
        bareiss_rank(self.to_rows(), self.cols)
    }
}

impl ExactLinAlg for RatMat {
    fn det_exact(&self) -> Result<BigRational> {
        self.det()
    }

    fn rank_exact(&self) -> usize {
        let (m, _) = self.clear_denominators();
        bareiss_rank(m.to_rows(), self.cols)
    }
}

/// One rational solution of `A x = b` (free variables set to zero), or
/// `None` when the system is inconsistent.
pub fn solve_linear(a: &RatMat, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.nrows()
        )));
    }
    let n = a.ncols();
    let mut aug: Vec<Vec<BigRational>> = (0..a.nrows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if aug[pivots.len()..].iter().any(|r| !r[n].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Ok(Some(x))
}

/// Sorted set of distinct column indices, 1-based at every external
/// boundary.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Validates 1-based indices against a column count. Input order is
    /// irrelevant; duplicates are rejected.
    pub fn new(mut idx: Vec<usize>, ncols: usize) -> Result<Self> {
        idx.sort_unstable();
        for w in idx.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Precondition(format!("duplicate index {}", w[0])));
            }
        }
        if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > ncols) {
            return Err(Error::IndexOutOfRange { index: bad, max: ncols });
        }
        Ok(IndexSet(idx))
    }

    /// From 0-based positions; caller guarantees validity.
    pub fn from_zero_based(idx: &[usize]) -> Self {
        let mut v: Vec<usize> = idx.iter().map(|i| i + 1).collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn one_based(&self) -> &[usize] {
        &self.0
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i - 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, one_based: usize) -> bool {
        self.0.binary_search(&one_based).is_ok()
    }

    pub fn complement(&self, ncols: usize) -> IndexSet {
        IndexSet((1..=ncols).filter(|i| !self.contains(*i)).collect())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Columns of `a` indexed by `set`, or by its complement.
pub fn submatrix_cols<T: Clone>(a: &Matrix<T>, set: &IndexSet, complement: bool) -> Result<Matrix<T>> {
    if let Some(&bad) = set.one_based().iter().find(|&&i| i > a.ncols()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            max: a.ncols(),
        });
    }
    let chosen = if complement {
        set.complement(a.ncols())
    } else {
        set.clone()
    };
    Ok(a.select_cols(&chosen.zero_based()))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn fmt_rat(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.rows_iter() {
            let line: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Display for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.rows_iter() {
            let line: Vec<String> = r.iter().map(fmt_rat).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Decimal string for a rational entry (`"p/q"` or plain integer).
pub fn rat_to_string(v: &BigRational) -> String {
    fmt_rat(v)
}

pub fn parse_rational(tok: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid number {tok:?}"));
    match tok.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {tok:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => tok.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
    }
}

/// Parses the matrix text format: one row per line, whitespace separated
/// entries, `p/q` rationals, `#` comments and blank lines ignored.
pub fn parse_rat_matrix(text: &str) -> Result<RatMat> {
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("line {}: {m}", lineno + 1)),
                other => other,
            })?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no matrix rows found".into()));
    }
    Matrix::from_rows(rows).map_err(|_| Error::Parse("rows have different lengths".into()))
}

pub fn parse_int_matrix(text: &str) -> Result<IntMat> {
    parse_rat_matrix(text)?
        .to_int()
        .ok_or_else(|| Error::Parse("expected an integer matrix".into()))
}

/// `true` when every entry of `v` is zero.
pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn det_small_cases() {
        let a = IntMat::from_i64(&[&[1, 0], &[1, 2]]);
        assert_eq!(a.det().unwrap(), int(2));
        assert_eq!(IntMat::identity(3).det_exact().unwrap(), BigRational::one());
        let r = RatMat::from_i64(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 2)]]);
        assert_eq!(r.det_exact().unwrap(), rat(1, 4));
    }

    #[test]
    fn det_rejects_non_square() {
        let a = IntMat::from_i64(&[&[1, 2, 3]]);
        assert!(matches!(a.det(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        // frozen 4x4 sample; cofactor oracle computed in-test
        let rows = vec![
            vec![3, -7, 2, 9],
            vec![-1, 4, 0, -5],
            vec![8, 2, -6, 1],
            vec![0, -3, 7, 4],
        ];
        let expected = cofactor_det(&rows);
        let a = IntMat::from_vec_i64(rows);
        assert_eq!(a.det().unwrap(), int(expected));
    }

    #[test]
    fn rank_cases() {
        let v = IntMat::from_i64(&[&[1, -1, 1, 0], &[0, 0, 2, -1]]);
        assert_eq!(v.rank_exact(), 2);
        assert_eq!(IntMat::zeros(3, 4).rank_exact(), 0);
        let dep = IntMat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(dep.rank_exact(), 2);
    }

    #[test]
    fn submatrix_selection() {
        let q = IntMat::from_i64(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let i = IndexSet::new(vec![2, 4], 4).unwrap();
        assert_eq!(
            submatrix_cols(&q, &i, false).unwrap(),
            IntMat::from_i64(&[&[1, 0], &[1, 2]])
        );
        let v = IntMat::from_i64(&[&[1, -1, 1, 0], &[0, 0, 2, -1]]);
        assert_eq!(
            submatrix_cols(&v, &i, true).unwrap(),
            IntMat::from_i64(&[&[1, 1], &[0, 2]])
        );
        let all = IndexSet::new(vec![1, 2, 3, 4], 4).unwrap();
        assert_eq!(submatrix_cols(&q, &all, false).unwrap(), q);
    }

    #[test]
    fn index_set_errors() {
        assert!(matches!(
            IndexSet::new(vec![5], 4),
            Err(Error::IndexOutOfRange { index: 5, max: 4 })
        ));
        assert!(IndexSet::new(vec![0], 4).is_err());
        assert!(IndexSet::new(vec![2, 2], 4).is_err());
    }

    #[test]
    fn parse_and_print() {
        let m = parse_rat_matrix("# comment\n1 -1/2\n\n 3/6   4 # tail\n").unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(*m.get(1, 0), rat(1, 2));
        assert_eq!(m.to_string(), "1 -1/2\n1/2 4\n");
        assert!(parse_int_matrix("1 2\n3").is_err());
        assert!(parse_int_matrix("1/2").is_err());
        assert!(parse_rat_matrix("1/0").is_err());
        assert!(parse_rat_matrix("x").is_err());
    }

    #[test]
    fn inverse_and_solve() {
        let q = IntMat::from_i64(&[&[1, 0], &[1, 2]]).to_rat();
        let inv = q.inverse().unwrap();
        assert_eq!(inv, RatMat::from_i64(&[&[(1, 1), (0, 1)], &[(-1, 2), (1, 2)]]));
        let x = solve_linear(&q, &[rat(1, 1), rat(3, 1)]).unwrap().unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        let sing = IntMat::from_i64(&[&[1, 1], &[1, 1]]).to_rat();
        assert!(solve_linear(&sing, &[rat(1, 1), rat(2, 1)]).unwrap().is_none());
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(12, 18), (-4, 6), (0, 5), (7, 0), (-3, -9)] {
            let (g, x, y) = ext_gcd(&int(a), &int(b));
            assert_eq!(&x * int(a) + &y * int(b), g);
            assert_eq!(g, int(a).gcd(&int(b)));
        }
    }

    #[test]
    fn combinations_lex() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3).len(), 0);
        assert_eq!(combinations(4, 2)[1], vec![0, 2]);
    }
}
