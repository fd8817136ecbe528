//! Hermite and Smith normal forms with their unimodular transforms, and
//! the positive row echelon reduction of W-positive matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ext_gcd, IntMat, Matrix, RatMat};

/// Hermite normal form `h = u * a` with `u` unimodular.
///
/// `pivots[i]` is the (0-based) pivot column of row `i`; rows past
/// `pivots.len()` are zero. The rows of `u` matching zero rows of `h` are a
/// basis of the left kernel and are themselves stored in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf<T> {
    pub h: Matrix<T>,
    pub u: IntMat,
    pub pivots: Vec<usize>,
}

impl<T> Hnf<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Rows of `u` spanning the left kernel of the input.
    pub fn kernel_rows(&self) -> IntMat {
        self.u.row_range(self.rank(), self.u.nrows())
    }
}

/// Integer Hermite normal form (row style, pivots on the left).
pub fn hnf(a: &IntMat) -> Hnf<BigInt> {
    let (h, u, pivots) = hnf_core(a);
    let r = pivots.len();
    let m = a.nrows();
    let mut u_rows = u;
    if r < m && r > 0 {
        // canonical kernel block
        let kernel = IntMat::from_rows(u_rows[r..].to_vec()).expect("rectangular");
        let (kh, _, _) = hnf_core(&kernel);
        for (dst, src) in u_rows[r..].iter_mut().zip(kh) {
            *dst = src;
        }
    }
    Hnf {
        h: IntMat::from_rows(h).expect("rectangular").with_cols(a.ncols()),
        u: IntMat::from_rows(u_rows).expect("rectangular").with_cols(m),
        pivots,
    }
}

/// Rational Hermite normal form: clear denominators by their lcm `D`, take
/// the integer form, divide `h` back by `D`. `u` stays integral.
pub fn hnf_rat(a: &RatMat) -> Hnf<BigRational> {
    let (ai, d) = a.clear_denominators();
    let res = hnf(&ai);
    let dr = BigRational::from_integer(d);
    Hnf {
        h: res.h.map(|v| BigRational::from_integer(v.clone()) / &dr),
        u: res.u,
        pivots: res.pivots,
    }
}

impl<T: Clone> Matrix<T> {
    // keeps the column count of an empty matrix built from zero rows
    fn with_cols(self, cols: usize) -> Self {
        if self.nrows() == 0 {
            Matrix::new(0, cols, Vec::new()).expect("empty")
        } else {
            self
        }
    }
}

type Rows = Vec<Vec<BigInt>>;

fn row_axpy(rows: &mut Rows, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let s = rows[src].clone();
    for (x, y) in rows[dst].iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

fn negate_row(rows: &mut Rows, i: usize) {
    for x in rows[i].iter_mut() {
        *x = -&*x;
    }
}

fn hnf_core(a: &IntMat) -> (Rows, Rows, Vec<usize>) {
    let m = a.nrows();
    let n = a.ncols();
    let mut h = a.to_rows();
    let mut u: Rows = IntMat::identity(m).to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()).then(i.cmp(&j)));
            let Some(p) = best else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut residue = false;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut u, i, r, &q);
                residue |= !h[i][c].is_zero();
            }
            if !residue {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            row_axpy(&mut h, i, r, &q);
            row_axpy(&mut u, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    (h, u, pivots)
}

/// `true` when `m` satisfies both clauses of the Hermite normal form
/// definition (pivot >= 1, zeros left of the pivot, entries above a pivot
/// reduced into `[0, pivot)`, trailing zero rows).
pub fn is_hnf(m: &IntMat) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut seen_zero = false;
    for i in 0..m.nrows() {
        let lead = (0..m.ncols()).find(|&j| !m.get(i, j).is_zero());
        match lead {
            None => seen_zero = true,
            Some(j) => {
                if seen_zero || last_pivot.is_some_and(|p| j <= p) || !m.get(i, j).is_positive() {
                    return false;
                }
                last_pivot = Some(j);
                pivots.push((i, j));
            }
        }
    }
    for &(k, fk) in &pivots {
        let p = m.get(k, fk);
        for i in 0..k {
            let v = m.get(i, fk);
            if v.is_negative() || v >= p {
                return false;
            }
        }
    }
    true
}

/// Smith normal form `s = alpha * a * beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub s: IntMat,
    pub alpha: IntMat,
    pub beta: IntMat,
    /// Nonzero diagonal entries `c_1 | c_2 | ... | c_k`, all positive.
    pub factors: Vec<BigInt>,
}

pub fn snf(a: &IntMat) -> Snf {
    let d = a.nrows();
    let m = a.ncols();
    let mut s = a.to_rows();
    let mut alpha: Rows = IntMat::identity(d).to_rows();
    // beta is stored transposed so column operations become row operations
    let mut beta_t: Rows = IntMat::identity(m).to_rows();

    let col_axpy = |s: &mut Rows, dst: usize, src: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        for row in s.iter_mut() {
            let v = &row[src] * q;
            row[dst] -= v;
        }
    };

    let mut factors = Vec::new();
    for t in 0..d.min(m) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..d {
                for j in t..m {
                    if s[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            s.swap(t, pi);
            alpha.swap(t, pi);
            for row in s.iter_mut() {
                row.swap(t, pj);
            }
            beta_t.swap(t, pj);

            let mut residue = false;
            for i in t + 1..d {
                if s[i][t].is_zero() {
                    continue;
                }
                let q = s[i][t].div_floor(&s[t][t]);
                row_axpy(&mut s, i, t, &q);
                row_axpy(&mut alpha, i, t, &q);
                residue |= !s[i][t].is_zero();
            }
            for j in t + 1..m {
                if s[t][j].is_zero() {
                    continue;
                }
                let q = s[t][j].div_floor(&s[t][t]);
                col_axpy(&mut s, j, t, &q);
                row_axpy(&mut beta_t, j, t, &q);
                residue |= !s[t][j].is_zero();
            }
            if residue {
                continue;
            }
            let pivot = s[t][t].clone();
            let offender = (t + 1..d).find(|&i| (t + 1..m).any(|j| !s[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut s, t, i, &minus_one);
                    row_axpy(&mut alpha, t, i, &minus_one);
                }
                None => break,
            }
        }
        if s[t][t].is_zero() {
            break;
        }
        if s[t][t].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut alpha, t);
        }
        factors.push(s[t][t].clone());
    }
    Snf {
        s: IntMat::from_rows(s).expect("rectangular").with_cols(m),
        alpha: IntMat::from_rows(alpha).expect("rectangular").with_cols(d),
        beta: IntMat::from_rows(beta_t).expect("rectangular").with_cols(m).transpose(),
        factors,
    }
}

/// Positive row echelon form `e = alpha * a * beta` with `beta` a
/// permutation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveEchelon {
    pub e: IntMat,
    pub alpha: IntMat,
    pub beta: IntMat,
}

/// `true` for a row echelon matrix: zero rows at the bottom and strictly
/// increasing leading columns.
pub fn is_row_echelon(m: &IntMat) -> bool {
    let mut last: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..m.nrows() {
        match (0..m.ncols()).find(|&j| !m.get(i, j).is_zero()) {
            None => seen_zero = true,
            Some(j) => {
                if seen_zero || last.is_some_and(|p| j <= p) {
                    return false;
                }
                last = Some(j);
            }
        }
    }
    true
}

/// Reduces a W-positive matrix to a positive row echelon matrix by left
/// unimodular operations and a column permutation.
///
/// A matrix that is not entrywise nonnegative is first replaced by a positive
/// matrix with the same row lattice.
pub fn positive_row_echelon(a: &IntMat) -> Result<PositiveEchelon> {
    let d = a.nrows();
    let m = a.ncols();
    if a.is_nonnegative() && is_row_echelon(a) {
        return Ok(PositiveEchelon {
            e: a.clone(),
            alpha: IntMat::identity(d),
            beta: IntMat::identity(m),
        });
    }
    let (start, alpha0) = if a.is_nonnegative() {
        (a.clone(), IntMat::identity(d))
    } else {
        crate::fw::positivize_general(a)?
    };
    let mut st = EchelonState {
        a: start.to_rows(),
        alpha: IntMat::identity(d).to_rows(),
        perm: (0..m).collect(),
        m,
    };
    st.echelon(0, 0);

    let e = IntMat::from_rows(st.a).expect("rectangular").with_cols(m);
    let alpha = IntMat::from_rows(st.alpha)
        .expect("rectangular")
        .with_cols(d)
        .mul(&alpha0)?;
    let mut beta = IntMat::zeros(m, m);
    for (j, &src) in st.perm.iter().enumerate() {
        beta.set(src, j, BigInt::one());
    }
    if !e.is_nonnegative() || !is_row_echelon(&e) {
        return Err(Error::Invariant(
            "echelon reduction produced a non-positive or non-echelon matrix".into(),
        ));
    }
    Ok(PositiveEchelon { e, alpha, beta })
}

struct EchelonState {
    a: Rows,
    alpha: Rows,
    /// current column j holds original column perm[j]
    perm: Vec<usize>,
    m: usize,
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl EchelonState {
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        let mk = -k;
        row_axpy(&mut self.a, dst, src, &mk);
        row_axpy(&mut self.alpha, dst, src, &mk);
    }

    fn permute_block(&mut self, c0: usize, order: &[usize]) {
        // order lists current columns (absolute indices) in their new sequence
        let old_a: Rows = self.a.clone();
        let old_perm = self.perm.clone();
        for (k, &src) in order.iter().enumerate() {
            for (row, old) in self.a.iter_mut().zip(old_a.iter()) {
                row[c0 + k] = old[src].clone();
            }
            self.perm[c0 + k] = old_perm[src];
        }
    }

    /// Smallest k >= 0 making `row + k * pivot_row` nonnegative on the
    /// columns where `pivot_row` is strictly positive.
    fn lift_row(&mut self, row: usize, pivot_row: usize, cols: std::ops::Range<usize>) {
        let mut k = BigInt::zero();
        for j in cols {
            let p = &self.a[pivot_row][j];
            if p.is_positive() && self.a[row][j].is_negative() {
                let need = ceil_div(&-&self.a[row][j], p);
                if need > k {
                    k = need;
                }
            }
        }
        if !k.is_zero() {
            self.add_row(row, pivot_row, &k);
        }
    }

    /// Block rows r0..r1, columns c0..c1: brings a zero into (r1-1, c0),
    /// keeping the block nonnegative. Returns how many leading block columns
    /// have a zero in the last row.
    fn zero_corner(&mut self, r0: usize, r1: usize, c0: usize, c1: usize) -> usize {
        debug_assert!(r1 - r0 >= 2);
        let last = r1 - 1;
        let prev = r1 - 2;
        let cols: Vec<usize> = (c0..c1).collect();
        if cols.iter().any(|&j| self.a[last][j].is_zero()) {
            let (zeros, rest): (Vec<usize>, Vec<usize>) = cols.iter().partition(|&&j| self.a[last][j].is_zero());
            let j0 = zeros.len();
            let order: Vec<usize> = zeros.into_iter().chain(rest).collect();
            self.permute_block(c0, &order);
            return j0;
        }
        // descending ratio a[prev][j] / a[last][j]; ties by original index
        let mut order = cols.clone();
        order.sort_by(|&x, &y| {
            let rx = BigRational::new(self.a[prev][x].clone(), self.a[last][x].clone());
            let ry = BigRational::new(self.a[prev][y].clone(), self.a[last][y].clone());
            ry.cmp(&rx).then(self.perm[x].cmp(&self.perm[y]))
        });
        self.permute_block(c0, &order);

        let p = self.a[prev][c0].clone();
        let q = self.a[last][c0].clone();
        let (g, x, y) = ext_gcd(&p, &q);
        let lo_p = -(&q / &g);
        let lo_q = &p / &g;
        for rows in [&mut self.a, &mut self.alpha] {
            let rp = rows[prev].clone();
            let rq = rows[last].clone();
            for j in 0..rp.len() {
                rows[prev][j] = &x * &rp[j] + &y * &rq[j];
                rows[last][j] = &lo_p * &rp[j] + &lo_q * &rq[j];
            }
        }
        self.lift_row(prev, last, c0..c1);
        (c0..c1).take_while(|&j| self.a[last][j].is_zero()).count()
    }

    /// Makes column c0 of the block zero below row r0, block nonnegative.
    fn clear_first_column(&mut self, r0: usize, r1: usize, c0: usize, c1: usize) {
        if r1 - r0 < 2 {
            return;
        }
        let j0 = self.zero_corner(r0, r1, c0, c1);
        self.clear_first_column(r0, r1 - 1, c0, c0 + j0);
        let last = r1 - 1;
        for i in r0..last {
            self.lift_row(i, last, c0 + j0..c1);
        }
    }

    fn echelon(&mut self, r0: usize, c0: usize) {
        let d = self.a.len();
        if r0 >= d || c0 >= self.m {
            return;
        }
        self.clear_first_column(r0, d, c0, self.m);
        if self.a[r0][c0].is_zero() {
            self.echelon(r0, c0 + 1);
        } else {
            self.echelon(r0 + 1, c0 + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn imat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_i64(rows)
    }

    #[test]
    fn hnf_rank_two_transform() {
        let qt = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]).transpose();
        let res = hnf(&qt);
        assert_eq!(res.h, imat(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]));
        assert_eq!(
            res.u,
            imat(&[&[1, 0, 0, 0], &[-1, 1, 0, 0], &[1, -1, 1, 0], &[0, 0, 2, -1]])
        );
        assert_eq!(res.pivots, vec![0, 1]);
    }

    #[test]
    fn hnf_identity_fixed_point() {
        let i3 = IntMat::identity(3);
        let res = hnf(&i3);
        assert_eq!(res.h, i3);
        assert_eq!(res.u, i3);
    }

    #[test]
    fn hnf_zero_and_negative() {
        let z = IntMat::zeros(2, 3);
        let res = hnf(&z);
        assert_eq!(res.h, z);
        assert_eq!(res.rank(), 0);
        let a = imat(&[&[-4, 6], &[6, -9]]);
        let res = hnf(&a);
        assert!(is_hnf(&res.h));
        assert_eq!(res.u.mul(&a).unwrap(), res.h);
        assert_eq!(res.h, imat(&[&[2, -3], &[0, 0]]));
    }

    #[test]
    fn hnf_rational_input() {
        let a = RatMat::from_i64(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 2)]]);
        let res = hnf_rat(&a);
        assert_eq!(res.h, a);
        let b = RatMat::from_i64(&[&[(1, 1), (0, 1)], &[(-1, 2), (1, 2)]]);
        let res = hnf_rat(&b);
        assert_eq!(res.h, RatMat::from_i64(&[&[(1, 2), (1, 2)], &[(0, 1), (1, 1)]]));
        assert_eq!(res.u.to_rat().mul(&b).unwrap(), res.h);
    }

    #[test]
    fn snf_example() {
        let q1 = imat(&[&[2, 0, 0], &[0, 3, 5]]);
        let res = snf(&q1);
        assert_eq!(res.factors, vec![int(1), int(2)]);
        assert_eq!(res.s, imat(&[&[1, 0, 0], &[0, 2, 0]]));
        assert_eq!(res.alpha.mul(&q1).unwrap().mul(&res.beta).unwrap(), res.s);
        assert_eq!(res.alpha.det().unwrap().abs(), int(1));
        assert_eq!(res.beta.det().unwrap().abs(), int(1));
    }

    #[test]
    fn snf_identity_and_zero() {
        let res = snf(&IntMat::identity(3));
        assert_eq!(res.factors, vec![int(1); 3]);
        let res = snf(&IntMat::zeros(2, 2));
        assert!(res.factors.is_empty());
    }

    #[test]
    fn snf_divisibility_needs_row_mixing() {
        let a = imat(&[&[2, 0], &[0, 3]]);
        let res = snf(&a);
        assert_eq!(res.factors, vec![int(1), int(6)]);
        assert_eq!(res.alpha.mul(&a).unwrap().mul(&res.beta).unwrap(), res.s);
    }

    #[test]
    fn echelon_fixed_point() {
        let a = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let res = positive_row_echelon(&a).unwrap();
        assert_eq!(res.e, a);
        assert_eq!(res.alpha, IntMat::identity(2));
        assert_eq!(res.beta, IntMat::identity(4));
    }

    #[test]
    fn echelon_swaps_blocks() {
        let a = imat(&[&[0, 0, 3, 5], &[1, 2, 0, 0]]);
        let res = positive_row_echelon(&a).unwrap();
        assert!(res.e.is_nonnegative() && is_row_echelon(&res.e));
        assert_eq!(res.alpha.mul(&a).unwrap().mul(&res.beta).unwrap(), res.e);
        assert_eq!(res.e, imat(&[&[3, 5, 0, 0], &[0, 0, 1, 2]]));
    }

    #[test]
    fn echelon_bezout_step() {
        // strictly positive last row forces the 2x2 Bezout step
        let a = imat(&[&[3, 1, 2], &[2, 1, 1]]);
        let res = positive_row_echelon(&a).unwrap();
        assert!(res.e.is_nonnegative() && is_row_echelon(&res.e));
        assert_eq!(res.alpha.mul(&a).unwrap().mul(&res.beta).unwrap(), res.e);
        assert_eq!(res.alpha.det().unwrap().abs(), int(1));
    }

    #[test]
    fn echelon_rejects_non_w_positive() {
        let a = imat(&[&[1, -1]]);
        assert!(matches!(positive_row_echelon(&a), Err(Error::NotWPositive)));
    }
}
