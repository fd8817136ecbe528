//! Gale duality: `G(A)` is an integer matrix whose row lattice is exactly
//! the integer kernel of `A`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::{submatrix_cols, ExactLinAlg, IndexSet, IntMat, RatMat};
use crate::lattice::{gcd_max_minors, row_quotient, Lattice, QuotientStructure};
use crate::normal_forms::hnf;

fn require_full_row_rank(a: &IntMat) -> Result<()> {
    let rank = a.rank_exact();
    if rank != a.nrows() {
        return Err(Error::RankDeficient { rank, rows: a.nrows() });
    }
    Ok(())
}

/// Gale dual of a full-row-rank matrix, in Hermite normal form.
pub fn gale_dual(a: &IntMat) -> Result<IntMat> {
    require_full_row_rank(a)?;
    Ok(hnf(&a.transpose()).kernel_rows())
}

/// `G(G(a))`. Its row lattice is the saturation of the row lattice of `a`.
pub fn double_gale(a: &IntMat) -> Result<IntMat> {
    gale_dual(&gale_dual(a)?)
}

/// Checks that `(v, q)` is a Gale dual pair: `q v^T = 0`, complementary
/// ranks and `L_r(q)` saturated.
pub fn check_pair(v: &IntMat, q: &IntMat) -> Result<()> {
    if v.ncols() != q.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{} columns against {}",
            v.ncols(),
            q.ncols()
        )));
    }
    require_full_row_rank(v)?;
    require_full_row_rank(q)?;
    let bad = |why: &str| Err(Error::Precondition(format!("not a Gale dual pair: {why}")));
    if v.nrows() + q.nrows() != v.ncols() {
        return bad("ranks are not complementary");
    }
    if !q.mul(&v.transpose())?.is_zero() {
        return bad("q * v^T is not zero");
    }
    if !row_quotient(q).is_free() {
        return bad("row lattice of q has cotorsion");
    }
    Ok(())
}

/// Structure of `L_c(v) / L_c(v_I)`, computed in coordinates of a basis
/// of `L_c(v)`.
fn column_quotient(v: &IntMat, set: &IndexSet) -> Result<QuotientStructure> {
    let full = Lattice::column_lattice(v);
    let sub = submatrix_cols(v, set, false)?;
    let k = full.rank();
    let mut coords = IntMat::zeros(0, k);
    for j in 0..sub.ncols() {
        let x: Vec<BigRational> = sub.col(j).into_iter().map(BigRational::from_integer).collect();
        let c = full
            .coordinates(&x)
            .ok_or_else(|| Error::Invariant("column outside its own column lattice".into()))?;
        coords = coords.vstack(&IntMat::from_rows(vec![c])?)?;
    }
    Ok(row_quotient(&coords))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientIso {
    /// `Z^{n+r-k} / L_r(q^I)`
    pub left: QuotientStructure,
    /// `L_c(v) / L_c(v_I)`
    pub right: QuotientStructure,
    pub equal: bool,
}

/// Computes both sides of `Z^{n+r-|I|}/L_r(q^I) ≅ L_c(v)/L_c(v_I)`
/// independently.
pub fn quotient_iso_check(v: &IntMat, q: &IntMat, set: &IndexSet) -> Result<QuotientIso> {
    check_pair(v, q)?;
    let q_rest = submatrix_cols(q, set, true)?;
    let left = row_quotient(&q_rest);
    let right = column_quotient(v, set)?;
    let equal = left == right;
    Ok(QuotientIso { left, right, equal })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetDuality {
    /// `[Z^n : L_c(v)] * |det q^I|`
    pub lhs: BigInt,
    /// `|det v_I|`
    pub rhs: BigInt,
    pub equal: bool,
}

pub fn det_duality_check(v: &IntMat, q: &IntMat, set: &IndexSet) -> Result<DetDuality> {
    check_pair(v, q)?;
    let n = v.nrows();
    if set.len() != n {
        return Err(Error::Precondition(format!("index set {set} must have {n} elements")));
    }
    let index = gcd_max_minors(v)?;
    let lhs = index * submatrix_cols(q, set, true)?.det()?.abs();
    let rhs = submatrix_cols(v, set, false)?.det()?.abs();
    let equal = lhs == rhs;
    Ok(DetDuality { lhs, rhs, equal })
}

/// For `a` with `a v^T = 0` and `q = G(v)`, the matrix `alpha` with
/// `a = alpha q`. Returns `None` when `alpha` would not be integral, which
/// cannot happen for a genuine Gale dual.
pub fn factor_through(a: &IntMat, q: &IntMat) -> Result<Option<IntMat>> {
    if a.ncols() != q.ncols() {
        return Err(Error::DimensionMismatch("column counts differ".into()));
    }
    require_full_row_rank(q)?;
    let qt: RatMat = q.transpose().to_rat();
    let mut rows = Vec::with_capacity(a.nrows());
    for i in 0..a.nrows() {
        let b: Vec<BigRational> = a.row(i).iter().cloned().map(BigRational::from_integer).collect();
        let Some(x) = crate::exact::solve_linear(&qt, &b)? else {
            return Err(Error::Precondition("row outside the row space of q".into()));
        };
        if !x.iter().all(BigRational::is_integer) {
            return Ok(None);
        }
        rows.push(x.iter().map(BigRational::to_integer).collect());
    }
    let alpha = IntMat::from_rows(rows).map(|m| if m.nrows() == 0 { IntMat::zeros(0, q.nrows()) } else { m })?;
    Ok(Some(alpha))
}

/// Every index set of size at most `max_size`, smallest first.
pub fn index_sets_up_to(m: usize, max_size: usize) -> Vec<IndexSet> {
    (0..=max_size.min(m))
        .flat_map(|k| crate::exact::combinations(m, k))
        .map(|c| IndexSet::from_zero_based(&c))
        .collect()
}

/// Runs both duality identities over all index sets up to `max_size`
/// (determinant identity on the sets of size `n`). Returns the first
/// failing set, if any.
pub fn check_all_identities(v: &IntMat, q: &IntMat, max_size: usize) -> Result<Option<IndexSet>> {
    let n = v.nrows();
    for set in index_sets_up_to(v.ncols(), max_size.max(n)) {
        if set.len() <= max_size && !quotient_iso_check(v, q, &set)?.equal {
            return Ok(Some(set));
        }
        if set.len() == n && !det_duality_check(v, q, &set)?.equal {
            return Ok(Some(set));
        }
    }
    Ok(None)
}

/// `true` when the row lattices agree.
pub fn row_equivalent(a: &IntMat, b: &IntMat) -> bool {
    a.ncols() == b.ncols() && Lattice::row_lattice(a) == Lattice::row_lattice(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn imat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_i64(rows)
    }

    #[test]
    fn rank_two_dual() {
        let q = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let v = gale_dual(&q).unwrap();
        assert_eq!(v, imat(&[&[1, -1, 1, 0], &[0, 0, 2, -1]]));
        assert!(q.mul(&v.transpose()).unwrap().is_zero());
    }

    #[test]
    fn reduction_example_dual() {
        let q = imat(&[&[1, 2, 0, 0], &[0, 0, 3, 5]]);
        assert_eq!(gale_dual(&q).unwrap(), imat(&[&[2, -1, 0, 0], &[0, 0, 5, -3]]));
    }

    #[test]
    fn projective_plane_dual() {
        let v = imat(&[&[1, 0, -1], &[0, 1, -1]]);
        assert_eq!(gale_dual(&v).unwrap(), imat(&[&[1, 1, 1]]));
        assert!(matches!(
            gale_dual(&imat(&[&[1, 2], &[2, 4]])),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn double_dual_and_cotorsion() {
        let a = imat(&[&[2, -1, 0, 0], &[0, 0, 5, -3]]);
        assert!(row_equivalent(&double_gale(&a).unwrap(), &a));
        let b = imat(&[&[2, 0, 0], &[0, 2, 0]]);
        let bb = double_gale(&b).unwrap();
        let lb = Lattice::row_lattice(&b);
        let lbb = Lattice::row_lattice(&bb);
        assert!(lbb.contains_lattice(&lb));
        assert_ne!(lb, lbb);
    }

    #[test]
    fn quotient_isomorphisms() {
        let q = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let v = gale_dual(&q).unwrap();
        let one = IndexSet::new(vec![1], 4).unwrap();
        assert!(quotient_iso_check(&v, &q, &one).unwrap().equal);
        let empty = IndexSet::default();
        let res = quotient_iso_check(&v, &q, &empty).unwrap();
        assert!(res.equal);
        assert_eq!(res.left, QuotientStructure::new(2, []));

        let q2 = imat(&[&[1, 2, 0, 0], &[0, 0, 3, 5]]);
        let v2 = gale_dual(&q2).unwrap();
        let res = quotient_iso_check(&v2, &q2, &one).unwrap();
        assert!(res.equal);
        assert_eq!(res.left.torsion, vec![int(2)]);
    }

    #[test]
    fn determinant_duality() {
        let q = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let v = gale_dual(&q).unwrap();
        let set = IndexSet::new(vec![1, 3], 4).unwrap();
        let res = det_duality_check(&v, &q, &set).unwrap();
        assert_eq!((res.lhs.clone(), res.rhs.clone()), (int(2), int(2)));
        assert!(res.equal);
        let degenerate = IndexSet::new(vec![1, 2], 4).unwrap();
        let res = det_duality_check(&v, &q, &degenerate).unwrap();
        assert_eq!((res.lhs, res.rhs), (int(0), int(0)));
        assert!(det_duality_check(&v, &q, &IndexSet::new(vec![1], 4).unwrap()).is_err());
        assert_eq!(check_all_identities(&v, &q, 4).unwrap(), None);
    }

    #[test]
    fn invalid_pair_rejected() {
        let v = imat(&[&[1, -1, 1, 0], &[0, 0, 2, -1]]);
        let q = imat(&[&[2, 2, 0, 0], &[0, 2, 2, 4]]);
        assert!(quotient_iso_check(&v, &q, &IndexSet::default()).is_err());
    }

    #[test]
    fn universal_property() {
        let q = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let a = imat(&[&[3, 1, -2, -4], &[1, 2, 1, 2]]);
        let alpha = factor_through(&a, &q).unwrap().unwrap();
        assert_eq!(alpha.mul(&q).unwrap(), a);
    }
}
