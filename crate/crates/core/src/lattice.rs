//! Discrete subgroups of `Q^m`: canonical bases, duals through the
//! transverse matrix, intersections, and quotient structures.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{solve_linear, ExactLinAlg, IntMat, RatMat};
use crate::normal_forms::{hnf, hnf_rat, snf};

/// A lattice stored by the nonzero rows of the rational Hermite normal form
/// of its generators. Equal lattices have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient_dim: usize,
    basis: RatMat,
}

impl Lattice {
    /// Lattice spanned by the rows of `gens`.
    pub fn from_generators(gens: &RatMat) -> Lattice {
        let h = hnf_rat(gens);
        let basis = h.h.row_range(0, h.rank());
        Lattice {
            ambient_dim: gens.ncols(),
            basis,
        }
    }

    /// `L_r(a)`.
    pub fn row_lattice(a: &IntMat) -> Lattice {
        Lattice::from_generators(&a.to_rat())
    }

    /// `L_c(a)`, as a lattice of row vectors.
    pub fn column_lattice(a: &IntMat) -> Lattice {
        Lattice::from_generators(&a.transpose().to_rat())
    }

    /// `Z^m`.
    pub fn standard(m: usize) -> Lattice {
        Lattice {
            ambient_dim: m,
            basis: RatMat::identity(m),
        }
    }

    pub fn zero(m: usize) -> Lattice {
        Lattice {
            ambient_dim: m,
            basis: RatMat::zeros(0, m),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &RatMat {
        &self.basis
    }

    pub fn is_integral(&self) -> bool {
        self.basis.is_integral()
    }

    /// Integer basis matrix, if the lattice lies in `Z^m`.
    pub fn int_basis(&self) -> Option<IntMat> {
        self.basis.to_int()
    }

    /// Integer coordinates of `x` in the canonical basis, if `x` lies in
    /// the lattice.
    pub fn coordinates(&self, x: &[BigRational]) -> Option<Vec<BigInt>> {
        if x.len() != self.ambient_dim {
            return None;
        }
        if self.rank() == 0 {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        }
        let y = solve_linear(&self.basis.transpose(), x).ok()??;
        y.iter()
            .all(BigRational::is_integer)
            .then(|| y.iter().map(BigRational::to_integer).collect())
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn contains_int(&self, x: &[BigInt]) -> bool {
        let xr: Vec<BigRational> = x.iter().cloned().map(BigRational::from_integer).collect();
        self.contains(&xr)
    }

    /// `other ⊆ self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.rows_iter().all(|r| self.contains(r))
    }

    /// Same rational span.
    pub fn same_span(&self, other: &Lattice) -> bool {
        if self.rank() != other.rank() || self.ambient_dim != other.ambient_dim {
            return false;
        }
        match self.basis.vstack(&other.basis) {
            Ok(s) => s.rank_exact() == self.rank(),
            Err(_) => false,
        }
    }
}

/// `(A A^T)^{-1} A` for a matrix of full row rank.
pub fn transverse(a: &RatMat) -> Result<RatMat> {
    let rank = a.rank_exact();
    if rank != a.nrows() {
        return Err(Error::RankDeficient { rank, rows: a.nrows() });
    }
    let gram = a.mul(&a.transpose())?;
    gram.inverse()?.mul(a)
}

/// Dual lattice inside the rational span of `l`, with basis the rows of
/// the transverse of the canonical basis.
pub fn dual_lattice(l: &Lattice) -> Lattice {
    if l.rank() == 0 {
        return l.clone();
    }
    let t = transverse(&l.basis).expect("canonical bases have full row rank");
    Lattice::from_generators(&t)
}

/// Intersection of a nonempty list of lattices in a common ambient space.
///
/// Lattices sharing one rational span are intersected through duality:
/// stack the duals, take the Hermite form, dualize back. Otherwise the
/// intersection is read off an integer kernel.
pub fn lattice_intersection(ls: &[Lattice]) -> Result<Lattice> {
    let first = ls
        .first()
        .ok_or_else(|| Error::Precondition("intersection of an empty list".into()))?;
    let m = first.ambient_dim;
    if ls.iter().any(|l| l.ambient_dim != m) {
        return Err(Error::DimensionMismatch(
            "lattices live in different ambient spaces".into(),
        ));
    }
    if ls.iter().any(|l| l.rank() == 0) {
        return Ok(Lattice::zero(m));
    }
    if ls.iter().all(|l| l.same_span(first)) {
        return Ok(intersect_by_duality(ls));
    }
    let mut acc = first.clone();
    for l in &ls[1..] {
        acc = intersect_by_kernel(&acc, l);
        if acc.rank() == 0 {
            break;
        }
    }
    Ok(acc)
}

fn intersect_by_duality(ls: &[Lattice]) -> Lattice {
    let mut stacked = RatMat::zeros(0, ls[0].ambient_dim);
    for l in ls {
        let t = transverse(&l.basis).expect("canonical bases have full row rank");
        stacked = stacked.vstack(&t).expect("same ambient dimension");
    }
    let h = hnf_rat(&stacked);
    let a = h.h.row_range(0, h.rank());
    let back = transverse(&a).expect("nonzero HNF rows are independent");
    Lattice::from_generators(&back)
}

pub(crate) fn intersect_by_kernel(a: &Lattice, b: &Lattice) -> Lattice {
    let m = a.ambient_dim;
    let d = num_integer::Integer::lcm(&a.basis.common_denominator(), &b.basis.common_denominator());
    let dr = BigRational::from_integer(d.clone());
    let ai = a.basis.scale(&dr).to_int().expect("cleared");
    let bi = b.basis.scale(&dr).to_int().expect("cleared");
    let stacked = ai.vstack(&bi).expect("same ambient dimension");
    let ker = hnf(&stacked).kernel_rows();
    if ker.nrows() == 0 {
        return Lattice::zero(m);
    }
    let coeffs = ker.select_cols(&(0..a.rank()).collect::<Vec<_>>());
    let gens = coeffs.to_rat().mul(&a.basis).expect("shapes agree");
    Lattice::from_generators(&gens)
}

/// Isomorphism type of a finitely generated abelian group: free rank plus
/// invariant factors `c_1 | c_2 | ...`, each `> 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuotientStructure {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl QuotientStructure {
    /// Drops unit factors; the remaining chain must already be divisible.
    pub fn new(free_rank: usize, factors: impl IntoIterator<Item = BigInt>) -> Self {
        let torsion = factors.into_iter().map(|c| c.abs()).filter(|c| !c.is_one()).collect();
        QuotientStructure { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion.len() <= 1
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl fmt::Display for QuotientStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for c in &self.torsion {
            parts.push(format!("Z/{c}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Structure of `Z^m / L` for an integral lattice `L`, via Smith form.
pub fn quotient_structure(m: usize, l: &Lattice) -> Result<QuotientStructure> {
    if l.ambient_dim != m {
        return Err(Error::DimensionMismatch(format!(
            "lattice in dimension {} against Z^{m}",
            l.ambient_dim
        )));
    }
    let b = l
        .int_basis()
        .ok_or_else(|| Error::Precondition("lattice is not contained in Z^m".into()))?;
    if b.nrows() == 0 {
        return Ok(QuotientStructure::new(m, []));
    }
    let s = snf(&b);
    Ok(QuotientStructure::new(m - s.factors.len(), s.factors))
}

/// `Z^m / L_r(a)` for an integer matrix (rows as generators).
pub fn row_quotient(a: &IntMat) -> QuotientStructure {
    let s = snf(a);
    QuotientStructure::new(a.ncols() - s.factors.len(), s.factors)
}

/// gcd of the maximal minors of a full-row-rank matrix, read off as the
/// determinant of the upper square block of `HNF(a^T)`.
pub fn gcd_max_minors(a: &IntMat) -> Result<BigInt> {
    let n = a.nrows();
    let rank = a.rank_exact();
    if rank != n {
        return Err(Error::RankDeficient { rank, rows: n });
    }
    let h = hnf(&a.transpose());
    let tn = h.h.row_range(0, n);
    Ok(tn.det()?.abs())
}

/// `true` iff `Z^m / L` has nontrivial torsion.
pub fn has_cotorsion(m: usize, l: &Lattice) -> Result<bool> {
    Ok(!quotient_structure(m, l)?.is_free())
}
