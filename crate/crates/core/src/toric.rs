//! Divisor invariants of a Q-factorial complete toric variety given by a
//! fan matrix `v`, its weight matrix `q` and a simplicial fan: class group,
//! torsion detection, Picard and Cartier bases, and Cartier indices.
//!
//! The class group is identified with `Z^r` through the generators
//! returned by [`cl_generators`]; `q * a` is then the class of the divisor
//! with coefficients `a`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{combinations, gcd_all, solve_linear, submatrix_cols, ExactLinAlg, IntMat};
use crate::fans::{enumerate_sf, Fan};
use crate::fw::{classify_f, classify_w, has_identity_hnf, is_w_reduced};
use crate::gale::gale_dual;
use crate::lattice::{lattice_intersection, row_quotient, Lattice, QuotientStructure};
use crate::normal_forms::hnf;

fn require_full_row_rank(a: &IntMat) -> Result<()> {
    let rank = a.rank_exact();
    if rank != a.nrows() {
        return Err(Error::RankDeficient { rank, rows: a.nrows() });
    }
    Ok(())
}

/// `Z^{n+r} / L_r(v)`.
pub fn class_group(v: &IntMat) -> Result<QuotientStructure> {
    require_full_row_rank(v)?;
    Ok(row_quotient(v))
}

/// Torsion of the class group read off the upper `n x n` block `T_n` of
/// `HNF(v^T)`, as `Z^n / L_r(T_n)`.
pub fn torsion_via_tn(v: &IntMat) -> Result<QuotientStructure> {
    require_full_row_rank(v)?;
    let n = v.nrows();
    let tn = hnf(&v.transpose()).h.row_range(0, n);
    Ok(row_quotient(&tn))
}

/// The four equivalent torsion-freeness conditions, each computed on its
/// own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwsReport {
    pub torsion_free: bool,
    pub hnf_identity_block: bool,
    pub column_lattice_full: bool,
    pub coprime_minors: bool,
}

impl PwsReport {
    pub fn verdict(&self) -> bool {
        self.torsion_free
    }
}

fn minors_gcd_by_enumeration(v: &IntMat) -> Result<BigInt> {
    let n = v.nrows();
    let mut minors = Vec::new();
    for c in combinations(v.ncols(), n) {
        minors.push(v.select_cols(&c).det()?);
    }
    Ok(gcd_all(&minors))
}

/// Torsion-freeness of the class group, by four independent routes that
/// must agree.
pub fn is_pws(v: &IntMat) -> Result<(bool, PwsReport)> {
    require_full_row_rank(v)?;
    let n = v.nrows();
    let report = PwsReport {
        torsion_free: class_group(v)?.is_free(),
        hnf_identity_block: {
            let h = hnf(&v.transpose()).h;
            h.row_range(0, n) == IntMat::identity(n) && h.row_range(n, h.nrows()).is_zero()
        },
        column_lattice_full: Lattice::column_lattice(v) == Lattice::standard(n),
        coprime_minors: minors_gcd_by_enumeration(v)?.is_one(),
    };
    let all = [
        report.torsion_free,
        report.hnf_identity_block,
        report.column_lattice_full,
        report.coprime_minors,
    ];
    if all.iter().any(|&b| b != all[0]) {
        return Err(Error::Invariant(format!(
            "torsion-freeness conditions disagree: {report:?}"
        )));
    }
    Ok((all[0], report))
}

fn require_pws_weights(q: &IntMat) -> Result<()> {
    if !has_identity_hnf(q) {
        return Err(Error::Precondition(
            "weight matrix does not satisfy HNF(q^T) = (I; 0), class group is not free".into(),
        ));
    }
    Ok(())
}

/// Upper `r` rows of the transform `U_q` with `U_q q^T = HNF(q^T)`. Row
/// `i` holds the coefficients of the divisor `L_i`; the classes of
/// `L_1..L_r` form a basis of the class group.
pub fn cl_generators(q: &IntMat) -> Result<IntMat> {
    require_pws_weights(q)?;
    Ok(hnf(&q.transpose()).u.row_range(0, q.nrows()))
}

/// Class of the divisor `sum a_j D_j` in the basis of [`cl_generators`].
pub fn weil_class(q: &IntMat, a: &[BigInt]) -> Result<Vec<BigInt>> {
    if a.len() != q.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "divisor of length {} for {} rays",
            a.len(),
            q.ncols()
        )));
    }
    q.mul_vec(a)
}

fn check_fan_matches(q: &IntMat, fan: &Fan) -> Result<()> {
    if fan.v().ncols() != q.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "fan on {} rays, weight matrix with {} columns",
            fan.v().ncols(),
            q.ncols()
        )));
    }
    Ok(())
}

/// Basis (rows, Hermite form) of `Pic = ∩ L_c(q_I)` over the complements
/// `I` of the maximal cones.
pub fn picard_basis(q: &IntMat, fan: &Fan) -> Result<IntMat> {
    require_pws_weights(q)?;
    check_fan_matches(q, fan)?;
    fan.check()?;
    let lattices: Vec<Lattice> = fan
        .complements()
        .iter()
        .map(|i| submatrix_cols(q, i, false).map(|qi| Lattice::column_lattice(&qi)))
        .collect::<Result<_>>()?;
    let inter = lattice_intersection(&lattices)?;
    inter
        .int_basis()
        .ok_or_else(|| Error::Invariant("Picard lattice is not integral".into()))
}

/// `C = (B 0; 0 I_n) U_q`: rows form a basis of the torus-invariant
/// Cartier divisors.
pub fn cartier_basis(b: &IntMat, u_q: &IntMat) -> Result<IntMat> {
    let r = b.nrows();
    let m = u_q.nrows();
    if !b.is_square() || !u_q.is_square() || r > m {
        return Err(Error::DimensionMismatch(format!(
            "B is {}x{}, U is {}x{}",
            b.nrows(),
            b.ncols(),
            u_q.nrows(),
            u_q.ncols()
        )));
    }
    let mut block = IntMat::identity(m);
    for i in 0..r {
        for j in 0..r {
            block.set(i, j, b.get(i, j).clone());
        }
    }
    block.mul(u_q)
}

/// lcm of `|det q_I|` over the complements of the maximal cones. Checks
/// that `delta` times any Weil divisor is Cartier.
pub fn delta_sigma(q: &IntMat, fan: &Fan) -> Result<BigInt> {
    check_fan_matches(q, fan)?;
    let mut delta = BigInt::one();
    for i in fan.complements() {
        let d = submatrix_cols(q, &i, false)?.det()?.abs();
        if d.is_zero() {
            return Err(Error::InvalidFan(format!("complement {i} gives a singular minor")));
        }
        delta = delta.lcm(&d);
    }
    let b = picard_basis(q, fan)?;
    let c = cartier_basis(&b, &hnf(&q.transpose()).u)?;
    let cart = Lattice::row_lattice(&c);
    let m = q.ncols();
    for j in 0..m {
        let mut e = vec![BigInt::zero(); m];
        e[j] = delta.clone();
        if !cart.contains_int(&e) {
            return Err(Error::Invariant(format!("delta * D_{} is not Cartier", j + 1)));
        }
    }
    Ok(delta)
}

/// Least `k >= 1` with `k * sum a_j D_j` Cartier: on every maximal cone
/// the system `m . v_j = a_j` must become integral after scaling by `k`.
pub fn cartier_index(v: &IntMat, fan: &Fan, a: &[BigInt]) -> Result<BigInt> {
    if a.len() != v.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "divisor of length {} for {} rays",
            a.len(),
            v.ncols()
        )));
    }
    if fan.v() != v {
        return Err(Error::InvalidFan("fan was built on a different matrix".into()));
    }
    fan.check()?;
    let mut k = BigInt::one();
    for cone in fan.cones() {
        let cols = cone.zero_based();
        let system = v.select_cols(&cols).transpose().to_rat();
        let rhs: Vec<BigRational> = cols.iter().map(|&j| BigRational::from_integer(a[j].clone())).collect();
        let m = solve_linear(&system, &rhs)?.ok_or_else(|| Error::InvalidFan(format!("cone {cone} is singular")))?;
        for x in &m {
            k = k.lcm(x.denom());
        }
    }
    Ok(k)
}

/// How the fan of a report is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanChoice {
    /// 1-based position in the enumeration order
    Index(usize),
    Cones(Vec<crate::exact::IndexSet>),
}

/// Which matrix the report starts from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReportInput {
    Weights(IntMat),
    Fan(IntMat),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricReport {
    pub n: usize,
    pub r: usize,
    pub v: IntMat,
    pub q: IntMat,
    pub fan: Fan,
    pub fan_count: Option<usize>,
    pub cl: QuotientStructure,
    pub is_pws: bool,
    pub cl_generators: IntMat,
    pub picard_basis: IntMat,
    pub cartier_basis: IntMat,
    pub delta_sigma: BigInt,
    /// `c(D_j)` for `j = 1..n+r`
    pub cartier_indices: Vec<BigInt>,
    /// `[Cl : Pic]`
    pub picard_index: BigInt,
}

fn invariant(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(what.into()))
    }
}

/// Computes every divisor invariant for one fan and checks the relations
/// tying them together.
pub fn full_report(input: &ReportInput, choice: &FanChoice, cap: usize) -> Result<ToricReport> {
    let (v, q) = match input {
        ReportInput::Weights(q) => {
            let w = classify_w(q);
            if !w.is_w_matrix {
                return Err(Error::NotWMatrix(w.violated_string()));
            }
            (gale_dual(q)?, q.clone())
        }
        ReportInput::Fan(v) => {
            let f = classify_f(v);
            if !f.is_f_matrix {
                return Err(Error::NotFMatrix(f.violated_string()));
            }
            if !is_pws(v)?.0 {
                return Err(Error::Precondition(
                    "class group has torsion; the fan matrix is not of PWS type".into(),
                ));
            }
            let q = gale_dual(v)?;
            let w = classify_w(&q);
            if !w.is_w_matrix {
                return Err(Error::NotWMatrix(w.violated_string()));
            }
            (v.clone(), q)
        }
    };
    if !is_w_reduced(&q)? {
        return Err(Error::Precondition(
            "weight matrix is not reduced; run reduce-w first".into(),
        ));
    }
    let n = v.nrows();
    let r = q.nrows();

    let (fan, fan_count) = match choice {
        FanChoice::Index(k) => {
            let fans = enumerate_sf(&v, cap)?;
            let count = fans.len();
            let fan = fans
                .into_iter()
                .nth(
                    k.checked_sub(1)
                        .ok_or(Error::IndexOutOfRange { index: 0, max: count })?,
                )
                .ok_or(Error::IndexOutOfRange { index: *k, max: count })?;
            (fan, Some(count))
        }
        FanChoice::Cones(cones) => (Fan::validated(v.clone(), cones.clone())?, None),
    };

    let cl = class_group(&v)?;
    let (pws, _) = is_pws(&v)?;
    let u_q = hnf(&q.transpose()).u;
    let gens = cl_generators(&q)?;
    let b = picard_basis(&q, &fan)?;
    let c = cartier_basis(&b, &u_q)?;
    let delta = delta_sigma(&q, &fan)?;
    let cartier_indices = (0..n + r)
        .map(|j| {
            let mut e = vec![BigInt::zero(); n + r];
            e[j] = BigInt::one();
            cartier_index(&v, &fan, &e)
        })
        .collect::<Result<Vec<_>>>()?;

    invariant(cl.free_rank == r, "class group rank differs from r")?;
    invariant(pws == cl.is_free(), "PWS flag disagrees with the class group")?;
    let mut expected = IntMat::zeros(r, n + r);
    for i in 0..r {
        for j in 0..r {
            expected.set(i, j, b.get(j, i).clone());
        }
    }
    invariant(q.mul(&c.transpose())? == expected, "q C^T differs from (B^T | 0)")?;
    let picard_index = b.det()?.abs();
    let c_quotient = row_quotient(&c);
    invariant(
        c_quotient.free_rank == 0 && c_quotient.torsion_order() == picard_index,
        "index of the Cartier lattice differs from det B",
    )?;
    invariant(
        row_quotient(&b).torsion_order() == picard_index,
        "invariant factors of B do not multiply to det B",
    )?;
    invariant((&picard_index % &delta).is_zero(), "delta does not divide [Cl : Pic]")?;
    invariant(
        q.mul(&gens.transpose())? == IntMat::identity(r),
        "class group generators do not map to the standard basis",
    )?;

    Ok(ToricReport {
        n,
        r,
        v,
        q,
        fan,
        fan_count,
        cl,
        is_pws: pws,
        cl_generators: gens,
        picard_basis: b,
        cartier_basis: c,
        delta_sigma: delta,
        cartier_indices,
        picard_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, IndexSet};
    use crate::fans::DEFAULT_CAP;

    fn imat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_i64(rows)
    }

    fn rank_two_fan() -> Fan {
        let v = imat(&[&[1, -1, 1, 0], &[0, 0, 2, -1]]);
        let cones = [[1, 3], [2, 3], [2, 4], [1, 4]]
            .iter()
            .map(|c| IndexSet::new(c.to_vec(), 4).unwrap())
            .collect();
        Fan::new(v, cones)
    }

    #[test]
    fn class_groups() {
        let v = imat(&[&[1, -1, 1, 0], &[0, 0, 2, -1]]);
        assert_eq!(class_group(&v).unwrap(), QuotientStructure::new(2, []));
        assert!(class_group(&imat(&[&[2, -1, 0, 0], &[0, 0, 5, -3]])).unwrap().is_free());
        let t = imat(&[&[2, 0, -2], &[0, 1, -1]]);
        assert_eq!(class_group(&t).unwrap(), QuotientStructure::new(1, [int(2)]));
        assert_eq!(torsion_via_tn(&t).unwrap(), QuotientStructure::new(0, [int(2)]));
        assert!(torsion_via_tn(&v).unwrap().is_trivial());
    }

    #[test]
    fn pws_detection() {
        let (ok, rep) = is_pws(&imat(&[&[1, -1, 1, 0], &[0, 0, 2, -1]])).unwrap();
        assert!(ok && rep.hnf_identity_block && rep.coprime_minors && rep.column_lattice_full);
        let (ok, rep) = is_pws(&imat(&[&[2, 0, -2], &[0, 1, -1]])).unwrap();
        assert!(!ok && !rep.hnf_identity_block && !rep.coprime_minors && !rep.column_lattice_full);
        let six_rays = imat(&[&[1, 0, 0, 0, -1, 1], &[0, 1, 0, -1, -1, 2], &[0, 0, 1, -1, 0, 1]]);
        assert!(is_pws(&six_rays).unwrap().0);
    }

    #[test]
    fn generators_and_classes() {
        let q = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        assert_eq!(cl_generators(&q).unwrap(), imat(&[&[1, 0, 0, 0], &[-1, 1, 0, 0]]));
        let g = cl_generators(&imat(&[&[1, 1, 1]])).unwrap();
        assert_eq!(g.row(0).iter().sum::<BigInt>(), int(1));
        assert_eq!(
            weil_class(&q, &[int(0), int(1), int(0), int(0)]).unwrap(),
            vec![int(1), int(1)]
        );
        assert_eq!(
            weil_class(&q, &[int(0), int(0), int(0), int(1)]).unwrap(),
            vec![int(0), int(2)]
        );
        assert!(weil_class(&q, &[int(1)]).is_err());
        assert!(cl_generators(&imat(&[&[2, 0, 2], &[0, 2, 2]])).is_err());
    }

    #[test]
    fn rank_two_divisors() {
        let q = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        let fan = rank_two_fan();
        let b = picard_basis(&q, &fan).unwrap();
        assert_eq!(b, imat(&[&[2, 0], &[0, 2]]));
        let c = cartier_basis(&b, &hnf(&q.transpose()).u).unwrap();
        assert_eq!(
            c,
            imat(&[&[2, 0, 0, 0], &[-2, 2, 0, 0], &[1, -1, 1, 0], &[0, 0, 2, -1]])
        );
        assert_eq!(delta_sigma(&q, &fan).unwrap(), int(2));
        let idx: Vec<BigInt> = (0..4)
            .map(|j| {
                let mut e = vec![int(0); 4];
                e[j] = int(1);
                cartier_index(fan.v(), &fan, &e).unwrap()
            })
            .collect();
        assert_eq!(idx, vec![int(2), int(2), int(2), int(1)]);
        assert_eq!(cartier_index(fan.v(), &fan, &vec![int(0); 4]).unwrap(), int(1));
        for row in c.rows_iter() {
            assert_eq!(cartier_index(fan.v(), &fan, row).unwrap(), int(1));
        }
    }

    #[test]
    fn projective_plane_report() {
        let v = imat(&[&[1, 0, -1], &[0, 1, -1]]);
        let rep = full_report(&ReportInput::Fan(v), &FanChoice::Index(1), DEFAULT_CAP).unwrap();
        assert_eq!(rep.cl, QuotientStructure::new(1, []));
        assert_eq!(rep.picard_index, int(1));
        assert_eq!(rep.delta_sigma, int(1));
        assert!(rep.cartier_indices.iter().all(One::is_one));
    }

    #[test]
    fn report_refusals() {
        let v = imat(&[&[2, 0, -2], &[0, 1, -1]]);
        assert!(full_report(&ReportInput::Fan(v), &FanChoice::Index(1), DEFAULT_CAP).is_err());
        let q = imat(&[&[1, 2, 0, 0], &[0, 0, 3, 5]]);
        let err = full_report(&ReportInput::Weights(q), &FanChoice::Index(1), DEFAULT_CAP).unwrap_err();
        assert!(err.to_string().contains("reduce-w"));
        let q = imat(&[&[1, 1, 0, 0], &[0, 1, 1, 2]]);
        assert!(full_report(&ReportInput::Weights(q), &FanChoice::Index(2), DEFAULT_CAP).is_err());
    }
}
