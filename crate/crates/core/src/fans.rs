//! Simplicial cones over the columns of a fan matrix, fan validity, and
//! enumeration of all simplicial fans with given rays and support.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{combinations, solve_linear, ExactLinAlg, IndexSet, IntMat, RatMat};
use crate::fw::proportional_pair;
use crate::lp;

pub const DEFAULT_CAP: usize = 10;

/// A fan given by its maximal cones, each an index set into the columns
/// of `v`. Cones are kept sorted.
#[derive(Clone, Debug)]
pub struct Fan {
    v: IntMat,
    cones: Vec<IndexSet>,
    /// set once `is_fan`, support and ray checks have passed
    checked: bool,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Fan) -> bool {
        self.v == other.v && self.cones == other.cones
    }
}

impl Eq for Fan {}

impl Fan {
    /// Unchecked; consumers that need a genuine fan validate on first use.
    pub fn new(v: IntMat, mut cones: Vec<IndexSet>) -> Fan {
        cones.sort();
        Fan {
            v,
            cones,
            checked: false,
        }
    }

    /// A fan whose cones meet in common faces, cover the support of `v`
    /// and use every ray.
    pub fn validated(v: IntMat, cones: Vec<IndexSet>) -> Result<Fan> {
        let mut fan = Fan::new(v, cones);
        fan.validate()?;
        Ok(fan)
    }

    pub fn v(&self) -> &IntMat {
        &self.v
    }

    pub fn cones(&self) -> &[IndexSet] {
        &self.cones
    }

    pub fn into_cones(self) -> Vec<IndexSet> {
        self.cones
    }

    pub fn is_validated(&self) -> bool {
        self.checked
    }

    pub(crate) fn validate(&mut self) -> Result<()> {
        if self.checked {
            return Ok(());
        }
        self.check()?;
        self.checked = true;
        Ok(())
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.checked {
            return Ok(());
        }
        if !is_fan(&self.v, &self.cones)? {
            return Err(Error::InvalidFan("maximal cones do not meet in common faces".into()));
        }
        if !is_support_complete(&self.v, &self.cones)? {
            return Err(Error::InvalidFan("cones do not cover the support".into()));
        }
        if !uses_all_rays(&self.v, &self.cones) {
            return Err(Error::InvalidFan("some ray is not used".into()));
        }
        Ok(())
    }

    /// Complements of the maximal cones, the index family used on the
    /// weight side.
    pub fn complements(&self) -> Vec<IndexSet> {
        self.cones.iter().map(|c| c.complement(self.v.ncols())).collect()
    }
}

fn rat_col(v: &IntMat, j: usize) -> Vec<BigRational> {
    v.col(j).into_iter().map(BigRational::from_integer).collect()
}

fn check_cone(v: &IntMat, cone: &IndexSet) -> Result<()> {
    if let Some(&bad) = cone.one_based().iter().find(|&&i| i == 0 || i > v.ncols()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            max: v.ncols(),
        });
    }
    Ok(())
}

/// `x` lies in the closed cone spanned by the columns in `cone`.
pub fn cone_contains(v: &IntMat, cone: &IndexSet, x: &[BigRational]) -> Result<bool> {
    check_cone(v, cone)?;
    if x.len() != v.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "point of length {} in R^{}",
            x.len(),
            v.nrows()
        )));
    }
    let gens = v.select_cols(&cone.zero_based()).to_rat();
    Ok(lp::cone_coefficients(&gens, x).is_some())
}

fn is_simplicial(v: &IntMat, cone: &IndexSet) -> bool {
    v.select_cols(&cone.zero_based()).rank_exact() == cone.len()
}

/// `x` is a strictly positive combination of the generators of a
/// simplicial cone.
pub fn cone_contains_interior(v: &IntMat, cone: &IndexSet, x: &[BigRational]) -> Result<bool> {
    check_cone(v, cone)?;
    if x.len() != v.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "point of length {} in R^{}",
            x.len(),
            v.nrows()
        )));
    }
    if !is_simplicial(v, cone) {
        return Err(Error::InvalidFan(format!("cone {cone} is not simplicial")));
    }
    let gens = v.select_cols(&cone.zero_based()).to_rat();
    match solve_linear(&gens, x)? {
        Some(c) if gens.mul_vec(&c)? == x => Ok(c.iter().all(Signed::is_positive)),
        _ => Ok(false),
    }
}

/// Two simplicial cones meet in their common face: no point of both has a
/// positive coefficient on a generator of `s` outside `t`.
fn meet_properly(v: &IntMat, s: &[usize], t: &[usize]) -> bool {
    let only_s: Vec<usize> = s.iter().copied().filter(|i| !t.contains(i)).collect();
    if only_s.is_empty() {
        return true;
    }
    let n = v.nrows();
    let (ls, lt) = (s.len(), t.len());
    let a = RatMat::from_fn(n + 1, ls + lt, |row, var| {
        if row < n {
            if var < ls {
                BigRational::from_integer(v.get(row, s[var]).clone())
            } else {
                -BigRational::from_integer(v.get(row, t[var - ls]).clone())
            }
        } else if var < ls && only_s.contains(&s[var]) {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    let mut b = vec![BigRational::zero(); n + 1];
    b[n] = BigRational::one();
    lp::feasible_point(&a, &b).is_none()
}

/// `true` iff the simplicial cones pairwise intersect in common faces.
pub fn is_fan(v: &IntMat, cones: &[IndexSet]) -> Result<bool> {
    for c in cones {
        check_cone(v, c)?;
        if !is_simplicial(v, c) {
            return Err(Error::InvalidFan(format!("cone {c} is not simplicial")));
        }
    }
    let zb: Vec<Vec<usize>> = cones.iter().map(IndexSet::zero_based).collect();
    for (i, s) in zb.iter().enumerate() {
        for t in &zb[i + 1..] {
            if !meet_properly(v, s, t) || !meet_properly(v, t, s) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Normal vector of the hyperplane spanned by `n - 1` columns.
fn facet_normal(v: &IntMat, facet: &[usize]) -> Vec<BigInt> {
    let n = v.nrows();
    let f = v.select_cols(facet);
    (0..n)
        .map(|k| {
            let rows: Vec<usize> = (0..n).filter(|&i| i != k).collect();
            let minor = if rows.is_empty() {
                BigInt::one()
            } else {
                f.select_rows(&rows).det().expect("square minor")
            };
            if k % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
        .collect()
}

fn side(normal: &[BigInt], v: &IntMat, j: usize) -> i8 {
    let s: BigInt = normal.iter().zip(v.col(j)).map(|(a, b)| a * b).sum();
    if s.is_positive() {
        1
    } else if s.is_negative() {
        -1
    } else {
        0
    }
}

/// All columns of `v` lie weakly on one side of the facet's hyperplane.
fn on_boundary(v: &IntMat, facet: &[usize]) -> bool {
    let normal = facet_normal(v, facet);
    let sides: Vec<i8> = (0..v.ncols()).map(|j| side(&normal, v, j)).collect();
    sides.iter().all(|&s| s >= 0) || sides.iter().all(|&s| s <= 0)
}

fn facets(cone: &[usize]) -> Vec<Vec<usize>> {
    (0..cone.len())
        .map(|skip| {
            cone.iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &c)| c)
                .collect()
        })
        .collect()
}

fn require_full_dim(v: &IntMat, cones: &[IndexSet]) -> Result<()> {
    let n = v.nrows();
    for c in cones {
        check_cone(v, c)?;
        if c.len() != n || !is_simplicial(v, c) {
            return Err(Error::InvalidFan(format!(
                "cone {c} is not a full-dimensional simplicial cone"
            )));
        }
    }
    Ok(())
}

/// `true` iff the union of the cones is the cone spanned by all columns
/// of `v`: every facet is shared by exactly two cones or lies on the
/// boundary of that support cone.
pub fn is_support_complete(v: &IntMat, cones: &[IndexSet]) -> Result<bool> {
    require_full_dim(v, cones)?;
    if !is_fan(v, cones)? {
        return Err(Error::InvalidFan("cones overlap".into()));
    }
    if v.rank_exact() != v.nrows() || cones.is_empty() {
        return Ok(false);
    }
    let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for c in cones {
        for f in facets(&c.zero_based()) {
            *count.entry(f).or_default() += 1;
        }
    }
    Ok(count.iter().all(|(f, &k)| k == 2 || (k == 1 && on_boundary(v, f))))
}

/// Uses every column as a ray.
pub fn uses_all_rays(v: &IntMat, cones: &[IndexSet]) -> bool {
    (1..=v.ncols()).all(|j| cones.iter().any(|c| c.contains(j)))
}

fn check_enumeration_input(v: &IntMat, cap: usize) -> Result<()> {
    let s = v.ncols();
    if s > cap {
        return Err(Error::CapExceeded { rays: s, cap });
    }
    if v.nrows() == 0 || v.rank_exact() != v.nrows() {
        return Err(Error::Precondition("fan matrix must have full row rank".into()));
    }
    if let Some(j) = (0..s).find(|&j| v.col_is_zero(j)) {
        return Err(Error::Precondition(format!("column {} is zero", j + 1)));
    }
    if let Some((i, j)) = proportional_pair(v) {
        return Err(Error::Precondition(format!(
            "columns {} and {} are positively proportional",
            i + 1,
            j + 1
        )));
    }
    Ok(())
}

struct Search<'a> {
    v: &'a IntMat,
    candidates: Vec<Vec<usize>>,
    /// candidate indices by facet
    by_facet: BTreeMap<Vec<usize>, Vec<usize>>,
    boundary: BTreeMap<Vec<usize>, bool>,
    compatible: Vec<Vec<bool>>,
    found: BTreeSet<Vec<Vec<usize>>>,
}

impl Search<'_> {
    fn opposite(&self, facet: &[usize], a: usize, b: usize) -> bool {
        let normal = facet_normal(self.v, facet);
        let apex = |c: usize| -> usize {
            *self.candidates[c]
                .iter()
                .find(|x| !facet.contains(x))
                .expect("cone has one more ray")
        };
        side(&normal, self.v, apex(a)) * side(&normal, self.v, apex(b)) < 0
    }

    fn dfs(&mut self, chosen: &mut Vec<usize>) {
        let mut count: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
        for &c in chosen.iter() {
            for f in facets(&self.candidates[c]) {
                count.entry(f).or_insert((0, c)).0 += 1;
            }
        }
        let open = count
            .into_iter()
            .find(|(f, (k, _))| *k == 1 && !self.boundary[f])
            .map(|(f, (_, owner))| (f, owner));
        let Some((facet, owner)) = open else {
            let mut cones: Vec<Vec<usize>> = chosen.iter().map(|&c| self.candidates[c].clone()).collect();
            cones.sort();
            let rays: BTreeSet<usize> = cones.iter().flatten().copied().collect();
            if rays.len() == self.v.ncols() {
                self.found.insert(cones);
            }
            return;
        };
        let options: Vec<usize> = self.by_facet[&facet]
            .iter()
            .copied()
            .filter(|&c| !chosen.contains(&c))
            .filter(|&c| chosen.iter().all(|&d| self.compatible[c][d]))
            .filter(|&c| self.opposite(&facet, owner, c))
            .collect();
        for c in options {
            chosen.push(c);
            self.dfs(chosen);
            chosen.pop();
        }
    }
}

/// Candidate maximal cones: `n`-subsets of linearly independent columns
/// whose closed cone contains no other column.
fn candidate_cones(v: &IntMat) -> Vec<Vec<usize>> {
    let n = v.nrows();
    let s = v.ncols();
    combinations(s, n)
        .into_iter()
        .filter(|c| {
            let gens = v.select_cols(c).to_rat();
            if gens.det().map_or(true, |d| d.is_zero()) {
                return false;
            }
            (0..s).filter(|j| !c.contains(j)).all(|j| {
                let x = rat_col(v, j);
                let coeffs = solve_linear(&gens, &x).ok().flatten().expect("nonsingular system");
                coeffs.iter().any(Signed::is_negative)
            })
        })
        .collect()
}

/// Every simplicial fan whose rays are exactly the columns of `v` and
/// whose support is the cone spanned by them, sorted lexicographically by
/// their (sorted) lists of maximal cones.
pub fn enumerate_sf(v: &IntMat, cap: usize) -> Result<Vec<Fan>> {
    check_enumeration_input(v, cap)?;
    let candidates = candidate_cones(v);
    let mut by_facet: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, c) in candidates.iter().enumerate() {
        for f in facets(c) {
            by_facet.entry(f).or_default().push(k);
        }
    }
    let boundary = by_facet.keys().map(|f| (f.clone(), on_boundary(v, f))).collect();
    let k = candidates.len();
    let mut compatible = vec![vec![true; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let ok =
                meet_properly(v, &candidates[a], &candidates[b]) && meet_properly(v, &candidates[b], &candidates[a]);
            compatible[a][b] = ok;
            compatible[b][a] = ok;
        }
    }
    let seeds: Vec<usize> = (0..k).filter(|&c| candidates[c].contains(&0)).collect();
    let mut search = Search {
        v,
        candidates,
        by_facet,
        boundary,
        compatible,
        found: BTreeSet::new(),
    };
    for seed in seeds {
        search.dfs(&mut vec![seed]);
    }
    Ok(search
        .found
        .into_iter()
        .map(|cones| {
            let mut fan = Fan::new(v.clone(), cones.iter().map(|c| IndexSet::from_zero_based(c)).collect());
            fan.checked = true;
            fan
        })
        .collect())
}

/// Exactly one simplicial fan has these rays and support.
pub fn is_divisorially_detected(v: &IntMat, cap: usize) -> Result<bool> {
    Ok(enumerate_sf(v, cap)?.len() == 1)
}
