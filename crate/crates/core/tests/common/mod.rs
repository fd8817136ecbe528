//! Shared generators and independent oracles for the integration tests.
//! The oracles use plain machine integers and brute force so that they do
//! not share code paths with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use galekit::exact::IntMat;
use galekit::ExactLinAlg;
use num_traits::ToPrimitive;
use rand::Rng;

pub fn to_i64(m: &IntMat) -> Vec<Vec<i64>> {
    m.rows_iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small entry")).collect())
        .collect()
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMat {
    IntMat::from_vec_i64(
        (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect(),
    )
}

/// Random `n x (n + r)` matrix of full row rank with `n + r <= max_cols`.
pub fn random_full_rank<R: Rng>(rng: &mut R, max_cols: usize, bound: i64) -> IntMat {
    loop {
        let n = rng.gen_range(1..max_cols);
        let r = rng.gen_range(1..=max_cols - n);
        let a = random_matrix(rng, n, n + r, bound);
        if a.rank_exact() == n {
            return a;
        }
    }
}

/// Laplace expansion in i128.
pub fn det_laplace(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det_laplace(&minor);
    }
    total
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// gcd of all `k x k` minors; 0 when they all vanish.
pub fn minors_gcd(a: &[Vec<i64>], k: usize) -> i128 {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut g = 0i128;
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let m: Vec<Vec<i128>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| a[i][j] as i128).collect())
                .collect();
            g = gcd(g, det_laplace(&m));
        }
    }
    g
}

/// Invariant factors from the gcd-of-minors chain `d_k / d_{k-1}`.
pub fn invariant_factors(a: &[Vec<i64>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let d = minors_gcd(a, k);
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Row-style Hermite normal form clauses: zero rows last, pivots strictly
/// increasing and positive, entries above a pivot reduced into `[0, p)`,
/// entries below and left of a pivot zero.
pub fn hnf_clauses(h: &[Vec<i64>]) -> Result<(), String> {
    let mut last_pivot: Option<usize> = None;
    let mut zero_seen = false;
    for (i, row) in h.iter().enumerate() {
        match row.iter().position(|&x| x != 0) {
            None => zero_seen = true,
            Some(p) => {
                if zero_seen {
                    return Err(format!("nonzero row {i} after a zero row"));
                }
                if last_pivot.is_some_and(|q| p <= q) {
                    return Err(format!("pivot of row {i} does not move right"));
                }
                let pv = row[p];
                if pv <= 0 {
                    return Err(format!("pivot of row {i} is not positive"));
                }
                for (k, above) in h[..i].iter().enumerate() {
                    if above[p] < 0 || above[p] >= pv {
                        return Err(format!("entry ({k},{p}) not reduced modulo the pivot {pv}"));
                    }
                }
                for below in &h[i + 1..] {
                    if below[p] != 0 {
                        return Err(format!("nonzero entry below the pivot of row {i}"));
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    Ok(())
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| (0..cols).map(|j| (0..inner).map(|k| r[k] * b[k][j]).sum()).collect())
        .collect()
}

/// Membership in the row lattice of a full-row-rank integer basis, by
/// Cramer's rule on a nonsingular maximal minor.
pub struct MembershipOracle {
    basis: Vec<Vec<i64>>,
    cols: Vec<usize>,
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl MembershipOracle {
    pub fn new(basis: Vec<Vec<i64>>) -> Self {
        let k = basis.len();
        let m = basis.first().map_or(0, Vec::len);
        if k == 0 {
            return MembershipOracle {
                basis,
                cols: Vec::new(),
                adj: Vec::new(),
                det: 1,
            };
        }
        for cols in subsets(m, k) {
            let sq: Vec<Vec<i128>> = basis
                .iter()
                .map(|r| cols.iter().map(|&j| r[j] as i128).collect())
                .collect();
            let det = det_laplace(&sq);
            if det == 0 {
                continue;
            }
            // adj[j][i] = cofactor(i, j)
            let mut adj = vec![vec![0i128; k]; k];
            for i in 0..k {
                for j in 0..k {
                    let minor: Vec<Vec<i128>> = sq
                        .iter()
                        .enumerate()
                        .filter(|&(r, _)| r != i)
                        .map(|(_, row)| {
                            row.iter()
                                .enumerate()
                                .filter(|&(c, _)| c != j)
                                .map(|(_, &x)| x)
                                .collect()
                        })
                        .collect();
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    adj[j][i] = sign * det_laplace(&minor);
                }
            }
            return MembershipOracle { basis, cols, adj, det };
        }
        panic!("basis is not of full row rank");
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let k = self.basis.len();
        if k == 0 {
            return x.iter().all(|&v| v == 0);
        }
        // y * M = x_S  =>  y = x_S * adj(M) / det
        let xs: Vec<i128> = self.cols.iter().map(|&j| x[j] as i128).collect();
        let mut y = vec![0i128; k];
        for (i, yi) in y.iter_mut().enumerate() {
            let num: i128 = (0..k).map(|l| xs[l] * self.adj[l][i]).sum();
            if num % self.det != 0 {
                return false;
            }
            *yi = num / self.det;
        }
        (0..x.len()).all(|j| (0..k).map(|i| y[i] * self.basis[i][j] as i128).sum::<i128>() == x[j] as i128)
    }
}

/// Independent rank over i128 by fraction-free elimination.
pub fn rank_i128(a: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            let f = m[i][c];
            let g = m[rank][c];
            for j in 0..cols {
                m[i][j] = m[i][j] * g - m[rank][j] * f;
            }
            let content = m[i].iter().fold(0i128, |acc, &x| gcd(acc, x));
            if content > 1 {
                m[i].iter_mut().for_each(|x| *x /= content);
            }
        }
        rank += 1;
    }
    rank
}
