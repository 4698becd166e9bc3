//! Sparse linear algebra over `F_p`.
//!
//! Vectors are sorted `(index, value)` lists with values in `[1, p)`. Kernels and
//! ranks use Gaussian elimination with Markowitz pivot selection; every space
//! handed back to callers is in reduced row echelon form, which is unique, so
//! results do not depend on the pivot order.

use std::collections::BTreeMap;

use crate::graded::is_prime;

/// A sparse vector over `F_p`: strictly increasing indices, nonzero values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVec {
    entries: Vec<(usize, u64)>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec {
            entries: Vec::new(),
        }
    }

    pub fn unit(index: usize) -> SparseVec {
        SparseVec {
            entries: vec![(index, 1)],
        }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs, summing repeats
    /// and reducing mod `p`.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, i64)>, p: u64) -> SparseVec {
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        for (i, v) in pairs {
            let v = v.rem_euclid(p as i64) as u64;
            let e = acc.entry(i).or_insert(0);
            *e = (*e + v) % p;
        }
        SparseVec {
            entries: acc.into_iter().filter(|&(_, v)| v != 0).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, u64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> u64 {
        match self.entries.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(k) => self.entries[k].1,
            Err(_) => 0,
        }
    }

    /// Index of the first nonzero entry.
    pub fn pivot(&self) -> Option<usize> {
        self.entries.first().map(|&(i, _)| i)
    }

    pub fn scale(&self, c: u64, p: u64) -> SparseVec {
        if c.is_multiple_of(p) {
            return SparseVec::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|&(i, v)| (i, mulmod(v, c, p)))
                .collect(),
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &SparseVec, c: u64, p: u64) -> SparseVec {
        let c = c % p;
        if c == 0 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(i, x)), Some(&&(j, y))) => {
                    if i < j {
                        out.push((i, x));
                        a.next();
                    } else if j < i {
                        out.push((j, mulmod(y, c, p)));
                        b.next();
                    } else {
                        let s = (x + mulmod(y, c, p)) % p;
                        if s != 0 {
                            out.push((i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&(i, x)), None) => {
                    out.push((i, x));
                    a.next();
                }
                (None, Some(&&(j, y))) => {
                    out.push((j, mulmod(y, c, p)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    /// Applies the linear map whose `i`-th column is `columns[i]`.
    pub fn apply(&self, columns: &[SparseVec], p: u64) -> SparseVec {
        let mut out = SparseVec::new();
        for &(i, v) in &self.entries {
            out = out.add_scaled(&columns[i], v, p);
        }
        out
    }
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(is_prime(p) && !a.is_multiple_of(p));
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

/// A subspace stored as its reduced row echelon basis (pivot = first index).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echelon {
    rows: Vec<SparseVec>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    /// Reduced row echelon basis of the span of `vectors`.
    pub fn span(vectors: impl IntoIterator<Item = SparseVec>, p: u64) -> Echelon {
        let mut e = Echelon::new();
        for v in vectors {
            e.insert(v, p);
        }
        e
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .map(|r| r.pivot().expect("echelon rows are nonzero"))
    }

    /// Normal form of `v` modulo this space: the unique representative with
    /// zero entries at every pivot. Also returns the coefficients (one per row)
    /// such that `v = normal + Σ coeff_k · row_k`.
    pub fn reduce(&self, v: &SparseVec, p: u64) -> (SparseVec, Vec<u64>) {
        let mut v = v.clone();
        let mut coeffs = vec![0; self.rows.len()];
        for (k, row) in self.rows.iter().enumerate() {
            let piv = row.pivot().unwrap();
            let c = v.get(piv);
            if c != 0 {
                // rows are monic at the pivot
                v = v.add_scaled(row, p - c, p);
                coeffs[k] = c;
            }
        }
        (v, coeffs)
    }

    pub fn contains(&self, v: &SparseVec, p: u64) -> bool {
        self.reduce(v, p).0.is_zero()
    }

    /// Adds `v` to the space, keeping the basis fully reduced. Returns whether
    /// the dimension grew.
    pub fn insert(&mut self, v: SparseVec, p: u64) -> bool {
        let (r, _) = self.reduce(&v, p);
        let Some(piv) = r.pivot() else {
            return false;
        };
        let r = r.scale(inv_mod(r.get(piv), p), p);
        for row in &mut self.rows {
            let c = row.get(piv);
            if c != 0 {
                *row = row.add_scaled(&r, p - c, p);
            }
        }
        let pos = self.rows.partition_point(|row| row.pivot().unwrap() < piv);
        self.rows.insert(pos, r);
        true
    }
}

/// Result of eliminating the rows of a matrix.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub rank: usize,
    /// Combinations of the input rows that vanish, in reduced echelon form.
    pub left_kernel: Echelon,
}

/// Gaussian elimination on `rows` with Markowitz pivoting (minimize
/// `(row nnz − 1)·(column count − 1)`, ties broken by position).
pub fn eliminate(rows: &[SparseVec], p: u64) -> Elimination {
    let n = rows.len();
    let mut work: Vec<SparseVec> = rows.to_vec();
    let mut combo: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
    let mut active: Vec<bool> = vec![true; n];
    let mut rank = 0;
    loop {
        let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
        for (r, row) in work.iter().enumerate() {
            if active[r] {
                for &(c, _) in row.entries() {
                    *col_count.entry(c).or_insert(0) += 1;
                }
            }
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in work.iter().enumerate() {
            if !active[r] || row.is_zero() {
                continue;
            }
            for &(c, _) in row.entries() {
                let cost = (row.nnz() - 1) * (col_count[&c] - 1);
                if best.is_none_or(|(bc, _, _)| cost < bc) {
                    best = Some((cost, r, c));
                }
            }
        }
        let Some((_, pr, pc)) = best else {
            break;
        };
        active[pr] = false;
        rank += 1;
        let inv = inv_mod(work[pr].get(pc), p);
        let pivot_row = work[pr].scale(inv, p);
        let pivot_combo = combo[pr].scale(inv, p);
        for r in 0..n {
            if !active[r] {
                continue;
            }
            let c = work[r].get(pc);
            if c != 0 {
                work[r] = work[r].add_scaled(&pivot_row, p - c, p);
                combo[r] = combo[r].add_scaled(&pivot_combo, p - c, p);
            }
        }
    }
    let kernel = (0..n).filter(|&r| active[r]).map(|r| combo[r].clone());
    Elimination {
        rank,
        left_kernel: Echelon::span(kernel, p),
    }
}

/// Kernel of the linear map sending basis vector `i` to `images[i]`.
pub fn kernel(images: &[SparseVec], p: u64) -> Echelon {
    eliminate(images, p).left_kernel
}

pub fn rank(vectors: &[SparseVec], p: u64) -> usize {
    eliminate(vectors, p).rank
}
