//! Linear algebra over F2 on bit-packed vectors.
//!
//! Vectors of length at most 64 live in a `u64`; bit `j` is coordinate `j`.
//! Pivots are chosen at the lowest set bit, so a reduced basis is ordered
//! by increasing pivot position.

/// Reduces `rows` in place to reduced row-echelon form and drops zero rows.
/// Returns the pivot bit index of each surviving row.
pub fn rref(rows: &mut Vec<u64>) -> Vec<u32> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for bit in 0..64u32 {
        let mask = 1u64 << bit;
        let Some(found) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot_row = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & mask != 0 {
                *r ^= pivot_row;
            }
        }
        pivots.push(bit);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Rank of the span of `rows`.
pub fn rank(rows: &[u64]) -> usize {
    let mut v = rows.to_vec();
    rref(&mut v).len()
}

/// Reduces `v` against a basis already in RREF with the given pivots.
pub fn reduce(v: u64, basis: &[u64], pivots: &[u32]) -> u64 {
    let mut v = v;
    for (row, &p) in basis.iter().zip(pivots) {
        if v >> p & 1 == 1 {
            v ^= row;
        }
    }
    v
}

/// An F2-linear map `F2^n -> F2^n` stored by the images of the unit vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub n: usize,
    pub cols: Vec<u64>,
}

impl LinMap {
    pub fn identity(n: usize) -> Self {
        LinMap { n, cols: (0..n).map(|j| 1u64 << j).collect() }
    }

    pub fn apply(&self, v: u64) -> u64 {
        let mut out = 0;
        let mut bits = v;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            out ^= self.cols[j];
            bits &= bits - 1;
        }
        out
    }

    /// Inverse map, or `None` when the columns are dependent.
    pub fn inverse(&self) -> Option<LinMap> {
        let n = self.n;
        let low: u128 = if n == 64 { u64::MAX as u128 } else { (1u128 << n) - 1 };
        let mut rows: Vec<u128> = self
            .cols
            .iter()
            .enumerate()
            .map(|(j, &c)| c as u128 | (1u128 << (n + j)))
            .collect();
        for (r, bit) in (0..n).enumerate() {
            let found = (r..n).find(|&i| rows[i] >> bit & 1 == 1)?;
            rows.swap(r, found);
            let p = rows[r];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && *row >> bit & 1 == 1 {
                    *row ^= p;
                }
            }
        }
        let mut cols = vec![0u64; n];
        for row in rows {
            let pivot = (row & low).trailing_zeros() as usize;
            cols[pivot] = (row >> n) as u64;
        }
        Some(LinMap { n, cols })
    }
}

/// Solution set `particular + span(kernel)` of an affine F2 system, one
/// equation `parity(row & x) = rhs` per entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: u64,
    pub kernel: Vec<u64>,
}

impl AffineSolution {
    pub fn count(&self) -> u128 {
        1u128 << self.kernel.len()
    }

    /// All solutions, enumerated by Gray code over the kernel basis.
    pub fn elements(&self) -> Vec<u64> {
        let k = self.kernel.len();
        let mut out = Vec::with_capacity(1usize << k);
        let mut x = self.particular;
        out.push(x);
        for i in 1u64..(1u64 << k) {
            x ^= self.kernel[i.trailing_zeros() as usize];
            out.push(x);
        }
        out
    }
}

/// Solves the system over `nvars` unknowns, or `None` when inconsistent.
pub fn solve_affine(eqs: &[(u64, bool)], nvars: usize) -> Option<AffineSolution> {
    assert!(nvars <= 64);
    let mut rows: Vec<u128> = eqs
        .iter()
        .map(|&(r, c)| r as u128 | ((c as u128) << 64))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for bit in 0..nvars {
        let Some(found) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, found);
        let p = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && *row >> bit & 1 == 1 {
                *row ^= p;
            }
        }
        pivots.push(bit);
        rank += 1;
    }
    if rows[rank..].iter().any(|&r| r >> 64 & 1 == 1) {
        return None;
    }
    let mut particular = 0u64;
    for (row, &p) in rows.iter().zip(&pivots) {
        if row >> 64 & 1 == 1 {
            particular |= 1 << p;
        }
    }
    let mut kernel = Vec::new();
    for free in (0..nvars).filter(|b| !pivots.contains(b)) {
        let mut v = 1u64 << free;
        for (row, &p) in rows.iter().zip(&pivots) {
            if row >> free & 1 == 1 {
                v |= 1 << p;
            }
        }
        kernel.push(v);
    }
    Some(AffineSolution { particular, kernel })
}
