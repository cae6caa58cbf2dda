//! Subspaces of F_{2^r}^n in reduced row-echelon form.
//!
//! Coordinates are subfield elements of a carrier field, packed side by
//! side into a `u128`. Over F2 each coordinate takes one bit; over a proper
//! subfield each takes the carrier's full bit width.

use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};

/// A packed vector; coordinate `i` sits at bits `i*width .. (i+1)*width`.
pub type PVec = u128;

/// The vector space F_{2^r}^n, with F_{2^r} sitting inside a carrier field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient {
    field: Field,
    sub: u32,
    n: usize,
    width: u32,
}

impl Ambient {
    pub fn new(field: &Field, sub: u32, n: usize) -> Result<Ambient> {
        if sub == 0 || !field.m().is_multiple_of(sub) {
            return Err(Error::BadSubfield { d: sub, m: field.m() });
        }
        let width = if sub == 1 { 1 } else { field.m() };
        if n as u32 * width > 64 {
            return Err(Error::TooLarge(format!("{n} coordinates of {width} bits exceed 64 bits")));
        }
        Ok(Ambient { field: field.clone(), sub, n, width })
    }

    /// The space F2^n.
    pub fn binary(n: usize) -> Ambient {
        Ambient::new(&Field::binary(), 1, n).expect("n <= 64")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Degree of the base field over F2.
    pub fn sub_degree(&self) -> u32 {
        self.sub
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Order of the base field.
    pub fn base_order(&self) -> u64 {
        1u64 << self.sub
    }

    pub fn base_elements(&self) -> Vec<Fe> {
        if self.sub == 1 {
            vec![Fe::ZERO, Fe::ONE]
        } else {
            self.field.subfield_elements(self.sub).expect("validated subfield")
        }
    }

    fn cmask(&self) -> u128 {
        (1u128 << self.width) - 1
    }

    pub fn coord(&self, v: PVec, i: usize) -> Fe {
        Fe((v >> (i as u32 * self.width) & self.cmask()) as u64)
    }

    pub fn pack(&self, coords: &[Fe]) -> PVec {
        assert_eq!(coords.len(), self.n);
        coords
            .iter()
            .enumerate()
            .fold(0, |acc, (i, c)| acc | (c.0 as u128) << (i as u32 * self.width))
    }

    pub fn unpack(&self, v: PVec) -> Vec<Fe> {
        (0..self.n).map(|i| self.coord(v, i)).collect()
    }

    pub fn scale(&self, v: PVec, c: Fe) -> PVec {
        if c == Fe::ONE {
            return v;
        }
        if c.is_zero() {
            return 0;
        }
        let mut out = 0;
        for i in 0..self.n {
            let x = self.coord(v, i);
            if !x.is_zero() {
                out |= (self.field.mul(x, c).0 as u128) << (i as u32 * self.width);
            }
        }
        out
    }

    fn lead(&self, v: PVec) -> Option<usize> {
        if v == 0 {
            None
        } else {
            Some((v.trailing_zeros() / self.width) as usize)
        }
    }

    /// Scales a nonzero vector so its first nonzero coordinate is 1.
    pub fn normalize(&self, v: PVec) -> PVec {
        match self.lead(v) {
            None => 0,
            Some(i) => {
                let c = self.coord(v, i);
                self.scale(v, self.field.inv(c).expect("nonzero lead"))
            }
        }
    }

    /// Number of points of PG(n-1, 2^r).
    pub fn point_count(&self) -> u64 {
        let q = self.base_order();
        (q.pow(self.n as u32) - 1) / (q - 1)
    }

    /// Every vector of the ambient space, in packed order (small spaces only).
    pub fn all_vectors(&self) -> Vec<PVec> {
        let whole = Subspace::whole(self);
        let mut out = vec![0];
        whole.for_each_vector(|v| out.push(v));
        out
    }
}

/// A subspace as the RREF basis of its vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    amb: Ambient,
    rows: Vec<PVec>,
}

impl std::hash::Hash for Subspace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.amb.n.hash(state);
        self.rows.hash(state);
    }
}

impl Subspace {
    pub fn zero(amb: &Ambient) -> Subspace {
        Subspace { amb: amb.clone(), rows: Vec::new() }
    }

    pub fn whole(amb: &Ambient) -> Subspace {
        let rows = (0..amb.n).map(|i| 1u128 << (i as u32 * amb.width)).collect();
        Subspace { amb: amb.clone(), rows }
    }

    /// Span of the given vectors.
    pub fn span_of(amb: &Ambient, vectors: &[PVec]) -> Subspace {
        let mut rows = vectors.to_vec();
        rref(amb, &mut rows);
        Subspace { amb: amb.clone(), rows }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.amb
    }

    pub fn rows(&self) -> &[PVec] {
        &self.rows
    }

    /// Vector dimension.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension; the zero subspace has dimension -1.
    pub fn proj_dim(&self) -> i64 {
        self.rows.len() as i64 - 1
    }

    /// Reduces `v` against the basis; zero iff `v` lies in the subspace.
    pub fn reduce(&self, mut v: PVec) -> PVec {
        for &r in &self.rows {
            let p = self.amb.lead(r).expect("nonzero row");
            let c = self.amb.coord(v, p);
            if !c.is_zero() {
                v ^= self.amb.scale(r, c);
            }
        }
        v
    }

    pub fn contains(&self, v: PVec) -> bool {
        self.reduce(v) == 0
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.amb == other.amb && self.rows.iter().all(|&r| other.contains(r))
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.amb != other.amb {
            Err(Error::AmbientMismatch)
        } else {
            Ok(())
        }
    }

    pub fn span(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut all = self.rows.clone();
        all.extend_from_slice(&other.rows);
        Ok(Subspace::span_of(&self.amb, &all))
    }

    /// Intersection by the Zassenhaus procedure on `[a | a]`, `[b | 0]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let amb = &self.amb;
        let doubled = Ambient { n: 2 * amb.n, ..amb.clone() };
        let shift = amb.n as u32 * amb.width;
        let mut rows: Vec<PVec> = self.rows.iter().map(|&a| a | a << shift).collect();
        rows.extend(other.rows.iter().copied());
        rref(&doubled, &mut rows);
        let low = (1u128 << shift) - 1;
        let meet: Vec<PVec> = rows.iter().filter(|&&r| r & low == 0).map(|&r| r >> shift).collect();
        Ok(Subspace::span_of(amb, &meet))
    }

    /// Calls `f` on every nonzero vector.
    pub fn for_each_vector(&self, mut f: impl FnMut(PVec)) {
        let k = self.rows.len();
        if k == 0 {
            return;
        }
        if self.amb.sub == 1 {
            let mut v = 0;
            for i in 1u64..(1u64 << k) {
                v ^= self.rows[i.trailing_zeros() as usize];
                f(v);
            }
            return;
        }
        let elems = self.amb.base_elements();
        let q = elems.len();
        let mut idx = vec![0usize; k];
        loop {
            let mut carry = 0;
            while carry < k {
                idx[carry] += 1;
                if idx[carry] < q {
                    break;
                }
                idx[carry] = 0;
                carry += 1;
            }
            if carry == k {
                return;
            }
            let v = idx
                .iter()
                .zip(&self.rows)
                .fold(0, |acc, (&j, &r)| acc ^ self.amb.scale(r, elems[j]));
            f(v);
        }
    }

    /// Calls `f` once per projective point, with normalized representatives.
    pub fn for_each_point(&self, mut f: impl FnMut(PVec)) {
        let k = self.rows.len();
        if self.amb.sub == 1 {
            self.for_each_vector(f);
            return;
        }
        let elems = self.amb.base_elements();
        let q = elems.len();
        for lead in 0..k {
            let free = k - lead - 1;
            let total = (q as u64).pow(free as u32);
            for mut t in 0..total {
                let mut v = self.rows[lead];
                for r in &self.rows[lead + 1..] {
                    let c = elems[(t % q as u64) as usize];
                    t /= q as u64;
                    v ^= self.amb.scale(*r, c);
                }
                f(v);
            }
        }
    }

    /// Normalized points, sorted lexicographically by coordinates.
    pub fn points(&self) -> Vec<PVec> {
        let mut out = Vec::new();
        self.for_each_point(|v| out.push(v));
        out.sort_by_cached_key(|&v| self.amb.unpack(v));
        out
    }

    pub fn point_count(&self) -> u64 {
        let q = self.amb.base_order();
        (q.pow(self.rank() as u32) - 1) / (q - 1)
    }

    /// Basis rows as coordinate lists.
    pub fn matrix(&self) -> Vec<Vec<Fe>> {
        self.rows.iter().map(|&r| self.amb.unpack(r)).collect()
    }

    /// Re-embeds into a larger ambient with the same base field, padding zeros.
    pub fn embed(&self, target: &Ambient) -> Result<Subspace> {
        if target.field != self.amb.field || target.sub != self.amb.sub || target.n < self.amb.n {
            return Err(Error::AmbientMismatch);
        }
        Ok(Subspace { amb: target.clone(), rows: self.rows.clone() })
    }
}

/// In-place RREF; pivots at the lowest coordinate, zero rows removed.
pub(crate) fn rref(amb: &Ambient, rows: &mut Vec<PVec>) {
    let mut rank = 0;
    for col in 0..amb.n {
        let Some(found) = (rank..rows.len()).find(|&i| !amb.coord(rows[i], col).is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = amb.field.inv(amb.coord(rows[rank], col)).expect("nonzero pivot");
        let pivot_row = amb.scale(rows[rank], inv);
        rows[rank] = pivot_row;
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank {
                let c = amb.coord(*r, col);
                if !c.is_zero() {
                    *r ^= amb.scale(pivot_row, c);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
}
