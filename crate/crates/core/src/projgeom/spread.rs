//! Field reduction PG(r-1, q^t) -> PG(rt-1, q) and its Desarguesian spread.
//!
//! Spread elements are indexed by the normalized point of PG(r-1, q^t) they
//! come from. The owner of a vector is computed by undoing the reduction and
//! normalizing, so no lookup table over the whole ambient space is built.

use super::subspace::{Ambient, PVec, Subspace};
use super::{all_points, Point};
use crate::bitlin::LinMap;
use crate::error::{Error, Result};
use crate::gf2field::{BasisMap, Fe, Field};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct Spread {
    field: Field,
    r: usize,
    t: u32,
    /// Basis of F_{q^t} over F_q.
    omega: Vec<Fe>,
    /// F2-basis `theta^k` of F_q inside the big field.
    theta: Vec<Fe>,
    /// Big-field bits to F2 coordinates in the basis `theta^k * omega_j`
    /// (coordinate index `j * e + k`).
    to_coords: LinMap,
    amb: Ambient,
}

impl Spread {
    /// Reduction over F2 in the polynomial basis.
    pub fn binary(field: &Field, r: usize) -> Result<Spread> {
        Self::binary_with_basis(field, r, &BasisMap::polynomial(field.m()))
    }

    /// Reduction over F2 in an arbitrary F2-basis of the big field.
    pub fn binary_with_basis(field: &Field, r: usize, basis: &BasisMap) -> Result<Spread> {
        let omega = basis.vectors();
        Self::build(field, 1, r, omega, vec![Fe::ONE])
    }

    /// Reduction over the subfield F_{2^e}, basis `1, λ, …, λ^{t-1}`.
    pub fn over_subfield(field: &Field, e: u32, r: usize) -> Result<Spread> {
        if e == 0 || !field.m().is_multiple_of(e) {
            return Err(Error::BadSubfield { d: e, m: field.m() });
        }
        let t = field.m() / e;
        let lambda = field.lambda();
        let omega: Vec<Fe> = (0..t).map(|j| field.pow(lambda, j as u64)).collect();
        let theta = if e == 1 {
            vec![Fe::ONE]
        } else {
            let g = field.generator();
            let th = field.pow(g, field.mask() / ((1u64 << e) - 1));
            (0..e).map(|k| field.pow(th, k as u64)).collect()
        };
        Self::build(field, e, r, omega, theta)
    }

    fn build(field: &Field, e: u32, r: usize, omega: Vec<Fe>, theta: Vec<Fe>) -> Result<Spread> {
        if !(1..=3).contains(&r) {
            return Err(Error::BadParams(format!("vector dimension {r} outside 1..=3")));
        }
        let t = field.m() / e;
        let mut cols = Vec::with_capacity(field.m() as usize);
        for w in &omega {
            for th in &theta {
                cols.push(field.mul(*th, *w).0);
            }
        }
        let forward = LinMap { n: cols.len(), cols };
        let to_coords = forward
            .inverse()
            .ok_or_else(|| Error::BadParams("reduction basis is not a basis".into()))?;
        let amb = Ambient::new(field, e, r * t as usize)?;
        Ok(Spread { field: field.clone(), r, t, omega, theta, to_coords, amb })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Vector dimension `r` of the reduced projective space PG(r-1, q^t).
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// F_q-basis of the big field used for the reduction.
    pub fn omega(&self) -> &[Fe] {
        &self.omega
    }

    /// The ambient space F_q^{rt}.
    pub fn ambient(&self) -> &Ambient {
        &self.amb
    }

    fn element_coords(&self, x: Fe) -> Vec<Fe> {
        let bits = self.to_coords.apply(x.0);
        let e = self.theta.len();
        (0..self.t as usize)
            .map(|j| {
                let mut c = Fe::ZERO;
                for k in 0..e {
                    if bits >> (j * e + k) & 1 == 1 {
                        c += self.theta[k];
                    }
                }
                c
            })
            .collect()
    }

    /// Reduces a vector of F_{q^t}^r to F_q^{rt}.
    pub fn reduce(&self, coords: &[Fe]) -> PVec {
        assert_eq!(coords.len(), self.r);
        if self.amb.sub_degree() == 1 {
            let t = self.t;
            return coords
                .iter()
                .enumerate()
                .fold(0, |acc, (i, x)| acc | (self.to_coords.apply(x.0) as u128) << (i as u32 * t));
        }
        let mut all = Vec::with_capacity(self.r * self.t as usize);
        for &x in coords {
            all.extend(self.element_coords(x));
        }
        self.amb.pack(&all)
    }

    /// Inverse of [`Spread::reduce`].
    pub fn unreduce(&self, v: PVec) -> Vec<Fe> {
        let t = self.t as usize;
        (0..self.r)
            .map(|i| {
                let mut x = Fe::ZERO;
                for j in 0..t {
                    let c = self.amb.coord(v, i * t + j);
                    if !c.is_zero() {
                        x += self.field.mul(c, self.omega[j]);
                    }
                }
                x
            })
            .collect()
    }

    /// The point of PG(r-1, q^t) whose spread element contains `v`.
    pub fn owner(&self, v: PVec) -> Point {
        Point::new(&self.field, &self.unreduce(v)).expect("nonzero vector")
    }

    /// The spread element of `p`: all F_{q^t}-multiples, reduced.
    pub fn element(&self, p: &Point) -> Subspace {
        let vecs: Vec<PVec> = self
            .omega
            .iter()
            .map(|w| {
                let c: Vec<Fe> = p.coords().iter().map(|&x| self.field.mul(*w, x)).collect();
                self.reduce(&c)
            })
            .collect();
        Subspace::span_of(&self.amb, &vecs)
    }

    /// Field reduction of a point; same as [`Spread::element`].
    pub fn field_reduce(&self, p: &Point) -> Subspace {
        self.element(p)
    }

    /// Number of points of `u` lying in each spread element it meets.
    pub fn owner_counts(&self, u: &Subspace) -> BTreeMap<Point, u64> {
        let mut counts = BTreeMap::new();
        u.for_each_point(|v| *counts.entry(self.owner(v)).or_insert(0) += 1);
        counts
    }

    /// B(U): the spread elements meeting `u`, as points of PG(r-1, q^t).
    pub fn b_operator(&self, u: &Subspace) -> BTreeSet<Point> {
        let mut out = BTreeSet::new();
        u.for_each_point(|v| {
            out.insert(self.owner(v));
        });
        out
    }

    /// Checks that the elements partition the ambient point set.
    pub fn verify_partition(&self) -> bool {
        let total = self.amb.point_count();
        let mut seen = std::collections::HashSet::new();
        let mut sum = 0u64;
        for p in all_points(&self.field, self.r) {
            let el = self.element(&p);
            if el.rank() != self.t as usize {
                return false;
            }
            let mut ok = true;
            el.for_each_point(|v| {
                ok &= seen.insert(v) && self.owner(v) == p;
                sum += 1;
            });
            if !ok {
                return false;
            }
        }
        sum == total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2field::find_normal_basis;

    #[test]
    fn pg1_4_partition() {
        let f = Field::canonical(2).unwrap();
        let s = Spread::binary(&f, 2).unwrap();
        assert!(s.verify_partition());
        assert_eq!(s.ambient().point_count(), 15);
        for p in all_points(&f, 2) {
            assert_eq!(s.element(&p).point_count(), 3);
        }
    }

    #[test]
    fn pg2_16_spread_counts() {
        let f = Field::canonical(4).unwrap();
        let s = Spread::binary(&f, 3).unwrap();
        assert_eq!(all_points(&f, 3).len(), 273);
        assert!(s.verify_partition());
        assert_eq!(273 * 15, s.ambient().point_count());
    }

    #[test]
    fn normal_basis_and_subfield_spreads_partition() {
        let f = Field::canonical(4).unwrap();
        let nb = find_normal_basis(&f);
        assert!(Spread::binary_with_basis(&f, 2, &nb).unwrap().verify_partition());
        assert!(Spread::binary_with_basis(&f, 3, &nb).unwrap().verify_partition());
        let s4 = Spread::over_subfield(&f, 2, 3).unwrap();
        assert!(s4.verify_partition());
        assert_eq!(s4.ambient().point_count(), 1365);
        let f6 = Field::canonical(6).unwrap();
        assert!(Spread::over_subfield(&f6, 3, 2).unwrap().verify_partition());
        assert!(Spread::over_subfield(&f6, 2, 3).unwrap().verify_partition());
    }

    #[test]
    fn reduce_round_trip() {
        let f = Field::canonical(6).unwrap();
        for e in [1, 2, 3] {
            let s = Spread::over_subfield(&f, e, 3).unwrap();
            for x in [Fe(0), Fe(5), Fe(63)] {
                for y in [Fe(1), Fe(17)] {
                    let v = [x, y, Fe(40)];
                    assert_eq!(s.unreduce(s.reduce(&v)), v.to_vec());
                }
            }
        }
    }

    #[test]
    fn b_operator_trivial_cases() {
        let f = Field::canonical(3).unwrap();
        let s = Spread::binary(&f, 2).unwrap();
        let p = Point::new(&f, &[Fe::ONE, Fe(5)]).unwrap();
        let b = s.b_operator(&s.element(&p));
        assert_eq!(b.into_iter().collect::<Vec<_>>(), vec![p]);
        let whole = Subspace::whole(s.ambient());
        assert_eq!(s.b_operator(&whole).len(), 9);
    }

    #[test]
    fn lines_meet_at_least_two_elements_or_lie_inside_one() {
        for h in 2..=4 {
            let f = Field::canonical(h).unwrap();
            let s = Spread::binary(&f, 2).unwrap();
            let amb = s.ambient();
            let n = amb.n() as u32;
            for a in 1u128..(1 << n) {
                for b in (a + 1)..(1 << n) {
                    let line = Subspace::span_of(amb, &[a, b]);
                    let size = s.b_operator(&line).len();
                    let inside = s.element(&s.owner(a)).contains(b);
                    if inside {
                        assert_eq!(size, 1);
                    } else {
                        assert!(size == 2 || size == 3, "size {size}");
                    }
                }
            }
        }
    }
}
