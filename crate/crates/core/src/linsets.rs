//! Linear sets on the projective line, their weight profiles, the club
//! constructors, and recognition of clubs whose head has weight rank - 1.

use crate::bitlin;
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use crate::projgeom::{all_points, coordinates_on_line, PVec, Point, Spread, Subspace};
use serde::Serialize;
use std::collections::BTreeSet;

/// A subspace `mu` of the reduced space together with the weights of B(mu).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSetWitness {
    pub mu: Subspace,
    pub rank: usize,
    /// Points of B(mu) with their weights, sorted by point.
    pub profile: Vec<(Point, u32)>,
}

/// Summary of an i-club: head weight, rank, head and number of points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClubDescriptor {
    pub i: u32,
    pub rank: usize,
    pub head: Point,
    pub size: usize,
}

impl ClubDescriptor {
    /// `q0^{k-1} + … + q0^i + 1`.
    pub fn expected_size(q0: u64, i: u32, rank: usize) -> u64 {
        (i..rank as u32).map(|e| q0.pow(e)).sum::<u64>() + 1
    }
}

impl LinearSetWitness {
    pub fn size(&self) -> usize {
        self.profile.len()
    }

    pub fn points(&self) -> Vec<Point> {
        self.profile.iter().map(|(p, _)| *p).collect()
    }

    pub fn point_set(&self) -> BTreeSet<Point> {
        self.profile.iter().map(|(p, _)| *p).collect()
    }

    pub fn weight(&self, p: &Point) -> u32 {
        self.profile
            .binary_search_by(|(x, _)| x.cmp(p))
            .map(|i| self.profile[i].1)
            .unwrap_or(0)
    }

    pub fn is_scattered(&self) -> bool {
        self.profile.iter().all(|&(_, w)| w == 1)
    }

    /// The club structure, if exactly one point has weight above 1.
    pub fn club(&self) -> Option<ClubDescriptor> {
        let heavy: Vec<&(Point, u32)> = self.profile.iter().filter(|(_, w)| *w > 1).collect();
        match heavy.as_slice() {
            [(head, i)] => Some(ClubDescriptor { i: *i, rank: self.rank, head: *head, size: self.size() }),
            _ => None,
        }
    }

    /// Head weight for clubs, 1 for scattered sets.
    pub fn club_weight(&self) -> Option<u32> {
        if self.is_scattered() {
            Some(1)
        } else {
            self.club().map(|c| c.i)
        }
    }

    /// `Σ (q0^w - 1) = q0^rank - 1`.
    pub fn vector_count_identity(&self) -> bool {
        let q0 = self.mu.ambient().base_order() as u128;
        let lhs: u128 = self.profile.iter().map(|&(_, w)| q0.pow(w) - 1).sum();
        lhs == q0.pow(self.rank as u32) - 1
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mu: Vec<Vec<String>> = self
            .mu
            .matrix()
            .iter()
            .map(|r| r.iter().map(|c| c.to_hex()).collect())
            .collect();
        let profile: Vec<serde_json::Value> = self
            .profile
            .iter()
            .map(|(p, w)| serde_json::json!({ "point": p, "weight": w }))
            .collect();
        serde_json::json!({ "rank": self.rank, "mu": mu, "profile": profile })
    }
}

/// Computes B(mu) with weights.
pub fn weight_profile(mu: &Subspace, spread: &Spread) -> Result<LinearSetWitness> {
    if mu.ambient() != spread.ambient() {
        return Err(Error::AmbientMismatch);
    }
    let q0 = mu.ambient().base_order();
    let counts = spread.owner_counts(mu);
    let profile = counts
        .into_iter()
        .map(|(p, c)| {
            // c = (q0^w - 1) / (q0 - 1)
            let total = c * (q0 - 1) + 1;
            let w = total.trailing_zeros() / q0.trailing_zeros();
            debug_assert_eq!(q0.pow(w), total);
            (p, w)
        })
        .collect();
    Ok(LinearSetWitness { rank: mu.rank(), mu: mu.clone(), profile })
}

fn require_line(spread: &Spread) -> Result<()> {
    if spread.r() != 2 {
        return Err(Error::BadParams("club constructors need a reduction of PG(1, q^h)".into()));
    }
    Ok(())
}

fn witness_from_images(spread: &Spread, images: &[[Fe; 2]]) -> Result<LinearSetWitness> {
    let vecs: Vec<PVec> = images.iter().map(|v| spread.reduce(v)).collect();
    let mu = Subspace::span_of(spread.ambient(), &vecs);
    weight_profile(&mu, spread)
}

fn base_degree(spread: &Spread) -> u32 {
    spread.ambient().sub_degree()
}

/// `{(x, Tr(x))}` with Tr the trace onto the base field: an (h-1)-club with head (1,0).
pub fn club_trace(spread: &Spread) -> Result<LinearSetWitness> {
    require_line(spread)?;
    let f = spread.field();
    let e = base_degree(spread);
    if spread.t() < 2 {
        return Err(Error::BadParams("need h >= 2".into()));
    }
    let images: Vec<[Fe; 2]> = spread.omega().iter().map(|&w| Ok([w, f.trace(w, e)?])).collect::<Result<_>>()?;
    witness_from_images(spread, &images)
}

/// `{(L(x)^{q0^n}, x)}` with L the relative trace onto F_{q0^{h-i}}.
pub fn club_km(spread: &Spread, i: u32, n: u32) -> Result<LinearSetWitness> {
    require_line(spread)?;
    let h = spread.t();
    let e = base_degree(spread);
    if i == 0 || i >= h || !h.is_multiple_of(h - i) {
        return Err(Error::BadParams(format!("need 1 <= i < h and (h-i) | h, got i={i}, h={h}")));
    }
    if gcd(h - i, n) != 1 {
        return Err(Error::BadParams(format!("gcd(h-i, n) = gcd({}, {n}) != 1", h - i)));
    }
    let f = spread.field();
    let images: Vec<[Fe; 2]> = spread
        .omega()
        .iter()
        .map(|&w| {
            let l = f.trace(w, e * (h - i))?;
            Ok([f.frobenius(l, e * n), w])
        })
        .collect::<Result<_>>()?;
    witness_from_images(spread, &images)
}

/// Parameters of the tower club `{(f(x0) - a x0, b x0 + Σ x_i ω^i)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GwParams {
    /// Degree of F_{q0^r} over the base field.
    pub r: u32,
    /// Height of the tower F_{q0^{rt}} over F_{q0^r}.
    pub t: u32,
    /// `f(x) = x^{q0^n}`.
    pub n: u32,
    pub a: Fe,
    pub b: Fe,
}

/// Whether `f(x) = a x` has a nonzero solution in F_{q0^r}.
pub fn gw_has_nonzero_solution(spread: &Spread, p: &GwParams) -> Result<bool> {
    let f = spread.field();
    let e = base_degree(spread);
    let sub = f.subfield_elements(e * p.r)?;
    Ok(sub.iter().any(|&x| !x.is_zero() && f.frobenius(x, e * p.n) == f.mul(p.a, x)))
}

/// The tower club; head (0,1) of weight r(t-1), or r(t-1)+1 when
/// `f(x) = a x` has a nonzero solution.
pub fn club_gw(spread: &Spread, p: &GwParams) -> Result<LinearSetWitness> {
    require_line(spread)?;
    let f = spread.field();
    let e = base_degree(spread);
    if p.t < 2 || p.r < 2 {
        return Err(Error::BadParams(format!("need r > 1 and t > 1, got r={}, t={}", p.r, p.t)));
    }
    if p.r * p.t != spread.t() {
        return Err(Error::BadParams(format!("r*t = {} but h = {}", p.r * p.t, spread.t())));
    }
    let d = e * p.r;
    if !f.in_subfield(p.a, d) || !f.in_subfield(p.b, d) {
        return Err(Error::BadParams("a and b must lie in F_{q0^r}".into()));
    }
    if p.b.is_zero() {
        return Err(Error::BadParams("b must be nonzero".into()));
    }
    // Scattered check on {(x, f(x))}: every value of f(x)/x is hit by 0 or q0-1 elements.
    let sub = f.subfield_elements(d)?;
    let mut hits = std::collections::HashMap::new();
    for &x in sub.iter().filter(|x| !x.is_zero()) {
        *hits.entry(f.div(f.frobenius(x, e * p.n), x)?).or_insert(0u64) += 1;
    }
    let q0 = 1u64 << e;
    if hits.values().any(|&c| c != q0 - 1) {
        return Err(Error::NotScattered(format!("x^(q0^{}) on F_(q0^{})", p.n, p.r)));
    }
    // F_q0-basis of F_{q0^r}: powers of a subfield generator.
    let g = f.pow(f.generator(), f.mask() / ((1u64 << d) - 1));
    let sub_basis: Vec<Fe> = (0..p.r).map(|k| f.pow(g, k as u64)).collect();
    let omega = f.lambda();
    let mut images = Vec::new();
    for &x0 in &sub_basis {
        images.push([f.frobenius(x0, e * p.n) + f.mul(p.a, x0), f.mul(p.b, x0)]);
    }
    for i in 1..p.t {
        let wi = f.pow(omega, i as u64);
        for &x in &sub_basis {
            images.push([Fe::ZERO, f.mul(x, wi)]);
        }
    }
    witness_from_images(spread, &images)
}

/// `{(t1 λ + … + t_{h-1} λ^{h-1}, t_{h-1} + t_h λ)}`: an (h-2)-club with head (1,0).
pub fn club_hminus2(spread: &Spread) -> Result<LinearSetWitness> {
    require_line(spread)?;
    let h = spread.t();
    if h < 3 {
        return Err(Error::BadParams(format!("need h >= 3, got {h}")));
    }
    let f = spread.field();
    let l = f.lambda();
    let mut images = Vec::new();
    for i in 1..=h - 2 {
        images.push([f.pow(l, i as u64), Fe::ZERO]);
    }
    images.push([f.pow(l, (h - 1) as u64), Fe::ONE]);
    images.push([Fe::ZERO, l]);
    witness_from_images(spread, &images)
}

/// `{(x, x^{2^n})}`, scattered when gcd(n, h) = 1.
pub fn club_scattered(spread: &Spread, n: u32) -> Result<LinearSetWitness> {
    require_line(spread)?;
    let h = spread.t();
    if base_degree(spread) != 1 {
        return Err(Error::BadParams("scattered constructor works over F2".into()));
    }
    if gcd(n, h) != 1 {
        return Err(Error::BadParams(format!("gcd(n, h) = gcd({n}, {h}) != 1")));
    }
    let f = spread.field();
    let images: Vec<[Fe; 2]> = spread.omega().iter().map(|&w| [w, f.frobenius(w, n)]).collect();
    witness_from_images(spread, &images)
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Recognizes `S ∪ {N}` as a club over F2 whose head `N` has weight rank - 1.
///
/// With `N` moved to (1,0), the other points are `(x_P, 1)`; they form such
/// a club exactly when the `x_P` are a coset of an F2-subspace. Returns
/// `Ok(None)` when the set is not a club of this shape.
pub fn recognize_maxhead_club(field: &Field, s: &[Point], n: &Point) -> Result<Option<ClubDescriptor>> {
    let size = s.len();
    if !size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(size));
    }
    if s.contains(n) {
        return Err(Error::Precondition("head candidate lies in the set".into()));
    }
    if size < 2 {
        return Ok(None);
    }
    let b = s[0];
    let mut xs = Vec::with_capacity(size);
    for p in s {
        let c = coordinates_on_line(field, p, n, &b)
            .map_err(|_| Error::Precondition("points are not collinear with the head".into()))?;
        // p = x N + y B with y != 0 because p != N.
        let (x, y) = (c.coords()[0], c.coords()[1]);
        xs.push(field.div(x, y)?);
    }
    let x0 = xs[0];
    let shifted: Vec<u64> = xs.iter().map(|&x| (x + x0).0).collect();
    let k = size.trailing_zeros() as usize;
    if bitlin::rank(&shifted) != k {
        return Ok(None);
    }
    Ok(Some(ClubDescriptor { i: k as u32, rank: k + 1, head: *n, size: size + 1 }))
}

/// For an (h-2)-club `C` of rank h on PG(1, 2^h): whether the complement of
/// `C` on the line, plus the head, is an (h-2)-club of rank h-1.
pub fn complement_club_check(spread: &Spread, c: &LinearSetWitness) -> Result<bool> {
    let h = spread.t() as usize;
    let club = c
        .club()
        .filter(|d| d.i as usize + 2 == h && d.rank == h && spread.ambient().sub_degree() == 1)
        .ok_or_else(|| Error::Precondition("input is not an (h-2)-club of rank h over F2".into()))?;
    let members = c.point_set();
    let rest: Vec<Point> = all_points(spread.field(), 2)
        .into_iter()
        .filter(|p| !members.contains(p))
        .collect();
    Ok(matches!(
        recognize_maxhead_club(spread.field(), &rest, &club.head)?,
        Some(d) if d.rank + 2 == h + 1
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(h: u32) -> Spread {
        Spread::binary(&Field::canonical(h).unwrap(), 2).unwrap()
    }

    fn pt(f: &Field, x: u64, y: u64) -> Point {
        Point::new(f, &[Fe(x), Fe(y)]).unwrap()
    }

    #[test]
    fn spread_element_has_single_full_weight_point() {
        let s = line(4);
        let p = pt(s.field(), 1, 7);
        let w = weight_profile(&s.element(&p), &s).unwrap();
        assert_eq!(w.profile, vec![(p, 4)]);
    }

    #[test]
    fn trace_clubs() {
        for (h, size) in [(3, 5), (4, 9)] {
            let s = line(h);
            let w = club_trace(&s).unwrap();
            let c = w.club().unwrap();
            assert_eq!((c.i, c.rank, c.size), (h - 1, h as usize, size));
            assert_eq!(c.head, pt(s.field(), 1, 0));
            assert!(w.vector_count_identity());
        }
    }

    #[test]
    fn km_clubs() {
        let s = line(4);
        let w = club_km(&s, 2, 1).unwrap();
        let c = w.club().unwrap();
        assert_eq!((c.i, c.size), (2, 13));
        assert_eq!(c.head, pt(s.field(), 0, 1));
        let w2 = club_km(&line(2), 1, 1).unwrap();
        assert!(w2.is_scattered());
        assert_eq!(w2.size(), 3);
        assert!(club_km(&s, 1, 1).is_err()); // 3 does not divide 4
        assert!(club_km(&s, 2, 2).is_err()); // gcd(2,2) = 2
    }

    #[test]
    fn gw_clubs() {
        let s = line(4);
        let f = s.field().clone();
        let sub = f.subfield_elements(2).unwrap();
        let ratios: BTreeSet<Fe> = sub
            .iter()
            .filter(|x| !x.is_zero())
            .map(|&x| f.div(f.square(x), x).unwrap())
            .collect();
        let a_free = *sub.iter().find(|a| !ratios.contains(a)).unwrap();
        let a_hit = *ratios.iter().next().unwrap();
        let p = GwParams { r: 2, t: 2, n: 1, a: a_free, b: Fe::ONE };
        let w = club_gw(&s, &p).unwrap();
        assert_eq!(w.club().unwrap().i, 2);
        assert_eq!(w.rank, 4);
        let w = club_gw(&s, &GwParams { a: a_hit, ..p }).unwrap();
        assert_eq!(w.club().unwrap().i, 3);
        assert!(w.vector_count_identity());
        assert!(matches!(club_gw(&s, &GwParams { b: Fe::ZERO, ..p }), Err(Error::BadParams(_))));
        assert!(matches!(club_gw(&s, &GwParams { n: 2, ..p }), Err(Error::NotScattered(_))));
    }

    #[test]
    fn hminus2_clubs() {
        for (h, size) in [(4, 13), (5, 25), (6, 49)] {
            let s = line(h);
            let w = club_hminus2(&s).unwrap();
            let c = w.club().unwrap();
            assert_eq!((c.i, c.rank, c.size), (h - 2, h as usize, size));
            assert_eq!(c.head, pt(s.field(), 1, 0));
        }
        let w3 = club_hminus2(&line(3)).unwrap();
        assert!(w3.is_scattered());
        assert_eq!(w3.size(), 7);
    }

    #[test]
    fn hminus2_over_f4() {
        let f = Field::canonical(8).unwrap();
        let s = Spread::over_subfield(&f, 2, 2).unwrap();
        let w = club_hminus2(&s).unwrap();
        let c = w.club().unwrap();
        assert_eq!((c.i, c.rank), (2, 4));
        assert_eq!(c.size as u64, ClubDescriptor::expected_size(4, 2, 4));
        assert!(w.vector_count_identity());
    }

    #[test]
    fn scattered_sets() {
        assert_eq!(club_scattered(&line(3), 1).unwrap().size(), 7);
        let w = club_scattered(&line(4), 1).unwrap();
        assert!(w.is_scattered());
        assert_eq!(w.size(), 15);
        assert!(club_scattered(&line(4), 2).is_err());
    }

    #[test]
    fn recognition() {
        let s = line(4);
        let f = s.field();
        let n = pt(f, 1, 0);
        let tr1: Vec<Point> = f.elements().filter(|&x| f.abs_trace(x) == 1).map(|x| pt(f, x.0, 1)).collect();
        let d = recognize_maxhead_club(f, &tr1, &n).unwrap().unwrap();
        assert_eq!((d.i, d.rank), (3, 4));
        let beta = Fe(6);
        let both: Vec<Point> = f
            .elements()
            .filter(|&x| f.abs_trace(x) == 1 && f.abs_trace(f.mul(beta, x)) == 0)
            .map(|x| pt(f, x.0, 1))
            .collect();
        let d = recognize_maxhead_club(f, &both, &n).unwrap().unwrap();
        assert_eq!((d.i, d.rank), (2, 3));
        let bad: Vec<Point> = [0u64, 1, 2, 4].iter().map(|&x| pt(f, x, 1)).collect();
        assert_eq!(recognize_maxhead_club(f, &bad, &n).unwrap(), None);
        assert_eq!(recognize_maxhead_club(f, &bad[..3], &n), Err(Error::NotPowerOfTwo(3)));
    }

    #[test]
    fn recognition_of_plane_points_on_a_line() {
        let f = Field::canonical(4).unwrap();
        // Points (x, 1, 1) with Tr(x) = 0 on the line Y = Z, head (1,0,0).
        let s: Vec<Point> = f
            .elements()
            .filter(|&x| f.abs_trace(x) == 0)
            .map(|x| Point::plane(&f, x, Fe::ONE, Fe::ONE))
            .collect();
        let n = Point::plane(&f, Fe::ONE, Fe::ZERO, Fe::ZERO);
        assert_eq!(recognize_maxhead_club(&f, &s, &n).unwrap().unwrap().rank, 4);
    }

    #[test]
    fn complement_of_hminus2() {
        for h in [4, 5, 6] {
            let s = line(h);
            assert!(complement_club_check(&s, &club_hminus2(&s).unwrap()).unwrap(), "h={h}");
        }
        let s = line(4);
        assert!(complement_club_check(&s, &club_trace(&s).unwrap()).is_err());
    }

    #[test]
    fn witness_json_shape() {
        let s = line(3);
        let j = club_trace(&s).unwrap().to_json();
        assert_eq!(j["rank"], 3);
        assert_eq!(j["mu"].as_array().unwrap().len(), 3);
        assert_eq!(j["profile"].as_array().unwrap().len(), 5);
    }
}
