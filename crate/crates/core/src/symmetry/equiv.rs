use super::{inverse3, mat_mul, props::d_sets, Collineation, Mat3};
use crate::arcs::KMArc;
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use crate::projgeom::Point;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Above this many frame candidates the search refuses to run.
const SEARCH_LIMIT: u64 = 50_000_000;

fn col3(f: &Field, p: &Point, frob: u32) -> [Fe; 3] {
    let c: [Fe; 3] = p.coords().try_into().expect("plane point");
    c.map(|x| f.frobenius(x, frob))
}

/// The matrix sending the standard frame to `p0, p1, p2, p3`, if they are in
/// general position.
fn frame_matrix(f: &Field, pts: [[Fe; 3]; 4]) -> Option<Mat3> {
    let cols: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| pts[j][i]));
    let inv = inverse3(f, &cols)?;
    let coef = super::mat_vec(f, &inv, &pts[3]);
    if coef.iter().any(|c| c.is_zero()) {
        return None;
    }
    Some(std::array::from_fn(|i| std::array::from_fn(|j| f.mul(cols[i][j], coef[j]))))
}

/// The semilinear map `x ↦ M x^σ` sending `src` to `dst`, when both are frames.
fn map_frames(f: &Field, src: &[Point; 4], dst: &[Point; 4], frob: u32) -> Option<Collineation> {
    let s = frame_matrix(f, src.each_ref().map(|p| col3(f, p, frob)))?;
    let d = frame_matrix(f, dst.each_ref().map(|p| col3(f, p, 0)))?;
    let m = mat_mul(f, &d, &inverse3(f, &s)?);
    Some(Collineation { matrix: m, frob }.canonical(f))
}

fn maps_onto(a: &KMArc, b: &KMArc, g: &Collineation) -> bool {
    let f = a.field();
    a.points().iter().all(|p| b.contains(&g.apply_point(f, p)))
        && a.nucleus().is_none_or(|n| b.nucleus() == Some(g.apply_point(f, &n)))
}

/// Sorted multiset of direction-set sizes over all secants, for type-q/4 arcs.
fn d_profile(arc: &KMArc) -> Result<Vec<[usize; 6]>> {
    if arc.t() * 4 != arc.q() as usize || arc.t_secants().len() != 5 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(5);
    for l in arc.t_secants() {
        let mut s = d_sets(arc, l, [0, 1, 2, 3])?.sizes();
        s.sort();
        out.push(s);
    }
    out.sort();
    Ok(out)
}

fn frames_through_nucleus(arc: &KMArc) -> Vec<[Point; 4]> {
    let n = arc.nucleus().expect("nucleus");
    let secants = arc.t_secants();
    let on: Vec<Vec<Point>> = secants.iter().map(|l| arc.points_on(l)).collect();
    let k = secants.len();
    let mut out = Vec::new();
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            for l in (0..k).filter(|&l| l != i && l != j) {
                for &a in &on[i] {
                    for &b in &on[j] {
                        for &c in &on[l] {
                            out.push([n, a, b, c]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// First four points of `pts` in general position, in index order.
fn greedy_frame(f: &Field, pts: &[Point]) -> Option<[Point; 4]> {
    let n = pts.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let fr = [pts[a], pts[b], pts[c], pts[d]];
                    if frame_matrix(f, fr.each_ref().map(|p| col3(f, p, 0))).is_some() {
                        return Some(fr);
                    }
                }
            }
        }
    }
    None
}

/// A collineation mapping arc `a` onto arc `b`, searched over frames: the
/// nucleus plus one point on each of three t-secants when there is a
/// nucleus, otherwise four arc points in general position.
pub fn pgl_equivalent(a: &KMArc, b: &KMArc, semilinear: bool) -> Result<Option<Collineation>> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let f = a.field();
    if a.len() != b.len() || a.t() != b.t() || a.spectrum() != b.spectrum() {
        return Ok(None);
    }
    if d_profile(a)? != d_profile(b)? {
        return Ok(None);
    }
    let with_nucleus = a.t() > 2 && a.t_secants().len() >= 3;
    let (src, targets): ([Point; 4], Vec<[Point; 4]>) = if with_nucleus {
        // No three of these are collinear: a line through three arc points
        // is a t-secant, and the three secants are distinct lines through N.
        let src = frames_through_nucleus(a).into_iter().next().expect("three secants");
        (src, frames_through_nucleus(b))
    } else {
        let Some(src) = greedy_frame(f, a.points()) else {
            return Err(Error::DegenerateInput("arc has no four points in general position".into()));
        };
        let n = b.len() as u64;
        if n.pow(4) > SEARCH_LIMIT {
            return Err(Error::TooLarge(format!("{} frame candidates", n.pow(4))));
        }
        let p = b.points();
        let mut ts = Vec::new();
        for i in 0..p.len() {
            for j in (0..p.len()).filter(|&j| j != i) {
                for k in (0..p.len()).filter(|&k| k != i && k != j) {
                    for l in (0..p.len()).filter(|&l| l != i && l != j && l != k) {
                        ts.push([p[i], p[j], p[k], p[l]]);
                    }
                }
            }
        }
        (src, ts)
    };
    let frobs: Vec<u32> = if semilinear { (0..f.m()).collect() } else { vec![0] };
    let hit = frobs.iter().find_map(|&k| {
        targets.par_iter().find_map_first(|dst| map_frames(f, &src, dst, k).filter(|g| maps_onto(a, b, g)))
    });
    Ok(hit)
}

/// `x ↦ M x^σ` on PG(1, q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub m: [[Fe; 2]; 2],
    pub frob: u32,
}

fn det2(f: &Field, m: &[[Fe; 2]; 2]) -> Fe {
    f.mul(m[0][0], m[1][1]) + f.mul(m[0][1], m[1][0])
}

fn inverse2(f: &Field, m: &[[Fe; 2]; 2]) -> Option<[[Fe; 2]; 2]> {
    let di = f.inv(det2(f, m)).ok()?;
    Some([[f.mul(m[1][1], di), f.mul(m[0][1], di)], [f.mul(m[1][0], di), f.mul(m[0][0], di)]])
}

fn mul2(f: &Field, a: &[[Fe; 2]; 2], b: &[[Fe; 2]; 2]) -> [[Fe; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| f.mul(a[i][0], b[0][j]) + f.mul(a[i][1], b[1][j])))
}

impl Mat2 {
    pub fn apply(&self, f: &Field, p: &Point) -> Point {
        let c = [f.frobenius(p.coords()[0], self.frob), f.frobenius(p.coords()[1], self.frob)];
        let v = [f.mul(self.m[0][0], c[0]) + f.mul(self.m[0][1], c[1]), f.mul(self.m[1][0], c[0]) + f.mul(self.m[1][1], c[1])];
        Point::new(f, &v).expect("invertible map")
    }

    fn canonical(self, f: &Field) -> Mat2 {
        let lead = *self.m.iter().flatten().find(|x| !x.is_zero()).expect("invertible");
        let s = f.inv(lead).expect("nonzero");
        Mat2 { m: self.m.map(|r| r.map(|x| f.mul(x, s))), frob: self.frob }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m: Vec<Vec<String>> = self.m.iter().map(|r| r.iter().map(|x| x.to_hex()).collect()).collect();
        serde_json::json!({ "matrix": m, "frob": self.frob })
    }
}

fn col2(f: &Field, p: &Point, frob: u32) -> [Fe; 2] {
    [f.frobenius(p.coords()[0], frob), f.frobenius(p.coords()[1], frob)]
}

/// The matrix sending `(1,0), (0,1), (1,1)` to the three points.
fn frame2(f: &Field, pts: [[Fe; 2]; 3]) -> Option<[[Fe; 2]; 2]> {
    let cols = [[pts[0][0], pts[1][0]], [pts[0][1], pts[1][1]]];
    let inv = inverse2(f, &cols)?;
    let a = f.mul(inv[0][0], pts[2][0]) + f.mul(inv[0][1], pts[2][1]);
    let b = f.mul(inv[1][0], pts[2][0]) + f.mul(inv[1][1], pts[2][1]);
    if a.is_zero() || b.is_zero() {
        return None;
    }
    Some([[f.mul(cols[0][0], a), f.mul(cols[0][1], b)], [f.mul(cols[1][0], a), f.mul(cols[1][1], b)]])
}

fn map3(f: &Field, src: &[Point; 3], dst: &[Point; 3], frob: u32) -> Option<Mat2> {
    let s = frame2(f, src.each_ref().map(|p| col2(f, p, frob)))?;
    let d = frame2(f, dst.each_ref().map(|p| col2(f, p, 0)))?;
    Some(Mat2 { m: mul2(f, &d, &inverse2(f, &s)?), frob }.canonical(f))
}

fn check_line_set(f: &Field, s: &[Point]) -> Result<Vec<Point>> {
    if s.iter().any(|p| p.dim() != 2) {
        return Err(Error::AmbientMismatch);
    }
    let mut v = s.to_vec();
    v.sort();
    v.dedup();
    if v.iter().flat_map(|p| p.coords()).any(|&c| !f.contains(c)) {
        return Err(Error::FieldMismatch);
    }
    Ok(v)
}

fn ordered_triples(s: &[Point]) -> Vec<[Point; 3]> {
    let mut out = Vec::with_capacity(s.len().pow(3));
    for (i, &a) in s.iter().enumerate() {
        for (j, &b) in s.iter().enumerate().filter(|&(j, _)| j != i) {
            for (_, &c) in s.iter().enumerate().filter(|&(k, _)| k != i && k != j) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn all_pgl2(f: &Field) -> Result<Vec<[[Fe; 2]; 2]>> {
    if f.q() > 64 {
        return Err(Error::TooLarge(format!("PGL(2, {}) enumeration", f.q())));
    }
    let els: Vec<Fe> = f.elements().collect();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    let m = [[a, b], [c, d]];
                    let first = *m.iter().flatten().find(|x| !x.is_zero()).unwrap_or(&Fe::ZERO);
                    if first == Fe::ONE && !det2(f, &m).is_zero() {
                        out.push(m);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn frobs(f: &Field, semilinear: bool) -> Vec<u32> {
    if semilinear {
        (0..f.m()).collect()
    } else {
        vec![0]
    }
}

/// Every map in PGL(2, q) (or PΓL(2, q)) sending `s1` onto `s2`, found by
/// fixing three points of `s1`, or by brute force for sets under three points.
fn line_set_maps(f: &Field, s1: &[Point], s2: &[Point], semilinear: bool, first_only: bool) -> Result<Vec<Mat2>> {
    let (a, b) = (check_line_set(f, s1)?, check_line_set(f, s2)?);
    if a.len() != b.len() {
        return Ok(Vec::new());
    }
    let fixes = |g: &Mat2| a.iter().all(|p| b.binary_search(&g.apply(f, p)).is_ok());
    let mut out = Vec::new();
    for k in frobs(f, semilinear) {
        let found: Vec<Mat2> = if a.len() >= 3 {
            let src = [a[0], a[1], a[2]];
            let ts = ordered_triples(&b);
            if first_only {
                ts.par_iter().find_map_first(|dst| map3(f, &src, dst, k).filter(fixes)).into_iter().collect()
            } else {
                ts.par_iter().filter_map(|dst| map3(f, &src, dst, k).filter(fixes)).collect()
            }
        } else {
            let group = all_pgl2(f)?;
            let it = group.into_par_iter().map(|m| Mat2 { m, frob: k });
            if first_only {
                it.find_first(fixes).into_iter().collect()
            } else {
                it.filter(fixes).collect()
            }
        };
        out.extend(found);
        if first_only && !out.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// A projectivity (semilinear if allowed) of PG(1, q) mapping `s1` onto `s2`.
pub fn line_set_equivalent(field: &Field, s1: &[Point], s2: &[Point], semilinear: bool) -> Result<Option<Mat2>> {
    Ok(line_set_maps(field, s1, s2, semilinear, true)?.into_iter().next())
}

/// Order of the stabilizer of `s` in PGL(2, q), or PΓL(2, q) when semilinear.
pub fn stabilizer_order(field: &Field, s: &[Point], semilinear: bool) -> Result<u64> {
    Ok(line_set_maps(field, s, s, semilinear, false)?.len() as u64)
}

/// Brute-force stabilizer order over every group element; for tests.
#[cfg(test)]
fn brute_stabilizer(f: &Field, s: &[Point], semilinear: bool) -> u64 {
    let set: std::collections::BTreeSet<Point> = s.iter().copied().collect();
    let mut n = 0;
    for k in frobs(f, semilinear) {
        for m in all_pgl2(f).unwrap() {
            let g = Mat2 { m, frob: k };
            n += set.iter().all(|p| set.contains(&g.apply(f, p))) as u64;
        }
    }
    n
}
