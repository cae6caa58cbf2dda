//! Projective points and lines over a binary field, subspaces over a base
//! subfield, and the Desarguesian spread obtained by field reduction.

mod spread;
mod subspace;

pub use spread::Spread;
pub use subspace::{Ambient, PVec, Subspace};

use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A point of PG(n-1, q) for n ≤ 3, leftmost nonzero coordinate equal to 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    len: u8,
    c: [Fe; 3],
}

impl Point {
    /// Normalizes `coords`; fails on the zero vector.
    pub fn new(field: &Field, coords: &[Fe]) -> Result<Point> {
        normalize(field, coords).ok_or_else(|| Error::DegenerateInput("zero vector is not a point".into()))
    }

    /// Plane point from coordinates; panics on the zero vector.
    pub fn plane(field: &Field, x: Fe, y: Fe, z: Fe) -> Point {
        Point::new(field, &[x, y, z]).expect("nonzero plane point")
    }

    /// Wraps coordinates already known to be normalized.
    pub(crate) fn from_normalized(coords: &[Fe]) -> Point {
        let mut c = [Fe::ZERO; 3];
        c[..coords.len()].copy_from_slice(coords);
        Point { len: coords.len() as u8, c }
    }

    pub fn coords(&self) -> &[Fe] {
        &self.c[..self.len as usize]
    }

    pub fn dim(&self) -> usize {
        self.len as usize
    }

    pub fn x(&self) -> Fe {
        self.c[0]
    }
    pub fn y(&self) -> Fe {
        self.c[1]
    }
    pub fn z(&self) -> Fe {
        self.c[2]
    }
}

fn normalize(field: &Field, coords: &[Fe]) -> Option<Point> {
    assert!((1..=3).contains(&coords.len()), "points have 1 to 3 coordinates");
    let lead = coords.iter().position(|c| !c.is_zero())?;
    let s = field.inv(coords[lead]).expect("nonzero");
    let mut c = [Fe::ZERO; 3];
    for (i, &v) in coords.iter().enumerate() {
        c[i] = if i == lead { Fe::ONE } else { field.mul(v, s) };
    }
    Some(Point { len: coords.len() as u8, c })
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    /// Coordinates must already be normalized; the field is unknown here.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<Fe> = Vec::deserialize(d)?;
        if !(1..=3).contains(&v.len()) {
            return Err(serde::de::Error::custom("points have 1 to 3 coordinates"));
        }
        match v.iter().position(|c| !c.is_zero()) {
            Some(i) if v[i] == Fe::ONE => Ok(Point::from_normalized(&v)),
            _ => Err(serde::de::Error::custom("point coordinates are not normalized")),
        }
    }
}

/// A line `aX + bY + cZ = 0` of PG(2, q), stored by normalized dual coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    d: [Fe; 3],
}

impl Line {
    pub fn new(field: &Field, a: Fe, b: Fe, c: Fe) -> Result<Line> {
        let p = Point::new(field, &[a, b, c])?;
        Ok(Line { d: p.c })
    }

    pub(crate) fn from_point(p: Point) -> Line {
        debug_assert_eq!(p.dim(), 3);
        Line { d: p.c }
    }

    /// `Z = 0`, the default line at infinity.
    pub fn z_axis() -> Line {
        Line { d: [Fe::ZERO, Fe::ZERO, Fe::ONE] }
    }

    pub fn dual(&self) -> [Fe; 3] {
        self.d
    }

    pub fn as_point(&self) -> Point {
        Point { len: 3, c: self.d }
    }

    pub fn contains(&self, field: &Field, p: &Point) -> bool {
        dot(field, &self.d, &p.c).is_zero()
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.d[0], self.d[1], self.d[2])
    }
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.d.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = Point::deserialize(d)?;
        if p.dim() != 3 {
            return Err(serde::de::Error::custom("lines need three dual coordinates"));
        }
        Ok(Line::from_point(p))
    }
}

pub(crate) fn dot(field: &Field, a: &[Fe; 3], b: &[Fe; 3]) -> Fe {
    field.mul(a[0], b[0]) + field.mul(a[1], b[1]) + field.mul(a[2], b[2])
}

pub(crate) fn cross(field: &Field, a: &[Fe; 3], b: &[Fe; 3]) -> [Fe; 3] {
    [
        field.mul(a[1], b[2]) + field.mul(a[2], b[1]),
        field.mul(a[2], b[0]) + field.mul(a[0], b[2]),
        field.mul(a[0], b[1]) + field.mul(a[1], b[0]),
    ]
}

/// The line joining two distinct plane points.
pub fn line_through(field: &Field, p: &Point, q: &Point) -> Result<Line> {
    let d = cross(field, &p.c, &q.c);
    normalize(field, &d)
        .map(Line::from_point)
        .ok_or_else(|| Error::DegenerateInput("line through a point and itself".into()))
}

/// The common point of two distinct lines.
pub fn meet(field: &Field, l1: &Line, l2: &Line) -> Result<Point> {
    let c = cross(field, &l1.d, &l2.d);
    normalize(field, &c).ok_or_else(|| Error::DegenerateInput("meet of a line with itself".into()))
}

/// All points of PG(n-1, q) in lexicographic order of coordinates.
pub fn all_points(field: &Field, n: usize) -> Vec<Point> {
    assert!((1..=3).contains(&n));
    let q = field.q();
    let mut out = Vec::new();
    for lead in (0..n).rev() {
        let free = n - lead - 1;
        let total = q.pow(free as u32);
        for mut idx in 0..total {
            let mut c = [Fe::ZERO; 3];
            c[lead] = Fe::ONE;
            for slot in (lead + 1..n).rev() {
                c[slot] = Fe(idx % q);
                idx /= q;
            }
            out.push(Point { len: n as u8, c });
        }
    }
    out
}

/// All lines of PG(2, q).
pub fn all_lines(field: &Field) -> Vec<Line> {
    all_points(field, 3).into_iter().map(Line::from_point).collect()
}

/// The q+1 points on a line, sorted.
pub fn points_on_line(field: &Field, l: &Line) -> Vec<Point> {
    let (a, b) = line_basis(field, l);
    let mut out: Vec<Point> = field
        .elements()
        .map(|x| {
            let c = [a.c[0] + field.mul(x, b.c[0]), a.c[1] + field.mul(x, b.c[1]), a.c[2] + field.mul(x, b.c[2])];
            normalize(field, &c).expect("independent basis")
        })
        .chain(std::iter::once(b))
        .collect();
    out.sort();
    out
}

/// Two distinct points spanning the line.
pub fn line_basis(field: &Field, l: &Line) -> (Point, Point) {
    let d = l.d;
    let axes = [[Fe::ONE, Fe::ZERO, Fe::ZERO], [Fe::ZERO, Fe::ONE, Fe::ZERO], [Fe::ZERO, Fe::ZERO, Fe::ONE]];
    let mut found = Vec::with_capacity(2);
    for e in &axes {
        if let Some(p) = normalize(field, &cross(field, &d, e)) {
            if !found.contains(&p) {
                found.push(p);
            }
            if found.len() == 2 {
                break;
            }
        }
    }
    (found[0], found[1])
}

/// Coordinates `(x, y)` with `p = x·a + y·b` up to scale, as a PG(1, q) point.
pub fn coordinates_on_line(field: &Field, p: &Point, a: &Point, b: &Point) -> Result<Point> {
    let n = p.dim();
    if a.dim() != n || b.dim() != n {
        return Err(Error::AmbientMismatch);
    }
    if n == 2 {
        // Solve [a b] (x,y)^T = p directly.
        let det = field.mul(a.c[0], b.c[1]) + field.mul(a.c[1], b.c[0]);
        let det_inv = field.inv(det).map_err(|_| Error::DegenerateInput("dependent frame".into()))?;
        let x = field.mul(det_inv, field.mul(p.c[0], b.c[1]) + field.mul(p.c[1], b.c[0]));
        let y = field.mul(det_inv, field.mul(a.c[0], p.c[1]) + field.mul(a.c[1], p.c[0]));
        return Point::new(field, &[x, y]);
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let det = field.mul(a.c[i], b.c[j]) + field.mul(a.c[j], b.c[i]);
            if det.is_zero() {
                continue;
            }
            let det_inv = field.inv(det)?;
            let x = field.mul(det_inv, field.mul(p.c[i], b.c[j]) + field.mul(p.c[j], b.c[i]));
            let y = field.mul(det_inv, field.mul(a.c[i], p.c[j]) + field.mul(a.c[j], p.c[i]));
            let k = 3 - i - j;
            let check = field.mul(x, a.c[k]) + field.mul(y, b.c[k]);
            if check != p.c[k] {
                return Err(Error::DegenerateInput("point is not on the line spanned by the frame".into()));
            }
            return Point::new(field, &[x, y]);
        }
    }
    Err(Error::DegenerateInput("frame points coincide".into()))
}
