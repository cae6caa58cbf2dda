//! Collineations of PG(2, q) and PG(1, q), elations, translation lines,
//! the direction-set properties of type-q/4 arcs, and equivalence search.

mod equiv;
mod props;

pub use equiv::{line_set_equivalent, pgl_equivalent, stabilizer_order, Mat2};
pub use props::{d_sets, has_property_i, has_property_ii, property_witness, transliff_set, DSets, Property};

use crate::arcs::KMArc;
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use crate::projgeom::{dot, Line, Point};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub type Mat3 = [[Fe; 3]; 3];

/// `x ↦ M · x^{2^frob}` on PG(2, q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Collineation {
    pub matrix: Mat3,
    pub frob: u32,
}

pub(crate) fn mat_mul(f: &Field, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[Fe::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(Fe::ZERO, |acc, k| acc + f.mul(a[i][k], b[k][j]));
        }
    }
    out
}

pub(crate) fn mat_vec(f: &Field, m: &Mat3, v: &[Fe; 3]) -> [Fe; 3] {
    [dot(f, &m[0], v), dot(f, &m[1], v), dot(f, &m[2], v)]
}

fn frob_mat(f: &Field, m: &Mat3, k: u32) -> Mat3 {
    m.map(|row| row.map(|x| f.frobenius(x, k)))
}

pub(crate) fn det3(f: &Field, m: &Mat3) -> Fe {
    let minor = |a: usize, b: usize, c: usize, d: usize| f.mul(m[1][a], m[2][b]) + f.mul(m[1][c], m[2][d]);
    f.mul(m[0][0], minor(1, 2, 2, 1)) + f.mul(m[0][1], minor(0, 2, 2, 0)) + f.mul(m[0][2], minor(0, 1, 1, 0))
}

pub(crate) fn inverse3(f: &Field, m: &Mat3) -> Option<Mat3> {
    let d = det3(f, m);
    let di = f.inv(d).ok()?;
    let c = |r: usize, s: usize| {
        let (r0, r1) = ((r + 1) % 3, (r + 2) % 3);
        let (s0, s1) = ((s + 1) % 3, (s + 2) % 3);
        f.mul(m[r0][s0], m[r1][s1]) + f.mul(m[r0][s1], m[r1][s0])
    };
    Some(std::array::from_fn(|i| std::array::from_fn(|j| f.mul(c(j, i), di))))
}

pub(crate) fn identity3() -> Mat3 {
    let mut m = [[Fe::ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Fe::ONE;
    }
    m
}

impl Collineation {
    pub fn identity() -> Collineation {
        Collineation { matrix: identity3(), frob: 0 }
    }

    pub fn new(field: &Field, matrix: Mat3, frob: u32) -> Result<Collineation> {
        if matrix.iter().flatten().any(|&x| !field.contains(x)) {
            return Err(Error::BadParams("matrix entry outside the field".into()));
        }
        if det3(field, &matrix).is_zero() {
            return Err(Error::BadParams("singular matrix".into()));
        }
        Ok(Collineation { matrix, frob: frob % field.m() }.canonical(field))
    }

    /// Matrix scaled so that its first nonzero entry is 1.
    pub fn canonical(self, field: &Field) -> Collineation {
        let lead = *self.matrix.iter().flatten().find(|x| !x.is_zero()).expect("invertible");
        let s = field.inv(lead).expect("nonzero");
        Collineation { matrix: self.matrix.map(|r| r.map(|x| field.mul(x, s))), frob: self.frob }
    }

    pub fn apply_point(&self, field: &Field, p: &Point) -> Point {
        let c: [Fe; 3] = p.coords().try_into().expect("plane point");
        let v = mat_vec(field, &self.matrix, &c.map(|x| field.frobenius(x, self.frob)));
        Point::new(field, &v).expect("invertible map")
    }

    /// Image of a point set, sorted.
    pub fn apply(&self, field: &Field, pts: &[Point]) -> Vec<Point> {
        let mut out: Vec<Point> = pts.iter().map(|p| self.apply_point(field, p)).collect();
        out.sort();
        out
    }

    /// Image of a line.
    pub fn apply_line(&self, field: &Field, l: &Line) -> Line {
        // d·x = 0 and x^σ = M^{-1} y give (d^σ)ᵀ M^{-1} y = 0.
        let d = l.dual().map(|x| field.frobenius(x, self.frob));
        let minv = inverse3(field, &self.matrix).expect("invertible");
        let mut nd = [Fe::ZERO; 3];
        for (j, slot) in nd.iter_mut().enumerate() {
            *slot = (0..3).fold(Fe::ZERO, |acc, i| acc + field.mul(d[i], minv[i][j]));
        }
        Line::new(field, nd[0], nd[1], nd[2]).expect("nonzero dual")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, field: &Field, other: &Collineation) -> Collineation {
        let m = mat_mul(field, &self.matrix, &frob_mat(field, &other.matrix, self.frob));
        Collineation { matrix: m, frob: (self.frob + other.frob) % field.m() }.canonical(field)
    }

    pub fn inverse(&self, field: &Field) -> Collineation {
        let h = field.m();
        let back = (h - self.frob % h) % h;
        let mi = inverse3(field, &self.matrix).expect("invertible");
        Collineation { matrix: frob_mat(field, &mi, back), frob: back }.canonical(field)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m: Vec<Vec<String>> = self.matrix.iter().map(|r| r.iter().map(|x| x.to_hex()).collect()).collect();
        serde_json::json!({ "matrix": m, "frob": self.frob })
    }
}

/// The elation with the given axis sending `pre` to `image`.
pub fn elation(field: &Field, axis: &Line, pre: &Point, image: &Point) -> Result<Collineation> {
    if axis.contains(field, pre) || axis.contains(field, image) {
        return Err(Error::DegenerateElation);
    }
    if pre == image {
        return Ok(Collineation::identity());
    }
    let a = axis.dual();
    let p: [Fe; 3] = pre.coords().try_into().expect("plane point");
    let q: [Fe; 3] = image.coords().try_into().expect("plane point");
    let ap = dot(field, &a, &p);
    let s = field.div(ap, dot(field, &a, &q))?;
    let c: [Fe; 3] = std::array::from_fn(|i| field.div(field.mul(s, q[i]) + p[i], ap).expect("nonzero"));
    let mut m = identity3();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += field.mul(c[i], a[j]);
        }
    }
    Collineation::new(field, m, 0)
}

fn fixes(arc: &KMArc, g: &Collineation) -> bool {
    arc.points().iter().all(|p| arc.contains(&g.apply_point(arc.field(), p)))
}

/// Whether the elations with axis `ell` fixing the arc act transitively on
/// the arc points off `ell`.
pub fn is_translation_line(arc: &KMArc, ell: &Line) -> bool {
    let f = arc.field();
    let off: Vec<Point> = arc.points().iter().copied().filter(|p| !ell.contains(f, p)).collect();
    let Some(p0) = off.first() else { return false };
    off.iter().all(|r| elation(f, ell, p0, r).is_ok_and(|g| fixes(arc, &g)))
}

/// Every candidate line that is a translation line: the t-secants, or all
/// 2-secants of a hyperoval.
pub fn translation_lines(arc: &KMArc) -> Vec<Line> {
    let f = arc.field();
    let candidates: Vec<Line> = if arc.t() > 2 {
        arc.t_secants().to_vec()
    } else {
        let pts = arc.points();
        let mut ls: Vec<Line> = (0..pts.len())
            .flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j)))
            .map(|(i, j)| crate::projgeom::line_through(f, &pts[i], &pts[j]).expect("distinct"))
            .collect();
        ls.sort();
        ls.dedup();
        ls
    };
    let mut out: Vec<Line> = candidates.into_par_iter().filter(|l| is_translation_line(arc, l)).collect();
    out.sort();
    out
}
