//! KM-arcs: point sets of size q + t in PG(2, q) met by every line in 0, 2
//! or t points. The verifier here is the single gate every constructor
//! passes through.

mod cone;
mod families;
mod lift;
mod triad;

pub use cone::{gw_cone, gw_default_base, GwVariant};
pub use families::{
    km_family, new_family, new_family_parts, translation_hyperoval, vandendriessche, FamilyParams, OPolynomial,
};
pub use lift::{default_lift_point, directions_club, lift_club_to_arc, to_infinity_coordinates};
pub use triad::{count_triads, is_projective_triad, triad_from_arc, triad_trace, Triad};

use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field, FieldSpec};
use crate::projgeom::{line_through, meet, points_on_line, Line, Point};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

/// Why a point set is not a KM-arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    Empty,
    NotPlanar,
    Duplicate(Point),
    /// A line whose intersection size is not 0, 2 or the type.
    BadLine { line: Line, size: usize },
    WrongSize { expected: usize, actual: usize },
    TypeNotDivisor { t: usize, q: u64 },
    NoTwoSecants,
    SecantCount { expected: usize, actual: usize },
    NotConcurrent { line: Line },
    BadNucleus(Point),
    UnexpectedType { expected: usize, actual: usize },
    PartSize { part: usize, expected: usize, actual: usize },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::Empty => write!(f, "empty point set"),
            VerifyFailure::NotPlanar => write!(f, "points must have three coordinates"),
            VerifyFailure::Duplicate(p) => write!(f, "point {p:?} listed twice"),
            VerifyFailure::BadLine { line, size } => write!(f, "line {line:?} meets the set in {size} points"),
            VerifyFailure::WrongSize { expected, actual } => write!(f, "expected {expected} points, found {actual}"),
            VerifyFailure::TypeNotDivisor { t, q } => write!(f, "type {t} does not divide q = {q}"),
            VerifyFailure::NoTwoSecants => write!(f, "no line meets the set in exactly 2 points"),
            VerifyFailure::SecantCount { expected, actual } => {
                write!(f, "expected {expected} t-secants, found {actual}")
            }
            VerifyFailure::NotConcurrent { line } => write!(f, "t-secant {line:?} misses the common point"),
            VerifyFailure::BadNucleus(p) => write!(f, "{p:?} is not a nucleus of the set"),
            VerifyFailure::UnexpectedType { expected, actual } => {
                write!(f, "expected type {expected}, verified type {actual}")
            }
            VerifyFailure::PartSize { part, expected, actual } => {
                write!(f, "part {part} has {actual} points instead of {expected}")
            }
        }
    }
}

fn fail<T>(v: VerifyFailure) -> Result<T> {
    Err(Error::Verification(v))
}

/// Number of lines meeting a point set in each possible number of points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LineSpectrum {
    pub counts: BTreeMap<usize, u64>,
}

impl LineSpectrum {
    pub fn get(&self, size: usize) -> u64 {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    pub fn total_lines(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ size · count`, the number of point-line incidences.
    pub fn incidences(&self) -> u64 {
        self.counts.iter().map(|(&k, &c)| k as u64 * c).sum()
    }

    /// Intersection sizes that occur.
    pub fn support(&self) -> Vec<usize> {
        self.counts.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).collect()
    }
}

/// Lines through at least two points, and tangent deficits, for a plane
/// point set viewed inside a (sub)plane of order `order`.
struct Scan {
    /// Each line with at least 2 points, once, with its size.
    lines: Vec<(Line, usize)>,
    /// For each point, the number of lines of the (sub)plane through it that
    /// contain no other point of the set.
    tangents: Vec<u64>,
}

fn scan(field: &Field, pts: &[Point], order: u64) -> Scan {
    let per_point: Vec<(Vec<(Line, usize)>, u64)> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut through: HashMap<Line, (usize, bool)> = HashMap::new();
            for (j, q) in pts.iter().enumerate() {
                if j == i {
                    continue;
                }
                let l = line_through(field, &pts[i], q).expect("distinct points");
                let e = through.entry(l).or_insert((0, true));
                e.0 += 1;
                e.1 &= j > i;
            }
            let tangents = order + 1 - through.len() as u64;
            let owned = through.into_iter().filter(|(_, (_, first))| *first).map(|(l, (c, _))| (l, c + 1)).collect();
            (owned, tangents)
        })
        .collect();
    let mut lines = Vec::new();
    let mut tangents = Vec::with_capacity(pts.len());
    for (owned, t) in per_point {
        lines.extend(owned);
        tangents.push(t);
    }
    lines.sort();
    Scan { lines, tangents }
}

fn spectrum_of(scan: &Scan, order: u64) -> LineSpectrum {
    let mut counts = BTreeMap::new();
    for &(_, k) in &scan.lines {
        *counts.entry(k).or_insert(0) += 1;
    }
    let ones: u64 = scan.tangents.iter().sum();
    if ones > 0 {
        counts.insert(1, ones);
    }
    let rest: u64 = counts.values().sum();
    counts.insert(0, order * order + order + 1 - rest);
    LineSpectrum { counts }
}

/// Degree `d` with `order = 2^d`.
fn order_degree(order: u64) -> u32 {
    order.trailing_zeros()
}

/// A line of the subplane of order `order` through `pts[i]` holding no other point.
fn find_tangent(field: &Field, pts: &[Point], i: usize, order: u64) -> Line {
    let p = pts[i];
    let d = order_degree(order);
    let k = (0..3).find(|&k| !p.coords()[k].is_zero()).expect("nonzero point");
    let mut dual = [Fe::ZERO; 3];
    dual[k] = Fe::ONE;
    let axis = Line::new(field, dual[0], dual[1], dual[2]).expect("unit vector");
    let members: HashSet<Point> = pts.iter().copied().collect();
    for r in points_on_line(field, &axis) {
        if !r.coords().iter().all(|&c| field.in_subfield(c, d)) {
            continue;
        }
        let l = line_through(field, &p, &r).expect("r is off the axis point");
        let others = points_on_line(field, &l).into_iter().filter(|x| *x != p && members.contains(x)).count();
        if others == 0 {
            return l;
        }
    }
    unreachable!("a tangent deficit implies a tangent line")
}

/// Structural data extracted by [`analyze`].
#[derive(Clone, Debug)]
pub(crate) struct Shape {
    pub t: usize,
    pub nucleus: Option<Point>,
    pub t_secants: Vec<Line>,
    pub spectrum: LineSpectrum,
}

/// The (0,2,t) check inside a (sub)plane of order `order`.
pub(crate) fn analyze(
    field: &Field,
    pts: &[Point],
    order: u64,
    declared: Option<Point>,
) -> std::result::Result<Shape, VerifyFailure> {
    if pts.is_empty() {
        return Err(VerifyFailure::Empty);
    }
    if pts.iter().any(|p| p.dim() != 3) {
        return Err(VerifyFailure::NotPlanar);
    }
    let mut seen = HashSet::new();
    if let Some(p) = pts.iter().find(|p| !seen.insert(**p)) {
        return Err(VerifyFailure::Duplicate(*p));
    }
    let s = scan(field, pts, order);
    let spectrum = spectrum_of(&s, order);
    if let Some(i) = s.tangents.iter().position(|&t| t > 0) {
        return Err(VerifyFailure::BadLine { line: find_tangent(field, pts, i, order), size: 1 });
    }
    let t = s.lines.iter().map(|&(_, k)| k).max().unwrap_or(0).max(2);
    if let Some(&(line, size)) = s.lines.iter().find(|&&(_, k)| k != 2 && k != t) {
        return Err(VerifyFailure::BadLine { line, size });
    }
    let n = pts.len();
    if n as u64 != order + t as u64 {
        return Err(VerifyFailure::WrongSize { expected: (order + t as u64) as usize, actual: n });
    }
    if !order.is_multiple_of(t as u64) {
        return Err(VerifyFailure::TypeNotDivisor { t, q: order });
    }
    if spectrum.get(2) == 0 {
        return Err(VerifyFailure::NoTwoSecants);
    }
    if t == 2 {
        // Every point off a hyperoval lies on q/2 + 1 secants, so any such point may serve.
        let Some(nuc) = declared else {
            return Ok(Shape { t, nucleus: None, t_secants: Vec::new(), spectrum });
        };
        if seen.contains(&nuc) || nuc.dim() != 3 {
            return Err(VerifyFailure::BadNucleus(nuc));
        }
        let t_secants: Vec<Line> = s.lines.iter().map(|&(l, _)| l).filter(|l| l.contains(field, &nuc)).collect();
        return Ok(Shape { t, nucleus: Some(nuc), t_secants, spectrum });
    }
    let t_secants: Vec<Line> = s.lines.iter().filter(|&&(_, k)| k == t).map(|&(l, _)| l).collect();
    let expected = (order / t as u64 + 1) as usize;
    if t_secants.len() != expected {
        return Err(VerifyFailure::SecantCount { expected, actual: t_secants.len() });
    }
    let nuc = meet(field, &t_secants[0], &t_secants[1]).expect("distinct lines");
    if let Some(l) = t_secants.iter().find(|l| !l.contains(field, &nuc)) {
        return Err(VerifyFailure::NotConcurrent { line: *l });
    }
    if declared.is_some_and(|d| d != nuc) {
        return Err(VerifyFailure::BadNucleus(declared.unwrap()));
    }
    Ok(Shape { t, nucleus: Some(nuc), t_secants, spectrum })
}

/// A verified KM-arc in PG(2, q).
#[derive(Clone, Debug)]
pub struct KMArc {
    field: Field,
    points: Vec<Point>,
    t: usize,
    nucleus: Option<Point>,
    t_secants: Vec<Line>,
    spectrum: LineSpectrum,
}

impl PartialEq for KMArc {
    fn eq(&self, other: &KMArc) -> bool {
        self.field == other.field && self.points == other.points && self.nucleus == other.nucleus
    }
}

impl Eq for KMArc {}

/// Counts of lines by intersection size with `pts`.
pub fn line_spectrum(field: &Field, pts: &[Point]) -> LineSpectrum {
    let unique: Vec<Point> = pts.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    spectrum_of(&scan(field, &unique, field.q()), field.q())
}

/// Checks the (0,2,t) property and returns the populated arc.
pub fn verify_km(field: &Field, pts: &[Point]) -> Result<KMArc> {
    verify_inner(field, pts, None)
}

/// As [`verify_km`]; for hyperovals the given point off the set is recorded as
/// nucleus and the 2-secants through it as the t-secants.
pub fn verify_km_with_nucleus(field: &Field, pts: &[Point], nucleus: Point) -> Result<KMArc> {
    verify_inner(field, pts, Some(nucleus))
}

fn verify_inner(field: &Field, pts: &[Point], declared: Option<Point>) -> Result<KMArc> {
    if pts.iter().flat_map(|p| p.coords()).any(|&c| !field.contains(c)) {
        return Err(Error::BadParams("coordinate outside the field".into()));
    }
    let shape = analyze(field, pts, field.q(), declared).map_err(Error::Verification)?;
    let mut points = pts.to_vec();
    points.sort();
    Ok(KMArc {
        field: field.clone(),
        points,
        t: shape.t,
        nucleus: shape.nucleus,
        t_secants: shape.t_secants,
        spectrum: shape.spectrum,
    })
}

/// Serialized form of an arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    pub field: FieldSpec,
    pub t: usize,
    pub nucleus: Option<Point>,
    pub points: Vec<Point>,
    pub t_secants: Vec<Line>,
}

impl KMArc {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// Sorted points.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn nucleus(&self) -> Option<Point> {
        self.nucleus
    }

    /// Sorted t-secants; for hyperovals, the 2-secants through the declared nucleus.
    pub fn t_secants(&self) -> &[Line] {
        &self.t_secants
    }

    pub fn spectrum(&self) -> &LineSpectrum {
        &self.spectrum
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Arc points on a line.
    pub fn points_on(&self, l: &Line) -> Vec<Point> {
        self.points.iter().copied().filter(|p| l.contains(&self.field, p)).collect()
    }

    /// Requires a specific type.
    pub fn expect_type(self, expected: usize) -> Result<KMArc> {
        if self.t != expected {
            return fail(VerifyFailure::UnexpectedType { expected, actual: self.t });
        }
        Ok(self)
    }

    pub fn to_json(&self) -> ArcJson {
        ArcJson {
            field: *self.field.spec(),
            t: self.t,
            nucleus: self.nucleus,
            points: self.points.clone(),
            t_secants: self.t_secants.clone(),
        }
    }

    /// Re-verifies the parsed set and checks the declared metadata.
    pub fn from_json(j: &ArcJson) -> Result<KMArc> {
        let field = Field::new(j.field);
        let arc = match (j.t, j.nucleus) {
            (2, Some(n)) => verify_km_with_nucleus(&field, &j.points, n)?,
            _ => verify_km(&field, &j.points)?,
        };
        if arc.t != j.t {
            return fail(VerifyFailure::UnexpectedType { expected: j.t, actual: arc.t });
        }
        if arc.nucleus != j.nucleus {
            return fail(VerifyFailure::BadNucleus(j.nucleus.or(arc.nucleus).expect("one side is set")));
        }
        let mut declared = j.t_secants.clone();
        declared.sort();
        if declared != arc.t_secants {
            return Err(Error::BadParams("declared t-secants differ from the verified ones".into()));
        }
        Ok(arc)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("arc serializes")
    }

    pub fn from_json_str(s: &str) -> Result<KMArc> {
        let j: ArcJson = serde_json::from_str(s).map_err(|e| Error::BadParams(format!("malformed arc JSON: {e}")))?;
        KMArc::from_json(&j)
    }
}

/// Adds to affine points `(x, y, 1)` the points of `Z = 0` they do not
/// determine as directions, restricted to the subplane over F_{2^d}.
pub(crate) fn complete_with_directions(field: &Field, affine: &[Point], d: u32) -> Vec<Point> {
    let xy: Vec<(Fe, Fe)> = affine
        .iter()
        .map(|p| {
            let zi = field.inv(p.z()).expect("affine point");
            (field.mul(p.x(), zi), field.mul(p.y(), zi))
        })
        .collect();
    let mut determined = HashSet::new();
    for (i, &(x1, y1)) in xy.iter().enumerate() {
        for &(x2, y2) in &xy[i + 1..] {
            determined.insert(Point::plane(field, x1 + x2, y1 + y2, Fe::ZERO));
        }
    }
    let mut out = affine.to_vec();
    for p in points_on_line(field, &Line::z_axis()) {
        if p.coords().iter().all(|&c| field.in_subfield(c, d)) && !determined.contains(&p) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::{all_lines, all_points};

    fn brute_spectrum(field: &Field, pts: &[Point]) -> LineSpectrum {
        let mut counts = BTreeMap::new();
        for l in all_lines(field) {
            let k = pts.iter().filter(|p| l.contains(field, p)).count();
            *counts.entry(k).or_insert(0) += 1;
        }
        LineSpectrum { counts }
    }

    fn conic_with_nucleus(f: &Field) -> Vec<Point> {
        let mut pts: Vec<Point> = f.elements().map(|x| Point::plane(f, Fe::ONE, x, f.square(x))).collect();
        pts.push(Point::plane(f, Fe::ZERO, Fe::ZERO, Fe::ONE));
        pts.push(Point::plane(f, Fe::ZERO, Fe::ONE, Fe::ZERO));
        pts
    }

    #[test]
    fn hyperoval_verifies_as_type_two() {
        let f = Field::canonical(3).unwrap();
        let pts = conic_with_nucleus(&f);
        let arc = verify_km(&f, &pts).unwrap();
        assert_eq!(arc.t(), 2);
        assert_eq!(arc.nucleus(), None);
        assert_eq!(arc.spectrum(), &brute_spectrum(&f, &pts));
        assert_eq!(arc.spectrum().support(), vec![0, 2]);
    }

    #[test]
    fn conic_plus_wrong_point_exhibits_a_tangent() {
        let f = Field::canonical(3).unwrap();
        let mut pts: Vec<Point> = f.elements().map(|x| Point::plane(&f, Fe::ONE, x, f.square(x))).collect();
        pts.push(Point::plane(&f, Fe::ZERO, Fe::ZERO, Fe::ONE));
        pts.push(Point::plane(&f, Fe::ONE, Fe(3), Fe::ZERO));
        match verify_km(&f, &pts) {
            Err(Error::Verification(VerifyFailure::BadLine { line, size })) => {
                assert_eq!(pts.iter().filter(|p| line.contains(&f, p)).count(), size);
                assert!(size != 0 && size != 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spectrum_matches_brute_force_on_random_sets() {
        let f = Field::canonical(3).unwrap();
        let all = all_points(&f, 3);
        for seed in 0..20u64 {
            let pts: Vec<Point> = all.iter().copied().filter(|p| (p.x().0 * 7 + p.y().0 * 3 + p.z().0 + seed) % 5 == 0).collect();
            assert_eq!(line_spectrum(&f, &pts), brute_spectrum(&f, &pts), "seed {seed}");
        }
    }

    #[test]
    fn two_lines_minus_meet_is_type_q() {
        let f = Field::canonical(2).unwrap();
        let l1 = Line::new(&f, Fe::ONE, Fe::ZERO, Fe::ZERO).unwrap();
        let l2 = Line::new(&f, Fe::ZERO, Fe::ONE, Fe::ZERO).unwrap();
        let n = meet(&f, &l1, &l2).unwrap();
        let pts: Vec<Point> = points_on_line(&f, &l1)
            .into_iter()
            .chain(points_on_line(&f, &l2))
            .filter(|p| *p != n)
            .collect();
        let arc = verify_km(&f, &pts).unwrap();
        assert_eq!((arc.t(), arc.nucleus()), (4, Some(n)));
        assert_eq!(arc.t_secants().len(), 2);
    }

    #[test]
    fn declared_nucleus_for_hyperovals() {
        let f = Field::canonical(3).unwrap();
        let pts = conic_with_nucleus(&f);
        let n = Point::plane(&f, Fe::ONE, Fe::ONE, Fe::ZERO);
        let arc = verify_km_with_nucleus(&f, &pts, n).unwrap();
        assert_eq!(arc.t_secants().len(), 5);
        assert!(verify_km_with_nucleus(&f, &pts, pts[0]).is_err());
    }

    #[test]
    fn json_round_trip_and_tamper_detection() {
        let f = Field::canonical(3).unwrap();
        let arc = verify_km(&f, &conic_with_nucleus(&f)).unwrap();
        let s = arc.to_json_string();
        assert_eq!(KMArc::from_json_str(&s).unwrap(), arc);
        let mut j = arc.to_json();
        j.points.pop();
        assert!(KMArc::from_json(&j).is_err());
        assert!(KMArc::from_json_str("{").is_err());
    }
}
