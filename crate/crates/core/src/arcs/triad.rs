use super::{complete_with_directions, verify_km, verify_km_with_nucleus, KMArc};
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use crate::projgeom::{line_through, meet, points_on_line, Line, Point};
use std::collections::BTreeSet;

/// The type-q/2 arc with affine part `{(x, Tr(x), 1)}`.
pub fn triad_trace(field: &Field) -> Result<KMArc> {
    if field.m() < 2 {
        return Err(Error::BadParams("need q >= 4".into()));
    }
    let affine: Vec<Point> = field
        .elements()
        .map(|x| Point::plane(field, x, Fe(field.abs_trace(x) as u64), Fe::ONE))
        .collect();
    let pts = complete_with_directions(field, &affine, field.m());
    let arc = if field.q() == 4 {
        verify_km_with_nucleus(field, &pts, Point::plane(field, Fe::ONE, Fe::ZERO, Fe::ZERO))?
    } else {
        verify_km(field, &pts)?
    };
    arc.expect_type(field.q() as usize / 2)
}

/// A point set on three concurrent lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triad {
    pub center: Point,
    pub lines: [Line; 3],
    /// Sorted, including the center.
    pub points: Vec<Point>,
}

/// The triad of a type-q/2 arc: the nucleus and, on each of the three
/// q/2-secants, the q/2 points missed by the arc.
pub fn triad_from_arc(arc: &KMArc) -> Result<Triad> {
    let q = arc.q() as usize;
    if arc.t() * 2 != q || arc.t_secants().len() != 3 {
        return Err(Error::WrongType(format!("need type q/2, got {}", arc.t())));
    }
    let field = arc.field();
    let center = arc.nucleus().expect("type q/2 arcs have a nucleus");
    let lines = [arc.t_secants()[0], arc.t_secants()[1], arc.t_secants()[2]];
    let mut points: BTreeSet<Point> = BTreeSet::from([center]);
    for l in &lines {
        points.extend(points_on_line(field, l).into_iter().filter(|p| *p != center && !arc.contains(p)));
    }
    Ok(Triad { center, lines, points: points.into_iter().collect() })
}

/// Whether `s` is a projective triad on `lines`: the lines meet in one
/// point `P ∈ s`, every point of `s` is on a line, each line holds the same
/// number of points, and joining a point of `s` on the first line to one on
/// the second (both other than `P`) always hits the third line inside `s`.
pub fn is_projective_triad(field: &Field, s: &[Point], lines: &[Line; 3]) -> bool {
    let [l0, l1, l2] = lines;
    if l0 == l1 || l0 == l2 || l1 == l2 {
        return false;
    }
    let Ok(p) = meet(field, l0, l1) else { return false };
    if !l2.contains(field, &p) {
        return false;
    }
    let set: BTreeSet<Point> = s.iter().copied().collect();
    if set.len() != s.len() || !set.contains(&p) {
        return false;
    }
    if set.iter().any(|x| !lines.iter().any(|l| l.contains(field, x))) {
        return false;
    }
    let on = |l: &Line| -> Vec<Point> { set.iter().copied().filter(|x| *x != p && l.contains(field, x)).collect() };
    let (r0, r1, r2) = (on(l0), on(l1), on(l2));
    if r0.len() != r1.len() || r1.len() != r2.len() || r0.is_empty() {
        return false;
    }
    for a in &r0 {
        for b in &r1 {
            let l = line_through(field, a, b).expect("distinct lines through P");
            let c = meet(field, &l, l2).expect("l misses P");
            if !set.contains(&c) {
                return false;
            }
        }
    }
    true
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of projective triads with q/2 points off the center on each of
/// `X = 0`, `Y = 0`, `X = Y`, by exhausting the point choices on the first
/// two lines.
pub fn count_triads(field: &Field) -> Result<u64> {
    let q = field.q();
    if !(4..=8).contains(&q) {
        return Err(Error::TooLarge(format!("triad census supports q = 4 or 8, got {q}")));
    }
    let lines = [
        Line::new(field, Fe::ONE, Fe::ZERO, Fe::ZERO)?,
        Line::new(field, Fe::ZERO, Fe::ONE, Fe::ZERO)?,
        Line::new(field, Fe::ONE, Fe::ONE, Fe::ZERO)?,
    ];
    let p = meet(field, &lines[0], &lines[1])?;
    let off = |l: &Line| -> Vec<Point> { points_on_line(field, l).into_iter().filter(|x| *x != p).collect() };
    let (a, b) = (off(&lines[0]), off(&lines[1]));
    let k = (q / 2) as usize;
    // joins[i][j] = index on the third line of <a_i, b_j> ∩ l2
    let third = off(&lines[2]);
    let joins: Vec<Vec<u32>> = a
        .iter()
        .map(|x| {
            b.iter()
                .map(|y| {
                    let c = meet(field, &line_through(field, x, y).expect("distinct"), &lines[2]).expect("distinct");
                    third.binary_search(&c).expect("on the third line") as u32
                })
                .collect()
        })
        .collect();
    let subsets = k_subsets(q as usize, k);
    let mut total = 0;
    for sa in &subsets {
        for sb in &subsets {
            let mut image = 0u64;
            for i in bits(*sa) {
                for j in bits(*sb) {
                    image |= 1 << joins[i][j];
                }
            }
            let size = image.count_ones() as u64;
            if size <= k as u64 {
                // Any completion of the image to k points on the third line works.
                total += binomial(q - size, k as u64 - size);
            }
        }
    }
    Ok(total)
}

fn k_subsets(n: usize, k: usize) -> Vec<u64> {
    (0u64..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_arc_is_type_half_q() {
        let f = Field::canonical(3).unwrap();
        let arc = triad_trace(&f).unwrap();
        assert_eq!((arc.t(), arc.len()), (4, 12));
        assert_eq!(arc.nucleus(), Some(Point::plane(&f, Fe::ONE, Fe::ZERO, Fe::ZERO)));
    }

    #[test]
    fn triad_of_trace_arc() {
        for h in 2..=6 {
            let f = Field::canonical(h).unwrap();
            let t = triad_from_arc(&triad_trace(&f).unwrap()).unwrap();
            assert_eq!(t.points.len() as u64, 3 * f.q() / 2 + 1);
            assert!(is_projective_triad(&f, &t.points, &t.lines), "h={h}");
            let victim = *t.points.iter().find(|p| **p != t.center && t.lines[0].contains(&f, p)).unwrap();
            let one_less: Vec<Point> = t.points.iter().copied().filter(|p| *p != victim).collect();
            assert!(!is_projective_triad(&f, &one_less, &t.lines));
        }
    }

    #[test]
    fn triad_counts() {
        assert_eq!(count_triads(&Field::canonical(2).unwrap()).unwrap(), 12);
        assert_eq!(count_triads(&Field::canonical(3).unwrap()).unwrap(), 28);
    }
}
