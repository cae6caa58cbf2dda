//! Exhaustive counts: clubs on PG(1, 2^h), triads, the translation
//! predicate of the trace family, and fixed-head club equivalence.

use crate::arcs::{count_triads, new_family, FamilyParams};
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use crate::projgeom::{Point, Spread};
use crate::symmetry::{line_set_equivalent, transliff_set, translation_lines};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// All `k`-dimensional subspaces of F2^n as bases in reduced echelon form,
/// pivots at the lowest set bit of each row.
pub fn subspaces(n: usize, k: usize) -> Vec<Vec<u64>> {
    fn fill(rows: &mut Vec<u64>, pivots: &[usize], n: usize, out: &mut Vec<Vec<u64>>) {
        let r = rows.len();
        if r == pivots.len() {
            out.push(rows.clone());
            return;
        }
        let p = pivots[r];
        let free: Vec<usize> = (p + 1..n).filter(|b| !pivots.contains(b)).collect();
        for mask in 0u64..1 << free.len() {
            let mut row = 1u64 << p;
            for (i, &b) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    row |= 1 << b;
                }
            }
            rows.push(row);
            fill(rows, pivots, n, out);
            rows.pop();
        }
    }
    fn choose(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            choose(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut pivot_sets = Vec::new();
    choose(0, n, k, &mut Vec::new(), &mut pivot_sets);
    let mut out = Vec::new();
    for ps in pivot_sets {
        fill(&mut Vec::with_capacity(k), &ps, n, &mut out);
    }
    out
}

/// Weights of the points of B(span(rows)) in the binary spread on PG(1, 2^h).
fn weights(spread: &Spread, rows: &[u64]) -> BTreeMap<Point, u32> {
    let mut counts: BTreeMap<Point, u64> = BTreeMap::new();
    for c in 1u64..1 << rows.len() {
        let v = rows.iter().enumerate().filter(|(i, _)| c >> i & 1 == 1).fold(0u64, |acc, (_, r)| acc ^ r);
        *counts.entry(spread.owner(v as u128)).or_insert(0) += 1;
    }
    counts.into_iter().map(|(p, n)| (p, (n + 1).trailing_zeros())).collect()
}

/// The head if the weights describe an i-club, `i >= 2`.
fn club_head(w: &BTreeMap<Point, u32>, i: u32) -> Option<Point> {
    let mut heads = w.iter().filter(|(_, &x)| x > 1);
    let (&p, &x) = heads.next()?;
    (x == i && heads.next().is_none()).then_some(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClubCensus {
    pub h: u32,
    pub subspaces: u64,
    /// Subspaces whose B-image is an (h-1)-club.
    pub club_subspaces: u64,
    /// Distinct (h-1)-clubs as point sets.
    pub clubs: u64,
    pub expected_clubs: u64,
    /// Distinct clubs per head; the same for every head.
    pub per_head: BTreeSet<u64>,
    pub expected_per_head: u64,
    #[serde(skip)]
    pub club_sets: BTreeSet<Vec<Point>>,
}

/// Every (h-1)-club of rank h on PG(1, 2^h) over F2, from all rank-h
/// subspaces of F2^{2h}.
pub fn club_census(h: u32) -> Result<ClubCensus> {
    if !(2..=4).contains(&h) {
        return Err(Error::TooLarge(format!("club census supports h = 2..=4, got {h}")));
    }
    let field = Field::canonical(h)?;
    let spread = Spread::binary(&field, 2)?;
    let all = subspaces(2 * h as usize, h as usize);
    let found: Vec<(Point, Vec<Point>)> = all
        .par_iter()
        .filter_map(|rows| {
            let w = weights(&spread, rows);
            club_head(&w, h - 1).map(|head| (head, w.into_keys().collect()))
        })
        .collect();
    let club_subspaces = found.len() as u64;
    let mut by_head: BTreeMap<Point, BTreeSet<Vec<Point>>> = BTreeMap::new();
    for (head, set) in found {
        by_head.entry(head).or_default().insert(set);
    }
    let club_sets: BTreeSet<Vec<Point>> = by_head.values().flatten().cloned().collect();
    let q = 2u64;
    Ok(ClubCensus {
        h,
        subspaces: all.len() as u64,
        club_subspaces,
        clubs: club_sets.len() as u64,
        expected_clubs: q * (q.pow(2 * h) - 1) / (q - 1),
        per_head: by_head.values().map(|s| s.len() as u64).collect(),
        expected_per_head: q * (q.pow(h) - 1) / (q - 1),
        club_sets,
    })
}

/// Images of a point set of PG(1, q) under PGL(2, q), or PΓL(2, q).
pub fn line_set_orbit(field: &Field, s: &[Point], semilinear: bool) -> Result<BTreeSet<Vec<Point>>> {
    if field.q() > 64 {
        return Err(Error::TooLarge(format!("group enumeration at q = {}", field.q())));
    }
    let els: Vec<Fe> = field.elements().collect();
    let frobs: Vec<u32> = if semilinear { (0..field.m()).collect() } else { vec![0] };
    let q = els.len();
    let quads: Vec<[Fe; 4]> = (0..q.pow(4))
        .map(|n| [els[n % q], els[n / q % q], els[n / q / q % q], els[n / q / q / q]])
        .filter(|&[a, b, c, d]| {
            let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero());
            lead == Some(Fe::ONE) && field.mul(a, d) != field.mul(b, c)
        })
        .collect();
    let images: BTreeSet<Vec<Point>> = quads
        .par_iter()
        .flat_map_iter(|&[a, b, c, d]| {
            frobs.iter().map(move |&k| {
                let mut img: Vec<Point> = s
                    .iter()
                    .map(|p| {
                        let (x, y) = (field.frobenius(p.coords()[0], k), field.frobenius(p.coords()[1], k));
                        let v = [field.mul(a, x) + field.mul(b, y), field.mul(c, x) + field.mul(d, y)];
                        Point::new(field, &v).expect("invertible")
                    })
                    .collect();
                img.sort();
                img
            })
        })
        .collect();
    Ok(images)
}

/// Predicted (transliff set) against detected (translation line found) over
/// every admissible `(α, β)` with `a = b = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransliffCensus {
    pub q: u64,
    /// `matrix[predicted][detected]`.
    pub matrix: [[u64; 2]; 2],
    /// Cases where the five secants are all translation lines.
    pub all_five: u64,
    /// Cases with `β³ = 1` and `α` predicted.
    pub cube_root_cases: u64,
    /// Cube-root cases in which every secant is a translation line.
    pub cube_root_all_five: u64,
}

impl TransliffCensus {
    pub fn is_diagonal(&self) -> bool {
        self.matrix[0][1] == 0 && self.matrix[1][0] == 0
    }
}

pub fn transliff_census(field: &Field) -> Result<TransliffCensus> {
    let params: Vec<FamilyParams> = FamilyParams::all(field).into_iter().filter(|p| p.a == 0 && p.b == 0).collect();
    let rows: Vec<(bool, usize, bool)> = params
        .par_iter()
        .map(|p| {
            let arc = new_family(field, p)?;
            let predicted = transliff_set(field, p.beta)?.contains(&p.alpha);
            let cube = field.pow(p.beta, 3) == Fe::ONE;
            Ok((predicted, translation_lines(&arc).len(), cube))
        })
        .collect::<Result<_>>()?;
    let mut c = TransliffCensus {
        q: field.q(),
        matrix: [[0; 2]; 2],
        all_five: 0,
        cube_root_cases: 0,
        cube_root_all_five: 0,
    };
    for (predicted, lines, cube) in rows {
        c.matrix[predicted as usize][(lines > 0) as usize] += 1;
        c.all_five += (lines == 5) as u64;
        if cube && predicted {
            c.cube_root_cases += 1;
            c.cube_root_all_five += (lines == 5) as u64;
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriadCensus {
    pub q: u64,
    pub count: u64,
    pub expected: u64,
}

pub fn triad_census(field: &Field) -> Result<TriadCensus> {
    Ok(TriadCensus { q: field.q(), count: count_triads(field)?, expected: 4 * field.q() - 4 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedHeadCensus {
    pub h: u32,
    pub i: u32,
    pub rank: u32,
    pub head: Point,
    pub subspaces: u64,
    pub clubs: u64,
    pub all_equivalent: bool,
}

/// Every i-club of rank `rank` with head `(1, 0)` on PG(1, 2^h), and whether
/// they are pairwise PΓL-equivalent (all equivalent to the first).
pub fn fixed_head_census(h: u32, i: u32, rank: u32) -> Result<FixedHeadCensus> {
    if i < 2 || rank <= i || rank - i > h || h > 6 {
        return Err(Error::BadParams(format!("need 2 <= i < rank <= i + h and h <= 6, got i={i}, rank={rank}, h={h}")));
    }
    let field = Field::canonical(h)?;
    let spread = Spread::binary(&field, 2)?;
    let head = Point::new(&field, &[Fe::ONE, Fe::ZERO])?;
    let (hu, iu, ku) = (h as usize, i as usize, (rank - i) as usize);
    // The head's element is the low h bits; quotient directions are the high h bits.
    let inner = subspaces(hu, iu);
    let outer = subspaces(hu, ku);
    let lifts = 1u64 << (ku * (hu - iu));
    let combos: Vec<(usize, usize, u64)> = (0..inner.len())
        .flat_map(|a| (0..outer.len()).flat_map(move |b| (0..lifts).map(move |c| (a, b, c))))
        .collect();
    let found: BTreeSet<Vec<Point>> = combos
        .par_iter()
        .filter_map(|&(a, b, c)| {
            let w = &inner[a];
            // Complement of w in the low h bits: the non-pivot unit vectors.
            let pivots: Vec<u32> = w.iter().map(|r| r.trailing_zeros()).collect();
            let comp: Vec<u64> = (0..h).filter(|b| !pivots.contains(b)).map(|b| 1u64 << b).collect();
            let mut rows = w.clone();
            for (j, u) in outer[b].iter().enumerate() {
                let sel = (c >> (j * (hu - iu))) & ((1u64 << (hu - iu)) - 1);
                let low = comp.iter().enumerate().filter(|(k, _)| sel >> k & 1 == 1).fold(0, |acc, (_, v)| acc ^ v);
                rows.push(u << h | low);
            }
            let wt = weights(&spread, &rows);
            (club_head(&wt, i) == Some(head)).then(|| wt.into_keys().collect())
        })
        .collect();
    let clubs: Vec<Vec<Point>> = found.into_iter().collect();
    let all_equivalent = match clubs.first() {
        None => true,
        Some(first) => clubs
            .par_iter()
            .map(|c| line_set_equivalent(&field, first, c, true).map(|w| w.is_some()))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|x| x),
    };
    Ok(FixedHeadCensus {
        h,
        i,
        rank,
        head,
        subspaces: combos.len() as u64,
        clubs: clubs.len() as u64,
        all_equivalent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_binomial(n: u32, k: u32) -> u64 {
        (0..k).fold(1u64, |acc, i| acc * ((1 << (n - i)) - 1)) / (0..k).fold(1u64, |acc, i| acc * ((1 << (i + 1)) - 1))
    }

    #[test]
    fn subspace_counts() {
        for (n, k) in [(4, 2), (6, 3), (5, 1), (5, 5)] {
            let all = subspaces(n, k);
            assert_eq!(all.len() as u64, gaussian_binomial(n as u32, k as u32));
            let distinct: BTreeSet<Vec<u64>> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.iter().all(|r| crate::bitlin::rank(r) == k));
        }
    }

    #[test]
    fn clubs_at_h3() {
        let c = club_census(3).unwrap();
        assert_eq!(c.subspaces, 1395);
        assert_eq!((c.clubs, c.expected_clubs), (126, 126));
        assert_eq!(c.per_head, BTreeSet::from([14]));
        assert_eq!(c.club_subspaces, 126 * 7);
    }

    #[test]
    fn trace_club_orbit_is_every_club() {
        let f = Field::canonical(3).unwrap();
        let club = crate::linsets::club_trace(&Spread::binary(&f, 2).unwrap()).unwrap().points();
        let orbit = line_set_orbit(&f, &club, true).unwrap();
        assert_eq!(orbit, club_census(3).unwrap().club_sets);
    }

    #[test]
    fn fixed_head_small() {
        let c = fixed_head_census(3, 2, 3).unwrap();
        assert_eq!(c.clubs, club_census(3).unwrap().expected_per_head);
        assert!(c.all_equivalent);
    }

    #[test]
    fn triads_q8() {
        let t = triad_census(&Field::canonical(3).unwrap()).unwrap();
        assert_eq!((t.count, t.expected), (28, 28));
    }

    #[test]
    fn transliff_q8() {
        let c = transliff_census(&Field::canonical(3).unwrap()).unwrap();
        assert!(c.is_diagonal(), "{c:?}");
    }
}
