use crate::arcs::KMArc;
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use crate::linsets::recognize_maxhead_club;
use crate::projgeom::{line_through, meet, Line, Point};
use std::collections::BTreeSet;

/// Index of the pair `(i, j)`, `0 <= i < j < 4`, in `12, 13, 14, 23, 24, 34` order.
fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < 4);
    match (i, j) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

/// Direction sets on `ell0` cut out by joins between the arc points of the
/// other four t-secants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSets {
    pub ell0: Line,
    pub nucleus: Point,
    /// The other four secants in labeling order.
    pub secants: [Line; 4],
    pub labeling: [usize; 4],
    sets: [BTreeSet<Point>; 6],
}

impl DSets {
    /// `D_ij` for 1-based labels `1 <= i < j <= 4`.
    pub fn get(&self, i: usize, j: usize) -> &BTreeSet<Point> {
        assert!((1..=4).contains(&i) && (1..=4).contains(&j) && i != j, "labels are 1..=4");
        let (a, b) = if i < j { (i - 1, j - 1) } else { (j - 1, i - 1) };
        &self.sets[pair_index(a, b)]
    }

    /// Sizes in `12, 13, 14, 23, 24, 34` order.
    pub fn sizes(&self) -> [usize; 6] {
        std::array::from_fn(|k| self.sets[k].len())
    }
}

/// Which direction-set property to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    I,
    II,
}

/// Secants other than `ell0`, their arc points, and the raw pairwise sets.
struct Frame {
    nucleus: Point,
    others: Vec<Line>,
    sets: [BTreeSet<Point>; 6],
    parts: Vec<Vec<Point>>,
}

fn frame(arc: &KMArc, ell0: &Line) -> Result<Frame> {
    let q = arc.q() as usize;
    let nucleus = match arc.nucleus() {
        Some(n) if arc.t() * 4 == q && arc.t_secants().len() == 5 => n,
        _ => return Err(Error::WrongType(format!("need type q/4 = {} with five secants, got t = {}", q / 4, arc.t()))),
    };
    if !arc.t_secants().contains(ell0) {
        return Err(Error::Precondition("ell0 is not a t-secant of the arc".into()));
    }
    let f = arc.field();
    let others: Vec<Line> = arc.t_secants().iter().copied().filter(|l| l != ell0).collect();
    let parts: Vec<Vec<Point>> = others.iter().map(|l| arc.points_on(l)).collect();
    let mut sets: [BTreeSet<Point>; 6] = Default::default();
    for i in 0..4 {
        for j in i + 1..4 {
            let slot = &mut sets[pair_index(i, j)];
            for p in &parts[i] {
                for r in &parts[j] {
                    let l = line_through(f, p, r).expect("distinct arc points");
                    slot.insert(meet(f, &l, ell0).expect("join is not ell0"));
                }
            }
        }
    }
    Ok(Frame { nucleus, others, sets, parts })
}

fn relabel(fr: &Frame, ell0: &Line, labeling: [usize; 4]) -> DSets {
    let sets = std::array::from_fn(|k| {
        let (i, j) = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)][k];
        let (a, b) = (labeling[i], labeling[j]);
        fr.sets[pair_index(a.min(b), a.max(b))].clone()
    });
    DSets { ell0: *ell0, nucleus: fr.nucleus, secants: labeling.map(|k| fr.others[k]), labeling, sets }
}

fn check_labeling(labeling: &[usize; 4]) -> Result<()> {
    let mut seen = [false; 4];
    for &k in labeling {
        if k >= 4 || std::mem::replace(&mut seen[k], true) {
            return Err(Error::BadParams(format!("labeling {labeling:?} is not a permutation of 0..4")));
        }
    }
    Ok(())
}

/// The six direction sets for a labeling of the other four t-secants, given
/// as a permutation of their indices in sorted order.
pub fn d_sets(arc: &KMArc, ell0: &Line, labeling: [usize; 4]) -> Result<DSets> {
    check_labeling(&labeling)?;
    Ok(relabel(&frame(arc, ell0)?, ell0, labeling))
}

fn is_club_with_head(field: &Field, s: &BTreeSet<Point>, head: &Point, rank: usize) -> Result<bool> {
    let pts: Vec<Point> = s.iter().copied().collect();
    if !pts.len().is_power_of_two() || pts.contains(head) {
        return Ok(false);
    }
    Ok(recognize_maxhead_club(field, &pts, head)?.is_some_and(|c| c.rank == rank))
}

fn satisfies(field: &Field, h: usize, parts_ok: bool, d: &DSets, prop: Property) -> Result<bool> {
    if !parts_ok {
        return Ok(false);
    }
    if d.get(1, 2) != d.get(3, 4) || d.get(1, 3) != d.get(2, 4) || d.get(1, 4) != d.get(2, 3) {
        return Ok(false);
    }
    let club_rank = match prop {
        Property::I => h - 1,
        Property::II => h,
    };
    for j in 2..=4 {
        if !is_club_with_head(field, d.get(1, j), &d.nucleus, club_rank)? {
            return Ok(false);
        }
    }
    let (a, b, c) = (d.get(1, 2), d.get(1, 3), d.get(1, 4));
    let ab: BTreeSet<Point> = a.intersection(b).copied().collect();
    let ac = a.intersection(c).count();
    let bc = b.intersection(c).count();
    Ok(match prop {
        Property::I => ab.is_empty() && ac == 0 && bc == 0,
        Property::II => {
            let quarter = field.q() as usize / 4;
            ab.len() == quarter && ac == quarter && bc == quarter && ab.intersection(c).next().is_none()
        }
    })
}

fn permutations() -> Vec<[usize; 4]> {
    (0..256usize)
        .map(|n| [n & 3, (n >> 2) & 3, (n >> 4) & 3, n >> 6])
        .filter(|p| (0..4).all(|k| p.contains(&k)))
        .map(|[a, b, c, d]| [d, c, b, a])
        .collect()
}

/// The first labeling (in lexicographic order) under which the arc has the
/// property with respect to `ell0`.
pub fn property_witness(arc: &KMArc, ell0: &Line, prop: Property) -> Result<Option<[usize; 4]>> {
    let fr = frame(arc, ell0)?;
    let f = arc.field();
    let h = f.m() as usize;
    let mut parts_ok = true;
    for part in &fr.parts {
        parts_ok &= is_club_with_head(f, &part.iter().copied().collect(), &fr.nucleus, h - 1)?;
    }
    for labeling in permutations() {
        if satisfies(f, h, parts_ok, &relabel(&fr, ell0, labeling), prop)? {
            return Ok(Some(labeling));
        }
    }
    Ok(None)
}

pub fn has_property_i(arc: &KMArc, ell0: &Line) -> Result<bool> {
    Ok(property_witness(arc, ell0, Property::I)?.is_some())
}

pub fn has_property_ii(arc: &KMArc, ell0: &Line) -> Result<bool> {
    Ok(property_witness(arc, ell0, Property::II)?.is_some())
}

/// `{1/β², 1 + 1/β, β, 1/√β, 1/(β+1)}`.
pub fn transliff_set(field: &Field, beta: Fe) -> Result<BTreeSet<Fe>> {
    if !field.contains(beta) || beta.is_zero() || beta == Fe::ONE {
        return Err(Error::BadParams(format!("beta must lie in F_q minus F_2, got {}", beta.to_hex())));
    }
    let inv = field.inv(beta)?;
    Ok(BTreeSet::from([
        field.square(inv),
        inv + Fe::ONE,
        beta,
        field.sqrt(inv),
        field.inv(beta + Fe::ONE)?,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::{new_family, vandendriessche, FamilyParams};
    use crate::symmetry::translation_lines;

    #[test]
    fn transliff_examples() {
        let f = Field::canonical(4).unwrap();
        let l = f.lambda();
        assert_eq!(transliff_set(&f, l).unwrap().len(), 5);
        let w = f.pow(l, 5);
        assert_eq!(transliff_set(&f, w).unwrap(), BTreeSet::from([w]));
        let f8 = Field::canonical(3).unwrap();
        for b in f8.elements().filter(|b| b.0 > 1) {
            assert_eq!(transliff_set(&f8, b).unwrap().len(), 5);
        }
        assert!(transliff_set(&f, Fe::ONE).is_err());
    }

    fn family(f: &Field, alpha: Fe, beta: Fe) -> KMArc {
        new_family(f, &FamilyParams::new(f, alpha, beta, 0, 0).unwrap()).unwrap()
    }

    #[test]
    fn new_family_direction_sets() {
        let f = Field::canonical(4).unwrap();
        let l = f.lambda();
        let z = Line::z_axis();
        for (alpha, beta) in [(l, f.square(l)), (f.inv(f.square(l)).unwrap(), l)] {
            let arc = family(&f, alpha, beta);
            let d = d_sets(&arc, &z, [0, 1, 2, 3]).unwrap();
            let n = arc.nucleus().unwrap();
            for (i, j) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
                assert!(!d.get(i, j).contains(&n));
                assert!(d.get(i, j).iter().all(|p| z.contains(&f, p)));
            }
            let expect_i = f.mul(alpha, f.square(beta)) == Fe::ONE;
            assert_eq!(has_property_i(&arc, &z).unwrap(), expect_i);
            assert_eq!(has_property_ii(&arc, &z).unwrap(), !expect_i);
        }
    }

    #[test]
    fn new_family_trace_direction_set() {
        // With the secants through (0,1,0) and (1,1,0) adjacent, one direction
        // set is {(z,1,0) : Tr z = 1}.
        let f = Field::canonical(4).unwrap();
        let l = f.lambda();
        let arc = family(&f, l, f.square(l));
        let z = Line::z_axis();
        let expected: BTreeSet<Point> =
            f.elements().filter(|&x| f.abs_trace(x) == 1).map(|x| Point::plane(&f, x, Fe::ONE, Fe::ZERO)).collect();
        let fr = frame(&arc, &z).unwrap();
        assert!(fr.sets.contains(&expected));
    }

    #[test]
    fn vdd_has_property_ii_at_z_and_i_on_translation_line() {
        let f = Field::canonical(4).unwrap();
        let arc = vandendriessche(&f, 0).unwrap();
        assert!(has_property_ii(&arc, &Line::z_axis()).unwrap());
        let tl = translation_lines(&arc);
        assert_eq!(tl.len(), 1);
        assert!(has_property_i(&arc, &tl[0]).unwrap());
    }

    #[test]
    fn wrong_type_and_bad_labeling() {
        let f = Field::canonical(4).unwrap();
        let hyper = crate::arcs::translation_hyperoval(&f, 1).unwrap();
        assert!(matches!(has_property_i(&hyper, &Line::z_axis()), Err(Error::WrongType(_))));
        let arc = family(&f, f.lambda(), f.square(f.lambda()));
        assert!(matches!(d_sets(&arc, &Line::z_axis(), [0, 0, 1, 2]), Err(Error::BadParams(_))));
    }
}
