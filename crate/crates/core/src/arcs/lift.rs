use super::{fail, verify_km, KMArc, VerifyFailure};
use crate::bitlin;
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use crate::linsets::{weight_profile, LinearSetWitness};
use crate::projgeom::{all_points, dot, Line, PVec, Point, Spread, Subspace};
use std::collections::BTreeSet;

/// The reduction of `(0, 0, 1)`, off the hyperplane of `Z = 0`.
pub fn default_lift_point(field: &Field) -> Result<PVec> {
    Ok(Spread::binary(field, 3)?.reduce(&[Fe::ZERO, Fe::ZERO, Fe::ONE]))
}

/// Builds the translation arc of an F2-linear club of rank h on `Z = 0`.
///
/// `mu` lives in the reduction of PG(1, 2^h) (polynomial basis); the same
/// bits read as the first 2h coordinates of the reduction of PG(2, 2^h).
/// The affine points are the spread elements met by `span(mu, lift) \ mu`,
/// the points at infinity those of `Z = 0` outside B(mu).
pub fn lift_club_to_arc(mu: &Subspace, lift_point: Option<PVec>) -> Result<KMArc> {
    let field = mu.ambient().field().clone();
    let h = field.m() as usize;
    let line = Spread::binary(&field, 2)?;
    if mu.ambient() != line.ambient() {
        return Err(Error::AmbientMismatch);
    }
    if mu.rank() != h {
        return Err(Error::BadParams(format!("club must have rank h = {h}, got {}", mu.rank())));
    }
    let plane = Spread::binary(&field, 3)?;
    let lift = match lift_point {
        Some(v) => v,
        None => default_lift_point(&field)?,
    };
    if lift >> (3 * h) != 0 {
        return Err(Error::BadLift("vector has more than 3h coordinates".into()));
    }
    if lift >> (2 * h) == 0 {
        return Err(Error::BadLift("lift point lies in the hyperplane at infinity".into()));
    }
    let witness = weight_profile(mu, &line)?;
    let head = witness.club().map(|c| c.head);
    let mu_plane = mu.embed(plane.ambient())?;
    let mut pts = vec![plane.owner(lift)];
    mu_plane.for_each_vector(|u| pts.push(plane.owner(lift ^ u)));
    let on_club = witness.point_set();
    for p in all_points(&field, 2) {
        if !on_club.contains(&p) {
            pts.push(Point::plane(&field, p.x(), p.y(), Fe::ZERO));
        }
    }
    let arc = verify_km(&field, &pts)?;
    let expected_nucleus = head.map(|n| Point::plane(&field, n.x(), n.y(), Fe::ZERO));
    if arc.t() > 2 && arc.nucleus() != expected_nucleus {
        return fail(VerifyFailure::BadNucleus(arc.nucleus().expect("type above 2 has a nucleus")));
    }
    Ok(arc)
}

/// Coordinate change sending `ell` to `Z = 0`: the two unit rows other
/// than the last nonzero position of `ell`'s dual, then the dual itself.
pub fn to_infinity_coordinates(ell: &Line) -> [[Fe; 3]; 3] {
    let d = ell.dual();
    let k = (0..3).rev().find(|&k| !d[k].is_zero()).expect("nonzero dual");
    let mut rows = [[Fe::ZERO; 3]; 3];
    for (row, i) in rows.iter_mut().zip((0..3).filter(|&i| i != k)) {
        row[i] = Fe::ONE;
    }
    rows[2] = d;
    rows
}

fn apply_rows(field: &Field, m: &[[Fe; 3]; 3], p: &Point) -> Point {
    let c: [Fe; 3] = p.coords().try_into().expect("plane point");
    Point::plane(field, dot(field, &m[0], &c), dot(field, &m[1], &c), dot(field, &m[2], &c))
}

/// Recovers the club behind a translation arc with translation line `ell`.
///
/// Coordinates are changed by [`to_infinity_coordinates`] so that `ell`
/// becomes `Z = 0`; the returned witness lives on that line.
pub fn directions_club(arc: &KMArc, ell: &Line) -> Result<LinearSetWitness> {
    let field = arc.field();
    let h = field.m() as usize;
    let m = to_infinity_coordinates(ell);
    let moved: Vec<Point> = arc.points().iter().map(|p| apply_rows(field, &m, p)).collect();
    let affine: Vec<(Fe, Fe)> = moved
        .iter()
        .filter(|p| !p.z().is_zero())
        .map(|p| {
            let zi = field.inv(p.z()).expect("nonzero");
            (field.mul(p.x(), zi), field.mul(p.y(), zi))
        })
        .collect();
    if affine.len() as u64 != field.q() {
        return Err(Error::NotTranslation(format!("{} points off the line, expected q", affine.len())));
    }
    let (x0, y0) = affine[0];
    let diffs: Vec<u64> = affine.iter().map(|&(x, y)| (x + x0).0 | (y + y0).0 << h).collect();
    if bitlin::rank(&diffs) != h {
        return Err(Error::NotTranslation("affine points are not a coset of an F2-subspace".into()));
    }
    let line = Spread::binary(field, 2)?;
    let vecs: Vec<PVec> = affine.iter().map(|&(x, y)| line.reduce(&[x + x0, y + y0])).collect();
    let mu = Subspace::span_of(line.ambient(), &vecs);
    let witness = weight_profile(&mu, &line)?;
    let on_line: BTreeSet<Point> =
        moved.iter().filter(|p| p.z().is_zero()).map(|p| Point::new(field, &[p.x(), p.y()]).expect("nonzero")).collect();
    let expected: BTreeSet<Point> = all_points(field, 2).into_iter().filter(|p| !on_line.contains(p)).collect();
    if witness.point_set() != expected {
        return Err(Error::NotTranslation("B(mu) is not the complement of the arc on the line".into()));
    }
    if arc.t() > 2 {
        let head = witness
            .club()
            .ok_or_else(|| Error::NotTranslation("recovered linear set is not a club".into()))?
            .head;
        let n = apply_rows(field, &m, &arc.nucleus().expect("type above 2 has a nucleus"));
        if Point::plane(field, head.x(), head.y(), Fe::ZERO) != n {
            return Err(Error::NotTranslation("club head is not the nucleus".into()));
        }
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::{new_family, vandendriessche, FamilyParams};
    use crate::linsets::{club_hminus2, club_scattered, club_trace};

    fn line(h: u32) -> Spread {
        Spread::binary(&Field::canonical(h).unwrap(), 2).unwrap()
    }

    #[test]
    fn lift_examples() {
        let s = line(4);
        let a = lift_club_to_arc(&club_hminus2(&s).unwrap().mu, None).unwrap();
        assert_eq!((a.t(), a.len()), (4, 20));
        let a = lift_club_to_arc(&club_scattered(&s, 1).unwrap().mu, None).unwrap();
        assert_eq!((a.t(), a.len()), (2, 18));
        let a = lift_club_to_arc(&club_trace(&s).unwrap().mu, None).unwrap();
        assert_eq!((a.t(), a.len()), (8, 24));
        assert_eq!(a.nucleus(), Some(Point::plane(s.field(), Fe::ONE, Fe::ZERO, Fe::ZERO)));
    }

    #[test]
    fn lift_point_in_hyperplane_is_rejected() {
        let s = line(3);
        let mu = club_trace(&s).unwrap().mu;
        assert!(matches!(lift_club_to_arc(&mu, Some(1)), Err(Error::BadLift(_))));
    }

    #[test]
    fn round_trip_profiles() {
        for h in 3..=6 {
            let s = line(h);
            for w in [club_trace(&s).unwrap(), club_hminus2(&s).unwrap()] {
                let arc = lift_club_to_arc(&w.mu, None).unwrap();
                let back = directions_club(&arc, &Line::z_axis()).unwrap();
                assert_eq!(back.profile, w.profile, "h={h}");
            }
        }
    }

    #[test]
    fn vandendriessche_translation_line() {
        let f = Field::from_modulus(0x13).unwrap();
        let arc = vandendriessche(&f, 0).unwrap();
        let ell = Line::new(&f, Fe::ZERO, Fe::ONE, f.lambda()).unwrap();
        let w = directions_club(&arc, &ell).unwrap();
        let c = w.club().unwrap();
        assert_eq!((c.i, c.rank), (2, 4));
    }

    #[test]
    fn new_family_translation_at_infinity_iff_alpha_beta_squared_is_one() {
        let f = Field::canonical(4).unwrap();
        for beta in f.elements().skip(2) {
            for alpha in f.elements().skip(2) {
                let Ok(p) = FamilyParams::new(&f, alpha, beta, 0, 0) else { continue };
                let arc = new_family(&f, &p).unwrap();
                let ok = directions_club(&arc, &Line::z_axis()).is_ok();
                assert_eq!(ok, f.mul(alpha, f.square(beta)) == Fe::ONE, "alpha={alpha} beta={beta}");
            }
        }
    }
}
