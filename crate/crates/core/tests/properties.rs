use kmarc::arcs::{lift_club_to_arc, new_family, vandendriessche, verify_km, FamilyParams, KMArc};
use kmarc::census::subspaces;
use kmarc::gf2field::{Fe, Field};
use kmarc::linsets::{club_hminus2, club_trace, weight_profile};
use kmarc::projgeom::{line_through, Line, Point, Spread, Subspace};
use kmarc::symmetry::{d_sets, elation, pgl_equivalent, translation_lines, Collineation};
use kmarc::tracesys::TraceSystem;
use proptest::prelude::*;
use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

fn field(m: u32) -> Field {
    Field::canonical(m).unwrap()
}

fn plane_point(f: &Field, c: [u64; 3]) -> Option<Point> {
    Point::new(f, &c.map(|x| Fe(x & f.mask()))).ok()
}

fn q16_arcs() -> &'static Vec<KMArc> {
    static ARCS: OnceLock<Vec<KMArc>> = OnceLock::new();
    ARCS.get_or_init(|| {
        let f = field(4);
        let mut v: Vec<KMArc> = FamilyParams::all(&f).iter().step_by(37).map(|p| new_family(&f, p).unwrap()).collect();
        v.push(vandendriessche(&f, 0).unwrap());
        v
    })
}

fn collineation(f: &Field, entries: [u64; 9], frob: u32) -> Option<Collineation> {
    let m = std::array::from_fn(|i| std::array::from_fn(|j| Fe(entries[3 * i + j] & f.mask())));
    Collineation::new(f, m, frob).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(m in 2u32..=16, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field(m);
        let (a, b, c) = (Fe(a & f.mask()), Fe(b & f.mask()), Fe(c & f.mask()));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(f.inv(a).unwrap(), a), Fe::ONE);
        }
        prop_assert_eq!(f.square(f.sqrt(a)), a);
    }

    #[test]
    fn relative_trace_is_subfield_linear(m in 2u32..=12, a in any::<u64>(), c in any::<u64>()) {
        let f = field(m);
        let a = Fe(a & f.mask());
        for d in (1..=m).filter(|d| m % d == 0) {
            let sub = f.subfield_elements(d).unwrap();
            let c = sub[(c % sub.len() as u64) as usize];
            prop_assert_eq!(f.trace(f.mul(c, a), d).unwrap(), f.mul(c, f.trace(a, d).unwrap()));
        }
    }

    #[test]
    fn join_contains_both_points(m in 2u32..=8, p in any::<[u64; 3]>(), q in any::<[u64; 3]>()) {
        let f = field(m);
        if let (Some(p), Some(q)) = (plane_point(&f, p), plane_point(&f, q)) {
            if p != q {
                let l = line_through(&f, &p, &q).unwrap();
                prop_assert!(l.contains(&f, &p) && l.contains(&f, &q));
            }
        }
    }

    #[test]
    fn vector_count_identity(h in 2u32..=6, rows in prop::collection::vec(any::<u64>(), 1..8)) {
        let f = field(h);
        let s = Spread::binary(&f, 2).unwrap();
        let vecs: Vec<u128> = rows.iter().map(|&r| (r & ((1u64 << (2 * h)) - 1)) as u128).filter(|&v| v != 0).collect();
        prop_assume!(!vecs.is_empty());
        let mu = Subspace::span_of(s.ambient(), &vecs);
        let w = weight_profile(&mu, &s).unwrap();
        prop_assert!(w.vector_count_identity());
        let total: u64 = w.profile.iter().map(|(_, k)| (1u64 << k) - 1).sum();
        prop_assert_eq!(total, (1u64 << mu.rank()) - 1);
    }

    #[test]
    fn trace_system_invariants(
        m in 2u32..=10,
        ks in prop::collection::vec(any::<u64>(), 0..7),
        cs in prop::collection::vec(0u8..2, 7),
    ) {
        let f = field(m);
        let ks: Vec<Fe> = ks.iter().map(|&k| Fe(k & f.mask())).collect();
        let sys = TraceSystem::new(&f, ks.clone(), cs[..ks.len()].to_vec()).unwrap();
        let n = sys.count(&f);
        prop_assert!(n == 0 || (n.is_power_of_two() && n <= f.q() as u128 && n >= (f.q() >> ks.len().min(m as usize)) as u128));
        prop_assert_eq!(n, sys.brute_count(&f).unwrap());
        let sols = sys.solve(&f).unwrap();
        prop_assert_eq!(sols.len() as u128, n);
        prop_assert!(sols.iter().all(|&x| sys.holds(&f, x)));
        let set: BTreeSet<Fe> = sols.iter().copied().collect();
        for i in 0..sols.len().min(6) {
            for j in 0..sols.len().min(6) {
                for k in 0..sols.len().min(6) {
                    prop_assert!(set.contains(&(sols[i] + sols[j] + sols[k])));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn collineations_preserve_arc_invariants(idx in any::<prop::sample::Index>(), e in any::<[u64; 9]>(), frob in 0u32..4) {
        let f = field(4);
        let arcs = q16_arcs();
        let arc = &arcs[idx.index(arcs.len())];
        let Some(g) = collineation(&f, e, frob) else { return Ok(()) };
        let img = verify_km(&f, &g.apply(&f, arc.points())).unwrap();
        prop_assert_eq!(img.t(), arc.t());
        prop_assert_eq!(img.spectrum(), arc.spectrum());
        prop_assert_eq!(img.nucleus(), arc.nucleus().map(|n| g.apply_point(&f, &n)));
        let profile = |a: &KMArc| {
            let mut v: Vec<[usize; 6]> = a.t_secants().iter().map(|l| {
                let mut s = d_sets(a, l, [0, 1, 2, 3]).unwrap().sizes();
                s.sort();
                s
            }).collect();
            v.sort();
            v
        };
        prop_assert_eq!(profile(&img), profile(arc));
        let (q, t) = (f.q(), arc.t() as u64);
        let incidences: u64 = arc.spectrum().counts.iter().map(|(k, n)| *k as u64 * n).sum();
        prop_assert_eq!(incidences, (q + t) * (q + 1));
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric(idx in any::<prop::sample::Index>(), e in any::<[u64; 9]>()) {
        let f = field(4);
        let arcs = q16_arcs();
        let arc = &arcs[idx.index(arcs.len())];
        let Some(g) = collineation(&f, e, 0) else { return Ok(()) };
        let img = verify_km(&f, &g.apply(&f, arc.points())).unwrap();
        let id = pgl_equivalent(arc, arc, false).unwrap().unwrap();
        prop_assert_eq!(id.apply(&f, arc.points()), arc.points());
        let there = pgl_equivalent(arc, &img, false).unwrap().unwrap();
        let back = pgl_equivalent(&img, arc, false).unwrap().unwrap();
        prop_assert_eq!(there.apply(&f, arc.points()), img.points());
        prop_assert_eq!(back.apply(&f, img.points()), arc.points());
        let round = back.compose(&f, &there);
        prop_assert_eq!(round.apply(&f, arc.points()), arc.points());
    }

    #[test]
    fn translation_lines_are_secants_and_elations_close(idx in any::<prop::sample::Index>()) {
        let f = field(4);
        let arcs = q16_arcs();
        let arc = &arcs[idx.index(arcs.len())];
        for l in translation_lines(arc) {
            prop_assert!(arc.t_secants().contains(&l));
            let off: Vec<Point> = arc.points().iter().copied().filter(|p| !l.contains(&f, p)).collect();
            let gs: Vec<Collineation> = off.iter().take(4).map(|r| elation(&f, &l, &off[0], r).unwrap()).collect();
            for a in &gs {
                for b in &gs {
                    let c = a.compose(&f, b);
                    prop_assert_eq!(c.apply(&f, arc.points()), arc.points().to_vec());
                    prop_assert!(points_fixed(&f, &c, &l));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Any lift point off the hyperplane gives the default lift moved by
    /// `(x, y, z) -> (x + X z, y + Y z, c z)` where `(X, Y, c)` is the point.
    #[test]
    fn lift_point_choice_only_translates(h in 3u32..=5, hminus2 in any::<bool>(), bits in any::<u64>()) {
        let f = field(h);
        let line = Spread::binary(&f, 2).unwrap();
        let mu = if hminus2 { club_hminus2(&line) } else { club_trace(&line) }.unwrap().mu;
        let lift = (bits as u128) & ((1u128 << (3 * h)) - 1);
        prop_assume!(lift >> (2 * h) != 0);
        let base = lift_club_to_arc(&mu, None).unwrap();
        let moved = lift_club_to_arc(&mu, Some(lift)).unwrap();
        let [x, y, c]: [Fe; 3] = Spread::binary(&f, 3).unwrap().unreduce(lift).try_into().unwrap();
        let g = Collineation::new(&f, [[Fe::ONE, Fe::ZERO, x], [Fe::ZERO, Fe::ONE, y], [Fe::ZERO, Fe::ZERO, c]], 0).unwrap();
        prop_assert_eq!(g.apply(&f, base.points()), moved.points().to_vec());
        prop_assert!(points_fixed(&f, &g, &Line::z_axis()));
    }
}

fn points_fixed(f: &Field, g: &Collineation, l: &Line) -> bool {
    kmarc::projgeom::points_on_line(f, l).iter().all(|p| g.apply_point(f, p) == *p)
}

/// Two rank-h subspaces meeting the same spread element in the same
/// hyperplane and having the same B-image coincide.
#[test]
fn shared_hyperplane_and_image_force_equality() {
    for h in 3..=4u32 {
        let f = field(h);
        let s = Spread::binary(&f, 2).unwrap();
        let mut seen: HashMap<(Vec<u128>, Vec<Point>), Vec<u128>> = HashMap::new();
        for rows in subspaces(2 * h as usize, h as usize) {
            let vecs: Vec<u128> = rows.iter().map(|&r| r as u128).collect();
            let mu = Subspace::span_of(s.ambient(), &vecs);
            let w = weight_profile(&mu, &s).unwrap();
            let Some(&(head, _)) = w.profile.iter().find(|(_, k)| *k == h - 1) else { continue };
            let hyper = mu.intersect(&s.element(&head)).unwrap();
            let key = (hyper.rows().to_vec(), w.points());
            let prev = seen.insert(key, mu.rows().to_vec());
            assert!(prev.is_none_or(|p| p == mu.rows()), "h={h}: two subspaces share hyperplane and image");
        }
    }
}
