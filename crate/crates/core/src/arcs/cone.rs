use super::{analyze, complete_with_directions, verify_km, KMArc};
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use crate::projgeom::{PVec, Point, Spread, Subspace};
use std::collections::BTreeSet;

/// Position of the cone's special point relative to the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GwVariant {
    /// Base is a hyperoval through the point.
    In,
    /// Base is a hyperoval missing the point.
    Out,
    /// Base is a KM-arc of type 2^j with the point as nucleus.
    Recursive { j: u32 },
}

fn in_subplane(field: &Field, p: &Point, r: u32) -> bool {
    p.coords().iter().all(|&c| field.in_subfield(c, r))
}

fn subfield_abs_trace(field: &Field, x: Fe, r: u32) -> Fe {
    (0..r).fold(Fe::ZERO, |acc, k| acc + field.frobenius(x, k))
}

/// Default base and special point in the canonical subplane PG(2, 2^r).
///
/// Hyperoval bases are `{(1, x, x²)} ∪ {(0,0,1), (0,1,0)}`; the point is
/// `(0,0,1)` for [`GwVariant::In`] and `(1,1,0)` otherwise. For
/// `Recursive { j: r - 1 }` with `r >= 3` the base is the type-2^{r-1} arc
/// with affine part `{(x, Tr(x), 1)}` and the point is its nucleus `(1,0,0)`.
pub fn gw_default_base(field: &Field, r: u32, variant: GwVariant) -> Result<(Vec<Point>, Point)> {
    let sub = field.subfield_elements(r)?;
    let hyperoval = || {
        let mut pts: Vec<Point> = sub.iter().map(|&x| Point::plane(field, Fe::ONE, x, field.square(x))).collect();
        pts.push(Point::plane(field, Fe::ZERO, Fe::ZERO, Fe::ONE));
        pts.push(Point::plane(field, Fe::ZERO, Fe::ONE, Fe::ZERO));
        pts
    };
    let off = Point::plane(field, Fe::ONE, Fe::ONE, Fe::ZERO);
    match variant {
        GwVariant::In => Ok((hyperoval(), Point::plane(field, Fe::ZERO, Fe::ZERO, Fe::ONE))),
        GwVariant::Out | GwVariant::Recursive { j: 1 } => Ok((hyperoval(), off)),
        GwVariant::Recursive { j } if r >= 3 && j == r - 1 => {
            let affine: Vec<Point> =
                sub.iter().map(|&x| Point::plane(field, x, subfield_abs_trace(field, x, r), Fe::ONE)).collect();
            Ok((complete_with_directions(field, &affine, r), Point::plane(field, Fe::ONE, Fe::ZERO, Fe::ZERO)))
        }
        GwVariant::Recursive { j } => Err(Error::BadParams(format!("no default base of type 2^{j} in PG(2, 2^{r})"))),
    }
}

/// The cone arc `B(K) \ {P}` with `K` the union of `<Q, mu>` over base points `Q`.
///
/// The plane is the canonical subplane over F_{2^r} inside the reduction of
/// PG(2, 2^{rs}) over F_{2^r}. `mu` defaults to the span of the reductions
/// of `λ^j P`, `j = 1..s-1`.
pub fn gw_cone(
    field: &Field,
    r: u32,
    s: u32,
    base: &[Point],
    p: Point,
    mu: Option<&Subspace>,
    variant: GwVariant,
) -> Result<KMArc> {
    if r == 0 || s < 2 || r * s != field.m() {
        return Err(Error::BadParams(format!("need r >= 1, s >= 2 and r*s = h, got r={r}, s={s}, h={}", field.m())));
    }
    let spread = Spread::over_subfield(field, r, 3)?;
    if p.dim() != 3 || !in_subplane(field, &p, r) {
        return Err(Error::BadGeometry("special point is not in the subplane".into()));
    }
    if let Some(q) = base.iter().find(|q| q.dim() != 3 || !in_subplane(field, q, r)) {
        return Err(Error::BadGeometry(format!("base point {q:?} is not in the subplane")));
    }
    let order = 1u64 << r;
    let through = base.contains(&p);
    let check = |declared: Option<Point>| {
        analyze(field, base, order, declared).map_err(|e| Error::BadGeometry(format!("base: {e}")))
    };
    let type_exp = r * (s - 1)
        + match variant {
            GwVariant::In | GwVariant::Out => {
                let shape = check(None)?;
                if shape.t != 2 {
                    return Err(Error::BadGeometry(format!("base has type {}, not a hyperoval", shape.t)));
                }
                match (variant, through) {
                    (GwVariant::In, false) => return Err(Error::BadGeometry("base misses the special point".into())),
                    (GwVariant::Out, true) => return Err(Error::BadGeometry("base contains the special point".into())),
                    _ => {}
                }
                (variant == GwVariant::Out) as u32
            }
            GwVariant::Recursive { j } => {
                let shape = check((j == 1).then_some(p))?;
                if shape.t != 1 << j {
                    return Err(Error::BadGeometry(format!("base has type {}, expected 2^{j}", shape.t)));
                }
                if shape.nucleus != Some(p) {
                    return Err(Error::BadGeometry("special point is not the nucleus of the base".into()));
                }
                j
            }
        };
    let rho = spread.element(&p);
    let pv = spread.reduce(p.coords());
    let vertex = match mu {
        Some(m) => {
            if m.ambient() != spread.ambient() || !m.is_subspace_of(&rho) || m.rank() + 1 != s as usize {
                return Err(Error::BadGeometry("vertex is not a hyperplane of the spread element".into()));
            }
            if m.contains(pv) {
                return Err(Error::BadGeometry("vertex contains the special point".into()));
            }
            m.clone()
        }
        None => {
            let l = field.lambda();
            let vecs: Vec<PVec> = (1..s)
                .map(|j| {
                    let c = field.pow(l, j as u64);
                    let v: Vec<Fe> = p.coords().iter().map(|&x| field.mul(c, x)).collect();
                    spread.reduce(&v)
                })
                .collect();
            Subspace::span_of(spread.ambient(), &vecs)
        }
    };
    let mut pts = BTreeSet::new();
    for q in base {
        let mut gens = vec![spread.reduce(q.coords())];
        gens.extend_from_slice(vertex.rows());
        Subspace::span_of(spread.ambient(), &gens).for_each_point(|v| {
            pts.insert(spread.owner(v));
        });
    }
    pts.remove(&p);
    let pts: Vec<Point> = pts.into_iter().collect();
    verify_km(field, &pts)?.expect_type(1 << type_exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(r: u32, s: u32, v: GwVariant) -> Result<KMArc> {
        let f = Field::canonical(r * s).unwrap();
        let (base, p) = gw_default_base(&f, r, v)?;
        gw_cone(&f, r, s, &base, p, None, v)
    }

    #[test]
    fn cone_types() {
        assert_eq!(run(2, 2, GwVariant::In).unwrap().t(), 4);
        assert_eq!(run(2, 2, GwVariant::Out).unwrap().t(), 8);
        assert_eq!(run(2, 2, GwVariant::Recursive { j: 1 }).unwrap().t(), 8);
        assert_eq!(run(1, 3, GwVariant::In).unwrap().t(), 4);
        assert_eq!(run(1, 3, GwVariant::Out).unwrap().t(), 8);
    }

    #[test]
    fn wrong_variant_is_reported() {
        let f = Field::canonical(4).unwrap();
        let (base, p) = gw_default_base(&f, 2, GwVariant::In).unwrap();
        assert!(matches!(gw_cone(&f, 2, 2, &base, p, None, GwVariant::Out), Err(Error::BadGeometry(_))));
        let outside = Point::plane(&f, Fe::ONE, f.lambda(), Fe::ZERO);
        assert!(matches!(gw_cone(&f, 2, 2, &base, outside, None, GwVariant::Out), Err(Error::BadGeometry(_))));
    }
}
