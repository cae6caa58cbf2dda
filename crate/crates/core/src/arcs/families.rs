use super::{analyze, complete_with_directions, fail, verify_km, verify_km_with_nucleus, KMArc, VerifyFailure};
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use crate::linsets::gcd;
use crate::projgeom::Point;
use std::collections::BTreeMap;

/// Parameters of the five-part trace family of type q/4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub alpha: Fe,
    pub beta: Fe,
    pub a: u8,
    pub b: u8,
    gamma: Fe,
    xi: Fe,
}

impl FamilyParams {
    pub fn new(field: &Field, alpha: Fe, beta: Fe, a: u8, b: u8) -> Result<FamilyParams> {
        if !field.contains(alpha) || !field.contains(beta) {
            return Err(Error::BadParams("alpha or beta outside the field".into()));
        }
        if alpha.0 <= 1 || beta.0 <= 1 {
            return Err(Error::BadParams("alpha and beta must avoid 0 and 1".into()));
        }
        let ab = field.mul(alpha, beta);
        if ab == Fe::ONE {
            return Err(Error::BadParams("alpha * beta must differ from 1".into()));
        }
        if a > 1 || b > 1 {
            return Err(Error::BadParams("a and b are bits".into()));
        }
        let gamma = field.div(beta + Fe::ONE, ab + Fe::ONE)?;
        let xi = field.mul(ab, gamma);
        debug_assert_eq!(xi + beta + gamma, Fe::ONE);
        Ok(FamilyParams { alpha, beta, a, b, gamma, xi })
    }

    pub fn gamma(&self) -> Fe {
        self.gamma
    }

    pub fn xi(&self) -> Fe {
        self.xi
    }

    /// Every admissible tuple of the field, in a fixed order.
    pub fn all(field: &Field) -> Vec<FamilyParams> {
        let mut out = Vec::new();
        for alpha in field.elements().skip(2) {
            for beta in field.elements().skip(2) {
                for a in 0..2 {
                    for b in 0..2 {
                        if let Ok(p) = FamilyParams::new(field, alpha, beta, a, b) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

/// The five parts, on `Z=0`, `Y=0`, `Y=Z`, `Y=γZ` and `Y=(β+1)Z`.
pub fn new_family_parts(field: &Field, p: &FamilyParams) -> Result<[Vec<Point>; 5]> {
    if field.m() < 3 {
        return Err(Error::BadParams("need q >= 8".into()));
    }
    let tr = |x: Fe| field.abs_trace(x);
    let over = |z: Fe, d: Fe| field.abs_trace(field.div(z, d).expect("nonzero divisor"));
    let (al, ab) = (p.alpha, field.mul(p.alpha, p.beta));
    let ag = field.mul(p.alpha, p.gamma);
    let (a, b) = (p.a, p.b);
    let collect = |y: Fe, z: Fe, keep: &dyn Fn(Fe) -> bool| -> Vec<Point> {
        field.elements().filter(|&x| keep(x)).map(|x| Point::plane(field, x, y, z)).collect()
    };
    Ok([
        collect(Fe::ONE, Fe::ZERO, &|z| tr(z) == 0 && over(z, al) == a),
        collect(Fe::ZERO, Fe::ONE, &|z| tr(z) == 0 && over(z, ag) == 0),
        collect(Fe::ONE, Fe::ONE, &|z| tr(z) == 1 && over(z, ab) == b),
        collect(p.gamma, Fe::ONE, &|z| over(z, ag) == a ^ 1 && over(z, p.xi) == b ^ 1),
        collect(p.beta + Fe::ONE, Fe::ONE, &|z| over(z, ab) == a ^ b ^ 1 && over(z, p.xi) == b),
    ])
}

/// The five-part trace family; type q/4 with nucleus (1,0,0).
pub fn new_family(field: &Field, p: &FamilyParams) -> Result<KMArc> {
    let parts = new_family_parts(field, p)?;
    let quarter = (field.q() / 4) as usize;
    for (i, s) in parts.iter().enumerate() {
        if s.len() != quarter {
            return fail(VerifyFailure::PartSize { part: i, expected: quarter, actual: s.len() });
        }
    }
    let pts: Vec<Point> = parts.concat();
    let n = Point::plane(field, Fe::ONE, Fe::ZERO, Fe::ZERO);
    let arc = if quarter == 2 { verify_km_with_nucleus(field, &pts, n)? } else { verify_km(field, &pts)? };
    if arc.nucleus() != Some(n) {
        return fail(VerifyFailure::BadNucleus(n));
    }
    arc.expect_type(quarter)
}

/// The bit-condition construction of type q/4; coordinates are read in the
/// polynomial basis, so the modulus must lack the `x^{h-1}` and `x^{h-2}` terms.
pub fn vandendriessche(field: &Field, c: u8) -> Result<KMArc> {
    let h = field.m();
    if h < 3 || !field.spec().vdd_compatible {
        return Err(Error::BadField(format!(
            "modulus {} has a term of degree h-1 or h-2",
            field.spec().modulus_hex()
        )));
    }
    if c > 1 {
        return Err(Error::BadParams("c is a bit".into()));
    }
    let c = c as u32;
    let bit = |x: Fe, i: u32| x.bit(i) as u32;
    let low_sum = |x: Fe, top: u32| (0..=top).map(|i| bit(x, i)).sum::<u32>() & 1;
    let l = field.lambda();
    type Part<'a> = (Fe, Fe, Box<dyn Fn(Fe) -> bool + 'a>);
    let parts: [Part; 5] = [
        (Fe::ONE, Fe::ZERO, Box::new(|x| bit(x, h - 2) == 0 && bit(x, h - 3) == 1)),
        (Fe::ZERO, Fe::ONE, Box::new(|x| bit(x, h - 1) == 0 && bit(x, h - 2) == 1)),
        (Fe::ONE, Fe::ONE, Box::new(move |x| bit(x, h - 2) == 0 && low_sum(x, h - 3) == c)),
        (l, Fe::ONE, Box::new(move |x| bit(x, h - 1) ^ bit(x, h - 2) == 1 && low_sum(x, h - 3) == c)),
        (field.square(l), Fe::ONE, Box::new(move |x| bit(x, h - 1) == 0 && low_sum(x, h - 2) == c)),
    ];
    let mut pts = Vec::new();
    for (y, z, keep) in &parts {
        pts.extend(field.elements().filter(|&x| keep(x)).map(|x| Point::plane(field, x, *y, *z)));
    }
    let quarter = (field.q() / 4) as usize;
    let n = Point::plane(field, Fe::ONE, Fe::ZERO, Fe::ZERO);
    let arc = if quarter == 2 { verify_km_with_nucleus(field, &pts, n)? } else { verify_km(field, &pts)? };
    arc.expect_type(quarter)
}

/// An o-polynomial on a subfield, as a monomial `x^{2^n}` or an explicit table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OPolynomial {
    Monomial { n: u32 },
    Table(BTreeMap<Fe, Fe>),
}

impl OPolynomial {
    fn eval(&self, field: &Field, x: Fe) -> Fe {
        match self {
            OPolynomial::Monomial { n } => field.frobenius(x, *n),
            OPolynomial::Table(t) => t[&x],
        }
    }
}

/// Checks that `{(g(x), x, 1)} ∪ {(1,0,0), (0,1,0)}` is a hyperoval of the
/// subplane over F_{2^d}.
fn validate_opolynomial(field: &Field, g: &OPolynomial, d: u32) -> Result<()> {
    let sub = field.subfield_elements(d)?;
    if let OPolynomial::Table(t) = g {
        if t.len() != sub.len() || sub.iter().any(|x| t.get(x).is_none_or(|y| !field.in_subfield(*y, d))) {
            return Err(Error::BadParams(format!("table must map F_(2^{d}) into itself")));
        }
    }
    let mut pts: Vec<Point> = sub.iter().map(|&x| Point::plane(field, g.eval(field, x), x, Fe::ONE)).collect();
    pts.push(Point::plane(field, Fe::ONE, Fe::ZERO, Fe::ZERO));
    pts.push(Point::plane(field, Fe::ZERO, Fe::ONE, Fe::ZERO));
    match analyze(field, &pts, 1 << d, None) {
        Ok(s) if s.t == 2 => Ok(()),
        Ok(s) => Err(Error::NotOPolynomial(format!("graph has type {}", s.t))),
        Err(e) => Err(Error::NotOPolynomial(e.to_string())),
    }
}

/// Affine part `{(g(L(x)), x, 1)}` with L the relative trace onto
/// F_{2^{h-i}}, completed by its undetermined directions; type 2^i.
pub fn km_family(field: &Field, i: u32, g: &OPolynomial) -> Result<KMArc> {
    let h = field.m();
    if i == 0 || i >= h || !h.is_multiple_of(h - i) {
        return Err(Error::BadParams(format!("need 1 <= i < h with (h-i) | h, got i={i}, h={h}")));
    }
    let d = h - i;
    validate_opolynomial(field, g, d)?;
    let affine: Vec<Point> = field
        .elements()
        .map(|x| Ok(Point::plane(field, g.eval(field, field.trace(x, d)?), x, Fe::ONE)))
        .collect::<Result<_>>()?;
    let pts = complete_with_directions(field, &affine, h);
    let t = 1usize << i;
    let arc = if t == 2 {
        verify_km_with_nucleus(field, &pts, Point::plane(field, Fe::ONE, Fe::ZERO, Fe::ZERO))?
    } else {
        verify_km(field, &pts)?
    };
    arc.expect_type(t)
}

/// `{(1, x, x^{2^n})} ∪ {(0,1,0), (0,0,1)}`, a hyperoval when gcd(n, h) = 1.
pub fn translation_hyperoval(field: &Field, n: u32) -> Result<KMArc> {
    if gcd(n, field.m()) != 1 {
        return Err(Error::BadParams(format!("gcd(n, h) = gcd({n}, {}) != 1", field.m())));
    }
    let mut pts: Vec<Point> =
        field.elements().map(|x| Point::plane(field, Fe::ONE, x, field.frobenius(x, n))).collect();
    pts.push(Point::plane(field, Fe::ZERO, Fe::ONE, Fe::ZERO));
    pts.push(Point::plane(field, Fe::ZERO, Fe::ZERO, Fe::ONE));
    verify_km(field, &pts)?.expect_type(2)
}
