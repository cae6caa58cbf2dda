//! Arithmetic in binary fields F_{2^m}.
//!
//! Elements are bit vectors in the polynomial basis `1, λ, …, λ^{m-1}` where
//! `λ` is the residue of `x` modulo the field's modulus. Fields with
//! `m <= 16` multiply through log/antilog tables; larger fields fall back to
//! carry-less multiplication followed by shift-xor reduction.
//!
//! Subfield elements are ordinary elements of the big field that are fixed
//! by the appropriate power of Frobenius.

mod basis;
pub(crate) mod poly;

pub use basis::{find_normal_basis, BasisKind, BasisMap};
pub use poly::{is_irreducible, is_primitive};

use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

/// A field element as its polynomial-basis bit pattern.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Coordinate `i` in the polynomial basis.
    pub fn bit(self, i: u32) -> u8 {
        (self.0 >> i & 1) as u8
    }

    pub fn to_hex(self) -> String {
        format!("{:#x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Fe> {
        parse_hex(s).and_then(|v| {
            u64::try_from(v).map(Fe).map_err(|_| Error::BadParams(format!("element {s} exceeds 64 bits")))
        })
    }
}

pub(crate) fn parse_hex(s: &str) -> Result<u128> {
    let t = s.trim();
    let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u128::from_str_radix(digits, 16).map_err(|_| Error::BadParams(format!("not a hex value: {s:?}")))
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl std::ops::Add for Fe {
    type Output = Fe;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Fe) -> Fe {
        Fe(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Fe {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Fe) {
        self.0 ^= rhs.0;
    }
}

impl Serialize for Fe {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Fe {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Fe::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// A binary field described by its modulus polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub m: u32,
    /// Modulus bit pattern, bit `i` is the coefficient of `x^i`.
    pub modulus: u128,
    pub primitive: bool,
    pub vdd_compatible: bool,
}

impl FieldSpec {
    /// Validates an irreducible modulus and derives the flags.
    pub fn from_modulus(modulus: u128) -> Result<FieldSpec> {
        let m = poly::degree(modulus);
        if !(1..=64).contains(&m) {
            return Err(Error::BadParams(format!("modulus {modulus:#x} must have degree 1..=64")));
        }
        if !is_irreducible(modulus) {
            return Err(Error::BadParams(format!("modulus {modulus:#x} is reducible")));
        }
        let m = m as u32;
        Ok(FieldSpec {
            m,
            modulus,
            primitive: is_primitive(modulus),
            vdd_compatible: m >= 3 && modulus >> (m - 1) & 1 == 0 && modulus >> (m - 2) & 1 == 0,
        })
    }

    pub fn modulus_hex(&self) -> String {
        format!("{:#x}", self.modulus)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecJson {
    m: u32,
    modulus: String,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldSpecJson { m: self.m, modulus: self.modulus_hex() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FieldSpecJson::deserialize(d)?;
        let modulus = parse_hex(&raw.modulus).map_err(serde::de::Error::custom)?;
        let spec = FieldSpec::from_modulus(modulus).map_err(serde::de::Error::custom)?;
        if spec.m != raw.m {
            return Err(serde::de::Error::custom(format!(
                "declared degree {} does not match modulus {}",
                raw.m, raw.modulus
            )));
        }
        Ok(spec)
    }
}

/// Optional requirements for [`find_modulus`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ModulusConstraints {
    pub primitive: bool,
    /// Coefficients of `x^{m-1}` and `x^{m-2}` vanish.
    pub vdd_compatible: bool,
}

/// Smallest modulus (as an integer) of degree `m` meeting the constraints.
pub fn find_modulus(m: u32, c: ModulusConstraints) -> Result<FieldSpec> {
    if !(2..=64).contains(&m) {
        return Err(Error::BadParams(format!("degree {m} outside 2..=64")));
    }
    if c.vdd_compatible && m < 3 {
        return Err(Error::BadParams("vdd-compatible moduli need degree at least 3".into()));
    }
    let top = 1u128 << m;
    // Constant term 1 is forced, leaving 2^{m-1} candidates.
    for low in (1u128..top).step_by(2) {
        let f = top | low;
        if c.vdd_compatible && (f >> (m - 1) & 1 == 1 || f >> (m - 2) & 1 == 1) {
            continue;
        }
        if !is_irreducible(f) {
            continue;
        }
        if c.primitive && !is_primitive(f) {
            continue;
        }
        return FieldSpec::from_modulus(f);
    }
    Err(Error::NotFound(m))
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    spec: FieldSpec,
    mask: u64,
    lambda: Fe,
    trace_mask: u64,
    tables: Option<Tables>,
}

/// A binary field with precomputed helpers; cheap to clone and share.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.0.spec.m, self.0.spec.modulus)
    }
}

const TABLE_LIMIT: u32 = 16;

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        let m = spec.m;
        let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let lambda = Fe(poly::rem(2, spec.modulus) as u64);
        let mut inner = Inner { spec, mask, lambda, trace_mask: 0, tables: None };
        if m <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&spec));
        }
        let mut field = Field(Arc::new(inner));
        let mut trace_mask = 0u64;
        for j in 0..m {
            if field.trace_by_definition(Fe(1 << j), 1) == Fe::ONE {
                trace_mask |= 1 << j;
            }
        }
        Arc::get_mut(&mut field.0).expect("fresh field").trace_mask = trace_mask;
        field
    }

    /// The field with the smallest primitive modulus of degree `m`.
    pub fn canonical(m: u32) -> Result<Field> {
        Ok(Field::new(find_modulus(m, ModulusConstraints { primitive: true, vdd_compatible: false })?))
    }

    /// F2 itself, modulus `x + 1`.
    pub fn binary() -> Field {
        Field::new(FieldSpec::from_modulus(0b11).expect("x+1 is irreducible"))
    }

    pub fn from_modulus(modulus: u128) -> Result<Field> {
        Ok(Field::new(FieldSpec::from_modulus(modulus)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn m(&self) -> u32 {
        self.0.spec.m
    }

    /// Number of elements; only for `m < 64`.
    pub fn q(&self) -> u64 {
        assert!(self.m() < 64, "field order does not fit in u64");
        1u64 << self.m()
    }

    pub fn mask(&self) -> u64 {
        self.0.mask
    }

    /// Residue of `x`.
    pub fn lambda(&self) -> Fe {
        self.0.lambda
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 & !self.0.mask == 0
    }

    /// All elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q()).map(Fe)
    }

    /// Nonzero elements in increasing bit order.
    pub fn nonzero(&self) -> impl Iterator<Item = Fe> {
        (1..self.q()).map(Fe)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        a + b
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.0.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    Fe::ZERO
                } else {
                    let l = t.log[a.0 as usize] + t.log[b.0 as usize];
                    Fe(t.exp[l as usize] as u64)
                }
            }
            None => self.mul_reference(a, b),
        }
    }

    /// Schoolbook multiply-then-reduce; the table path is checked against it.
    pub fn mul_reference(&self, a: Fe, b: Fe) -> Fe {
        Fe(poly::mulmod(a.0, b.0, self.0.spec.modulus))
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut b = a;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.tables {
            Some(t) => {
                let order = (t.log.len() - 1) as u32;
                let l = t.log[a.0 as usize];
                Fe(t.exp[((order - l) % order) as usize] as u64)
            }
            None => self.pow(a, self.0.mask - 1),
        })
    }

    /// `a / b`, failing when `b = 0`.
    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(2^k)`; `k` is taken modulo `m`.
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        let k = k % self.m();
        if let (Some(t), false) = (&self.0.tables, a.is_zero()) {
            let order = (t.log.len() - 1) as u64;
            let l = (t.log[a.0 as usize] as u64 * (1u64 << k)) % order;
            return Fe(t.exp[l as usize] as u64);
        }
        let mut r = a;
        for _ in 0..k {
            r = self.square(r);
        }
        r
    }

    /// The unique square root, `a^(2^{m-1})`.
    pub fn sqrt(&self, a: Fe) -> Fe {
        self.frobenius(a, self.m() - 1)
    }

    fn trace_by_definition(&self, a: Fe, d: u32) -> Fe {
        let mut acc = Fe::ZERO;
        let mut cur = a;
        for _ in 0..self.m() / d {
            acc += cur;
            for _ in 0..d {
                cur = self.square(cur);
            }
        }
        acc
    }

    /// Relative trace onto the subfield F_{2^d}.
    pub fn trace(&self, a: Fe, d: u32) -> Result<Fe> {
        if d == 0 || !self.m().is_multiple_of(d) {
            return Err(Error::BadSubfield { d, m: self.m() });
        }
        if d == 1 {
            return Ok(Fe(self.abs_trace(a) as u64));
        }
        let r = self.trace_by_definition(a, d);
        debug_assert!(self.in_subfield(r, d));
        Ok(r)
    }

    /// Absolute trace as a bit.
    pub fn abs_trace(&self, a: Fe) -> u8 {
        ((a.0 & self.0.trace_mask).count_ones() & 1) as u8
    }

    pub fn in_subfield(&self, a: Fe, d: u32) -> bool {
        self.frobenius(a, d) == a
    }

    /// Elements of the subfield F_{2^d}, in increasing bit order.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<Fe>> {
        if d == 0 || !self.m().is_multiple_of(d) {
            return Err(Error::BadSubfield { d, m: self.m() });
        }
        if d == self.m() {
            return Ok(self.elements().collect());
        }
        let mut out = vec![Fe::ZERO];
        let g = self.generator();
        let order = self.0.mask;
        let step = order / ((1u64 << d) - 1);
        let h = self.pow(g, step);
        let mut cur = Fe::ONE;
        for _ in 0..((1u64 << d) - 1) {
            out.push(cur);
            cur = self.mul(cur, h);
        }
        out.sort();
        Ok(out)
    }

    /// A generator of the multiplicative group; `λ` when the modulus is primitive.
    pub fn generator(&self) -> Fe {
        if self.0.spec.primitive {
            return self.0.lambda;
        }
        if let Some(t) = &self.0.tables {
            return Fe(t.exp[1] as u64);
        }
        let order = self.0.mask;
        let primes = poly::factor::prime_divisors(order);
        (2..=order)
            .map(Fe)
            .find(|&g| primes.iter().all(|&p| self.pow(g, order / p) != Fe::ONE))
            .expect("multiplicative group is cyclic")
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        assert!(!a.is_zero());
        let n = self.0.mask;
        let mut ord = n;
        for p in poly::factor::prime_divisors(n) {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == Fe::ONE {
                ord /= p;
            }
        }
        ord
    }

    /// Evaluates a polynomial with coefficients given low degree first.
    pub fn eval_poly_bits(&self, poly_bits: u128, x: Fe) -> Fe {
        let deg = poly::degree(poly_bits);
        let mut acc = Fe::ZERO;
        for i in (0..=deg.max(0)).rev() {
            acc = self.mul(acc, x);
            if poly_bits >> i & 1 == 1 {
                acc += Fe::ONE;
            }
        }
        acc
    }
}

fn build_tables(spec: &FieldSpec) -> Tables {
    let q = 1usize << spec.m;
    let order = q - 1;
    let mul = |a: u64, b: u64| poly::mulmod(a, b, spec.modulus);
    let gen = if spec.primitive {
        poly::rem(2, spec.modulus) as u64
    } else {
        let primes = poly::factor::prime_divisors(order as u64);
        (1..q as u64)
            .find(|&g| {
                primes
                    .iter()
                    .all(|&p| poly::powmod(g, order as u64 / p, spec.modulus) != 1)
            })
            .expect("cyclic group")
    };
    let mut exp = vec![0u32; 2 * order];
    let mut log = vec![0u32; q];
    let mut cur = 1u64;
    for i in 0..order {
        exp[i] = cur as u32;
        exp[i + order] = cur as u32;
        log[cur as usize] = i as u32;
        cur = mul(cur, gen);
    }
    Tables { exp, log }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> Field {
        Field::from_modulus(0x13).unwrap()
    }

    #[test]
    fn modulus_examples() {
        let both = ModulusConstraints { primitive: true, vdd_compatible: true };
        assert_eq!(find_modulus(4, both).unwrap().modulus, 0x13);
        assert_eq!(find_modulus(5, both).unwrap().modulus, 0x25);
        let prim = ModulusConstraints { primitive: true, vdd_compatible: false };
        assert_eq!(find_modulus(2, prim).unwrap().modulus, 0x7);
        assert!(find_modulus(2, both).is_err());
        assert!(find_modulus(1, prim).is_err());
    }

    // Frozen output of an independent exhaustive search (trial-division
    // irreducibility, order by repeated multiplication).
    const GOLDEN: [(u32, u128, u128, u128); 15] = [
        (2, 0x7, 0x7, 0),
        (3, 0xb, 0xb, 0),
        (4, 0x13, 0x13, 0x13),
        (5, 0x25, 0x25, 0x25),
        (6, 0x43, 0x43, 0x43),
        (7, 0x83, 0x83, 0x83),
        (8, 0x11b, 0x11d, 0x11d),
        (9, 0x203, 0x211, 0x211),
        (10, 0x409, 0x409, 0x409),
        (11, 0x805, 0x805, 0x805),
        (12, 0x1009, 0x1053, 0x1053),
        (13, 0x201b, 0x201b, 0x201b),
        (14, 0x4021, 0x402b, 0x402b),
        (15, 0x8003, 0x8003, 0x8003),
        (16, 0x1002b, 0x1002d, 0x1002d),
    ];

    #[test]
    fn modulus_golden_regression() {
        for (m, plain, prim, vdd) in GOLDEN {
            let c = |p, v| ModulusConstraints { primitive: p, vdd_compatible: v };
            assert_eq!(find_modulus(m, c(false, false)).unwrap().modulus, plain, "m={m}");
            assert_eq!(find_modulus(m, c(true, false)).unwrap().modulus, prim, "m={m}");
            if m == 3 {
                assert_eq!(find_modulus(3, c(true, true)), Err(Error::NotFound(3)));
            } else if m > 3 {
                let s = find_modulus(m, c(true, true)).unwrap();
                assert_eq!(s.modulus, vdd, "m={m}");
                assert!(s.vdd_compatible && s.primitive);
            }
        }
    }

    #[test]
    fn large_degree_moduli() {
        let s = find_modulus(64, ModulusConstraints { primitive: true, vdd_compatible: false }).unwrap();
        assert_eq!(s.m, 64);
        let f = Field::new(s);
        let a = Fe(0xdead_beef_1234_5678);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
        assert_eq!(f.sqrt(f.square(a)), a);
    }

    #[test]
    fn multiplication_example() {
        let f = f16();
        let l = f.lambda();
        assert_eq!(f.mul(l, f.pow(l, 3)), Fe(0b11));
        assert_eq!(f.inv(Fe::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn tables_agree_with_reference_multiplication() {
        for modulus in [0b11u128, 0x7, 0xb, 0x13, 0x1f, 0x25, 0x11b, 0x11d] {
            let f = Field::from_modulus(modulus).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_reference(a, b));
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                }
                assert_eq!(f.sqrt(f.square(a)), a);
                assert_eq!(f.frobenius(a, 2), f.pow(a, 4));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for m in 2..=5 {
            let f = Field::canonical(m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_properties() {
        let f = f16();
        assert_eq!(f.trace(Fe::ONE, 1).unwrap(), Fe::ZERO);
        assert_eq!(f.elements().filter(|&x| f.abs_trace(x) == 0).count(), 8);
        assert_eq!(f.trace(Fe(3), 3), Err(Error::BadSubfield { d: 3, m: 4 }));
        let sub = f.subfield_elements(2).unwrap();
        assert_eq!(sub.len(), 4);
        for a in f.elements() {
            assert_eq!(Fe(f.abs_trace(a) as u64), f.trace_by_definition(a, 1));
            let t = f.trace(a, 2).unwrap();
            assert!(sub.contains(&t));
            for &c in &sub {
                assert_eq!(f.trace(f.mul(c, a), 2).unwrap(), f.mul(c, t));
            }
            for b in f.elements() {
                assert_eq!(f.trace(a + b, 2).unwrap(), t + f.trace(b, 2).unwrap());
            }
        }
    }

    #[test]
    fn trace_is_balanced() {
        for m in 2..=12 {
            let f = Field::new(find_modulus(m, ModulusConstraints::default()).unwrap());
            let zeros = f.elements().filter(|&x| f.abs_trace(x) == 0).count() as u64;
            assert_eq!(zeros, f.q() / 2);
        }
    }

    #[test]
    fn non_primitive_modulus_still_works() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5.
        let f = Field::from_modulus(0x1f).unwrap();
        assert!(!f.spec().primitive);
        assert_eq!(f.order(f.lambda()), 5);
        assert_eq!(f.order(f.generator()), 15);
    }

    #[test]
    fn serde_round_trip() {
        let s = find_modulus(5, ModulusConstraints::default()).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"m":5,"modulus":"0x25"}"#);
        let back: FieldSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&Fe(9)).unwrap(), r#""0x9""#);
        assert!(serde_json::from_str::<FieldSpec>(r#"{"m":4,"modulus":"0x25"}"#).is_err());
    }
}
