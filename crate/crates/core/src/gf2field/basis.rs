//! Alternative F2-bases of F_{2^m}.

use super::{Fe, Field};
use crate::bitlin::LinMap;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Polynomial,
    Normal,
    Custom,
}

/// Change of coordinates between a chosen F2-basis and the polynomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMap {
    pub kind: BasisKind,
    /// Column `j` is basis vector `j` in polynomial coordinates.
    pub matrix: LinMap,
    inverse: LinMap,
}

impl BasisMap {
    pub fn polynomial(m: u32) -> BasisMap {
        let id = LinMap::identity(m as usize);
        BasisMap { kind: BasisKind::Polynomial, matrix: id.clone(), inverse: id }
    }

    /// Basis given by explicit vectors; they must be F2-independent.
    pub fn custom(field: &Field, vectors: &[Fe]) -> Result<BasisMap> {
        Self::with_kind(field, vectors, BasisKind::Custom)
    }

    fn with_kind(field: &Field, vectors: &[Fe], kind: BasisKind) -> Result<BasisMap> {
        if vectors.len() != field.m() as usize {
            return Err(Error::BadParams(format!(
                "basis needs {} vectors, got {}",
                field.m(),
                vectors.len()
            )));
        }
        let matrix = LinMap { n: vectors.len(), cols: vectors.iter().map(|v| v.0).collect() };
        let inverse = matrix
            .inverse()
            .ok_or_else(|| Error::BadParams("basis vectors are dependent over F2".into()))?;
        Ok(BasisMap { kind, matrix, inverse })
    }

    pub fn vectors(&self) -> Vec<Fe> {
        self.matrix.cols.iter().map(|&c| Fe(c)).collect()
    }

    /// Coordinates of `v` in this basis.
    pub fn to_custom(&self, v: Fe) -> u64 {
        self.inverse.apply(v.0)
    }

    pub fn from_custom(&self, coords: u64) -> Fe {
        Fe(self.matrix.apply(coords))
    }
}

/// First `ω` (in increasing bit order) whose conjugates form a basis.
pub fn find_normal_basis(field: &Field) -> BasisMap {
    let m = field.m();
    for w in field.nonzero() {
        let conj: Vec<Fe> = (0..m).map(|k| field.frobenius(w, k)).collect();
        if let Ok(b) = BasisMap::with_kind(field, &conj, BasisKind::Normal) {
            return b;
        }
    }
    unreachable!("every finite field extension has a normal basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitlin::rank;

    #[test]
    fn normal_basis_f4_is_lambda() {
        let f = Field::canonical(2).unwrap();
        let b = find_normal_basis(&f);
        assert_eq!(b.vectors(), vec![f.lambda(), f.square(f.lambda())]);
    }

    #[test]
    fn normal_bases_have_full_rank_and_round_trip() {
        for m in 2..=10 {
            let f = Field::canonical(m).unwrap();
            let b = find_normal_basis(&f);
            assert_eq!(b.kind, BasisKind::Normal);
            let cols: Vec<u64> = b.vectors().iter().map(|v| v.0).collect();
            assert_eq!(rank(&cols), m as usize);
            let w = b.vectors()[0];
            for (k, v) in b.vectors().iter().enumerate() {
                assert_eq!(*v, f.frobenius(w, k as u32));
            }
            for v in f.elements() {
                assert_eq!(b.from_custom(b.to_custom(v)), v);
            }
            for c in 0..f.q() {
                assert_eq!(b.to_custom(b.from_custom(c)), c);
            }
        }
    }

    #[test]
    fn dependent_vectors_rejected() {
        let f = Field::canonical(3).unwrap();
        assert!(BasisMap::custom(&f, &[Fe(1), Fe(2), Fe(3)]).is_err());
        assert!(BasisMap::custom(&f, &[Fe(1), Fe(2), Fe(5)]).is_ok());
    }
}
