//! Systems of trace equations `Tr(k_i x) = c_i` over F_{2^m}.

use crate::bitlin::{self, AffineSolution};
use crate::error::{Error, Result};
use crate::gf2field::{Fe, Field};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSystem {
    pub ks: Vec<Fe>,
    pub cs: Vec<u8>,
}

impl TraceSystem {
    pub fn new(field: &Field, ks: Vec<Fe>, cs: Vec<u8>) -> Result<TraceSystem> {
        if ks.len() != cs.len() {
            return Err(Error::BadParams(format!("{} coefficients but {} right-hand sides", ks.len(), cs.len())));
        }
        if let Some(k) = ks.iter().find(|&&k| !field.contains(k)) {
            return Err(Error::BadParams(format!("coefficient {} is outside the field", k.to_hex())));
        }
        if cs.iter().any(|&c| c > 1) {
            return Err(Error::BadParams("right-hand sides must be bits".into()));
        }
        Ok(TraceSystem { ks, cs })
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    /// Number of solutions: `q / 2^rank` when consistent, else 0.
    ///
    /// Eliminates on the coefficients themselves, carrying the right-hand
    /// side along; a row whose coefficient vanishes with right-hand side 1 is
    /// a contradiction.
    pub fn count(&self, field: &Field) -> u128 {
        let mut rows: Vec<(u64, u8)> = self.ks.iter().map(|k| k.0).zip(self.cs.iter().copied()).collect();
        let mut rank = 0;
        for bit in 0..field.m() {
            let Some(found) = (rank..rows.len()).find(|&i| rows[i].0 >> bit & 1 == 1) else {
                continue;
            };
            rows.swap(rank, found);
            let (pk, pc) = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row.0 >> bit & 1 == 1 {
                    row.0 ^= pk;
                    row.1 ^= pc;
                }
            }
            rank += 1;
        }
        if rows[rank..].iter().any(|&(_, c)| c == 1) {
            return 0;
        }
        1u128 << (field.m() as usize - rank)
    }

    /// Solution set as an affine F2-subspace of bit vectors, via the rows
    /// `(Tr(k e_0), ..., Tr(k e_{m-1}))` of each functional.
    pub fn solution_space(&self, field: &Field) -> Option<AffineSolution> {
        let m = field.m() as usize;
        let eqs: Vec<(u64, bool)> = self
            .ks
            .iter()
            .zip(&self.cs)
            .map(|(&k, &c)| {
                let row = (0..m).fold(0u64, |acc, i| acc | (field.abs_trace(field.mul(k, Fe(1 << i))) as u64) << i);
                (row, c == 1)
            })
            .collect();
        bitlin::solve_affine(&eqs, m)
    }

    /// Every solution, sorted.
    pub fn solve(&self, field: &Field) -> Result<Vec<Fe>> {
        if field.m() > 30 {
            return Err(Error::TooLarge(format!("solution listing at q = 2^{}", field.m())));
        }
        let mut out: Vec<Fe> = self.solution_space(field).map(|s| s.elements()).unwrap_or_default().into_iter().map(Fe).collect();
        out.sort();
        Ok(out)
    }

    /// Count by testing every field element.
    pub fn brute_count(&self, field: &Field) -> Result<u128> {
        if field.m() > 20 {
            return Err(Error::TooLarge(format!("brute force at q = 2^{}", field.m())));
        }
        Ok(field.elements().filter(|&x| self.holds(field, x)).count() as u128)
    }

    pub fn holds(&self, field: &Field, x: Fe) -> bool {
        self.ks.iter().zip(&self.cs).all(|(&k, &c)| field.abs_trace(field.mul(k, x)) == c)
    }
}
