use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::intmat::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// Finitely generated abelian group `Z^free ⊕ ⊕ Z/torsion[i]`, torsion
/// listed in divisibility order, every entry greater than one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        let mut t: Vec<BigInt> = torsion.into_iter().filter(|x| !x.is_one()).collect();
        t.sort();
        AbelianInvariants { free_rank, torsion: t }
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: vec![] }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of `Z/2` summands.
    pub fn two_torsion_count(&self) -> usize {
        self.torsion.iter().filter(|t| **t == BigInt::from(2)).count()
    }

    /// Plain-ASCII rendering, e.g. `Z + (Z/2)^3`.
    pub fn ascii(&self) -> String {
        self.render("Z", " + ")
    }

    fn render(&self, z: &str, plus: &str) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(z.to_string()),
            r => parts.push(format!("{z}^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == t {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("{z}/{t}"));
            } else {
                parts.push(format!("({z}/{t})^{}", j - i));
            }
            i = j;
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(plus)
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("ℤ", " ⊕ "))
    }
}

/// Invariants of `Z^ambient_rank / column span of m`.
pub fn cokernel_invariants(m: &IntMatrix, ambient_rank: usize) -> Result<AbelianInvariants> {
    if m.rows() != ambient_rank {
        return Err(Error::DimensionMismatch {
            expected: ambient_rank,
            found: m.rows(),
        });
    }
    if m.cols() == 0 {
        return Ok(AbelianInvariants::free(ambient_rank));
    }
    let s = smith_normal_form(m);
    let torsion = s
        .diagonal()
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    Ok(AbelianInvariants::new(ambient_rank - s.rank, torsion))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_relator() {
        // <a, b | b a b^-1 = a^-1> abelianizes to relations 2a = 0
        let m = IntMatrix::from_rows(&[vec![2], vec![0]]);
        let inv = cokernel_invariants(&m, 2).unwrap();
        assert_eq!(inv, AbelianInvariants::new(1, vec![BigInt::from(2)]));
        assert_eq!(inv.to_string(), "ℤ ⊕ ℤ/2");
    }

    #[test]
    fn empty_relations_free() {
        let inv = cokernel_invariants(&IntMatrix::zeros(3, 0), 3).unwrap();
        assert_eq!(inv.ascii(), "Z^3");
    }

    #[test]
    fn ambient_mismatch_rejected() {
        assert!(cokernel_invariants(&IntMatrix::zeros(2, 1), 3).is_err());
    }

    #[test]
    fn grouped_rendering() {
        let inv = AbelianInvariants::new(1, vec![BigInt::from(2); 3]);
        assert_eq!(inv.ascii(), "Z + (Z/2)^3");
        assert_eq!(AbelianInvariants::trivial().to_string(), "0");
    }
}
