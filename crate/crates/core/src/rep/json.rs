//! JSON exchange format.
//!
//! A complex matrix is an array of rows, each entry `[re, im]`. A
//! representation is
//!
//! ```json
//! {"group_ref": "gamma-k:1", "n": 2,
//!  "lattice_images": [M_1, ..., M_k],
//!  "lift_images": {"1": U_1, ...}}
//! ```
//!
//! with one lift per non-identity point group element, keyed by its index.
//! Floats are written with shortest round-trip formatting, so parsing a
//! written rep reproduces it bit for bit.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ToleranceConfig, UnitaryRep};
use crate::error::{Error, Result};
use crate::group::VaGroup;
use crate::numeric::{c, CMat};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepJson {
    pub group_ref: String,
    pub n: usize,
    pub lattice_images: Vec<MatrixJson>,
    pub lift_images: BTreeMap<String, MatrixJson>,
}

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson, n: usize) -> Result<CMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::input(format!("expected a {n}x{n} matrix")));
    }
    Ok(CMat::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

impl UnitaryRep {
    pub fn to_json_value(&self) -> RepJson {
        RepJson {
            group_ref: self.group().name().to_string(),
            n: self.dim(),
            lattice_images: self.lattice_images().iter().map(matrix_to_json).collect(),
            lift_images: (1..self.group().q_order())
                .map(|q| (q.to_string(), matrix_to_json(self.lift_image(q))))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("rep serializes")
    }

    /// Parses and verifies against `group`.
    pub fn from_json_value(v: &RepJson, group: Arc<VaGroup>, tol: ToleranceConfig) -> Result<Self> {
        if v.lattice_images.len() != group.rank() {
            return Err(Error::DimensionMismatch {
                expected: group.rank(),
                found: v.lattice_images.len(),
            });
        }
        let lattice = v
            .lattice_images
            .iter()
            .map(|m| matrix_from_json(m, v.n))
            .collect::<Result<Vec<_>>>()?;
        let mut lifts = Vec::new();
        for q in 1..group.q_order() {
            let m = v
                .lift_images
                .get(&q.to_string())
                .ok_or_else(|| Error::input(format!("missing lift image for {q}")))?;
            lifts.push(matrix_from_json(m, v.n)?);
        }
        if v.lift_images.len() != group.q_order() - 1 {
            return Err(Error::input("unexpected keys in lift_images"));
        }
        UnitaryRep::from_parts(group, v.n, lattice, lifts)?.verified(tol)
    }

    pub fn from_json(s: &str, group: Arc<VaGroup>) -> Result<Self> {
        let v: RepJson = serde_json::from_str(s)?;
        Self::from_json_value(&v, group, ToleranceConfig::default())
    }
}
