//! Finite-dimensional unitary representations given by generator images.

mod commutant;
mod induce;
pub mod json;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use commutant::{
    commutant, decompose, equivalent, intertwiners, is_irreducible, unitarize_intertwiner,
    Decomposition, IntertwinerSpace,
};
pub use induce::{induce, restrict};

use crate::error::{Error, Result};
use crate::group::{relation_checklist, Element, Generator, VaGroup, Word};
use crate::numeric::{self, CMat};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub unitarity_tol: f64,
    pub relation_tol: f64,
    /// Relative to the largest singular value.
    pub rank_tol: f64,
    pub equality_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            unitarity_tol: 1e-9,
            relation_tol: 1e-9,
            rank_tol: 1e-7,
            equality_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [self.unitarity_tol, self.relation_tol, self.rank_tol, self.equality_tol];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(Error::input("tolerances must be positive and finite"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_unitarity_residual: f64,
    pub max_relation_residual: f64,
    /// The checklist item with the largest residual, if any.
    pub worst_relation: Option<String>,
    pub passed: bool,
}

/// A homomorphism from a [`VaGroup`] to U(n), stored as the images of the
/// lattice basis and of the lifts `(0, q)`.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    group: Arc<VaGroup>,
    n: usize,
    lattice: Vec<CMat>,
    /// Indexed by point group element; entry 0 is the identity.
    lifts: Vec<CMat>,
    tol: ToleranceConfig,
    verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CombineMode {
    Sum,
    Tensor,
}

impl UnitaryRep {
    /// Shape-checked but unverified; most operations refuse such a rep until
    /// [`UnitaryRep::verified`] succeeds.
    pub fn from_parts(
        group: Arc<VaGroup>,
        n: usize,
        lattice: Vec<CMat>,
        lifts_nonidentity: Vec<CMat>,
    ) -> Result<Self> {
        if lattice.len() != group.rank() {
            return Err(Error::DimensionMismatch {
                expected: group.rank(),
                found: lattice.len(),
            });
        }
        if lifts_nonidentity.len() + 1 != group.q_order() {
            return Err(Error::DimensionMismatch {
                expected: group.q_order() - 1,
                found: lifts_nonidentity.len(),
            });
        }
        for m in lattice.iter().chain(&lifts_nonidentity) {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if m.nrows() != n { m.nrows() } else { m.ncols() },
                });
            }
            if m.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                return Err(Error::input("matrix entries must be finite"));
            }
        }
        let mut lifts = vec![numeric::eye(n)];
        lifts.extend(lifts_nonidentity);
        Ok(UnitaryRep {
            group,
            n,
            lattice,
            lifts,
            tol: ToleranceConfig::default(),
            verified: false,
        })
    }

    /// Builds and verifies with default tolerances.
    pub fn new(group: Arc<VaGroup>, lattice: Vec<CMat>, lifts_nonidentity: Vec<CMat>) -> Result<Self> {
        let n = lattice
            .first()
            .or(lifts_nonidentity.first())
            .map_or(0, |m| m.nrows());
        Self::from_parts(group, n, lattice, lifts_nonidentity)?.verified(ToleranceConfig::default())
    }

    pub fn verified(mut self, tol: ToleranceConfig) -> Result<Self> {
        tol.validate()?;
        self.tol = tol;
        let report = self.verify();
        if !report.passed {
            return Err(Error::Unverified(format!(
                "unitarity residual {:.3e}, relation residual {:.3e}{}",
                report.max_unitarity_residual,
                report.max_relation_residual,
                report
                    .worst_relation
                    .map(|r| format!(" at {r}"))
                    .unwrap_or_default()
            )));
        }
        self.verified = true;
        Ok(self)
    }

    /// Trivial representation `I_n`.
    pub fn trivial(group: Arc<VaGroup>, n: usize) -> Self {
        let lattice = vec![numeric::eye(n); group.rank()];
        let lifts = vec![numeric::eye(n); group.q_order() - 1];
        Self::from_parts(group, n, lattice, lifts)
            .and_then(|r| r.verified(ToleranceConfig::default()))
            .expect("identity matrices satisfy every relation")
    }

    pub fn group(&self) -> &VaGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<VaGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn tolerances(&self) -> &ToleranceConfig {
        &self.tol
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn lattice_image(&self, i: usize) -> &CMat {
        &self.lattice[i]
    }

    pub fn lattice_images(&self) -> &[CMat] {
        &self.lattice
    }

    /// Image of `(0, q)`.
    pub fn lift_image(&self, q: usize) -> &CMat {
        &self.lifts[q]
    }

    /// Lattice images, then lifts of the non-identity point group elements.
    pub fn generator_images(&self) -> Vec<&CMat> {
        self.lattice.iter().chain(self.lifts.iter().skip(1)).collect()
    }

    pub fn with_tolerances(mut self, tol: ToleranceConfig) -> Self {
        self.tol = tol;
        self
    }

    fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::Unverified("representation has not been verified".into()))
        }
    }

    pub(crate) fn generator(&self, g: Generator) -> &CMat {
        match g {
            Generator::Lattice(i) => &self.lattice[i],
            Generator::Lift(q) => &self.lifts[q],
        }
    }

    pub(crate) fn eval_word(&self, w: &Word) -> CMat {
        let mut out = numeric::eye(self.n);
        for &(g, e) in &w.0 {
            out = out * numeric::unitary_power(self.generator(g), e);
        }
        out
    }

    /// `(∏ A_i^{v_i}) U_q` for `x = (v, q)`.
    pub fn evaluate(&self, x: &Element) -> Result<CMat> {
        self.require_verified()?;
        self.group.check_element(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Element) -> CMat {
        let mut out = numeric::eye(self.n);
        for (i, &e) in x.v.iter().enumerate() {
            if e != 0 {
                out = out * numeric::unitary_power(&self.lattice[i], e);
            }
        }
        out * &self.lifts[x.q]
    }

    pub fn character(&self, x: &Element) -> Result<num_complex::Complex64> {
        Ok(self.evaluate(x)?.trace())
    }

    /// Never fails; a malformed rep simply does not pass.
    pub fn verify(&self) -> VerificationReport {
        let max_u = self
            .generator_images()
            .iter()
            .map(|m| numeric::unitarity_residual(m))
            .fold(0.0, f64::max);
        let mut max_r = 0.0f64;
        let mut worst = None;
        for rel in relation_checklist(&self.group) {
            let r = numeric::dist(&self.eval_word(&rel.lhs), &self.eval_word(&rel.rhs));
            if r > max_r || (worst.is_none() && r.is_nan()) {
                max_r = r;
                worst = Some(rel.to_string());
            }
        }
        let passed = max_u.is_finite()
            && max_r.is_finite()
            && max_u <= self.tol.unitarity_tol
            && max_r <= self.tol.relation_tol;
        VerificationReport {
            max_unitarity_residual: max_u,
            max_relation_residual: max_r,
            worst_relation: worst,
            passed,
        }
    }

    /// Same group and tolerances, new matrices; verified.
    pub(crate) fn rebuild(&self, lattice: Vec<CMat>, lifts_nonidentity: Vec<CMat>) -> Result<Self> {
        let n = lattice.first().or(lifts_nonidentity.first()).map_or(0, |m| m.nrows());
        Self::from_parts(self.group.clone(), n, lattice, lifts_nonidentity)?.verified(self.tol)
    }

    pub(crate) fn map_images(&self, f: impl Fn(&CMat) -> CMat) -> Result<Self> {
        self.rebuild(
            self.lattice.iter().map(&f).collect(),
            self.lifts.iter().skip(1).map(&f).collect(),
        )
    }

    /// `V ρ V⁻¹` for unitary `V`.
    pub fn conjugate(&self, v: &CMat) -> Result<Self> {
        self.require_verified()?;
        if v.nrows() != self.n || v.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.nrows(),
            });
        }
        if numeric::unitarity_residual(v) > self.tol.unitarity_tol {
            return Err(Error::input("conjugating matrix is not unitary"));
        }
        let vh = v.adjoint();
        self.map_images(|m| v * m * &vh)
    }

    pub fn combine(&self, other: &UnitaryRep, mode: CombineMode) -> Result<Self> {
        self.require_verified()?;
        other.require_verified()?;
        if self.group != other.group {
            return Err(Error::input("cannot combine representations of different groups"));
        }
        let pair = |a: &CMat, b: &CMat| match mode {
            CombineMode::Sum => numeric::block_diag(&[a, b]),
            CombineMode::Tensor => numeric::kron(a, b),
        };
        self.rebuild(
            self.lattice.iter().zip(&other.lattice).map(|(a, b)| pair(a, b)).collect(),
            self.lifts.iter().zip(&other.lifts).skip(1).map(|(a, b)| pair(a, b)).collect(),
        )
    }

    pub fn direct_sum(&self, other: &UnitaryRep) -> Result<Self> {
        self.combine(other, CombineMode::Sum)
    }

    pub fn tensor(&self, other: &UnitaryRep) -> Result<Self> {
        self.combine(other, CombineMode::Tensor)
    }

    /// Largest entrywise distance between generator images.
    pub fn distance(&self, other: &UnitaryRep) -> f64 {
        if self.n != other.n || self.group != other.group {
            return f64::INFINITY;
        }
        self.generator_images()
            .iter()
            .zip(other.generator_images())
            .map(|(a, b)| numeric::dist(a, b))
            .fold(0.0, f64::max)
    }
}
