//! Discretized paths in representation spaces, and explicit witnesses that
//! `m·ρ` lies in the component of the trivial representation.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{lattice_subgroup, IntermediateSubgroup, VaGroup};
use crate::numeric::{self, CMat};
use crate::rep::json::RepJson;
use crate::rep::{equivalent, induce, intertwiners, restrict, unitarize_intertwiner, UnitaryRep};

pub const DEFAULT_STEPS: usize = 200;
pub const SAMPLE_RESIDUAL_BOUND: f64 = 1e-6;
pub const STEP_BOUND: f64 = 0.2;
pub const ENDPOINT_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct RepPath {
    pub samples: Vec<UnitaryRep>,
    pub max_relation_residual: f64,
    /// Largest operator-norm move of a generator image between consecutive samples.
    pub max_step_distance: f64,
}

fn step_distance(a: &UnitaryRep, b: &UnitaryRep) -> f64 {
    a.generator_images()
        .iter()
        .zip(b.generator_images())
        .map(|(x, y)| numeric::op_norm(&(*x - y)))
        .fold(0.0, f64::max)
}

impl RepPath {
    pub fn new(samples: Vec<UnitaryRep>) -> Result<Self> {
        let first = samples.first().ok_or_else(|| Error::input("a path needs at least one sample"))?;
        if samples.iter().any(|s| s.group() != first.group() || s.dim() != first.dim()) {
            return Err(Error::input("path samples must share group and dimension"));
        }
        let max_relation_residual = samples
            .iter()
            .map(|s| s.verify().max_relation_residual)
            .fold(0.0, f64::max);
        let max_step_distance = samples
            .windows(2)
            .map(|w| step_distance(&w[0], &w[1]))
            .fold(0.0, f64::max);
        Ok(RepPath {
            samples,
            max_relation_residual,
            max_step_distance,
        })
    }

    pub fn constant(rho: &UnitaryRep) -> Self {
        RepPath::new(vec![rho.clone()]).expect("one sample")
    }

    pub fn start(&self) -> &UnitaryRep {
        &self.samples[0]
    }

    pub fn end(&self) -> &UnitaryRep {
        self.samples.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut p = self.clone();
        p.samples.reverse();
        p
    }

    /// Joins two paths; the junction samples must agree within [`ENDPOINT_TOL`].
    pub fn concat(&self, other: &RepPath) -> Result<Self> {
        let gap = self.end().distance(other.start());
        if !(gap <= ENDPOINT_TOL) {
            return Err(Error::Tolerance(format!("paths do not meet (junction gap {gap:.3e})")));
        }
        let mut samples = self.samples.clone();
        samples.extend(other.samples.iter().skip(1).cloned());
        RepPath::new(samples)
    }

    /// Samplewise `f`.
    pub fn map(&self, f: impl Fn(&UnitaryRep) -> Result<UnitaryRep>) -> Result<Self> {
        RepPath::new(self.samples.iter().map(f).collect::<Result<_>>()?)
    }

    /// Samplewise direct sum of paths of equal length.
    pub fn direct_sum(&self, other: &RepPath) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::input("direct sum of paths needs equal sample counts"));
        }
        RepPath::new(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a.direct_sum(b))
                .collect::<Result<_>>()?,
        )
    }

    pub fn to_json_value(&self) -> PathJson {
        PathJson {
            group: self.start().group().name().to_string(),
            dim: self.start().dim(),
            max_relation_residual: self.max_relation_residual,
            max_step_distance: self.max_step_distance,
            samples: self.samples.iter().map(|s| s.to_json_value()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathJson {
    pub group: String,
    pub dim: usize,
    pub max_relation_residual: f64,
    pub max_step_distance: f64,
    pub samples: Vec<RepJson>,
}

/// `t ↦ exp(tL) ρ exp(-tL)` with `L` the principal logarithm of `V`.
pub fn path_conjugation(rho: &UnitaryRep, v: &CMat, steps: usize) -> Result<RepPath> {
    if !rho.is_verified() {
        return Err(Error::Unverified("representation has not been verified".into()));
    }
    if steps == 0 {
        return Err(Error::input("a path needs at least one step"));
    }
    if v.nrows() != rho.dim() || v.ncols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: v.nrows(),
        });
    }
    if numeric::unitarity_residual(v) > rho.tolerances().unitarity_tol {
        return Err(Error::input("conjugating matrix is not unitary"));
    }
    let (w, thetas) = numeric::unitary_eigen(v)?;
    let mut samples = vec![rho.clone()];
    for j in 1..=steps {
        let t = j as f64 / steps as f64;
        let u = numeric::nearest_unitary(&numeric::unitary_fractional_power(&w, &thetas, t));
        samples.push(rho.conjugate(&u)?);
    }
    RepPath::new(samples)
}

/// Joint eigenbasis of commuting unitaries with columns sorted by angle tuple,
/// and the angles.
fn sorted_joint_diagonalization(images: &[CMat]) -> Result<(CMat, Vec<Vec<f64>>)> {
    let n = images.first().map_or(0, |m| m.nrows());
    let hs: Vec<CMat> = images
        .iter()
        .flat_map(|a| [numeric::hermitian_part(a), numeric::anti_hermitian_part(a)])
        .collect();
    let w = numeric::nearest_unitary(&numeric::joint_eigenbasis(&hs, 1e-9));
    let mut cols: Vec<(Vec<f64>, usize)> = (0..n)
        .map(|i| {
            let angles = images
                .iter()
                .map(|a| {
                    let z = (w.adjoint() * a * &w)[(i, i)];
                    let t = z.arg();
                    if t <= -std::f64::consts::PI + 1e-15 {
                        std::f64::consts::PI
                    } else {
                        t
                    }
                })
                .collect();
            (angles, i)
        })
        .collect();
    cols.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });
    let sorted = CMat::from_fn(n, n, |r, c| w[(r, cols[c].1)]);
    let back_err = images
        .iter()
        .enumerate()
        .map(|(g, a)| {
            let d: Vec<Complex64> = cols.iter().map(|(ang, _)| numeric::cis(ang[g])).collect();
            numeric::dist(&(&sorted * numeric::diag(&d) * sorted.adjoint()), a)
        })
        .fold(0.0, f64::max);
    if back_err > 1e-8 {
        return Err(Error::Tolerance(format!(
            "simultaneous diagonalization residual {back_err:.3e}; images may not commute"
        )));
    }
    Ok((sorted, cols.into_iter().map(|c| c.0).collect()))
}

fn wrap_angle(t: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut x = t.rem_euclid(two_pi);
    if x > std::f64::consts::PI {
        x -= two_pi;
    }
    x
}

/// Path of commuting tuples: conjugate to sorted diagonal form, move each
/// eigenangle along its shortest arc, conjugate back.
fn commuting_tuple_path(start: &[CMat], end: &[CMat], steps: usize) -> Result<Vec<Vec<CMat>>> {
    if start.len() != end.len() || start.iter().zip(end).any(|(a, b)| a.shape() != b.shape()) {
        return Err(Error::input("endpoint tuples differ in shape"));
    }
    let (w0, a0) = sorted_joint_diagonalization(start)?;
    let (w1, a1) = sorted_joint_diagonalization(end)?;
    let (wv0, th0) = numeric::unitary_eigen(&w0.adjoint())?;
    let (wv1, th1) = numeric::unitary_eigen(&w1)?;
    let conj = |u: &CMat, tuple: &[CMat]| -> Vec<CMat> { tuple.iter().map(|a| u * a * u.adjoint()).collect() };
    let mut out = vec![start.to_vec()];
    for j in 1..=steps {
        let u = numeric::unitary_fractional_power(&wv0, &th0, j as f64 / steps as f64);
        out.push(conj(&numeric::nearest_unitary(&u), start));
    }
    let diag_at = |s: f64| -> Vec<CMat> {
        (0..start.len())
            .map(|g| {
                let d: Vec<Complex64> = a0
                    .iter()
                    .zip(&a1)
                    .map(|(x, y)| numeric::cis(x[g] + s * wrap_angle(y[g] - x[g])))
                    .collect();
                numeric::diag(&d)
            })
            .collect()
    };
    for j in 1..=steps {
        out.push(diag_at(j as f64 / steps as f64));
    }
    let d1 = diag_at(1.0);
    for j in 1..=steps {
        let u = numeric::unitary_fractional_power(&wv1, &th1, j as f64 / steps as f64);
        out.push(conj(&numeric::nearest_unitary(&u), &d1));
    }
    Ok(out)
}

/// Path between two representations of a lattice group.
pub fn path_abelian(rho0: &UnitaryRep, rho1: &UnitaryRep, steps: usize) -> Result<RepPath> {
    if rho0.group().q_order() != 1 || rho0.group() != rho1.group() {
        return Err(Error::input("path_abelian needs two representations of the same lattice group"));
    }
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim(),
            found: rho1.dim(),
        });
    }
    if steps == 0 {
        return Err(Error::input("a path needs at least one step"));
    }
    let tuples = commuting_tuple_path(rho0.lattice_images(), rho1.lattice_images(), steps)?;
    let group = rho0.group_arc().clone();
    let mut samples: Vec<UnitaryRep> = tuples
        .into_iter()
        .map(|t| UnitaryRep::new(group.clone(), t, vec![]))
        .collect::<Result<_>>()?;
    samples[0] = rho0.clone();
    RepPath::new(samples)
}

/// Samplewise induction from `H` to `G`.
pub fn induce_path(g: &Arc<VaGroup>, h: &IntermediateSubgroup, path: &RepPath) -> Result<RepPath> {
    path.map(|s| induce(g, h, s))
}

/// Conjugation path from `a` to `b` through a unitary intertwiner.
fn equivalence_path(a: &UnitaryRep, b: &UnitaryRep, rng: &mut ChaCha8Rng, steps: usize) -> Result<RepPath> {
    let space = intertwiners(a, b)?;
    if space.basis.is_empty() {
        return Err(Error::Tolerance("representations are not equivalent".into()));
    }
    let coeffs: Vec<Complex64> = (0..space.basis.len())
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let v = unitarize_intertwiner(a, b, &space.element(&coeffs))?;
    let path = path_conjugation(a, &v, steps)?;
    let gap = path.end().distance(b);
    if gap > a.tolerances().equality_tol {
        return Err(Error::Tolerance(format!("intertwiner misses its target by {gap:.3e}")));
    }
    Ok(path)
}

/// `Γ_k` representation trivial on the `-1` directions, given the image of the lift.
fn gamma_k_from_lift(g: &Arc<VaGroup>, u: &CMat) -> Result<UnitaryRep> {
    let n = u.nrows();
    let k = g.rank() - 1;
    let mut lattice = vec![numeric::eye(n); k];
    lattice.push(u * u);
    UnitaryRep::new(g.clone(), lattice, vec![u.clone()])
}

/// Path in the representations of `Γ_k` trivial on the `-1` directions, which
/// form `Hom(ℤ, U(n))` through the image of the lift.
fn gamma_k_lift_path(g: &Arc<VaGroup>, rho0: &UnitaryRep, rho1: &UnitaryRep, steps: usize) -> Result<RepPath> {
    let tuples = commuting_tuple_path(&[rho0.lift_image(1).clone()], &[rho1.lift_image(1).clone()], steps)?;
    let mut samples: Vec<UnitaryRep> = tuples
        .iter()
        .map(|t| gamma_k_from_lift(g, &t[0]))
        .collect::<Result<_>>()?;
    samples[0] = rho0.clone();
    RepPath::new(samples)
}

fn trivial_on_inverted(rho: &UnitaryRep, k: usize) -> bool {
    let id = numeric::eye(rho.dim());
    rho.lattice_images()[..k]
        .iter()
        .all(|a| numeric::dist(a, &id) <= rho.tolerances().equality_tol)
}

#[derive(Clone, Debug)]
pub struct StableTrivialization {
    pub multiplier: usize,
    pub path: RepPath,
    /// `(name, samples)` for each spliced segment, in order.
    pub segments: Vec<(String, usize)>,
}

fn segment<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Tolerance(format!("segment {name:?} failed: {e}")))
}

fn splice(acc: Option<RepPath>, name: &str, next: RepPath, segments: &mut Vec<(String, usize)>) -> Result<RepPath> {
    segments.push((name.to_string(), next.len()));
    let report = verify_path(&next, None);
    if !report.passed {
        return Err(Error::Tolerance(format!("segment {name:?} fails verification: {}", report.summary())));
    }
    match acc {
        None => Ok(next),
        Some(p) => segment(name, p.concat(&next)),
    }
}

/// An integer `m` and a verified path from `m·ρ` to the trivial representation.
///
/// Implemented for lattice groups (`m = 1`) and for the `Γ_k`. On `Γ_k` a
/// representation trivial on the `-1` directions is one of `ℤ` through the
/// lift, so `m = 1`; otherwise the chain
/// `2ρ ≅ ρ⊗I₂ ≃ ρ⊗Ind_A 1 ≅ Ind_A Res_A ρ ≃ Ind_A I_n ≅ n·Ind_A 1 ≃ I_{2n}`
/// gives `m = [Γ : A] = 2`.
pub fn stably_trivialize(rho: &UnitaryRep, seed: u64, steps: usize) -> Result<StableTrivialization> {
    if !rho.is_verified() {
        return Err(Error::Unverified("representation has not been verified".into()));
    }
    let g = rho.group_arc().clone();
    let n = rho.dim();
    let mut segments = Vec::new();
    if g.q_order() == 1 {
        let p = segment("abelian", path_abelian(rho, &UnitaryRep::trivial(g.clone(), n), steps))?;
        let path = splice(None, "abelian", p, &mut segments)?;
        return Ok(StableTrivialization {
            multiplier: 1,
            path,
            segments,
        });
    }
    let k = g
        .as_gamma_k()
        .ok_or_else(|| Error::Unsupported(format!("stable trivialization is implemented for Γ_k and ℤ^r, not {}", g.name())))?;
    let trivial = |d: usize| UnitaryRep::trivial(g.clone(), d);
    if trivial_on_inverted(rho, k) {
        let p = segment("lift", gamma_k_lift_path(&g, rho, &trivial(n), steps))?;
        let path = splice(None, "lift", p, &mut segments)?;
        return Ok(StableTrivialization {
            multiplier: 1,
            path,
            segments,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = lattice_subgroup(&g);
    let ind_one = segment("Ind 1", induce(&g, &a, &UnitaryRep::trivial(Arc::new(a.group.clone()), 1)))?;
    let psi_path = segment("Ind 1 to I", gamma_k_lift_path(&g, &ind_one, &trivial(2), steps))?;

    let two_rho = rho.direct_sum(rho)?;
    let rho_i2 = rho.tensor(&trivial(2))?;
    let mut path = splice(None, "2ρ ≅ ρ⊗I", segment("2ρ ≅ ρ⊗I", equivalence_path(&two_rho, &rho_i2, &mut rng, steps))?, &mut segments)?;

    let p = segment("ρ⊗I ≃ ρ⊗Ind 1", psi_path.reversed().map(|s| rho.tensor(s)))?;
    path = splice(Some(path), "ρ⊗I ≃ ρ⊗Ind 1", p, &mut segments)?;

    let res = restrict(rho, &a)?;
    let ind_res = induce(&g, &a, &res)?;
    let p = segment("projection formula", equivalence_path(path.end(), &ind_res, &mut rng, steps))?;
    path = splice(Some(path), "projection formula", p, &mut segments)?;

    let abelian = segment("Res ρ ≃ I", path_abelian(&res, &UnitaryRep::trivial(res.group_arc().clone(), n), steps))?;
    let p = segment("Ind Res ρ ≃ Ind I", induce_path(&g, &a, &abelian))?;
    path = splice(Some(path), "Ind Res ρ ≃ Ind I", p, &mut segments)?;

    let mut n_psi = ind_one.clone();
    let mut n_psi_path = psi_path.clone();
    for _ in 1..n {
        n_psi = n_psi.direct_sum(&ind_one)?;
        n_psi_path = n_psi_path.direct_sum(&psi_path)?;
    }
    let p = segment("Ind I ≅ n·Ind 1", equivalence_path(path.end(), &n_psi, &mut rng, steps))?;
    path = splice(Some(path), "Ind I ≅ n·Ind 1", p, &mut segments)?;
    path = splice(Some(path), "n·Ind 1 ≃ I", n_psi_path, &mut segments)?;
    Ok(StableTrivialization {
        multiplier: 2,
        path,
        segments,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub samples: usize,
    pub max_relation_residual: f64,
    pub max_unitarity_residual: f64,
    pub max_step_distance: f64,
    /// First sample failing verification, and first step over the bound.
    pub bad_sample: Option<usize>,
    pub bad_step: Option<usize>,
    pub start_mismatch: Option<f64>,
    pub end_mismatch: Option<f64>,
    pub passed: bool,
}

impl PathReport {
    pub fn summary(&self) -> String {
        format!(
            "samples {}, residual {:.3e}, step {:.3e}, bad sample {:?}, bad step {:?}",
            self.samples, self.max_relation_residual, self.max_step_distance, self.bad_sample, self.bad_step
        )
    }
}

/// Re-verifies every sample, the continuity bound and, when given, the endpoints.
pub fn verify_path(p: &RepPath, endpoints: Option<(&UnitaryRep, &UnitaryRep)>) -> PathReport {
    let mut max_r = 0.0f64;
    let mut max_u = 0.0f64;
    let mut bad_sample = None;
    for (i, s) in p.samples.iter().enumerate() {
        let r = s.verify();
        max_r = max_r.max(r.max_relation_residual);
        max_u = max_u.max(r.max_unitarity_residual);
        let ok = r.max_relation_residual < SAMPLE_RESIDUAL_BOUND && r.max_unitarity_residual < SAMPLE_RESIDUAL_BOUND;
        if !ok && bad_sample.is_none() {
            bad_sample = Some(i);
        }
    }
    let mut max_step = 0.0f64;
    let mut bad_step = None;
    for (i, w) in p.samples.windows(2).enumerate() {
        let d = step_distance(&w[0], &w[1]);
        max_step = max_step.max(d);
        if !(d < STEP_BOUND) && bad_step.is_none() {
            bad_step = Some(i);
        }
    }
    let (start_mismatch, end_mismatch) = match endpoints {
        Some((a, b)) => (Some(p.start().distance(a)), Some(p.end().distance(b))),
        None => (None, None),
    };
    let endpoints_ok = [start_mismatch, end_mismatch].iter().flatten().all(|&d| d < ENDPOINT_TOL);
    PathReport {
        samples: p.samples.len(),
        max_relation_residual: max_r,
        max_unitarity_residual: max_u,
        max_step_distance: max_step,
        bad_sample,
        bad_step,
        start_mismatch,
        end_mismatch,
        passed: bad_sample.is_none() && bad_step.is_none() && endpoints_ok && !p.samples.is_empty(),
    }
}

/// Endpoint check up to equivalence: the first sample is equivalent to
/// `m·ρ` and the last to the trivial representation.
pub fn endpoints_equivalent(t: &StableTrivialization, rho: &UnitaryRep, seed: u64) -> Result<bool> {
    let mut m_rho = rho.clone();
    for _ in 1..t.multiplier {
        m_rho = m_rho.direct_sum(rho)?;
    }
    let triv = UnitaryRep::trivial(rho.group_arc().clone(), m_rho.dim());
    Ok(equivalent(t.path.start(), &m_rho, seed)? && equivalent(t.path.end(), &triv, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::family_rep;
    use crate::numeric::{c, cis, diag, from_rows, haar_unitary};
    use std::f64::consts::PI;

    fn gamma(k: usize) -> Arc<VaGroup> {
        Arc::new(VaGroup::gamma_k(k).unwrap())
    }

    #[test]
    fn identity_conjugation_is_constant() {
        let rho = family_rep(1, &[c(0.0, 1.0)], cis(0.4)).unwrap();
        let p = path_conjugation(&rho, &numeric::eye(2), 10).unwrap();
        assert!(p.samples.iter().all(|s| s.distance(&rho) < 1e-14));
        assert!(verify_path(&p, Some((&rho, &rho))).passed);
    }

    #[test]
    fn conjugation_through_minus_one() {
        let rho = family_rep(1, &[c(0.0, 1.0)], cis(0.4)).unwrap();
        let v = diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let p = path_conjugation(&rho, &v, 50).unwrap();
        let target = rho.conjugate(&v).unwrap();
        let r = verify_path(&p, Some((&rho, &target)));
        assert!(r.passed && r.max_relation_residual < 1e-8, "{r:?}");
        let coarse = path_conjugation(&rho, &v, 25).unwrap();
        let ratio = coarse.max_step_distance / p.max_step_distance;
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn abelian_paths() {
        let z1 = Arc::new(VaGroup::free_abelian(1));
        let a = UnitaryRep::new(z1.clone(), vec![diag(&[c(0.0, 1.0)])], vec![]).unwrap();
        let b = UnitaryRep::trivial(z1, 1);
        let p = path_abelian(&a, &b, DEFAULT_STEPS).unwrap();
        // the quarter turn: angles move monotonically from π/2 to 0
        let angles: Vec<f64> = p.samples.iter().map(|s| s.lattice_image(0)[(0, 0)].arg()).collect();
        assert!((angles[0] - PI / 2.0).abs() < 1e-12 && angles.last().unwrap().abs() < 1e-12);
        assert!(angles.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(verify_path(&p, Some((&a, &b))).passed);

        let z2 = Arc::new(VaGroup::free_abelian(2));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = haar_unitary(&mut rng, 2);
        let d1 = diag(&[cis(0.3), cis(-2.0)]);
        let d2 = diag(&[cis(2.9), cis(1.1)]);
        let rho = UnitaryRep::new(z2.clone(), vec![&w * d1 * w.adjoint(), &w * d2 * w.adjoint()], vec![]).unwrap();
        let triv = UnitaryRep::trivial(z2, 2);
        let p = path_abelian(&rho, &triv, DEFAULT_STEPS).unwrap();
        let r = verify_path(&p, Some((&rho, &triv)));
        assert!(r.passed && r.max_relation_residual < 1e-8, "{r:?}");
    }

    #[test]
    fn induced_quarter_turn() {
        let g = gamma(1);
        let a = lattice_subgroup(&g);
        let ag = Arc::new(a.group.clone());
        let start = crate::torus::lattice_character_rep(&ag, &crate::torus::TorusChar::new(vec![0.25, 0.1])).unwrap();
        let end = crate::torus::lattice_character_rep(&ag, &crate::torus::TorusChar::new(vec![0.0, 0.1])).unwrap();
        let p = path_abelian(&start, &end, 40).unwrap();
        let ip = induce_path(&g, &a, &p).unwrap();
        assert!(ip.start().distance(&induce(&g, &a, &start).unwrap()) < 1e-14);
        assert!(ip.end().distance(&induce(&g, &a, &end).unwrap()) < 1e-12);
        assert!(verify_path(&ip, None).passed);
        let constant = induce_path(&g, &a, &RepPath::constant(&start)).unwrap();
        assert_eq!(constant.len(), 1);
    }

    #[test]
    fn corrupted_sample_is_found() {
        let rho = family_rep(1, &[c(0.0, 1.0)], cis(0.4)).unwrap();
        let mut p = path_conjugation(&rho, &diag(&[c(1.0, 0.0), c(0.0, 1.0)]), 20).unwrap();
        let bad = UnitaryRep::from_parts(
            rho.group_arc().clone(),
            2,
            rho.lattice_images().to_vec(),
            vec![from_rows(&[&[c(0.0, 1.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]])],
        )
        .unwrap();
        p.samples[7] = bad;
        let r = verify_path(&p, None);
        assert!(!r.passed);
        assert_eq!(r.bad_sample, Some(7));
    }

    #[test]
    fn concatenation_checks_junction() {
        let rho = family_rep(1, &[c(0.0, 1.0)], cis(0.4)).unwrap();
        let v = diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let p = path_conjugation(&rho, &v, 30).unwrap();
        let q = path_conjugation(p.end(), &v, 30).unwrap();
        let pq = p.concat(&q).unwrap();
        assert_eq!(pq.len(), 61);
        assert!(verify_path(&pq, None).passed);
        assert!(q.concat(&p).is_err());
    }

    #[test]
    fn trivialize_trivial_and_lift_only() {
        let g = gamma(1);
        let triv = UnitaryRep::trivial(g.clone(), 2);
        let t = stably_trivialize(&triv, 0, DEFAULT_STEPS).unwrap();
        assert_eq!(t.multiplier, 1);
        assert!(t.path.samples.iter().all(|s| s.distance(&triv) < 1e-12));

        // t ↦ 1, g ↦ e^{2i}: on the circle of characters trivial on t
        let u = CMat::from_element(1, 1, cis(2.0));
        let chi = gamma_k_from_lift(&g, &u).unwrap();
        let t = stably_trivialize(&chi, 0, DEFAULT_STEPS).unwrap();
        assert_eq!(t.multiplier, 1);
        assert!(verify_path(&t.path, Some((&chi, &UnitaryRep::trivial(g, 1)))).passed);
        assert!(endpoints_equivalent(&t, &chi, 1).unwrap());
    }

    #[test]
    fn trivialize_family_rep() {
        let rho = family_rep(1, &[c(0.0, 1.0)], cis(0.7)).unwrap();
        let t = stably_trivialize(&rho, 3, DEFAULT_STEPS).unwrap();
        assert!(t.multiplier <= 4);
        let two = rho.direct_sum(&rho).unwrap();
        let triv = UnitaryRep::trivial(rho.group_arc().clone(), 4);
        let r = verify_path(&t.path, Some((&two, &triv)));
        assert!(r.passed, "{}", r.summary());
        assert!(endpoints_equivalent(&t, &rho, 4).unwrap());
        assert_eq!(t.segments.len(), 6);
    }

    #[test]
    fn trivialize_sign_character() {
        // t ↦ -1 is not trivial on the inverted direction, so m = 2
        let g = gamma(1);
        let one = |z: Complex64| CMat::from_element(1, 1, z);
        let chi = UnitaryRep::new(g.clone(), vec![one(c(-1.0, 0.0)), one(cis(1.0))], vec![one(cis(0.5))]).unwrap();
        let t = stably_trivialize(&chi, 0, DEFAULT_STEPS).unwrap();
        assert_eq!(t.multiplier, 2);
        assert!(verify_path(&t.path, None).passed);
        assert!(endpoints_equivalent(&t, &chi, 0).unwrap());
    }

    #[test]
    fn unsupported_group() {
        let g = Arc::new(VaGroup::p4());
        let rho = UnitaryRep::trivial(g, 1);
        assert!(matches!(stably_trivialize(&rho, 0, 10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn conjugated_path_still_verifies() {
        let rho = family_rep(2, &[c(0.0, 1.0), cis(0.3)], cis(0.7)).unwrap();
        let p = path_conjugation(&rho, &diag(&[c(0.0, 1.0), c(1.0, 0.0)]), 40).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = haar_unitary(&mut rng, 2);
        let q = p.map(|s| s.conjugate(&w)).unwrap();
        assert!(verify_path(&q, None).passed);
    }
}
