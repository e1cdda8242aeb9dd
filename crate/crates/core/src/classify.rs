//! Irreducibles are either scalar on the lattice or induced from the
//! stabilizer of a lattice character.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{abelianization, IntermediateSubgroup, VaGroup};
use crate::numeric::{self, c, CMat};
use crate::probe::{apply_step, Linearization};
use crate::projective::{descend, ProjectiveDescent};
use crate::rep::{decompose, equivalent, induce, is_irreducible, ToleranceConfig, UnitaryRep};
use crate::torus::{induced_char_rep, orbit, restrict_to_a_spectrum, TorusChar};

#[derive(Clone, Debug)]
pub enum Classification {
    Induced {
        subgroup: IntermediateSubgroup,
        /// The character whose isotypic component carries `inner`.
        character: TorusChar,
        inner: UnitaryRep,
        induced: UnitaryRep,
    },
    ScalarOnA(ProjectiveDescent),
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::Induced { .. } => "Induced",
            Classification::ScalarOnA(_) => "ScalarOnA",
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        match self {
            Classification::Induced {
                subgroup,
                character,
                inner,
                induced,
            } => serde_json::json!({
                "tag": self.tag(),
                "subgroup": {"elements": subgroup.elements, "index": subgroup.index},
                "character": character.angles,
                "inner": inner.to_json_value(),
                "induced": induced.to_json_value(),
            }),
            Classification::ScalarOnA(d) => serde_json::json!({
                "tag": self.tag(),
                "central_character": d.central_char.angles,
                "cocycle": d.cocycle.values().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            }),
        }
    }
}

/// `t_i ↦ diag(z_i, z̄_i)`, `a² ↦ αI`, lift of the generator `↦ [[0, α], [1, 0]]`.
pub fn family_rep_gamma_k(group: Arc<VaGroup>, z: &[Complex64], alpha: Complex64) -> Result<UnitaryRep> {
    let k = group
        .as_gamma_k()
        .ok_or_else(|| Error::input("family representation needs a Γ_k group"))?;
    if z.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: z.len(),
        });
    }
    if z.iter().chain([&alpha]).any(|w| !w.re.is_finite() || (w.norm() - 1.0).abs() > 1e-12) {
        return Err(Error::input("family parameters must have unit modulus"));
    }
    let zero = c(0.0, 0.0);
    let mut lattice: Vec<CMat> = z.iter().map(|&w| numeric::diag(&[w, w.conj()])).collect();
    lattice.push(numeric::eye(2) * alpha);
    let lift = numeric::from_rows(&[&[zero, alpha], &[c(1.0, 0.0), zero]]);
    UnitaryRep::new(group, lattice, vec![lift])
}

/// Convenience wrapper building `Γ_k` itself.
pub fn family_rep(k: usize, z: &[Complex64], alpha: Complex64) -> Result<UnitaryRep> {
    family_rep_gamma_k(Arc::new(VaGroup::gamma_k(k)?), z, alpha)
}

pub fn classify(rho: &UnitaryRep, seed: u64) -> Result<Classification> {
    if !rho.is_verified() {
        return Err(Error::Unverified("representation has not been verified".into()));
    }
    if !is_irreducible(rho)? {
        return Err(Error::Reducible);
    }
    let spectrum = restrict_to_a_spectrum(rho)?;
    if spectrum.len() == 1 {
        return Ok(Classification::ScalarOnA(descend(rho)?));
    }
    let g = rho.group_arc();
    let first = &spectrum[0];
    let stab = orbit(g, &first.character)?.stabilizer;
    let h = IntermediateSubgroup::new(g, &stab)?;
    let w = &first.basis;
    let wh = w.adjoint();
    let squeeze = |m: &CMat| numeric::nearest_unitary(&(&wh * m * w));
    let lattice = rho.lattice_images().iter().map(squeeze).collect();
    let lifts = h.elements[1..].iter().map(|&q| squeeze(rho.lift_image(q))).collect();
    let inner = UnitaryRep::from_parts(Arc::new(h.group.clone()), w.ncols(), lattice, lifts)?
        .verified(*rho.tolerances())
        .map_err(|e| Error::Internal(format!("isotypic component is not H-invariant: {e}")))?;
    let induced = induce(g, &h, &inner)?;
    if !equivalent(rho, &induced, seed)? {
        return Err(Error::Internal(
            "representation is not equivalent to the induced representation".into(),
        ));
    }
    Ok(Classification::Induced {
        subgroup: h,
        character: first.character.clone(),
        inner,
        induced,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneDimSummary {
    pub torus_rank: usize,
    pub components: BigInt,
}

/// `Hom(G, U(1))` is a torus of the free rank times the torsion subgroup.
pub fn enumerate_one_dim(g: &VaGroup) -> Result<OneDimSummary> {
    let ab = abelianization(g)?;
    Ok(OneDimSummary {
        torus_rank: ab.free_rank,
        components: ab.torsion.iter().product(),
    })
}

const MAX_PROJECTION_ITERATIONS: usize = 500;
const PROJECTION_TARGET: f64 = 1e-11;

/// Gauss-Newton on the unitary group: solves the linearized checklist in
/// the least-squares sense and moves by `exp(X_g)` on each generator.
/// Returns the iteration count on convergence.
pub(crate) fn project_to_variety(g: &VaGroup, images: &mut Vec<CMat>) -> Option<usize> {
    for iter in 0..MAX_PROJECTION_ITERATIONS {
        let lin = Linearization::new(g, images);
        let worst = lin.residual_table().iter().map(|(_, r)| *r).fold(0.0, f64::max);
        if worst.is_nan() {
            return None;
        }
        if worst < PROJECTION_TARGET {
            return Some(iter);
        }
        let j = lin.matrix();
        let r = lin.log_residual();
        let svd = j.svd(true, true);
        let smax = svd.singular_values.max();
        let mut step = svd.solve(&(-r), 1e-10 * smax.max(1e-300)).ok()?;
        let len = step.norm();
        if len > 0.5 {
            step *= 0.5 / len;
        }
        *images = apply_step(images, &step);
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxIrrDimReport {
    pub group: String,
    pub requested: usize,
    pub valid_samples: usize,
    pub projection_failures: usize,
    pub decomposition_failures: usize,
    /// Irreducible factor dimension ↦ number of factors (with multiplicity).
    pub histogram: BTreeMap<usize, usize>,
    pub max_dim: usize,
    pub bound: usize,
    pub passed: bool,
}

/// Near a reducible point, an approximate solution with relation residual
/// `r` can have commutant singular values of order `√r`; ranks and
/// invariance are judged at that scale.
fn sample_tolerances(r: f64) -> ToleranceConfig {
    let d = ToleranceConfig::default();
    let s = 100.0 * r.max(0.0).sqrt();
    ToleranceConfig {
        unitarity_tol: d.unitarity_tol,
        relation_tol: d.relation_tol.max(s),
        rank_tol: d.rank_tol.max(s),
        equality_tol: d.equality_tol.max(s),
    }
}

fn random_char<R: Rng>(rng: &mut R, k: usize) -> TorusChar {
    TorusChar::new((0..k).map(|_| rng.random::<f64>()).collect())
}

/// Samples representations, decomposes them and checks the factor
/// dimensions against `[G : A]`. Samples cycle through three sources:
/// Haar-random generator images projected onto the variety, induced
/// characters plus a 1-dimensional summand perturbed and projected back,
/// and unperturbed induced characters conjugated by a Haar unitary.
pub fn max_irr_dim_check(g: &Arc<VaGroup>, samples: usize, seed: u64) -> Result<MaxIrrDimReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = g.q_order();
    let k = g.rank();
    let gens = k + m - 1;
    let mut report = MaxIrrDimReport {
        group: g.name().to_string(),
        requested: samples,
        valid_samples: 0,
        projection_failures: 0,
        decomposition_failures: 0,
        histogram: BTreeMap::new(),
        max_dim: 0,
        bound: m,
        passed: false,
    };
    // a 1-dimensional representation to pad constructed samples with
    let one = {
        let mut imgs: Vec<CMat> = (0..gens).map(|_| numeric::haar_unitary(&mut rng, 1)).collect();
        project_to_variety(g, &mut imgs).map(|_| imgs)
    };
    for i in 0..samples {
        let images: Option<Vec<CMat>> = match i % 3 {
            0 => {
                let n = rng.random_range(1..=m + 1);
                let mut imgs: Vec<CMat> = (0..gens).map(|_| numeric::haar_unitary(&mut rng, n)).collect();
                project_to_variety(g, &mut imgs).map(|_| imgs)
            }
            1 => {
                let ind = induced_char_rep(g, &random_char(&mut rng, k))?;
                let base = match &one {
                    Some(o) => {
                        let o = UnitaryRep::from_parts(g.clone(), 1, o[..k].to_vec(), o[k..].to_vec())?
                            .verified(Default::default())?;
                        ind.direct_sum(&o)?
                    }
                    None => ind,
                };
                let n = base.dim();
                let mut imgs: Vec<CMat> = base
                    .generator_images()
                    .into_iter()
                    .map(|x| {
                        let noise = numeric::random_hermitian(&mut rng, n) * c(0.0, 1e-2);
                        numeric::exp_skew(&noise) * x
                    })
                    .collect();
                project_to_variety(g, &mut imgs).map(|_| imgs)
            }
            _ => {
                let ind = induced_char_rep(g, &random_char(&mut rng, k))?;
                let v = numeric::haar_unitary(&mut rng, ind.dim());
                Some(ind.conjugate(&v)?.generator_images().into_iter().cloned().collect())
            }
        };
        let Some(images) = images else {
            report.projection_failures += 1;
            continue;
        };
        let n = images[0].nrows();
        let rho = match UnitaryRep::from_parts(g.clone(), n, images[..k].to_vec(), images[k..].to_vec())
            .and_then(|r| r.verified(Default::default()))
        {
            Ok(r) => r,
            Err(_) => {
                report.projection_failures += 1;
                continue;
            }
        };
        let tol = sample_tolerances(rho.verify().max_relation_residual);
        let rho = rho.with_tolerances(tol);
        match decompose(&rho, seed.wrapping_add(i as u64)) {
            Ok(d) => {
                report.valid_samples += 1;
                for (f, mult) in &d.factors {
                    *report.histogram.entry(f.dim()).or_default() += mult;
                    report.max_dim = report.max_dim.max(f.dim());
                }
            }
            Err(_) => report.decomposition_failures += 1,
        }
    }
    report.passed = report.valid_samples > 0 && report.max_dim <= report.bound;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::cis;
    use crate::rep::is_irreducible;

    fn g(k: usize) -> Arc<VaGroup> {
        Arc::new(VaGroup::gamma_k(k).unwrap())
    }

    #[test]
    fn family_irreducibility() {
        let i = c(0.0, 1.0);
        assert!(is_irreducible(&family_rep_gamma_k(g(1), &[i], c(1.0, 0.0)).unwrap()).unwrap());
        assert!(!is_irreducible(&family_rep_gamma_k(g(1), &[c(1.0, 0.0)], c(1.0, 0.0)).unwrap()).unwrap());
        assert!(!is_irreducible(&family_rep(2, &[c(-1.0, 0.0), c(1.0, 0.0)], cis(0.3)).unwrap()).unwrap());
        assert!(is_irreducible(&family_rep(2, &[c(-1.0, 0.0), cis(0.2)], cis(0.3)).unwrap()).unwrap());
        assert!(family_rep_gamma_k(g(1), &[c(2.0, 0.0)], c(1.0, 0.0)).is_err());
        assert!(family_rep_gamma_k(g(1), &[i, i], c(1.0, 0.0)).is_err());
        assert!(family_rep_gamma_k(Arc::new(VaGroup::p4()), &[i], c(1.0, 0.0)).is_err());
    }

    #[test]
    fn quarter_turn_family_is_induced_from_lattice() {
        let alpha = cis(1.1);
        let rho = family_rep_gamma_k(g(1), &[c(0.0, 1.0)], alpha).unwrap();
        match classify(&rho, 1).unwrap() {
            Classification::Induced {
                subgroup,
                character,
                inner,
                induced,
            } => {
                assert!(subgroup.is_lattice());
                assert_eq!(inner.dim(), 1);
                assert_eq!(induced.dim(), 2);
                let theta = 1.1 / std::f64::consts::TAU;
                let expect = TorusChar::new(vec![0.25, theta]);
                let conj = TorusChar::new(vec![0.75, theta]);
                assert!(character.approx_eq(&expect, 1e-10) || character.approx_eq(&conj, 1e-10));
            }
            other => panic!("expected Induced, got {}", other.tag()),
        }
    }

    #[test]
    fn boundary_family_is_reducible() {
        let rho = family_rep_gamma_k(g(1), &[c(-1.0, 0.0)], cis(0.9)).unwrap();
        assert!(matches!(classify(&rho, 1), Err(Error::Reducible)));
    }

    #[test]
    fn one_dim_reps_are_scalar() {
        let u = cis(0.4);
        let rho = UnitaryRep::new(
            g(1),
            vec![CMat::from_element(1, 1, c(-1.0, 0.0)), CMat::from_element(1, 1, u * u)],
            vec![CMat::from_element(1, 1, u)],
        )
        .unwrap();
        assert_eq!(classify(&rho, 0).unwrap().tag(), "ScalarOnA");
        let p4 = Arc::new(VaGroup::p4());
        let triv = UnitaryRep::trivial(p4, 1);
        assert_eq!(classify(&triv, 0).unwrap().tag(), "ScalarOnA");
    }

    #[test]
    fn p4_generic_induced_from_lattice() {
        let p4 = Arc::new(VaGroup::p4());
        let rho = induced_char_rep(&p4, &TorusChar::new(vec![0.1, 0.37])).unwrap();
        let Classification::Induced { subgroup, .. } = classify(&rho, 3).unwrap() else {
            panic!("expected Induced");
        };
        assert_eq!(subgroup.index, 4);
        // half-turn-fixed character: stabilizer of order 2
        let rho = induced_char_rep(&p4, &TorusChar::new(vec![0.5, 0.0])).unwrap();
        let d = decompose(&rho, 2).unwrap();
        for (f, _) in &d.factors {
            let cl = classify(f, 4).unwrap();
            if let Classification::Induced { subgroup, .. } = cl {
                assert_eq!(subgroup.elements.len(), 2);
            }
        }
    }

    #[test]
    fn one_dim_counts() {
        let s = enumerate_one_dim(&VaGroup::gamma_k(1).unwrap()).unwrap();
        assert_eq!((s.torus_rank, s.components), (1, BigInt::from(2)));
        let s = enumerate_one_dim(&VaGroup::gamma_k(3).unwrap()).unwrap();
        assert_eq!((s.torus_rank, s.components), (1, BigInt::from(8)));
        let s = enumerate_one_dim(&VaGroup::free_abelian(3)).unwrap();
        assert_eq!((s.torus_rank, s.components), (3, BigInt::from(1)));
    }

    #[test]
    fn projection_converges_near_variety() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = family_rep(1, &[cis(0.6)], cis(2.0)).unwrap();
        let mut imgs: Vec<CMat> = rho
            .generator_images()
            .into_iter()
            .map(|x| numeric::exp_skew(&(numeric::random_hermitian(&mut rng, 2) * c(0.0, 1e-2))) * x)
            .collect();
        assert!(project_to_variety(rho.group(), &mut imgs).is_some());
        let back = UnitaryRep::new(rho.group_arc().clone(), imgs[..2].to_vec(), imgs[2..].to_vec());
        assert!(back.is_ok());
    }

    #[test]
    fn sampled_dimensions_obey_index_bound() {
        let r = max_irr_dim_check(&g(1), 30, 11).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.max_dim <= 2);
        let z2 = Arc::new(VaGroup::free_abelian(2));
        let r = max_irr_dim_check(&z2, 9, 12).unwrap();
        assert_eq!(r.histogram.keys().copied().collect::<Vec<_>>(), vec![1]);
        // C₄ acting by rotation: orbit sizes 1, 2, 4 with cyclic stabilizers
        let r = max_irr_dim_check(&Arc::new(VaGroup::p4()), 30, 13).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.histogram.keys().all(|d| [1, 2, 4].contains(d)), "{r:?}");
    }
}
