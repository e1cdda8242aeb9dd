//! End-to-end checks of the main claims, each reduced to a pass/fail line.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{enumerate_one_dim, family_rep, max_irr_dim_check, project_to_variety};
use crate::error::Result;
use crate::group::{abelianization, lattice_subgroup, VaGroup};
use crate::linalg::{smith_normal_form, AbelianInvariants, IntMatrix};
use crate::numeric::{self, cis, CMat};
use crate::paths::{endpoints_equivalent, stably_trivialize, verify_path, DEFAULT_STEPS};
use crate::probe::local_moduli_dim;
use crate::projective::{descend, q_characters, twist};
use crate::rep::{induce, is_irreducible, restrict, UnitaryRep};
use crate::topology::{
    build_irr2_pair, circle_with_involution, circle_with_rotation, invariant_rational_ranks, plain_circle, product,
    quotient_by_involution, rational_cohomology_gamma_k, rational_ranks, rdef_homotopy, torus_with_involution,
    CwComplex,
};
use crate::torus::{induced_char_rep, is_free_orbit, is_free_orbit_exact, lattice_character_rep, ExactChar, TorusChar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} [{mark}] {}: {}", self.id, self.name, self.detail)
    }
}

fn outcome(id: usize, name: &str, r: Result<(bool, String)>) -> CriterionOutcome {
    let (passed, detail) = r.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionOutcome {
        id,
        name: name.to_string(),
        passed,
        detail,
    }
}

fn rng_for(seed: u64, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ id.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn gamma(k: usize) -> Result<Arc<VaGroup>> {
    Ok(Arc::new(VaGroup::gamma_k(k)?))
}

fn unit<R: Rng>(rng: &mut R) -> Complex64 {
    cis(std::f64::consts::TAU * rng.random::<f64>())
}

fn two_torsion(count: usize) -> Vec<BigInt> {
    vec![BigInt::from(2); count]
}

pub const NAMES: [&str; 10] = [
    "components of the deformation ring",
    "rational cohomology of Γ_k",
    "rational homotopy of the deformation ring",
    "irreducible dimension bound",
    "free orbits and irreducible induction",
    "local moduli dimension attains rank A",
    "projection formula",
    "stable triviality witnesses",
    "abelianization and 1-dimensional components",
    "infrastructure invariants",
];

pub fn criterion_1(_seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let start = Instant::now();
        let mut ok = true;
        let mut parts = Vec::new();
        for k in 1..=3 {
            let pi0 = rdef_homotopy(k)?.pi0;
            let expected = AbelianInvariants::new(1, two_torsion((1 << k) - 1));
            ok &= pi0 == expected;
            parts.push(format!("k={k}: {pi0}"));
        }
        ok &= start.elapsed().as_secs_f64() < 60.0;
        Ok((ok, parts.join("; ")))
    };
    outcome(1, NAMES[0], run())
}

pub fn criterion_2(_seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        for k in 1..=4 {
            let r = rational_cohomology_gamma_k(k)?;
            ok &= r.all_agree();
            parts.push(format!("k={k}: {:?}", r.cw_quotient));
        }
        Ok((ok, parts.join("; ")))
    };
    outcome(2, NAMES[1], run())
}

pub fn criterion_3(_seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        for k in 1..=3 {
            let r = rdef_homotopy(k)?;
            let h = rational_cohomology_gamma_k(k)?.formula;
            let ranks: Vec<usize> = (2..=k + 1).map(|d| r.pi(d).free_rank).collect();
            ok &= ranks == h[2..=k + 1];
            // nothing above the dimension
            ok &= r.pi(k + 2).is_trivial();
            parts.push(format!("k={k}: {ranks:?}"));
        }
        let r1 = rdef_homotopy(1)?;
        let pi1 = r1.pi(1);
        ok &= r1.pi2.is_trivial() && pi1 == AbelianInvariants::free(1) && !r1.pi1.extension_ambiguous;
        parts.push(format!("Γ_1: π₁ = {pi1}, π₂ = {}", r1.pi2));
        Ok((ok, parts.join("; ")))
    };
    outcome(3, NAMES[2], run())
}

pub fn criterion_4(seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        let groups = [gamma(1)?, gamma(2)?, Arc::new(VaGroup::p4())];
        for (i, g) in groups.iter().enumerate() {
            let r = max_irr_dim_check(g, 60, seed.wrapping_add(i as u64))?;
            ok &= r.passed && r.valid_samples >= 50;
            parts.push(format!(
                "{}: {} samples, max {} ≤ {}",
                r.group, r.valid_samples, r.max_dim, r.bound
            ));
        }
        Ok((ok, parts.join("; ")))
    };
    outcome(4, NAMES[3], run())
}

pub fn criterion_5(seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 5);
        let mut agree = 0;
        let mut total = 0;
        let mut boundary_ok = true;
        for k in 1..=3 {
            let g = gamma(k)?;
            for i in 0..100 {
                let mut angles: Vec<f64> = (0..=k).map(|_| rng.random::<f64>()).collect();
                if i % 4 == 3 {
                    // a point fixed by the inversion: inverted angles in {0, 1/2}
                    for a in angles.iter_mut().take(k) {
                        *a = if rng.random::<bool>() { 0.5 } else { 0.0 };
                    }
                }
                let chi = TorusChar::new(angles);
                let free = is_free_orbit(&g, &chi)?;
                let irr = is_irreducible(&induced_char_rep(&g, &chi)?)?;
                agree += usize::from(free == irr);
                total += 1;
            }
            for mask in 0..1u32 << k {
                let mut angles: Vec<Rational64> = (0..k)
                    .map(|j| Rational64::new(((mask >> j) & 1) as i64, 2))
                    .collect();
                angles.push(Rational64::new(1, 3));
                boundary_ok &= !is_free_orbit_exact(&g, &ExactChar::new(angles))?;
                let z: Vec<Complex64> = (0..k)
                    .map(|j| if (mask >> j) & 1 == 1 { Complex64::new(-1.0, 0.0) } else { Complex64::one() })
                    .collect();
                boundary_ok &= !is_irreducible(&family_rep(k, &z, cis(std::f64::consts::TAU / 3.0))?)?;
            }
        }
        Ok((
            agree == total && boundary_ok,
            format!("{agree}/{total} agree; boundary cases reducible: {boundary_ok}"),
        ))
    };
    outcome(5, NAMES[4], run())
}

pub fn criterion_6(seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 6);
        let mut ok = true;
        let mut parts = Vec::new();
        for k in 1..=3 {
            let mut hits = 0;
            let mut resampled = 0;
            let mut accepted = 0;
            while accepted < 200 {
                if resampled > 200 {
                    ok = false;
                    break;
                }
                let z: Vec<Complex64> = (0..k).map(|_| unit(&mut rng)).collect();
                let rho = family_rep(k, &z, unit(&mut rng))?;
                let r = local_moduli_dim(&rho)?;
                if r.ambiguous {
                    resampled += 1;
                    continue;
                }
                accepted += 1;
                hits += usize::from(r.local_moduli_dim == k + 1 && r.bound == k + 1);
            }
            ok &= hits == 200;
            parts.push(format!("k={k}: {hits}/200 (resampled {resampled})"));
        }
        Ok((ok, parts.join("; ")))
    };
    outcome(6, NAMES[5], run())
}

fn random_lattice_rep<R: Rng>(rng: &mut R, a: &Arc<VaGroup>, n: usize) -> Result<UnitaryRep> {
    let mut rep = lattice_character_rep(a, &TorusChar::new((0..a.rank()).map(|_| rng.random()).collect()))?;
    for _ in 1..n {
        let chi = TorusChar::new((0..a.rank()).map(|_| rng.random()).collect());
        rep = rep.direct_sum(&lattice_character_rep(a, &chi)?)?;
    }
    rep.conjugate(&numeric::haar_unitary(rng, n))
}

fn random_gamma_rep<R: Rng>(rng: &mut R, g: &Arc<VaGroup>, k: usize, two_dim: bool) -> Result<UnitaryRep> {
    if two_dim {
        let z: Vec<Complex64> = (0..k).map(|_| unit(rng)).collect();
        let rho = family_rep(k, &z, unit(rng))?;
        rho.conjugate(&numeric::haar_unitary(rng, 2))
    } else {
        one_dim_gamma_rep(rng, g, k)
    }
}

/// `t_i ↦ ±1`, lift `↦ u`, last lattice vector `↦ u²`.
fn one_dim_gamma_rep<R: Rng>(rng: &mut R, g: &Arc<VaGroup>, k: usize) -> Result<UnitaryRep> {
    let one = |z: Complex64| CMat::from_element(1, 1, z);
    let u = unit(rng);
    let mut lattice: Vec<CMat> = (0..k)
        .map(|_| one(if rng.random::<bool>() { -Complex64::one() } else { Complex64::one() }))
        .collect();
    lattice.push(one(u * u));
    UnitaryRep::new(g.clone(), lattice, vec![one(u)])
}

pub fn criterion_7(seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 7);
        let mut worst = 0.0f64;
        let mut pairs = 0;
        for k in 1..=2 {
            let g = gamma(k)?;
            let a = lattice_subgroup(&g);
            let ag = Arc::new(a.group.clone());
            let ball = g.word_ball(3);
            for i in 0..20 {
                let rho = random_gamma_rep(&mut rng, &g, k, i % 2 == 0)?;
                let psi = random_lattice_rep(&mut rng, &ag, 1 + i % 2)?;
                let left = induce(&g, &a, &restrict(&rho, &a)?.tensor(&psi)?)?;
                let right = rho.tensor(&induce(&g, &a, &psi)?)?;
                for x in &ball {
                    worst = worst.max((left.character(x)? - right.character(x)?).norm());
                }
                pairs += 1;
            }
        }
        Ok((worst <= 1e-8, format!("{pairs} pairs, max character gap {worst:.3e}")))
    };
    outcome(7, NAMES[6], run())
}

pub fn criterion_8(seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 8);
        let g = gamma(1)?;
        let mut passed = 0;
        let mut multipliers = std::collections::BTreeMap::new();
        for i in 0..20 {
            let rho = random_gamma_rep(&mut rng, &g, 1, i % 2 == 1)?;
            let t = stably_trivialize(&rho, seed.wrapping_add(i as u64), DEFAULT_STEPS)?;
            let mut m_rho = rho.clone();
            for _ in 1..t.multiplier {
                m_rho = m_rho.direct_sum(&rho)?;
            }
            let triv = UnitaryRep::trivial(g.clone(), m_rho.dim());
            let report = verify_path(&t.path, Some((&m_rho, &triv)));
            let ok = report.passed && endpoints_equivalent(&t, &rho, seed)?;
            passed += usize::from(ok);
            *multipliers.entry(t.multiplier).or_insert(0usize) += 1;
        }
        Ok((passed == 20, format!("{passed}/20 verified; multipliers {multipliers:?}")))
    };
    outcome(8, NAMES[7], run())
}

pub fn criterion_9(_seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        for k in 1..=4 {
            let g = VaGroup::gamma_k(k)?;
            let ab = abelianization(&g)?;
            let one = enumerate_one_dim(&g)?;
            ok &= ab == AbelianInvariants::new(1, two_torsion(k));
            ok &= one.components == BigInt::from(1u32 << k) && one.torus_rank == 1;
            parts.push(format!("k={k}: {ab}, {} components", one.components));
        }
        Ok((ok, parts.join("; ")))
    };
    outcome(9, NAMES[8], run())
}

fn random_int_matrix<R: Rng>(rng: &mut R) -> IntMatrix {
    let rows = rng.random_range(1..=6);
    let cols = rng.random_range(1..=6);
    let sparse = rng.random::<bool>();
    let entries: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if sparse && rng.random::<f64>() < 0.5 { 0 } else { rng.random_range(-9..=9) })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&entries)
}

/// `u m v = d`, `u`, `v` unimodular with the stored inverses, `d` diagonal
/// with a divisibility chain.
pub fn snf_identities_hold(m: &IntMatrix) -> bool {
    let s = smith_normal_form(m);
    let unimodular = |x: &IntMatrix, inv: &IntMatrix| {
        x.determinant().abs().is_one() && (x * inv) == IntMatrix::identity(x.rows())
    };
    if &(&s.u * m) * &s.v != s.d || !unimodular(&s.u, &s.u_inv) || !unimodular(&s.v, &s.v_inv) {
        return false;
    }
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j && !s.d.get(i, j).is_zero() {
                return false;
            }
        }
    }
    let diag = s.diagonal();
    let nonzero = diag.iter().take_while(|x| !x.is_zero()).count();
    nonzero == s.rank
        && diag[nonzero..].iter().all(|x| x.is_zero())
        && diag.iter().all(|x| !x.is_negative())
        && diag[..nonzero].windows(2).all(|w| (&w[1] % &w[0]).is_zero())
}

/// Every complex the topology routines build, with the quotients paired
/// with their covers.
fn constructed_complexes() -> Result<(Vec<CwComplex>, Vec<(CwComplex, CwComplex)>)> {
    let mut complexes = vec![circle_with_involution(), circle_with_rotation(), plain_circle()];
    let mut quotients = Vec::new();
    for k in 1..=4 {
        let t = torus_with_involution(k)?;
        let mut factors = vec![circle_with_involution(); k];
        factors.push(circle_with_rotation());
        let b = product(&factors)?;
        for cover in [t, b] {
            let q = quotient_by_involution(&cover)?;
            complexes.push(cover.clone());
            complexes.push(q.clone());
            quotients.push((cover, q));
        }
        complexes.push(build_irr2_pair(k)?.total);
    }
    Ok((complexes, quotients))
}

pub fn criterion_10(seed: u64) -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 10);
        let snf_ok = (0..50).filter(|_| snf_identities_hold(&random_int_matrix(&mut rng))).count();

        let (complexes, quotients) = constructed_complexes()?;
        let d2_ok = complexes.iter().filter(|x| x.boundary_squared_zero()).count();
        let mut q_ok = 0;
        for (cover, q) in &quotients {
            let mut expected = invariant_rational_ranks(cover)?;
            let mut got = rational_ranks(q);
            let len = expected.len().max(got.len());
            expected.resize(len, 0);
            got.resize(len, 0);
            q_ok += usize::from(expected == got);
        }

        let mut worst = 0.0f64;
        let mut cocycle_checks = 0;
        for k in 1..=2 {
            let g = gamma(k)?;
            let chars = q_characters(g.point_group());
            for i in 0..6 {
                let rho = if i % 2 == 0 {
                    one_dim_gamma_rep(&mut rng, &g, k)?
                } else {
                    // z ∈ {±1}^k makes the family representation scalar on A
                    let z: Vec<Complex64> = (0..k)
                        .map(|_| if rng.random::<bool>() { -Complex64::one() } else { Complex64::one() })
                        .collect();
                    family_rep(k, &z, unit(&mut rng))?
                };
                let base = descend(&rho)?.cocycle;
                let conj = rho.conjugate(&numeric::haar_unitary(&mut rng, rho.dim()))?;
                worst = worst.max(base.max_distance(&descend(&conj)?.cocycle));
                for chi in &chars {
                    worst = worst.max(base.max_distance(&descend(&twist(chi, &rho)?)?.cocycle));
                }
                cocycle_checks += 1;
            }
        }
        let p4 = Arc::new(VaGroup::p4());
        for _ in 0..4 {
            let gens = p4.rank() + p4.q_order() - 1;
            let mut imgs: Vec<CMat> = (0..gens).map(|_| numeric::haar_unitary(&mut rng, 1)).collect();
            if project_to_variety(&p4, &mut imgs).is_none() {
                continue;
            }
            let (lattice, lifts) = imgs.split_at(p4.rank());
            let rho = UnitaryRep::from_parts(p4.clone(), 1, lattice.to_vec(), lifts.to_vec())?.verified(Default::default())?;
            let base = descend(&rho)?.cocycle;
            for chi in &q_characters(p4.point_group()) {
                worst = worst.max(base.max_distance(&descend(&twist(chi, &rho)?)?.cocycle));
            }
            cocycle_checks += 1;
        }

        let ok = snf_ok == 50
            && d2_ok == complexes.len()
            && q_ok == quotients.len()
            && worst <= 1e-12
            && cocycle_checks >= 12;
        Ok((
            ok,
            format!(
                "SNF {snf_ok}/50; ∂² = 0 on {d2_ok}/{}; quotient ranks {q_ok}/{}; cocycle drift {worst:.1e} over {cocycle_checks} reps",
                complexes.len(),
                quotients.len()
            ),
        ))
    };
    outcome(10, NAMES[9], run())
}

pub fn criterion(id: usize, seed: u64) -> Option<CriterionOutcome> {
    Some(match id {
        1 => criterion_1(seed),
        2 => criterion_2(seed),
        3 => criterion_3(seed),
        4 => criterion_4(seed),
        5 => criterion_5(seed),
        6 => criterion_6(seed),
        7 => criterion_7(seed),
        8 => criterion_8(seed),
        9 => criterion_9(seed),
        10 => criterion_10(seed),
        _ => return None,
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    (1..=10).filter_map(|id| criterion(id, seed)).collect()
}
