use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::UnitaryRep;
use crate::error::{Error, Result};
use crate::numeric::{self, c, CMat};

/// Gap below which Hermitian probe eigenvalues are merged.
const CLUSTER_GAP: f64 = 1e-6;
/// Distinct clusters closer than this make the probe ill conditioned.
const SAFE_GAP: f64 = 1e-3;
const MAX_ATTEMPTS: u64 = 5;

/// Solutions `X` (`n' x n`) of `X ρ(g) = ρ'(g) X` on all generators.
#[derive(Clone, Debug)]
pub struct IntertwinerSpace {
    pub rows: usize,
    pub cols: usize,
    /// Frobenius-orthonormal.
    pub basis: Vec<CMat>,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
}

impl IntertwinerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Some singular value sits within a factor of `margin` of the threshold.
    pub fn ambiguous(&self, margin: f64) -> bool {
        self.threshold > 0.0
            && self
                .singular_values
                .iter()
                .any(|&s| s > self.threshold / margin && s < self.threshold * margin)
    }

    /// Combination of the basis with the given coefficients.
    pub fn element(&self, coeffs: &[num_complex::Complex64]) -> CMat {
        let mut x = CMat::zeros(self.rows, self.cols);
        for (b, &a) in self.basis.iter().zip(coeffs) {
            x += b * a;
        }
        x
    }
}

pub fn intertwiners(rho: &UnitaryRep, rho2: &UnitaryRep) -> Result<IntertwinerSpace> {
    rho.require_verified()?;
    rho2.require_verified()?;
    if rho.group() != rho2.group() {
        return Err(Error::input("intertwiners between representations of different groups"));
    }
    let (n, m) = (rho.dim(), rho2.dim());
    let size = n * m;
    if size == 0 {
        return Ok(IntertwinerSpace {
            rows: m,
            cols: n,
            basis: vec![],
            singular_values: vec![],
            threshold: 0.0,
        });
    }
    // column-major vec: vec(X A) = (Aᵀ ⊗ I) vec X, vec(B X) = (I ⊗ B) vec X
    let gens: Vec<(&CMat, &CMat)> = rho.generator_images().into_iter().zip(rho2.generator_images()).collect();
    let mut sys = CMat::zeros(gens.len() * size, size);
    let id_m = numeric::eye(m);
    let id_n = numeric::eye(n);
    for (k, (a, b)) in gens.iter().enumerate() {
        let block = numeric::kron(&a.transpose(), &id_m) - numeric::kron(&id_n, b);
        sys.view_mut((k * size, 0), (size, size)).copy_from(&block);
    }
    let ns = numeric::null_space_scaled(&sys, rho.tolerances().rank_tol, 1.0);
    let basis = (0..ns.dim())
        .map(|j| CMat::from_fn(m, n, |r, col| ns.basis[(r + m * col, j)]))
        .collect();
    Ok(IntertwinerSpace {
        rows: m,
        cols: n,
        basis,
        singular_values: ns.singular_values,
        threshold: ns.threshold,
    })
}

pub fn commutant(rho: &UnitaryRep) -> Result<IntertwinerSpace> {
    intertwiners(rho, rho)
}

/// Schur's criterion: the commutant is exactly the scalars.
pub fn is_irreducible(rho: &UnitaryRep) -> Result<bool> {
    if rho.dim() == 0 {
        return Err(Error::input("the zero-dimensional representation has no irreducibility"));
    }
    Ok(commutant(rho)?.dim() == 1)
}

/// Irreducible factors with multiplicities, plus the orthonormal frame in
/// which `ρ` becomes block diagonal. `blocks[i] = (factor index, basis)`,
/// and `basisᴴ ρ basis` is unitarily equivalent to that factor.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub factors: Vec<(UnitaryRep, usize)>,
    pub blocks: Vec<(usize, CMat)>,
}

impl Decomposition {
    pub fn max_factor_dim(&self) -> usize {
        self.factors.iter().map(|(f, _)| f.dim()).max().unwrap_or(0)
    }

    pub fn dims(&self) -> Vec<(usize, usize)> {
        self.factors.iter().map(|(f, m)| (f.dim(), *m)).collect()
    }
}

/// Subrepresentation on the span of the orthonormal columns of `e`, or
/// `None` if that span is not invariant within tolerance.
pub(crate) fn restrict_to_subspace(rho: &UnitaryRep, e: &CMat) -> Option<UnitaryRep> {
    let tol = rho.tolerances();
    let eh = e.adjoint();
    let mut ok = true;
    let squeeze = |m: &CMat, ok: &mut bool| {
        let me = m * e;
        let inside = &eh * &me;
        if numeric::max_abs(&(&me - e * &inside)) > tol.relation_tol * 10.0 {
            *ok = false;
        }
        numeric::nearest_unitary(&inside)
    };
    let lattice: Vec<CMat> = rho.lattice_images().iter().map(|m| squeeze(m, &mut ok)).collect();
    let lifts: Vec<CMat> = (1..rho.group().q_order())
        .map(|q| squeeze(rho.lift_image(q), &mut ok))
        .collect();
    if !ok {
        return None;
    }
    rho.rebuild(lattice, lifts).ok()
}

fn random_hermitian_commutant(space: &IntertwinerSpace, rng: &mut ChaCha8Rng) -> CMat {
    let coeffs: Vec<_> = (0..space.dim())
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(re, im)
        })
        .collect();
    let b = space.element(&coeffs);
    &b + b.adjoint()
}

/// Splits `rho` into irreducible pieces, each paired with its frame.
fn split(rho: &UnitaryRep, frame: CMat, rng: &mut ChaCha8Rng, out: &mut Vec<(UnitaryRep, CMat)>) -> Result<()> {
    let space = commutant(rho)?;
    if space.dim() <= 1 {
        out.push((rho.clone(), frame));
        return Ok(());
    }
    for _ in 0..MAX_ATTEMPTS {
        let h = random_hermitian_commutant(&space, rng);
        let (vals, vecs) = numeric::hermitian_eigen(&h);
        let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let clusters = numeric::cluster_sorted(&vals, CLUSTER_GAP * scale);
        if clusters.len() < 2 || numeric::min_cluster_gap(&vals, &clusters) < SAFE_GAP * scale {
            continue;
        }
        let pieces: Option<Vec<(UnitaryRep, CMat)>> = clusters
            .into_iter()
            .map(|r| {
                let e = numeric::columns(&vecs, r);
                restrict_to_subspace(rho, &e).map(|sub| (sub, &frame * &e))
            })
            .collect();
        let Some(pieces) = pieces else { continue };
        for (sub, f) in pieces {
            split(&sub, f, rng, out)?;
        }
        return Ok(());
    }
    Err(Error::Tolerance(format!(
        "eigenvalue clustering of the commutant probe stayed ill conditioned after {MAX_ATTEMPTS} attempts (dimension {}, commutant dimension {})",
        rho.dim(),
        space.dim()
    )))
}

/// Whether two irreducibles of equal dimension admit an invertible intertwiner.
fn irreducibles_equivalent(a: &UnitaryRep, b: &UnitaryRep) -> Result<bool> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let space = intertwiners(a, b)?;
    if space.dim() == 0 {
        return Ok(false);
    }
    // Schur: a nonzero intertwiner of irreducibles is invertible
    let x = &space.basis[0];
    let sv = x.clone().singular_values();
    let smax = sv.iter().fold(0.0f64, |m, &s| m.max(s));
    let smin = sv.iter().fold(f64::INFINITY, |m, &s| m.min(s));
    Ok(smin > a.tolerances().rank_tol * smax)
}

pub fn decompose(rho: &UnitaryRep, seed: u64) -> Result<Decomposition> {
    rho.require_verified()?;
    if rho.dim() == 0 {
        return Err(Error::input("cannot decompose the zero-dimensional representation"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces = Vec::new();
    split(rho, numeric::eye(rho.dim()), &mut rng, &mut pieces)?;
    let mut factors: Vec<(UnitaryRep, usize)> = Vec::new();
    let mut blocks = Vec::new();
    for (piece, frame) in pieces {
        let mut found = None;
        for (i, (f, _)) in factors.iter().enumerate() {
            if irreducibles_equivalent(f, &piece)? {
                found = Some(i);
                break;
            }
        }
        let idx = match found {
            Some(i) => {
                factors[i].1 += 1;
                i
            }
            None => {
                factors.push((piece, 1));
                factors.len() - 1
            }
        };
        blocks.push((idx, frame));
    }
    // order factors by dimension, keeping first-seen order within a dimension
    let mut order: Vec<usize> = (0..factors.len()).collect();
    order.sort_by_key(|&i| factors[i].0.dim());
    let mut remap = vec![0; factors.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    let mut sorted: Vec<Option<(UnitaryRep, usize)>> = factors.into_iter().map(Some).collect();
    let factors = order.iter().map(|&i| sorted[i].take().expect("each once")).collect();
    let blocks = blocks.into_iter().map(|(i, f)| (remap[i], f)).collect();
    Ok(Decomposition { factors, blocks })
}

/// Polar unitary factor of an invertible intertwiner `P` from `ρ` to `ρ'`.
/// For unitary representations the factor again intertwines.
pub fn unitarize_intertwiner(rho: &UnitaryRep, rho2: &UnitaryRep, p: &CMat) -> Result<CMat> {
    rho.require_verified()?;
    rho2.require_verified()?;
    if rho.dim() != rho2.dim() || p.nrows() != rho.dim() || p.ncols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: p.nrows(),
        });
    }
    let tol = rho.tolerances();
    let u = numeric::polar_unitary(p, tol.rank_tol)?;
    let residual = |x: &CMat| {
        rho.generator_images()
            .iter()
            .zip(rho2.generator_images())
            .map(|(a, b)| numeric::max_abs(&(x * *a - b * x)))
            .fold(0.0, f64::max)
    };
    let sv = p.clone().singular_values();
    let smax = sv.iter().fold(0.0f64, |m, &s| m.max(s));
    let smin = sv.iter().fold(f64::INFINITY, |m, &s| m.min(s));
    let input = residual(p) / smax;
    let out = residual(&u);
    if out > tol.relation_tol + 10.0 * (smax / smin) * input {
        return Err(Error::Tolerance(format!(
            "polar factor fails to intertwine (residual {out:.3e})"
        )));
    }
    Ok(u)
}

/// Equivalence by matching irreducible factors and multiplicities.
pub fn equivalent(rho: &UnitaryRep, rho2: &UnitaryRep, seed: u64) -> Result<bool> {
    rho.require_verified()?;
    rho2.require_verified()?;
    if rho.group() != rho2.group() {
        return Err(Error::input("equivalence between representations of different groups"));
    }
    if rho.dim() != rho2.dim() {
        return Ok(false);
    }
    if rho.dim() == 0 {
        return Ok(true);
    }
    let a = decompose(rho, seed)?;
    let b = decompose(rho2, seed.wrapping_add(1))?;
    if a.factors.len() != b.factors.len() {
        return Ok(false);
    }
    let mut used = vec![false; b.factors.len()];
    for (fa, ma) in &a.factors {
        let mut matched = false;
        for (j, (fb, mb)) in b.factors.iter().enumerate() {
            if !used[j] && ma == mb && irreducibles_equivalent(fa, fb)? {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::family_rep_gamma_k;
    use crate::group::VaGroup;
    use crate::numeric::{cis, haar_unitary};
    use std::sync::Arc;

    fn g1() -> Arc<VaGroup> {
        Arc::new(VaGroup::gamma_k(1).unwrap())
    }

    #[test]
    fn commutant_of_identity_is_full() {
        let rho = UnitaryRep::trivial(g1(), 2);
        assert_eq!(commutant(&rho).unwrap().dim(), 4);
    }

    #[test]
    fn generic_family_rep_irreducible() {
        let rho = family_rep_gamma_k(g1(), &[c(0.0, 1.0)], cis(0.4)).unwrap();
        assert_eq!(commutant(&rho).unwrap().dim(), 1);
        assert!(is_irreducible(&rho).unwrap());
        let one = UnitaryRep::trivial(g1(), 1);
        assert!(is_irreducible(&one).unwrap());
    }

    #[test]
    fn conjugate_intertwiner_recovers_v() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = family_rep_gamma_k(g1(), &[cis(1.2)], cis(-0.5)).unwrap();
        let v = haar_unitary(&mut rng, 2);
        let conj = rho.conjugate(&v).unwrap();
        let space = intertwiners(&rho, &conj).unwrap();
        assert_eq!(space.dim(), 1);
        let x = &space.basis[0];
        // x = λ V with |λ| = 1/√2 (unit Frobenius norm)
        let lambda = (v.adjoint() * x).trace() / c(2.0, 0.0);
        assert!(numeric::dist(x, &(&v * lambda)) < 1e-10);
    }

    #[test]
    fn doubled_irreducible() {
        let rho = family_rep_gamma_k(g1(), &[c(0.0, 1.0)], cis(2.2)).unwrap();
        let d = decompose(&rho.direct_sum(&rho).unwrap(), 0).unwrap();
        assert_eq!(d.dims(), vec![(2, 2)]);
    }

    #[test]
    fn boundary_point_splits_into_characters() {
        let rho = family_rep_gamma_k(g1(), &[c(1.0, 0.0)], cis(0.9)).unwrap();
        let d = decompose(&rho, 3).unwrap();
        assert_eq!(d.dims(), vec![(1, 1), (1, 1)]);
        let total: usize = d.factors.iter().map(|(f, m)| f.dim() * m).sum();
        assert_eq!(total, 2);
        for (f, _) in &d.factors {
            assert!(f.verify().passed);
        }
    }

    #[test]
    fn decomposition_frames_conjugate_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = g1();
        let a = family_rep_gamma_k(g.clone(), &[cis(0.3)], cis(0.1)).unwrap();
        let b = family_rep_gamma_k(g.clone(), &[c(-1.0, 0.0)], cis(2.0)).unwrap();
        let sum = a.direct_sum(&b).unwrap().conjugate(&haar_unitary(&mut rng, 4)).unwrap();
        let d = decompose(&sum, 1).unwrap();
        assert_eq!(d.dims(), vec![(1, 1), (1, 1), (2, 1)]);
        let frames: Vec<&CMat> = d.blocks.iter().map(|(_, f)| f).collect();
        let w = numeric::hcat(&frames, 4);
        assert!(numeric::unitarity_residual(&w) < 1e-9);
    }

    #[test]
    fn polar_of_scaled_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = family_rep_gamma_k(g1(), &[cis(1.0)], cis(0.3)).unwrap();
        let v = haar_unitary(&mut rng, 2);
        let conj = rho.conjugate(&v).unwrap();
        let u = unitarize_intertwiner(&rho, &conj, &(&v * c(2.0, 0.0))).unwrap();
        assert!(numeric::dist(&u, &v) < 1e-12);
        let u = unitarize_intertwiner(&rho, &conj, &v).unwrap();
        assert!(numeric::dist(&u, &v) < 1e-12);
        assert!(unitarize_intertwiner(&rho, &conj, &CMat::zeros(2, 2)).is_err());
    }

    #[test]
    fn random_invertible_intertwiner_unitarizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let rho = family_rep_gamma_k(g1(), &[c(0.0, 1.0)], cis(0.7)).unwrap();
        let v = haar_unitary(&mut rng, 2);
        let conj = rho.conjugate(&v).unwrap();
        let p = &v * c(0.3, -1.7);
        let u = unitarize_intertwiner(&rho, &conj, &p).unwrap();
        assert!(numeric::unitarity_residual(&u) < 1e-12);
        for (a, b) in rho.generator_images().iter().zip(conj.generator_images()) {
            assert!(numeric::max_abs(&(&u * *a - b * &u)) < 1e-9);
        }
    }

    #[test]
    fn equivalence_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = g1();
        let z = cis(0.6);
        let alpha = cis(1.4);
        let rho = family_rep_gamma_k(g.clone(), &[z], alpha).unwrap();
        let conj = rho.conjugate(&haar_unitary(&mut rng, 2)).unwrap();
        assert!(equivalent(&rho, &conj, 0).unwrap());
        let inv = family_rep_gamma_k(g.clone(), &[z.conj()], alpha).unwrap();
        assert!(equivalent(&rho, &inv, 0).unwrap());
        let i = c(0.0, 1.0);
        let p = family_rep_gamma_k(g.clone(), &[i], alpha).unwrap();
        let m = family_rep_gamma_k(g.clone(), &[i], -alpha).unwrap();
        assert!(!equivalent(&p, &m, 0).unwrap());
        assert_eq!(intertwiners(&p, &m).unwrap().dim(), 0);
    }
}
