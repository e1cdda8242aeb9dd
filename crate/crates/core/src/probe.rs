//! Tangent-space dimension of the representation variety at a point.
//!
//! A tangent vector at ρ is a tuple of skew-Hermitian `X_g`, one per
//! generator, perturbing `ρ(g)` to `exp(X_g) ρ(g)`. For a relation word
//! `R = lhs · rhs⁻¹` the perturbed value is `exp(D_R X) R(ρ)` to first
//! order, with
//!
//! `D_R X = Σ_j ε_j Ad(P_j) X_{g_j}`
//!
//! where `P_j` is the prefix before letter `j` for `ε_j = +1`, and the
//! prefix including it for `ε_j = -1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{relation_checklist, Generator, Relation, VaGroup};
use crate::numeric::{self, c, CMat};
use crate::rep::{commutant, is_irreducible, UnitaryRep};

pub(crate) fn generator_index(g: &VaGroup, gen: Generator) -> usize {
    match gen {
        Generator::Lattice(i) => i,
        Generator::Lift(q) => g.rank() + q - 1,
    }
}

/// Orthonormal real basis of u(n) under `Re tr(Xᴴ Y)`.
fn skew_basis(n: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(n * n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..n {
        let mut x = CMat::zeros(n, n);
        x[(j, j)] = c(0.0, 1.0);
        out.push(x);
    }
    for j in 0..n {
        for l in j + 1..n {
            let mut x = CMat::zeros(n, n);
            x[(j, l)] = c(s, 0.0);
            x[(l, j)] = c(-s, 0.0);
            out.push(x);
            let mut y = CMat::zeros(n, n);
            y[(j, l)] = c(0.0, s);
            y[(l, j)] = c(0.0, s);
            out.push(y);
        }
    }
    out
}

/// Coordinates of the skew-Hermitian part of `y` in [`skew_basis`].
fn skew_coords(y: &CMat, out: &mut [f64]) {
    let n = y.nrows();
    let r2 = std::f64::consts::SQRT_2;
    for j in 0..n {
        out[j] = y[(j, j)].im;
    }
    let mut at = n;
    for j in 0..n {
        for l in j + 1..n {
            let a = 0.5 * (y[(j, l)] - y[(l, j)].conj());
            out[at] = r2 * a.re;
            out[at + 1] = r2 * a.im;
            at += 2;
        }
    }
}

fn from_skew_coords(x: &[f64], n: usize) -> CMat {
    let basis = skew_basis(n);
    let mut out = CMat::zeros(n, n);
    for (b, &t) in basis.iter().zip(x) {
        out += b * c(t, 0.0);
    }
    out
}

/// One letter `g^ε` of an expanded relation word with its conjugator.
struct Letter {
    generator: usize,
    sign: f64,
    conj: CMat,
}

/// The linear map `X ↦ (D_R X)_R` at given generator images.
pub(crate) struct Linearization {
    pub n: usize,
    pub generators: usize,
    relations: Vec<Relation>,
    letters: Vec<Vec<Letter>>,
    /// `R(ρ)` for each relation.
    values: Vec<CMat>,
}

impl Linearization {
    pub fn new(g: &VaGroup, images: &[CMat]) -> Self {
        let n = images.first().map_or(0, |m| m.nrows());
        let relations = relation_checklist(g);
        let inverses: Vec<CMat> = images.iter().map(|m| m.adjoint()).collect();
        let mut letters = Vec::with_capacity(relations.len());
        let mut values = Vec::with_capacity(relations.len());
        for rel in &relations {
            let mut word: Vec<(usize, i64)> = rel.lhs.0.iter().map(|&(x, e)| (generator_index(g, x), e)).collect();
            word.extend(rel.rhs.0.iter().rev().map(|&(x, e)| (generator_index(g, x), -e)));
            let mut p = numeric::eye(n);
            let mut ls = Vec::new();
            for (gi, e) in word {
                for _ in 0..e.unsigned_abs() {
                    if e > 0 {
                        ls.push(Letter {
                            generator: gi,
                            sign: 1.0,
                            conj: p.clone(),
                        });
                        p *= &images[gi];
                    } else {
                        p *= &inverses[gi];
                        ls.push(Letter {
                            generator: gi,
                            sign: -1.0,
                            conj: p.clone(),
                        });
                    }
                }
            }
            letters.push(ls);
            values.push(p);
        }
        Linearization {
            n,
            generators: images.len(),
            relations,
            letters,
            values,
        }
    }

    pub fn unknowns(&self) -> usize {
        self.generators * self.n * self.n
    }

    pub fn equations(&self) -> usize {
        self.relations.len() * self.n * self.n
    }

    /// Real matrix, rows by relation then coordinate, columns by generator then coordinate.
    pub fn matrix(&self) -> nalgebra::DMatrix<f64> {
        let d = self.n * self.n;
        let mut m = nalgebra::DMatrix::zeros(self.equations(), self.unknowns());
        let basis = skew_basis(self.n);
        let mut buf = vec![0.0; d];
        for (ri, ls) in self.letters.iter().enumerate() {
            for (bi, b) in basis.iter().enumerate() {
                let mut acc: Vec<Option<CMat>> = vec![None; self.generators];
                for l in ls {
                    let term = &l.conj * b * l.conj.adjoint() * c(l.sign, 0.0);
                    match &mut acc[l.generator] {
                        Some(a) => *a += term,
                        slot => *slot = Some(term),
                    }
                }
                for (gi, y) in acc.into_iter().enumerate() {
                    if let Some(y) = y {
                        skew_coords(&y, &mut buf);
                        for (t, &v) in buf.iter().enumerate() {
                            m[(ri * d + t, gi * d + bi)] = v;
                        }
                    }
                }
            }
        }
        m
    }

    /// First-order logarithm of each `R(ρ)`, stacked as coordinates.
    pub fn log_residual(&self) -> nalgebra::DVector<f64> {
        let d = self.n * self.n;
        let mut out = nalgebra::DVector::zeros(self.equations());
        let mut buf = vec![0.0; d];
        for (ri, r) in self.values.iter().enumerate() {
            skew_coords(r, &mut buf);
            out.rows_mut(ri * d, d).copy_from_slice(&buf);
        }
        out
    }

    pub fn residual_table(&self) -> Vec<(String, f64)> {
        self.relations
            .iter()
            .zip(&self.values)
            .map(|(rel, v)| (rel.to_string(), numeric::dist(v, &numeric::eye(self.n))))
            .collect()
    }
}

pub(crate) fn to_complex(m: &nalgebra::DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `(X_g)_g ↦ exp(X_g) M_g`.
pub(crate) fn apply_step(images: &[CMat], x: &nalgebra::DVector<f64>) -> Vec<CMat> {
    let n = images.first().map_or(0, |m| m.nrows());
    let d = n * n;
    images
        .iter()
        .enumerate()
        .map(|(gi, m)| {
            let xs: Vec<f64> = x.rows(gi * d, d).iter().copied().collect();
            numeric::exp_skew(&from_skew_coords(&xs, n)) * m
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleSpace {
    pub dim: usize,
    pub unknowns: usize,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// A singular value within 10x of the threshold.
    pub ambiguous: bool,
    pub residuals: Vec<(String, f64)>,
}

fn cocycle_null_space(rho: &UnitaryRep) -> Result<(Linearization, numeric::NullSpace)> {
    if !rho.is_verified() {
        return Err(Error::Unverified("representation has not been verified".into()));
    }
    if rho.dim() == 0 {
        return Err(Error::input("zero-dimensional representation"));
    }
    let images: Vec<CMat> = rho.generator_images().into_iter().cloned().collect();
    let lin = Linearization::new(rho.group(), &images);
    let ns = numeric::null_space_scaled(&to_complex(&lin.matrix()), rho.tolerances().rank_tol, 1.0);
    Ok((lin, ns))
}

pub fn cocycle_space_dim(rho: &UnitaryRep) -> Result<CocycleSpace> {
    let (lin, ns) = cocycle_null_space(rho)?;
    Ok(CocycleSpace {
        dim: ns.dim(),
        unknowns: lin.unknowns(),
        ambiguous: ns.ambiguous(10.0),
        singular_values: ns.singular_values,
        threshold: ns.threshold,
        residuals: lin.residual_table(),
    })
}

/// Real rank of `Y ↦ (Y - Ad(ρ(g)) Y)_g` on u(n).
pub fn coboundary_dim(rho: &UnitaryRep) -> Result<usize> {
    rho.is_verified()
        .then_some(())
        .ok_or_else(|| Error::Unverified("representation has not been verified".into()))?;
    let n = rho.dim();
    let d = n * n;
    let gens = rho.generator_images();
    let basis = skew_basis(n);
    let mut m = nalgebra::DMatrix::zeros(gens.len() * d, d);
    let mut buf = vec![0.0; d];
    for (bi, y) in basis.iter().enumerate() {
        for (gi, g) in gens.iter().enumerate() {
            let x = y - *g * y * g.adjoint();
            skew_coords(&x, &mut buf);
            for (t, &v) in buf.iter().enumerate() {
                m[(gi * d + t, bi)] = v;
            }
        }
    }
    let ns = numeric::null_space_scaled(&to_complex(&m), rho.tolerances().rank_tol, 1.0);
    Ok(d - ns.dim())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalDimReport {
    pub z1_dim: usize,
    pub orbit_dim: usize,
    pub local_moduli_dim: usize,
    pub coboundary_dim: usize,
    pub bound: usize,
    pub ambiguous: bool,
    pub pass: bool,
    pub residuals: Vec<(String, f64)>,
}

pub fn local_moduli_dim(rho: &UnitaryRep) -> Result<LocalDimReport> {
    if !is_irreducible(rho)? {
        return Err(Error::Reducible);
    }
    let z1 = cocycle_space_dim(rho)?;
    let n = rho.dim();
    // the skew-Hermitian part of the commutant has the same real dimension
    // as the complex commutant
    let orbit_dim = n * n - commutant(rho)?.dim();
    let cob = coboundary_dim(rho)?;
    if cob != orbit_dim {
        return Err(Error::Tolerance(format!(
            "coboundary rank {cob} disagrees with orbit dimension {orbit_dim}"
        )));
    }
    let local = z1
        .dim
        .checked_sub(orbit_dim)
        .ok_or_else(|| Error::Internal("cocycle space smaller than the orbit".into()))?;
    let bound = rho.group().rank();
    Ok(LocalDimReport {
        z1_dim: z1.dim,
        orbit_dim,
        local_moduli_dim: local,
        coboundary_dim: cob,
        bound,
        ambiguous: z1.ambiguous,
        pass: local <= bound,
        residuals: z1.residuals,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteDifferenceReport {
    pub h: f64,
    /// Distance of the difference quotient from the cocycle space, at `h` and `h/2`.
    pub residual: f64,
    pub residual_half: f64,
    pub threshold: f64,
    pub threshold_half: f64,
    pub derivative_norm: f64,
    pub passed: bool,
}

fn derivative_coords(rho: &UnitaryRep, curve: &dyn Fn(f64) -> Vec<CMat>, h: f64) -> Result<nalgebra::DVector<f64>> {
    let (plus, minus) = (curve(h), curve(-h));
    let gens = rho.generator_images();
    if plus.len() != gens.len() || minus.len() != gens.len() {
        return Err(Error::DimensionMismatch {
            expected: gens.len(),
            found: plus.len(),
        });
    }
    let n = rho.dim();
    let d = n * n;
    let mut out = nalgebra::DVector::zeros(gens.len() * d);
    let mut buf = vec![0.0; d];
    for (gi, g) in gens.iter().enumerate() {
        if plus[gi].shape() != (n, n) || minus[gi].shape() != (n, n) {
            return Err(Error::input("curve images have the wrong size"));
        }
        let x = (&plus[gi] - &minus[gi]) * c(0.5 / h, 0.0) * g.adjoint();
        skew_coords(&x, &mut buf);
        out.rows_mut(gi * d, d).copy_from_slice(&buf);
    }
    Ok(out)
}

fn distance_to_span(basis: &CMat, v: &nalgebra::DVector<f64>) -> f64 {
    let vc = v.map(|x| Complex64::new(x, 0.0));
    let proj = basis * (basis.adjoint() * &vc);
    (vc - proj).norm()
}

/// Checks that the derivative at 0 of `curve` (generator images, in the
/// order of [`UnitaryRep::generator_images`]) lies in the cocycle space.
pub fn finite_difference_crosscheck(
    rho: &UnitaryRep,
    curve: &dyn Fn(f64) -> Vec<CMat>,
    h: f64,
) -> Result<FiniteDifferenceReport> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::input("step must be positive"));
    }
    let (_, ns) = cocycle_null_space(rho)?;
    let full = derivative_coords(rho, curve, h)?;
    let half = derivative_coords(rho, curve, h / 2.0)?;
    let scale = full.norm().max(1.0);
    let residual = distance_to_span(&ns.basis, &full);
    let residual_half = distance_to_span(&ns.basis, &half);
    let threshold = 10.0 * h * h * scale;
    let threshold_half = 10.0 * (h / 2.0) * (h / 2.0) * scale;
    Ok(FiniteDifferenceReport {
        h,
        residual,
        residual_half,
        threshold,
        threshold_half,
        derivative_norm: full.norm(),
        passed: residual <= threshold && residual_half <= threshold_half,
    })
}

/// `t ↦ exp(tY) ρ exp(-tY)`.
pub fn conjugation_curve(rho: &UnitaryRep, y: CMat) -> impl Fn(f64) -> Vec<CMat> + '_ {
    move |t| {
        let e = numeric::exp_skew(&(&y * c(t, 0.0)));
        let ei = e.adjoint();
        rho.generator_images().into_iter().map(|m| &e * m * &ei).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::family_rep_gamma_k;
    use crate::numeric::{cis, haar_unitary, random_hermitian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn skew(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        random_hermitian(rng, n) * c(0.0, 1.0)
    }

    #[test]
    fn coordinates_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = skew(&mut rng, 4);
        let mut buf = vec![0.0; 16];
        skew_coords(&x, &mut buf);
        assert!(numeric::dist(&from_skew_coords(&buf, 4), &x) < 1e-14);
    }

    #[test]
    fn trivial_rep_of_plane_lattice() {
        let g = Arc::new(VaGroup::free_abelian(2));
        let rho = UnitaryRep::trivial(g, 1);
        assert_eq!(cocycle_space_dim(&rho).unwrap().dim, 2);
        let r = local_moduli_dim(&rho).unwrap();
        assert_eq!((r.orbit_dim, r.local_moduli_dim, r.bound), (0, 2, 2));
    }

    #[test]
    fn generic_family_attains_rank() {
        for k in 1..=3 {
            let g = Arc::new(VaGroup::gamma_k(k).unwrap());
            let z: Vec<_> = (0..k).map(|i| cis(0.7 + 0.9 * i as f64)).collect();
            let rho = family_rep_gamma_k(g, &z, cis(1.3)).unwrap();
            let r = local_moduli_dim(&rho).unwrap();
            assert_eq!(r.z1_dim, k + 4, "k = {k}");
            assert_eq!(r.orbit_dim, 3);
            assert_eq!(r.coboundary_dim, 3);
            assert_eq!(r.local_moduli_dim, k + 1);
            assert!(r.pass && !r.ambiguous);
        }
    }

    #[test]
    fn conjugation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = Arc::new(VaGroup::gamma_k(2).unwrap());
        let rho = family_rep_gamma_k(g, &[cis(0.3), cis(2.0)], cis(-1.0)).unwrap();
        let base = cocycle_space_dim(&rho).unwrap().dim;
        for _ in 0..10 {
            let v = haar_unitary(&mut rng, 2);
            assert_eq!(cocycle_space_dim(&rho.conjugate(&v).unwrap()).unwrap().dim, base);
        }
    }

    #[test]
    fn scalar_on_lattice_character() {
        let g = Arc::new(VaGroup::gamma_k(1).unwrap());
        let u = cis(0.4);
        let rho = UnitaryRep::new(
            g,
            vec![CMat::from_element(1, 1, c(-1.0, 0.0)), CMat::from_element(1, 1, u * u)],
            vec![CMat::from_element(1, 1, u)],
        )
        .unwrap();
        let r = local_moduli_dim(&rho).unwrap();
        assert_eq!(r.local_moduli_dim, 1);
        assert!(r.pass);
    }

    #[test]
    fn curves_through_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Arc::new(VaGroup::gamma_k(1).unwrap());
        let theta = 0.17;
        let alpha = cis(0.8);
        let rho = family_rep_gamma_k(g.clone(), &[cis(std::f64::consts::TAU * theta)], alpha).unwrap();
        let conj = conjugation_curve(&rho, skew(&mut rng, 2));
        assert!(finite_difference_crosscheck(&rho, &conj, 1e-5).unwrap().passed);
        let zcurve = |t: f64| {
            family_rep_gamma_k(g.clone(), &[cis(std::f64::consts::TAU * (theta + t))], alpha)
                .unwrap()
                .generator_images()
                .into_iter()
                .cloned()
                .collect::<Vec<_>>()
        };
        assert!(finite_difference_crosscheck(&rho, &zcurve, 1e-5).unwrap().passed);
        let y = skew(&mut rng, 2);
        let off = |t: f64| {
            let mut m: Vec<CMat> = rho.generator_images().into_iter().cloned().collect();
            m[2] = numeric::exp_skew(&(&y * c(t, 0.0))) * &m[2];
            m
        };
        let report = finite_difference_crosscheck(&rho, &off, 1e-5).unwrap();
        assert!(!report.passed && report.residual > 1e-3);
    }

    #[test]
    fn reducible_rejected() {
        let g = Arc::new(VaGroup::gamma_k(1).unwrap());
        assert!(matches!(local_moduli_dim(&UnitaryRep::trivial(g, 2)), Err(Error::Reducible)));
    }
}
