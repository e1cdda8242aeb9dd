//! Representations that are scalar on the lattice and their projective
//! descent to the point group.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroupTable;
use crate::numeric::{self, c, cis, CMat};
use crate::rep::{is_irreducible, UnitaryRep};
use crate::torus::TorusChar;

/// Normalized circle-valued 2-cocycle on a finite group, `σ(q, r)` at `q * |Q| + r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryCocycle {
    order: usize,
    values: Vec<Complex64>,
}

impl UnitaryCocycle {
    pub fn new(pg: &FiniteGroupTable, values: Vec<Complex64>, tol: f64) -> Result<Self> {
        let n = pg.order();
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: values.len(),
            });
        }
        let sigma = UnitaryCocycle { order: n, values };
        if sigma.values.iter().any(|z| (z.norm() - 1.0).abs() > tol) {
            return Err(Error::input("cocycle values must have unit modulus"));
        }
        for q in 0..n {
            if (sigma.get(0, q) - 1.0).norm() > tol || (sigma.get(q, 0) - 1.0).norm() > tol {
                return Err(Error::input("cocycle is not normalized"));
            }
        }
        let r = sigma.identity_residual(pg);
        if r > tol {
            return Err(Error::input(format!("cocycle identity fails (residual {r:.3e})")));
        }
        Ok(sigma)
    }

    pub fn trivial(order: usize) -> Self {
        UnitaryCocycle {
            order,
            values: vec![c(1.0, 0.0); order * order],
        }
    }

    /// Values `exp(2πi e / root_order)`.
    pub fn from_exponents(pg: &FiniteGroupTable, root_order: u32, exps: &[u32]) -> Result<Self> {
        let vals = exps
            .iter()
            .map(|&e| cis(std::f64::consts::TAU * e as f64 / root_order as f64))
            .collect();
        Self::new(pg, vals, 1e-9)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, q: usize, r: usize) -> Complex64 {
        self.values[q * self.order + r]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Largest defect of `σ(q,r) σ(qr,s) = σ(r,s) σ(q,rs)`.
    pub fn identity_residual(&self, pg: &FiniteGroupTable) -> f64 {
        let n = self.order;
        let mut worst = 0.0f64;
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let lhs = self.get(q, r) * self.get(pg.mul(q, r), s);
                    let rhs = self.get(r, s) * self.get(q, pg.mul(r, s));
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    /// Exponents modulo `root_order`; values off that grid are rejected.
    pub fn to_exponents(&self, root_order: u32, tol: f64) -> Result<Vec<u32>> {
        let n = root_order as f64;
        self.values
            .iter()
            .map(|z| {
                let t = (z.arg() / std::f64::consts::TAU * n).rem_euclid(n);
                let e = t.round();
                if (t - e).abs() * std::f64::consts::TAU / n > tol && (n - t).abs() > tol {
                    return Err(Error::input(format!(
                        "cocycle value {z} is not a {root_order}-th root of unity"
                    )));
                }
                Ok((e as u32) % root_order)
            })
            .collect()
    }

    pub fn max_distance(&self, other: &UnitaryCocycle) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Descent data of a representation that is scalar on the lattice.
#[derive(Clone, Debug)]
pub struct ProjectiveDescent {
    pub source: UnitaryRep,
    pub central_char: TorusChar,
    /// `lift[q] = ρ(0, q)`.
    pub lifts: Vec<CMat>,
    /// `lift(q) lift(r) = σ(q, r) lift(qr)`; for a genuine representation
    /// this is `λ(c(q, r))`.
    pub cocycle: UnitaryCocycle,
    /// Largest deviation of `lift(q) lift(r) (λ(c(q,r)) lift(qr))⁻¹` from I.
    pub lattice_corrected_residual: f64,
}

/// `Some(λ)` when every lattice image is `λ(e_i) I` within `equality_tol`.
pub fn is_scalar_on_a(rho: &UnitaryRep) -> Result<Option<TorusChar>> {
    if !rho.is_verified() {
        return Err(Error::Unverified("representation has not been verified".into()));
    }
    let n = rho.dim();
    if n == 0 {
        return Err(Error::input("the zero-dimensional representation has no central character"));
    }
    let tol = rho.tolerances().equality_tol;
    let mut values = Vec::new();
    for a in rho.lattice_images() {
        let z = a.trace() / c(n as f64, 0.0);
        if numeric::dist(a, &(numeric::eye(n) * z)) > tol {
            return Ok(None);
        }
        values.push(z / z.norm());
    }
    Ok(Some(TorusChar::from_values(&values)?))
}

/// Scalar `s` with `a ≈ s b`, checked to `tol`.
fn scalar_ratio(a: &CMat, b: &CMat, tol: f64) -> Result<Complex64> {
    let n = a.nrows() as f64;
    let s = (b.adjoint() * a).trace() / c(n, 0.0);
    let r = numeric::dist(a, &(b * s));
    if r > tol {
        return Err(Error::Internal(format!("lift product is not a scalar multiple (residual {r:.3e})")));
    }
    Ok(s)
}

pub fn descend(rho: &UnitaryRep) -> Result<ProjectiveDescent> {
    let lambda = is_scalar_on_a(rho)?
        .ok_or_else(|| Error::input("representation is not scalar on the lattice"))?;
    let g = rho.group();
    let pg = g.point_group();
    let n = g.q_order();
    let tol = rho.tolerances().equality_tol;
    let lifts: Vec<CMat> = (0..n).map(|q| rho.lift_image(q).clone()).collect();
    let mut values = Vec::with_capacity(n * n);
    let mut corrected = 0.0f64;
    for q in 0..n {
        for r in 0..n {
            let qr = pg.mul(q, r);
            let prod = &lifts[q] * &lifts[r];
            let s = scalar_ratio(&prod, &lifts[qr], tol)?;
            let expected = lambda.value(g.cocycle(q, r));
            let dev = numeric::dist(&(&prod * lifts[qr].adjoint() * expected.conj()), &numeric::eye(rho.dim()));
            corrected = corrected.max(dev);
            values.push(s / s.norm());
        }
    }
    if corrected > tol {
        return Err(Error::Internal(format!(
            "lattice-corrected lift ratio deviates from the identity by {corrected:.3e}"
        )));
    }
    let cocycle = UnitaryCocycle::new(pg, values, tol.max(1e-9))
        .map_err(|e| Error::Internal(format!("descended cocycle invalid: {e}")))?;
    Ok(ProjectiveDescent {
        source: rho.clone(),
        central_char: lambda,
        lifts,
        cocycle,
        lattice_corrected_residual: corrected,
    })
}

/// The lifts span the same operator algebra as the source up to scalars,
/// so projective irreducibility is irreducibility of the source.
pub fn irreducible_as_projective(d: &ProjectiveDescent) -> Result<bool> {
    is_irreducible(&d.source)
}

/// Two descents give the same map to PU(n) when their lifts agree up to scalars.
pub fn same_projective_class(a: &ProjectiveDescent, b: &ProjectiveDescent, tol: f64) -> bool {
    a.lifts.len() == b.lifts.len()
        && a.lifts.iter().zip(&b.lifts).all(|(x, y)| {
            x.shape() == y.shape() && scalar_ratio(x, y, tol).is_ok()
        })
}

/// Number of conjugacy classes all of whose elements `g` satisfy
/// `σ(g,h) = σ(h,g)` for every `h` in the centralizer of `g`.
pub fn sigma_regular_count(pg: &FiniteGroupTable, sigma: &UnitaryCocycle, tol: f64) -> Result<usize> {
    if sigma.order() != pg.order() {
        return Err(Error::DimensionMismatch {
            expected: pg.order(),
            found: sigma.order(),
        });
    }
    let regular = |g: usize| {
        pg.centralizer(g)
            .into_iter()
            .all(|h| (sigma.get(g, h) - sigma.get(h, g)).norm() <= tol)
    };
    let mut count = 0;
    for class in pg.conjugacy_classes() {
        let flags: Vec<bool> = class.iter().map(|&g| regular(g)).collect();
        if flags.iter().any(|&f| f != flags[0]) {
            return Err(Error::Tolerance(
                "σ-regularity is not constant on a conjugacy class".into(),
            ));
        }
        if flags[0] {
            count += 1;
        }
    }
    Ok(count)
}

/// A 1-dimensional character of the point group, `value(q) = exp(2πi e_q / |Q|)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QCharacter {
    pub exponents: Vec<u32>,
    pub modulus: u32,
}

impl QCharacter {
    pub fn value(&self, q: usize) -> Complex64 {
        cis(std::f64::consts::TAU * self.exponents[q] as f64 / self.modulus as f64)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

/// All homomorphisms Q → U(1), by exhaustive assignment on the generators.
pub fn q_characters(pg: &FiniteGroupTable) -> Vec<QCharacter> {
    let n = pg.order();
    let m = n as u32;
    let gens = pg.generators().to_vec();
    let mut out = Vec::new();
    let total = (m as u64).pow(gens.len() as u32);
    for code in 0..total {
        let mut c = code;
        let gen_exp: Vec<u32> = gens
            .iter()
            .map(|_| {
                let e = (c % m as u64) as u32;
                c /= m as u64;
                e
            })
            .collect();
        // propagate along words in the generators
        let mut exps: Vec<Option<u32>> = vec![None; n];
        exps[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in gens.iter().enumerate() {
                let y = pg.mul(x, g);
                if exps[y].is_none() {
                    exps[y] = Some((exps[x].unwrap() + gen_exp[gi]) % m);
                    queue.push_back(y);
                }
            }
        }
        let exps: Vec<u32> = exps.into_iter().map(|e| e.expect("generators generate")).collect();
        let hom = (0..n).all(|a| (0..n).all(|b| exps[pg.mul(a, b)] == (exps[a] + exps[b]) % m));
        if hom {
            out.push(QCharacter {
                exponents: exps,
                modulus: m,
            });
        }
    }
    out
}

/// `(χ·ρ)(γ) = χ([γ]) ρ(γ)`.
pub fn twist(chi: &QCharacter, rho: &UnitaryRep) -> Result<UnitaryRep> {
    if !rho.is_verified() {
        return Err(Error::Unverified("representation has not been verified".into()));
    }
    let n = rho.group().q_order();
    if chi.exponents.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: chi.exponents.len(),
        });
    }
    let lifts = (1..n).map(|q| rho.lift_image(q) * chi.value(q)).collect();
    rho.rebuild(rho.lattice_images().to_vec(), lifts)
}

/// If `rho2 = χ·rho` for some point group character, that character.
pub fn twist_between(rho: &UnitaryRep, rho2: &UnitaryRep) -> Result<Option<QCharacter>> {
    if rho.group() != rho2.group() || rho.dim() != rho2.dim() || rho.dim() == 0 {
        return Ok(None);
    }
    let tol = rho.tolerances().equality_tol;
    if rho.lattice_images().iter().zip(rho2.lattice_images()).any(|(a, b)| numeric::dist(a, b) > tol) {
        return Ok(None);
    }
    let pg = rho.group().point_group();
    let mut exps = vec![0u32; pg.order()];
    let m = pg.order() as u32;
    for (q, e) in exps.iter_mut().enumerate().skip(1) {
        let Ok(s) = scalar_ratio(rho2.lift_image(q), rho.lift_image(q), tol) else {
            return Ok(None);
        };
        let t = (s.arg() / std::f64::consts::TAU * m as f64).rem_euclid(m as f64);
        let r = t.round();
        if (t - r).abs() > 1e-6 {
            return Ok(None);
        }
        *e = (r as u32) % m;
    }
    let chi = QCharacter { exponents: exps, modulus: m };
    Ok(q_characters(pg).contains(&chi).then_some(chi))
}

/// Searches normalized `b: Q → μ_N` with `σ' = σ · δb`; returns `b` as exponents.
pub fn cohomologous(
    pg: &FiniteGroupTable,
    sigma: &UnitaryCocycle,
    sigma2: &UnitaryCocycle,
    root_order: u32,
) -> Result<Option<Vec<u32>>> {
    let n = pg.order();
    if sigma.order() != n || sigma2.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sigma2.order(),
        });
    }
    if root_order == 0 {
        return Err(Error::input("root order must be positive"));
    }
    let e1 = sigma.to_exponents(root_order, 1e-9)?;
    let e2 = sigma2.to_exponents(root_order, 1e-9)?;
    let m = root_order;
    let mut b: Vec<Option<u32>> = vec![None; n];
    b[0] = Some(0);
    // consistent on all pairs whose three entries are assigned
    let ok = |b: &[Option<u32>]| {
        (0..n).all(|q| {
            (0..n).all(|r| {
                let qr = pg.mul(q, r);
                match (b[q], b[r], b[qr]) {
                    (Some(x), Some(y), Some(z)) => (e1[q * n + r] + x + y + m - z) % m == e2[q * n + r] % m,
                    _ => true,
                }
            })
        })
    };
    fn search(
        idx: usize,
        n: usize,
        m: u32,
        b: &mut Vec<Option<u32>>,
        ok: &dyn Fn(&[Option<u32>]) -> bool,
    ) -> bool {
        if idx == n {
            return true;
        }
        for v in 0..m {
            b[idx] = Some(v);
            if ok(b) && search(idx + 1, n, m, b, ok) {
                return true;
            }
        }
        b[idx] = None;
        false
    }
    if !ok(&b) {
        return Ok(None);
    }
    if search(1, n, m, &mut b, &ok) {
        Ok(Some(b.into_iter().map(|x| x.unwrap()).collect()))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::family_rep_gamma_k;
    use crate::group::VaGroup;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn klein() -> FiniteGroupTable {
        FiniteGroupTable::product(&FiniteGroupTable::cyclic(2), &FiniteGroupTable::cyclic(2))
    }

    /// Signs of the quaternion units i = 2, j = 1, k = 3 on C₂×C₂.
    fn quaternion_cocycle(pg: &FiniteGroupTable) -> UnitaryCocycle {
        let mut e = vec![0u32; 16];
        let minus = [(2, 2), (1, 1), (3, 3), (1, 2), (3, 1), (2, 3)];
        for (q, r) in minus {
            e[q * 4 + r] = 1;
        }
        UnitaryCocycle::from_exponents(pg, 2, &e).unwrap()
    }

    fn g1() -> Arc<VaGroup> {
        Arc::new(VaGroup::gamma_k(1).unwrap())
    }

    #[test]
    fn scalar_detection() {
        let alpha = cis(0.9);
        let rho = family_rep_gamma_k(g1(), &[c(-1.0, 0.0)], alpha).unwrap();
        let lambda = is_scalar_on_a(&rho).unwrap().unwrap();
        let theta = 0.9 / std::f64::consts::TAU;
        assert!(lambda.approx_eq(&TorusChar::new(vec![0.5, theta]), 1e-12));
        let generic = family_rep_gamma_k(g1(), &[c(0.0, 1.0)], alpha).unwrap();
        assert!(is_scalar_on_a(&generic).unwrap().is_none());
        assert!(is_scalar_on_a(&UnitaryRep::trivial(g1(), 1)).unwrap().is_some());
    }

    #[test]
    fn descent_cocycle_is_central_character_of_extension_class() {
        let alpha = cis(0.9);
        let rho = family_rep_gamma_k(g1(), &[c(-1.0, 0.0)], alpha).unwrap();
        let d = descend(&rho).unwrap();
        let t = numeric::from_rows(&[&[c(0.0, 0.0), alpha], &[c(1.0, 0.0), c(0.0, 0.0)]]);
        assert!(numeric::dist(&d.lifts[1], &t) < 1e-15);
        // lift(g)² = αI = λ(a²) I
        assert!((d.cocycle.get(1, 1) - alpha).norm() < 1e-12);
        assert!(d.lattice_corrected_residual < 1e-12);
        // ±√α eigenvalues: not irreducible
        assert!(!irreducible_as_projective(&d).unwrap());
        let triv = descend(&UnitaryRep::trivial(g1(), 2)).unwrap();
        assert!(!irreducible_as_projective(&triv).unwrap());
    }

    #[test]
    fn one_dim_descent_matches_extension_cocycle() {
        let g = g1();
        let u = cis(0.4);
        let rho = UnitaryRep::new(
            g.clone(),
            vec![CMat::from_element(1, 1, c(-1.0, 0.0)), CMat::from_element(1, 1, u * u)],
            vec![CMat::from_element(1, 1, u)],
        )
        .unwrap();
        let d = descend(&rho).unwrap();
        assert!((d.cocycle.get(1, 1) - u * u).norm() < 1e-12);
        assert!((d.cocycle.get(0, 1) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn twist_keeps_cocycle_and_lattice() {
        let rho = family_rep_gamma_k(g1(), &[c(-1.0, 0.0)], cis(2.2)).unwrap();
        let chars = q_characters(rho.group().point_group());
        assert_eq!(chars.len(), 2);
        let sign = chars.iter().find(|c| !c.is_trivial()).unwrap();
        let tw = twist(sign, &rho).unwrap();
        assert!(numeric::dist(tw.lift_image(1), &(rho.lift_image(1) * c(-1.0, 0.0))) < 1e-15);
        assert_eq!(tw.lattice_images(), rho.lattice_images());
        let (a, b) = (descend(&rho).unwrap(), descend(&tw).unwrap());
        assert!(a.cocycle.max_distance(&b.cocycle) < 1e-12);
        assert!(same_projective_class(&a, &b, 1e-12));
        assert_eq!(twist_between(&rho, &tw).unwrap(), Some(sign.clone()));
        let triv = chars.iter().find(|c| c.is_trivial()).unwrap();
        assert!(twist(triv, &rho).unwrap().distance(&rho) == 0.0);
    }

    #[test]
    fn regular_class_counts() {
        let c2 = FiniteGroupTable::cyclic(2);
        assert_eq!(sigma_regular_count(&c2, &UnitaryCocycle::trivial(2), 1e-9).unwrap(), 2);
        let one = FiniteGroupTable::trivial();
        assert_eq!(sigma_regular_count(&one, &UnitaryCocycle::trivial(1), 1e-9).unwrap(), 1);
        let v = klein();
        assert_eq!(sigma_regular_count(&v, &quaternion_cocycle(&v), 1e-9).unwrap(), 1);
        assert_eq!(sigma_regular_count(&v, &UnitaryCocycle::trivial(4), 1e-9).unwrap(), 4);
    }

    #[test]
    fn cohomology_search() {
        let v = klein();
        let triv = UnitaryCocycle::trivial(4);
        let quat = quaternion_cocycle(&v);
        assert_eq!(cohomologous(&v, &quat, &quat, 2).unwrap(), Some(vec![0; 4]));
        assert_eq!(cohomologous(&v, &triv, &quat, 2).unwrap(), None);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let mut b: Vec<u32> = (0..4).map(|_| rng.random_range(0..4)).collect();
            b[0] = 0;
            let e = quat.to_exponents(4, 1e-9).unwrap();
            let shifted: Vec<u32> = (0..16)
                .map(|i| {
                    let (q, r) = (i / 4, i % 4);
                    (e[i] + b[q] + b[r] + 4 - b[v.mul(q, r)]) % 4
                })
                .collect();
            let s2 = UnitaryCocycle::from_exponents(&v, 4, &shifted).unwrap();
            assert!(cohomologous(&v, &quat, &s2, 4).unwrap().is_some());
        }
        let off = UnitaryCocycle::new(&FiniteGroupTable::cyclic(2), vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), cis(0.1)], 1e-9).unwrap();
        assert!(cohomologous(&FiniteGroupTable::cyclic(2), &off, &off, 2).is_err());
    }
}
