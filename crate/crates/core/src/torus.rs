//! Characters of the translation lattice and the point group action on them.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{coset_representatives, lattice_subgroup, Element, VaGroup};
use crate::numeric::{self, cis, CMat};
use crate::rep::UnitaryRep;

pub const ORBIT_TOL: f64 = 1e-10;

/// Character of `Z^k`, value `exp(2πi θ_i)` on the i-th basis vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusChar {
    pub angles: Vec<f64>,
}

fn reduce(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance on R/Z.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

impl TorusChar {
    pub fn new(angles: Vec<f64>) -> Self {
        TorusChar {
            angles: angles.into_iter().map(reduce).collect(),
        }
    }

    pub fn trivial(k: usize) -> Self {
        TorusChar { angles: vec![0.0; k] }
    }

    /// From unit complex values on the basis vectors.
    pub fn from_values(values: &[num_complex::Complex64]) -> Result<Self> {
        if let Some(z) = values.iter().find(|z| (z.norm() - 1.0).abs() > 1e-9) {
            return Err(Error::input(format!("character value {z} is not of unit modulus")));
        }
        Ok(Self::new(
            values.iter().map(|z| z.arg() / std::f64::consts::TAU).collect(),
        ))
    }

    pub fn rank(&self) -> usize {
        self.angles.len()
    }

    pub fn value(&self, v: &[i64]) -> num_complex::Complex64 {
        let t: f64 = self.angles.iter().zip(v).map(|(a, &x)| a * x as f64).sum();
        cis(std::f64::consts::TAU * t)
    }

    pub fn basis_values(&self) -> Vec<num_complex::Complex64> {
        self.angles.iter().map(|a| cis(std::f64::consts::TAU * a)).collect()
    }

    pub fn approx_eq(&self, other: &TorusChar, tol: f64) -> bool {
        self.rank() == other.rank()
            && self
                .angles
                .iter()
                .zip(&other.angles)
                .all(|(a, b)| circle_distance(*a, *b) <= tol)
    }
}

/// Character with exact rational angles, for points on the fixed strata.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactChar {
    pub angles: Vec<Rational64>,
}

fn reduce_exact(x: Rational64) -> Rational64 {
    x - x.floor()
}

impl ExactChar {
    pub fn new(angles: Vec<Rational64>) -> Self {
        ExactChar {
            angles: angles.into_iter().map(reduce_exact).collect(),
        }
    }

    pub fn to_float(&self) -> TorusChar {
        TorusChar::new(
            self.angles
                .iter()
                .map(|r| *r.numer() as f64 / *r.denom() as f64)
                .collect(),
        )
    }
}

/// `φ(q)⁻¹ᵀ`, which carries angle vectors of χ to those of q·χ.
fn dual_action(g: &VaGroup, q: usize) -> crate::group::LatticeMap {
    g.action(g.point_group().inv(q)).transpose()
}

/// `(q·χ)(a) = χ(φ(q)⁻¹ a)`.
pub fn act(g: &VaGroup, q: usize, chi: &TorusChar) -> Result<TorusChar> {
    check(g, q, chi.rank())?;
    let m = dual_action(g, q);
    let out = (0..g.rank())
        .map(|i| (0..g.rank()).map(|j| m.get(i, j) as f64 * chi.angles[j]).sum())
        .collect();
    Ok(TorusChar::new(out))
}

pub fn act_exact(g: &VaGroup, q: usize, chi: &ExactChar) -> Result<ExactChar> {
    check(g, q, chi.angles.len())?;
    let m = dual_action(g, q);
    let out = (0..g.rank())
        .map(|i| {
            (0..g.rank()).fold(Rational64::zero(), |acc, j| {
                acc + Rational64::from(m.get(i, j)) * chi.angles[j]
            })
        })
        .collect();
    Ok(ExactChar::new(out))
}

fn check(g: &VaGroup, q: usize, rank: usize) -> Result<()> {
    if q >= g.q_order() {
        return Err(Error::input(format!("point group index {q} out of range")));
    }
    if rank != g.rank() {
        return Err(Error::DimensionMismatch {
            expected: g.rank(),
            found: rank,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharOrbit<C> {
    pub base: C,
    /// In order of first appearance as q runs through the point group.
    pub points: Vec<C>,
    pub stabilizer: Vec<usize>,
    pub free: bool,
}

pub fn orbit(g: &VaGroup, chi: &TorusChar) -> Result<CharOrbit<TorusChar>> {
    let mut points: Vec<TorusChar> = Vec::new();
    let mut stabilizer = Vec::new();
    for q in 0..g.q_order() {
        let p = act(g, q, chi)?;
        if p.approx_eq(chi, ORBIT_TOL) {
            stabilizer.push(q);
        }
        if !points.iter().any(|x| x.approx_eq(&p, ORBIT_TOL)) {
            points.push(p);
        }
    }
    finish(chi.clone(), points, stabilizer, g.q_order())
}

pub fn orbit_exact(g: &VaGroup, chi: &ExactChar) -> Result<CharOrbit<ExactChar>> {
    let mut points: Vec<ExactChar> = Vec::new();
    let mut stabilizer = Vec::new();
    for q in 0..g.q_order() {
        let p = act_exact(g, q, chi)?;
        if p == *chi {
            stabilizer.push(q);
        }
        if !points.contains(&p) {
            points.push(p);
        }
    }
    finish(chi.clone(), points, stabilizer, g.q_order())
}

fn finish<C>(base: C, points: Vec<C>, stabilizer: Vec<usize>, order: usize) -> Result<CharOrbit<C>> {
    if points.len() * stabilizer.len() != order {
        return Err(Error::Tolerance(
            "orbit and stabilizer sizes disagree; angles too close to the deduplication tolerance".into(),
        ));
    }
    let free = stabilizer.len() == 1;
    Ok(CharOrbit {
        base,
        points,
        stabilizer,
        free,
    })
}

pub fn is_free_orbit(g: &VaGroup, chi: &TorusChar) -> Result<bool> {
    Ok(orbit(g, chi)?.free)
}

pub fn is_free_orbit_exact(g: &VaGroup, chi: &ExactChar) -> Result<bool> {
    Ok(orbit_exact(g, chi)?.free)
}

/// 1-dimensional representation of a lattice group (trivial point group).
pub fn lattice_character_rep(a: &Arc<VaGroup>, chi: &TorusChar) -> Result<UnitaryRep> {
    if a.q_order() != 1 {
        return Err(Error::input("lattice characters need a trivial point group"));
    }
    check(a, 0, chi.rank())?;
    let lattice = chi
        .basis_values()
        .into_iter()
        .map(|z| CMat::from_element(1, 1, z))
        .collect();
    UnitaryRep::from_parts(a.clone(), 1, lattice, vec![])?.verified(Default::default())
}

/// `Ind_A^G χ` as monomial matrices on the frame of coset representatives.
pub fn induced_char_rep(g: &Arc<VaGroup>, chi: &TorusChar) -> Result<UnitaryRep> {
    check(g, 0, chi.rank())?;
    let a = lattice_subgroup(g);
    let reps = coset_representatives(g, &a);
    let m = reps.len();
    let inv: Vec<Element> = reps.iter().map(|r| g.inv(r)).collect();
    let image = |gamma: &Element| {
        let mut out = CMat::zeros(m, m);
        for j in 0..m {
            let x = g.mul(gamma, &reps[j]);
            for i in 0..m {
                let y = g.mul(&inv[i], &x);
                if y.q == 0 {
                    out[(i, j)] = chi.value(&y.v);
                }
            }
        }
        out
    };
    let gens = g.generator_elements();
    let k = g.rank();
    let lattice = gens[..k].iter().map(image).collect();
    let lifts = gens[k..].iter().map(image).collect();
    UnitaryRep::from_parts(g.clone(), m, lattice, lifts)?.verified(Default::default())
}

#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    pub character: TorusChar,
    pub multiplicity: usize,
    /// Orthonormal columns spanning the χ-isotypic subspace.
    pub basis: CMat,
}

const SPECTRUM_GAP: f64 = 1e-6;

/// Simultaneous eigenspaces of the commuting lattice images.
pub fn restrict_to_a_spectrum(rho: &UnitaryRep) -> Result<Vec<IsotypicComponent>> {
    if !rho.is_verified() {
        return Err(Error::Unverified("representation has not been verified".into()));
    }
    let n = rho.dim();
    if n == 0 {
        return Ok(vec![]);
    }
    let k = rho.group().rank();
    if k == 0 {
        return Ok(vec![IsotypicComponent {
            character: TorusChar::trivial(0),
            multiplicity: n,
            basis: numeric::eye(n),
        }]);
    }
    let mut hs = Vec::with_capacity(2 * k);
    for a in rho.lattice_images() {
        hs.push(numeric::hermitian_part(a));
        hs.push(numeric::anti_hermitian_part(a));
    }
    let tol = rho.tolerances().equality_tol;
    let mut comps: Vec<IsotypicComponent> = Vec::new();
    for e in numeric::joint_eigenspaces(&hs, SPECTRUM_GAP) {
        let d = e.ncols();
        let mut values = Vec::with_capacity(k);
        for a in rho.lattice_images() {
            let inner = e.adjoint() * a * &e;
            let z = inner.trace() / numeric::c(d as f64, 0.0);
            let scalar_err = numeric::dist(&inner, &(numeric::eye(d) * z));
            let leak = numeric::max_abs(&(a * &e - &e * &inner));
            if scalar_err > tol.max(1e-7) || leak > tol.max(1e-7) {
                return Err(Error::Tolerance(format!(
                    "lattice eigenspace clustering failed (scalar residual {scalar_err:.3e})"
                )));
            }
            values.push(z / z.norm());
        }
        let chi = TorusChar::from_values(&values)?;
        if let Some(c) = comps.iter_mut().find(|c| c.character.approx_eq(&chi, ORBIT_TOL)) {
            c.basis = numeric::hcat(&[&c.basis, &e], n);
            c.multiplicity += d;
        } else {
            comps.push(IsotypicComponent {
                character: chi,
                multiplicity: d,
                basis: e,
            });
        }
    }
    comps.sort_by(|a, b| {
        a.character
            .angles
            .iter()
            .zip(&b.character.angles)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(comps)
}

/// Parses `p/q` or a decimal as an exact rational angle.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::input(format!("cannot parse {s:?} as a rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok(Rational64::new(p, q))
    } else {
        let p: i64 = s.trim().parse().map_err(|_| bad())?;
        Ok(Rational64::from(p))
    }
}
