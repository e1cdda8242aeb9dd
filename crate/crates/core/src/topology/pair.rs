use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cw::{circle_with_involution, circle_with_rotation, plain_circle, product, quotient_by_involution, torus_with_involution, CwComplex};
use super::homology::{chain_homology, homology, rational_ranks, HomologyGroup};
use crate::error::{Error, Result};
use crate::linalg::{cokernel_invariants, rational_rank, AbelianInvariants, IntMatrix};

/// Largest k for which the pair model is built.
pub const MAX_PAIR_K: usize = 4;

/// A complex with a subcomplex that is a disjoint union of circles, one per
/// sign vector `ε`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CwPair {
    pub total: CwComplex,
    /// Sub cell indices per degree, ascending.
    pub sub: Vec<Vec<usize>>,
    /// `components[i]` is the `ε` of the circle through sub vertex `i`.
    pub components: Vec<Vec<i8>>,
}

impl CwPair {
    pub fn new(total: CwComplex, sub: Vec<Vec<usize>>, components: Vec<Vec<i8>>) -> Result<Self> {
        if sub.len() > total.degrees() {
            return Err(Error::input("subcomplex has cells above the top degree"));
        }
        for (d, cells) in sub.iter().enumerate() {
            if cells.windows(2).any(|w| w[0] >= w[1]) || cells.iter().any(|&c| c >= total.cell_count(d)) {
                return Err(Error::input("sub cell indices must be ascending and in range"));
            }
            if d == 0 {
                continue;
            }
            let b = total.boundary(d);
            for &c in cells {
                for r in 0..b.rows() {
                    if !b.get(r, c).is_zero() && sub[d - 1].binary_search(&r).is_err() {
                        return Err(Error::input("subcomplex is not closed under the boundary"));
                    }
                }
            }
        }
        let pair = CwPair { total, sub, components };
        let s = pair.sub_complex();
        let h0 = homology(&s, 0).invariants;
        let h1 = homology(&s, 1).invariants;
        let n = pair.components.len();
        if h0 != AbelianInvariants::free(n) || h1 != AbelianInvariants::free(n) || s.degrees() > 2 {
            return Err(Error::input(format!("subcomplex is not a union of {n} circles")));
        }
        Ok(pair)
    }

    fn sub_in(&self, d: usize) -> &[usize] {
        self.sub.get(d).map_or(&[], |v| v.as_slice())
    }

    fn rel_in(&self, d: usize) -> Vec<usize> {
        (0..self.total.cell_count(d))
            .filter(|c| self.sub_in(d).binary_search(c).is_err())
            .collect()
    }

    pub fn sub_complex(&self) -> CwComplex {
        let degrees = self.sub.iter().rposition(|c| !c.is_empty()).map_or(0, |d| d + 1);
        let labels = (0..degrees)
            .map(|d| self.sub_in(d).iter().map(|&c| self.total.labels(d)[c].clone()).collect())
            .collect();
        let boundary = (0..degrees)
            .map(|d| {
                let rows: Vec<usize> = if d == 0 { vec![] } else { self.sub_in(d - 1).to_vec() };
                if d == 0 {
                    IntMatrix::zeros(0, self.sub_in(0).len())
                } else {
                    self.total.boundary(d).select(&rows, self.sub_in(d))
                }
            })
            .collect();
        CwComplex::new(labels, boundary, None).expect("closed subcomplex")
    }

    /// Boundary of the quotient chain complex `C(X)/C(∂)` in degree `d`.
    fn relative_boundary(&self, d: usize) -> IntMatrix {
        let cols = self.rel_in(d);
        if d == 0 {
            return IntMatrix::zeros(0, cols.len());
        }
        self.total.boundary(d).select(&self.rel_in(d - 1), &cols)
    }

    pub fn relative_homology(&self, d: usize) -> HomologyGroup {
        chain_homology(d, &self.relative_boundary(d), &self.relative_boundary(d + 1))
    }
}

/// `(T^k/C₂) × S¹` with the circles `{ε} × S¹`, `ε ∈ {±1}^k`, as subcomplex.
pub fn build_irr2_pair(k: usize) -> Result<CwPair> {
    if k == 0 || k > MAX_PAIR_K {
        return Err(Error::input(format!("pair model is built for 1 ≤ k ≤ {MAX_PAIR_K}")));
    }
    let q = quotient_by_involution(&torus_with_involution(k)?)?;
    let n0 = q.cell_count(0);
    let total = product(&[q.clone(), plain_circle()])?;
    // product cells with a 0-dimensional first factor come first in each degree
    let sub = vec![(0..n0).collect(), (0..n0).collect()];
    let components = q
        .labels(0)
        .iter()
        .map(|l| l.split('×').map(|v| if v == "v+" { 1 } else { -1 }).collect())
        .collect();
    CwPair::new(total, sub, components)
}

/// Long exact sequence data of a pair, in chosen homology bases.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectingMaps {
    pub total: Vec<HomologyGroup>,
    pub sub: Vec<HomologyGroup>,
    pub relative: Vec<HomologyGroup>,
    /// `delta[d]: H_d(X, ∂) → H_{d-1}(∂)`, columns on relative generators
    /// (`delta[0]` is empty).
    pub delta: Vec<IntMatrix>,
    /// `inclusion[d]: H_d(∂) → H_d(X)`.
    pub inclusion: Vec<IntMatrix>,
}

impl ConnectingMaps {
    pub fn d2(&self) -> &IntMatrix {
        &self.delta[2]
    }

    pub fn d1(&self) -> &IntMatrix {
        &self.delta[1]
    }
}

fn columns_matrix(rows: usize, cols: Vec<Vec<BigInt>>) -> IntMatrix {
    IntMatrix::from_columns(rows, &cols)
}

pub fn connecting_maps(pair: &CwPair) -> Result<ConnectingMaps> {
    let x = &pair.total;
    let s = pair.sub_complex();
    let degrees = x.degrees();
    let total: Vec<HomologyGroup> = (0..degrees).map(|d| homology(x, d)).collect();
    let sub: Vec<HomologyGroup> = (0..degrees).map(|d| homology(&s, d)).collect();
    let relative: Vec<HomologyGroup> = (0..degrees).map(|d| pair.relative_homology(d)).collect();
    let mut delta = vec![IntMatrix::zeros(sub[0].generators.len(), 0)];
    for d in 1..degrees {
        let rel = pair.rel_in(d);
        let rel_below = pair.rel_in(d - 1);
        let b = x.boundary(d);
        let mut cols = Vec::new();
        for g in &relative[d].generators {
            let mut lift = vec![BigInt::zero(); x.cell_count(d)];
            for (i, &c) in rel.iter().enumerate() {
                lift[c] = g[i].clone();
            }
            let image = b.apply(&lift);
            if rel_below.iter().any(|&c| !image[c].is_zero()) {
                return Err(Error::Internal("relative generator is not a relative cycle".into()));
            }
            let on_sub: Vec<BigInt> = pair.sub_in(d - 1).iter().map(|&c| image[c].clone()).collect();
            cols.push(sub[d - 1].coordinates(&on_sub)?);
        }
        delta.push(columns_matrix(sub[d - 1].generators.len(), cols));
    }
    let mut inclusion = Vec::new();
    for d in 0..degrees {
        let mut cols = Vec::new();
        for g in &sub[d].generators {
            let mut chain = vec![BigInt::zero(); x.cell_count(d)];
            for (i, &c) in pair.sub_in(d).iter().enumerate() {
                chain[c] = g[i].clone();
            }
            cols.push(total[d].coordinates(&chain)?);
        }
        inclusion.push(columns_matrix(total[d].generators.len(), cols));
    }
    let maps = ConnectingMaps {
        total,
        sub,
        relative,
        delta,
        inclusion,
    };
    check_exactness(&maps)?;
    Ok(maps)
}

/// `i_* ∘ δ = 0` in every degree, and `Im δ₁ = ker(H₀(∂) → H₀(X))`.
fn check_exactness(m: &ConnectingMaps) -> Result<()> {
    for d in 1..m.delta.len() {
        let comp = &m.inclusion[d - 1] * &m.delta[d];
        let h = &m.total[d - 1];
        for r in 0..comp.rows() {
            for c in 0..comp.cols() {
                let v = comp.get(r, c);
                let zero = match &h.orders[r] {
                    Some(n) => (v % n).is_zero(),
                    None => v.is_zero(),
                };
                if !zero {
                    return Err(Error::Internal(format!("inclusion after δ_{d} is nonzero")));
                }
            }
        }
    }
    let n = m.sub[0].generators.len();
    let image = cokernel_invariants(&m.delta[1], n)?;
    let kernel_rank = n - rational_rank(&m.inclusion[0]);
    if !image.torsion.is_empty() || n - image.free_rank != kernel_rank {
        return Err(Error::Internal("image of δ₁ is not the kernel of the inclusion on H₀".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Report {
    pub coker_d2: AbelianInvariants,
    pub rank: usize,
    /// Torsion of `H₁(X/∂)`, the quotient in the extension.
    pub torsion: AbelianInvariants,
    /// The extension `0 → coker δ₂ → π₁ → Tor → 0` is not determined here.
    pub extension_ambiguous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RdefReport {
    pub k: usize,
    pub pi0: AbelianInvariants,
    pub pi1: Pi1Report,
    pub pi2: AbelianInvariants,
    /// `(d, π_d)` for `3 ≤ d ≤ k + 1`.
    pub higher: Vec<(usize, AbelianInvariants)>,
    /// `H₂(X)`, which `π₂` must match.
    pub h2_total: AbelianInvariants,
}

impl RdefReport {
    /// `π_d` for any `d`, zero above `k + 1`.
    pub fn pi(&self, d: usize) -> AbelianInvariants {
        match d {
            0 => self.pi0.clone(),
            1 => AbelianInvariants::new(self.pi1.rank, self.pi1.torsion.torsion.clone()),
            2 => self.pi2.clone(),
            _ => self
                .higher
                .iter()
                .find(|(e, _)| *e == d)
                .map(|(_, a)| a.clone())
                .unwrap_or_default(),
        }
    }
}

fn torsion_part(a: &AbelianInvariants) -> AbelianInvariants {
    AbelianInvariants::new(0, a.torsion.clone())
}

/// Columns of `m` on generators of infinite order.
fn free_columns(m: &IntMatrix, h: &HomologyGroup) -> IntMatrix {
    let cols: Vec<usize> = h.free_generators().map(|(i, _)| i).collect();
    m.select(&(0..m.rows()).collect::<Vec<_>>(), &cols)
}

/// Low homotopy of the deformation representation ring of `Γ_k` from the pair model.
pub fn rdef_homotopy(k: usize) -> Result<RdefReport> {
    let pair = build_irr2_pair(k)?;
    let maps = connecting_maps(&pair)?;
    let n = pair.components.len();
    // composite with the doubling map on ε-components
    let doubled = maps.d1().scaled(&BigInt::from(2));
    let pi0 = cokernel_invariants(&doubled, n)?;

    let h1_rel = &maps.relative[1];
    let d1_free = free_columns(maps.d1(), h1_rel);
    if rational_rank(&d1_free) != h1_rel.invariants.free_rank {
        return Err(Error::Internal("δ₁ is not injective on the free part".into()));
    }
    let coker_d2 = cokernel_invariants(maps.d2(), maps.sub[1].generators.len())?;
    let torsion = torsion_part(&h1_rel.invariants);
    let pi1 = Pi1Report {
        rank: coker_d2.free_rank,
        extension_ambiguous: !torsion.is_trivial(),
        coker_d2,
        torsion,
    };

    let h2_rel = &maps.relative[2];
    let d2_free = free_columns(maps.d2(), h2_rel);
    let pi2 = AbelianInvariants::new(
        h2_rel.invariants.free_rank - rational_rank(&d2_free),
        h2_rel.invariants.torsion.clone(),
    );
    let h2_total = maps.total.get(2).map(|h| h.invariants.clone()).unwrap_or_default();
    if pi2 != h2_total {
        return Err(Error::Internal(format!("ker δ₂ = {pi2} differs from H₂(X) = {h2_total}")));
    }
    let higher = (3..=k + 1)
        .map(|d| (d, maps.relative.get(d).map(|h| h.invariants.clone()).unwrap_or_default()))
        .collect();
    if pair.total.degrees() > k + 2 {
        return Err(Error::Internal("pair model has cells above degree k + 1".into()));
    }
    Ok(RdefReport {
        k,
        pi0,
        pi1,
        pi2,
        higher,
        h2_total,
    })
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `rank H^n(Γ_k; Q)`: `C(k, n)` for even `n`, `C(k, n-1)` for odd `n`.
pub fn gamma_k_betti_formula(k: usize) -> Vec<usize> {
    (0..=k + 1)
        .map(|n| if n % 2 == 0 { binomial(k, n) } else { binomial(k, n - 1) })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCohomology {
    pub k: usize,
    /// Invariant exterior monomials on `H¹(T^{k+1})`.
    pub combinatorial: Vec<usize>,
    /// Rational homology of the CW quotient `T^{k+1}/C₂`.
    pub cw_quotient: Vec<usize>,
    /// Rational homology of the pair model's total space, when built.
    pub irr2_model: Option<Vec<usize>>,
    pub formula: Vec<usize>,
}

impl RationalCohomology {
    pub fn all_agree(&self) -> bool {
        self.combinatorial == self.cw_quotient
            && self.combinatorial == self.formula
            && self.irr2_model.as_ref().is_none_or(|m| *m == self.formula)
    }
}

/// Largest k for the CW route, bounded by cell count `4^{k+1}`.
pub const MAX_COHOMOLOGY_K: usize = 5;

/// Ranks of `H^*(Γ_k; Q)` in degrees `0..=k+1` computed two ways; a
/// disagreement between them is an error.
pub fn rational_cohomology_gamma_k(k: usize) -> Result<RationalCohomology> {
    if k == 0 || k > MAX_COHOMOLOGY_K {
        return Err(Error::input(format!("rational cohomology is computed for 1 ≤ k ≤ {MAX_COHOMOLOGY_K}")));
    }
    // subsets S of {1..k+1} with |S ∩ {1..k}| even, by size
    let mut combinatorial = vec![0usize; k + 2];
    for mask in 0u32..(1 << (k + 1)) {
        let inverted = (mask & ((1 << k) - 1)).count_ones();
        if inverted % 2 == 0 {
            combinatorial[mask.count_ones() as usize] += 1;
        }
    }
    let mut factors = vec![circle_with_involution(); k];
    factors.push(circle_with_rotation());
    let quotient = quotient_by_involution(&product(&factors)?)?;
    let mut cw_quotient = rational_ranks(&quotient);
    cw_quotient.resize(k + 2, 0);
    if cw_quotient != combinatorial {
        return Err(Error::Internal(format!(
            "combinatorial ranks {combinatorial:?} differ from CW ranks {cw_quotient:?}"
        )));
    }
    let irr2_model = if k <= MAX_PAIR_K {
        let mut r = rational_ranks(&build_irr2_pair(k)?.total);
        r.resize(k + 2, 0);
        Some(r)
    } else {
        None
    };
    Ok(RationalCohomology {
        k,
        combinatorial,
        cw_quotient,
        irr2_model,
        formula: gamma_k_betti_formula(k),
    })
}

/// Inclusion-induced class of a sub circle, for inspection.
pub fn component_class(pair: &CwPair, maps: &ConnectingMaps, component: usize) -> Result<Vec<BigInt>> {
    let sub1 = pair.sub_in(1);
    if component >= sub1.len() {
        return Err(Error::input("component index out of range"));
    }
    let mut chain = vec![BigInt::zero(); sub1.len()];
    chain[component] = BigInt::one();
    maps.sub[1].coordinates(&chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2(n: usize) -> Vec<BigInt> {
        vec![BigInt::from(2); n]
    }

    #[test]
    fn k1_pair_is_annulus() {
        let p = build_irr2_pair(1).unwrap();
        assert_eq!(p.components, vec![vec![1], vec![-1]]);
        assert_eq!(p.total.euler_characteristic(), 0);
        assert_eq!(rational_ranks(&p.total), vec![1, 1, 0]);
        let m = connecting_maps(&p).unwrap();
        assert_eq!(m.relative[2].invariants, AbelianInvariants::free(1));
        // the relative fundamental class bounds the two circles with opposite signs
        let d2 = m.d2();
        let col: Vec<i64> = (0..2).map(|r| d2.get_i64(r, 0)).collect();
        assert!(col == vec![1, -1] || col == vec![-1, 1], "{col:?}");
        let d1 = m.d1();
        let col: Vec<i64> = (0..2).map(|r| d1.get_i64(r, 0)).collect();
        assert!(col == vec![1, -1] || col == vec![-1, 1], "{col:?}");
    }

    #[test]
    fn rdef_low_k() {
        let r = rdef_homotopy(1).unwrap();
        assert_eq!(r.pi0, AbelianInvariants::new(1, z2(1)));
        assert!(r.pi2.is_trivial());
        assert_eq!(r.pi1.rank, 1);
        assert!(r.pi1.torsion.is_trivial() && !r.pi1.extension_ambiguous);
        let r = rdef_homotopy(2).unwrap();
        assert_eq!(r.pi0, AbelianInvariants::new(1, z2(3)));
        assert_eq!(r.pi2.free_rank, 1);
        assert_eq!(r.pi(3).free_rank, 1);
        assert!(r.pi(4).is_trivial());
    }

    #[test]
    fn d2_image_is_difference_lattice() {
        for k in 1..=3 {
            let p = build_irr2_pair(k).unwrap();
            let m = connecting_maps(&p).unwrap();
            let n = p.components.len();
            let coker = cokernel_invariants(m.d2(), n).unwrap();
            assert_eq!(coker, AbelianInvariants::free(1), "k = {k}");
            // every column sums to zero: only differences of circles
            let d2 = m.d2();
            for c in 0..d2.cols() {
                let s: BigInt = (0..n).map(|r| d2.get(r, c).clone()).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn les_rank_telescoping() {
        for k in 1..=3 {
            let p = build_irr2_pair(k).unwrap();
            let m = connecting_maps(&p).unwrap();
            let alt: i64 = (0..p.total.degrees())
                .map(|d| {
                    let s = if d % 2 == 0 { 1 } else { -1 };
                    s * (m.sub[d].invariants.free_rank as i64 - m.total[d].invariants.free_rank as i64
                        + m.relative[d].invariants.free_rank as i64)
                })
                .sum();
            assert_eq!(alt, 0, "k = {k}");
        }
    }

    #[test]
    fn rational_cohomology_examples() {
        assert_eq!(rational_cohomology_gamma_k(2).unwrap().combinatorial, vec![1, 1, 1, 1]);
        let r = rational_cohomology_gamma_k(1).unwrap();
        assert_eq!(r.combinatorial, vec![1, 1, 0]);
        assert!(r.all_agree());
        assert_eq!(gamma_k_betti_formula(4)[2], 6);
        assert!(rational_cohomology_gamma_k(0).is_err());
    }

    #[test]
    fn bad_pairs_rejected() {
        let x = plain_circle();
        assert!(CwPair::new(x.clone(), vec![vec![], vec![0]], vec![vec![1]]).is_err());
        assert!(CwPair::new(x.clone(), vec![vec![0], vec![0]], vec![vec![1], vec![-1]]).is_err());
        assert!(CwPair::new(x, vec![vec![0], vec![0]], vec![vec![1]]).is_ok());
        assert!(build_irr2_pair(5).is_err());
    }
}
