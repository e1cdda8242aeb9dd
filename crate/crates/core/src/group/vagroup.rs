use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::finite::FiniteGroupTable;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Square integer matrix acting on the lattice, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeMap {
    dim: usize,
    entries: Vec<i64>,
}

impl LatticeMap {
    pub fn new(dim: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(LatticeMap { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut e = vec![0; dim * dim];
        for i in 0..dim {
            e[i * dim + i] = 1;
        }
        LatticeMap { dim, entries: e }
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let n = d.len();
        let mut e = vec![0; n * n];
        for (i, &x) in d.iter().enumerate() {
            e[i * n + i] = x;
        }
        LatticeMap { dim: n, entries: e }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Column `j`, i.e. the image of the basis vector `e_j`.
    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        let n = self.dim;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                e[i * n + j] = (0..n).map(|l| self.get(i, l) * other.get(l, j)).sum();
            }
        }
        LatticeMap { dim: n, entries: e }
    }

    pub fn transpose(&self) -> LatticeMap {
        let n = self.dim;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                e[j * n + i] = self.get(i, j);
            }
        }
        LatticeMap { dim: n, entries: e }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = (0..self.dim)
            .map(|i| self.entries[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect();
        if self.dim == 0 {
            IntMatrix::zeros(0, 0)
        } else {
            IntMatrix::from_rows(&rows)
        }
    }
}

/// A group element `(v, q)`, `v` in the lattice, `q` a point group index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub v: Vec<i64>,
    pub q: usize,
}

impl Element {
    pub fn new(v: Vec<i64>, q: usize) -> Self {
        Element { v, q }
    }

    pub fn lattice(v: Vec<i64>) -> Self {
        Element { v, q: 0 }
    }
}

/// Virtually abelian group: an extension `A -> G -> Q` of a finite group by
/// `A = Z^rank`, multiplication `(v,q)(w,r) = (v + φ(q)w + c(q,r), qr)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VaGroup {
    name: String,
    rank: usize,
    point: FiniteGroupTable,
    action: Vec<LatticeMap>,
    cocycle: Vec<Vec<i64>>,
    faithful: bool,
}

impl VaGroup {
    /// Validates the extension data. `cocycle[q * |Q| + r]` is `c(q, r)`.
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        point: FiniteGroupTable,
        action: Vec<LatticeMap>,
        cocycle: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let n = point.order();
        if action.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: action.len(),
            });
        }
        if let Some(m) = action.iter().find(|m| m.dim() != rank) {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: m.dim(),
            });
        }
        if cocycle.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: cocycle.len(),
            });
        }
        if let Some(c) = cocycle.iter().find(|c| c.len() != rank) {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: c.len(),
            });
        }
        if !action[0].is_identity() {
            return Err(Error::input("action of the identity is not the identity matrix"));
        }
        for q in 0..n {
            for r in 0..n {
                if action[q].compose(&action[r]) != action[point.mul(q, r)] {
                    return Err(Error::input(format!(
                        "action is not a homomorphism at ({q}, {r})"
                    )));
                }
            }
        }
        // φ(q)φ(q⁻¹) = I already follows; the det check guards the 0-dim case
        for (q, m) in action.iter().enumerate() {
            let d = m.to_int_matrix().determinant();
            if rank > 0 && d != 1.into() && d != (-1).into() {
                return Err(Error::input(format!("action of {q} not invertible over Z")));
            }
        }
        let c = |q: usize, r: usize| &cocycle[q * n + r];
        for q in 0..n {
            if c(0, q).iter().any(|&x| x != 0) || c(q, 0).iter().any(|&x| x != 0) {
                return Err(Error::input("cocycle is not normalized"));
            }
        }
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let left: Vec<i64> = action[q]
                        .apply(c(r, s))
                        .iter()
                        .zip(c(q, point.mul(r, s)))
                        .map(|(a, b)| a + b)
                        .collect();
                    let right: Vec<i64> = c(q, r)
                        .iter()
                        .zip(c(point.mul(q, r), s))
                        .map(|(a, b)| a + b)
                        .collect();
                    if left != right {
                        return Err(Error::input(format!(
                            "cocycle identity fails at ({q}, {r}, {s})"
                        )));
                    }
                }
            }
        }
        let faithful = (1..n).all(|q| !action[q].is_identity());
        Ok(VaGroup {
            name: name.into(),
            rank,
            point,
            action,
            cocycle,
            faithful,
        })
    }

    /// The family Γ_k = Z^k ⋊ Z with the generator inverting Z^k, written
    /// as an extension of C₂ by the translation lattice A = <t_1..t_k, a²>.
    /// In these coordinates t_i = (e_i, 0), a = (0, 1) and a² = (e_{k+1}, 0).
    pub fn gamma_k(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("gamma_k needs k >= 1"));
        }
        let mut flip = vec![-1; k];
        flip.push(1);
        let action = vec![LatticeMap::identity(k + 1), LatticeMap::diagonal(&flip)];
        let zero = vec![0; k + 1];
        let mut e = zero.clone();
        e[k] = 1;
        let cocycle = vec![zero.clone(), zero.clone(), zero, e];
        Self::new(
            format!("gamma-k:{k}"),
            k + 1,
            FiniteGroupTable::cyclic(2),
            action,
            cocycle,
        )
    }

    pub fn free_abelian(k: usize) -> Self {
        Self::new(
            format!("z:{k}"),
            k,
            FiniteGroupTable::trivial(),
            vec![LatticeMap::identity(k)],
            vec![vec![0; k]],
        )
        .expect("free abelian group")
    }

    /// Z² ⋊ C₄, the generator rotating by a quarter turn.
    pub fn p4() -> Self {
        let r = LatticeMap::new(2, vec![0, -1, 1, 0]).expect("2x2");
        let mut action = vec![LatticeMap::identity(2)];
        for i in 1..4 {
            let next = action[i - 1].compose(&r);
            action.push(next);
        }
        Self::new("p4", 2, FiniteGroupTable::cyclic(4), action, vec![vec![0, 0]; 16])
            .expect("p4 data")
    }

    /// Split extension with the given action and zero cocycle.
    pub fn semidirect(
        name: impl Into<String>,
        rank: usize,
        point: FiniteGroupTable,
        action: Vec<LatticeMap>,
    ) -> Result<Self> {
        let n = point.order();
        Self::new(name, rank, point, action, vec![vec![0; rank]; n * n])
    }

    /// Builtin groups by name: `gamma-k:<k>`, `z:<k>`, `p4`.
    pub fn builtin(name: &str) -> Result<Self> {
        if name == "p4" {
            return Ok(Self::p4());
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::input(format!("bad builtin parameter in {name:?}")))
        };
        if let Some(k) = name.strip_prefix("gamma-k:") {
            return Self::gamma_k(parse(k)?);
        }
        if let Some(k) = name.strip_prefix("z:") {
            return Ok(Self::free_abelian(parse(k)?));
        }
        Err(Error::input(format!("unknown builtin group {name:?}")))
    }

    /// Whether this is Γ_k in the coordinates of [`VaGroup::gamma_k`]; returns k.
    pub fn as_gamma_k(&self) -> Option<usize> {
        if self.rank < 2 {
            return None;
        }
        let g = Self::gamma_k(self.rank - 1).ok()?;
        (g.point == self.point && g.action == self.action && g.cocycle == self.cocycle)
            .then_some(self.rank - 1)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn point_group(&self) -> &FiniteGroupTable {
        &self.point
    }

    pub fn q_order(&self) -> usize {
        self.point.order()
    }

    pub fn action(&self, q: usize) -> &LatticeMap {
        &self.action[q]
    }

    pub fn cocycle(&self, q: usize, r: usize) -> &[i64] {
        &self.cocycle[q * self.point.order() + r]
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    pub fn identity(&self) -> Element {
        Element::new(vec![0; self.rank], 0)
    }

    pub fn check_element(&self, a: &Element) -> Result<()> {
        if a.v.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: a.v.len(),
            });
        }
        if a.q >= self.q_order() {
            return Err(Error::input(format!("point group index {} out of range", a.q)));
        }
        Ok(())
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.check_element(a)?;
        Ok(self.inv(a))
    }

    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        let w = self.action[a.q].apply(&b.v);
        let c = self.cocycle(a.q, b.q);
        let v = (0..self.rank).map(|i| a.v[i] + w[i] + c[i]).collect();
        Element::new(v, self.point.mul(a.q, b.q))
    }

    pub(crate) fn inv(&self, a: &Element) -> Element {
        // (v,q)^{-1} = (-φ(q^{-1})(v + c(q, q^{-1})), q^{-1})
        let qi = self.point.inv(a.q);
        let c = self.cocycle(a.q, qi);
        let s: Vec<i64> = (0..self.rank).map(|i| a.v[i] + c[i]).collect();
        let v = self.action[qi].apply(&s).into_iter().map(|x| -x).collect();
        Element::new(v, qi)
    }

    pub fn power(&self, a: &Element, n: i64) -> Element {
        let base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut out = self.identity();
        for _ in 0..n.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        out
    }

    /// Generators as elements: lattice basis, then lifts `(0, q)` for q ≠ 0.
    pub fn generator_elements(&self) -> Vec<Element> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            let mut v = vec![0; self.rank];
            v[i] = 1;
            out.push(Element::lattice(v));
        }
        for q in 1..self.q_order() {
            out.push(Element::new(vec![0; self.rank], q));
        }
        out
    }

    /// All elements of word length at most `radius` in the generators above.
    pub fn word_ball(&self, radius: usize) -> Vec<Element> {
        let mut gens = self.generator_elements();
        let invs: Vec<Element> = gens.iter().map(|g| self.inv(g)).collect();
        gens.extend(invs);
        let mut seen: HashSet<Element> = HashSet::from([self.identity()]);
        let mut order = vec![self.identity()];
        let mut queue = VecDeque::from([(self.identity(), 0usize)]);
        while let Some((x, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for g in &gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    order.push(y.clone());
                    queue.push_back((y, d + 1));
                }
            }
        }
        order.sort();
        order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_squares_to_last_generator() {
        let g = VaGroup::gamma_k(1).unwrap();
        let a = Element::new(vec![0, 0], 1);
        assert_eq!(g.multiply(&a, &a).unwrap(), Element::lattice(vec![0, 1]));
        assert_eq!(g.rank(), 2);
        assert_eq!(g.q_order(), 2);
        assert!(g.is_faithful());
    }

    #[test]
    fn gamma_k_rejects_zero() {
        assert!(VaGroup::gamma_k(0).is_err());
    }

    #[test]
    fn flip_squares_to_identity() {
        for k in 1..5 {
            let g = VaGroup::gamma_k(k).unwrap();
            assert!(g.action(1).compose(g.action(1)).is_identity());
            assert_eq!(g.as_gamma_k(), Some(k));
        }
    }

    #[test]
    fn torsion_free_witness() {
        let g = VaGroup::gamma_k(2).unwrap();
        let a = Element::new(vec![0, 0, 0], 1);
        for m in 1..=20 {
            assert_eq!(g.power(&a, 2 * m), Element::lattice(vec![0, 0, m]));
            assert_ne!(g.power(&a, 2 * m - 1), g.identity());
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let g = VaGroup::gamma_k(1).unwrap();
        assert!(g.multiply(&Element::lattice(vec![1]), &g.identity()).is_err());
    }

    #[test]
    fn bad_cocycle_rejected() {
        let action = vec![LatticeMap::identity(1), LatticeMap::diagonal(&[-1])];
        // c(g,g) = 1 violates φ(g)c(g,g) + c(g,1) = c(g,g) + c(1,g)
        let r = VaGroup::new("bad", 1, FiniteGroupTable::cyclic(2), action, vec![
            vec![0],
            vec![0],
            vec![0],
            vec![1],
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn exhaustive_axioms_small_box() {
        for g in [VaGroup::gamma_k(1).unwrap(), VaGroup::p4()] {
            let mut elems = Vec::new();
            for q in 0..g.q_order() {
                for a in -1..=1 {
                    for b in -1..=1 {
                        elems.push(Element::new(vec![a, b], q));
                    }
                }
            }
            for x in &elems {
                assert_eq!(g.mul(x, &g.inv(x)), g.identity());
                assert_eq!(g.mul(&g.inv(x), x), g.identity());
                assert_eq!(g.mul(&g.identity(), x), *x);
                for y in &elems {
                    let xy = g.mul(x, y);
                    for z in &elems {
                        assert_eq!(g.mul(&xy, z), g.mul(x, &g.mul(y, z)));
                    }
                }
            }
        }
    }
}
