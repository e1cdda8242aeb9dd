use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite group by multiplication table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroupTable {
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteGroupTable {
    /// Validates a row-major table. When `generators` is `None` a small
    /// generating set is chosen greedily.
    pub fn new(order: usize, mult: Vec<usize>, generators: Option<Vec<usize>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::input("point group must have at least one element"));
        }
        if mult.len() != order * order {
            return Err(Error::DimensionMismatch {
                expected: order * order,
                found: mult.len(),
            });
        }
        if let Some(&bad) = mult.iter().find(|&&x| x >= order) {
            return Err(Error::input(format!("table entry {bad} out of range")));
        }
        let at = |a: usize, b: usize| mult[a * order + b];
        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::input("element 0 is not a two-sided identity"));
            }
        }
        // Latin square rows/columns give cancellation; with associativity
        // and an identity that makes it a group.
        for a in 0..order {
            let row: BTreeSet<_> = (0..order).map(|b| at(a, b)).collect();
            let col: BTreeSet<_> = (0..order).map(|b| at(b, a)).collect();
            if row.len() != order || col.len() != order {
                return Err(Error::input("table is not a Latin square"));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::input(format!(
                            "table not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inv: Vec<usize> = (0..order)
            .map(|a| (0..order).find(|&b| at(a, b) == 0).expect("latin row has identity"))
            .collect();
        let mut table = FiniteGroupTable {
            order,
            mult,
            inv,
            generators: vec![],
        };
        table.generators = match generators {
            Some(g) => {
                if let Some(&bad) = g.iter().find(|&&x| x >= order) {
                    return Err(Error::input(format!("generator {bad} out of range")));
                }
                if table.closure(&g).len() != order {
                    return Err(Error::input("listed generators do not generate the point group"));
                }
                g
            }
            None => table.greedy_generators(),
        };
        Ok(table)
    }

    pub fn trivial() -> Self {
        Self::new(1, vec![0], Some(vec![])).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Self {
        let mult = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        Self::new(n, mult, Some(gens)).expect("cyclic group table")
    }

    /// Direct product; element (a, b) gets index a * |H| + b.
    pub fn product(g: &FiniteGroupTable, h: &FiniteGroupTable) -> Self {
        let n = g.order * h.order;
        let split = |x: usize| (x / h.order, x % h.order);
        let mut mult = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (a, b) = split(x);
                let (c, d) = split(y);
                mult[x * n + y] = g.mul(a, c) * h.order + h.mul(b, d);
            }
        }
        let mut gens: Vec<usize> = g.generators.iter().map(|&a| a * h.order).collect();
        gens.extend(h.generators.iter().copied());
        Self::new(n, mult, Some(gens)).expect("product of groups")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn table(&self) -> &[usize] {
        &self.mult
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0];
        for x in 1..self.order {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// All subgroups, each as a sorted element list, ordered by size then
    /// lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(vec![0]);
        // every subgroup is generated by adding one element at a time
        let mut frontier = vec![vec![0usize]];
        while let Some(h) = frontier.pop() {
            for x in 0..self.order {
                if h.binary_search(&x).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(x);
                let s = self.closure(&gens);
                if found.insert(s.clone()) {
                    frontier.push(s);
                }
            }
        }
        let mut v: Vec<_> = found.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for a in 0..self.order {
            if seen[a] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.order)
                .map(|g| self.mul(self.mul(g, a), self.inv(g)))
                .collect();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    pub fn centralizer(&self, a: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&h| self.mul(a, h) == self.mul(h, a))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four_subgroups() {
        let c4 = FiniteGroupTable::cyclic(4);
        assert_eq!(c4.subgroups(), vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
    }

    #[test]
    fn klein_four_has_five_subgroups() {
        let v = FiniteGroupTable::product(&FiniteGroupTable::cyclic(2), &FiniteGroupTable::cyclic(2));
        assert_eq!(v.subgroups().len(), 5);
        assert!(v.is_abelian());
    }

    #[test]
    fn rejects_non_associative() {
        // Latin square with identity 0 that is not a group: order 5 loop
        let t = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(FiniteGroupTable::new(5, t, None).is_err());
    }

    #[test]
    fn subgroup_lattice_closed_under_intersection() {
        let g = FiniteGroupTable::product(&FiniteGroupTable::cyclic(2), &FiniteGroupTable::cyclic(4));
        let subs = g.subgroups();
        for a in &subs {
            for b in &subs {
                let meet: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
                assert!(subs.contains(&meet));
            }
        }
    }
}
