use serde::{Deserialize, Serialize};

use super::finite::FiniteGroupTable;
use super::vagroup::{Element, VaGroup};
use crate::error::{Error, Result};

/// Preimage in the group of a subgroup `H` of the point group, together
/// with its own extension data. Element `i` of the sub point group is
/// element `elements[i]` of the parent point group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntermediateSubgroup {
    pub elements: Vec<usize>,
    pub group: VaGroup,
    pub index: usize,
}

impl IntermediateSubgroup {
    pub fn new(parent: &VaGroup, elements: &[usize]) -> Result<Self> {
        let mut els = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if els.first() != Some(&0) || parent.point_group().closure(&els) != els {
            return Err(Error::input("element list is not a subgroup of the point group"));
        }
        let m = els.len();
        let pos = |x: usize| els.binary_search(&x).expect("closed under products");
        let pg = parent.point_group();
        let mut mult = vec![0; m * m];
        for a in 0..m {
            for b in 0..m {
                mult[a * m + b] = pos(pg.mul(els[a], els[b]));
            }
        }
        let point = FiniteGroupTable::new(m, mult, None)?;
        let action = els.iter().map(|&q| parent.action(q).clone()).collect();
        let mut cocycle = Vec::with_capacity(m * m);
        for &q in &els {
            for &r in &els {
                cocycle.push(parent.cocycle(q, r).to_vec());
            }
        }
        let name = format!("{}[{}]", parent.name(), els.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        let group = VaGroup::new(name, parent.rank(), point, action, cocycle)?;
        Ok(IntermediateSubgroup {
            index: parent.q_order() / m,
            elements: els,
            group,
        })
    }

    /// Sub point group index of a parent index, if it belongs to `H`.
    pub fn local_index(&self, q: usize) -> Option<usize> {
        self.elements.binary_search(&q).ok()
    }

    pub fn to_parent(&self, x: &Element) -> Element {
        Element::new(x.v.clone(), self.elements[x.q])
    }

    pub fn to_local(&self, x: &Element) -> Option<Element> {
        self.local_index(x.q).map(|q| Element::new(x.v.clone(), q))
    }

    pub fn is_lattice(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Every intermediate subgroup `A ≤ H ≤ G`, ordered by size of `H/A`.
pub fn intermediate_subgroups(g: &VaGroup) -> Result<Vec<IntermediateSubgroup>> {
    g.point_group()
        .subgroups()
        .iter()
        .map(|h| IntermediateSubgroup::new(g, h))
        .collect()
}

/// The translation subgroup `A` as an intermediate subgroup.
pub fn lattice_subgroup(g: &VaGroup) -> IntermediateSubgroup {
    IntermediateSubgroup::new(g, &[0]).expect("trivial subgroup")
}

/// One representative `(0, q)` per left coset `qH`, `q` the smallest index
/// in its coset, in ascending order.
pub fn coset_representatives(g: &VaGroup, h: &IntermediateSubgroup) -> Vec<Element> {
    let pg = g.point_group();
    let mut covered = vec![false; pg.order()];
    let mut reps = Vec::new();
    for q in 0..pg.order() {
        if covered[q] {
            continue;
        }
        for &x in &h.elements {
            covered[pg.mul(q, x)] = true;
        }
        reps.push(Element::new(vec![0; g.rank()], q));
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn c2_has_two() {
        let g = VaGroup::gamma_k(1).unwrap();
        let subs = intermediate_subgroups(&g).unwrap();
        assert_eq!(subs.len(), 2);
        assert!(subs[0].is_lattice());
        assert_eq!(subs[0].index, 2);
        assert_eq!(subs[1].index, 1);
    }

    #[test]
    fn cosets_of_lattice_in_gamma_one() {
        let g = VaGroup::gamma_k(1).unwrap();
        let a = lattice_subgroup(&g);
        assert_eq!(coset_representatives(&g, &a), vec![
            Element::new(vec![0, 0], 0),
            Element::new(vec![0, 0], 1)
        ]);
        let whole = IntermediateSubgroup::new(&g, &[0, 1]).unwrap();
        assert_eq!(coset_representatives(&g, &whole), vec![g.identity()]);
    }

    #[test]
    fn cosets_disjoint_on_word_ball() {
        let g = VaGroup::p4();
        for h in intermediate_subgroups(&g).unwrap() {
            let reps = coset_representatives(&g, &h);
            assert_eq!(reps.len(), h.index);
            let ball: Vec<Element> = h
                .group
                .word_ball(2)
                .iter()
                .map(|x| h.to_parent(x))
                .collect();
            let mut seen = HashSet::new();
            for r in &reps {
                for x in &ball {
                    assert!(seen.insert(g.mul(r, x)), "cosets collide");
                }
            }
        }
    }

    #[test]
    fn p4_chain() {
        let subs = intermediate_subgroups(&VaGroup::p4()).unwrap();
        let sizes: Vec<usize> = subs.iter().map(|h| h.elements.len()).collect();
        assert_eq!(sizes, vec![1, 2, 4]);
    }
}
