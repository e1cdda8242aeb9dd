use std::fmt;

use serde::{Deserialize, Serialize};

use super::vagroup::VaGroup;
use crate::error::Result;
use crate::linalg::{cokernel_invariants, AbelianInvariants, IntMatrix};

/// Generator symbol: `A_i` (lattice basis vector, 0-based) or `U_q` (lift of q ≠ 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    Lattice(usize),
    Lift(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Lattice(i) => write!(f, "A_{}", i + 1),
            Generator::Lift(q) => write!(f, "U_{q}"),
        }
    }
}

/// Word as a product of generator powers, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word(pub Vec<(Generator, i64)>);

impl Word {
    fn push(&mut self, g: Generator, e: i64) {
        if e != 0 {
            self.0.push((g, e));
        }
    }

    /// `A^v`, as `A_1^{v_1} ... A_k^{v_k}`.
    fn monomial(v: &[i64]) -> Word {
        let mut w = Word::default();
        for (i, &e) in v.iter().enumerate() {
            w.push(Generator::Lattice(i), e);
        }
        w
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (n, (g, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            match e {
                1 => write!(f, "{g}")?,
                e => write!(f, "{g}^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationKind {
    Commutator,
    Conjugation,
    Cocycle,
}

/// `lhs = rhs` among generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub lhs: Word,
    pub rhs: Word,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Finite list of relations whose solutions in U(n) are exactly the
/// homomorphisms out of the group.
pub fn relation_checklist(g: &VaGroup) -> Vec<Relation> {
    let k = g.rank();
    let n = g.q_order();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (Generator::Lattice(i), Generator::Lattice(j));
            out.push(Relation {
                kind: RelationKind::Commutator,
                lhs: Word(vec![(a, 1), (b, 1), (a, -1), (b, -1)]),
                rhs: Word::default(),
            });
        }
    }
    for q in 1..n {
        let u = Generator::Lift(q);
        for i in 0..k {
            out.push(Relation {
                kind: RelationKind::Conjugation,
                lhs: Word(vec![(u, 1), (Generator::Lattice(i), 1), (u, -1)]),
                rhs: Word::monomial(&g.action(q).column(i)),
            });
        }
    }
    for q in 1..n {
        for r in 1..n {
            let qr = g.point_group().mul(q, r);
            let mut rhs = Word::monomial(g.cocycle(q, r));
            if qr != 0 {
                rhs.push(Generator::Lift(qr), 1);
            }
            out.push(Relation {
                kind: RelationKind::Cocycle,
                lhs: Word(vec![(Generator::Lift(q), 1), (Generator::Lift(r), 1)]),
                rhs,
            });
        }
    }
    out
}

/// Column index of a generator in the abelianized relation matrix.
fn column_of(g: &VaGroup, gen: Generator) -> usize {
    match gen {
        Generator::Lattice(i) => i,
        Generator::Lift(q) => g.rank() + q - 1,
    }
}

/// Relation matrix of the abelianized checklist: one row per generator,
/// one column per relation (the exponent sum of `lhs · rhs⁻¹`).
pub fn abelianized_relations(g: &VaGroup) -> IntMatrix {
    let gens = g.rank() + g.q_order() - 1;
    let rels = relation_checklist(g);
    let mut m = IntMatrix::zeros(gens, rels.len());
    for (col, rel) in rels.iter().enumerate() {
        let mut sums = vec![0i64; gens];
        for &(gen, e) in &rel.lhs.0 {
            sums[column_of(g, gen)] += e;
        }
        for &(gen, e) in &rel.rhs.0 {
            sums[column_of(g, gen)] -= e;
        }
        for (row, s) in sums.into_iter().enumerate() {
            m.set(row, col, s.into());
        }
    }
    m
}

pub fn abelianization(g: &VaGroup) -> Result<AbelianInvariants> {
    let gens = g.rank() + g.q_order() - 1;
    cokernel_invariants(&abelianized_relations(g), gens)
}
