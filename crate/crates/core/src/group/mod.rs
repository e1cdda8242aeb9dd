//! Virtually abelian groups as extension data.

mod finite;
mod relations;
mod subgroup;
pub mod text;
mod vagroup;

pub use finite::FiniteGroupTable;
pub use relations::{abelianization, abelianized_relations, relation_checklist, Generator, Relation, RelationKind, Word};
pub use subgroup::{coset_representatives, intermediate_subgroups, lattice_subgroup, IntermediateSubgroup};
pub use vagroup::{Element, LatticeMap, VaGroup};
