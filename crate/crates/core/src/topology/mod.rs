//! Cellular chain complexes, quotients by cellular involutions, homology of
//! pairs, and the low homotopy of the deformation representation ring of
//! `Γ_k` read off from the pair model of its 2-dimensional irreducibles.

mod cw;
mod homology;
mod pair;

pub use cw::{
    circle_with_involution, circle_with_rotation, plain_circle, product, quotient_by_involution,
    torus_with_involution, CwComplex,
};
pub use homology::{all_homology, chain_homology, homology, invariant_rational_ranks, rational_ranks, HomologyGroup};
pub use pair::{
    build_irr2_pair, component_class, connecting_maps, gamma_k_betti_formula, rational_cohomology_gamma_k,
    rdef_homotopy, ConnectingMaps, CwPair, Pi1Report, RationalCohomology, RdefReport, MAX_COHOMOLOGY_K, MAX_PAIR_K,
};
