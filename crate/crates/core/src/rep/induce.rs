use std::sync::Arc;

use super::UnitaryRep;
use crate::error::{Error, Result};
use crate::group::{coset_representatives, IntermediateSubgroup, VaGroup};
use crate::numeric::CMat;

fn check_intermediate(parent: &VaGroup, h: &IntermediateSubgroup) -> Result<()> {
    let ok = h.group.rank() == parent.rank()
        && h.elements.iter().all(|&q| q < parent.q_order())
        && h.elements.iter().enumerate().all(|(a, &q)| {
            h.group.action(a) == parent.action(q)
                && h.elements
                    .iter()
                    .enumerate()
                    .all(|(b, &r)| h.group.cocycle(a, b) == parent.cocycle(q, r))
        });
    if ok {
        Ok(())
    } else {
        Err(Error::input("subgroup data does not belong to this group"))
    }
}

/// Same matrices, regarded as a representation of the preimage of `H`.
pub fn restrict(rho: &UnitaryRep, h: &IntermediateSubgroup) -> Result<UnitaryRep> {
    rho.require_verified()?;
    check_intermediate(rho.group(), h)?;
    let lifts = h.elements.iter().skip(1).map(|&q| rho.lift_image(q).clone()).collect();
    UnitaryRep::from_parts(
        Arc::new(h.group.clone()),
        rho.dim(),
        rho.lattice_images().to_vec(),
        lifts,
    )?
    .verified(*rho.tolerances())
}

/// Induced representation on the frame `γ_i ⊗ e_j`, cosets in the order of
/// [`coset_representatives`]. Block `(i, j)` of the image of `γ` is
/// `ρ'(γ_i⁻¹ γ γ_j)` when that element lies in `H`, zero otherwise.
pub fn induce(g: &Arc<VaGroup>, h: &IntermediateSubgroup, rho: &UnitaryRep) -> Result<UnitaryRep> {
    rho.require_verified()?;
    check_intermediate(g, h)?;
    if *rho.group() != h.group {
        return Err(Error::input("representation is not over the given subgroup"));
    }
    let reps = coset_representatives(g, h);
    let m = reps.len();
    let n = rho.dim();
    let rep_inv: Vec<_> = reps.iter().map(|r| g.inv(r)).collect();
    let image = |gamma: &crate::group::Element| -> Result<CMat> {
        let mut out = CMat::zeros(n * m, n * m);
        for j in 0..m {
            let x = g.mul(gamma, &reps[j]);
            let hit = (0..m).find_map(|i| {
                let y = g.mul(&rep_inv[i], &x);
                h.to_local(&y).map(|local| (i, local))
            });
            let (i, local) = hit.ok_or_else(|| Error::Internal("coset lookup failed".into()))?;
            out.view_mut((i * n, j * n), (n, n))
                .copy_from(&rho.eval_unchecked(&local));
        }
        Ok(out)
    };
    let gens = g.generator_elements();
    let rank = g.rank();
    let lattice = gens[..rank].iter().map(image).collect::<Result<Vec<_>>>()?;
    let lifts = gens[rank..].iter().map(image).collect::<Result<Vec<_>>>()?;
    UnitaryRep::from_parts(g.clone(), n * m, lattice, lifts)?.verified(*rho.tolerances())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::family_rep_gamma_k;
    use crate::group::{intermediate_subgroups, lattice_subgroup, Element};
    use crate::numeric::{self, cis};
    use crate::torus::{induced_char_rep, TorusChar};

    #[test]
    fn induced_character_is_family_rep() {
        let g = Arc::new(VaGroup::gamma_k(1).unwrap());
        let (z, w) = (cis(0.8), cis(-2.1));
        let ind = induced_char_rep(&g, &TorusChar::from_values(&[z, w]).unwrap()).unwrap();
        let fam = family_rep_gamma_k(g.clone(), &[z], w).unwrap();
        assert!(ind.distance(&fam) < 1e-14);
    }

    #[test]
    fn induce_from_whole_group_is_identity() {
        let g = Arc::new(VaGroup::p4());
        let whole = intermediate_subgroups(&g).unwrap().pop().unwrap();
        let rho = induced_char_rep(&g, &TorusChar::new(vec![0.1, 0.35])).unwrap();
        let as_sub = restrict(&rho, &whole).unwrap();
        let back = induce(&g, &whole, &as_sub).unwrap();
        assert!(back.distance(&rho) == 0.0);
    }

    #[test]
    fn restrict_family_rep_to_lattice() {
        let g = Arc::new(VaGroup::gamma_k(1).unwrap());
        let (z, alpha) = (cis(0.5), cis(1.9));
        let rho = family_rep_gamma_k(g.clone(), &[z], alpha).unwrap();
        let res = restrict(&rho, &lattice_subgroup(&g)).unwrap();
        assert_eq!(res.group().q_order(), 1);
        assert!(numeric::dist(res.lattice_image(0), &numeric::diag(&[z, z.conj()])) < 1e-15);
        assert!(numeric::dist(res.lattice_image(1), &(numeric::eye(2) * alpha)) < 1e-15);
    }

    #[test]
    fn induction_commutes_with_sums() {
        let g = Arc::new(VaGroup::gamma_k(2).unwrap());
        let a = lattice_subgroup(&g);
        let ag = Arc::new(a.group.clone());
        let chi = |t: &[f64]| crate::torus::lattice_character_rep(&ag, &TorusChar::new(t.to_vec())).unwrap();
        let (x, y) = (chi(&[0.1, 0.2, 0.3]), chi(&[0.7, 0.15, 0.9]));
        let lhs = induce(&g, &a, &x.direct_sum(&y).unwrap()).unwrap();
        let rhs = induce(&g, &a, &x).unwrap().direct_sum(&induce(&g, &a, &y).unwrap()).unwrap();
        for e in g.word_ball(2) {
            let d = lhs.character(&e).unwrap() - rhs.character(&e).unwrap();
            assert!(d.norm() < 1e-10);
        }
        assert!(lhs.evaluate(&Element::lattice(vec![0, 0, 0])).is_ok());
    }
}
