use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cw::CwComplex;
use crate::error::{Error, Result};
use crate::linalg::{rational_rank, smith_normal_form, AbelianInvariants, IntMatrix};

/// `H_d` of a chain complex with chosen cycle representatives. Generator
/// `i` has order `orders[i]` (`None` for infinite order), and torsion
/// generators come first, in divisibility order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub invariants: AbelianInvariants,
    pub generators: Vec<Vec<BigInt>>,
    pub orders: Vec<Option<BigInt>>,
    /// Row `i` of `coords` applied to a cycle gives its coordinate on
    /// generator `i` (reduce modulo the order for torsion generators).
    coords: IntMatrix,
}

impl HomologyGroup {
    /// Coordinates of the class of the cycle `x` on the generators.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.coords.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.coords.cols(),
                found: x.len(),
            });
        }
        let raw = self.coords.apply(x);
        Ok(raw
            .into_iter()
            .zip(&self.orders)
            .map(|(c, o)| match o {
                Some(n) => c.mod_floor(n),
                None => c,
            })
            .collect())
    }

    pub fn free_generators(&self) -> impl Iterator<Item = (usize, &Vec<BigInt>)> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(i, _)| self.orders[*i].is_none())
    }
}

/// Homology in degree `d` of the chain complex with differentials
/// `incoming: C_{d+1} → C_d` and `outgoing: C_d → C_{d-1}`.
pub fn chain_homology(d: usize, outgoing: &IntMatrix, incoming: &IntMatrix) -> HomologyGroup {
    let n = outgoing.cols();
    let s = smith_normal_form(outgoing);
    let z = n - s.rank;
    let kernel_rows: Vec<usize> = (s.rank..n).collect();
    let all_cols: Vec<usize> = (0..n).collect();
    // cycle x = K y with K = v[:, rank..], y = v_inv[rank.., :] x
    let k = s.v.select(&all_cols, &kernel_rows);
    let to_kernel = s.v_inv.select(&kernel_rows, &all_cols);
    let r = &to_kernel * incoming;
    let sr = smith_normal_form(&r);
    let diag = sr.diagonal();
    let lift = &k * &sr.u_inv;
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut keep = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..z {
        let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_one() {
            continue;
        }
        keep.push(i);
        generators.push(lift.column(i));
        if di.is_zero() {
            orders.push(None);
        } else {
            torsion.push(di.clone());
            orders.push(Some(di));
        }
    }
    let coords = &sr.u.select(&keep, &(0..z).collect::<Vec<_>>()) * &to_kernel;
    HomologyGroup {
        degree: d,
        invariants: AbelianInvariants::new(z - sr.rank, torsion),
        generators,
        orders,
        coords,
    }
}

pub fn homology(x: &CwComplex, d: usize) -> HomologyGroup {
    chain_homology(d, &x.boundary(d), &x.boundary(d + 1))
}

pub fn all_homology(x: &CwComplex) -> Vec<HomologyGroup> {
    (0..x.degrees()).map(|d| homology(x, d)).collect()
}

pub fn rational_ranks(x: &CwComplex) -> Vec<usize> {
    (0..x.degrees())
        .map(|d| {
            let n = x.cell_count(d);
            n - rational_rank(&x.boundary(d)) - rational_rank(&x.boundary(d + 1))
        })
        .collect()
}

/// Dimension of the τ-invariant part of `H_d(X; Q)`, as
/// `dim Z - rank [T - I | B]` in cycle coordinates, where `T` is τ on the
/// cycles and `B` spans the boundaries.
pub fn invariant_rational_ranks(x: &CwComplex) -> Result<Vec<usize>> {
    if !x.has_involution() {
        return Err(Error::input("complex has no involution"));
    }
    let mut out = Vec::new();
    for d in 0..x.degrees() {
        let n = x.cell_count(d);
        let s = smith_normal_form(&x.boundary(d));
        let rows: Vec<usize> = (s.rank..n).collect();
        let cols: Vec<usize> = (0..n).collect();
        let k = s.v.select(&cols, &rows);
        let to_kernel = s.v_inv.select(&rows, &cols);
        let tau = x.involution_matrix(d).expect("present");
        let z = rows.len();
        let mut t_minus = &to_kernel * &(&tau * &k);
        for i in 0..z {
            let v = t_minus.get(i, i) - BigInt::one();
            t_minus.set(i, i, v);
        }
        let b = &to_kernel * &x.boundary(d + 1);
        out.push(z - rational_rank(&t_minus.hcat(&b)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::cw::*;

    fn rp2() -> CwComplex {
        CwComplex::new(
            vec![vec!["v".into()], vec!["e".into()], vec!["f".into()]],
            vec![
                IntMatrix::zeros(0, 1),
                IntMatrix::zeros(1, 1),
                IntMatrix::from_rows(&[vec![2]]),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn projective_plane() {
        let x = rp2();
        let h: Vec<_> = all_homology(&x).into_iter().map(|h| h.invariants).collect();
        assert_eq!(h[0], AbelianInvariants::free(1));
        assert_eq!(h[1], AbelianInvariants::new(0, vec![BigInt::from(2)]));
        assert!(h[2].is_trivial());
        let h1 = homology(&x, 1);
        assert_eq!(h1.coordinates(&[BigInt::from(3)]).unwrap(), vec![BigInt::one()]);
    }

    #[test]
    fn torus_generators_are_cycles() {
        let t = torus_with_involution(2).unwrap();
        for d in 0..3 {
            let h = homology(&t, d);
            for (i, g) in h.generators.iter().enumerate() {
                assert!(t.boundary(d).apply(g).iter().all(|x| x.is_zero()));
                let mut e = vec![BigInt::zero(); h.generators.len()];
                e[i] = BigInt::one();
                assert_eq!(h.coordinates(g).unwrap(), e);
            }
        }
        assert_eq!(invariant_rational_ranks(&t).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn euler_characteristic_matches_ranks() {
        for x in [torus_with_involution(3).unwrap(), rp2()] {
            let r = rational_ranks(&x);
            let chi: i64 = r.iter().enumerate().map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            assert_eq!(chi, x.euler_characteristic());
        }
    }
}
