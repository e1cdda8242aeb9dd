use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crystrep::acceptance::snf_identities_hold;
use crystrep::classify::family_rep;
use crystrep::group::{intermediate_subgroups, lattice_subgroup, Element, VaGroup};
use crystrep::linalg::{cokernel_invariants, integer_kernel, rational_rank, IntMatrix};
use crystrep::numeric::{cis, haar_unitary};
use crystrep::paths::{path_conjugation, verify_path};
use crystrep::probe::cocycle_space_dim;
use crystrep::projective::{descend, q_characters, twist};
use crystrep::rep::{decompose, induce, is_irreducible, restrict, UnitaryRep};
use crystrep::topology::{
    circle_with_involution, circle_with_rotation, invariant_rational_ranks, plain_circle, product,
    quotient_by_involution, rational_ranks, CwComplex,
};
use crystrep::torus::{act, induced_char_rep, is_free_orbit, lattice_character_rep, orbit, restrict_to_a_spectrum, TorusChar};

fn int_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn angle() -> impl Strategy<Value = f64> {
    0.0f64..1.0
}

fn gamma(k: usize) -> Arc<VaGroup> {
    Arc::new(VaGroup::gamma_k(k).unwrap())
}

fn family(k: usize, angles: &[f64], alpha: f64) -> UnitaryRep {
    let z: Vec<Complex64> = angles.iter().map(|a| cis(std::f64::consts::TAU * a)).collect();
    family_rep(k, &z, cis(std::f64::consts::TAU * alpha)).unwrap()
}

fn circle_kind(i: u8) -> CwComplex {
    match i % 3 {
        0 => circle_with_involution(),
        1 => circle_with_rotation(),
        _ => plain_circle(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn smith_form_identities(m in int_matrix()) {
        prop_assert!(snf_identities_hold(&m));
    }

    #[test]
    fn integer_kernel_is_kernel(m in int_matrix()) {
        let ker = integer_kernel(&m);
        prop_assert_eq!(ker.len(), m.cols() - rational_rank(&m));
        for x in &ker {
            prop_assert!(m.apply(x).iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn cokernel_ignores_column_order_and_zero_columns(m in int_matrix(), shift in 0usize..8) {
        let base = cokernel_invariants(&m, m.rows()).unwrap();
        let n = m.cols();
        let perm: Vec<usize> = (0..n).map(|j| (j + shift) % n).collect();
        let rows: Vec<usize> = (0..m.rows()).collect();
        let permuted = m.select(&rows, &perm);
        prop_assert_eq!(&cokernel_invariants(&permuted, m.rows()).unwrap(), &base);
        let padded = m.hcat(&IntMatrix::zeros(m.rows(), 2));
        prop_assert_eq!(&cokernel_invariants(&padded, m.rows()).unwrap(), &base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn group_axioms(
        k in 1usize..=2,
        a in prop::collection::vec(-3i64..=3, 3),
        b in prop::collection::vec(-3i64..=3, 3),
        c in prop::collection::vec(-3i64..=3, 3),
        qs in (0usize..2, 0usize..2, 0usize..2),
    ) {
        let g = gamma(k);
        let el = |v: &[i64], q| Element::new(v[..=k].to_vec(), q);
        let (x, y, z) = (el(&a, qs.0), el(&b, qs.1), el(&c, qs.2));
        let xy = g.multiply(&x, &y).unwrap();
        let yz = g.multiply(&y, &z).unwrap();
        prop_assert_eq!(g.multiply(&xy, &z).unwrap(), g.multiply(&x, &yz).unwrap());
        let xi = g.inverse(&x).unwrap();
        prop_assert_eq!(g.multiply(&x, &xi).unwrap(), g.identity());
        prop_assert_eq!(g.multiply(&g.identity(), &x).unwrap(), x);
    }

    #[test]
    fn evaluate_is_a_homomorphism(
        seed in any::<u64>(),
        a in prop::collection::vec(-3i64..=3, 2),
        b in prop::collection::vec(-3i64..=3, 2),
        qs in (0usize..2, 0usize..2),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = family(1, &[rng.random()], rng.random());
        let g = rho.group_arc().clone();
        let x = Element::new(a, qs.0);
        let y = Element::new(b, qs.1);
        let xy = g.multiply(&x, &y).unwrap();
        let lhs = rho.evaluate(&xy).unwrap();
        let rhs = rho.evaluate(&x).unwrap() * rho.evaluate(&y).unwrap();
        prop_assert!(crystrep::numeric::dist(&lhs, &rhs) < 10.0 * rho.tolerances().relation_tol);
    }

    #[test]
    fn conjugation_invariance(seed in any::<u64>(), k in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let angles: Vec<f64> = (0..k).map(|_| rng.random()).collect();
        let rho = family(k, &angles, rng.random());
        let v = haar_unitary(&mut rng, 2);
        let conj = rho.conjugate(&v).unwrap();
        prop_assert_eq!(is_irreducible(&rho).unwrap(), is_irreducible(&conj).unwrap());
        for x in rho.group().word_ball(2) {
            prop_assert!((rho.character(&x).unwrap() - conj.character(&x).unwrap()).norm() < 1e-10);
        }
        let sum = rho.direct_sum(&conj).unwrap();
        let sum_conj = sum.conjugate(&haar_unitary(&mut rng, 4)).unwrap();
        prop_assert_eq!(decompose(&sum, 1).unwrap().dims(), decompose(&sum_conj, 2).unwrap().dims());
        prop_assert_eq!(cocycle_space_dim(&rho).unwrap().dim, cocycle_space_dim(&conj).unwrap().dim);
    }

    #[test]
    fn induced_characters_match_free_orbits(k in 1usize..=3, angles in prop::collection::vec(angle(), 4), snap in any::<bool>()) {
        let g = gamma(k);
        let mut a = angles[..=k].to_vec();
        if snap {
            for x in a.iter_mut().take(k) {
                *x = if *x < 0.5 { 0.0 } else { 0.5 };
            }
        }
        let chi = TorusChar::new(a);
        let ind = induced_char_rep(&g, &chi).unwrap();
        prop_assert_eq!(is_free_orbit(&g, &chi).unwrap(), is_irreducible(&ind).unwrap());
        // the lattice spectrum is the orbit, each point with stabilizer multiplicity
        let o = orbit(&g, &chi).unwrap();
        let spec = restrict_to_a_spectrum(&ind).unwrap();
        prop_assert_eq!(spec.len(), o.points.len());
        for c in &spec {
            prop_assert_eq!(c.multiplicity, o.stabilizer.len());
            prop_assert!(o.points.iter().any(|p| p.approx_eq(&c.character, 1e-9)));
        }
        let moved = act(&g, 1, &chi).unwrap();
        let mo = orbit(&g, &moved).unwrap();
        prop_assert_eq!(mo.free, o.free);
        prop_assert_eq!(mo.points.len(), o.points.len());
    }

    #[test]
    fn projection_formula(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = family(1, &[rng.random()], rng.random());
        let g = rho.group_arc().clone();
        let a = lattice_subgroup(&g);
        let psi = lattice_character_rep(&Arc::new(a.group.clone()), &TorusChar::new(vec![rng.random(), rng.random()])).unwrap();
        let left = induce(&g, &a, &restrict(&rho, &a).unwrap().tensor(&psi).unwrap()).unwrap();
        let right = rho.tensor(&induce(&g, &a, &psi).unwrap()).unwrap();
        for x in g.word_ball(3) {
            prop_assert!((left.character(&x).unwrap() - right.character(&x).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn decomposition_respects_index(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r1 = family(2, &[rng.random(), rng.random()], rng.random());
        let r2 = family(2, &[rng.random(), rng.random()], rng.random());
        let sum = r1.direct_sum(&r2).unwrap().conjugate(&haar_unitary(&mut rng, 4)).unwrap();
        prop_assert!(decompose(&sum, seed).unwrap().max_factor_dim() <= 2);
    }

    #[test]
    fn twist_preserves_descended_cocycle(seed in any::<u64>(), signs in prop::collection::vec(any::<bool>(), 2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z: Vec<Complex64> = signs.iter().map(|&s| Complex64::new(if s { -1.0 } else { 1.0 }, 0.0)).collect();
        let rho = family_rep(2, &z, cis(std::f64::consts::TAU * rng.random::<f64>())).unwrap();
        let base = descend(&rho).unwrap().cocycle;
        for chi in q_characters(rho.group().point_group()) {
            let t = twist(&chi, &rho).unwrap();
            prop_assert!(base.max_distance(&descend(&t).unwrap().cocycle) <= 1e-12);
        }
    }

    #[test]
    fn path_conjugation_commutes_with_conjugation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = family(1, &[rng.random()], rng.random());
        let v = haar_unitary(&mut rng, 2);
        let w = haar_unitary(&mut rng, 2);
        let p = path_conjugation(&rho, &v, 60).unwrap();
        prop_assert!(verify_path(&p, None).passed);
        let q = p.map(|s| s.conjugate(&w)).unwrap();
        prop_assert!(verify_path(&q, None).passed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_and_quotients(kinds in prop::collection::vec(any::<u8>(), 1..=3)) {
        let factors: Vec<CwComplex> = kinds.iter().map(|&i| circle_kind(i)).collect();
        let x = product(&factors).unwrap();
        prop_assert!(x.boundary_squared_zero());
        let ranks = rational_ranks(&x);
        let chi: i64 = ranks.iter().enumerate().map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(chi, x.euler_characteristic());
        if x.has_involution() {
            let q = quotient_by_involution(&x).unwrap();
            prop_assert!(q.boundary_squared_zero());
            let mut got = rational_ranks(&q);
            got.resize(x.degrees(), 0);
            prop_assert_eq!(got, invariant_rational_ranks(&x).unwrap());
            let qr = rational_ranks(&q);
            let qchi: i64 = qr.iter().enumerate().map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            prop_assert_eq!(qchi, q.euler_characteristic());
        }
    }
}

#[test]
fn gamma_k_lift_has_infinite_order() {
    for k in 1..=4 {
        let g = gamma(k);
        let lift = Element::new(vec![0; k + 1], 1);
        let mut x = g.identity();
        for m in 1..=20i64 {
            x = g.multiply(&g.multiply(&x, &lift).unwrap(), &lift).unwrap();
            let mut v = vec![0; k + 1];
            v[k] = m;
            assert_eq!(x, Element::new(v, 0));
        }
    }
}

#[test]
fn intermediate_subgroups_closed_under_intersection() {
    for g in [VaGroup::gamma_k(2).unwrap(), VaGroup::p4()] {
        let subs = intermediate_subgroups(&g).unwrap();
        let sets: Vec<Vec<usize>> = subs.iter().map(|h| h.elements.clone()).collect();
        for a in &sets {
            for b in &sets {
                let mut meet: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
                meet.sort();
                assert!(sets.iter().any(|s| {
                    let mut s = s.clone();
                    s.sort();
                    s == meet
                }));
            }
        }
    }
}

#[test]
fn snf_of_identity_is_trivial() {
    let m = IntMatrix::identity(3);
    assert!(snf_identities_hold(&m));
    assert!(cokernel_invariants(&m, 3).unwrap().is_trivial());
    let two = IntMatrix::from_rows(&[vec![2]]);
    assert_eq!(cokernel_invariants(&two, 1).unwrap().torsion, vec![BigInt::from(2)]);
}
