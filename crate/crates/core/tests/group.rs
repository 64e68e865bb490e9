mod common;

use std::sync::Arc;

use common::*;
use nilfill::algebra::{class3_rank8, free_nilpotent, heisenberg, LieVector};
use nilfill::group::*;
use nilfill::Q;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[test]
fn heisenberg_product_matches_matrices() {
    let alg = Arc::new(heisenberg(3).unwrap());
    let mut r = rng(11);
    for _ in 0..100 {
        let (g, h) = (random_element(&mut r, &alg), random_element(&mut r, &alg));
        let gh = g.multiply(&h).unwrap();
        let expected = mat_mul3(&heisenberg_matrix(g.log()), &heisenberg_matrix(h.log()));
        assert_eq!(heisenberg_matrix(gh.log()), expected);
    }
}

#[test]
fn free_class3_product_matches_associative_oracle() {
    let alg = Arc::new(free_nilpotent(2, 3).unwrap());
    let images = hall_images(2, 3);
    let mut r = rng(12);
    for _ in 0..100 {
        let (g, h) = (random_element(&mut r, &alg), random_element(&mut r, &alg));
        let gh = g.multiply(&h).unwrap();
        let lhs = embed(&images, gh.log()).exp();
        let rhs = embed(&images, g.log()).exp().mul(&embed(&images, h.log()).exp());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn group_axioms_class3() {
    let alg = Arc::new(class3_rank8());
    let mut r = rng(13);
    for _ in 0..200 {
        let (a, b, c) = (random_element(&mut r, &alg), random_element(&mut r, &alg), random_element(&mut r, &alg));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        assert_eq!(left, right);
        assert!(a.multiply(&a.invert()).unwrap().is_identity());
        assert_eq!(a.pow(&BigInt::from(3)), a.multiply(&a).unwrap().multiply(&a).unwrap());
    }
}

#[test]
fn scaling_is_an_automorphism() {
    let alg = Arc::new(free_nilpotent(2, 3).unwrap());
    let mut r = rng(14);
    for _ in 0..50 {
        let (g, h) = (random_element(&mut r, &alg), random_element(&mut r, &alg));
        let t = small_rational(&mut r, 5);
        if t.is_zero() {
            assert!(g.scale(&t).is_err());
            continue;
        }
        let lhs = g.multiply(&h).unwrap().scale(&t).unwrap();
        let rhs = g.scale(&t).unwrap().multiply(&h.scale(&t).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // the norm is a dyadic upper bound with resolution 2^-20 per root
        let n = homogeneous_norm(&g.scale(&t).unwrap());
        let expected = &homogeneous_norm(&g) * &t.abs();
        let gap = (n - expected).to_f64().unwrap().abs();
        let tf = t.to_f64().unwrap().abs();
        assert!(gap <= (1.0 + tf) * 1e-5, "{gap}");
    }
}

#[test]
fn rounding_lands_on_lattice_near_input() {
    let alg = Arc::new(heisenberg(3).unwrap());
    let gens: Vec<GroupElement<Q>> =
        (0..2).map(|i| GroupElement::exp(&alg, LieVector::basis(3, i)).unwrap()).collect();
    let basis = LatticeBasis::new(gens).unwrap();
    let mut r = rng(15);
    for _ in 0..50 {
        let g = random_element(&mut r, &alg);
        let p = basis.round(&g);
        // lattice points of H_3 generated by exp X, exp Y: x, y ∈ Z and z ∈ xy/2 + Z
        let v = p.log();
        assert!(v.0[0].is_integer() && v.0[1].is_integer());
        assert!((&v.0[2] - &v.0[0] * &v.0[1] / q(2)).is_integer());
        assert!(homogeneous_distance(&g, &p) <= q(2));
        assert_eq!(basis.round(&p), p);
    }
}
