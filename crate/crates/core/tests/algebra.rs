mod common;

use common::*;
use nilfill::algebra::*;
use nilfill::{Algebra, Error};
use proptest::prelude::*;

fn presets() -> Vec<Algebra> {
    let mut out = Vec::new();
    for (d, k) in [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (2, 5), (4, 3)] {
        out.push(free_nilpotent(d, k).unwrap());
    }
    for n in [3, 5, 7] {
        out.push(heisenberg(n).unwrap());
    }
    for kind in [DivisionKind::Complex, DivisionKind::Quaternion, DivisionKind::Octonion] {
        out.push(division_heisenberg(kind));
    }
    out.push(class3_rank8());
    out
}

#[test]
fn every_preset_verifies() {
    for alg in presets() {
        let report = alg.verify();
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn free_nilpotent_dimensions_follow_witt() {
    for (d, k) in [(2, 5), (3, 4), (4, 3)] {
        let alg = free_nilpotent(d, k).unwrap();
        for w in 1..=k {
            assert_eq!(alg.layer_indices(w).len(), witt_dimension(d, w), "({d},{k}) weight {w}");
        }
    }
    // necklace counts for two letters
    let counts: Vec<usize> = (1..=6).map(|n| witt_dimension(2, n)).collect();
    assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
}

#[test]
fn hall_brackets_match_associative_commutators() {
    for (d, k) in [(2, 4), (3, 3)] {
        let alg = free_nilpotent(d, k).unwrap();
        let images = hall_images(d, k);
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = embed(&images, &alg.basis_bracket(i, j));
                assert_eq!(lhs, images[i].bracket(&images[j]), "({d},{k}) [{i},{j}]");
            }
        }
    }
}

#[test]
fn division_heisenberg_dimensions() {
    let dims: Vec<(usize, usize)> = [DivisionKind::Complex, DivisionKind::Quaternion, DivisionKind::Octonion]
        .iter()
        .map(|k| {
            let a = division_heisenberg(*k);
            (a.layer_indices(1).len(), a.layer_indices(2).len())
        })
        .collect();
    assert_eq!(dims, vec![(2, 1), (4, 3), (8, 7)]);
}

#[test]
fn json_round_trip() {
    for alg in presets() {
        let back = Algebra::from_json(&alg.to_json()).unwrap();
        assert_eq!(back.dim(), alg.dim());
        assert_eq!(back.layers(), alg.layers());
        assert_eq!(back.brackets(), alg.brackets());
    }
}

#[test]
fn broken_jacobi_is_reported() {
    // [x,y] = z, [x,z] = w, [y,z] = w with w central violates nothing;
    // adding [x,w] = w breaks nilpotency and grading
    let alg = Algebra::from_parts(
        vec![1, 1, 2, 3],
        vec![((0, 1), vec![(2, q(1))]), ((0, 2), vec![(3, q(1))]), ((1, 2), vec![(3, q(1))]), ((0, 3), vec![(3, q(1))])],
    );
    assert!(!alg.verify().passed());
}

#[test]
fn dimension_mismatch() {
    let alg = heisenberg(3).unwrap();
    let err = alg.bracket(&LieVector::zero(3), &LieVector::zero(4)).unwrap_err();
    assert_eq!(err, Error::Dimension { expected: 3, got: 4 });
    assert!(free_nilpotent(0, 2).is_err());
    assert!(heisenberg(4).is_err());
    assert!("nonsense(1)".parse::<AlgebraPreset>().is_err());
}

proptest! {
    #[test]
    fn bracket_is_alternating_and_graded(seed in 0u64..500) {
        let alg = free_nilpotent(2, 4).unwrap();
        let mut r = rng(seed);
        let x = random_vector(&mut r, alg.dim());
        let y = random_vector(&mut r, alg.dim());
        let xy = alg.bracket(&x, &y).unwrap();
        let yx = alg.bracket(&y, &x).unwrap();
        prop_assert_eq!(&xy, &yx.scaled(&q(-1)));
        prop_assert!(alg.bracket(&x, &x).unwrap().is_zero());
        prop_assert!(alg.layer_part(&xy, 1).is_zero());
    }
}
