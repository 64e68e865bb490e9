mod common;

use std::sync::Arc;

use common::*;
use nilfill::algebra::free_nilpotent;
use nilfill::bch::*;
use nilfill::group::GroupElement;

/// `[...[s_1, s_2], ..., s_n]` in the free associative algebra on X = 0, Y = 1.
fn left_normed_image(word: &[Sym], degree: usize) -> Poly {
    let letter = |s: &Sym| Poly::monomial(degree, vec![if *s == Sym::X { 0 } else { 1 }], q(1));
    word[1..].iter().fold(letter(&word[0]), |acc, s| acc.bracket(&letter(s)))
}

fn oracle(degree: usize) -> Poly {
    let x = Poly::monomial(degree, vec![0], q(1));
    let y = Poly::monomial(degree, vec![1], q(1));
    x.exp().mul(&y.exp()).log()
}

fn series_image(series: &BchSeries, degree: usize) -> Poly {
    let mut out = Poly::zero(degree);
    for terms in series.terms.values() {
        for (w, c) in terms {
            out = out.add(&left_normed_image(&w.0, degree).scale(c));
        }
    }
    out
}

#[test]
fn series_matches_associative_log_up_to_degree_six() {
    for k in 1..=MAX_CLASS {
        let s = bch_series(k).unwrap();
        assert_eq!(series_image(&s, k as usize), oracle(k as usize), "degree {k}");
    }
}

#[test]
fn low_order_coefficients() {
    let s = bch_series(3).unwrap();
    assert_eq!(s.coefficient(&[Sym::X]), q(1));
    assert_eq!(s.coefficient(&[Sym::X, Sym::Y]), qf(1, 2));
    assert_eq!(s.coefficient(&[Sym::X, Sym::Y, Sym::Y]), qf(1, 12));
    assert_eq!(s.coefficient(&[Sym::X, Sym::Y, Sym::X]), qf(-1, 12));
    assert!(bch_series(0).is_err() && bch_series(MAX_CLASS + 1).is_err());
}

#[test]
fn evaluation_agrees_with_group_law() {
    let alg = Arc::new(free_nilpotent(3, 4).unwrap());
    let mut r = rng(21);
    for _ in 0..20 {
        let (x, y) = (random_vector(&mut r, alg.dim()), random_vector(&mut r, alg.dim()));
        let z = cached_series().evaluate(alg.as_ref(), &x, &y);
        let g = GroupElement::exp(&alg, x).unwrap().multiply(&GroupElement::exp(&alg, y).unwrap()).unwrap();
        assert_eq!(g.log(), &z);
    }
}
