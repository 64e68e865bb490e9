//! Oracles shared by the integration tests. None of them uses the BCH
//! series or the library's group law.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use nilfill::algebra::{HallBasis, LieVector};
use nilfill::group::GroupElement;
use nilfill::{Algebra, Q};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rational with numerator in `-r..=r` and denominator in `1..=3`.
pub fn small_rational(rng: &mut ChaCha8Rng, r: i64) -> Q {
    qf(rng.gen_range(-r..=r), rng.gen_range(1..=3))
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> LieVector<Q> {
    LieVector((0..dim).map(|_| small_rational(rng, 4)).collect())
}

pub fn random_element(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>) -> GroupElement<Q> {
    GroupElement::exp(alg, random_vector(rng, alg.dim())).unwrap()
}

/// Noncommutative polynomial in the truncated free associative algebra:
/// words of length above `degree` are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub degree: usize,
    pub terms: BTreeMap<Vec<usize>, Q>,
}

impl Poly {
    pub fn zero(degree: usize) -> Self {
        Poly { degree, terms: BTreeMap::new() }
    }

    pub fn one(degree: usize) -> Self {
        Poly::monomial(degree, vec![], Q::one())
    }

    pub fn monomial(degree: usize, word: Vec<usize>, c: Q) -> Self {
        let mut p = Poly::zero(degree);
        p.add_term(word, c);
        p
    }

    fn add_term(&mut self, word: Vec<usize>, c: Q) {
        if word.len() > self.degree || c.is_zero() {
            return;
        }
        let e = self.terms.entry(word.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Poly {
        let mut out = Poly::zero(self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.degree);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() <= self.degree {
                    out.add_term([u.as_slice(), v.as_slice()].concat(), a * b);
                }
            }
        }
        out
    }

    pub fn bracket(&self, other: &Poly) -> Poly {
        self.mul(other).add(&other.mul(self).scale(&q(-1)))
    }

    /// `exp(p)` for `p` without constant term.
    pub fn exp(&self) -> Poly {
        let mut out = Poly::one(self.degree);
        let mut power = Poly::one(self.degree);
        for n in 1..=self.degree as i64 {
            power = power.mul(self).scale(&qf(1, n));
            out = out.add(&power);
        }
        out
    }

    /// `log(p)` for `p` with constant term 1.
    pub fn log(&self) -> Poly {
        let x = self.add(&Poly::one(self.degree).scale(&q(-1)));
        let mut out = Poly::zero(self.degree);
        let mut power = Poly::one(self.degree);
        for n in 1..=self.degree as i64 {
            power = power.mul(&x);
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&qf(sign, n)));
        }
        out
    }
}

/// Images of a Hall basis in the free associative algebra, with
/// `[u, v] = uv - vu`.
pub fn hall_images(rank: usize, class: u32) -> Vec<Poly> {
    let hb = HallBasis::new(rank, class);
    let deg = class as usize;
    let mut images: Vec<Poly> = Vec::new();
    for (i, e) in hb.elements.iter().enumerate() {
        let p = match e.children {
            None => Poly::monomial(deg, vec![i], Q::one()),
            Some((u, v)) => images[u].bracket(&images[v]),
        };
        images.push(p);
    }
    images
}

pub fn embed(images: &[Poly], v: &LieVector<Q>) -> Poly {
    let mut out = Poly::zero(images[0].degree);
    for (p, c) in images.iter().zip(v.iter()) {
        out = out.add(&p.scale(c));
    }
    out
}

/// Upper unitriangular 3×3 matrix of `exp(x X + y Y + z Z)` with `[X,Y] = Z`.
pub fn heisenberg_matrix(v: &LieVector<Q>) -> [[Q; 3]; 3] {
    let (x, y, z) = (&v.0[0], &v.0[1], &v.0[2]);
    [
        [q(1), x.clone(), z + x * y / q(2)],
        [q(0), q(1), y.clone()],
        [q(0), q(0), q(1)],
    ]
}

pub fn mat_mul3(a: &[[Q; 3]; 3], b: &[[Q; 3]; 3]) -> [[Q; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()))
}
