//! Presentations of class-2 groups read off from the relation space
//! `R = ker(Λ²V_1 → V_2)`.
//!
//! Each integer vector `c` of a basis of `R` becomes the relator
//! `∏ [a_i^{c_ij}, a_j]`, whose complexity is the support of `c`. The
//! presented group maps onto a lattice of the algebra's group with finite
//! kernel.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Presentation, RelatorForm};
use crate::algebra::{GradedLieAlgebra, LieVector};
use crate::error::{Error, Result};
use crate::linalg::{clear_denominators, rref};
use crate::words::Word;
use crate::Q;

/// A basis of `R` over the pairs `(i, j)`, `i < j`, of layer-1 positions,
/// with supports shrunk greedily.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationBasis {
    pub pairs: Vec<(usize, usize)>,
    pub vectors: Vec<Vec<BigInt>>,
}

impl RelationBasis {
    pub fn max_support(&self) -> usize {
        self.vectors.iter().map(|v| support(v)).max().unwrap_or(0)
    }
}

fn support(v: &[BigInt]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

pub fn relation_basis(alg: &GradedLieAlgebra<Q>) -> Result<RelationBasis> {
    if alg.class() != 2 {
        return Err(Error::Input(format!("relation basis needs class 2, got class {}", alg.class())));
    }
    let v1 = alg.layer_indices(1);
    let v2 = alg.layer_indices(2);
    let mut pairs = Vec::new();
    for (p, &i) in v1.iter().enumerate() {
        for &j in &v1[p + 1..] {
            pairs.push((i, j));
        }
    }
    // columns: images of [a_i, a_j] in V_2
    let rows: Vec<Vec<Q>> = v2
        .iter()
        .map(|&k| pairs.iter().map(|&(i, j)| alg.basis_bracket(i, j).0[k].clone()).collect())
        .collect();
    let (m, pivots) = if rows.is_empty() { (Vec::new(), Vec::new()) } else { rref(&rows) };
    let mut vectors = Vec::new();
    for free in (0..pairs.len()).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); pairs.len()];
        v[free] = Q::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        vectors.push(primitive(clear_denominators(&v)));
    }
    shrink(&mut vectors);
    Ok(RelationBasis { pairs, vectors })
}

/// Replaces `v` by `w_k v - v_k w` whenever that shrinks its support. The
/// rational span is unchanged since the coefficient of `v` is nonzero.
fn shrink(vectors: &mut [Vec<BigInt>]) {
    let mut improved = true;
    while improved {
        improved = false;
        for a in 0..vectors.len() {
            for b in 0..vectors.len() {
                if a == b {
                    continue;
                }
                for k in 0..vectors[a].len() {
                    let (va, vb) = (&vectors[a][k], &vectors[b][k]);
                    if va.is_zero() || vb.is_zero() {
                        continue;
                    }
                    let cand: Vec<BigInt> =
                        vectors[a].iter().zip(&vectors[b]).map(|(x, y)| vb * x - va * y).collect();
                    let cand = primitive(cand);
                    if support(&cand) < support(&vectors[a]) {
                        vectors[a] = cand;
                        improved = true;
                    }
                }
            }
        }
    }
}

/// Generators `a1..ad` for the layer-1 basis; one relator per relation
/// vector, carrying its form, then the nil relators `[a_i,[a_j,a_k]]`.
pub fn class2_presentation(alg: Arc<GradedLieAlgebra<Q>>) -> Result<Presentation> {
    let basis = relation_basis(&alg)?;
    let v1 = alg.layer_indices(1);
    let pos = |i: usize| v1.iter().position(|&x| x == i).expect("layer-1 index");
    let mut relators = Vec::new();
    let mut forms = Vec::new();
    for v in &basis.vectors {
        let mut pairs = Vec::new();
        for (c, &(i, j)) in v.iter().zip(&basis.pairs) {
            if c.is_zero() {
                continue;
            }
            let e = c.to_i64().filter(|e| e.abs() <= 1 << 16).ok_or_else(|| {
                Error::Unsupported(format!("relation coefficient {c} too large for a word exponent"))
            })?;
            pairs.push((Word::gen(pos(i)).pow(e), Word::gen(pos(j))));
        }
        let form = RelatorForm { pairs };
        relators.push(form.expand());
        forms.push(Some(form));
    }
    let d = v1.len();
    for i in 0..d {
        for j in 0..d {
            for k in j + 1..d {
                relators.push(Word::commutator(&Word::gen(i), &Word::commutator(&Word::gen(j), &Word::gen(k))));
                forms.push(None);
            }
        }
    }
    let names = (1..=d).map(|i| format!("a{i}")).collect();
    let map = v1.iter().map(|&i| LieVector::basis(alg.dim(), i)).collect();
    let pres = Presentation::new(names, relators).with_algebra(alg, map)?;
    Ok(pres.with_relators(pres.relators().to_vec(), forms))
}
