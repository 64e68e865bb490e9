//! Simply connected nilpotent Lie groups in exponential coordinates.
//!
//! An element is stored as `log g`; multiplication is the truncated BCH
//! series and inversion is negation.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{GradedLieAlgebra, LieVector};
use crate::bch::cached_series;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::scalar::{format_rational, Scalar};
use crate::Q;

/// `exp(coords)` in the group of `algebra`.
#[derive(Clone, Debug)]
pub struct GroupElement<S> {
    algebra: Arc<GradedLieAlgebra<S>>,
    coords: LieVector<S>,
}

impl<S: PartialEq> PartialEq for GroupElement<S> {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
            && (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra)
    }
}

impl<S: Scalar> GroupElement<S> {
    pub fn identity(algebra: &Arc<GradedLieAlgebra<S>>) -> Self {
        GroupElement { algebra: algebra.clone(), coords: LieVector::zero(algebra.dim()) }
    }

    /// `exp(v)`.
    pub fn exp(algebra: &Arc<GradedLieAlgebra<S>>, v: LieVector<S>) -> Result<Self> {
        algebra.check_dim(&v)?;
        Ok(GroupElement { algebra: algebra.clone(), coords: v })
    }

    pub fn algebra(&self) -> &Arc<GradedLieAlgebra<S>> {
        &self.algebra
    }

    /// `log g`.
    pub fn log(&self) -> &LieVector<S> {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.is_zero()
    }

    fn same_group(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    /// `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if !self.same_group(other) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    /// `self · other` without the algebra-identity check.
    pub fn mul_unchecked(&self, other: &Self) -> Self {
        let coords = cached_series().evaluate(&self.algebra, &self.coords, &other.coords);
        GroupElement { algebra: self.algebra.clone(), coords }
    }

    pub fn invert(&self) -> Self {
        GroupElement { algebra: self.algebra.clone(), coords: -&self.coords }
    }

    /// `self^n = exp(n log self)`.
    pub fn pow(&self, n: &BigInt) -> Self {
        GroupElement { algebra: self.algebra.clone(), coords: self.coords.scaled(&S::from_bigint(n)) }
    }

    /// `[self, other] = self · other · self⁻¹ · other⁻¹`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.multiply(other)?.mul_unchecked(&self.invert()).mul_unchecked(&other.invert()))
    }

    /// Applies `s_t`, which multiplies layer `i` by `t^i`.
    pub fn scale(&self, t: &S) -> Result<Self> {
        scale_element(t, self)
    }
}

impl GroupElement<Q> {
    /// Coordinates as `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coords.iter().map(|c| serde_json::Value::String(format_rational(c))).collect(),
        )
    }
}

impl<S: Scalar> fmt::Display for GroupElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp{}", self.coords)
    }
}

/// `s_t(g)`: layer `i` coordinates multiplied by `t^i`.
pub fn scale_element<S: Scalar>(t: &S, g: &GroupElement<S>) -> Result<GroupElement<S>> {
    if t.is_zero() {
        return Err(Error::Input("scaling factor must be nonzero".into()));
    }
    let alg = &g.algebra;
    let mut powers = vec![S::one()];
    for _ in 0..alg.class() {
        let next = powers.last().unwrap().clone() * t.clone();
        powers.push(next);
    }
    let coords = LieVector(
        g.coords.iter().enumerate().map(|(i, c)| c.clone() * powers[alg.layer(i) as usize].clone()).collect(),
    );
    Ok(GroupElement { algebra: alg.clone(), coords })
}

/// Upper bound for `max_i ‖v_i‖_∞^(1/i)`; exact whenever every root is a
/// dyadic rational with denominator at most `2^20`.
pub fn homogeneous_norm<S: Scalar>(g: &GroupElement<S>) -> S {
    let alg = &g.algebra;
    let mut best = S::zero();
    for w in 1..=alg.class() {
        let m = alg
            .layer_indices(w)
            .into_iter()
            .map(|i| g.coords[i].abs())
            .fold(S::zero(), |a, b| if b > a { b } else { a });
        if m.is_zero() {
            continue;
        }
        let r = m.root_upper(w);
        if r > best {
            best = r;
        }
    }
    best
}

/// Generators of a lattice whose logs lie in `V_1`, with per-layer lattice
/// data for rounding.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    generators: Vec<GroupElement<Q>>,
    /// `layers[j-1]`: elements of the lattice in `G^(j)` whose layer-`j`
    /// parts form a basis of the layer-`j` coordinate lattice.
    layers: Vec<Vec<GroupElement<Q>>>,
}

impl LatticeBasis {
    /// Builds the per-layer data. Layer `j` is spanned by the left-normed
    /// `j`-fold commutators of the generators, reduced to a basis by an HNF
    /// that tracks the unimodular transform.
    pub fn new(generators: Vec<GroupElement<Q>>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::NonFullLattice("no generators".into()));
        };
        let alg = first.algebra.clone();
        for g in &generators {
            if !g.same_group(first) {
                return Err(Error::AlgebraMismatch);
            }
            if (0..alg.dim()).any(|i| alg.layer(i) != 1 && !g.coords[i].is_zero()) {
                return Err(Error::Input(format!("generator {g} is not in exp V_1")));
            }
        }
        let mut layers = Vec::new();
        let mut spanning: Vec<GroupElement<Q>> = generators.clone();
        for w in 1..=alg.class() {
            if w > 1 {
                let mut next = Vec::new();
                for c in &spanning {
                    for g in &generators {
                        let k = c.commutator(g)?;
                        if !k.is_identity() && !next.contains(&k) {
                            next.push(k);
                        }
                    }
                }
                spanning = next;
            }
            layers.push(layer_basis(&alg, w, &spanning)?);
        }
        Ok(LatticeBasis { generators, layers })
    }

    pub fn generators(&self) -> &[GroupElement<Q>] {
        &self.generators
    }

    pub fn algebra(&self) -> &Arc<GradedLieAlgebra<Q>> {
        &self.generators[0].algebra
    }

    /// Basis elements used for rounding in layer `w`.
    pub fn layer_basis(&self, w: u32) -> &[GroupElement<Q>] {
        &self.layers[w as usize - 1]
    }

    /// HNF of the layer-`w` coordinate lattice, after clearing a common
    /// denominator.
    pub fn layer_hnf(&self, w: u32) -> IntMatrix {
        let alg = self.algebra();
        let idx = alg.layer_indices(w);
        let rows: Vec<Vec<Q>> =
            self.layer_basis(w).iter().map(|e| idx.iter().map(|&i| e.coords[i].clone()).collect()).collect();
        linalg::hermite_normal_form(&clear_common(&rows))
    }

    /// `ρ_1(g)`: a lattice element near `g`.
    ///
    /// Layers are processed upward. At layer `j` the residual `e⁻¹g` is read
    /// in the layer-`j` lattice basis, each coefficient is rounded half to
    /// even, and `e` is multiplied on the right by the corresponding powers.
    pub fn round(&self, g: &GroupElement<Q>) -> GroupElement<Q> {
        let alg = self.algebra().clone();
        let mut e = GroupElement::identity(&alg);
        for w in 1..=alg.class() {
            let basis = self.layer_basis(w);
            if basis.is_empty() {
                continue;
            }
            let residual = e.invert().mul_unchecked(g);
            let idx = alg.layer_indices(w);
            let rows: Vec<Vec<Q>> =
                basis.iter().map(|b| idx.iter().map(|&i| b.coords[i].clone()).collect()).collect();
            let target: Vec<Q> = idx.iter().map(|&i| residual.coords[i].clone()).collect();
            let coeffs = linalg::solve_in_span(&rows, &target).expect("layer lattice is full");
            for (b, c) in basis.iter().zip(coeffs) {
                let n = c.round_half_even();
                if !n.is_zero() {
                    e = e.mul_unchecked(&b.pow(&n));
                }
            }
        }
        e
    }
}

fn clear_common(rows: &[Vec<Q>]) -> IntMatrix {
    let lcm = rows.iter().flatten().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let scale = Q::from_integer(lcm);
    rows.iter().map(|r| r.iter().map(|x| (x * &scale).to_integer()).collect()).collect()
}

fn layer_basis(alg: &Arc<GradedLieAlgebra<Q>>, w: u32, spanning: &[GroupElement<Q>]) -> Result<Vec<GroupElement<Q>>> {
    let idx = alg.layer_indices(w);
    if idx.is_empty() {
        return Ok(Vec::new());
    }
    let m = spanning.len();
    let rows: Vec<Vec<Q>> = spanning.iter().map(|e| idx.iter().map(|&i| e.coords[i].clone()).collect()).collect();
    // augment with the identity to record the unimodular transform
    let mut aug = clear_common(&rows);
    for (r, row) in aug.iter_mut().enumerate() {
        row.extend((0..m).map(|c| if c == r { BigInt::one() } else { BigInt::zero() }));
    }
    let hnf = linalg::hermite_normal_form(&aug);
    let d = idx.len();
    let basis: Vec<GroupElement<Q>> = hnf
        .iter()
        .filter(|row| row[..d].iter().any(|x| !x.is_zero()))
        .map(|row| {
            let mut e = GroupElement::identity(alg);
            for (s, u) in spanning.iter().zip(&row[d..]) {
                if !u.is_zero() {
                    e = e.mul_unchecked(&s.pow(u));
                }
            }
            e
        })
        .collect();
    if basis.len() != d {
        return Err(Error::NonFullLattice(format!("layer {w}: rank {} < {d}", basis.len())));
    }
    Ok(basis)
}

/// `ρ_t(h)`: an element of `H_t = s_t(H)` near `h`, namely
/// `s_t(ρ_1(s_{1/t}(h)))`.
pub fn project_to_scaled_lattice(h: &GroupElement<Q>, basis: &LatticeBasis, t: u64) -> Result<GroupElement<Q>> {
    if t == 0 {
        return Err(Error::Input("scale must be positive".into()));
    }
    let t = Q::from_integer(t.into());
    let down = scale_element(&t.recip(), h)?;
    scale_element(&t, &basis.round(&down))
}

/// Output of [`compatible_lattice_generators`].
#[derive(Clone, Debug)]
pub struct CompatibleGenerators {
    pub generators: Vec<GroupElement<Q>>,
    /// HNF of the layer-1 projection lattice.
    pub layer1_hnf: IntMatrix,
}

/// Replaces each generator by `exp(p_1(log g))`. The layer-1 projection
/// lattice is unchanged; this is asserted by comparing HNFs.
pub fn compatible_lattice_generators(gens: &[GroupElement<Q>]) -> Result<CompatibleGenerators> {
    let Some(first) = gens.first() else {
        return Ok(CompatibleGenerators { generators: Vec::new(), layer1_hnf: Vec::new() });
    };
    let alg = first.algebra.clone();
    let v1 = alg.layer_indices(1);
    let projected: Vec<GroupElement<Q>> = gens
        .iter()
        .map(|g| GroupElement { algebra: alg.clone(), coords: alg.layer_part(&g.coords, 1) })
        .collect();
    let rows_in: Vec<Vec<Q>> = gens.iter().map(|g| v1.iter().map(|&i| g.coords[i].clone()).collect()).collect();
    let rows_out: Vec<Vec<Q>> =
        projected.iter().map(|g| v1.iter().map(|&i| g.coords[i].clone()).collect()).collect();
    let hnf_in = linalg::hermite_normal_form(&clear_common(&rows_in));
    let hnf_out = linalg::hermite_normal_form(&clear_common(&rows_out));
    if hnf_in != hnf_out {
        return Err(Error::Verification("layer-1 projection lattice changed".into()));
    }
    Ok(CompatibleGenerators { generators: projected, layer1_hnf: hnf_out })
}

/// Left-invariant quasi-distance `‖g⁻¹h‖`.
pub fn homogeneous_distance(g: &GroupElement<Q>, h: &GroupElement<Q>) -> Q {
    homogeneous_norm(&g.invert().mul_unchecked(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{class3_rank8, heisenberg};

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn el(alg: &Arc<GradedLieAlgebra<Q>>, c: &[Q]) -> GroupElement<Q> {
        GroupElement::exp(alg, LieVector(c.to_vec())).unwrap()
    }

    fn h3() -> Arc<GradedLieAlgebra<Q>> {
        Arc::new(heisenberg(3).unwrap())
    }

    #[test]
    fn heisenberg_product() {
        let h = h3();
        let a = el(&h, &[q(1, 1), q(0, 1), q(0, 1)]);
        let b = el(&h, &[q(0, 1), q(1, 1), q(0, 1)]);
        let ab = a.multiply(&b).unwrap();
        assert_eq!(ab.log().0, vec![q(1, 1), q(1, 1), q(1, 2)]);
        assert_eq!(ab.invert().log().0, vec![q(-1, 1), q(-1, 1), q(-1, 2)]);
        assert!(ab.multiply(&ab.invert()).unwrap().is_identity());
        assert_eq!(a.multiply(&GroupElement::identity(&h)).unwrap(), a);
    }

    #[test]
    fn mismatched_algebras() {
        let a = GroupElement::identity(&h3());
        let b = GroupElement::identity(&Arc::new(heisenberg(5).unwrap()));
        assert_eq!(a.multiply(&b), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn scaling() {
        let h = h3();
        let g = el(&h, &[q(1, 1), q(2, 1), q(3, 1)]);
        let s = scale_element(&q(3, 1), &g).unwrap();
        assert_eq!(s.log().0, vec![q(3, 1), q(6, 1), q(27, 1)]);
        assert_eq!(scale_element(&q(1, 1), &g).unwrap(), g);
        assert!(scale_element(&q(0, 1), &g).is_err());
    }

    #[test]
    fn norm_examples() {
        let h = h3();
        assert_eq!(homogeneous_norm(&GroupElement::identity(&h)), q(0, 1));
        assert_eq!(homogeneous_norm(&el(&h, &[q(-3, 1), q(2, 1), q(0, 1)])), q(3, 1));
        assert_eq!(homogeneous_norm(&el(&h, &[q(0, 1), q(0, 1), q(4, 1)])), q(2, 1));
        let n = homogeneous_norm(&el(&h, &[q(0, 1), q(0, 1), q(2, 1)]));
        assert!(&n * &n >= q(2, 1) && n < q(1415, 1000));
    }

    #[test]
    fn projection_examples() {
        let h = h3();
        let gens = vec![el(&h, &[q(1, 1), q(0, 1), q(0, 1)]), el(&h, &[q(0, 1), q(1, 1), q(0, 1)])];
        let basis = LatticeBasis::new(gens).unwrap();
        let g = el(&h, &[q(5, 1), q(0, 1), q(0, 1)]);
        assert_eq!(project_to_scaled_lattice(&g, &basis, 2).unwrap().log().0, vec![q(4, 1), q(0, 1), q(0, 1)]);
        assert_eq!(project_to_scaled_lattice(&g, &basis, 1).unwrap(), g);
        let in_h2 = el(&h, &[q(2, 1), q(4, 1), q(4, 1)]);
        assert_eq!(project_to_scaled_lattice(&in_h2, &basis, 2).unwrap(), in_h2);
    }

    #[test]
    fn non_full_lattice() {
        let h = h3();
        let gens = vec![el(&h, &[q(1, 1), q(0, 1), q(0, 1)])];
        assert!(matches!(LatticeBasis::new(gens), Err(Error::NonFullLattice(_))));
    }

    #[test]
    fn compatible_generators() {
        let h = h3();
        let gens = vec![el(&h, &[q(1, 1), q(0, 1), q(1, 1)]), el(&h, &[q(0, 1), q(1, 1), q(0, 1)])];
        let out = compatible_lattice_generators(&gens).unwrap();
        assert_eq!(out.generators[0].log().0, vec![q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(out.generators[1], gens[1]);
    }

    #[test]
    fn class3_lattice_layers() {
        let alg = Arc::new(class3_rank8());
        let gens: Vec<_> = (0..5).map(|i| GroupElement::exp(&alg, LieVector::basis(8, i)).unwrap()).collect();
        let basis = LatticeBasis::new(gens).unwrap();
        assert_eq!(basis.layer_basis(2).len(), 2);
        assert_eq!(basis.layer_basis(3).len(), 1);
    }

    #[test]
    fn f64_arithmetic() {
        let h: Arc<GradedLieAlgebra<f64>> = Arc::new(heisenberg(3).unwrap().convert());
        let a = GroupElement::exp(&h, LieVector(vec![1.0, 0.0, 0.0])).unwrap();
        let b = GroupElement::exp(&h, LieVector(vec![0.0, 1.0, 0.0])).unwrap();
        assert_eq!(a.multiply(&b).unwrap().log().0, vec![1.0, 1.0, 0.5]);
    }
}
