//! Graded nilpotent Lie algebras given by structure constants.
//!
//! A basis vector `e_i` carries a positive layer weight; brackets are
//! stored only for ordered pairs `i < j` and `[e_j, e_i] = -[e_i, e_j]`
//! by convention.

mod constructions;
mod presets;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, from_rational, parse_rational, Scalar};

pub use constructions::{
    central_product_algebra, central_quotient, extend_automorphism, CentralProduct,
    CentralQuotient, GradedAutomorphism,
};
pub use presets::{
    build_algebra, cayley_dickson_product, class3_rank8, division_heisenberg, free_nilpotent,
    heisenberg, witt_dimension, AlgebraPreset, DivisionKind, HallBasis, HallElement,
};

/// A coordinate vector in a Lie algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieVector<S>(pub Vec<S>);

impl<S: Scalar> LieVector<S> {
    pub fn zero(dim: usize) -> Self {
        LieVector(vec![S::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = S::one();
        v
    }

    pub fn from_rationals(coords: &[BigRational]) -> Self {
        LieVector(coords.iter().map(from_rational).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn scaled(&self, c: &S) -> Self {
        LieVector(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }
}

impl<S> Index<usize> for LieVector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> Add for &LieVector<S> {
    type Output = LieVector<S>;
    fn add(self, rhs: Self) -> LieVector<S> {
        LieVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

impl<S: Scalar> Sub for &LieVector<S> {
    type Output = LieVector<S>;
    fn sub(self, rhs: Self) -> LieVector<S> {
        LieVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<S: Scalar> Neg for &LieVector<S> {
    type Output = LieVector<S>;
    fn neg(self) -> LieVector<S> {
        LieVector(self.0.iter().map(|a| -a.clone()).collect())
    }
}

impl<S: fmt::Display> fmt::Display for LieVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Sparse structure-constant table: `(i, j)` with `i < j` maps to the
/// terms `(k, c)` of `[e_i, e_j] = sum c e_k`.
pub type BracketTable<S> = BTreeMap<(usize, usize), Vec<(usize, S)>>;

#[derive(Clone, Debug, PartialEq)]
pub struct GradedLieAlgebra<S> {
    layers: Vec<u32>,
    brackets: BracketTable<S>,
    names: Vec<String>,
}

/// One violated axiom found by [`GradedLieAlgebra::verify`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// A stored pair is not `i < j`, or an index is out of range.
    BadPair { i: usize, j: usize },
    /// `[e_i, e_j]` has a nonzero term on `e_k` in the wrong layer.
    Grading { i: usize, j: usize, k: usize },
    /// The Jacobi sum for `(i, j, k)` is nonzero.
    Jacobi { i: usize, j: usize, k: usize, residual: String },
    /// A layer weight of zero.
    ZeroLayer { i: usize },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        write!(f, "fail ({} violations)", self.violations.len())?;
        for v in self.violations.iter().take(8) {
            write!(f, "; {v:?}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> GradedLieAlgebra<S> {
    /// Builds an algebra without checking the axioms. Zero coefficients
    /// are dropped; a pair given as `(j, i)` with `j > i` is stored negated.
    pub fn from_parts(layers: Vec<u32>, entries: Vec<((usize, usize), Vec<(usize, S)>)>) -> Self {
        let mut brackets: BracketTable<S> = BTreeMap::new();
        for ((i, j), terms) in entries {
            let (key, sign) = if i <= j { ((i, j), S::one()) } else { ((j, i), -S::one()) };
            let slot = brackets.entry(key).or_default();
            for (k, c) in terms {
                let c = c * sign.clone();
                match slot.iter_mut().find(|(kk, _)| *kk == k) {
                    Some((_, existing)) => *existing = existing.clone() + c,
                    None => slot.push((k, c)),
                }
            }
            slot.retain(|(_, c)| !c.is_zero());
            slot.sort_by_key(|(k, _)| *k);
        }
        brackets.retain(|_, t| !t.is_empty());
        let names = (0..layers.len()).map(|i| format!("e{}", i + 1)).collect();
        GradedLieAlgebra { layers, brackets, names }
    }

    /// Builds an algebra and rejects it unless [`verify`](Self::verify) passes.
    pub fn new(layers: Vec<u32>, entries: Vec<((usize, usize), Vec<(usize, S)>)>) -> Result<Self> {
        let alg = Self::from_parts(layers, entries);
        let report = alg.verify();
        if report.passed() {
            Ok(alg)
        } else {
            Err(Error::Verification(report.to_string()))
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim());
        self.names = names;
        self
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn dim(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[u32] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> u32 {
        self.layers[i]
    }

    /// Largest layer weight carrying a basis vector.
    pub fn class(&self) -> u32 {
        self.layers.iter().copied().max().unwrap_or(0)
    }

    /// Basis indices in layer `w`, ascending.
    pub fn layer_indices(&self, w: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.layers[i] == w).collect()
    }

    pub fn brackets(&self) -> &BracketTable<S> {
        &self.brackets
    }

    /// `[e_i, e_j]` as a list of terms.
    pub fn basis_bracket(&self, i: usize, j: usize) -> LieVector<S> {
        let mut out = LieVector::zero(self.dim());
        if i == j {
            return out;
        }
        let (key, neg) = if i < j { ((i, j), false) } else { ((j, i), true) };
        if let Some(terms) = self.brackets.get(&key) {
            for (k, c) in terms {
                out.0[*k] = if neg { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    /// Bilinear bracket of two vectors.
    pub fn bracket(&self, x: &LieVector<S>, y: &LieVector<S>) -> Result<LieVector<S>> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &LieVector<S>, y: &LieVector<S>) -> LieVector<S> {
        let mut out = LieVector::<S>::zero(self.dim());
        for (&(i, j), terms) in &self.brackets {
            let (xi, xj, yi, yj) = (&x.0[i], &x.0[j], &y.0[i], &y.0[j]);
            if (xi.is_zero() || yj.is_zero()) && (xj.is_zero() || yi.is_zero()) {
                continue;
            }
            let c = xi.clone() * yj.clone() - xj.clone() * yi.clone();
            if c.is_zero() {
                continue;
            }
            for (k, s) in terms {
                out.0[*k] = out.0[*k].clone() + c.clone() * s.clone();
            }
        }
        out
    }

    pub fn check_dim(&self, x: &LieVector<S>) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: x.dim() });
        }
        Ok(())
    }

    /// Component of `x` in layer `w` (other coordinates zeroed).
    pub fn layer_part(&self, x: &LieVector<S>, w: u32) -> LieVector<S> {
        LieVector(
            x.0.iter()
                .zip(&self.layers)
                .map(|(c, &l)| if l == w { c.clone() } else { S::zero() })
                .collect(),
        )
    }

    /// Checks pair ordering, grading, and the Jacobi identity on every
    /// basis triple.
    pub fn verify(&self) -> VerificationReport {
        let mut violations = Vec::new();
        let n = self.dim();
        for (i, &l) in self.layers.iter().enumerate() {
            if l == 0 {
                violations.push(Violation::ZeroLayer { i });
            }
        }
        for (&(i, j), terms) in &self.brackets {
            if i >= j || j >= n {
                violations.push(Violation::BadPair { i, j });
                continue;
            }
            for (k, _) in terms {
                if *k >= n {
                    violations.push(Violation::BadPair { i, j });
                } else if self.layers[*k] != self.layers[i] + self.layers[j] {
                    violations.push(Violation::Grading { i, j, k: *k });
                }
            }
        }
        if !violations.is_empty() {
            return VerificationReport { violations };
        }
        let basis: Vec<LieVector<S>> = (0..n).map(|i| LieVector::basis(n, i)).collect();
        // cache [e_j, e_k] for all pairs
        let pair = |a: usize, b: usize| self.basis_bracket(a, b);
        let class = self.class();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if self.layers[i] + self.layers[j] + self.layers[k] > class {
                        continue;
                    }
                    let t1 = self.bracket_unchecked(&basis[i], &pair(j, k));
                    let t2 = self.bracket_unchecked(&basis[j], &pair(k, i));
                    let t3 = self.bracket_unchecked(&basis[k], &pair(i, j));
                    let sum = &(&t1 + &t2) + &t3;
                    if !sum.is_zero() {
                        violations.push(Violation::Jacobi { i, j, k, residual: sum.to_string() });
                    }
                }
            }
        }
        VerificationReport { violations }
    }
}

/// Serialized algebra: `{ "dim", "layers", "brackets": [{ "i", "j", "terms": [{ "k", "c" }] }] }`
/// with 0-based indices and rationals as `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraFile {
    pub dim: usize,
    pub layers: Vec<u32>,
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermEntry {
    pub k: usize,
    pub c: String,
}

impl GradedLieAlgebra<BigRational> {
    /// Same algebra over another scalar type.
    pub fn convert<T: Scalar>(&self) -> GradedLieAlgebra<T> {
        let entries = self
            .brackets
            .iter()
            .map(|(&k, terms)| (k, terms.iter().map(|(i, c)| (*i, from_rational::<T>(c))).collect()))
            .collect();
        GradedLieAlgebra::from_parts(self.layers.clone(), entries).with_names(self.names.clone())
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            dim: self.dim(),
            layers: self.layers.clone(),
            brackets: self
                .brackets
                .iter()
                .map(|(&(i, j), terms)| BracketEntry {
                    i,
                    j,
                    terms: terms.iter().map(|(k, c)| TermEntry { k: *k, c: format_rational(c) }).collect(),
                })
                .collect(),
        }
    }

    /// Loads an algebra and rejects it if the axioms fail.
    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        if file.layers.len() != file.dim {
            return Err(Error::Dimension { expected: file.dim, got: file.layers.len() });
        }
        let mut entries = Vec::new();
        for b in &file.brackets {
            if b.i >= b.j {
                return Err(Error::Input(format!("bracket pair ({}, {}) must have i < j", b.i, b.j)));
            }
            let terms = b
                .terms
                .iter()
                .map(|t| Ok((t.k, parse_rational(&t.c)?)))
                .collect::<Result<Vec<_>>>()?;
            entries.push(((b.i, b.j), terms));
        }
        Self::new(file.layers.clone(), entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;
    use num_traits::One;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn bracket_of_vector_with_itself_vanishes() {
        let alg = class3_rank8();
        let x = LieVector((1..=8).map(q).collect());
        assert!(alg.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let alg = heisenberg(3).unwrap();
        let err = alg.bracket(&LieVector::zero(2), &LieVector::zero(3)).unwrap_err();
        assert_eq!(err, Error::Dimension { expected: 3, got: 2 });
    }

    #[test]
    fn abelian_algebra_verifies() {
        let alg: GradedLieAlgebra<Q> = GradedLieAlgebra::from_parts(vec![1, 1, 1], vec![]);
        assert!(alg.verify().passed());
    }

    #[test]
    fn grading_violation_is_reported() {
        let alg = GradedLieAlgebra::from_parts(vec![1, 1, 1], vec![((0, 1), vec![(2, Q::one())])]);
        let report = alg.verify();
        assert_eq!(report.violations, vec![Violation::Grading { i: 0, j: 1, k: 2 }]);
    }

    #[test]
    fn file_round_trip_and_rejection() {
        let alg = class3_rank8();
        let back = GradedLieAlgebra::from_json(&alg.to_json()).unwrap();
        assert_eq!(back.brackets(), alg.brackets());
        let mut file = alg.to_file();
        // drop [g,d] = h, breaking Jacobi
        file.brackets.retain(|b| !(b.i == 3 && b.j == 6));
        assert!(matches!(GradedLieAlgebra::from_file(&file), Err(Error::Verification(_))));
        let text = r#"{"dim":3,"layers":[1,1,2],"brackets":[{"i":0,"j":1,"terms":[{"k":2,"c":"1/2"}]}]}"#;
        let h = GradedLieAlgebra::from_json(text).unwrap();
        assert_eq!(h.basis_bracket(1, 0)[2], Q::new((-1).into(), 2.into()));
    }
}
