//! Central products, central quotients and graded automorphisms.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{GradedLieAlgebra, LieVector};
use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::Q;

/// `n` copies of a class-2 algebra with their second layers identified.
#[derive(Clone, Debug)]
pub struct CentralProduct {
    pub algebra: GradedLieAlgebra<Q>,
    /// `embeddings[c][i]` is the index of base basis vector `i` in copy `c`.
    pub embeddings: Vec<Vec<usize>>,
}

/// Builds the central product of `n` copies of a class-2 algebra.
///
/// Basis order: the layer-1 vectors of copy 1, copy 2, ..., then the shared
/// layer-2 vectors. Generator names get a `_c` suffix per copy.
pub fn central_product_algebra(alg: &GradedLieAlgebra<Q>, n: usize) -> Result<CentralProduct> {
    if alg.class() != 2 {
        return Err(Error::Input(format!("central product needs class 2, got class {}", alg.class())));
    }
    if n == 0 {
        return Err(Error::Input("central power needs n >= 1".into()));
    }
    if n == 1 {
        let id = (0..alg.dim()).collect();
        return Ok(CentralProduct { algebra: alg.clone(), embeddings: vec![id] });
    }
    let v1 = alg.layer_indices(1);
    let v2 = alg.layer_indices(2);
    let d1 = v1.len();
    let mut embeddings = vec![vec![0; alg.dim()]; n];
    for (c, emb) in embeddings.iter_mut().enumerate() {
        for (pos, &i) in v1.iter().enumerate() {
            emb[i] = c * d1 + pos;
        }
        for (pos, &i) in v2.iter().enumerate() {
            emb[i] = n * d1 + pos;
        }
    }
    let mut entries = Vec::new();
    for emb in &embeddings {
        for (&(i, j), terms) in alg.brackets() {
            let mapped = terms.iter().map(|(k, c)| (emb[*k], c.clone())).collect();
            entries.push(((emb[i], emb[j]), mapped));
        }
    }
    let mut layers = vec![1; n * d1];
    layers.extend(std::iter::repeat(2).take(v2.len()));
    let mut names = vec![String::new(); n * d1 + v2.len()];
    for (c, emb) in embeddings.iter().enumerate() {
        for &i in &v1 {
            names[emb[i]] = format!("{}_{}", alg.names()[i], c + 1);
        }
        for &i in &v2 {
            names[emb[i]] = alg.names()[i].clone();
        }
    }
    let algebra = GradedLieAlgebra::from_parts(layers, entries).with_names(names);
    Ok(CentralProduct { algebra, embeddings })
}

/// Quotient of an algebra by central, single-layer vectors.
#[derive(Clone, Debug)]
pub struct CentralQuotient {
    pub algebra: GradedLieAlgebra<Q>,
    /// `dim(quotient) x dim(source)` matrix of the projection.
    pub projection: RatMatrix,
    /// For each quotient basis vector, the source basis vector it came from.
    pub kept: Vec<usize>,
}

impl CentralQuotient {
    pub fn project(&self, v: &LieVector<Q>) -> LieVector<Q> {
        LieVector(linalg::mat_vec(&self.projection, &v.0))
    }
}

/// Quotient by the ideal spanned by central vectors `zs`, each lying in a
/// single layer.
///
/// Per layer, the Hermite normal form of the (denominator-cleared) relators
/// picks pivot coordinates; the remaining basis vectors form a saturated
/// complement and become the quotient basis.
pub fn central_quotient(alg: &GradedLieAlgebra<Q>, zs: &[LieVector<Q>]) -> Result<CentralQuotient> {
    let n = alg.dim();
    let mut by_layer: std::collections::BTreeMap<u32, Vec<Vec<Q>>> = Default::default();
    for z in zs {
        alg.check_dim(z)?;
        if z.is_zero() {
            continue;
        }
        for i in 0..n {
            if !alg.bracket_unchecked(&LieVector::basis(n, i), z).is_zero() {
                return Err(Error::Input(format!("relator {z} is not central")));
            }
        }
        let layers: std::collections::BTreeSet<u32> =
            (0..n).filter(|&i| !z.0[i].is_zero()).map(|i| alg.layer(i)).collect();
        if layers.len() != 1 {
            return Err(Error::Input(format!("relator {z} is not in a single layer")));
        }
        let w = *layers.iter().next().unwrap();
        let idx = alg.layer_indices(w);
        by_layer.entry(w).or_default().push(idx.iter().map(|&i| z.0[i].clone()).collect());
    }

    // rows of the reduced relator span per layer, expressed in full coordinates
    let mut killed = vec![false; n];
    let mut reducers: Vec<(usize, Vec<Q>)> = Vec::new();
    for (w, rows) in &by_layer {
        let idx = alg.layer_indices(*w);
        let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| linalg::clear_denominators(r)).collect();
        let hnf = linalg::hermite_normal_form(&ints);
        let (red, piv) = linalg::rref(rows);
        debug_assert_eq!(linalg::pivots(&hnf), piv);
        for (row, p) in red.into_iter().zip(piv) {
            let mut full = vec![Q::zero(); n];
            for (pos, &i) in idx.iter().enumerate() {
                full[i] = row[pos].clone();
            }
            killed[idx[p]] = true;
            reducers.push((idx[p], full));
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| !killed[i]).collect();
    let reduce = |v: &[Q]| -> Vec<Q> {
        let mut v = v.to_vec();
        for (p, row) in &reducers {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &f * r;
            }
        }
        kept.iter().map(|&i| v[i].clone()).collect()
    };
    let mut projection = vec![vec![Q::zero(); n]; kept.len()];
    for i in 0..n {
        let col = reduce(&LieVector::<Q>::basis(n, i).0);
        for (r, x) in col.into_iter().enumerate() {
            projection[r][i] = x;
        }
    }
    let mut entries = Vec::new();
    for (a, &i) in kept.iter().enumerate() {
        for (b, &j) in kept.iter().enumerate().skip(a + 1) {
            let img = reduce(&alg.basis_bracket(i, j).0);
            let terms: Vec<(usize, Q)> =
                img.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            if !terms.is_empty() {
                entries.push(((a, b), terms));
            }
        }
    }
    let layers = kept.iter().map(|&i| alg.layer(i)).collect();
    let names = kept.iter().map(|&i| alg.names()[i].clone()).collect();
    let algebra = GradedLieAlgebra::new(layers, entries)?.with_names(names);
    Ok(CentralQuotient { algebra, projection, kept })
}

/// Layer-preserving automorphism as a matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAutomorphism {
    pub matrix: RatMatrix,
}

impl GradedAutomorphism {
    pub fn apply(&self, v: &LieVector<Q>) -> LieVector<Q> {
        LieVector(linalg::mat_vec(&self.matrix, &v.0))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedAutomorphism) -> GradedAutomorphism {
        GradedAutomorphism { matrix: linalg::mat_mul(&self.matrix, &other.matrix) }
    }

    /// Checks invertibility, layer preservation and `A[x,y] = [Ax,Ay]` on
    /// every basis pair.
    pub fn is_automorphism_of(&self, alg: &GradedLieAlgebra<Q>) -> bool {
        let n = alg.dim();
        if self.matrix.len() != n || linalg::inverse(&self.matrix).is_none() {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                if alg.layer(i) != alg.layer(j) && !self.matrix[i][j].is_zero() {
                    return false;
                }
            }
        }
        let images: Vec<LieVector<Q>> = (0..n).map(|i| self.apply(&LieVector::basis(n, i))).collect();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.apply(&alg.basis_bracket(i, j));
                let rhs = alg.bracket_unchecked(&images[i], &images[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Extends an invertible map on layer 1 to a graded automorphism.
///
/// `layer1_map[r][c]` is the coefficient of the `r`-th layer-1 basis vector
/// in the image of the `c`-th. Higher layers are solved one at a time from
/// brackets `[V_1, V_{w-1}]`; the result is then checked on every basis
/// pair, and an inconsistent extension is reported as not an automorphism.
pub fn extend_automorphism(alg: &GradedLieAlgebra<Q>, layer1_map: &[Vec<Q>]) -> Result<GradedAutomorphism> {
    let n = alg.dim();
    let v1 = alg.layer_indices(1);
    if layer1_map.len() != v1.len() || layer1_map.iter().any(|r| r.len() != v1.len()) {
        return Err(Error::Dimension { expected: v1.len(), got: layer1_map.len() });
    }
    if linalg::inverse(layer1_map).is_none() {
        return Err(Error::NotAutomorphism("layer-1 map is singular".into()));
    }
    let mut matrix = vec![vec![Q::zero(); n]; n];
    for (c, &ic) in v1.iter().enumerate() {
        for (r, &ir) in v1.iter().enumerate() {
            matrix[ir][ic] = layer1_map[r][c].clone();
        }
    }
    let column = |m: &RatMatrix, i: usize| LieVector((0..n).map(|r| m[r][i].clone()).collect::<Vec<_>>());
    for w in 2..=alg.class() {
        let vw = alg.layer_indices(w);
        let lower = alg.layer_indices(w - 1);
        // brackets spanning V_w and their required images
        let mut sources: Vec<Vec<Q>> = Vec::new();
        let mut targets: Vec<LieVector<Q>> = Vec::new();
        for &p in &v1 {
            for &qq in &lower {
                let b = alg.basis_bracket(p, qq);
                if b.is_zero() {
                    continue;
                }
                let coords: Vec<Q> = vw.iter().map(|&i| b.0[i].clone()).collect();
                let mut trial = sources.clone();
                trial.push(coords.clone());
                if linalg::rank(&trial) > sources.len() {
                    sources.push(coords);
                    targets.push(alg.bracket_unchecked(&column(&matrix, p), &column(&matrix, qq)));
                }
            }
        }
        if sources.len() < vw.len() {
            return Err(Error::NotAutomorphism(format!(
                "layer {w} is not generated by brackets with layer 1; extension is not determined"
            )));
        }
        // image of basis vector e_k = sum_s coeff_s * targets[s]
        for (pos, &k) in vw.iter().enumerate() {
            let mut unit = vec![Q::zero(); vw.len()];
            unit[pos] = Q::one();
            let coeff = linalg::solve_in_span(&sources, &unit).expect("sources span V_w");
            for r in 0..n {
                matrix[r][k] = coeff
                    .iter()
                    .zip(&targets)
                    .fold(Q::zero(), |acc, (c, t)| acc + c * &t.0[r]);
            }
        }
    }
    let aut = GradedAutomorphism { matrix };
    if !aut.is_automorphism_of(alg) {
        return Err(Error::NotAutomorphism("bracket images are inconsistent".into()));
    }
    Ok(aut)
}
