//! Named algebra families.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::GradedLieAlgebra;
use crate::error::{Error, Result};
use crate::Q;

type Combo = BTreeMap<usize, Q>;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Node of a Hall basis: a generator or the bracket `[left, right]` of two
/// earlier basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallElement {
    pub weight: u32,
    pub children: Option<(usize, usize)>,
}

/// Hall basis of the free nilpotent Lie algebra of rank `rank` and class
/// `class`.
///
/// Elements are created weight by weight (`u` ascending, then `v`
/// ascending). The Hall order compares weight first and, within a weight,
/// ranks earlier-created elements higher, so `x1 > x2 > ...`. The
/// admissible pairs are `u > v` with `u` a generator or `u = [u1, u2]`
/// with `u2 <= v`. Brackets are left-normed: `[[x1, x2], x1]`.
#[derive(Clone, Debug)]
pub struct HallBasis {
    pub rank: usize,
    pub class: u32,
    pub elements: Vec<HallElement>,
    index: HashMap<(usize, usize), usize>,
}

impl HallBasis {
    pub fn new(rank: usize, class: u32) -> Self {
        let mut elements: Vec<HallElement> =
            (0..rank).map(|_| HallElement { weight: 1, children: None }).collect();
        let mut index = HashMap::new();
        for w in 2..=class {
            let existing = elements.len();
            for u in 0..existing {
                for v in 0..existing {
                    if elements[u].weight + elements[v].weight != w || !hall_less(&elements, v, u) {
                        continue;
                    }
                    let admissible = match elements[u].children {
                        None => true,
                        Some((_, u2)) => u2 == v || hall_less(&elements, u2, v),
                    };
                    if admissible {
                        index.insert((u, v), elements.len());
                        elements.push(HallElement { weight: w, children: Some((u, v)) });
                    }
                }
            }
        }
        HallBasis { rank, class, elements, index }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Left-normed bracket expression of element `i`, e.g. `[[x1,x2],x1]`.
    pub fn expression(&self, i: usize) -> String {
        match self.elements[i].children {
            None => format!("x{}", i + 1),
            Some((u, v)) => format!("[{},{}]", self.expression(u), self.expression(v)),
        }
    }

    fn bracket(&self, x: usize, y: usize, memo: &mut HashMap<(usize, usize), Combo>) -> Combo {
        if let Some(c) = memo.get(&(x, y)) {
            return c.clone();
        }
        let out = self.bracket_uncached(x, y, memo);
        memo.insert((x, y), out.clone());
        out
    }

    fn bracket_uncached(&self, x: usize, y: usize, memo: &mut HashMap<(usize, usize), Combo>) -> Combo {
        let (ex, ey) = (&self.elements[x], &self.elements[y]);
        if x == y || ex.weight + ey.weight > self.class {
            return Combo::new();
        }
        if hall_less(&self.elements, x, y) {
            return negate(self.bracket(y, x, memo));
        }
        match ex.children {
            Some((x1, x2)) if hall_less(&self.elements, y, x2) => {
                // [[x1,x2],y] = [[x1,y],x2] - [[x2,y],x1]
                let mut out = Combo::new();
                for (a, c) in self.bracket(x1, y, memo) {
                    add_scaled(&mut out, &self.bracket(a, x2, memo), &c);
                }
                for (b, c) in self.bracket(x2, y, memo) {
                    add_scaled(&mut out, &self.bracket(b, x1, memo), &-c);
                }
                out
            }
            _ => {
                let k = self.index[&(x, y)];
                Combo::from([(k, Q::one())])
            }
        }
    }

    pub fn algebra(&self) -> GradedLieAlgebra<Q> {
        let mut memo = HashMap::new();
        let n = self.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = self.bracket(i, j, &mut memo);
                if !c.is_empty() {
                    entries.push(((i, j), c.into_iter().collect()));
                }
            }
        }
        let layers = self.elements.iter().map(|e| e.weight).collect();
        let names = (0..n).map(|i| self.expression(i)).collect();
        GradedLieAlgebra::from_parts(layers, entries).with_names(names)
    }
}

/// Hall order: weight first, then later-created elements are smaller.
fn hall_less(elements: &[HallElement], a: usize, b: usize) -> bool {
    (elements[a].weight, std::cmp::Reverse(a)) < (elements[b].weight, std::cmp::Reverse(b))
}

fn negate(c: Combo) -> Combo {
    c.into_iter().map(|(k, v)| (k, -v)).collect()
}

fn add_scaled(acc: &mut Combo, c: &Combo, s: &Q) {
    for (k, v) in c {
        let e = acc.entry(*k).or_insert_with(Q::zero);
        *e += v * s;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

fn moebius(n: u32) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Dimension of the degree-`n` part of the free Lie algebra on `d`
/// generators (necklace count).
pub fn witt_dimension(d: usize, n: u32) -> usize {
    let total: i128 = (1..=n)
        .filter(|m| n % m == 0)
        .map(|m| moebius(m) as i128 * (d as i128).pow(n / m))
        .sum();
    (total / n as i128) as usize
}

/// Free nilpotent Lie algebra of rank `d` and class `k` in a Hall basis.
pub fn free_nilpotent(d: usize, k: u32) -> Result<GradedLieAlgebra<Q>> {
    if d == 0 || k == 0 {
        return Err(Error::Input(format!("free_nilpotent needs d >= 1 and k >= 1, got ({d}, {k})")));
    }
    Ok(HallBasis::new(d, k).algebra())
}

/// Heisenberg algebra of odd dimension `2n + 1`, basis
/// `x1, y1, ..., xn, yn, z` with `[x_i, y_i] = z`.
pub fn heisenberg(dim: usize) -> Result<GradedLieAlgebra<Q>> {
    if dim < 3 || dim % 2 == 0 {
        return Err(Error::Input(format!("heisenberg dimension must be odd and >= 3, got {dim}")));
    }
    let n = (dim - 1) / 2;
    let z = 2 * n;
    let entries = (0..n).map(|i| ((2 * i, 2 * i + 1), vec![(z, Q::one())])).collect();
    let mut layers = vec![1; 2 * n];
    layers.push(2);
    let mut names: Vec<String> = (1..=n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect();
    names.push("z".into());
    Ok(GradedLieAlgebra::from_parts(layers, entries).with_names(names))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisionKind {
    Complex,
    Quaternion,
    Octonion,
}

impl DivisionKind {
    pub fn real_dim(self) -> usize {
        match self {
            DivisionKind::Complex => 2,
            DivisionKind::Quaternion => 4,
            DivisionKind::Octonion => 8,
        }
    }
}

impl FromStr for DivisionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(DivisionKind::Complex),
            "quaternion" => Ok(DivisionKind::Quaternion),
            "octonion" => Ok(DivisionKind::Octonion),
            _ => Err(Error::UnknownPreset(s.into())),
        }
    }
}

/// Product of Cayley–Dickson units `e_p e_q = sign * e_r` in the algebra of
/// real dimension `dim` (a power of two).
///
/// Convention: `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`.
pub fn cayley_dickson_product(p: usize, q: usize, dim: usize) -> (i64, usize) {
    if dim == 1 {
        return (1, 0);
    }
    let h = dim / 2;
    let conj = |r: usize| if r == 0 { 1 } else { -1 };
    match (p < h, q < h) {
        (true, true) => cayley_dickson_product(p, q, h),
        // (e_p, 0)(0, e_q') = (0, e_q' e_p)
        (true, false) => {
            let (s, r) = cayley_dickson_product(q - h, p, h);
            (s, h + r)
        }
        // (0, e_p')(e_q, 0) = (0, e_p' conj(e_q))
        (false, true) => {
            let (s, r) = cayley_dickson_product(p - h, q, h);
            (s * conj(q), h + r)
        }
        // (0, e_p')(0, e_q') = (-conj(e_q') e_p', 0)
        (false, false) => {
            let (s, r) = cayley_dickson_product(q - h, p - h, h);
            (-s * conj(q - h), r)
        }
    }
}

/// Class-2 algebra `k ⊕ Im k` with `[v, w] = Im(v conj(w))`.
///
/// Basis: `e0..e{m-1}` spanning layer 1 (`e0` the real unit), then
/// `i1..i{m-1}` spanning layer 2 (copies of the imaginary units).
pub fn division_heisenberg(kind: DivisionKind) -> GradedLieAlgebra<Q> {
    let m = kind.real_dim();
    let mut entries = Vec::new();
    for p in 0..m {
        for qq in p + 1..m {
            let (s, r) = cayley_dickson_product(p, qq, m);
            let conj_q = if qq == 0 { 1 } else { -1 };
            if r != 0 {
                entries.push(((p, qq), vec![(m + r - 1, q(s * conj_q))]));
            }
        }
    }
    let mut layers = vec![1; m];
    layers.extend(std::iter::repeat(2).take(m - 1));
    let mut names: Vec<String> = (0..m).map(|i| format!("e{i}")).collect();
    names.extend((1..m).map(|i| format!("i{i}")));
    GradedLieAlgebra::from_parts(layers, entries).with_names(names)
}

/// The class-3 algebra on `a..e | f, g | h` with
/// `[a,b]=[c,d]=f`, `[b,c]=[d,e]=g`, `[b,f]=[g,d]=h`.
pub fn class3_rank8() -> GradedLieAlgebra<Q> {
    let (a, b, c, d, e, f, g, h) = (0, 1, 2, 3, 4, 5, 6, 7);
    let one = || vec![(f, Q::one())];
    let entries = vec![
        ((a, b), one()),
        ((c, d), one()),
        ((b, c), vec![(g, Q::one())]),
        ((d, e), vec![(g, Q::one())]),
        ((b, f), vec![(h, Q::one())]),
        ((g, d), vec![(h, Q::one())]),
    ];
    let names = ["a", "b", "c", "d", "e", "f", "g", "h"].map(String::from).to_vec();
    GradedLieAlgebra::from_parts(vec![1, 1, 1, 1, 1, 2, 2, 3], entries).with_names(names)
}

/// Preset selector for [`build_algebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraPreset {
    FreeNilpotent { rank: usize, class: u32 },
    Heisenberg { dim: usize },
    DivisionHeisenberg(DivisionKind),
    Class3Rank8,
}

impl FromStr for AlgebraPreset {
    type Err = Error;

    /// Accepts `free_nilpotent(d,k)`, `heisenberg(n)`,
    /// `division_heisenberg(kind)` and `class3_rank8`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().replace(' ', "");
        let (name, args) = match s.split_once('(') {
            Some((n, rest)) => (n.to_string(), rest.trim_end_matches(')').to_string()),
            None => (s.clone(), String::new()),
        };
        let nums = || -> Result<Vec<u64>> {
            args.split(',')
                .filter(|a| !a.is_empty())
                .map(|a| a.parse().map_err(|_| Error::Input(format!("bad preset argument {a:?}"))))
                .collect()
        };
        match name.as_str() {
            "free_nilpotent" => match nums()?.as_slice() {
                [d, k] => Ok(AlgebraPreset::FreeNilpotent { rank: *d as usize, class: *k as u32 }),
                _ => Err(Error::Input("free_nilpotent(d,k) takes two arguments".into())),
            },
            "heisenberg" => match nums()?.as_slice() {
                [n] => Ok(AlgebraPreset::Heisenberg { dim: *n as usize }),
                _ => Err(Error::Input("heisenberg(n) takes one argument".into())),
            },
            "division_heisenberg" => Ok(AlgebraPreset::DivisionHeisenberg(args.parse()?)),
            "class3_rank8" => Ok(AlgebraPreset::Class3Rank8),
            _ => Err(Error::UnknownPreset(name)),
        }
    }
}

pub fn build_algebra(preset: &AlgebraPreset) -> Result<GradedLieAlgebra<BigRational>> {
    match preset {
        AlgebraPreset::FreeNilpotent { rank, class } => free_nilpotent(*rank, *class),
        AlgebraPreset::Heisenberg { dim } => heisenberg(*dim),
        AlgebraPreset::DivisionHeisenberg(kind) => Ok(division_heisenberg(*kind)),
        AlgebraPreset::Class3Rank8 => Ok(class3_rank8()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieVector;

    fn e(alg: &GradedLieAlgebra<Q>, name: &str) -> LieVector<Q> {
        LieVector::basis(alg.dim(), alg.index_of(name).unwrap())
    }

    #[test]
    fn witt_formula_values() {
        assert_eq!(witt_dimension(2, 1), 2);
        assert_eq!(witt_dimension(2, 2), 1);
        assert_eq!(witt_dimension(2, 3), 2);
        assert_eq!(witt_dimension(2, 4), 3);
        assert_eq!(witt_dimension(3, 3), 8);
        assert_eq!(witt_dimension(10, 2), 45);
    }

    #[test]
    fn hall_basis_dimension_matches_witt() {
        for d in 1..=4 {
            for k in 1..=5u32 {
                if d == 4 && k == 5 {
                    continue;
                }
                let alg = free_nilpotent(d, k).unwrap();
                let expected: usize = (1..=k).map(|n| witt_dimension(d, n)).sum();
                assert_eq!(alg.dim(), expected, "d={d} k={k}");
                assert!(alg.verify().passed(), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn free_nilpotent_2_2_is_heisenberg() {
        let alg = free_nilpotent(2, 2).unwrap();
        assert_eq!(alg.layers(), &[1, 1, 2]);
        let br = alg.basis_bracket(0, 1);
        assert_eq!(br, LieVector::basis(3, 2));
        assert_eq!(alg.names()[2], "[x1,x2]");
        let f3 = free_nilpotent(2, 3).unwrap();
        assert_eq!(&f3.names()[3..], &["[[x1,x2],x1]", "[[x1,x2],x2]"]);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(free_nilpotent(0, 2).is_err());
        assert!(heisenberg(4).is_err());
        assert!("nonsense(3)".parse::<AlgebraPreset>().is_err());
    }

    #[test]
    fn quaternion_heisenberg_relation() {
        let alg = division_heisenberg(DivisionKind::Quaternion);
        assert_eq!(alg.dim(), 7);
        assert_eq!(alg.layers(), &[1, 1, 1, 1, 2, 2, 2]);
        let ij = alg.bracket(&e(&alg, "e1"), &e(&alg, "e2")).unwrap();
        let one_k = alg.bracket(&e(&alg, "e0"), &e(&alg, "e3")).unwrap();
        assert_eq!(ij, one_k);
        assert!(!ij.is_zero());
        assert!(alg.verify().passed());
    }

    #[test]
    fn division_algebras_units_square_to_minus_one() {
        for dim in [2usize, 4, 8] {
            for p in 1..dim {
                assert_eq!(cayley_dickson_product(p, p, dim), (-1, 0));
            }
        }
        // quaternion: i j = k
        assert_eq!(cayley_dickson_product(1, 2, 4), (1, 3));
        let oct = division_heisenberg(DivisionKind::Octonion);
        assert_eq!(oct.dim(), 15);
        assert!(oct.verify().passed());
        // every pair of distinct units has a nonzero bracket
        assert_eq!(oct.brackets().len(), 28);
    }

    #[test]
    fn complex_case_is_heisenberg() {
        let alg = division_heisenberg(DivisionKind::Complex);
        assert_eq!(alg.dim(), 3);
        assert!(!alg.basis_bracket(0, 1).is_zero());
    }

    #[test]
    fn class3_table() {
        let alg = class3_rank8();
        assert!(alg.verify().passed());
        assert_eq!(alg.layers(), &[1, 1, 1, 1, 1, 2, 2, 3]);
        assert_eq!(alg.bracket(&e(&alg, "b"), &e(&alg, "f")).unwrap(), e(&alg, "h"));
        assert_eq!(alg.bracket(&e(&alg, "g"), &e(&alg, "d")).unwrap(), e(&alg, "h"));
        assert_eq!(alg.bracket(&e(&alg, "c"), &e(&alg, "d")).unwrap(), e(&alg, "f"));
        assert!(alg.bracket(&e(&alg, "a"), &e(&alg, "c")).unwrap().is_zero());
        assert_eq!(alg.brackets().len(), 6);
    }

    #[test]
    fn deleting_g_d_breaks_jacobi_at_bcd() {
        let alg = class3_rank8();
        let entries = alg
            .brackets()
            .iter()
            .filter(|(k, _)| **k != (3, 6))
            .map(|(k, t)| (*k, t.clone()))
            .collect();
        let broken = GradedLieAlgebra::from_parts(alg.layers().to_vec(), entries);
        let report = broken.verify();
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, crate::algebra::Violation::Jacobi { i: 1, j: 2, k: 3, .. })));
    }

    #[test]
    fn preset_parsing() {
        assert_eq!(
            "free_nilpotent(3, 2)".parse::<AlgebraPreset>().unwrap(),
            AlgebraPreset::FreeNilpotent { rank: 3, class: 2 }
        );
        let alg = build_algebra(&"division_heisenberg(quaternion)".parse().unwrap()).unwrap();
        assert_eq!(alg.dim(), 7);
    }
}
