//! Baker–Campbell–Hausdorff series with exact rational coefficients.
//!
//! `log(exp X exp Y)` is computed in the free associative algebra on
//! `{X, Y}` truncated at degree [`MAX_CLASS`], then each homogeneous part
//! is projected onto left-normed brackets by the Dynkin–Specht–Wever map
//! `x_1 ... x_n ↦ (1/n) [...[x_1, x_2], ..., x_n]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{GradedLieAlgebra, LieVector};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, from_rational, Scalar};
use crate::Q;

/// Largest supported truncation degree.
pub const MAX_CLASS: u32 = 6;

/// One of the two BCH symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    X,
    Y,
}

/// A left-normed bracket `[...[s_1, s_2], ..., s_n]`; a single symbol when
/// `n == 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftNormed(pub Vec<Sym>);

impl fmt::Display for LeftNormed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |s: &Sym| match s {
            Sym::X => "X",
            Sym::Y => "Y",
        };
        let mut acc = name(&self.0[0]).to_string();
        for s in &self.0[1..] {
            acc = format!("[{acc},{}]", name(s));
        }
        f.write_str(&acc)
    }
}

/// Truncated BCH series: `terms[d]` lists the degree-`d` terms.
///
/// Every bracket of degree ≥ 2 starts with `[X,Y]`; other left-normed words
/// are rewritten or vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct BchSeries {
    pub degree: u32,
    pub terms: BTreeMap<u32, Vec<(LeftNormed, Q)>>,
}

impl BchSeries {
    /// Coefficient of a left-normed bracket (zero if absent).
    pub fn coefficient(&self, word: &[Sym]) -> Q {
        let d = word.len() as u32;
        self.terms
            .get(&d)
            .and_then(|ts| ts.iter().find(|(w, _)| w.0 == word))
            .map_or_else(Q::zero, |(_, c)| c.clone())
    }

    /// Evaluates the series on `x`, `y` in `alg`, using only the degrees
    /// up to `alg.class()`.
    pub fn evaluate<S: Scalar>(
        &self,
        alg: &GradedLieAlgebra<S>,
        x: &LieVector<S>,
        y: &LieVector<S>,
    ) -> LieVector<S> {
        let top = alg.class().min(self.degree);
        let mut out = x + y;
        if top < 2 {
            return out;
        }
        let xy = alg.bracket_unchecked(x, y);
        if xy.is_zero() {
            return out;
        }
        // left-normed prefixes starting [X,Y], memoized
        let mut memo: HashMap<Vec<Sym>, LieVector<S>> = HashMap::new();
        memo.insert(vec![Sym::X, Sym::Y], xy);
        for d in 2..=top {
            for (word, c) in self.terms.get(&d).into_iter().flatten() {
                let v = bracket_prefix(alg, &mut memo, &word.0, x, y);
                if !v.is_zero() {
                    out = &out + &v.scaled(&from_rational::<S>(c));
                }
            }
        }
        out
    }
}

fn bracket_prefix<S: Scalar>(
    alg: &GradedLieAlgebra<S>,
    memo: &mut HashMap<Vec<Sym>, LieVector<S>>,
    word: &[Sym],
    x: &LieVector<S>,
    y: &LieVector<S>,
) -> LieVector<S> {
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let (last, head) = word.split_last().expect("word of length >= 2");
    let inner = bracket_prefix(alg, memo, head, x, y);
    let v = if inner.is_zero() {
        inner
    } else {
        alg.bracket_unchecked(&inner, if *last == Sym::X { x } else { y })
    };
    memo.insert(word.to_vec(), v.clone());
    v
}

impl fmt::Display for BchSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ts in self.terms.values() {
            for (w, c) in ts {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                if c.is_one() {
                    write!(f, "{w}")?;
                } else {
                    write!(f, "({}){w}", format_rational(c))?;
                }
            }
        }
        Ok(())
    }
}

/// Noncommutative polynomial in `X, Y`, truncated at a fixed degree.
type Poly = HashMap<Vec<Sym>, Q>;

fn poly_mul(a: &Poly, b: &Poly, max: usize) -> Poly {
    let mut out = Poly::new();
    for (u, cu) in a {
        for (v, cv) in b {
            if u.len() + v.len() > max {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_insert_with(Q::zero) += cu * cv;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_add_scaled(acc: &mut Poly, p: &Poly, c: &Q) {
    for (w, x) in p {
        *acc.entry(w.clone()).or_insert_with(Q::zero) += x * c;
    }
    acc.retain(|_, c| !c.is_zero());
}

/// `exp(s) - 1` for a single symbol.
fn exp_minus_one(s: Sym, max: usize) -> Poly {
    let mut out = Poly::new();
    let mut fact = BigInt::one();
    for n in 1..=max {
        fact *= n;
        out.insert(vec![s; n], Q::new(BigInt::one(), fact.clone()));
    }
    out
}

fn compute(max: u32) -> BchSeries {
    let m = max as usize;
    // A = exp(X) exp(Y) - 1 = (eX - 1) + (eY - 1) + (eX - 1)(eY - 1)
    let ex = exp_minus_one(Sym::X, m);
    let ey = exp_minus_one(Sym::Y, m);
    let mut a = ex.clone();
    poly_add_scaled(&mut a, &ey, &Q::one());
    poly_add_scaled(&mut a, &poly_mul(&ex, &ey, m), &Q::one());
    // log(1 + A) = sum (-1)^{n+1} A^n / n; A has no constant term
    let mut log = Poly::new();
    let mut power = a.clone();
    for n in 1..=m {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        poly_add_scaled(&mut log, &power, &Q::new(sign.into(), (n as i64).into()));
        power = poly_mul(&power, &a, m);
    }
    // Dynkin–Specht–Wever: rewrite words beginning YX as -XY, drop XX/YY
    let mut terms: BTreeMap<u32, BTreeMap<Vec<Sym>, Q>> = BTreeMap::new();
    for (w, c) in log {
        let d = w.len();
        let (key, coeff) = match d {
            1 => (w, c),
            _ if w[0] == w[1] => continue,
            _ if w[0] == Sym::Y => {
                let mut k = w;
                k.swap(0, 1);
                (k, -c / Q::from_integer(d.into()))
            }
            _ => (w, c / Q::from_integer(d.into())),
        };
        *terms.entry(d as u32).or_default().entry(key).or_insert_with(Q::zero) += coeff;
    }
    let terms = terms
        .into_iter()
        .map(|(d, ts)| {
            let ts: Vec<(LeftNormed, Q)> =
                ts.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (LeftNormed(w), c)).collect();
            (d, ts)
        })
        .filter(|(_, ts)| !ts.is_empty())
        .collect();
    BchSeries { degree: max, terms }
}

fn full_series() -> &'static BchSeries {
    static CACHE: OnceLock<BchSeries> = OnceLock::new();
    CACHE.get_or_init(|| compute(MAX_CLASS))
}

/// The BCH series truncated beyond degree `k`, for `1 <= k <= MAX_CLASS`.
pub fn bch_series(k: u32) -> Result<BchSeries> {
    if k == 0 || k > MAX_CLASS {
        return Err(Error::Unsupported(format!("BCH degree {k}; supported range is 1..={MAX_CLASS}")));
    }
    let full = full_series();
    let terms = full.terms.iter().filter(|(d, _)| **d <= k).map(|(d, t)| (*d, t.clone())).collect();
    Ok(BchSeries { degree: k, terms })
}

/// Shared series of degree [`MAX_CLASS`]; evaluation truncates to the
/// algebra's class.
pub fn cached_series() -> &'static BchSeries {
    full_series()
}
