//! Fillings in a central quotient `G = H / ⟨w⟩` by repeated doubling, and
//! the closed-form sums that bound them.
//!
//! If `log w` lies in layer `j` of `H`, then `s_2(w) = w^{2^j}` in `H`. With
//! `q = s_2(w) w^{-2^j}` filled once in `H`, `s_{2^i}(w)` reduces to `2^j`
//! copies of `s_{2^{i-1}}(w)` at the cost of a rescaled filling of `q`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::relator::{rescale_filling, rescaled_cost, RelatorFiller};
use super::tokens::{Commuter, LoopLibrary, Tokens};
use crate::error::{Error, Result};
use crate::presentations::{
    builtin_presentation, central_power_presentation, commutator_form_transform, Presentation,
};
use crate::words::{scale_word, verify_filling_with, Cell, Filling, Word};

/// The ambient group `H`, the word `w`, and a filling of
/// `q = s_2(w) w^{-2^j}` over the relators of `H`.
pub struct DoublingBase<'a> {
    pub ambient: &'a Presentation,
    pub word: Word,
    pub layer: u32,
    pub seed: Filling,
    pub relator_filler: &'a dyn RelatorFiller,
}

impl<'a> DoublingBase<'a> {
    /// Checks that `log w` lies in layer `j` and that `seed` fills `q`.
    pub fn new(
        ambient: &'a Presentation,
        word: Word,
        seed: Filling,
        relator_filler: &'a dyn RelatorFiller,
    ) -> Result<Self> {
        let g = ambient.evaluate(&word)?;
        let alg = g.algebra().clone();
        let layers: Vec<u32> =
            (1..=alg.class()).filter(|&l| !alg.layer_part(g.log(), l).is_zero()).collect();
        let layer = match layers.as_slice() {
            [l] => *l,
            _ => return Err(Error::Hypothesis(format!("log of {word} is not concentrated in one layer"))),
        };
        let base = DoublingBase { ambient, word, layer, seed, relator_filler };
        if !verify_filling_with(&base.seed_word(), &base.seed, ambient.relators())? {
            return Err(Error::BadFilling("seed does not fill s_2(w) w^-2^j".into()));
        }
        Ok(base)
    }

    /// `q = s_2(w) w^{-2^j}`.
    pub fn seed_word(&self) -> Word {
        scale_word(&self.word, 2).concat(&self.word.inverse().pow(1 << self.layer))
    }
}

/// Cell counts of a doubling filling: `base_costs[i-1]` fills
/// `s_{2^i}(w) s_{2^{i-1}}(w)^{-2^j}` and `totals[i]` fills `s_{2^i}(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingLedger {
    pub layer: u32,
    pub base_costs: Vec<u64>,
    pub totals: Vec<u64>,
}

impl DoublingLedger {
    pub fn total(&self) -> u64 {
        *self.totals.last().expect("A(0) present")
    }

    /// `Σ_{i=1}^n 2^{(n-i)j} B_i + 2^{nj}`, evaluated independently of
    /// the recursion.
    pub fn closed_form(&self) -> u64 {
        let n = self.base_costs.len() as u32;
        let j = self.layer;
        let sum: u64 = self.base_costs.iter().enumerate().map(|(k, b)| b << ((n - 1 - k as u32) * j)).sum();
        sum + (1u64 << (n * j))
    }
}

fn ledger_from(layer: u32, base_costs: Vec<u64>) -> DoublingLedger {
    let mut totals = vec![1u64];
    for b in &base_costs {
        let prev = *totals.last().expect("nonempty");
        totals.push(b + (prev << layer));
    }
    DoublingLedger { layer, base_costs, totals }
}

/// Cell counts of [`doubling_fill`] for `n` doublings, without building it.
pub fn doubling_ledger(base: &DoublingBase<'_>, n: u32) -> Result<DoublingLedger> {
    let costs = (1..=n)
        .map(|i| rescaled_cost(&base.seed, 1 << (i - 1), base.relator_filler).map(|c| c as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(ledger_from(base.layer, costs))
}

/// Filling of `s_{2^n}(w)` over `pres`, which must list the relators of
/// the ambient group first and contain `w`.
pub fn doubling_fill(base: &DoublingBase<'_>, n: u32, pres: &Presentation) -> Result<(Filling, DoublingLedger)> {
    let amb = base.ambient.relators();
    if pres.relators().len() < amb.len() || pres.relators()[..amb.len()] != *amb {
        return Err(Error::Input("quotient must extend the ambient relators".into()));
    }
    let idx = pres
        .relator_index(&base.word)
        .ok_or_else(|| Error::Hypothesis(format!("{} is not a relator", pres.format(&base.word))))?;
    let mut f = Filling { cells: vec![Cell::new(Word::empty(), idx, 1)] };
    let mut costs = Vec::new();
    for i in 1..=n {
        let step = rescale_filling(&base.seed, 1 << (i - 1), base.relator_filler)?;
        costs.push(step.area() as u64);
        let mut next = step;
        for _ in 0..1u32 << base.layer {
            next.extend(f.clone());
        }
        f = next;
    }
    let target = scale_word(&base.word, 1 << n);
    if !verify_filling_with(&target, &f, pres.relators())? {
        return Err(Error::BadFilling("doubling filling failed verification".into()));
    }
    let ledger = ledger_from(base.layer, costs);
    debug_assert_eq!(ledger.total(), f.area() as u64);
    Ok((f, ledger))
}

/// Which term dominates `Σ_{i=0}^n 2^{(n-i)j} 2^{iα}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominantTerm {
    /// `α > j`: `2^{nα}`.
    Alpha,
    /// `α = j`: `n 2^{nα}`.
    Log,
    /// `α < j`: `2^{nj}`.
    Layer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBound {
    pub dominant: DominantTerm,
    /// The exact partial sum.
    pub sum: BigRational,
    /// The dominant term evaluated at `n` (`n + 1` copies when `α = j`).
    pub dominant_value: BigRational,
}

impl QuotientBound {
    pub fn ratio(&self) -> BigRational {
        &self.sum / &self.dominant_value
    }
}

fn pow2(e: &BigRational) -> Result<BigRational> {
    // only integer exponents are evaluated exactly
    if !e.is_integer() {
        return Err(Error::Unsupported("non-integer exponent".into()));
    }
    let k = e.to_integer().to_i64().ok_or_else(|| Error::Input("exponent too large".into()))?;
    let p = BigRational::from_integer((BigUint::one() << k.unsigned_abs()).into());
    Ok(if k >= 0 { p } else { p.recip() })
}

/// The doubling sum for a relator filled in time `t^α` in a layer-`j`
/// quotient, with its dominant-term classification.
pub fn quotdehn_bound(alpha: &BigRational, j: u32, n: u32) -> Result<QuotientBound> {
    if *alpha < BigRational::one() || j == 0 {
        return Err(Error::Input("need alpha >= 1 and j >= 1".into()));
    }
    let jq = BigRational::from_integer(j.into());
    let mut sum = BigRational::zero();
    for i in 0..=n {
        let e = BigRational::from_integer(((n - i) as i64 * j as i64).into())
            + alpha * BigRational::from_integer(i.into());
        sum += pow2(&e)?;
    }
    let nq = BigRational::from_integer(n.into());
    let (dominant, dominant_value) = match alpha.cmp(&jq) {
        std::cmp::Ordering::Greater => (DominantTerm::Alpha, pow2(&(alpha * &nq))?),
        std::cmp::Ordering::Equal => {
            (DominantTerm::Log, pow2(&(alpha * &nq))? * BigRational::from_integer((n + 1).into()))
        }
        std::cmp::Ordering::Less => (DominantTerm::Layer, pow2(&(jq * &nq))?),
    };
    Ok(QuotientBound { dominant, sum, dominant_value })
}

/// Filling of `s_2(w) w^{-4}` for `w = ∏ [x_m, y_m]`, given loop fillings
/// making each `[x_m, y_m]` commute with every generator involved.
pub fn commutator_product_seed(pairs: &[(Word, Word)], relators: &[Word], lib: &LoopLibrary) -> Result<Filling> {
    let us: Vec<Word> = pairs.iter().map(|(x, y)| Word::commutator(x, y)).collect();
    let mut toks = Vec::new();
    for (x, y) in pairs {
        for t in [x, x, y, y] {
            toks.push(t.clone());
        }
        for t in [x, x, y, y] {
            toks.push(t.inverse());
        }
    }
    for _ in 0..4 {
        for u in us.iter().rev() {
            toks.push(u.inverse());
        }
    }
    let mut tk = Tokens::new(toks, relators);
    let mut c = Commuter::new(relators, lib);
    for (m, (x, y)) in pairs.iter().enumerate() {
        tk.collect(&mut c, 4 * m, x, y, 2, 2)?;
    }
    // U_0^4 ... U_k^4 (U_k⁻¹ ... U_0⁻¹)^4: cancel each inverse against the
    // nearest matching U to its left
    while let Some(k) = tk.toks.iter().position(|t| !us.contains(t)) {
        let want = tk.toks[k].inverse();
        let j = (0..k).rev().find(|&i| tk.toks[i] == want).ok_or_else(|| Error::BadFilling("unmatched".into()))?;
        tk.move_token(&mut c, j, k - 1)?;
        tk.free_replace(k - 1, 2, vec![]);
    }
    tk.finish()
}

/// The doubling data for the relator `[a1,a2][a3,a4]...[a9,a10]` of the
/// first copy in the commutator-form central square of the free class-2
/// group of rank ten.
pub struct QuotientExample {
    pub ambient: Presentation,
    pub quotient: Presentation,
    pub word: Word,
    pub seed: Filling,
}

pub fn quotient_example() -> Result<QuotientExample> {
    let base = builtin_presentation("free_class2(10)")?;
    let cp = central_power_presentation(&base, 2)?;
    let t = commutator_form_transform(&cp)?;
    let ambient = t.presentation;
    let quotient = builtin_presentation("sapir_quotient")?;
    let pairs: Vec<(Word, Word)> =
        (0..5).map(|m| (Word::gen(cp.gen(0, 2 * m)), Word::gen(cp.gen(0, 2 * m + 1)))).collect();
    let word = pairs.iter().fold(Word::empty(), |acc, (x, y)| acc.concat(&Word::commutator(x, y)));
    let mut lib = LoopLibrary::from_relators(ambient.relators());
    for (r, f) in cp.presentation.relators().iter().zip(t.witnesses) {
        lib.add(r, f);
    }
    let seed = commutator_product_seed(&pairs, ambient.relators(), &lib)?;
    Ok(QuotientExample { ambient, quotient, word, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fillers::StandardFiller;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn bound_cases() {
        assert_eq!(quotdehn_bound(&q(3), 2, 5).unwrap().dominant, DominantTerm::Alpha);
        assert_eq!(quotdehn_bound(&q(2), 2, 5).unwrap().dominant, DominantTerm::Log);
        assert_eq!(quotdehn_bound(&q(2), 3, 5).unwrap().dominant, DominantTerm::Layer);
        // α = j: every term equals 2^{nα}
        let b = quotdehn_bound(&q(2), 2, 4).unwrap();
        assert_eq!(b.sum, q(5 * 256));
        assert_eq!(b.ratio(), q(1));
    }

    #[test]
    fn heisenberg_doubling() {
        // H_3 as the free class-2 group on two generators, w = [a1,a2]
        let amb = builtin_presentation("free_class2(2)").unwrap();
        let w = amb.word("[a1,a2]").unwrap();
        let mut quo = amb.clone();
        quo.push_relator(w.clone(), None);
        let lib = LoopLibrary::from_relators(amb.relators());
        let seed = commutator_product_seed(&[(Word::gen(0), Word::gen(1))], amb.relators(), &lib).unwrap();
        let rf = StandardFiller::new(&amb);
        let base = DoublingBase::new(&amb, w, seed, &rf).unwrap();
        assert_eq!(base.layer, 2);
        for n in 0..=3 {
            let (f, ledger) = doubling_fill(&base, n, &quo).unwrap();
            assert_eq!(f.area() as u64, ledger.total());
            assert_eq!(ledger.total(), ledger.closed_form());
            assert_eq!(doubling_ledger(&base, n).unwrap(), ledger);
        }
    }
}
