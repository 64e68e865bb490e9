//! Per-relator fillers of scaled relators, and rescaling of fillings.

use std::collections::HashMap;
use std::sync::Mutex;

use super::bfs::{bfs_exact_fill, BfsLimits};
use super::shuffle::kfold_shuffle_fill;
use crate::error::{Error, Result};
use crate::presentations::{Presentation, SwapTable};
use crate::words::{scale_word, Filling, Letter, Word};

/// Fills `s_t(r)` for each relator `r`, with a cost function `f(t)`
/// bounding the area it produces.
pub trait RelatorFiller: Sync {
    fn fill(&self, relator: usize, t: usize) -> Result<Filling>;

    /// Area of `fill(relator, t)` (an upper bound for fillers that cannot
    /// predict it exactly).
    fn cost(&self, relator: usize, t: usize) -> Result<usize> {
        Ok(self.fill(relator, t)?.area())
    }
}

/// Swaps the greedy sort of `s_t(x)` into `x^t` performs.
pub fn straighten_swaps(x: &Word, t: usize) -> usize {
    let mut cur: Vec<Letter> = scale_word(x, t).0;
    let target = x.pow(t as i64).0;
    let mut swaps = 0;
    for (k, want) in target.iter().enumerate() {
        let found = (k..cur.len()).find(|&p| cur[p] == *want).expect("permutation");
        swaps += found - k;
        let l = cur.remove(found);
        cur.insert(k, l);
    }
    swaps
}

/// Shuffle fillings for relators with a single-commutator form or of the
/// form `[[y,z],x]^{±1}`, exact search for the rest.
pub struct StandardFiller<'a> {
    pres: &'a Presentation,
    table: SwapTable,
    limits: BfsLimits,
    /// Relators equal to `[[y,z],x]^{±1}` for generators `x, y, z`.
    threefold: HashMap<usize, (Vec<Word>, bool)>,
    memo: Mutex<HashMap<(usize, usize), Filling>>,
}

impl<'a> StandardFiller<'a> {
    pub fn new(pres: &'a Presentation) -> Self {
        StandardFiller::with_limits(pres, BfsLimits::default())
    }

    pub fn with_limits(pres: &'a Presentation, limits: BfsLimits) -> Self {
        let mut threefold = HashMap::new();
        let mut patterns: HashMap<Word, (Vec<Word>, bool)> = HashMap::new();
        let rank = pres.rank();
        if pres.forms().iter().any(Option::is_none) {
            for x in 0..rank {
                for y in 0..rank {
                    for z in 0..rank {
                        if y == z {
                            continue;
                        }
                        let xs = vec![Word::gen(y), Word::gen(z), Word::gen(x)];
                        let l = Word::left_normed(&xs).free_reduce();
                        patterns.insert(l.inverse(), (xs.clone(), true));
                        patterns.insert(l, (xs, false));
                    }
                }
            }
        }
        for (i, r) in pres.relators().iter().enumerate() {
            if let Some(p) = patterns.get(&r.free_reduce()) {
                threefold.insert(i, p.clone());
            }
        }
        StandardFiller { pres, table: SwapTable::new(pres), limits, threefold, memo: Mutex::new(HashMap::new()) }
    }

    pub fn presentation(&self) -> &Presentation {
        self.pres
    }

    /// Generators `(y, z, x)` with relator `i` freely equal to
    /// `[[y,z],x]`, or to its inverse when the flag is set.
    pub fn threefold_form(&self, i: usize) -> Option<(Vec<Word>, bool)> {
        self.threefold.get(&i).cloned()
    }

    /// The commutator `[x, y]` freely equal to relator `i`, if any.
    pub fn commutator_form(&self, i: usize) -> Option<(Word, Word)> {
        let form = self.pres.forms().get(i)?.as_ref()?;
        if form.pairs.len() != 1 {
            return None;
        }
        let (x, y) = form.pairs[0].clone();
        let ok = Word::commutator(&x, &y).free_reduce() == self.pres.relators()[i].free_reduce()
            && self.table.all_commute(&x.0)
            && self.table.all_commute(&y.0);
        ok.then_some((x, y))
    }
}

impl RelatorFiller for StandardFiller<'_> {
    fn fill(&self, relator: usize, t: usize) -> Result<Filling> {
        let r = self.pres.relators().get(relator).ok_or(Error::RelatorIndex(relator))?;
        if let Some(f) = self.memo.lock().expect("memo").get(&(relator, t)) {
            return Ok(f.clone());
        }
        let f = match self.commutator_form(relator) {
            Some((x, y)) => kfold_shuffle_fill(&[x, y], t, self.pres)?.filling,
            None if self.threefold.contains_key(&relator) => {
                let (xs, inv) = &self.threefold[&relator];
                let f = kfold_shuffle_fill(xs, t, self.pres)?.filling;
                if *inv {
                    f.inverse()
                } else {
                    f
                }
            }
            None => match bfs_exact_fill(&scale_word(r, t), self.pres, self.limits)? {
                Some(found) => found.filling,
                None => return Err(Error::BadFilling(format!("relator {relator} at scale {t} has no filling"))),
            },
        };
        self.memo.lock().expect("memo").insert((relator, t), f.clone());
        Ok(f)
    }

    fn cost(&self, relator: usize, t: usize) -> Result<usize> {
        match self.commutator_form(relator) {
            Some((x, y)) => Ok(t * t + 2 * straighten_swaps(&x, t) + 2 * straighten_swaps(&y, t)),
            None => Ok(self.fill(relator, t)?.area()),
        }
    }
}

/// Filling of `s_t(w)` from a filling `f` of `w`: `s_t` is an endomorphism
/// of the free group, so each cell becomes a conjugate of `s_t(r)^{±1}`,
/// which `rf` fills.
pub fn rescale_filling(f: &Filling, t: usize, rf: &dyn RelatorFiller) -> Result<Filling> {
    let mut cache: HashMap<usize, Filling> = HashMap::new();
    let mut out = Filling::new();
    for cell in &f.cells {
        if !cache.contains_key(&cell.relator) {
            cache.insert(cell.relator, rf.fill(cell.relator, t)?);
        }
        let fr = &cache[&cell.relator];
        let fr = if cell.sign > 0 { fr.clone() } else { fr.inverse() };
        out.extend(fr.conjugated(&scale_word(&cell.conj, t).inverse()));
    }
    Ok(out)
}

/// Area of [`rescale_filling`] without building it.
pub fn rescaled_cost(f: &Filling, t: usize, rf: &dyn RelatorFiller) -> Result<usize> {
    let mut cache: HashMap<usize, usize> = HashMap::new();
    let mut total = 0;
    for cell in &f.cells {
        if !cache.contains_key(&cell.relator) {
            cache.insert(cell.relator, rf.cost(cell.relator, t)?);
        }
        total += cache[&cell.relator];
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::builtin_presentation;
    use crate::words::verify_filling_with;

    #[test]
    fn cost_matches_fill() {
        let pres = builtin_presentation("h5_commutator_form").unwrap();
        let rf = StandardFiller::new(&pres);
        for i in 0..pres.relators().len() {
            for t in 1..=5 {
                assert_eq!(rf.cost(i, t).unwrap(), rf.fill(i, t).unwrap().area(), "relator {i} t {t}");
            }
        }
    }

    #[test]
    fn rescaling_a_filling() {
        let pres = builtin_presentation("h5_commutator_form").unwrap();
        let rf = StandardFiller::new(&pres);
        // [a1, b1 b2] = [a1,b1] · b1 [a1,b2] b1⁻¹
        let w = pres.word("[a1,b1b2]").unwrap();
        let f = crate::fillers::bfs_exact_fill(&w, &pres, BfsLimits::default()).unwrap().unwrap().filling;
        for t in 1..=4 {
            let g = rescale_filling(&f, t, &rf).unwrap();
            assert!(verify_filling_with(&scale_word(&w, t), &g, pres.relators()).unwrap());
            assert_eq!(g.area(), rescaled_cost(&f, t, &rf).unwrap());
        }
    }
}
