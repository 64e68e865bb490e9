//! Commuting-generator relators and the rewriting moves they allow.

use std::collections::HashMap;

use super::Presentation;
use crate::error::{Error, Result};
use crate::words::{as_conjugate, Cell, Filling, Letter, Rewriter, Word};

/// Relators of the form `[g, h]` for distinct generators, indexed by the
/// unordered pair, with precomputed swap cells.
#[derive(Clone, Debug, Default)]
pub struct SwapTable {
    pairs: HashMap<(usize, usize), usize>,
    cells: HashMap<(Letter, Letter), Cell>,
}

impl SwapTable {
    pub fn new(pres: &Presentation) -> Self {
        SwapTable::from_relators(pres.relators())
    }

    pub fn from_relators(relators: &[Word]) -> Self {
        let mut table = SwapTable::default();
        for (idx, r) in relators.iter().enumerate() {
            let c = r.cyclic_reduce();
            if c.len() != 4 {
                continue;
            }
            let (p, q) = (c.0[0], c.0[1]);
            if p.gen() == q.gen() || c.0[2] != p.inverse() || c.0[3] != q.inverse() {
                continue;
            }
            let key = (p.gen().min(q.gen()), p.gen().max(q.gen()));
            if table.pairs.contains_key(&key) {
                continue;
            }
            table.pairs.insert(key, idx);
            let one = [r.clone()];
            for (g, h) in [(key.0, key.1), (key.1, key.0)] {
                for sg in [1i8, -1] {
                    for sh in [1i8, -1] {
                        let (x, y) = (Letter::new(g, sg), Letter::new(h, sh));
                        let lw = Word(vec![x, y, x.inverse(), y.inverse()]);
                        let mut cell = as_conjugate(&lw, &one).expect("commutator of commuting letters");
                        cell.relator = idx;
                        table.cells.insert((x, y), cell);
                    }
                }
            }
        }
        table
    }

    pub fn commute(&self, g: usize, h: usize) -> bool {
        g == h || self.pairs.contains_key(&(g.min(h), g.max(h)))
    }

    /// Relator index witnessing that `g` and `h` commute.
    pub fn relator(&self, g: usize, h: usize) -> Option<usize> {
        self.pairs.get(&(g.min(h), g.max(h))).copied()
    }

    /// True if the generators of `letters` pairwise commute.
    pub fn all_commute(&self, letters: &[Letter]) -> bool {
        letters.iter().enumerate().all(|(i, a)| letters[i + 1..].iter().all(|b| self.commute(a.gen(), b.gen())))
    }

    /// Cell filling `x y x⁻¹ y⁻¹`, i.e. the move `x y → y x`.
    pub fn swap_cell(&self, x: Letter, y: Letter) -> Option<&Cell> {
        self.cells.get(&(x, y))
    }

    /// Swaps `current[pos]` and `current[pos + 1]`.
    pub fn swap(&self, rw: &mut Rewriter<'_>, pos: usize) -> Result<()> {
        let cur = rw.current();
        let (x, y) = (cur.0[pos], cur.0[pos + 1]);
        if x.gen() == y.gen() {
            return Err(Error::Hypothesis("cannot swap a generator with itself".into()));
        }
        let cell = self
            .swap_cell(x, y)
            .ok_or_else(|| Error::Hypothesis(format!("no commuting relator for generators {} and {}", x.gen(), y.gen())))?
            .clone();
        rw.replace_with_filling(pos, 2, &Word(vec![y, x]), Filling { cells: vec![cell] });
        Ok(())
    }

    /// Moves the letter at `from` to position `to` by adjacent swaps.
    pub fn move_letter(&self, rw: &mut Rewriter<'_>, from: usize, to: usize) -> Result<()> {
        if from > to {
            for p in (to..from).rev() {
                self.swap(rw, p)?;
            }
        } else {
            for p in from..to {
                self.swap(rw, p)?;
            }
        }
        Ok(())
    }

    /// Rewrites `current[start..start+len]` into `target`, a permutation of
    /// it that is equal modulo commuting relators.
    pub fn sort_segment(&self, rw: &mut Rewriter<'_>, start: usize, target: &Word) -> Result<()> {
        for (k, &want) in target.0.iter().enumerate() {
            let pos = start + k;
            let cur = rw.current();
            let found = (pos..start + target.len()).find(|&p| cur.0[p] == want).ok_or_else(|| {
                Error::Hypothesis("segment is not a permutation of the target".into())
            })?;
            self.move_letter(rw, found, pos)?;
        }
        Ok(())
    }

    /// Cancels letters against later inverses whenever every letter in
    /// between commutes with them, until no such pair remains. Returns the
    /// number of swaps used.
    pub fn cancel_commuting(&self, rw: &mut Rewriter<'_>) -> Result<usize> {
        let before = rw.area();
        loop {
            rw.reduce();
            let cur = rw.current().clone();
            let mut progress = false;
            'outer: for i in 0..cur.len() {
                let x = cur.0[i];
                for j in i + 1..cur.len() {
                    let y = cur.0[j];
                    if y == x.inverse() {
                        self.move_letter(rw, j, i + 1)?;
                        progress = true;
                        break 'outer;
                    }
                    if !self.commute(x.gen(), y.gen()) {
                        break;
                    }
                }
            }
            if !progress {
                break;
            }
        }
        Ok(rw.area() - before)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::verify_filling_with;

    #[test]
    fn swaps_and_cancellation() {
        let pres = Presentation::parse(&["a", "b", "c"], &["[a,b]", "[c,a]"]).unwrap();
        let table = SwapTable::new(&pres);
        assert!(table.commute(0, 1) && table.commute(2, 0) && !table.commute(1, 2));
        let w = pres.word("aBcACb").unwrap();
        let mut rw = Rewriter::new(w.clone(), pres.relators());
        table.cancel_commuting(&mut rw).unwrap();
        assert!(rw.current().free_reduce().is_empty());
        let f = rw.finish().unwrap();
        assert!(verify_filling_with(&w, &f, pres.relators()).unwrap());
    }

    #[test]
    fn sorting() {
        let pres = Presentation::parse(&["a", "b"], &["[a,b]"]).unwrap();
        let table = SwapTable::new(&pres);
        let w = pres.word("abab").unwrap();
        let mut rw = Rewriter::new(w, pres.relators());
        table.sort_segment(&mut rw, 0, &pres.word("aabb").unwrap()).unwrap();
        assert_eq!(rw.current(), &pres.word("aabb").unwrap());
        assert_eq!(rw.area(), 1);
    }
}
