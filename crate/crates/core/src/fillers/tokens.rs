//! Token-level rewriting backed by a library of known loop fillings.

use std::collections::HashMap;

use super::bfs::canonical;
use crate::error::{Error, Result};
use crate::words::{Cell, Filling, Rewriter, Word};

/// Fillings of loops, stored up to conjugation and inversion.
#[derive(Clone, Debug, Default)]
pub struct LoopLibrary {
    entries: HashMap<Word, Filling>,
}

impl LoopLibrary {
    /// Library holding one cell per relator.
    pub fn from_relators(relators: &[Word]) -> Self {
        let mut lib = LoopLibrary::default();
        for (i, r) in relators.iter().enumerate() {
            lib.add(r, Filling { cells: vec![Cell::new(Word::empty(), i, 1)] });
        }
        lib
    }

    /// Records a filling `f` of `w`; an existing entry with fewer cells
    /// is kept.
    pub fn add(&mut self, w: &Word, f: Filling) {
        let (y, q, inv) = canonical(w);
        if y.is_empty() {
            return;
        }
        // w = q y^{±1} q⁻¹, so y^{±1} = q⁻¹ w q
        let g = f.conjugated(&q.inverse());
        let g = if inv { g.inverse() } else { g };
        match self.entries.get(&y) {
            Some(old) if old.area() <= g.area() => {}
            _ => {
                self.entries.insert(y, g);
            }
        }
    }

    /// A filling of `w` if `w` is conjugate to a stored loop or its inverse.
    pub fn fill(&self, w: &Word) -> Option<Filling> {
        let (y, q, inv) = canonical(w);
        if y.is_empty() {
            return Some(Filling::new());
        }
        let f = self.entries.get(&y)?;
        Some(if inv { f.inverse().conjugated(&q) } else { f.conjugated(&q) })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Commutation fillings: `[a,b]` from the library, or by moving `a` across
/// the letters of `b` one at a time.
#[derive(Clone, Debug)]
pub struct Commuter<'a> {
    relators: &'a [Word],
    lib: &'a LoopLibrary,
    cache: HashMap<(Word, Word), Filling>,
}

impl<'a> Commuter<'a> {
    pub fn new(relators: &'a [Word], lib: &'a LoopLibrary) -> Self {
        Commuter { relators, lib, cache: HashMap::new() }
    }

    pub fn relators(&self) -> &'a [Word] {
        self.relators
    }

    /// Filling of `a b a⁻¹ b⁻¹`.
    pub fn commutator(&mut self, a: &Word, b: &Word) -> Result<Filling> {
        let key = (a.clone(), b.clone());
        if let Some(f) = self.cache.get(&key) {
            return Ok(f.clone());
        }
        let lw = Word::commutator(a, b);
        let f = match self.lib.fill(&lw) {
            Some(f) => f,
            None if b.len() > 1 => self.split(a, b)?,
            None if a.len() > 1 => self.split(b, a)?.inverse(),
            None => return Err(Error::Hypothesis(format!("no relator makes {a} and {b} commute"))),
        };
        self.cache.insert(key, f.clone());
        Ok(f)
    }

    /// `[a,b]` by moving the token `a` across each letter of `b`.
    fn split(&mut self, a: &Word, b: &Word) -> Result<Filling> {
        let mut toks = vec![a.clone()];
        toks.extend(b.0.iter().map(|&l| Word(vec![l])));
        toks.push(a.inverse());
        toks.extend(b.inverse().0.iter().map(|&l| Word(vec![l])));
        let mut tk = Tokens::new(toks, self.relators);
        for i in 0..b.len() {
            tk.swap(self, i)?;
        }
        tk.free_replace(b.len(), 2, vec![]);
        tk.finish()
    }
}

/// Rewriting over a sequence of token words.
///
/// The current word of the rewriter is always the plain concatenation of
/// the tokens; no free reduction happens behind the caller's back.
pub struct Tokens<'a> {
    rw: Rewriter<'a>,
    pub toks: Vec<Word>,
}

impl<'a> Tokens<'a> {
    pub fn new(toks: Vec<Word>, relators: &'a [Word]) -> Self {
        let word = toks.iter().fold(Word::empty(), |acc, t| acc.concat(t));
        Tokens { rw: Rewriter::new(word, relators), toks }
    }

    fn pos(&self, i: usize) -> usize {
        self.toks[..i].iter().map(Word::len).sum()
    }

    pub fn area(&self) -> usize {
        self.rw.area()
    }

    /// `T_i T_{i+1} → T_{i+1} T_i`.
    pub fn swap(&mut self, c: &mut Commuter<'_>, i: usize) -> Result<()> {
        let (a, b) = (self.toks[i].clone(), self.toks[i + 1].clone());
        let f = c.commutator(&a, &b)?;
        let pos = self.pos(i);
        self.rw.replace_with_filling(pos, a.len() + b.len(), &b.concat(&a), f);
        self.toks.swap(i, i + 1);
        Ok(())
    }

    /// Moves token `from` to index `to` by adjacent swaps.
    pub fn move_token(&mut self, c: &mut Commuter<'_>, from: usize, to: usize) -> Result<()> {
        if from > to {
            for q in (to..from).rev() {
                self.swap(c, q)?;
            }
        } else {
            for q in from..to {
                self.swap(c, q)?;
            }
        }
        Ok(())
    }

    /// Replaces `count` tokens at `i` by freely equal tokens.
    pub fn free_replace(&mut self, i: usize, count: usize, new: Vec<Word>) {
        let pos = self.pos(i);
        let len: usize = self.toks[i..i + count].iter().map(Word::len).sum();
        let w = new.iter().fold(Word::empty(), |acc, t| acc.concat(t));
        debug_assert_eq!(Word(self.rw.current().0[pos..pos + len].to_vec()).free_reduce(), w.free_reduce());
        self.rw.replace_with_filling(pos, len, &w, Filling::new());
        self.toks.splice(i..i + count, new);
    }

    /// Replaces token `i` by `new`, given a filling of `T_i · new⁻¹`.
    pub fn replace(&mut self, i: usize, new: Vec<Word>, loop_filling: Filling) {
        let pos = self.pos(i);
        let w = new.iter().fold(Word::empty(), |acc, t| acc.concat(t));
        self.rw.replace_with_filling(pos, self.toks[i].len(), &w, loop_filling);
        self.toks.splice(i..i + 1, new);
    }

    /// Cells so far: a filling of `original · current⁻¹`.
    pub fn loop_filling(&self) -> Filling {
        self.rw.filling().clone()
    }

    /// Finishes once the tokens freely cancel.
    pub fn finish(self) -> Result<Filling> {
        self.rw.finish()
    }

    /// Collects `A^m B^n A^{-m} B^{-n}`, starting at token `at`, into
    /// `U^{mn}` with `U = [A,B]`; needs `U` to commute with `A` and `B`.
    pub fn collect(&mut self, c: &mut Commuter<'_>, at: usize, a: &Word, b: &Word, m: usize, n: usize) -> Result<()> {
        let u = Word::commutator(a, b);
        let ai = a.inverse();
        // layout: U^{i n} A^{m-i} B^n A^{-(m-i)} B^{-n}
        for i in 0..m {
            let front = at + i * n;
            let first_ai = front + (m - i) + n;
            debug_assert_eq!(self.toks[first_ai], ai);
            // B^n A⁻¹ → A⁻¹ (U B)^n, then A A⁻¹ cancels
            let mut new = vec![ai.clone()];
            for _ in 0..n {
                new.push(u.clone());
                new.push(b.clone());
            }
            self.free_replace(first_ai - n, n + 1, new);
            self.free_replace(front + (m - i) - 1, 2, vec![]);
            // before the j-th fresh U: j moved U's, A^{m-i-1} and j B's
            for j in 0..n {
                let p = front + (m - i - 1) + 2 * j;
                self.move_token(c, p, front + j)?;
            }
        }
        let start = at + m * n;
        self.free_replace(start, 2 * n, vec![]);
        Ok(())
    }
}
