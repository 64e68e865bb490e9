//! Words in free groups, free reduction, and fillings of identity words by
//! conjugates of relators.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::GradedLieAlgebra;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::presentations::Presentation;
use crate::scalar::Scalar;

/// Generator `g` (0-based) with an exponent sign. Stored as `±(g + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: usize, sign: i8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        let g = gen as i32 + 1;
        Letter(if sign < 0 { -g } else { g })
    }

    pub fn gen(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn sign(self) -> i8 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

/// A word, not reduced unless stated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Letter::new(g, 1)])
    }

    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        Word(pairs.iter().map(|&(g, s)| Letter::new(g, s)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `w^n`; negative `n` uses the inverse.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        let mut out = u.concat(v);
        out.0.extend(u.inverse().0);
        out.0.extend(v.inverse().0);
        out
    }

    /// Left-normed `[...[w_1, w_2], ..., w_k]`.
    pub fn left_normed(ws: &[Word]) -> Word {
        let mut acc = ws[0].clone();
        for w in &ws[1..] {
            acc = Word::commutator(&acc, w);
        }
        acc
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        push_reduced(&mut out, &self.0);
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    /// Free reduction followed by cancelling matching ends.
    pub fn cyclic_reduce(&self) -> Word {
        let r = self.free_reduce().0;
        let mut lo = 0;
        let mut hi = r.len();
        while hi - lo >= 2 && r[lo] == r[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Word(r[lo..hi].to_vec())
    }

    /// The rotation starting at position `i`.
    pub fn rotate(&self, i: usize) -> Word {
        let mut v = self.0[i..].to_vec();
        v.extend_from_slice(&self.0[..i]);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Largest generator index plus one.
    pub fn rank_hint(&self) -> usize {
        self.0.iter().map(|l| l.gen() + 1).max().unwrap_or(0)
    }

    /// Renders with generator names; inverses are uppercased names.
    pub fn format(&self, names: &[String]) -> String {
        if self.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|l| {
                let n = &names[l.gen()];
                if l.sign() < 0 {
                    uppercase_first(n)
                } else {
                    n.clone()
                }
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if l.sign() < 0 {
                write!(f, "x{}⁻¹", l.gen() + 1)?;
            } else {
                write!(f, "x{}", l.gen() + 1)?;
            }
        }
        Ok(())
    }
}

fn uppercase_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Appends `letters` to the reduced word `out`, keeping it reduced.
pub fn push_reduced(out: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

/// `s_t(w)`: each letter repeated `t` times.
pub fn scale_word(w: &Word, t: usize) -> Word {
    let mut v = Vec::with_capacity(w.len() * t);
    for &l in &w.0 {
        v.extend(std::iter::repeat(l).take(t));
    }
    Word(v)
}

/// Evaluates `w` with generator `i` sent to `gens[i]`.
pub fn evaluate_word<S: Scalar>(
    w: &Word,
    gens: &[GroupElement<S>],
    algebra: &Arc<GradedLieAlgebra<S>>,
) -> Result<GroupElement<S>> {
    let inverses: Vec<GroupElement<S>> = gens.iter().map(|g| g.invert()).collect();
    let mut acc = GroupElement::identity(algebra);
    // runs of one letter are a single power
    let mut k = 0;
    while k < w.len() {
        let l = w.0[k];
        let mut run = 1;
        while k + run < w.len() && w.0[k + run] == l {
            run += 1;
        }
        let g = gens.get(l.gen()).ok_or_else(|| Error::Unmapped(format!("generator index {}", l.gen())))?;
        let step = if run == 1 {
            if l.sign() < 0 { inverses[l.gen()].clone() } else { g.clone() }
        } else {
            let n = num_bigint::BigInt::from(run as i64 * l.sign() as i64);
            g.pow(&n)
        };
        acc = acc.multiply(&step)?;
        k += run;
    }
    Ok(acc)
}

/// Parses word syntax over `names`.
///
/// A name is a lowercase letter followed by digits or underscores; the
/// capitalized name is the inverse. `[u,v]` is `u v u⁻¹ v⁻¹`, `u^n`
/// repeats (negative `n` inverts), parentheses group, and `1` is the empty
/// word. Whitespace is ignored.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { chars, pos: 0, names };
    let w = p.sequence()?;
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!("unexpected {:?} at {} in {text:?}", p.chars[p.pos], p.pos)));
    }
    Ok(w)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} at {}", self.pos)))
        }
    }

    fn sequence(&mut self) -> Result<Word> {
        let mut out = Word::empty();
        while let Some(c) = self.peek() {
            if c == ',' || c == ']' || c == ')' {
                break;
            }
            let atom = self.atom()?;
            let atom = self.power(atom)?;
            out.0.extend(atom.0);
        }
        Ok(out)
    }

    fn power(&mut self, mut w: Word) -> Result<Word> {
        while self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            if self.peek() == Some('-') {
                self.pos += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            let n: i64 = s.parse().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))?;
            w = w.pow(n);
        }
        Ok(w)
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let mut parts = vec![self.sequence()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    parts.push(self.sequence()?);
                }
                self.expect(']')?;
                if parts.len() < 2 {
                    return Err(Error::Parse("commutator needs two entries".into()));
                }
                Ok(Word::left_normed(&parts))
            }
            Some('(') => {
                self.pos += 1;
                let w = self.sequence()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Word::empty())
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
                    self.pos += 1;
                }
                let tok: String = self.chars[start..self.pos].iter().collect();
                let lower: String = tok.to_lowercase();
                let g = self
                    .names
                    .iter()
                    .position(|n| *n == lower)
                    .ok_or_else(|| Error::Parse(format!("unknown generator {tok:?}")))?;
                Ok(Word(vec![Letter::new(g, if c.is_uppercase() { -1 } else { 1 })]))
            }
            Some(c) => Err(Error::Parse(format!("unexpected {c:?} at {}", self.pos))),
            None => Err(Error::Parse("unexpected end of word".into())),
        }
    }
}

/// One conjugated relator `g⁻¹ r^ε g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub conj: Word,
    pub relator: usize,
    pub sign: i8,
}

impl Cell {
    pub fn new(conj: Word, relator: usize, sign: i8) -> Self {
        Cell { conj, relator, sign }
    }

    /// The word `g⁻¹ r^ε g`.
    pub fn expand(&self, relators: &[Word]) -> Result<Word> {
        let r = relators.get(self.relator).ok_or(Error::RelatorIndex(self.relator))?;
        let r = if self.sign < 0 { r.inverse() } else { r.clone() };
        Ok(self.conj.inverse().concat(&r).concat(&self.conj))
    }
}

/// An ordered product of cells; its area is the number of cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Filling {
    pub cells: Vec<Cell>,
}

impl Filling {
    pub fn new() -> Self {
        Filling { cells: Vec::new() }
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }

    pub fn push(&mut self, cell: Cell) {
        self.cells.push(cell);
    }

    pub fn extend(&mut self, other: Filling) {
        self.cells.extend(other.cells);
    }

    /// Filling of `U V` from fillings of `U` and `V`.
    pub fn concat(mut self, other: Filling) -> Filling {
        self.cells.extend(other.cells);
        self
    }

    /// Filling of `A w A⁻¹`: each conjugator `g` becomes `g A⁻¹`.
    pub fn conjugated(&self, a: &Word) -> Filling {
        let ai = a.inverse();
        Filling {
            cells: self
                .cells
                .iter()
                .map(|c| Cell::new(c.conj.concat(&ai).free_reduce(), c.relator, c.sign))
                .collect(),
        }
    }

    /// Filling of `w⁻¹`.
    pub fn inverse(&self) -> Filling {
        Filling { cells: self.cells.iter().rev().map(|c| Cell::new(c.conj.clone(), c.relator, -c.sign)).collect() }
    }

    /// Reduced product of the cells.
    pub fn product(&self, relators: &[Word]) -> Result<Word> {
        let mut out = Vec::new();
        for c in &self.cells {
            push_reduced(&mut out, &c.expand(relators)?.0);
        }
        Ok(Word(out))
    }

    /// Number of cells of each relator index.
    pub fn histogram(&self, relator_count: usize) -> Vec<usize> {
        let mut h = vec![0; relator_count];
        for c in &self.cells {
            if c.relator < relator_count {
                h[c.relator] += 1;
            }
        }
        h
    }

    /// Serializable form with words rendered over `names`.
    pub fn to_file(&self, names: &[String]) -> FillingFile {
        FillingFile {
            cells: self
                .cells
                .iter()
                .map(|c| CellEntry { conj: c.conj.format(names), relator: c.relator, sign: c.sign })
                .collect(),
        }
    }

    pub fn from_file(file: &FillingFile, names: &[String]) -> Result<Filling> {
        let cells = file
            .cells
            .iter()
            .map(|c| Ok(Cell::new(parse_word(&c.conj, names)?, c.relator, c.sign)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Filling { cells })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FillingFile {
    pub cells: Vec<CellEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CellEntry {
    pub conj: String,
    pub relator: usize,
    pub sign: i8,
}

/// True iff `w⁻¹ · ∏ cells` freely reduces to the empty word.
pub fn verify_filling(w: &Word, f: &Filling, pres: &Presentation) -> Result<bool> {
    verify_filling_with(w, f, pres.relators())
}

/// [`verify_filling`] against an explicit relator list.
pub fn verify_filling_with(w: &Word, f: &Filling, relators: &[Word]) -> Result<bool> {
    let mut acc = Vec::new();
    push_reduced(&mut acc, &w.inverse().0);
    for c in &f.cells {
        if c.sign != 1 && c.sign != -1 {
            return Err(Error::Input(format!("cell sign {}", c.sign)));
        }
        push_reduced(&mut acc, &c.expand(relators)?.0);
    }
    Ok(acc.is_empty())
}

/// Writes `loop_word` as `g⁻¹ r^ε g` for some relator, if it freely equals
/// a conjugate of a relator or its inverse.
pub fn as_conjugate(loop_word: &Word, relators: &[Word]) -> Option<Cell> {
    let red = loop_word.free_reduce().0;
    let mut lo = 0;
    let mut hi = red.len();
    while hi - lo >= 2 && red[lo] == red[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    // red = q core q⁻¹ with q = red[..lo]
    let core = Word(red[lo..hi].to_vec());
    let q = Word(red[..lo].to_vec());
    for (idx, r) in relators.iter().enumerate() {
        for sign in [1i8, -1] {
            let rs = if sign > 0 { r.cyclic_reduce() } else { r.cyclic_reduce().inverse() };
            if rs.len() != core.len() || rs.is_empty() {
                continue;
            }
            for i in 0..rs.len() {
                if rs.0[i..] == core.0[..rs.len() - i] && rs.0[..i] == core.0[rs.len() - i..] {
                    // core = A⁻¹ c^ε A with A = rs[..i] and c = p⁻¹ r p, so
                    // loop = (p A q⁻¹)⁻¹ r^ε (p A q⁻¹)
                    let a = rs.prefix(i);
                    let g = cyclic_conjugator(r).concat(&a).concat(&q.inverse()).free_reduce();
                    return Some(Cell::new(g, idx, sign));
                }
            }
        }
    }
    None
}

/// `p` with `p⁻¹ r p` equal to the cyclic reduction of `r`.
fn cyclic_conjugator(r: &Word) -> Word {
    let red = r.free_reduce().0;
    let mut lo = 0;
    let mut hi = red.len();
    while hi - lo >= 2 && red[lo] == red[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    Word(red[..lo].to_vec())
}

/// Incremental rewriting that records the cells it uses.
///
/// Invariant: `original = K_1 ... K_m · current` in the free group, where
/// the `K_i` are the recorded cells.
#[derive(Clone, Debug)]
pub struct Rewriter<'a> {
    relators: &'a [Word],
    current: Word,
    filling: Filling,
}

impl<'a> Rewriter<'a> {
    pub fn new(word: Word, relators: &'a [Word]) -> Self {
        Rewriter { relators, current: word, filling: Filling::new() }
    }

    pub fn current(&self) -> &Word {
        &self.current
    }

    pub fn area(&self) -> usize {
        self.filling.area()
    }

    /// Replaces `current[pos..pos+len]` by `new`, where `old · new⁻¹` is a
    /// conjugate of a relator or inverse relator.
    pub fn replace_auto(&mut self, pos: usize, len: usize, new: &Word) -> Result<()> {
        let old = Word(self.current.0[pos..pos + len].to_vec());
        let loop_word = old.concat(&new.inverse());
        let cell = as_conjugate(&loop_word, self.relators).ok_or_else(|| {
            Error::Hypothesis(format!("{old} -> {new} is not a relator application"))
        })?;
        let mut f = Filling::new();
        f.push(cell);
        self.apply(pos, len, new, f);
        Ok(())
    }

    /// Replaces `current[pos..pos+len]` by `new`, given a filling of
    /// `old · new⁻¹`.
    pub fn replace_with_filling(&mut self, pos: usize, len: usize, new: &Word, loop_filling: Filling) {
        self.apply(pos, len, new, loop_filling);
    }

    fn apply(&mut self, pos: usize, len: usize, new: &Word, loop_filling: Filling) {
        let u = self.current.prefix(pos);
        self.filling.extend(loop_filling.conjugated(&u));
        let mut v = self.current.0[..pos].to_vec();
        v.extend_from_slice(&new.0);
        v.extend_from_slice(&self.current.0[pos + len..]);
        self.current = Word(v);
    }

    /// Freely reduces the current word; no cells are needed.
    pub fn reduce(&mut self) {
        self.current = self.current.free_reduce();
    }

    /// Records that `current` has been rewritten to `new` by an external
    /// filling of `current · new⁻¹`.
    pub fn replace_all(&mut self, new: Word, loop_filling: Filling) {
        self.filling.extend(loop_filling);
        self.current = new;
    }

    /// Finishes; the current word must freely reduce to the empty word.
    pub fn finish(self) -> Result<Filling> {
        if !self.current.free_reduce().is_empty() {
            return Err(Error::BadFilling(format!("rewriting left {}", self.current.free_reduce())));
        }
        Ok(self.filling)
    }

    /// The cells recorded so far.
    pub fn filling(&self) -> &Filling {
        &self.filling
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    fn w(text: &str) -> Word {
        parse_word(text, &names(&["a", "b", "c", "d", "e"])).unwrap()
    }

    #[test]
    fn parse_and_format() {
        let ns = names(&["a", "b"]);
        assert_eq!(w("[a,b]"), w("abAB"));
        assert_eq!(w("a^3"), w("aaa"));
        assert_eq!(w("(ab)^-2"), w("BABA"));
        assert_eq!(w("[a,b,a]"), w("[[a,b],a]"));
        assert_eq!(w("1"), Word::empty());
        assert_eq!(w("[a^2,b^2]").format(&ns), "aabbAABB");
        let ns = names(&["a1", "a1_2"]);
        assert_eq!(parse_word("a1_2A1", &ns).unwrap(), Word::from_pairs(&[(1, 1), (0, -1)]));
        assert!(parse_word("x", &ns).is_err());
        assert!(parse_word("[a1", &ns).is_err());
    }

    #[test]
    fn reduction() {
        assert!(w("abBA").free_reduce().is_empty());
        assert_eq!(w("abc").free_reduce(), w("abc"));
        assert!(w("[a,b][b,a]").free_reduce().is_empty());
        let r = w("aBbbA").free_reduce();
        assert_eq!(r, w("abA"));
        assert_eq!(r.free_reduce(), r);
        assert_eq!(w("abcA").cyclic_reduce(), w("bc"));
    }

    #[test]
    fn scaling_words() {
        assert_eq!(scale_word(&w("[a,b]"), 2), w("aabbAABB"));
        assert_eq!(scale_word(&w("aB"), 1), w("aB"));
    }

    #[test]
    fn conjugate_recognition() {
        let rels = vec![w("[a,b]")];
        let cell = as_conjugate(&w("cbABac"), &rels);
        // cbABaC is a conjugate; cbABac is not
        assert!(cell.is_none());
        let lw = w("cbABaC");
        let cell = as_conjugate(&lw, &rels).unwrap();
        let f = Filling { cells: vec![cell] };
        assert!(verify_filling_with(&lw, &f, &rels).unwrap());
        let lw = w("CbaBAc");
        let cell = as_conjugate(&lw, &rels).unwrap();
        assert_eq!(cell.sign, -1);
        assert!(verify_filling_with(&lw, &Filling { cells: vec![cell] }, &rels).unwrap());
    }

    #[test]
    fn non_cyclically_reduced_relator() {
        let rels = vec![w("c[a,b]C")];
        let lw = w("baBA");
        let cell = as_conjugate(&lw, &rels).unwrap();
        assert!(verify_filling_with(&lw, &Filling { cells: vec![cell] }, &rels).unwrap());
    }

    #[test]
    fn fillings() {
        let rels = vec![w("[a,b]")];
        let one = Filling { cells: vec![Cell::new(Word::empty(), 0, 1)] };
        assert!(verify_filling_with(&rels[0], &one, &rels).unwrap());
        assert!(verify_filling_with(&Word::empty(), &Filling::new(), &rels).unwrap());
        assert!(!verify_filling_with(&w("ab"), &Filling::new(), &rels).unwrap());
        let bad = Filling { cells: vec![Cell::new(Word::empty(), 3, 1)] };
        assert_eq!(verify_filling_with(&rels[0], &bad, &rels), Err(Error::RelatorIndex(3)));
        let conj = one.conjugated(&w("c"));
        assert!(verify_filling_with(&w("c[a,b]C"), &conj, &rels).unwrap());
        assert!(verify_filling_with(&w("[b,a]"), &one.inverse(), &rels).unwrap());
    }

    #[test]
    fn rewriter_swaps() {
        // [a^2, b] via two swaps
        let rels = vec![w("[a,b]")];
        let target = w("aabAAB");
        let mut rw = Rewriter::new(target.clone(), &rels);
        rw.replace_auto(1, 2, &w("ba")).unwrap();
        assert_eq!(rw.current(), &w("abaAAB"));
        rw.replace_auto(0, 2, &w("ba")).unwrap();
        rw.reduce();
        assert!(rw.current().is_empty());
        let f = rw.finish().unwrap();
        assert_eq!(f.area(), 2);
        assert!(verify_filling_with(&target, &f, &rels).unwrap());
    }

    #[test]
    fn filling_file_roundtrip() {
        let ns = names(&["a", "b"]);
        let f = Filling { cells: vec![Cell::new(w("ab"), 0, -1)] };
        let back = Filling::from_file(&f.to_file(&ns), &ns).unwrap();
        assert_eq!(back, f);
    }
}
