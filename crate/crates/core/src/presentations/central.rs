//! Central powers of class-2 presentations and their rewriting into
//! single-commutator relators.

use std::sync::Arc;

use num_traits::Zero;

use super::{verify_relators, Presentation, RelatorForm, SwapTable};
use crate::algebra::{central_product_algebra, LieVector};
use crate::error::{Error, Result};
use crate::words::{verify_filling, verify_filling_with, Cell, Filling, Letter, Rewriter, Word};
use crate::Q;

/// Rewrites `∏ [x_j, y_j]` as `[∏ x_j, ∏ y_j]`.
///
/// Returns the commutator and a filling of `∏[x_j,y_j] · [∏x_j, ∏y_j]⁻¹`
/// by commuting relators of `pres`. Letters of distinct factors must
/// commute via relators of `pres`.
pub fn interleave(factors: &[(Word, Word)], pres: &Presentation) -> Result<(Word, Filling)> {
    interleave_with(factors, pres.relators(), &SwapTable::new(pres))
}

fn interleave_with(factors: &[(Word, Word)], relators: &[Word], table: &SwapTable) -> Result<(Word, Filling)> {
    if factors.is_empty() {
        return Ok((Word::empty(), Filling::new()));
    }
    let mut product = Word::empty();
    let mut xs = Word::empty();
    let mut ys = Word::empty();
    for (x, y) in factors {
        product = product.concat(&Word::commutator(x, y));
        xs = xs.concat(x);
        ys = ys.concat(y);
    }
    let target = Word::commutator(&xs, &ys);
    let word = product.concat(&target.inverse());
    let mut rw = Rewriter::new(word.clone(), relators);
    table.sort_segment(&mut rw, 0, &target)?;
    let filling = rw.finish()?;
    if !verify_filling_with(&word, &filling, relators)? {
        return Err(Error::BadFilling("interleaving witness".into()));
    }
    Ok((target, filling))
}

/// Relator family of a raw central-power relator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Base relator `base` written in copy `copy`.
    Original { copy: usize, base: usize },
    /// `[a_{ij}, [a_{ik}, a_{il}]]`.
    Nil { copy: usize, j: usize, k: usize, l: usize },
    /// `[a_{ij}, a_{kl}]` for copies `i < k`.
    Product { i: usize, j: usize, k: usize, l: usize },
    /// `[a_{ik}, a_{il}] [a_{jk}, a_{jl}]⁻¹` for copies `i < j`, `k < l`.
    Center { i: usize, j: usize, k: usize, l: usize },
}

/// The raw central-power presentation and the data needed to transform it.
#[derive(Clone, Debug)]
pub struct CentralPower {
    pub presentation: Presentation,
    pub families: Vec<Family>,
    pub copies: usize,
    pub base_rank: usize,
    /// Base relators with their forms, after eliminating generators
    /// outside `exp V_1`.
    pub base_forms: Vec<(usize, RelatorForm)>,
}

impl CentralPower {
    /// Generator index of base generator `g` in copy `c`.
    pub fn gen(&self, c: usize, g: usize) -> usize {
        c * self.base_rank + g
    }

    fn lift(&self, w: &Word, c: usize) -> Word {
        Word(w.0.iter().map(|l| Letter::new(self.gen(c, l.gen()), l.sign())).collect())
    }

    pub fn family_count(&self, pick: fn(&Family) -> bool) -> usize {
        self.families.iter().filter(|f| pick(f)).count()
    }
}

fn is_nil_relator(r: &Word, rank: usize) -> bool {
    let c = r.cyclic_reduce();
    if c.len() != 8 && c.len() != 10 {
        return false;
    }
    for i in 0..rank {
        for j in 0..rank {
            for k in 0..rank {
                if j == k {
                    continue;
                }
                let inner = Word::commutator(&Word::gen(j), &Word::gen(k));
                let w = Word::commutator(&Word::gen(i), &inner).cyclic_reduce();
                for cand in [w.clone(), w.inverse()] {
                    if cand.len() == c.len() && (0..cand.len()).any(|s| cand.rotate(s) == c) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Builds the `n`-th central power of a class-2 presentation with the four
/// relator families: original relators per copy, `[a_ij,[a_ik,a_il]]`,
/// `[a_ij, a_kl]` across copies, and `[a_ik,a_il] = [a_jk,a_jl]`.
///
/// Generators mapped outside `exp V_1` are first eliminated through a
/// relator containing them once. Every remaining base relator must either
/// be of the form `[x,[y,z]]` or carry a [`RelatorForm`].
pub fn central_power_presentation(base: &Presentation, n: usize) -> Result<CentralPower> {
    let mut base = base.clone();
    let alg = base.algebra().cloned().ok_or_else(|| Error::Unmapped("base has no generator map".into()))?;
    while !base.is_grading_compatible() {
        let map = base.generator_map().expect("mapped");
        let g = (0..base.rank())
            .find(|&g| (0..alg.dim()).any(|i| alg.layer(i) != 1 && !map[g].0[i].is_zero()))
            .expect("incompatible generator");
        let def = base
            .relators()
            .iter()
            .position(|r| r.0.iter().filter(|l| l.gen() == g).count() == 1)
            .ok_or_else(|| Error::Hypothesis(format!("cannot eliminate generator {}", base.names()[g])))?;
        base = base.eliminate_generator(g, def)?;
    }
    if alg.class() != 2 {
        return Err(Error::Input(format!("central powers need class 2, got {}", alg.class())));
    }
    let p = base.rank();
    let mut base_forms = Vec::new();
    for (i, r) in base.relators().iter().enumerate() {
        if is_nil_relator(r, p) {
            continue;
        }
        let form = base.forms()[i]
            .clone()
            .ok_or_else(|| Error::Input(format!("relator {} has no commutator form", base.format(r))))?;
        base_forms.push((i, form));
    }
    let max_l = base_forms.iter().map(|(_, f)| f.complexity()).max().unwrap_or(0);
    if n < 2.max(max_l) {
        return Err(Error::Input(format!("central power n = {n} is below max(2, {max_l})")));
    }

    let cp_alg = central_product_algebra(&alg, n)?;
    let map = base.generator_map().expect("mapped");
    let mut names = Vec::new();
    let mut new_map = Vec::new();
    for c in 0..n {
        for g in 0..p {
            names.push(format!("{}_{}", base.names()[g], c + 1));
            let mut v = LieVector::<Q>::zero(cp_alg.algebra.dim());
            for (i, x) in map[g].iter().enumerate() {
                if !x.is_zero() {
                    v.0[cp_alg.embeddings[c][i]] = x.clone();
                }
            }
            new_map.push(v);
        }
    }

    let gen = |c: usize, g: usize| c * p + g;
    let w1 = |c: usize, g: usize| Word::gen(gen(c, g));
    let mut relators = Vec::new();
    let mut forms = Vec::new();
    let mut families = Vec::new();
    for c in 0..n {
        for (b, form) in &base_forms {
            let lift = |w: &Word| Word(w.0.iter().map(|l| Letter::new(gen(c, l.gen()), l.sign())).collect());
            relators.push(lift(&base.relators()[*b]));
            forms.push(Some(RelatorForm { pairs: form.pairs.iter().map(|(x, y)| (lift(x), lift(y))).collect() }));
            families.push(Family::Original { copy: c, base: *b });
        }
    }
    for c in 0..n {
        for j in 0..p {
            for k in 0..p {
                for l in k + 1..p {
                    relators.push(Word::commutator(&w1(c, j), &Word::commutator(&w1(c, k), &w1(c, l))));
                    forms.push(None);
                    families.push(Family::Nil { copy: c, j, k, l });
                }
            }
        }
    }
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..p {
                for l in 0..p {
                    relators.push(Word::commutator(&w1(i, j), &w1(k, l)));
                    forms.push(Some(RelatorForm::single(w1(i, j), w1(k, l))));
                    families.push(Family::Product { i, j, k, l });
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..p {
                for l in k + 1..p {
                    let a = Word::commutator(&w1(i, k), &w1(i, l));
                    let b = Word::commutator(&w1(j, k), &w1(j, l));
                    relators.push(a.concat(&b.inverse()));
                    forms.push(Some(RelatorForm { pairs: vec![(w1(i, k), w1(i, l)), (w1(j, l), w1(j, k))] }));
                    families.push(Family::Center { i, j, k, l });
                }
            }
        }
    }
    let mut presentation = Presentation::new(names, relators).with_algebra(Arc::new(cp_alg.algebra), new_map)?;
    presentation.forms = forms;
    let report = verify_relators(&presentation);
    if !report.passed() {
        return Err(Error::Verification(format!("central power relators: {report}")));
    }
    Ok(CentralPower { presentation, families, copies: n, base_rank: p, base_forms })
}

/// Commutator-form presentation with, for each raw relator, a verified
/// filling of it over the new relators.
#[derive(Clone, Debug)]
pub struct Transformed {
    pub presentation: Presentation,
    /// `witnesses[i]` fills raw relator `i`.
    pub witnesses: Vec<Filling>,
}

/// Rewrites a central power into single-commutator relators.
///
/// Product relators are kept; `[a_ik,a_il][a_jk,a_jl]⁻¹` becomes
/// `[a_ik a_jl, a_il a_jk]`; the copies of a base relator `∏_j [x_j, y_j]`
/// collapse into `[∏_j x_j^(j), ∏_j y_j^(j)]`, factor `j` moved to copy `j`;
/// nil relators are dropped. Moving a factor between copies is supported
/// when `x_j` and `y_j` are single generators.
pub fn commutator_form_transform(cp: &CentralPower) -> Result<Transformed> {
    let raw = &cp.presentation;
    let mut relators: Vec<Word> = Vec::new();
    let mut forms: Vec<Option<RelatorForm>> = Vec::new();
    for (r, f) in raw.relators().iter().zip(&cp.families) {
        if matches!(f, Family::Product { .. }) {
            forms.push(Some(RelatorForm::single(Word(vec![r.0[0]]), Word(vec![r.0[1]]))));
            relators.push(r.clone());
        }
    }
    let table = SwapTable::from_relators(&relators);

    let mut center_index = std::collections::HashMap::new();
    let mut center_interleave = std::collections::HashMap::new();
    for f in &cp.families {
        if let Family::Center { i, j, k, l } = *f {
            let factors = [
                (Word::gen(cp.gen(i, k)), Word::gen(cp.gen(i, l))),
                (Word::gen(cp.gen(j, l)), Word::gen(cp.gen(j, k))),
            ];
            let (c, fill) = interleave_with(&factors, &relators, &table)?;
            center_index.insert((i, j, k, l), relators.len());
            center_interleave.insert((i, j, k, l), fill);
            forms.push(Some(RelatorForm::single(
                Word(vec![Letter::new(cp.gen(i, k), 1), Letter::new(cp.gen(j, l), 1)]),
                Word(vec![Letter::new(cp.gen(i, l), 1), Letter::new(cp.gen(j, k), 1)]),
            )));
            relators.push(c);
        }
    }
    let mut orig_index = std::collections::HashMap::new();
    for (b, form) in &cp.base_forms {
        let lifted: Vec<(Word, Word)> =
            form.pairs.iter().enumerate().map(|(j, (x, y))| (cp.lift(x, j), cp.lift(y, j))).collect();
        let (c, _) = interleave_with(&lifted, &relators, &table)?;
        let xs = lifted.iter().fold(Word::empty(), |acc, (x, _)| acc.concat(x));
        let ys = lifted.iter().fold(Word::empty(), |acc, (_, y)| acc.concat(y));
        orig_index.insert(*b, relators.len());
        relators.push(c);
        forms.push(Some(RelatorForm::single(xs, ys)));
    }

    let presentation = raw.with_relators(relators.clone(), forms);
    let ctx = Ctx { cp, relators: &relators, table: &table, center_index: &center_index, center_interleave: &center_interleave };

    let mut witnesses = Vec::with_capacity(raw.relators().len());
    for (r, f) in raw.relators().iter().zip(&cp.families) {
        let w = match *f {
            Family::Product { .. } => {
                let idx = presentation.relator_index(r).expect("kept product relator");
                Filling { cells: vec![Cell::new(Word::empty(), idx, 1)] }
            }
            Family::Center { i, j, k, l } => ctx.center_witness(i, j, k, l),
            Family::Nil { copy, j, k, l } => ctx.nil_witness(copy, j, k, l)?,
            Family::Original { copy, base } => {
                let form = &cp.base_forms.iter().find(|(b, _)| *b == base).expect("form").1;
                ctx.original_witness(copy, form, orig_index[&base])?
            }
        };
        if !verify_filling(r, &w, &presentation)? {
            return Err(Error::BadFilling(format!("witness for {}", raw.format(r))));
        }
        witnesses.push(w);
    }
    let report = verify_relators(&presentation);
    if !report.passed() {
        return Err(Error::Verification(format!("transformed relators: {report}")));
    }
    Ok(Transformed { presentation, witnesses })
}

struct Ctx<'a> {
    cp: &'a CentralPower,
    relators: &'a [Word],
    table: &'a SwapTable,
    center_index: &'a std::collections::HashMap<(usize, usize, usize, usize), usize>,
    center_interleave: &'a std::collections::HashMap<(usize, usize, usize, usize), Filling>,
}

impl Ctx<'_> {
    /// Fills `[a_ik,a_il][a_jk,a_jl]⁻¹` for `i < j`, `k < l`.
    fn center_witness(&self, i: usize, j: usize, k: usize, l: usize) -> Filling {
        let mut f = self.center_interleave[&(i, j, k, l)].clone();
        f.push(Cell::new(Word::empty(), self.center_index[&(i, j, k, l)], 1));
        f
    }

    /// Fills `[a_ck, a_cl] [a_dk, a_dl]⁻¹` for any copies and generators.
    fn transfer(&self, c: usize, d: usize, k: usize, l: usize) -> Filling {
        if c == d || k == l {
            return Filling::new();
        }
        if k > l {
            // [x,y] = [y,x]⁻¹: fill [a_cl,a_ck]⁻¹ [a_dl,a_dk] by conjugating
            let f = self.transfer(c, d, l, k);
            let a = Word::commutator(&Word::gen(self.cp.gen(c, l)), &Word::gen(self.cp.gen(c, k)));
            return f.inverse().conjugated(&a.inverse());
        }
        if c < d {
            self.center_witness(c, d, k, l)
        } else {
            self.center_witness(d, c, k, l).inverse()
        }
    }

    fn nil_witness(&self, c: usize, j: usize, k: usize, l: usize) -> Result<Filling> {
        let d = (c + 1) % self.cp.copies;
        let g = |cc: usize, x: usize| Word::gen(self.cp.gen(cc, x));
        let inner = Word::commutator(&g(c, k), &g(c, l));
        let moved = Word::commutator(&g(d, k), &g(d, l));
        let word = Word::commutator(&g(c, j), &inner);
        let mut rw = Rewriter::new(word, self.relators);
        let t = self.transfer(c, d, k, l);
        rw.replace_with_filling(1, 4, &moved, t.clone());
        rw.replace_with_filling(6, 4, &moved.inverse(), t.inverse().conjugated(&inner.inverse()));
        self.table.cancel_commuting(&mut rw)?;
        rw.finish()
    }

    fn original_witness(&self, c: usize, form: &RelatorForm, idx: usize) -> Result<Filling> {
        let expanded = form.pairs.iter().fold(Word::empty(), |acc, (x, y)| {
            acc.concat(&Word::commutator(&self.cp.lift(x, c), &self.cp.lift(y, c)))
        });
        let mut rw = Rewriter::new(expanded, self.relators);
        let mut pos = 0;
        let mut lifted = Vec::new();
        for (j, (x, y)) in form.pairs.iter().enumerate() {
            let len = 2 * (x.len() + y.len());
            if j != c {
                if x.len() != 1 || y.len() != 1 || x.0[0].sign() != y.0[0].sign() || x.0[0].sign() < 0 {
                    return Err(Error::Unsupported(
                        "moving a commutator between copies needs single positive generators".into(),
                    ));
                }
                let (k, l) = (x.0[0].gen(), y.0[0].gen());
                let moved = Word::commutator(&self.cp.lift(x, j), &self.cp.lift(y, j));
                rw.replace_with_filling(pos, len, &moved, self.transfer(c, j, k, l));
            }
            lifted.push((self.cp.lift(x, j), self.cp.lift(y, j)));
            pos += len;
        }
        let (target, fill) = interleave_with(&lifted, self.relators, self.table)?;
        let len = rw.current().len();
        rw.replace_with_filling(0, len, &target, fill);
        rw.replace_with_filling(0, target.len(), &Word::empty(), Filling { cells: vec![Cell::new(Word::empty(), idx, 1)] });
        rw.finish()
    }
}
