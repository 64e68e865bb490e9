//! Finite presentations, optionally mapped into a graded nilpotent group.

mod builtins;
mod class2;
mod central;
mod commuting;

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraFile, AlgebraPreset, GradedLieAlgebra, LieVector};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::scalar::{format_rational, parse_rational};
use crate::words::{evaluate_word, parse_word, Word};
use crate::Q;

pub use builtins::{builtin_presentation, quotient_relator_index, BUILTIN_NAMES};
pub use central::{
    central_power_presentation, commutator_form_transform, interleave, CentralPower, Family, Transformed,
};
pub use class2::{class2_presentation, relation_basis, RelationBasis};
pub use commuting::SwapTable;

/// A relator written as `∏ [x_j, y_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorForm {
    pub pairs: Vec<(Word, Word)>,
}

impl RelatorForm {
    pub fn single(x: Word, y: Word) -> Self {
        RelatorForm { pairs: vec![(x, y)] }
    }

    pub fn complexity(&self) -> usize {
        self.pairs.len()
    }

    pub fn expand(&self) -> Word {
        let mut out = Word::empty();
        for (x, y) in &self.pairs {
            out = out.concat(&Word::commutator(x, y));
        }
        out
    }
}

/// Generators, relators, and an optional map of each generator to
/// `exp(v)` in a graded group.
#[derive(Clone, Debug)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
    forms: Vec<Option<RelatorForm>>,
    algebra: Option<Arc<GradedLieAlgebra<Q>>>,
    generator_map: Option<Vec<LieVector<Q>>>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Self {
        let forms = vec![None; relators.len()];
        Presentation { names, relators, forms, algebra: None, generator_map: None }
    }

    /// Parses relators given in word syntax.
    pub fn parse(names: &[&str], relators: &[&str]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let rels = relators.iter().map(|r| parse_word(r, &names)).collect::<Result<Vec<_>>>()?;
        Ok(Presentation::new(names, rels))
    }

    pub fn with_algebra(mut self, algebra: Arc<GradedLieAlgebra<Q>>, map: Vec<LieVector<Q>>) -> Result<Self> {
        if map.len() != self.names.len() {
            return Err(Error::Dimension { expected: self.names.len(), got: map.len() });
        }
        for v in &map {
            algebra.check_dim(v)?;
        }
        self.algebra = Some(algebra);
        self.generator_map = Some(map);
        Ok(self)
    }

    /// Attaches a commutator-product form to relator `i`; the form must
    /// expand to a word freely equal to the relator.
    pub fn with_form(mut self, i: usize, form: RelatorForm) -> Result<Self> {
        let r = self.relators.get(i).ok_or(Error::RelatorIndex(i))?;
        if form.expand().free_reduce() != r.free_reduce() {
            return Err(Error::Input(format!("form does not expand to relator {i}")));
        }
        self.forms[i] = Some(form);
        Ok(self)
    }

    /// Appends a relator with an optional form.
    pub fn push_relator(&mut self, r: Word, form: Option<RelatorForm>) {
        self.relators.push(r);
        self.forms.push(form);
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn forms(&self) -> &[Option<RelatorForm>] {
        &self.forms
    }

    pub fn algebra(&self) -> Option<&Arc<GradedLieAlgebra<Q>>> {
        self.algebra.as_ref()
    }

    pub fn generator_map(&self) -> Option<&[LieVector<Q>]> {
        self.generator_map.as_deref()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        parse_word(text, &self.names)
    }

    pub fn format(&self, w: &Word) -> String {
        w.format(&self.names)
    }

    /// Images of the generators as group elements.
    pub fn generators(&self) -> Result<Vec<GroupElement<Q>>> {
        let (alg, map) = self.group_data()?;
        map.iter().map(|v| GroupElement::exp(alg, v.clone())).collect()
    }

    fn group_data(&self) -> Result<(&Arc<GradedLieAlgebra<Q>>, &[LieVector<Q>])> {
        match (&self.algebra, &self.generator_map) {
            (Some(a), Some(m)) => Ok((a, m)),
            _ => Err(Error::Unmapped("presentation has no generator map".into())),
        }
    }

    pub fn evaluate(&self, w: &Word) -> Result<GroupElement<Q>> {
        let (alg, _) = self.group_data()?;
        if let Some(l) = w.letters().iter().find(|l| l.gen() >= self.rank()) {
            return Err(Error::Unmapped(format!("generator index {}", l.gen())));
        }
        evaluate_word(w, &self.generators()?, alg)
    }

    /// True if every generator maps into `exp V_1`.
    pub fn is_grading_compatible(&self) -> bool {
        match self.group_data() {
            Ok((alg, map)) => map.iter().all(|v| (0..alg.dim()).all(|i| alg.layer(i) == 1 || v.0[i].is_zero())),
            Err(_) => false,
        }
    }

    /// Relator index with `r` freely equal to relator `i`, if any.
    pub fn relator_index(&self, r: &Word) -> Option<usize> {
        let red = r.free_reduce();
        self.relators.iter().position(|x| x.free_reduce() == red)
    }

    /// Drops relators, keeping generator data.
    pub fn with_relators(&self, relators: Vec<Word>, forms: Vec<Option<RelatorForm>>) -> Presentation {
        Presentation {
            names: self.names.clone(),
            relators,
            forms,
            algebra: self.algebra.clone(),
            generator_map: self.generator_map.clone(),
        }
    }

    /// Removes generator `g` using relator `def`, which must contain `g`
    /// exactly once; every other occurrence of `g` is replaced by the word
    /// it equals.
    pub fn eliminate_generator(&self, g: usize, def: usize) -> Result<Presentation> {
        let r = self.relators.get(def).ok_or(Error::RelatorIndex(def))?;
        let hits: Vec<usize> = (0..r.len()).filter(|&k| r.0[k].gen() == g).collect();
        if hits.len() != 1 {
            return Err(Error::Input(format!("generator {} occurs {} times in relator {def}", self.names[g], hits.len())));
        }
        let k = hits[0];
        // r = u g^s v = 1, so g^s = u⁻¹ v⁻¹ and g = (u⁻¹ v⁻¹)^s
        let u = r.prefix(k);
        let v = Word(r.0[k + 1..].to_vec());
        let mut image = u.inverse().concat(&v.inverse());
        if r.0[k].sign() < 0 {
            image = image.inverse();
        }
        let renumber = |l: crate::words::Letter| {
            let h = l.gen();
            crate::words::Letter::new(if h > g { h - 1 } else { h }, l.sign())
        };
        let substitute = |w: &Word| -> Word {
            let mut out = Vec::new();
            for &l in &w.0 {
                if l.gen() == g {
                    let part = if l.sign() > 0 { image.clone() } else { image.inverse() };
                    out.extend(part.0.into_iter().map(renumber));
                } else {
                    out.push(renumber(l));
                }
            }
            Word(out).free_reduce()
        };
        let mut names = self.names.clone();
        names.remove(g);
        let mut relators = Vec::new();
        let mut forms = Vec::new();
        for (i, r) in self.relators.iter().enumerate() {
            if i == def {
                continue;
            }
            relators.push(substitute(r));
            forms.push(self.forms[i].as_ref().map(|f| RelatorForm {
                pairs: f.pairs.iter().map(|(x, y)| (substitute(x), substitute(y))).collect(),
            }));
        }
        let generator_map = self.generator_map.as_ref().map(|m| {
            let mut m = m.clone();
            m.remove(g);
            m
        });
        Ok(Presentation { names, relators, forms, algebra: self.algebra.clone(), generator_map })
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile {
            generators: self.names.clone(),
            relators: self.relators.iter().map(|r| self.format(r)).collect(),
            algebra: self.algebra.as_ref().map(|a| AlgebraSpec::File(a.to_file())),
            generator_map: self
                .generator_map
                .as_ref()
                .map(|m| m.iter().map(|v| v.iter().map(format_rational).collect()).collect()),
        }
    }

    pub fn from_file(file: &PresentationFile) -> Result<Self> {
        let names = file.generators.clone();
        for n in &names {
            if !n.chars().next().is_some_and(|c| c.is_lowercase()) {
                return Err(Error::Input(format!("generator name {n:?} must start with a lowercase letter")));
            }
        }
        let relators = file.relators.iter().map(|r| parse_word(r, &names)).collect::<Result<Vec<_>>>()?;
        let pres = Presentation::new(names, relators);
        match (&file.algebra, &file.generator_map) {
            (Some(spec), Some(map)) => {
                let alg = match spec {
                    AlgebraSpec::Preset(name) => crate::algebra::build_algebra(&name.parse::<AlgebraPreset>()?)?,
                    AlgebraSpec::File(f) => GradedLieAlgebra::from_file(f)?,
                };
                let map = map
                    .iter()
                    .map(|v| Ok(LieVector(v.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?)))
                    .collect::<Result<Vec<_>>>()?;
                pres.with_algebra(Arc::new(alg), map)
            }
            (None, None) => Ok(pres),
            _ => Err(Error::Input("algebra and generator_map must be given together".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("presentation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Presentation::from_file(&serde_json::from_str(text)?)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format(r)).collect();
        write!(f, "<{} | {}>", self.names.join(", "), rels.join(", "))
    }
}

/// Presentation file: relators in word syntax, and the algebra either as a
/// preset name or an inline algebra file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_map: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Preset(String),
    File(AlgebraFile),
}

/// Outcome of [`verify_relators`].
#[derive(Clone, Debug, Default)]
pub struct RelatorReport {
    /// `(relator index, log of its value)` for relators that are not the identity.
    pub nontrivial: Vec<(usize, LieVector<Q>)>,
    /// Generators whose logs leave `V_1`.
    pub incompatible: Vec<usize>,
    pub missing_map: bool,
}

impl RelatorReport {
    pub fn relators_hold(&self) -> bool {
        !self.missing_map && self.nontrivial.is_empty()
    }

    pub fn compatible(&self) -> bool {
        !self.missing_map && self.incompatible.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.relators_hold() && self.compatible()
    }
}

impl fmt::Display for RelatorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.missing_map {
            return f.write_str("no generator map");
        }
        if self.passed() {
            return f.write_str("all relators trivial; generators in exp V_1");
        }
        for (i, v) in &self.nontrivial {
            writeln!(f, "relator {i} evaluates to exp{v}")?;
        }
        for g in &self.incompatible {
            writeln!(f, "generator {g} is not in exp V_1")?;
        }
        Ok(())
    }
}

/// Evaluates every relator and checks that generators lie in `exp V_1`.
pub fn verify_relators(pres: &Presentation) -> RelatorReport {
    let mut report = RelatorReport::default();
    let Ok((alg, map)) = pres.group_data() else {
        report.missing_map = true;
        return report;
    };
    for (g, v) in map.iter().enumerate() {
        if (0..alg.dim()).any(|i| alg.layer(i) != 1 && !v.0[i].is_zero()) {
            report.incompatible.push(g);
        }
    }
    for (i, r) in pres.relators().iter().enumerate() {
        match pres.evaluate(r) {
            Ok(e) if e.is_identity() => {}
            Ok(e) => report.nontrivial.push((i, e.log().clone())),
            Err(_) => report.missing_map = true,
        }
    }
    report
}

/// Least `l` such that `r` is literally `∏_{j≤l} [x_j, y_j]` with each
/// `x_j`, `y_j` a product of pairwise commuting generators, or a stored
/// form of a relator freely equal to `r`. Searches `l <= max_l`.
pub fn relator_complexity(r: &Word, pres: &Presentation, max_l: usize) -> Option<usize> {
    let stored = pres
        .relator_index(r)
        .and_then(|i| pres.forms()[i].as_ref())
        .map(|f| f.complexity());
    let table = SwapTable::new(pres);
    let searched = split_commutators(&r.0, &table, max_l);
    match (stored, searched) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn split_commutators(w: &[crate::words::Letter], table: &SwapTable, max_l: usize) -> Option<usize> {
    if w.is_empty() {
        return Some(0);
    }
    if max_l == 0 {
        return None;
    }
    let mut best: Option<usize> = None;
    // first factor x y x⁻¹ y⁻¹ has length 2(|x| + |y|)
    for half in 1..=w.len() / 2 {
        let len = 2 * half;
        let piece = &w[..len];
        let is_comm = (1..half).any(|lx| {
            let x = &piece[..lx];
            let y = &piece[lx..half];
            let xi: Vec<_> = x.iter().rev().map(|l| l.inverse()).collect();
            let yi: Vec<_> = y.iter().rev().map(|l| l.inverse()).collect();
            piece[half..half + lx] == xi[..]
                && piece[half + lx..] == yi[..]
                && table.all_commute(x)
                && table.all_commute(y)
        });
        if is_comm {
            if let Some(rest) = split_commutators(&w[len..], table, max_l - 1) {
                let total = rest + 1;
                best = Some(best.map_or(total, |b: usize| b.min(total)));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complexity_examples() {
        let h5 = builtin_presentation("h5_raw").unwrap();
        assert_eq!(relator_complexity(&h5.relators()[0], &h5, 3), Some(2));
        let r = h5.word("[a1,b1]").unwrap();
        assert_eq!(relator_complexity(&r, &h5, 3), Some(1));
        let hq = builtin_presentation("quaternion_heisenberg").unwrap();
        let r = hq.word("[e1,e2][e0,e3]^-1").unwrap();
        assert_eq!(relator_complexity(&r, &hq, 3), Some(2));
        let cf = builtin_presentation("h5_commutator_form").unwrap();
        assert_eq!(relator_complexity(&cf.relators()[0], &cf, 3), Some(1));
    }

    #[test]
    fn elimination_of_central_generator() {
        let h3 = builtin_presentation("h3").unwrap();
        let g = h3.generator_index("c").unwrap();
        let e = h3.eliminate_generator(g, 0).unwrap();
        assert_eq!(e.names(), &["a1".to_string(), "a2".to_string()]);
        assert_eq!(e.relators().len(), 2);
        assert!(verify_relators(&e).passed());
    }

    #[test]
    fn file_roundtrip() {
        let p = builtin_presentation("h5_commutator_form").unwrap();
        let back = Presentation::from_json(&p.to_json()).unwrap();
        assert_eq!(back.relators(), p.relators());
        assert!(verify_relators(&back).passed());
        let text = r#"{"generators":["a","b"],"relators":["[a,b]"],"algebra":"heisenberg(3)",
                       "generator_map":[["1","0","0"],["0","1","0"]]}"#;
        let p = Presentation::from_json(text).unwrap();
        assert!(!verify_relators(&p).relators_hold());
    }

    #[test]
    fn corrupted_relator_fails() {
        let p = builtin_presentation("h5_commutator_form").unwrap();
        let bad = p.with_relators(vec![p.word("[a1,a2]").unwrap()], vec![None]);
        let report = verify_relators(&bad);
        assert!(!report.passed());
        assert_eq!(report.nontrivial.len(), 1);
    }
}
