//! Bundled presentations with their generator maps.

use std::sync::Arc;


use super::{central_power_presentation, commutator_form_transform, Presentation, RelatorForm};
use crate::algebra::{
    central_quotient, class3_rank8, division_heisenberg, free_nilpotent, heisenberg, DivisionKind, GradedLieAlgebra,
    LieVector,
};
use crate::error::{Error, Result};
use crate::words::Word;
use crate::Q;

pub const BUILTIN_NAMES: &[&str] = &[
    "h3",
    "h5_raw",
    "h5_commutator_form",
    "free_class2(d)",
    "class3_rank8_relators",
    "quaternion_heisenberg",
    "octonion_heisenberg",
    "sapir_quotient",
];

fn unit_map(alg: &GradedLieAlgebra<Q>, indices: &[usize]) -> Vec<LieVector<Q>> {
    indices.iter().map(|&i| LieVector::basis(alg.dim(), i)).collect()
}

fn single_forms(pres: Presentation, pairs: &[(&str, &str)], offset: usize) -> Result<Presentation> {
    let mut pres = pres;
    for (k, (x, y)) in pairs.iter().enumerate() {
        let form = RelatorForm::single(pres.word(x)?, pres.word(y)?);
        pres = pres.with_form(offset + k, form)?;
    }
    Ok(pres)
}

/// Presentation by name; see [`BUILTIN_NAMES`].
pub fn builtin_presentation(name: &str) -> Result<Presentation> {
    let name = name.trim();
    if let Some(arg) = name.strip_prefix("free_class2(").and_then(|s| s.strip_suffix(')')) {
        let d: usize = arg.trim().parse().map_err(|_| Error::UnknownPreset(name.into()))?;
        return free_class2(d);
    }
    match name {
        "h3" => {
            let alg = heisenberg(3)?;
            let pres = Presentation::parse(&["a1", "a2", "c"], &["[a1,a2]C", "[c,a1]", "[c,a2]"])?;
            let map = unit_map(&alg, &[0, 1, 2]);
            single_forms(pres.with_algebra(Arc::new(alg), map)?, &[("c", "a1"), ("c", "a2")], 1)
        }
        "h5_raw" | "h5_commutator_form" => {
            let alg = heisenberg(5)?;
            let first = if name == "h5_raw" { "[a1,a2][b1,b2]^-1" } else { "[a1b2,a2b1]" };
            let rels = [first, "[a1,b1]", "[a1,b2]", "[a2,b1]", "[a2,b2]"];
            let pres = Presentation::parse(&["a1", "a2", "b1", "b2"], &rels)?;
            let map = unit_map(&alg, &[0, 1, 2, 3]);
            let pres = pres.with_algebra(Arc::new(alg), map)?;
            let pres = if name == "h5_raw" {
                let form = RelatorForm { pairs: vec![(pres.word("a1")?, pres.word("a2")?), (pres.word("b2")?, pres.word("b1")?)] };
                pres.with_form(0, form)?
            } else {
                single_forms(pres, &[("a1b2", "a2b1")], 0)?
            };
            single_forms(pres, &[("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")], 1)
        }
        "class3_rank8_relators" => {
            let alg = class3_rank8();
            let pairs = [
                ("a", "c"),
                ("a", "d"),
                ("a", "e"),
                ("b", "d"),
                ("b", "e"),
                ("c", "e"),
                ("ace", "bD"),
                ("aCe", "bd"),
            ];
            let rels: Vec<String> = pairs.iter().map(|(x, y)| format!("[{x},{y}]")).collect();
            let rels: Vec<&str> = rels.iter().map(|s| s.as_str()).collect();
            let pres = Presentation::parse(&["a", "b", "c", "d", "e"], &rels)?;
            let map = unit_map(&alg, &[0, 1, 2, 3, 4]);
            single_forms(pres.with_algebra(Arc::new(alg), map)?, &pairs, 0)
        }
        "quaternion_heisenberg" => division_presentation(DivisionKind::Quaternion),
        "octonion_heisenberg" => division_presentation(DivisionKind::Octonion),
        "sapir_quotient" => product_quotient(),
        _ => Err(Error::UnknownPreset(name.into())),
    }
}

/// Nil relators `[a_i, [a_j, a_k]]` for all `i` and `j < k`.
fn nil_relators(d: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in j + 1..d {
                out.push(Word::commutator(&Word::gen(i), &Word::commutator(&Word::gen(j), &Word::gen(k))));
            }
        }
    }
    out
}

fn free_class2(d: usize) -> Result<Presentation> {
    if d == 0 {
        return Err(Error::Input("free_class2 needs d >= 1".into()));
    }
    let alg = free_nilpotent(d, 2)?;
    let names = (1..=d).map(|i| format!("a{i}")).collect();
    let map = unit_map(&alg, &(0..d).collect::<Vec<_>>());
    Presentation::new(names, nil_relators(d)).with_algebra(Arc::new(alg), map)
}

/// Generators `e0..e{m-1}` for the unit basis; `[e_p,e_q] = [e_r,e_s]`
/// relators for equal brackets, plus nil relators.
fn division_presentation(kind: DivisionKind) -> Result<Presentation> {
    let alg = division_heisenberg(kind);
    let m = kind.real_dim();
    let mut groups: Vec<(LieVector<Q>, Vec<(usize, usize)>)> = Vec::new();
    for p in 0..m {
        for q in p + 1..m {
            let b = alg.basis_bracket(p, q);
            if b.is_zero() {
                continue;
            }
            // orient each pair so brackets with the same target are equal
            let (key, pair) = match groups.iter().position(|(v, _)| *v == b || *v == -&b) {
                Some(i) if groups[i].0 == b => (i, (p, q)),
                Some(i) => (i, (q, p)),
                None => {
                    groups.push((b, Vec::new()));
                    (groups.len() - 1, (p, q))
                }
            };
            groups[key].1.push(pair);
        }
    }
    let mut relators = Vec::new();
    let mut forms = Vec::new();
    for (_, pairs) in &groups {
        let (p0, q0) = pairs[0];
        for &(p, q) in &pairs[1..] {
            let a = Word::commutator(&Word::gen(p0), &Word::gen(q0));
            let b = Word::commutator(&Word::gen(p), &Word::gen(q));
            relators.push(a.concat(&b.inverse()));
            forms.push(Some(RelatorForm {
                pairs: vec![(Word::gen(p0), Word::gen(q0)), (Word::gen(q), Word::gen(p))],
            }));
        }
    }
    for r in nil_relators(m) {
        relators.push(r);
        forms.push(None);
    }
    let names: Vec<String> = (0..m).map(|i| format!("e{i}")).collect();
    let map = unit_map(&alg, &(0..m).collect::<Vec<_>>());
    let pres = Presentation::new(names, relators).with_algebra(Arc::new(alg), map)?;
    let pres = pres.with_relators(pres.relators().to_vec(), forms);
    Ok(pres)
}

/// Central square of the free class-2 group on ten generators, in
/// commutator form, modulo `[a1,a2][a3,a4]...[a9,a10]` in the first copy.
fn product_quotient() -> Result<Presentation> {
    let base = free_class2(10)?;
    let cp = central_power_presentation(&base, 2)?;
    let t = commutator_form_transform(&cp)?;
    let pres = t.presentation;
    let alg = pres.algebra().expect("mapped").clone();
    let map = pres.generator_map().expect("mapped").to_vec();
    let mut z = LieVector::<Q>::zero(alg.dim());
    let mut word = Word::empty();
    let mut pairs = Vec::new();
    for m in 0..5 {
        let (x, y) = (cp.gen(0, 2 * m), cp.gen(0, 2 * m + 1));
        z = &z + &alg.bracket(&map[x], &map[y])?;
        word = word.concat(&Word::commutator(&Word::gen(x), &Word::gen(y)));
        pairs.push((Word::gen(x), Word::gen(y)));
    }
    let quo = central_quotient(&alg, &[z])?;
    let new_map: Vec<LieVector<Q>> = map.iter().map(|v| quo.project(v)).collect();
    let mut out = pres.with_relators(pres.relators().to_vec(), pres.forms().to_vec());
    out.push_relator(word, Some(RelatorForm { pairs }));
    let out = Presentation { algebra: None, generator_map: None, ..out };
    out.with_algebra(Arc::new(quo.algebra), new_map)
}

/// Index of the quotient relator in `sapir_quotient`.
pub fn quotient_relator_index(pres: &Presentation) -> usize {
    pres.relators().len() - 1
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{relator_complexity, verify_relators};

    #[test]
    fn all_builtins_verify() {
        for name in ["h5_raw", "h5_commutator_form", "free_class2(2)", "free_class2(3)", "class3_rank8_relators",
                     "quaternion_heisenberg", "octonion_heisenberg", "sapir_quotient"] {
            let p = builtin_presentation(name).unwrap();
            let report = verify_relators(&p);
            assert!(report.passed(), "{name}: {report}");
        }
    }

    #[test]
    fn h3_relators_hold_but_not_compatible() {
        let p = builtin_presentation("h3").unwrap();
        let report = verify_relators(&p);
        assert!(report.relators_hold());
        assert!(!report.compatible());
        assert_eq!(report.incompatible, vec![2]);
    }

    #[test]
    fn shapes() {
        let p = builtin_presentation("h5_commutator_form").unwrap();
        assert_eq!(p.format(&p.relators()[0]), "a1b2a2b1B2A1B1A2");
        let p = builtin_presentation("free_class2(2)").unwrap();
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.relators()[0], p.word("[a1,[a1,a2]]").unwrap());
        let p = builtin_presentation("class3_rank8_relators").unwrap();
        assert_eq!(p.relators().len(), 8);
        let p = builtin_presentation("quaternion_heisenberg").unwrap();
        assert_eq!(p.relators().len(), 3 + 4 * 6);
        for (r, f) in p.relators().iter().zip(p.forms()) {
            if f.is_some() {
                assert_eq!(relator_complexity(r, &p, 2), Some(2));
            }
        }
        let p = builtin_presentation("octonion_heisenberg").unwrap();
        assert_eq!(p.relators().len(), 21 + 8 * 28);
        let p = builtin_presentation("sapir_quotient").unwrap();
        assert_eq!(p.rank(), 20);
        assert_eq!(p.relators().len(), 100 + 45 + 1);
        assert_eq!(p.algebra().unwrap().dim(), 20 + 44);
        assert!(builtin_presentation("nope").is_err());
    }
}
