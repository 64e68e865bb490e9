use nilfill::presentations::{builtin_presentation, Presentation};
use nilfill::words::*;
use proptest::prelude::*;

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

#[test]
fn parser_syntax() {
    let ns = names(&["a", "b", "a1", "c"]);
    let p = |t: &str| parse_word(t, &ns).unwrap().format(&ns);
    assert_eq!(p("[a,b]"), "abAB");
    assert_eq!(p("[a,b,c]"), p("[[a,b],c]"));
    assert_eq!(p("a^3 B^-2"), "aaabb");
    assert_eq!(p("(ab)^2"), "abab");
    assert_eq!(p("1"), "1");
    assert_eq!(p("a1A1"), "a1A1");
    assert!(parse_word("[a,b", &ns).is_err());
    assert!(parse_word("x", &ns).is_err());
}

#[test]
fn scaling_and_reduction() {
    let ns = names(&["a", "b"]);
    let w = parse_word("[a,b]", &ns).unwrap();
    assert_eq!(scale_word(&w, 3).format(&ns), "aaabbbAAABBB");
    assert_eq!(parse_word("abBA", &ns).unwrap().free_reduce(), Word::empty());
    assert_eq!(parse_word("Bab", &ns).unwrap().cyclic_reduce().format(&ns), "a");
}

#[test]
fn filling_checks_and_json() {
    let pres = Presentation::parse(&["a", "b"], &["[a,b]"]).unwrap();
    let w = pres.word("[a^2,b]").unwrap();
    // [a^2,b] = a [a,b] a⁻¹ · [a,b]
    let f = Filling { cells: vec![Cell::new(pres.word("A").unwrap(), 0, 1), Cell::new(Word::empty(), 0, 1)] };
    assert!(verify_filling(&w, &f, &pres).unwrap());
    let swapped = Filling { cells: f.cells.iter().rev().cloned().collect() };
    assert!(!verify_filling(&w, &swapped, &pres).unwrap());
    let file = f.to_file(pres.names());
    let back = Filling::from_file(&serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap(), pres.names());
    assert_eq!(back.unwrap(), f);
    let bad = Filling { cells: vec![Cell::new(Word::empty(), 3, 1)] };
    assert!(verify_filling(&w, &bad, &pres).is_err());
}

#[test]
fn evaluation_in_h5() {
    let pres = builtin_presentation("h5_commutator_form").unwrap();
    for r in pres.relators() {
        assert!(pres.evaluate(r).unwrap().is_identity());
    }
    assert!(!pres.evaluate(&pres.word("[a1,a2]").unwrap()).unwrap().is_identity());
}

proptest! {
    #[test]
    fn reduce_is_idempotent_and_preserves_inverse(letters in prop::collection::vec((0usize..3, prop::bool::ANY), 0..30)) {
        let w = Word::from_pairs(&letters.iter().map(|(g, s)| (*g, if *s { 1 } else { -1 })).collect::<Vec<_>>());
        let r = w.free_reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
        prop_assert_eq!(scale_word(&w, 2).free_reduce(), scale_word(&r, 2).free_reduce());
    }
}
