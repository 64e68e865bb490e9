//! Commutator shuffles: `s_t([x,y])` as `t²` conjugates of `[x,y]`, and the
//! k-fold version for left-normed commutators.

use super::tokens::{Commuter, LoopLibrary, Tokens};
use crate::error::{Error, Result};
use crate::presentations::{Presentation, SwapTable};
use crate::words::{scale_word, verify_filling_with, Filling, Rewriter, Word};

/// A shuffle filling with its cells split into the `t^k` commutator cells
/// and the auxiliary cells spent on collecting.
#[derive(Clone, Debug)]
pub struct ShuffleFill {
    pub filling: Filling,
    pub main_cells: usize,
    pub aux_cells: usize,
}

/// Filling of `s_t(x) · (x^t)⁻¹` by commuting swaps.
fn straighten(x: &Word, t: usize, relators: &[Word], table: &SwapTable) -> Result<Filling> {
    if !table.all_commute(&x.0) {
        return Err(Error::Hypothesis(format!("letters of {x} do not pairwise commute via relators")));
    }
    let mut rw = Rewriter::new(scale_word(x, t), relators);
    table.sort_segment(&mut rw, 0, &x.pow(t as i64))?;
    Ok(rw.filling().clone())
}

/// Given a filling `f` of `S · N⁻¹`, a filling of `S⁻¹ · N`.
fn inverse_loop(f: &Filling, s: &Word) -> Filling {
    f.inverse().conjugated(&s.inverse())
}

/// Filling of `s_t(L_j) · (L_j^{t^j})⁻¹` for the left-normed `L_j` of
/// `xs`.
fn collect_level(xs: &[Word], t: usize, table: &SwapTable, c: &mut Commuter<'_>) -> Result<Filling> {
    let relators = c.relators();
    if xs.len() == 1 {
        return straighten(&xs[0], t, relators, table);
    }
    let (head, x) = xs.split_at(xs.len() - 1);
    let a = Word::left_normed(head);
    let b = &x[0];
    let s = scale_word(&a, t);
    let sb = scale_word(b, t);
    let fa = collect_level(head, t, table, c)?;
    let fb = straighten(b, t, relators, table)?;
    let m = t.pow(head.len() as u32);
    let mut tk = Tokens::new(vec![s.clone(), sb.clone(), s.inverse(), sb.inverse()], relators);
    tk.replace(3, vec![b.inverse(); t], inverse_loop(&fb, &sb));
    tk.replace(2, vec![a.inverse(); m], inverse_loop(&fa, &s));
    tk.replace(1, vec![b.clone(); t], fb);
    tk.replace(0, vec![a.clone(); m], fa);
    tk.collect(c, 0, &a, b, m, t)?;
    Ok(tk.loop_filling())
}

/// Fills `s_t([x_1, ..., x_k])` by `t^k` cells of the left-normed relator.
///
/// Needs the relator `[x_1, ..., x_k]`, commuting relators among the letters
/// of each `x_i`, and for `j < k - 1` relators making `L_{j+1}` commute with
/// `L_j` and `x_{j+1}`, where `L_j = [x_1, ..., x_j]`.
pub fn kfold_shuffle_fill(xs: &[Word], t: usize, pres: &Presentation) -> Result<ShuffleFill> {
    if xs.len() < 2 || t == 0 {
        return Err(Error::Input("k-fold shuffle needs k >= 2 and t >= 1".into()));
    }
    let relators = pres.relators();
    let table = SwapTable::new(pres);
    let lib = LoopLibrary::from_relators(relators);
    let mut c = Commuter::new(relators, &lib);
    let target = scale_word(&Word::left_normed(xs), t);

    let (head, x) = xs.split_at(xs.len() - 1);
    let a = Word::left_normed(head);
    let b = &x[0];
    let s = scale_word(&a, t);
    let sb = scale_word(b, t);
    let fa = collect_level(head, t, &table, &mut c)?;
    let fb = straighten(b, t, relators, &table)?;
    let m = t.pow(head.len() as u32);

    let mut tk = Tokens::new(vec![s.clone(), sb.clone(), s.inverse(), sb.inverse()], relators);
    tk.replace(3, vec![b.inverse(); t], inverse_loop(&fb, &sb));
    tk.replace(2, vec![a.inverse(); m], inverse_loop(&fa, &s));
    tk.replace(1, vec![b.clone(); t], fb);
    tk.replace(0, vec![a.clone(); m], fa);
    let aux = tk.area();
    // bubble every A past every B: A^m B^t → B^t A^m
    for i in (0..m).rev() {
        for j in 0..t {
            tk.swap(&mut c, i + j)?;
        }
    }
    let main = tk.area() - aux;
    let filling = tk.finish()?;
    if !verify_filling_with(&target, &filling, relators)? {
        return Err(Error::BadFilling("shuffle filling failed verification".into()));
    }
    Ok(ShuffleFill { filling, main_cells: main, aux_cells: aux })
}

/// Fills `s_t([x, y])` by `t²` conjugates of the relator `[x, y]`, plus
/// swaps straightening `s_t(x)` and `s_t(y)` when they are products.
pub fn shuffle_fill(x: &Word, y: &Word, t: usize, pres: &Presentation) -> Result<Filling> {
    Ok(kfold_shuffle_fill(&[x.clone(), y.clone()], t, pres)?.filling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::builtin_presentation;

    #[test]
    fn commutator_shuffle_is_quadratic() {
        let pres = Presentation::parse(&["a", "b"], &["[a,b]"]).unwrap();
        let (a, b) = (pres.word("a").unwrap(), pres.word("b").unwrap());
        for t in 1..=6 {
            let f = shuffle_fill(&a, &b, t, &pres).unwrap();
            assert_eq!(f.area(), t * t);
        }
    }

    #[test]
    fn products_of_commuting_generators() {
        let pres = builtin_presentation("h5_commutator_form").unwrap();
        let (x, y) = (pres.word("a1b2").unwrap(), pres.word("a2b1").unwrap());
        let r = kfold_shuffle_fill(&[x.clone(), y.clone()], 3, &pres).unwrap();
        assert_eq!(r.main_cells, 9);
        assert!(r.aux_cells > 0);
        let target = scale_word(&Word::commutator(&x, &y), 3);
        assert!(verify_filling_with(&target, &r.filling, pres.relators()).unwrap());
    }

    #[test]
    fn threefold() {
        let pres = Presentation::parse(&["a", "b", "c"], &["[a,b,c]", "[[a,b],a]", "[[a,b],b]"]).unwrap();
        let xs: Vec<Word> = ["a", "b", "c"].iter().map(|s| pres.word(s).unwrap()).collect();
        for t in 1..=3 {
            let r = kfold_shuffle_fill(&xs, t, &pres).unwrap();
            assert_eq!(r.main_cells, t * t * t);
        }
        assert_eq!(kfold_shuffle_fill(&xs, 1, &pres).unwrap().filling.area(), 1);
    }

    #[test]
    fn missing_relator_is_reported() {
        let pres = Presentation::parse(&["a", "b", "c"], &["[a,c]"]).unwrap();
        let (a, b) = (pres.word("a").unwrap(), pres.word("b").unwrap());
        assert!(matches!(shuffle_fill(&a, &b, 2, &pres), Err(Error::Hypothesis(_))));
    }
}
