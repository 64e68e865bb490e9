//! Replay of the derivation that the class-3 rank-8 group's relators fill
//! every 3-element commutator. Each step is checked by exact evaluation in
//! the group; steps that claim more (free equality, an automorphism image,
//! a link to an earlier word) are checked for that as well.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{class3_rank8, GradedLieAlgebra, LieVector};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::presentations::{builtin_presentation, Presentation};
use crate::scalar::format_rational;
use crate::words::{Letter, Word};
use crate::Q;

const TRANSCRIPT: &str = include_str!("../data/transcript.json");

/// An automorphism of the class-3 algebra preserving `V_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutomorphismMap {
    /// `x ↦ t_x x` on `a..e`; requires `t_a t_b = t_c t_d` and
    /// `t_b t_c = t_d t_e`.
    Scaling([i64; 5]),
    /// `a ↔ e`, `b ↔ d`, `c ↦ c`.
    Swap,
}

impl AutomorphismMap {
    fn constraints_hold(&self) -> bool {
        match self {
            AutomorphismMap::Scaling([ta, tb, tc, td, te]) => {
                [ta, tb, tc, td, te].iter().all(|t| **t != 0) && ta * tb == tc * td && tb * tc == td * te
            }
            AutomorphismMap::Swap => true,
        }
    }

    /// Images of the basis `a, b, c, d, e, f, g, h`.
    pub fn images(&self) -> Vec<LieVector<Q>> {
        let q = |n: i64| Q::from_integer(n.into());
        let unit = |i: usize, c: Q| LieVector::<Q>::basis(8, i).scaled(&c);
        match self {
            AutomorphismMap::Scaling(t) => {
                let [_, tb, tc, td, _] = *t;
                let mut out: Vec<LieVector<Q>> = (0..5).map(|i| unit(i, q(t[i]))).collect();
                out.push(unit(5, q(tc * td)));
                out.push(unit(6, q(tb * tc)));
                out.push(unit(7, q(tb * tc * td)));
                out
            }
            AutomorphismMap::Swap => {
                let one = Q::one();
                vec![
                    unit(4, one.clone()),
                    unit(3, one.clone()),
                    unit(2, one.clone()),
                    unit(1, one.clone()),
                    unit(0, one.clone()),
                    unit(6, -one.clone()),
                    unit(5, -one.clone()),
                    unit(7, one),
                ]
            }
        }
    }

    /// The image of a word under the induced map on letters.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::new();
        for l in &w.0 {
            match self {
                AutomorphismMap::Scaling(t) => {
                    let n = t[l.gen()] * l.sign() as i64;
                    let sign = if n > 0 { 1 } else { -1 };
                    out.extend(std::iter::repeat(Letter::new(l.gen(), sign)).take(n.unsigned_abs() as usize));
                }
                AutomorphismMap::Swap => out.push(Letter::new([4, 3, 2, 1, 0][l.gen()], l.sign())),
            }
        }
        Word(out)
    }
}

/// True if the linear map with the given basis images preserves brackets.
pub fn is_automorphism(alg: &GradedLieAlgebra<Q>, images: &[LieVector<Q>]) -> bool {
    let apply = |v: &LieVector<Q>| {
        let mut out = LieVector::zero(alg.dim());
        for (c, img) in v.0.iter().zip(images) {
            if !c.is_zero() {
                out = &out + &img.scaled(c);
            }
        }
        out
    };
    (0..alg.dim()).all(|i| {
        (0..alg.dim()).all(|j| {
            let lhs = apply(&alg.basis_bracket(i, j));
            alg.bracket(&images[i], &images[j]).is_ok_and(|rhs| rhs == lhs)
        })
    })
}

/// Why a step should hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Justification {
    /// `left` and `right` are freely equal.
    FreeReduction,
    GroupEvaluation,
    /// `left` is freely the image of `source`'s left side.
    AutomorphismImage { source: String, map: AutomorphismMap },
    /// `right` is `source`'s left side: the next word in a chain.
    PriorStep { source: String },
}

/// One claimed identity `left = right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityStep {
    pub id: String,
    pub left: String,
    pub right: String,
    pub justification: Justification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Deserialize)]
struct TranscriptFile {
    generators: Vec<String>,
    steps: Vec<IdentityStep>,
}

/// The bundled transcript, in order.
pub fn appendix_steps() -> Vec<IdentityStep> {
    let file: TranscriptFile = serde_json::from_str(TRANSCRIPT).expect("bundled transcript parses");
    debug_assert_eq!(file.generators, ["a", "b", "c", "d", "e"]);
    file.steps
}

/// Outcome of checking one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepCheck {
    pub id: String,
    pub passed: bool,
    /// Reason for a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Nonzero log coordinates of `left · right⁻¹` on an evaluation failure.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residual: Vec<(String, String)>,
}

/// Checks steps against the class-3 group, resolving references to
/// steps already seen.
pub struct Checker {
    pres: Presentation,
    seen: HashMap<String, IdentityStep>,
}

impl Default for Checker {
    fn default() -> Self {
        Checker::new()
    }
}

impl Checker {
    pub fn new() -> Self {
        let pres = builtin_presentation("class3_rank8_relators").expect("bundled presentation");
        Checker { pres, seen: HashMap::new() }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn check(&mut self, step: &IdentityStep) -> StepCheck {
        let result = self.check_inner(step);
        self.seen.insert(step.id.clone(), step.clone());
        match result {
            Ok(()) => StepCheck { id: step.id.clone(), passed: true, failure: None, residual: Vec::new() },
            Err((failure, residual)) => StepCheck { id: step.id.clone(), passed: false, failure: Some(failure), residual },
        }
    }

    fn source(&self, id: &str) -> std::result::Result<&IdentityStep, (String, Vec<(String, String)>)> {
        self.seen.get(id).ok_or_else(|| (format!("unknown or later step {id}"), Vec::new()))
    }

    fn check_inner(&self, step: &IdentityStep) -> std::result::Result<(), (String, Vec<(String, String)>)> {
        let parse = |text: &str| self.pres.word(text).map_err(|e| (format!("parse error: {e}"), Vec::new()));
        let left = parse(&step.left)?;
        let right = parse(&step.right)?;
        let eval = |w: &Word| self.pres.evaluate(w).map_err(|e| (format!("evaluation error: {e}"), Vec::new()));
        let (l, r) = (eval(&left)?, eval(&right)?);
        let diff = l.mul_unchecked(&r.invert());
        if !diff.is_identity() {
            return Err(("left and right differ in the group".into(), self.residual(&diff)));
        }
        match &step.justification {
            Justification::GroupEvaluation => Ok(()),
            Justification::FreeReduction => {
                if left.concat(&right.inverse()).free_reduce().is_empty() {
                    Ok(())
                } else {
                    Err(("left and right are not freely equal".into(), Vec::new()))
                }
            }
            Justification::PriorStep { source } => {
                let src = self.source(source)?;
                if parse(&src.left)?.free_reduce() == right.free_reduce() {
                    Ok(())
                } else {
                    Err((format!("right side is not the left side of {source}"), Vec::new()))
                }
            }
            Justification::AutomorphismImage { source, map } => {
                if !map.constraints_hold() {
                    return Err(("automorphism parameters violate the constraints".into(), Vec::new()));
                }
                let alg = self.pres.algebra().expect("class-3 algebra");
                if !is_automorphism(alg, &map.images()) {
                    return Err(("map is not an automorphism".into(), Vec::new()));
                }
                let src = parse(&self.source(source)?.left)?;
                let image = map.apply(&src);
                if image.free_reduce() != left.free_reduce() {
                    return Err((format!("left side is not the image of {source}"), Vec::new()));
                }
                // the induced map on the group sends eval(src) to eval(left)
                let moved = apply_to_element(&map.images(), &eval(&src)?);
                if moved != l {
                    return Err(("image does not match the group automorphism".into(), self.residual(&moved)));
                }
                Ok(())
            }
        }
    }

    fn residual(&self, g: &GroupElement<Q>) -> Vec<(String, String)> {
        let names = ["a", "b", "c", "d", "e", "f", "g", "h"];
        g.log()
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (names[i].to_string(), format_rational(c)))
            .collect()
    }
}

fn apply_to_element(images: &[LieVector<Q>], g: &GroupElement<Q>) -> GroupElement<Q> {
    let mut v = LieVector::zero(g.log().0.len());
    for (c, img) in g.log().0.iter().zip(images) {
        if !c.is_zero() {
            v = &v + &img.scaled(c);
        }
    }
    GroupElement::exp(g.algebra(), v).expect("same algebra")
}

/// Checks one step on its own; references to other steps fail.
pub fn check_step(step: &IdentityStep) -> StepCheck {
    Checker::new().check(step)
}

/// Checks a transcript in order.
pub fn check_transcript(steps: &[IdentityStep]) -> Vec<StepCheck> {
    let mut checker = Checker::new();
    steps.iter().map(|s| checker.check(s)).collect()
}

/// Result of [`hall_witt_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HallWitt {
    /// `[x,[y,z]] = [y,[x,z]]·[z,[y,x]]` holds exactly.
    pub jacobi: bool,
    /// The classical identity with conjugators
    /// `y⁻¹[[y,x⁻¹],z⁻¹]y · z⁻¹[[z,y⁻¹],x⁻¹]z · x⁻¹[[x,z⁻¹],y⁻¹]x = 1`
    /// reduces freely, and its evaluation at `x, y, z` is trivial.
    pub conjugated: bool,
}

impl HallWitt {
    pub fn passed(&self) -> bool {
        self.jacobi && self.conjugated
    }
}

/// The word of the classical Hall–Witt identity on generators `0, 1, 2`.
pub fn hall_witt_word() -> Word {
    let (x, y, z) = (Word::gen(0), Word::gen(1), Word::gen(2));
    let term = |p: &Word, q: &Word, r: &Word| {
        let inner = Word::commutator(&Word::commutator(p, &q.inverse()), &r.inverse());
        p.inverse().concat(&inner).concat(p)
    };
    term(&y, &x, &z).concat(&term(&z, &y, &x)).concat(&term(&x, &z, &y))
}

/// Checks the Jacobi form of the Hall–Witt identity for layer-1 elements of
/// a group of class at most 3, where it holds exactly.
pub fn hall_witt_check(
    alg: &Arc<GradedLieAlgebra<Q>>,
    x: &GroupElement<Q>,
    y: &GroupElement<Q>,
    z: &GroupElement<Q>,
) -> Result<HallWitt> {
    if alg.class() > 3 {
        return Err(Error::Unsupported(format!("class {} > 3", alg.class())));
    }
    for g in [x, y, z] {
        if !Arc::ptr_eq(g.algebra(), alg) && **g.algebra() != **alg {
            return Err(Error::AlgebraMismatch);
        }
        if (0..alg.dim()).any(|i| alg.layer(i) != 1 && !g.log().0[i].is_zero()) {
            return Err(Error::Input(format!("{g} is not in exp V_1")));
        }
    }
    let c = |p: &GroupElement<Q>, q: &GroupElement<Q>| p.commutator(q);
    let lhs = c(x, &c(y, z)?)?;
    let rhs = c(y, &c(x, z)?)?.multiply(&c(z, &c(y, x)?)?)?;
    let word = hall_witt_word();
    let free = word.free_reduce().is_empty();
    let evaluated = crate::words::evaluate_word(&word, &[x.clone(), y.clone(), z.clone()], alg)?.is_identity();
    Ok(HallWitt { jacobi: lhs == rhs, conjugated: free && evaluated })
}

/// The class-3 algebra the transcript lives in.
pub fn appendix_algebra() -> Arc<GradedLieAlgebra<Q>> {
    Arc::new(class3_rank8())
}
