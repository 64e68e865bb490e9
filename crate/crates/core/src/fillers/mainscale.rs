//! Dyadic filling of a null-homotopic word.
//!
//! The word is approximated at scales `2^0, ..., 2^k` by words `w_i` whose
//! vertices are lattice projections of its prefixes. Consecutive
//! approximations bound an annulus made of `2^{k-(i+1)}` pentagons. Each
//! pentagon is short once unscaled; it is filled there and the filling is
//! rescaled through per-relator fillers.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::bfs::{best_first_fill, bfs_exact_fill, canonical, BfsLimits};
use super::relator::{rescale_filling, rescaled_cost, RelatorFiller};
use super::tokens::LoopLibrary;
use crate::algebra::LieVector;
use crate::error::{Error, Result};
use crate::group::{scale_element, GroupElement, LatticeBasis};
use crate::presentations::Presentation;
use crate::words::{scale_word, verify_filling, Filling, Letter, Rewriter, Word};
use crate::Q;

/// Shortest words for all lattice elements of word length at most `radius`.
pub struct CayleyBall {
    /// Elements in order of word length.
    elements: Vec<(GroupElement<Q>, Word)>,
    index: HashMap<LieVector<Q>, usize>,
    radius: usize,
}

impl CayleyBall {
    pub fn new(generators: &[GroupElement<Q>], radius: usize) -> Result<Self> {
        let first = generators.first().ok_or_else(|| Error::Input("no generators".into()))?;
        let mut letters = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            letters.push((Letter::new(i, 1), g.clone()));
            letters.push((Letter::new(i, -1), g.invert()));
        }
        let id = GroupElement::identity(first.algebra());
        let mut index = HashMap::new();
        index.insert(id.log().clone(), 0);
        let mut elements = vec![(id, Word::empty())];
        let mut start = 0;
        for _ in 0..radius {
            let end = elements.len();
            for e in start..end {
                for (l, g) in &letters {
                    let (x, w) = &elements[e];
                    // never undo the last letter
                    if w.0.last() == Some(&l.inverse()) {
                        continue;
                    }
                    let y = x.mul_unchecked(g);
                    if index.contains_key(y.log()) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.0.push(*l);
                    index.insert(y.log().clone(), elements.len());
                    elements.push((y, v));
                }
            }
            start = end;
        }
        Ok(CayleyBall { elements, index, radius })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// A shortest word for `g`, if its length is at most the radius.
    pub fn shortest(&self, g: &GroupElement<Q>) -> Option<&Word> {
        self.index.get(g.log()).map(|&i| &self.elements[i].1)
    }

    /// A shortest word for `g` of length at most `min(cap, 2·radius)`, by
    /// meeting in the middle.
    pub fn shortest_within(&self, g: &GroupElement<Q>, cap: usize) -> Option<Word> {
        if let Some(w) = self.shortest(g) {
            return (w.len() <= cap).then(|| w.clone());
        }
        let mut best: Option<Word> = None;
        for (x, u) in &self.elements {
            let bound = best.as_ref().map_or(cap + 1, Word::len);
            // elements come in order of length
            if u.len() >= bound {
                break;
            }
            if let Some(v) = self.shortest(&x.invert().mul_unchecked(g)) {
                if u.len() + v.len() < bound {
                    best = Some(u.concat(v));
                }
            }
        }
        best
    }
}

/// Bounded filler for short loops, memoized up to conjugation and
/// inversion. Exact search runs first; a best-first search takes over when
/// its limits are exhausted.
pub struct PentagonFiller<'a> {
    pres: &'a Presentation,
    exact: BfsLimits,
    fallback: BfsLimits,
    memo: Mutex<LoopLibrary>,
    /// Canonical loops the searches gave up on.
    failed: Mutex<HashMap<Word, String>>,
}

impl<'a> PentagonFiller<'a> {
    pub fn new(pres: &'a Presentation) -> Self {
        let exact = BfsLimits { max_area: 24, max_len: 48, max_nodes: 50_000 };
        let fallback = BfsLimits { max_area: 400, max_len: 64, max_nodes: 400_000 };
        PentagonFiller::with_limits(pres, exact, fallback)
    }

    pub fn with_limits(pres: &'a Presentation, exact: BfsLimits, fallback: BfsLimits) -> Self {
        PentagonFiller {
            pres,
            exact,
            fallback,
            memo: Mutex::new(LoopLibrary::default()),
            failed: Mutex::new(HashMap::new()),
        }
    }

    /// Number of distinct loops filled so far.
    pub fn cached(&self) -> usize {
        self.memo.lock().expect("memo").len()
    }

    pub fn fill(&self, w: &Word) -> Result<Filling> {
        let w = w.free_reduce();
        if let Some(f) = self.memo.lock().expect("memo").fill(&w) {
            return Ok(f);
        }
        let key = canonical(&w).0;
        if let Some(e) = self.failed.lock().expect("failures").get(&key) {
            return Err(Error::LimitsExhausted(e.clone()));
        }
        let f = match bfs_exact_fill(&w, self.pres, self.exact) {
            Ok(Some(b)) => b.filling,
            Ok(None) | Err(Error::LimitsExhausted(_)) => match best_first_fill(&w, self.pres, self.fallback) {
                Ok(f) => f,
                Err(Error::LimitsExhausted(e)) => {
                    let e = format!("pentagon {}: {e}", self.pres.format(&w));
                    self.failed.lock().expect("failures").insert(key, e.clone());
                    return Err(Error::LimitsExhausted(e));
                }
                Err(e) => return Err(e),
            },
            Err(e) => return Err(e),
        };
        let mut memo = self.memo.lock().expect("memo");
        // first writer wins
        if let Some(g) = memo.fill(&w) {
            return Ok(g);
        }
        memo.add(&w, f.clone());
        Ok(f)
    }
}

/// Limits for [`Mainscale`].
#[derive(Clone, Copy, Debug)]
pub struct MainscaleConfig {
    /// Largest allowed length of an unscaled segment or connector.
    pub segment_cap: usize,
    /// Radius of the precomputed Cayley ball; segments up to twice this
    /// are found by meeting in the middle. Raised to `⌈segment_cap / 2⌉`
    /// so that every segment within the cap is reachable.
    pub ball_radius: usize,
}

impl Default for MainscaleConfig {
    fn default() -> Self {
        MainscaleConfig { segment_cap: 10, ball_radius: 5 }
    }
}

/// Cells spent on the annulus between `w_scale` and `w_{scale+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleRecord {
    pub scale: u32,
    pub pentagons: usize,
    pub cells: u64,
    /// Largest unscaled pentagon filling at this scale.
    pub max_base_area: usize,
    /// `f(2^scale)`: the largest relator cost among relators used.
    pub relator_cost: u64,
}

/// Area accounting of one mainscale filling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AreaLedger {
    pub word_len: usize,
    /// `k` with `2^k` the padded length.
    pub padded_exponent: u32,
    pub scales: Vec<ScaleRecord>,
    /// Cells between `w` and `w_0`; zero because `w_0` is `w` itself.
    pub scale0_cells: u64,
    pub total: u64,
    /// Longest unscaled segment or connector.
    pub max_segment: usize,
    /// Largest unscaled pentagon filling (`c_6`).
    pub max_base_area: usize,
    pub predicted_bound: u128,
}

impl AreaLedger {
    /// Rows `scale,pentagon_count,cells,cumulative`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale,pentagon_count,cells,cumulative\n");
        let mut cum = self.scale0_cells;
        for s in &self.scales {
            cum += s.cells;
            out.push_str(&format!("{},{},{},{}\n", s.scale, s.pentagons, s.cells, cum));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "total": self.total,
            "predicted_bound": self.predicted_bound.to_string(),
            "constants": {
                "c": 0,
                "c6": self.max_base_area,
                "max_segment": self.max_segment,
            },
            "word_len": self.word_len,
            "padded_exponent": self.padded_exponent,
            "scales": self.scales,
        })
    }
}

/// `c·n + Σ_{i<k} c_6 · 2^{k-(i+1)} · f(2^i)` with `k = ⌈log₂ n⌉`.
pub fn mainscale_bound(n: u64, f: &dyn Fn(u64) -> u64, c: u64, c6: u64) -> u128 {
    if n == 0 {
        return 0;
    }
    let k = n.next_power_of_two().trailing_zeros();
    let mut total = c as u128 * n as u128;
    for i in 0..k {
        total += c6 as u128 * (1u128 << (k - i - 1)) * f(1 << i) as u128;
    }
    total
}

/// The dyadic filler for one presentation.
pub struct Mainscale<'a> {
    pres: &'a Presentation,
    relator_filler: &'a dyn RelatorFiller,
    basis: LatticeBasis,
    ball: CayleyBall,
    far: Mutex<HashMap<LieVector<Q>, Option<Word>>>,
    pentagons: PentagonFiller<'a>,
    config: MainscaleConfig,
}

/// One pentagon: annulus scale, index and its unscaled boundary pieces.
struct Pentagon {
    scale: u32,
    top: Word,
    right: Word,
    bottom: Word,
    left: Word,
}

impl Pentagon {
    /// `top · right · s_2(bottom)⁻¹ · left⁻¹`, unscaled.
    fn word(&self) -> Word {
        self.top.concat(&self.right).concat(&scale_word(&self.bottom, 2).inverse()).concat(&self.left.inverse())
    }
}

impl<'a> Mainscale<'a> {
    pub fn new(pres: &'a Presentation, relator_filler: &'a dyn RelatorFiller, config: MainscaleConfig) -> Result<Self> {
        if !pres.is_grading_compatible() {
            return Err(Error::Hypothesis("generators must map into exp V_1".into()));
        }
        let gens = pres.generators()?;
        let basis = LatticeBasis::new(gens.clone())?;
        let radius = config.ball_radius.max(config.segment_cap.div_ceil(2)).min(config.segment_cap);
        let ball = CayleyBall::new(&gens, radius)?;
        Ok(Mainscale {
            pres,
            relator_filler,
            basis,
            ball,
            far: Mutex::new(HashMap::new()),
            pentagons: PentagonFiller::new(pres),
            config,
        })
    }

    pub fn pentagon_filler(&self) -> &PentagonFiller<'a> {
        &self.pentagons
    }

    /// Builds and verifies the filling.
    pub fn fill(&self, w: &Word) -> Result<(Filling, AreaLedger)> {
        let (f, ledger) = self.run(w, true)?;
        let f = f.expect("explicit run");
        if !verify_filling(w, &f, self.pres)? {
            return Err(Error::BadFilling("mainscale filling failed verification".into()));
        }
        Ok((f, ledger))
    }

    /// The ledger alone. Pentagon fillings are built and verified unscaled;
    /// rescaled areas come from the relator costs.
    pub fn ledger(&self, w: &Word) -> Result<AreaLedger> {
        Ok(self.run(w, false)?.1)
    }

    fn segment(&self, g: &GroupElement<Q>, scale: u32) -> Result<Word> {
        if let Some(w) = self.ball.shortest(g) {
            return Ok(w.clone());
        }
        let cap = self.config.segment_cap;
        let cached = self.far.lock().expect("segments").get(g.log()).cloned();
        let found = match cached {
            Some(found) => found,
            None => {
                let found = self.ball.shortest_within(g, cap);
                self.far.lock().expect("segments").insert(g.log().clone(), found.clone());
                found
            }
        };
        found.ok_or(Error::SegmentTooLong { scale, length: cap + 1, cap })
    }

    fn pentagons(&self, w: &Word) -> Result<(u32, Vec<Pentagon>)> {
        let n = w.len();
        let k = n.next_power_of_two().trailing_zeros();
        let gens = self.pres.generators()?;
        let alg = self.basis.algebra().clone();
        let mut prefix = vec![GroupElement::identity(&alg)];
        for l in &w.0 {
            let g = if l.sign() > 0 { gens[l.gen()].clone() } else { gens[l.gen()].invert() };
            let next = prefix.last().expect("nonempty").mul_unchecked(&g);
            prefix.push(next);
        }
        if !prefix[n].is_identity() {
            return Err(Error::Hypothesis("word is not trivial in the group".into()));
        }
        // unscaled vertices of w_i, sampled at ⌊j n / 2^{k-i}⌋
        let mut verts: Vec<Vec<GroupElement<Q>>> = Vec::new();
        for i in 0..=k {
            let count = 1usize << (k - i);
            let down = Q::new(One::one(), (1u64 << i).into());
            let mut row = Vec::with_capacity(count + 1);
            for j in 0..=count {
                let m = j * n / count;
                row.push(if i == 0 { prefix[m].clone() } else { self.basis.round(&scale_element(&down, &prefix[m])?) });
            }
            verts.push(row);
        }
        // segments of w_i, unscaled; w_0 is w itself
        let mut segs: Vec<Vec<Word>> = Vec::new();
        for (i, row) in verts.iter().enumerate() {
            let count = row.len() - 1;
            let mut s = Vec::with_capacity(count);
            for j in 0..count {
                if i == 0 {
                    let (a, b) = (j * n / count, (j + 1) * n / count);
                    s.push(Word(w.0[a..b].to_vec()));
                } else {
                    s.push(self.segment(&row[j].invert().mul_unchecked(&row[j + 1]), i as u32)?);
                }
            }
            segs.push(s);
        }
        let two = Q::from_integer(2.into());
        let mut out = Vec::new();
        for i in 0..k as usize {
            let half = segs[i + 1].len();
            let mut conn = Vec::with_capacity(half + 1);
            for j in 0..=half {
                let up = scale_element(&two, &verts[i + 1][j])?;
                conn.push(self.segment(&verts[i][2 * j].invert().mul_unchecked(&up), i as u32)?);
            }
            for j in 0..half {
                out.push(Pentagon {
                    scale: i as u32,
                    top: segs[i][2 * j].concat(&segs[i][2 * j + 1]),
                    right: conn[j + 1].clone(),
                    bottom: segs[i + 1][j].clone(),
                    left: conn[j].clone(),
                });
            }
        }
        Ok((k, out))
    }

    fn run(&self, w: &Word, explicit: bool) -> Result<(Option<Filling>, AreaLedger)> {
        let n = w.len();
        if n == 0 {
            let ledger = AreaLedger {
                word_len: 0,
                padded_exponent: 0,
                scales: Vec::new(),
                scale0_cells: 0,
                total: 0,
                max_segment: 0,
                max_base_area: 0,
                predicted_bound: 0,
            };
            return Ok((explicit.then(Filling::new), ledger));
        }
        let (k, pentagons) = self.pentagons(w)?;
        let max_segment = pentagons
            .iter()
            .flat_map(|p| [p.right.len(), p.bottom.len(), p.left.len()])
            .chain(pentagons.iter().filter(|p| p.scale > 0).map(|p| p.top.len()))
            .max()
            .unwrap_or(0);
        let words: Vec<Word> = pentagons.iter().map(Pentagon::word).collect();
        let base: Vec<Filling> = words.par_iter().map(|p| self.pentagons.fill(p)).collect::<Result<_>>()?;

        let relators = self.pres.relators();
        let mut scales: Vec<ScaleRecord> = (0..k)
            .map(|i| ScaleRecord { scale: i, pentagons: 0, cells: 0, max_base_area: 0, relator_cost: 0 })
            .collect();
        let mut used: Vec<Vec<bool>> = vec![vec![false; relators.len()]; k as usize];
        let costs: Vec<u64> = pentagons
            .par_iter()
            .zip(&base)
            .map(|(p, f)| match p.scale {
                0 => Ok(f.area() as u64),
                s => Ok(rescaled_cost(f, 1 << s, self.relator_filler)? as u64),
            })
            .collect::<Result<_>>()?;
        for ((p, f), c) in pentagons.iter().zip(&base).zip(&costs) {
            let rec = &mut scales[p.scale as usize];
            rec.pentagons += 1;
            rec.cells += c;
            rec.max_base_area = rec.max_base_area.max(f.area());
            for cell in &f.cells {
                used[p.scale as usize][cell.relator] = true;
            }
        }
        for (rec, used) in scales.iter_mut().zip(&used) {
            let t = 1usize << rec.scale;
            let mut worst = 0;
            for (r, _) in used.iter().enumerate().filter(|(_, u)| **u) {
                worst = worst.max(self.relator_filler.cost(r, t)? as u64);
            }
            rec.relator_cost = worst;
        }
        let max_base_area = scales.iter().map(|s| s.max_base_area).max().unwrap_or(0);
        let f_at: HashMap<u64, u64> = scales.iter().map(|s| (1u64 << s.scale, s.relator_cost)).collect();
        let predicted_bound = mainscale_bound(n as u64, &|t| f_at.get(&t).copied().unwrap_or(0), 0, max_base_area as u64);
        let ledger = AreaLedger {
            word_len: n,
            padded_exponent: k,
            total: scales.iter().map(|s| s.cells).sum(),
            scales,
            scale0_cells: 0,
            max_segment,
            max_base_area,
            predicted_bound,
        };
        if !explicit {
            return Ok((None, ledger));
        }

        // Rewrite w_i into w_{i+1} pentagon by pentagon. Before pentagon j
        // the word reads Y_0 ... Y_{j-1} · D_j⁻¹ · X_j X_{j+1} ..., where X
        // are pairs of segments of w_i, Y segments of w_{i+1} and D the
        // scaled connectors.
        let mut rw = Rewriter::new(w.clone(), relators);
        let mut pos = 0;
        for (idx, (p, f)) in pentagons.iter().zip(&base).enumerate() {
            let t = 1usize << p.scale;
            if idx > 0 && pentagons[idx - 1].scale != p.scale {
                pos = 0;
            }
            let x = scale_word(&p.top, t);
            let d_in = scale_word(&p.left, t);
            let d_out = scale_word(&p.right, t);
            let y = scale_word(&p.bottom, 2 * t);
            let scaled = if t == 1 { f.clone() } else { rescale_filling(f, t, self.relator_filler)? };
            // D⁻¹ X D' Y⁻¹ = D⁻¹ (X D' Y⁻¹ D⁻¹) D
            let loop_filling = scaled.conjugated(&d_in.inverse());
            let new = y.concat(&d_out.inverse());
            rw.replace_with_filling(pos, d_in.len() + x.len(), &new, loop_filling);
            pos += y.len();
        }
        Ok((Some(rw.finish()?), ledger))
    }
}

/// [`Mainscale::fill`] with a fresh pentagon cache.
pub fn mainscale_fill(
    w: &Word,
    pres: &Presentation,
    relator_filler: &dyn RelatorFiller,
    config: MainscaleConfig,
) -> Result<(Filling, AreaLedger)> {
    Mainscale::new(pres, relator_filler, config)?.fill(w)
}
