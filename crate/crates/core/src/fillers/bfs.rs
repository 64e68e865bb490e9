//! Exact minimal-area search by iterative deepening.
//!
//! States are words up to conjugation and inversion, stored as the least
//! rotation of the cyclic reduction of `w` or `w⁻¹`. A move inserts a cyclic
//! permutation of a relator or its inverse next to a letter it cancels. Every
//! minimal van Kampen diagram has a face with an edge on its boundary, and
//! removing that face is such a move, so these moves lose nothing when no
//! length cap applies.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentations::Presentation;
use crate::linalg;
use crate::words::{as_conjugate, verify_filling_with, Filling, Letter, Word};
use crate::Q;

/// Search limits. `max_len` caps intermediate cyclic words; `max_nodes`
/// caps expanded states over the whole search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsLimits {
    pub max_area: usize,
    pub max_len: usize,
    pub max_nodes: u64,
}

impl Default for BfsLimits {
    fn default() -> Self {
        BfsLimits { max_area: 12, max_len: 48, max_nodes: 2_000_000 }
    }
}

/// Evidence for minimality: every area below `area` was refuted.
///
/// If `length_capped` is set, some branch was cut by `max_len`, and the
/// minimum is over fillings whose intermediate words respect the cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsCertificate {
    pub area: usize,
    pub nodes: u64,
    pub length_capped: bool,
}

#[derive(Clone, Debug)]
pub struct BfsFill {
    pub filling: Filling,
    pub certificate: BfsCertificate,
}

/// `(y, q, inverted)` with `x = q y^{±1} q⁻¹` freely and `y` canonical.
pub fn canonical(x: &Word) -> (Word, Word, bool) {
    let red = x.free_reduce();
    let core = red.cyclic_reduce();
    let lo = (red.len() - core.len()) / 2;
    let p = red.prefix(lo);
    if core.is_empty() {
        return (core, p, false);
    }
    let inv = core.inverse();
    let (i, j) = (least_rotation(&core.0), least_rotation(&inv.0));
    let (r1, r2) = (core.rotate(i), inv.rotate(j));
    if r1 <= r2 {
        (r1, p.concat(&core.prefix(i)), false)
    } else {
        (r2, p.concat(&inv.prefix(j)), true)
    }
}

/// Start of the lexicographically least rotation (Booth's algorithm).
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = s[j % n];
        let mut i = f[j - k - 1];
        while i != -1 && sj != s[(k + i as usize + 1) % n] {
            if sj < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && sj != s[k % n] {
            if sj < s[k % n] {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

type Step = (Word, usize, usize);

/// Twice the `[V_1, V_1]` part of the image of a word in the free class-2
/// group, as integers indexed by generator pairs `i < j`. Conjugation
/// invariant on words with zero exponent sums.
pub fn central_image(w: &Word, rank: usize) -> Vec<i64> {
    let mut e = vec![0i64; rank];
    let mut out = vec![0i64; rank * rank.saturating_sub(1) / 2];
    let idx = |i: usize, j: usize| i * (2 * rank - i - 1) / 2 + (j - i - 1);
    for l in &w.0 {
        let (g, s) = (l.gen(), l.sign() as i64);
        for (h, &eh) in e.iter().enumerate() {
            if eh == 0 || h == g {
                continue;
            }
            if h < g {
                out[idx(h, g)] += s * eh;
            } else {
                out[idx(g, h)] -= s * eh;
            }
        }
        e[g] += s;
    }
    out
}

/// Area lower bound from the free class-2 quotient: the central images of
/// the cells sum to that of the word, so when the nonzero relator images
/// are independent their coefficients are forced.
struct CentralBound {
    rank: usize,
    /// Scaled left inverse `denom · (MᵀM)⁻¹ Mᵀ`.
    left: Vec<Vec<i64>>,
    cols: Vec<Vec<i64>>,
    /// Column of each relator, if its image is nonzero.
    col_of: Vec<Option<usize>>,
    denom: i64,
}

impl CentralBound {
    fn new(relators: &[Word], rank: usize) -> Option<Self> {
        let mut cols = Vec::new();
        let mut col_of = Vec::new();
        for r in relators {
            let mut sums = vec![0i64; rank];
            for l in &r.0 {
                sums[l.gen()] += l.sign() as i64;
            }
            if sums.iter().any(|&x| x != 0) {
                return None;
            }
            let z = central_image(r, rank);
            if z.iter().any(|&x| x != 0) {
                col_of.push(Some(cols.len()));
                cols.push(z);
            } else {
                col_of.push(None);
            }
        }
        if cols.is_empty() {
            return None;
        }
        let q = |x: i64| Q::from_integer(x.into());
        let m: Vec<Vec<Q>> = cols.iter().map(|c| c.iter().map(|&x| q(x)).collect()).collect();
        let gram: Vec<Vec<Q>> = m
            .iter()
            .map(|a| m.iter().map(|b| a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)).collect())
            .collect();
        let inv = linalg::inverse(&gram)?;
        let left = linalg::mat_mul(&inv, &m);
        let denom = left.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let left: Option<Vec<Vec<i64>>> = left
            .iter()
            .map(|row| row.iter().map(|x| (x * Q::from_integer(denom.clone())).to_integer().to_i64()).collect())
            .collect();
        Some(CentralBound { rank, left: left?, cols, col_of, denom: denom.to_i64()? })
    }

    /// Lower bound on the area of `w`, or `None` if no filling exists.
    fn bound(&self, w: &Word) -> Option<usize> {
        self.coefficients(w).map(|n| n.iter().map(|x| x.unsigned_abs() as usize).sum())
    }

    /// The forced signed cell count of each nonzero relator image.
    fn coefficients(&self, w: &Word) -> Option<Vec<i64>> {
        let mut sums = vec![0i64; self.rank];
        for l in &w.0 {
            sums[l.gen()] += l.sign() as i64;
        }
        if sums.iter().any(|&x| x != 0) {
            return None;
        }
        let z = central_image(w, self.rank);
        let mut coeffs = Vec::with_capacity(self.cols.len());
        let mut back = vec![0i64; z.len()];
        for (row, col) in self.left.iter().zip(&self.cols) {
            let num: i64 = row.iter().zip(&z).map(|(a, b)| a * b).sum();
            if num % self.denom != 0 {
                return None;
            }
            let n = num / self.denom;
            coeffs.push(n);
            for (b, c) in back.iter_mut().zip(col) {
                *b += n * c;
            }
        }
        (back == z).then_some(coeffs)
    }
}

struct Search {
    variants: Vec<Word>,
    /// Relator index and sign of each variant.
    origin: Vec<(usize, i64)>,
    by_first: HashMap<Letter, Vec<usize>>,
    by_last: HashMap<Letter, Vec<usize>>,
    lmax: usize,
    central: Option<CentralBound>,
    limits: BfsLimits,
    failed: HashMap<Word, usize>,
    nodes: u64,
    capped: bool,
}

impl Search {
    fn new(relators: &[Word], rank: usize, limits: BfsLimits) -> Self {
        let mut seen = HashSet::new();
        let mut variants = Vec::new();
        let mut origin = Vec::new();
        for (ri, r) in relators.iter().enumerate() {
            let rs = r.cyclic_reduce();
            for (z, eps) in [(rs.clone(), 1), (rs.inverse(), -1)] {
                for i in 0..z.len() {
                    let v = z.rotate(i);
                    if seen.insert(v.clone()) {
                        variants.push(v);
                        origin.push((ri, eps));
                    }
                }
            }
        }
        let mut by_first: HashMap<Letter, Vec<usize>> = HashMap::new();
        let mut by_last: HashMap<Letter, Vec<usize>> = HashMap::new();
        for (i, v) in variants.iter().enumerate() {
            by_first.entry(v.0[0]).or_default().push(i);
            by_last.entry(*v.0.last().expect("nonempty")).or_default().push(i);
        }
        let lmax = variants.iter().map(Word::len).max().unwrap_or(1);
        let central = CentralBound::new(relators, rank);
        Search { variants, origin, by_first, by_last, lmax, central, limits, failed: HashMap::new(), nodes: 0, capped: false }
    }

    fn insert(&self, w: &Word, p: usize, vi: usize) -> Word {
        let mut x = w.prefix(p);
        x = x.concat(&self.variants[vi]);
        x.0.extend_from_slice(&w.0[p..]);
        x.free_reduce()
    }

    fn dfs(&mut self, w: &Word, budget: usize) -> Result<Option<Vec<Step>>> {
        if w.is_empty() {
            return Ok(Some(Vec::new()));
        }
        if budget == 0 || w.len().div_ceil(self.lmax) > budget {
            return Ok(None);
        }
        if self.failed.get(w).is_some_and(|&b| b >= budget) {
            return Ok(None);
        }
        // forced coefficients; a cell moves one coordinate by one
        let coeffs = match &self.central {
            Some(c) => match c.coefficients(w) {
                Some(n) => Some(n),
                None => return Ok(None),
            },
            None => None,
        };
        let bound: i64 = coeffs.as_ref().map_or(0, |n| n.iter().map(|x| x.abs()).sum());
        if bound > budget as i64 {
            return Ok(None);
        }
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Error::LimitsExhausted(format!("node limit {} reached", self.limits.max_nodes)));
        }
        let n = w.len();
        let mut seen = HashSet::new();
        let mut children = Vec::new();
        for p in 0..n {
            let before = w.0[(p + n - 1) % n].inverse();
            let after = w.0[p].inverse();
            let cands = self.by_first.get(&before).into_iter().flatten().chain(self.by_last.get(&after).into_iter().flatten());
            for &vi in cands {
                if let (Some(n), Some(c)) = (&coeffs, &self.central) {
                    let (ri, eps) = self.origin[vi];
                    let delta = match c.col_of[ri] {
                        None => 0,
                        Some(k) if n[k] * eps < 0 => -1,
                        Some(_) => 1,
                    };
                    if bound + delta > budget as i64 - 1 {
                        continue;
                    }
                }
                let y = canonical(&self.insert(w, p, vi)).0;
                if y.len() > self.limits.max_len {
                    self.capped = true;
                    continue;
                }
                if seen.insert(y.clone()) {
                    children.push((y, p, vi));
                }
            }
        }
        children.sort_by_key(|c| c.0.len());
        for (y, p, vi) in children {
            if let Some(mut path) = self.dfs(&y, budget - 1)? {
                path.insert(0, (w.clone(), p, vi));
                return Ok(Some(path));
            }
        }
        self.failed.insert(w.clone(), budget);
        Ok(None)
    }

    /// Filling of `x` from a filling `f` of `canonical(x).0`.
    fn lift(x: &Word, f: Filling) -> Filling {
        let (_, q, inv) = canonical(x);
        if inv {
            f.inverse().conjugated(&q)
        } else {
            f.conjugated(&q)
        }
    }

    fn rebuild(&self, path: &[Step], relators: &[Word]) -> Filling {
        let mut f = Filling::new();
        for (w, p, vi) in path.iter().rev() {
            // w = (u c⁻¹ u⁻¹) · (u c v)
            let x = self.insert(w, *p, *vi);
            let u = w.prefix(*p);
            let lw = u.concat(&self.variants[*vi].inverse()).concat(&u.inverse());
            let cell = as_conjugate(&lw, relators).expect("variant is a relator conjugate");
            let mut g = Filling { cells: vec![cell] };
            g.extend(Self::lift(&x, f));
            f = g;
        }
        f
    }
}

/// Minimal-area filling of `w` within `limits`.
///
/// `Ok(None)` means no filling of area at most `max_area` exists (no cap was
/// hit); a search cut short by a cap is reported as
/// [`Error::LimitsExhausted`].
pub fn bfs_exact_fill(w: &Word, pres: &Presentation, limits: BfsLimits) -> Result<Option<BfsFill>> {
    let relators = pres.relators();
    let rank = pres.rank().max(w.rank_hint());
    let mut search = Search::new(relators, rank, limits);
    let start = canonical(w).0;
    if start.is_empty() {
        let certificate = BfsCertificate { area: 0, nodes: 0, length_capped: false };
        return Ok(Some(BfsFill { filling: Filling::new(), certificate }));
    }
    let mut lower = start.len().div_ceil(search.lmax);
    if let Some(c) = &search.central {
        match c.bound(&start) {
            Some(b) => lower = lower.max(b),
            None => return Ok(None),
        }
    }
    // every cell moves one forced coefficient by one, fixing the parity
    let step = match &search.central {
        Some(c) if c.col_of.iter().all(Option::is_some) => 2,
        _ => 1,
    };
    for depth in (lower..=limits.max_area).step_by(step) {
        if let Some(path) = search.dfs(&start, depth)? {
            let filling = Search::lift(w, search.rebuild(&path, relators));
            if !verify_filling_with(w, &filling, relators)? {
                return Err(Error::BadFilling("search filling failed verification".into()));
            }
            let certificate = BfsCertificate { area: depth, nodes: search.nodes, length_capped: search.capped };
            return Ok(Some(BfsFill { filling, certificate }));
        }
    }
    if search.capped {
        return Err(Error::LimitsExhausted(format!(
            "no filling of area <= {} within length {}",
            limits.max_area, limits.max_len
        )));
    }
    Ok(None)
}

const WEIGHT: usize = 4;

/// A filling of `w` found by weighted best-first search, not necessarily
/// minimal. States are expanded in order of `cells + 4·bound`, where the
/// bound is the larger of the length and central lower bounds.
pub fn best_first_fill(w: &Word, pres: &Presentation, limits: BfsLimits) -> Result<Filling> {
    let relators = pres.relators();
    let rank = pres.rank().max(w.rank_hint());
    let mut search = Search::new(relators, rank, limits);
    let start = canonical(w).0;
    let h = |s: &Search, x: &Word| -> Option<usize> {
        let len_bound = x.len().div_ceil(s.lmax);
        match &s.central {
            Some(c) => c.bound(x).map(|b| b.max(len_bound)),
            None => Some(len_bound),
        }
    };
    let h0 = h(&search, &start).ok_or_else(|| Error::Hypothesis("word is not trivial in the central quotient".into()))?;
    // state -> (cells so far, parent step)
    let mut seen: HashMap<Word, (usize, Option<Step>)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    seen.insert(start.clone(), (0, None));
    heap.push(Reverse((WEIGHT * h0, start.len(), start.clone())));
    while let Some(Reverse((_, _, x))) = heap.pop() {
        if x.is_empty() {
            let mut path = Vec::new();
            let mut cur = x;
            while let Some((_, Some(step))) = seen.get(&cur) {
                let prev = step.0.clone();
                path.push(step.clone());
                cur = prev;
            }
            path.reverse();
            let filling = Search::lift(w, search.rebuild(&path, relators));
            if !verify_filling_with(w, &filling, relators)? {
                return Err(Error::BadFilling("search filling failed verification".into()));
            }
            return Ok(filling);
        }
        let g = seen[&x].0;
        if g >= limits.max_area {
            continue;
        }
        search.nodes += 1;
        if seen.len() as u64 > limits.max_nodes {
            return Err(Error::LimitsExhausted(format!("state limit {} reached", limits.max_nodes)));
        }
        let n = x.len();
        for p in 0..n {
            let before = x.0[(p + n - 1) % n].inverse();
            let after = x.0[p].inverse();
            let cands: Vec<usize> = search
                .by_first
                .get(&before)
                .into_iter()
                .flatten()
                .chain(search.by_last.get(&after).into_iter().flatten())
                .copied()
                .collect();
            for vi in cands {
                let y = canonical(&search.insert(&x, p, vi)).0;
                if y.len() > limits.max_len {
                    continue;
                }
                if seen.get(&y).is_some_and(|(gy, _)| *gy <= g + 1) {
                    continue;
                }
                let Some(hy) = h(&search, &y) else { continue };
                seen.insert(y.clone(), (g + 1, Some((x.clone(), p, vi))));
                heap.push(Reverse((g + 1 + WEIGHT * hy, y.len(), y)));
            }
        }
    }
    Err(Error::LimitsExhausted(format!("no filling of area <= {} found", limits.max_area)))
}
