//! Experiments: fill families of scaled words, record verified areas and
//! fit log–log exponents.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fillers::{
    bfs_exact_fill, kfold_shuffle_fill, BfsLimits, Mainscale, MainscaleConfig, RelatorFiller, StandardFiller,
};
use crate::presentations::{builtin_presentation, Presentation};
use crate::words::{scale_word, verify_filling, Filling, Word};

/// A builtin name or a path to a presentation JSON file.
pub fn load_presentation(spec: &str) -> Result<Presentation> {
    match builtin_presentation(spec) {
        Ok(p) => Ok(p),
        Err(Error::UnknownPreset(_)) if Path::new(spec).is_file() => {
            let text = std::fs::read_to_string(spec).map_err(|e| Error::Input(format!("{spec}: {e}")))?;
            Presentation::from_json(&text)
        }
        Err(e) => Err(e),
    }
}

/// Base words; each is scaled by every `t` of the experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WordFamily {
    /// The presentation's relators, or the listed indices.
    RelatorScaling {
        #[serde(default)]
        relators: Option<Vec<usize>>,
    },
    /// `[x, y]` for words `x`, `y`; scaled it is `[s_t(x), s_t(y)]`.
    CommutatorPower { x: String, y: String },
    /// Words given inline or one per line in a file.
    Custom {
        #[serde(default)]
        words: Vec<String>,
        #[serde(default)]
        file: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FillerKind {
    /// Per-relator shuffle, k-fold or exact search, whichever applies.
    Standard,
    Shuffle,
    Kfold,
    Bfs,
    Mainscale,
}

impl FillerKind {
    pub fn name(self) -> &'static str {
        match self {
            FillerKind::Standard => "standard",
            FillerKind::Shuffle => "shuffle",
            FillerKind::Kfold => "kfold",
            FillerKind::Bfs => "bfs",
            FillerKind::Mainscale => "mainscale",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    pub bfs: BfsLimits,
    pub segment_cap: usize,
    pub ball_radius: usize,
    /// Rows not started within this many seconds of the run become error
    /// rows.
    pub time_budget_secs: Option<u64>,
}

impl Default for Limits {
    fn default() -> Self {
        let m = MainscaleConfig::default();
        Limits { bfs: BfsLimits::default(), segment_cap: m.segment_cap, ball_radius: m.ball_radius, time_budget_secs: None }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub presentation: String,
    pub family: WordFamily,
    pub scales: Vec<usize>,
    pub fillers: Vec<FillerKind>,
    /// Fillers for particular base words, by index, replacing `fillers`.
    #[serde(default)]
    pub word_fillers: BTreeMap<usize, Vec<FillerKind>>,
    #[serde(default)]
    pub limits: Limits,
    /// Directory for `rows.csv` and `summary.json`; the CLI's `--out`
    /// overrides it.
    #[serde(default)]
    pub output: Option<String>,
    /// Recorded in the summary. Every filler is deterministic, so the seed
    /// does not change any row.
    #[serde(default)]
    pub seed: u64,
    /// Wall time in the `ms` column; with `false` it is written as 0 and
    /// the CSV is byte-identical across runs.
    #[serde(default = "default_true")]
    pub record_time: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scales.is_empty() || self.scales[0] == 0 || self.scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("scales must be positive and increasing".into()));
        }
        if self.fillers.is_empty() || self.word_fillers.values().any(Vec::is_empty) {
            return Err(Error::Input("no fillers selected".into()));
        }
        Ok(())
    }
}

/// One filled word. `area` is `None` when the filler failed; the reason
/// is in `error`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    pub word: usize,
    pub t: usize,
    pub word_len: usize,
    pub filler: FillerKind,
    pub area: Option<u64>,
    pub bound: Option<u128>,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// The error came from a search or time limit rather than a failed
    /// check.
    #[serde(skip)]
    pub limits_exhausted: bool,
    /// Largest unscaled pentagon filling and longest segment, for
    /// mainscale rows.
    #[serde(skip)]
    pub constants: Option<(usize, usize)>,
}

/// Least-squares fit of `log y = slope · log x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn fit_exponent(points: &[(f64, f64)]) -> Result<Fit> {
    if points.iter().any(|(x, y)| *x <= 0.0 || *y <= 0.0 || !x.is_finite() || !y.is_finite()) {
        return Err(Error::Input("fit needs positive finite points".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if logs.len() < 2 || sxx == 0.0 {
        return Err(Error::Input("fit needs at least two distinct x".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = logs.iter().map(|p| (p.1 - slope * p.0 - intercept).abs()).fold(0.0, f64::max);
    Ok(Fit { slope, intercept, max_residual })
}

/// Fit over the upper half of the points sorted by `x`.
pub fn fit_top_half(points: &[(f64, f64)]) -> Result<Fit> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    fit_exponent(&sorted[sorted.len() / 2..])
}

/// Fits for one (word, filler) series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesSummary {
    pub word: usize,
    pub word_text: String,
    pub filler: FillerKind,
    pub points: usize,
    pub full: Option<Fit>,
    pub top_half: Option<Fit>,
    /// Mainscale constants: largest unscaled pentagon area and longest
    /// segment over the series.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c6: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_segment: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub series: Vec<SeriesSummary>,
    pub errors: usize,
}

impl ExperimentReport {
    /// Columns `t,word_len,filler,area,bound,ms`; failed rows leave `area`
    /// and `bound` empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,word_len,filler,area,bound,ms\n");
        for r in &self.rows {
            let area = r.area.map(|a| a.to_string()).unwrap_or_default();
            let bound = r.bound.map(|b| b.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{},{}\n", r.t, r.word_len, r.filler.name(), area, bound, r.ms));
        }
        out
    }

    /// Writes `rows.csv` and `summary.json` into `dir`, creating it.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("rows.csv"), self.to_csv())?;
        let summary = serde_json::to_string_pretty(&self.summary_json())?;
        std::fs::write(dir.join("summary.json"), summary + "\n")?;
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "presentation": self.config.presentation,
            "seed": self.config.seed,
            "rows": self.rows.len(),
            "errors": self.errors,
            "failed_rows": self.rows.iter().filter(|r| r.error.is_some()).map(|r| serde_json::json!({
                "word": r.word, "t": r.t, "filler": r.filler.name(), "error": r.error,
            })).collect::<Vec<_>>(),
            "series": self.series,
        })
    }
}

struct Job {
    word: usize,
    t: usize,
    filler: FillerKind,
}

/// Runs every (word, t, filler) combination. Rows are computed in parallel
/// and sorted before they are returned.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let pres = load_presentation(&cfg.presentation)?;
    let (words, relator_of) = base_words(&cfg.family, &pres)?;
    // relators are trivial by definition; other families are checked
    let checked = if matches!(cfg.family, WordFamily::RelatorScaling { .. }) { &words[..0] } else { &words[..] };
    for w in checked {
        let g = pres.evaluate(w)?;
        if !g.is_identity() {
            return Err(Error::Input(format!("{} evaluates to {g}, not the identity", pres.format(w))));
        }
    }
    let rf = StandardFiller::with_limits(&pres, cfg.limits.bfs);
    let fillers_for = |i: usize| cfg.word_fillers.get(&i).unwrap_or(&cfg.fillers);
    let mainscale = if (0..words.len()).any(|i| fillers_for(i).contains(&FillerKind::Mainscale)) {
        let mc = MainscaleConfig { segment_cap: cfg.limits.segment_cap, ball_radius: cfg.limits.ball_radius };
        Some(Mainscale::new(&pres, &rf, mc)?)
    } else {
        None
    };
    let mut jobs = Vec::new();
    for word in 0..words.len() {
        for &t in &cfg.scales {
            for &filler in fillers_for(word) {
                jobs.push(Job { word, t, filler });
            }
        }
    }
    let began = Instant::now();
    let budget = cfg.limits.time_budget_secs.map(std::time::Duration::from_secs);
    let ctx = Context { pres: &pres, rf: &rf, mainscale: mainscale.as_ref(), limits: cfg.limits };
    let mut rows: Vec<ResultRow> = jobs
        .par_iter()
        .map(|job| {
            let w = scale_word(&words[job.word], job.t);
            let start = Instant::now();
            let out = match budget {
                Some(b) if began.elapsed() > b => Err(Error::LimitsExhausted("time budget".into())),
                _ => ctx.fill(&w, relator_of[job.word], job.t, job.filler),
            };
            let ms = if cfg.record_time { start.elapsed().as_millis() as u64 } else { 0 };
            let mut row = ResultRow {
                word: job.word,
                t: job.t,
                word_len: w.len(),
                filler: job.filler,
                area: None,
                bound: None,
                ms,
                error: None,
                limits_exhausted: false,
                constants: None,
            };
            match out {
                Ok(filled) => {
                    let area = filled.filling.area() as u64;
                    row.bound = filled.bound;
                    row.constants = filled.constants;
                    match filled.bound {
                        Some(b) if area as u128 > b => row.error = Some(format!("area {area} exceeds bound {b}")),
                        _ => row.area = Some(area),
                    }
                }
                Err(e) => {
                    row.limits_exhausted = e.is_limit();
                    row.error = Some(e.to_string());
                }
            }
            row
        })
        .collect();
    rows.sort_by_key(|r| (r.word, r.filler, r.t));
    let mut used: Vec<FillerKind> = (0..words.len()).flat_map(|i| fillers_for(i).iter().copied()).collect();
    used.sort();
    used.dedup();
    let series = summarize(&rows, &words, &pres, &used);
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    Ok(ExperimentReport { config: cfg.clone(), rows, series, errors })
}

fn base_words(family: &WordFamily, pres: &Presentation) -> Result<(Vec<Word>, Vec<Option<usize>>)> {
    match family {
        WordFamily::RelatorScaling { relators } => {
            let idx: Vec<usize> = relators.clone().unwrap_or_else(|| (0..pres.relators().len()).collect());
            let mut words = Vec::new();
            for &i in &idx {
                words.push(pres.relators().get(i).ok_or(Error::RelatorIndex(i))?.clone());
            }
            Ok((words, idx.into_iter().map(Some).collect()))
        }
        WordFamily::CommutatorPower { x, y } => {
            let w = Word::commutator(&pres.word(x)?, &pres.word(y)?);
            let r = pres.relator_index(&w);
            Ok((vec![w], vec![r]))
        }
        WordFamily::Custom { words, file } => {
            let mut texts = words.clone();
            if let Some(path) = file {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
                texts.extend(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from));
            }
            let ws = texts.iter().map(|t| pres.word(t)).collect::<Result<Vec<_>>>()?;
            let rs = ws.iter().map(|w| pres.relator_index(w)).collect();
            Ok((ws, rs))
        }
    }
}

struct Filled {
    filling: Filling,
    bound: Option<u128>,
    constants: Option<(usize, usize)>,
}

struct Context<'a> {
    pres: &'a Presentation,
    rf: &'a StandardFiller<'a>,
    mainscale: Option<&'a Mainscale<'a>>,
    limits: Limits,
}

impl Context<'_> {
    fn fill(&self, w: &Word, relator: Option<usize>, t: usize, filler: FillerKind) -> Result<Filled> {
        let need_relator = || {
            relator.ok_or_else(|| Error::Hypothesis(format!("{} needs a scaled relator", filler.name())))
        };
        let filled = match filler {
            FillerKind::Standard => {
                let r = need_relator()?;
                let f = self.rf.fill(r, t)?;
                Filled { bound: Some(self.rf.cost(r, t)? as u128), filling: f, constants: None }
            }
            FillerKind::Shuffle => {
                let r = need_relator()?;
                let (x, y) = self
                    .rf
                    .commutator_form(r)
                    .ok_or_else(|| Error::Hypothesis(format!("relator {r} is not a commutator of commuting letters")))?;
                let f = kfold_shuffle_fill(&[x, y], t, self.pres)?.filling;
                Filled { bound: Some(self.rf.cost(r, t)? as u128), filling: f, constants: None }
            }
            FillerKind::Kfold => {
                let r = need_relator()?;
                let (xs, inv) = self
                    .rf
                    .threefold_form(r)
                    .ok_or_else(|| Error::Hypothesis(format!("relator {r} is not a threefold commutator")))?;
                let f = kfold_shuffle_fill(&xs, t, self.pres)?.filling;
                Filled { filling: if inv { f.inverse() } else { f }, bound: None, constants: None }
            }
            FillerKind::Bfs => match bfs_exact_fill(w, self.pres, self.limits.bfs)? {
                Some(found) => Filled { filling: found.filling, bound: None, constants: None },
                None => {
                    return Err(Error::LimitsExhausted(format!(
                        "no filling of area <= {}",
                        self.limits.bfs.max_area
                    )))
                }
            },
            FillerKind::Mainscale => {
                let ms = self.mainscale.expect("mainscale context");
                let (f, ledger) = ms.fill(w)?;
                Filled {
                    filling: f,
                    bound: Some(ledger.predicted_bound),
                    constants: Some((ledger.max_base_area, ledger.max_segment)),
                }
            }
        };
        // re-verified here whatever the filler already checked
        if !verify_filling(w, &filled.filling, self.pres)? {
            return Err(Error::BadFilling(format!("{} filling failed verification", filler.name())));
        }
        Ok(filled)
    }
}

fn summarize(rows: &[ResultRow], words: &[Word], pres: &Presentation, fillers: &[FillerKind]) -> Vec<SeriesSummary> {
    let mut out = Vec::new();
    for (wi, w) in words.iter().enumerate() {
        for &filler in fillers {
            if !rows.iter().any(|r| r.word == wi && r.filler == filler) {
                continue;
            }
            let series: Vec<&ResultRow> =
                rows.iter().filter(|r| r.word == wi && r.filler == filler && r.area.is_some()).collect();
            let points: Vec<(f64, f64)> =
                series.iter().map(|r| (r.t as f64, r.area.expect("filtered") as f64)).collect();
            let constants: Vec<(usize, usize)> = series.iter().filter_map(|r| r.constants).collect();
            out.push(SeriesSummary {
                word: wi,
                word_text: pres.format(w),
                filler,
                points: points.len(),
                full: fit_exponent(&points).ok(),
                top_half: fit_top_half(&points).ok(),
                c6: constants.iter().map(|c| c.0).max(),
                max_segment: constants.iter().map(|c| c.1).max(),
            });
        }
    }
    out
}
