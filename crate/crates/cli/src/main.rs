//! Command-line front end: verification, single fillings, experiments,
//! central powers and the identity transcript.
//!
//! Exit codes: 0 when every check passed, 1 on a failed check or bad
//! input, 2 when a search limit was hit before an answer was found.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nilfill::certificate::{appendix_steps, Checker};
use nilfill::fillers::{
    bfs_exact_fill, doubling_fill, kfold_shuffle_fill, quotient_example, BfsLimits, DoublingBase, Mainscale,
    MainscaleConfig, StandardFiller,
};
use nilfill::harness::{load_presentation, run_experiment, ExperimentConfig};
use nilfill::presentations::{central_power_presentation, commutator_form_transform, verify_relators, Presentation};
use nilfill::words::{scale_word, verify_filling, Filling, Word};
use nilfill::{Algebra, Error};

#[derive(Parser)]
#[command(name = "nilfill", version, about = "Verified fillings of identity words in nilpotent groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an algebra file, or a presentation file or preset name.
    Verify { target: String },
    /// Fill `s_t(word)` and verify the filling.
    Fill {
        #[arg(long)]
        pres: String,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Write the filling as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Longest approximating segment the mainscale filler may use.
        #[arg(long)]
        segment_cap: Option<usize>,
    },
    /// Run an experiment config, writing rows.csv and summary.json.
    Measure {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Central power of a presentation, written as a presentation file.
    CentralPower {
        #[arg(long)]
        base: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        /// Rewrite every relator as a single commutator of commuting words.
        #[arg(long)]
        commutator_form: bool,
    },
    /// Replay the identity transcript of the class-3 example.
    AppendixCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Shuffle,
    Kfold,
    Doubling,
    Bfs,
    Mainscale,
}

/// A failed check that is reported rather than propagated.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

/// Outcome other than success that still produced output.
enum Status {
    Ok,
    Failed,
    Exhausted,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Ok(Status::Exhausted) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            let limit = e.chain().any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_limit));
            ExitCode::from(if limit { 2 } else { 1 })
        }
    }
}

fn run(cmd: Command) -> Result<Status> {
    match cmd {
        Command::Verify { target } => verify(&target),
        Command::Fill { pres, word, method, t, dump, segment_cap } => {
            fill(&pres, &word, method, t, dump, segment_cap)
        }
        Command::Measure { config, out } => measure(&config, out),
        Command::CentralPower { base, n, out, commutator_form } => central_power(&base, n, &out, commutator_form),
        Command::AppendixCheck => appendix_check(),
    }
}

fn verify(target: &str) -> Result<Status> {
    let text = std::fs::read_to_string(target).ok();
    let is_pres = text.as_deref().map_or(true, |t| {
        serde_json::from_str::<serde_json::Value>(t).is_ok_and(|v| v.get("relators").is_some())
    });
    if !is_pres {
        let alg = Algebra::from_json(text.as_deref().expect("read above"))?;
        let report = alg.verify();
        println!("algebra: dimension {}, class {}", alg.dim(), alg.class());
        println!("{report}");
        return Ok(if report.passed() { Status::Ok } else { Status::Failed });
    }
    let pres = load_presentation(target)?;
    println!("{pres}");
    let mut ok = true;
    if let Some(alg) = pres.algebra() {
        let report = alg.verify();
        println!("algebra: dimension {}, class {}, {}", alg.dim(), alg.class(), verdict(report.passed()));
        if !report.passed() {
            println!("{report}");
        }
        ok &= report.passed();
    }
    let report = verify_relators(&pres);
    if report.missing_map {
        println!("relators: no algebra or generator map, nothing to evaluate");
    }
    for (i, v) in &report.nontrivial {
        println!("relator {i} ({}) has log {v:?}", pres.format(&pres.relators()[*i]));
    }
    for g in &report.incompatible {
        println!("generator {} is not in V_1", pres.names()[*g]);
    }
    if !report.missing_map {
        println!("relators: {}", verdict(report.relators_hold()));
        println!("grading compatible: {}", report.compatible());
    }
    ok &= report.relators_hold();
    Ok(if ok { Status::Ok } else { Status::Failed })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// Top-level arguments of `[x_1, ..., x_k]`, or `None` if the text is not a
/// single bracket.
fn bracket_args(text: &str) -> Option<Vec<String>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    let mut args = vec![String::new()];
    let mut depth = 0i32;
    for c in inner.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return None;
        }
        if c == ',' && depth == 0 {
            args.push(String::new());
        } else {
            args.last_mut().expect("nonempty").push(c);
        }
    }
    (depth == 0 && args.len() >= 2 && args.iter().all(|a| !a.is_empty())).then_some(args)
}

fn fill(
    pres_name: &str,
    text: &str,
    method: Method,
    t: usize,
    dump: Option<PathBuf>,
    segment_cap: Option<usize>,
) -> Result<Status> {
    if t == 0 {
        bail!("--t must be positive");
    }
    let pres = load_presentation(pres_name)?;
    let word = pres.word(text)?;
    let target = scale_word(&word, t);
    let start = Instant::now();
    let (filling, fill_pres, note): (Filling, Presentation, String) = match method {
        Method::Shuffle | Method::Kfold => {
            let args = bracket_args(text).ok_or_else(|| anyhow!("{text} is not a bracket [x,y,...]"))?;
            if matches!(method, Method::Shuffle) && args.len() != 2 {
                bail!("shuffle needs a simple commutator [x,y]; use kfold for longer brackets");
            }
            let xs = args.iter().map(|a| pres.word(a)).collect::<nilfill::Result<Vec<Word>>>()?;
            let f = kfold_shuffle_fill(&xs, t, &pres)?;
            let note = format!("main cells {}, auxiliary cells {}", f.main_cells, f.aux_cells);
            (f.filling, pres, note)
        }
        Method::Bfs => match bfs_exact_fill(&target, &pres, BfsLimits::default())? {
            Some(found) => (found.filling, pres, "minimal area".into()),
            None => return Err(Error::LimitsExhausted("no filling within the default search limits".into()).into()),
        },
        Method::Mainscale => {
            let rf = StandardFiller::new(&pres);
            let mut config = MainscaleConfig::default();
            if let Some(cap) = segment_cap {
                config.segment_cap = cap;
            }
            let ms = Mainscale::new(&pres, &rf, config)?;
            let (f, ledger) = ms.fill(&target)?;
            let note = format!(
                "predicted bound {}, pentagons per scale {:?}",
                ledger.predicted_bound,
                ledger.scales.iter().map(|s| s.pentagons).collect::<Vec<_>>()
            );
            drop(ms);
            (f, pres, note)
        }
        Method::Doubling => {
            if !t.is_power_of_two() {
                bail!("doubling needs --t a power of two");
            }
            let ex = quotient_example()?;
            if ex.quotient.names() != pres.names() || ex.quotient.relators() != pres.relators() {
                bail!("doubling is available for the sapir_quotient preset");
            }
            if word.free_reduce() != ex.word.free_reduce() {
                bail!("doubling fills the quotient relator {}", ex.quotient.format(&ex.word));
            }
            let rf = StandardFiller::new(&ex.ambient);
            let base = DoublingBase::new(&ex.ambient, ex.word.clone(), ex.seed.clone(), &rf)?;
            let (f, ledger) = doubling_fill(&base, t.trailing_zeros(), &ex.quotient)?;
            let note = format!("ledger totals {:?}", ledger.totals);
            (f, ex.quotient, note)
        }
    };
    let ms = start.elapsed().as_millis();
    let ok = verify_filling(&target, &filling, &fill_pres)?;
    println!("word length {}, area {}, verified {}, {} ms", target.len(), filling.area(), verdict(ok), ms);
    println!("{note}");
    if let Some(path) = dump {
        let json = serde_json::to_string_pretty(&filling.to_file(fill_pres.names()))?;
        std::fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if ok { Status::Ok } else { Status::Failed })
}

fn measure(config: &PathBuf, out: Option<PathBuf>) -> Result<Status> {
    let text = std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text).context("parsing experiment config")?;
    let dir = out
        .or_else(|| cfg.output.as_ref().map(PathBuf::from))
        .ok_or_else(|| anyhow!("no output directory: pass --out or set \"output\""))?;
    let report = run_experiment(&cfg)?;
    report.write(&dir)?;
    for s in &report.series {
        let slope = |f: Option<nilfill::harness::Fit>| f.map_or("-".to_string(), |f| format!("{:.4}", f.slope));
        println!(
            "{} [{}]: {} points, slope {} (top half {})",
            s.word_text,
            s.filler.name(),
            s.points,
            slope(s.full),
            slope(s.top_half)
        );
    }
    println!("{} rows, {} errors, written to {}", report.rows.len(), report.errors, dir.display());
    let failed: Vec<_> = report.rows.iter().filter(|r| r.error.is_some()).collect();
    for r in &failed {
        eprintln!("word {} t={} {}: {}", r.word, r.t, r.filler.name(), r.error.as_deref().unwrap_or(""));
    }
    Ok(if failed.is_empty() {
        Status::Ok
    } else if failed.iter().all(|r| r.limits_exhausted) {
        Status::Exhausted
    } else {
        Status::Failed
    })
}

fn central_power(base: &str, n: usize, out: &PathBuf, commutator_form: bool) -> Result<Status> {
    let base = load_presentation(base)?;
    let cp = central_power_presentation(&base, n)?;
    let pres = if commutator_form {
        let tr = commutator_form_transform(&cp)?;
        for (r, f) in cp.presentation.relators().iter().zip(&tr.witnesses) {
            let ok = verify_filling(r, f, &tr.presentation)?;
            if !ok {
                return Err(Failed(format!("witness for {} failed", cp.presentation.format(r))).into());
            }
        }
        tr.presentation
    } else {
        cp.presentation
    };
    std::fs::write(out, pres.to_json() + "\n").with_context(|| format!("writing {}", out.display()))?;
    println!("{} generators, {} relators, written to {}", pres.rank(), pres.relators().len(), out.display());
    let report = verify_relators(&pres);
    println!("relators: {}", verdict(report.passed()));
    Ok(if report.passed() { Status::Ok } else { Status::Failed })
}

fn appendix_check() -> Result<Status> {
    let steps = appendix_steps();
    let mut checker = Checker::new();
    let mut failed = 0;
    for step in &steps {
        let start = Instant::now();
        let check = checker.check(step);
        let us = start.elapsed().as_micros();
        if check.passed {
            println!("pass {:<24} {:>8} us", step.id, us);
        } else {
            failed += 1;
            println!("FAIL {:<24} {:>8} us  {}", step.id, us, check.failure.as_deref().unwrap_or(""));
            for (name, value) in &check.residual {
                println!("       residual {name} = {value}");
            }
        }
    }
    println!("{} steps, {} passed, {} failed", steps.len(), steps.len() - failed, failed);
    Ok(if failed == 0 { Status::Ok } else { Status::Failed })
}
