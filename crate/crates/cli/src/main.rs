//! `cet`: command-line front end for complex evidence theory.
//!
//! Belief objects travel as CBBA JSON documents, series and tables as CSV.
//! Exit status is 0 on success, 1 on a domain error (the error name is
//! printed first) and 2 on a usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use cet_core::entropy::{self, Method};
use cet_core::io::{CbbaDocument, ParseOptions, Precision};
use cet_core::pipeline::{self, Aggregation, ClassifierConfig, Dataset, FocalMode, FusionConfig, SweepConfig};
use cet_core::transform::{self, NegationOptions};
use cet_core::{Cbba64, CetError, Complex64, FocalSet, Frame};

#[derive(Parser)]
#[command(name = "cet", version, about = "Complex evidence theory toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Number formatting for reports and tables.
    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Short)]
    precision: PrecisionArg,
    /// Load CBBA files even when they break the mass invariants.
    #[arg(long, global = true)]
    allow_invalid: bool,
    /// Sum-to-one tolerance for loaded CBBAs.
    #[arg(long, global = true, env = "CET_TOLERANCE")]
    tolerance: Option<f64>,
    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    /// Six significant digits.
    Short,
    /// Round-trip precision.
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FocalArg {
    Singletons,
    ClassVsFrame,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggregationArg {
    Sum,
    Combined,
}

#[derive(Args)]
struct ClassifierArgs {
    /// Dataset CSV with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Name of the class label column.
    #[arg(long, default_value = "label")]
    label: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction of rows held out for testing.
    #[arg(long, default_value_t = 0.3)]
    test_fraction: f64,
    #[arg(long, value_enum, default_value_t = FocalArg::ClassVsFrame)]
    focal_mode: FocalArg,
    #[arg(long, value_enum, default_value_t = AggregationArg::Sum)]
    aggregation: AggregationArg,
}

#[derive(Subcommand)]
enum Command {
    /// Check a CBBA file against the mass invariants.
    Validate { input: PathBuf },
    /// Entropy of a CBBA.
    Entropy {
        input: PathBuf,
        #[arg(long, default_value = "fcb", value_parser = parse_method)]
        method: Method,
    },
    /// Entropy grid over M({e1}) = 1 - x - yi, M(Θ) = x + yi on a 2-element frame.
    EntropySweep {
        #[arg(long, value_delimiter = ',', default_value = "fcb,fcb-discord,fcb-nonspecificity", value_parser = parse_method)]
        method: Vec<Method>,
        /// Grid points per axis; x spans [0, 1] and y spans [-1, 1].
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
    /// Complex pignistic probability.
    Cpbt { input: PathBuf },
    /// Step-by-step redistribution toward the singletons, as long-format CSV.
    CpbtIterate {
        input: PathBuf,
        /// Allocation speed; must exceed the largest focal cardinality.
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Fractal redistribution of every focal set onto its subsets.
    Fcbba { input: PathBuf },
    /// Exponential negation.
    Negate {
        input: PathBuf,
        /// Leave B = ∅ out of the negation sum.
        #[arg(long)]
        exclude_empty: bool,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
    },
    /// Combine two CBBAs; the result carries the conflict coefficient.
    Combine { left: PathBuf, right: PathBuf },
    /// Joint CBBA on the product of two frames.
    Joint { x: PathBuf, y: PathBuf },
    /// Train on one split and report held-out accuracy.
    Classify {
        #[command(flatten)]
        common: ClassifierArgs,
        /// Share of the training pool used for training.
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        #[arg(long, default_value = "fcb", value_parser = parse_method)]
        method: Method,
    },
    /// Accuracy table over training ratios and entropy methods.
    Sweep {
        #[command(flatten)]
        common: ClassifierArgs,
        /// Training ratios; 0.01 to 0.99 by default.
        #[arg(long, value_delimiter = ',')]
        ratios: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "fcb", value_parser = parse_method)]
        method: Vec<Method>,
    },
    /// Fuse evidence left to right until a target is accepted.
    Fuse {
        /// CBBA files, or files holding an array of CBBA documents.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 2.0)]
        epsilon: f64,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: CetError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}

struct Ctx<'a> {
    common: &'a Common,
    precision: Precision,
}

impl Ctx<'_> {
    fn parse_options(&self) -> ParseOptions {
        ParseOptions {
            tolerance: self.common.tolerance,
            allow_invalid: self.common.allow_invalid,
        }
    }

    fn load(&self, path: &Path) -> Result<Cbba64, CetError> {
        CbbaDocument::from_json(&read_input(path)?)?.to_cbba(self.parse_options())
    }

    fn num(&self, x: f64) -> String {
        self.precision.format(x)
    }

    fn emit(&self, text: &str) -> Result<(), CetError> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.common.output {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit_json(&self, mut value: Value) -> Result<(), CetError> {
        round_json(&mut value, self.precision);
        self.emit(&serde_json::to_string_pretty(&value)?)
    }

    fn emit_cbba(&self, doc: CbbaDocument) -> Result<(), CetError> {
        self.emit(&doc.to_json())
    }

    fn emit_csv(&self, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), CetError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| CetError::Io(e.into_error()))?;
        self.emit(&String::from_utf8(bytes).expect("utf-8 csv"))
    }
}

fn read_input(path: &Path) -> Result<String, CetError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn round_json(v: &mut Value, precision: Precision) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = precision.round(n.as_f64().expect("f64"));
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_json(x, precision)),
        Value::Object(map) => map.values_mut().for_each(|x| round_json(x, precision)),
        _ => {}
    }
}

fn run(cli: &Cli) -> Result<(), CetError> {
    let ctx = Ctx {
        common: &cli.common,
        precision: match cli.common.precision {
            PrecisionArg::Short => Precision::Short,
            PrecisionArg::Full => Precision::Full,
        },
    };
    if let Some(t) = cli.common.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CetError::InvalidConfig(format!("tolerance {t} must be a non-negative number")));
        }
    }
    match &cli.command {
        Command::Validate { input } => validate(&ctx, input),
        Command::Entropy { input, method } => {
            let c = ctx.load(input)?;
            let v = entropy::measure(&c, *method)?;
            ctx.emit_json(json!({ "method": method.to_string(), "bits": v.value }))
        }
        Command::EntropySweep { method, steps } => entropy_sweep(&ctx, method, *steps),
        Command::Cpbt { input } => {
            let c = ctx.load(input)?;
            let bet = transform::cpbt(&c);
            let masses = bet.values().iter().enumerate().map(|(e, z)| (FocalSet::singleton(e), *z));
            let out = Cbba64::collect(c.frame().clone(), masses)?;
            ctx.emit_cbba(CbbaDocument::from_cbba(&out))
        }
        Command::CpbtIterate { input, p, steps } => cpbt_iterate(&ctx, input, *p, *steps),
        Command::Fcbba { input } => {
            let c = ctx.load(input)?;
            ctx.emit_cbba(CbbaDocument::from_cbba(&transform::fcbba(&c)?.to_cbba()))
        }
        Command::Negate {
            input,
            exclude_empty,
            iterations,
        } => {
            let mut c = ctx.load(input)?;
            let opts = NegationOptions {
                include_empty: !exclude_empty,
            };
            for _ in 0..*iterations {
                c = transform::exp_negation(&c, opts)?;
            }
            ctx.emit_cbba(CbbaDocument::from_cbba(&c))
        }
        Command::Combine { left, right } => {
            let (c, k) = transform::combine(&ctx.load(left)?, &ctx.load(right)?)?;
            ctx.emit_cbba(CbbaDocument::from_cbba(&c).with_conflict(k))
        }
        Command::Joint { x, y } => {
            let j = transform::joint(&ctx.load(x)?, &ctx.load(y)?)?;
            ctx.emit_cbba(CbbaDocument::from_cbba(&j))
        }
        Command::Classify { common, ratio, method } => classify(&ctx, common, *ratio, *method),
        Command::Sweep { common, ratios, method } => sweep(&ctx, common, ratios, method),
        Command::Fuse { inputs, sigma, epsilon } => fuse(&ctx, inputs, *sigma, *epsilon),
    }
}

fn validate(ctx: &Ctx, input: &Path) -> Result<(), CetError> {
    let opts = ParseOptions {
        allow_invalid: false,
        ..ctx.parse_options()
    };
    let c: Cbba64 = CbbaDocument::from_json(&read_input(input)?)?.to_cbba(opts)?;
    let sum = c.total();
    ctx.emit_json(json!({
        "valid": true,
        "frame_size": c.frame().len(),
        "focal_sets": c.len(),
        "sum": { "re": sum.re, "im": sum.im },
    }))
}

fn entropy_sweep(ctx: &Ctx, methods: &[Method], steps: usize) -> Result<(), CetError> {
    if steps < 2 {
        return Err(CetError::InvalidConfig("need at least two grid points per axis".into()));
    }
    let f = Frame::new(["e1", "e2"])?;
    let (e1, full) = (FocalSet::singleton(0), f.full());
    let last = (steps - 1) as f64;
    let mut header = vec!["x", "y"];
    let names: Vec<String> = methods.iter().map(|m| m.to_string()).collect();
    header.extend(names.iter().map(String::as_str));
    let mut rows = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let x = i as f64 / last;
            let y = -1.0 + 2.0 * j as f64 / last;
            let m = Cbba64::new(f.clone(), [(e1, Complex64::new(1.0 - x, -y)), (full, Complex64::new(x, y))]);
            let mut row = vec![ctx.num(x), ctx.num(y)];
            for method in methods {
                let cell = match &m {
                    Ok(m) => entropy::measure(m, *method).map(|v| ctx.num(v.value)).unwrap_or_else(|_| "NA".into()),
                    Err(_) => "NA".into(),
                };
                row.push(cell);
            }
            rows.push(row);
        }
    }
    ctx.emit_csv(&header, rows)
}

fn cpbt_iterate(ctx: &Ctx, input: &Path, p: f64, steps: usize) -> Result<(), CetError> {
    let c = ctx.load(input)?;
    let seq = transform::cpbt_iterate(&c, p, steps)?;
    let mut sets: Vec<FocalSet> = c.focal_sets().chain((0..c.frame().len()).map(FocalSet::singleton)).collect();
    sets.sort_unstable();
    sets.dedup();
    let mut rows = Vec::new();
    for (step, m) in seq.iter().enumerate().skip(1) {
        let com = m.commitments()?;
        for &set in &sets {
            let z = m.mass(set);
            rows.push(vec![
                step.to_string(),
                c.frame().describe(set),
                ctx.num(z.re),
                ctx.num(z.im),
                ctx.num(z.norm()),
                ctx.num(com.get(&set).copied().unwrap_or(0.0)),
            ]);
        }
    }
    ctx.emit_csv(&["step", "focal", "re", "im", "abs", "com"], rows)
}

fn classifier_setup(args: &ClassifierArgs) -> Result<(Dataset, FocalMode, Aggregation), CetError> {
    let d = pipeline::ingest_csv(&args.data, &args.label)?;
    let mode = match args.focal_mode {
        FocalArg::Singletons => FocalMode::Singletons,
        FocalArg::ClassVsFrame => FocalMode::ClassVsFrame,
    };
    let aggregation = match args.aggregation {
        AggregationArg::Sum => Aggregation::Sum,
        AggregationArg::Combined => Aggregation::Combined,
    };
    Ok((d, mode, aggregation))
}

fn classify(ctx: &Ctx, args: &ClassifierArgs, ratio: f64, method: Method) -> Result<(), CetError> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(CetError::InvalidConfig(format!("ratio {ratio} outside (0, 1]")));
    }
    let (d, focal_mode, aggregation) = classifier_setup(args)?;
    let (test, pool) = pipeline::split(&d, args.test_fraction, args.seed)?;
    let n_train = (ratio * pool.len() as f64).round() as usize;
    let cfg = ClassifierConfig {
        method,
        focal_mode,
        aggregation,
    };
    let (correct, total) = pipeline::classify::evaluate(&d, &pool[..n_train], &test, &cfg)?;
    ctx.emit_json(json!({
        "method": method.to_string(),
        "ratio": ratio,
        "seed": args.seed,
        "n_train": n_train,
        "n_test": total,
        "correct": correct,
        "accuracy": correct as f64 / total as f64,
    }))
}

fn sweep(ctx: &Ctx, args: &ClassifierArgs, ratios: &[f64], methods: &[Method]) -> Result<(), CetError> {
    let (d, focal_mode, aggregation) = classifier_setup(args)?;
    let mut cfg = SweepConfig {
        methods: methods.to_vec(),
        seed: args.seed,
        test_fraction: args.test_fraction,
        focal_mode,
        aggregation,
        ..SweepConfig::default()
    };
    if !ratios.is_empty() {
        cfg.ratios = ratios.to_vec();
    }
    let rows = pipeline::accuracy_sweep(&d, &cfg)?
        .into_iter()
        .map(|r| {
            vec![
                ctx.num(r.ratio),
                r.method.to_string(),
                r.accuracy.map_or_else(|| "NA".into(), |a| ctx.num(a)),
                r.n_train.to_string(),
                r.n_test.to_string(),
            ]
        })
        .collect();
    ctx.emit_csv(&["ratio", "method", "accuracy", "n_train", "n_test"], rows)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EvidenceFile {
    One(CbbaDocument),
    Many(Vec<CbbaDocument>),
}

fn fuse(ctx: &Ctx, inputs: &[PathBuf], sigma: f64, epsilon: f64) -> Result<(), CetError> {
    let mut evidence = Vec::new();
    for path in inputs {
        let docs = match serde_json::from_str(&read_input(path)?)? {
            EvidenceFile::One(doc) => vec![doc],
            EvidenceFile::Many(docs) => docs,
        };
        for doc in docs {
            evidence.push(doc.to_cbba(ctx.parse_options())?);
        }
    }
    let trace = pipeline::fuse_until_decision(&evidence, &FusionConfig { sigma, epsilon })?;
    ctx.emit_json(serde_json::to_value(&trace)?)
}
