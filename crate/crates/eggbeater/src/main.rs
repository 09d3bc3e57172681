//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error, 3 invariant
//! failure (an internal consistency check or oracle disagreed).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use eggbeater::bounds::{geometric_grid, growth_scan};
use eggbeater::error::Error;
use eggbeater::fixed_points::{forward_orbit, minimal_valid_k, solve_all};
use eggbeater::floer::{cz_index, linearized_path, rs_index_formula, rs_index_numeric, HalfInt};
use eggbeater::geometry::{compatible_class, ModelParams};
use eggbeater::rational::{parse_rat, rint, Rat};
use eggbeater::report::{
    build_floer_table, growth_to_csv, growth_to_json, growth_to_table, word_analysis_json,
};
use eggbeater::shear::{build_smoothing, verify_profile};
use eggbeater::word::{to_balanced, triple_norm_bounds, FreeWord};

#[derive(Parser)]
#[command(name = "eggbeater", version, about = "Exact egg-beater map laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Word-algebra analysis: reduction, balanced form, norms, traced class.
    AnalyzeWord(AnalyzeArgs),
    /// Solve all fixed-point candidates and print the Floer data table.
    FixedPoints(FixedPointsArgs),
    /// Scan the Hofer lower bound over a geometric grid of k.
    GrowthScan(GrowthArgs),
    /// Run the oracle-equivalence suites on a corpus of words.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Annulus circumference L (rational, must be > 4).
    #[arg(long = "L", default_value = "5")]
    l: String,
    /// Smoothing width: "0", "1/k", or an explicit rational below 1/4.
    #[arg(long, default_value = "0")]
    delta: String,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Word literal, e.g. "H^2 V^3 H^-1 V".
    #[arg(long)]
    word: String,
    /// Shear power used for the traced homotopy class.
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FixedPointsArgs {
    #[arg(long)]
    word: String,
    #[arg(long)]
    k: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GrowthArgs {
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = 1)]
    k_min: u64,
    #[arg(long, default_value_t = 64)]
    k_max: u64,
    /// Multiplicative step of the geometric grid.
    #[arg(long, default_value_t = 2)]
    k_factor: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Word list file, one literal per line; '#' starts a comment.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    k: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

/// Resolves the delta policy string for a concrete k.
fn resolve_delta(policy: &str, k: u64) -> Result<Rat, Error> {
    match policy {
        "0" => Ok(Rat::zero()),
        "1/k" => Ok(rint(1) / rint(k as i64)),
        other => parse_rat(other),
    }
}

fn params_for(common: &CommonArgs, k: u64) -> Result<ModelParams, Error> {
    let l = parse_rat(&common.l)?;
    let delta = resolve_delta(&common.delta, k)?;
    ModelParams::new(l, k, delta)
}

fn emit(common: &CommonArgs, text: String) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_analyze(args: &AnalyzeArgs) -> Result<(), Error> {
    let word: FreeWord = args.word.parse()?;
    if word.is_identity() {
        return Err(Error::TrivialWord);
    }
    let params = params_for(&args.common, args.k)?;
    let (lower, upper) = triple_norm_bounds(&word);
    let balanced = to_balanced(&word).ok();
    let text = match args.common.format {
        Format::Json => {
            let v = word_analysis_json(&word, params.k)?;
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("word,is_long,eta,norm_lower,norm_upper,r,tau\n");
            let (r, tau) = balanced
                .as_ref()
                .map(|b| (b.r().to_string(), b.tau().to_string()))
                .unwrap_or_default();
            writeln!(s, "{},{},{},{},{},{},{}", word, word.is_long(), word.eta(), lower, upper, r, tau)
                .expect("write");
            s
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "word            : {word}").expect("write");
            writeln!(s, "is long         : {}", word.is_long()).expect("write");
            writeln!(s, "eta             : {}", word.eta()).expect("write");
            writeln!(s, "norm bounds     : [{lower}, {upper}]").expect("write");
            if let Some(b) = &balanced {
                writeln!(s, "balanced form   : {}", b.to_free_word()).expect("write");
                writeln!(s, "r, tau          : {}, {}", b.r(), b.tau()).expect("write");
                writeln!(s, "traced class    : {}", compatible_class(b, params.k)).expect("write");
            }
            s
        }
    };
    emit(&args.common, text)
}

fn run_fixed_points(args: &FixedPointsArgs) -> Result<(), Error> {
    let word: FreeWord = args.word.parse()?;
    let params = params_for(&args.common, args.k)?;
    let balanced = to_balanced(&word)?;
    let k_min = minimal_valid_k(&balanced, &params.l, &params.delta, 64)?;
    if args.k < k_min {
        return Err(Error::KTooSmall { k: k_min });
    }
    let table = build_floer_table(&balanced, &args.word, &params)?;
    let text = match args.common.format {
        Format::Json => serde_json::to_string_pretty(&table.to_json()).expect("json") + "\n",
        Format::Csv => table.to_csv(),
        Format::Table => table.to_table(),
    };
    emit(&args.common, text)
}

fn run_growth(args: &GrowthArgs) -> Result<(), Error> {
    let word: FreeWord = args.word.parse()?;
    let params = params_for(&args.common, args.k_min.max(1))?;
    let grid = geometric_grid(args.k_min, args.k_max, args.k_factor)?;
    let scan = growth_scan(&word, &grid, &params.l, &params.delta)?;
    let text = match args.common.format {
        Format::Json => serde_json::to_string_pretty(&growth_to_json(&scan)).expect("json") + "\n",
        Format::Csv => growth_to_csv(&scan),
        Format::Table => growth_to_table(&scan),
    };
    emit(&args.common, text)
}

const DEFAULT_CORPUS: &[&str] = &[
    "H V",
    "H^2 V",
    "H V^-1",
    "H^2 V^3 H^-1 V",
    "H V H^-1 V^-1",
    "H^3 V^-2 H^-1 V^4",
];

fn load_corpus(args: &OracleArgs) -> Result<Vec<String>, Error> {
    match &args.corpus {
        None => Ok(DEFAULT_CORPUS.iter().map(|s| s.to_string()).collect()),
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok(text
                .lines()
                .map(|l| l.split('#').next().unwrap_or_default().trim().to_string())
                .filter(|l| !l.is_empty())
                .collect())
        }
    }
}

fn run_oracle_check(args: &OracleArgs) -> Result<(), Error> {
    let words = load_corpus(args)?;
    if words.is_empty() {
        let mut s = String::new();
        writeln!(s, "warning: empty corpus, nothing to check (NoWork)").expect("write");
        emit(&args.common, s)?;
        return Ok(());
    }
    let mut report = String::new();
    let mut failures = 0usize;
    let mut check = |name: String, ok: bool, report: &mut String| {
        writeln!(report, "{}  {}", if ok { "PASS" } else { "FAIL" }, name).expect("write");
        if !ok {
            failures += 1;
        }
    };

    // Word-algebra brute force on short words.
    check(
        "word-algebra brute force (length <= 5)".into(),
        word_algebra_oracle_ok(),
        &mut report,
    );

    for literal in &words {
        let word: FreeWord = literal.parse()?;
        if !word.is_long() {
            check(format!("{literal}: skipped (not long)"), true, &mut report);
            continue;
        }
        let balanced = to_balanced(&word)?;
        let k_min = minimal_valid_k(&balanced, &parse_rat(&args.common.l)?, &Rat::zero(), 64)?;
        let k = args.k.max(k_min);
        let params = params_for(&args.common, k)?;

        // Forward-iteration oracle: every solved record must be reproduced
        // exactly by iterating the dynamics.
        let mut orbit_ok = true;
        let mut rs_ok = true;
        for (_, rec) in solve_all(&balanced, &params) {
            let rec = rec?;
            if !rec.flags.valid() {
                orbit_ok = false;
                continue;
            }
            match forward_orbit(rec.z0(), &balanced, &params) {
                Ok(o) => {
                    orbit_ok &= o.points == rec.points && o.closes(rec.z0());
                }
                Err(_) => orbit_ok = false,
            }
            let path = linearized_path(&rec, &balanced, &params)?;
            let numeric = rs_index_numeric(&path)?;
            rs_ok &= numeric == rs_index_formula(&rec, &balanced, &params)?;
            rs_ok &= cz_index(&rec, &balanced) == HalfInt::from_int(1) - numeric;
        }
        check(format!("{literal}: forward-iteration oracle (k = {k})"), orbit_ok, &mut report);
        check(format!("{literal}: crossing-form index oracle (k = {k})"), rs_ok, &mut report);
    }

    // Smoothing certificates for a few widths.
    let smoothing_ok = [eggbeater::rational::rat(1, 5), eggbeater::rational::rat(1, 16)]
        .iter()
        .all(|d| build_smoothing(d).and_then(|u| verify_profile(&u)).is_ok());
    check("smoothing profile certificates".into(), smoothing_ok, &mut report);

    writeln!(report, "{} checks failed", failures).expect("write");
    emit(&args.common, report)?;
    if failures > 0 {
        return Err(Error::InvariantViolation(format!("{failures} oracle checks failed")));
    }
    Ok(())
}

/// Brute-force equivalence of reduction/conjugacy on all short letter words.
fn word_algebra_oracle_ok() -> bool {
    let letters = ["V", "V^-1", "H", "H^-1"];
    let mut words: Vec<FreeWord> = Vec::new();
    for len in 0..=4usize {
        let mut idx = vec![0usize; len];
        loop {
            let s = idx.iter().map(|i| letters[*i]).collect::<Vec<_>>().join(" ");
            let w: FreeWord = s.parse().expect("valid literal");
            words.push(w);
            // Odometer.
            let mut pos = 0;
            while pos < len {
                idx[pos] += 1;
                if idx[pos] < letters.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
        if len == 0 {
            continue;
        }
    }
    // Reduction sanity: w * w^-1 is trivial; conjugates are conjugate.
    words.iter().all(|w| {
        w.concat(&w.inverse()).is_identity()
            && w.is_conjugate(&w.conjugate_by(&"H V".parse().unwrap()))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap print help/version normally.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::AnalyzeWord(a) => run_analyze(a),
        Command::FixedPoints(a) => run_fixed_points(a),
        Command::GrowthScan(a) => run_growth(a),
        Command::OracleCheck(a) => run_oracle_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::InvariantViolation(_) | Error::TangentialCrossing)) => {
            eprintln!("invariant failure: {e}");
            ExitCode::from(3)
        }
        Err(e @ (Error::Parse { .. } | Error::BadParams(_))) => {
            eprintln!("usage error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
