//! Command-line surface: per-word bracket computations, equivalence
//! decisions, closures, 2-tangle classification, the exhaustive collision
//! search, and the self-verification suite.
//!
//! Exit codes: 0 success/equivalent, 1 inequivalent or counterexample found,
//! 2 usage error, 3 resource bound exceeded.

use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tanglebracket::braid::{BraidWord, Mode};
use tanglebracket::bracket::{
    closure_bracket, kauffman_polynomial_capped, state_sum_link_capped, BracketVector,
};
use tanglebracket::diagram::{PlanarDiagram, PlatTangle};
use tanglebracket::invariant::{
    canonicalize, conway_fraction, equivalent, is_trivial_infinity, search_collisions,
    vector_2tangle, vector_3tangle, Method, SearchFilter,
};
use tanglebracket::laurent::LaurentPoly;
use tanglebracket::tl::word_matrix;
use tanglebracket::verify::run_all;

/// Word-length cap on the transfer-matrix path.
const MATRIX_WORD_CAP: usize = 12;
/// Word-length cap on the state-sum path (2^20 states).
const ORACLE_WORD_CAP: usize = 20;

#[derive(Parser)]
#[command(
    name = "tanglebracket",
    about = "Kauffman bracket vectors of plat tangles: compute, compare, sweep",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    B4,
    B6,
    B6x,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::B4 => Mode::B4Standard,
            ModeArg::B6 => Mode::B6,
            ModeArg::B6x => Mode::B6Extended,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Matrix,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Matrix => Method::Matrix,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct WordArgs {
    /// Braid word, e.g. "s1 s2^-1" ("e" for the empty word)
    #[arg(long)]
    word: String,
    /// Generator alphabet: b4 (standard 4-plat), b6, b6x (extended)
    #[arg(long, value_enum, default_value = "b6")]
    mode: ModeArg,
    /// Bottom matching index (1-based; 4-plats always use 2)
    #[arg(long)]
    bottom: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket vector of a plat tangle
    Bracket {
        #[command(flatten)]
        word: WordArgs,
        /// Computation path
        #[arg(long, value_enum, default_value = "matrix")]
        method: MethodArg,
        /// Force the state-sum oracle (same as --method oracle)
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Decide invariant equivalence of two plat tangles up to (-a^-3)^k
    Equiv {
        #[command(flatten)]
        word: WordArgs,
        /// Second braid word
        #[arg(long)]
        word2: String,
        /// Bottom matching for the second word (defaults to --bottom)
        #[arg(long)]
        bottom2: Option<usize>,
    },
    /// Close a plat tangle and report the diagram, polynomial and span
    Closure {
        #[command(flatten)]
        word: WordArgs,
        /// Closure matching index (1-based)
        #[arg(long)]
        closure: usize,
        /// Also print the PD-code-style crossing lines
        #[arg(long)]
        emit_pd: bool,
    },
    /// Classify a 4-plat 2-tangle: triviality and continued fraction
    Classify {
        /// Braid word over s1, s2
        #[arg(long)]
        word: String,
    },
    /// Enumerate 6-plat words, group by canonical invariant, report suspects
    Search {
        #[arg(long)]
        max_crossings: usize,
        /// "reduced-alternating" or "all"
        #[arg(long, default_value = "reduced-alternating")]
        filter: String,
        /// Output file (JSON or CSV per --format)
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Run the self-verification suite
    Verify,
    /// Print the transfer matrix of a word, row-major
    DumpMatrix {
        #[command(flatten)]
        word: WordArgs,
    },
}

fn poly_json(p: &LaurentPoly) -> serde_json::Value {
    json!(p
        .terms()
        .iter()
        .map(|(e, c)| json!([e, c.to_string()]))
        .collect::<Vec<_>>())
}

fn vector_json(v: &BracketVector) -> serde_json::Value {
    json!(v.entries().iter().map(poly_json).collect::<Vec<_>>())
}

enum CliError {
    Usage(String),
    Bound(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Bound(_) => ExitCode::from(3),
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Bound(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn parse_plat(args: &WordArgs) -> Result<PlatTangle, CliError> {
    let mode: Mode = args.mode.into();
    let word = BraidWord::parse(&args.word, mode).map_err(usage)?;
    let bottom = args.bottom.unwrap_or(match mode {
        Mode::B4Standard => 2,
        _ => 3,
    });
    PlatTangle::new(word, bottom).map_err(usage)
}

fn check_word_cap(len: usize, method: Method) -> Result<(), CliError> {
    let cap = match method {
        Method::Matrix => MATRIX_WORD_CAP,
        Method::Oracle => ORACLE_WORD_CAP,
    };
    if len > cap {
        Err(CliError::Bound(format!(
            "word length {len} exceeds the {cap}-crossing cap for this path"
        )))
    } else {
        Ok(())
    }
}

fn run_bracket(word: &WordArgs, method: Method, format: FormatArg) -> Result<(), CliError> {
    let plat = parse_plat(word)?;
    check_word_cap(plat.word.len(), method)?;
    let vector = match plat.word.mode {
        Mode::B4Standard => vector_2tangle(&plat.word, method).map_err(usage)?,
        _ => vector_3tangle(&plat, method).map_err(usage)?,
    };
    match format {
        FormatArg::Json => {
            let out = json!({
                "word": plat.word.to_string(),
                "mode": plat.word.mode.to_string(),
                "bottom": plat.bottom,
                "crossings": plat.word.len(),
                "vector": vector_json(&vector),
                "entries": vector.entries().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        FormatArg::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let mut row = vec![
                plat.word.to_string(),
                plat.bottom.to_string(),
                plat.word.len().to_string(),
            ];
            row.extend(vector.entries().iter().map(|p| p.to_string()));
            w.write_record(&row).map_err(usage)?;
            w.flush().map_err(usage)?;
        }
    }
    Ok(())
}

fn run_equiv(word: &WordArgs, word2: &str, bottom2: Option<usize>) -> Result<bool, CliError> {
    let mode: Mode = word.mode.into();
    let plat1 = parse_plat(word)?;
    let w2 = BraidWord::parse(word2, mode).map_err(usage)?;
    let b2 = bottom2.or(word.bottom).unwrap_or(match mode {
        Mode::B4Standard => 2,
        _ => 3,
    });
    let plat2 = PlatTangle::new(w2, b2).map_err(usage)?;
    check_word_cap(plat1.word.len().max(plat2.word.len()), Method::Matrix)?;
    let (v1, v2) = match mode {
        Mode::B4Standard => (
            vector_2tangle(&plat1.word, Method::Matrix).map_err(usage)?,
            vector_2tangle(&plat2.word, Method::Matrix).map_err(usage)?,
        ),
        _ => (
            vector_3tangle(&plat1, Method::Matrix).map_err(usage)?,
            vector_3tangle(&plat2, Method::Matrix).map_err(usage)?,
        ),
    };
    match equivalent(&v1, &v2).map_err(usage)? {
        Some(k) => {
            println!("equivalent, k = {k}");
            Ok(true)
        }
        None => {
            println!("inequivalent");
            Ok(false)
        }
    }
}

fn run_closure(word: &WordArgs, closure: usize, emit_pd: bool) -> Result<(), CliError> {
    let plat = parse_plat(word)?;
    check_word_cap(plat.word.len(), Method::Oracle)?;
    let closed = PlanarDiagram::close(&plat, closure).map_err(usage)?;
    let bracket = state_sum_link_capped(&closed, ORACLE_WORD_CAP).map_err(usage)?;
    let x = kauffman_polynomial_capped(&closed, ORACLE_WORD_CAP).map_err(usage)?;
    // cross-check the fast path on 6-plats
    if plat.word.mode != Mode::B4Standard && plat.word.len() <= MATRIX_WORD_CAP {
        let v = vector_3tangle(&plat, Method::Matrix).map_err(usage)?;
        let via_vector = closure_bracket(&v, closure).map_err(usage)?;
        assert_eq!(via_vector, bracket, "closure bracket paths disagree");
    }
    let out = json!({
        "word": plat.word.to_string(),
        "bottom": plat.bottom,
        "closure": closure,
        "crossings": closed.crossing_count(),
        "components": closed.component_count(),
        "alternating": closed.is_alternating(),
        "reduced": closed.is_reduced(),
        "connected": closed.is_connected(),
        "writhe": closed.writhe().map_err(usage)?,
        "bracket": poly_json(&bracket),
        "kauffman": poly_json(&x),
        "kauffman_display": x.to_string(),
        "span": if x.is_zero() { json!(null) } else { json!(x.span().unwrap()) },
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    if emit_pd {
        for line in closed.pd_lines() {
            println!("{line}");
        }
    }
    Ok(())
}

fn run_classify(word_text: &str) -> Result<(), CliError> {
    let word = BraidWord::parse(word_text, Mode::B4Standard).map_err(usage)?;
    check_word_cap(word.len(), Method::Matrix)?;
    let v = vector_2tangle(&word, Method::Matrix).map_err(usage)?;
    let canon = canonicalize(&v).map_err(usage)?;
    let fraction = conway_fraction(&word).map_err(usage)?;
    let out = json!({
        "word": word.to_string(),
        "vector": vector_json(&v),
        "entries": v.entries().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "canonical": canon.vector.entries().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "unit_shift": canon.unit_shift,
        "trivial_infinity": is_trivial_infinity(&v),
        "conway_fraction": fraction.to_string(),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn run_search(
    max_crossings: usize,
    filter: &str,
    out_path: Option<&str>,
    format: FormatArg,
) -> Result<bool, CliError> {
    let filter = match filter {
        "reduced-alternating" => SearchFilter::ReducedAlternating,
        "all" => SearchFilter::All,
        other => return Err(CliError::Usage(format!("unknown filter `{other}`"))),
    };
    let report = search_collisions(max_crossings, filter).map_err(|e| {
        if matches!(
            e,
            tanglebracket::invariant::InvariantError::BoundTooLarge { .. }
        ) {
            CliError::Bound(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    })?;
    let rendered = match format {
        FormatArg::Json => serde_json::to_string_pretty(&report).unwrap(),
        FormatArg::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["class", "suspect", "word", "bottom", "crossings", "canonical"])
                .map_err(usage)?;
            for (ci, class) in report.classes.iter().enumerate() {
                for m in &class.members {
                    w.write_record([
                        ci.to_string(),
                        class.suspect.to_string(),
                        m.word.clone(),
                        m.bottom.to_string(),
                        m.crossings.to_string(),
                        class.canonical.join(" ; "),
                    ])
                    .map_err(usage)?;
                }
            }
            String::from_utf8(w.into_inner().map_err(|e| usage(e.to_string()))?).unwrap()
        }
    };
    match out_path {
        Some(path) => fs::write(path, rendered.as_bytes()).map_err(usage)?,
        None => println!("{rendered}"),
    }
    eprintln!(
        "searched bound {}: {} classes, {} suspects",
        report.bound,
        report.classes.len(),
        report.suspect_count
    );
    Ok(report.suspect_count == 0)
}

fn run_verify() -> bool {
    let results = run_all();
    let mut all_pass = true;
    println!("{:<28} {:<6} {:>9}  details", "criterion", "status", "time");
    for r in &results {
        all_pass &= r.passed;
        println!(
            "{:<28} {:<6} {:>7}ms  {}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.millis,
            r.details
        );
    }
    let _ = std::io::stdout().flush();
    all_pass
}

fn run_dump_matrix(word: &WordArgs) -> Result<(), CliError> {
    let mode: Mode = word.mode.into();
    let w = BraidWord::parse(&word.word, mode).map_err(usage)?;
    check_word_cap(w.len(), Method::Matrix)?;
    let n = mode.pairs();
    let m = word_matrix(&w, n).map_err(usage)?;
    let rows: Vec<serde_json::Value> = m
        .rows()
        .map(|row| json!(row.iter().map(poly_json).collect::<Vec<_>>()))
        .collect();
    let out = json!({
        "word": w.to_string(),
        "mode": mode.to_string(),
        "dim": m.dim(),
        "rows": rows,
        "display": m.rows().map(|row| {
            row.iter().map(|p| p.to_string()).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, CliError> = match &cli.command {
        Command::Bracket {
            word,
            method,
            oracle,
            format,
        } => {
            let method = if *oracle {
                Method::Oracle
            } else {
                (*method).into()
            };
            run_bracket(word, method, *format).map(|_| true)
        }
        Command::Equiv {
            word,
            word2,
            bottom2,
        } => run_equiv(word, word2, *bottom2),
        Command::Closure {
            word,
            closure,
            emit_pd,
        } => run_closure(word, *closure, *emit_pd).map(|_| true),
        Command::Classify { word } => run_classify(word).map(|_| true),
        Command::Search {
            max_crossings,
            filter,
            out,
            format,
        } => run_search(*max_crossings, filter, out.as_deref(), *format),
        Command::Verify => Ok(run_verify()),
        Command::DumpMatrix { word } => run_dump_matrix(word).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}
