use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use sha2::{Digest, Sha256};

use dodgson_core::corpus::{corpus_entries, ManifestEntry};
use dodgson_core::report::{Report, ReportOptions};
use dodgson_core::{auto_repair, parse_matrix, Error, MatrixFormat, Strategy};

/// Exact determinants by condensation with automatic zero-divisor repair.
#[derive(Parser, Debug)]
#[command(name = "det", version)]
struct Args {
    /// Matrix file (CSV of rationals, or JSON {"n", "rows"}).
    #[arg(long, required_unless_present_any = ["demo", "export_corpus"])]
    input: Option<PathBuf>,

    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// fail | shift | rowops | perturb | replace | zeros | intermediate-unsound
    #[arg(long, default_value = "perturb", value_parser = parse_strategy)]
    strategy: Strategy,

    /// Print every condensation level.
    #[arg(long)]
    trace: bool,

    /// Cross-check against Bareiss elimination.
    #[arg(long)]
    verify: bool,

    /// Write the full report as JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Run the built-in corpus under every sound strategy.
    #[arg(long)]
    demo: bool,

    /// Write the corpus as CSV files plus manifest.json.
    #[arg(long, value_name = "DIR")]
    export_corpus: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn detect_format(path: &Path, explicit: Option<Format>) -> MatrixFormat {
    match explicit {
        Some(Format::Csv) => MatrixFormat::Csv,
        Some(Format::Json) => MatrixFormat::Json,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => MatrixFormat::Json,
            _ => MatrixFormat::Csv,
        },
    }
}

fn run_input(args: &Args, path: &Path) -> Result<i32> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let a = parse_matrix(&text, detect_format(path, args.format))
        .with_context(|| format!("parsing {}", path.display()))?;
    let digest = format!("{:x}", Sha256::digest(text.as_bytes()));
    let opts = ReportOptions {
        verify: args.verify,
        trace: args.trace,
    };
    let report = Report::generate(&a, args.strategy, opts, digest)?;
    print!("{}", report.summary());
    if let Some(out) = &args.json {
        fs::write(out, report.to_json()).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(report.exit_code())
}

fn demo() -> Result<i32> {
    let entries = corpus_entries();
    print!("{:<8} {:>4} {:>12}", "matrix", "n", "expected");
    for st in Strategy::SOUND {
        print!(" {:>9}", st.cli_name());
    }
    println!();
    let mut wrong = 0;
    for e in &entries {
        let expected = e.expected_det();
        print!(
            "{:<8} {:>4} {:>12}",
            e.name,
            e.matrix.n(),
            expected.to_string()
        );
        for st in Strategy::SOUND {
            let cell = match auto_repair(&e.matrix, st, None) {
                Ok(out) if out.value == expected => "ok",
                Ok(_) => {
                    wrong += 1;
                    "WRONG"
                }
                Err(Error::StrategyInapplicable { .. }) => "n/a",
                Err(_) => {
                    wrong += 1;
                    "ERROR"
                }
            };
            print!(" {cell:>9}");
        }
        println!();
    }
    println!("{} matrices, {wrong} wrong results", entries.len());
    Ok(if wrong == 0 { 0 } else { 1 })
}

fn export(dir: &Path) -> Result<i32> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let entries = corpus_entries();
    let mut manifest = Vec::with_capacity(entries.len());
    for e in &entries {
        let m = ManifestEntry::from(e);
        fs::write(dir.join(&m.file), e.matrix.to_csv())?;
        manifest.push(m);
    }
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    println!("wrote {} matrices to {}", entries.len(), dir.display());
    Ok(0)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            // usage errors exit 1; 2 is reserved for the unsound mismatch
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = (|| {
        if let Some(dir) = &args.export_corpus {
            export(dir)?;
        }
        if args.demo {
            let code = demo()?;
            if code != 0 {
                return Ok(code);
            }
        }
        match &args.input {
            Some(path) => run_input(&args, path),
            None if args.demo || args.export_corpus.is_some() => Ok(0),
            None => bail!("no input given"),
        }
    })();
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
