//! Command-line front end: PBM/.rld conversion, entropy features, distance
//! matrices, virtual decompression traces, fixtures and benchmarks.
//!
//! Exit codes: 0 success, 1 invalid input or arguments, 2 I/O failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use rle_entropy::analysis::{distance_matrix, feature_rows_to_csv, feature_table, Sample};
use rle_entropy::bench::{bench, generate_fixture, reports_to_csv, BenchOptions, FixtureKind, Scenario, DEFAULT_SEED};
use rle_entropy::entropy::{features, Direction, EntropyOptions, LogBase, Quantifier};
use rle_entropy::image::{load_pbm, save_pbm, PbmVariant};
use rle_entropy::rle::{decode_image, encode_image, read_rld, write_rld, RleDocument};
use rle_entropy::transition::trace;
use rle_entropy::Error;

#[derive(Parser, Debug)]
#[command(
    name = "rle-entropy",
    version,
    about = "Entropy features of run-length compressed binary documents"
)]
struct Cli {
    /// Logarithm base: e, 2 or 10.
    #[arg(long, global = true, default_value = "e", value_parser = parse_base)]
    log_base: LogBase,

    #[arg(long, global = true, value_enum, default_value_t = QuantArg::Ceq)]
    quantifier: QuantArg,

    #[arg(long, global = true, value_enum, default_value_t = DirArg::H)]
    direction: DirArg,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum QuantArg {
    Ceq,
    Seq,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirArg {
    H,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    P1,
    P4,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Blank,
    Checkerboard,
    TextLike,
}

impl From<QuantArg> for Quantifier {
    fn from(q: QuantArg) -> Self {
        match q {
            QuantArg::Ceq => Quantifier::Ceq,
            QuantArg::Seq => Quantifier::Seq,
        }
    }
}

impl From<DirArg> for Direction {
    fn from(d: DirArg) -> Self {
        match d {
            DirArg::H => Direction::Horizontal,
            DirArg::V => Direction::Vertical,
        }
    }
}

impl From<VariantArg> for PbmVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::P1 => PbmVariant::P1,
            VariantArg::P4 => PbmVariant::P4,
        }
    }
}

impl From<KindArg> for FixtureKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Blank => FixtureKind::Blank,
            KindArg::Checkerboard => FixtureKind::Checkerboard,
            KindArg::TextLike => FixtureKind::TextLike,
        }
    }
}

fn parse_base(s: &str) -> Result<LogBase, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a PBM image to .rld.
    Encode {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert an .rld document to PBM.
    Decode {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = VariantArg::P4)]
        variant: VariantArg,
    },
    /// Entropy features of one document (.rld or .pbm).
    Entropy {
        input: PathBuf,
        /// Include per-line (E+, E-) terms.
        #[arg(long)]
        per_row: bool,
        #[arg(long)]
        parallel: bool,
    },
    /// Pairwise |F3_i - F3_j| over several documents; labels are file stems.
    Distmat {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also print the feature table (JSON only).
        #[arg(long)]
        features: bool,
    },
    /// Print the pass-by-pass virtual decompression of a small document.
    Trace {
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        passes: usize,
        /// Only the first N rows.
        #[arg(long)]
        rows: Option<usize>,
    },
    /// Time compressed-domain features against the pixel-scan baseline.
    Bench {
        /// Documents to time; generates a fixture when none are given.
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = KindArg::TextLike)]
        kind: KindArg,
        #[arg(long, default_value_t = 1000)]
        width: usize,
        #[arg(long, default_value_t = 1000)]
        height: usize,
        #[arg(long, default_value_t = 0.1)]
        density: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 11)]
        repetitions: usize,
        /// Charge decoding to the uncompressed path.
        #[arg(long)]
        include_decode: bool,
        #[arg(long)]
        parallel: bool,
        /// Run every quantifier/direction pair instead of the global flags.
        #[arg(long)]
        all: bool,
    },
    /// Generate a synthetic PBM fixture.
    Gen {
        #[arg(long, value_enum, default_value_t = KindArg::TextLike)]
        kind: KindArg,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long, default_value_t = 0.1)]
        density: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = VariantArg::P4)]
        variant: VariantArg,
        /// Write .rld instead of PBM.
        #[arg(long)]
        rld: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read_input(path: &Path) -> Result<RleDocument, Error> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(b"RLD1") {
        let text = std::str::from_utf8(&bytes).map_err(|e| Error::Rld {
            line: 1,
            reason: e.to_string(),
        })?;
        read_rld(text)
    } else {
        Ok(encode_image(&load_pbm(&bytes)?))
    }
}

fn label_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn json_line(value: &impl serde::Serialize) -> Result<Vec<u8>, Error> {
    let mut s = serde_json::to_vec_pretty(value)?;
    s.push(b'\n');
    Ok(s)
}

fn trace_table(doc: &RleDocument, passes: usize, rows: usize) -> String {
    let mut out = String::from("pass\tline\tpopped\truns\tstatus\n");
    let fmt_runs = |r: &[u32]| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    for (i, row) in doc.rows().iter().take(rows).enumerate() {
        let pass = if i == 0 { "start" } else { "" };
        out.push_str(&format!("{pass}\t{}:\t\t{}\t\n", i + 1, fmt_runs(row.runs())));
    }
    for p in trace(doc, passes) {
        for (i, r) in p.rows.iter().take(rows).enumerate() {
            let pass = if i == 0 { p.pass.to_string() } else { String::new() };
            out.push_str(&format!(
                "{pass}\t{}:\t{}\t{}\t{}\n",
                r.line,
                r.bit,
                fmt_runs(&r.runs),
                r.status
            ));
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), Error> {
    let quantifier = Quantifier::from(cli.quantifier);
    let direction = Direction::from(cli.direction);
    let base = cli.log_base;

    match cli.command {
        Command::Encode { input, output } => {
            let img = load_pbm(&fs::read(&input)?)?;
            emit(output.as_deref(), write_rld(&encode_image(&img)).as_bytes())
        }
        Command::Decode { input, output, variant } => {
            let doc = read_input(&input)?;
            emit(output.as_deref(), &save_pbm(&decode_image(&doc), variant.into()))
        }
        Command::Entropy {
            input,
            per_row,
            parallel,
        } => {
            let doc = read_input(&input)?;
            let f = features(
                &doc,
                quantifier,
                direction,
                EntropyOptions {
                    log_base: base,
                    parallel,
                },
            );
            let bytes = match cli.format {
                Format::Json => {
                    let mut v = json!({
                        "label": label_of(&input),
                        "quantifier": f.quantifier,
                        "direction": f.direction,
                        "log_base": f.log_base,
                        "F1": f.f1,
                        "F2": f.f2,
                        "F3": f.f3,
                    });
                    if per_row {
                        v["per_row"] = json!(f.per_row);
                    }
                    json_line(&v)?
                }
                Format::Csv => {
                    let rows = feature_table(
                        &[Sample::new(label_of(&input), doc)],
                        quantifier,
                        direction,
                        EntropyOptions {
                            log_base: base,
                            parallel,
                        },
                    )?;
                    feature_rows_to_csv(&rows)?.into_bytes()
                }
            };
            emit(None, &bytes)
        }
        Command::Distmat {
            inputs,
            output,
            features: with_features,
        } => {
            let samples = inputs
                .iter()
                .map(|p| Ok(Sample::new(label_of(p), read_input(p)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            let opts = EntropyOptions::with_base(base);
            let bytes = match cli.format {
                Format::Csv => distance_matrix(&samples, quantifier, direction, opts)?
                    .to_csv()?
                    .into_bytes(),
                Format::Json => {
                    let m = distance_matrix(&samples, quantifier, direction, opts)?;
                    if with_features {
                        let table = feature_table(&samples, quantifier, direction, opts)?;
                        json_line(&json!({ "features": table, "distances": m }))?
                    } else {
                        json_line(&m)?
                    }
                }
            };
            emit(output.as_deref(), &bytes)
        }
        Command::Trace { input, passes, rows } => {
            let doc = read_input(&input)?;
            let rows = rows.unwrap_or(doc.height());
            match cli.format {
                Format::Json => {
                    let mut t = trace(&doc, passes);
                    for p in &mut t {
                        p.rows.truncate(rows);
                    }
                    emit(None, &json_line(&t)?)
                }
                Format::Csv => emit(None, trace_table(&doc, passes, rows).as_bytes()),
            }
        }
        Command::Bench {
            inputs,
            kind,
            width,
            height,
            density,
            seed,
            repetitions,
            include_decode,
            parallel,
            all,
        } => {
            let docs: Vec<(String, RleDocument)> = if inputs.is_empty() {
                let kind = FixtureKind::from(kind);
                let img = generate_fixture(kind, width, height, density, seed)?;
                vec![(format!("{kind}-{width}x{height}"), encode_image(&img))]
            } else {
                inputs
                    .iter()
                    .map(|p| Ok((label_of(p), read_input(p)?)))
                    .collect::<Result<_, Error>>()?
            };
            let combos: Vec<(Quantifier, Direction)> = if all {
                [Quantifier::Ceq, Quantifier::Seq]
                    .into_iter()
                    .flat_map(|q| [Direction::Horizontal, Direction::Vertical].map(|d| (q, d)))
                    .collect()
            } else {
                vec![(quantifier, direction)]
            };
            let opts = BenchOptions {
                repetitions,
                log_base: base,
                include_decode,
                parallel,
            };
            let mut reports = Vec::new();
            for (label, doc) in docs {
                for &(q, d) in &combos {
                    let sc = Scenario {
                        label: label.clone(),
                        doc: doc.clone(),
                        quantifier: q,
                        direction: d,
                    };
                    reports.push(bench(&sc, opts)?);
                }
            }
            let bytes = match cli.format {
                Format::Json => json_line(&reports)?,
                Format::Csv => reports_to_csv(&reports)?.into_bytes(),
            };
            emit(None, &bytes)
        }
        Command::Gen {
            kind,
            width,
            height,
            density,
            seed,
            variant,
            rld,
            output,
        } => {
            let img = generate_fixture(kind.into(), width, height, density, seed)?;
            let bytes = if rld {
                write_rld(&encode_image(&img)).into_bytes()
            } else {
                save_pbm(&img, variant.into())
            };
            emit(output.as_deref(), &bytes)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
