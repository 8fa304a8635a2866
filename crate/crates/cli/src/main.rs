// SPDX-License-Identifier: Apache-2.0

//! `rm-metric`: covering radii, metric complements and regularity of
//! Reed-Muller codes, plus the table verification suites.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use output::{render, Format, ReportFormat};
use rm_metric::boolfn::{parse_abbrev, BooleanFunction};
use rm_metric::classify15::{
    class_of, class_of_by_search, complement_membership_rm15, distance_rm15, verify_lemma12_tables, verify_table1,
    VerificationReport,
};
use rm_metric::gf2linalg::{BitVector, SymmetricMatrix};
use rm_metric::oracle;
use rm_metric::parallel::configure_threads;
use rm_metric::rmcodes::{
    distance_to_code, find_rm26_witness, is_metrically_regular, metric_complement, rm_code, CodeReport, CosetSpace,
    LinearCode, MAX_ENGINE_LENGTH,
};
use rm_metric::syndrome::{complement_generators, TofsReport};
use rm_metric::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "rm-metric", version, about = "Metric invariants of binary Reed-Muller codes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, env = "RM_METRIC_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CodeArgs {
    /// Degree of the code.
    #[arg(long)]
    k: usize,
    /// Number of variables.
    #[arg(long)]
    m: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Covering radius of RM(k, m).
    Radius(CodeArgs),
    /// Metric complement (deep holes) of RM(k, m).
    Complement {
        #[command(flatten)]
        code: CodeArgs,
        /// List the canonical coset representatives as hex.
        #[arg(long)]
        dump: bool,
    },
    /// Whether RM(k, m) is metrically regular.
    Regular(CodeArgs),
    /// t(S) and a minimal factor of a symmetric matrix.
    Tofs {
        #[arg(long)]
        m: usize,
        /// Upper triangle row by row as 0/1 (s11 s12 .. s1m s22 ..).
        #[arg(long)]
        s: String,
    },
    /// Distance of a function to RM(k, m).
    Distance {
        #[command(flatten)]
        code: CodeArgs,
        /// Function as `0x`-prefixed hex truth table or abbreviated ANF (e.g. 123+14).
        #[arg(long)]
        f: String,
    },
    /// Coset class (0..28) of a five-variable function modulo RM(1,5).
    Classify {
        /// Function as `0x`-prefixed hex truth table or abbreviated ANF.
        #[arg(long)]
        f: String,
        /// Use exhaustive equivalence search instead of the orbit table.
        #[arg(long)]
        search: bool,
    },
    /// Verify the class table: every sum with a deep hole leaves the complement.
    VerifyTable1 {
        #[arg(long, value_enum)]
        report: Option<ReportFormat>,
    },
    /// Verify the class-sum tables of the four complement classes.
    VerifyLemma12 {
        #[arg(long, value_enum)]
        report: Option<ReportFormat>,
    },
    /// Find (y, w) at distance 18 from RM(2,6).
    Rm26Witness {
        /// Deep hole y of RM(2,5) as hex (default: a generator with an extra sum point).
        #[arg(long)]
        y: Option<String>,
    },
    /// Compare the engine against brute-force oracles on all RM(k, m), m <= max-m.
    OracleCheck {
        #[arg(long, default_value_t = 4)]
        max_m: usize,
    },
}

/// Failure categories mapped to exit codes.
enum Failure {
    Usage(String),
    Runtime(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::OutOfRange(_)
            | Error::Infeasible(_)
            | Error::DimensionMismatch { .. }
            | Error::OddWeightCoset => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn code_of(args: CodeArgs) -> Result<LinearCode, Failure> {
    if args.k > args.m {
        return Err(Failure::Usage(format!("--k {} exceeds --m {}", args.k, args.m)));
    }
    if 1usize << args.m > MAX_ENGINE_LENGTH {
        return Err(Failure::Usage(format!(
            "--m {} gives length {}; the engine handles lengths up to {MAX_ENGINE_LENGTH}",
            args.m,
            1usize << args.m
        )));
    }
    Ok(rm_code(args.k, args.m)?)
}

/// Rejects infeasible scans before any work starts.
fn prepare_scan(code: &LinearCode) -> Result<CosetSpace, Failure> {
    let space = CosetSpace::new(code)?;
    space.check_scan()?;
    if space.coset_bits() >= 20 {
        eprintln!("scanning 2^{} cosets of {} ...", space.coset_bits(), space.code().name());
    }
    Ok(space)
}

fn parse_function(text: &str, m: usize) -> Result<BooleanFunction, Failure> {
    match text.strip_prefix("0x") {
        Some(hex) => Ok(BooleanFunction::from_hex(m, hex)?),
        None => Ok(parse_abbrev(text, m)?.truth_table()),
    }
}

#[derive(Serialize)]
struct RadiusOut {
    code: String,
    k: usize,
    m: usize,
    n: usize,
    dim: usize,
    radius: u32,
}

#[derive(Serialize)]
struct ComplementOut {
    #[serde(flatten)]
    report: CodeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    representatives: Option<Vec<String>>,
}

#[derive(Serialize)]
struct DistanceOut {
    code: String,
    f: String,
    distance: u32,
}

#[derive(Serialize)]
struct ClassOut {
    f: String,
    class: u8,
    distance: u32,
    deep_hole: bool,
}

#[derive(Serialize)]
struct WitnessOut {
    y: String,
    w: String,
    distance: u32,
    close_codewords: usize,
    candidates_tried: usize,
}

#[derive(Serialize)]
struct OracleRow {
    code: String,
    radius: u32,
    oracle_radius: u32,
    complement_size: u128,
    oracle_complement_size: usize,
    regular: bool,
    oracle_regular: bool,
    agree: bool,
}

fn hex_word(w: u64, n: usize) -> String {
    format!("{:0width$x}", w, width = n.div_ceil(4))
}

fn verification(report: VerificationReport, format: Format, layout: Option<ReportFormat>) -> Outcome {
    let text = match layout {
        Some(ReportFormat::Markdown) => report.to_markdown(),
        Some(ReportFormat::Json) => render(&report, Format::Json),
        None => match format {
            Format::Markdown => report.to_markdown(),
            Format::Json => render(&report, Format::Json),
            Format::Csv => {
                let rows: Vec<_> = report
                    .tables
                    .iter()
                    .flat_map(|t| {
                        t.rows.iter().map(move |r| {
                            serde_json::json!({
                                "table": t.title,
                                "no": r.no,
                                "status": r.status,
                                "f": r.f,
                                "g": r.g,
                                "h": r.h,
                                "class_of_h": r.class_of_h,
                                "note": r.note,
                            })
                        })
                    })
                    .collect();
                render(&rows, Format::Csv)
            }
        },
    };
    let (passed, failed): (usize, usize) = report
        .tables
        .iter()
        .fold((0, 0), |(p, f), t| (p + t.passed, f + t.failed));
    eprintln!("{passed} rows passed, {failed} failed");
    if report.all_passed {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Verification(format!("{failed} failures")))
    }
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Radius(args) => {
            let code = code_of(args)?;
            let (radius, _) = prepare_scan(&code)?.radius_and_count()?;
            Ok(render(
                &RadiusOut {
                    code: code.name(),
                    k: args.k,
                    m: args.m,
                    n: code.len(),
                    dim: code.dim(),
                    radius,
                },
                format,
            ))
        }
        Command::Complement { code: args, dump } => {
            let code = code_of(args)?;
            prepare_scan(&code)?;
            let comp = metric_complement(&code)?;
            let representatives = if dump {
                Some(comp.representatives()?.iter().map(|&v| hex_word(v, code.len())).collect())
            } else {
                None
            };
            Ok(render(
                &ComplementOut {
                    report: CodeReport::new(&comp, None),
                    representatives,
                },
                format,
            ))
        }
        Command::Regular(args) => {
            let code = code_of(args)?;
            prepare_scan(&code)?;
            let comp = metric_complement(&code)?;
            let regular = is_metrically_regular(&code)?;
            Ok(render(&CodeReport::new(&comp, Some(regular)), format))
        }
        Command::Tofs { m, s } => {
            if m == 0 || m > SymmetricMatrix::MAX_ORDER {
                return Err(Failure::Usage(format!("--m must be in 1..={}", SymmetricMatrix::MAX_ORDER)));
            }
            let s = SymmetricMatrix::from_upper_bits(m, &s)?;
            Ok(render(&TofsReport::new(&s)?, format))
        }
        Command::Distance { code: args, f } => {
            let code = code_of(args)?;
            let func = parse_function(&f, args.m)?;
            let distance = distance_to_code(&BitVector::from_u64(code.len(), func.words()[0]), &code)?;
            Ok(render(
                &DistanceOut {
                    code: code.name(),
                    f: func.to_hex(),
                    distance,
                },
                format,
            ))
        }
        Command::Classify { f, search } => {
            let func = parse_function(&f, 5)?;
            let class = if search { class_of_by_search(&func)? } else { class_of(&func)? };
            Ok(render(
                &ClassOut {
                    f: func.to_hex(),
                    class,
                    distance: distance_rm15(&func)?,
                    deep_hole: complement_membership_rm15(&func)?,
                },
                format,
            ))
        }
        Command::VerifyTable1 { report } => {
            let table = verify_table1()?;
            let all = VerificationReport {
                all_passed: table.all_passed(),
                tables: vec![table],
            };
            verification(all, format, report)
        }
        Command::VerifyLemma12 { report } => verification(verify_lemma12_tables()?, format, report),
        Command::Rm26Witness { y } => {
            let y = match y {
                Some(text) => u32::from_str_radix(text.trim_start_matches("0x"), 16)
                    .map_err(|e| Failure::Usage(format!("--y {text}: {e}")))?,
                None => complement_generators(5)?.enumerate_class(1)?[0] as u32,
            };
            eprintln!("searching partners of y = {y:08x} ...");
            let holes = metric_complement(&rm_code(1, 5)?)?;
            let w = find_rm26_witness(y, &holes)?;
            Ok(render(
                &WitnessOut {
                    y: hex_word(w.y.into(), 32),
                    w: hex_word(w.w.into(), 32),
                    distance: w.distance,
                    close_codewords: w.close_codewords,
                    candidates_tried: w.candidates_tried,
                },
                format,
            ))
        }
        Command::OracleCheck { max_m } => {
            if !(1..=4).contains(&max_m) {
                return Err(Failure::Usage("--max-m must be in 1..=4 (brute force over 2^(2^m) words)".into()));
            }
            let mut rows = Vec::new();
            for m in 1..=max_m {
                for k in 0..=m {
                    let n = 1usize << m;
                    let code = rm_code(k, m)?;
                    let comp = metric_complement(&code)?;
                    let regular = is_metrically_regular(&code)?;
                    let words = oracle::rm_codewords(k, m)?;
                    let brute = oracle::metric_complement(n, &words)?;
                    let oracle_radius = oracle::covering_radius(n, &words)?;
                    let oracle_regular = oracle::is_metrically_regular(n, &words)?;
                    rows.push(OracleRow {
                        code: code.name(),
                        radius: comp.radius,
                        oracle_radius,
                        complement_size: comp.size(),
                        oracle_complement_size: brute.len(),
                        regular,
                        oracle_regular,
                        agree: comp.radius == oracle_radius
                            && comp.size() == brute.len() as u128
                            && regular == oracle_regular,
                    });
                }
            }
            let text = render(&rows, format);
            if rows.iter().all(|r| r.agree) {
                Ok(text)
            } else {
                print!("{text}");
                Err(Failure::Verification("engine and oracle disagree".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.threads);
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
