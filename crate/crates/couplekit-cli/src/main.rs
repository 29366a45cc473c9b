//! Batch command-line front end: parses couple documents, computes K-curves
//! and orbit constructions, and runs the property report suites.
//!
//! Exit codes: 0 success / all-pass, 1 property failure, 2 input error,
//! 3 compute error, 4 unsupported operation.

// `!(x > 0.0)` deliberately rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod formats;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use couplekit::couple::{Couple, Exponent};
use couplekit::kfun;
use couplekit::orbit;
use rayon::prelude::*;

use formats::{curve_csv, matrix_export, CoupleFile, CurveMeta};

#[derive(Parser)]
#[command(
    name = "couplekit",
    about = "K-functionals, orbit tests and interpolation reports on weighted sequence couples",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the K-curve of an element: exact breakpoints when a closed
    /// form applies, log-spaced samples otherwise.
    KCurve {
        /// Couple document (JSON).
        file: PathBuf,
        /// Name of the element inside the document.
        #[arg(long)]
        element: String,
        /// The K_p parameter: a number or "inf".
        #[arg(long, default_value = "1")]
        p: String,
        /// Emit the exact breakpoint representation (K_1 closed forms only).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 0.015625)]
        t_min: f64,
        #[arg(long, default_value_t = 64.0)]
        t_max: f64,
        #[arg(long, default_value_t = 49)]
        points: usize,
        /// Solver backend: auto, general, l1-linf or equal-exponent.
        #[arg(long, default_value = "auto")]
        solver: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Test the domination condition between two elements and optionally
    /// construct the witnessing operator (unweighted {l1, linf} only).
    Orbit {
        file_a: PathBuf,
        #[arg(long)]
        element_a: String,
        file_b: PathBuf,
        #[arg(long)]
        element_b: String,
        /// Construct the substochastic operator with T a = b.
        #[arg(long)]
        construct: bool,
        /// Write the operator document to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a property suite on the document's couple and elements.
    Report {
        file: PathBuf,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Seed for the deterministic random corpus.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    Norms,
    Duality,
    Subcouple,
    FundamentalLemma,
    Interp,
}

enum Failure {
    Property,
    Input(String),
    Compute(String),
    Unsupported(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Property => ExitCode::from(1),
            Failure::Input(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Failure::Compute(msg) => {
                eprintln!("compute error: {msg}");
                ExitCode::from(3)
            }
            Failure::Unsupported(msg) => {
                eprintln!("unsupported: {msg}");
                ExitCode::from(4)
            }
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the downstream pipe closes (e.g. `| head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    if let Ok(threads) = std::env::var("COUPLEKIT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.exit(),
    }
}

fn load(path: &PathBuf) -> Result<(CoupleFile, Couple), Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file =
        CoupleFile::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let couple = file.to_couple().map_err(Failure::Input)?;
    Ok((file, couple))
}

fn parse_exponent(text: &str) -> Result<Exponent, Failure> {
    if text == "inf" {
        return Ok(Exponent::Infinity);
    }
    let p: f64 = text
        .parse()
        .map_err(|_| Failure::Input(format!("cannot parse exponent {text:?}")))?;
    Exponent::new(p).map_err(|e| Failure::Input(e.to_string()))
}

fn write_out(output: Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(&path, content)
            .map_err(|e| Failure::Compute(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::KCurve {
            file,
            element,
            p,
            exact,
            t_min,
            t_max,
            points,
            solver,
            output,
        } => {
            let (doc, couple) = load(&file)?;
            let a = doc.element(&element).map_err(Failure::Input)?;
            let p = parse_exponent(&p)?;
            if !(t_min > 0.0) {
                return Err(Failure::Input("t must be positive".into()));
            }
            if !(t_max > t_min) || points < 2 {
                return Err(Failure::Input(
                    "the grid needs t-max > t-min and at least two points".into(),
                ));
            }
            let hash = doc.hash();
            if exact {
                if p != Exponent::Finite(1.0) {
                    return Err(Failure::Unsupported(
                        "exact curves exist for K = K_1 only; drop --exact or set --p 1".into(),
                    ));
                }
                let curve = kfun::k_curve(&couple, a).ok_or_else(|| {
                    Failure::Unsupported(
                        "no closed-form K-curve for this exponent pattern; drop --exact".into(),
                    )
                })?;
                let rows: Vec<(f64, f64)> = curve
                    .breakpoints()
                    .iter()
                    .copied()
                    .zip(curve.values().iter().copied())
                    .collect();
                let meta = CurveMeta {
                    couple_hash: &hash,
                    element: &element,
                    functional: "K",
                    p: "1".into(),
                    exact: true,
                };
                return write_out(output, &curve_csv(&meta, &rows, Some(&curve)));
            }
            let strategy = match solver.as_str() {
                "auto" => None,
                name => Some(kfun::strategy(name).map_err(|e| Failure::Input(e.to_string()))?),
            };
            let grid: Vec<f64> = (0..points)
                .map(|i| t_min * (t_max / t_min).powf(i as f64 / (points - 1) as f64))
                .collect();
            let rows: Result<Vec<(f64, f64)>, Failure> = grid
                .par_iter()
                .map(|&t| {
                    let s = strategy.unwrap_or_else(|| kfun::auto_select(&couple, p));
                    if !s.supports(&couple, p) {
                        return Err(Failure::Unsupported(format!(
                            "solver {} does not support this couple/exponent",
                            s.name()
                        )));
                    }
                    s.evaluate(&couple, a, t, p, 1e-9)
                        .map(|r| (t, r.value))
                        .map_err(|e| Failure::Compute(e.to_string()))
                })
                .collect();
            let meta = CurveMeta {
                couple_hash: &hash,
                element: &element,
                functional: if p == Exponent::Finite(1.0) {
                    "K"
                } else {
                    "K_p"
                },
                p: format!("{p}"),
                exact: false,
            };
            write_out(output, &curve_csv(&meta, &rows?, None))
        }
        Command::Orbit {
            file_a,
            element_a,
            file_b,
            element_b,
            construct,
            output,
        } => {
            let (doc_a, couple_a) = load(&file_a)?;
            let (doc_b, couple_b) = load(&file_b)?;
            let a = doc_a.element(&element_a).map_err(Failure::Input)?;
            let b = doc_b.element(&element_b).map_err(Failure::Input)?;
            let report = orbit::dominates(&couple_a, a, &couple_b, b)
                .map_err(|e| Failure::Compute(e.to_string()))?;
            match (report.holds, report.witness) {
                (true, _) => println!("DOMINATES margin={:.6e}", report.margin),
                (false, Some(t)) => println!("VIOLATED witness t={t:.6e}"),
                (false, None) => println!("VIOLATED"),
            }
            if !construct {
                return Ok(());
            }
            if !couple_a.is_unweighted_l1_linf() || !couple_b.is_unweighted_l1_linf() {
                return Err(Failure::Unsupported(
                    "construction not supported for this couple (need unweighted {l1, linf})"
                        .into(),
                ));
            }
            if !report.holds {
                eprintln!("construction impossible: the domination condition fails");
                return Err(Failure::Property);
            }
            let op = orbit::hlp_construct(a, b).map_err(|e| Failure::Compute(e.to_string()))?;
            let c = &op.certificate;
            println!(
                "CONSTRUCTED t-transforms={} max-col-sum={:.12} max-row-sum={:.12} \
                 reconstruction-error={:.3e}",
                c.t_transform_count, c.max_col_sum, c.max_row_sum, c.reconstruction_error
            );
            let comments = vec![
                ("source-hash".to_string(), doc_a.hash()),
                ("target-hash".to_string(), doc_b.hash()),
                ("element-a".to_string(), element_a),
                ("element-b".to_string(), element_b),
                ("max-col-sum".to_string(), format!("{}", c.max_col_sum)),
                ("max-row-sum".to_string(), format!("{}", c.max_row_sum)),
                (
                    "reconstruction-error".to_string(),
                    format!("{}", c.reconstruction_error),
                ),
            ];
            write_out(output, &matrix_export(&op.map, &comments))
        }
        Command::Report { file, suite, seed } => {
            let (doc, couple) = load(&file)?;
            println!("# couplekit report: couple-hash {} seed {seed}", doc.hash());
            let run = match suite {
                Suite::Norms => report::norms(&doc, &couple, seed),
                Suite::Duality => report::duality(&doc, &couple, seed),
                Suite::Subcouple => report::subcouple(&doc, &couple, seed),
                Suite::FundamentalLemma => report::fundamental_lemma(&doc, &couple, seed),
                Suite::Interp => report::interp(&doc, &couple, seed),
            };
            if run.all_pass {
                println!("ALL PASS");
                Ok(())
            } else {
                println!("FAILURES PRESENT");
                Err(Failure::Property)
            }
        }
    }
}
