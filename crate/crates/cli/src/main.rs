use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atomfib_cli::{
    atomic_via_completion, bench_row, oracle_atomic, parse_generators, parse_matrix, parse_rhs, suite, tuple, vec_json,
    Listing, ParseError, SUITES,
};
use atomfib_core::completion::{default_generators, extended_atomic_fibers, restrict_to_order, AtomicFiberSet};
use atomfib_core::convexfiber::{convex_atomic_filter, vertices};
use atomfib_core::projectlift::{self, RunOptions};
use atomfib_core::{decompose, Error, FiberEngine, IntMat, RhsContext};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "atomfib", version, about = "Atomic fibers of integer matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print per-step statistics to stderr.
    #[arg(long, global = true)]
    trace: bool,
    /// Cap on processed completion candidates.
    #[arg(long, global = true)]
    budget: Option<usize>,
}

#[derive(Args)]
struct Domain {
    /// Right-hand sides range over the lattice spanned by these generators.
    #[arg(long = "rhs-lattice", alias = "lattice", value_name = "FILE", conflicts_with = "monoid")]
    lattice: Option<PathBuf>,
    /// Right-hand sides range over the monoid spanned by these generators.
    #[arg(long = "rhs-monoid", alias = "monoid", value_name = "FILE")]
    monoid: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Atomic fibers by project-and-lift.
    Atomic {
        matrix: PathBuf,
        #[command(flatten)]
        domain: Domain,
        /// Use the completion route instead (lattice spanned by the columns only).
        #[arg(long)]
        via_completion: bool,
    },
    /// Extended atomic fibers by completion.
    Extended { matrix: PathBuf },
    /// Partially extended atomic fibers of a given order.
    Partial {
        matrix: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Decompose a fiber into atomic fibers.
    Decompose {
        matrix: PathBuf,
        #[arg(long, value_name = "B1,...,Bd")]
        rhs: String,
        #[command(flatten)]
        domain: Domain,
    },
    /// Atomic convex hulls of fibers.
    Convex { matrix: PathBuf },
    /// Benchmark tables with expected counts.
    Bench {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        /// Include rows that take hours or days.
        #[arg(long)]
        long: bool,
    },
    /// Brute-force atomic fibers within a box (nonnegative matrices only).
    Oracle {
        matrix: PathBuf,
        #[arg(long, default_value_t = 10)]
        bound: i64,
    },
}

enum Failure {
    Parse(ParseError),
    Core(Error),
    Mismatch,
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn context(a: &IntMat, domain: &Domain) -> Result<RhsContext, ParseError> {
    Ok(match (&domain.lattice, &domain.monoid) {
        (Some(p), _) => RhsContext::lattice(parse_generators(p)?),
        (None, Some(p)) => RhsContext::monoid(parse_generators(p)?),
        (None, None) => RhsContext::column_lattice(a),
    })
}

fn load(path: &Path) -> Result<(IntMat, FiberEngine), ParseError> {
    let a = parse_matrix(path)?;
    Ok((a.clone(), FiberEngine::new(a)))
}

fn print_listing(cli: &Cli, engine: &FiberEngine, set: &AtomicFiberSet) -> Result<(), Failure> {
    let listing = Listing::build(engine, &set.rhs, set.order)?;
    if cli.json {
        let mut v = listing.to_json();
        v["provenance"] = json!(format!("{:?}", set.provenance));
        println!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        print!("{}", listing.to_text());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Atomic { matrix, domain, via_completion } => {
            let (a, engine) = load(matrix)?;
            let set = if *via_completion {
                atomic_via_completion(&engine, cli.budget)?
            } else {
                let ctx = context(&a, domain)?;
                let opts = RunOptions { budget: cli.budget, audit: cli.trace, ..RunOptions::default() };
                let res = projectlift::run_with(&engine, &ctx, opts)?;
                if cli.trace {
                    for t in &res.trace {
                        eprintln!("{t:?}");
                    }
                }
                res.set
            };
            print_listing(cli, &engine, &set)
        }
        Cmd::Extended { matrix } => {
            let (_, engine) = load(matrix)?;
            let set = extended_atomic_fibers(&engine, &default_generators(&engine), cli.budget)?;
            print_listing(cli, &engine, &set)
        }
        Cmd::Partial { matrix, order } => {
            let (a, engine) = load(matrix)?;
            if *order > a.cols() {
                return Err(Error::InvalidLevel { k: *order, l: a.cols() }.into());
            }
            let ext = extended_atomic_fibers(&engine, &default_generators(&engine), cli.budget)?;
            let set = restrict_to_order(&engine, &ext, *order)?;
            print_listing(cli, &engine, &set)
        }
        Cmd::Decompose { matrix, rhs, domain } => {
            let (a, engine) = load(matrix)?;
            let b = parse_rhs(rhs)?;
            let ctx = context(&a, domain)?;
            let atoms = projectlift::run_with(&engine, &ctx, RunOptions { budget: cli.budget, ..RunOptions::default() })?.set;
            let d = decompose(&engine, &b, &atoms.rhs, a.cols(), &ctx)?;
            let used: Vec<_> = d.atoms.iter().filter(|(_, m)| *m > 0).collect();
            if cli.json {
                let v = json!({
                    "rhs": vec_json(&d.rhs),
                    "atoms": used.iter().map(|(a, m)| json!({"rhs": vec_json(a), "multiplicity": m})).collect::<Vec<_>>(),
                    "residual": vec_json(&d.residual),
                    "incomplete": d.incomplete,
                });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("{} =", tuple(&d.rhs));
                for (a, m) in used {
                    println!("  {m} x {}", tuple(a));
                }
                println!("  residual {}{}", tuple(&d.residual), if d.incomplete { " (incomplete)" } else { "" });
            }
            Ok(())
        }
        Cmd::Convex { matrix } => {
            let (a, engine) = load(matrix)?;
            let ctx = RhsContext::column_lattice(&a);
            let atoms = projectlift::run_with(&engine, &ctx, RunOptions { budget: cli.budget, ..RunOptions::default() })?.set;
            let set = convex_atomic_filter(&engine, &atoms)?;
            let polys = set.rhs.iter().map(|b| vertices(&engine, b)).collect::<Result<Vec<_>, _>>()?;
            if cli.json {
                let v = json!({
                    "count": set.len(),
                    "fibers": set.rhs.iter().zip(&polys).map(|(b, p)| json!({
                        "rhs": vec_json(b),
                        "vertices": p.vertices.iter().map(vec_json).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("# {} atomic convex hulls", set.len());
                for (b, p) in set.rhs.iter().zip(&polys) {
                    let vs: Vec<String> = p.vertices.iter().map(tuple).collect();
                    println!("{}: {}", tuple(b), vs.join(" "));
                }
            }
            Ok(())
        }
        Cmd::Bench { suite: name, long } => {
            let mut all_ok = true;
            let mut rows_json = Vec::new();
            for row in suite(name).unwrap().iter().filter(|r| *long || !r.long) {
                let rep = bench_row(row, cli.budget)?;
                all_ok &= rep.ok();
                if cli.json {
                    rows_json.push(json!({
                        "instance": rep.name,
                        "count": rep.count,
                        "expected": rep.expected,
                        "extended": rep.extended,
                        "expected_extended": rep.expected_extended,
                        "seconds": rep.elapsed.as_secs_f64(),
                        "ok": rep.ok(),
                    }));
                } else {
                    let ext = match (rep.extended, rep.expected_extended) {
                        (Some(x), Some(e)) => format!("  extended {x} (expected {e})"),
                        _ => String::new(),
                    };
                    println!(
                        "{:<16} {:>6} (expected {:>6}){ext} {:>9.3}s {}",
                        rep.name,
                        rep.count,
                        rep.expected.map_or("-".into(), |e| e.to_string()),
                        rep.elapsed.as_secs_f64(),
                        if rep.ok() { "ok" } else { "MISMATCH" }
                    );
                }
            }
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({"suite": name, "rows": rows_json})).unwrap());
            }
            if all_ok {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Cmd::Oracle { matrix, bound } => {
            let (a, _) = load(matrix)?;
            let rhs = oracle_atomic(&a, *bound)?;
            if cli.json {
                let v = json!({"bound": bound, "count": rhs.len(), "rhs": rhs.iter().map(vec_json).collect::<Vec<_>>()});
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("# {} atomic fibers with rhs in [0,{bound}]^{}", rhs.len(), a.rows());
                for b in &rhs {
                    println!("{}", tuple(b));
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(2),
        Err(Failure::Core(e @ (Error::BudgetExceeded { .. } | Error::CoverTooLarge { .. }))) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Parse(e)) => {
            eprintln!("parse error: {e}");
            ExitCode::from(4)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
