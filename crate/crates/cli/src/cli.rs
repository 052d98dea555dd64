use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use degsnd_core::generate::{gen_fixture, gen_random, Fixture, FixtureParams, GenError, RandomParams};
use degsnd_core::rounding::{solve_cut_lp, solve_cut_lp_enumerated, RoundingState, SolveError};
use degsnd_core::verify::{audit, brute_force_opt, AuditError, BruteForceError};
use degsnd_core::{solve, Instance};
use num_traits::Signed;

use crate::format::{parse_instance, parse_rational, parse_solution, write_instance, write_solution};
use crate::report::{write_audit, write_lp};
use crate::trace::{parse_trace, render_trace, write_trace, Trace};

pub const EXIT_OK: i32 = 0;
/// Verification failed, or the instance has no feasible LP or solution.
pub const EXIT_FAILED: i32 = 1;
/// Bad arguments, unreadable files, malformed input, refused guards.
pub const EXIT_USAGE: i32 = 2;
/// The solver broke one of its own invariants.
pub const EXIT_INTERNAL: i32 = 3;

/// Largest vertex count accepted by `lp --enumerate-cuts`.
pub const ENUMERATE_CUTS_LIMIT: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "degsnd", version, about = "Exact iterative rounding for degree-bounded survivable network design")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Round the instance and print a solution file.
    Solve {
        instance: PathBuf,
        /// Write the iteration trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the root LP, as finally generated, here.
        #[arg(long = "dump-lp")]
        dump_lp: Option<PathBuf>,
        /// Accepted for symmetry with `gen`; solving is deterministic and ignores it.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Audit a solution file against an instance.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Print the exact root LP value and its support size.
    Lp {
        instance: PathBuf,
        /// Write out every cut row instead of generating them.
        #[arg(long)]
        enumerate_cuts: bool,
    },
    /// Print a fixture or seeded random instance.
    Gen(GenArgs),
    /// Exact optimum by subset enumeration.
    Brute {
        instance: PathBuf,
        /// Allow degree b(v) + relax on bounded vertices.
        #[arg(long, default_value_t = 0)]
        relax: u32,
    },
    /// Render a trace file and check that |E'|+|W'| strictly decreases.
    Trace { file: PathBuf },
}

#[derive(Args, Debug)]
struct GenArgs {
    /// k4, petersen, path, cycle or random
    name: String,
    /// Vertex count (path, cycle, random).
    #[arg(long)]
    n: Option<usize>,
    /// Edge count (random).
    #[arg(long)]
    m: Option<usize>,
    /// Requirement on every pair (fixtures); 0 for none.
    #[arg(long, default_value_t = 1)]
    rho: u32,
    /// Degree bound on every vertex (fixtures).
    #[arg(long)]
    bound: Option<u32>,
    /// Cost of every edge (fixtures), integer or p/q.
    #[arg(long, default_value = "1")]
    cost: String,
    #[arg(long, default_value_t = 2)]
    max_rho: u32,
    /// Probability that a vertex is degree-bounded (random).
    #[arg(long, default_value_t = 0.5)]
    bound_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    retries: u32,
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn solve_failure(e: SolveError) -> Failure {
    match e {
        SolveError::LpInfeasible => fail(EXIT_FAILED, "LP infeasible"),
        SolveError::ResidualInfeasible { ref history, .. } => {
            let mut msg = e.to_string();
            for r in history {
                let changes: Vec<String> = r.actions.iter().map(|a| a.case.to_string()).collect();
                msg.push_str(&format!(
                    "\n  iteration {} lp_value={} action={}",
                    r.iteration,
                    r.lp_value,
                    changes.join(",")
                ));
            }
            fail(EXIT_INTERNAL, msg)
        }
        other => fail(EXIT_INTERNAL, other.to_string()),
    }
}

fn cmd_solve(
    out: &mut dyn Write,
    err: &mut dyn Write,
    instance: &Path,
    trace: Option<&Path>,
    dump_lp: Option<&Path>,
) -> Outcome {
    let inst = load_instance(instance)?;
    let run = solve(&inst).map_err(solve_failure)?;
    if let Some(path) = dump_lp {
        let root = solve_cut_lp(&RoundingState::new(&inst)).map_err(solve_failure)?;
        write_file(path, &write_lp(&root))?;
    }
    if let Some(path) = trace {
        write_file(path, &write_trace(&Trace::from_run(&inst, &run.records)))?;
    }
    let sol = &run.solution;
    out.write_all(write_solution(&sol.cost, &sol.picked).as_bytes()).map_err(io_failure)?;
    let report = audit(&inst, &sol.picked, None).map_err(audit_failure)?;
    if !report.overall() {
        writeln!(err, "audit failed:\n{}", write_audit(&report)).map_err(io_failure)?;
        return Ok(EXIT_FAILED);
    }
    Ok(EXIT_OK)
}

fn io_failure(e: std::io::Error) -> Failure {
    fail(EXIT_USAGE, format!("output error: {e}"))
}

fn audit_failure(e: AuditError) -> Failure {
    match e {
        AuditError::UnknownEdge(_) => fail(EXIT_USAGE, e.to_string()),
        AuditError::Lp(inner) => solve_failure(inner),
    }
}

fn cmd_verify(out: &mut dyn Write, err: &mut dyn Write, instance: &Path, solution: &Path) -> Outcome {
    let inst = load_instance(instance)?;
    let file =
        parse_solution(&read(solution)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", solution.display())))?;
    if let Some(&e) = file.picks.iter().find(|&&e| e >= inst.num_edges()) {
        return Err(fail(EXIT_USAGE, format!("edge id {e} not in instance ({} edges)", inst.num_edges())));
    }
    let report = audit(&inst, &file.picks, None).map_err(audit_failure)?;
    out.write_all(write_audit(&report).as_bytes()).map_err(io_failure)?;
    let mut ok = report.overall();
    for p in report.failing_pairs() {
        writeln!(err, "pair ({}, {}) needs {} edge-disjoint paths, has {}", p.u, p.v, p.required, p.achieved)
            .map_err(io_failure)?;
    }
    let actual = inst.cost_of(&file.picks);
    if actual != file.cost {
        writeln!(err, "declared cost {} differs from the picked edges' cost {actual}", file.cost)
            .map_err(io_failure)?;
        ok = false;
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_lp(out: &mut dyn Write, instance: &Path, enumerate: bool) -> Outcome {
    let inst = load_instance(instance)?;
    if enumerate && inst.n() > ENUMERATE_CUTS_LIMIT {
        return Err(fail(
            EXIT_USAGE,
            format!("--enumerate-cuts is limited to {ENUMERATE_CUTS_LIMIT} vertices, instance has {}", inst.n()),
        ));
    }
    let st = RoundingState::new(&inst);
    let result = if enumerate { solve_cut_lp_enumerated(&st) } else { solve_cut_lp(&st) };
    match result {
        Ok(lp) => {
            writeln!(out, "{}\nsupport {}", lp.value, lp.support_size()).map_err(io_failure)?;
            Ok(EXIT_OK)
        }
        Err(SolveError::LpInfeasible) => {
            writeln!(out, "infeasible").map_err(io_failure)?;
            Ok(EXIT_FAILED)
        }
        Err(e) => Err(solve_failure(e)),
    }
}

fn cmd_gen(out: &mut dyn Write, args: &GenArgs) -> Outcome {
    let gen_failure = |e: GenError| match e {
        GenError::RetriesExhausted { .. } => fail(EXIT_FAILED, e.to_string()),
        other => fail(EXIT_USAGE, other.to_string()),
    };
    let inst = if args.name == "random" {
        let (Some(n), Some(m)) = (args.n, args.m) else {
            return Err(fail(EXIT_USAGE, "random needs --n and --m"));
        };
        let params =
            RandomParams { retries: args.retries, ..RandomParams::new(n, m, args.max_rho, args.bound_fraction) };
        gen_random(&params, args.seed).map_err(gen_failure)?
    } else {
        let fixture = Fixture::parse(&args.name, args.n).map_err(gen_failure)?;
        let cost = parse_rational(&args.cost)
            .filter(|c| !c.is_negative())
            .ok_or_else(|| fail(EXIT_USAGE, format!("bad cost {:?}", args.cost)))?;
        gen_fixture(fixture, &FixtureParams { rho: args.rho, bound: args.bound, cost }).map_err(gen_failure)?
    };
    out.write_all(write_instance(&inst).as_bytes()).map_err(io_failure)?;
    Ok(EXIT_OK)
}

fn cmd_brute(out: &mut dyn Write, instance: &Path, relax: u32) -> Outcome {
    let inst = load_instance(instance)?;
    match brute_force_opt(&inst, relax) {
        Err(e @ BruteForceError::TooManyEdges { .. }) => Err(fail(EXIT_USAGE, e.to_string())),
        Ok(None) => {
            writeln!(out, "infeasible").map_err(io_failure)?;
            Ok(EXIT_FAILED)
        }
        Ok(Some(best)) => {
            out.write_all(write_solution(&best.cost, &best.edges).as_bytes()).map_err(io_failure)?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_trace(out: &mut dyn Write, file: &Path) -> Outcome {
    let trace = parse_trace(&read(file)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", file.display())))?;
    out.write_all(render_trace(&trace).as_bytes()).map_err(io_failure)?;
    Ok(if trace.first_stall().is_none() { EXIT_OK } else { EXIT_FAILED })
}

/// Runs one command line (including the program name) and returns the exit
/// code: 0 success, 1 failed check or infeasible input, 2 usage or parse
/// error, 3 internal invariant breach.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match &cli.command {
        Command::Solve { instance, trace, dump_lp, seed: _ } => {
            cmd_solve(out, err, instance, trace.as_deref(), dump_lp.as_deref())
        }
        Command::Verify { instance, solution } => cmd_verify(out, err, instance, solution),
        Command::Lp { instance, enumerate_cuts } => cmd_lp(out, instance, *enumerate_cuts),
        Command::Gen(args) => cmd_gen(out, args),
        Command::Brute { instance, relax } => cmd_brute(out, instance, *relax),
        Command::Trace { file } => cmd_trace(out, file),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
