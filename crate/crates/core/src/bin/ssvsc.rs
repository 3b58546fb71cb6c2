//! Command-line front end. JSON goes to stdout; exit status 0 means the
//! claim holds (or SAT when seeking), 1 means a counterexample was found
//! (or UNSAT when seeking), 2 means an error or an exhausted budget.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ssvsc::encoding::{Status, Target};
use ssvsc::methods::winner_report;
use ssvsc::profile::{self, Profile, DEFAULT_VOTERS};
use ssvsc::search::{self, ProveOptions};
use ssvsc::solver::{solver_command_from_env, Engine, SolveBudget};
use ssvsc::{Method, MatrixFile, OrdinalMarginMatrix, TournamentClass};

#[derive(Parser)]
#[command(name = "ssvsc", version, about = "Split Cycle / Stable Voting toolkit and SAT search")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Winners of a margin matrix under one method.
    Winners {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "ssv")]
        method: Method,
    },
    /// Check SSV against Split Cycle and SV on every linear matrix.
    Exhaustive {
        #[arg(long)]
        n: usize,
    },
    /// Build the SAT encoding, solve, and verify any model.
    Prove(ProveArgs),
    /// Grow a counterexample to more alternatives.
    Expand {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A profile whose margins equal the matrix.
    Realize {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Margin matrix of a profile.
    Margins {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Impartial Culture profiles; with --profiles > 1, Split Cycle statistics.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_VOTERS)]
        voters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        profiles: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tournament isomorphism classes: write the manifest, or sweep them.
    Classes(ClassesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Counterexample,
    MinimalCounterexample,
    SingleScWinner,
    ReversalSymmetry,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// External DIMACS solver command (default: $SOLVER_CMD, else the built-in engine).
    #[arg(long)]
    solver: Option<String>,
    /// Use the built-in engine even if $SOLVER_CMD is set.
    #[arg(long, conflicts_with = "solver")]
    embedded: bool,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Conflict budget for the built-in engine.
    #[arg(long)]
    conflicts: Option<u64>,
}

impl SolverArgs {
    fn budget(&self) -> anyhow::Result<SolveBudget> {
        let engine = match (&self.solver, self.embedded) {
            (Some(cmd), _) => Engine::External(cmd.clone()),
            (None, true) => Engine::Embedded,
            (None, false) => solver_command_from_env().map_or(Engine::Embedded, Engine::External),
        };
        let wall = match self.timeout {
            Some(t) if t.is_nan() || t <= 0.0 || t.is_infinite() => bail!("--timeout must be a positive number of seconds"),
            t => t.map(Duration::from_secs_f64),
        };
        Ok(SolveBudget { conflicts: self.conflicts, wall, engine })
    }
}

#[derive(Args)]
struct ProveArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "minimal-counterexample")]
    mode: Mode,
    /// With single-sc-winner: also require the minimal-counterexample clauses.
    #[arg(long)]
    minimal: bool,
    /// Search only tournament class `i` (index into the sorted class list).
    #[arg(long)]
    class: Option<usize>,
    /// Class manifest to index into (default: computed).
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Keep solving with blocking clauses until this many models.
    #[arg(long)]
    enumerate: Option<usize>,
    #[arg(long)]
    no_symmetry: bool,
    /// Treat SAT as the hoped-for outcome (exit 0) and UNSAT as failure.
    #[arg(long)]
    seek: bool,
    /// Write the first verified model here as a matrix file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct ClassesArgs {
    #[arg(long, default_value_t = 7)]
    n: usize,
    /// Write the manifest here (otherwise stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the index and bitstring of this matrix's majority graph.
    #[arg(long, conflicts_with = "sweep")]
    of: Option<PathBuf>,
    /// Search every class for counterexamples.
    #[arg(long)]
    sweep: bool,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// First class index to sweep.
    #[arg(long, default_value_t = 0)]
    from: usize,
    /// One past the last class index to sweep.
    #[arg(long)]
    to: Option<usize>,
    /// Worker threads (0 = logical cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    solver: SolverArgs,
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write_or_print(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_classes(n: usize, manifest: Option<&Path>) -> anyhow::Result<Vec<TournamentClass>> {
    let classes = match manifest {
        Some(p) => TournamentClass::parse_manifest(&std::fs::read_to_string(p)?)?,
        None => TournamentClass::all(n)?,
    };
    if classes.iter().any(|c| c.n() != n) {
        bail!("manifest classes are not on {n} vertices");
    }
    Ok(classes)
}

fn status_exit(status: Status, seek: bool) -> u8 {
    match (status, seek) {
        (Status::Budget, _) => 2,
        (Status::Unsat, false) | (Status::Sat, true) => 0,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Cmd::Winners { matrix, method } => {
            let m = OrdinalMarginMatrix::load(&matrix)?;
            print_json(&winner_report(&m, method)?)?;
            Ok(0)
        }
        Cmd::Exhaustive { n } => {
            let r = search::exhaustive(n)?;
            print_json(&r)?;
            Ok(u8::from(r.ssv_not_sc + r.sv_differs > 0))
        }
        Cmd::Prove(args) => prove(args),
        Cmd::Expand { fixture, n, out } => {
            let m = OrdinalMarginMatrix::load(&fixture)?.to_linear()?;
            let e = search::expand(&m, n)?;
            let file = MatrixFile::new(e.as_matrix());
            match out {
                Some(p) => {
                    write_or_print(Some(&p), &file.to_json())?;
                    print_json(&file)?;
                }
                None => print!("{}", file.to_json()),
            }
            Ok(0)
        }
        Cmd::Realize { matrix, out } => {
            let m = OrdinalMarginMatrix::load(&matrix)?;
            let p = profile::realize(&m);
            write_or_print(out.as_deref(), &(serde_json::to_string(&p)? + "\n"))?;
            Ok(0)
        }
        Cmd::Margins { profile, out } => {
            let p = Profile::load(&profile)?;
            let m = profile::margins(&p)?;
            write_or_print(out.as_deref(), &MatrixFile::new(&m).to_json())?;
            Ok(0)
        }
        Cmd::Sample { n, voters, seed, profiles, out } => {
            if profiles > 1 {
                print_json(&search::impartial_culture_stats(n, voters, profiles, seed)?)?;
            } else {
                let p = profile::sample_impartial_culture(n, voters, seed)?;
                write_or_print(out.as_deref(), &(serde_json::to_string(&p)? + "\n"))?;
            }
            Ok(0)
        }
        Cmd::Classes(args) => classes(args),
    }
}

fn prove(args: ProveArgs) -> anyhow::Result<u8> {
    let budget = args.solver.budget()?;
    let target = match (args.class, args.mode) {
        (Some(i), _) => {
            let classes = load_classes(args.n, args.manifest.as_deref())?;
            let Some(&c) = classes.get(i) else {
                bail!("class index {i} out of range (0..{})", classes.len());
            };
            Target::TournamentClass(c)
        }
        (None, Mode::Counterexample) => Target::Counterexample,
        (None, Mode::MinimalCounterexample) => Target::MinimalCounterexample,
        (None, Mode::SingleScWinner) => Target::SingleScWinner { minimal: args.minimal },
        (None, Mode::ReversalSymmetry) => Target::ReversalSymmetry,
    };
    let mut opts = ProveOptions::new(args.n, target, budget);
    opts.symmetry_breaking &= !args.no_symmetry;
    opts.enumerate = args.enumerate;
    let report = search::prove_with(&opts, |v| {
        if opts.enumerate.is_some() {
            eprintln!("model: ssv winner {}, sc winners {:?}", v.ssv_winner, v.sc_winners);
        }
    })?;
    if let (Some(p), Some(v)) = (&args.out, report.models.first()) {
        std::fs::write(p, v.matrix.to_json()).with_context(|| format!("writing {}", p.display()))?;
    }
    print_json(&report)?;
    Ok(status_exit(report.status, args.seek))
}

fn classes(args: ClassesArgs) -> anyhow::Result<u8> {
    let all = load_classes(args.n, args.manifest.as_deref())?;
    if let Some(path) = &args.of {
        let class = OrdinalMarginMatrix::load(path)?.tournament_class()?;
        let index = all.iter().position(|c| *c == class).context("class missing from the manifest")?;
        print_json(&serde_json::json!({ "index": index, "class": class }))?;
        return Ok(0);
    }
    if !args.sweep {
        write_or_print(args.out.as_deref(), &TournamentClass::manifest(&all))?;
        return Ok(0);
    }
    let budget = args.solver.budget()?;
    let to = args.to.unwrap_or(all.len()).min(all.len());
    let chosen: Vec<_> = all.iter().copied().enumerate().skip(args.from).take(to.saturating_sub(args.from)).collect();
    let results = search::class_sweep(&chosen, &budget, args.threads, |r| match r {
        Ok(c) => eprintln!("class {} {}: {:?} ({} ms)", c.index, c.class, c.status, c.elapsed_ms),
        Err(e) => eprintln!("class search failed: {e}"),
    })?;
    let mut sat = 0;
    let mut unsat = 0;
    let mut other = 0;
    let mut rows = Vec::new();
    for r in results {
        let r = r?;
        match r.status {
            Status::Sat => sat += 1,
            Status::Unsat => unsat += 1,
            Status::Budget => other += 1,
        }
        rows.push(r);
    }
    #[derive(Serialize)]
    struct Sweep {
        n: usize,
        searched: usize,
        sat: usize,
        unsat: usize,
        budget: usize,
        classes: Vec<search::ClassResult>,
    }
    print_json(&Sweep { n: args.n, searched: rows.len(), sat, unsat, budget: other, classes: rows })?;
    Ok(if other > 0 { 2 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
