use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use nzflow::generators::{self, BoundaryPolicy, Family, FamilySpec};
use nzflow::hypothesis::HypothesisReport;
use nzflow::integerflow::{to_integer_flow, verify_integer_flow};
use nzflow::io::{emit_instance, emit_solution, parse_instance, parse_solution, to_dot, SolutionFile};
use nzflow::oracle::{brute_force_solve, SearchBudget};
use nzflow::{check_instance, crt_pair, solve_with_trace, verify_solution, Instance, SolveError};

/// Deep recursions on long paths need more than the default main-thread stack.
const STACK_BYTES: usize = 1 << 30;

#[derive(Parser)]
#[command(name = "nzflow", version, about = "Z2 x Z3 labelings with prescribed boundary supports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether an instance satisfies the hypotheses
    Check {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve an instance and write a solution file
    Solve {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the recursion trace to stderr
        #[arg(long)]
        trace: bool,
    },
    /// Check a solution file against an instance
    Verify { instance: PathBuf, solution: PathBuf },
    /// Exhaustive search for a solution
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = SearchBudget::default().max_edges)]
        max_edges: usize,
    },
    /// Turn a solution of a T = U = ∅ instance into an integer 6-flow
    Convert {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate an instance: cycle N | theta A B C | wheel N | complete N | petersen |
    /// random-2ec N M | bridged-chain K
    Gen {
        family: String,
        params: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Boundary::Empty)]
        boundary: Boundary,
        /// With `--boundary sized`: |U|
        #[arg(long, default_value_t = 0)]
        u_size: usize,
        /// With `--boundary sized`: |T|
        #[arg(long, default_value_t = 0)]
        t_size: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Graphviz text, edges labelled (phi2,phi3) when a solution is given
    Dot { instance: PathBuf, solution: Option<PathBuf> },
    /// Solve and verify batches of random 2-edge-connected instances
    Bench {
        /// Vertex counts; each instance gets about 3n edges
        #[arg(long, value_delimiter = ',', default_values_t = [25, 50, 100, 200])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum Boundary {
    Empty,
    Random,
    Sized,
}

enum Failure {
    /// Exit 1: the input was understood but the answer is negative.
    Domain(String),
    /// Exit 2: bad arguments or unreadable input.
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    parse_instance(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_solution(path: &Path, inst: &Instance) -> anyhow::Result<SolutionFile> {
    let file = parse_solution(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))?;
    file.check_against(inst).with_context(|| format!("checking {}", path.display()))?;
    Ok(file)
}

fn records(r: &HypothesisReport) -> String {
    let mut out = String::new();
    for (key, ok) in [
        ("connected", r.connected),
        ("containment_ok", r.containment_ok),
        ("parity_ok", r.parity_ok),
        ("u_size_ok", r.u_size_ok),
        ("cut_ok", r.cut_ok),
        ("valid", r.is_valid()),
    ] {
        out.push_str(&format!("{key} {ok}\n"));
    }
    if let Some(w) = &r.witness {
        out.push_str(&format!("witness {w}\n"));
    }
    out
}

fn check(instance: &Path, format: Format) -> Outcome {
    let report = check_instance(&load_instance(instance)?);
    match format {
        Format::Text => println!("{report}"),
        Format::Records => print!("{}", records(&report)),
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::Domain("hypotheses not met".into()))
    }
}

fn solve(instance: &Path, output: Option<&Path>, trace: bool) -> Outcome {
    let inst = load_instance(instance)?;
    let (solution, rec) = match solve_with_trace(&inst) {
        Ok(x) => x,
        Err(SolveError::HypothesisViolated(r)) => return Err(Failure::Domain(r.to_string())),
        Err(e @ SolveError::InternalInvariantBroken(_)) => return Err(Failure::Domain(e.to_string())),
    };
    if trace {
        eprint!("{}", rec.render());
    }
    // solve_with_trace already verified; this guards the file we actually write.
    if let Some(v) = verify_solution(&inst.graph, &inst.t, &inst.u, &solution).first() {
        return Err(Failure::Domain(format!("refusing to write a rejected labeling: {v}")));
    }
    write_output(output, &emit_solution(&SolutionFile::new(&inst, solution)))?;
    Ok(())
}

fn verify(instance: &Path, solution: &Path) -> Outcome {
    let inst = load_instance(instance)?;
    let file = parse_solution(&read_input(solution)?).with_context(|| format!("parsing {}", solution.display()))?;
    if let Err(e) = file.check_against(&inst) {
        println!("{e}");
        return Err(Failure::Domain("solution does not match instance".into()));
    }
    let mut problems: Vec<String> =
        verify_solution(&inst.graph, &inst.t, &inst.u, &file.solution).iter().map(ToString::to_string).collect();
    if let Some(z6) = &file.z6 {
        if *z6 != crt_pair(&file.solution) {
            problems.push("z6 does not match (phi2, phi3)".into());
        }
    }
    if let Some(f) = &file.integer_flow {
        problems.extend(verify_integer_flow(&inst.graph, f).iter().map(ToString::to_string));
        if let Some(z6) = &file.z6 {
            if let Some(e) = (0..z6.len()).find(|&e| (f.0[e] - i32::from(z6[e].value())).rem_euclid(6) != 0) {
                problems.push(format!("integer_flow at edge {e} is not congruent to z6"));
            }
        }
    }
    if problems.is_empty() {
        println!("ok");
        Ok(())
    } else {
        for p in &problems {
            println!("{p}");
        }
        Err(Failure::Domain(format!("{} violations", problems.len())))
    }
}

fn oracle(instance: &Path, max_edges: usize) -> Outcome {
    let inst = load_instance(instance)?;
    let budget = SearchBudget { max_edges, ..SearchBudget::default() };
    match brute_force_solve(&inst, budget).map_err(|e| anyhow!(e))? {
        Some(s) => {
            print!("{}", emit_solution(&SolutionFile::new(&inst, s)));
            Ok(())
        }
        None => {
            println!("infeasible");
            Err(Failure::Domain("no labeling exists".into()))
        }
    }
}

fn convert(instance: &Path, solution: &Path, output: Option<&Path>) -> Outcome {
    let inst = load_instance(instance)?;
    if !inst.t.is_empty() || !inst.u.is_empty() {
        return Err(Failure::Domain("conversion needs T and U empty".into()));
    }
    let mut file = load_solution(solution, &inst)?;
    if let Some(v) = verify_solution(&inst.graph, &inst.t, &inst.u, &file.solution).first() {
        return Err(Failure::Domain(format!("solution rejected: {v}")));
    }
    let z6 = crt_pair(&file.solution);
    let flow = to_integer_flow(&inst.graph, &z6).map_err(|e| Failure::Domain(e.to_string()))?;
    file.z6 = Some(z6);
    file.integer_flow = Some(flow);
    write_output(output, &emit_solution(&file))?;
    Ok(())
}

fn family(name: &str, params: &[usize]) -> anyhow::Result<Family> {
    let want = |k: usize| {
        if params.len() == k {
            Ok(())
        } else {
            Err(anyhow!("`{name}` takes {k} parameters, got {}", params.len()))
        }
    };
    Ok(match name {
        "cycle" => want(1).map(|_| Family::Cycle { n: params[0] })?,
        "theta" => want(3).map(|_| Family::Theta { a: params[0], b: params[1], c: params[2] })?,
        "wheel" => want(1).map(|_| Family::Wheel { n: params[0] })?,
        "complete" => want(1).map(|_| Family::Complete { n: params[0] })?,
        "petersen" => want(0).map(|_| Family::Petersen)?,
        "random-2ec" => want(2).map(|_| Family::Random2ec { n: params[0], m: params[1] })?,
        "bridged-chain" => want(1).map(|_| Family::BridgedChain { k: params[0] })?,
        _ => bail!("unknown family `{name}`"),
    })
}

fn gen(
    name: &str,
    params: &[usize],
    seed: u64,
    boundary: Boundary,
    sizes: (usize, usize),
    output: Option<&Path>,
) -> Outcome {
    let boundary = match boundary {
        Boundary::Empty => BoundaryPolicy::Empty,
        Boundary::Random => BoundaryPolicy::Random,
        Boundary::Sized => BoundaryPolicy::Sized { u: sizes.0, t: sizes.1 },
    };
    let spec = FamilySpec::new(family(name, params)?, seed).with_boundary(boundary);
    let inst = generators::make(&spec).map_err(|e| anyhow!(e))?;
    write_output(output, &emit_instance(&inst))?;
    Ok(())
}

fn dot(instance: &Path, solution: Option<&Path>) -> Outcome {
    let inst = load_instance(instance)?;
    let sol = solution.map(|p| load_solution(p, &inst)).transpose()?;
    print!("{}", to_dot(&inst, sol.as_ref().map(|f| &f.solution)));
    Ok(())
}

fn bench(sizes: &[usize], count: usize, seed: u64) -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().stack_size(STACK_BYTES / 16).build().context("starting worker pool")?;
    pool.install(|| bench_in_pool(sizes, count, seed))
}

fn bench_in_pool(sizes: &[usize], count: usize, seed: u64) -> Outcome {
    println!("{:>6} {:>6} {:>6} {:>6} {:>10} {:>10}", "n", "m", "count", "ok", "median_ms", "max_ms");
    let mut all_ok = true;
    for &n in sizes {
        let m = 3 * n;
        let runs: Vec<Result<f64, String>> = (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let spec = FamilySpec::new(Family::Random2ec { n, m }, seed.wrapping_add(i));
                let inst = generators::make(&spec).map_err(|e| e.to_string())?;
                let start = Instant::now();
                let s = nzflow::solve(&inst).map_err(|e| e.to_string())?;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                match verify_solution(&inst.graph, &inst.t, &inst.u, &s).first() {
                    None => Ok(ms),
                    Some(v) => Err(v.to_string()),
                }
            })
            .collect();
        let mut times: Vec<f64> = runs.iter().filter_map(|r| r.as_ref().ok().copied()).collect();
        times.sort_by(f64::total_cmp);
        let median = times.get(times.len() / 2).copied().unwrap_or(f64::NAN);
        let max = times.last().copied().unwrap_or(f64::NAN);
        println!("{n:>6} {m:>6} {count:>6} {:>6} {median:>10.3} {max:>10.3}", times.len());
        for e in runs.iter().filter_map(|r| r.as_ref().err()) {
            eprintln!("n={n}: {e}");
        }
        all_ok &= times.len() == count;
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Domain("some instances failed".into()))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { instance, format } => check(&instance, format),
        Command::Solve { instance, output, trace } => solve(&instance, output.as_deref(), trace),
        Command::Verify { instance, solution } => verify(&instance, &solution),
        Command::Oracle { instance, max_edges } => oracle(&instance, max_edges),
        Command::Convert { instance, solution, output } => convert(&instance, &solution, output.as_deref()),
        Command::Gen { family, params, seed, boundary, u_size, t_size, output } => {
            gen(&family, &params, seed, boundary, (u_size, t_size), output.as_deref())
        }
        Command::Dot { instance, solution } => dot(&instance, solution.as_deref()),
        Command::Bench { sizes, count, seed } => bench(&sizes, count, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || run(cli))
        .expect("spawning worker thread")
        .join()
        .unwrap_or_else(|_| Err(Failure::Domain("solver panicked".into())));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("nzflow: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("nzflow: {e:#}");
            ExitCode::from(2)
        }
    }
}
