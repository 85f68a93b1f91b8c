//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use nzflow::generators::{make, BoundaryPolicy, Family, FamilySpec};
use nzflow::groupflow::reorient;
use nzflow::hypothesis::cut_condition_bruteforce;
use nzflow::integerflow::{to_integer_flow, verify_integer_flow};
use nzflow::io::{emit_solution, parse_instance, SolutionFile};
use nzflow::oracle::{brute_force_solve, enumerate_small_instances, SearchBudget, SmallInstance};
use nzflow::solver::InvariantStats;
use nzflow::{check_instance, crt_pair, solve_with_trace, verify_solution, Instance, Multigraph, Solution};

/// Every solve in the run goes through here so criterion 7 sees all of them.
struct Ledger {
    stats: Mutex<InvariantStats>,
    failures: Mutex<Vec<String>>,
}

impl Ledger {
    fn solve(&self, inst: &Instance) -> Option<Solution> {
        match solve_with_trace(inst) {
            Ok((s, trace)) => {
                self.stats.lock().unwrap().absorb(&trace.stats);
                Some(s)
            }
            Err(e) => {
                self.failures.lock().unwrap().push(e.to_string());
                None
            }
        }
    }

    fn solve_and_verify(&self, inst: &Instance) -> Option<Solution> {
        self.solve(inst).filter(|s| verify_solution(&inst.graph, &inst.t, &inst.u, s).is_empty())
    }
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn small_valid() -> Vec<SmallInstance> {
    enumerate_small_instances(4, 7).filter(|x| x.valid).collect()
}

fn exhaustive_soundness(ledger: &Ledger, cases: &[SmallInstance]) -> Verdict {
    let start = Instant::now();
    let solved = cases.par_iter().filter(|c| ledger.solve_and_verify(&c.instance).is_some()).count();
    let took = start.elapsed();
    verdict(
        solved == cases.len() && cases.len() >= 10_000 && took < Duration::from_secs(60),
        format!("{solved}/{} valid instances solved and verified in {:.1}s", cases.len(), took.as_secs_f64()),
    )
}

fn oracle_concordance(cases: &[SmallInstance]) -> Verdict {
    let start = Instant::now();
    let found = cases
        .par_iter()
        .filter(|c| matches!(brute_force_solve(&c.instance, SearchBudget::default()), Ok(Some(_))))
        .count();
    let took = start.elapsed();
    verdict(
        found == cases.len() && took < Duration::from_secs(300),
        format!("oracle found labelings for {found}/{} valid instances in {:.1}s", cases.len(), took.as_secs_f64()),
    )
}

fn random_2ec_specs() -> Vec<FamilySpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..1000)
        .map(|i| {
            let n = rng.gen_range(10..=200usize);
            let m = rng.gen_range(n..=(3 * n).min(600));
            FamilySpec::new(Family::Random2ec { n, m }, 10_000 + i)
        })
        .collect()
}

fn flow_reproduction(ledger: &Ledger, specs: &[FamilySpec]) -> (Verdict, Vec<(Instance, Solution)>) {
    let mut times = Vec::with_capacity(specs.len());
    let mut solved = Vec::with_capacity(specs.len());
    // Sequential so that the timings are not skewed by contention.
    for spec in specs {
        let inst = make(spec).expect("generator");
        let start = Instant::now();
        let s = ledger.solve_and_verify(&inst);
        times.push(start.elapsed());
        if let Some(s) = s {
            solved.push((inst, s));
        }
    }
    times.sort();
    let median = times[times.len() / 2];
    let max = *times.last().unwrap();
    let pass = solved.len() == specs.len() && median < Duration::from_millis(100) && max < Duration::from_secs(5);
    let detail = format!(
        "{}/{} solved and verified, median {:.2}ms, max {:.2}ms",
        solved.len(),
        specs.len(),
        median.as_secs_f64() * 1e3,
        max.as_secs_f64() * 1e3
    );
    (verdict(pass, detail), solved)
}

fn bridged_generality(ledger: &Ledger) -> Verdict {
    let results: Vec<(bool, usize)> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let k = 2 + (seed % 7) as usize;
            let spec = FamilySpec::new(Family::BridgedChain { k }, seed).with_boundary(BoundaryPolicy::Random);
            let inst = make(&spec).expect("generator");
            let bridges = nzflow::multigraph::bridges(&inst.graph).len();
            (ledger.solve_and_verify(&inst).is_some(), bridges)
        })
        .collect();
    let ok = results.iter().filter(|r| r.0).count();
    let with_bridges = results.iter().filter(|r| r.1 > 0).count();
    verdict(
        ok == results.len() && with_bridges == results.len(),
        format!("{ok}/{} solved and verified, {with_bridges} have bridges", results.len()),
    )
}

fn integer_pipeline(solved: &[(Instance, Solution)], expected: usize) -> Verdict {
    let ok = solved
        .par_iter()
        .filter(|(inst, s)| {
            let z6 = crt_pair(s);
            let Ok(f) = to_integer_flow(&inst.graph, &z6) else { return false };
            verify_integer_flow(&inst.graph, &f).is_empty()
                && f.0.iter().zip(&z6).all(|(&x, z)| (x - i32::from(z.value())).rem_euclid(6) == 0)
        })
        .count();
    verdict(ok == expected, format!("{ok}/{expected} lifted to verified integer 6-flows congruent to z6"))
}

fn random_graph(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(1..=12usize);
    let m = rng.gen_range(0..=2 * n);
    let edges = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    let density = rng.gen_range(0.0..0.6);
    let u: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
    Instance::new(Multigraph::new(n, edges).unwrap(), [], u)
}

fn checker_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut agree = 0;
    let mut holds = 0;
    for _ in 0..1000 {
        let inst = random_graph(&mut rng);
        let fast = check_instance(&inst).cut_ok;
        let slow = cut_condition_bruteforce(&inst.graph, &inst.u).unwrap().holds;
        agree += usize::from(fast == slow);
        holds += usize::from(slow);
    }
    verdict(agree == 1000, format!("{agree}/1000 agree ({holds} satisfy the cut condition)"))
}

fn structural_invariants(ledger: &Ledger) -> Verdict {
    let s = *ledger.stats.lock().unwrap();
    let failures = ledger.failures.lock().unwrap();
    let exercised = [s.measure, s.subinstance, s.node_output, s.witness, s.parity, s.sign, s.t_shift, s.empty_u];
    let mut detail = format!(
        "{} broken; checks passed: measure {}, sub-instance {}, node output {}, path witness {}, \
         parity {}, sign {}, t-shift {}, empty-U closing {}",
        failures.len(),
        s.measure,
        s.subinstance,
        s.node_output,
        s.witness,
        s.parity,
        s.sign,
        s.t_shift,
        s.empty_u
    );
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    verdict(failures.is_empty() && exercised.iter().all(|&c| c > 0), detail)
}

fn metamorphic_reorientation(ledger: &Ledger) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = 0;
    for seed in 0..100u64 {
        let family = match seed % 4 {
            0 => Family::Random2ec { n: rng.gen_range(5..40), m: rng.gen_range(40..90) },
            1 => Family::BridgedChain { k: rng.gen_range(2..6) },
            2 => Family::Wheel { n: rng.gen_range(3..12) },
            _ => Family::Complete { n: rng.gen_range(3..7) },
        };
        let inst = make(&FamilySpec::new(family, seed).with_boundary(BoundaryPolicy::Random)).expect("generator");
        let flips: Vec<usize> = (0..inst.graph.edge_count()).filter(|_| rng.gen_bool(0.5)).collect();
        let Some(s) = ledger.solve_and_verify(&inst) else { continue };
        let (g2, s2) = reorient(&inst.graph, &s, &flips);
        let flipped = Instance { graph: g2, t: inst.t.clone(), u: inst.u.clone() };
        let same_verdict = check_instance(&flipped) == check_instance(&inst);
        let transported = verify_solution(&flipped.graph, &flipped.t, &flipped.u, &s2).is_empty();
        let resolved = ledger.solve_and_verify(&flipped).is_some();
        ok += usize::from(same_verdict && transported && resolved);
    }
    verdict(ok == 100, format!("{ok}/100 keep their verdict and transported labelings verify"))
}

fn determinism(ledger: &Ledger) -> Verdict {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut files: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "inst"))
        .collect();
    files.sort();
    let mut identical = 0;
    for path in &files {
        let inst = parse_instance(&fs::read_to_string(path).unwrap()).unwrap();
        let stored = fs::read_to_string(path.with_extension("sol")).unwrap();
        let runs: Vec<Option<String>> = (0..5)
            .into_par_iter()
            .map(|_| ledger.solve(&inst).map(|s| emit_solution(&SolutionFile::new(&inst, s))))
            .collect();
        identical += usize::from(runs.iter().all(|r| r.as_deref() == Some(stored.as_str())));
    }
    verdict(
        identical == files.len() && !files.is_empty(),
        format!("{identical}/{} golden instances give byte-identical solution files over 5 runs", files.len()),
    )
}

fn main() -> ExitCode {
    // The test runner passes harness flags such as `--nocapture`; none apply here.
    rayon::ThreadPoolBuilder::new().stack_size(64 << 20).build_global().unwrap();
    let ledger = Ledger { stats: Mutex::new(InvariantStats::default()), failures: Mutex::new(Vec::new()) };

    let mut results: Vec<(u8, &str, Verdict)> = Vec::new();
    let cases = small_valid();
    results.push((1, "exhaustive small-scale soundness", exhaustive_soundness(&ledger, &cases)));
    results.push((2, "oracle concordance", oracle_concordance(&cases)));
    let specs = random_2ec_specs();
    let (v3, solved) = flow_reproduction(&ledger, &specs);
    results.push((3, "2-edge-connected flows", v3));
    results.push((4, "bridged chains", bridged_generality(&ledger)));
    results.push((5, "integer 6-flow pipeline", integer_pipeline(&solved, specs.len())));
    results.push((6, "hypothesis checker equivalence", checker_equivalence()));
    results.push((8, "metamorphic reorientation", metamorphic_reorientation(&ledger)));
    results.push((9, "determinism", determinism(&ledger)));
    // Last, so it covers every solve above.
    results.push((7, "structural invariants", structural_invariants(&ledger)));
    results.sort_by_key(|r| r.0);

    let mut all = true;
    for (n, name, v) in &results {
        println!("criterion {n} {}: {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        all &= v.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
