//! End-to-end acceptance checks. Runs offline with the mock provider and
//! prints one PASS/FAIL line per criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::sync::Arc;
use std::time::Instant;

use llmoea::dominance::dominates;
use llmoea::harness::{ablation_delta, emit_outputs, run, run_observed, Algorithm, RunConfig, ABLATION_DELTAS};
use llmoea::llm_operator::{build_prompt, grammar, llm_variation, parse_response, select_elites, LlmSettings};
use llmoea::metrics::{hypervolume, hypervolume_monte_carlo, igd, MetricContext};
use llmoea::nsga2::{fast_nondominated_sort, rank_and_crowd, VariationParams};
use llmoea::population::{evaluate, initialize_population};
use llmoea::problems::{make_problem, true_pf_samples, DEFAULT_PF_SAMPLES, PROBLEM_NAMES};
use llmoea::providers::{ChaosProvider, MockProvider, Provider};
use llmoea::{DecisionVector, Individual, ObjectiveVector, Population, RngStream};

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn seeds() -> Vec<u64> {
    (1..=10).collect()
}

fn config(problem: &str, algorithm: Algorithm, seed: u64) -> RunConfig {
    RunConfig {
        problem: problem.into(),
        algorithm,
        seed,
        ..RunConfig::default()
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn final_hv_igd(problem: &str, algorithm: Algorithm) -> (Vec<f64>, Vec<f64>) {
    let reports: Vec<_> = seeds()
        .into_iter()
        .map(|s| run(&config(problem, algorithm, s)).expect("run"))
        .collect();
    (
        reports.iter().map(|r| r.final_hv()).collect(),
        reports.iter().map(|r| r.final_igd()).collect(),
    )
}

fn baseline_plausibility() -> Outcome {
    let (hv, igd) = final_hv_igd("ZDT1", Algorithm::Nsga2);
    let (hv, igd) = (mean(&hv), mean(&igd));
    let msg = format!("mean HV {hv:.4} (want [0.60, 0.725]), mean IGD {igd:.4} (want <= 0.08)");
    check((0.60..=0.725).contains(&hv) && igd <= 0.08, msg.clone(), msg)
}

type Snapshot = Vec<(u64, Vec<u64>, Vec<u64>)>;

fn snapshots(cfg: &RunConfig) -> Vec<Snapshot> {
    let mut seen = Vec::new();
    run_observed(cfg, None, &mut |p: &Population| {
        seen.push(
            p.members
                .iter()
                .map(|m| {
                    (
                        m.id,
                        m.x.iter().map(|v| v.to_bits()).collect(),
                        m.objectives().iter().map(|v| v.to_bits()).collect(),
                    )
                })
                .collect(),
        );
    })
    .expect("run");
    seen
}

fn gate_off_equivalence() -> Outcome {
    let mut notes = Vec::new();
    for problem in ["ZDT1", "UF1"] {
        let plain = snapshots(&config(problem, Algorithm::Nsga2, 3));
        let gated = snapshots(&RunConfig {
            delta: f64::INFINITY,
            ..config(problem, Algorithm::Nsga2Llm, 3)
        });
        if plain != gated {
            let first = plain.iter().zip(&gated).position(|(a, b)| a != b);
            return Err(format!("{problem}: populations differ (first at generation {first:?})"));
        }
        notes.push(format!("{problem}: {} generations identical", plain.len()));
    }
    Ok(notes.join(", "))
}

fn non_degradation() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for problem in ["ZDT1", "ZDT2"] {
        let plain = mean(&final_hv_igd(problem, Algorithm::Nsga2).0);
        let gated = mean(&final_hv_igd(problem, Algorithm::Nsga2Llm).0);
        pass &= gated >= plain - 0.01;
        notes.push(format!("{problem}: HV nsga2-llm {gated:.4} vs nsga2 {plain:.4}"));
    }
    let msg = notes.join("; ");
    check(pass, msg.clone(), msg)
}

fn adaptive_cost_ordering() -> Outcome {
    let mut ratios = Vec::new();
    let mut token_failures = Vec::new();
    let mut tokens = (0u64, 0u64);
    for s in seeds() {
        let adaptive = run(&config("ZDT1", Algorithm::Nsga2Llm, s)).expect("run");
        let always = run(&config("ZDT1", Algorithm::Nsga2LlmAlways, s)).expect("run");
        if adaptive.total_tokens() >= always.total_tokens() {
            token_failures.push(s);
        }
        tokens.0 += adaptive.total_tokens();
        tokens.1 += always.total_tokens();
        ratios.push(adaptive.invocations as f64 / always.invocations as f64);
    }
    let ratio = mean(&ratios);
    let msg = format!(
        "tokens adaptive {} vs always {} (seeds with adaptive >= always: {:?}); mean invocation ratio {ratio:.3} (want <= 0.5)",
        tokens.0 / 10,
        tokens.1 / 10,
        token_failures
    );
    check(token_failures.is_empty() && ratio <= 0.5, msg.clone(), msg)
}

fn brute_force_fronts(points: &[Vec<f64>]) -> Vec<BTreeSet<usize>> {
    let mut left: BTreeSet<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: BTreeSet<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominates(&points[j], &points[i])))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

fn sorting_oracle() -> Outcome {
    let mut rng = RngStream::new(5);
    for case in 0..1000 {
        let n = 1 + rng.below(64);
        let m = 2 + rng.below(2);
        let levels = 2 + rng.below(12);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| rng.below(levels) as f64).collect())
            .collect();
        let mut members: Vec<Individual> = points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut ind = Individual::new(i as u64, DecisionVector::new(vec![]));
                ind.f = Some(ObjectiveVector::new(p.clone()));
                ind
            })
            .collect();
        let got: Vec<BTreeSet<usize>> = fast_nondominated_sort(&mut members)
            .fronts
            .into_iter()
            .map(|f| f.into_iter().collect())
            .collect();
        let want = brute_force_fronts(&points);
        if got != want {
            return Err(format!("case {case} (N={n}, M={m}): partition differs"));
        }
        for (k, front) in want.iter().enumerate() {
            if front.iter().any(|&i| members[i].rank != Some(k + 1)) {
                return Err(format!("case {case}: rank field disagrees with front {}", k + 1));
            }
        }
    }
    Ok("1000 random instances match the brute-force partition".into())
}

fn hv_oracle() -> Outcome {
    let mut rng = RngStream::new(11);
    let mut worst: f64 = 0.0;
    for (m, sets) in [(2usize, 50usize), (3, 20)] {
        let ctx = MetricContext::new(vec![0.0; m], vec![1.0; m], 1.1).unwrap();
        for _ in 0..sets {
            let k = 1 + rng.below(15);
            let pts: Vec<Vec<f64>> = (0..k).map(|_| (0..m).map(|_| 1.15 * rng.unit()).collect()).collect();
            let exact = hypervolume(&pts, &ctx);
            let mc = hypervolume_monte_carlo(&pts, &ctx, 1_000_000, &mut rng);
            worst = worst.max((exact - mc).abs());
        }
    }
    let pf = true_pf_samples("ZDT1", DEFAULT_PF_SAMPLES).unwrap();
    let ctx = MetricContext::from_front(&pf).unwrap();
    let pf_hv = hypervolume(&pf, &ctx);
    let msg = format!("max |exact - MC| {worst:.2e} (want <= 2e-3); ZDT1 front HV {pf_hv:.5} (want [0.715, 0.725])");
    check(worst <= 2e-3 && (0.715..=0.725).contains(&pf_hv), msg.clone(), msg)
}

fn igd_identities() -> Outcome {
    for name in PROBLEM_NAMES {
        let pf = true_pf_samples(name, DEFAULT_PF_SAMPLES).unwrap();
        let v = igd(&pf, &pf);
        if v != 0.0 {
            return Err(format!("IGD(PF, PF) = {v} for {name}"));
        }
    }
    let mut rng = RngStream::new(13);
    let pf = true_pf_samples("ZDT1", 500).unwrap();
    for case in 0..100 {
        let mut pts: Vec<Vec<f64>> = (0..1 + rng.below(10))
            .map(|_| vec![rng.unit(), 1.5 * rng.unit()])
            .collect();
        let before = igd(&pts, &pf);
        pts.push(vec![rng.unit(), 1.5 * rng.unit()]);
        let after = igd(&pts, &pf);
        if after > before {
            return Err(format!(
                "case {case}: IGD rose from {before} to {after} after adding a point"
            ));
        }
    }
    Ok(format!(
        "IGD(PF, PF) = 0 for all {} problems; 100 additions never increased IGD",
        PROBLEM_NAMES.len()
    ))
}

fn round3(v: f64) -> f64 {
    grammar::fixed(v).parse().unwrap()
}

fn ranked_population(problem: &str, n: usize, rng: &mut RngStream) -> (llmoea::ProblemSpec, Population) {
    let spec = make_problem(problem, None).unwrap();
    let mut pop = initialize_population(&spec, n, rng);
    evaluate(&spec, &mut pop).unwrap();
    rank_and_crowd(&mut pop.members);
    (spec, pop)
}

fn prompt_round_trip() -> Outcome {
    let mut rng = RngStream::new(17);
    for case in 0..1000 {
        let problem = PROBLEM_NAMES[case % PROBLEM_NAMES.len()];
        let n = 2 + rng.below(30);
        let (spec, pop) = ranked_population(problem, n, &mut rng);
        let pool: Vec<Individual> = (0..n).map(|_| pop.members[rng.below(n)].clone()).collect();
        let l = 1 + rng.below(8);
        let elites = select_elites(&pool, l);
        let prompt = build_prompt(&elites, &spec, 3);
        let spans = grammar::extract_spans(&prompt.context).unwrap();
        let echo: String = spans
            .iter()
            .map(|s| format!("{}{s}{}\n", grammar::START, grammar::END))
            .collect();
        let parsed = match parse_response(&echo, &spec, elites.members.len()) {
            Ok(p) => p,
            Err(e) => return Err(format!("case {case} ({problem}): {e}")),
        };
        for (got, e) in parsed.vectors.iter().zip(&elites.members) {
            let want: Vec<f64> = e.x.iter().map(|v| round3(*v)).collect();
            if got.as_slice() != want.as_slice() {
                return Err(format!("case {case} ({problem}): {got:?} != {want:?}"));
            }
        }
    }

    let mut fallbacks = 0;
    let mut calls = 0;
    for (k, problem) in ["ZDT1", "UF2", "UF9"].iter().enumerate() {
        let n = 20;
        let (spec, pop) = ranked_population(problem, n, &mut rng);
        let chaos = ChaosProvider::new(Arc::new(MockProvider::new(true)), k as u64, 0.6);
        for g in 0..100 {
            let mut p = pop.clone();
            let out = llm_variation(
                &mut p,
                &spec,
                &VariationParams::default(),
                &chaos,
                &LlmSettings::default(),
                g,
                true,
                &mut rng,
            )
            .map_err(|e| format!("{problem}: {e}"))?;
            if out.children.len() != n {
                return Err(format!("{problem}: {} children instead of {n}", out.children.len()));
            }
            fallbacks += usize::from(out.fell_back);
            calls += out.exchanges.len();
        }
    }
    for seed in 1..=3 {
        let cfg = RunConfig {
            pop_size: 40,
            max_evaluations: 2000,
            ..config("UF4", Algorithm::Nsga2LlmAlways, seed)
        };
        let chaos: Arc<dyn Provider> = Arc::new(ChaosProvider::new(Arc::new(MockProvider::new(true)), seed, 0.8));
        let mut sizes_ok = true;
        let r = run_observed(&cfg, Some(chaos), &mut |p: &Population| sizes_ok &= p.len() == 40)
            .map_err(|e| format!("chaos run failed: {e}"))?;
        if !sizes_ok || r.log.len() < 2 {
            return Err("chaos run produced a wrong-sized population".into());
        }
    }
    Ok(format!(
        "1000 elite sets recovered to 3 decimals; chaos fuzzing: {calls} calls, {fallbacks} fallbacks, offspring always size N"
    ))
}

fn ablation_mechanics() -> Outcome {
    let problems: Vec<String> = ["UF1", "UF2", "UF3"].iter().map(|s| s.to_string()).collect();
    let report =
        ablation_delta(&RunConfig::default(), &problems, &ABLATION_DELTAS, &seeds()).map_err(|e| e.to_string())?;
    let table: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("delta {}: {:.1} calls", r.delta, r.mean_invocations))
        .collect();
    let violations = report.monotonicity_violations();
    let msg = format!(
        "{} rows ({}); {} (seed, problem) monotonicity violations{}",
        report.rows.len(),
        table.join(", "),
        violations.len(),
        violations
            .first()
            .map(|v| format!(", e.g. {} seed {} delta {} < {}", v.0, v.1, v.2, v.3))
            .unwrap_or_default()
    );
    check(report.rows.len() == 5 && violations.is_empty(), msg.clone(), msg)
}

fn determinism() -> Outcome {
    let cases = [
        config("ZDT1", Algorithm::Nsga2Llm, 7),
        config("UF8", Algorithm::Nsga2LlmAlways, 2),
        RunConfig {
            free_llm_evals: true,
            ..config("ZDT3", Algorithm::Nsga2Llm, 4)
        },
    ];
    let dir = tempfile::tempdir().unwrap();
    for (k, cfg) in cases.iter().enumerate() {
        let mut texts = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("case{k}-{rep}"));
            let paths = emit_outputs(&run(cfg).unwrap(), &out, true).unwrap();
            texts.push([
                fs::read(&paths.metrics).unwrap(),
                fs::read(&paths.front).unwrap(),
                fs::read(&paths.log).unwrap(),
            ]);
        }
        if texts[0] != texts[1] {
            return Err(format!(
                "{} {} seed {}: outputs differ",
                cfg.problem, cfg.algorithm, cfg.seed
            ));
        }
    }
    Ok(format!("{} configurations replayed byte-identically", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("baseline plausibility", baseline_plausibility),
        ("gate-off equivalence", gate_off_equivalence),
        ("non-degradation with mock provider", non_degradation),
        ("adaptive cost ordering", adaptive_cost_ordering),
        ("sorting oracle", sorting_oracle),
        ("hypervolume oracle", hv_oracle),
        ("IGD identities", igd_identities),
        ("prompt round-trip and chaos fuzzing", prompt_round_trip),
        ("ablation mechanics", ablation_mechanics),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let label = format!("{} {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|p| label.contains(p.as_str())) {
            continue;
        }
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {label}: PASS ({secs:.1} s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {label}: FAIL ({secs:.1} s) {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
