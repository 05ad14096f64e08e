use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Algorithm, RunConfig};
use super::output::{emit_outputs, read_metrics_csv, METRICS_FILE};
use super::run::{run, SeriesRow};
use crate::error::{Error, Result};

/// Final numbers of one run, as recoverable from its metrics CSV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub final_hv: f64,
    pub final_igd: f64,
    pub tokens: u64,
    pub invocations: usize,
    pub evaluations: usize,
    pub generations: usize,
}

impl RunSummary {
    pub fn from_series(rows: &[SeriesRow]) -> Option<Self> {
        let last = rows.last()?;
        Some(Self {
            final_hv: last.hv,
            final_igd: last.igd,
            tokens: last.tokens,
            invocations: rows.iter().filter(|r| r.invoked).count(),
            evaluations: last.evaluations,
            generations: rows.len(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub problem: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub delta: f64,
    pub result: std::result::Result<RunSummary, String>,
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// `7.1777e-1 (5.50e-4)`
pub fn format_mean_std(mean: f64, std: f64) -> String {
    format!("{mean:.4e} ({std:.2e})")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub failures: usize,
    pub hv_mean: f64,
    pub hv_std: f64,
    pub igd_mean: f64,
    pub igd_std: f64,
    pub tokens_mean: f64,
    pub invocations_mean: f64,
}

impl SummaryRow {
    pub fn hv_cell(&self) -> String {
        format_mean_std(self.hv_mean, self.hv_std)
    }

    pub fn igd_cell(&self) -> String {
        format_mean_std(self.igd_mean, self.igd_std)
    }
}

fn summarize(problem: &str, algorithm: Algorithm, runs: &[std::result::Result<RunSummary, String>]) -> SummaryRow {
    let ok: Vec<&RunSummary> = runs.iter().filter_map(|r| r.as_ref().ok()).collect();
    let col = |f: fn(&RunSummary) -> f64| ok.iter().map(|r| f(r)).collect::<Vec<f64>>();
    let (hv_mean, hv_std) = mean_std(&col(|r| r.final_hv));
    let (igd_mean, igd_std) = mean_std(&col(|r| r.final_igd));
    SummaryRow {
        problem: problem.to_string(),
        algorithm,
        runs: runs.len(),
        failures: runs.len() - ok.len(),
        hv_mean,
        hv_std,
        igd_mean,
        igd_std,
        tokens_mean: mean_std(&col(|r| r.tokens as f64)).0,
        invocations_mean: mean_std(&col(|r| r.invocations as f64)).0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchReport {
    pub outcomes: Vec<RunOutcome>,
    /// One row per (problem, algorithm), in request order.
    pub rows: Vec<SummaryRow>,
}

pub fn run_dir(root: &Path, problem: &str, algorithm: Algorithm, seed: u64) -> PathBuf {
    root.join(problem).join(algorithm.as_str()).join(format!("seed-{seed}"))
}

fn single(
    template: &RunConfig,
    problem: &str,
    algorithm: Algorithm,
    seed: u64,
    delta: f64,
    out: Option<PathBuf>,
) -> RunOutcome {
    let config = RunConfig {
        problem: problem.to_string(),
        algorithm,
        seed,
        delta,
        out_dir: out,
        ..template.clone()
    };
    let result = run(&config).and_then(|report| {
        if let Some(dir) = &config.out_dir {
            emit_outputs(&report, dir, config.svg)?;
        }
        let rows: Vec<SeriesRow> = report.series().copied().collect();
        Ok(RunSummary::from_series(&rows).expect("non-empty series"))
    });
    if let Err(e) = &result {
        log::warn!("{problem} {algorithm} seed {seed} failed: {e}");
    }
    RunOutcome {
        problem: problem.to_string(),
        algorithm,
        seed,
        delta,
        result: result.map_err(|e| e.to_string()),
    }
}

/// Independent runs over every (problem, algorithm, seed), in parallel.
/// A failed run is recorded and does not stop the batch. When the template
/// has an output directory, each run writes into
/// `<out>/<problem>/<algorithm>/seed-<k>/` and `summary.csv` goes to `<out>`.
pub fn run_batch(
    template: &RunConfig,
    problems: &[String],
    algorithms: &[Algorithm],
    seeds: &[u64],
) -> Result<BatchReport> {
    if seeds.is_empty() || problems.is_empty() || algorithms.is_empty() {
        return Err(Error::Config(
            "a batch needs at least one problem, algorithm and seed".into(),
        ));
    }
    let jobs: Vec<(&String, Algorithm, u64)> = problems
        .iter()
        .flat_map(|p| {
            algorithms
                .iter()
                .flat_map(move |&a| seeds.iter().map(move |&s| (p, a, s)))
        })
        .collect();
    let root = template.out_dir.clone();
    let outcomes: Vec<RunOutcome> = jobs
        .par_iter()
        .map(|&(p, a, s)| {
            single(
                template,
                p,
                a,
                s,
                template.delta,
                root.as_ref().map(|r| run_dir(r, p, a, s)),
            )
        })
        .collect();
    let rows = group_rows(&outcomes);
    if let Some(root) = &root {
        write_summary_csv(&root.join("summary.csv"), &rows)?;
    }
    Ok(BatchReport { outcomes, rows })
}

fn group_rows(outcomes: &[RunOutcome]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = Vec::new();
    let mut keys: Vec<(String, Algorithm)> = Vec::new();
    for o in outcomes {
        let key = (o.problem.clone(), o.algorithm);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    for (p, a) in keys {
        let runs: Vec<_> = outcomes
            .iter()
            .filter(|o| o.problem == p && o.algorithm == a)
            .map(|o| o.result.clone())
            .collect();
        rows.push(summarize(&p, a, &runs));
    }
    rows
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record([
        "problem",
        "algorithm",
        "runs",
        "failures",
        "hv",
        "igd",
        "tokens_mean",
        "invocations_mean",
    ])
    .map_err(|e| Error::csv(path, e))?;
    for r in rows {
        w.write_record([
            r.problem.clone(),
            r.algorithm.to_string(),
            r.runs.to_string(),
            r.failures.to_string(),
            r.hv_cell(),
            r.igd_cell(),
            format!("{:.1}", r.tokens_mean),
            format!("{:.2}", r.invocations_mean),
        ])
        .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Rebuilds the summary rows of a batch from the per-run metrics CSVs under
/// `root`.
pub fn summary_from_dir(
    root: &Path,
    problems: &[String],
    algorithms: &[Algorithm],
    seeds: &[u64],
) -> Result<Vec<SummaryRow>> {
    let mut rows = Vec::new();
    for p in problems {
        for &a in algorithms {
            let mut runs = Vec::new();
            for &s in seeds {
                let path = run_dir(root, p, a, s).join(METRICS_FILE);
                runs.push(match path.exists() {
                    true => {
                        let series = read_metrics_csv(&path)?;
                        RunSummary::from_series(&series).ok_or_else(|| "empty metrics file".to_string())
                    }
                    false => Err("missing metrics file".to_string()),
                });
            }
            rows.push(summarize(p, a, &runs));
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub delta: f64,
    pub runs: usize,
    pub mean_tokens: f64,
    pub mean_igd: f64,
    pub mean_invocations: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AblationReport {
    pub rows: Vec<AblationRow>,
    pub outcomes: Vec<RunOutcome>,
}

impl AblationReport {
    /// (problem, seed) pairs where a larger threshold invoked the LLM more
    /// often than a smaller one, with the two thresholds.
    pub fn monotonicity_violations(&self) -> Vec<(String, u64, f64, f64)> {
        let mut out = Vec::new();
        for a in &self.outcomes {
            for b in &self.outcomes {
                if a.problem != b.problem || a.seed != b.seed || !(a.delta < b.delta) {
                    continue;
                }
                if let (Ok(ra), Ok(rb)) = (&a.result, &b.result) {
                    if rb.invocations > ra.invocations {
                        out.push((a.problem.clone(), a.seed, a.delta, b.delta));
                    }
                }
            }
        }
        out
    }
}

/// Gated runs for every threshold, problem and seed. One row per threshold
/// with mean tokens, final IGD and invocations across problems and seeds.
pub fn ablation_delta(
    template: &RunConfig,
    problems: &[String],
    deltas: &[f64],
    seeds: &[u64],
) -> Result<AblationReport> {
    if deltas.is_empty() || problems.is_empty() || seeds.is_empty() {
        return Err(Error::Config(
            "an ablation needs at least one threshold, problem and seed".into(),
        ));
    }
    let jobs: Vec<(f64, &String, u64)> = deltas
        .iter()
        .flat_map(|&d| problems.iter().flat_map(move |p| seeds.iter().map(move |&s| (d, p, s))))
        .collect();
    let outcomes: Vec<RunOutcome> = jobs
        .par_iter()
        .map(|&(d, p, s)| single(template, p, Algorithm::Nsga2Llm, s, d, None))
        .collect();
    if let Some(failed) = outcomes.iter().find(|o| o.result.is_err()) {
        return Err(Error::Config(format!(
            "ablation run {} seed {} delta {} failed: {}",
            failed.problem,
            failed.seed,
            failed.delta,
            failed.result.as_ref().unwrap_err()
        )));
    }
    let rows = deltas
        .iter()
        .map(|&d| {
            let ok: Vec<&RunSummary> = outcomes
                .iter()
                .filter(|o| o.delta == d)
                .filter_map(|o| o.result.as_ref().ok())
                .collect();
            let mean = |f: fn(&RunSummary) -> f64| ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64;
            AblationRow {
                delta: d,
                runs: ok.len(),
                mean_tokens: mean(|r| r.tokens as f64),
                mean_igd: mean(|r| r.final_igd),
                mean_invocations: mean(|r| r.invocations as f64),
            }
        })
        .collect();
    let report = AblationReport { rows, outcomes };
    if let Some(root) = &template.out_dir {
        write_ablation_csv(&root.join("ablation.csv"), &report.rows)?;
    }
    Ok(report)
}

pub fn write_ablation_csv(path: &Path, rows: &[AblationRow]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(["delta", "runs", "mean_tokens", "mean_igd", "mean_invocations"])
        .map_err(|e| Error::csv(path, e))?;
    for r in rows {
        w.write_record([
            r.delta.to_string(),
            r.runs.to_string(),
            format!("{:.1}", r.mean_tokens),
            format!("{:.4e}", r.mean_igd),
            format!("{:.2}", r.mean_invocations),
        ])
        .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> RunConfig {
        RunConfig {
            pop_size: 10,
            max_evaluations: 200,
            pf_samples: 100,
            ..Default::default()
        }
    }

    #[test]
    fn table_format() {
        assert_eq!(format_mean_std(0.71777, 5.5e-4), "7.1777e-1 (5.50e-4)");
    }

    #[test]
    fn sample_std() {
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn one_row_per_problem_and_algorithm() {
        let problems = vec!["ZDT1".to_string(), "ZDT2".to_string()];
        let algos = [Algorithm::Nsga2, Algorithm::Nsga2Llm];
        let b = run_batch(&tiny(), &problems, &algos, &[1]).unwrap();
        assert_eq!(b.rows.len(), 4);
        assert!(b.rows.iter().all(|r| r.runs == 1 && r.hv_std == 0.0));
    }

    #[test]
    fn failed_runs_are_recorded_and_the_batch_continues() {
        let problems = vec!["ZDT1".to_string(), "NOPE".to_string()];
        let b = run_batch(&tiny(), &problems, &[Algorithm::Nsga2], &[1, 2]).unwrap();
        assert_eq!(b.rows[0].failures, 0);
        assert_eq!(b.rows[1].failures, 2);
    }

    #[test]
    fn summary_recomputes_from_run_files() {
        let dir = tempfile::tempdir().unwrap();
        let template = RunConfig {
            out_dir: Some(dir.path().to_path_buf()),
            ..tiny()
        };
        let problems = vec!["ZDT3".to_string()];
        let algos = [Algorithm::Nsga2, Algorithm::Nsga2LlmAlways];
        let seeds = [1, 2, 3];
        let b = run_batch(&template, &problems, &algos, &seeds).unwrap();
        let again = summary_from_dir(dir.path(), &problems, &algos, &seeds).unwrap();
        assert_eq!(again, b.rows);
        assert!(dir.path().join("summary.csv").exists());
    }

    #[test]
    fn ablation_has_one_row_per_threshold() {
        let deltas = [0.01, 0.05, 0.1, 0.5, 1.0];
        let r = ablation_delta(&tiny(), &["UF1".to_string()], &deltas, &[1, 2]).unwrap();
        assert_eq!(r.rows.len(), 5);
        assert!(r.rows.iter().all(|row| row.runs == 2));
    }
}
