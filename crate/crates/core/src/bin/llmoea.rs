use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use llmoea::harness::{
    ablation_delta, default_seeds, emit_outputs, run, run_batch, Algorithm, RunConfig, ABLATION_DELTAS,
};
use llmoea::problems::suite_entry;
use llmoea::providers::ProviderKind;

#[derive(Parser, Debug)]
#[command(
    name = "llmoea",
    version,
    about = "NSGA-II with an adaptively gated LLM offspring operator"
)]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One run; writes metrics.csv, final_front.csv and run.jsonl when --out is given.
    Run {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Every problem x algorithm x seed, summarized as mean (std) of final HV and IGD.
    Batch {
        #[command(flatten)]
        opts: RunOpts,
        /// Seeds, e.g. `1..10` or `1,3,5`.
        #[arg(long, default_value = "1..10")]
        seeds: String,
        /// Problems, e.g. `ZDT1,ZDT2,UF1..UF10`.
        #[arg(long, default_value = "ZDT1")]
        problems: String,
        /// Algorithms, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "nsga2,nsga2-llm")]
        algos: Vec<Algorithm>,
    },
    /// Gated runs over a set of decision thresholds.
    Ablate {
        #[command(flatten)]
        opts: RunOpts,
        #[arg(long, value_delimiter = ',', default_values_t = ABLATION_DELTAS.to_vec())]
        deltas: Vec<f64>,
        #[arg(long, default_value = "1..10")]
        seeds: String,
        #[arg(long, default_value = "UF1..UF10")]
        problems: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProviderArg {
    Mock,
    Http,
}

/// Flags mirroring the configuration file; anything given here overrides it.
#[derive(Args, Debug, Default)]
struct RunOpts {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    /// Decision dimension (default: the problem's standard size).
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    algo: Option<Algorithm>,
    /// Population size N.
    #[arg(long)]
    pop: Option<usize>,
    /// Evaluation budget.
    #[arg(long)]
    evals: Option<usize>,
    /// Gate threshold (`inf` disables the LLM).
    #[arg(long)]
    delta: Option<f64>,
    /// Elites shown to the LLM.
    #[arg(long)]
    l: Option<usize>,
    /// Solutions requested per call.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    retries: Option<usize>,
    #[arg(long)]
    provider: Option<ProviderArg>,
    #[arg(long)]
    model: Option<String>,
    /// Base URL of a chat-completion API, e.g. `https://host/v1`.
    #[arg(long)]
    api_base: Option<String>,
    /// Environment variable holding the API key.
    #[arg(long)]
    api_key_env: Option<String>,
    /// Request timeout in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
    /// Do not charge LLM offspring evaluations against the budget.
    #[arg(long)]
    free_llm_evals: bool,
    #[arg(long)]
    max_generations: Option<usize>,
    /// Reference front sample size for HV and IGD.
    #[arg(long)]
    pf_samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also plot HV against evaluations.
    #[arg(long)]
    svg: bool,
}

impl RunOpts {
    fn resolve(&self) -> llmoea::Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($flag:ident => $field:expr),* $(,)?) => {
                $(if let Some(v) = self.$flag.clone() { $field = v; })*
            };
        }
        set! {
            problem => c.problem,
            algo => c.algorithm,
            pop => c.pop_size,
            evals => c.max_evaluations,
            delta => c.delta,
            l => c.l,
            s => c.s,
            seed => c.seed,
            retries => c.retries,
            api_key_env => c.provider.api_key_env,
            timeout => c.provider.timeout_secs,
            temperature => c.provider.temperature,
            pf_samples => c.pf_samples,
        }
        if self.dim.is_some() {
            c.dim = self.dim;
        }
        if self.model.is_some() {
            c.provider.model = self.model.clone();
        }
        if self.api_base.is_some() {
            c.provider.endpoint = self.api_base.clone();
        }
        if self.max_generations.is_some() {
            c.max_generations = self.max_generations;
        }
        if self.out.is_some() {
            c.out_dir = self.out.clone();
        }
        if let Some(p) = self.provider {
            c.provider.kind = match p {
                ProviderArg::Mock => ProviderKind::Mock,
                ProviderArg::Http => ProviderKind::HttpChat,
            };
        }
        c.free_llm_evals |= self.free_llm_evals;
        c.svg |= self.svg;
        Ok(c)
    }
}

/// `1..10` (inclusive), `1,2,5`, or a mix such as `1..3,8`.
fn parse_seeds(text: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| format!("bad seed range `{part}`"))?;
                let b: u64 = b.trim().parse().map_err(|_| format!("bad seed range `{part}`"))?;
                if a > b {
                    return Err(format!("empty seed range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| format!("bad seed `{part}`"))?),
        }
    }
    if out.is_empty() {
        return Err("no seeds given".into());
    }
    Ok(out)
}

fn split_suffix(name: &str) -> Option<(&str, u32)> {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if digits == 0 {
        return None;
    }
    let (prefix, num) = name.split_at(name.len() - digits);
    Some((prefix, num.parse().ok()?))
}

/// `ZDT1,ZDT2,UF1..UF10`; ranges expand over the numeric suffix.
fn parse_problems(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let names: Vec<String> = match part.split_once("..") {
            Some((a, b)) => {
                let (pa, na) = split_suffix(a.trim()).ok_or_else(|| format!("bad problem range `{part}`"))?;
                let (pb, nb) = split_suffix(b.trim()).ok_or_else(|| format!("bad problem range `{part}`"))?;
                if !pa.eq_ignore_ascii_case(pb) || na > nb {
                    return Err(format!("bad problem range `{part}`"));
                }
                (na..=nb).map(|k| format!("{pa}{k}")).collect()
            }
            None => vec![part.to_string()],
        };
        for n in names {
            let entry = suite_entry(&n).map_err(|e| e.to_string())?;
            out.push(entry.name.to_string());
        }
    }
    if out.is_empty() {
        return Err("no problems given".into());
    }
    Ok(out)
}

fn execute(cli: Cli) -> Result<(), String> {
    let err = |e: llmoea::Error| e.to_string();
    match cli.command {
        Command::Run { opts } => {
            let config = opts.resolve().map_err(err)?;
            let report = run(&config).map_err(err)?;
            let last = report.last();
            println!(
                "{} {} seed {}: {} generations, {} evaluations",
                config.problem,
                config.algorithm,
                config.seed,
                report.log.len(),
                last.evaluations
            );
            println!("HV {:.6e}  IGD {:.6e}", last.hv, last.igd);
            println!(
                "LLM invocations {}, provider calls {} ({} failed), tokens {} (prompt {}, completion {})",
                report.invocations,
                report.usage.calls,
                report.usage.failures,
                report.usage.usage.total,
                report.usage.usage.prompt_tokens,
                report.usage.usage.completion_tokens
            );
            println!("wall time {:.2} s", report.wall_time.as_secs_f64());
            if let Some(dir) = &config.out_dir {
                let paths = emit_outputs(&report, dir, config.svg).map_err(err)?;
                println!("wrote {}", paths.metrics.display());
            }
        }
        Command::Batch {
            opts,
            seeds,
            problems,
            algos,
        } => {
            let template = opts.resolve().map_err(err)?;
            let seeds = parse_seeds(&seeds)?;
            let problems = parse_problems(&problems)?;
            let report = run_batch(&template, &problems, &algos, &seeds).map_err(err)?;
            println!(
                "{:<6} {:<17} {:>4} {:>22} {:>22} {:>10}",
                "problem", "algorithm", "runs", "HV", "IGD", "tokens"
            );
            for r in &report.rows {
                println!(
                    "{:<6} {:<17} {:>4} {:>22} {:>22} {:>10.0}",
                    r.problem,
                    r.algorithm.as_str(),
                    r.runs - r.failures,
                    r.hv_cell(),
                    r.igd_cell(),
                    r.tokens_mean
                );
            }
            for o in report.outcomes.iter().filter(|o| o.result.is_err()) {
                eprintln!(
                    "failed: {} {} seed {}: {}",
                    o.problem,
                    o.algorithm,
                    o.seed,
                    o.result.as_ref().unwrap_err()
                );
            }
        }
        Command::Ablate {
            opts,
            deltas,
            seeds,
            problems,
        } => {
            let template = opts.resolve().map_err(err)?;
            let seeds = if seeds.is_empty() {
                default_seeds()
            } else {
                parse_seeds(&seeds)?
            };
            let problems = parse_problems(&problems)?;
            let report = ablation_delta(&template, &problems, &deltas, &seeds).map_err(err)?;
            println!(
                "{:>6} {:>5} {:>12} {:>12} {:>12}",
                "delta", "runs", "tokens", "IGD", "invocations"
            );
            for r in &report.rows {
                println!(
                    "{:>6} {:>5} {:>12.1} {:>12.4e} {:>12.2}",
                    r.delta, r.runs, r.mean_tokens, r.mean_igd, r.mean_invocations
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
