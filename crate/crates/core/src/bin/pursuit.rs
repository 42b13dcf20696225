use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use voronoi_pursuit::cells::oracle::fuzz_separating_qp;
use voronoi_pursuit::engine::{
    run_batch, run_simulation, trial_scenario, BatchError, BatchStats, PursuerPolicy, Scenario,
};
use voronoi_pursuit::io::{
    parse_scenario, render_svg, write_summary_csv, write_trace_csv, write_trials_csv, SvgOptions,
};

/// Default output directory when `--out` is not given.
const OUT_DIR_ENV: &str = "PURSUIT_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "pursuit",
    version,
    about = "Multi-pursuer capture with obstacle-aware Voronoi cells"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write trace.csv (and run.svg with --render).
    Run {
        scenario: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        render: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        policy: Option<PursuerPolicy>,
    },
    /// Run seeded trials and write trials.csv and summary.csv.
    Batch {
        scenario: PathBuf,
        #[arg(long)]
        trials: usize,
        /// Obstacle count for forest trials.
        #[arg(long, conflicts_with = "sweep")]
        obstacles: Option<usize>,
        /// Comma-separated obstacle counts.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<usize>,
        /// Comma-separated policies; defaults to the scenario's.
        #[arg(long, value_delimiter = ',')]
        policy: Vec<PursuerPolicy>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also render trial 0 of every group.
        #[arg(long)]
        render: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a scenario without running it.
    Validate { scenario: PathBuf },
    /// Compare the separating-hyperplane solver against brute force.
    OracleQp {
        #[arg(long, default_value_t = 100)]
        fuzz: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Validation(String),
    Internal(String),
}

impl Failure {
    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure::Internal(format!("{}: {e}", path.display()))
    }
}

impl From<BatchError> for Failure {
    fn from(e: BatchError) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse_scenario(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn out_dir(out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let dir = out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir).map_err(|e| Failure::io(&dir, e))?;
    Ok(dir)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::io(path, e))
}

fn run(
    path: &Path,
    seed: Option<u64>,
    render: bool,
    out: Option<PathBuf>,
    policy: Option<PursuerPolicy>,
) -> Result<(), Failure> {
    let base = load(path)?;
    let seed = seed.unwrap_or(base.seed);
    let scenario = trial_scenario(&base, seed, 0, policy.unwrap_or(base.pursuer_policy))?;
    let result = run_simulation(&scenario).map_err(|e| Failure::Validation(e.to_string()))?;
    let dir = out_dir(out)?;

    let mut csv = Vec::new();
    write_trace_csv(&result, &mut csv).map_err(|e| Failure::Internal(e.to_string()))?;
    write_file(&dir.join("trace.csv"), &csv)?;
    if render {
        write_file(
            &dir.join("run.svg"),
            render_svg(&result, &SvgOptions::default()).as_bytes(),
        )?;
    }

    let opt = |x: Option<f64>| x.map_or("-".to_string(), |t| format!("{t:.2} s"));
    println!("outcome: {}", result.outcome.name());
    println!("t_e: {}  t_c: {}", opt(result.t_e), opt(result.t_c));
    println!("d_mo: {:.4} m  d_mp: {:.4} m", result.d_mo, result.d_mp);
    println!(
        "safety violations: {}  infeasible ticks: {}",
        result.safety_violations, result.infeasible_ticks
    );
    println!("wrote {}", dir.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn batch(
    path: &Path,
    trials: usize,
    obstacles: Option<usize>,
    sweep: Vec<usize>,
    policies: Vec<PursuerPolicy>,
    seed: Option<u64>,
    render: bool,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let base = load(path)?;
    let seed = seed.unwrap_or(base.seed);
    let counts: Vec<Option<usize>> = match (obstacles, sweep.is_empty()) {
        (Some(m), _) => vec![Some(m)],
        (None, false) => sweep.into_iter().map(Some).collect(),
        (None, true) => vec![None],
    };
    if counts.iter().any(Option::is_some) && base.forest.is_none() {
        return Err(Failure::Validation(
            "--obstacles and --sweep need a [forest] table in the scenario".into(),
        ));
    }
    let policies = if policies.is_empty() {
        vec![base.pursuer_policy]
    } else {
        policies
    };
    let dir = out_dir(out)?;

    let mut groups: Vec<(usize, BatchStats)> = Vec::new();
    for count in &counts {
        let mut template = base.clone();
        if let (Some(m), Some(forest)) = (count, template.forest.as_mut()) {
            forest.obstacle_count = *m;
        }
        let label = count.unwrap_or(
            template
                .forest
                .as_ref()
                .map_or(template.obstacles.len(), |f| f.obstacle_count),
        );
        for &policy in &policies {
            let stats = run_batch(&template, trials, seed, policy)?;
            println!(
                "{:<9} obstacles {:>3}: {}/{} captured, encircled first {}, median t_c {}, min d_mo {:.4}, min d_mp {:.4}, violations {}",
                policy.name(),
                label,
                stats.captures,
                stats.trials,
                stats.encircled_first,
                stats.t_c.map_or("-".into(), |q| format!("{:.2} s", q.median)),
                stats.min_d_mo,
                stats.min_d_mp,
                stats.safety_violations,
            );
            if render {
                let first = trial_scenario(&template, seed, 0, policy)?;
                let result = run_simulation(&first).map_err(|e| Failure::Validation(e.to_string()))?;
                let name = format!("trial0_{}_{}.svg", policy.name(), label);
                write_file(
                    &dir.join(name),
                    render_svg(&result, &SvgOptions::default()).as_bytes(),
                )?;
            }
            groups.push((label, stats));
        }
    }

    let mut trials_csv = Vec::new();
    write_trials_csv(&groups, &mut trials_csv).map_err(|e| Failure::Internal(e.to_string()))?;
    write_file(&dir.join("trials.csv"), &trials_csv)?;
    let mut summary_csv = Vec::new();
    write_summary_csv(&groups, &mut summary_csv).map_err(|e| Failure::Internal(e.to_string()))?;
    write_file(&dir.join("summary.csv"), &summary_csv)?;
    println!("wrote {}", dir.display());
    Ok(())
}

fn validate(path: &Path) -> Result<(), Failure> {
    let s = load(path)?;
    println!(
        "ok: {} pursuers, {} obstacles, {} dynamics, policy {}",
        s.forest.as_ref().map_or(s.pursuer_count(), |f| f.pursuer_count),
        s.forest.as_ref().map_or(s.obstacles.len(), |f| f.obstacle_count),
        match s.dynamics {
            voronoi_pursuit::engine::DynamicsMode::Single => "single",
            voronoi_pursuit::engine::DynamicsMode::Triple => "triple",
        },
        s.pursuer_policy.name()
    );
    Ok(())
}

fn oracle_qp(fuzz: usize, seed: u64) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = fuzz_separating_qp(&mut rng, fuzz);
    let max_dev = checks.iter().map(|c| c.deviation).fold(0.0, f64::max);
    let min_sep = checks.iter().map(|c| c.separation).fold(f64::INFINITY, f64::min);
    println!("instances: {}", checks.len());
    println!("max deviation: {max_dev:.3e}");
    println!("min separation: {min_sep:.3e}");
    if max_dev > 1e-6 || min_sep <= 0.0 {
        return Err(Failure::Internal("solver disagrees with brute force".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            scenario,
            seed,
            render,
            out,
            policy,
        } => run(&scenario, seed, render, out, policy),
        Command::Batch {
            scenario,
            trials,
            obstacles,
            sweep,
            policy,
            seed,
            render,
            out,
        } => batch(&scenario, trials, obstacles, sweep, policy, seed, render, out),
        Command::Validate { scenario } => validate(&scenario),
        Command::OracleQp { fuzz, seed } => oracle_qp(fuzz, seed),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
