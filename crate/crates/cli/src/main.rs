use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use momentflow::harness::{
    compare_tables, failure_summary, reference_table, run_case, run_checks, write_outputs, write_summary, Measurement,
    RunConfig, RunOutcome,
};
use momentflow::Error;

const EXIT_DIVERGED: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(
    name = "momentflow",
    version,
    about = "Steady 1D ES-BGK moment solver with nonlinear multigrid"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one case and write history, profiles and summary.
    Run(Box<RunArgs>),
    /// Run the cases of a published iteration table and compare cycle counts.
    Sweep(SweepArgs),
    /// Run the deterministic property checks.
    Check,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    case: Option<String>,
    /// Flat key=value file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "M")]
    order: Option<String>,
    #[arg(long = "N")]
    cells: Option<String>,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    nu1: Option<String>,
    #[arg(long)]
    nu2: Option<String>,
    #[arg(long)]
    coarsest: Option<String>,
    #[arg(long)]
    kn: Option<String>,
    #[arg(long)]
    uw: Option<String>,
    #[arg(long = "theta-w")]
    theta_w: Option<String>,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    chi: Option<String>,
    /// Force components `F1,F2,F3`.
    #[arg(long)]
    force: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long = "max-iters")]
    max_iters: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "symmetric-walls")]
    symmetric_walls: bool,
    #[arg(long = "reference-profile")]
    reference_profile: Option<String>,
    /// Any other `key=value` setting, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl RunArgs {
    fn pairs(&self) -> Result<Vec<(String, String)>, Error> {
        let mut pairs = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => Vec::new(),
        };
        let flags = [
            ("case", &self.case),
            ("M", &self.order),
            ("N", &self.cells),
            ("grid", &self.grid),
            ("solver", &self.solver),
            ("gamma", &self.gamma),
            ("nu1", &self.nu1),
            ("nu2", &self.nu2),
            ("coarsest", &self.coarsest),
            ("kn", &self.kn),
            ("uw", &self.uw),
            ("theta_w", &self.theta_w),
            ("w", &self.w),
            ("chi", &self.chi),
            ("force", &self.force),
            ("tol", &self.tol),
            ("max_iters", &self.max_iters),
            ("lambda", &self.lambda),
            ("cfl", &self.cfl),
            ("seed", &self.seed),
            ("reference_profile", &self.reference_profile),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                pairs.push((k.to_string(), v.clone()));
            }
        }
        if self.symmetric_walls {
            pairs.push(("symmetric_walls".into(), "true".into()));
        }
        for s in &self.set {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{s}'")))?;
            pairs.push((k.to_string(), v.to_string()));
        }
        Ok(pairs)
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Reference table 1-4.
    #[arg(long)]
    table: u8,
    /// Skip entries above this many cells.
    #[arg(long = "max-N", default_value_t = 1024)]
    max_cells: usize,
    /// Restrict to these moment orders (comma separated).
    #[arg(long, value_delimiter = ',')]
    orders: Vec<usize>,
    /// Concurrent cases.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn config_failure(e: &Error, out: &Path) -> ExitCode {
    eprintln!("error: {e}");
    let _ = write_summary(&failure_summary("config_error", &e.to_string(), ""), out);
    ExitCode::from(EXIT_CONFIG)
}

fn run(args: RunArgs) -> ExitCode {
    let cfg = args
        .pairs()
        .and_then(|p| RunConfig::from_pairs(p.iter().map(|(k, v)| (k.as_str(), v.as_str()))))
        .and_then(|c| c.validate().map(|_| c));
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => return config_failure(&e, &args.out),
    };
    let outcome = match run_case(&cfg) {
        Ok(o) => o,
        Err(e @ Error::Config(_)) => return config_failure(&e, &args.out),
        Err(e) => {
            eprintln!("error: {e}");
            let _ = write_summary(&failure_summary("diverged", &e.to_string(), &cfg.echo()), &args.out);
            return ExitCode::from(EXIT_DIVERGED);
        }
    };
    if let Err(e) = write_outputs(&outcome, &args.out) {
        eprintln!("error writing outputs: {e}");
    }
    println!(
        "{}: {} iterations, residual {:e}, {:.1} ms",
        outcome.report.status.label(),
        outcome.report.iterations(),
        outcome.report.final_residual(),
        outcome.wall_ms
    );
    ExitCode::from(outcome.exit_code() as u8)
}

fn sweep(args: SweepArgs) -> ExitCode {
    let table = match reference_table(args.table) {
        Ok(t) => t,
        Err(e) => return config_failure(&e, &args.out),
    };
    let entries: Vec<_> = table
        .entries
        .iter()
        .filter(|e| e.cells <= args.max_cells && (args.orders.is_empty() || args.orders.contains(&e.order)))
        .collect();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<RunOutcome, Error>)>> = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..args.jobs.max(1) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(entry) = entries.get(k) else { break };
                let cfg = entry.config();
                let res = run_case(&cfg);
                match &res {
                    Ok(o) => {
                        let dir = args
                            .out
                            .join(format!("{}_M{}_N{}_{}", args.table, cfg.order, cfg.cells, k));
                        let _ = write_outputs(o, &dir);
                        eprintln!(
                            "M={} N={} grid={} kn={} uw={}: {} after {} cycles ({:.1} s)",
                            cfg.order,
                            cfg.cells,
                            cfg.grid.as_str(),
                            cfg.knudsen,
                            cfg.wall_velocity,
                            o.report.status.label(),
                            o.report.iterations(),
                            o.wall_ms / 1e3
                        );
                    }
                    Err(e) => eprintln!("M={} N={}: {e}", cfg.order, cfg.cells),
                }
                results.lock().unwrap().push((k, res));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(k, _)| *k);
    let measured: Vec<Measurement> = results
        .iter()
        .map(|(k, r)| {
            let e = entries[*k];
            Measurement {
                grid: e.grid,
                order: e.order,
                cells: e.cells,
                knudsen: e.knudsen,
                wall_velocity: e.wall_velocity,
                cycles: r
                    .as_ref()
                    .ok()
                    .filter(|o| o.report.converged())
                    .map(|o| o.report.iterations()),
            }
        })
        .collect();
    let report = compare_tables(&table, &measured);
    let text = report.render();
    print!("{text}");
    if std::fs::create_dir_all(&args.out).is_ok() {
        let _ = std::fs::write(args.out.join(format!("table{}_comparison.csv", args.table)), &text);
    }
    if measured.iter().all(|m| m.cycles.is_some()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DIVERGED)
    }
}

fn check() -> ExitCode {
    let results = run_checks();
    let mut ok = true;
    for r in &results {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        ok &= r.passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(a) => run(*a),
        Command::Sweep(a) => sweep(a),
        Command::Check => check(),
    }
}
