use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use super::config::{GridKind, LawKind, RunConfig, SolverKind};
use crate::closure::{ExternalForce, FrequencyLaw, GasModel};
use crate::discretization::{asinh_grid, uniform_grid, Field, Grid1D, ProblemSpec, WallSpec};
use crate::error::{Error, Result};
use crate::nmg::{nmg_solve, CycleConfig};
use crate::sgs::{
    pseudo_time_solve, single_grid_solve, ConvergenceRecord, NewtonConfig, SolveOptions, SolveReport, SolveStatus,
};

/// Solver output of one case plus the bookkeeping written to the summary.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub report: SolveReport,
    pub initial_mass: f64,
    pub wall_ms: f64,
}

impl RunOutcome {
    pub fn status(&self) -> &SolveStatus {
        &self.report.status
    }

    /// `|m_final − m_0| / m_0`.
    pub fn mass_drift(&self) -> f64 {
        (self.report.field.total_mass() - self.initial_mass).abs() / self.initial_mass
    }

    pub fn exit_code(&self) -> i32 {
        match self.report.status {
            SolveStatus::Converged => 0,
            _ => 2,
        }
    }
}

pub fn build_grid(cfg: &RunConfig) -> Result<Grid1D> {
    match cfg.grid {
        GridKind::Uniform => uniform_grid(0.0, 1.0, cfg.cells),
        GridKind::Asinh => asinh_grid(0.0, cfg.cells),
    }
}

/// Gas, force and walls of the configured case.
///
/// The left plate is at rest and the right one slides with `(0, u^W, 0)`;
/// `symmetric_walls` moves them with `∓u^W/2` instead.
pub fn build_problem(cfg: &RunConfig) -> Result<ProblemSpec> {
    let law = match cfg.law {
        LawKind::PowerLaw => FrequencyLaw::PowerLaw { w: cfg.w },
        LawKind::HardSphere => FrequencyLaw::HardSphere,
    };
    let gas = GasModel::new(cfg.prandtl, cfg.knudsen, law)?;
    let (ul, ur) = if cfg.symmetric_walls {
        (-0.5 * cfg.wall_velocity, 0.5 * cfg.wall_velocity)
    } else {
        (0.0, cfg.wall_velocity)
    };
    let left = WallSpec::new(cfg.wall_temperature, [0.0, ul, 0.0], cfg.accommodation)?;
    let right = WallSpec::new(cfg.wall_temperature, [0.0, ur, 0.0], cfg.accommodation)?;
    ProblemSpec::new(gas, ExternalForce(cfg.force), left, right, cfg.order)
}

pub fn newton_config(cfg: &RunConfig) -> NewtonConfig {
    let base = NewtonConfig::default();
    NewtonConfig {
        // a local stop above the global target would freeze the sweep short of it
        tol: base.tol.min(cfg.tol),
        lambda: cfg.lambda,
        rho_floor: cfg.rho_floor,
        theta_floor: cfg.theta_floor,
        ..base
    }
}

pub fn cycle_config(cfg: &RunConfig) -> CycleConfig {
    CycleConfig {
        gamma: cfg.gamma,
        nu1: cfg.nu1,
        nu2: cfg.nu2,
        coarsest_cells: cfg.coarsest,
        coarsest_tol: cfg.tol,
        ..CycleConfig::default()
    }
}

/// Starts from the global equilibrium `ρ = 1, u = 0, θ = 1` and runs the chosen solver.
pub fn run_case(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let spec = build_problem(cfg)?;
    let grid = build_grid(cfg)?;
    let field = Field::equilibrium(grid, 1.0, [0.0; 3], 1.0, cfg.order)?;
    let initial_mass = field.total_mass();
    let opts = SolveOptions {
        tol: cfg.tol,
        max_iters: cfg.max_iters,
        ..SolveOptions::default()
    };
    let newton = newton_config(cfg);
    let report = match cfg.solver {
        SolverKind::Nmg => nmg_solve(&field, &spec, &newton, &cycle_config(cfg), &opts)?,
        SolverKind::Sgs => single_grid_solve(&field, None, &spec, &newton, &opts)?,
        SolverKind::Pseudo => pseudo_time_solve(&field, &spec, cfg.cfl, &opts)?,
    };
    Ok(RunOutcome {
        config: cfg.clone(),
        report,
        initial_mass,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn history_csv(history: &[ConvergenceRecord]) -> String {
    let mut s = String::from("iter,residual_l2,sweeps,newton_steps,wall_ms\n");
    for r in history {
        let _ = writeln!(
            s,
            "{},{:e},{},{},{:.3}",
            r.iter, r.residual, r.sweeps, r.newton_steps, r.wall_ms
        );
    }
    s
}

pub fn emit_history(history: &[ConvergenceRecord], path: &Path) -> Result<()> {
    fs::write(path, history_csv(history))?;
    Ok(())
}

/// One row of the profile file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileRow {
    pub x: f64,
    pub rho: f64,
    pub u: [f64; 3],
    pub theta: f64,
    pub sigma11: f64,
    pub sigma12: f64,
    pub q1: f64,
    pub q2: f64,
}

pub const PROFILE_COLUMNS: [&str; 10] = ["x", "rho", "u1", "u2", "u3", "theta", "sigma11", "sigma12", "q1", "q2"];

impl ProfileRow {
    pub fn values(&self) -> [f64; 10] {
        [
            self.x,
            self.rho,
            self.u[0],
            self.u[1],
            self.u[2],
            self.theta,
            self.sigma11,
            self.sigma12,
            self.q1,
            self.q2,
        ]
    }
}

pub fn profiles(field: &Field) -> Result<Vec<ProfileRow>> {
    let centers = field.grid().centers();
    Ok(field
        .macro_states()?
        .into_iter()
        .zip(centers)
        .map(|(m, x)| ProfileRow {
            x,
            rho: m.rho,
            u: m.u,
            theta: m.theta,
            sigma11: m.sigma[0][0],
            sigma12: m.sigma[0][1],
            q1: m.q[0],
            q2: m.q[1],
        })
        .collect())
}

pub fn profiles_csv(field: &Field) -> Result<String> {
    let mut s = PROFILE_COLUMNS.join(",");
    s.push('\n');
    for row in profiles(field)? {
        let line: Vec<String> = row.values().iter().map(|v| format!("{v:.15e}")).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    Ok(s)
}

pub fn emit_profiles(field: &Field, path: &Path) -> Result<()> {
    fs::write(path, profiles_csv(field)?)?;
    Ok(())
}

pub fn summary_text(outcome: &RunOutcome) -> String {
    let r = &outcome.report;
    let mut s = String::new();
    let _ = writeln!(s, "status={}", r.status.label());
    if let SolveStatus::Diverged(msg) = &r.status {
        let _ = writeln!(s, "reason={msg}");
    }
    let _ = writeln!(s, "iterations={}", r.iterations());
    let _ = writeln!(s, "final_residual={:e}", r.final_residual());
    let _ = writeln!(s, "wall_ms={:.3}", outcome.wall_ms);
    let _ = writeln!(s, "mass_drift={:e}", outcome.mass_drift());
    let _ = writeln!(s, "config_echo={}", outcome.config.echo());
    s
}

/// Summary for a run that never got going (bad configuration).
pub fn failure_summary(status: &str, reason: &str, echo: &str) -> String {
    format!("status={status}\nreason={reason}\niterations=0\nfinal_residual=nan\nwall_ms=0\nconfig_echo={echo}\n")
}

pub fn write_summary(text: &str, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut f = fs::File::create(dir.join("summary.txt"))?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

/// History, profiles, summary and (if configured) a reference overlay under `dir`.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    emit_history(&outcome.report.history, &dir.join("history.csv"))?;
    emit_profiles(&outcome.report.field, &dir.join("profiles.csv"))?;
    let mut summary = summary_text(outcome);
    if let Some(reference) = &outcome.config.reference_profile {
        let overlay = reference_overlay(&outcome.report.field, &fs::read_to_string(reference)?)?;
        fs::write(dir.join("overlay.csv"), &overlay.csv)?;
        for (name, dev) in &overlay.max_deviation {
            let _ = writeln!(summary, "overlay_max_dev_{name}={dev:e}");
        }
    }
    write_summary(&summary, dir)
}

/// External profile interpolated against the computed one.
#[derive(Clone, Debug, PartialEq)]
pub struct Overlay {
    pub csv: String,
    pub max_deviation: Vec<(String, f64)>,
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let n = xs.len();
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let k = xs.partition_point(|&v| v <= x);
    let (x0, x1) = (xs[k - 1], xs[k]);
    let t = (x - x0) / (x1 - x0);
    ys[k - 1] + t * (ys[k] - ys[k - 1])
}

/// Reads a CSV with an `x` column and any subset of the profile columns and
/// pairs every reference value with the linearly interpolated computed one.
pub fn reference_overlay(field: &Field, reference: &str) -> Result<Overlay> {
    let mut lines = reference
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Config("reference profile is empty".into()))?
        .split(',')
        .map(|h| h.trim().to_string())
        .collect();
    let xcol = header
        .iter()
        .position(|h| h == "x")
        .ok_or_else(|| Error::Config("reference profile lacks an x column".into()))?;
    let cols: Vec<(usize, usize)> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != xcol)
        .filter_map(|(i, h)| PROFILE_COLUMNS.iter().position(|c| c == h).map(|p| (i, p)))
        .collect();
    let rows = profiles(field)?;
    let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
    let computed: Vec<[f64; 10]> = rows.iter().map(|r| r.values()).collect();

    let mut csv = String::from("x");
    for &(_, p) in &cols {
        let _ = write!(csv, ",{0}_ref,{0}", PROFILE_COLUMNS[p]);
    }
    csv.push('\n');
    let mut dev = vec![0.0f64; cols.len()];
    for (n, line) in lines.enumerate() {
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("reference profile row {}: {e}", n + 1)))?;
        if vals.len() != header.len() {
            return Err(Error::Config(format!(
                "reference profile row {} has {} fields",
                n + 1,
                vals.len()
            )));
        }
        let x = vals[xcol];
        let _ = write!(csv, "{x:e}");
        for (k, &(i, p)) in cols.iter().enumerate() {
            let ys: Vec<f64> = computed.iter().map(|c| c[p]).collect();
            let y = interpolate(&xs, &ys, x);
            dev[k] = dev[k].max((y - vals[i]).abs());
            let _ = write!(csv, ",{:e},{y:e}", vals[i]);
        }
        csv.push('\n');
    }
    Ok(Overlay {
        csv,
        max_deviation: cols
            .iter()
            .zip(dev)
            .map(|(&(_, p), d)| (PROFILE_COLUMNS[p].to_string(), d))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resting_couette_converges_immediately() {
        let cfg = RunConfig {
            wall_velocity: 0.0,
            cells: 16,
            ..RunConfig::couette()
        };
        let out = run_case(&cfg).unwrap();
        assert!(out.report.converged());
        assert_eq!(out.report.iterations(), 0);
        assert!(out.report.history[0].residual <= 1e-12);
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn history_file_layout() {
        assert_eq!(history_csv(&[]), "iter,residual_l2,sweeps,newton_steps,wall_ms\n");
        let rec = ConvergenceRecord {
            iter: 3,
            residual: 1.5e-9,
            sweeps: 12,
            newton_steps: 40,
            wall_ms: 2.0,
            work: 12.0,
        };
        assert_eq!(history_csv(&[rec]).lines().nth(1), Some("3,1.5e-9,12,40,2.000"));
    }

    #[test]
    fn equilibrium_profiles() {
        let field = Field::equilibrium(uniform_grid(0.0, 1.0, 4).unwrap(), 1.0, [0.0; 3], 1.0, 3).unwrap();
        let rows = profiles(&field).unwrap();
        assert_eq!(rows.len(), 4);
        for r in rows {
            assert_eq!(r.rho, 1.0);
            assert_eq!(r.theta, 1.0);
            assert_eq!([r.u[0], r.u[1], r.u[2], r.sigma11, r.sigma12, r.q1, r.q2], [0.0; 7]);
        }
        let csv = profiles_csv(&field).unwrap();
        assert!(csv.starts_with("x,rho,u1,u2,u3,theta,sigma11,sigma12,q1,q2\n"));
    }

    #[test]
    fn symmetric_walls_split_velocity() {
        let cfg = RunConfig {
            symmetric_walls: true,
            ..RunConfig::couette()
        };
        let spec = build_problem(&cfg).unwrap();
        assert_eq!(spec.left_wall.u[1], -0.5 * cfg.wall_velocity);
        assert_eq!(spec.right_wall.u[1], 0.5 * cfg.wall_velocity);
        let spec = build_problem(&RunConfig::couette()).unwrap();
        assert_eq!(spec.left_wall.u, [0.0; 3]);
        assert_eq!(spec.right_wall.u, [0.0, 1.2577, 0.0]);
    }

    #[test]
    fn overlay_interpolates() {
        let field = Field::equilibrium(uniform_grid(0.0, 1.0, 4).unwrap(), 1.0, [0.0; 3], 1.0, 3).unwrap();
        let o = reference_overlay(&field, "x,rho,unknown\n0.5,1.1,3\n0.0,1.0,4\n").unwrap();
        assert_eq!(o.max_deviation.len(), 1);
        assert!((o.max_deviation[0].1 - 0.1).abs() < 1e-12);
        assert!(reference_overlay(&field, "rho\n1\n").is_err());
    }
}
