//! Run configuration: case presets, flat `key=value` files and overrides.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseKind {
    Couette,
    Poiseuille,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Uniform,
    Asinh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Nmg,
    Sgs,
    Pseudo,
}

/// Collision-frequency law selector of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawKind {
    PowerLaw,
    HardSphere,
}

macro_rules! keyword_enum {
    ($ty:ty, $what:literal, { $($text:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($variant),)+
                    other => Err(Error::Config(format!("unknown {} '{other}'", $what))),
                }
            }
        }

        impl $ty {
            pub fn as_str(&self) -> &'static str {
                $(if *self == $variant { return $text; })+
                unreachable!()
            }
        }
    };
}

keyword_enum!(CaseKind, "case", { "couette" => CaseKind::Couette, "poiseuille" => CaseKind::Poiseuille, "custom" => CaseKind::Custom });
keyword_enum!(GridKind, "grid", { "uniform" => GridKind::Uniform, "asinh" => GridKind::Asinh });
keyword_enum!(SolverKind, "solver", { "nmg" => SolverKind::Nmg, "sgs" => SolverKind::Sgs, "pseudo" => SolverKind::Pseudo });
keyword_enum!(LawKind, "collision law", { "power" => LawKind::PowerLaw, "hard_sphere" => LawKind::HardSphere });

/// Everything needed to define and run one case.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub case: CaseKind,
    pub order: usize,
    pub cells: usize,
    pub grid: GridKind,
    pub solver: SolverKind,
    pub gamma: usize,
    pub nu1: usize,
    pub nu2: usize,
    pub coarsest: usize,
    pub knudsen: f64,
    pub prandtl: f64,
    pub law: LawKind,
    pub w: f64,
    pub wall_velocity: f64,
    pub wall_temperature: f64,
    pub accommodation: f64,
    pub symmetric_walls: bool,
    pub force: [f64; 3],
    pub tol: f64,
    pub max_iters: usize,
    pub lambda: f64,
    pub rho_floor: f64,
    pub theta_floor: f64,
    pub cfl: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub reference_profile: Option<PathBuf>,
}

impl RunConfig {
    /// Planar Couette flow: power-law gas, one plate at rest and one sliding along `x₂`.
    pub fn couette() -> Self {
        RunConfig {
            case: CaseKind::Couette,
            order: 3,
            cells: 128,
            grid: GridKind::Uniform,
            solver: SolverKind::Nmg,
            gamma: 1,
            nu1: 2,
            nu2: 2,
            coarsest: 4,
            knudsen: 0.1199,
            prandtl: 2.0 / 3.0,
            law: LawKind::PowerLaw,
            w: 0.81,
            wall_velocity: 1.2577,
            wall_temperature: 1.0,
            accommodation: 1.0,
            symmetric_walls: false,
            force: [0.0; 3],
            tol: 1e-8,
            max_iters: 1000,
            lambda: 1.0,
            rho_floor: 1e-6,
            theta_floor: 1e-6,
            cfl: 0.5,
            seed: 0,
            out: None,
            reference_profile: None,
        }
    }

    /// Force-driven Poiseuille flow between plates at rest, hard-sphere gas.
    pub fn poiseuille() -> Self {
        RunConfig {
            case: CaseKind::Poiseuille,
            knudsen: 0.1,
            law: LawKind::HardSphere,
            wall_velocity: 0.0,
            force: [0.0, 0.2555, 0.0],
            ..Self::couette()
        }
    }

    pub fn preset(case: CaseKind) -> Self {
        match case {
            CaseKind::Couette => Self::couette(),
            CaseKind::Poiseuille => Self::poiseuille(),
            CaseKind::Custom => RunConfig {
                case: CaseKind::Custom,
                ..Self::couette()
            },
        }
    }

    /// Builds a configuration from ordered `key=value` pairs: the preset named
    /// by the last `case` entry (Couette if absent), then every pair in order.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)> + Clone) -> Result<Self> {
        let case = pairs
            .clone()
            .into_iter()
            .filter(|(k, _)| normalize(k) == "case")
            .last()
            .map(|(_, v)| v.parse())
            .transpose()?
            .unwrap_or(CaseKind::Couette);
        let mut cfg = Self::preset(case);
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let bad = |e: &dyn std::fmt::Display| Error::Config(format!("{key}={value}: {e}"));
        macro_rules! parse {
            () => {
                value.parse().map_err(|e| bad(&e))?
            };
        }
        match normalize(key).as_str() {
            "case" => self.case = value.parse()?,
            "m" | "order" => self.order = parse!(),
            "n" | "cells" => self.cells = parse!(),
            "grid" => self.grid = value.parse()?,
            "solver" => self.solver = value.parse()?,
            "gamma" => self.gamma = parse!(),
            "nu1" => self.nu1 = parse!(),
            "nu2" => self.nu2 = parse!(),
            "coarsest" => self.coarsest = parse!(),
            "kn" | "knudsen" => self.knudsen = parse!(),
            "pr" | "prandtl" => self.prandtl = parse!(),
            "law" => self.law = value.parse()?,
            "w" => self.w = parse!(),
            "uw" => self.wall_velocity = parse!(),
            "theta_w" | "thetaw" => self.wall_temperature = parse!(),
            "chi" | "accommodation" => self.accommodation = parse!(),
            "symmetric_walls" => self.symmetric_walls = parse_bool(value).ok_or_else(|| bad(&"expected a boolean"))?,
            "force" | "f" => {
                let parts: Vec<f64> = value
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| bad(&e))?;
                if parts.len() != 3 {
                    return Err(bad(&"expected three comma-separated components"));
                }
                self.force = [parts[0], parts[1], parts[2]];
            }
            "tol" => self.tol = parse!(),
            "max_iters" => self.max_iters = parse!(),
            "lambda" => self.lambda = parse!(),
            "rho_floor" => self.rho_floor = parse!(),
            "theta_floor" => self.theta_floor = parse!(),
            "cfl" => self.cfl = parse!(),
            "seed" => self.seed = parse!(),
            "out" => self.out = Some(PathBuf::from(value)),
            "reference_profile" => self.reference_profile = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Reads a flat `key = value` file; `#` starts a comment.
    pub fn parse_file_pairs(text: &str) -> Result<Vec<(String, String)>> {
        let mut pairs = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(pairs)
    }

    pub fn load(path: &Path) -> Result<Vec<(String, String)>> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_file_pairs(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("kn", self.knudsen),
            ("pr", self.prandtl),
            ("theta_w", self.wall_temperature),
            ("tol", self.tol),
            ("rho_floor", self.rho_floor),
            ("theta_floor", self.theta_floor),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.order >= 3) {
            return Err(Error::Config(format!("moment order must exceed 2, got {}", self.order)));
        }
        if !(0.0..=1.0).contains(&self.accommodation) {
            return Err(Error::Config(format!(
                "chi must lie in [0, 1], got {}",
                self.accommodation
            )));
        }
        if !self.wall_velocity.is_finite() || self.force.iter().any(|f| !f.is_finite()) || !self.w.is_finite() {
            return Err(Error::Config("wall velocity, force and w must be finite".into()));
        }
        if self.lambda < 0.0 || !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config("lambda must be ≥ 0 and cfl in (0, 1]".into()));
        }
        if self.cells == 0 || (self.grid == GridKind::Asinh && !self.cells.is_multiple_of(2)) {
            return Err(Error::Config(format!("invalid cell count {}", self.cells)));
        }
        if self.solver == SolverKind::Nmg {
            let ratio = self.cells / self.coarsest.max(1);
            if self.coarsest == 0 || !self.cells.is_multiple_of(self.coarsest) || !ratio.is_power_of_two() {
                return Err(Error::Config(format!(
                    "N={} is not a power-of-two multiple of coarsest={}",
                    self.cells, self.coarsest
                )));
            }
        }
        Ok(())
    }

    /// Single-line `key=value` rendering of the configuration.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "case={} M={} N={} grid={} solver={} gamma={} nu1={} nu2={} coarsest={} kn={} pr={} law={} w={} uw={} theta_w={} chi={} symmetric_walls={} force={},{},{} tol={} max_iters={} lambda={} rho_floor={} theta_floor={} cfl={} seed={}",
            self.case.as_str(),
            self.order,
            self.cells,
            self.grid.as_str(),
            self.solver.as_str(),
            self.gamma,
            self.nu1,
            self.nu2,
            self.coarsest,
            self.knudsen,
            self.prandtl,
            self.law.as_str(),
            self.w,
            self.wall_velocity,
            self.wall_temperature,
            self.accommodation,
            self.symmetric_walls,
            self.force[0],
            self.force[1],
            self.force[2],
            self.tol,
            self.max_iters,
            self.lambda,
            self.rho_floor,
            self.theta_floor,
            self.cfl,
            self.seed
        );
        s
    }
}

fn normalize(key: &str) -> String {
    key.trim()
        .trim_start_matches("--")
        .replace('-', "_")
        .to_ascii_lowercase()
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Some(true),
        "false" | "0" | "no" | "off" => Some(false),
        _ => None,
    }
}
