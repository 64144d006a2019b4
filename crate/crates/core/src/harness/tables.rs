//! Published NMG cycle counts and the measured-vs-reference comparison.

use std::fmt::Write as _;

use super::config::{CaseKind, GridKind, RunConfig};
use crate::error::{Error, Result};

const COUETTE_UNIFORM: &str = include_str!("../../data/couette_uniform.csv");
const COUETTE_ASINH: &str = include_str!("../../data/couette_asinh.csv");
const COUETTE_ROBUSTNESS: &str = include_str!("../../data/couette_robustness.csv");
const POISEUILLE_UNIFORM: &str = include_str!("../../data/poiseuille_uniform.csv");

/// One published run: the case it describes and its cycle count.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceEntry {
    pub case: CaseKind,
    pub grid: GridKind,
    pub order: usize,
    pub cells: usize,
    pub knudsen: f64,
    pub wall_velocity: f64,
    pub cycles: usize,
}

impl ReferenceEntry {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            grid: self.grid,
            order: self.order,
            cells: self.cells,
            knudsen: self.knudsen,
            wall_velocity: self.wall_velocity,
            ..RunConfig::preset(self.case)
        }
    }

    fn matches(&self, m: &Measurement) -> bool {
        self.order == m.order
            && self.cells == m.cells
            && self.grid == m.grid
            && (self.knudsen - m.knudsen).abs() <= 1e-12 * self.knudsen
            && (self.wall_velocity - m.wall_velocity).abs() <= 1e-12
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceTable {
    pub id: u8,
    pub title: &'static str,
    pub entries: Vec<ReferenceEntry>,
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.trim()
        .parse()
        .map_err(|e| Error::Config(format!("reference table value '{s}': {e}")))
}

fn parse_matrix(text: &str, case: CaseKind, grid: GridKind) -> Result<Vec<ReferenceEntry>> {
    let base = RunConfig::preset(case);
    let mut lines = data_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty reference table".into()))?;
    let sizes: Vec<usize> = header.split(',').skip(1).map(parse_num).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for line in lines {
        let mut it = line.split(',');
        let order: usize = parse_num(it.next().unwrap_or(""))?;
        for (&cells, v) in sizes.iter().zip(it) {
            out.push(ReferenceEntry {
                case,
                grid,
                order,
                cells,
                knudsen: base.knudsen,
                wall_velocity: base.wall_velocity,
                cycles: parse_num(v)?,
            });
        }
    }
    Ok(out)
}

fn parse_robustness(text: &str) -> Result<Vec<ReferenceEntry>> {
    data_lines(text)
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 3 {
                return Err(Error::Config(format!("bad reference row '{line}'")));
            }
            Ok(ReferenceEntry {
                case: CaseKind::Couette,
                grid: GridKind::Uniform,
                order: 3,
                cells: 2048,
                knudsen: parse_num(f[0])?,
                wall_velocity: parse_num(f[1])?,
                cycles: parse_num(f[2])?,
            })
        })
        .collect()
}

/// Tables 1 to 4: Couette on uniform and asinh grids, Couette at other
/// Knudsen numbers and plate speeds, Poiseuille on uniform grids.
pub fn reference_table(id: u8) -> Result<ReferenceTable> {
    let (title, entries) = match id {
        1 => (
            "Couette, uniform grids",
            parse_matrix(COUETTE_UNIFORM, CaseKind::Couette, GridKind::Uniform)?,
        ),
        2 => (
            "Couette, asinh grids",
            parse_matrix(COUETTE_ASINH, CaseKind::Couette, GridKind::Asinh)?,
        ),
        3 => (
            "Couette, various Kn and plate speed",
            parse_robustness(COUETTE_ROBUSTNESS)?,
        ),
        4 => (
            "Poiseuille, uniform grids",
            parse_matrix(POISEUILLE_UNIFORM, CaseKind::Poiseuille, GridKind::Uniform)?,
        ),
        other => return Err(Error::Config(format!("no reference table {other} (expected 1-4)"))),
    };
    Ok(ReferenceTable { id, title, entries })
}

/// A measured cycle count; `None` if the run did not converge.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub grid: GridKind,
    pub order: usize,
    pub cells: usize,
    pub knudsen: f64,
    pub wall_velocity: f64,
    pub cycles: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub measurement: Measurement,
    pub reference: Option<usize>,
    /// measured / reference.
    pub ratio: Option<f64>,
    /// Outside `[1/3, 3]`, unconverged, or without a reference.
    pub flagged: bool,
}

/// `iter(2N) / iter(N)` for one order and two successive measured sizes.
#[derive(Clone, Debug, PartialEq)]
pub struct TrendRow {
    pub order: usize,
    pub cells: usize,
    pub ratio: Option<f64>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableReport {
    pub table: u8,
    pub rows: Vec<ComparisonRow>,
    pub trends: Vec<TrendRow>,
}

impl TableReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| !r.flagged) && self.trends.iter().all(|t| t.ok)
    }

    pub fn render(&self) -> String {
        let mut s = String::from("table,grid,M,N,kn,uw,measured,reference,ratio,flag\n");
        for r in &self.rows {
            let m = &r.measurement;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                self.table,
                m.grid.as_str(),
                m.order,
                m.cells,
                m.knudsen,
                m.wall_velocity,
                m.cycles.map_or("-".into(), |c| c.to_string()),
                r.reference.map_or("-".into(), |c| c.to_string()),
                r.ratio.map_or("-".into(), |x| format!("{x:.3}")),
                if r.flagged { "FLAG" } else { "ok" }
            );
        }
        s.push_str("trend,M,N,iter(2N)/iter(N),flag\n");
        for t in &self.trends {
            let _ = writeln!(
                s,
                "trend,{},{},{},{}",
                t.order,
                t.cells,
                t.ratio.map_or("-".into(), |x| format!("{x:.3}")),
                if t.ok { "ok" } else { "FLAG" }
            );
        }
        s
    }
}

/// Ratio band check against `reference`, plus the doubling trend
/// `iter(2N)/iter(N) ≤ 2` per order and grid over the measured sizes.
pub fn compare_tables(reference: &ReferenceTable, measured: &[Measurement]) -> TableReport {
    let rows = measured
        .iter()
        .map(|m| {
            let reference = reference.entries.iter().find(|e| e.matches(m)).map(|e| e.cycles);
            let ratio = match (m.cycles, reference) {
                (Some(c), Some(r)) => Some(c as f64 / r as f64),
                _ => None,
            };
            let flagged = !ratio.is_some_and(|x| (1.0 / 3.0..=3.0).contains(&x));
            ComparisonRow {
                measurement: m.clone(),
                reference,
                ratio,
                flagged,
            }
        })
        .collect();
    let mut trends = Vec::new();
    for m in measured {
        let Some(next) = measured.iter().find(|o| {
            o.order == m.order
                && o.grid == m.grid
                && o.knudsen == m.knudsen
                && o.wall_velocity == m.wall_velocity
                && o.cells == 2 * m.cells
        }) else {
            continue;
        };
        let ratio = match (m.cycles, next.cycles) {
            (Some(a), Some(b)) if a > 0 => Some(b as f64 / a as f64),
            _ => None,
        };
        trends.push(TrendRow {
            order: m.order,
            cells: m.cells,
            ratio,
            ok: ratio.is_some_and(|x| x <= 2.0),
        });
    }
    TableReport {
        table: reference.id,
        rows,
        trends,
    }
}
