//! Fast deterministic property checks behind the `check` command.

use super::config::RunConfig;
use super::run::run_case;
use super::samples::{random_compliant, random_direction, random_field, seeded_rng, SampleRanges};
use crate::basis::{maxwellian, project, raw_moment, BasisAnchor};
use crate::closure::es_expansion;
use crate::discretization::asinh_grid;
use crate::nmg::restrict_field;
use crate::sgs::{max_relaxation, relaxed_state};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn result(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name, passed, detail }
}

fn equilibrium_exactness() -> CheckResult {
    let cfg = RunConfig {
        wall_velocity: 0.0,
        cells: 64,
        ..RunConfig::couette()
    };
    match run_case(&cfg) {
        Ok(o) => {
            let r0 = o.report.history[0].residual;
            result(
                "equilibrium_exactness",
                o.report.converged() && o.report.iterations() == 0 && r0 <= 1e-12,
                format!("initial residual {r0:e}, {} iterations", o.report.iterations()),
            )
        }
        Err(e) => result("equilibrium_exactness", false, e.to_string()),
    }
}

fn projection_round_trip() -> CheckResult {
    let mut rng = seeded_rng(11);
    let ranges = SampleRanges::default();
    let mut worst_moment = 0.0f64;
    let mut worst_trip = 0.0f64;
    for k in 0..100 {
        let f = random_compliant(&mut rng, 3 + k % 4, &ranges).expect("valid sample");
        let g = random_compliant(&mut rng, f.order(), &ranges).expect("valid sample");
        let target: &BasisAnchor = g.anchor();
        let p = project(&f, target);
        for a in f.space().indices() {
            let (m1, m2) = (raw_moment(&f, *a).unwrap(), raw_moment(&p, *a).unwrap());
            worst_moment = worst_moment.max((m1 - m2).abs() / m1.abs().max(1.0));
        }
        let back = project(&p, f.anchor());
        for (x, y) in back.values().iter().zip(f.values()) {
            worst_trip = worst_trip.max((x - y).abs());
        }
    }
    result(
        "projection_round_trip",
        worst_moment <= 1e-10 && worst_trip <= 1e-10,
        format!("moment error {worst_moment:.2e}, round trip {worst_trip:.2e}"),
    )
}

fn es_unit_prandtl() -> CheckResult {
    let mut rng = seeded_rng(12);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let f = random_compliant(&mut rng, 5, &SampleRanges::default()).expect("valid sample");
        let es = es_expansion(&f, 1.0).expect("valid state");
        let m = maxwellian(f.density(), f.anchor().u, f.anchor().theta, 5).unwrap();
        for (x, y) in es.values().iter().zip(m.values()) {
            worst = worst.max((x - y).abs());
        }
    }
    result(
        "es_unit_prandtl_is_maxwellian",
        worst == 0.0,
        format!("max deviation {worst:e}"),
    )
}

fn restriction_conservation() -> CheckResult {
    let mut rng = seeded_rng(13);
    let grid = asinh_grid(0.0, 16).unwrap();
    let coarse = grid.coarsen().unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let fine = random_field(&mut rng, grid.clone(), 4, &SampleRanges::default()).expect("valid field");
        let c = restrict_field(&fine, &coarse).expect("restrictable");
        for i in 0..coarse.n_cells() {
            for b in fine.cell(0).space().indices() {
                let lhs = coarse.dx(i) * raw_moment(c.cell(i), *b).unwrap();
                let rhs = grid.dx(2 * i) * raw_moment(fine.cell(2 * i), *b).unwrap()
                    + grid.dx(2 * i + 1) * raw_moment(fine.cell(2 * i + 1), *b).unwrap();
                worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1e-3 * coarse.dx(i)));
            }
        }
    }
    result(
        "restriction_conservation",
        worst <= 1e-12,
        format!("max relative error {worst:.2e}"),
    )
}

fn relaxation_soundness() -> CheckResult {
    let mut rng = seeded_rng(14);
    let (rho_floor, theta_floor) = (1e-2, 1e-2);
    let mut violations = 0;
    for _ in 0..1000 {
        let f = random_compliant(&mut rng, 3, &SampleRanges::default()).expect("valid sample");
        let df = random_direction(&mut rng, &f, 3.0);
        let tau = match max_relaxation(&f, &df, rho_floor, theta_floor) {
            Ok(t) => t,
            Err(_) => {
                violations += 1;
                continue;
            }
        };
        for k in 1..=20 {
            let (rho, theta) = relaxed_state(&f, &df, tau * k as f64 / 20.0);
            if rho < rho_floor - 1e-12 || theta < theta_floor - 1e-12 {
                violations += 1;
                break;
            }
        }
    }
    result(
        "relaxation_soundness",
        violations == 0,
        format!("{violations} violations in 1000 draws"),
    )
}

fn mass_conservation() -> CheckResult {
    let cfg = RunConfig {
        cells: 32,
        max_iters: 3,
        ..RunConfig::couette()
    };
    match run_case(&cfg) {
        Ok(o) => {
            let drift = o.mass_drift();
            result(
                "mass_conservation",
                drift <= 1e-12,
                format!("relative drift {drift:.2e} after 3 cycles"),
            )
        }
        Err(e) => result("mass_conservation", false, e.to_string()),
    }
}

/// Runs every check; each takes well under a second.
pub fn run_checks() -> Vec<CheckResult> {
    vec![
        equilibrium_exactness(),
        projection_round_trip(),
        es_unit_prandtl(),
        restriction_conservation(),
        relaxation_soundness(),
        mass_conservation(),
    ]
}
