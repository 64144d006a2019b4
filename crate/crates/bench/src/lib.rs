//! Fixtures shared by the kernel benchmarks.

use momentflow::harness::{build_problem, newton_config, run_case, RunConfig};
use momentflow::{Field, NewtonConfig, ProblemSpec};

/// A Couette state a few cycles into the solve, so every kernel sees
/// non-equilibrium cells with their own anchors.
pub struct Fixture {
    pub field: Field,
    pub spec: ProblemSpec,
    pub newton: NewtonConfig,
}

pub fn couette_fixture(order: usize, cells: usize) -> Fixture {
    let cfg = RunConfig {
        order,
        cells,
        max_iters: 3,
        ..RunConfig::couette()
    };
    let spec = build_problem(&cfg).expect("valid preset");
    let field = run_case(&cfg).expect("preset runs").report.field;
    Fixture {
        field,
        spec,
        newton: newton_config(&cfg),
    }
}
