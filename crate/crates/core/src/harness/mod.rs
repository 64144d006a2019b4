//! Benchmark presets, run configuration and output files.

mod checks;
mod config;
mod run;
mod samples;
mod tables;

pub use checks::{run_checks, CheckResult};
pub use config::{CaseKind, GridKind, LawKind, RunConfig, SolverKind};
pub use run::{
    build_grid, build_problem, cycle_config, emit_history, emit_profiles, failure_summary, history_csv, newton_config,
    profiles, profiles_csv, reference_overlay, run_case, summary_text, write_outputs, write_summary, Overlay,
    ProfileRow, RunOutcome, PROFILE_COLUMNS,
};
pub use samples::{random_compliant, random_direction, random_field, seeded_rng, SampleRanges};
pub use tables::{
    compare_tables, reference_table, ComparisonRow, Measurement, ReferenceEntry, ReferenceTable, TableReport, TrendRow,
};
