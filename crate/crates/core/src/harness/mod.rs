//! Scenario harness: JSON descriptions of verification runs, executed one
//! at a time or as a directory suite, with persistable records, CSV
//! sidecars, and SVG plots.
//!
//! The contract is determinism. A scenario's canonical JSON is hashed
//! into the record, every random choice is drawn from a generator seeded
//! by the scenario id, and wall-clock time is reported next to (never
//! inside) the record, so rerunning a scenario reproduces the record and
//! its sidecars byte for byte. Plots re-run the scenario embedded in a
//! record rather than depending on saved state.

mod run;
mod scenario;
mod suite;
mod svg;

pub use run::{
    load_record, render_report, run_scenario, write_outcome, RunOutcome, RunRecord, Sidecar,
    BUSEMANN_STEPS, BUSEMANN_T_MAX, PENETRATION_THRESHOLD, REVERSED_RAY_FLOOR,
};
pub use scenario::{
    load_scenario, parse_scenario, parse_tol_override, BodySpec, ModuleKind, Scenario, SeedSpec,
    SurfaceSpec, Tolerances,
};
pub use suite::{run_suite, suite_csv, suite_table, SuiteRow, SuiteSummary, Verdict};
pub use svg::render_svg;
