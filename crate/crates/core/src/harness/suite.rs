//! Batch execution: every scenario JSON in a directory, run on a small
//! worker pool, summarized one row per scenario. A scenario that fails to
//! parse or errors mid-run becomes an error row; the suite keeps going.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::run::{run_scenario, write_outcome, RunOutcome};
use super::scenario::{load_scenario, Scenario};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteRow {
    pub id: String,
    pub verdict: Verdict,
    /// Failing check names, or the error message for error rows.
    pub detail: String,
    /// Smallest check margin; NaN for error rows.
    pub worst_margin: f64,
    pub runtime_seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SuiteSummary {
    /// Sorted by id, independent of worker interleaving.
    pub rows: Vec<SuiteRow>,
    pub runtime_seconds: f64,
}

impl SuiteSummary {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::Pass)
    }

    /// (passed, failed, errored)
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for row in &self.rows {
            match row.verdict {
                Verdict::Pass => counts.0 += 1,
                Verdict::Fail => counts.1 += 1,
                Verdict::Error => counts.2 += 1,
            }
        }
        counts
    }
}

fn scenario_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::Io {
        reason: format!("reading {}: {e}", dir.display()),
    })? {
        let path = entry
            .map_err(|e| Error::Io {
                reason: format!("reading {}: {e}", dir.display()),
            })?
            .path();
        if path.extension().is_some_and(|ext| ext == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn fail_detail(outcome: &RunOutcome) -> String {
    outcome
        .record
        .report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect::<Vec<_>>()
        .join("+")
}

/// Run every `*.json` scenario under `dir`. Records and sidecars are
/// written to `out` when given (plus a `suite.csv`), serialized on this
/// thread after the workers finish. `overrides` rewrites named tolerances
/// in every scenario before running; an unknown name is a suite error.
pub fn run_suite(
    dir: &Path,
    out: Option<&Path>,
    workers: usize,
    overrides: &[(String, f64)],
) -> Result<SuiteSummary> {
    let started = Instant::now();
    let mut rows: Vec<SuiteRow> = Vec::new();
    let mut tasks: Vec<Scenario> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for path in scenario_paths(dir)? {
        match load_scenario(&path) {
            Ok(mut sc) => {
                if !seen.insert(sc.id.clone()) {
                    rows.push(SuiteRow {
                        id: stem(&path),
                        verdict: Verdict::Error,
                        detail: format!("{}: duplicate scenario id {}", path.display(), sc.id),
                        worst_margin: f64::NAN,
                        runtime_seconds: 0.0,
                    });
                    continue;
                }
                let mut bad_override = None;
                for (key, value) in overrides {
                    if let Err(e) = sc.tolerances.set(key, *value) {
                        bad_override = Some(e);
                        break;
                    }
                }
                if let Some(e) = bad_override {
                    return Err(e);
                }
                tasks.push(sc);
            }
            Err(e) => rows.push(SuiteRow {
                id: stem(&path),
                verdict: Verdict::Error,
                detail: e.to_string(),
                worst_margin: f64::NAN,
                runtime_seconds: 0.0,
            }),
        }
    }

    let next = AtomicUsize::new(0);
    let finished: Mutex<Vec<(usize, Result<RunOutcome>)>> = Mutex::new(Vec::new());
    let pool = workers.max(1).min(tasks.len());
    std::thread::scope(|scope| {
        for _ in 0..pool {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let result = run_scenario(&tasks[i]);
                finished.lock().unwrap().push((i, result));
            });
        }
    });
    let mut finished = finished.into_inner().unwrap();
    finished.sort_by_key(|(i, _)| *i);

    for (i, result) in finished {
        let id = tasks[i].id.clone();
        match result {
            Ok(outcome) => {
                let verdict = if outcome.all_pass() {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                };
                rows.push(SuiteRow {
                    id,
                    verdict,
                    detail: fail_detail(&outcome),
                    worst_margin: outcome.worst_margin(),
                    runtime_seconds: outcome.runtime_seconds,
                });
                if let Some(out_dir) = out {
                    write_outcome(&outcome, out_dir)?;
                }
            }
            Err(e) => rows.push(SuiteRow {
                id,
                verdict: Verdict::Error,
                detail: e.to_string(),
                worst_margin: f64::NAN,
                runtime_seconds: 0.0,
            }),
        }
    }
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    let summary = SuiteSummary {
        rows,
        runtime_seconds: started.elapsed().as_secs_f64(),
    };
    if let Some(out_dir) = out {
        std::fs::create_dir_all(out_dir)?;
        std::fs::write(out_dir.join("suite.csv"), suite_csv(&summary))?;
    }
    Ok(summary)
}

/// Fixed-width table for terminals.
pub fn suite_table(summary: &SuiteSummary) -> String {
    let id_width = summary
        .rows
        .iter()
        .map(|r| r.id.len())
        .max()
        .unwrap_or(2)
        .max(2);
    let mut out = format!(
        "{:<id_width$}  {:<7}{:>13}  {:>9}  detail\n",
        "id", "verdict", "worst margin", "runtime"
    );
    for row in &summary.rows {
        let margin = if row.worst_margin.is_nan() {
            "--".to_string()
        } else {
            format!("{:+.3e}", row.worst_margin)
        };
        out.push_str(&format!(
            "{:<id_width$}  {:<7}{:>13}  {:>7.2} s  {}\n",
            row.id,
            row.verdict.label(),
            margin,
            row.runtime_seconds,
            row.detail,
        ));
    }
    let (passed, failed, errored) = summary.counts();
    out.push_str(&format!(
        "{} scenarios: {} passed, {} failed, {} errors ({:.2} s total)\n",
        summary.rows.len(),
        passed,
        failed,
        errored,
        summary.runtime_seconds,
    ));
    out
}

/// Machine-readable companion to the table. NaN margins print as NaN.
pub fn suite_csv(summary: &SuiteSummary) -> String {
    let mut out = String::from("id,verdict,worst_margin,runtime_seconds\n");
    for row in &summary.rows {
        out.push_str(&format!(
            "{},{},{},{:.6}\n",
            row.id,
            row.verdict.label(),
            row.worst_margin,
            row.runtime_seconds,
        ));
    }
    out
}
