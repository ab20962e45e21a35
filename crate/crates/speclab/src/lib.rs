//! Scenario-driven front end for `speclab-core`: reads scenario and domain
//! JSON, runs spectra, inequality checks and identity certification, and
//! writes CSV and JSON reports.

pub mod domain;
pub mod dump;
pub mod error;
pub mod pipeline;
pub mod report;
pub mod scenario;

use std::fs;
use std::path::{Path, PathBuf};

pub use error::{RunError, SchemaError};
pub use pipeline::{run, Outcome};
pub use scenario::{load_scenario, parse_scenario, Overrides, Scenario};

/// Scenarios shipped with the binary, as `(name, json)`.
pub const BUNDLED: [(&str, &str); 7] = [
    (
        "square_one_dirichlet_side",
        include_str!("../scenarios/square_one_dirichlet_side.json"),
    ),
    (
        "square_parallel_dirichlet_sides",
        include_str!("../scenarios/square_parallel_dirichlet_sides.json"),
    ),
    (
        "cube_two_neumann_faces",
        include_str!("../scenarios/cube_two_neumann_faces.json"),
    ),
    (
        "trapezoid_parallel_neumann",
        include_str!("../scenarios/trapezoid_parallel_neumann.json"),
    ),
    (
        "pentagon_one_dirichlet_edge",
        include_str!("../scenarios/pentagon_one_dirichlet_edge.json"),
    ),
    (
        "square_monotonicity",
        include_str!("../scenarios/square_monotonicity.json"),
    ),
    (
        "square_levine_weinberger",
        include_str!("../scenarios/square_levine_weinberger.json"),
    ),
];

fn write(path: PathBuf, contents: &str) -> Result<PathBuf, RunError> {
    fs::write(&path, contents).map_err(|e| RunError::io(&path, e))?;
    Ok(path)
}

/// Writes `spectrum_<kind>.csv` for each requested kind, `<check>.csv` for
/// each check and `summary.json` into `dir`, creating it if needed. Returns
/// the written paths.
pub fn write_reports(o: &Outcome, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    let mut written = Vec::new();
    for &kind in &o.requested {
        if let Some(s) = o.spectrum(kind) {
            let path = dir.join(format!("spectrum_{}.csv", kind.name()));
            written.push(write(path, &report::spectrum_csv(s))?);
        }
    }
    for c in &o.checks {
        written.push(write(
            dir.join(format!("{}.csv", c.id)),
            &report::check_csv(c),
        )?);
    }
    let summary =
        serde_json::to_string_pretty(&report::summary_json(o)).expect("JSON values serialize");
    written.push(write(dir.join("summary.json"), &(summary + "\n"))?);
    Ok(written)
}
