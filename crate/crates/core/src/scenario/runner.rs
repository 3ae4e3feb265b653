use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::svg::{line_plot, Series};
use super::ScenarioSpec;
use crate::error::{ScenarioError, SimError};
use crate::sim::{metrics, run_closed_loop, Metrics, SimLog};

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub name: String,
    pub rows: usize,
    pub metrics: Metrics,
    pub files: Vec<PathBuf>,
}

/// Result of one run: the summary, or the error together with whatever
/// files were still written.
pub type RunOutcome = Result<RunSummary, (ScenarioError, Vec<PathBuf>)>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ScenarioError + '_ {
    move |source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `<name>.csv`, `<name>_output.svg` and `<name>_control.svg`.
pub fn write_outputs(log: &SimLog, out_dir: &Path) -> Result<Vec<PathBuf>, ScenarioError> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let csv = out_dir.join(format!("{}.csv", log.name));
    let file = fs::File::create(&csv).map_err(io_err(&csv))?;
    log.write_csv(std::io::BufWriter::new(file)).map_err(io_err(&csv))?;

    let output = out_dir.join(format!("{}_output.svg", log.name));
    let svg = line_plot(
        &format!("{}: output", log.name),
        "t [s]",
        "y",
        &[
            Series {
                label: "y",
                x: &log.t,
                y: &log.y,
                color: "#1f77b4",
                dashed: false,
            },
            Series {
                label: "y reference",
                x: &log.t,
                y: &log.y_ref,
                color: "#d62728",
                dashed: true,
            },
        ],
    );
    fs::write(&output, svg).map_err(io_err(&output))?;

    let control = out_dir.join(format!("{}_control.svg", log.name));
    let svg = line_plot(
        &format!("{}: control", log.name),
        "t [s]",
        "u",
        &[Series {
            label: "u",
            x: &log.t,
            y: &log.u,
            color: "#2ca02c",
            dashed: false,
        }],
    );
    fs::write(&control, svg).map_err(io_err(&control))?;
    Ok(vec![csv, output, control])
}

/// Runs one scenario and writes its outputs. On divergence the partial log
/// is still written and the error returned alongside the files.
pub fn run_to_dir(spec: &ScenarioSpec, out_dir: &Path) -> RunOutcome {
    match run_closed_loop(spec) {
        Ok(log) => {
            let files = write_outputs(&log, out_dir).map_err(|e| (e, Vec::new()))?;
            Ok(RunSummary {
                name: spec.name.clone(),
                rows: log.len(),
                metrics: metrics(&log, spec.reference.span()),
                files,
            })
        }
        Err(SimError::Diverged { t, detail, partial }) => {
            let files = write_outputs(&partial, out_dir).unwrap_or_default();
            Err((SimError::Diverged { t, detail, partial }.into(), files))
        }
        Err(e) => Err((e.into(), Vec::new())),
    }
}

/// Runs every scenario in parallel, keeping the input order in the result.
pub fn run_all(specs: &[ScenarioSpec], out_dir: &Path) -> Vec<(String, RunOutcome)> {
    specs
        .par_iter()
        .map(|s| (s.name.clone(), run_to_dir(s, out_dir)))
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map_or("-".into(), |v| format!("{v:.3}"))
}

/// Plain-text table of the metrics of a batch; failed runs show the error.
pub fn summary_table(results: &[(String, RunOutcome)]) -> String {
    let width = results.iter().map(|(n, _)| n.len()).max().unwrap_or(8).max(8);
    let mut out = format!(
        "{:<width$}  {:>7}  {:>12}  {:>12}  {:>12}  {:>9}\n",
        "scenario", "status", "rms_error", "max_abs_err", "control_var", "settle_s"
    );
    for (name, r) in results {
        match r {
            Ok(s) => out.push_str(&format!(
                "{:<width$}  {:>7}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>9}\n",
                name,
                "ok",
                s.metrics.rms_error,
                s.metrics.max_abs_error,
                s.metrics.control_variance,
                opt(s.metrics.settling_time)
            )),
            Err((e, _)) => out.push_str(&format!("{:<width$}  {:>7}  {e}\n", name, "failed")),
        }
    }
    out
}
