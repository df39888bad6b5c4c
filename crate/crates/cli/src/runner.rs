//! Executes one scenario and writes its artifacts.

use std::path::{Path, PathBuf};
use std::time::Instant;

use levyfp_core::experiments::initial_field;
use levyfp_core::montecarlo::{
    binned_masses, cauchy_cdf, ks_statistic, simulate_terminal, PathConfig,
};
use levyfp_core::verify::{cauchy_exact, error_report};
use levyfp_core::{evolve, DensityField, OperatorWorkspace, StepControl};
use serde::{Deserialize, Serialize};

use crate::error::{config, CliResult};
use crate::output::{density_file_name, fmt_f64, write_density, write_table};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Failed,
}

/// Per-scenario section of the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub c_alpha: f64,
    pub zeta_alpha_minus_1: f64,
    pub c_h: f64,
    pub dt: f64,
    pub lf_speed: f64,
    pub wall_time_s: f64,
    /// Paths relative to the output root.
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub n_paths: usize,
    pub n_exited: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binned_l1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_exact: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Everything resolved before time stepping; failures here are config errors.
pub struct Prepared {
    pub workspace: OperatorWorkspace,
    pub initial: DensityField,
    pub dt: f64,
}

pub fn prepare(sc: &Scenario) -> CliResult<Prepared> {
    let spec = sc.run_spec()?;
    let err = |e: levyfp_core::Error| config(format!("{}: {e}", sc.name));
    let workspace = spec.workspace().map_err(err)?;
    let initial = initial_field(&spec, &workspace).map_err(err)?;
    let dt = spec.time_step(&workspace).map_err(err)?;
    Ok(Prepared {
        workspace,
        initial,
        dt,
    })
}

pub struct RunResult {
    pub record: RunRecord,
    /// Fields at the output times that were reached.
    pub snapshots: Vec<DensityField>,
}

fn relative(sc: &Scenario, file: &str) -> String {
    match &sc.outputs_dir {
        Some(d) => format!("{d}/{file}"),
        None => file.to_string(),
    }
}

/// Runs `sc` under `root`. Solver failures are recorded in the returned
/// record; only I/O and configuration problems are errors.
pub fn run_scenario(sc: &Scenario, root: &Path) -> CliResult<RunResult> {
    let started = Instant::now();
    let dir: PathBuf = match &sc.outputs_dir {
        Some(d) => root.join(d),
        None => root.to_path_buf(),
    };
    let Prepared {
        workspace: ws,
        initial: p0,
        dt,
    } = prepare(sc)?;
    let params = ws.params();
    let mut record = RunRecord {
        name: sc.name.clone(),
        status: Status::Ok,
        error: None,
        c_alpha: params.c_alpha(),
        zeta_alpha_minus_1: params.zeta_am1(),
        c_h: ws.c_h(),
        dt,
        lf_speed: ws.drift().lf_speed(),
        wall_time_s: 0.0,
        outputs: Vec::new(),
        mc: None,
    };

    let mut snapshots: Vec<DensityField> = Vec::new();
    if sc.t_outputs[0] == p0.time() {
        snapshots.push(p0.clone());
    }
    let ctrl = StepControl {
        dt,
        safety: 1.0,
        mode: sc.integrator,
    };
    let outcome = evolve(p0, &ws, &ctrl, sc.t_end(), &sc.t_outputs, |p| {
        if snapshots.last().map(|s| s.time()) != Some(p.time()) {
            snapshots.push(p.clone());
        }
    });

    for p in &snapshots {
        let file = density_file_name(&sc.name, p.time());
        write_density(&dir.join(&file), p)?;
        record.outputs.push(relative(sc, &file));
    }
    if sc.has_exact_solution() && !snapshots.is_empty() {
        let mut rows = Vec::new();
        for p in &snapshots {
            let t = p.time();
            let r = error_report(p, |x| cauchy_exact(x, t)).map_err(crate::error::runtime)?;
            rows.push(vec![fmt_f64(t), fmt_f64(r.max_abs), fmt_f64(r.rel_l2)]);
        }
        let file = format!("{}_errors.csv", sc.name);
        write_table(&dir.join(&file), &["t", "max_abs", "rel_l2"], &rows)?;
        record.outputs.push(relative(sc, &file));
    }

    match outcome {
        Err(e) => {
            record.status = Status::Failed;
            record.error = Some(e.to_string());
        }
        Ok(final_field) => {
            if let Some(mc) = &sc.mc {
                record.mc = Some(run_mc(sc, mc, &final_field, &dir, &mut record.outputs)?);
            }
        }
    }
    record.wall_time_s = started.elapsed().as_secs_f64();
    Ok(RunResult { record, snapshots })
}

fn run_mc(
    sc: &Scenario,
    mc: &crate::scenario::McSection,
    p: &DensityField,
    dir: &Path,
    outputs: &mut Vec<String>,
) -> CliResult<McSummary> {
    let cfg = PathConfig {
        params: sc.levy_params()?,
        drift: sc.drift,
        x0: mc.x0,
        t_end: sc.t_end(),
        dt: mc.dt,
        n_paths: mc.n_paths,
        seed: mc.seed,
        guard_radius: mc.guard_radius,
    };
    let ens = simulate_terminal(&cfg).map_err(|e| config(format!("mc: {e}")))?;

    let rows: Vec<Vec<String>> = ens
        .samples
        .iter()
        .enumerate()
        .map(|(i, x)| vec![i.to_string(), fmt_f64(*x)])
        .collect();
    let file = format!("{}_ensemble.csv", sc.name);
    write_table(&dir.join(&file), &["path_index", "terminal_x"], &rows)?;
    outputs.push(relative(sc, &file));

    let mut summary = McSummary {
        n_paths: ens.n_paths,
        n_exited: ens.n_exited(),
        seed: mc.seed,
        binned_l1: None,
        ks_exact: None,
        note: None,
    };
    if sc.has_exact_solution() && mc.x0 == 0.0 {
        summary.ks_exact = Some(ks_statistic(&ens.samples, |x| cauchy_cdf(x, cfg.t_end)));
    }

    let range = mc.range.unwrap_or(p.grid().half_width());
    let half = (range / mc.bin_width).floor() * mc.bin_width;
    match binned_masses(&ens, p, -half, half, mc.bin_width) {
        Ok(bins) => {
            let w = mc.bin_width;
            let rows: Vec<Vec<String>> = bins
                .iter()
                .map(|b| {
                    vec![
                        fmt_f64(b.lo),
                        fmt_f64(b.hi),
                        fmt_f64(b.empirical / w),
                        fmt_f64(b.solver / w),
                    ]
                })
                .collect();
            let file = format!("{}_mc.csv", sc.name);
            write_table(
                &dir.join(&file),
                &["bin_lo", "bin_hi", "p_mc", "p_solver"],
                &rows,
            )?;
            outputs.push(relative(sc, &file));
            summary.binned_l1 = Some(bins.iter().map(|b| (b.empirical - b.solver).abs()).sum());
        }
        Err(e) => summary.note = Some(format!("no binned comparison: {e}")),
    }
    Ok(summary)
}
