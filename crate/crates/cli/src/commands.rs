//! Built-in commands, the manifest they write, and re-execution from it.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use levyfp_core::experiments::{
    cauchy_spec, halving_sequence, local_maxima, mass_deficit_order, mass_study, point_convergence,
    point_convergence_extrapolated, run, threshold_curve, ConvergenceRow,
};
use levyfp_core::verify::{cauchy_exact, error_report, tail_slope};
use levyfp_core::{AuxCondition, DensityField, DriftKind, InitialProfile, NaturalEdge};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config, runtime, CliError, CliResult};
use crate::output::{
    density_file_name, fmt_f64, fmt_opt, write_atomic, write_density, write_table,
};
use crate::runner::{prepare, run_scenario, RunRecord, RunResult, Status};
use crate::scenario::{McSection, ParamsSection, Scenario};

pub const MANIFEST_VERSION: u32 = 1;

/// A fully resolved command: everything needed to reproduce its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Invocation {
    Run {
        scenarios: Vec<Scenario>,
    },
    CauchyVerify {
        h: f64,
        half_width: f64,
        dt_factor: f64,
        density_times: Vec<f64>,
        error_times: Vec<f64>,
    },
    Table1 {
        levels: usize,
        half_width: f64,
        dt_factor: f64,
    },
    Table2 {
        levels: usize,
        half_width: f64,
        dt_factor: f64,
    },
    Masscheck {
        half_widths: Vec<f64>,
        h: f64,
        t_end: f64,
        dt_factor: f64,
        edge: NaturalEdge,
    },
    Tails {
        alphas: Vec<f64>,
        h: f64,
        half_width: f64,
        t_end: f64,
        dt_factor: f64,
        window: [f64; 2],
    },
    AbsorbingSuite {
        h: f64,
    },
    OuSuite {
        h: f64,
    },
    DoublewellSuite {
        h: f64,
        half_width: f64,
        t_outputs: Vec<f64>,
    },
    McCompare {
        scenario: Scenario,
    },
    Threshold {
        eps: f64,
        points: usize,
    },
}

impl Invocation {
    pub fn command(&self) -> &'static str {
        match self {
            Invocation::Run { .. } => "run",
            Invocation::CauchyVerify { .. } => "cauchy-verify",
            Invocation::Table1 { .. } => "table1",
            Invocation::Table2 { .. } => "table2",
            Invocation::Masscheck { .. } => "masscheck",
            Invocation::Tails { .. } => "tails",
            Invocation::AbsorbingSuite { .. } => "absorbing-suite",
            Invocation::OuSuite { .. } => "ou-suite",
            Invocation::DoublewellSuite { .. } => "doublewell-suite",
            Invocation::McCompare { .. } => "mc-compare",
            Invocation::Threshold { .. } => "threshold",
        }
    }

    /// Name used for the manifest file.
    fn stem(&self) -> String {
        match self {
            Invocation::Run { scenarios } if scenarios.len() == 1 => scenarios[0].name.clone(),
            other => other.command().to_string(),
        }
    }

    /// Scenario list for the commands that are plain batches of scenarios.
    pub fn scenarios(&self) -> Option<Vec<Scenario>> {
        match self {
            Invocation::Run { scenarios } => Some(scenarios.clone()),
            Invocation::AbsorbingSuite { h } => Some(absorbing_suite(*h)),
            Invocation::OuSuite { h } => Some(ou_suite(*h)),
            Invocation::DoublewellSuite {
                h,
                half_width,
                t_outputs,
            } => Some(doublewell_suite(*h, *half_width, t_outputs)),
            Invocation::McCompare { scenario } => Some(vec![scenario.clone()]),
            _ => None,
        }
    }

    /// Rejects invalid settings before any work starts.
    pub fn validate(&self) -> CliResult<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config(format!("{name}: must be positive, got {v}")))
            }
        };
        match self {
            Invocation::CauchyVerify {
                h,
                half_width,
                dt_factor,
                density_times,
                error_times,
            } => {
                positive("h", *h)?;
                positive("dt_factor", *dt_factor)?;
                cauchy_spec(*half_width, *h, 1.0, *dt_factor)
                    .and_then(|s| s.grid())
                    .map_err(|e| config(e.to_string()))?;
                for &t in density_times.iter().chain(error_times) {
                    if !(t > 0.01 && t.is_finite()) {
                        return Err(config(format!("times: {t} must exceed the seed time 0.01")));
                    }
                }
            }
            Invocation::Table1 {
                levels,
                half_width,
                dt_factor,
            }
            | Invocation::Table2 {
                levels,
                half_width,
                dt_factor,
            } => {
                if *levels < 2 {
                    return Err(config("levels: need at least two resolutions"));
                }
                positive("half_width", *half_width)?;
                positive("dt_factor", *dt_factor)?;
            }
            Invocation::Masscheck {
                half_widths,
                h,
                t_end,
                dt_factor,
                ..
            } => {
                positive("h", *h)?;
                positive("t_end", *t_end)?;
                positive("dt_factor", *dt_factor)?;
                if half_widths.is_empty() {
                    return Err(config("half_widths: empty"));
                }
            }
            Invocation::Tails {
                alphas,
                h,
                half_width,
                t_end,
                dt_factor,
                window,
            } => {
                positive("h", *h)?;
                positive("t_end", *t_end)?;
                positive("dt_factor", *dt_factor)?;
                if !(0.0 < window[0] && window[0] < window[1] && window[1] <= *half_width) {
                    return Err(config(format!(
                        "window: need 0 < lo < hi <= half_width, got {window:?}"
                    )));
                }
                for &a in alphas {
                    levyfp_core::StabilityIndex::new(a).map_err(|e| config(e.to_string()))?;
                }
            }
            Invocation::Threshold { eps, points } => {
                positive("eps", *eps)?;
                if *points < 3 {
                    return Err(config("points: need at least 3"));
                }
            }
            _ => {}
        }
        if let Some(list) = self.scenarios() {
            if list.is_empty() {
                return Err(config("no scenarios to run"));
            }
            let mut names = std::collections::BTreeSet::new();
            for sc in &list {
                sc.validate()?;
                let key = (sc.outputs_dir.clone(), sc.name.clone());
                if !names.insert(key) {
                    return Err(config(format!("duplicate scenario name {}", sc.name)));
                }
                prepare(sc)?;
            }
        }
        Ok(())
    }
}

/// Structured record written next to the outputs of every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub tool: String,
    pub version: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_s: f64,
    pub threads: usize,
    /// Files written, relative to the manifest's directory.
    pub files: Vec<String>,
    pub invocation: Invocation,
    /// Scalar results, e.g. fitted orders.
    #[serde(default)]
    pub summary: BTreeMap<String, f64>,
    #[serde(default)]
    pub runs: Vec<RunRecord>,
}

impl Manifest {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }
}

/// Reads a manifest or a bare scenario document into an invocation.
pub fn load_config(path: &Path) -> CliResult<Invocation> {
    let text =
        std::fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
    let value: toml::Table = text
        .parse()
        .map_err(|e| config(format!("{}: {e}", path.display())))?;
    if value.contains_key("manifest_version") {
        let m: Manifest = toml::from_str(&text)
            .map_err(|e| config(format!("{}: manifest: {e}", path.display())))?;
        if m.manifest_version != MANIFEST_VERSION {
            return Err(config(format!(
                "manifest_version {} is not supported",
                m.manifest_version
            )));
        }
        Ok(m.invocation)
    } else {
        let sc = crate::scenario::parse_scenario(&text).map_err(|e| match e {
            CliError::Config(m) => config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        Ok(Invocation::Run {
            scenarios: vec![sc],
        })
    }
}

/// Overrides every Monte-Carlo seed in the invocation.
pub fn apply_seed(inv: &mut Invocation, seed: u64) {
    match inv {
        Invocation::Run { scenarios } => {
            for sc in scenarios {
                if let Some(mc) = &mut sc.mc {
                    mc.seed = seed;
                }
            }
        }
        Invocation::McCompare { scenario } => {
            if let Some(mc) = &mut scenario.mc {
                mc.seed = seed;
            }
        }
        _ => {}
    }
}

#[derive(Default)]
struct Artifacts {
    files: Vec<String>,
    summary: BTreeMap<String, f64>,
    runs: Vec<RunRecord>,
    failure: Option<String>,
}

/// Validates and executes `inv` under `out`, then writes the manifest.
pub fn execute(inv: &Invocation, out: &Path) -> CliResult<Manifest> {
    inv.validate()?;
    let started = Instant::now();
    std::fs::create_dir_all(out).map_err(|e| runtime(format!("{}: {e}", out.display())))?;
    let mut art = Artifacts::default();
    let result = dispatch(inv, out, &mut art);
    let (status, error) = match (&result, &art.failure) {
        (Err(e), _) => (Status::Failed, Some(e.to_string())),
        (Ok(()), Some(f)) => (Status::Failed, Some(f.clone())),
        (Ok(()), None) => (Status::Ok, None),
    };
    let manifest = Manifest {
        manifest_version: MANIFEST_VERSION,
        tool: "levyfp".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        status,
        error,
        wall_time_s: started.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
        files: art.files,
        invocation: inv.clone(),
        summary: art.summary,
        runs: art.runs,
    };
    write_atomic(&manifest_path(out, inv), manifest.to_toml().as_bytes())?;
    result.map(|_| manifest)
}

pub fn manifest_path(out: &Path, inv: &Invocation) -> PathBuf {
    out.join(format!("{}_manifest.toml", inv.stem()))
}

fn dispatch(inv: &Invocation, out: &Path, art: &mut Artifacts) -> CliResult<()> {
    if let Some(list) = inv.scenarios() {
        let results = run_batch(&list, out, art)?;
        return match inv {
            Invocation::OuSuite { .. } => ou_point_values(&list, &results, out, art),
            Invocation::DoublewellSuite { .. } => doublewell_peaks(&list, &results, out, art),
            Invocation::McCompare { .. } => {
                if let Some(mc) = results.first().and_then(|r| r.record.mc.as_ref()) {
                    if let Some(l1) = mc.binned_l1 {
                        art.summary.insert("binned_l1".into(), l1);
                    }
                    if let Some(ks) = mc.ks_exact {
                        art.summary.insert("ks_exact".into(), ks);
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        };
    }
    match inv {
        Invocation::CauchyVerify {
            h,
            half_width,
            dt_factor,
            density_times,
            error_times,
        } => cauchy_verify(
            *h,
            *half_width,
            *dt_factor,
            density_times,
            error_times,
            out,
            art,
        ),
        Invocation::Table1 {
            levels,
            half_width,
            dt_factor,
        } => {
            let rows = point_convergence(*half_width, &halving_sequence(*levels), *dt_factor)
                .map_err(runtime)?;
            convergence_table("table1.csv", &rows, out, art)
        }
        Invocation::Table2 {
            levels,
            half_width,
            dt_factor,
        } => {
            let rows =
                point_convergence_extrapolated(*half_width, &halving_sequence(*levels), *dt_factor)
                    .map_err(runtime)?;
            convergence_table("table2.csv", &rows, out, art)
        }
        Invocation::Masscheck {
            half_widths,
            h,
            t_end,
            dt_factor,
            edge,
        } => {
            let masses = mass_study(half_widths, *h, *t_end, *dt_factor, *edge).map_err(runtime)?;
            let rows: Vec<Vec<String>> = masses
                .iter()
                .map(|(l, m)| vec![fmt_f64(*l), fmt_f64(*m)])
                .collect();
            write_table(&out.join("masscheck.csv"), &["L", "I_p"], &rows)?;
            art.files.push("masscheck.csv".into());
            if let Ok(order) = mass_deficit_order(&masses) {
                art.summary.insert("deficit_order".into(), order);
            }
            Ok(())
        }
        Invocation::Tails {
            alphas,
            h,
            half_width,
            t_end,
            dt_factor,
            window,
        } => tails(
            alphas,
            *h,
            *half_width,
            *t_end,
            *dt_factor,
            *window,
            out,
            art,
        ),
        Invocation::Threshold { eps, points } => {
            let alphas: Vec<f64> = (1..*points)
                .map(|k| 2.0 * k as f64 / *points as f64)
                .collect();
            let curve = threshold_curve(*eps, &alphas).map_err(runtime)?;
            let rows: Vec<Vec<String>> = curve
                .iter()
                .map(|(a, v)| vec![fmt_f64(*a), fmt_f64(*v)])
                .collect();
            write_table(&out.join("threshold.csv"), &["alpha", "threshold"], &rows)?;
            art.files.push("threshold.csv".into());
            Ok(())
        }
        _ => unreachable!("scenario batches are handled above"),
    }
}

/// Runs independent scenarios in parallel; results keep the input order.
fn run_batch(list: &[Scenario], out: &Path, art: &mut Artifacts) -> CliResult<Vec<RunResult>> {
    let results: Vec<CliResult<RunResult>> =
        list.par_iter().map(|sc| run_scenario(sc, out)).collect();
    let mut ok = Vec::with_capacity(results.len());
    for r in results {
        let r = r?;
        if r.record.status == Status::Failed {
            let msg = format!(
                "{}: {}",
                r.record.name,
                r.record.error.clone().unwrap_or_default()
            );
            art.failure = Some(match art.failure.take() {
                Some(prev) => format!("{prev}; {msg}"),
                None => msg,
            });
        }
        art.files.extend(r.record.outputs.iter().cloned());
        art.runs.push(r.record.clone());
        ok.push(r);
    }
    Ok(ok)
}

fn convergence_table(
    file: &str,
    rows: &[ConvergenceRow],
    out: &Path,
    art: &mut Artifacts,
) -> CliResult<()> {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![fmt_f64(r.h), fmt_f64(r.error), fmt_opt(r.order)])
        .collect();
    write_table(&out.join(file), &["h", "error", "order"], &cells)?;
    art.files.push(file.into());
    Ok(())
}

fn cauchy_verify(
    h: f64,
    half_width: f64,
    dt_factor: f64,
    density_times: &[f64],
    error_times: &[f64],
    out: &Path,
    art: &mut Artifacts,
) -> CliResult<()> {
    let mut times: Vec<f64> = density_times.iter().chain(error_times).copied().collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let t_end = *times.last().ok_or_else(|| config("no output times"))?;
    let spec = cauchy_spec(half_width, h, t_end, dt_factor).map_err(runtime)?;

    let mut fields: Vec<DensityField> = Vec::new();
    let outcome = run(&spec, &times, |p| fields.push(p.clone()));
    let mut rows = Vec::new();
    for p in &fields {
        let t = p.time();
        if density_times.contains(&t) {
            let file = density_file_name("cauchy", t);
            write_density(&out.join(&file), p)?;
            art.files.push(file);
        }
        if error_times.contains(&t) {
            let r = error_report(p, |x| cauchy_exact(x, t)).map_err(runtime)?;
            rows.push(vec![fmt_f64(t), fmt_f64(r.max_abs), fmt_f64(r.rel_l2)]);
        }
    }
    write_table(
        &out.join("cauchy_errors.csv"),
        &["t", "max_abs", "rel_l2"],
        &rows,
    )?;
    art.files.push("cauchy_errors.csv".into());
    let o = outcome.map_err(runtime)?;
    art.summary.insert("dt".into(), o.dt);
    art.summary.insert("c_h".into(), o.c_h);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn tails(
    alphas: &[f64],
    h: f64,
    half_width: f64,
    t_end: f64,
    dt_factor: f64,
    window: [f64; 2],
    out: &Path,
    art: &mut Artifacts,
) -> CliResult<()> {
    let list: Vec<Scenario> = alphas
        .iter()
        .map(|&a| {
            Scenario::new(
                format!("stable_a{a}"),
                ParamsSection {
                    alpha: a,
                    eps: 1.0,
                    d: 0.0,
                },
                AuxCondition::Natural { half_width },
                InitialProfile::CauchySeed { t0: 0.01 },
                h,
                vec![t_end],
            )
            .with_dt_factor(dt_factor)
            .with_outputs_dir("tails")
        })
        .collect();
    for sc in &list {
        sc.validate()?;
    }
    let results = run_batch(&list, out, art)?;
    let mut rows = Vec::new();
    for (a, r) in alphas.iter().zip(&results) {
        if let Some(p) = r.snapshots.last().filter(|p| p.time() == t_end) {
            let slope = tail_slope(p, window[0], window[1]).map_err(runtime)?;
            art.summary.insert(format!("slope_a{a}"), slope);
            rows.push(vec![fmt_f64(*a), fmt_f64(slope), fmt_f64(-(1.0 + a))]);
        }
    }
    write_table(
        &out.join("tails/tail_slopes.csv"),
        &["alpha", "slope", "expected"],
        &rows,
    )?;
    art.files.push("tails/tail_slopes.csv".into());
    Ok(())
}

fn gaussian_absorbing(
    name: String,
    alpha: f64,
    eps: f64,
    d: f64,
    b: f64,
    h: f64,
    t: Vec<f64>,
) -> Scenario {
    Scenario::new(
        name,
        ParamsSection { alpha, eps, d },
        AuxCondition::Absorbing { a: -b, b },
        InitialProfile::GaussianPaper,
        h,
        t,
    )
    .with_dt_factor(0.5)
}

/// Absorbing condition on `(-1, 1)` without drift: time sequences,
/// dependence on alpha, and on the noise intensity.
pub fn absorbing_suite(h: f64) -> Vec<Scenario> {
    let mut v = Vec::new();
    let seq = vec![0.0, 0.05, 0.2, 0.5, 2.5];
    for (tag, init) in [
        ("gaussian", InitialProfile::GaussianPaper),
        ("uniform", InitialProfile::Uniform),
    ] {
        let mut sc = gaussian_absorbing(format!("time_{tag}"), 1.0, 1.0, 0.0, 1.0, h, seq.clone());
        sc.initial = init;
        v.push(sc);
    }
    for (tag, init) in [
        ("gaussian", InitialProfile::GaussianPaper),
        ("uniform", InitialProfile::Uniform),
    ] {
        for a in [0.1, 0.5, 1.0, 1.5, 1.9] {
            let mut sc = gaussian_absorbing(
                format!("alpha_{tag}_a{a}"),
                a,
                1.0,
                0.0,
                1.0,
                h,
                vec![0.25, 2.5],
            );
            sc.initial = init;
            v.push(sc);
        }
    }
    for eps in [0.0, 0.1, 0.5, 1.0] {
        v.push(gaussian_absorbing(
            format!("eps_e{eps}"),
            1.0,
            eps,
            0.0,
            1.0,
            h,
            vec![1.0],
        ));
    }
    v.into_iter()
        .map(|s| s.with_outputs_dir("absorbing"))
        .collect()
}

/// Ornstein-Uhlenbeck drift: drift on/off, added Gaussian noise, domain
/// size, natural-condition domain convergence, and the two conditions side
/// by side without drift.
pub fn ou_suite(h: f64) -> Vec<Scenario> {
    let ou = DriftKind::OrnsteinUhlenbeck;
    let mut v = Vec::new();
    for a in [0.5, 1.5] {
        for (tag, drift) in [("zero", DriftKind::Zero), ("ou", ou)] {
            v.push(
                gaussian_absorbing(format!("drift_a{a}_{tag}"), a, 1.0, 0.0, 1.0, h, vec![1.0])
                    .with_drift(drift),
            );
        }
        for d in [0.0, 0.1, 0.5, 1.0] {
            v.push(
                gaussian_absorbing(format!("diffusion_a{a}_d{d}"), a, 1.0, d, 1.0, h, vec![1.0])
                    .with_drift(ou),
            );
        }
    }
    for a in [0.5, 1.0, 1.5] {
        for b in [1.0, 2.0, 4.0] {
            v.push(
                gaussian_absorbing(format!("domain_a{a}_b{b}"), a, 1.0, 0.0, b, h, vec![1.0])
                    .with_drift(ou),
            );
        }
    }
    for a in [0.5, 1.5] {
        for l in NATURAL_WIDTHS {
            let mut sc =
                gaussian_absorbing(format!("natural_a{a}_l{l}"), a, 1.0, 0.0, 1.0, h, vec![1.0])
                    .with_drift(ou);
            sc.condition = AuxCondition::Natural { half_width: l };
            v.push(sc);
        }
        v.push(gaussian_absorbing(
            format!("conditions_a{a}_absorbing"),
            a,
            1.0,
            0.0,
            1.0,
            h,
            vec![1.0],
        ));
        let mut sc = gaussian_absorbing(
            format!("conditions_a{a}_natural"),
            a,
            1.0,
            0.0,
            1.0,
            h,
            vec![1.0],
        );
        sc.condition = AuxCondition::Natural { half_width: 20.0 };
        v.push(sc);
    }
    v.into_iter().map(|s| s.with_outputs_dir("ou")).collect()
}

const NATURAL_WIDTHS: [f64; 4] = [10.0, 20.0, 30.0, 40.0];
const POINT_X: f64 = 9.0;

/// Value at `x = 9` of the natural OU runs against the domain half-width.
fn ou_point_values(
    list: &[Scenario],
    results: &[RunResult],
    out: &Path,
    art: &mut Artifacts,
) -> CliResult<()> {
    let mut rows = Vec::new();
    for (sc, r) in list.iter().zip(results) {
        if !sc.name.starts_with("natural_") {
            continue;
        }
        if let Some(p) = r.snapshots.last() {
            let g = p.grid();
            if let Some(i) = g
                .nearest_index(POINT_X)
                .filter(|&i| (g.x(i) - POINT_X).abs() < 1e-9)
            {
                rows.push(vec![
                    fmt_f64(sc.params.alpha),
                    fmt_f64(g.half_width()),
                    fmt_f64(p.values()[i]),
                ]);
            }
        }
    }
    write_table(
        &out.join("ou/natural_point_x9.csv"),
        &["alpha", "L", "p"],
        &rows,
    )?;
    art.files.push("ou/natural_point_x9.csv".into());
    Ok(())
}

/// Double-well drift under the natural condition, started from a narrow
/// Gaussian at `x = -1`.
pub fn doublewell_suite(h: f64, half_width: f64, t_outputs: &[f64]) -> Vec<Scenario> {
    [0.5, 1.5]
        .into_iter()
        .map(|a| {
            Scenario::new(
                format!("doublewell_a{a}"),
                ParamsSection {
                    alpha: a,
                    eps: 1.0,
                    d: 0.1,
                },
                AuxCondition::Natural { half_width },
                InitialProfile::GaussianNormalized {
                    variance: 1.0 / 80.0,
                    center: -1.0,
                },
                h,
                t_outputs.to_vec(),
            )
            .with_drift(DriftKind::DoubleWell)
            .with_outputs_dir("doublewell")
        })
        .collect()
}

fn doublewell_peaks(
    list: &[Scenario],
    results: &[RunResult],
    out: &Path,
    art: &mut Artifacts,
) -> CliResult<()> {
    let mut rows = Vec::new();
    for (sc, r) in list.iter().zip(results) {
        for p in &r.snapshots {
            for (x, v) in local_maxima(p) {
                rows.push(vec![
                    fmt_f64(sc.params.alpha),
                    fmt_f64(p.time()),
                    fmt_f64(x),
                    fmt_f64(v),
                ]);
            }
        }
    }
    write_table(
        &out.join("doublewell/peaks.csv"),
        &["alpha", "t", "x", "p"],
        &rows,
    )?;
    art.files.push("doublewell/peaks.csv".into());
    Ok(())
}

/// Cauchy case with a path ensemble compared on `(-10, 10)`.
pub fn mc_compare_scenario(h: f64, n_paths: usize, dt: f64, seed: u64) -> Scenario {
    let mut sc = Scenario::new(
        "mc_cauchy",
        ParamsSection {
            alpha: 1.0,
            eps: 1.0,
            d: 0.0,
        },
        AuxCondition::Natural { half_width: 110.0 },
        InitialProfile::CauchySeed { t0: 0.01 },
        h,
        vec![1.0],
    )
    .with_dt_factor(0.5);
    sc.mc = Some(McSection {
        n_paths,
        dt,
        seed,
        x0: 0.0,
        guard_radius: 1e12,
        bin_width: 0.5,
        range: Some(10.0),
    });
    sc
}
