//! Benchmark harness: run records, suites, summaries, and reports.
//!
//! A [`RunRecord`] captures one (task, optimizer, seed) trajectory. Suites
//! fan a task list out over optimizers and replicate seeds, persist one JSON
//! file per cell (so interrupted sweeps resume), and reduce to deterministic
//! CSV/SVG reports. Wall-clock timing is recorded but deliberately kept out
//! of every determinism-sensitive artifact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{
    brute_force_maxcut, exact_ground_energy, random_theta, CostModel, LabeledDataset,
    ReuploadModel, Task, TaskInfo, TaskSpec,
};
use crate::error::{Error, Result};
use crate::l2o::{self, L2OWeights, PrecondMode};
use crate::opt::{run_baseline, BaselineConfig, BaselineKind};
use crate::seeds;

/// One optimization trajectory on one task.
///
/// `losses[0]` is the cost at θ₀ and each later entry follows one update, so
/// a completed run holds `steps + 1` values. A diverged run keeps its finite
/// prefix and sets the flag instead of storing non-finite numbers.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub task_id: String,
    pub optimizer_id: String,
    pub seed: u64,
    pub losses: Vec<f64>,
    /// Wall time of each update step in milliseconds. Informational only:
    /// never part of CSV outputs or determinism checks.
    pub wall_ms: Vec<f64>,
    pub final_metrics: BTreeMap<String, f64>,
    pub diverged: bool,
}

impl RunRecord {
    /// Last recorded loss of a run that finished, `None` if it diverged.
    pub fn final_loss(&self) -> Option<f64> {
        if self.diverged {
            None
        } else {
            self.losses.last().copied()
        }
    }
}

/// Per-step approximation ratios −loss/c_max of a MaxCut trajectory.
///
/// The expected cut value never exceeds the maximum cut, so ratios live in
/// [0, 1]; values straying past the ends by more than 1e-9 indicate a
/// mismatched `c_max` and are rejected.
pub fn approximation_ratio(record: &RunRecord, c_max: f64) -> Result<Vec<f64>> {
    if !(c_max > 0.0) {
        return Err(Error::InvalidTask(format!(
            "approximation ratio needs a positive max cut, got {c_max}"
        )));
    }
    record
        .losses
        .iter()
        .map(|&loss| {
            let ratio = -loss / c_max;
            if !(-1e-9..=1.0 + 1e-9).contains(&ratio) {
                return Err(Error::InvalidTask(format!(
                    "approximation ratio {ratio} outside [0, 1]"
                )));
            }
            Ok(ratio.clamp(0.0, 1.0))
        })
        .collect()
}

/// Task-specific summary numbers for a finished trajectory.
///
/// Best effort: oracle-backed entries (exact ground energies, brute-force
/// cuts) are included only where the oracle applies, never as a failure.
pub fn final_metrics(task: &Task, theta: &[f64]) -> BTreeMap<String, f64> {
    let mut metrics = BTreeMap::new();
    match (&task.info, &task.cost) {
        (TaskInfo::VqeHea { .. }, CostModel::Expectation { observable, .. }) => {
            if let (Ok(loss), Ok(ground)) = (task.loss(theta), exact_ground_energy(observable)) {
                metrics.insert("energy".into(), loss);
                metrics.insert("energy_error".into(), loss - ground);
            }
        }
        (TaskInfo::QaoaMaxCut { graph, .. }, _) => {
            if let (Ok(loss), Ok((c_max, _))) = (task.loss(theta), brute_force_maxcut(graph)) {
                if c_max > 0.0 {
                    metrics.insert("cut_value".into(), -loss);
                    metrics.insert("approx_ratio".into(), (-loss / c_max).clamp(0.0, 1.0));
                    // Lets reports rebuild per-step ratios without the graph.
                    metrics.insert("c_max".into(), c_max);
                }
            }
        }
        (TaskInfo::QaoaSk { .. }, CostModel::Expectation { observable, .. }) => {
            if let Ok(loss) = task.loss(theta) {
                metrics.insert("energy".into(), loss);
                if let Ok(ground) = exact_ground_energy(observable) {
                    metrics.insert("energy_error".into(), loss - ground);
                }
            }
        }
        (TaskInfo::Reupload { .. }, CostModel::Reupload(model)) => {
            if let Ok(acc) = model.accuracy(&model.train, theta) {
                metrics.insert("train_accuracy".into(), acc);
            }
            if let Ok(acc) = model.accuracy(&model.test, theta) {
                metrics.insert("test_accuracy".into(), acc);
            }
        }
        _ => {}
    }
    metrics
}

/// Accuracy of the two-feature re-upload classifier on an arbitrary labeled
/// set, without needing the original training task around.
pub fn classifier_accuracy(theta: &[f64], dataset: &LabeledDataset, layers: usize) -> Result<f64> {
    let model = ReuploadModel {
        layers,
        train: LabeledDataset { points: Vec::new(), labels: Vec::new() },
        test: LabeledDataset { points: Vec::new(), labels: Vec::new() },
    };
    model.accuracy(dataset, theta)
}

/// Run a trained update rule on a task under the same record contract as
/// [`run_baseline`]: initial loss first, one entry per update after that,
/// finite prefix plus flag on divergence.
pub fn run_l2o(
    task: &Task,
    weights: &L2OWeights,
    mode: PrecondMode,
    theta0: &[f64],
    steps: usize,
) -> Result<RunRecord> {
    let traj = l2o::unroll(task, theta0, steps, weights, mode, None)?;
    let metrics = match (traj.diverged, traj.thetas.last()) {
        (false, Some(theta)) => final_metrics(task, theta),
        _ => BTreeMap::new(),
    };
    Ok(RunRecord {
        task_id: task.id.clone(),
        optimizer_id: "l2o".into(),
        seed: 0,
        losses: traj.losses,
        wall_ms: traj.wall_ms,
        final_metrics: metrics,
        diverged: traj.diverged,
    })
}

fn default_full_mode() -> PrecondMode {
    PrecondMode::Full
}

/// One optimizer column of a suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OptimizerSpec {
    /// A classic baseline by name (`gd`, `momentum`, `adam`, `adagrad`,
    /// `rmsprop`, `qngd`), optionally overriding its learning rate.
    Baseline {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lr: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    /// A learned optimizer loaded from a checkpoint file (path resolved
    /// against the suite's base directory).
    L2o {
        checkpoint: PathBuf,
        #[serde(default = "default_full_mode")]
        mode: PrecondMode,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
}

impl OptimizerSpec {
    /// Column label used in record files, CSVs, and plots. Defaults to the
    /// baseline name (suffixed with `_lr{lr}` when the rate is overridden)
    /// or `l2o`; an explicit `id` wins.
    pub fn optimizer_id(&self) -> String {
        match self {
            OptimizerSpec::Baseline { name, lr, id } => match (id, lr) {
                (Some(id), _) => id.clone(),
                (None, Some(lr)) => format!("{name}_lr{lr}"),
                (None, None) => name.clone(),
            },
            OptimizerSpec::L2o { id, .. } => id.clone().unwrap_or_else(|| "l2o".into()),
        }
    }
}

fn default_steps() -> usize {
    200
}

/// A benchmark suite: every task crossed with every optimizer, repeated
/// `replicates` times with per-cell derived seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub seed: u64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    pub replicates: usize,
    pub tasks: Vec<TaskSpec>,
    pub optimizers: Vec<OptimizerSpec>,
}

impl SuiteSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Suite("step budget must be at least 1".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Suite("replicates must be at least 1".into()));
        }
        if self.tasks.is_empty() {
            return Err(Error::Suite("suite lists no tasks".into()));
        }
        if self.optimizers.is_empty() {
            return Err(Error::Suite("suite lists no optimizers".into()));
        }
        let mut seen = BTreeSet::new();
        for optimizer in &self.optimizers {
            let id = optimizer.optimizer_id();
            if !seen.insert(id.clone()) {
                return Err(Error::Suite(format!(
                    "duplicate optimizer id `{id}`; set an explicit `id` to disambiguate"
                )));
            }
        }
        Ok(())
    }
}

/// Load and validate a suite file.
pub fn load_suite(path: &Path) -> Result<SuiteSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let spec: SuiteSpec = serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
    spec.validate()?;
    Ok(spec)
}

enum ResolvedOptimizer {
    Baseline(BaselineConfig),
    Learned { weights: L2OWeights, mode: PrecondMode },
}

fn resolve_optimizer(spec: &OptimizerSpec, base_dir: &Path) -> Result<ResolvedOptimizer> {
    match spec {
        OptimizerSpec::Baseline { name, lr, .. } => {
            let kind = BaselineKind::from_id(name)?;
            let mut config = BaselineConfig::new(kind);
            if let Some(lr) = lr {
                config.lr = *lr;
            }
            config.validate()?;
            Ok(ResolvedOptimizer::Baseline(config))
        }
        OptimizerSpec::L2o { checkpoint, mode, .. } => {
            let path = if checkpoint.is_absolute() {
                checkpoint.clone()
            } else {
                base_dir.join(checkpoint)
            };
            let weights = l2o::load_checkpoint(&path)?;
            Ok(ResolvedOptimizer::Learned { weights, mode: *mode })
        }
    }
}

fn read_record(path: &Path) -> Option<RunRecord> {
    let text = fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

fn write_record(record: &RunRecord, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(record).map_err(|e| Error::json(path.display().to_string(), e))?;
    fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

fn run_cell(
    spec: &SuiteSpec,
    task: &Task,
    optimizer_id: &str,
    optimizer: &ResolvedOptimizer,
    rep: usize,
    records_dir: &Path,
) -> Result<RunRecord> {
    let tags = ["suite", task.id.as_str(), optimizer_id];
    let cell_seed = seeds::derive(spec.seed, &tags, &[rep as u64]);
    let path = records_dir.join(format!("{}__{}__{}.json", task.id, optimizer_id, rep));
    if let Some(existing) = read_record(&path) {
        // Anything that does not match the cell (torn write, changed suite)
        // is recomputed rather than trusted.
        if existing.task_id == task.id
            && existing.optimizer_id == optimizer_id
            && existing.seed == cell_seed
            && (existing.diverged || existing.losses.len() == spec.steps + 1)
        {
            return Ok(existing);
        }
    }
    let mut rng = seeds::rng(spec.seed, &tags, &[rep as u64]);
    let theta0 = random_theta(task.n_params(), &mut rng);
    let mut record = match optimizer {
        ResolvedOptimizer::Baseline(config) => run_baseline(task, config, &theta0, spec.steps)?,
        ResolvedOptimizer::Learned { weights, mode } => {
            run_l2o(task, weights, *mode, &theta0, spec.steps)?
        }
    };
    record.seed = cell_seed;
    record.optimizer_id = optimizer_id.to_string();
    write_record(&record, &path)?;
    Ok(record)
}

/// Execute every (task × optimizer × replicate) cell of a suite.
///
/// Each cell seeds itself from the suite seed and its string ids, so results
/// do not depend on scheduling. One JSON file per cell lands under
/// `out_dir/records/`; files that already parse and match their cell are
/// reused, which makes interrupted sweeps resumable and torn files
/// self-healing. Cells run in parallel but the returned records are always
/// in (task, optimizer, replicate) declaration order.
pub fn run_suite(spec: &SuiteSpec, base_dir: &Path, out_dir: &Path) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let tasks: Vec<Task> = spec
        .tasks
        .iter()
        .map(|t| t.build(base_dir))
        .collect::<Result<_>>()?;
    let mut seen = BTreeSet::new();
    for task in &tasks {
        if !seen.insert(task.id.clone()) {
            return Err(Error::Suite(format!(
                "duplicate task id `{}`; suites need distinguishable tasks",
                task.id
            )));
        }
    }
    let optimizers: Vec<(String, ResolvedOptimizer)> = spec
        .optimizers
        .iter()
        .map(|o| Ok((o.optimizer_id(), resolve_optimizer(o, base_dir)?)))
        .collect::<Result<_>>()?;
    let records_dir = out_dir.join("records");
    fs::create_dir_all(&records_dir).map_err(|e| Error::io(records_dir.display().to_string(), e))?;

    let mut cells = Vec::new();
    for ti in 0..tasks.len() {
        for oi in 0..optimizers.len() {
            for rep in 0..spec.replicates {
                cells.push((ti, oi, rep));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(ti, oi, rep)| {
            let (id, optimizer) = &optimizers[oi];
            run_cell(spec, &tasks[ti], id, optimizer, rep, &records_dir)
        })
        .collect()
}

/// Sort records by (task, optimizer, seed) — the canonical report order.
pub fn sort_records(records: &mut [RunRecord]) {
    records.sort_by(|a, b| {
        (a.task_id.as_str(), a.optimizer_id.as_str(), a.seed)
            .cmp(&(b.task_id.as_str(), b.optimizer_id.as_str(), b.seed))
    });
}

/// Load every per-cell record under `dir` (the suite output directory or its
/// `records/` subdirectory), in canonical order.
pub fn load_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let nested = dir.join("records");
    let dir = if nested.is_dir() { nested } else { dir.to_path_buf() };
    let mut records = Vec::new();
    for entry in fs::read_dir(&dir).map_err(|e| Error::io(dir.display().to_string(), e))? {
        let path = entry.map_err(|e| Error::io(dir.display().to_string(), e))?.path();
        if path.extension().is_some_and(|ext| ext == "json") {
            let text = fs::read_to_string(&path).map_err(|e| Error::io(path.display().to_string(), e))?;
            let record = serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
            records.push(record);
        }
    }
    if records.is_empty() {
        return Err(Error::Suite(format!(
            "no run records found under {}",
            dir.display()
        )));
    }
    sort_records(&mut records);
    Ok(records)
}

/// Final-loss statistics of one (task, optimizer) group. Moment fields are
/// `None` when every replicate diverged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub task_id: String,
    pub optimizer_id: String,
    /// Replicates that finished without diverging.
    pub n: usize,
    pub mean: Option<f64>,
    /// Sample standard deviation; 0 for a single finished run.
    pub std: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub diverged: usize,
    /// Per-key means of the task-specific final metrics over finished runs.
    pub metric_means: BTreeMap<String, f64>,
}

/// Reduce records to one summary row per (task, optimizer), sorted. The
/// grouping is order-insensitive: permuting the input never changes a row.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(&str, &str), Vec<&RunRecord>> = BTreeMap::new();
    for record in records {
        groups
            .entry((record.task_id.as_str(), record.optimizer_id.as_str()))
            .or_default()
            .push(record);
    }
    groups
        .into_iter()
        .map(|((task_id, optimizer_id), mut group)| {
            // Accumulate in seed order so the floating-point sums (and hence
            // the rows) cannot depend on the input permutation.
            group.sort_by_key(|r| r.seed);
            let finals: Vec<f64> = group.iter().filter_map(|r| r.final_loss()).collect();
            let n = finals.len();
            let (mean, std, min, max) = if n == 0 {
                (None, None, None, None)
            } else {
                let mean = finals.iter().sum::<f64>() / n as f64;
                let std = if n < 2 {
                    0.0
                } else {
                    (finals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64)
                        .sqrt()
                };
                let min = finals.iter().copied().fold(f64::INFINITY, f64::min);
                let max = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (Some(mean), Some(std), Some(min), Some(max))
            };
            let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
            for record in &group {
                if record.diverged {
                    continue;
                }
                for (key, value) in &record.final_metrics {
                    let entry = sums.entry(key.clone()).or_insert((0.0, 0));
                    entry.0 += value;
                    entry.1 += 1;
                }
            }
            let metric_means = sums
                .into_iter()
                .map(|(key, (sum, count))| (key, sum / count as f64))
                .collect();
            SummaryRow {
                task_id: task_id.to_string(),
                optimizer_id: optimizer_id.to_string(),
                n,
                mean,
                std,
                min,
                max,
                diverged: group.len() - n,
                metric_means,
            }
        })
        .collect()
}

/// Output format of [`report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    /// Long-format loss curves plus a `{stem}_summary.csv` sibling.
    Csv,
    /// Records and summary in one JSON document.
    Json,
    /// Per-task loss (or MaxCut approximation-ratio) curves.
    SvgCurves,
    /// Per-task early-vs-final mean loss bars.
    SvgBars,
}

impl FromStr for ReportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg_curves" => Ok(Self::SvgCurves),
            "svg_bars" => Ok(Self::SvgBars),
            other => Err(Error::Suite(format!(
                "unknown report kind `{other}` (expected csv, json, svg_curves, or svg_bars)"
            ))),
        }
    }
}

/// Render records to `path` in the requested format.
///
/// Every format is a pure function of the (canonically re-sorted) record
/// set: floats print with shortest-roundtrip formatting, plot geometry is
/// quantized to hundredths, and wall-clock times appear only in raw JSON.
/// Rerunning a suite therefore reproduces every artifact byte for byte.
pub fn report(records: &[RunRecord], kind: ReportKind, path: &Path) -> Result<()> {
    let mut records: Vec<RunRecord> = records.to_vec();
    sort_records(&mut records);
    let text = match kind {
        ReportKind::Csv => {
            let summary = render_summary_csv(&summarize(&records));
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("results");
            let sibling = path.with_file_name(format!("{stem}_summary.csv"));
            fs::write(&sibling, summary).map_err(|e| Error::io(sibling.display().to_string(), e))?;
            render_csv(&records)
        }
        ReportKind::Json => {
            #[derive(Serialize)]
            struct Document<'a> {
                records: &'a [RunRecord],
                summary: Vec<SummaryRow>,
            }
            let doc = Document { records: &records, summary: summarize(&records) };
            let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::json(path.display().to_string(), e))?;
            text.push('\n');
            text
        }
        ReportKind::SvgCurves => render_svg_curves(&records),
        ReportKind::SvgBars => render_svg_bars(&records),
    };
    fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

fn render_csv(records: &[RunRecord]) -> String {
    let mut out = String::from("task_id,optimizer_id,seed,step,loss\n");
    for record in records {
        for (step, loss) in record.losses.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                record.task_id, record.optimizer_id, record.seed, step, loss
            );
        }
    }
    out
}

fn fmt_stat(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn render_summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("task_id,optimizer_id,n,mean,std,min,max,diverged\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.task_id,
            row.optimizer_id,
            row.n,
            fmt_stat(row.mean),
            fmt_stat(row.std),
            fmt_stat(row.min),
            fmt_stat(row.max),
            row.diverged
        );
    }
    out
}

const SVG_PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Goemans–Williamson guarantee, drawn on MaxCut ratio plots for context.
const GW_RATIO: f64 = 0.878;

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Maps data space to pixel space. Coordinates are emitted via [`fmt2`], so
/// identical inputs render identical bytes on every platform.
struct Scale {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    left: f64,
    right: f64,
    top: f64,
    bottom: f64,
}

impl Scale {
    fn x(&self, v: f64) -> f64 {
        let span = (self.x_max - self.x_min).max(1e-12);
        self.left + (v - self.x_min) / span * (self.right - self.left)
    }

    fn y(&self, v: f64) -> f64 {
        let span = (self.y_max - self.y_min).max(1e-12);
        self.bottom - (v - self.y_min) / span * (self.bottom - self.top)
    }
}

fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

fn group_by_task<'a>(
    records: &'a [RunRecord],
) -> BTreeMap<&'a str, BTreeMap<&'a str, Vec<&'a RunRecord>>> {
    let mut tasks: BTreeMap<&str, BTreeMap<&str, Vec<&RunRecord>>> = BTreeMap::new();
    for record in records {
        tasks
            .entry(record.task_id.as_str())
            .or_default()
            .entry(record.optimizer_id.as_str())
            .or_default()
            .push(record);
    }
    tasks
}

/// MaxCut groups carry `c_max` in their final metrics; its presence switches
/// the panel from raw losses to approximation ratios.
fn group_c_max(optimizers: &BTreeMap<&str, Vec<&RunRecord>>) -> Option<f64> {
    optimizers
        .values()
        .flatten()
        .find_map(|r| r.final_metrics.get("c_max").copied())
        .filter(|&c| c > 0.0)
}

fn curve_values(record: &RunRecord, c_max: Option<f64>) -> Vec<f64> {
    match c_max {
        Some(c) => record.losses.iter().map(|&l| (-l / c).clamp(0.0, 1.0)).collect(),
        None => record.losses.clone(),
    }
}

/// Pointwise mean and sample std over curves of possibly unequal length
/// (diverged runs keep only their finite prefix).
fn mean_std_curves(curves: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let len = curves.iter().map(Vec::len).max().unwrap_or(0);
    let mut means = Vec::with_capacity(len);
    let mut stds = Vec::with_capacity(len);
    for step in 0..len {
        let vals: Vec<f64> = curves.iter().filter_map(|c| c.get(step)).copied().collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let std = if vals.len() < 2 {
            0.0
        } else {
            (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        means.push(mean);
        stds.push(std);
    }
    (means, stds)
}

fn polyline_points(values: &[f64], scale: &Scale) -> String {
    let mut out = String::new();
    for (step, value) in values.iter().enumerate() {
        if step > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{},{}", fmt2(scale.x(step as f64)), fmt2(scale.y(*value)));
    }
    out
}

fn panel_frame(out: &mut String, scale: &Scale, title: &str, y_label: &str) {
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\"/>",
        fmt2(scale.left),
        fmt2(scale.top),
        fmt2(scale.right - scale.left),
        fmt2(scale.bottom - scale.top)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" fill=\"#111111\">{}</text>",
        fmt2(scale.left),
        fmt2(scale.top - 8.0),
        xml_escape(title)
    );
    // Min/max tick labels on both axes.
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#333333\" text-anchor=\"end\">{}</text>",
        fmt2(scale.left - 4.0),
        fmt2(scale.bottom),
        fmt2(scale.y_min)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#333333\" text-anchor=\"end\">{}</text>",
        fmt2(scale.left - 4.0),
        fmt2(scale.top + 8.0),
        fmt2(scale.y_max)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#333333\">{}</text>",
        fmt2(scale.left),
        fmt2(scale.bottom + 14.0),
        fmt2(scale.x_min)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#333333\" text-anchor=\"end\">{}</text>",
        fmt2(scale.right),
        fmt2(scale.bottom + 14.0),
        fmt2(scale.x_max)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#333333\" transform=\"rotate(-90 {} {})\">{}</text>",
        fmt2(scale.left - 40.0),
        fmt2((scale.top + scale.bottom) / 2.0),
        fmt2(scale.left - 40.0),
        fmt2((scale.top + scale.bottom) / 2.0),
        xml_escape(y_label)
    );
}

fn svg_open(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"Helvetica,Arial,sans-serif\">",
        w = fmt2(width),
        h = fmt2(height)
    );
    let _ = writeln!(
        out,
        "<rect width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        fmt2(width),
        fmt2(height)
    );
}

fn render_svg_curves(records: &[RunRecord]) -> String {
    let tasks = group_by_task(records);
    let width = 760.0;
    let panel_h = 270.0;
    let height = panel_h * tasks.len().max(1) as f64 + 16.0;
    let mut out = String::new();
    svg_open(&mut out, width, height);
    for (panel, (task_id, optimizers)) in tasks.iter().enumerate() {
        let top = 34.0 + panel as f64 * panel_h;
        let c_max = group_c_max(optimizers);
        let y_label = if c_max.is_some() { "approx ratio" } else { "loss" };

        let mut per_opt: Vec<(&str, Vec<Vec<f64>>, Vec<f64>, Vec<f64>, usize)> = Vec::new();
        let mut x_max: f64 = 1.0;
        for (opt_id, runs) in optimizers {
            let curves: Vec<Vec<f64>> =
                runs.iter().map(|r| curve_values(r, c_max)).collect();
            let (mean, std) = mean_std_curves(&curves);
            for curve in &curves {
                x_max = x_max.max(curve.len().saturating_sub(1) as f64);
            }
            let diverged = runs.iter().filter(|r| r.diverged).count();
            per_opt.push((opt_id, curves, mean, std, diverged));
        }

        let (y_min, y_max) = if c_max.is_some() {
            (0.0, 1.0)
        } else {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for (_, curves, mean, std, _) in &per_opt {
                for curve in curves {
                    for &v in curve {
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
                for (m, s) in mean.iter().zip(std) {
                    lo = lo.min(m - s);
                    hi = hi.max(m + s);
                }
            }
            if !lo.is_finite() || !hi.is_finite() {
                (0.0, 1.0)
            } else if (hi - lo).abs() < 1e-12 {
                (lo - 0.5, hi + 0.5)
            } else {
                let pad = (hi - lo) * 0.05;
                (lo - pad, hi + pad)
            }
        };

        let scale = Scale {
            x_min: 0.0,
            x_max,
            y_min,
            y_max,
            left: 70.0,
            right: width - 180.0,
            top,
            bottom: top + panel_h - 70.0,
        };
        panel_frame(&mut out, &scale, task_id, y_label);

        if c_max.is_some() {
            let y = fmt2(scale.y(GW_RATIO));
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#555555\" stroke-dasharray=\"5,4\"/>",
                fmt2(scale.left),
                fmt2(scale.right)
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#555555\">GW {GW_RATIO}</text>",
                fmt2(scale.right + 4.0),
                y
            );
        }

        for (idx, (opt_id, curves, mean, std, diverged)) in per_opt.iter().enumerate() {
            let color = SVG_PALETTE[idx % SVG_PALETTE.len()];
            // Std ribbon around the mean.
            if mean.len() > 1 {
                let mut points = String::new();
                for (step, (m, s)) in mean.iter().zip(std).enumerate() {
                    if step > 0 {
                        points.push(' ');
                    }
                    let _ = write!(
                        points,
                        "{},{}",
                        fmt2(scale.x(step as f64)),
                        fmt2(scale.y(m + s))
                    );
                }
                for (step, (m, s)) in mean.iter().zip(std).enumerate().rev() {
                    let _ = write!(
                        points,
                        " {},{}",
                        fmt2(scale.x(step as f64)),
                        fmt2(scale.y(m - s))
                    );
                }
                let _ = writeln!(
                    out,
                    "<polygon points=\"{points}\" fill=\"{color}\" fill-opacity=\"0.12\" stroke=\"none\"/>"
                );
            }
            // Individual replicate traces, faint.
            for curve in curves {
                if curve.len() < 2 {
                    continue;
                }
                let _ = writeln!(
                    out,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" stroke-opacity=\"0.25\"/>",
                    polyline_points(curve, &scale)
                );
            }
            if mean.len() > 1 {
                let _ = writeln!(
                    out,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
                    polyline_points(mean, &scale)
                );
            }
            // Legend entry.
            let ly = scale.top + 14.0 * idx as f64 + 6.0;
            let suffix = if *diverged > 0 {
                format!(" ({diverged} div)")
            } else {
                String::new()
            };
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{color}\"/>",
                fmt2(width - 172.0),
                fmt2(ly - 9.0)
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#111111\">{}{}</text>",
                fmt2(width - 158.0),
                fmt2(ly),
                xml_escape(opt_id),
                xml_escape(&suffix)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Mean loss after an early slice of the budget next to the final mean, one
/// bar pair per optimizer: shows how much of the progress lands in the first
/// few steps.
fn render_svg_bars(records: &[RunRecord]) -> String {
    const EARLY_STEP: usize = 10;
    let tasks = group_by_task(records);
    let width = 760.0;
    let panel_h = 260.0;
    let height = panel_h * tasks.len().max(1) as f64 + 16.0;
    let mut out = String::new();
    svg_open(&mut out, width, height);
    for (panel, (task_id, optimizers)) in tasks.iter().enumerate() {
        let top = 34.0 + panel as f64 * panel_h;
        // (optimizer, early mean, final mean, finished count)
        let mut bars: Vec<(&str, Option<f64>, Option<f64>, usize)> = Vec::new();
        for (opt_id, runs) in optimizers {
            let finished: Vec<&&RunRecord> = runs.iter().filter(|r| !r.diverged).collect();
            let early = mean_of(
                finished
                    .iter()
                    .filter_map(|r| r.losses.get(EARLY_STEP.min(r.losses.len().saturating_sub(1))))
                    .copied(),
            );
            let fin = mean_of(finished.iter().filter_map(|r| r.final_loss()));
            bars.push((opt_id, early, fin, finished.len()));
        }
        let mut lo: f64 = 0.0;
        let mut hi: f64 = 0.0;
        for (_, early, fin, _) in &bars {
            for v in early.iter().chain(fin.iter()) {
                lo = lo.min(*v);
                hi = hi.max(*v);
            }
        }
        if (hi - lo).abs() < 1e-12 {
            hi = lo + 1.0;
        }
        let pad = (hi - lo) * 0.1;
        let scale = Scale {
            x_min: 0.0,
            x_max: 1.0,
            y_min: lo - pad,
            y_max: hi + pad,
            left: 70.0,
            right: width - 40.0,
            top,
            bottom: top + panel_h - 70.0,
        };
        panel_frame(&mut out, &scale, task_id, "mean loss");
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#555555\">faint: after step {EARLY_STEP}, solid: final</text>",
            fmt2(scale.right - 200.0),
            fmt2(scale.top - 8.0)
        );
        let y_zero = scale.y(0.0);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999999\" stroke-width=\"1\"/>",
            fmt2(scale.left),
            fmt2(y_zero),
            fmt2(scale.right),
            fmt2(y_zero)
        );
        let slot_w = (scale.right - scale.left) / bars.len().max(1) as f64;
        for (idx, (opt_id, early, fin, finished)) in bars.iter().enumerate() {
            let color = SVG_PALETTE[idx % SVG_PALETTE.len()];
            let x0 = scale.left + idx as f64 * slot_w;
            let bar_w = (slot_w * 0.28).min(42.0);
            let gap = slot_w * 0.06;
            let center = x0 + slot_w / 2.0;
            for (which, value) in [(0usize, early), (1, fin)] {
                let Some(v) = value else { continue };
                let x = if which == 0 {
                    center - gap / 2.0 - bar_w
                } else {
                    center + gap / 2.0
                };
                let py = scale.y(*v);
                let (rect_y, rect_h) = if py < y_zero {
                    (py, y_zero - py)
                } else {
                    (y_zero, py - y_zero)
                };
                let opacity = if which == 0 { "0.45" } else { "1" };
                let _ = writeln!(
                    out,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{color}\" fill-opacity=\"{opacity}\"/>",
                    fmt2(x),
                    fmt2(rect_y),
                    fmt2(bar_w),
                    fmt2(rect_h)
                );
                let _ = writeln!(
                    out,
                    "<text x=\"{}\" y=\"{}\" font-size=\"9\" fill=\"#111111\" text-anchor=\"middle\">{}</text>",
                    fmt2(x + bar_w / 2.0),
                    fmt2(rect_y - 3.0),
                    format!("{v:.3}")
                );
            }
            let label = if *finished == 0 {
                format!("{opt_id} (all diverged)")
            } else {
                (*opt_id).to_string()
            };
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#111111\" text-anchor=\"middle\">{}</text>",
                fmt2(center),
                fmt2(scale.bottom + 26.0),
                xml_escape(&label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let vals: Vec<f64> = values.collect();
    if vals.is_empty() {
        None
    } else {
        Some(vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{balanced_radius, build_qaoa_maxcut, gen_circle_dataset, Graph};

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap()
    }

    fn record(task: &str, opt: &str, seed: u64, losses: Vec<f64>, diverged: bool) -> RunRecord {
        RunRecord {
            task_id: task.into(),
            optimizer_id: opt.into(),
            seed,
            losses,
            wall_ms: Vec::new(),
            final_metrics: BTreeMap::new(),
            diverged,
        }
    }

    #[test]
    fn uniform_superposition_on_a_triangle_cuts_three_quarters() {
        let task = build_qaoa_maxcut(&triangle(), 1, "k3").unwrap();
        // All-zero angles leave the plus state untouched; each edge is then
        // cut with probability 1/2, so ⟨cut⟩ = 1.5 against a max cut of 2.
        let loss = task.loss(&[0.0, 0.0]).unwrap();
        assert!((loss + 1.5).abs() < 1e-12);
        let rec = record(&task.id, "gd", 0, vec![loss], false);
        let ratios = approximation_ratio(&rec, 2.0).unwrap();
        assert!((ratios[0] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn approximation_ratio_rejects_inconsistent_cuts() {
        let rec = record("t", "gd", 0, vec![-1.0], false);
        assert!(approximation_ratio(&rec, 0.0).is_err());
        assert!(approximation_ratio(&rec, -2.0).is_err());
        // Loss of the wrong sign (expected cut would be negative).
        let bad = record("t", "gd", 0, vec![0.5], false);
        assert!(approximation_ratio(&bad, 2.0).is_err());
        // Ratio past 1 by more than the tolerance.
        let overshoot = record("t", "gd", 0, vec![-2.2], false);
        assert!(approximation_ratio(&overshoot, 2.0).is_err());
    }

    #[test]
    fn maxcut_final_metrics_expose_ratio_and_max_cut() {
        let task = build_qaoa_maxcut(&triangle(), 1, "k3").unwrap();
        let metrics = final_metrics(&task, &[0.0, 0.0]);
        assert!((metrics["cut_value"] - 1.5).abs() < 1e-12);
        assert!((metrics["approx_ratio"] - 0.75).abs() < 1e-12);
        assert!((metrics["c_max"] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_trainables_classify_everything_as_the_tie_class() {
        let mut rng = seeds::rng(9, &["data"], &[]);
        let data = gen_circle_dataset(64, balanced_radius(), &mut rng);
        let layers = 3;
        let theta = vec![0.0; 6 * layers + 2];
        let acc = classifier_accuracy(&theta, &data, layers).unwrap();
        let frac0 =
            data.labels.iter().filter(|&&l| l == 0).count() as f64 / data.labels.len() as f64;
        assert!((acc - frac0).abs() < 1e-12);
    }

    #[test]
    fn learned_runs_follow_the_record_contract() {
        let task = crate::circuits::build_random_pqc(2, 1, 3).unwrap();
        let weights = L2OWeights::init(4, 0);
        let theta0 = vec![0.3; task.n_params()];
        let rec = run_l2o(&task, &weights, PrecondMode::Full, &theta0, 4).unwrap();
        assert_eq!(rec.optimizer_id, "l2o");
        assert_eq!(rec.losses.len(), 5);
        assert_eq!(rec.wall_ms.len(), 4);
        assert!(!rec.diverged);
        assert!(rec.losses.iter().all(|l| l.is_finite()));
    }

    #[test]
    fn optimizer_ids_default_and_override() {
        let plain = OptimizerSpec::Baseline { name: "adam".into(), lr: None, id: None };
        assert_eq!(plain.optimizer_id(), "adam");
        let tuned = OptimizerSpec::Baseline { name: "qngd".into(), lr: Some(0.05), id: None };
        assert_eq!(tuned.optimizer_id(), "qngd_lr0.05");
        let named = OptimizerSpec::Baseline {
            name: "gd".into(),
            lr: Some(0.2),
            id: Some("gd_hot".into()),
        };
        assert_eq!(named.optimizer_id(), "gd_hot");
        let learned = OptimizerSpec::L2o {
            checkpoint: PathBuf::from("model.json"),
            mode: PrecondMode::Full,
            id: None,
        };
        assert_eq!(learned.optimizer_id(), "l2o");
    }

    #[test]
    fn suite_validation_rejects_degenerate_specs() {
        let base = SuiteSpec {
            seed: 1,
            steps: 5,
            replicates: 2,
            tasks: vec![TaskSpec::RandomPqc { n_qubits: 2, layers: 1, seed: 0 }],
            optimizers: vec![OptimizerSpec::Baseline { name: "gd".into(), lr: None, id: None }],
        };
        assert!(base.validate().is_ok());
        let mut bad = base.clone();
        bad.steps = 0;
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.replicates = 0;
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.tasks.clear();
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.optimizers.clear();
        assert!(bad.validate().is_err());
        let mut bad = base;
        bad.optimizers =
            vec![
                OptimizerSpec::Baseline { name: "gd".into(), lr: None, id: None },
                OptimizerSpec::Baseline { name: "gd".into(), lr: None, id: None },
            ];
        assert!(matches!(bad.validate(), Err(Error::Suite(_))));
    }

    #[test]
    fn suites_run_resume_and_reproduce_byte_identical_reports() {
        let dir = tempfile::tempdir().unwrap();
        let suite = SuiteSpec {
            seed: 7,
            steps: 3,
            replicates: 5,
            tasks: vec![TaskSpec::RandomPqc { n_qubits: 2, layers: 1, seed: 0 }],
            optimizers: vec![
                OptimizerSpec::Baseline { name: "gd".into(), lr: None, id: None },
                OptimizerSpec::Baseline { name: "adam".into(), lr: Some(0.05), id: None },
            ],
        };
        let out = dir.path().join("out");
        let records = run_suite(&suite, dir.path(), &out).unwrap();
        assert_eq!(records.len(), 10);
        // Declaration order: gd replicate block, then the tuned adam block.
        assert!(records[..5].iter().all(|r| r.optimizer_id == "gd"));
        assert!(records[5..].iter().all(|r| r.optimizer_id == "adam_lr0.05"));
        // Every cell gets its own derived seed.
        let seeds: BTreeSet<u64> = records.iter().map(|r| r.seed).collect();
        assert_eq!(seeds.len(), 10);

        // Break the cache: remove one file, tear another. The rerun heals
        // both and leaves every loss bit-identical.
        let mut files: Vec<PathBuf> = fs::read_dir(out.join("records"))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        assert_eq!(files.len(), 10);
        fs::remove_file(&files[0]).unwrap();
        fs::write(&files[3], "{\"task_id\": tor").unwrap();
        let healed = run_suite(&suite, dir.path(), &out).unwrap();
        for (a, b) in records.iter().zip(&healed) {
            assert_eq!(a.task_id, b.task_id);
            assert_eq!(a.optimizer_id, b.optimizer_id);
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.losses, b.losses);
        }

        // A fresh output directory reproduces the CSV byte for byte.
        let rerun = run_suite(&suite, dir.path(), &dir.path().join("out2")).unwrap();
        let first = dir.path().join("first.csv");
        let second = dir.path().join("second.csv");
        report(&records, ReportKind::Csv, &first).unwrap();
        report(&rerun, ReportKind::Csv, &second).unwrap();
        assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
        let header = fs::read_to_string(&first).unwrap();
        assert!(header.starts_with("task_id,optimizer_id,seed,step,loss\n"));
        // 10 runs × (3 steps + initial) data rows plus the header.
        assert_eq!(header.lines().count(), 1 + 10 * 4);
        assert!(first.with_file_name("first_summary.csv").exists());

        // Loading from disk gives back the same results, canonically sorted.
        // (Healed cells re-ran, so only wall times may differ.)
        let mut sorted = records.clone();
        sort_records(&mut sorted);
        let loaded = load_records(&out).unwrap();
        assert_eq!(loaded.len(), sorted.len());
        for (a, b) in loaded.iter().zip(&sorted) {
            assert_eq!(a.task_id, b.task_id);
            assert_eq!(a.optimizer_id, b.optimizer_id);
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.losses, b.losses);
            assert_eq!(a.final_metrics, b.final_metrics);
            assert_eq!(a.diverged, b.diverged);
        }
    }

    #[test]
    fn summaries_match_hand_computed_statistics() {
        let records = vec![
            record("t", "gd", 1, vec![0.0, -1.0], false),
            record("t", "gd", 2, vec![0.0, -1.0], false),
            record("t", "gd", 3, vec![0.0, -0.94], false),
            record("t", "gd", 4, vec![0.0], true),
            record("t", "adam", 1, vec![0.0, -2.0], false),
        ];
        let rows = summarize(&records);
        assert_eq!(rows.len(), 2);
        // BTreeMap ordering puts adam first.
        assert_eq!(rows[0].optimizer_id, "adam");
        let gd = &rows[1];
        assert_eq!(gd.n, 3);
        assert_eq!(gd.diverged, 1);
        assert!((gd.mean.unwrap() + 0.98).abs() < 1e-12);
        let expected_std = (0.0024f64 / 2.0).sqrt();
        assert!((gd.std.unwrap() - expected_std).abs() < 1e-12);
        assert_eq!(gd.min, Some(-1.0));
        assert_eq!(gd.max, Some(-0.94));

        // Permuting the input changes nothing.
        let mut shuffled = records.clone();
        shuffled.reverse();
        assert_eq!(summarize(&shuffled), rows);

        // A single finished run has zero std; a fully diverged group has no
        // moments at all.
        let lone = summarize(&[record("t", "gd", 1, vec![-0.5], false)]);
        assert_eq!(lone[0].std, Some(0.0));
        let dead = summarize(&[record("t", "gd", 1, vec![0.1], true)]);
        assert_eq!(dead[0].n, 0);
        assert_eq!(dead[0].mean, None);
        assert_eq!(dead[0].diverged, 1);
    }

    #[test]
    fn report_kinds_parse_and_reject() {
        assert_eq!(ReportKind::from_str("csv").unwrap(), ReportKind::Csv);
        assert_eq!(ReportKind::from_str("json").unwrap(), ReportKind::Json);
        assert_eq!(ReportKind::from_str("svg_curves").unwrap(), ReportKind::SvgCurves);
        assert_eq!(ReportKind::from_str("svg_bars").unwrap(), ReportKind::SvgBars);
        assert!(ReportKind::from_str("pdf").is_err());
    }

    #[test]
    fn svg_reports_are_deterministic_and_annotate_the_gw_bound() {
        let task = build_qaoa_maxcut(&triangle(), 1, "k3").unwrap();
        let config = BaselineConfig::new(BaselineKind::Gd);
        let mut records = Vec::new();
        for seed in [1u64, 2] {
            let mut rng = seeds::rng(seed, &["svg"], &[]);
            let theta0 = random_theta(task.n_params(), &mut rng);
            let mut rec = run_baseline(&task, &config, &theta0, 3).unwrap();
            rec.seed = seed;
            records.push(rec);
        }
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.svg");
        let b = dir.path().join("b.svg");
        report(&records, ReportKind::SvgCurves, &a).unwrap();
        report(&records, ReportKind::SvgCurves, &b).unwrap();
        let curves = fs::read_to_string(&a).unwrap();
        assert_eq!(curves, fs::read_to_string(&b).unwrap());
        assert!(curves.starts_with("<svg"));
        assert!(curves.contains("0.878"), "MaxCut ratio plot must show the GW bound");
        assert!(curves.contains(&task.id));
        assert!(curves.contains("approx ratio"));

        let bars_path = dir.path().join("bars.svg");
        report(&records, ReportKind::SvgBars, &bars_path).unwrap();
        let bars = fs::read_to_string(&bars_path).unwrap();
        assert!(bars.starts_with("<svg"));
        assert!(bars.contains(&task.id));

        // JSON report round-trips through serde.
        let json_path = dir.path().join("report.json");
        report(&records, ReportKind::Json, &json_path).unwrap();
        let text = fs::read_to_string(&json_path).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["records"].as_array().unwrap().len(), 2);
        assert_eq!(value["summary"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn suite_files_round_trip_and_reject_unknown_keys() {
        let text = r#"{
            "seed": 11,
            "replicates": 2,
            "tasks": [{"kind": "random_pqc", "n_qubits": 2, "layers": 1}],
            "optimizers": [
                {"kind": "baseline", "name": "gd"},
                {"kind": "l2o", "checkpoint": "model.ckpt.json", "mode": "identity_precond"}
            ]
        }"#;
        let spec: SuiteSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.steps, 200, "step budget defaults to the full budget");
        assert_eq!(spec.optimizers[1].optimizer_id(), "l2o");
        let bad = r#"{"seed": 1, "replicates": 1, "tasks": [], "optimizers": [], "extra": 3}"#;
        assert!(serde_json::from_str::<SuiteSpec>(bad).is_err());
    }

    #[test]
    fn missing_checkpoints_fail_the_suite_up_front() {
        let dir = tempfile::tempdir().unwrap();
        let suite = SuiteSpec {
            seed: 3,
            steps: 2,
            replicates: 1,
            tasks: vec![TaskSpec::RandomPqc { n_qubits: 2, layers: 1, seed: 0 }],
            optimizers: vec![OptimizerSpec::L2o {
                checkpoint: PathBuf::from("nowhere.json"),
                mode: PrecondMode::Full,
                id: None,
            }],
        };
        let err = run_suite(&suite, dir.path(), &dir.path().join("out")).unwrap_err();
        assert!(matches!(err, Error::CheckpointMissing(_)));
    }
}
