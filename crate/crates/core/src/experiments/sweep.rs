//! Parallel sweeps, per-point summaries and CSV output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::spec::{Algorithm, ExperimentSpec, SweepAxis};
use super::trial::{generate_instance, instance_seed, score, Point, TrialRecord};

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 13] = [
    "algorithm",
    "sweep_axis",
    "sweep_value",
    "trial",
    "seed",
    "mse_full",
    "mse_on_support",
    "support_correct",
    "success",
    "iterations",
    "residue",
    "post_cancel_interference_db",
    "wall_time_s",
];

/// All records of a sweep, ordered by sweep value, then algorithm (in the
/// order of `algorithms`), then trial.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub sweep_axis: SweepAxis,
    pub records: Vec<TrialRecord>,
}

/// Aggregates for one `(algorithm, sweep value)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub algorithm: Algorithm,
    pub sweep_value: f64,
    pub trials: usize,
    pub failures: usize,
    pub mean_mse: f64,
    /// Sample standard deviation of `mse_full`.
    pub std_mse: f64,
    pub mean_mse_on_support: f64,
    pub support_rate: f64,
    pub success_rate: f64,
    pub mean_iterations: f64,
    /// Mean iterations over successful trials only; NaN when none succeeded.
    pub mean_iterations_success: f64,
    pub successes: usize,
    pub mean_post_cancel_db: f64,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

impl Summary {
    fn of(algorithm: Algorithm, sweep_value: f64, recs: &[&TrialRecord]) -> Self {
        let ok: Vec<&&TrialRecord> = recs.iter().filter(|r| r.error.is_none()).collect();
        let n = ok.len().max(1) as f64;
        let mse: Vec<f64> = ok.iter().map(|r| r.mse_full).collect();
        let succ: Vec<f64> = ok.iter().filter(|r| r.success).map(|r| r.iterations as f64).collect();
        let pc: Vec<f64> = ok.iter().map(|r| r.post_cancel_interference_db).filter(|x| x.is_finite()).collect();
        Summary {
            algorithm,
            sweep_value,
            trials: recs.len(),
            failures: recs.len() - ok.len(),
            mean_mse: mean(&mse),
            std_mse: sample_std(&mse),
            mean_mse_on_support: mean(&ok.iter().map(|r| r.mse_on_support).collect::<Vec<_>>()),
            support_rate: ok.iter().filter(|r| r.support_correct).count() as f64 / n,
            success_rate: succ.len() as f64 / n,
            mean_iterations: mean(&ok.iter().map(|r| r.iterations as f64).collect::<Vec<_>>()),
            mean_iterations_success: mean(&succ),
            successes: succ.len(),
            mean_post_cancel_db: mean(&pc),
        }
    }
}

impl SweepTable {
    /// Records of one algorithm at one sweep value.
    pub fn cell(&self, algorithm: Algorithm, sweep_value: f64) -> Vec<&TrialRecord> {
        self.records
            .iter()
            .filter(|r| r.algorithm == algorithm && r.sweep_value == sweep_value)
            .collect()
    }

    /// One summary per `(algorithm, sweep value)` in record order.
    pub fn summaries(&self) -> Vec<Summary> {
        let mut keys: Vec<(Algorithm, f64)> = Vec::new();
        for r in &self.records {
            if !keys.iter().any(|&(a, v)| a == r.algorithm && v == r.sweep_value) {
                keys.push((r.algorithm, r.sweep_value));
            }
        }
        keys.into_iter().map(|(a, v)| Summary::of(a, v, &self.cell(a, v))).collect()
    }

    pub fn summary(&self, algorithm: Algorithm, sweep_value: f64) -> Option<Summary> {
        let cell = self.cell(algorithm, sweep_value);
        (!cell.is_empty()).then(|| Summary::of(algorithm, sweep_value, &cell))
    }

    /// Writes the header and one row per record. Floats use Rust's shortest
    /// round-trip scientific form.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_COLUMNS).map_err(csv_err)?;
        for r in &self.records {
            out.write_record([
                r.algorithm.name().to_string(),
                r.sweep_axis.name().to_string(),
                format!("{:e}", r.sweep_value),
                r.trial.to_string(),
                r.seed.to_string(),
                format!("{:e}", r.mse_full),
                format!("{:e}", r.mse_on_support),
                r.support_correct.to_string(),
                r.success.to_string(),
                r.iterations.to_string(),
                format!("{:e}", r.residue),
                format!("{:e}", r.post_cancel_interference_db),
                format!("{:e}", r.wall_time_s),
            ])
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        self.write_csv(BufWriter::new(File::create(path)?))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Runs every algorithm on every trial of every sweep point.
///
/// Trials run in parallel; each trial's instance is generated once and
/// shared by all algorithms. The output order does not depend on
/// scheduling.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepTable> {
    spec.validate()?;
    let points = (0..spec.sweep_values.len())
        .map(|i| Point::new(spec, i))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..spec.n_trials).map(move |t| (p, t)))
        .collect();
    let per_job: Vec<Vec<TrialRecord>> = jobs
        .par_iter()
        .map(|&(p, t)| -> Result<Vec<TrialRecord>> {
            let point = &points[p];
            let seed = instance_seed(spec.base_seed, p, t);
            let instance = generate_instance(&point.config, spec.n_rx, &point.constellation, seed)?;
            Ok(spec.algorithms.iter().map(|&a| score(spec, point, a, &instance, t)).collect())
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::with_capacity(jobs.len() * spec.algorithms.len());
    for (p, _) in points.iter().enumerate() {
        for (ai, _) in spec.algorithms.iter().enumerate() {
            for t in 0..spec.n_trials {
                records.push(per_job[p * spec.n_trials + t][ai].clone());
            }
        }
    }
    Ok(SweepTable { sweep_axis: spec.sweep_axis, records })
}
