//! Replicated simulation experiments and their bias / MSE summaries.
//!
//! Each replicate of scenario `(setting, ec)` draws its data from the seed
//! `derive_seed(master_seed, [setting, ec, replicate])`, fits the propensity
//! model, and estimates ATI, ATT and ATO. Replicate outcomes are collected
//! in replicate order and reduced sequentially, so tables are bit-identical
//! for any worker count.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::balancing::EstimandKind;
use crate::dataset::fmt_f64;
use crate::error::{Error, Result};
use crate::estimators::estimate;
use crate::oracle::{true_estimands, TrueEstimands};
use crate::psmodel::{fit_propensity_with, FitOptions};
use crate::report::{write_with_preamble, RunMetadata};
use crate::rng::derive_seed;
use crate::simgen::{generate, ScenarioSpec};

/// True estimand values of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub setting: u32,
    pub ec: u32,
    pub ati: f64,
    pub att: f64,
    pub ato: f64,
    pub atec: f64,
    pub se_ati: f64,
    pub se_att: f64,
    pub se_ato: f64,
    pub se_atec: f64,
}

impl OracleEntry {
    pub fn value(&self, kind: EstimandKind) -> f64 {
        match kind {
            EstimandKind::Ati => self.ati,
            EstimandKind::Att => self.att,
            EstimandKind::Ato => self.ato,
            EstimandKind::Atec => self.atec,
        }
    }
}

impl From<&TrueEstimands> for OracleEntry {
    fn from(t: &TrueEstimands) -> Self {
        Self {
            setting: t.spec.setting_id,
            ec: t.spec.ec_id,
            ati: t.tau_ati,
            att: t.tau_att,
            ato: t.tau_ato,
            atec: t.tau_atec,
            se_ati: t.se_ati,
            se_att: t.se_att,
            se_ato: t.se_ato,
            se_atec: t.se_atec,
        }
    }
}

/// True estimands keyed by `(setting, ec)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleTable {
    entries: BTreeMap<(u32, u32), OracleEntry>,
}

impl OracleTable {
    pub fn insert(&mut self, entry: OracleEntry) {
        self.entries.insert((entry.setting, entry.ec), entry);
    }

    pub fn get(&self, setting: u32, ec: u32) -> Option<&OracleEntry> {
        self.entries.get(&(setting, ec))
    }

    pub fn entries(&self) -> impl Iterator<Item = &OracleEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Computes the oracle for every spec; scenario seeds are derived from
    /// `seed` and the scenario ids.
    pub fn compute(specs: &[ScenarioSpec], n_mc: usize, seed: u64) -> Result<Self> {
        let results: Vec<TrueEstimands> = specs
            .par_iter()
            .map(|s| {
                true_estimands(
                    s,
                    n_mc,
                    derive_seed(seed, &[u64::from(s.setting_id), u64::from(s.ec_id)]),
                )
            })
            .collect::<Result<_>>()?;
        let mut table = Self::default();
        for t in &results {
            table.insert(t.into());
        }
        Ok(table)
    }

    /// CSV with columns `setting,ec,ati,att,ato,atec,se_ati,se_att,se_ato,se_atec`.
    pub fn write_csv<W: Write>(&self, writer: W, meta: Option<&RunMetadata>) -> Result<()> {
        write_with_preamble(writer, meta, |w| {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record([
                "setting", "ec", "ati", "att", "ato", "atec", "se_ati", "se_att", "se_ato", "se_atec",
            ])?;
            for e in self.entries() {
                let mut row = vec![e.setting.to_string(), e.ec.to_string()];
                row.extend(
                    [e.ati, e.att, e.ato, e.atec, e.se_ati, e.se_att, e.se_ato, e.se_atec]
                        .iter()
                        .map(|v| fmt_f64(*v)),
                );
                csv.write_record(&row)?;
            }
            csv.flush()?;
            Ok(())
        })
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut table = Self::default();
        for row in rdr.deserialize() {
            table.insert(row?);
        }
        Ok(table)
    }
}

/// Bias and MSE of one estimator in one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub setting: u32,
    pub ec: u32,
    pub estimand: EstimandKind,
    pub true_value: f64,
    pub mean_estimate: f64,
    /// `mean_estimate - true_value`.
    pub bias: f64,
    /// Mean squared error over successful replicates.
    pub mse: f64,
    /// Variance of the estimates with divisor equal to the replicate count,
    /// so `mse = variance + bias^2`.
    pub variance: f64,
    /// Monte Carlo standard error of `bias`.
    pub mc_se_bias: f64,
    /// Replicates requested.
    pub b: usize,
    /// Replicates excluded because fitting or estimation failed.
    pub failures: usize,
    pub phi: f64,
    pub n2: usize,
    pub lambda: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MetricsTable {
    pub rows: Vec<MetricsRow>,
}

impl MetricsTable {
    pub fn get(&self, setting: u32, ec: u32, kind: EstimandKind) -> Option<&MetricsRow> {
        self.rows
            .iter()
            .find(|r| r.setting == setting && r.ec == ec && r.estimand == kind)
    }
}

/// Replicate-level configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicationOptions {
    pub replicates: usize,
    pub master_seed: u64,
    pub fit: FitOptions,
}

/// Outcome of one replicate: an estimate per ATI/ATT/ATO, `None` on failure.
pub type ReplicateOutcome = [Option<f64>; 3];

/// Runs replicate `index` of `spec`.
pub fn run_replicate(spec: &ScenarioSpec, index: usize, opts: &ReplicationOptions) -> ReplicateOutcome {
    let seed = derive_seed(
        opts.master_seed,
        &[u64::from(spec.setting_id), u64::from(spec.ec_id), index as u64],
    );
    let Ok(data) = generate(spec, seed) else {
        return [None; 3];
    };
    let Ok(fit) = fit_propensity_with(&data, &opts.fit) else {
        return [None; 3];
    };
    EstimandKind::ESTIMABLE.map(|k| estimate(&data, k, &fit.pi_hat).ok().map(|e| e.tau_hat))
}

fn summarize(spec: &ScenarioSpec, kind: EstimandKind, truth: f64, estimates: &[Option<f64>]) -> MetricsRow {
    let ok: Vec<f64> = estimates.iter().flatten().copied().collect();
    let n = ok.len() as f64;
    let mean = ok.iter().sum::<f64>() / n;
    let mse = ok.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / n;
    let variance = ok.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n;
    let mc_se_bias = if ok.len() > 1 {
        (variance * n / (n - 1.0) / n).sqrt()
    } else {
        f64::NAN
    };
    MetricsRow {
        setting: spec.setting_id,
        ec: spec.ec_id,
        estimand: kind,
        true_value: truth,
        mean_estimate: mean,
        bias: mean - truth,
        mse,
        variance,
        mc_se_bias,
        b: estimates.len(),
        failures: estimates.len() - ok.len(),
        phi: spec.phi1,
        n2: spec.n2,
        lambda: spec.lambda(),
    }
}

/// Runs `opts.replicates` replicates of every spec and summarizes bias and
/// MSE against `oracle`. Rows are ordered by spec, then ATI, ATT, ATO.
pub fn run_replications(
    specs: &[ScenarioSpec],
    opts: &ReplicationOptions,
    oracle: &OracleTable,
) -> Result<MetricsTable> {
    if opts.replicates == 0 {
        return Err(Error::InvalidArgument("replicate count must be at least 1".into()));
    }
    let truths = specs
        .iter()
        .map(|s| {
            oracle
                .get(s.setting_id, s.ec_id)
                .copied()
                .ok_or(Error::MissingOracleEntry {
                    setting: s.setting_id,
                    ec: s.ec_id,
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let b = opts.replicates;
    let outcomes: Vec<ReplicateOutcome> = (0..specs.len() * b)
        .into_par_iter()
        .map(|job| run_replicate(&specs[job / b], job % b, opts))
        .collect();

    let mut rows = Vec::with_capacity(specs.len() * 3);
    for ((spec, truth), reps) in specs.iter().zip(&truths).zip(outcomes.chunks(b)) {
        for (k, kind) in EstimandKind::ESTIMABLE.iter().enumerate() {
            let est: Vec<Option<f64>> = reps.iter().map(|r| r[k]).collect();
            rows.push(summarize(spec, *kind, truth.value(*kind), &est));
        }
    }
    Ok(MetricsTable { rows })
}

const METRIC_COLUMNS: [&str; 15] = [
    "setting",
    "ec",
    "estimand",
    "true_value",
    "mean_estimate",
    "bias",
    "mse",
    "variance",
    "mc_se_bias",
    "b",
    "failures",
    "phi",
    "n2",
    "lambda",
    "allocation",
];

fn allocation(row: &MetricsRow) -> &'static str {
    if row.setting <= 9 {
        "1:1"
    } else {
        "3:1"
    }
}

/// One row per `(setting, ec, estimand)`.
pub fn write_metrics_csv<W: Write>(table: &MetricsTable, writer: W, meta: Option<&RunMetadata>) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::InvalidArgument("metrics table is empty".into()));
    }
    write_with_preamble(writer, meta, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(METRIC_COLUMNS)?;
        for r in &table.rows {
            csv.write_record([
                r.setting.to_string(),
                r.ec.to_string(),
                r.estimand.to_string(),
                fmt_f64(r.true_value),
                fmt_f64(r.mean_estimate),
                fmt_f64(r.bias),
                fmt_f64(r.mse),
                fmt_f64(r.variance),
                fmt_f64(r.mc_se_bias),
                r.b.to_string(),
                r.failures.to_string(),
                fmt_f64(r.phi),
                r.n2.to_string(),
                fmt_f64(r.lambda),
                allocation(r).to_string(),
            ])?;
        }
        csv.flush()?;
        Ok(())
    })
}

/// Long-format panel data: one row per `(setting, ec, estimand, metric)`
/// with the HTE level, allocation and external-control size as panel keys.
pub fn write_figure_data<W: Write>(table: &MetricsTable, writer: W, meta: Option<&RunMetadata>) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::InvalidArgument("metrics table is empty".into()));
    }
    write_with_preamble(writer, meta, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["estimand", "ec", "hte", "allocation", "n2", "setting", "metric", "value"])?;
        for r in &table.rows {
            for (metric, value) in [("bias", r.bias), ("mse", r.mse)] {
                csv.write_record([
                    r.estimand.to_string(),
                    format!("EC{}", r.ec),
                    fmt_f64(r.phi),
                    allocation(r).to_string(),
                    r.n2.to_string(),
                    r.setting.to_string(),
                    metric.to_string(),
                    fmt_f64(value),
                ])?;
            }
        }
        csv.flush()?;
        Ok(())
    })
}
