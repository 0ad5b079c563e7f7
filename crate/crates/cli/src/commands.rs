use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use ecbalance::balancing::{
    balance_table, pi_histogram, weighted_density_export, weights_for, write_density_csv, DensityMethod,
    EstimandKind, WeightSet,
};
use ecbalance::dataset::{fmt_f64, ingest_csv, read_numeric_column, ColumnMap, CombinedDataset};
use ecbalance::estimators::{estimate_with_weights, EstimateResult};
use ecbalance::harness::{run_replications, write_figure_data, write_metrics_csv, OracleTable, ReplicationOptions};
use ecbalance::oracle::true_estimand_custom_lambda;
use ecbalance::psmodel::{fit_propensity_with, FitOptions, ModelTerms, PropensityFit};
use ecbalance::report::{write_with_preamble, RunMetadata};
use ecbalance::rng::derive_seed;
use ecbalance::simgen::{enumerate_scenarios, parse_id_list};
use ecbalance::{Error, Result};
use serde::Serialize;

use crate::{DensityKind, DiagnoseArgs, EstimateArgs, InputArgs, OracleArgs, SimulateArgs};

const HISTOGRAM_BINS: usize = 20;

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn parse_estimands(text: &str, all: &[EstimandKind]) -> Result<Vec<EstimandKind>> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    let mut kinds = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let kind: EstimandKind = part.parse()?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    if kinds.is_empty() {
        return Err(Error::InvalidArgument("no estimand selected".into()));
    }
    Ok(kinds)
}

fn fit_options(args: &InputArgs) -> Result<FitOptions> {
    if !(args.ridge >= 0.0 && args.ridge.is_finite()) {
        return Err(Error::InvalidArgument(format!("ridge must be a nonnegative number, got {}", args.ridge)));
    }
    Ok(FitOptions {
        ridge: args.ridge,
        terms: ModelTerms {
            interactions: args.ps_interactions,
            squares: args.ps_squares,
        },
        ..FitOptions::default()
    })
}

/// Loaded data with per-subject propensities, fitted unless supplied.
struct Prepared {
    data: CombinedDataset,
    pi: Vec<f64>,
    fit: Option<PropensityFit>,
}

fn prepare(args: &InputArgs) -> Result<Prepared> {
    let columns = ColumnMap {
        y: args.y_col.clone(),
        a: args.a_col.clone(),
        z: args.z_col.clone(),
        covariates: args.covariates.clone(),
        exclude: args.pi_column.iter().cloned().collect(),
    };
    let data = ingest_csv(&args.input, &columns)?;
    match &args.pi_column {
        Some(col) => {
            let pi = read_numeric_column(&args.input, col)?;
            Ok(Prepared { data, pi, fit: None })
        }
        None => {
            let fit = fit_propensity_with(&data, &fit_options(args)?)?;
            Ok(Prepared {
                data,
                pi: fit.pi_hat.clone(),
                fit: Some(fit),
            })
        }
    }
}

#[derive(Serialize)]
struct EstimateReport<'a> {
    metadata: &'a RunMetadata,
    n11: usize,
    n10: usize,
    n2: usize,
    lambda: f64,
    propensity: Option<&'a PropensityFit>,
    estimates: &'a [EstimateResult],
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn write_estimates_csv<W: Write>(w: W, meta: &RunMetadata, rows: &[EstimateResult]) -> Result<()> {
    write_with_preamble(w, Some(meta), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record([
            "estimand",
            "tau_hat",
            "term_treated",
            "term_cc",
            "term_ec",
            "blend_cc",
            "blend_ec",
            "ess_rct_treated",
            "ess_rct_control",
            "ess_ec",
            "n_extreme",
        ])?;
        for r in rows {
            csv.write_record([
                r.kind.to_string(),
                fmt_f64(r.tau_hat),
                fmt_f64(r.term_treated),
                opt(r.term_cc),
                opt(r.term_ec),
                fmt_f64(r.blend.0),
                fmt_f64(r.blend.1),
                opt(r.ess.rct_treated),
                opt(r.ess.rct_control),
                opt(r.ess.ec),
                r.n_extreme.to_string(),
            ])?;
        }
        csv.flush()?;
        Ok(())
    })
}

pub fn estimate(args: &EstimateArgs) -> Result<()> {
    let kinds = parse_estimands(&args.input.estimand, &EstimandKind::ESTIMABLE)?;
    let meta = RunMetadata::new(None, args)?;
    let prepared = prepare(&args.input)?;
    let results = kinds
        .iter()
        .map(|&k| {
            if k == EstimandKind::Atec {
                return Err(Error::UnsupportedEstimand(k.to_string()));
            }
            estimate_with_weights(&prepared.data, &weights_for(k, &prepared.data, &prepared.pi)?)
        })
        .collect::<Result<Vec<_>>>()?;

    let report = EstimateReport {
        metadata: &meta,
        n11: prepared.data.n11(),
        n10: prepared.data.n10(),
        n2: prepared.data.n2(),
        lambda: prepared.data.lambda(),
        propensity: prepared.fit.as_ref(),
        estimates: &results,
    };
    let json = serde_json::to_string_pretty(&report)?;
    match &args.json {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{json}")?;
            w.flush()?;
        }
        None if args.csv.is_none() && args.histogram.is_none() => println!("{json}"),
        None => {}
    }
    if let Some(path) = &args.csv {
        write_estimates_csv(create(path)?, &meta, &results)?;
    }
    if let Some(path) = &args.histogram {
        let bins = pi_histogram(&prepared.data, &prepared.pi, HISTOGRAM_BINS)?;
        write_with_preamble(create(path)?, Some(&meta), |w| {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(["lower", "upper", "rct", "ec"])?;
            for b in &bins {
                csv.write_record([fmt_f64(b.lower), fmt_f64(b.upper), b.rct.to_string(), b.ec.to_string()])?;
            }
            csv.flush()?;
            Ok(())
        })?;
    }
    Ok(())
}

fn write_balance<W: Write>(w: W, meta: &RunMetadata, data: &CombinedDataset, sets: &[WeightSet]) -> Result<()> {
    let mut rows = Vec::new();
    for ws in sets {
        rows.extend(balance_table(data, ws)?);
    }
    write_with_preamble(w, Some(meta), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record([
            "covariate",
            "estimand",
            "rct_mean_raw",
            "rct_sd_raw",
            "ec_mean_raw",
            "ec_sd_raw",
            "smd_raw",
            "rct_mean_weighted",
            "rct_sd_weighted",
            "ec_mean_weighted",
            "ec_sd_weighted",
            "smd_weighted",
        ])?;
        for r in &rows {
            let mut record = vec![r.covariate.clone(), r.estimand.to_string()];
            record.extend(
                [
                    r.rct_mean_raw,
                    r.rct_sd_raw,
                    r.ec_mean_raw,
                    r.ec_sd_raw,
                    r.smd_raw,
                    r.rct_mean_weighted,
                    r.rct_sd_weighted,
                    r.ec_mean_weighted,
                    r.ec_sd_weighted,
                    r.smd_weighted,
                ]
                .map(fmt_f64),
            );
            csv.write_record(&record)?;
        }
        csv.flush()?;
        Ok(())
    })
}

pub fn diagnose(args: &DiagnoseArgs) -> Result<()> {
    let kinds = parse_estimands(&args.input.estimand, &EstimandKind::ALL)?;
    let meta = RunMetadata::new(None, args)?;
    let prepared = prepare(&args.input)?;
    let data = &prepared.data;
    if data.n2() == 0 {
        return Err(Error::EmptyGroup("ec"));
    }
    let sets = kinds
        .iter()
        .map(|&k| weights_for(k, data, &prepared.pi))
        .collect::<Result<Vec<_>>>()?;

    match &args.balance {
        Some(path) => write_balance(create(path)?, &meta, data, &sets)?,
        None => write_balance(io::stdout().lock(), &meta, data, &sets)?,
    }
    if let Some(path) = &args.density {
        let method = match args.density_method {
            DensityKind::Kde => DensityMethod::Kde {
                grid_points: args.grid_points,
            },
            DensityKind::Hist => DensityMethod::Histogram { bins: args.bins },
        };
        let mut rows = Vec::new();
        for ws in &sets {
            for j in 0..data.dim() {
                rows.extend(weighted_density_export(data, ws, j, method)?);
            }
        }
        write_with_preamble(create(path)?, Some(&meta), |w| write_density_csv(&rows, w))?;
    }
    Ok(())
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    if args.b == 0 {
        return Err(Error::InvalidArgument("--b must be at least 1".into()));
    }
    let settings = parse_id_list(&args.settings)?;
    let ecs = parse_id_list(&args.ecs)?;
    let specs = enumerate_scenarios(Some(&settings), Some(&ecs))?;
    let meta = RunMetadata::new(Some(args.seed), args)?;

    let oracle = match &args.oracle {
        Some(path) => {
            if !path.exists() {
                return Err(Error::FileNotFound(path.clone()));
            }
            OracleTable::read_csv(File::open(path)?)?
        }
        None => OracleTable::compute(&specs, args.n_mc, args.seed)?,
    };
    let opts = ReplicationOptions {
        replicates: args.b,
        master_seed: args.seed,
        fit: FitOptions::default(),
    };
    let metrics = run_replications(&specs, &opts, &oracle)?;
    write_metrics_csv(&metrics, create(&args.out)?, Some(&meta))?;
    if let Some(path) = &args.figure_data {
        write_figure_data(&metrics, create(path)?, Some(&meta))?;
    }
    Ok(())
}

pub fn oracle(args: &OracleArgs) -> Result<()> {
    let settings = parse_id_list(&args.settings)?;
    let ecs = parse_id_list(&args.ecs)?;
    let specs = enumerate_scenarios(Some(&settings), Some(&ecs))?;
    let meta = RunMetadata::new(Some(args.seed), args)?;
    let table = match args.lambda {
        None => OracleTable::compute(&specs, args.n_mc, args.seed)?,
        Some(lambda) => {
            let mut table = OracleTable::default();
            for s in &specs {
                let seed = derive_seed(args.seed, &[u64::from(s.setting_id), u64::from(s.ec_id)]);
                table.insert((&true_estimand_custom_lambda(s, lambda, args.n_mc, seed)?).into());
            }
            table
        }
    };
    match &args.out {
        Some(path) => table.write_csv(create(path)?, Some(&meta)),
        None => table.write_csv(io::stdout().lock(), Some(&meta)),
    }
}
