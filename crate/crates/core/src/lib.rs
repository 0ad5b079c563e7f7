//! Treatment effect estimation for randomized trials augmented with
//! external control data.
//!
//! The pipeline is: assemble a [`CombinedDataset`], fit the source
//! propensity `Pr(Z = 1 | X)` with [`fit_propensity`], turn it into balancing
//! weights for a target population ([`EstimandKind`]) and compute the
//! normalized weighted estimator with [`estimate`]. The [`simgen`],
//! [`oracle`] and [`harness`] modules reproduce a full simulation study:
//! synthetic data, Monte Carlo true estimands, and bias / MSE tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balancing;
pub mod dataset;
pub mod error;
pub mod estimators;
pub mod harness;
mod linalg;
pub mod oracle;
pub mod psmodel;
pub mod report;
pub mod rng;
pub mod simgen;

pub use balancing::{effective_sample_size, weights_for, EstimandKind, WeightSet};
pub use dataset::{ingest_csv, ColumnMap, CombinedDataset, SubjectRecord};
pub use error::{Error, Result};
pub use estimators::{check_identification, estimate, EstimateResult};
pub use harness::{run_replications, MetricsTable, OracleTable};
pub use oracle::{true_estimand_custom_lambda, true_estimands, true_pi, TrueEstimands};
pub use psmodel::{fit_logistic, fit_propensity, fit_propensity_with, predict_pi, FitOptions, PropensityFit};
pub use simgen::{enumerate_scenarios, generate, ScenarioSpec};
