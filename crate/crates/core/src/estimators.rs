//! Normalized inverse-probability-weighted treatment effect estimators.
//!
//! For a target population with balancing weights `(w1, w0)` the estimate is
//!
//! ```text
//! tau = mean_w1(Y | RCT treated)
//!     - N10 / (N10 + N2) * mean_w1(Y | RCT control)
//!     - N2  / (N10 + N2) * mean_w0(Y | external control)
//! ```
//!
//! where each `mean_w` is a weight-normalized average within its arm. Arms
//! whose blend coefficient is zero are skipped entirely.

use rayon::prelude::*;
use serde::Serialize;

use crate::balancing::{weights_for, EstimandKind, GroupEss, WeightSet};
use crate::dataset::{CombinedDataset, Group};
use crate::error::{Error, Result};
use crate::rng::{stream, SimRng};

/// Point estimate with its three weighted arm means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    pub kind: EstimandKind,
    pub tau_hat: f64,
    /// Weighted mean outcome of RCT-treated subjects.
    pub term_treated: f64,
    /// Weighted mean outcome of RCT controls; `None` when there are none.
    pub term_cc: Option<f64>,
    /// Weighted mean outcome of external controls; `None` when there are none.
    pub term_ec: Option<f64>,
    /// `(N10 / (N10 + N2), N2 / (N10 + N2))`.
    pub blend: (f64, f64),
    pub ess: GroupEss,
    pub n_extreme: usize,
}

impl EstimateResult {
    /// Recomputes `tau_hat` from the arm means and blend.
    pub fn reconstruct(&self) -> f64 {
        self.term_treated
            - self.term_cc.map_or(0.0, |m| self.blend.0 * m)
            - self.term_ec.map_or(0.0, |m| self.blend.1 * m)
    }
}

fn weighted_group_mean(
    dataset: &CombinedDataset,
    group: Group,
    weights: &[f64],
    label: &'static str,
) -> Result<f64> {
    let (num, den) = dataset
        .records()
        .iter()
        .zip(weights)
        .filter(|(r, _)| r.group() == group)
        .fold((0.0, 0.0), |(num, den), (r, &w)| (num + w * r.y, den + w));
    if den > 0.0 {
        Ok(num / den)
    } else {
        Err(Error::EmptyWeightedGroup(label))
    }
}

/// Estimates `kind` (ATI, ATT or ATO) with per-subject propensities `pi`.
pub fn estimate(dataset: &CombinedDataset, kind: EstimandKind, pi: &[f64]) -> Result<EstimateResult> {
    if kind == EstimandKind::Atec {
        return Err(Error::UnsupportedEstimand(kind.to_string()));
    }
    let ws = weights_for(kind, dataset, pi)?;
    estimate_with_weights(dataset, &ws)
}

/// The estimator for precomputed weights. Only the arm-wise normalized
/// means enter, so rescaling `w1` or `w0` leaves the result unchanged.
pub fn estimate_with_weights(dataset: &CombinedDataset, ws: &WeightSet) -> Result<EstimateResult> {
    let kind = ws.kind;
    if ws.w1.len() != dataset.len() || ws.w0.len() != dataset.len() {
        return Err(Error::DimensionMismatch {
            expected: dataset.len(),
            found: ws.w1.len().min(ws.w0.len()),
        });
    }
    let (n10, n2) = (dataset.n10() as f64, dataset.n2() as f64);
    let blend = (n10 / (n10 + n2), n2 / (n10 + n2));

    let term_treated = weighted_group_mean(dataset, Group::RctTreated, &ws.w1, "rct_treated")?;
    let term_cc = if dataset.n10() > 0 {
        Some(weighted_group_mean(dataset, Group::RctControl, &ws.w1, "rct_control")?)
    } else {
        None
    };
    let term_ec = if dataset.n2() > 0 {
        Some(weighted_group_mean(dataset, Group::ExternalControl, &ws.w0, "ec")?)
    } else {
        None
    };
    let mut result = EstimateResult {
        kind,
        tau_hat: 0.0,
        term_treated,
        term_cc,
        term_ec,
        blend,
        ess: ws.ess_by_group,
        n_extreme: ws.n_extreme,
    };
    result.tau_hat = result.reconstruct();
    Ok(result)
}

/// One draw from a super-population with known source propensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationDraw {
    pub a: bool,
    pub z: bool,
    /// True `Pr(Z = 1 | X = x)` at the drawn covariates.
    pub pi: f64,
}

/// A population from which `(A, Z, X)` can be sampled with the true
/// propensity of each draw available.
pub trait PopulationSampler: Sync {
    fn draw(&self, rng: &mut SimRng) -> PopulationDraw;
    /// `Pr(Z = 1)`.
    fn p_rct(&self) -> f64;
    /// `Pr(A = 1 | Z = 1)`.
    fn p_treated_in_rct(&self) -> f64;
}

/// Population where the propensity is the same constant for every subject.
#[derive(Debug, Clone, Copy)]
pub struct ConstantPiPopulation {
    pub lambda: f64,
    pub p_treated: f64,
}

impl PopulationSampler for ConstantPiPopulation {
    fn draw(&self, rng: &mut SimRng) -> PopulationDraw {
        use rand::RngExt;
        let z = rng.random_bool(self.lambda);
        let a = z && rng.random_bool(self.p_treated);
        PopulationDraw { a, z, pi: self.lambda }
    }

    fn p_rct(&self) -> f64 {
        self.lambda
    }

    fn p_treated_in_rct(&self) -> f64 {
        self.p_treated
    }
}

/// Monte Carlo estimate of `E[lhs] - E[rhs]` with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub identity: &'static str,
    pub residual: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentificationReport {
    pub kind: EstimandKind,
    pub n_mc: usize,
    pub residuals: Vec<IdentityResidual>,
}

impl IdentificationReport {
    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.residual.abs()))
    }
}

type IdentityFn = fn(&PopulationDraw, f64, f64) -> f64;

/// Per-draw residual contributions; each has population mean zero.
/// Arguments: draw, `Pr(A=1|Z=1)`, `Pr(Z=1)`.
fn identities(kind: EstimandKind) -> Vec<(&'static str, IdentityFn)> {
    fn ind(b: bool) -> f64 {
        if b {
            1.0
        } else {
            0.0
        }
    }
    match kind {
        EstimandKind::Ati => vec![
            ("E[AZ/pi] - P(A=1|Z=1)", |d, pt, _| ind(d.a && d.z) / d.pi - pt),
            ("E[(1-A)Z/pi] - P(A=0|Z=1)", |d, pt, _| ind(!d.a && d.z) / d.pi - (1.0 - pt)),
            ("E[(1-A)(1-Z)/(1-pi)] - 1", |d, _, _| ind(!d.a && !d.z) / (1.0 - d.pi) - 1.0),
        ],
        EstimandKind::Att => vec![
            ("E[pi(1-Z)/(1-pi)] - P(Z=1)", |d, _, pz| d.pi * ind(!d.z) / (1.0 - d.pi) - pz),
            ("E[pi(1-A)(1-Z)/(1-pi)] - P(Z=1)", |d, _, pz| {
                d.pi * ind(!d.a && !d.z) / (1.0 - d.pi) - pz
            }),
            ("E[AZ] - P(A=1|Z=1)P(Z=1)", |d, pt, pz| ind(d.a && d.z) - pt * pz),
            ("E[(1-A)Z] - P(A=0|Z=1)P(Z=1)", |d, pt, pz| ind(!d.a && d.z) - (1.0 - pt) * pz),
        ],
        EstimandKind::Ato => vec![
            ("E[(1-pi)AZ] - P(A=1|Z=1)E[pi(1-pi)]", |d, pt, _| {
                (1.0 - d.pi) * ind(d.a && d.z) - pt * d.pi * (1.0 - d.pi)
            }),
            ("E[(1-pi)(1-A)Z] - P(A=0|Z=1)E[pi(1-pi)]", |d, pt, _| {
                (1.0 - d.pi) * ind(!d.a && d.z) - (1.0 - pt) * d.pi * (1.0 - d.pi)
            }),
            ("E[pi(1-A)(1-Z)] - E[pi(1-pi)]", |d, _, _| {
                d.pi * ind(!d.a && !d.z) - d.pi * (1.0 - d.pi)
            }),
        ],
        EstimandKind::Atec => vec![
            ("E[(1-pi)Z/pi] - P(Z=0)", |d, _, pz| (1.0 - d.pi) * ind(d.z) / d.pi - (1.0 - pz)),
            ("E[(1-A)(1-Z)] - P(Z=0)", |d, _, pz| ind(!d.a && !d.z) - (1.0 - pz)),
        ],
    }
}

const IDENTITY_BLOCK: usize = 1 << 15;

/// Checks the weighting identities behind `kind` by Monte Carlo with the
/// population's true propensity. Each residual is zero in the population.
pub fn check_identification<S: PopulationSampler>(
    sampler: &S,
    kind: EstimandKind,
    n_mc: usize,
    seed: u64,
) -> IdentificationReport {
    let ids = identities(kind);
    let (pt, pz) = (sampler.p_treated_in_rct(), sampler.p_rct());
    let n_blocks = n_mc.div_ceil(IDENTITY_BLOCK);
    let partial: Vec<Vec<(f64, f64)>> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, &[b as u64]);
            let len = IDENTITY_BLOCK.min(n_mc - b * IDENTITY_BLOCK);
            let mut acc = vec![(0.0, 0.0); ids.len()];
            for _ in 0..len {
                let d = sampler.draw(&mut rng);
                for ((_, f), (s, s2)) in ids.iter().zip(acc.iter_mut()) {
                    let v = f(&d, pt, pz);
                    *s += v;
                    *s2 += v * v;
                }
            }
            acc
        })
        .collect();
    let n = n_mc as f64;
    let residuals = ids
        .iter()
        .enumerate()
        .map(|(j, (name, _))| {
            let (s, s2) = partial
                .iter()
                .fold((0.0, 0.0), |(s, s2), blk| (s + blk[j].0, s2 + blk[j].1));
            let mean = s / n;
            let var = (s2 / n - mean * mean).max(0.0);
            IdentityResidual {
                identity: name,
                residual: mean,
                std_error: (var / n).sqrt(),
            }
        })
        .collect();
    IdentificationReport {
        kind,
        n_mc,
        residuals,
    }
}
