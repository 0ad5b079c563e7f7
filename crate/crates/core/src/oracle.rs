//! True propensity scores and true estimand values for simulation scenarios.
//!
//! The oracle never touches the estimation pipeline. Given a scenario it
//! draws a large covariate population from the RCT law (`n_mc` units) and
//! the external-control law (`round((1 - lambda) / lambda * n_mc)` units),
//! evaluates the true propensity and the linear CATE at every unit, and
//! forms the tilted average `sum h(x) tau(x) / sum h(x)`.
//!
//! ATI and ATO use the pooled population with `h = 1` and `h = pi(1 - pi)`.
//! ATT and ATEC are the CATE averaged over the RCT and external-control
//! draws respectively, which equals the pooled tilted average with
//! `h = pi` and `h = 1 - pi` in expectation and makes ATT exactly
//! independent of the external-control law and of lambda.
//!
//! Draws are generated in fixed blocks, each from its own stream keyed by
//! `(seed, source, block)`, and block sums are reduced in block order, so
//! results do not depend on the number of worker threads.

use rand::RngExt;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::balancing::EstimandKind;
use crate::error::{Error, Result};
use crate::psmodel::logistic;
use crate::rng::stream;
use crate::simgen::ScenarioSpec;

const BLOCK: usize = 1 << 16;

/// True source propensity `Pr(Z = 1 | X = x)` at `x = (x1, x2)`.
///
/// Both sources share the law of `X1`, so only the `X2` densities enter:
/// `pi = lambda f1 / (lambda f1 + (1 - lambda) f2)`.
pub fn true_pi(spec: &ScenarioSpec, x: &[f64]) -> f64 {
    true_pi_with_lambda(spec, spec.lambda(), x)
}

pub fn true_pi_with_lambda(spec: &ScenarioSpec, lambda: f64, x: &[f64]) -> f64 {
    let x2 = x[1];
    let z_ec = (x2 - spec.ec_x2_mean) / spec.ec_x2_sd;
    // log f1(x2) - log f2(x2)
    let log_ratio = -0.5 * x2 * x2 + 0.5 * z_ec * z_ec + spec.ec_x2_sd.ln();
    logistic(log_ratio + (lambda / (1.0 - lambda)).ln())
}

/// True estimands of one scenario with Monte Carlo standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrueEstimands {
    pub spec: ScenarioSpec,
    pub lambda: f64,
    /// RCT draws.
    pub n_mc: usize,
    /// External-control draws.
    pub n_mc_ec: usize,
    pub tau_ati: f64,
    pub tau_att: f64,
    pub tau_ato: f64,
    pub tau_atec: f64,
    pub se_ati: f64,
    pub se_att: f64,
    pub se_ato: f64,
    pub se_atec: f64,
}

impl TrueEstimands {
    pub fn value(&self, kind: EstimandKind) -> f64 {
        match kind {
            EstimandKind::Ati => self.tau_ati,
            EstimandKind::Att => self.tau_att,
            EstimandKind::Ato => self.tau_ato,
            EstimandKind::Atec => self.tau_atec,
        }
    }

    pub fn std_error(&self, kind: EstimandKind) -> f64 {
        match kind {
            EstimandKind::Ati => self.se_ati,
            EstimandKind::Att => self.se_att,
            EstimandKind::Ato => self.se_ato,
            EstimandKind::Atec => self.se_atec,
        }
    }
}

/// Weighted sums for a ratio estimator `sum h tau / sum h`.
#[derive(Debug, Clone, Copy, Default)]
struct RatioSums {
    h: f64,
    h_tau: f64,
    h2: f64,
    h2_tau: f64,
    h2_tau2: f64,
}

impl RatioSums {
    fn push(&mut self, h: f64, tau: f64) {
        self.h += h;
        self.h_tau += h * tau;
        let h2 = h * h;
        self.h2 += h2;
        self.h2_tau += h2 * tau;
        self.h2_tau2 += h2 * tau * tau;
    }

    fn merge(mut self, o: &RatioSums) -> Self {
        self.h += o.h;
        self.h_tau += o.h_tau;
        self.h2 += o.h2;
        self.h2_tau += o.h2_tau;
        self.h2_tau2 += o.h2_tau2;
        self
    }

    /// Ratio and its delta-method standard error.
    fn finish(&self) -> (f64, f64) {
        let r = self.h_tau / self.h;
        let ss = (self.h2_tau2 - 2.0 * r * self.h2_tau + r * r * self.h2).max(0.0);
        (r, ss.sqrt() / self.h)
    }
}

/// Per-block accumulators: pooled ATI, pooled ATO, RCT-only ATT, EC-only ATEC.
#[derive(Debug, Clone, Copy, Default)]
struct BlockSums {
    ati: RatioSums,
    ato: RatioSums,
    att: RatioSums,
    atec: RatioSums,
}

fn simulate_block(spec: &ScenarioSpec, lambda: f64, seed: u64, rct: bool, block: usize, len: usize) -> BlockSums {
    let mut rng = stream(seed, &[u64::from(!rct), block as u64]);
    let mut sums = BlockSums::default();
    for _ in 0..len {
        let x1 = if rng.random_bool(0.5) { 1.0 } else { 0.0 };
        let std: f64 = rng.sample(StandardNormal);
        let x2 = if rct {
            std
        } else {
            spec.ec_x2_mean + spec.ec_x2_sd * std
        };
        let pi = true_pi_with_lambda(spec, lambda, &[x1, x2]);
        let tau = spec.cate(x1, x2);
        sums.ati.push(1.0, tau);
        sums.ato.push(pi * (1.0 - pi), tau);
        if rct {
            sums.att.push(1.0, tau);
        } else {
            sums.atec.push(1.0, tau);
        }
    }
    sums
}

fn compute(spec: &ScenarioSpec, lambda: f64, n_mc: usize, seed: u64) -> TrueEstimands {
    let n_ec = ((1.0 - lambda) / lambda * n_mc as f64).round() as usize;
    let mut out = TrueEstimands {
        spec: spec.clone(),
        lambda,
        n_mc,
        n_mc_ec: n_ec,
        tau_ati: spec.beta_trt,
        tau_att: spec.beta_trt,
        tau_ato: spec.beta_trt,
        tau_atec: spec.beta_trt,
        se_ati: 0.0,
        se_att: 0.0,
        se_ato: 0.0,
        se_atec: 0.0,
    };
    // A constant CATE makes every tilted average equal to that constant.
    if spec.is_homogeneous() {
        return out;
    }
    let jobs: Vec<(bool, usize, usize)> = [(true, n_mc), (false, n_ec)]
        .iter()
        .flat_map(|&(rct, n)| {
            (0..n.div_ceil(BLOCK)).map(move |b| (rct, b, BLOCK.min(n - b * BLOCK)))
        })
        .collect();
    let blocks: Vec<BlockSums> = jobs
        .par_iter()
        .map(|&(rct, b, len)| simulate_block(spec, lambda, seed, rct, b, len))
        .collect();
    let total = blocks.iter().fold(BlockSums::default(), |acc, b| BlockSums {
        ati: acc.ati.merge(&b.ati),
        ato: acc.ato.merge(&b.ato),
        att: acc.att.merge(&b.att),
        atec: acc.atec.merge(&b.atec),
    });
    (out.tau_ati, out.se_ati) = total.ati.finish();
    (out.tau_ato, out.se_ato) = total.ato.finish();
    (out.tau_att, out.se_att) = total.att.finish();
    if n_ec > 0 {
        (out.tau_atec, out.se_atec) = total.atec.finish();
    } else {
        out.tau_atec = f64::NAN;
        out.se_atec = f64::NAN;
    }
    out
}

/// True ATI, ATT, ATO and ATEC of `spec` by Monte Carlo with `n_mc` RCT draws.
pub fn true_estimands(spec: &ScenarioSpec, n_mc: usize, seed: u64) -> Result<TrueEstimands> {
    true_estimand_custom_lambda(spec, spec.lambda(), n_mc, seed)
}

/// As [`true_estimands`] but for the mixture with RCT share `lambda`.
pub fn true_estimand_custom_lambda(
    spec: &ScenarioSpec,
    lambda: f64,
    n_mc: usize,
    seed: u64,
) -> Result<TrueEstimands> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidLambda(lambda));
    }
    spec.validate()?;
    if n_mc == 0 {
        return Err(Error::InvalidArgument("n_mc must be positive".into()));
    }
    Ok(compute(spec, lambda, n_mc, seed))
}

/// Closed-form ATT: the CATE at the RCT covariate means `(0.5, 0)`.
pub fn closed_form_att(spec: &ScenarioSpec) -> f64 {
    spec.cate(0.5, 0.0)
}

/// Closed-form ATI: the CATE at the mixture covariate means.
pub fn closed_form_ati(spec: &ScenarioSpec, lambda: f64) -> f64 {
    spec.cate(0.5, (1.0 - lambda) * spec.ec_x2_mean)
}
