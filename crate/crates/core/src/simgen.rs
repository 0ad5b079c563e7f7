//! Synthetic RCT + external-control samples for the simulation study.
//!
//! Covariates: `X1 ~ Bernoulli(0.5)` in both sources, `X2 ~ N(0, 1)` in the
//! RCT and `X2 ~ N(mean, sd)` in the external control. Potential outcomes
//! follow the linear model
//!
//! ```text
//! Y(0) = b0 + b1 X1 + b2 X2 + e,      e ~ N(0, 1)
//! Y(1) = Y(0) + b_trt + phi1 X1 + phi2 X2
//! ```
//!
//! and the observed outcome is `Y = A Y(1) + (1 - A) Y(0)`.

use rand::RngExt;
use rand::SeedableRng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::{CombinedDataset, SubjectRecord};
use crate::error::{Error, Result};
use crate::estimators::{PopulationDraw, PopulationSampler};
use crate::rng::SimRng;

pub const N_SETTINGS: u32 = 18;
pub const N_ECS: u32 = 8;

/// How the second parameter of the external-control `N(mean, 1.5)` laws
/// (EC5 to EC8) is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleReading {
    /// 1.5 is the variance, so the standard deviation is `sqrt(1.5)`.
    /// This reading reproduces the published true-estimand table.
    #[default]
    Variance,
    /// 1.5 is the standard deviation.
    StdDev,
}

/// One simulation configuration: an outcome/sample-size setting crossed
/// with an external-control covariate law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub setting_id: u32,
    pub ec_id: u32,
    pub n11: usize,
    pub n10: usize,
    pub n2: usize,
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta_trt: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub ec_x2_mean: f64,
    pub ec_x2_sd: f64,
}

impl ScenarioSpec {
    /// Tabulated scenario `setting` (1..=18) crossed with `ec` (1..=8).
    pub fn from_table(setting: u32, ec: u32) -> Result<Self> {
        Self::from_table_with(setting, ec, ScaleReading::default())
    }

    pub fn from_table_with(setting: u32, ec: u32, reading: ScaleReading) -> Result<Self> {
        if !(1..=N_SETTINGS).contains(&setting) {
            return Err(Error::InvalidFilterId {
                kind: "setting",
                id: setting,
            });
        }
        if !(1..=N_ECS).contains(&ec) {
            return Err(Error::InvalidFilterId { kind: "ec", id: ec });
        }
        let s = (setting - 1) as usize;
        let (n11, n10, ec_sizes) = if s < 9 {
            (100, 100, [100, 300, 1000])
        } else {
            (150, 50, [50, 150, 500])
        };
        let phi = [0.0, 0.25, 0.5][s % 3];
        let e = (ec - 1) as usize;
        let ec_x2_mean = [0.0, 0.5, 1.0, 2.0][e % 4];
        let ec_x2_sd = match (e < 4, reading) {
            (true, _) => 1.0,
            (false, ScaleReading::Variance) => 1.5_f64.sqrt(),
            (false, ScaleReading::StdDev) => 1.5,
        };
        Ok(Self {
            setting_id: setting,
            ec_id: ec,
            n11,
            n10,
            n2: ec_sizes[(s % 9) / 3],
            beta0: 0.0,
            beta1: 1.0,
            beta2: 1.0,
            beta_trt: 0.0,
            phi1: phi,
            phi2: phi,
            ec_x2_mean,
            ec_x2_sd,
        })
    }

    /// RCT share of the pooled sample.
    pub fn lambda(&self) -> f64 {
        let n1 = (self.n11 + self.n10) as f64;
        n1 / (n1 + self.n2 as f64)
    }

    /// Conditional average treatment effect at `(x1, x2)`.
    pub fn cate(&self, x1: f64, x2: f64) -> f64 {
        self.beta_trt + self.phi1 * x1 + self.phi2 * x2
    }

    /// True when the treatment effect does not vary with covariates.
    pub fn is_homogeneous(&self) -> bool {
        self.phi1 == 0.0 && self.phi2 == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.beta0,
            self.beta1,
            self.beta2,
            self.beta_trt,
            self.phi1,
            self.phi2,
            self.ec_x2_mean,
            self.ec_x2_sd,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidScenario("non-finite parameter".into()));
        }
        if !(self.ec_x2_sd > 0.0) {
            return Err(Error::InvalidScenario("ec_x2_sd must be positive".into()));
        }
        if self.n11 == 0 || self.n10 + self.n2 == 0 {
            return Err(Error::InvalidScenario("need treated subjects and controls".into()));
        }
        Ok(())
    }
}

/// Draws one dataset. RCT subjects come first (the first `n11` treated),
/// then the external controls. Identical `(spec, seed)` give identical data.
pub fn generate(spec: &ScenarioSpec, seed: u64) -> Result<CombinedDataset> {
    spec.validate()?;
    let mut rng = SimRng::seed_from_u64(seed);
    let n1 = spec.n11 + spec.n10;
    let mut records = Vec::with_capacity(n1 + spec.n2);
    for i in 0..n1 + spec.n2 {
        let rct = i < n1;
        let treated = i < spec.n11;
        let x1 = if rng.random_bool(0.5) { 1.0 } else { 0.0 };
        let std: f64 = rng.sample(StandardNormal);
        let x2 = if rct {
            std
        } else {
            spec.ec_x2_mean + spec.ec_x2_sd * std
        };
        let eps: f64 = rng.sample(StandardNormal);
        let y0 = spec.beta0 + spec.beta1 * x1 + spec.beta2 * x2 + eps;
        let y = if treated { y0 + spec.cate(x1, x2) } else { y0 };
        records.push(SubjectRecord::new(y, treated, rct, vec![x1, x2]));
    }
    CombinedDataset::new(records)
}

/// Parses id lists such as `1-9`, `1,3,5` or `1-3,7`.
pub fn parse_id_list(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::InvalidArgument(format!("invalid id list `{text}`"));
    let mut ids = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: u32 = a.trim().parse().map_err(|_| bad())?;
                let b: u32 = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                ids.extend(a..=b);
            }
            None => ids.push(part.parse().map_err(|_| bad())?),
        }
    }
    if ids.is_empty() {
        return Err(bad());
    }
    Ok(ids)
}

/// Cross product of the selected settings and EC laws, ordered by
/// `(setting_id, ec_id)`. `None` selects all.
pub fn enumerate_scenarios(settings: Option<&[u32]>, ecs: Option<&[u32]>) -> Result<Vec<ScenarioSpec>> {
    let pick = |ids: Option<&[u32]>, max: u32, kind: &'static str| -> Result<Vec<u32>> {
        let mut v: Vec<u32> = match ids {
            Some(ids) => ids.to_vec(),
            None => (1..=max).collect(),
        };
        if let Some(&id) = v.iter().find(|&&id| id == 0 || id > max) {
            return Err(Error::InvalidFilterId { kind, id });
        }
        v.sort_unstable();
        v.dedup();
        Ok(v)
    };
    let settings = pick(settings, N_SETTINGS, "setting")?;
    let ecs = pick(ecs, N_ECS, "ec")?;
    settings
        .iter()
        .flat_map(|&s| ecs.iter().map(move |&e| ScenarioSpec::from_table(s, e)))
        .collect()
}

/// The infinite super-population behind a scenario: `Z ~ Bernoulli(lambda)`,
/// `A ~ Bernoulli(N11 / N1)` within the RCT, covariates from the source law.
#[derive(Debug, Clone)]
pub struct ScenarioPopulation {
    pub spec: ScenarioSpec,
}

impl ScenarioPopulation {
    pub fn new(spec: ScenarioSpec) -> Self {
        Self { spec }
    }
}

impl PopulationSampler for ScenarioPopulation {
    fn draw(&self, rng: &mut SimRng) -> PopulationDraw {
        let z = rng.random_bool(self.spec.lambda());
        let a = z && rng.random_bool(self.p_treated_in_rct());
        let x1 = if rng.random_bool(0.5) { 1.0 } else { 0.0 };
        let std: f64 = rng.sample(StandardNormal);
        let x2 = if z {
            std
        } else {
            self.spec.ec_x2_mean + self.spec.ec_x2_sd * std
        };
        PopulationDraw {
            a,
            z,
            pi: crate::oracle::true_pi(&self.spec, &[x1, x2]),
        }
    }

    fn p_rct(&self) -> f64 {
        self.spec.lambda()
    }

    fn p_treated_in_rct(&self) -> f64 {
        self.spec.n11 as f64 / (self.spec.n11 + self.spec.n10) as f64
    }
}
