//! Tilting functions, balancing weights and weighting diagnostics.
//!
//! | estimand | h(x)        | w1 (RCT)    | w0 (EC)    |
//! |----------|-------------|-------------|------------|
//! | ATI      | 1           | 1/pi        | 1/(1-pi)   |
//! | ATT      | pi          | 1           | pi/(1-pi)  |
//! | ATO      | pi(1-pi)    | 1-pi        | pi         |
//! | ATEC     | 1-pi        | (1-pi)/pi   | 1          |
//!
//! In every row `w1 * pi = w0 * (1 - pi) = h`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{fmt_f64, CombinedDataset, Group};
use crate::error::{Error, Result};

/// Propensity scores outside `[EXTREME_PI, 1 - EXTREME_PI]` are flagged.
pub const EXTREME_PI: f64 = 0.01;

/// Target population of a weighted estimand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EstimandKind {
    /// Integrated population (RCT and EC mixed in proportion to their sizes).
    Ati,
    /// Trial population.
    Att,
    /// Overlap population.
    Ato,
    /// External-control population.
    Atec,
}

impl EstimandKind {
    pub const ALL: [EstimandKind; 4] = [Self::Ati, Self::Att, Self::Ato, Self::Atec];
    /// Estimands with an estimator in [`crate::estimators`].
    pub const ESTIMABLE: [EstimandKind; 3] = [Self::Ati, Self::Att, Self::Ato];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ati => "ATI",
            Self::Att => "ATT",
            Self::Ato => "ATO",
            Self::Atec => "ATEC",
        }
    }

    /// Tilting function `h` at propensity `pi`.
    pub fn tilt(self, pi: f64) -> f64 {
        match self {
            Self::Ati => 1.0,
            Self::Att => pi,
            Self::Ato => pi * (1.0 - pi),
            Self::Atec => 1.0 - pi,
        }
    }

    /// Balancing weights `(w1, w0)` at propensity `pi`.
    pub fn weight_pair(self, pi: f64) -> (f64, f64) {
        match self {
            Self::Ati => (1.0 / pi, 1.0 / (1.0 - pi)),
            Self::Att => (1.0, pi / (1.0 - pi)),
            Self::Ato => (1.0 - pi, pi),
            Self::Atec => ((1.0 - pi) / pi, 1.0),
        }
    }
}

impl fmt::Display for EstimandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimandKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ati" => Ok(Self::Ati),
            "att" => Ok(Self::Att),
            "ato" => Ok(Self::Ato),
            "atec" => Ok(Self::Atec),
            _ => Err(Error::InvalidArgument(format!("unknown estimand `{s}`"))),
        }
    }
}

/// Kish effective sample sizes of the three arms under a weighting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupEss {
    pub rct_treated: Option<f64>,
    pub rct_control: Option<f64>,
    pub ec: Option<f64>,
}

/// Per-subject balancing weights for one estimand.
///
/// `w1[i]` is the weight subject `i` receives if it is an RCT subject and
/// `w0[i]` the weight it receives as an external control; both are stored
/// for every subject, and [`WeightSet::weight`] selects by source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSet {
    pub kind: EstimandKind,
    pub w1: Vec<f64>,
    pub w0: Vec<f64>,
    pub ess_by_group: GroupEss,
    /// Subjects whose propensity lies outside `[EXTREME_PI, 1 - EXTREME_PI]`.
    pub n_extreme: usize,
}

impl WeightSet {
    /// Weight actually applied to subject `i` of `dataset`.
    pub fn weight(&self, dataset: &CombinedDataset, i: usize) -> f64 {
        if dataset.records()[i].z {
            self.w1[i]
        } else {
            self.w0[i]
        }
    }

    /// Applied weights for every subject.
    pub fn applied(&self, dataset: &CombinedDataset) -> Vec<f64> {
        (0..dataset.len()).map(|i| self.weight(dataset, i)).collect()
    }
}

pub(crate) fn check_pi(dataset: &CombinedDataset, pi: &[f64]) -> Result<()> {
    if pi.len() != dataset.len() {
        return Err(Error::DimensionMismatch {
            expected: dataset.len(),
            found: pi.len(),
        });
    }
    for (index, &value) in pi.iter().enumerate() {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::DegeneratePi { index, value });
        }
    }
    Ok(())
}

/// Balancing weights of `kind` for every subject of `dataset` given
/// per-subject propensities `pi` (aligned with the dataset's records).
pub fn weights_for(kind: EstimandKind, dataset: &CombinedDataset, pi: &[f64]) -> Result<WeightSet> {
    check_pi(dataset, pi)?;
    let (w1, w0): (Vec<f64>, Vec<f64>) = pi.iter().map(|&p| kind.weight_pair(p)).unzip();
    let n_extreme = pi
        .iter()
        .filter(|&&p| !(EXTREME_PI..=1.0 - EXTREME_PI).contains(&p))
        .count();

    let group_ess = |group: Group, w: &[f64]| -> Option<f64> {
        let ws: Vec<f64> = dataset
            .records()
            .iter()
            .zip(w)
            .filter(|(r, _)| r.group() == group)
            .map(|(_, &w)| w)
            .collect();
        effective_sample_size(&ws).ok()
    };
    let ess_by_group = GroupEss {
        rct_treated: group_ess(Group::RctTreated, &w1),
        rct_control: group_ess(Group::RctControl, &w1),
        ec: group_ess(Group::ExternalControl, &w0),
    };
    Ok(WeightSet {
        kind,
        w1,
        w0,
        ess_by_group,
        n_extreme,
    })
}

/// Kish effective sample size `(sum w)^2 / sum w^2`.
pub fn effective_sample_size(weights: &[f64]) -> Result<f64> {
    let (s, s2) = weights
        .iter()
        .fold((0.0, 0.0), |(s, s2), w| (s + w, s2 + w * w));
    if s2 > 0.0 {
        Ok(s * s / s2)
    } else {
        Err(Error::AllZeroWeights)
    }
}

/// Weighted mean and (population) standard deviation.
pub fn weighted_mean_sd(values: &[f64], weights: &[f64]) -> Option<(f64, f64)> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let mean = values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / total;
    let var = values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (v - mean).powi(2))
        .sum::<f64>()
        / total;
    Some((mean, var.sqrt()))
}

/// Source group used in covariate-distribution diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Rct,
    Ec,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Rct => "rct",
            Source::Ec => "ec",
        }
    }

    fn matches(self, z: bool) -> bool {
        z == (self == Source::Rct)
    }
}

/// Covariate values and applied weights of one source.
fn source_slice(
    dataset: &CombinedDataset,
    weights: &WeightSet,
    covariate: usize,
    source: Source,
) -> (Vec<f64>, Vec<f64>) {
    dataset
        .records()
        .iter()
        .enumerate()
        .filter(|(_, r)| source.matches(r.z))
        .map(|(i, r)| (r.x[covariate], weights.weight(dataset, i)))
        .unzip()
}

/// How weighted densities are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DensityMethod {
    /// Gaussian kernel, Silverman bandwidth per group, evaluated on an even grid.
    Kde { grid_points: usize },
    /// Fixed-width bins over the pooled covariate range; `value` is the bin centre.
    Histogram { bins: usize },
}

impl Default for DensityMethod {
    fn default() -> Self {
        DensityMethod::Kde { grid_points: 101 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    pub covariate: String,
    pub group: Source,
    pub estimand: EstimandKind,
    pub value: f64,
    pub density_raw: f64,
    pub density_weighted: f64,
}

/// Silverman's rule of thumb, `0.9 min(sd, IQR/1.34) n^(-1/5)`.
pub fn silverman_bandwidth(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr / 1.34),
        (true, false) => sd,
        (false, true) => iqr / 1.34,
        (false, false) => 1.0,
    };
    0.9 * spread * n.powf(-0.2)
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

fn gaussian_kde(values: &[f64], weights: &[f64], bandwidth: f64, at: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    let total: f64 = weights.iter().sum();
    values
        .iter()
        .zip(weights)
        .map(|(v, w)| {
            let u = (at - v) / bandwidth;
            w * (-0.5 * u * u).exp()
        })
        .sum::<f64>()
        * INV_SQRT_2PI
        / (bandwidth * total)
}

/// Raw and weighted densities of one covariate in the RCT and EC groups.
///
/// Each subject contributes mass proportional to its applied weight; the
/// weighted mass of each group is normalized to one. Both groups share the
/// evaluation grid.
pub fn weighted_density_export(
    dataset: &CombinedDataset,
    weights: &WeightSet,
    covariate: usize,
    method: DensityMethod,
) -> Result<Vec<DensityRow>> {
    if covariate >= dataset.dim() {
        return Err(Error::InvalidCovariate {
            index: covariate,
            dim: dataset.dim(),
        });
    }
    let groups = [Source::Rct, Source::Ec].map(|s| (s, source_slice(dataset, weights, covariate, s)));
    for (s, (values, w)) in &groups {
        if values.is_empty() {
            return Err(Error::EmptyGroup(s.as_str()));
        }
        if !(w.iter().sum::<f64>() > 0.0) {
            return Err(Error::EmptyWeightedGroup(s.as_str()));
        }
    }
    let all = dataset.records().iter().map(|r| r.x[covariate]);
    let lo = all.clone().fold(f64::INFINITY, f64::min);
    let hi = all.fold(f64::NEG_INFINITY, f64::max);
    let name = dataset.covariate_names()[covariate].clone();

    let mut rows = Vec::new();
    match method {
        DensityMethod::Kde { grid_points } => {
            let bws: Vec<f64> = groups.iter().map(|(_, (v, _))| silverman_bandwidth(v)).collect();
            let pad = 3.0 * bws.iter().cloned().fold(0.0, f64::max);
            let (a, b) = (lo - pad, hi + pad);
            let m = grid_points.max(2);
            for ((source, (values, w)), bw) in groups.iter().zip(&bws) {
                let ones = vec![1.0; values.len()];
                for g in 0..m {
                    let at = a + (b - a) * g as f64 / (m - 1) as f64;
                    rows.push(DensityRow {
                        covariate: name.clone(),
                        group: *source,
                        estimand: weights.kind,
                        value: at,
                        density_raw: gaussian_kde(values, &ones, *bw, at),
                        density_weighted: gaussian_kde(values, w, *bw, at),
                    });
                }
            }
        }
        DensityMethod::Histogram { bins } => {
            let bins = bins.max(1);
            let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
            for (source, (values, w)) in &groups {
                let mut raw = vec![0.0; bins];
                let mut weighted = vec![0.0; bins];
                for (v, wt) in values.iter().zip(w) {
                    let b = (((v - lo) / width) as usize).min(bins - 1);
                    raw[b] += 1.0;
                    weighted[b] += wt;
                }
                let (n, total) = (values.len() as f64, w.iter().sum::<f64>());
                for b in 0..bins {
                    rows.push(DensityRow {
                        covariate: name.clone(),
                        group: *source,
                        estimand: weights.kind,
                        value: lo + (b as f64 + 0.5) * width,
                        density_raw: raw[b] / (n * width),
                        density_weighted: weighted[b] / (total * width),
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_density_csv<W: Write>(rows: &[DensityRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "covariate",
        "group",
        "estimand",
        "value",
        "density_raw",
        "density_weighted",
    ])?;
    for r in rows {
        w.write_record([
            r.covariate.clone(),
            r.group.as_str().to_string(),
            r.estimand.to_string(),
            fmt_f64(r.value),
            fmt_f64(r.density_raw),
            fmt_f64(r.density_weighted),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Covariate balance between weighted RCT and weighted EC samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceRow {
    pub covariate: String,
    pub estimand: EstimandKind,
    pub rct_mean_raw: f64,
    pub rct_sd_raw: f64,
    pub ec_mean_raw: f64,
    pub ec_sd_raw: f64,
    pub smd_raw: f64,
    pub rct_mean_weighted: f64,
    pub rct_sd_weighted: f64,
    pub ec_mean_weighted: f64,
    pub ec_sd_weighted: f64,
    /// Weighted mean difference over the unweighted pooled SD.
    pub smd_weighted: f64,
}

/// One row per covariate. Standardized mean differences divide by
/// `sqrt((s_rct^2 + s_ec^2) / 2)` computed from the unweighted samples, so raw
/// and weighted SMDs share a denominator.
pub fn balance_table(dataset: &CombinedDataset, weights: &WeightSet) -> Result<Vec<BalanceRow>> {
    if dataset.n1() == 0 {
        return Err(Error::EmptyGroup("rct"));
    }
    if dataset.n2() == 0 {
        return Err(Error::EmptyGroup("ec"));
    }
    (0..dataset.dim())
        .map(|j| {
            let (xr, wr) = source_slice(dataset, weights, j, Source::Rct);
            let (xe, we) = source_slice(dataset, weights, j, Source::Ec);
            let (mr, sr) = weighted_mean_sd(&xr, &vec![1.0; xr.len()]).expect("nonempty");
            let (me, se) = weighted_mean_sd(&xe, &vec![1.0; xe.len()]).expect("nonempty");
            let (mrw, srw) = weighted_mean_sd(&xr, &wr).ok_or(Error::EmptyWeightedGroup("rct"))?;
            let (mew, sew) = weighted_mean_sd(&xe, &we).ok_or(Error::EmptyWeightedGroup("ec"))?;
            let pooled = ((sr * sr + se * se) / 2.0).sqrt();
            let smd = |d: f64| if d == 0.0 { 0.0 } else { d / pooled };
            Ok(BalanceRow {
                covariate: dataset.covariate_names()[j].clone(),
                estimand: weights.kind,
                rct_mean_raw: mr,
                rct_sd_raw: sr,
                ec_mean_raw: me,
                ec_sd_raw: se,
                smd_raw: smd(mr - me),
                rct_mean_weighted: mrw,
                rct_sd_weighted: srw,
                ec_mean_weighted: mew,
                ec_sd_weighted: sew,
                smd_weighted: smd(mrw - mew),
            })
        })
        .collect()
}

/// Counts of RCT and EC propensities in one histogram bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiHistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub rct: usize,
    pub ec: usize,
}

/// Propensity histogram on `[0, 1]` with equal-width bins, split by source.
pub fn pi_histogram(dataset: &CombinedDataset, pi: &[f64], bins: usize) -> Result<Vec<PiHistogramBin>> {
    check_pi(dataset, pi)?;
    let bins = bins.max(1);
    let mut out: Vec<PiHistogramBin> = (0..bins)
        .map(|b| PiHistogramBin {
            lower: b as f64 / bins as f64,
            upper: (b + 1) as f64 / bins as f64,
            rct: 0,
            ec: 0,
        })
        .collect();
    for (r, p) in dataset.records().iter().zip(pi) {
        let b = ((p * bins as f64) as usize).min(bins - 1);
        if r.z {
            out[b].rct += 1;
        } else {
            out[b].ec += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SubjectRecord;

    fn toy() -> CombinedDataset {
        CombinedDataset::new(vec![
            SubjectRecord::new(0.0, true, true, vec![0.0, 1.0]),
            SubjectRecord::new(0.0, false, true, vec![1.0, -0.5]),
            SubjectRecord::new(0.0, false, false, vec![1.0, 2.0]),
            SubjectRecord::new(0.0, false, false, vec![0.0, 1.5]),
        ])
        .unwrap()
    }

    #[test]
    fn table_of_weights() {
        assert_eq!(EstimandKind::Ato.weight_pair(0.3), (0.7, 0.3));
        assert_eq!(EstimandKind::Att.weight_pair(0.5), (1.0, 1.0));
        let (w1, w0) = EstimandKind::Ati.weight_pair(0.25);
        assert_eq!(w1, 4.0);
        assert!((w0 - 4.0 / 3.0).abs() < 1e-15);
        let (w1, w0) = EstimandKind::Atec.weight_pair(0.2);
        assert!((w1 - 4.0).abs() < 1e-15);
        assert_eq!(w0, 1.0);
    }

    #[test]
    fn ess_examples() {
        assert_eq!(effective_sample_size(&[2.5; 7]).unwrap(), 7.0);
        assert!((effective_sample_size(&[1.0, 1.0, 2.0]).unwrap() - 16.0 / 6.0).abs() < 1e-15);
        assert_eq!(effective_sample_size(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!(matches!(effective_sample_size(&[0.0, 0.0]), Err(Error::AllZeroWeights)));
        assert!(matches!(effective_sample_size(&[]), Err(Error::AllZeroWeights)));
    }

    #[test]
    fn degenerate_pi_rejected() {
        let ds = toy();
        let err = weights_for(EstimandKind::Ato, &ds, &[0.5, 0.5, 1.0, 0.5]).unwrap_err();
        assert!(matches!(err, Error::DegeneratePi { index: 2, .. }));
        assert!(matches!(
            weights_for(EstimandKind::Ato, &ds, &[0.5, 0.0, 0.5, 0.5]),
            Err(Error::DegeneratePi { index: 1, .. })
        ));
        assert!(matches!(
            weights_for(EstimandKind::Ato, &ds, &[0.5]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn extreme_scores_are_flagged_not_trimmed() {
        let ds = toy();
        let pi = [0.5, 0.995, 0.005, 0.01];
        let ws = weights_for(EstimandKind::Ati, &ds, &pi).unwrap();
        assert_eq!(ws.n_extreme, 2);
        assert!((ws.w0[2] - 1.0 / 0.995).abs() < 1e-12);
        assert!((ws.w1[1] - 1.0 / 0.995).abs() < 1e-12);
        let ws = weights_for(EstimandKind::Ato, &ds, &[0.5; 4]).unwrap();
        assert_eq!(ws.n_extreme, 0);
        assert_eq!(ws.ess_by_group.rct_treated, Some(1.0));
        assert_eq!(ws.ess_by_group.ec, Some(2.0));
    }

    #[test]
    fn uniform_weights_reproduce_raw_density() {
        let ds = toy();
        let ws = weights_for(EstimandKind::Att, &ds, &[0.5; 4]).unwrap();
        for method in [DensityMethod::Kde { grid_points: 21 }, DensityMethod::Histogram { bins: 4 }] {
            let rows = weighted_density_export(&ds, &ws, 1, method).unwrap();
            assert!(!rows.is_empty());
            for r in rows {
                assert!((r.density_raw - r.density_weighted).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn histogram_integrates_to_one() {
        let ds = toy();
        let ws = weights_for(EstimandKind::Ati, &ds, &[0.3, 0.6, 0.2, 0.7]).unwrap();
        let rows = weighted_density_export(&ds, &ws, 1, DensityMethod::Histogram { bins: 5 }).unwrap();
        let width = (2.0 - -0.5) / 5.0;
        for g in [Source::Rct, Source::Ec] {
            let mass: f64 = rows
                .iter()
                .filter(|r| r.group == g)
                .map(|r| r.density_weighted * width)
                .sum();
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_needs_both_groups() {
        let ds = CombinedDataset::new(vec![
            SubjectRecord::new(0.0, true, true, vec![0.0]),
            SubjectRecord::new(0.0, false, true, vec![1.0]),
        ])
        .unwrap();
        let ws = weights_for(EstimandKind::Ato, &ds, &[0.5, 0.5]).unwrap();
        assert!(matches!(
            weighted_density_export(&ds, &ws, 0, DensityMethod::default()),
            Err(Error::EmptyGroup("ec"))
        ));
        assert!(matches!(balance_table(&ds, &ws), Err(Error::EmptyGroup("ec"))));
        assert!(matches!(
            weighted_density_export(&toy(), &weights_for(EstimandKind::Ato, &toy(), &[0.5; 4]).unwrap(), 5, DensityMethod::default()),
            Err(Error::InvalidCovariate { .. })
        ));
    }

    #[test]
    fn histogram_of_scores() {
        let ds = toy();
        let h = pi_histogram(&ds, &[0.02, 0.5, 0.97, 0.999], 20).unwrap();
        assert_eq!(h.len(), 20);
        assert_eq!(h[0].rct, 1);
        assert_eq!(h[10].rct, 1);
        assert_eq!(h[19].ec, 2);
    }
}
