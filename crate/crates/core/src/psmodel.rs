//! Source propensity score model: `Pr(Z = 1 | X = x)` by logistic regression.
//!
//! The fit is plain maximum likelihood computed with Newton/IRLS from a zero
//! start, with step halving whenever an update lowers the log-likelihood.
//! Non-intercept design columns are centred and scaled internally; the
//! coefficient cap used for separation detection applies on that scale and
//! the reported coefficients are mapped back to the original covariates.

use serde::Serialize;

use crate::dataset::CombinedDataset;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// One column of the propensity design (the intercept is implicit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Term {
    Main(usize),
    Square(usize),
    Interaction(usize, usize),
}

impl Term {
    fn eval(self, x: &[f64]) -> f64 {
        match self {
            Term::Main(j) => x[j],
            Term::Square(j) => x[j] * x[j],
            Term::Interaction(j, k) => x[j] * x[k],
        }
    }

    pub fn label(self, names: &[String]) -> String {
        match self {
            Term::Main(j) => names[j].clone(),
            Term::Square(j) => format!("{}^2", names[j]),
            Term::Interaction(j, k) => format!("{}:{}", names[j], names[k]),
        }
    }
}

/// Optional extensions of the main-effects model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ModelTerms {
    /// Add all pairwise products `x_j * x_k`.
    pub interactions: bool,
    /// Add `x_j^2` for every non-binary covariate.
    pub squares: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitOptions {
    /// Convergence threshold on the sup-norm of the score vector.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Largest admissible |coefficient| on the standardized scale.
    pub coefficient_cap: f64,
    /// Ridge penalty on standardized non-intercept coefficients; 0 disables.
    pub ridge: f64,
    pub terms: ModelTerms,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 50,
            coefficient_cap: 30.0,
            ridge: 0.0,
            terms: ModelTerms::default(),
        }
    }
}

/// A fitted source propensity model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropensityFit {
    /// Intercept first, then one coefficient per term, on the original scale.
    pub coefficients: Vec<f64>,
    pub term_labels: Vec<String>,
    pub converged: bool,
    pub iterations: usize,
    /// Sup-norm of the (standardized-design) score at the returned estimate.
    pub max_abs_score: f64,
    pub log_likelihood: f64,
    #[serde(skip)]
    pub pi_hat: Vec<f64>,
    #[serde(skip)]
    terms: Vec<Term>,
    #[serde(skip)]
    dim: usize,
}

impl PropensityFit {
    /// Builds a fit from known coefficients for a main-effects model.
    pub fn from_coefficients(coefficients: Vec<f64>) -> Self {
        let dim = coefficients.len().saturating_sub(1);
        let names: Vec<String> = (1..=dim).map(|j| format!("x{j}")).collect();
        let terms: Vec<Term> = (0..dim).map(Term::Main).collect();
        Self {
            term_labels: terms.iter().map(|t| t.label(&names)).collect(),
            coefficients,
            converged: true,
            iterations: 0,
            max_abs_score: 0.0,
            log_likelihood: f64::NAN,
            pi_hat: Vec::new(),
            terms,
            dim,
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Covariate dimension expected by [`predict_pi`].
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn linear_predictor(&self, x: &[f64]) -> f64 {
        self.coefficients[0]
            + self
                .terms
                .iter()
                .zip(&self.coefficients[1..])
                .map(|(t, b)| b * t.eval(x))
                .sum::<f64>()
    }
}

/// Logistic function, evaluated without overflow for either sign.
pub fn logistic(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// `log(1 + exp(eta))` without overflow.
fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

/// Fitted propensity for covariates `x`.
pub fn predict_pi(fit: &PropensityFit, x: &[f64]) -> Result<f64> {
    if x.len() != fit.dim {
        return Err(Error::DimensionMismatch {
            expected: fit.dim,
            found: x.len(),
        });
    }
    Ok(logistic(fit.linear_predictor(x)))
}

/// Fits the main-effects propensity model with default options.
pub fn fit_propensity(dataset: &CombinedDataset) -> Result<PropensityFit> {
    fit_propensity_with(dataset, &FitOptions::default())
}

fn build_terms(x: &[&[f64]], p: usize, opts: &ModelTerms) -> Vec<Term> {
    let mut terms: Vec<Term> = (0..p).map(Term::Main).collect();
    if opts.squares {
        for j in 0..p {
            let binary = x.iter().all(|r| r[j] == 0.0 || r[j] == 1.0);
            if !binary {
                terms.push(Term::Square(j));
            }
        }
    }
    if opts.interactions {
        for j in 0..p {
            for k in j + 1..p {
                terms.push(Term::Interaction(j, k));
            }
        }
    }
    terms
}

pub fn fit_propensity_with(dataset: &CombinedDataset, opts: &FitOptions) -> Result<PropensityFit> {
    let z: Vec<bool> = dataset.records().iter().map(|r| r.z).collect();
    let x: Vec<&[f64]> = dataset.records().iter().map(|r| r.x.as_slice()).collect();
    fit_logistic(&z, &x, dataset.covariate_names(), opts)
}

/// Logistic regression of a binary response on covariate rows, without the
/// dataset structure. Every row must have `names.len()` entries.
pub fn fit_logistic(response: &[bool], x: &[&[f64]], names: &[String], opts: &FitOptions) -> Result<PropensityFit> {
    let n = response.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let p = names.len();
    if let Some(index) = x.iter().position(|r| r.len() != p) {
        return Err(Error::InconsistentDimension {
            index,
            expected: p,
            found: x[index].len(),
        });
    }
    let terms = build_terms(x, p, &opts.terms);
    let k = terms.len() + 1;
    let z: Vec<f64> = response.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();

    // Standardized design, row-major n x k, intercept in column 0.
    let mut design = vec![0.0; n * k];
    let mut centre = vec![0.0; k];
    let mut scale = vec![1.0; k];
    for (i, r) in x.iter().enumerate() {
        design[i * k] = 1.0;
        for (c, t) in terms.iter().enumerate() {
            design[i * k + c + 1] = t.eval(r);
        }
    }
    for c in 1..k {
        let mean = (0..n).map(|i| design[i * k + c]).sum::<f64>() / n as f64;
        let var = (0..n)
            .map(|i| (design[i * k + c] - mean).powi(2))
            .sum::<f64>()
            / n as f64;
        let sd = var.sqrt();
        if !(sd > 1e-12 * (1.0 + mean.abs())) {
            return Err(Error::SingularDesign(format!(
                "term {} is constant",
                terms[c - 1].label(names)
            )));
        }
        centre[c] = mean;
        scale[c] = sd;
        for i in 0..n {
            design[i * k + c] = (design[i * k + c] - mean) / sd;
        }
    }

    let rows = |i: usize| &design[i * k..(i + 1) * k];
    let eta_of = |beta: &[f64], i: usize| -> f64 { rows(i).iter().zip(beta).map(|(d, b)| d * b).sum() };
    let penalty = |beta: &[f64]| -> f64 { 0.5 * opts.ridge * beta[1..].iter().map(|b| b * b).sum::<f64>() };
    let objective = |beta: &[f64]| -> f64 {
        (0..n)
            .map(|i| {
                let eta = eta_of(beta, i);
                z[i] * eta - softplus(eta)
            })
            .sum::<f64>()
            - penalty(beta)
    };

    let mut beta = vec![0.0; k];
    let mut obj = objective(&beta);
    let mut converged = false;
    let mut iterations = 0;
    let mut max_abs_score;
    loop {
        let mut grad = vec![0.0; k];
        let mut hess = SymMatrix::zeros(k);
        for (i, &zi) in z.iter().enumerate().take(n) {
            let row = rows(i);
            let p = logistic(eta_of(&beta, i));
            let resid = zi - p;
            for (g, d) in grad.iter_mut().zip(row) {
                *g += d * resid;
            }
            hess.rank_one_lower(p * (1.0 - p), row);
        }
        for c in 1..k {
            grad[c] -= opts.ridge * beta[c];
            hess.add(c, c, opts.ridge);
        }
        hess.symmetrize_from_lower();
        max_abs_score = grad.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
        if max_abs_score <= opts.tolerance {
            converged = true;
            break;
        }
        if iterations == opts.max_iterations {
            break;
        }
        iterations += 1;

        let chol = match hess.cholesky(1e-10) {
            Some(c) => c,
            None if iterations == 1 => {
                return Err(Error::SingularDesign(
                    "information matrix is not positive definite".into(),
                ))
            }
            // Curvature vanished along the way: fitted probabilities saturated.
            None => break,
        };
        let step = chol.solve(&grad);
        let mut t = 1.0;
        let (new_beta, new_obj) = loop {
            let cand: Vec<f64> = beta.iter().zip(&step).map(|(b, s)| b + t * s).collect();
            let cand_obj = objective(&cand);
            if cand_obj >= obj - 1e-12 * obj.abs() || t < 1e-10 {
                break (cand, cand_obj);
            }
            t *= 0.5;
        };
        beta = new_beta;
        obj = new_obj;

        let max_coef = beta.iter().fold(0.0_f64, |m, b| m.max(b.abs()));
        if max_coef > opts.coefficient_cap && opts.ridge == 0.0 {
            return Err(Error::Separation {
                max_abs_coefficient: max_coef,
                cap: opts.coefficient_cap,
            });
        }
    }

    // Complete or quasi-complete separation: the linear predictor classifies
    // every subject on the correct side, so no finite maximizer exists.
    if opts.ridge == 0.0 {
        let min_margin = (0..n)
            .map(|i| (2.0 * z[i] - 1.0) * eta_of(&beta, i))
            .fold(f64::INFINITY, f64::min);
        if (converged && min_margin > 0.0) || (!converged && min_margin >= -1e-8) {
            return Err(Error::Separation {
                max_abs_coefficient: beta.iter().fold(0.0_f64, |m, b| m.max(b.abs())),
                cap: opts.coefficient_cap,
            });
        }
    }
    if !converged {
        return Err(Error::NoConvergence(iterations));
    }

    // Back to the original scale.
    let mut coefficients = vec![0.0; k];
    coefficients[0] = beta[0];
    for c in 1..k {
        coefficients[c] = beta[c] / scale[c];
        coefficients[0] -= beta[c] * centre[c] / scale[c];
    }
    let pi_hat: Vec<f64> = (0..n).map(|i| logistic(eta_of(&beta, i))).collect();

    Ok(PropensityFit {
        coefficients,
        term_labels: terms.iter().map(|t| t.label(names)).collect(),
        converged,
        iterations,
        max_abs_score,
        log_likelihood: obj + penalty(&beta),
        pi_hat,
        terms,
        dim: p,
    })
}
