//! Synthetic bimodal benchmark: two Gaussian bumps on the cube, noisy
//! training labels, noise-free test labels, and concordance of each
//! estimator's decisions with the test labels and with the Bayes rule.

use std::f64::consts::PI;
use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{
    classify_value, estimate_with_profile, EstimatorSpec, LrrSpec, MsknnLoss, MsknnRegression,
    WeightFn,
};
use crate::localfit::{evaluate, logistic_fit, sigmoid, FeatureMap, LogisticConfig, WeightedSample};
use crate::metric::{profile, Covariate, Dataset, LabeledPoint, Metric};
use crate::rng::cell_rng;
use crate::theory::csv_err;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub n_train: usize,
    pub n_test: usize,
    pub d: usize,
    pub noise_sd: f64,
    pub train_range: (f64, f64),
    pub test_range: (f64, f64),
    pub reps: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_train: 500,
            n_test: 500,
            d: 3,
            noise_sd: 0.05,
            train_range: (-1.0, 1.0),
            test_range: (-0.7, 0.7),
            reps: 200,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_train == 0 || self.n_test == 0 || self.d == 0 || self.reps == 0 {
            return Err(Error::param("sizes, dimension and reps must be positive"));
        }
        if !(self.noise_sd >= 0.0) {
            return Err(Error::param("noise_sd must be nonnegative"));
        }
        for (lo, hi) in [self.train_range, self.test_range] {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::param(format!("range [{lo}, {hi}] is not well ordered")));
            }
        }
        Ok(())
    }
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// 15·∏φ(2(xⱼ − ½)) + 15·∏φ(2(xⱼ + ½)), φ the standard normal density.
pub fn eta_true(x: &[f64]) -> f64 {
    let a: f64 = x.iter().map(|v| std_normal_pdf(2.0 * (v - 0.5))).product();
    let b: f64 = x.iter().map(|v| std_normal_pdf(2.0 * (v + 0.5))).product();
    15.0 * a + 15.0 * b
}

pub fn clip01(z: f64) -> f64 {
    z.clamp(0.0, 1.0)
}

pub fn bayes_classify(eta: f64) -> u8 {
    classify_value(eta)
}

/// Fraction of positions where the two label lists agree.
pub fn concordance(pred: &[u8], reference: &[u8]) -> Result<f64> {
    if pred.len() != reference.len() {
        return Err(Error::Dimension {
            expected: reference.len(),
            found: pred.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::domain("concordance of empty lists"));
    }
    let agree = pred.iter().zip(reference).filter(|(a, b)| a == b).count();
    Ok(agree as f64 / pred.len() as f64)
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub train: Dataset,
    pub test: Dataset,
    pub test_eta: Vec<f64>,
}

fn uniform_point<R: Rng>(rng: &mut R, d: usize, (lo, hi): (f64, f64)) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn generate_trial<R: Rng>(config: &SyntheticConfig, rng: &mut R) -> Result<Trial> {
    config.validate()?;
    let noise = Normal::new(0.0, config.noise_sd).map_err(|e| Error::param(e.to_string()))?;
    let mut train = Vec::with_capacity(config.n_train);
    for _ in 0..config.n_train {
        let x = uniform_point(rng, config.d, config.train_range);
        let p = clip01(eta_true(&x) + noise.sample(rng));
        let y = u8::from(rng.random::<f64>() < p);
        train.push(LabeledPoint::new(Covariate::new(x)?, y)?);
    }
    let mut test = Vec::with_capacity(config.n_test);
    let mut test_eta = Vec::with_capacity(config.n_test);
    for _ in 0..config.n_test {
        let x = uniform_point(rng, config.d, config.test_range);
        let p = eta_true(&x);
        let y = u8::from(rng.random::<f64>() < p);
        test_eta.push(p);
        test.push(LabeledPoint::new(Covariate::new(x)?, y)?);
    }
    Ok(Trial {
        train: Dataset::with_fixed_dim(train)?,
        test: Dataset::with_fixed_dim(test)?,
        test_eta,
    })
}

/// One row of the benchmark suite.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    /// Fair coin per query.
    Random,
    /// Global logistic regression on 1, x_j, x_j² (no cross terms).
    Logistic,
    Local(EstimatorSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedMethod {
    pub name: String,
    pub method: Method,
}

fn named(name: &str, method: Method) -> NamedMethod {
    NamedMethod {
        name: name.to_string(),
        method,
    }
}

/// The twelve benchmark configurations.
pub fn default_suite() -> Vec<NamedMethod> {
    let mut suite = vec![named("random", Method::Random), named("logistic", Method::Logistic)];
    for k in [10, 20, 30, 40, 50] {
        suite.push(named(&format!("knn_k{k}"), Method::Local(EstimatorSpec::Knn { k })));
    }
    suite.push(named(
        "msknn_logi",
        Method::Local(EstimatorSpec::Msknn {
            k_vec: vec![10, 20, 30, 40, 50],
            degree: 2,
            regression: MsknnRegression::Logi,
            loss: MsknnLoss::Logistic,
        }),
    ));
    suite.push(named(
        "lpor",
        Method::Local(EstimatorSpec::Lpor { h: 0.4, degree: 2 }),
    ));
    suite.push(named(
        "lpolr",
        Method::Local(EstimatorSpec::Lpolr { h: 0.4, degree: 2 }),
    ));
    suite.push(named(
        "lrlr_w1",
        Method::Local(EstimatorSpec::Lrr(LrrSpec::lrlr(WeightFn::ConstantOne))),
    ));
    suite.push(named(
        "lrlr_winv",
        Method::Local(EstimatorSpec::Lrr(LrrSpec::lrlr(WeightFn::InverseR))),
    ));
    suite
}

/// Per-query 0/1 decisions of every method on one trial. A method that
/// errors on any query yields `None` for the whole trial.
pub fn trial_predictions<R: Rng>(
    trial: &Trial,
    suite: &[NamedMethod],
    rng: &mut R,
) -> Result<Vec<Option<Vec<u8>>>> {
    let queries: Vec<&[f64]> = trial.test.points().iter().map(|p| p.x.values()).collect();
    let profiles = queries
        .iter()
        .map(|q| profile(&trial.train, Metric::Euclidean, q))
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(suite.len());
    for m in suite {
        let preds: Result<Vec<u8>> = match &m.method {
            Method::Random => Ok(queries.iter().map(|_| u8::from(rng.random::<bool>())).collect()),
            Method::Logistic => global_logistic(&trial.train, &queries),
            Method::Local(spec) => queries
                .iter()
                .zip(&profiles)
                .map(|(q, p)| {
                    estimate_with_profile(spec, &trial.train, p, q).map(|e| classify_value(e.value))
                })
                .collect(),
        };
        match preds {
            Ok(p) => out.push(Some(p)),
            Err(e) => {
                log::warn!("method {} skipped on this trial: {e}", m.name);
                out.push(None);
            }
        }
    }
    Ok(out)
}

fn global_logistic(train: &Dataset, queries: &[&[f64]]) -> Result<Vec<u8>> {
    let d = train.dim().ok_or_else(|| Error::domain("mixed dimensions"))?;
    let map = FeatureMap::AdditivePoly { degree: 2, dim: d };
    let x = map.design(train.points().iter().map(|p| p.x.values()))?;
    let y = train.points().iter().map(|p| f64::from(p.label())).collect();
    let fit = logistic_fit(&WeightedSample::unweighted(x, y)?, &LogisticConfig::default())?;
    queries
        .iter()
        .map(|q| evaluate(&map, &fit.theta, q).map(|z| classify_value(sigmoid(z))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub concordance_labels: f64,
    pub concordance_bayes: f64,
}

fn score_trial(trial: &Trial, preds: &[Option<Vec<u8>>]) -> Result<Vec<Option<TrialResult>>> {
    let labels: Vec<u8> = trial.test.points().iter().map(|p| p.label()).collect();
    let bayes: Vec<u8> = trial.test_eta.iter().map(|&e| bayes_classify(e)).collect();
    preds
        .iter()
        .map(|p| match p {
            None => Ok(None),
            Some(p) => Ok(Some(TrialResult {
                concordance_labels: concordance(p, &labels)?,
                concordance_bayes: concordance(p, &bayes)?,
            })),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: String,
    pub criterion: &'static str,
    pub mean: f64,
    pub se: f64,
    /// trials that produced a result
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn get(&self, method: &str, criterion: &str) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.criterion == criterion)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["method", "criterion", "mean", "se", "reps", "seed"])
            .map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.method.clone(),
                r.criterion.to_string(),
                r.mean.to_string(),
                r.se.to_string(),
                r.reps.to_string(),
                r.seed.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Trial `rep` of a benchmark: its data and every method's decisions.
pub fn run_trial(
    config: &SyntheticConfig,
    suite: &[NamedMethod],
    rep: usize,
) -> Result<(Trial, Vec<Option<Vec<u8>>>)> {
    let mut rng = cell_rng(config.seed, rep as u64);
    let trial = generate_trial(config, &mut rng)?;
    let preds = trial_predictions(&trial, suite, &mut rng)?;
    Ok((trial, preds))
}

pub fn run_benchmark(config: &SyntheticConfig, suite: &[NamedMethod]) -> Result<BenchTable> {
    config.validate()?;
    let per_trial = (0..config.reps)
        .into_par_iter()
        .map(|rep| {
            let (trial, preds) = run_trial(config, suite, rep)?;
            score_trial(&trial, &preds)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(2 * suite.len());
    for (j, m) in suite.iter().enumerate() {
        let results: Vec<TrialResult> = per_trial.iter().filter_map(|t| t[j]).collect();
        for criterion in ["labels", "bayes"] {
            let xs: Vec<f64> = results
                .iter()
                .map(|r| match criterion {
                    "labels" => r.concordance_labels,
                    _ => r.concordance_bayes,
                })
                .collect();
            let (mean, se) = mean_se(&xs);
            rows.push(BenchRow {
                method: m.name.clone(),
                criterion,
                mean,
                se,
                reps: xs.len(),
                seed: config.seed,
            });
        }
    }
    Ok(BenchTable { rows })
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Per-query decisions of one trial as CSV: covariates, η, test label,
/// Bayes decision, then one column per method (empty when skipped).
pub fn write_predictions_csv<W: Write>(
    trial: &Trial,
    suite: &[NamedMethod],
    preds: &[Option<Vec<u8>>],
    out: W,
) -> Result<()> {
    let d = trial.test.dim().unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    header.extend(["eta", "label", "bayes"].map(String::from));
    header.extend(suite.iter().map(|m| m.name.clone()));
    w.write_record(&header).map_err(csv_err)?;
    for (i, p) in trial.test.points().iter().enumerate() {
        let mut rec: Vec<String> = p.x.values().iter().map(|v| v.to_string()).collect();
        rec.push(trial.test_eta[i].to_string());
        rec.push(p.label().to_string());
        rec.push(bayes_classify(trial.test_eta[i]).to_string());
        for col in preds {
            rec.push(col.as_ref().map(|c| c[i].to_string()).unwrap_or_default());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
