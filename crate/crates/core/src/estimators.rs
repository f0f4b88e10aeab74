//! Label-probability estimators over a [`NeighborProfile`] and the plug-in
//! classifier that thresholds them at one half.
//!
//! * kernel smoother (boxcar) and k-NN: label means over a ball;
//! * local polynomial regression (LPoR) and its logistic variant (LPoLR):
//!   polynomial in the raw offsets `X_(i) − X_*`, evaluated at offset zero;
//! * multiscale k-NN: radial fit to k-NN means at several scales,
//!   extrapolated to radius zero;
//! * local radial regression (LRR, LRLR for the logistic loss): radial fit
//!   to the raw labels, evaluated at radius zero.
//!
//! Outputs are not clipped; polynomial variants may leave [0, 1].

use crate::error::{Error, Result};
use crate::localfit::{
    logistic_fit, logit, sigmoid, wls_fit, FeatureMap, FitResult, LogisticConfig, WeightedSample,
};
use crate::metric::{profile, Dataset, Metric, NeighborProfile};

/// Radial weight function w(r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFn {
    ConstantOne,
    /// 1 / max(r, ε) with ε = 10⁻¹² × the largest in-scope radius (or 10⁻¹²
    /// when every radius is zero).
    InverseR,
    Boxcar(f64),
    /// 1/N on r ≤ r̃ and 0 beyond, N being the number of points within r̃.
    Theory { r_tilde: f64 },
}

/// Which neighbours enter a radial fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scope {
    All,
    Radius(f64),
    TopK(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialBasis {
    /// 1, r, …, r^q
    Poly,
    /// 1, r², …, r^(2q)
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrrLoss {
    Squared,
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsknnRegression {
    Poly,
    Logi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsknnLoss {
    Squared,
    Logistic,
    /// Squared error between logits of the k-NN means and of the fit.
    LogitSquared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LrrSpec {
    pub weight: WeightFn,
    pub degree: usize,
    pub loss: LrrLoss,
    pub scope: Scope,
    pub basis: RadialBasis,
}

impl LrrSpec {
    /// LRLR as used on whole training windows: logistic loss, degree-2
    /// radial polynomial, every point in scope.
    pub fn lrlr(weight: WeightFn) -> Self {
        LrrSpec {
            weight,
            degree: 2,
            loss: LrrLoss::Logistic,
            scope: Scope::All,
            basis: RadialBasis::Poly,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EstimatorSpec {
    KernelSmoother { h: f64 },
    Knn { k: usize },
    Lpor { h: f64, degree: usize },
    Lpolr { h: f64, degree: usize },
    Msknn {
        k_vec: Vec<usize>,
        degree: usize,
        regression: MsknnRegression,
        loss: MsknnLoss,
    },
    Lrr(LrrSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub used_points: usize,
    pub converged: bool,
    pub fallback_applied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub diagnostics: Diagnostics,
}

impl Estimate {
    fn exact(value: f64, used_points: usize) -> Self {
        Estimate {
            value,
            diagnostics: Diagnostics {
                used_points,
                converged: true,
                fallback_applied: false,
            },
        }
    }
}

/// Plug-in classifier: 1 when the estimate is at least one half.
pub fn classify(estimate: &Estimate) -> u8 {
    classify_value(estimate.value)
}

pub fn classify_value(value: f64) -> u8 {
    u8::from(value >= 0.5)
}

fn label_mean(labels: &[u8]) -> f64 {
    labels.iter().map(|&y| f64::from(y)).sum::<f64>() / labels.len() as f64
}

/// Mean label over the closed ball of radius `h`.
pub fn kernel_smoother(profile: &NeighborProfile, h: f64) -> Result<Estimate> {
    if !(h > 0.0) {
        return Err(Error::param(format!("bandwidth must be positive, got {h}")));
    }
    let m = window_len(profile, h);
    if m == 0 {
        return Err(Error::EmptyWindow { radius: h });
    }
    Ok(Estimate::exact(label_mean(&profile.labels()[..m]), m))
}

/// Mean label of the `k` nearest points.
pub fn knn(profile: &NeighborProfile, k: usize) -> Result<Estimate> {
    if k == 0 || k > profile.len() {
        return Err(Error::param(format!(
            "k must lie in 1..={}, got {k}",
            profile.len()
        )));
    }
    Ok(Estimate::exact(label_mean(&profile.labels()[..k]), k))
}

fn window_len(profile: &NeighborProfile, h: f64) -> usize {
    profile.radii().partition_point(|&r| r <= h)
}

/// Offsets `X_(i) − X_*` of the in-window points, in profile order.
fn window_offsets(
    data: &Dataset,
    profile: &NeighborProfile,
    query: &[f64],
    h: f64,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if !(h > 0.0) {
        return Err(Error::param(format!("bandwidth must be positive, got {h}")));
    }
    let d = data
        .dim()
        .ok_or_else(|| Error::domain("local polynomial fits need covariates of one dimension"))?;
    if query.len() != d {
        return Err(Error::Dimension {
            expected: d,
            found: query.len(),
        });
    }
    let m = window_len(profile, h);
    if m == 0 {
        return Err(Error::EmptyWindow { radius: h });
    }
    let mut offsets = Vec::with_capacity(m);
    let mut targets = Vec::with_capacity(m);
    for i in 0..m {
        let p = &data.points()[profile.source_indices()[i]];
        offsets.push(p.x.values().iter().zip(query).map(|(a, b)| a - b).collect());
        targets.push(f64::from(profile.labels()[i]));
    }
    Ok((offsets, targets))
}

/// Largest degree ≤ `degree` whose basis fits in `available` points.
fn reduce_degree(degree: usize, available: usize, basis_size: impl Fn(usize) -> usize) -> (usize, bool) {
    let mut q = degree;
    while q > 0 && basis_size(q) > available {
        q -= 1;
    }
    (q, q != degree)
}

fn local_poly(
    data: &Dataset,
    profile: &NeighborProfile,
    query: &[f64],
    h: f64,
    degree: usize,
    logistic: bool,
) -> Result<Estimate> {
    let (offsets, targets) = window_offsets(data, profile, query, h)?;
    let dim = query.len();
    let m = targets.len();
    let (q, fallback) = reduce_degree(degree, m, |q| {
        FeatureMap::MultivariatePoly { degree: q, dim }.output_dim()
    });
    let map = FeatureMap::MultivariatePoly { degree: q, dim };
    let x = map.design(offsets.iter().map(Vec::as_slice))?;
    let sample = WeightedSample::unweighted(x, targets)?;
    let (value, fit) = if logistic {
        let fit = logistic_fit(&sample, &LogisticConfig::default())?;
        (sigmoid(fit.intercept()), fit)
    } else {
        let fit = wls_fit(&sample);
        (fit.intercept(), fit)
    };
    Ok(Estimate {
        value,
        diagnostics: Diagnostics {
            used_points: m,
            converged: fit.converged,
            fallback_applied: fallback,
        },
    })
}

/// Local polynomial regression with a boxcar window of radius `h`.
pub fn lpor(
    data: &Dataset,
    profile: &NeighborProfile,
    query: &[f64],
    h: f64,
    degree: usize,
) -> Result<Estimate> {
    local_poly(data, profile, query, h, degree, false)
}

/// Logistic local polynomial regression; the value is σ(θ₀).
pub fn lpolr(
    data: &Dataset,
    profile: &NeighborProfile,
    query: &[f64],
    h: f64,
    degree: usize,
) -> Result<Estimate> {
    local_poly(data, profile, query, h, degree, true)
}

/// Multiscale k-NN: fits a radial polynomial (or its sigmoid) to the pairs
/// (r_{k_j}, k_j-NN mean) and extrapolates to r = 0.
pub fn msknn(
    profile: &NeighborProfile,
    k_vec: &[usize],
    degree: usize,
    regression: MsknnRegression,
    loss: MsknnLoss,
) -> Result<Estimate> {
    match (regression, loss) {
        (MsknnRegression::Poly, MsknnLoss::Squared)
        | (MsknnRegression::Logi, MsknnLoss::Logistic)
        | (MsknnRegression::Logi, MsknnLoss::LogitSquared) => {}
        _ => {
            return Err(Error::param(format!(
                "unsupported multiscale k-NN combination {regression:?}/{loss:?}"
            )))
        }
    }
    let j = k_vec.len();
    if j < degree + 1 {
        return Err(Error::param(format!(
            "{j} scales cannot identify a degree-{degree} fit"
        )));
    }
    if k_vec[0] == 0 || k_vec.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("k vector must be strictly increasing from 1"));
    }
    let kmax = k_vec[j - 1];
    if kmax > profile.len() {
        return Err(Error::param(format!(
            "k_J = {kmax} exceeds the {} available points",
            profile.len()
        )));
    }

    let mut cum = Vec::with_capacity(kmax + 1);
    cum.push(0.0);
    for &y in &profile.labels()[..kmax] {
        cum.push(cum.last().unwrap() + f64::from(y));
    }
    let radii: Vec<f64> = k_vec.iter().map(|&k| profile.radii()[k - 1]).collect();
    let means: Vec<f64> = k_vec.iter().map(|&k| cum[k] / k as f64).collect();

    let x = FeatureMap::RadialPoly { degree }.radial_design(&radii)?;
    let (value, fit): (f64, FitResult) = match loss {
        MsknnLoss::Squared => {
            let fit = wls_fit(&WeightedSample::unweighted(x, means)?);
            (fit.intercept(), fit)
        }
        MsknnLoss::Logistic => {
            let fit = logistic_fit(&WeightedSample::unweighted(x, means)?, &LogisticConfig::default())?;
            (sigmoid(fit.intercept()), fit)
        }
        MsknnLoss::LogitSquared => {
            let targets = k_vec
                .iter()
                .zip(&means)
                .map(|(&k, &m)| {
                    let eps = 0.5 / k as f64;
                    logit(m.clamp(eps, 1.0 - eps))
                })
                .collect();
            let fit = wls_fit(&WeightedSample::unweighted(x, targets)?);
            (sigmoid(fit.intercept()), fit)
        }
    };
    Ok(Estimate {
        value,
        diagnostics: Diagnostics {
            used_points: kmax,
            converged: fit.converged,
            fallback_applied: false,
        },
    })
}

/// Local radial regression: fits the raw labels against radial distance
/// with weights w(rᵢ) and returns the fit at r = 0 (σ(θ₀) for the logistic
/// loss, i.e. LRLR).
pub fn lrr(profile: &NeighborProfile, spec: &LrrSpec) -> Result<Estimate> {
    let radii = profile.radii();
    let in_scope = match spec.scope {
        Scope::All => radii.len(),
        Scope::Radius(h) => {
            if !(h > 0.0) {
                return Err(Error::param(format!("scope radius must be positive, got {h}")));
            }
            window_len(profile, h)
        }
        Scope::TopK(k) => {
            if k == 0 || k > radii.len() {
                return Err(Error::param(format!("k must lie in 1..={}, got {k}", radii.len())));
            }
            k
        }
    };
    let radii = &radii[..in_scope];
    let labels = &profile.labels()[..in_scope];

    let weights: Vec<f64> = match spec.weight {
        WeightFn::ConstantOne => vec![1.0; in_scope],
        WeightFn::InverseR => {
            let largest = radii.last().copied().unwrap_or(0.0);
            let eps = 1e-12 * if largest > 0.0 { largest } else { 1.0 };
            radii.iter().map(|&r| 1.0 / r.max(eps)).collect()
        }
        WeightFn::Boxcar(h) => radii.iter().map(|&r| f64::from(u8::from(r <= h))).collect(),
        WeightFn::Theory { r_tilde } => {
            let n = radii.iter().filter(|&&r| r <= r_tilde).count();
            let w = if n > 0 { 1.0 / n as f64 } else { 0.0 };
            radii.iter().map(|&r| if r <= r_tilde { w } else { 0.0 }).collect()
        }
    };

    let mut r_used = Vec::new();
    let mut y_used = Vec::new();
    let mut w_used = Vec::new();
    for i in 0..in_scope {
        if weights[i] > 0.0 {
            r_used.push(radii[i]);
            y_used.push(f64::from(labels[i]));
            w_used.push(weights[i]);
        }
    }
    let m = r_used.len();
    if m == 0 {
        let radius = match spec.scope {
            Scope::Radius(h) => h,
            _ => radii.last().copied().unwrap_or(0.0),
        };
        return Err(Error::EmptyWindow { radius });
    }

    let make_map = |q: usize| match spec.basis {
        RadialBasis::Poly => FeatureMap::RadialPoly { degree: q },
        RadialBasis::Even => FeatureMap::RadialEvenPoly { order: q },
    };
    let (q, fallback) = reduce_degree(spec.degree, m, |q| make_map(q).output_dim());
    let x = make_map(q).radial_design(&r_used)?;
    let sample = WeightedSample::new(x, y_used, w_used)?;
    let (value, fit) = match spec.loss {
        LrrLoss::Squared => {
            let fit = wls_fit(&sample);
            (fit.intercept(), fit)
        }
        LrrLoss::Logistic => {
            let fit = logistic_fit(&sample, &LogisticConfig::default())?;
            (sigmoid(fit.intercept()), fit)
        }
    };
    Ok(Estimate {
        value,
        diagnostics: Diagnostics {
            used_points: m,
            converged: fit.converged,
            fallback_applied: fallback,
        },
    })
}

/// Evaluates `spec` on a precomputed profile. `data` and `query` are only
/// read by the local polynomial estimators.
pub fn estimate_with_profile(
    spec: &EstimatorSpec,
    data: &Dataset,
    profile: &NeighborProfile,
    query: &[f64],
) -> Result<Estimate> {
    match spec {
        EstimatorSpec::KernelSmoother { h } => kernel_smoother(profile, *h),
        EstimatorSpec::Knn { k } => knn(profile, *k),
        EstimatorSpec::Lpor { h, degree } => lpor(data, profile, query, *h, *degree),
        EstimatorSpec::Lpolr { h, degree } => lpolr(data, profile, query, *h, *degree),
        EstimatorSpec::Msknn {
            k_vec,
            degree,
            regression,
            loss,
        } => msknn(profile, k_vec, *degree, *regression, *loss),
        EstimatorSpec::Lrr(s) => lrr(profile, s),
    }
}

/// Profiles `query` against `data` under `metric` and evaluates `spec`.
pub fn estimate(spec: &EstimatorSpec, data: &Dataset, metric: Metric, query: &[f64]) -> Result<Estimate> {
    let prof = profile(data, metric, query)?;
    estimate_with_profile(spec, data, &prof, query)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{Covariate, LabeledPoint};

    fn prof(radii: &[f64], labels: &[u8]) -> NeighborProfile {
        NeighborProfile::from_radii(radii.to_vec(), labels.to_vec()).unwrap()
    }

    fn line_data(xs: &[f64], ys: &[u8]) -> Dataset {
        Dataset::with_fixed_dim(
            xs.iter()
                .zip(ys)
                .map(|(&x, &y)| LabeledPoint::new(Covariate::new(vec![x]).unwrap(), y).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kernel_smoother_examples() {
        assert_eq!(kernel_smoother(&prof(&[0.1, 0.2], &[1, 0]), 1.0).unwrap().value, 0.5);
        assert_eq!(kernel_smoother(&prof(&[0.1, 0.2, 5.0], &[1, 1, 0]), 1.0).unwrap().value, 1.0);
        let e = kernel_smoother(&prof(&[1.0, 2.0, 3.0], &[1, 1, 0]), 2.0).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.diagnostics.used_points, 2);
        assert!(matches!(
            kernel_smoother(&prof(&[1.0], &[1]), 0.5),
            Err(Error::EmptyWindow { .. })
        ));
        assert!(kernel_smoother(&prof(&[1.0], &[1]), 0.0).is_err());
    }

    #[test]
    fn knn_examples() {
        let p = prof(&[0.1, 0.2, 0.3, 0.4], &[1, 0, 1, 0]);
        assert_eq!(knn(&p, 3).unwrap().value, 2.0 / 3.0);
        assert_eq!(knn(&p, 1).unwrap().value, 1.0);
        assert!(knn(&p, 5).is_err());
        assert!(knn(&p, 0).is_err());
    }

    #[test]
    fn lpor_examples() {
        let data = line_data(&[-1.0, 1.0], &[0, 1]);
        let p = profile(&data, Metric::Euclidean, &[0.0]).unwrap();
        let e = lpor(&data, &p, &[0.0], 2.0, 1).unwrap();
        assert!((e.value - 0.5).abs() < 1e-12);
        assert!(!e.diagnostics.fallback_applied);

        let data = line_data(&[-0.5, 0.2, 0.4, 0.9], &[1, 1, 1, 1]);
        let p = profile(&data, Metric::Euclidean, &[0.0]).unwrap();
        let e = lpor(&data, &p, &[0.0], 1.0, 2).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lpor_falls_back_on_sparse_windows() {
        let data = line_data(&[0.1, 0.3, 2.0], &[1, 0, 0]);
        let p = profile(&data, Metric::Euclidean, &[0.0]).unwrap();
        let e = lpor(&data, &p, &[0.0], 0.5, 3).unwrap();
        assert!(e.diagnostics.fallback_applied);
        assert_eq!(e.diagnostics.used_points, 2);
        assert!(matches!(lpor(&data, &p, &[0.0], 0.05, 1), Err(Error::EmptyWindow { .. })));
    }

    #[test]
    fn lpolr_examples() {
        let data = line_data(&[-0.3, 0.1, 0.2, 0.5], &[1, 1, 1, 1]);
        let p = profile(&data, Metric::Euclidean, &[0.0]).unwrap();
        assert!(lpolr(&data, &p, &[0.0], 1.0, 1).unwrap().value > 0.99);
        let data = line_data(&[-0.3, 0.1, 0.2, 0.5], &[0, 0, 0, 0]);
        let p = profile(&data, Metric::Euclidean, &[0.0]).unwrap();
        assert!(lpolr(&data, &p, &[0.0], 1.0, 1).unwrap().value < 0.01);
        let data = line_data(&[-1.0, 1.0], &[0, 1]);
        let p = profile(&data, Metric::Euclidean, &[0.0]).unwrap();
        assert!((lpolr(&data, &p, &[0.0], 2.0, 1).unwrap().value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn msknn_linear_extrapolation() {
        // k-NN means 0.4, 0.5, 0.6 at radii 1, 2, 3 (k = 5, 10, 15)
        let mut labels = vec![0u8; 15];
        for i in [0, 1, 5, 6, 7, 10, 11, 12, 13] {
            labels[i] = 1;
        }
        let mut radii = vec![0.0; 15];
        for (i, r) in radii.iter_mut().enumerate() {
            *r = match i {
                0..=3 => 0.5,
                4 => 1.0,
                5..=8 => 1.5,
                9 => 2.0,
                10..=13 => 2.5,
                _ => 3.0,
            };
        }
        let p = prof(&radii, &labels);
        assert_eq!(knn(&p, 5).unwrap().value, 0.4);
        assert_eq!(knn(&p, 10).unwrap().value, 0.5);
        assert_eq!(knn(&p, 15).unwrap().value, 0.6);
        let e = msknn(&p, &[5, 10, 15], 1, MsknnRegression::Poly, MsknnLoss::Squared).unwrap();
        assert!((e.value - 0.3).abs() < 1e-12);

        let e = msknn(&p, &[5, 10, 15], 0, MsknnRegression::Poly, MsknnLoss::Squared).unwrap();
        assert!((e.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn msknn_constant_means() {
        let labels: Vec<u8> = (0..20).map(|i| u8::from(i % 2 == 0)).collect();
        let radii: Vec<f64> = (1..=20).map(|i| i as f64 * 0.1).collect();
        let p = prof(&radii, &labels);
        let kv = [2, 4, 6, 8];
        for (reg, loss) in [
            (MsknnRegression::Poly, MsknnLoss::Squared),
            (MsknnRegression::Logi, MsknnLoss::Logistic),
            (MsknnRegression::Logi, MsknnLoss::LogitSquared),
        ] {
            let e = msknn(&p, &kv, 2, reg, loss).unwrap();
            assert!((e.value - 0.5).abs() < 1e-8, "{reg:?} {loss:?} {}", e.value);
        }
    }

    #[test]
    fn msknn_rejects_bad_parameters() {
        let p = prof(&[0.1, 0.2, 0.3], &[1, 0, 1]);
        assert!(msknn(&p, &[1, 2], 2, MsknnRegression::Poly, MsknnLoss::Squared).is_err());
        assert!(msknn(&p, &[1, 2, 4], 1, MsknnRegression::Poly, MsknnLoss::Squared).is_err());
        assert!(msknn(&p, &[2, 1, 3], 1, MsknnRegression::Poly, MsknnLoss::Squared).is_err());
        assert!(msknn(&p, &[1, 2, 3], 1, MsknnRegression::Poly, MsknnLoss::Logistic).is_err());
    }

    #[test]
    fn logit_squared_clips_saturated_means() {
        let p = prof(&[0.1, 0.2, 0.3, 0.4], &[1, 1, 1, 1]);
        let e = msknn(&p, &[1, 2, 4], 1, MsknnRegression::Logi, MsknnLoss::LogitSquared).unwrap();
        // k = 1 clips to exactly 1/2, so only finiteness and range are fixed
        assert!(e.value.is_finite() && e.value > 0.0 && e.value < 1.0);
        let e = msknn(&p, &[2, 4], 0, MsknnRegression::Logi, MsknnLoss::LogitSquared).unwrap();
        let oracle = sigmoid((logit(0.75) + logit(0.875)) / 2.0);
        assert!((e.value - oracle).abs() < 1e-12);
    }

    #[test]
    fn lrr_examples() {
        let spec = |q, weight| LrrSpec {
            weight,
            degree: q,
            loss: LrrLoss::Squared,
            scope: Scope::All,
            basis: RadialBasis::Poly,
        };
        let p = prof(&[0.3, 0.5, 0.8, 1.1], &[1, 0, 1, 1]);
        assert!((lrr(&p, &spec(0, WeightFn::ConstantOne)).unwrap().value - 0.75).abs() < 1e-12);

        // line through (1,1), (2,1), (3,0): normal equations [3 6; 6 14]θ = [2; 3]
        let oracle = {
            let (a, b, c, d) = (3.0, 6.0, 6.0, 14.0);
            let det: f64 = a * d - b * c;
            (d * 2.0 - b * 3.0) / det
        };
        assert!((oracle - 5.0 / 3.0).abs() < 1e-15);
        let p = prof(&[1.0, 2.0, 3.0], &[1, 1, 0]);
        let e = lrr(&p, &spec(1, WeightFn::ConstantOne)).unwrap();
        assert!((e.value - oracle).abs() < 1e-12);
    }

    #[test]
    fn lrr_inverse_r_with_duplicate_query() {
        let p = prof(&[0.0, 0.5, 1.0, 1.5], &[1, 0, 0, 0]);
        let spec = LrrSpec {
            weight: WeightFn::InverseR,
            degree: 0,
            loss: LrrLoss::Squared,
            scope: Scope::All,
            basis: RadialBasis::Poly,
        };
        let e = lrr(&p, &spec).unwrap();
        assert!(e.value.is_finite());
        assert!((e.value - 1.0).abs() < 1e-9);
        let e = lrr(&p, &LrrSpec { degree: 2, loss: LrrLoss::Logistic, ..spec }).unwrap();
        assert!(e.value.is_finite());
    }

    #[test]
    fn lrr_scopes_and_fallback() {
        let p = prof(&[0.1, 0.2, 0.3, 0.9], &[1, 1, 0, 0]);
        let base = LrrSpec {
            weight: WeightFn::ConstantOne,
            degree: 2,
            loss: LrrLoss::Squared,
            scope: Scope::TopK(2),
            basis: RadialBasis::Poly,
        };
        let e = lrr(&p, &base).unwrap();
        assert!(e.diagnostics.fallback_applied);
        assert_eq!(e.diagnostics.used_points, 2);
        let e = lrr(&p, &LrrSpec { scope: Scope::Radius(0.35), ..base.clone() }).unwrap();
        assert_eq!(e.diagnostics.used_points, 3);
        assert!(!e.diagnostics.fallback_applied);
        assert!(lrr(&p, &LrrSpec { scope: Scope::Radius(0.05), ..base.clone() }).is_err());
        assert!(lrr(&p, &LrrSpec { scope: Scope::TopK(9), ..base }).is_err());
    }

    #[test]
    fn classify_threshold() {
        assert_eq!(classify_value(0.5), 1);
        assert_eq!(classify_value(0.49), 0);
        assert_eq!(classify_value(1.2), 1);
        assert_eq!(classify_value(-0.3), 0);
    }
}
