//! Weighted least squares and weighted logistic maximum likelihood over
//! polynomial feature maps.
//!
//! Coefficients are always reported with the constant term first, so that the
//! value of a fitted local model at the query (offset zero or radius zero) is
//! `theta[0]`.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Polynomial basis used by the local fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureMap {
    /// All monomials of total degree ≤ `degree` in `dim` variables.
    MultivariatePoly { degree: usize, dim: usize },
    /// 1 and the powers x_j^e, e = 1..=degree, of each coordinate; no
    /// interaction terms.
    AdditivePoly { degree: usize, dim: usize },
    /// 1, r, r², …, r^degree.
    RadialPoly { degree: usize },
    /// 1, r², r⁴, …, r^(2·order).
    RadialEvenPoly { order: usize },
}

impl FeatureMap {
    pub fn output_dim(&self) -> usize {
        match *self {
            FeatureMap::MultivariatePoly { degree, dim } => binomial(dim + degree, degree),
            FeatureMap::AdditivePoly { degree, dim } => 1 + degree * dim,
            FeatureMap::RadialPoly { degree } => degree + 1,
            FeatureMap::RadialEvenPoly { order } => order + 1,
        }
    }

    /// Expected input length: `dim` for the multivariate maps, 1 for radial maps.
    pub fn input_dim(&self) -> usize {
        match *self {
            FeatureMap::MultivariatePoly { dim, .. } | FeatureMap::AdditivePoly { dim, .. } => dim,
            _ => 1,
        }
    }

    /// Basis values at `input` (a point for the multivariate map, a
    /// one-element slice holding the radius otherwise).
    pub fn expand(&self, input: &[f64]) -> Result<Vec<f64>> {
        if input.len() != self.input_dim() {
            return Err(Error::Dimension {
                expected: self.input_dim(),
                found: input.len(),
            });
        }
        Ok(match *self {
            FeatureMap::MultivariatePoly { degree, dim } => {
                let exps = monomial_exponents(dim, degree);
                exps.iter().map(|e| monomial(input, e)).collect()
            }
            FeatureMap::AdditivePoly { degree, .. } => {
                let mut v = vec![1.0];
                for e in 1..=degree as i32 {
                    v.extend(input.iter().map(|x| x.powi(e)));
                }
                v
            }
            FeatureMap::RadialPoly { degree } => radial_powers(input[0], degree, 1),
            FeatureMap::RadialEvenPoly { order } => radial_powers(input[0], order, 2),
        })
    }

    /// Stacks the basis values of many inputs into a design matrix.
    pub fn design<'a, I>(&self, inputs: I) -> Result<DMatrix<f64>>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let p = self.output_dim();
        let mut data = Vec::new();
        let mut rows = 0;
        match *self {
            FeatureMap::MultivariatePoly { degree, dim } => {
                let exps = monomial_exponents(dim, degree);
                for x in inputs {
                    if x.len() != dim {
                        return Err(Error::Dimension {
                            expected: dim,
                            found: x.len(),
                        });
                    }
                    data.extend(exps.iter().map(|e| monomial(x, e)));
                    rows += 1;
                }
            }
            _ => {
                for x in inputs {
                    data.extend(self.expand(x)?);
                    rows += 1;
                }
            }
        }
        Ok(DMatrix::from_row_slice(rows, p, &data))
    }

    /// Design matrix for a list of radii under a radial map.
    pub fn radial_design(&self, radii: &[f64]) -> Result<DMatrix<f64>> {
        self.design(radii.iter().map(std::slice::from_ref))
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn radial_powers(r: f64, count: usize, step: i32) -> Vec<f64> {
    (0..=count as i32).map(|c| r.powi(c * step)).collect()
}

fn monomial(x: &[f64], exps: &[u32]) -> f64 {
    x.iter().zip(exps).map(|(v, &e)| v.powi(e as i32)).product()
}

/// Exponent vectors of every monomial with total degree ≤ `degree`, ordered
/// by total degree (constant first).
fn monomial_exponents(dim: usize, degree: usize) -> Vec<Vec<u32>> {
    fn fill(rem: usize, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = rem as u32;
            out.push(cur.clone());
            return;
        }
        for e in (0..=rem).rev() {
            cur[pos] = e as u32;
            fill(rem - e, pos + 1, cur, out);
        }
    }
    let mut out = Vec::with_capacity(binomial(dim + degree, degree));
    let mut cur = vec![0u32; dim];
    for total in 0..=degree {
        fill(total, 0, &mut cur, &mut out);
    }
    out
}

/// Basis expansion of `input` dotted with `theta`; no link function applied.
pub fn evaluate(map: &FeatureMap, theta: &[f64], input: &[f64]) -> Result<f64> {
    if theta.len() != map.output_dim() {
        return Err(Error::Dimension {
            expected: map.output_dim(),
            found: theta.len(),
        });
    }
    let basis = map.expand(input)?;
    Ok(basis.iter().zip(theta).map(|(b, t)| b * t).sum())
}

/// Design matrix, targets and nonnegative observation weights.
#[derive(Debug, Clone)]
pub struct WeightedSample {
    features: DMatrix<f64>,
    targets: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedSample {
    pub fn new(features: DMatrix<f64>, targets: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let n = features.nrows();
        for len in [targets.len(), weights.len()] {
            if len != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: len,
                });
            }
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::domain("weights must be finite and nonnegative"));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::domain("at least one weight must be positive"));
        }
        if targets.iter().any(|t| !t.is_finite()) || features.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("features and targets must be finite"));
        }
        Ok(WeightedSample {
            features,
            targets,
            weights,
        })
    }

    /// Unit weights.
    pub fn unweighted(features: DMatrix<f64>, targets: Vec<f64>) -> Result<Self> {
        let n = targets.len();
        WeightedSample::new(features, targets, vec![1.0; n])
    }

    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn positive_rows(&self) -> usize {
        self.weights.iter().filter(|&&w| w > 0.0).count()
    }

    /// Weighted Bernoulli log-likelihood minus the ridge penalty on every
    /// coefficient after the first.
    pub fn logistic_objective(&self, theta: &[f64], ridge: f64) -> f64 {
        let eta = &self.features * DVector::from_column_slice(theta);
        let ll: f64 = self
            .weights
            .iter()
            .zip(&self.targets)
            .zip(eta.iter())
            .map(|((w, y), e)| w * (y * e - softplus(*e)))
            .sum();
        ll - 0.5 * ridge * theta[1..].iter().map(|t| t * t).sum::<f64>()
    }

    /// Analytic gradient of [`WeightedSample::logistic_objective`].
    pub fn logistic_gradient(&self, theta: &[f64], ridge: f64) -> Vec<f64> {
        let eta = &self.features * DVector::from_column_slice(theta);
        let resid = DVector::from_iterator(
            eta.len(),
            self.weights
                .iter()
                .zip(&self.targets)
                .zip(eta.iter())
                .map(|((w, y), e)| w * (y - sigmoid(*e))),
        );
        let mut g = self.features.tr_mul(&resid);
        for j in 1..g.len() {
            g[j] -= ridge * theta[j];
        }
        g.iter().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Coefficients, constant term first.
    pub theta: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Set when the system was rank deficient or ill-conditioned, or when a
    /// logistic fit had to be re-run with a stronger ridge.
    pub condition_flag: bool,
}

impl FitResult {
    pub fn intercept(&self) -> f64 {
        self.theta[0]
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Relative eigenvalue cutoff below which a direction of the normal matrix is
/// treated as null.
const RANK_TOL: f64 = 1e-12;

/// Weighted least squares: minimises Σ wᵢ (yᵢ − xᵢ·θ)².
///
/// Non-constant columns are centred and scaled (weighted) before the normal
/// equations are formed and the transform is undone afterwards. A
/// rank-deficient system yields the minimum-norm solution in standardised
/// coordinates with `condition_flag` set.
pub fn wls_fit(sample: &WeightedSample) -> FitResult {
    let x = sample.features();
    let (n, p) = x.shape();
    let w = sample.weights();
    let y = sample.targets();
    let wsum: f64 = w.iter().sum();

    let is_ones = |j: usize| (0..n).all(|i| w[i] == 0.0 || x[(i, j)] == 1.0);
    let intercept = (0..p).find(|&j| is_ones(j));

    let mut center = vec![0.0; p];
    let mut scale = vec![1.0; p];
    for j in 0..p {
        if Some(j) == intercept {
            continue;
        }
        let m = if intercept.is_some() {
            (0..n).map(|i| w[i] * x[(i, j)]).sum::<f64>() / wsum
        } else {
            0.0
        };
        let ss = (0..n).map(|i| w[i] * (x[(i, j)] - m).powi(2)).sum::<f64>() / wsum;
        center[j] = m;
        scale[j] = if ss > 0.0 { ss.sqrt() } else { 1.0 };
    }

    let z = DMatrix::from_fn(n, p, |i, j| (x[(i, j)] - center[j]) / scale[j]);
    let mut normal = DMatrix::<f64>::zeros(p, p);
    let mut rhs = DVector::<f64>::zeros(p);
    for i in 0..n {
        if w[i] == 0.0 {
            continue;
        }
        let row = z.row(i);
        for a in 0..p {
            rhs[a] += w[i] * row[a] * y[i];
            for b in a..p {
                normal[(a, b)] += w[i] * row[a] * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            normal[(a, b)] = normal[(b, a)];
        }
    }

    let eig = SymmetricEigen::new(normal);
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l));
    let cutoff = RANK_TOL * lmax.max(f64::MIN_POSITIVE);
    let mut beta = DVector::<f64>::zeros(p);
    let mut rank = 0;
    for k in 0..p {
        let lambda = eig.eigenvalues[k];
        if lambda > cutoff {
            rank += 1;
            let u = eig.eigenvectors.column(k);
            beta += u * (u.dot(&rhs) / lambda);
        }
    }

    let mut theta = vec![0.0; p];
    for j in 0..p {
        theta[j] = beta[j] / scale[j];
    }
    if let Some(c) = intercept {
        let shift: f64 = (0..p).filter(|&j| j != c).map(|j| theta[j] * center[j]).sum();
        theta[c] = beta[c] - shift;
    }

    FitResult {
        converged: theta.iter().all(|t| t.is_finite()),
        theta,
        iterations: 1,
        condition_flag: rank < p || sample.positive_rows() < p,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub max_iter: usize,
    /// Convergence threshold on the gradient sup-norm.
    pub tol: f64,
    /// Ridge strength on every coefficient except the first.
    pub ridge: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            max_iter: 100,
            tol: 1e-8,
            ridge: 1e-8,
        }
    }
}

/// Ridge used on the single retry after separation is detected.
pub const SEPARATION_RIDGE: f64 = 1e-3;
const SEPARATION_NORM: f64 = 1e3;
const SEPARATION_FIT: f64 = 1e-4;
const MAX_HALVINGS: usize = 30;

/// Weighted logistic maximum likelihood by damped Newton iterations.
///
/// Targets may be fractional in [0, 1]. If the coefficient norm diverges
/// (perfect separation) the fit is repeated once with the ridge raised to
/// [`SEPARATION_RIDGE`].
pub fn logistic_fit(sample: &WeightedSample, config: &LogisticConfig) -> Result<FitResult> {
    if sample.targets().iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::domain("logistic targets must lie in [0, 1]"));
    }
    let first = newton(sample, config);
    if first.diverged && config.ridge < SEPARATION_RIDGE {
        let retry = LogisticConfig {
            ridge: SEPARATION_RIDGE,
            ..*config
        };
        let mut second = newton(sample, &retry);
        second.fit.condition_flag = true;
        second.fit.iterations += first.fit.iterations;
        return Ok(second.fit);
    }
    Ok(first.fit)
}

struct NewtonOutcome {
    fit: FitResult,
    diverged: bool,
}

fn newton(sample: &WeightedSample, config: &LogisticConfig) -> NewtonOutcome {
    let x = sample.features();
    let (n, p) = x.shape();
    let w = sample.weights();

    // Column rescaling by max |x| is a reparameterisation of the same
    // objective; the penalty is rescaled to match.
    let scale: Vec<f64> = (0..p)
        .map(|j| {
            let m = (0..n)
                .filter(|&i| w[i] > 0.0)
                .fold(0.0f64, |m, i| m.max(x[(i, j)].abs()));
            if m > 0.0 {
                m
            } else {
                1.0
            }
        })
        .collect();
    let xs = DMatrix::from_fn(n, p, |i, j| x[(i, j)] / scale[j]);
    let scaled = WeightedSample {
        features: xs,
        targets: sample.targets().to_vec(),
        weights: w.to_vec(),
    };
    let penalty: Vec<f64> = (0..p)
        .map(|j| if j == 0 { 0.0 } else { config.ridge / (scale[j] * scale[j]) })
        .collect();

    let objective = |t: &DVector<f64>| -> f64 {
        let eta = &scaled.features * t;
        let ll: f64 = (0..n)
            .map(|i| w[i] * (scaled.targets[i] * eta[i] - softplus(eta[i])))
            .sum();
        ll - 0.5 * (0..p).map(|j| penalty[j] * t[j] * t[j]).sum::<f64>()
    };

    let to_original = |t: &DVector<f64>| -> Vec<f64> { (0..p).map(|j| t[j] / scale[j]).collect() };

    let mut theta = DVector::<f64>::zeros(p);
    let mut current = objective(&theta);
    let mut converged = false;
    let mut diverged = false;
    let mut iterations = 0;

    while iterations < config.max_iter {
        let eta = &scaled.features * &theta;
        let prob: Vec<f64> = eta.iter().map(|&e| sigmoid(e)).collect();
        let resid = DVector::from_fn(n, |i, _| w[i] * (scaled.targets[i] - prob[i]));
        let mut grad = scaled.features.tr_mul(&resid);
        for j in 0..p {
            grad[j] -= penalty[j] * theta[j];
        }
        let grad_sup = (0..p).fold(0.0f64, |m, j| m.max((grad[j] / scale[j]).abs()));
        if !grad_sup.is_finite() {
            break;
        }
        if grad_sup < config.tol {
            converged = true;
            // The gradient vanishes along a separating direction long before
            // ‖θ‖ gets large; a fit that reproduces every 0/1 label is the
            // same symptom.
            diverged = (0..n)
                .filter(|&i| w[i] > 0.0)
                .all(|i| (scaled.targets[i] - prob[i]).abs() < SEPARATION_FIT);
            break;
        }
        iterations += 1;

        let mut hess = DMatrix::<f64>::zeros(p, p);
        for i in 0..n {
            let c = w[i] * prob[i] * (1.0 - prob[i]);
            if c == 0.0 {
                continue;
            }
            let row = scaled.features.row(i);
            for a in 0..p {
                for b in a..p {
                    hess[(a, b)] += c * row[a] * row[b];
                }
            }
        }
        for a in 0..p {
            hess[(a, a)] += penalty[a];
            for b in 0..a {
                hess[(a, b)] = hess[(b, a)];
            }
        }
        let step = match Cholesky::new(hess.clone()) {
            Some(ch) => ch.solve(&grad),
            None => match hess.svd(true, true).solve(&grad, 1e-12) {
                Ok(s) => s,
                Err(_) => break,
            },
        };

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let candidate = &theta + &step * t;
            let value = objective(&candidate);
            if value.is_finite() && value >= current - 1e-13 * current.abs() {
                theta = candidate;
                current = value;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        if theta.norm() > SEPARATION_NORM {
            diverged = true;
            break;
        }
    }

    NewtonOutcome {
        fit: FitResult {
            theta: to_original(&theta),
            converged,
            iterations,
            condition_flag: false,
        },
        diverged,
    }
}
