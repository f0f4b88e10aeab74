//! Theory-mode radial regression: uniform weights on a ball of radius r̃,
//! an even-degree radial basis, the ζ statistic and the closed-form weights
//! ρ that turn the fit into a weighted label average.
//!
//! Also hosts two Monte-Carlo drivers: the risk-versus-n rate experiment
//! and the concentration of ζ/N for points uniform in a ball.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{lrr, LrrLoss, LrrSpec, RadialBasis, Scope, WeightFn};
use crate::metric::NeighborProfile;
use crate::rng::cell_rng;

/// Relative singular-value cutoff for the projector onto the radial design.
const RANK_TOL: f64 = 1e-12;
/// N − ζ below this fraction of N counts as event failure.
const DEGENERACY_TOL: f64 = 1e-9;

/// Largest integer strictly below `x`, so `strict_floor(3.0) == 2`.
/// Returns 0 for `x ≤ 1` (and for non-finite input).
pub fn strict_floor(x: f64) -> usize {
    if !x.is_finite() || x <= 1.0 {
        return 0;
    }
    (x.ceil() - 1.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryConfig {
    pub beta: f64,
    pub d: usize,
    pub r_tilde: f64,
    pub omega: usize,
    pub phi: f64,
}

impl TheoryConfig {
    pub fn new(beta: f64, d: usize, r_tilde: f64, omega: usize, phi: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::param(format!("beta must be positive, got {beta}")));
        }
        if d == 0 {
            return Err(Error::param("dimension must be at least 1"));
        }
        if !(r_tilde > 0.0) || !r_tilde.is_finite() {
            return Err(Error::param(format!("r_tilde must be positive, got {r_tilde}")));
        }
        if omega == 0 {
            return Err(Error::param("omega must be at least 1 in theory mode"));
        }
        if !(phi > 0.0 && phi < 1.0) {
            return Err(Error::param(format!("phi must lie in (0, 1), got {phi}")));
        }
        Ok(TheoryConfig {
            beta,
            d,
            r_tilde,
            omega,
            phi,
        })
    }

    /// ω = strict_floor(β/2); fails for β ≤ 2.
    pub fn from_beta(beta: f64, d: usize, r_tilde: f64, phi: f64) -> Result<Self> {
        TheoryConfig::new(beta, d, r_tilde, strict_floor(beta / 2.0), phi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignState {
    pub n: usize,
    /// N×ω, entries r_i^{2c} for c = 1..ω
    pub r_matrix: DMatrix<f64>,
    /// `None` when N < ω
    pub zeta: Option<f64>,
    /// Empty unless the event holds.
    pub rho: Vec<f64>,
    pub event_holds: bool,
    pub rank_deficient: bool,
}

/// Columns r^{c·step}, c = 1..ω (step 2 for the theory basis).
fn power_columns(radii: &[f64], omega: usize, step: i32) -> DMatrix<f64> {
    DMatrix::from_fn(radii.len(), omega, |i, c| radii[i].powi(step * (c as i32 + 1)))
}

/// Orthonormal basis of the column span, via thin SVD.
fn column_basis(m: &DMatrix<f64>) -> (DMatrix<f64>, bool) {
    let (n, p) = m.shape();
    if n == 0 || p == 0 {
        return (DMatrix::zeros(n, 0), p > 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| smax > 0.0 && svd.singular_values[k] > RANK_TOL * smax)
        .collect();
    let basis = DMatrix::from_fn(n, keep.len(), |i, j| u[(i, keep[j])]);
    (basis, keep.len() < p)
}

/// ζ = ⟨1, P1⟩ and P1 for the projector onto the span of `m`.
fn zeta_of(m: &DMatrix<f64>) -> (f64, DVector<f64>, bool) {
    let (q, deficient) = column_basis(m);
    let ones = DVector::from_element(m.nrows(), 1.0);
    let coef = q.tr_mul(&ones);
    let p1 = &q * &coef;
    (coef.norm_squared(), p1, deficient)
}

pub fn design_state(profile: &NeighborProfile, config: &TheoryConfig) -> DesignState {
    let n = profile.radii().partition_point(|&r| r <= config.r_tilde);
    let radii = &profile.radii()[..n];
    let r_matrix = power_columns(radii, config.omega, 2);
    if n < config.omega {
        return DesignState {
            n,
            r_matrix,
            zeta: None,
            rho: Vec::new(),
            event_holds: false,
            rank_deficient: false,
        };
    }
    let (zeta, p1, rank_deficient) = zeta_of(&r_matrix);
    let nf = n as f64;
    let event_holds =
        n > config.omega && zeta <= config.phi * nf && nf - zeta >= DEGENERACY_TOL * nf;
    let rho = if event_holds {
        (0..n).map(|i| (1.0 - p1[i]) / (nf - zeta)).collect()
    } else {
        Vec::new()
    };
    DesignState {
        n,
        r_matrix,
        zeta: Some(zeta),
        rho,
        event_holds,
        rank_deficient,
    }
}

/// ⟨ρ, y⟩ on the event, 0 off it.
pub fn lrr_closed_form(state: &DesignState, labels: &[u8]) -> Result<f64> {
    if labels.len() != state.n {
        return Err(Error::Dimension {
            expected: state.n,
            found: labels.len(),
        });
    }
    if !state.event_holds {
        return Ok(0.0);
    }
    Ok(state
        .rho
        .iter()
        .zip(labels)
        .map(|(r, &y)| r * f64::from(y))
        .sum())
}

/// Theory-mode LRR through the generic solver: even basis of order ω,
/// weights 1/N on r ≤ r̃, squared loss. 0 when the event fails.
pub fn theory_lrr(profile: &NeighborProfile, config: &TheoryConfig) -> Result<f64> {
    let state = design_state(profile, config);
    if !state.event_holds {
        return Ok(0.0);
    }
    let spec = LrrSpec {
        weight: WeightFn::Theory {
            r_tilde: config.r_tilde,
        },
        degree: config.omega,
        loss: LrrLoss::Squared,
        scope: Scope::Radius(config.r_tilde),
        basis: RadialBasis::Even,
    };
    Ok(lrr(profile, &spec)?.value)
}

/// E(r^k) = d/(d+k)·r̃^k for r the distance of a uniform point in the
/// d-ball of radius r̃ to its centre.
pub fn moment_check(d: usize, k: u32, r_tilde: f64) -> f64 {
    d as f64 / (d as f64 + f64::from(k)) * r_tilde.powi(k as i32)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example1Constants {
    pub rho_star: f64,
    pub phi: f64,
}

pub fn example1_constants(d: usize) -> Example1Constants {
    let s = ((d + 1) * (d + 1)) as f64;
    Example1Constants {
        rho_star: 1.0 - 1.0 / s,
        phi: 1.0 - 1.0 / (2.0 * s),
    }
}

/// 0.5 + 0.3·exp(−‖x‖²), a smooth bump centred on the origin.
pub fn default_eta(x: &[f64]) -> f64 {
    0.5 + 0.3 * (-x.iter().map(|v| v * v).sum::<f64>()).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateConfig {
    pub beta: f64,
    pub d: usize,
    pub omega: usize,
    pub phi: f64,
    /// Half-width of the sampling cube centred on the origin.
    pub half_width: f64,
    pub query: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

impl RateConfig {
    /// Defaults: ω = max(1, strict_floor(β/2)), φ from the uniform-ball
    /// constants, cube [−1, 1]^d, query at the origin, 200 reps.
    pub fn new(beta: f64, d: usize, sample_sizes: Vec<usize>, seed: u64) -> Self {
        RateConfig {
            beta,
            d,
            omega: strict_floor(beta / 2.0).max(1),
            phi: example1_constants(d).phi,
            half_width: 1.0,
            query: vec![0.0; d],
            sample_sizes,
            reps: 200,
            seed,
        }
    }

    pub fn r_tilde(&self, n: usize) -> f64 {
        (n as f64).powf(-1.0 / (self.d as f64 + 2.0 * self.beta))
    }

    pub fn theoretical_slope(&self) -> f64 {
        -2.0 * self.beta / (self.d as f64 + 2.0 * self.beta)
    }

    fn validate(&self) -> Result<()> {
        if self.sample_sizes.len() < 3 {
            return Err(Error::param("rate experiment needs at least 3 sample sizes"));
        }
        if self.sample_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("sample sizes must be strictly increasing"));
        }
        if self.reps < 30 {
            return Err(Error::param(format!("reps must be at least 30, got {}", self.reps)));
        }
        if self.query.len() != self.d {
            return Err(Error::Dimension {
                expected: self.d,
                found: self.query.len(),
            });
        }
        if !(self.half_width > 0.0) {
            return Err(Error::param("half_width must be positive"));
        }
        // every ball must fit inside the cube
        let slack = self
            .query
            .iter()
            .map(|q| self.half_width - q.abs())
            .fold(f64::INFINITY, f64::min);
        let r0 = self.r_tilde(self.sample_sizes[0]);
        if r0 > slack {
            return Err(Error::param(format!(
                "ball of radius {r0} around the query leaves the sampling cube"
            )));
        }
        TheoryConfig::new(self.beta, self.d, r0, self.omega, self.phi)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub sample_sizes: Vec<usize>,
    pub r_tildes: Vec<f64>,
    pub risks: Vec<f64>,
    pub risk_se: Vec<f64>,
    pub event_failures: Vec<usize>,
    pub reps: usize,
    /// NaN when fewer than two sizes are usable.
    pub fitted_slope: f64,
    pub theoretical_slope: f64,
}

impl RateReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "risk_mean", "risk_se"]).map_err(csv_err)?;
        for i in 0..self.sample_sizes.len() {
            w.write_record([
                self.sample_sizes[i].to_string(),
                self.risks[i].to_string(),
                self.risk_se[i].to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv: {other:?}")),
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// OLS slope of y on x.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// One replicate: squared error of the theory estimator at the query, and
/// whether the event held.
fn rate_cell<F>(cfg: &RateConfig, eta: &F, n: usize, cell: u64) -> Result<(f64, bool)>
where
    F: Fn(&[f64]) -> f64,
{
    let mut rng = cell_rng(cfg.seed, cell);
    let r_tilde = cfg.r_tilde(n);
    let mut x = vec![0.0; cfg.d];
    let mut inside: Vec<(f64, u8)> = Vec::new();
    for _ in 0..n {
        for v in x.iter_mut() {
            *v = rng.random_range(-cfg.half_width..cfg.half_width);
        }
        let r = x
            .iter()
            .zip(&cfg.query)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        // labels outside the ball carry zero weight; skipping them changes
        // nothing but the draw count
        if r <= r_tilde {
            let y = u8::from(rng.random::<f64>() < eta(&x));
            inside.push((r, y));
        }
    }
    inside.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (radii, labels): (Vec<f64>, Vec<u8>) = inside.into_iter().unzip();
    let profile = NeighborProfile::from_radii(radii, labels)?;
    let config = TheoryConfig::new(cfg.beta, cfg.d, r_tilde, cfg.omega, cfg.phi)?;
    let holds = design_state(&profile, &config).event_holds;
    let est = theory_lrr(&profile, &config)?;
    let err = eta(&cfg.query) - est;
    Ok((err * err, holds))
}

/// Monte-Carlo risk E[(η(x*) − η̂)²] of the theory estimator for each n.
pub fn rate_experiment<F>(cfg: &RateConfig, eta: F) -> Result<RateReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    let reps = cfg.reps;
    let cells: Vec<(usize, usize)> = (0..cfg.sample_sizes.len())
        .flat_map(|i| (0..reps).map(move |r| (i, r)))
        .collect();
    let outcomes = cells
        .par_iter()
        .map(|&(i, r)| rate_cell(cfg, &eta, cfg.sample_sizes[i], (i * reps + r) as u64))
        .collect::<Result<Vec<_>>>()?;

    let mut risks = Vec::new();
    let mut risk_se = Vec::new();
    let mut event_failures = Vec::new();
    let mut log_n = Vec::new();
    let mut log_risk = Vec::new();
    for (i, &n) in cfg.sample_sizes.iter().enumerate() {
        let chunk = &outcomes[i * reps..(i + 1) * reps];
        let errs: Vec<f64> = chunk.iter().map(|c| c.0).collect();
        let fails = chunk.iter().filter(|c| !c.1).count();
        let (m, sd) = mean_sd(&errs);
        risks.push(m);
        risk_se.push(sd / (reps as f64).sqrt());
        event_failures.push(fails);
        if fails == reps {
            log::warn!("event failed in every replicate at n = {n}; excluded from slope");
        } else if m > 0.0 {
            log_n.push((n as f64).ln());
            log_risk.push(m.ln());
        }
    }
    let fitted_slope = if log_n.len() >= 2 {
        ols_slope(&log_n, &log_risk)
    } else {
        f64::NAN
    };
    Ok(RateReport {
        sample_sizes: cfg.sample_sizes.clone(),
        r_tildes: cfg.sample_sizes.iter().map(|&n| cfg.r_tilde(n)).collect(),
        risks,
        risk_se,
        event_failures,
        reps,
        fitted_slope,
        theoretical_slope: cfg.theoretical_slope(),
    })
}

/// Radial design used for ζ in the concentration experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaBasis {
    /// single column r; the limit of ζ/N is 1 − 1/(d+1)²
    Linear,
    /// single column r², as in the theory design; limit 1 − 4/(d+2)²
    Even,
}

impl std::str::FromStr for ZetaBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ZetaBasis::Linear),
            "even" => Ok(ZetaBasis::Even),
            _ => Err(Error::param(format!("unknown zeta basis '{s}' (linear, even)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaRow {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaTable {
    pub rows: Vec<ZetaRow>,
}

impl ZetaTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["N", "zeta_over_N_mean", "zeta_over_N_sd"])
            .map_err(csv_err)?;
        for row in &self.rows {
            w.write_record([row.n.to_string(), row.mean.to_string(), row.sd.to_string()])
                .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Distance to the centre of a uniform point in the d-ball of radius r̃,
/// drawn by inverting P(r ≤ s) = (s/r̃)^d.
fn ball_radius<R: Rng>(rng: &mut R, d: usize, r_tilde: f64) -> f64 {
    r_tilde * rng.random::<f64>().powf(1.0 / d as f64)
}

/// ζ/N for N points uniform in a d-ball, ω = 1.
pub fn zeta_ratio(radii: &[f64], basis: ZetaBasis) -> f64 {
    let step = match basis {
        ZetaBasis::Linear => 1,
        ZetaBasis::Even => 2,
    };
    let m = power_columns(radii, 1, step);
    zeta_of(&m).0 / radii.len() as f64
}

pub fn zeta_concentration(
    d: usize,
    r_tilde: f64,
    n_values: &[usize],
    reps: usize,
    seed: u64,
    basis: ZetaBasis,
) -> Result<ZetaTable> {
    if d == 0 {
        return Err(Error::param("dimension must be at least 1"));
    }
    if !(r_tilde > 0.0) {
        return Err(Error::param(format!("r_tilde must be positive, got {r_tilde}")));
    }
    if reps == 0 || n_values.is_empty() || n_values.contains(&0) {
        return Err(Error::param("need reps ≥ 1 and every N ≥ 1"));
    }
    let cells: Vec<(usize, usize)> = (0..n_values.len())
        .flat_map(|i| (0..reps).map(move |r| (i, r)))
        .collect();
    let ratios: Vec<f64> = cells
        .par_iter()
        .map(|&(i, r)| {
            let mut rng = cell_rng(seed, (i * reps + r) as u64);
            let radii: Vec<f64> = (0..n_values[i])
                .map(|_| ball_radius(&mut rng, d, r_tilde))
                .collect();
            zeta_ratio(&radii, basis)
        })
        .collect();
    let rows = n_values
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let (mean, sd) = mean_sd(&ratios[i * reps..(i + 1) * reps]);
            ZetaRow { n, mean, sd }
        })
        .collect();
    Ok(ZetaTable { rows })
}
