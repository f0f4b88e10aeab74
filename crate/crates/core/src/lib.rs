//! Bias-corrected local estimators of label probability for binary
//! classification, together with the experiment drivers built on them.
//!
//! * [`metric`]: covariates, datasets, Euclidean / DTW / indexing-DTW
//!   distances and query-relative neighbour ordering.
//! * [`localfit`]: weighted least squares and weighted logistic regression
//!   over polynomial feature maps.
//! * [`estimators`]: kernel smoother, k-NN, local polynomial (logistic)
//!   regression, multiscale k-NN and local radial (logistic) regression.
//! * [`theory`]: closed-form weights of radial regression, the ζ statistic
//!   and Monte-Carlo convergence-rate experiments.
//! * [`synth`]: synthetic bimodal benchmark.
//! * [`backtest`]: month segmentation and walk-forward evaluation of monthly
//!   index direction forecasts.

pub mod backtest;
pub mod error;
pub mod estimators;
pub mod localfit;
pub mod metric;
pub mod synth;
pub mod theory;

mod rng;

pub use error::{Error, Result};
pub use estimators::{classify, Estimate, EstimatorSpec};
pub use metric::{Covariate, Dataset, LabeledPoint, Metric, NeighborProfile};
