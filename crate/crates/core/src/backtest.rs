//! Monthly up/down forecasting of an index from its daily closes.
//!
//! Each calendar month becomes a variable-length covariate (its daily
//! closes), labelled 1 when the next month-end close is strictly higher.
//! Neighbourhoods use the indexing DTW distance. Hyperparameters are tuned
//! walk-forward: for test month t every candidate predicts months
//! t−V..t−1 from the pool t−N..t−V−1, the most accurate one wins (ties to
//! the smallest), and month t is then predicted from the pool t−N..t−1.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use chrono::{Datelike, NaiveDate};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{
    classify_value, knn, lrr, msknn, Estimate, LrrSpec, MsknnLoss, MsknnRegression, WeightFn,
};
use crate::metric::{idtw, Covariate, NeighborProfile};
use crate::rng::cell_rng;
use crate::theory::csv_err;

/// Daily closes with strictly increasing dates.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    rows: Vec<(NaiveDate, f64)>,
}

impl PriceSeries {
    /// Sorts by date (warning when the input was out of order) and rejects
    /// duplicate dates and nonpositive or non-finite closes.
    pub fn new(mut rows: Vec<(NaiveDate, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::domain("price series is empty"));
        }
        if let Some((d, c)) = rows.iter().find(|(_, c)| !(*c > 0.0) || !c.is_finite()) {
            return Err(Error::domain(format!("nonpositive price {c} on {d}")));
        }
        if rows.windows(2).any(|w| w[0].0 > w[1].0) {
            log::warn!("price rows were not in date order; sorting");
            rows.sort_by_key(|r| r.0);
        }
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::domain(format!("duplicate date {}", w[0].0)));
        }
        Ok(PriceSeries { rows })
    }

    pub fn rows(&self) -> &[(NaiveDate, f64)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["date", "close"]).map_err(csv_err)?;
        for (d, c) in &self.rows {
            w.write_record([d.to_string(), c.to_string()]).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reads `date,close` rows. A first line whose date does not parse is taken
/// as a header.
pub fn ingest_reader<R: Read>(input: R) -> Result<PriceSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i as u64 + 1;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields (date, close), found {}", rec.len()),
            });
        }
        let date = match NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d") {
            Ok(d) => d,
            Err(_) if line == 1 => continue,
            Err(e) => {
                return Err(Error::Parse {
                    line,
                    message: format!("bad date '{}': {e}", &rec[0]),
                })
            }
        };
        let close: f64 = rec[1].parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad close '{}'", &rec[1]),
        })?;
        if !(close > 0.0) || !close.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("nonpositive price {close}"),
            });
        }
        rows.push((date, close));
    }
    PriceSeries::new(rows)
}

pub fn ingest_csv(path: impl AsRef<Path>) -> Result<PriceSeries> {
    ingest_reader(std::fs::File::open(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthId {
    pub year: i32,
    pub month: u32,
}

impl MonthId {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::param(format!("month must be 1..=12, got {month}")));
        }
        Ok(MonthId { year, month })
    }

    fn of(date: NaiveDate) -> Self {
        MonthId {
            year: date.year(),
            month: date.month(),
        }
    }
}

impl fmt::Display for MonthId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for MonthId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("expected YYYY-MM, got '{s}'"));
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        MonthId::new(y.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?)
    }
}

/// Daily closes of one calendar month.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthBlock {
    pub month_id: MonthId,
    pub closes: Covariate,
}

impl MonthBlock {
    pub fn month_end_close(&self) -> f64 {
        *self.closes.values().last().expect("blocks are nonempty")
    }

    pub fn trading_days(&self) -> usize {
        self.closes.len()
    }
}

/// One block per calendar month that has at least one row.
pub fn segment_months(series: &PriceSeries) -> Result<Vec<MonthBlock>> {
    let mut blocks = Vec::new();
    let mut current: Option<(MonthId, Vec<f64>)> = None;
    for &(date, close) in series.rows() {
        let id = MonthId::of(date);
        match current.as_mut() {
            Some((m, closes)) if *m == id => closes.push(close),
            _ => {
                if let Some((m, closes)) = current.take() {
                    blocks.push(MonthBlock {
                        month_id: m,
                        closes: Covariate::new(closes)?,
                    });
                }
                current = Some((id, vec![close]));
            }
        }
    }
    if let Some((m, closes)) = current {
        blocks.push(MonthBlock {
            month_id: m,
            closes: Covariate::new(closes)?,
        });
    }
    Ok(blocks)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMonth {
    pub block: MonthBlock,
    /// `None` for the final month, which has no successor.
    pub label: Option<u8>,
}

/// Label i is 1 when month i+1 closes strictly above month i.
pub fn label_months(blocks: Vec<MonthBlock>) -> Result<Vec<LabeledMonth>> {
    if blocks.len() < 2 {
        return Err(Error::domain("labelling needs at least two months"));
    }
    let ends: Vec<f64> = blocks.iter().map(MonthBlock::month_end_close).collect();
    Ok(blocks
        .into_iter()
        .enumerate()
        .map(|(i, block)| LabeledMonth {
            block,
            label: ends.get(i + 1).map(|&next| u8::from(next > ends[i])),
        })
        .collect())
}

/// k_j = k1 + ⌊(j−1)(kmax−k1)/(J−1)⌋, j = 1..J.
pub fn msknn_kvec(k1: usize, kmax: usize, j: usize) -> Result<Vec<usize>> {
    if k1 == 0 || k1 >= kmax || j < 2 {
        return Err(Error::param(format!(
            "need 1 ≤ k1 < kmax and J ≥ 2, got k1={k1}, kmax={kmax}, J={j}"
        )));
    }
    Ok((0..j).map(|i| k1 + i * (kmax - k1) / (j - 1)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BacktestMethod {
    Knn,
    MsknnPoly,
    MsknnLogi,
    LrlrW1,
    LrlrWinv,
    /// Always buy.
    Buy,
    /// Fair coin per month.
    Random,
}

impl BacktestMethod {
    pub const ALL: [BacktestMethod; 7] = [
        BacktestMethod::Knn,
        BacktestMethod::MsknnPoly,
        BacktestMethod::MsknnLogi,
        BacktestMethod::LrlrW1,
        BacktestMethod::LrlrWinv,
        BacktestMethod::Buy,
        BacktestMethod::Random,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BacktestMethod::Knn => "knn",
            BacktestMethod::MsknnPoly => "msknn-poly",
            BacktestMethod::MsknnLogi => "msknn-logi",
            BacktestMethod::LrlrW1 => "lrlr-w1",
            BacktestMethod::LrlrWinv => "lrlr-winv",
            BacktestMethod::Buy => "buy",
            BacktestMethod::Random => "random",
        }
    }
}

impl fmt::Display for BacktestMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BacktestMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BacktestMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = BacktestMethod::ALL.iter().map(|m| m.name()).collect();
                Error::param(format!("unknown method '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkForwardConfig {
    pub n_train: usize,
    pub validation_window: usize,
    pub knn_grid: Vec<usize>,
    pub msknn_kmax_grid: Vec<usize>,
    pub msknn_k1: usize,
    pub msknn_j: usize,
    /// Seeds the `random` method.
    pub seed: u64,
}

impl Default for WalkForwardConfig {
    fn default() -> Self {
        WalkForwardConfig {
            n_train: 192,
            validation_window: 24,
            knn_grid: (1..=30).collect(),
            msknn_kmax_grid: vec![20, 30, 50, 80, 120],
            msknn_k1: 5,
            msknn_j: 5,
            seed: 0,
        }
    }
}

impl WalkForwardConfig {
    pub fn validate(&self) -> Result<()> {
        if self.validation_window == 0 || self.n_train <= self.validation_window {
            return Err(Error::Config(format!(
                "need 0 < validation window ({}) < training months ({})",
                self.validation_window, self.n_train
            )));
        }
        if self.knn_grid.is_empty() || self.msknn_kmax_grid.is_empty() {
            return Err(Error::Config("parameter grids must be nonempty".into()));
        }
        Ok(())
    }
}

/// Why a month's data was read while predicting a test month.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessKind {
    /// Covariate of the month being predicted (test or validation query).
    QueryCovariate,
    PoolCovariate,
    PoolLabel,
    /// Realized label of a validation month, read to score a candidate.
    ValidationLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Access {
    pub test_month: usize,
    pub month: usize,
    pub kind: AccessKind,
}

/// Receives every read of month data made on behalf of a test month.
pub trait AccessObserver: Sync {
    fn record(&self, access: Access);
}

pub struct NoObserver;

impl AccessObserver for NoObserver {
    fn record(&self, _: Access) {}
}

/// Keeps every access; meant for tests.
#[derive(Default)]
pub struct RecordingObserver {
    accesses: Mutex<Vec<Access>>,
}

impl RecordingObserver {
    pub fn accesses(&self) -> Vec<Access> {
        self.accesses.lock().expect("observer poisoned").clone()
    }

    /// Accesses that would leak information from month t or later into the
    /// forecast for t: anything after t, and anything at t other than its
    /// own covariate.
    pub fn leaks(&self) -> Vec<Access> {
        self.accesses()
            .into_iter()
            .filter(|a| {
                a.month > a.test_month
                    || (a.month == a.test_month && a.kind != AccessKind::QueryCovariate)
            })
            .collect()
    }
}

impl AccessObserver for RecordingObserver {
    fn record(&self, access: Access) {
        self.accesses.lock().expect("observer poisoned").push(access);
    }
}

/// Reads through an observer on behalf of one test month.
struct View<'a> {
    months: &'a [LabeledMonth],
    test_month: usize,
    observer: &'a dyn AccessObserver,
}

impl View<'_> {
    fn covariate(&self, month: usize, kind: AccessKind) -> &[f64] {
        self.observer.record(Access {
            test_month: self.test_month,
            month,
            kind,
        });
        self.months[month].block.closes.values()
    }

    fn label(&self, month: usize, kind: AccessKind) -> Result<u8> {
        self.observer.record(Access {
            test_month: self.test_month,
            month,
            kind,
        });
        self.months[month]
            .label
            .ok_or_else(|| Error::Config(format!("month {month} has no label")))
    }

    /// IDTW profile of `query` against the months `pool`, ties by month order.
    fn profile(&self, query: usize, pool: std::ops::Range<usize>) -> Result<NeighborProfile> {
        let q = self.covariate(query, AccessKind::QueryCovariate);
        let mut keyed = Vec::with_capacity(pool.len());
        for m in pool {
            let r = idtw(q, self.covariate(m, AccessKind::PoolCovariate))?;
            keyed.push((r, m));
        }
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut radii = Vec::with_capacity(keyed.len());
        let mut labels = Vec::with_capacity(keyed.len());
        let mut idx = Vec::with_capacity(keyed.len());
        for (r, m) in keyed {
            radii.push(r);
            labels.push(self.label(m, AccessKind::PoolLabel)?);
            idx.push(m);
        }
        NeighborProfile::from_sorted(radii, labels, idx)
    }
}

fn estimate_for(
    method: BacktestMethod,
    param: Option<usize>,
    config: &WalkForwardConfig,
    profile: &NeighborProfile,
) -> Result<Estimate> {
    let kvec = |p: Option<usize>| msknn_kvec(config.msknn_k1, p.unwrap_or(0), config.msknn_j);
    match method {
        BacktestMethod::Knn => knn(profile, param.unwrap_or(0)),
        BacktestMethod::MsknnPoly => msknn(
            profile,
            &kvec(param)?,
            2,
            MsknnRegression::Poly,
            MsknnLoss::Squared,
        ),
        BacktestMethod::MsknnLogi => msknn(
            profile,
            &kvec(param)?,
            2,
            MsknnRegression::Logi,
            MsknnLoss::LogitSquared,
        ),
        BacktestMethod::LrlrW1 => lrr(profile, &LrrSpec::lrlr(WeightFn::ConstantOne)),
        BacktestMethod::LrlrWinv => lrr(profile, &LrrSpec::lrlr(WeightFn::InverseR)),
        BacktestMethod::Buy | BacktestMethod::Random => {
            unreachable!("profile-free methods are handled by the caller")
        }
    }
}

fn candidates(method: BacktestMethod, config: &WalkForwardConfig) -> Vec<usize> {
    match method {
        BacktestMethod::Knn => config.knn_grid.clone(),
        BacktestMethod::MsknnPoly | BacktestMethod::MsknnLogi => config.msknn_kmax_grid.clone(),
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    pub month: MonthId,
    pub prediction: u8,
    pub label: u8,
    pub chosen_param: Option<usize>,
    pub monthly_return: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestLedger {
    pub method: BacktestMethod,
    pub rows: Vec<LedgerRow>,
}

impl BacktestLedger {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["month", "prediction", "label", "chosen_param", "return", "cumulative"])
            .map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.month.to_string(),
                r.prediction.to_string(),
                r.label.to_string(),
                r.chosen_param.map(|p| p.to_string()).unwrap_or_default(),
                r.monthly_return.to_string(),
                r.cumulative.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn final_cumulative(&self) -> Option<f64> {
        self.rows.last().map(|r| r.cumulative)
    }
}

/// Return of one month of virtual trading: buy gains the move, sell gains
/// its negative.
pub fn monthly_return(prediction: u8, e_t: f64, e_next: f64) -> f64 {
    let change = (e_next - e_t) / e_t;
    if prediction == 1 {
        1.0 + change
    } else {
        1.0 - change
    }
}

pub fn cumulative_return(returns: &[f64]) -> Vec<f64> {
    returns
        .iter()
        .scan(1.0, |acc, r| {
            *acc *= r;
            Some(*acc)
        })
        .collect()
}

/// Fraction of ledger months predicted correctly.
pub fn accuracy_report(ledger: &BacktestLedger) -> Result<f64> {
    if ledger.rows.is_empty() {
        return Err(Error::domain("empty ledger"));
    }
    let hits = ledger.rows.iter().filter(|r| r.prediction == r.label).count();
    Ok(hits as f64 / ledger.rows.len() as f64)
}

/// Tuned parameter (if any) and 0/1 forecast for test month `t`.
fn predict_month(
    months: &[LabeledMonth],
    t: usize,
    method: BacktestMethod,
    config: &WalkForwardConfig,
    observer: &dyn AccessObserver,
) -> Result<(Option<usize>, u8)> {
    match method {
        BacktestMethod::Buy => return Ok((None, 1)),
        BacktestMethod::Random => {
            let mut rng = cell_rng(config.seed, t as u64);
            return Ok((None, u8::from(rng.random::<bool>())));
        }
        _ => {}
    }
    let view = View {
        months,
        test_month: t,
        observer,
    };
    let v = config.validation_window;
    let first = t - config.n_train;

    let grid = candidates(method, config);
    let chosen = if grid.is_empty() {
        None
    } else {
        let mut hits = vec![0usize; grid.len()];
        let mut usable = vec![true; grid.len()];
        for s in t - v..t {
            let profile = view.profile(s, first..t - v)?;
            let truth = view.label(s, AccessKind::ValidationLabel)?;
            for (c, &param) in grid.iter().enumerate() {
                if !usable[c] {
                    continue;
                }
                match estimate_for(method, Some(param), config, &profile) {
                    Ok(e) => hits[c] += usize::from(classify_value(e.value) == truth),
                    Err(e) => {
                        log::warn!("candidate {param} unusable for month {t}: {e}");
                        usable[c] = false;
                    }
                }
            }
        }
        // argmax accuracy, smallest parameter on ties
        let mut order: Vec<usize> = (0..grid.len()).filter(|&c| usable[c]).collect();
        order.sort_by_key(|&c| (std::cmp::Reverse(hits[c]), grid[c]));
        let best = order
            .first()
            .ok_or_else(|| Error::Config(format!("no usable parameter for month {t}")))?;
        Some(grid[*best])
    };

    let profile = view.profile(t, first..t)?;
    let e = estimate_for(method, chosen, config, &profile)?;
    Ok((chosen, classify_value(e.value)))
}

/// Walk-forward forecasts for months `test_start..=test_end` (positions in
/// `months`).
pub fn walk_forward_predict(
    months: &[LabeledMonth],
    test_start: usize,
    test_end: usize,
    method: BacktestMethod,
    config: &WalkForwardConfig,
    observer: &dyn AccessObserver,
) -> Result<BacktestLedger> {
    config.validate()?;
    if test_start > test_end {
        return Err(Error::Config("test period is empty".into()));
    }
    if test_start < config.n_train {
        return Err(Error::Config(format!(
            "test start needs {} months of history, only {test_start} available",
            config.n_train
        )));
    }
    if test_end + 1 >= months.len() || months[test_end].label.is_none() {
        return Err(Error::Config(
            "test months need a following month to be labelled".into(),
        ));
    }
    let forecasts = (test_start..=test_end)
        .into_par_iter()
        .map(|t| predict_month(months, t, method, config, observer))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(forecasts.len());
    let mut cumulative = 1.0;
    for (t, (chosen_param, prediction)) in (test_start..=test_end).zip(forecasts) {
        let e_t = months[t].block.month_end_close();
        let e_next = months[t + 1].block.month_end_close();
        let r = monthly_return(prediction, e_t, e_next);
        cumulative *= r;
        rows.push(LedgerRow {
            month: months[t].block.month_id,
            prediction,
            label: months[t].label.expect("checked above"),
            chosen_param,
            monthly_return: r,
            cumulative,
        });
    }
    Ok(BacktestLedger { method, rows })
}

/// Positions of the test window. Explicit months must exist in the data.
/// The default Jan 2005 – Oct 2021 is clamped to what the data supports,
/// falling back to every month with enough history when the data does not
/// reach that period at all.
pub fn resolve_test_window(
    months: &[LabeledMonth],
    start: Option<MonthId>,
    end: Option<MonthId>,
    config: &WalkForwardConfig,
) -> Result<(usize, usize)> {
    let find = |id: MonthId| {
        months
            .iter()
            .position(|m| m.block.month_id == id)
            .ok_or_else(|| Error::Config(format!("month {id} is not in the data")))
    };
    let last_labeled = months
        .iter()
        .rposition(|m| m.label.is_some())
        .ok_or_else(|| Error::Config("no labelled months".into()))?;
    let s = match start {
        Some(id) => find(id)?,
        None => {
            let default = MonthId { year: 2005, month: 1 };
            months
                .iter()
                .position(|m| m.block.month_id >= default)
                .unwrap_or(months.len())
                .max(config.n_train)
        }
    };
    let e = match end {
        Some(id) => find(id)?,
        None => {
            let default = MonthId { year: 2021, month: 10 };
            months
                .iter()
                .rposition(|m| m.block.month_id <= default)
                .unwrap_or(0)
                .min(last_labeled)
        }
    };
    // data outside Jan 2005 – Oct 2021 altogether: use everything it allows
    let (s, e) = if start.is_none() && end.is_none() && (s > e || s >= months.len()) {
        (config.n_train, last_labeled)
    } else {
        (s, e)
    };
    if s > e || s >= months.len() {
        return Err(Error::Config(format!(
            "test window is empty ({} months available, {} needed for history)",
            months.len(),
            config.n_train
        )));
    }
    Ok((s, e))
}

/// Deterministic price fixtures for tests and demos.
pub mod fixtures {
    use super::*;
    use rand_distr::{Distribution, Normal};

    /// Geometric random walk over weekdays, `n_months` calendar months
    /// starting January 1989.
    pub fn synthetic_index(n_months: usize, seed: u64) -> PriceSeries {
        let mut rng = cell_rng(seed, 0);
        let step = Normal::<f64>::new(0.0003, 0.011).expect("valid normal");
        let mut rows = Vec::new();
        let mut price = 1000.0f64;
        let mut date = NaiveDate::from_ymd_opt(1989, 1, 1).expect("valid date");
        let start = MonthId::of(date);
        let months_from_start =
            |d: NaiveDate| ((d.year() - start.year) * 12) as usize + d.month0() as usize;
        while months_from_start(date) < n_months {
            if date.weekday().number_from_monday() <= 5 {
                price *= step.sample(&mut rng).exp();
                rows.push((date, price));
            }
            date = date.succ_opt().expect("date in range");
        }
        PriceSeries::new(rows).expect("fixture rows are valid")
    }

    /// Months alternate between a falling path (100 → 95, next month-end
    /// higher, label 1) and a rising one (95 → 105, label 0).
    pub fn alternating(n_months: usize) -> PriceSeries {
        let mut rows = Vec::new();
        let mut date = NaiveDate::from_ymd_opt(1990, 1, 1).expect("valid date");
        for i in 0..n_months {
            let (from, to) = if i % 2 == 0 { (100.0, 95.0) } else { (95.0, 105.0) };
            let month = date.month();
            let mut days = Vec::new();
            while date.month() == month {
                if date.weekday().number_from_monday() <= 5 {
                    days.push(date);
                }
                date = date.succ_opt().expect("date in range");
            }
            let n = days.len();
            for (j, d) in days.into_iter().enumerate() {
                let frac = j as f64 / (n - 1) as f64;
                rows.push((d, from + (to - from) * frac));
            }
        }
        PriceSeries::new(rows).expect("fixture rows are valid")
    }
}
