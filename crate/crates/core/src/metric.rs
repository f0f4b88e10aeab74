//! Covariates, labelled datasets, distance functionals and the query-relative
//! neighbour ordering every estimator consumes.
//!
//! Three metrics are provided: Euclidean (fixed dimension), dynamic time
//! warping (variable length) and indexing DTW, which rescales each series by
//! its first element before warping so that series at different price levels
//! compare by shape alone.

use crate::error::{Error, Result};

/// A covariate vector. Entries are finite and there is at least one of them;
/// lengths may differ between covariates when a warping metric is used.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariate(Vec<f64>);

impl Covariate {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("covariate must have at least one entry"));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("covariate entry {pos} is not finite")));
        }
        Ok(Covariate(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for Covariate {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Covariate::new(values)
    }
}

impl AsRef<[f64]> for Covariate {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A covariate paired with a binary label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub x: Covariate,
    y: u8,
}

impl LabeledPoint {
    pub fn new(x: Covariate, y: u8) -> Result<Self> {
        if y > 1 {
            return Err(Error::domain(format!("label must be 0 or 1, got {y}")));
        }
        Ok(LabeledPoint { x, y })
    }

    pub fn label(&self) -> u8 {
        self.y
    }
}

/// Immutable, nonempty collection of labelled points.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<LabeledPoint>,
}

impl Dataset {
    pub fn new(points: Vec<LabeledPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("dataset must be nonempty"));
        }
        Ok(Dataset { points })
    }

    /// Builds a dataset whose covariates all share one dimension, as required
    /// by the Euclidean metric and the multivariate local fits.
    pub fn with_fixed_dim(points: Vec<LabeledPoint>) -> Result<Self> {
        let data = Dataset::new(points)?;
        let d = data.points[0].x.len();
        if let Some(p) = data.points.iter().find(|p| p.x.len() != d) {
            return Err(Error::Dimension {
                expected: d,
                found: p.x.len(),
            });
        }
        Ok(data)
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Common covariate dimension, or `None` when lengths vary.
    pub fn dim(&self) -> Option<usize> {
        let d = self.points[0].x.len();
        self.points.iter().all(|p| p.x.len() == d).then_some(d)
    }
}

/// Distance functional between two covariates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    Dtw,
    Idtw,
}

impl Metric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        match self {
            Metric::Euclidean => euclidean(a, b),
            Metric::Dtw => dtw(a, b),
            Metric::Idtw => idtw(a, b),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "dtw" => Ok(Metric::Dtw),
            "idtw" => Ok(Metric::Idtw),
            other => Err(Error::param(format!("unknown metric `{other}`"))),
        }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Dynamic time warping distance: squared local cost accumulated along the
/// cheapest monotone alignment (steps ↑, ←, ↖; no window), with a single
/// square root at the end.
pub fn dtw(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("dtw requires nonempty series"));
    }
    let m = b.len();
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut curr = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for &ai in a {
        curr[0] = f64::INFINITY;
        for j in 1..=m {
            let diff = ai - b[j - 1];
            let best = prev[j].min(curr[j - 1]).min(prev[j - 1]);
            curr[j] = diff * diff + best;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    Ok(prev[m].sqrt())
}

/// Indexing DTW: both series are divided by their first element before
/// warping.
pub fn idtw(a: &[f64], b: &[f64]) -> Result<f64> {
    let ra = rescale_by_first(a)?;
    let rb = rescale_by_first(b)?;
    dtw(&ra, &rb)
}

fn rescale_by_first(x: &[f64]) -> Result<Vec<f64>> {
    let first = *x
        .first()
        .ok_or_else(|| Error::domain("idtw requires nonempty series"))?;
    if first == 0.0 {
        return Err(Error::domain("idtw undefined: first element is zero"));
    }
    Ok(x.iter().map(|v| v / first).collect())
}

/// Training points ordered by distance to a query: `radii` is nondecreasing,
/// `labels[i]` belongs to the point at `radii[i]`, and `source_indices` maps
/// back into the dataset. Ties keep ascending dataset order.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborProfile {
    radii: Vec<f64>,
    labels: Vec<u8>,
    source_indices: Vec<usize>,
}

impl NeighborProfile {
    /// Assembles a profile from already sorted parts.
    pub fn from_sorted(radii: Vec<f64>, labels: Vec<u8>, source_indices: Vec<usize>) -> Result<Self> {
        if radii.len() != labels.len() {
            return Err(Error::Dimension {
                expected: radii.len(),
                found: labels.len(),
            });
        }
        if source_indices.len() != radii.len() {
            return Err(Error::Dimension {
                expected: radii.len(),
                found: source_indices.len(),
            });
        }
        if radii.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::domain("radii must be finite and nonnegative"));
        }
        if radii.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("radii must be nondecreasing"));
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(Error::domain("labels must be 0 or 1"));
        }
        Ok(NeighborProfile {
            radii,
            labels,
            source_indices,
        })
    }

    /// Convenience constructor for sorted radii with labels; source indices
    /// default to `0..n`.
    pub fn from_radii(radii: Vec<f64>, labels: Vec<u8>) -> Result<Self> {
        let idx = (0..radii.len()).collect();
        NeighborProfile::from_sorted(radii, labels, idx)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn source_indices(&self) -> &[usize] {
        &self.source_indices
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// The same profile with every label complemented.
    pub fn flipped(&self) -> NeighborProfile {
        NeighborProfile {
            radii: self.radii.clone(),
            labels: self.labels.iter().map(|y| 1 - y).collect(),
            source_indices: self.source_indices.clone(),
        }
    }
}

/// Orders the dataset by `metric` distance to `query`.
pub fn profile(data: &Dataset, metric: Metric, query: &[f64]) -> Result<NeighborProfile> {
    let mut keyed = data
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| metric.distance(query, p.x.values()).map(|r| (r, i)))
        .collect::<Result<Vec<_>>>()?;
    // stable: equal radii stay in index order
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let labels = keyed.iter().map(|&(_, i)| data.points()[i].label()).collect();
    let (radii, source_indices) = keyed.into_iter().unzip();
    Ok(NeighborProfile {
        radii,
        labels,
        source_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(x: Vec<f64>, y: u8) -> LabeledPoint {
        LabeledPoint::new(Covariate::new(x).unwrap(), y).unwrap()
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(euclidean(&[0.0, 0.0, 0.0], &[1.0, 2.0, 2.0]).unwrap(), 3.0);
        assert_eq!(euclidean(&[1.0], &[4.0]).unwrap(), 3.0);
        assert!(matches!(
            euclidean(&[1.0], &[1.0, 2.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn dtw_examples() {
        let x = [0.3, -1.2, 4.0, 2.5];
        assert_eq!(dtw(&x, &x).unwrap(), 0.0);
        assert_eq!(dtw(&[1.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert_eq!(dtw(&[0.0, 0.0], &[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!(dtw(&[], &[1.0]).is_err());
    }

    #[test]
    fn idtw_examples() {
        assert_eq!(idtw(&[2.0, 4.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(idtw(&[1.0, 3.0], &[2.0, 4.0, 6.0]).unwrap(), 1.0);
        let x = [3.0, 3.3, 2.9, 3.6];
        let scaled: Vec<f64> = x.iter().map(|v| v * 7.5).collect();
        assert!(idtw(&scaled, &x).unwrap() < 1e-12);
        assert!(matches!(idtw(&[0.0, 1.0], &[1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn profile_sorts_and_breaks_ties_by_index() {
        let data = Dataset::with_fixed_dim(vec![
            point(vec![3.0], 0),
            point(vec![1.0], 1),
            point(vec![2.0], 0),
        ])
        .unwrap();
        let p = profile(&data, Metric::Euclidean, &[0.0]).unwrap();
        assert_eq!(p.radii(), &[1.0, 2.0, 3.0]);
        assert_eq!(p.source_indices(), &[1, 2, 0]);
        assert_eq!(p.labels(), &[1, 0, 0]);

        let data = Dataset::with_fixed_dim(vec![point(vec![1.0], 1), point(vec![-1.0], 0)]).unwrap();
        let p = profile(&data, Metric::Euclidean, &[0.0]).unwrap();
        assert_eq!(p.radii(), &[1.0, 1.0]);
        assert_eq!(p.source_indices(), &[0, 1]);
    }

    #[test]
    fn profile_variable_length_idtw() {
        let data = Dataset::new(vec![point(vec![1.0, 2.0], 1), point(vec![1.0, 3.0], 0)]).unwrap();
        assert_eq!(data.dim(), Some(2));
        let p = profile(&data, Metric::Idtw, &[2.0, 4.0]).unwrap();
        assert_eq!(p.radii()[0], 0.0);
        assert_eq!(p.radii()[1], dtw(&[1.0, 2.0], &[1.0, 3.0]).unwrap());
    }

    #[test]
    fn euclidean_profile_rejects_ragged_data() {
        let data = Dataset::new(vec![point(vec![1.0, 2.0], 1), point(vec![1.0], 0)]).unwrap();
        assert!(profile(&data, Metric::Euclidean, &[0.0, 0.0]).is_err());
        assert!(Dataset::with_fixed_dim(data.points().to_vec()).is_err());
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(Covariate::new(vec![]).is_err());
        assert!(Covariate::new(vec![f64::NAN]).is_err());
        assert!(LabeledPoint::new(Covariate::new(vec![1.0]).unwrap(), 2).is_err());
        assert!(Dataset::new(vec![]).is_err());
        assert!(NeighborProfile::from_radii(vec![2.0, 1.0], vec![0, 1]).is_err());
    }
}
