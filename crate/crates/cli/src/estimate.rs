//! `radial estimate`: one query against a CSV training set.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;

use radial_core::estimators::{
    classify_value, estimate, EstimatorSpec, LrrLoss, LrrSpec, MsknnLoss, MsknnRegression,
    RadialBasis, Scope, WeightFn,
};
use radial_core::{Covariate, Dataset, Error, LabeledPoint, Metric};

use crate::{CmdResult, Failure};

#[derive(Args)]
pub struct EstimateArgs {
    /// Rows `x_1,...,x_d,y` with y in {0,1}; rows may differ in length
    /// under dtw/idtw. `#` starts a comment line; a non-numeric first line
    /// is a header.
    #[arg(long)]
    train: PathBuf,
    /// Comma-separated query covariate.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    query: Vec<f64>,
    /// kernel | knn | lpor | lpolr | msknn-poly | msknn-logi | lrr | lrlr
    #[arg(long)]
    method: String,
    /// key=value pairs separated by commas, e.g. `k=3` or `h=0.4,q=2`.
    /// List values use colons: `kvec=10:20:30`.
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
}

pub fn run(args: EstimateArgs) -> CmdResult {
    let text = std::fs::read_to_string(&args.train)?;
    let data = parse_training(&text, args.metric)?;
    let params = Params::parse(&args.params)?;
    let spec = build_spec(&args.method, &params)?;
    params.check_all_used()?;
    let e = estimate(&spec, &data, args.metric, &args.query)?;
    let d = e.diagnostics;
    println!(
        "estimate={} class={} used_points={} converged={} fallback_applied={}",
        e.value,
        classify_value(e.value),
        d.used_points,
        d.converged,
        d.fallback_applied
    );
    Ok(())
}

fn parse_training(text: &str, metric: Metric) -> Result<Dataset, Error> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Result<Vec<f64>, _> = raw.split(',').map(|f| f.trim().parse::<f64>()).collect();
        let fields = match fields {
            Ok(f) => f,
            Err(_) if points.is_empty() && line == 1 => continue,
            Err(e) => {
                return Err(Error::Parse {
                    line,
                    message: e.to_string(),
                })
            }
        };
        let parse_err = |message: String| Error::Parse { line, message };
        if fields.len() < 2 {
            return Err(parse_err("need at least one covariate and a label".into()));
        }
        let (x, y) = fields.split_at(fields.len() - 1);
        let y = match y[0] {
            0.0 => 0,
            1.0 => 1,
            v => return Err(parse_err(format!("label must be 0 or 1, got {v}"))),
        };
        let x = Covariate::new(x.to_vec()).map_err(|e| parse_err(e.to_string()))?;
        points.push(LabeledPoint::new(x, y).map_err(|e| parse_err(e.to_string()))?);
    }
    match metric {
        Metric::Euclidean => Dataset::with_fixed_dim(points),
        _ => Dataset::new(points),
    }
}

struct Params {
    values: BTreeMap<String, String>,
    used: std::cell::RefCell<Vec<String>>,
}

impl Params {
    fn parse(s: &str) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("parameter '{pair}' is not key=value")))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Params {
            values,
            used: Default::default(),
        })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().push(key.to_string());
        self.values.get(key).map(String::as_str)
    }

    fn get<T: std::str::FromStr>(&self, key: &str, default: Option<T>) -> Result<T, Failure> {
        match self.raw(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Failure::usage(format!("bad value '{v}' for parameter {key}"))),
            None => default.ok_or_else(|| Failure::usage(format!("missing parameter {key}"))),
        }
    }

    fn check_all_used(&self) -> CmdResult {
        let used = self.used.borrow();
        match self.values.keys().find(|k| !used.contains(k)) {
            Some(k) => Err(Failure::usage(format!("unknown parameter {k} for this method"))),
            None => Ok(()),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(':')
        .map(|v| v.parse().map_err(|_| Failure::usage(format!("bad list entry '{v}'"))))
        .collect()
}

fn kvec(p: &Params) -> Result<Vec<usize>, Failure> {
    match p.raw("kvec") {
        Some(v) => parse_list(v),
        None => Ok(vec![10, 20, 30, 40, 50]),
    }
}

fn weight(p: &Params) -> Result<WeightFn, Failure> {
    let v = p.raw("weight").unwrap_or("one");
    Ok(match v.split_once(':') {
        None if v == "one" => WeightFn::ConstantOne,
        None if v == "inv" => WeightFn::InverseR,
        Some(("boxcar", h)) => WeightFn::Boxcar(parse_f64(h)?),
        Some(("theory", r)) => WeightFn::Theory {
            r_tilde: parse_f64(r)?,
        },
        _ => return Err(Failure::usage(format!("unknown weight '{v}' (one, inv, boxcar:H, theory:R)"))),
    })
}

fn scope(p: &Params) -> Result<Scope, Failure> {
    let v = p.raw("scope").unwrap_or("all");
    Ok(match v.split_once(':') {
        None if v == "all" => Scope::All,
        Some(("radius", h)) => Scope::Radius(parse_f64(h)?),
        Some(("top", k)) => Scope::TopK(
            k.parse()
                .map_err(|_| Failure::usage(format!("bad scope '{v}'")))?,
        ),
        _ => return Err(Failure::usage(format!("unknown scope '{v}' (all, radius:H, top:K)"))),
    })
}

fn parse_f64(s: &str) -> Result<f64, Failure> {
    s.parse()
        .map_err(|_| Failure::usage(format!("bad number '{s}'")))
}

fn build_spec(method: &str, p: &Params) -> Result<EstimatorSpec, Failure> {
    Ok(match method {
        "kernel" => EstimatorSpec::KernelSmoother { h: p.get("h", None)? },
        "knn" => EstimatorSpec::Knn { k: p.get("k", None)? },
        "lpor" => EstimatorSpec::Lpor {
            h: p.get("h", None)?,
            degree: p.get("q", Some(2))?,
        },
        "lpolr" => EstimatorSpec::Lpolr {
            h: p.get("h", None)?,
            degree: p.get("q", Some(2))?,
        },
        "msknn-poly" => EstimatorSpec::Msknn {
            k_vec: kvec(p)?,
            degree: p.get("q", Some(2))?,
            regression: MsknnRegression::Poly,
            loss: MsknnLoss::Squared,
        },
        "msknn-logi" => {
            let loss = match p.raw("loss").unwrap_or("logistic") {
                "logistic" => MsknnLoss::Logistic,
                "logit-squared" => MsknnLoss::LogitSquared,
                other => {
                    return Err(Failure::usage(format!(
                        "unknown loss '{other}' (logistic, logit-squared)"
                    )))
                }
            };
            EstimatorSpec::Msknn {
                k_vec: kvec(p)?,
                degree: p.get("q", Some(2))?,
                regression: MsknnRegression::Logi,
                loss,
            }
        }
        "lrr" | "lrlr" => {
            let basis = match p.raw("basis").unwrap_or("poly") {
                "poly" => RadialBasis::Poly,
                "even" => RadialBasis::Even,
                other => return Err(Failure::usage(format!("unknown basis '{other}' (poly, even)"))),
            };
            EstimatorSpec::Lrr(LrrSpec {
                weight: weight(p)?,
                degree: p.get("q", Some(2))?,
                loss: if method == "lrr" {
                    LrrLoss::Squared
                } else {
                    LrrLoss::Logistic
                },
                scope: scope(p)?,
                basis,
            })
        }
        other => {
            return Err(Failure::usage(format!(
                "unknown method '{other}' (kernel, knn, lpor, lpolr, msknn-poly, msknn-logi, lrr, lrlr)"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn training_rows_with_header_and_comments() {
        let d = parse_training("x1,x2,y\n# note\n0.1,0.2,1\n0.3,0.4,0\n", Metric::Euclidean).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.dim(), Some(2));
    }

    #[test]
    fn bad_row_reports_line() {
        match parse_training("0.1,1\n0.2,x\n", Metric::Euclidean).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
        match parse_training("0.1,1\n0.2,2\n", Metric::Euclidean).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn variable_length_rows_need_dtw() {
        let text = "1,2,3,1\n1,2,0\n";
        assert!(parse_training(text, Metric::Euclidean).is_err());
        assert_eq!(parse_training(text, Metric::Idtw).unwrap().len(), 2);
    }

    #[test]
    fn params_are_checked() {
        let p = Params::parse("k=3").unwrap();
        assert_eq!(build_spec("knn", &p).ok(), Some(EstimatorSpec::Knn { k: 3 }));
        assert!(p.check_all_used().is_ok());
        let p = Params::parse("k=3,h=1").unwrap();
        build_spec("knn", &p).ok();
        assert!(p.check_all_used().is_err());
        assert!(build_spec("knn", &Params::parse("").unwrap()).is_err());
        assert!(build_spec("svm", &Params::parse("").unwrap()).is_err());
        let p = Params::parse("kvec=5:10:15,q=1").unwrap();
        match build_spec("msknn-poly", &p).ok().unwrap() {
            EstimatorSpec::Msknn { k_vec, degree, .. } => {
                assert_eq!(k_vec, vec![5, 10, 15]);
                assert_eq!(degree, 1);
            }
            s => panic!("{s:?}"),
        }
    }
}
