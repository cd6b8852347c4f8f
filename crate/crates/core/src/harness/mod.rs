//! Seeded experiment runner.
//!
//! An experiment is a named trial function evaluated on every point of a
//! parameter grid. Trials run in parallel, each on its own random stream
//! (see [`seed`]), and are aggregated in trial order, so a result depends
//! only on the spec and the master seed.

mod experiments;
pub mod seed;
pub mod stats;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use experiments::EXPERIMENTS;
pub use stats::{span_probability, wilson_interval, Z95};

pub const RESULT_SCHEMA: &str = "result_v1";

/// A grid coordinate: an integer, a real, or a label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(u64),
    Float(f64),
    Str(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v}"),
            ParamValue::Str(s) => f.write_str(s),
        }
    }
}

/// Parameter name → values to sweep.
pub type Grid = BTreeMap<String, Vec<ParamValue>>;

/// Parses a grid such as `{"n": [16], "m": [4, 8], "delta": 0.01}`. Scalars
/// are treated as one-element lists.
pub fn parse_grid(src: &str) -> Result<Grid> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<ParamValue>),
        One(ParamValue),
    }
    let raw: BTreeMap<String, OneOrMany> = serde_json::from_str(src)
        .map_err(|e| Error::InvalidArgument(format!("grid is not a JSON object of values: {e}")))?;
    Ok(raw
        .into_iter()
        .map(|(k, v)| {
            let values = match v {
                OneOrMany::Many(vs) => vs,
                OneOrMany::One(v) => vec![v],
            };
            (k, values)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub grid: Grid,
    pub trials: u64,
    pub master_seed: u64,
}

/// One grid point's resolved parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(BTreeMap<String, ParamValue>);

impl Point {
    pub fn params(&self) -> &BTreeMap<String, ParamValue> {
        &self.0
    }

    fn raw(&self, name: &str) -> Result<&ParamValue> {
        self.0
            .get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("missing parameter `{name}`")))
    }

    pub fn has(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn usize(&self, name: &str) -> Result<usize> {
        match self.raw(name)? {
            ParamValue::Int(v) => Ok(*v as usize),
            ParamValue::Float(v) if v.fract() == 0.0 && *v >= 0.0 => Ok(*v as usize),
            other => Err(Error::InvalidArgument(format!(
                "parameter `{name}` must be a non-negative integer, got {other}"
            ))),
        }
    }

    pub fn f64(&self, name: &str) -> Result<f64> {
        match self.raw(name)? {
            ParamValue::Int(v) => Ok(*v as f64),
            ParamValue::Float(v) => Ok(*v),
            ParamValue::Str(s) => Err(Error::InvalidArgument(format!(
                "parameter `{name}` must be a number, got `{s}`"
            ))),
        }
    }

    fn with(&self, name: &str, value: ParamValue) -> Point {
        let mut p = self.clone();
        p.0.insert(name.to_string(), value);
        p
    }
}

/// What a single trial reports.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrialOutcome {
    pub success: bool,
    pub tv: f64,
    pub queries: u64,
    /// Experiment-specific metrics, averaged over trials.
    pub metrics: Vec<(&'static str, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub params: BTreeMap<String, ParamValue>,
    pub success_rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_tv: f64,
    /// Total oracle queries over all trials of this point.
    pub queries: u64,
    pub trials: u64,
    pub successes: u64,
    /// Per-point metrics: trial means plus experiment-level constants.
    pub extra: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub grid: Grid,
    pub trials: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema: String,
    pub experiment: String,
    pub spec: SpecEcho,
    pub seed: u64,
    pub tool_version: String,
    /// Seconds since the Unix epoch; the only field outside the determinism contract.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
    pub points: Vec<PointResult>,
}

impl ExperimentResult {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("results serialize");
        s.push('\n');
        s
    }

    /// One row per point: parameters, aggregates, then extra metrics.
    pub fn to_csv(&self) -> String {
        let param_names: Vec<&String> = self
            .spec
            .grid
            .keys()
            .chain(
                self.points
                    .iter()
                    .flat_map(|p| p.params.keys())
                    .filter(|k| !self.spec.grid.contains_key(*k)),
            )
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let extra_names: Vec<&String> = self
            .points
            .iter()
            .flat_map(|p| p.extra.keys())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut out = String::from("experiment");
        for name in &param_names {
            out.push(',');
            out.push_str(name);
        }
        out.push_str(",trials,successes,success_rate,ci_lo,ci_hi,mean_tv,queries");
        for name in &extra_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for p in &self.points {
            out.push_str(&self.experiment);
            for name in &param_names {
                out.push(',');
                if let Some(v) = p.params.get(*name) {
                    out.push_str(&v.to_string());
                }
            }
            out.push_str(&format!(
                ",{},{},{},{},{},{},{}",
                p.trials, p.successes, p.success_rate, p.ci_lo, p.ci_hi, p.mean_tv, p.queries
            ));
            for name in &extra_names {
                out.push(',');
                if let Some(v) = p.extra.get(*name) {
                    out.push_str(&v.to_string());
                }
            }
            out.push('\n');
        }
        out
    }
}

/// A registered experiment.
pub struct Experiment {
    pub name: &'static str,
    /// Parameters with their default sweeps.
    pub params: &'static [(&'static str, &'static str)],
    /// `(a, b)`: giving `a` drops the default of `b`; giving both is an error.
    pub exclusive: &'static [(&'static str, &'static str)],
    /// Rejects grid points the simulators cannot handle.
    pub check: fn(&Point) -> Result<()>,
    pub run_point: fn(&PointRunner<'_>) -> Result<Vec<PointResult>>,
}

pub fn find_experiment(name: &str) -> Result<&'static Experiment> {
    EXPERIMENTS
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownExperiment(name.to_string()))
}

/// Everything a point needs to run its trials.
pub struct PointRunner<'a> {
    pub point: &'a Point,
    pub index: u64,
    pub trials: u64,
    pub master_seed: u64,
}

impl PointRunner<'_> {
    /// Runs `trial` once per trial index in parallel and aggregates in order.
    pub fn run<F>(&self, point: &Point, stream_offset: u64, trial: F) -> Result<PointResult>
    where
        F: Fn(&mut rand_chacha::ChaCha8Rng) -> Result<TrialOutcome> + Sync,
    {
        let outcomes = (0..self.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = seed::trial_rng(self.master_seed, self.index, stream_offset + t);
                trial(&mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(aggregate(point, &outcomes))
    }
}

pub fn aggregate(point: &Point, outcomes: &[TrialOutcome]) -> PointResult {
    let trials = outcomes.len() as u64;
    let successes = outcomes.iter().filter(|o| o.success).count() as u64;
    let mean = |total: f64| {
        if trials == 0 {
            0.0
        } else {
            total / trials as f64
        }
    };
    let mut sums: BTreeMap<String, f64> = BTreeMap::new();
    for o in outcomes {
        for (name, v) in &o.metrics {
            *sums.entry(name.to_string()).or_default() += v;
        }
    }
    let (ci_lo, ci_hi) = wilson_interval(successes, trials, Z95);
    PointResult {
        params: point.0.clone(),
        success_rate: mean(successes as f64),
        ci_lo,
        ci_hi,
        mean_tv: mean(outcomes.iter().map(|o| o.tv).sum()),
        queries: outcomes.iter().map(|o| o.queries).sum(),
        trials,
        successes,
        extra: sums.into_iter().map(|(k, v)| (k, mean(v))).collect(),
    }
}

/// Default sweeps merged with the user grid; unknown names are rejected.
fn resolve_grid(exp: &Experiment, user: &Grid) -> Result<Grid> {
    for name in user.keys() {
        if !exp.params.iter().any(|(p, _)| p == name) {
            return Err(Error::InvalidArgument(format!(
                "experiment `{}` has no parameter `{name}`",
                exp.name
            )));
        }
    }
    for (a, b) in exp.exclusive {
        if user.contains_key(*a) && user.contains_key(*b) {
            return Err(Error::InvalidArgument(format!(
                "`{a}` and `{b}` cannot both be given"
            )));
        }
    }
    let mut grid = Grid::new();
    for (name, default) in exp.params {
        let displaced = exp
            .exclusive
            .iter()
            .any(|(a, b)| b == name && user.contains_key(*a));
        let values = match user.get(*name) {
            Some(v) => v.clone(),
            None if default.is_empty() || displaced => continue,
            None => parse_grid(&format!("{{\"{name}\": {default}}}"))?
                .remove(*name)
                .expect("default parses to its own key"),
        };
        if values.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "parameter `{name}` has no values"
            )));
        }
        grid.insert(name.to_string(), values);
    }
    Ok(grid)
}

/// Cartesian product in the experiment's parameter order, first parameter slowest.
fn grid_points(exp: &Experiment, grid: &Grid) -> Vec<Point> {
    let mut points = vec![Point(BTreeMap::new())];
    for (name, _) in exp.params {
        let Some(values) = grid.get(*name) else {
            continue;
        };
        points = points
            .iter()
            .flat_map(|p| values.iter().map(move |v| p.with(name, v.clone())))
            .collect();
    }
    points
}

pub fn run(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    let exp = find_experiment(&spec.name)?;
    let grid = resolve_grid(exp, &spec.grid)?;
    let points = grid_points(exp, &grid);
    for p in &points {
        (exp.check)(p)?;
    }
    let mut results = Vec::new();
    for (index, point) in points.iter().enumerate() {
        let runner = PointRunner {
            point,
            index: index as u64,
            trials: spec.trials,
            master_seed: spec.master_seed,
        };
        results.extend((exp.run_point)(&runner)?);
    }
    Ok(ExperimentResult {
        schema: RESULT_SCHEMA.to_string(),
        experiment: spec.name.clone(),
        spec: SpecEcho {
            grid,
            trials: spec.trials,
        },
        seed: spec.master_seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: None,
        points: results,
    })
}
