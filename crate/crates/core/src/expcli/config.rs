//! Flat `key = value` experiment configs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Figure1,
    GaussianEvolve,
    Simulate,
    Diagnose,
    MomentsStudy,
    TauStudy,
    SpecfunCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Figure1,
        Experiment::GaussianEvolve,
        Experiment::Simulate,
        Experiment::Diagnose,
        Experiment::MomentsStudy,
        Experiment::TauStudy,
        Experiment::SpecfunCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Figure1 => "figure1",
            Experiment::GaussianEvolve => "gaussian-evolve",
            Experiment::Simulate => "simulate",
            Experiment::Diagnose => "diagnose",
            Experiment::MomentsStudy => "moments-study",
            Experiment::TauStudy => "tau-study",
            Experiment::SpecfunCheck => "specfun-check",
        }
    }

    /// Accepted keys besides `name`, `out` and `seed`.
    fn keys(self) -> &'static [(&'static str, Kind)] {
        use Kind::*;
        const GAUSSIAN: [(&str, Kind); 5] = [
            ("alpha0", Real),
            ("beta0", Real),
            ("b0", Real),
            ("c0", Real),
            ("xbar0", Real),
        ];
        match self {
            Experiment::Figure1 => &[
                ("gammas", Reals),
                ("lambda", Real),
                ("half_width", Real),
                ("points", Int),
                ("profile_points", Int),
            ],
            Experiment::GaussianEvolve => &[
                GAUSSIAN[0],
                GAUSSIAN[1],
                GAUSSIAN[2],
                GAUSSIAN[3],
                GAUSSIAN[4],
                ("t_end", Real),
                ("samples", Int),
                ("tolerance", Real),
            ],
            Experiment::Simulate => &[
                ("initial", Text),
                GAUSSIAN[0],
                GAUSSIAN[1],
                GAUSSIAN[2],
                GAUSSIAN[3],
                GAUSSIAN[4],
                ("lambda", Real),
                ("t0", Real),
                ("gamma", Real),
                ("cells", Int),
                ("half_width", Real),
                ("cfl", Real),
                ("t_end", Real),
                ("snapshots", Reals),
                ("vacuum_floor", Real),
            ],
            Experiment::Diagnose => &[
                ("snapshots", Paths),
                ("snapshot_dir", Paths),
                GAUSSIAN[0],
                GAUSSIAN[1],
                GAUSSIAN[2],
                GAUSSIAN[3],
                GAUSSIAN[4],
                ("k", Real),
            ],
            Experiment::MomentsStudy => &[
                GAUSSIAN[0],
                GAUSSIAN[1],
                GAUSSIAN[2],
                GAUSSIAN[3],
                GAUSSIAN[4],
                ("cells", Int),
                ("t_end", Real),
                ("samples", Int),
            ],
            Experiment::TauStudy => &[
                ("alpha0", Real),
                ("beta0", Real),
                ("t_end", Real),
                ("samples", Int),
                ("tolerance", Real),
            ],
            Experiment::SpecfunCheck => &[
                ("t_min", Real),
                ("t_max", Real),
                ("points", Int),
                ("h", Real),
            ],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExperiment(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Real,
    Int,
    Reals,
    Text,
    Paths,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(u64),
    Reals(Vec<f64>),
    Text(String),
    Paths(Vec<PathBuf>),
}

fn parse_real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

impl Kind {
    fn parse(self, raw: &str) -> std::result::Result<Value, String> {
        let list = || raw.split(',').map(str::trim).filter(|s| !s.is_empty());
        match self {
            Kind::Real => parse_real(raw)
                .map(Value::Real)
                .ok_or_else(|| format!("expected a real number, got `{raw}`")),
            Kind::Int => raw
                .parse::<u64>()
                .map(Value::Int)
                .map_err(|_| format!("expected a nonnegative integer, got `{raw}`")),
            Kind::Reals => {
                let vals: Option<Vec<f64>> = list().map(parse_real).collect();
                match vals {
                    Some(v) if !v.is_empty() => Ok(Value::Reals(v)),
                    _ => Err(format!(
                        "expected a comma-separated list of reals, got `{raw}`"
                    )),
                }
            }
            Kind::Text => Ok(Value::Text(raw.to_string())),
            Kind::Paths => {
                let v: Vec<PathBuf> = list().map(PathBuf::from).collect();
                if v.is_empty() {
                    Err("expected at least one path".into())
                } else {
                    Ok(Value::Paths(v))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub params: BTreeMap<String, Value>,
    pub out_dir: PathBuf,
    /// Unused; every experiment is deterministic.
    pub seed: u64,
}

impl ExperimentSpec {
    /// Spec with no parameters, writing to `del_out/<name>`.
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            params: BTreeMap::new(),
            out_dir: default_out_dir(experiment),
            seed: 0,
        }
    }

    pub fn real(&self, key: &str, default: f64) -> f64 {
        match self.params.get(key) {
            Some(Value::Real(v)) => *v,
            _ => default,
        }
    }

    pub fn real_opt(&self, key: &str) -> Option<f64> {
        match self.params.get(key) {
            Some(Value::Real(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn int(&self, key: &str, default: u64) -> u64 {
        match self.params.get(key) {
            Some(Value::Int(v)) => *v,
            _ => default,
        }
    }

    pub fn reals(&self, key: &str) -> Option<&[f64]> {
        match self.params.get(key) {
            Some(Value::Reals(v)) => Some(v),
            _ => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.params.get(key) {
            Some(Value::Text(v)) => Some(v),
            _ => None,
        }
    }

    pub fn paths(&self, key: &str) -> Option<&[PathBuf]> {
        match self.params.get(key) {
            Some(Value::Paths(v)) => Some(v),
            _ => None,
        }
    }
}

fn default_out_dir(experiment: Experiment) -> PathBuf {
    PathBuf::from("del_out").join(experiment.name())
}

/// Parses a config that must name its experiment.
pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    parse(text, None)
}

/// Parses a config for `experiment`; a `name` line is optional but must agree.
pub fn parse_config_as(text: &str, experiment: Experiment) -> Result<ExperimentSpec> {
    parse(text, Some(experiment))
}

fn parse(text: &str, expected: Option<Experiment>) -> Result<ExperimentSpec> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `key = value`, got `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "empty key".into(),
            });
        }
        if entries
            .iter()
            .any(|(_, k, _): &(usize, &str, &str)| *k == key)
        {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate key `{key}`"),
            });
        }
        entries.push((line, key, value));
    }

    let named = entries.iter().find(|(_, k, _)| *k == "name");
    let experiment = match (named, expected) {
        (Some((_, _, v)), None) => v.parse::<Experiment>()?,
        (Some((line, _, v)), Some(e)) => {
            let given = v.parse::<Experiment>()?;
            if given != e {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("config is for `{given}`, not `{e}`"),
                });
            }
            e
        }
        (None, Some(e)) => e,
        (None, None) => return Err(Error::MissingKey("name".into())),
    };

    let mut spec = ExperimentSpec::new(experiment);
    for (line, key, value) in entries {
        match key {
            "name" => {}
            "out" => spec.out_dir = PathBuf::from(value),
            "seed" => {
                spec.seed = value.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("seed must be a nonnegative integer, got `{value}`"),
                })?
            }
            _ => {
                let kind = experiment
                    .keys()
                    .iter()
                    .find(|(k, _)| *k == key)
                    .map(|(_, kind)| *kind)
                    .ok_or_else(|| Error::UnknownKey {
                        line,
                        key: key.to_string(),
                    })?;
                let parsed = kind
                    .parse(value)
                    .map_err(|msg| Error::Parse { line, msg })?;
                spec.params.insert(key.to_string(), parsed);
            }
        }
    }
    if experiment == Experiment::Diagnose
        && !spec.params.contains_key("snapshots")
        && !spec.params.contains_key("snapshot_dir")
    {
        return Err(Error::MissingKey("snapshots".into()));
    }
    Ok(spec)
}
