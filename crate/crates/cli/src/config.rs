//! Resolved run configurations. Every output embeds one of these under
//! `"config"`, and `bohr replay` feeds it back through the same dispatch.

use std::fmt;
use std::str::FromStr;

use bohr_core::radius::Equation;
use bohr_core::series::{schur_sample, CoefficientSeries, ExtremalFamily};
use bohr_core::subordination::Model;
use bohr_core::verify::Experiment;
use bohr_core::weights::WeightConfig;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "bohr-kit/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Radius(RadiusConfig),
    Sum(SumConfig),
    HarmonicSum(HarmonicConfig),
    SubordSum(SubordConfig),
    Verify(ExperimentConfig),
    Sharpness(ExperimentConfig),
    Sweep(SweepConfig),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadiusConfig {
    pub equation: Equation,
    pub weights: WeightConfig,
    pub p: f64,
    pub k: f64,
    pub tol: f64,
    pub out: Format,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SumConfig {
    pub function: FunctionSpec,
    pub weights: WeightConfig,
    pub p: f64,
    pub r: RSpec,
    pub order: usize,
    pub out: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    WithConstant,
    WithoutConstant,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HarmonicConfig {
    pub function: FunctionSpec,
    pub weights: WeightConfig,
    pub p: f64,
    pub k: f64,
    pub lambda_turns: f64,
    pub form: Form,
    pub r: RSpec,
    pub order: usize,
    pub out: Format,
}

/// Domain data for a user-supplied univalent map, taken on trust.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UserModel {
    pub f: CoefficientSeries,
    pub dist: f64,
    pub convex: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubordConfig {
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub user: Option<UserModel>,
    pub omega: OmegaSpec,
    pub weights: WeightConfig,
    pub r: RSpec,
    pub order: usize,
    pub out: Format,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub out: Format,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub equation: Equation,
    pub weights: WeightConfig,
    pub p: RSpec,
    /// Dilatation `k`, or `K` when `qc_constant` is set.
    pub k: RSpec,
    #[serde(default)]
    pub qc_constant: bool,
    pub tol: f64,
    pub out: Format,
}

/// Where the analytic function of a sum comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum FunctionSpec {
    Series { series: CoefficientSeries },
    Extremal { family: ExtremalFamily },
    Schur { seed: u64 },
    BPrime { seed: u64 },
    Subordinate { model: Model, omega: OmegaSpec },
}

/// A Schwarz function: `seed:N` (shifted Schur sample), `identity`, or
/// `power:m` for `z^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum OmegaSpec {
    Seed(u64),
    Identity,
    Power(usize),
}

impl OmegaSpec {
    pub fn build(self, order: usize) -> bohr_core::Result<CoefficientSeries> {
        match self {
            OmegaSpec::Seed(seed) => Ok(schur_sample(order, seed)?.shifted()),
            OmegaSpec::Identity => Ok(CoefficientSeries::identity(order)),
            OmegaSpec::Power(m) => Ok(CoefficientSeries::monomial(m, order)),
        }
    }
}

impl FromStr for OmegaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected seed:N, identity or power:m, got '{s}'");
        match s.split_once(':') {
            None if s == "identity" => Ok(OmegaSpec::Identity),
            Some(("seed", n)) => n.parse().map(OmegaSpec::Seed).map_err(|_| bad()),
            Some(("power", m)) => match m.parse() {
                Ok(m) if m >= 1 => Ok(OmegaSpec::Power(m)),
                _ => Err(format!("power:m needs an integer m >= 1, got '{s}'")),
            },
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for OmegaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaSpec::Seed(n) => write!(f, "seed:{n}"),
            OmegaSpec::Identity => f.write_str("identity"),
            OmegaSpec::Power(m) => write!(f, "power:{m}"),
        }
    }
}

impl TryFrom<String> for OmegaSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<OmegaSpec> for String {
    fn from(o: OmegaSpec) -> String {
        o.to_string()
    }
}

/// A single value or an inclusive `start:end:step` range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RSpec {
    Value(f64),
    Range { start: f64, end: f64, step: f64 },
}

impl RSpec {
    pub fn values(self) -> Vec<f64> {
        match self {
            RSpec::Value(v) => vec![v],
            RSpec::Range { start, end, step } => {
                let n = ((end - start) / step + 1e-9).floor() as usize;
                let mut out: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
                // land exactly on `end` when the step divides the span
                if let Some(last) = out.last_mut() {
                    if (*last - end).abs() <= 1e-9 * step.abs().max(1.0) {
                        *last = end;
                    }
                }
                out
            }
        }
    }

    pub fn is_range(self) -> bool {
        matches!(self, RSpec::Range { .. })
    }
}

impl FromStr for RSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{t}' is not a number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(RSpec::Value(num(v)?)),
            [a, b, c] => {
                let (start, end, step) = (num(a)?, num(b)?, num(c)?);
                if !(step.is_finite()
                    && step > 0.0
                    && start.is_finite()
                    && end.is_finite()
                    && start <= end)
                {
                    return Err(format!(
                        "range '{s}' needs start <= end and a positive step"
                    ));
                }
                if (end - start) / step > 1e6 {
                    return Err(format!("range '{s}' has too many points"));
                }
                Ok(RSpec::Range { start, end, step })
            }
            _ => Err(format!("expected a number or start:end:step, got '{s}'")),
        }
    }
}
