//! Weight sequences `{φₙ(r)}` and their aggregate sums.
//!
//! A [`WeightSequence`] holds a rule for `φ₀` and for the weights `φₙ`,
//! `n ≥ 1`, together with a majorant for every tail `Σ_{n>N} φₙ(r)`. The
//! aggregate sums `Φ₁(r) = Σ φₙ(r)` and `Ψ₁(r) = Σ n·φₙ(r)` are computed by
//! summing until the declared majorant drops below the requested tolerance,
//! so every returned value carries a certified truncation error.
//!
//! Three kinds are supported:
//!
//! * power weights `φₙ(r) = rⁿ`,
//! * scaled power weights `φₙ(r) = cₙ rⁿ`, where the last listed coefficient
//!   is repeated for every higher index,
//! * tabulated weights: finitely many functions sampled on an r-grid
//!   (piecewise linear in between) plus a declared tail majorant on the same
//!   grid.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Default summation tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default upper end of the working range.
pub const DEFAULT_R_MAX: f64 = 0.999;

/// Slack allowed when spot-checking the decreasing flag.
pub const EPS_MONO: f64 = 1e-12;

/// Hard cap on the number of summed terms.
pub const INDEX_CAP: usize = 1_000_000;

/// `φ₀` given either as a constant or sampled on the tabulated grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Phi0Config {
    Constant(f64),
    Grid(Vec<f64>),
}

/// Serializable description of a weight sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightConfig {
    Power {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi0: Option<Phi0Config>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r_max: Option<f64>,
    },
    ScaledPower {
        /// `c[i]` multiplies `r^(i+1)`; the last entry is repeated.
        c: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi0: Option<Phi0Config>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r_max: Option<f64>,
    },
    Tabulated {
        /// Strictly increasing grid starting at 0.
        r: Vec<f64>,
        /// `phi[i][j]` is `φ_{i+1}(r[j])`.
        phi: Vec<Vec<f64>>,
        /// Majorant of `Σ_{n>M} φₙ` on the grid; zero when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<Vec<f64>>,
        /// Majorant of `Σ_{n>M} n·φₙ` on the grid.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_tail: Option<Vec<f64>>,
        #[serde(default)]
        decreasing: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi0: Option<Phi0Config>,
    },
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig::Power {
            phi0: None,
            r_max: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Phi0 {
    Constant(f64),
    Grid(Vec<f64>),
}

#[derive(Debug, Clone)]
enum Kind {
    Power,
    ScaledPower(Vec<f64>),
    Tabulated {
        grid: Vec<f64>,
        rows: Vec<Vec<f64>>,
        tail: Vec<f64>,
        n_tail: Option<Vec<f64>>,
    },
}

/// A weight sequence in `𝓕` (or `𝓕_dec` when the decreasing flag is set).
///
/// Values are immutable after construction.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    config: WeightConfig,
    kind: Kind,
    phi0: Phi0,
    decreasing: bool,
    r_max: f64,
}

fn interp(grid: &[f64], values: &[f64], r: f64) -> f64 {
    match grid.iter().position(|&g| g >= r) {
        None => *values.last().unwrap(),
        Some(0) => values[0],
        Some(j) => {
            let (x0, x1) = (grid[j - 1], grid[j]);
            let t = (r - x0) / (x1 - x0);
            values[j - 1] + t * (values[j] - values[j - 1])
        }
    }
}

fn check_r_max(r_max: f64) -> Result<f64> {
    if r_max > 0.0 && r_max < 1.0 {
        Ok(r_max)
    } else {
        Err(Error::Config(format!(
            "r_max must lie in (0,1), got {r_max}"
        )))
    }
}

fn constant_phi0(phi0: &Option<Phi0Config>) -> Result<Phi0> {
    match phi0 {
        None => Ok(Phi0::Constant(1.0)),
        Some(Phi0Config::Constant(c)) if *c >= 0.0 && c.is_finite() => Ok(Phi0::Constant(*c)),
        Some(Phi0Config::Constant(c)) => {
            Err(Error::Config(format!("phi0 must be nonnegative, got {c}")))
        }
        Some(Phi0Config::Grid(_)) => Err(Error::Config(
            "a sampled phi0 is only available for tabulated weights".into(),
        )),
    }
}

impl WeightSequence {
    /// `φₙ(r) = rⁿ` with `φ₀ ≡ 1`.
    pub fn power() -> Self {
        Self::from_config(WeightConfig::default()).expect("power weights are valid")
    }

    pub fn scaled_power(c: Vec<f64>) -> Result<Self> {
        Self::from_config(WeightConfig::ScaledPower {
            c,
            phi0: None,
            r_max: None,
        })
    }

    pub fn from_config(config: WeightConfig) -> Result<Self> {
        let (kind, phi0, decreasing, r_max) = match &config {
            WeightConfig::Power { phi0, r_max } => {
                let r_max = check_r_max(r_max.unwrap_or(DEFAULT_R_MAX))?;
                (Kind::Power, constant_phi0(phi0)?, true, r_max)
            }
            WeightConfig::ScaledPower { c, phi0, r_max } => {
                let r_max = check_r_max(r_max.unwrap_or(DEFAULT_R_MAX))?;
                if c.is_empty() {
                    return Err(Error::Config(
                        "scaled_power needs at least one coefficient".into(),
                    ));
                }
                if let Some(bad) = c.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                    return Err(Error::Config(format!(
                        "scaled_power coefficients must be nonnegative, got {bad}"
                    )));
                }
                // cₙrⁿ ≥ c_{n+1}r^{n+1} on [0, r_max] iff cₙ ≥ c_{n+1}·r_max
                let decreasing = c.windows(2).all(|w| w[0] - w[1] * r_max >= -EPS_MONO);
                (
                    Kind::ScaledPower(c.clone()),
                    constant_phi0(phi0)?,
                    decreasing,
                    r_max,
                )
            }
            WeightConfig::Tabulated {
                r,
                phi,
                tail,
                n_tail,
                decreasing,
                phi0,
            } => {
                let (kind, phi0, r_max) = Self::tabulated_parts(r, phi, tail, n_tail, phi0)?;
                if *decreasing {
                    if let Kind::Tabulated { rows, .. } = &kind {
                        for (n, pair) in rows.windows(2).enumerate() {
                            for (j, (a, b)) in pair[0].iter().zip(&pair[1]).enumerate() {
                                if a - b < -EPS_MONO {
                                    return Err(Error::Config(format!(
                                        "decreasing flag violated: phi_{} < phi_{} at r = {}",
                                        n + 1,
                                        n + 2,
                                        r[j]
                                    )));
                                }
                            }
                        }
                    }
                }
                (kind, phi0, *decreasing, r_max)
            }
        };
        Ok(WeightSequence {
            config,
            kind,
            phi0,
            decreasing,
            r_max,
        })
    }

    fn tabulated_parts(
        grid: &[f64],
        phi: &[Vec<f64>],
        tail: &Option<Vec<f64>>,
        n_tail: &Option<Vec<f64>>,
        phi0: &Option<Phi0Config>,
    ) -> Result<(Kind, Phi0, f64)> {
        if grid.len() < 2 || grid[0] != 0.0 {
            return Err(Error::Config(
                "tabulated grid needs ≥ 2 points starting at 0".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(
                "tabulated grid must be strictly increasing".into(),
            ));
        }
        let r_max = check_r_max(*grid.last().unwrap())?;
        let check_row = |name: &str, row: &[f64]| -> Result<()> {
            if row.len() != grid.len() {
                return Err(Error::Config(format!(
                    "{name} has {} samples, grid has {}",
                    row.len(),
                    grid.len()
                )));
            }
            if let Some(bad) = row.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                return Err(Error::Config(format!(
                    "{name} must be nonnegative, got {bad}"
                )));
            }
            Ok(())
        };
        for (i, row) in phi.iter().enumerate() {
            check_row(&format!("phi_{}", i + 1), row)?;
        }
        let tail = match tail {
            Some(t) => {
                check_row("tail", t)?;
                t.clone()
            }
            None => vec![0.0; grid.len()],
        };
        let zero_tail = tail.iter().all(|&t| t == 0.0);
        let n_tail = match n_tail {
            Some(t) => {
                check_row("n_tail", t)?;
                Some(t.clone())
            }
            None if zero_tail => Some(vec![0.0; grid.len()]),
            None => None,
        };
        let phi0 = match phi0 {
            Some(Phi0Config::Grid(values)) => {
                check_row("phi0", values)?;
                Phi0::Grid(values.clone())
            }
            other => constant_phi0(other)?,
        };
        Ok((
            Kind::Tabulated {
                grid: grid.to_vec(),
                rows: phi.to_vec(),
                tail,
                n_tail,
            },
            phi0,
            r_max,
        ))
    }

    /// Replaces the rule for `φ₀`.
    pub fn with_phi0(self, phi0: Phi0Config) -> Result<Self> {
        let config = match self.config {
            WeightConfig::Power { r_max, .. } => WeightConfig::Power {
                phi0: Some(phi0),
                r_max,
            },
            WeightConfig::ScaledPower { c, r_max, .. } => WeightConfig::ScaledPower {
                c,
                phi0: Some(phi0),
                r_max,
            },
            WeightConfig::Tabulated {
                r,
                phi,
                tail,
                n_tail,
                decreasing,
                ..
            } => WeightConfig::Tabulated {
                r,
                phi,
                tail,
                n_tail,
                decreasing,
                phi0: Some(phi0),
            },
        };
        Self::from_config(config)
    }

    pub fn config(&self) -> &WeightConfig {
        &self.config
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Membership in `𝓕_dec`.
    pub fn is_decreasing(&self) -> bool {
        self.decreasing
    }

    /// Whether `φ₀` is literally the constant 1.
    pub fn phi0_is_one(&self) -> bool {
        matches!(self.phi0, Phi0::Constant(c) if c == 1.0)
    }

    /// Whether a majorant for the n-weighted tails is available.
    pub fn has_weighted_tail(&self) -> bool {
        !matches!(&self.kind, Kind::Tabulated { n_tail: None, .. })
    }

    /// Number of explicitly known weights, `None` when all are known.
    pub fn explicit_len(&self) -> Option<usize> {
        match &self.kind {
            Kind::Tabulated { rows, .. } => Some(rows.len()),
            _ => None,
        }
    }

    pub fn check_r(&self, r: f64) -> Result<()> {
        if (0.0..=self.r_max).contains(&r) {
            Ok(())
        } else {
            Err(domain(format!("r = {r} outside [0, {}]", self.r_max)))
        }
    }

    pub fn phi0(&self, r: f64) -> f64 {
        match (&self.phi0, &self.kind) {
            (Phi0::Constant(c), _) => *c,
            (Phi0::Grid(values), Kind::Tabulated { grid, .. }) => interp(grid, values, r),
            (Phi0::Grid(_), _) => unreachable!("sampled phi0 requires a tabulated grid"),
        }
    }

    /// `φₙ(r)`; index 0 is `φ₀`. Tabulated weights past the last row are 0.
    pub fn weight(&self, n: usize, r: f64) -> f64 {
        if n == 0 {
            return self.phi0(r);
        }
        match &self.kind {
            Kind::Power => r.powi(n as i32),
            Kind::ScaledPower(c) => c[(n - 1).min(c.len() - 1)] * r.powi(n as i32),
            Kind::Tabulated { grid, rows, .. } => {
                rows.get(n - 1).map_or(0.0, |row| interp(grid, row, r))
            }
        }
    }

    /// Upper bound on `Σ_{n>N} φₙ(r)`.
    pub fn tail_majorant(&self, n: usize, r: f64) -> f64 {
        self.tail(n, r, false)
            .expect("unweighted tails always exist")
    }

    /// Upper bound on `Σ_{n>N} n·φₙ(r)`, when declared.
    pub fn weighted_tail_majorant(&self, n: usize, r: f64) -> Option<f64> {
        self.tail(n, r, true)
    }

    fn tail(&self, big_n: usize, r: f64, weighted: bool) -> Option<f64> {
        match &self.kind {
            Kind::Power => Some(power_tail(big_n, r, weighted)),
            Kind::ScaledPower(c) => {
                let last = c.len();
                let explicit: f64 = (big_n + 1..=last)
                    .map(|n| c[n - 1] * r.powi(n as i32) * if weighted { n as f64 } else { 1.0 })
                    .sum();
                Some(explicit + c[last - 1] * power_tail(big_n.max(last), r, weighted))
            }
            Kind::Tabulated {
                grid,
                rows,
                tail,
                n_tail,
            } => {
                let declared = if weighted {
                    interp(grid, n_tail.as_ref()?, r)
                } else {
                    interp(grid, tail, r)
                };
                let explicit: f64 = rows
                    .iter()
                    .enumerate()
                    .skip(big_n)
                    .map(|(i, row)| {
                        interp(grid, row, r) * if weighted { (i + 1) as f64 } else { 1.0 }
                    })
                    .sum();
                Some(explicit + declared)
            }
        }
    }

    /// `Σ_{n=1}^{N} φₙ(r)` (or with the factor `n` when `weighted`).
    pub fn partial_sum(&self, big_n: usize, r: f64, weighted: bool) -> f64 {
        (1..=big_n)
            .map(|n| self.weight(n, r) * if weighted { n as f64 } else { 1.0 })
            .sum()
    }

    /// `Φ₁(r)` to within `tol`.
    pub fn phi_sum(&self, r: f64, tol: f64) -> Result<f64> {
        self.certified_sum(r, tol, false)
    }

    /// `Ψ₁(r) = Σ n·φₙ(r)` to within `tol`.
    pub fn psi_sum(&self, r: f64, tol: f64) -> Result<f64> {
        if !self.has_weighted_tail() {
            return Err(crate::error::contract(
                "weight sequence declares no majorant for the n-weighted tail",
            ));
        }
        self.certified_sum(r, tol, true)
    }

    fn certified_sum(&self, r: f64, tol: f64, weighted: bool) -> Result<f64> {
        self.check_r(r)?;
        if !(tol > 0.0) {
            return Err(domain(format!("tolerance must be positive, got {tol}")));
        }
        let factor = |n: usize| if weighted { n as f64 } else { 1.0 };
        let mut sum = 0.0;
        let mut rn = 1.0;
        for n in 0..=INDEX_CAP {
            // tail(n) is cheap for power kinds; tabulated kinds are short
            if self.tail(n, r, weighted).unwrap_or(f64::INFINITY) <= tol {
                return Ok(sum);
            }
            if n == INDEX_CAP {
                break;
            }
            let k = n + 1;
            sum += match &self.kind {
                Kind::Power => {
                    rn *= r;
                    rn * factor(k)
                }
                Kind::ScaledPower(c) => {
                    rn *= r;
                    c[(k - 1).min(c.len() - 1)] * rn * factor(k)
                }
                Kind::Tabulated { .. } => self.weight(k, r) * factor(k),
            };
        }
        Err(Error::NonConvergent(format!(
            "tail majorant at r = {r} stays above {tol} for {INDEX_CAP} terms"
        )))
    }
}

impl Serialize for WeightSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.config.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let config = WeightConfig::deserialize(d)?;
        WeightSequence::from_config(config).map_err(serde::de::Error::custom)
    }
}

fn power_tail(big_n: usize, r: f64, weighted: bool) -> f64 {
    let n = big_n as f64;
    let head = r.powi(big_n as i32 + 1);
    if weighted {
        head * ((n + 1.0) - n * r) / ((1.0 - r) * (1.0 - r))
    } else {
        head / (1.0 - r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(r: f64, n_terms: usize, weighted: bool) -> f64 {
        (1..=n_terms)
            .map(|n| r.powi(n as i32) * if weighted { n as f64 } else { 1.0 })
            .sum()
    }

    #[test]
    fn phi_sum_power_examples() {
        let w = WeightSequence::power();
        // oracle: direct summation to 60 terms
        let oracle = direct(0.5, 60, false);
        assert!((oracle - 1.0).abs() < 1e-15);
        assert!((w.phi_sum(0.5, 1e-12).unwrap() - 1.0).abs() <= 1e-12);
        assert_eq!(w.phi_sum(0.0, 1e-12).unwrap(), 0.0);
        assert!((w.phi_sum(1.0 / 3.0, 1e-12).unwrap() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn psi_sum_power_examples() {
        let w = WeightSequence::power();
        assert!((direct(0.5, 200, true) - 2.0).abs() < 1e-14);
        assert!((w.psi_sum(0.5, 1e-12).unwrap() - 2.0).abs() <= 1e-12);
        assert_eq!(w.psi_sum(0.0, 1e-12).unwrap(), 0.0);
        let r = 3.0 - 8f64.sqrt();
        assert!((w.psi_sum(r, 1e-12).unwrap() - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn out_of_range_radius_is_domain_error() {
        let w = WeightSequence::power();
        assert!(matches!(w.phi_sum(0.9995, 1e-12), Err(Error::Domain(_))));
        assert!(matches!(w.phi_sum(-0.1, 1e-12), Err(Error::Domain(_))));
        assert!(matches!(w.phi_sum(0.5, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn nonvanishing_declared_tail_cannot_reach_tolerance() {
        let w = WeightSequence::from_config(WeightConfig::Tabulated {
            r: vec![0.0, 0.5],
            phi: vec![vec![0.0, 0.5]],
            tail: Some(vec![0.0, 0.1]),
            n_tail: None,
            decreasing: false,
            phi0: None,
        })
        .unwrap();
        assert!(matches!(
            w.phi_sum(0.25, 1e-12),
            Err(Error::NonConvergent(_))
        ));
        assert!(matches!(w.psi_sum(0.25, 1e-12), Err(Error::Contract(_))));
        // at r = 0 the declared tail vanishes
        assert_eq!(w.phi_sum(0.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn tabulated_interpolates_and_sums() {
        let w = WeightSequence::from_config(WeightConfig::Tabulated {
            r: vec![0.0, 0.5, 0.9],
            phi: vec![vec![0.0, 0.5, 0.9], vec![0.0, 0.25, 0.81]],
            tail: None,
            n_tail: None,
            decreasing: true,
            phi0: Some(Phi0Config::Grid(vec![1.0, 1.0, 2.0])),
        })
        .unwrap();
        assert_eq!(w.r_max(), 0.9);
        assert!(w.is_decreasing());
        assert!((w.phi_sum(0.5, 1e-12).unwrap() - 0.75).abs() < 1e-15);
        assert!((w.psi_sum(0.5, 1e-12).unwrap() - 1.0).abs() < 1e-15);
        assert!((w.phi0(0.7) - 1.5).abs() < 1e-12);
        assert_eq!(w.weight(3, 0.5), 0.0);
        assert!(!w.phi0_is_one());
    }

    #[test]
    fn false_decreasing_claim_is_rejected() {
        let err = WeightSequence::from_config(WeightConfig::Tabulated {
            r: vec![0.0, 0.5],
            phi: vec![vec![0.0, 0.1], vec![0.0, 0.2]],
            tail: None,
            n_tail: None,
            decreasing: true,
            phi0: None,
        });
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn scaled_power_repeats_last_coefficient() {
        let w = WeightSequence::scaled_power(vec![2.0, 1.0]).unwrap();
        assert!(w.is_decreasing());
        let r = 0.4;
        // 2r + Σ_{n≥2} rⁿ = 2r + r²/(1−r)
        let expected = 2.0 * r + r * r / (1.0 - r);
        assert!((w.phi_sum(r, 1e-13).unwrap() - expected).abs() < 1e-12);
        let increasing = WeightSequence::scaled_power(vec![1.0, 3.0]).unwrap();
        assert!(!increasing.is_decreasing());
        assert!(WeightSequence::scaled_power(vec![-1.0]).is_err());
    }

    #[test]
    fn config_json_shapes() {
        let w: WeightSequence = serde_json::from_str(r#"{"kind":"power"}"#).unwrap();
        assert!(w.phi0_is_one());
        let s: WeightSequence =
            serde_json::from_str(r#"{"kind":"scaled_power","c":[1.0,0.5]}"#).unwrap();
        assert_eq!(s.weight(5, 0.5), 0.5 * 0.5f64.powi(5));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"kind":"scaled_power","c":[1.0,0.5]}"#);
        assert!(serde_json::from_str::<WeightSequence>(r#"{"kind":"power","r_max":1.0}"#).is_err());
    }
}
