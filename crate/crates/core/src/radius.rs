//! Minimal positive roots of the radius equations.
//!
//! Every equation is written as `G(x) = LHS(x) − RHS(x)` and solved for its
//! leftmost sign change on `(0, r_max]`: a forward scan with a fixed step
//! brackets the first crossing, then bisection shrinks the bracket.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, Error, Result};
use crate::weights::WeightSequence;

/// First scan abscissa.
pub const SCAN_START: f64 = 1e-6;

/// Scan step before bisection.
pub const SCAN_STEP: f64 = 1e-3;

/// Tolerance of the weight sums evaluated inside `G`.
pub const SUM_TOL: f64 = 1e-14;

const MAX_BISECTIONS: usize = 200;

/// The six radius equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    /// `φ₀(x) = (2/p)Φ₁(x)`, class `𝓑`, `p ∈ (0,2]`.
    ThmA,
    /// `φ₀(x) = (1/p)Φ₁(x)`, class `𝓑′`, `p ∈ (0,1]`.
    Thm1,
    /// `p = (1+k)Φ₁(x)`, harmonic `h ∈ 𝓑′`, `φ₀ ≡ 1`.
    Thm2,
    /// `1 = 4Ψ₁(x)`, subordination to a univalent function.
    Thm3,
    /// `1 = 2Φ₁(x)`, subordination to a convex function.
    Thm4,
    /// `1 = 2(1+k)Φ₁(x)`, harmonic with convex subordination.
    Thm5,
}

impl Equation {
    pub const ALL: [Equation; 6] = [
        Equation::ThmA,
        Equation::Thm1,
        Equation::Thm2,
        Equation::Thm3,
        Equation::Thm4,
        Equation::Thm5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Equation::ThmA => "thma",
            Equation::Thm1 => "thm1",
            Equation::Thm2 => "thm2",
            Equation::Thm3 => "thm3",
            Equation::Thm4 => "thm4",
            Equation::Thm5 => "thm5",
        }
    }

    /// Human-readable form of the equation.
    pub fn formula(self) -> &'static str {
        match self {
            Equation::ThmA => "phi0(x) = (2/p) Phi1(x)",
            Equation::Thm1 => "phi0(x) = (1/p) Phi1(x)",
            Equation::Thm2 => "p = (1+k) Phi1(x)",
            Equation::Thm3 => "1 = 4 Psi1(x)",
            Equation::Thm4 => "1 = 2 Phi1(x)",
            Equation::Thm5 => "1 = 2(1+k) Phi1(x)",
        }
    }

    pub fn uses_p(self) -> bool {
        matches!(self, Equation::ThmA | Equation::Thm1 | Equation::Thm2)
    }

    pub fn uses_k(self) -> bool {
        matches!(self, Equation::Thm2 | Equation::Thm5)
    }

    pub fn max_p(self) -> f64 {
        if self == Equation::ThmA {
            2.0
        } else {
            1.0
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "thma" | "a" => Ok(Equation::ThmA),
            "thm1" | "1" => Ok(Equation::Thm1),
            "thm2" | "2" => Ok(Equation::Thm2),
            "thm3" | "3" => Ok(Equation::Thm3),
            "thm4" | "4" => Ok(Equation::Thm4),
            "thm5" | "5" => Ok(Equation::Thm5),
            _ => Err(Error::Config(format!("unknown equation '{s}'"))),
        }
    }
}

/// A radius equation with its weights and parameters, validated.
#[derive(Debug, Clone)]
pub struct RadiusProblem {
    equation: Equation,
    weights: WeightSequence,
    p: f64,
    k: f64,
}

impl RadiusProblem {
    /// `p` defaults to 1 and `k` to 0 where unused.
    pub fn new(equation: Equation, weights: WeightSequence, p: f64, k: f64) -> Result<Self> {
        if equation.uses_p() && !(p > 0.0 && p <= equation.max_p()) {
            return Err(domain(format!(
                "{equation}: p = {p} outside (0, {}]",
                equation.max_p()
            )));
        }
        if equation.uses_k() {
            if !(0.0..=1.0).contains(&k) {
                return Err(domain(format!("{equation}: k = {k} outside [0, 1]")));
            }
            if !weights.is_decreasing() {
                return Err(contract(format!(
                    "{equation} requires a decreasing weight sequence"
                )));
            }
        }
        if equation == Equation::Thm2 && !weights.phi0_is_one() {
            return Err(contract("thm2 requires phi0 identically equal to 1"));
        }
        if equation == Equation::Thm3 && !weights.has_weighted_tail() {
            return Err(contract("thm3 requires a majorant for the n-weighted tail"));
        }
        Ok(RadiusProblem {
            equation,
            weights,
            p: if equation.uses_p() { p } else { 1.0 },
            k: if equation.uses_k() { k } else { 0.0 },
        })
    }

    pub fn equation(&self) -> Equation {
        self.equation
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `G(x) = LHS(x) − RHS(x)`; positive where the inequality is claimed.
    pub fn gap(&self, x: f64) -> Result<f64> {
        let w = &self.weights;
        Ok(match self.equation {
            Equation::ThmA => w.phi0(x) - 2.0 / self.p * w.phi_sum(x, SUM_TOL)?,
            Equation::Thm1 => w.phi0(x) - w.phi_sum(x, SUM_TOL)? / self.p,
            Equation::Thm2 => self.p - (1.0 + self.k) * w.phi_sum(x, SUM_TOL)?,
            Equation::Thm3 => 1.0 - 4.0 * w.psi_sum(x, SUM_TOL)?,
            Equation::Thm4 => 1.0 - 2.0 * w.phi_sum(x, SUM_TOL)?,
            Equation::Thm5 => 1.0 - 2.0 * (1.0 + self.k) * w.phi_sum(x, SUM_TOL)?,
        })
    }
}

/// Evidence that no earlier sign change was seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub scan_start: f64,
    pub scan_step: f64,
    pub points_scanned: usize,
    /// `G` at the first scan point.
    pub gap_at_start: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    #[serde(rename = "R")]
    pub radius: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub certificate: MinimalityCertificate,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Leftmost sign change of `G` on `(0, r_max]`, bisected to width `tol`.
pub fn solve_radius(problem: &RadiusProblem, tol: f64) -> Result<RadiusResult> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let r_max = problem.weights().r_max();
    let gap_at_start = problem.gap(SCAN_START)?;
    let start_sign = sign(gap_at_start);
    let mut prev = (SCAN_START, gap_at_start);
    let mut points_scanned = 1;
    let mut bracket = None;
    if start_sign == 0 {
        bracket = Some((SCAN_START, SCAN_START));
    }
    let mut i = 1usize;
    while bracket.is_none() {
        let x = (SCAN_START + i as f64 * SCAN_STEP).min(r_max);
        let g = problem.gap(x)?;
        points_scanned += 1;
        if sign(g) == 0 {
            bracket = Some((x, x));
        } else if sign(g) != sign(prev.1) {
            bracket = Some((prev.0, x));
        } else if x >= r_max {
            return Err(Error::NoRootInRange { r_max });
        }
        prev = (x, g);
        i += 1;
    }
    let (mut lo, mut hi) = bracket.unwrap();
    let lo_sign = start_sign;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = sign(problem.gap(mid)?);
        if s == 0 {
            lo = mid;
            hi = mid;
        } else if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let radius = 0.5 * (lo + hi);
    Ok(RadiusResult {
        radius,
        bracket: (lo, hi),
        residual: problem.gap(radius)?,
        certificate: MinimalityCertificate {
            scan_start: SCAN_START,
            scan_step: SCAN_STEP,
            points_scanned,
            gap_at_start,
        },
    })
}

/// Closed-form radius for power weights with `φ₀ ≡ 1`.
pub fn closed_form_radius(equation: Equation, p: f64, k: f64) -> Result<f64> {
    if equation.uses_p() && !(p > 0.0 && p <= equation.max_p()) {
        return Err(domain(format!(
            "{equation}: p = {p} outside (0, {}]",
            equation.max_p()
        )));
    }
    if equation.uses_k() && !(0.0..=1.0).contains(&k) {
        return Err(domain(format!("{equation}: k = {k} outside [0, 1]")));
    }
    Ok(match equation {
        Equation::ThmA => p / (p + 2.0),
        Equation::Thm1 => p / (1.0 + p),
        Equation::Thm2 => p / (k + 1.0 + p),
        Equation::Thm3 => 3.0 - 8f64.sqrt(),
        Equation::Thm4 => 1.0 / 3.0,
        Equation::Thm5 => 1.0 / (3.0 + 2.0 * k),
    })
}

/// `k = (K−1)/(K+1)` for a `K`-quasiconformal mapping, `K ≥ 1`.
pub fn k_from_qc_constant(big_k: f64) -> Result<f64> {
    if big_k >= 1.0 && big_k.is_finite() {
        Ok((big_k - 1.0) / (big_k + 1.0))
    } else {
        Err(domain(format!(
            "quasiconformal constant K = {big_k} must be ≥ 1"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{Phi0Config, WeightConfig};

    fn solve(eq: Equation, p: f64, k: f64) -> RadiusResult {
        let prob = RadiusProblem::new(eq, WeightSequence::power(), p, k).unwrap();
        solve_radius(&prob, 1e-12).unwrap()
    }

    #[test]
    fn solver_examples() {
        assert!((solve(Equation::Thm1, 1.0, 0.0).radius - 0.5).abs() < 1e-10);
        assert!((solve(Equation::Thm3, 1.0, 0.0).radius - 0.1715728753).abs() < 1e-10);
        assert!((solve(Equation::ThmA, 1.0, 0.0).radius - 1.0 / 3.0).abs() < 1e-10);
        let res = solve(Equation::Thm3, 1.0, 0.0);
        assert!(res.bracket.1 - res.bracket.0 <= 1e-12);
        assert!(res.residual.abs() <= 1e-10);
        assert!(res.certificate.gap_at_start > 0.0);
    }

    #[test]
    fn closed_form_examples() {
        assert!((closed_form_radius(Equation::Thm1, 0.5, 0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let k = k_from_qc_constant(2.0).unwrap();
        assert!((k - 1.0 / 3.0).abs() < 1e-15);
        assert!((closed_form_radius(Equation::Thm2, 1.0, k).unwrap() - 3.0 / 7.0).abs() < 1e-15);
        // the K-parametrized form p(K+1)/((p+2)K+p)
        let (p, big_k) = (1.0f64, 2.0f64);
        assert!((p * (big_k + 1.0) / ((p + 2.0) * big_k + p) - 3.0 / 7.0).abs() < 1e-15);
        assert_eq!(
            closed_form_radius(Equation::Thm5, 1.0, 0.0).unwrap(),
            1.0 / 3.0
        );
        assert!(closed_form_radius(Equation::Thm1, 1.5, 0.0).is_err());
        assert!(closed_form_radius(Equation::Thm5, 1.0, 1.5).is_err());
        assert!(k_from_qc_constant(0.5).is_err());
    }

    #[test]
    fn parameter_validation() {
        let w = WeightSequence::power();
        assert!(RadiusProblem::new(Equation::ThmA, w.clone(), 2.0, 0.0).is_ok());
        assert!(RadiusProblem::new(Equation::Thm1, w.clone(), 2.0, 0.0).is_err());
        assert!(RadiusProblem::new(Equation::Thm2, w.clone(), 0.0, 0.0).is_err());
        assert!(RadiusProblem::new(Equation::Thm5, w.clone(), 1.0, -0.1).is_err());
        let shifted = w.with_phi0(Phi0Config::Constant(2.0)).unwrap();
        assert!(matches!(
            RadiusProblem::new(Equation::Thm2, shifted.clone(), 1.0, 0.0),
            Err(Error::Contract(_))
        ));
        // φ₀ = 2 moves the Thm1 root to x/(1−x) = 2p
        let res = solve_radius(
            &RadiusProblem::new(Equation::Thm1, shifted, 1.0, 0.0).unwrap(),
            1e-12,
        )
        .unwrap();
        assert!((res.radius - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn missing_root_is_reported() {
        let w = WeightSequence::from_config(WeightConfig::Power {
            phi0: None,
            r_max: Some(0.2),
        })
        .unwrap();
        let prob = RadiusProblem::new(Equation::Thm1, w, 1.0, 0.0).unwrap();
        assert!(matches!(
            solve_radius(&prob, 1e-12),
            Err(Error::NoRootInRange { .. })
        ));
    }

    #[test]
    fn leftmost_of_several_roots() {
        // Φ₁ rises to 0.6 at r = 0.3, dips to 0.2 and rises again; 1 = 2Φ₁
        // crosses three times.
        let w = WeightSequence::from_config(WeightConfig::Tabulated {
            r: vec![0.0, 0.3, 0.5, 0.9],
            phi: vec![vec![0.0, 0.6, 0.2, 0.9]],
            tail: None,
            n_tail: None,
            decreasing: false,
            phi0: None,
        })
        .unwrap();
        let prob = RadiusProblem::new(Equation::Thm4, w, 1.0, 0.0).unwrap();
        let res = solve_radius(&prob, 1e-12).unwrap();
        // 0.6 r/0.3 = 0.5 at r = 0.25
        assert!((res.radius - 0.25).abs() < 1e-10);
    }

    #[test]
    fn equation_names_parse() {
        for eq in Equation::ALL {
            assert_eq!(eq.name().parse::<Equation>().unwrap(), eq);
        }
        assert_eq!("thm-a".parse::<Equation>().unwrap(), Equation::ThmA);
        assert!("thm9".parse::<Equation>().is_err());
    }
}
