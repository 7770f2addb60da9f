//! Sense-preserving harmonic mappings `f = h + ḡ` with `|g′| ≤ k|h′|`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{contract, domain, Result};
use crate::estimate::Estimate;
use crate::series::{
    check_exponent, weighted_coefficient_sum, ClassTag, CoefficientSeries, ORIGIN_TOL,
};
use crate::weights::WeightSequence;

/// Slack for `|λ| = 1`.
pub const UNIT_TOL: f64 = 1e-14;

/// Slack for the weighted quadratic comparison.
pub const LEMMA_TOL: f64 = 1e-12;

/// Analytic part `h`, co-analytic part `g` (with `g(0) = 0`) and the
/// dilatation bound `k`. Pairs built by [`construct_pair`] also remember
/// the rotation `λ` with `g′ = λk h′`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicPair {
    h: CoefficientSeries,
    g: CoefficientSeries,
    k: f64,
    lambda: Option<Complex64>,
}

impl HarmonicPair {
    /// Takes `g` on trust as satisfying `|g′| ≤ k|h′|`.
    pub fn new(h: CoefficientSeries, g: CoefficientSeries, k: f64) -> Result<Self> {
        check_k(k)?;
        if g.coeff_abs(0) > ORIGIN_TOL {
            return Err(contract("co-analytic part must vanish at the origin"));
        }
        Ok(HarmonicPair {
            h,
            g,
            k,
            lambda: None,
        })
    }

    pub fn h(&self) -> &CoefficientSeries {
        &self.h
    }

    pub fn g(&self) -> &CoefficientSeries {
        &self.g
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> Option<Complex64> {
        self.lambda
    }
}

fn check_k(k: f64) -> Result<()> {
    if (0.0..=1.0).contains(&k) {
        Ok(())
    } else {
        Err(domain(format!("dilatation bound k = {k} outside [0, 1]")))
    }
}

/// `λ = e^{2πiθ}` for an angle given in turns.
pub fn lambda_from_turns(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * turns)
}

/// Builds `g = λk(h − h(0))`, i.e. `bₙ = λk aₙ` for `n ≥ 1` and `b₀ = 0`.
pub fn construct_pair(h: CoefficientSeries, k: f64, lambda: Complex64) -> Result<HarmonicPair> {
    check_k(k)?;
    if (lambda.norm() - 1.0).abs() > UNIT_TOL {
        return Err(domain(format!("|lambda| = {} is not 1", lambda.norm())));
    }
    let scale = lambda * k;
    let mut coeffs: Vec<Complex64> = h.coeffs().iter().map(|&a| scale * a).collect();
    coeffs[0] = Complex64::new(0.0, 0.0);
    let tail = h.tail_bound().map(|t| t.scaled(k));
    let g = CoefficientSeries::new(coeffs, ClassTag::Generic, tail);
    Ok(HarmonicPair {
        h,
        g,
        k,
        lambda: Some(lambda),
    })
}

/// Both sides of the weighted quadratic coefficient bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaCCheck {
    /// `Σ|bₙ|²φₙ(r)`.
    pub lhs: Estimate,
    /// `k²Σ|aₙ|²φₙ(r)`.
    pub rhs: Estimate,
    pub holds: bool,
    /// `rhs − lhs` on the truncated sums.
    pub margin: f64,
}

pub fn lemma_c_check(pair: &HarmonicPair, w: &WeightSequence, r: f64) -> Result<LemmaCCheck> {
    if !w.is_decreasing() {
        return Err(contract(
            "the quadratic bound needs a decreasing weight sequence",
        ));
    }
    let lhs = weighted_coefficient_sum(&pair.g, w, r, 2)?;
    let base = weighted_coefficient_sum(&pair.h, w, r, 2)?;
    let k2 = pair.k * pair.k;
    let rhs = Estimate {
        value: k2 * base.value,
        error: k2 * base.error,
        certified: base.certified,
    };
    Ok(LemmaCCheck {
        lhs,
        rhs,
        holds: lhs.value <= rhs.upper() + LEMMA_TOL,
        margin: rhs.value - lhs.value,
    })
}

/// Which harmonic Bohr sum to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HarmonicForm {
    /// `|a₀|^p + Σ|aₙ|φₙ + Σ|bₙ|φₙ`, requires `φ₀ ≡ 1`.
    WithConstant,
    /// `Σ|aₙ|φₙ + Σ|bₙ|φₙ`.
    WithoutConstant,
}

pub fn harmonic_bohr_sum(
    pair: &HarmonicPair,
    w: &WeightSequence,
    p: f64,
    r: f64,
    form: HarmonicForm,
) -> Result<Estimate> {
    let tails = weighted_coefficient_sum(&pair.h, w, r, 1)?
        .combine(weighted_coefficient_sum(&pair.g, w, r, 1)?);
    match form {
        HarmonicForm::WithConstant => {
            check_exponent(p, 2.0)?;
            if !w.phi0_is_one() {
                return Err(contract(
                    "the harmonic Bohr sum with constant term requires phi0 = 1",
                ));
            }
            Ok(Estimate::exact(pair.h.coeff_abs(0).powf(p)).combine(tails))
        }
        HarmonicForm::WithoutConstant => Ok(tails),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{bohr_sum, expand_extremal, schur_sample, ExtremalFamily};
    use crate::weights::Phi0Config;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn construct_examples() {
        let h = schur_sample(8, 1).unwrap();
        let pair = construct_pair(h.clone(), 0.0, one()).unwrap();
        assert!(pair.g().coeffs().iter().all(|b| b.norm() == 0.0));

        let h = expand_extremal(ExtremalFamily::BPrimeExtremal { a: 0.4 }, 10).unwrap();
        let pair = construct_pair(h.clone(), 1.0, one()).unwrap();
        assert_eq!(pair.g().coeffs()[0].norm(), 0.0);
        assert_eq!(&pair.g().coeffs()[1..], &h.coeffs()[1..]);

        let h = CoefficientSeries::from_real(&[0.3, 0.7, 0.0], ClassTag::Generic, None);
        let pair = construct_pair(h, 0.5, Complex64::i()).unwrap();
        assert!((pair.g().coeffs()[1] - Complex64::new(0.0, 0.35)).norm() < 1e-16);

        let h = CoefficientSeries::from_real(&[0.3, 0.7], ClassTag::Generic, None);
        assert!(construct_pair(h.clone(), 1.2, one()).is_err());
        assert!(construct_pair(h, 0.5, Complex64::new(1.1, 0.0)).is_err());
        assert!((lambda_from_turns(0.25) - Complex64::i()).norm() < 1e-15);
    }

    #[test]
    fn quadratic_bound_examples() {
        let w = WeightSequence::power();
        let h = schur_sample(64, 9).unwrap();
        let pair = construct_pair(h.clone(), 0.5, lambda_from_turns(0.3)).unwrap();
        let check = lemma_c_check(&pair, &w, 0.5).unwrap();
        // oracle: direct summation of both quadratic sums to N = 64
        let direct_a: f64 = (1..=64)
            .map(|n| h.coeff_abs(n).powi(2) * 0.5f64.powi(n as i32))
            .sum();
        let direct_b: f64 = (1..=64)
            .map(|n| pair.g().coeff_abs(n).powi(2) * 0.5f64.powi(n as i32))
            .sum();
        assert!((check.lhs.value - direct_b).abs() < 1e-14);
        assert!((check.rhs.value - 0.25 * direct_a).abs() < 1e-14);
        assert!(check.holds);
        assert!(check.margin.abs() < 1e-14);

        let zero = construct_pair(h, 0.0, one()).unwrap();
        let check = lemma_c_check(&zero, &w, 0.5).unwrap();
        assert_eq!(check.lhs.value, 0.0);
        assert!(check.holds);
    }

    #[test]
    fn quadratic_bound_needs_decreasing_weights() {
        let w = WeightSequence::scaled_power(vec![1.0, 3.0]).unwrap();
        let pair = construct_pair(schur_sample(8, 2).unwrap(), 0.5, one()).unwrap();
        assert!(lemma_c_check(&pair, &w, 0.5).is_err());
    }

    #[test]
    fn harmonic_sum_examples() {
        let w = WeightSequence::power();
        let h = expand_extremal(ExtremalFamily::BPrimeExtremal { a: 0.5 }, 200).unwrap();
        let r = 1.0 / 3.0;

        let pair = construct_pair(h.clone(), 0.0, one()).unwrap();
        let s = harmonic_bohr_sum(&pair, &w, 1.0, r, HarmonicForm::WithConstant).unwrap();
        let scalar = bohr_sum(&h, &w, 1.0, r).unwrap();
        assert!((s.value - scalar.value).abs() < 1e-15);
        assert!((s.value - 0.7).abs() < 1e-14);

        let pair = construct_pair(h, 1.0, one()).unwrap();
        let s = harmonic_bohr_sum(&pair, &w, 1.0, r, HarmonicForm::WithConstant).unwrap();
        assert!((s.value - 0.9).abs() < 1e-14);

        let constant = CoefficientSeries::constant(one(), 16);
        let pair = construct_pair(constant, 0.7, one()).unwrap();
        let s = harmonic_bohr_sum(&pair, &w, 1.0, 0.6, HarmonicForm::WithConstant).unwrap();
        assert_eq!(s.value, 1.0);
        let s = harmonic_bohr_sum(&pair, &w, 1.0, 0.6, HarmonicForm::WithoutConstant).unwrap();
        assert_eq!(s.value, 0.0);

        let shifted = w.with_phi0(Phi0Config::Constant(0.5)).unwrap();
        assert!(harmonic_bohr_sum(&pair, &shifted, 1.0, 0.6, HarmonicForm::WithConstant).is_err());
    }
}
