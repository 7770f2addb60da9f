//! Subordinates `g = f ∘ ω` of univalent and convex models.
//!
//! Only `dist(f(0), ∂Ω)` and `f′(0)` enter the coefficient bounds, so the
//! geometry of a model is reduced to those two numbers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, Result};
use crate::estimate::Estimate;
use crate::harmonic::{harmonic_bohr_sum, HarmonicForm, HarmonicPair};
use crate::series::{
    compose, expand_extremal, weighted_coefficient_sum, ClassCheck, CoefficientSeries,
    ExtremalFamily, TailBound,
};
use crate::weights::WeightSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// `z/(1−z)²`, univalent onto the plane minus `(−∞, −1/4]`.
    Koebe,
    /// `1/(1−z)`, convex onto `Re w > 1/2`.
    HalfPlane,
    /// Caller-provided `(dist, f′(0))`, taken on trust.
    UserSupplied,
}

impl std::str::FromStr for Model {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "koebe" => Ok(Model::Koebe),
            "halfplane" => Ok(Model::HalfPlane),
            "user" | "usersupplied" => Ok(Model::UserSupplied),
            _ => Err(crate::error::Error::Config(format!("unknown model '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainGeometry {
    pub model: Model,
    /// `dist(f(0), ∂Ω)`.
    pub dist: f64,
    pub fprime0: Complex64,
    pub convex: bool,
}

impl DomainGeometry {
    /// Geometry of a built-in model.
    ///
    /// # Panics
    /// For [`Model::UserSupplied`]; use [`DomainGeometry::user_supplied`].
    pub fn of(model: Model) -> Self {
        match model {
            Model::Koebe => DomainGeometry {
                model,
                dist: 0.25,
                fprime0: Complex64::new(1.0, 0.0),
                convex: false,
            },
            Model::HalfPlane => DomainGeometry {
                model,
                dist: 0.5,
                fprime0: Complex64::new(1.0, 0.0),
                convex: true,
            },
            Model::UserSupplied => panic!("user-supplied geometry needs explicit data"),
        }
    }

    /// Checks `c·|f′(0)| ≤ dist ≤ |f′(0)|` with `c = 1/2` for convex and
    /// `c = 1/4` for univalent maps.
    pub fn user_supplied(dist: f64, fprime0: Complex64, convex: bool) -> Result<Self> {
        if !(dist > 0.0 && dist.is_finite()) {
            return Err(domain(format!(
                "boundary distance must be positive, got {dist}"
            )));
        }
        let d = fprime0.norm();
        let lower = if convex { 0.5 * d } else { 0.25 * d };
        if dist < lower || dist > d {
            return Err(domain(format!(
                "dist = {dist} outside the band [{lower}, {d}] allowed by |f'(0)| = {d}"
            )));
        }
        Ok(DomainGeometry {
            model: Model::UserSupplied,
            dist,
            fprime0,
            convex,
        })
    }

    /// Bound on `|bₙ|` for every subordinate `g ≺ f`.
    pub fn coefficient_bound(&self, n: usize) -> f64 {
        if self.convex {
            2.0 * self.dist
        } else {
            4.0 * n as f64 * self.dist
        }
    }

    /// Tail bound on subordinate coefficients, from `|bₙ| ≤ |f′(0)|` (convex)
    /// or `|bₙ| ≤ n|f′(0)|` (univalent).
    pub fn tail_bound(&self) -> TailBound {
        if self.convex {
            TailBound::Uniform(self.fprime0.norm())
        } else {
            TailBound::Linear(self.fprime0.norm())
        }
    }
}

pub fn boundary_distance(model: Model) -> Result<DomainGeometry> {
    match model {
        Model::UserSupplied => Err(domain("user-supplied models carry their own distance")),
        m => Ok(DomainGeometry::of(m)),
    }
}

/// Taylor expansion of a built-in model.
pub fn model_series(model: Model, order: usize) -> Result<CoefficientSeries> {
    match model {
        Model::Koebe => expand_extremal(ExtremalFamily::Koebe, order),
        Model::HalfPlane => expand_extremal(ExtremalFamily::HalfPlane, order),
        Model::UserSupplied => Err(domain("no built-in expansion for a user-supplied model")),
    }
}

/// `f ∘ ω` with the tail bound implied by the geometry of `f`.
pub fn subordinate(
    f: &CoefficientSeries,
    geom: &DomainGeometry,
    omega: &CoefficientSeries,
) -> Result<CoefficientSeries> {
    Ok(compose(f, omega)?.with_tail(Some(geom.tail_bound())))
}

/// `g = model ∘ ω` for a built-in model.
pub fn subordinate_to_model(model: Model, omega: &CoefficientSeries) -> Result<CoefficientSeries> {
    let geom = boundary_distance(model)?;
    subordinate(&model_series(model, omega.order())?, &geom, omega)
}

/// Margins `bound − |bₙ|` for `1 ≤ n ≤ N`, where the bound is `4n·dist`
/// (univalent) or `2·dist` (convex).
pub fn coefficient_bound_check(
    g: &CoefficientSeries,
    geom: &DomainGeometry,
    convex: bool,
) -> ClassCheck {
    let geom = DomainGeometry { convex, ..*geom };
    let margins: Vec<f64> = (1..=g.order())
        .map(|n| geom.coefficient_bound(n) - g.coeff_abs(n))
        .collect();
    let worst_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    ClassCheck {
        holds: worst_margin >= -crate::series::CLASS_TOL,
        worst_margin,
        margins,
    }
}

/// `Σ_{n≥1} |bₙ| φₙ(r)`.
pub fn subordination_bohr_sum(
    g: &CoefficientSeries,
    w: &WeightSequence,
    r: f64,
) -> Result<Estimate> {
    weighted_coefficient_sum(g, w, r, 1)
}

/// `Σ_{n≥1} |aₙ| φₙ(r) + Σ_{n≥1} |bₙ| φₙ(r)` for `h` subordinate to a convex
/// model.
pub fn harmonic_subordination_sum(
    pair: &HarmonicPair,
    w: &WeightSequence,
    r: f64,
) -> Result<Estimate> {
    if !w.is_decreasing() {
        return Err(contract(
            "harmonic subordination sums need a decreasing weight sequence",
        ));
    }
    harmonic_bohr_sum(pair, w, 1.0, r, HarmonicForm::WithoutConstant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::construct_pair;
    use crate::series::{schur_sample, ClassTag};

    #[test]
    fn built_in_distances() {
        assert_eq!(boundary_distance(Model::Koebe).unwrap().dist, 0.25);
        assert_eq!(boundary_distance(Model::HalfPlane).unwrap().dist, 0.5);
        assert!(boundary_distance(Model::UserSupplied).is_err());
        let g = DomainGeometry::user_supplied(1.0, Complex64::new(1.0, 0.0), false).unwrap();
        assert_eq!(g.dist, 1.0);
        assert!(DomainGeometry::user_supplied(1.5, Complex64::new(1.0, 0.0), false).is_err());
        assert!(DomainGeometry::user_supplied(0.3, Complex64::new(1.0, 0.0), true).is_err());
        assert!(DomainGeometry::user_supplied(0.0, Complex64::new(1.0, 0.0), true).is_err());
    }

    #[test]
    fn coefficient_bound_examples() {
        let koebe = model_series(Model::Koebe, 20).unwrap();
        let check = coefficient_bound_check(&koebe, &DomainGeometry::of(Model::Koebe), false);
        assert!(check.holds);
        assert!(check.margins.iter().all(|&m| m == 0.0));

        let half = model_series(Model::HalfPlane, 20).unwrap();
        let geom = DomainGeometry::of(Model::HalfPlane);
        let check = coefficient_bound_check(&half, &geom, true);
        assert!(check.margins.iter().all(|&m| m == 0.0));

        let g =
            subordinate_to_model(Model::HalfPlane, &CoefficientSeries::monomial(2, 20)).unwrap();
        let check = coefficient_bound_check(&g, &geom, true);
        assert!(check.holds);
        assert_eq!(check.margins[0], 1.0);
        assert_eq!(check.margins[1], 0.0);
    }

    #[test]
    fn random_subordinates_obey_coefficient_bounds() {
        for seed in 0..50 {
            let omega = schur_sample(24, seed).unwrap().shifted();
            assert_eq!(omega.class(), ClassTag::SchwarzFunction);
            for model in [Model::Koebe, Model::HalfPlane] {
                let geom = DomainGeometry::of(model);
                let g = subordinate_to_model(model, &omega).unwrap();
                assert!(
                    coefficient_bound_check(&g, &geom, geom.convex).holds,
                    "seed {seed} {model:?}"
                );
            }
        }
    }

    #[test]
    fn subordination_sum_examples() {
        let w = WeightSequence::power();
        let koebe = model_series(Model::Koebe, 64).unwrap();
        let r = 3.0 - 8f64.sqrt();
        let s = subordination_bohr_sum(&koebe, &w, r).unwrap();
        assert!(s.certified && s.error < 1e-40);
        assert!((s.value - 0.25).abs() < 1e-14);

        let half = model_series(Model::HalfPlane, 64).unwrap();
        let s = subordination_bohr_sum(&half, &w, 1.0 / 3.0).unwrap();
        assert!((s.value - 0.5).abs() < 1e-14);

        let zero = CoefficientSeries::constant(Complex64::new(0.2, 0.0), 10);
        assert_eq!(subordination_bohr_sum(&zero, &w, 0.5).unwrap().value, 0.0);
    }

    #[test]
    fn harmonic_subordination_examples() {
        let w = WeightSequence::power();
        let h = model_series(Model::HalfPlane, 64).unwrap();
        let one = Complex64::new(1.0, 0.0);

        let pair = construct_pair(h.clone(), 1.0, one).unwrap();
        let s = harmonic_subordination_sum(&pair, &w, 0.2).unwrap();
        assert!((s.value - 0.5).abs() < 1e-14);

        let pair = construct_pair(h.clone(), 0.5, one).unwrap();
        let s = harmonic_subordination_sum(&pair, &w, 0.25).unwrap();
        // direct summation oracle: 1.5 Σ_{n≤64} 4^{-n}
        let direct: f64 = (1..=64).map(|n| 1.5 * 0.25f64.powi(n)).sum();
        assert!((s.value - direct).abs() < 1e-15);
        assert!((s.value - 0.5).abs() < 1e-14);

        let pair = construct_pair(h.clone(), 0.0, one).unwrap();
        let a = harmonic_subordination_sum(&pair, &w, 0.3).unwrap();
        let b = subordination_bohr_sum(&h, &w, 0.3).unwrap();
        assert_eq!(a.value, b.value);

        let rising = WeightSequence::scaled_power(vec![1.0, 3.0]).unwrap();
        assert!(harmonic_subordination_sum(&pair, &rising, 0.3).is_err());
    }
}
