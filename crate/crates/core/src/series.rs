//! Truncated Taylor series of analytic functions on the unit disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, Result};
use crate::estimate::Estimate;
use crate::weights::WeightSequence;

/// Default truncation order for experiments.
pub const DEFAULT_ORDER: usize = 64;

/// Largest admissible Schur parameter modulus.
pub const SCHUR_MAX_MODULUS: f64 = 1.0 - 1e-9;

/// Radius of the disk random Schur parameters are drawn from.
pub const SCHUR_SAMPLE_RADIUS: f64 = 0.98;

/// Slack used by the coefficient-class predicates.
pub const CLASS_TOL: f64 = 1e-12;

/// Threshold below which a coefficient counts as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Largest constant term accepted for an inner function of a composition.
pub const ORIGIN_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    /// Analytic self-maps of the disk (class `𝓑`).
    SchwarzClassB,
    /// `𝓑` with `|aₙ| ≤ 1 − |a₀|` for `n ≥ 1`.
    ClassBPrime,
    /// One of the built-in univalent models.
    UnivalentModel,
    /// Self-map of the disk fixing the origin.
    SchwarzFunction,
    Generic,
}

/// What is known about the coefficients past the truncation order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBound {
    /// The series is a polynomial.
    Zero,
    /// `|aₙ| ≤ A` for every `n > N`.
    Uniform(f64),
    /// `|aₙ| ≤ C·n` for every `n > N`.
    Linear(f64),
}

impl TailBound {
    pub fn scaled(self, factor: f64) -> TailBound {
        match self {
            TailBound::Zero => TailBound::Zero,
            TailBound::Uniform(a) => TailBound::Uniform(a * factor),
            TailBound::Linear(c) => TailBound::Linear(c * factor),
        }
    }
}

/// Coefficients `a₀..a_N` of a truncated power series with class metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    coeffs: Vec<Complex64>,
    class: ClassTag,
    tail: Option<TailBound>,
}

impl CoefficientSeries {
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>, class: ClassTag, tail: Option<TailBound>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least the constant term"
        );
        CoefficientSeries {
            coeffs,
            class,
            tail,
        }
    }

    pub fn from_real(coeffs: &[f64], class: ClassTag, tail: Option<TailBound>) -> Self {
        Self::new(
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            class,
            tail,
        )
    }

    /// The constant function `c`, padded with zeros to `order`.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = c;
        let class = if c.norm() <= 1.0 {
            ClassTag::SchwarzClassB
        } else {
            ClassTag::Generic
        };
        Self::new(coeffs, class, Some(TailBound::Zero))
    }

    /// `ω(z) = zᵐ` truncated at `order`.
    pub fn monomial(m: usize, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        if m <= order {
            coeffs[m] = Complex64::new(1.0, 0.0);
        }
        let class = if m >= 1 {
            ClassTag::SchwarzFunction
        } else {
            ClassTag::SchwarzClassB
        };
        Self::new(coeffs, class, Some(TailBound::Zero))
    }

    /// The identity `ω(z) = z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(1, order)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn class(&self) -> ClassTag {
        self.class
    }

    pub fn tail_bound(&self) -> Option<TailBound> {
        self.tail
    }

    pub fn with_tail(mut self, tail: Option<TailBound>) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_class(mut self, class: ClassTag) -> Self {
        self.class = class;
        self
    }

    /// Truncates (or zero-pads) to `order`.
    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        let tail = if order >= self.order() {
            self.tail
        } else {
            None
        };
        CoefficientSeries {
            coeffs,
            class: self.class,
            tail,
        }
    }

    /// `z·f(z)`, keeping the order.
    pub fn shifted(&self) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len()];
        coeffs[1..].copy_from_slice(&self.coeffs[..self.coeffs.len() - 1]);
        let class = match self.class {
            ClassTag::SchwarzClassB | ClassTag::SchwarzFunction => ClassTag::SchwarzFunction,
            _ => ClassTag::Generic,
        };
        let tail = match class {
            ClassTag::SchwarzFunction => Some(TailBound::Uniform(1.0)),
            _ => None,
        };
        CoefficientSeries {
            coeffs,
            class,
            tail,
        }
    }

    pub fn coeff_abs(&self, n: usize) -> f64 {
        self.coeffs.get(n).map_or(0.0, |c| c.norm())
    }

    /// Evaluates the truncated polynomial at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    coeffs: Vec<[f64; 2]>,
    class: ClassTag,
    order: usize,
    tail_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail_growth: Option<TailGrowth>,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum TailGrowth {
    Uniform,
    Linear,
}

impl Serialize for CoefficientSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (tail_bound, tail_growth) = match self.tail {
            None => (None, None),
            Some(TailBound::Zero) => (Some(0.0), None),
            Some(TailBound::Uniform(a)) => (Some(a), None),
            Some(TailBound::Linear(c)) => (Some(c), Some(TailGrowth::Linear)),
        };
        SeriesJson {
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            class: self.class,
            order: self.order(),
            tail_bound,
            tail_growth,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoefficientSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(d)?;
        if raw.coeffs.is_empty() || raw.coeffs.len() != raw.order + 1 {
            return Err(D::Error::custom(format!(
                "order {} does not match {} coefficients",
                raw.order,
                raw.coeffs.len()
            )));
        }
        let tail = match (raw.tail_bound, raw.tail_growth) {
            (None, _) => None,
            (Some(b), _) if !(b >= 0.0) => {
                return Err(D::Error::custom("tail_bound must be nonnegative"))
            }
            (Some(b), Some(TailGrowth::Linear)) => Some(TailBound::Linear(b)),
            (Some(0.0), _) => Some(TailBound::Zero),
            (Some(b), _) => Some(TailBound::Uniform(b)),
        };
        Ok(CoefficientSeries::new(
            raw.coeffs
                .iter()
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
            raw.class,
            tail,
        ))
    }
}

/// Explicit functions showing that a radius cannot be improved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ExtremalFamily {
    /// `(a − (1−a+a²)z)/(1 − az) = a − (1−a)Σ a^{n−1} zⁿ`.
    BPrimeExtremal { a: f64 },
    /// `z/(1−z)² = Σ n zⁿ`.
    Koebe,
    /// `1/(1−z) = Σ zⁿ`, mapping onto `Re w > 1/2`.
    HalfPlane,
    /// `(a − z)/(1 − az) = a − (1−a²)Σ a^{n−1} zⁿ`.
    DiskAutomorphism { a: f64 },
}

pub fn expand_extremal(family: ExtremalFamily, order: usize) -> Result<CoefficientSeries> {
    if order < 1 {
        return Err(domain("expansion order must be at least 1"));
    }
    let geometric = |a: f64, scale: f64| -> Vec<Complex64> {
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(Complex64::new(a, 0.0));
        let mut power = 1.0;
        for _ in 1..=order {
            coeffs.push(Complex64::new(-scale * power, 0.0));
            power *= a;
        }
        coeffs
    };
    let check_a = |a: f64| {
        if (0.0..1.0).contains(&a) {
            Ok(())
        } else {
            Err(domain(format!("extremal parameter a = {a} outside [0,1)")))
        }
    };
    Ok(match family {
        ExtremalFamily::BPrimeExtremal { a } => {
            check_a(a)?;
            let tail = TailBound::Uniform((1.0 - a) * a.powi(order as i32));
            CoefficientSeries::new(geometric(a, 1.0 - a), ClassTag::ClassBPrime, Some(tail))
        }
        ExtremalFamily::DiskAutomorphism { a } => {
            check_a(a)?;
            let tail = TailBound::Uniform((1.0 - a * a) * a.powi(order as i32));
            CoefficientSeries::new(
                geometric(a, 1.0 - a * a),
                ClassTag::SchwarzClassB,
                Some(tail),
            )
        }
        ExtremalFamily::Koebe => CoefficientSeries::new(
            (0..=order).map(|n| Complex64::new(n as f64, 0.0)).collect(),
            ClassTag::UnivalentModel,
            Some(TailBound::Linear(1.0)),
        ),
        ExtremalFamily::HalfPlane => CoefficientSeries::new(
            vec![Complex64::new(1.0, 0.0); order + 1],
            ClassTag::UnivalentModel,
            Some(TailBound::Uniform(1.0)),
        ),
    })
}

fn mul_truncated(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x.norm_sqr() == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Power-series quotient `num/den`; `den[0]` must be nonzero.
fn div_truncated(num: &[Complex64], den: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for n in 0..len {
        let mut acc = num.get(n).copied().unwrap_or_default();
        for j in 1..=n.min(den.len() - 1) {
            acc -= den[j] * out[n - j];
        }
        out[n] = acc / den[0];
    }
    out
}

/// Taylor coefficients of the function of class `𝓑` with the given leading
/// Schur parameters and all later parameters zero.
///
/// The function is rebuilt from the innermost level outwards through
/// `f_j = (γ_j + z f_{j+1}) / (1 + conj(γ_j) z f_{j+1})`.
pub fn schur_from_params(params: &[Complex64], order: usize) -> Result<CoefficientSeries> {
    if order < 1 {
        return Err(domain("order must be at least 1"));
    }
    if let Some(bad) = params.iter().find(|g| !(g.norm() <= SCHUR_MAX_MODULUS)) {
        return Err(domain(format!(
            "Schur parameter {bad} has modulus {} > {SCHUR_MAX_MODULUS}",
            bad.norm()
        )));
    }
    let len = order + 1;
    let mut f = vec![Complex64::new(0.0, 0.0); len];
    for &gamma in params.iter().rev() {
        let mut zf = vec![Complex64::new(0.0, 0.0); len];
        zf[1..].copy_from_slice(&f[..len - 1]);
        let mut num = zf.clone();
        num[0] += gamma;
        let mut den: Vec<Complex64> = zf.iter().map(|&c| gamma.conj() * c).collect();
        den[0] += 1.0;
        f = div_truncated(&num, &den, len);
    }
    let a0 = f[0].norm();
    Ok(CoefficientSeries::new(
        f,
        ClassTag::SchwarzClassB,
        Some(TailBound::Uniform(1.0 - a0 * a0)),
    ))
}

/// Seeded random function of class `𝓑`: `order + 1` Schur parameters drawn
/// uniformly from the disk of radius [`SCHUR_SAMPLE_RADIUS`].
pub fn schur_sample(order: usize, seed: u64) -> Result<CoefficientSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<Complex64> = (0..=order)
        .map(|_| {
            let rho = SCHUR_SAMPLE_RADIUS * rng.gen::<f64>().sqrt();
            Complex64::from_polar(rho, TAU * rng.gen::<f64>())
        })
        .collect();
    schur_from_params(&params, order)
}

/// Seeded coefficient list obeying `|aₙ| ≤ 1 − a₀`.
///
/// Only the coefficient bound is enforced; the result is not certified to
/// lie in `𝓑`, so checks built on it are coefficient-level. The series is
/// treated as a polynomial.
pub fn sample_bprime_coeffs(order: usize, seed: u64) -> Result<CoefficientSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a0 = rng.gen::<f64>();
    Ok(bprime_with_constant(&mut rng, a0, order))
}

/// As [`sample_bprime_coeffs`] with the constant term fixed.
pub fn sample_bprime_with_a0(order: usize, a0: f64, seed: u64) -> Result<CoefficientSeries> {
    if !(0.0..1.0).contains(&a0) {
        return Err(domain(format!("a0 = {a0} outside [0,1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(bprime_with_constant(&mut rng, a0, order))
}

fn bprime_with_constant(rng: &mut ChaCha8Rng, a0: f64, order: usize) -> CoefficientSeries {
    let order = order.max(1);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Complex64::new(a0, 0.0));
    for _ in 1..=order {
        let rho = rng.gen::<f64>() * (1.0 - a0);
        coeffs.push(Complex64::from_polar(rho, TAU * rng.gen::<f64>()));
    }
    CoefficientSeries::new(coeffs, ClassTag::ClassBPrime, Some(TailBound::Zero))
}

/// Outcome of a coefficient-class predicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassCheck {
    pub holds: bool,
    /// Smallest `bound − |aₙ|`; `+∞` when there is nothing to check.
    pub worst_margin: f64,
    /// `bound − |aₙ|` for the checked indices.
    pub margins: Vec<f64>,
}

impl ClassCheck {
    fn from_margins(margins: Vec<f64>, extra: bool) -> Self {
        let worst_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
        ClassCheck {
            holds: extra && worst_margin >= -CLASS_TOL,
            worst_margin,
            margins,
        }
    }
}

/// Checks the coefficient inequalities defining `tag` up to the truncation
/// order. Tags without coefficient inequalities always hold.
pub fn is_in_class(s: &CoefficientSeries, tag: ClassTag) -> ClassCheck {
    let a0 = s.coeff_abs(0);
    let bound = match tag {
        ClassTag::SchwarzClassB => 1.0 - a0 * a0,
        ClassTag::ClassBPrime => 1.0 - a0,
        ClassTag::SchwarzFunction => 1.0,
        ClassTag::UnivalentModel | ClassTag::Generic => {
            return ClassCheck::from_margins(Vec::new(), true);
        }
    };
    let margins = (1..=s.order()).map(|n| bound - s.coeff_abs(n)).collect();
    let normalized = tag != ClassTag::SchwarzFunction || a0 <= ORIGIN_TOL;
    let holds_a0 = tag == ClassTag::SchwarzFunction || a0 <= 1.0;
    ClassCheck::from_margins(margins, normalized && holds_a0)
}

/// Gap predicate: `a_{mn} = 0` for every `mn ≤ N`, `n ≥ 1`.
pub fn gap_check(s: &CoefficientSeries, stride: usize) -> Result<ClassCheck> {
    if stride < 2 {
        return Err(domain(format!("gap stride must exceed 1, got {stride}")));
    }
    let margins: Vec<f64> = (stride..=s.order())
        .step_by(stride)
        .map(|n| ZERO_TOL - s.coeff_abs(n))
        .collect();
    let worst_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ClassCheck {
        holds: worst_margin >= 0.0,
        worst_margin,
        margins,
    })
}

/// `Σ_{n≥1} |aₙ|^e φₙ(r)` for `e ∈ {1, 2}` with its truncation error.
pub fn weighted_coefficient_sum(
    s: &CoefficientSeries,
    w: &WeightSequence,
    r: f64,
    exponent: i32,
) -> Result<Estimate> {
    w.check_r(r)?;
    let n_top = s.order();
    let known = w.explicit_len().unwrap_or(usize::MAX).min(n_top);
    let term = |n: usize| s.coeff_abs(n).powi(exponent);
    let value: f64 = (1..=known).map(|n| term(n) * w.weight(n, r)).sum();
    let mut error = 0.0;
    if known < n_top {
        // coefficients we know, weights we only bound
        let worst = (known + 1..=n_top).map(term).fold(0.0, f64::max);
        error += worst * w.tail_majorant(known, r);
    }
    let mut certified = true;
    match s.tail_bound() {
        Some(TailBound::Zero) => {}
        Some(TailBound::Uniform(a)) => error += a.powi(exponent) * w.tail_majorant(n_top, r),
        Some(TailBound::Linear(c)) if exponent == 1 => match w.weighted_tail_majorant(n_top, r) {
            Some(t) => error += c * t,
            None => certified = false,
        },
        Some(TailBound::Linear(_)) | None => certified = false,
    }
    Ok(Estimate {
        value,
        error,
        certified,
    })
}

/// Weighted Bohr sum `|a₀|^p φ₀(r) + Σ_{n≥1} |aₙ| φₙ(r)`.
pub fn bohr_sum(s: &CoefficientSeries, w: &WeightSequence, p: f64, r: f64) -> Result<Estimate> {
    check_exponent(p, 2.0)?;
    let head = s.coeff_abs(0).powf(p) * w.phi0(r);
    Ok(Estimate::exact(head).combine(weighted_coefficient_sum(s, w, r, 1)?))
}

pub(crate) fn check_exponent(p: f64, max: f64) -> Result<()> {
    if p > 0.0 && p <= max {
        Ok(())
    } else {
        Err(domain(format!("exponent p = {p} outside (0, {max}]")))
    }
}

/// Truncated Taylor series of `f ∘ ω` for `ω(0) = 0`.
///
/// Coefficient `n` of the composition only involves the first `n`
/// coefficients of each factor, so the result is exact to
/// `min(f.order, ω.order)`.
pub fn compose(f: &CoefficientSeries, omega: &CoefficientSeries) -> Result<CoefficientSeries> {
    if omega.coeff_abs(0) > ORIGIN_TOL {
        return Err(contract(format!(
            "inner function has constant term of modulus {} > {ORIGIN_TOL}",
            omega.coeff_abs(0)
        )));
    }
    let order = f.order().min(omega.order());
    let len = order + 1;
    let mut inner = omega.coeffs()[..len].to_vec();
    inner[0] = Complex64::new(0.0, 0.0);
    let mut acc = vec![Complex64::new(0.0, 0.0); len];
    for k in (0..len).rev() {
        acc = mul_truncated(&acc, &inner, len);
        acc[0] += f.coeffs()[k];
    }
    let (class, tail) = match f.class() {
        ClassTag::SchwarzClassB => {
            let b0 = acc[0].norm();
            (
                ClassTag::SchwarzClassB,
                Some(TailBound::Uniform(1.0 - b0 * b0)),
            )
        }
        ClassTag::SchwarzFunction => (ClassTag::SchwarzFunction, Some(TailBound::Uniform(1.0))),
        _ => (ClassTag::Generic, None),
    };
    Ok(CoefficientSeries::new(acc, class, tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Brute-force substitution: full products of ω, summed, then truncated.
    fn substitute(f: &[Complex64], omega: &[Complex64], order: usize) -> Vec<Complex64> {
        let mut out = vec![c(0.0); f.len() * omega.len() + 1];
        let mut power = vec![c(1.0)];
        for &fk in f {
            for (i, &p) in power.iter().enumerate() {
                out[i] += fk * p;
            }
            let mut next = vec![c(0.0); power.len() + omega.len() - 1];
            for (i, &p) in power.iter().enumerate() {
                for (j, &q) in omega.iter().enumerate() {
                    next[i + j] += p * q;
                }
            }
            power = next;
        }
        out.truncate(order + 1);
        out
    }

    #[test]
    fn extremal_expansions() {
        let f = expand_extremal(ExtremalFamily::BPrimeExtremal { a: 0.0 }, 4).unwrap();
        assert_eq!(f.coeffs(), &[c(0.0), c(-1.0), c(0.0), c(0.0), c(0.0)]);
        let f = expand_extremal(ExtremalFamily::BPrimeExtremal { a: 0.5 }, 4).unwrap();
        // long division of (a − (1−a+a²)z) by (1 − az)
        let oracle = div_truncated(&[c(0.5), c(-0.75)], &[c(1.0), c(-0.5)], 5);
        assert_eq!(f.coeffs(), oracle.as_slice());
        assert_eq!(
            f.coeffs(),
            &[c(0.5), c(-0.5), c(-0.25), c(-0.125), c(-0.0625)]
        );
        let k = expand_extremal(ExtremalFamily::Koebe, 4).unwrap();
        assert_eq!(k.coeffs(), &[c(0.0), c(1.0), c(2.0), c(3.0), c(4.0)]);
        assert_eq!(k.class(), ClassTag::UnivalentModel);
        assert!(expand_extremal(ExtremalFamily::BPrimeExtremal { a: 1.0 }, 4).is_err());
        assert!(expand_extremal(ExtremalFamily::HalfPlane, 0).is_err());
    }

    #[test]
    fn bprime_extremal_coefficients_are_exact() {
        let a = 0.5;
        let f = expand_extremal(ExtremalFamily::BPrimeExtremal { a }, 40).unwrap();
        for n in 1..=40 {
            assert_eq!(f.coeffs()[n].re, -(1.0 - a) * a.powi(n as i32 - 1));
        }
    }

    #[test]
    fn single_schur_parameter_gives_constant() {
        let f = schur_from_params(&[c(0.7)], 5).unwrap();
        assert_eq!(
            f.coeffs(),
            &[c(0.7), c(0.0), c(0.0), c(0.0), c(0.0), c(0.0)]
        );
    }

    #[test]
    fn two_level_schur_matches_hand_recursion() {
        let g = 1.0 - 1e-9;
        let f = schur_from_params(&[c(0.0), c(g)], 6).unwrap();
        assert_eq!(f.coeffs()[0], c(0.0));
        assert!((f.coeffs()[1] - c(g)).norm() < 1e-15);
        assert!(f.coeffs()[2..].iter().all(|x| x.norm() < 1e-15));
        assert!(schur_from_params(&[c(1.0)], 3).is_err());
    }

    /// Pointwise continued fraction evaluated on |z| = 0.5, coefficients
    /// recovered by discrete Fourier inversion.
    #[test]
    fn schur_coefficients_match_fourier_inversion() {
        let params = [
            Complex64::new(0.3, -0.2),
            Complex64::new(-0.5, 0.4),
            Complex64::new(0.1, 0.8),
            Complex64::new(0.6, 0.0),
        ];
        let eval = |z: Complex64| {
            let mut f = c(0.0);
            for &g in params.iter().rev() {
                f = (g + z * f) / (c(1.0) + g.conj() * z * f);
            }
            f
        };
        let (m, rho, order) = (128usize, 0.5, 10usize);
        let s = schur_from_params(&params, order).unwrap();
        for n in 0..=order {
            let mut acc = c(0.0);
            for j in 0..m {
                let z = Complex64::from_polar(rho, TAU * j as f64 / m as f64);
                acc += eval(z) * z.powi(-(n as i32));
            }
            let fitted = acc / m as f64;
            assert!((fitted - s.coeffs()[n]).norm() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn schur_samples_are_seeded_and_in_class() {
        let a = schur_sample(16, 11).unwrap();
        assert_eq!(a, schur_sample(16, 11).unwrap());
        assert_ne!(a, schur_sample(16, 12).unwrap());
        assert!(is_in_class(&a, ClassTag::SchwarzClassB).holds);
    }

    #[test]
    fn bprime_samples_respect_bound() {
        for seed in 0..20 {
            let s = sample_bprime_coeffs(8, seed).unwrap();
            assert!(is_in_class(&s, ClassTag::ClassBPrime).holds);
        }
        let s = sample_bprime_with_a0(8, 0.999, 3).unwrap();
        assert!(s.coeffs()[1..].iter().all(|x| x.norm() <= 0.001 + 1e-15));
        let s = sample_bprime_with_a0(8, 0.0, 3).unwrap();
        assert!(s.coeffs()[1..].iter().all(|x| x.norm() <= 1.0));
    }

    #[test]
    fn class_predicates() {
        let f = expand_extremal(ExtremalFamily::BPrimeExtremal { a: 0.5 }, 10).unwrap();
        let check = is_in_class(&f, ClassTag::ClassBPrime);
        assert!(check.holds);
        assert_eq!(check.worst_margin, 0.0);

        let k = expand_extremal(ExtremalFamily::Koebe, 4).unwrap();
        let check = is_in_class(&k, ClassTag::ClassBPrime);
        assert!(!check.holds);
        assert_eq!(check.margins, vec![0.0, -1.0, -2.0, -3.0]);

        let k = CoefficientSeries::constant(c(0.3), 6);
        assert!(is_in_class(&k, ClassTag::SchwarzClassB).holds);
        assert!(is_in_class(&k, ClassTag::ClassBPrime).holds);
        assert!(!is_in_class(&k, ClassTag::SchwarzFunction).holds);
        assert!(is_in_class(&CoefficientSeries::identity(4), ClassTag::SchwarzFunction).holds);
    }

    #[test]
    fn gap_predicate() {
        let even_free = CoefficientSeries::from_real(
            &[0.2, 0.3, 0.0, 0.1, 0.0, 0.4, 0.0],
            ClassTag::Generic,
            None,
        );
        assert!(gap_check(&even_free, 2).unwrap().holds);
        assert!(!gap_check(&even_free, 3).unwrap().holds);
        assert!(gap_check(&even_free, 1).is_err());
    }

    #[test]
    fn bohr_sum_examples() {
        let w = WeightSequence::power();
        let one = CoefficientSeries::constant(c(1.0), 8);
        assert_eq!(bohr_sum(&one, &w, 1.0, 0.7).unwrap().value, 1.0);

        let f = expand_extremal(ExtremalFamily::BPrimeExtremal { a: 0.5 }, 200).unwrap();
        // oracle: direct summation to 200 terms
        let direct = |r: f64| {
            0.5 + (1..=200)
                .map(|n| 0.5 * 0.5f64.powi(n - 1) * r.powi(n))
                .sum::<f64>()
        };
        let s = bohr_sum(&f, &w, 1.0, 1.0 / 3.0).unwrap();
        assert!((direct(1.0 / 3.0) - 0.7).abs() < 1e-15);
        assert!((s.value - 0.7).abs() < 1e-14 && s.certified && s.error < 1e-60);
        let s = bohr_sum(&f, &w, 1.0, 0.5).unwrap();
        assert!((s.value - direct(0.5)).abs() < 1e-15);
        assert!((s.value - (0.5 + 0.5 * (0.5 / 0.75))).abs() < 1e-14);
        assert!(s.value < 1.0);

        assert!(bohr_sum(&f, &w, 0.0, 0.5).is_err());
        assert!(bohr_sum(&f, &w, 2.5, 0.5).is_err());
        assert!(bohr_sum(&f, &w, 1.0, 0.9995).is_err());
    }

    #[test]
    fn bohr_sum_uncertified_without_tail() {
        let s = CoefficientSeries::from_real(&[0.5, 0.1, 0.1], ClassTag::Generic, None);
        let e = bohr_sum(&s, &WeightSequence::power(), 1.0, 0.5).unwrap();
        assert!(!e.certified);
        assert!((e.value - (0.5 + 0.05 + 0.025)).abs() < 1e-15);
    }

    #[test]
    fn compose_examples() {
        let half = expand_extremal(ExtremalFamily::HalfPlane, 8).unwrap();
        let sq = compose(&half, &CoefficientSeries::monomial(2, 8)).unwrap();
        let oracle = substitute(half.coeffs(), CoefficientSeries::monomial(2, 8).coeffs(), 8);
        assert_eq!(sq.coeffs(), oracle.as_slice());
        let expected: Vec<_> = (0..=8)
            .map(|n| c(if n % 2 == 0 { 1.0 } else { 0.0 }))
            .collect();
        assert_eq!(sq.coeffs(), expected.as_slice());

        let f = schur_sample(8, 5).unwrap();
        let same = compose(&f, &CoefficientSeries::identity(8)).unwrap();
        assert_eq!(same.coeffs(), f.coeffs());

        let koebe = expand_extremal(ExtremalFamily::Koebe, 6).unwrap();
        let minus = CoefficientSeries::from_real(
            &[0.0, -1.0],
            ClassTag::SchwarzFunction,
            Some(TailBound::Zero),
        )
        .truncated(6);
        let flipped = compose(&koebe, &minus).unwrap();
        let oracle = substitute(koebe.coeffs(), &[c(0.0), c(-1.0)], 6);
        assert_eq!(flipped.coeffs(), oracle.as_slice());
        assert_eq!(
            flipped.coeffs(),
            &[c(0.0), c(-1.0), c(2.0), c(-3.0), c(4.0), c(-5.0), c(6.0)]
        );

        let shifted = CoefficientSeries::from_real(&[0.1, 0.5], ClassTag::Generic, None);
        assert!(matches!(compose(&koebe, &shifted), Err(Error::Contract(_))));
    }

    #[test]
    fn series_json_shape() {
        let f = expand_extremal(ExtremalFamily::Koebe, 2).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"coeffs":[[0.0,0.0],[1.0,0.0],[2.0,0.0]],"class":"univalent_model","order":2,"tail_bound":1.0,"tail_growth":"linear"}"#
        );
        let back: CoefficientSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"coeffs":[[0.0,0.0]],"class":"generic","order":3,"tail_bound":null}"#;
        assert!(serde_json::from_str::<CoefficientSeries>(bad).is_err());
    }
}
