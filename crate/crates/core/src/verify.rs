//! Experiment harness: inequality sweeps below the radius and sharpness
//! scans above it.
//!
//! Samples are generated from `seed + index`, evaluated independently (in
//! parallel when a worker count is given) and aggregated in index order, so
//! a report depends only on the [`Experiment`] and never on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, Error, Result};
use crate::estimate::Estimate;
use crate::harmonic::{
    construct_pair, harmonic_bohr_sum, lambda_from_turns, HarmonicForm, HarmonicPair,
};
use crate::radius::{closed_form_radius, solve_radius, Equation, RadiusProblem};
use crate::series::{
    bohr_sum, expand_extremal, sample_bprime_coeffs, schur_sample, CoefficientSeries,
    ExtremalFamily, DEFAULT_ORDER,
};
use crate::subordination::{
    harmonic_subordination_sum, model_series, subordinate_to_model, subordination_bohr_sum,
    DomainGeometry, Model,
};
use crate::weights::{WeightConfig, WeightSequence, DEFAULT_TOL};

/// Slack on `sum ≤ bound` before a point counts as a failure.
pub const MARGIN_TOL: f64 = 1e-9;

/// Amount by which an extremal sum must exceed the bound to witness
/// sharpness.
pub const WITNESS_MARGIN: f64 = 1e-6;

/// Offset above `R` at which a sharpness witness is required.
pub const REQUIRED_OFFSET: f64 = 0.01;

/// Smallest truncation order used for extremal functions.
pub const SHARPNESS_ORDER: usize = 1024;

pub const DEFAULT_GRID_POINTS: usize = 50;
pub const DEFAULT_OFFSETS: [f64; 3] = [0.005, 0.01, 0.05];
pub const DEFAULT_A_LADDER: [f64; 3] = [0.9, 0.99, 0.999];

/// Source of the functions fed to an inequality sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// Random members of `𝓑` from seeded Schur parameters.
    SchurClassB,
    /// Random coefficient lists with `|aₙ| ≤ 1 − a₀` (coefficient level).
    BPrimeBound,
    /// `Koebe ∘ ω` for random Schwarz functions `ω = z·(Schur sample)`.
    KoebeSubordinate,
    /// `1/(1−z) ∘ ω` for random Schwarz functions.
    HalfPlaneSubordinate,
    /// The Koebe function itself.
    KoebeIdentity,
    /// `1/(1−z)` itself.
    HalfPlaneIdentity,
}

impl Generator {
    pub fn default_for(theorem: Equation) -> Generator {
        match theorem {
            Equation::ThmA => Generator::SchurClassB,
            Equation::Thm1 | Equation::Thm2 => Generator::BPrimeBound,
            Equation::Thm3 => Generator::KoebeSubordinate,
            Equation::Thm4 | Equation::Thm5 => Generator::HalfPlaneSubordinate,
        }
    }

    fn model(self) -> Option<Model> {
        match self {
            Generator::KoebeSubordinate | Generator::KoebeIdentity => Some(Model::Koebe),
            Generator::HalfPlaneSubordinate | Generator::HalfPlaneIdentity => {
                Some(Model::HalfPlane)
            }
            _ => None,
        }
    }

    fn supports(self, theorem: Equation) -> bool {
        use Generator::*;
        match theorem {
            Equation::ThmA => matches!(self, SchurClassB | BPrimeBound),
            Equation::Thm1 | Equation::Thm2 => self == BPrimeBound,
            Equation::Thm3 => self.model().is_some(),
            Equation::Thm4 | Equation::Thm5 => self.model() == Some(Model::HalfPlane),
        }
    }

    fn coefficient_level(self) -> bool {
        self == Generator::BPrimeBound
    }

    fn draw(self, order: usize, seed: u64) -> Result<CoefficientSeries> {
        match self {
            Generator::SchurClassB => schur_sample(order, seed),
            Generator::BPrimeBound => sample_bprime_coeffs(order, seed),
            Generator::KoebeSubordinate => {
                subordinate_to_model(Model::Koebe, &schur_sample(order, seed)?.shifted())
            }
            Generator::HalfPlaneSubordinate => {
                subordinate_to_model(Model::HalfPlane, &schur_sample(order, seed)?.shifted())
            }
            Generator::KoebeIdentity => model_series(Model::Koebe, order),
            Generator::HalfPlaneIdentity => model_series(Model::HalfPlane, order),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub count: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
    #[serde(default = "default_order")]
    pub order: usize,
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

fn default_p() -> f64 {
    1.0
}

fn default_grid() -> usize {
    DEFAULT_GRID_POINTS
}

fn default_offsets() -> Vec<f64> {
    DEFAULT_OFFSETS.to_vec()
}

fn default_ladder() -> Vec<f64> {
    DEFAULT_A_LADDER.to_vec()
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

/// A fully specified verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub theorem: Equation,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default)]
    pub k: f64,
    #[serde(default)]
    pub weights: WeightConfig,
    pub samples: SamplePlan,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    #[serde(default = "default_offsets")]
    pub sharpness_offsets: Vec<f64>,
    #[serde(default = "default_ladder")]
    pub a_ladder: Vec<f64>,
    /// Rotation of the co-analytic part, `λ = e^{2πiθ}`.
    #[serde(default)]
    pub lambda_turns: f64,
    /// Bisection width for the radius.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Worker threads; never part of the report.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl Experiment {
    /// Defaults for everything but the theorem and the sample plan.
    pub fn new(theorem: Equation, count: usize, seed: u64) -> Self {
        Experiment {
            theorem,
            p: 1.0,
            k: 0.0,
            weights: WeightConfig::default(),
            samples: SamplePlan {
                count,
                seed,
                generator: None,
                order: DEFAULT_ORDER,
            },
            grid_points: DEFAULT_GRID_POINTS,
            sharpness_offsets: default_offsets(),
            a_ladder: default_ladder(),
            lambda_turns: 0.0,
            tol: DEFAULT_TOL,
            workers: None,
        }
    }

    pub fn generator(&self) -> Generator {
        self.samples
            .generator
            .unwrap_or_else(|| Generator::default_for(self.theorem))
    }

    fn prepare(&self) -> Result<Prepared> {
        let weights = WeightSequence::from_config(self.weights.clone())?;
        let problem = RadiusProblem::new(self.theorem, weights.clone(), self.p, self.k)?;
        if self.grid_points < 2 {
            return Err(domain("the r-grid needs at least two points"));
        }
        if self.samples.order < 1 {
            return Err(domain("truncation order must be at least 1"));
        }
        let generator = self.generator();
        if !generator.supports(self.theorem) {
            return Err(contract(format!(
                "generator {generator:?} does not produce inputs for {}",
                self.theorem
            )));
        }
        if let Some(bad) = self.a_ladder.iter().find(|a| !(0.0..1.0).contains(*a)) {
            return Err(domain(format!("ladder value a = {bad} outside [0,1)")));
        }
        if let Some(bad) = self.sharpness_offsets.iter().find(|o| !(**o > 0.0)) {
            return Err(domain(format!("sharpness offset {bad} must be positive")));
        }
        let solved = solve_radius(&problem, self.tol)?;
        let closed_form = if self.weights == WeightConfig::default() {
            Some(closed_form_radius(self.theorem, self.p, self.k)?)
        } else {
            None
        };
        let geometry = match self.theorem {
            Equation::Thm3 | Equation::Thm4 | Equation::Thm5 => {
                let model = generator.model().unwrap_or(Model::HalfPlane);
                Some(DomainGeometry::of(model))
            }
            _ => None,
        };
        Ok(Prepared {
            weights,
            radius: solved.radius,
            bracket: solved.bracket,
            closed_form,
            geometry,
            lambda: lambda_from_turns(self.lambda_turns),
        })
    }
}

struct Prepared {
    weights: WeightSequence,
    radius: f64,
    bracket: (f64, f64),
    closed_form: Option<f64>,
    geometry: Option<DomainGeometry>,
    lambda: num_complex::Complex64,
}

/// What a theorem sums: an analytic function or a harmonic pair.
enum Subject {
    Analytic(CoefficientSeries),
    Pair(HarmonicPair),
}

impl Prepared {
    fn subject(&self, exp: &Experiment, h: CoefficientSeries) -> Result<Subject> {
        Ok(match exp.theorem {
            Equation::Thm2 | Equation::Thm5 => {
                Subject::Pair(construct_pair(h, exp.k, self.lambda)?)
            }
            _ => Subject::Analytic(h),
        })
    }

    /// The theorem's left-hand sum and right-hand bound at `r`.
    fn evaluate(&self, exp: &Experiment, subject: &Subject, r: f64) -> Result<(Estimate, f64)> {
        let w = &self.weights;
        match (exp.theorem, subject) {
            (Equation::ThmA | Equation::Thm1, Subject::Analytic(s)) => {
                Ok((bohr_sum(s, w, exp.p, r)?, w.phi0(r)))
            }
            (Equation::Thm2, Subject::Pair(pair)) => Ok((
                harmonic_bohr_sum(pair, w, exp.p, r, HarmonicForm::WithConstant)?,
                1.0,
            )),
            (Equation::Thm3 | Equation::Thm4, Subject::Analytic(g)) => Ok((
                subordination_bohr_sum(g, w, r)?,
                self.geometry.unwrap().dist,
            )),
            (Equation::Thm5, Subject::Pair(pair)) => Ok((
                harmonic_subordination_sum(pair, w, r)?,
                self.geometry.unwrap().dist,
            )),
            _ => Err(Error::Contract("subject does not match theorem".into())),
        }
    }

    fn grid(&self, points: usize) -> Vec<f64> {
        let last = points - 1;
        (0..points)
            .map(|i| {
                if i == last {
                    self.radius
                } else {
                    self.radius * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// One row of the margin table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginRow {
    pub sample_id: usize,
    pub r: f64,
    pub sum: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub sample: usize,
    pub r: f64,
    pub sum: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleError {
    pub sample: usize,
    pub message: String,
}

/// An evaluation of an extremal object at one radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub family: String,
    pub a: Option<f64>,
    pub r: f64,
    pub sum: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    InequalityFailure,
    SharpnessFailure,
    AllInconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::InequalityFailure => 2,
            Status::SharpnessFailure => 3,
            Status::AllInconclusive => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalitySection {
    pub generator: Generator,
    /// Inputs only obey a coefficient bound, not certified class membership.
    pub coefficient_level: bool,
    pub grid: Vec<f64>,
    pub samples: usize,
    pub passed: usize,
    pub inconclusive: usize,
    pub failures: Vec<Failure>,
    pub errors: Vec<SampleError>,
    /// Smallest `bound − sum` per sample, `null` for errored samples.
    pub worst_margins: Vec<Option<f64>>,
    pub overall_worst_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessSection {
    pub at_radius: Vec<Probe>,
    pub witnesses: Vec<Probe>,
    pub required_offset: Option<f64>,
    pub found_required: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: Equation,
    pub equation: &'static str,
    pub solver_r: f64,
    pub bracket: (f64, f64),
    pub closed_form_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inequality: Option<InequalitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharpness: Option<SharpnessSection>,
    pub status: Status,
    #[serde(skip)]
    pub rows: Vec<MarginRow>,
}

impl VerificationReport {
    fn refresh_status(&mut self) {
        self.status = if self
            .inequality
            .as_ref()
            .is_some_and(|s| !s.failures.is_empty())
        {
            Status::InequalityFailure
        } else if self.sharpness.as_ref().is_some_and(|s| !s.found_required) {
            Status::SharpnessFailure
        } else if self.inequality.as_ref().is_some_and(|s| s.passed == 0) {
            Status::AllInconclusive
        } else {
            Status::Pass
        };
    }

    /// CSV margin table `sample_id,r,sum,bound,margin`.
    pub fn margin_csv(&self) -> String {
        let mut out = String::from("sample_id,r,sum,bound,margin\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{:?},{:?},{:?},{:?}\n",
                row.sample_id, row.r, row.sum, row.bound, row.margin
            ));
        }
        out
    }
}

enum Outcome {
    Done {
        worst: f64,
        inconclusive: bool,
        failures: Vec<Failure>,
        rows: Vec<MarginRow>,
    },
    Errored(String),
}

fn run_sample(exp: &Experiment, prep: &Prepared, grid: &[f64], index: usize) -> Outcome {
    let seed = exp.samples.seed.wrapping_add(index as u64);
    let attempt = || -> Result<Outcome> {
        let h = exp.generator().draw(exp.samples.order, seed)?;
        let subject = prep.subject(exp, h)?;
        let mut worst = f64::INFINITY;
        let mut inconclusive = false;
        let mut failures = Vec::new();
        let mut rows = Vec::with_capacity(grid.len());
        for &r in grid {
            let (sum, bound) = prep.evaluate(exp, &subject, r)?;
            let margin = bound - sum.value;
            worst = worst.min(margin);
            if sum.value > bound + MARGIN_TOL {
                failures.push(Failure {
                    sample: index,
                    r,
                    sum: sum.value,
                    bound,
                });
            } else if !sum.certified || sum.upper() > bound + MARGIN_TOL {
                inconclusive = true;
            }
            rows.push(MarginRow {
                sample_id: index,
                r,
                sum: sum.value,
                bound,
                margin,
            });
        }
        Ok(Outcome::Done {
            worst,
            inconclusive,
            failures,
            rows,
        })
    };
    attempt().unwrap_or_else(|e| Outcome::Errored(e.to_string()))
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

fn empty_report(exp: &Experiment, prep: &Prepared) -> VerificationReport {
    VerificationReport {
        theorem: exp.theorem,
        equation: exp.theorem.formula(),
        solver_r: prep.radius,
        bracket: prep.bracket,
        closed_form_r: prep.closed_form,
        inequality: None,
        sharpness: None,
        status: Status::Pass,
        rows: Vec::new(),
    }
}

fn inequality_section(
    exp: &Experiment,
    prep: &Prepared,
) -> Result<(InequalitySection, Vec<MarginRow>)> {
    let grid = prep.grid(exp.grid_points);
    let outcomes: Vec<Outcome> = with_workers(exp.workers, || {
        (0..exp.samples.count)
            .into_par_iter()
            .map(|i| run_sample(exp, prep, &grid, i))
            .collect()
    })?;
    let mut section = InequalitySection {
        generator: exp.generator(),
        coefficient_level: exp.generator().coefficient_level(),
        grid: grid.clone(),
        samples: exp.samples.count,
        passed: 0,
        inconclusive: 0,
        failures: Vec::new(),
        errors: Vec::new(),
        worst_margins: Vec::with_capacity(outcomes.len()),
        overall_worst_margin: None,
    };
    let mut rows = Vec::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Outcome::Done {
                worst,
                inconclusive,
                failures,
                rows: sample_rows,
            } => {
                if !failures.is_empty() {
                    section.failures.extend(failures);
                } else if inconclusive {
                    section.inconclusive += 1;
                } else {
                    section.passed += 1;
                }
                section.worst_margins.push(Some(worst));
                section.overall_worst_margin =
                    Some(section.overall_worst_margin.map_or(worst, |w| w.min(worst)));
                rows.extend(sample_rows);
            }
            Outcome::Errored(message) => {
                section.inconclusive += 1;
                section.errors.push(SampleError { sample: i, message });
                section.worst_margins.push(None);
            }
        }
    }
    Ok((section, rows))
}

/// Runs the theorem's inequality on every sample and every grid radius in
/// `[0, R]`.
pub fn run_inequality(exp: &Experiment) -> Result<VerificationReport> {
    let prep = exp.prepare()?;
    let mut report = empty_report(exp, &prep);
    let (section, rows) = inequality_section(exp, &prep)?;
    report.inequality = Some(section);
    report.rows = rows;
    report.refresh_status();
    Ok(report)
}

/// Extremal objects of a theorem, labelled, with their ladder parameter.
fn extremals(exp: &Experiment, prep: &Prepared) -> Result<Vec<(String, Option<f64>, Subject)>> {
    let order = exp.samples.order.max(SHARPNESS_ORDER);
    let ladder = |family: fn(f64) -> ExtremalFamily,
                  label: &str|
     -> Result<Vec<(String, Option<f64>, Subject)>> {
        exp.a_ladder
            .iter()
            .map(|&a| {
                let h = expand_extremal(family(a), order)?;
                Ok((label.to_string(), Some(a), prep.subject(exp, h)?))
            })
            .collect()
    };
    match exp.theorem {
        Equation::ThmA => ladder(
            |a| ExtremalFamily::DiskAutomorphism { a },
            "disk_automorphism",
        ),
        Equation::Thm1 | Equation::Thm2 => {
            ladder(|a| ExtremalFamily::BPrimeExtremal { a }, "b_prime_extremal")
        }
        Equation::Thm3 | Equation::Thm4 | Equation::Thm5 => {
            let model = prep.geometry.unwrap().model;
            let label = match model {
                Model::Koebe => "koebe",
                _ => "half_plane",
            };
            Ok(vec![(
                label.to_string(),
                None,
                prep.subject(exp, model_series(model, order)?)?,
            )])
        }
    }
}

fn sharpness_section(exp: &Experiment, prep: &Prepared) -> Result<SharpnessSection> {
    let objects = extremals(exp, prep)?;
    let probe = |label: &str, a: Option<f64>, subject: &Subject, r: f64| -> Result<Probe> {
        let (sum, bound) = prep.evaluate(exp, subject, r)?;
        Ok(Probe {
            family: label.to_string(),
            a,
            r,
            sum: sum.value,
            bound,
            margin: bound - sum.value,
        })
    };
    let mut at_radius = Vec::new();
    let mut witnesses = Vec::new();
    let required_offset = exp
        .sharpness_offsets
        .iter()
        .copied()
        .find(|o| (o - REQUIRED_OFFSET).abs() < 1e-15);
    let mut found_required = false;
    let r_max = prep.weights.r_max();
    for (label, a, subject) in &objects {
        at_radius.push(probe(label, *a, subject, prep.radius)?);
        for &offset in &exp.sharpness_offsets {
            let r = prep.radius + offset;
            if r > r_max {
                continue;
            }
            let p = probe(label, *a, subject, r)?;
            if p.sum > p.bound + WITNESS_MARGIN {
                if required_offset.is_none_or(|req| req == offset) {
                    found_required = true;
                }
                witnesses.push(p);
            }
        }
    }
    Ok(SharpnessSection {
        at_radius,
        witnesses,
        required_offset,
        found_required,
    })
}

/// Evaluates the theorem's extremal objects just above `R`.
pub fn run_sharpness(exp: &Experiment) -> Result<VerificationReport> {
    let prep = exp.prepare()?;
    let mut report = empty_report(exp, &prep);
    report.sharpness = Some(sharpness_section(exp, &prep)?);
    report.refresh_status();
    Ok(report)
}

/// Inequality sweep and sharpness scan in one report.
pub fn run(exp: &Experiment) -> Result<VerificationReport> {
    let prep = exp.prepare()?;
    let mut report = empty_report(exp, &prep);
    let (section, rows) = inequality_section(exp, &prep)?;
    report.inequality = Some(section);
    report.rows = rows;
    report.sharpness = Some(sharpness_section(exp, &prep)?);
    report.refresh_status();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm1_sweep_has_no_failures() {
        let exp = Experiment::new(Equation::Thm1, 200, 1);
        let report = run_inequality(&exp).unwrap();
        let s = report.inequality.as_ref().unwrap();
        assert!(s.failures.is_empty());
        assert_eq!(s.passed, 200);
        assert!(s.coefficient_level);
        assert_eq!(report.status, Status::Pass);
        assert_eq!(*s.grid.last().unwrap(), report.solver_r);
        assert!(s.grid.iter().all(|&r| r <= report.solver_r));
        assert_eq!(report.rows.len(), 200 * 50);
    }

    #[test]
    fn thm4_identity_margin_vanishes_at_radius() {
        let mut exp = Experiment::new(Equation::Thm4, 1, 0);
        exp.samples.generator = Some(Generator::HalfPlaneIdentity);
        let report = run_inequality(&exp).unwrap();
        let last = report.rows.last().unwrap();
        assert!((last.r - 1.0 / 3.0).abs() < 1e-12);
        assert!(last.margin.abs() < 1e-9);
    }

    #[test]
    fn thm2_with_zero_k_collapses_to_thm1() {
        let a = run_inequality(&Experiment::new(Equation::Thm1, 50, 3)).unwrap();
        let mut exp = Experiment::new(Equation::Thm2, 50, 3);
        exp.k = 0.0;
        let b = run_inequality(&exp).unwrap();
        assert_eq!(a.solver_r, b.solver_r);
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert!((x.sum - y.sum).abs() <= 1e-12);
        }
    }

    #[test]
    fn incompatible_generator_is_rejected() {
        let mut exp = Experiment::new(Equation::Thm1, 5, 0);
        exp.samples.generator = Some(Generator::SchurClassB);
        assert!(matches!(run_inequality(&exp), Err(Error::Contract(_))));
        let mut exp = Experiment::new(Equation::Thm4, 5, 0);
        exp.samples.generator = Some(Generator::KoebeSubordinate);
        assert!(run_inequality(&exp).is_err());
    }

    #[test]
    fn sharpness_examples() {
        let report = run_sharpness(&Experiment::new(Equation::Thm1, 0, 0)).unwrap();
        let s = report.sharpness.unwrap();
        assert!(s.found_required);
        // the witness threshold at r = 0.51 is a > 1/r − 1 ≈ 0.96
        let at_051: Vec<_> = s
            .witnesses
            .iter()
            .filter(|p| (p.r - 0.51).abs() < 1e-9)
            .collect();
        assert!(at_051.iter().all(|p| p.a.unwrap() > 0.96));
        assert_eq!(at_051.len(), 2);

        for eq in Equation::ALL {
            let mut exp = Experiment::new(eq, 0, 0);
            exp.k = 0.5;
            let report = run_sharpness(&exp).unwrap();
            assert_eq!(report.status, Status::Pass, "{eq}");
        }
    }

    #[test]
    fn all_inconclusive_without_samples() {
        let report = run_inequality(&Experiment::new(Equation::Thm4, 0, 0)).unwrap();
        assert_eq!(report.status, Status::AllInconclusive);
        assert_eq!(report.status.exit_code(), 4);
    }

    #[test]
    fn uncertified_tails_are_inconclusive() {
        // tabulated weights with no n-weighted majorant cannot certify
        // Koebe subordinates, so thm3 refuses to run at all
        let mut exp = Experiment::new(Equation::Thm3, 3, 0);
        exp.weights = WeightConfig::Tabulated {
            r: vec![0.0, 0.5],
            phi: vec![vec![0.0, 0.5]],
            tail: Some(vec![0.0, 1e-3]),
            n_tail: None,
            decreasing: true,
            phi0: None,
        };
        assert!(matches!(run_inequality(&exp), Err(Error::Contract(_))));
    }

    #[test]
    fn margin_csv_has_header_and_rows() {
        let mut exp = Experiment::new(Equation::Thm4, 2, 0);
        exp.grid_points = 3;
        let report = run_inequality(&exp).unwrap();
        let csv = report.margin_csv();
        assert_eq!(csv.lines().count(), 1 + 6);
        assert!(csv.starts_with("sample_id,r,sum,bound,margin\n"));
    }
}
