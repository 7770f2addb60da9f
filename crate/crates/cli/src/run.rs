//! Executes a resolved [`RunConfig`] and renders its output.

use std::fmt::Write as _;

use bohr_core::harmonic::{
    construct_pair, harmonic_bohr_sum, lambda_from_turns, lemma_c_check, HarmonicForm, LemmaCCheck,
};
use bohr_core::radius::{
    closed_form_radius, k_from_qc_constant, solve_radius, RadiusProblem, RadiusResult,
};
use bohr_core::series::{
    bohr_sum, expand_extremal, sample_bprime_coeffs, schur_sample, CoefficientSeries,
};
use bohr_core::subordination::{
    coefficient_bound_check, model_series, subordinate, subordinate_to_model,
    subordination_bohr_sum, DomainGeometry, Model,
};
use bohr_core::verify::{run, run_sharpness, Probe, VerificationReport};
use bohr_core::weights::{Phi0Config, WeightConfig, WeightSequence};
use bohr_core::{Error, Estimate};
use serde::Serialize;

use crate::config::*;

pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(config: &RunConfig, body: T) -> String {
    let env = Envelope {
        schema: SCHEMA,
        config,
        body,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("output is always serializable");
    s.push('\n');
    s
}

pub fn dispatch(config: &RunConfig, workers: Option<usize>) -> Result<Output, Error> {
    let text = match config {
        RunConfig::Radius(c) => radius(config, c)?,
        RunConfig::Sum(c) => sum(config, c)?,
        RunConfig::HarmonicSum(c) => harmonic(config, c)?,
        RunConfig::SubordSum(c) => subord(config, c)?,
        RunConfig::Sweep(c) => sweep(config, c)?,
        RunConfig::Verify(c) | RunConfig::Sharpness(c) => {
            let mut exp = c.experiment.clone();
            exp.workers = workers;
            let report = if matches!(config, RunConfig::Verify(_)) {
                run(&exp)?
            } else {
                run_sharpness(&exp)?
            };
            let text = match c.out {
                Format::Json => json(config, &report),
                Format::Csv if report.inequality.is_some() => report.margin_csv(),
                Format::Csv => probe_csv(&report),
            };
            return Ok(Output {
                text,
                exit_code: report.status.exit_code(),
            });
        }
    };
    Ok(Output { text, exit_code: 0 })
}

/// Closed forms hold for `φₙ = rⁿ` with `φ₀ ≡ 1`.
fn is_plain_power(w: &WeightConfig) -> bool {
    match w {
        WeightConfig::Power { phi0, .. } => match phi0 {
            None => true,
            Some(Phi0Config::Constant(c)) => *c == 1.0,
            Some(Phi0Config::Grid(_)) => false,
        },
        _ => false,
    }
}

#[derive(Serialize)]
struct RadiusBody<'a> {
    equation: &'static str,
    formula: &'static str,
    #[serde(flatten)]
    result: &'a RadiusResult,
    closed_form: Option<f64>,
}

fn radius(config: &RunConfig, c: &RadiusConfig) -> Result<String, Error> {
    let problem = RadiusProblem::new(
        c.equation,
        WeightSequence::from_config(c.weights.clone())?,
        c.p,
        c.k,
    )?;
    let result = solve_radius(&problem, c.tol)?;
    let closed_form = if is_plain_power(&c.weights) {
        Some(closed_form_radius(c.equation, c.p, c.k)?)
    } else {
        None
    };
    Ok(match c.out {
        Format::Json => json(
            config,
            RadiusBody {
                equation: c.equation.name(),
                formula: c.equation.formula(),
                result: &result,
                closed_form,
            },
        ),
        Format::Csv => format!(
            "equation,p,k,R,closed_form\n{},{:?},{:?},{:?},{}\n",
            c.equation,
            c.p,
            c.k,
            result.radius,
            closed_form.map(|v| format!("{v:?}")).unwrap_or_default()
        ),
    })
}

fn build_function(spec: &FunctionSpec, order: usize) -> Result<CoefficientSeries, Error> {
    match spec {
        FunctionSpec::Series { series } => Ok(series.clone()),
        FunctionSpec::Extremal { family } => expand_extremal(*family, order),
        FunctionSpec::Schur { seed } => schur_sample(order, *seed),
        FunctionSpec::BPrime { seed } => sample_bprime_coeffs(order, *seed),
        FunctionSpec::Subordinate { model, omega } => {
            subordinate_to_model(*model, &omega.build(order)?)
        }
    }
}

#[derive(Serialize)]
struct SumRow {
    r: f64,
    #[serde(flatten)]
    estimate: Estimate,
    upper: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadratic_bound: Option<LemmaCCheck>,
}

impl SumRow {
    fn new(r: f64, estimate: Estimate) -> Self {
        SumRow {
            r,
            estimate,
            upper: estimate.upper(),
            bound: None,
            quadratic_bound: None,
        }
    }
}

#[derive(Serialize)]
struct Results<T: Serialize> {
    #[serde(flatten)]
    extra: T,
    results: Vec<SumRow>,
}

fn rows_csv(rows: &[SumRow]) -> String {
    let mut out = String::from("r,value,error,certified,upper\n");
    for row in rows {
        let e = row.estimate;
        let _ = writeln!(
            out,
            "{:?},{:?},{:?},{},{:?}",
            row.r, e.value, e.error, e.certified, row.upper
        );
    }
    out
}

fn sum(config: &RunConfig, c: &SumConfig) -> Result<String, Error> {
    let w = WeightSequence::from_config(c.weights.clone())?;
    let f = build_function(&c.function, c.order)?;
    let rows =
        c.r.values()
            .into_iter()
            .map(|r| Ok(SumRow::new(r, bohr_sum(&f, &w, c.p, r)?)))
            .collect::<Result<Vec<_>, Error>>()?;
    Ok(match c.out {
        Format::Json => json(
            config,
            Results {
                extra: (),
                results: rows,
            },
        ),
        Format::Csv => rows_csv(&rows),
    })
}

fn harmonic(config: &RunConfig, c: &HarmonicConfig) -> Result<String, Error> {
    let w = WeightSequence::from_config(c.weights.clone())?;
    let h = build_function(&c.function, c.order)?;
    let pair = construct_pair(h, c.k, lambda_from_turns(c.lambda_turns))?;
    let form = match c.form {
        Form::WithConstant => HarmonicForm::WithConstant,
        Form::WithoutConstant => HarmonicForm::WithoutConstant,
    };
    let rows =
        c.r.values()
            .into_iter()
            .map(|r| {
                let mut row = SumRow::new(r, harmonic_bohr_sum(&pair, &w, c.p, r, form)?);
                if w.is_decreasing() {
                    row.quadratic_bound = Some(lemma_c_check(&pair, &w, r)?);
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, Error>>()?;
    Ok(match c.out {
        Format::Json => json(
            config,
            Results {
                extra: (),
                results: rows,
            },
        ),
        Format::Csv => rows_csv(&rows),
    })
}

#[derive(Serialize)]
struct SubordExtra {
    geometry: DomainGeometry,
    /// The geometry was supplied by the caller and not checked.
    taken_on_trust: bool,
    coefficients_within_bound: bool,
    worst_coefficient_margin: f64,
}

fn subord(config: &RunConfig, c: &SubordConfig) -> Result<String, Error> {
    let w = WeightSequence::from_config(c.weights.clone())?;
    let (f, geom) = match (c.model, &c.user) {
        (Model::UserSupplied, Some(u)) => {
            let fprime0 = u.f.coeffs().get(1).copied().unwrap_or_default();
            (
                u.f.clone(),
                DomainGeometry::user_supplied(u.dist, fprime0, u.convex)?,
            )
        }
        (Model::UserSupplied, None) => {
            return Err(Error::Config(
                "a user-supplied model needs --series and --dist".into(),
            ))
        }
        (m, _) => (model_series(m, c.order)?, DomainGeometry::of(m)),
    };
    let g = subordinate(&f, &geom, &c.omega.build(f.order())?)?;
    let check = coefficient_bound_check(&g, &geom, geom.convex);
    let rows =
        c.r.values()
            .into_iter()
            .map(|r| {
                let mut row = SumRow::new(r, subordination_bohr_sum(&g, &w, r)?);
                row.bound = Some(geom.dist);
                Ok(row)
            })
            .collect::<Result<Vec<_>, Error>>()?;
    Ok(match c.out {
        Format::Json => json(
            config,
            Results {
                extra: SubordExtra {
                    geometry: geom,
                    taken_on_trust: c.model == Model::UserSupplied,
                    coefficients_within_bound: check.holds,
                    worst_coefficient_margin: check.worst_margin,
                },
                results: rows,
            },
        ),
        Format::Csv => {
            let mut out = String::from("r,value,error,certified,upper,bound\n");
            for row in &rows {
                let e = row.estimate;
                let _ = writeln!(
                    out,
                    "{:?},{:?},{:?},{},{:?},{:?}",
                    row.r, e.value, e.error, e.certified, row.upper, geom.dist
                );
            }
            out
        }
    })
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(skip)]
    swept: f64,
    p: f64,
    k: f64,
    #[serde(rename = "R")]
    radius: f64,
    closed_form: Option<f64>,
}

#[derive(Serialize)]
struct SweepBody {
    parameter: &'static str,
    rows: Vec<SweepRow>,
}

fn sweep(config: &RunConfig, c: &SweepConfig) -> Result<String, Error> {
    if c.p.is_range() && c.k.is_range() {
        return Err(Error::Config("sweep either p or k, not both".into()));
    }
    let parameter = match (c.k.is_range(), c.qc_constant) {
        (true, true) => "K",
        (true, false) => "k",
        (false, _) => "p",
    };
    let w = WeightSequence::from_config(c.weights.clone())?;
    let mut rows = Vec::new();
    for p in c.p.values() {
        for k_raw in c.k.values() {
            let k = if c.qc_constant {
                k_from_qc_constant(k_raw)?
            } else {
                k_raw
            };
            let problem = RadiusProblem::new(c.equation, w.clone(), p, k)?;
            let result = solve_radius(&problem, c.tol)?;
            let closed_form = if is_plain_power(&c.weights) {
                Some(closed_form_radius(c.equation, p, k)?)
            } else {
                None
            };
            rows.push(SweepRow {
                swept: if parameter == "p" { p } else { k_raw },
                p,
                k,
                radius: result.radius,
                closed_form,
            });
        }
    }
    Ok(match c.out {
        Format::Json => json(config, SweepBody { parameter, rows }),
        Format::Csv => {
            let mut out = format!("{parameter},R\n");
            for row in &rows {
                let _ = writeln!(out, "{:?},{:?}", row.swept, row.radius);
            }
            out
        }
    })
}

fn probe_csv(report: &VerificationReport) -> String {
    let mut out = String::from("kind,family,a,r,sum,bound,margin\n");
    let section = match &report.sharpness {
        Some(s) => s,
        None => return out,
    };
    let mut emit = |kind: &str, p: &Probe| {
        let a = p.a.map(|a| format!("{a:?}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{kind},{},{a},{:?},{:?},{:?},{:?}",
            p.family, p.r, p.sum, p.bound, p.margin
        );
    };
    for p in &section.at_radius {
        emit("at_radius", p);
    }
    for p in &section.witnesses {
        emit("witness", p);
    }
    out
}
