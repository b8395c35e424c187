//! Success probability and tolerable error rate queries, plus inverse
//! gate-count extrapolation of tolerable rates.
//!
//! With `G` gates and total rate `p`, the expected fault count is
//! `E(N) = G * p`. When `E(N) <= 1` the single-fault sweep is scaled
//! linearly:
//!
//! ```text
//! P = sum_e P_e * G * p_e + P_R * (1 - sum_e G * p_e)      e in {X, Z, Y}
//! ```
//!
//! Otherwise a Monte Carlo ensemble is used. Inverting the linear form for a
//! uniform rate (`p_e = p / 3`) gives the closed-form tolerable rate
//!
//! ```text
//! p = (P - P_R) / (S_1 - P_R) / G,     S_1 = (P_X + P_Z + P_Y) / 3
//! ```
//!
//! which is below `1 / G` whenever the target exceeds `S_1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::criteria::SuccessCriterion;
use crate::generators::{self, BenchmarkParams, BenchmarkSpec, Family, GeneratorError};
use crate::noise::{self, Engine, ErrorRates, ExhaustiveSummary, NoiseError, DEFAULT_RUNS};
use crate::simulator::Pauli;

/// QV circuits averaged per data point unless configured otherwise.
pub const DEFAULT_QV_CIRCUITS: usize = 200;
pub const DEFAULT_MAX_EVALUATIONS: usize = 60;
pub const DEFAULT_SEARCH_TOLERANCE: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("invalid rate: {0}")]
    RateInvalid(String),
    #[error("target success probability {0} must lie strictly between 0 and 1")]
    InvalidTarget(f64),
    #[error("target {target} exceeds the noise-free success {reference}")]
    Unreachable { target: f64, reference: f64 },
    #[error("rate search did not converge after {evaluations} evaluations (last rate {last_rate})")]
    NoConvergence { evaluations: usize, last_rate: f64 },
    #[error("circuit has no gates")]
    EmptyCircuit,
    #[error("extrapolation needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("invalid extrapolation point (G = {gates}, rate = {rate})")]
    InvalidPoint { gates: f64, rate: f64 },
    #[error("all points share the same gate count; the fit is degenerate")]
    DegenerateFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    Exhaustive,
    MonteCarlo,
    ClosedForm,
    Search,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Exhaustive => "EXHAUSTIVE",
            Regime::MonteCarlo => "MONTE_CARLO",
            Regime::ClosedForm => "CLOSED_FORM",
            Regime::Search => "SEARCH",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub rate: f64,
    pub success: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    /// Success probability or tolerable total rate, depending on the query.
    pub value: f64,
    pub regime: Regime,
    /// `G * p` at the reported (or queried) rate.
    pub expected_errors: f64,
    pub stderr: Option<f64>,
    pub samples: Option<usize>,
    pub search_trace: Option<Vec<TracePoint>>,
    pub summary: Option<ExhaustiveSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub n_runs: usize,
    pub max_evaluations: usize,
    pub tolerance: f64,
    pub engine: Engine,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            n_runs: DEFAULT_RUNS,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
            tolerance: DEFAULT_SEARCH_TOLERANCE,
            engine: Engine::default(),
        }
    }
}

/// Linear single-fault scaling of an exhaustive sweep to the given rates.
pub fn scaled_success(summary: &ExhaustiveSummary, gate_count: usize, rates: &ErrorRates) -> f64 {
    let g = gate_count as f64;
    let mut faulty = 0.0;
    let mut expected = 0.0;
    for e in Pauli::ALL {
        let n_e = g * rates.get(e);
        faulty += summary.mean(e) * n_e;
        expected += n_e;
    }
    faulty + summary.reference_success * (1.0 - expected)
}

/// Uniform tolerable rate from the linear model; `None` when errors do not
/// lower the success (`S_1 >= P_R`) so the model cannot be inverted.
pub fn closed_form_rate(summary: &ExhaustiveSummary, gate_count: usize, target: f64) -> Option<f64> {
    let reference = summary.reference_success;
    let one_error = summary.one_error_success();
    if one_error >= reference || gate_count == 0 {
        return None;
    }
    Some((target - reference) / (one_error - reference) / gate_count as f64)
}

pub fn success_probability(
    circuit: &Circuit,
    rates: &ErrorRates,
    criterion: &SuccessCriterion,
    master_seed: u64,
    config: &AnalysisConfig,
) -> Result<AnalysisResult, AnalysisError> {
    success_with(circuit, rates, criterion, master_seed, config, None)
}

fn success_with(
    circuit: &Circuit,
    rates: &ErrorRates,
    criterion: &SuccessCriterion,
    master_seed: u64,
    config: &AnalysisConfig,
    summary: Option<&ExhaustiveSummary>,
) -> Result<AnalysisResult, AnalysisError> {
    let g = circuit.len() as f64;
    for e in Pauli::ALL {
        if !(g * rates.get(e) >= 0.0) {
            return Err(AnalysisError::RateInvalid(format!("E(N_{e}) = {} < 0", g * rates.get(e))));
        }
    }
    let expected_errors = g * rates.total();
    if expected_errors <= 1.0 {
        let summary = match summary {
            Some(s) => s.clone(),
            None => config.engine.exhaustive_sweep(circuit, criterion)?,
        };
        Ok(AnalysisResult {
            value: scaled_success(&summary, circuit.len(), rates),
            regime: Regime::Exhaustive,
            expected_errors,
            stderr: None,
            samples: Some(3 * summary.locations_per_pauli),
            search_trace: None,
            summary: Some(summary),
        })
    } else {
        let stats = config
            .engine
            .monte_carlo_ensemble(circuit, rates, criterion, config.n_runs, master_seed)?;
        Ok(AnalysisResult {
            value: stats.mean,
            regime: Regime::MonteCarlo,
            expected_errors,
            stderr: Some(stats.stderr),
            samples: Some(stats.runs),
            search_trace: None,
            summary: None,
        })
    }
}

/// Largest uniform total rate at which `circuit` still reaches `target`.
pub fn tolerable_error_rate(
    circuit: &Circuit,
    target: f64,
    criterion: &SuccessCriterion,
    master_seed: u64,
    config: &AnalysisConfig,
) -> Result<AnalysisResult, AnalysisError> {
    if !(target > 0.0 && target < 1.0) {
        return Err(AnalysisError::InvalidTarget(target));
    }
    if circuit.is_empty() {
        return Err(AnalysisError::EmptyCircuit);
    }
    let summary = config.engine.exhaustive_sweep(circuit, criterion)?;
    let reference = summary.reference_success;
    if target > reference {
        return Err(AnalysisError::Unreachable { target, reference });
    }
    let g = circuit.len();
    let one_error = summary.one_error_success();

    if target >= one_error {
        if let Some(rate) = closed_form_rate(&summary, g, target) {
            if target > one_error {
                assert!(rate < 1.0 / g as f64, "closed-form rate {rate} not below 1/G");
            }
            return Ok(AnalysisResult {
                value: rate,
                regime: Regime::ClosedForm,
                expected_errors: g as f64 * rate,
                stderr: None,
                samples: Some(3 * summary.locations_per_pauli),
                search_trace: None,
                summary: Some(summary),
            });
        }
    }
    search_rate(circuit, target, criterion, master_seed, config, summary)
}

/// Brackets the target from `1/G` upward by doubling, then bisects on the
/// Monte Carlo success curve until `|mean - target| <= max(tol, 2 stderr)`.
fn search_rate(
    circuit: &Circuit,
    target: f64,
    criterion: &SuccessCriterion,
    master_seed: u64,
    config: &AnalysisConfig,
    summary: ExhaustiveSummary,
) -> Result<AnalysisResult, AnalysisError> {
    let g = circuit.len() as f64;
    let mut trace = Vec::new();
    let mut evaluate = |rate: f64| -> Result<TracePoint, AnalysisError> {
        let rates = ErrorRates::uniform(rate)?;
        let r = success_with(circuit, &rates, criterion, master_seed, config, Some(&summary))?;
        let point = TracePoint {
            rate,
            success: r.value,
            stderr: r.stderr.unwrap_or(0.0),
        };
        trace.push(point);
        Ok(point)
    };
    let matched = |pt: &TracePoint| (pt.success - target).abs() <= config.tolerance.max(2.0 * pt.stderr);

    let mut lo = 1.0 / g;
    let mut hi = (2.0 / g).min(1.0);
    let mut evaluations = 0;
    let found = loop {
        if evaluations >= config.max_evaluations {
            return Err(AnalysisError::NoConvergence {
                evaluations,
                last_rate: hi,
            });
        }
        evaluations += 1;
        let pt = evaluate(hi)?;
        if matched(&pt) {
            break pt;
        }
        if pt.success < target {
            // bisect (lo, hi)
            let mut found = None;
            while evaluations < config.max_evaluations {
                let mid = 0.5 * (lo + hi);
                evaluations += 1;
                let pt = evaluate(mid)?;
                if matched(&pt) {
                    found = Some(pt);
                    break;
                }
                if pt.success >= target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            match found {
                Some(pt) => break pt,
                None => {
                    return Err(AnalysisError::NoConvergence {
                        evaluations,
                        last_rate: 0.5 * (lo + hi),
                    })
                }
            }
        }
        if hi >= 1.0 {
            // even the maximal rate keeps the success above target
            break pt;
        }
        lo = hi;
        hi = (2.0 * hi).min(1.0);
    };
    Ok(AnalysisResult {
        value: found.rate,
        regime: Regime::Search,
        expected_errors: g * found.rate,
        stderr: Some(found.stderr),
        samples: Some(config.n_runs),
        search_trace: Some(trace),
        summary: Some(summary),
    })
}

/// Mean heavy-output success over `n_circuits` random QV circuits of the
/// given width. Circuit `i` is generated, and its Monte Carlo ensemble run,
/// with seed `run_seed(master_seed, i)`.
pub fn qv_success(
    width: usize,
    rates: &ErrorRates,
    n_circuits: usize,
    master_seed: u64,
    decompose: bool,
    config: &AnalysisConfig,
) -> Result<AnalysisResult, AnalysisError> {
    if n_circuits == 0 {
        return Err(NoiseError::NoRuns.into());
    }
    let spec = BenchmarkSpec::new(Family::Qv, width).with_params(BenchmarkParams {
        decompose_qv: decompose,
        ..Default::default()
    });
    let results = (0..n_circuits as u64)
        .into_par_iter()
        .map(|i| {
            let seed = noise::run_seed(master_seed, i);
            let circuit = generators::generate(&spec, seed)?;
            success_probability(&circuit, rates, &SuccessCriterion::HeavyOutput, seed, config)
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    let values: Vec<f64> = results.iter().map(|r| r.value).collect();
    let stats = noise::summarize(&values);
    let first = &results[0];
    Ok(AnalysisResult {
        value: stats.mean,
        regime: first.regime,
        expected_errors: first.expected_errors,
        stderr: Some(stats.stderr),
        samples: Some(n_circuits),
        search_trace: None,
        summary: None,
    })
}

/// Least-squares fit of tolerable rate against gate count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationFit {
    /// `a` in `rate = a / G (+ b)`.
    pub coefficient: f64,
    /// `b`, present only for the affine variant.
    pub intercept: Option<f64>,
    pub mse: f64,
    pub points: Vec<(f64, f64)>,
}

impl ExtrapolationFit {
    pub fn predict(&self, gates: f64) -> f64 {
        self.coefficient / gates + self.intercept.unwrap_or(0.0)
    }
}

fn check_points(points: &[(f64, f64)]) -> Result<(), AnalysisError> {
    if points.len() < 2 {
        return Err(AnalysisError::TooFewPoints(points.len()));
    }
    for &(gates, rate) in points {
        if !(gates > 0.0 && gates.is_finite() && rate >= 0.0 && rate.is_finite()) {
            return Err(AnalysisError::InvalidPoint { gates, rate });
        }
    }
    if points.iter().all(|p| p.0 == points[0].0) {
        return Err(AnalysisError::DegenerateFit);
    }
    Ok(())
}

fn mse(points: &[(f64, f64)], fit: impl Fn(f64) -> f64) -> f64 {
    points.iter().map(|&(g, r)| (r - fit(g)).powi(2)).sum::<f64>() / points.len() as f64
}

/// One-parameter fit `rate = a / G` through the origin in `1/G`.
pub fn fit_inverse(points: &[(f64, f64)]) -> Result<ExtrapolationFit, AnalysisError> {
    check_points(points)?;
    let sxy: f64 = points.iter().map(|&(g, r)| r / g).sum();
    let sxx: f64 = points.iter().map(|&(g, _)| 1.0 / (g * g)).sum();
    let a = sxy / sxx;
    Ok(ExtrapolationFit {
        coefficient: a,
        intercept: None,
        mse: mse(points, |g| a / g),
        points: points.to_vec(),
    })
}

/// Two-parameter fit `rate = a / G + b`.
pub fn fit_inverse_affine(points: &[(f64, f64)]) -> Result<ExtrapolationFit, AnalysisError> {
    check_points(points)?;
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| 1.0 / p.0).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    Ok(ExtrapolationFit {
        coefficient: a,
        intercept: Some(b),
        mse: mse(points, |g| a / g + b),
        points: points.to_vec(),
    })
}

/// Fits `rate = a / G` and predicts the rate at `target_gates`.
pub fn extrapolate(points: &[(f64, f64)], target_gates: f64) -> Result<(f64, ExtrapolationFit), AnalysisError> {
    if !(target_gates > 0.0 && target_gates.is_finite()) {
        return Err(AnalysisError::InvalidPoint {
            gates: target_gates,
            rate: 0.0,
        });
    }
    let fit = fit_inverse(points)?;
    Ok((fit.predict(target_gates), fit))
}
