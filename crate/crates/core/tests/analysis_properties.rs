use qtol_core::analysis::{self, AnalysisConfig, AnalysisError, Regime};
use qtol_core::criteria;
use qtol_core::generators::{self, BenchmarkParams, BenchmarkSpec, Family};
use qtol_core::noise::{self, ErrorRates, ExhaustiveSummary};
use qtol_core::simulator;
use qtol_core::{Circuit, Gate, SuccessCriterion};

fn summary(reference: f64, means: [f64; 3], locations: usize, gates: usize) -> ExhaustiveSummary {
    ExhaustiveSummary {
        reference_success: reference,
        mean_success: means,
        locations_per_pauli: locations,
        gate_count: gates,
    }
}

fn family_circuit(family: Family, width: usize, seed: u64) -> (Circuit, SuccessCriterion) {
    let spec = BenchmarkSpec::new(family, width).with_params(BenchmarkParams {
        depth: (family == Family::Ryrz).then_some(2),
        ..Default::default()
    });
    let circuit = generators::generate(&spec, seed).unwrap();
    let criterion = match family {
        Family::Bv | Family::Grover => SuccessCriterion::CorrectOutcome(generators::correct_outcome(&spec, seed).unwrap()),
        Family::Qv => SuccessCriterion::HeavyOutput,
        _ => SuccessCriterion::Fidelity,
    };
    (circuit, criterion)
}

#[test]
fn scaled_success_hand_substitution() {
    let s = summary(1.0, [0.5; 3], 100, 100);
    let p = analysis::scaled_success(&s, 100, &ErrorRates::uniform(0.003).unwrap());
    assert!((p - 0.85).abs() < 1e-12);
}

#[test]
fn zero_rates_give_reference() {
    let (c, crit) = family_circuit(Family::Qft, 4, 0);
    let r = analysis::success_probability(&c, &ErrorRates::zero(), &crit, 0, &AnalysisConfig::default()).unwrap();
    assert_eq!(r.regime, Regime::Exhaustive);
    assert_eq!(r.value, r.summary.unwrap().reference_success);
}

#[test]
fn closed_form_hand_substitution() {
    // S1 = 0.4 from per-type means averaging to 0.4
    let s = summary(1.0, [0.3, 0.4, 0.5], 100, 100);
    let p = analysis::closed_form_rate(&s, 100, 0.66).unwrap();
    assert!((p - (0.66 - 1.0) / (0.4 - 1.0) / 100.0).abs() < 1e-12);
    assert!((p - 0.005_666_666_666_666_667).abs() < 1e-12);
    assert!(p < 1.0 / 100.0);
    assert_eq!(analysis::closed_form_rate(&s, 100, 1.0).unwrap(), 0.0);
}

#[test]
fn regime_follows_expected_errors() {
    let (c, crit) = family_circuit(Family::Qft, 4, 0);
    let g = c.len() as f64;
    let cfg = AnalysisConfig {
        n_runs: 50,
        ..Default::default()
    };
    for (p, regime) in [(0.5 / g, Regime::Exhaustive), (1.0 / g, Regime::Exhaustive), (1.01 / g, Regime::MonteCarlo)] {
        let rates = ErrorRates::uniform(p).unwrap();
        let r = analysis::success_probability(&c, &rates, &crit, 3, &cfg).unwrap();
        assert_eq!(r.regime, regime, "p = {p}");
        assert!((r.expected_errors - g * rates.total()).abs() < 1e-12);
    }
}

#[test]
fn bound_theorem_on_every_family() {
    let cases = [
        (Family::Qft, 2..=6),
        (Family::Bv, 2..=7),
        (Family::Grover, 2..=4),
        (Family::Hlf, 2..=6),
        (Family::Ryrz, 2..=6),
        (Family::Qv, 2..=6),
    ];
    let cfg = AnalysisConfig::default();
    for (family, widths) in cases {
        for w in widths {
            let (c, crit) = family_circuit(family, w, 1);
            let s = noise::exhaustive_sweep(&c, &crit).unwrap();
            let g = c.len() as f64;
            if 0.66 > s.one_error_success() && 0.66 <= s.reference_success {
                let r = analysis::tolerable_error_rate(&c, 0.66, &crit, 1, &cfg).unwrap();
                assert_eq!(r.regime, Regime::ClosedForm);
                assert!(r.value < 1.0 / g, "{family} {w}: {} >= 1/{g}", r.value);
                let ratio = 1.0 / (g * r.value);
                assert!((1.0..=3.0).contains(&ratio), "{family} {w}: G^-1/rate = {ratio}");
            }
        }
    }
}

#[test]
fn round_trip_qft5() {
    let (c, crit) = family_circuit(Family::Qft, 5, 0);
    let cfg = AnalysisConfig::default();
    let r = analysis::tolerable_error_rate(&c, 0.66, &crit, 0, &cfg).unwrap();
    let back = analysis::success_probability(&c, &ErrorRates::uniform(r.value).unwrap(), &crit, 0, &cfg).unwrap();
    let slack = 0.01f64.max(3.0 * back.stderr.unwrap_or(0.0));
    assert!((back.value - 0.66).abs() <= slack, "{}", back.value);
}

#[test]
fn search_branch_hits_target() {
    // QFT has S1 = 1/3, so a lower target needs more than one error on average
    let (c, crit) = family_circuit(Family::Qft, 3, 0);
    let cfg = AnalysisConfig::default();
    let r = analysis::tolerable_error_rate(&c, 0.3, &crit, 9, &cfg).unwrap();
    assert_eq!(r.regime, Regime::Search);
    assert!(r.value > 1.0 / c.len() as f64);
    let back = analysis::success_probability(&c, &ErrorRates::uniform(r.value).unwrap(), &crit, 9, &cfg).unwrap();
    assert_eq!(back.value, r.search_trace.unwrap().last().unwrap().success);
    assert!((back.value - 0.3).abs() <= 0.005f64.max(2.0 * back.stderr.unwrap()));
}

#[test]
fn tolerable_errors() {
    let (c, crit) = family_circuit(Family::Qft, 3, 0);
    let cfg = AnalysisConfig::default();
    assert!(matches!(
        analysis::tolerable_error_rate(&c, 1.0, &crit, 0, &cfg),
        Err(AnalysisError::InvalidTarget(_))
    ));
    let empty = Circuit::new(2).unwrap();
    assert_eq!(
        analysis::tolerable_error_rate(&empty, 0.66, &crit, 0, &cfg),
        Err(AnalysisError::EmptyCircuit)
    );
    let (bv, _) = family_circuit(Family::Bv, 3, 0);
    let wrong = SuccessCriterion::CorrectOutcome("000".parse().unwrap());
    assert!(matches!(
        analysis::tolerable_error_rate(&bv, 0.66, &wrong, 0, &cfg),
        Err(AnalysisError::Unreachable { .. })
    ));
}

#[test]
fn monotone_in_rate_for_qft8() {
    let (c, crit) = family_circuit(Family::Qft, 8, 0);
    let cfg = AnalysisConfig::default();
    let mut prev: Option<(f64, f64)> = None;
    for p in [0.0, 0.001, 0.005, 0.01, 0.05] {
        let r = analysis::success_probability(&c, &ErrorRates::uniform(p).unwrap(), &crit, 4, &cfg).unwrap();
        let se = r.stderr.unwrap_or(0.0);
        if let Some((v, s)) = prev {
            assert!(r.value <= v + 2.0 * (s + se), "p = {p}: {} after {v}", r.value);
        }
        prev = Some((r.value, se));
    }
}

#[test]
fn fit_recovers_exact_data() {
    let pts = [(100.0, 0.01), (200.0, 0.005), (400.0, 0.0025)];
    let (pred, fit) = analysis::extrapolate(&pts, 1000.0).unwrap();
    assert!((fit.coefficient - 1.0).abs() < 1e-12);
    assert!(fit.mse < 1e-24);
    assert!((pred - 0.001).abs() < 1e-15);
    assert_eq!(analysis::fit_inverse(&pts[..1]), Err(AnalysisError::TooFewPoints(1)));
    let affine = analysis::fit_inverse_affine(&pts).unwrap();
    assert!(affine.intercept.unwrap().abs() < 1e-12);
}

#[test]
fn qv_zero_rate_matches_direct_enumeration() {
    let cfg = AnalysisConfig::default();
    for width in [2, 3, 4] {
        let n = 12;
        let r = analysis::qv_success(width, &ErrorRates::zero(), n, 21, false, &cfg).unwrap();
        let spec = BenchmarkSpec::new(Family::Qv, width);
        let direct: f64 = (0..n as u64)
            .map(|i| {
                let c = generators::generate(&spec, noise::run_seed(21, i)).unwrap();
                let psi = simulator::run_ideal(&c).unwrap();
                criteria::heavy_output_probability(&psi, &psi).unwrap()
            })
            .sum::<f64>()
            / n as f64;
        assert!((r.value - direct).abs() < 1e-12);
        assert!(r.value > 0.5);
        let again = analysis::qv_success(width, &ErrorRates::zero(), n, 21, false, &cfg).unwrap();
        assert_eq!(r, again);
    }
    assert_eq!(analysis::DEFAULT_QV_CIRCUITS, 200);
}

#[test]
fn empty_circuit_success_is_reference() {
    let c = Circuit::from_gates(1, vec![], "empty").unwrap();
    let r = analysis::success_probability(
        &c,
        &ErrorRates::uniform(0.5).unwrap(),
        &SuccessCriterion::Fidelity,
        0,
        &AnalysisConfig::default(),
    )
    .unwrap();
    assert_eq!(r.value, 1.0);
    let one = Circuit::from_gates(1, vec![Gate::h(0)], "h").unwrap();
    let r = analysis::success_probability(
        &one,
        &ErrorRates::uniform(0.9).unwrap(),
        &SuccessCriterion::Fidelity,
        0,
        &AnalysisConfig::default(),
    )
    .unwrap();
    // Z and Y each take |+> to an orthogonal state, X leaves it alone
    assert!((r.value - (1.0 - 0.9 * 2.0 / 3.0)).abs() < 1e-12);
}
