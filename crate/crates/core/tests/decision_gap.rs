use ergolearn::components::ComponentParams;
use ergolearn::decisions::{
    epsilon_optimality_gap, evaluate_vn, greedy_actions, greedy_strategy, DecisionProblem,
};
use ergolearn::merging_lab::{run_merging_experiment, MergeParams};
use ergolearn::predictor::PredictorSpec;
use ergolearn::{Alphabet, Distribution};
use proptest::prelude::*;

fn seeds() -> Vec<u64> {
    (1..=20).collect()
}

fn matching(n: usize) -> DecisionProblem {
    DecisionProblem::matching(&Alphabet::numeric(n).unwrap())
}

fn two_point() -> PredictorSpec {
    PredictorSpec::Mixture {
        components: vec![ComponentParams::Bernoulli { theta: 0.3 }, ComponentParams::Bernoulli { theta: 0.7 }],
        prior: None,
    }
}

#[test]
fn oracle_values() {
    let oracle = greedy_strategy(&matching(2), &PredictorSpec::Oracle).unwrap();
    let v = evaluate_vn(&oracle, &ComponentParams::Bernoulli { theta: 0.7 }, 10_000, &seeds()).unwrap();
    assert!((v.mean - 0.7).abs() < 0.02);
    assert_eq!(v.per_seed.len(), 20);

    for pred in [PredictorSpec::Oracle, PredictorSpec::Exchangeable, PredictorSpec::Constant { weights: vec![0.2, 0.8] }] {
        let s = greedy_strategy(&matching(2), &pred).unwrap();
        let v = evaluate_vn(&s, &ComponentParams::Bernoulli { theta: 0.5 }, 10_000, &seeds()).unwrap();
        assert!((v.mean - 0.5).abs() < 0.02, "{}", pred.describe());
    }
}

#[test]
fn constant_payoff_picks_first_action() {
    let flat = DecisionProblem::new(vec!["a".into(), "b".into(), "c".into()], vec![vec![0.3; 3]; 2]).unwrap();
    let actions = greedy_actions(&flat, &PredictorSpec::Exchangeable, &ComponentParams::Bernoulli { theta: 0.4 }, 200, 1).unwrap();
    assert!(actions.iter().all(|&a| a == 0));
}

#[test]
fn gap_is_zero_against_itself() {
    for (truth, problem) in [
        (ComponentParams::War, matching(3)),
        (ComponentParams::HiddenMarkov { p: 0.9, q: 0.8 }, matching(2)),
        (ComponentParams::Bernoulli { theta: 0.7 }, matching(2)),
    ] {
        let r = epsilon_optimality_gap(&PredictorSpec::Oracle, &truth, &problem, 2000, &seeds()).unwrap();
        assert_eq!(r.gap, 0.0);
        assert_eq!(r.v_belief.to_bits(), r.v_oracle.to_bits());
    }
}

#[test]
fn gap_is_bounded_by_prediction_distance() {
    let params = MergeParams::new(0.05, 0.5, 0.2).unwrap();
    for (truth, belief, problem, bound) in [
        (ComponentParams::War, PredictorSpec::WarBayes, matching(3), 0.01),
        (ComponentParams::Bernoulli { theta: 0.7 }, two_point(), matching(2), 0.02),
    ] {
        let r = epsilon_optimality_gap(&belief, &truth, &problem, 10_000, &seeds()).unwrap();
        assert!(r.gap < bound && r.gap >= -1e-12, "{}: {}", truth.family(), r.gap);
        for s in &r.per_seed {
            let merge = run_merging_experiment(&truth, &belief, 10_000, s.seed, params).unwrap();
            assert_eq!(merge.final_cesaro_mean(), s.final_cesaro_mean);
            assert!(s.gap >= -1e-12);
            assert!(s.gap <= 2.0 * s.final_cesaro_mean + 0.01);
        }
    }
}

proptest! {
    #[test]
    fn argmax_is_invariant_under_positive_affine_maps(
        payoff in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 4), 3),
        mass in prop::collection::vec(0.01f64..1.0, 3),
        scale in 0.01f64..100.0,
        shift in -50.0f64..50.0,
    ) {
        let actions = (0..4).map(|d| format!("d{d}")).collect();
        let problem = DecisionProblem::new(actions, payoff).unwrap();
        let moved = problem.affine(scale, shift);
        let p = Distribution::normalized(mass).unwrap();
        let best = problem.greedy_action(&p);
        let best_moved = moved.greedy_action(&p);
        // Equal choices unless two actions are within rounding of a tie.
        if best != best_moved {
            let gap = (problem.expected_payoff(&p, best) - problem.expected_payoff(&p, best_moved)).abs();
            prop_assert!(gap < 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn argmax_invariance_is_exact_on_dyadic_problems(
        payoff in prop::collection::vec(prop::collection::vec(0u32..=8, 3), 2),
        ones in 0u32..=16,
        scale_exp in -4i32..=4,
        shift in -16i32..=16,
    ) {
        let payoff: Vec<Vec<f64>> = payoff.iter().map(|r| r.iter().map(|&x| f64::from(x) / 8.0).collect()).collect();
        let problem = DecisionProblem::new(vec!["x".into(), "y".into(), "z".into()], payoff).unwrap();
        let moved = problem.affine(2f64.powi(scale_exp), f64::from(shift) / 4.0);
        let p1 = f64::from(ones) / 16.0;
        let p = Distribution::new(vec![1.0 - p1, p1]).unwrap();
        prop_assert_eq!(problem.greedy_action(&p), moved.greedy_action(&p));
    }
}
