use ergolearn::bayes_predictors::Decomposition;
use ergolearn::components::{ComponentParams, Simulator};
use ergolearn::empirical::{block_frequencies, block_rows, identify_component, max_gap_up_to};
use ergolearn::Alphabet;

#[test]
fn frequencies_sum_to_one() {
    let mut sim = Simulator::new(&ComponentParams::War, 4).unwrap();
    let path = sim.sample_path(5000);
    let alphabet = ComponentParams::War.alphabet();
    for k in 1..=4 {
        let t = block_frequencies(&path, &alphabet, k).unwrap();
        let total: f64 = t.entries().map(|(_, f)| f).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(t.entries().all(|(_, f)| (0.0..=1.0).contains(&f)));
    }
}

#[test]
fn block_frequencies_approach_block_laws() {
    let truths = [
        ComponentParams::Bernoulli { theta: 0.3 },
        ComponentParams::HiddenMarkov { p: 0.9, q: 0.8 },
        ComponentParams::War,
    ];
    for truth in truths {
        for seed in 1..=3 {
            let mut sim = Simulator::new(&truth, seed).unwrap();
            let path = sim.sample_path(50_000);
            let gap = max_gap_up_to(&path, sim.component(), 3).unwrap();
            assert!(gap < 0.02, "{} seed {seed}: {gap}", truth.family());
        }
    }
}

#[test]
fn two_point_identification() {
    let dec = Decomposition::bernoulli(&[0.3, 0.7], None).unwrap();
    let alphabet = Alphabet::numeric(2).unwrap();
    let hits = (1..=20)
        .filter(|&seed| {
            let path = Simulator::new(&ComponentParams::Bernoulli { theta: 0.7 }, seed).unwrap().sample_path(10_000);
            let id = identify_component(&block_frequencies(&path, &alphabet, 1).unwrap(), &dec).unwrap();
            id.index == 1 && id.score < 0.02
        })
        .count();
    assert!(hits >= 18, "{hits}/20");
}

#[test]
fn frequencies_are_shift_robust() {
    let alphabet = ComponentParams::HiddenMarkov { p: 0.9, q: 0.8 }.alphabet();
    for seed in 1..=5 {
        let path = Simulator::new(&ComponentParams::HiddenMarkov { p: 0.9, q: 0.8 }, seed).unwrap().sample_path(10_000);
        let full = block_frequencies(&path, &alphabet, 1).unwrap();
        let shifted = block_frequencies(&path[100..], &alphabet, 1).unwrap();
        for s in 0..2 {
            assert!((full.frequency(&[s]) - shifted.frequency(&[s])).abs() < 200.0 / 10_000.0);
        }
    }
}

#[test]
fn export_rows_label_war_blocks() {
    let mut sim = Simulator::new(&ComponentParams::War, 1).unwrap();
    let path = sim.sample_path(1000);
    let t = block_frequencies(&path, &ComponentParams::War.alphabet(), 2).unwrap();
    let rows = block_rows(&t, sim.component()).unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0].block, "WW");
    assert_eq!(rows[5].block, "BG");
    assert!((rows.iter().map(|r| r.exact).sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn dirac_has_no_block_law() {
    let mut sim = Simulator::new(&ComponentParams::Dirac, 1).unwrap();
    let path = sim.sample_path(100);
    assert!(max_gap_up_to(&path, sim.component(), 1).is_err());
}
