//! Acceptance gate. Runs criteria 1 to 9 at desk scale and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails or
//! exceeds its runtime budget.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ergolearn::bayes_predictors::{
    exchangeable_predictive, Decomposition, ExchangeablePosterior, GridPosterior, MixturePosterior,
    SequentialPredictor,
};
use ergolearn::components::{hm_transition, ComponentParams, Simulator};
use ergolearn::decisions::{epsilon_optimality_gap, DecisionProblem};
use ergolearn::empirical::max_gap_up_to;
use ergolearn::merging_lab::{dirac_witness_experiment, run_merging_experiment, run_merging_panel, MergeParams};
use ergolearn::predictor::PredictorSpec;
use ergolearn::rng::PathRng;
use ergolearn_cli::runner::median;
use ergolearn_cli::{load_config, run_experiment};

type Check = fn() -> Result<String, String>;

fn seeds() -> Vec<u64> {
    (1..=20).collect()
}

fn params() -> MergeParams {
    MergeParams::new(0.05, 0.5, 0.2).expect("default thresholds")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn two_point() -> PredictorSpec {
    PredictorSpec::Mixture {
        components: vec![ComponentParams::Bernoulli { theta: 0.3 }, ComponentParams::Bernoulli { theta: 0.7 }],
        prior: None,
    }
}

// 1 ------------------------------------------------------------------------

/// `μ(block with d ones out of n) = 1 / ((n+1)·C(n, d))` under the uniform prior.
fn uniform_prior_block_table(max_n: usize) -> Vec<Vec<f64>> {
    let mut binom = vec![vec![1.0f64]];
    for n in 1..=max_n {
        let prev = &binom[n - 1];
        let row = (0..=n)
            .map(|d| if d == 0 || d == n { 1.0 } else { prev[d - 1] + prev[d] })
            .collect();
        binom.push(row);
    }
    binom
        .iter()
        .enumerate()
        .map(|(n, row)| row.iter().map(|c| 1.0 / ((n + 1) as f64 * c)).collect())
        .collect()
}

fn exchangeable_walk(post: ExchangeablePosterior, n: usize, d: usize, table: &[Vec<f64>], worst: &mut f64, count: &mut u64) {
    let ratio = table[n + 1][d + 1] / table[n][d];
    *worst = worst.max((exchangeable_predictive(&post).prob(1) - ratio).abs());
    *count += 1;
    if n == 20 {
        return;
    }
    for s in 0..2 {
        let mut next = post;
        next.observe(s).expect("binary symbol");
        exchangeable_walk(next, n + 1, d + s, table, worst, count);
    }
}

fn criterion_1() -> Result<String, String> {
    let table = uniform_prior_block_table(21);
    let (mut worst, mut count) = (0.0, 0);
    exchangeable_walk(ExchangeablePosterior::new(), 0, 0, &table, &mut worst, &mut count);
    ensure(count == (1 << 21) - 1, || format!("visited {count} histories"))?;
    ensure(worst < 1e-12, || format!("max error {worst:e}"))?;
    Ok(format!("{count} histories, max error {worst:.1e}"))
}

// 2 ------------------------------------------------------------------------

fn grid_walk(m: &MixturePosterior, e: ExchangeablePosterior, depth: usize, worst: &mut f64) {
    *worst = worst.max((m.predictive().prob(1) - e.predictive().prob(1)).abs());
    if depth == 12 {
        return;
    }
    for s in 0..2 {
        let mut e2 = e;
        e2.observe(s).expect("binary symbol");
        grid_walk(&m.step(s).expect("fine grid covers every history"), e2, depth + 1, worst);
    }
}

fn criterion_2() -> Result<String, String> {
    let dec = Decomposition::bernoulli_grid(0.001).map_err(|e| e.to_string())?;
    let start = MixturePosterior::new(&dec).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    grid_walk(&start, ExchangeablePosterior::new(), 0, &mut worst);
    ensure(worst < 0.002, || format!("max gap {worst}"))?;
    Ok(format!("8191 histories, {} grid points, max gap {worst:.2e}", dec.len()))
}

// 3 ------------------------------------------------------------------------

fn criterion_3() -> Result<String, String> {
    let reports = run_merging_panel(&ComponentParams::War, &PredictorSpec::WarBayes, 100_000, &seeds(), params())
        .map_err(|e| e.to_string())?;
    let mut late = 0;
    let mut max_count = 0;
    let mut max_mean: f64 = 0.0;
    for r in &reports {
        let seed = r.metadata.seed;
        let nonzero: Vec<(usize, f64)> =
            r.distances.values().iter().copied().enumerate().filter(|(_, d)| *d != 0.0).collect();
        ensure(nonzero.iter().all(|(_, d)| *d == 0.25), || format!("seed {seed}: nonzero distance other than 1/4"))?;
        ensure(nonzero.len() <= 60, || format!("seed {seed}: {} nonzero distances", nonzero.len()))?;
        let mean = r.final_cesaro_mean();
        ensure(mean < 2e-4 && r.verdict.weak, || format!("seed {seed}: final Cesaro mean {mean}"))?;
        late += usize::from(nonzero.iter().any(|(n, _)| *n > 100));
        max_count = max_count.max(nonzero.len());
        max_mean = max_mean.max(mean);
    }
    ensure(late >= 15, || format!("late spikes on only {late}/20 seeds"))?;
    Ok(format!(
        "spikes all 1/4, at most {max_count} per run, max final mean {max_mean:.2e}, weak 20/20, late spikes {late}/20"
    ))
}

// 4 ------------------------------------------------------------------------

fn criterion_4() -> Result<String, String> {
    let truth = ComponentParams::HiddenMarkov { p: 0.9, q: 0.8 };
    let belief = PredictorSpec::HmmGrid { step: 0.02 };
    let grid = GridPosterior::uniform(0.02).map_err(|e| e.to_string())?;
    ensure(grid.grid().contains(&(0.9, 0.8)), || "truth is not a grid point".into())?;

    let reports = run_merging_panel(&truth, &belief, 20_000, &seeds(), params()).map_err(|e| e.to_string())?;
    // The first 2000 steps of a run are the run at N = 2000.
    let short = run_merging_experiment(&truth, &belief, 2000, 1, params()).map_err(|e| e.to_string())?;
    ensure(reports[0].cesaro_mean_at(2000) == Some(short.final_cesaro_mean()), || "prefix mismatch".into())?;

    let at_short: Vec<f64> = reports.iter().map(|r| r.cesaro_mean_at(2000).expect("N >= 2000")).collect();
    let at_long: Vec<f64> = reports.iter().map(|r| r.final_cesaro_mean()).collect();
    let (m_short, m_long) = (median(&at_short), median(&at_long));
    ensure(m_long < m_short && m_long < 0.05, || format!("median {m_short} at 2000, {m_long} at 20000"))?;
    Ok(format!("{} grid points, median final Cesaro mean {m_short:.4} at N=2000, {m_long:.4} at N=20000", grid.grid().len()))
}

// 5 ------------------------------------------------------------------------

const HMM_LEN: usize = 12;

/// `P(a_0 … a_12)` for every observation word (bit `t` = `a_t`) by summing
/// over all hidden paths `h_{−1}, …, h_12`.
fn hidden_path_enumeration(p: f64, q: f64) -> Vec<f64> {
    let m = HMM_LEN + 1;
    let rows = [hm_transition(0, p, q).expect("valid"), hm_transition(1, p, q).expect("valid")];
    let step = |from: usize, to: usize| rows[from].prob(2 * to) + rows[from].prob(2 * to + 1);
    let emission: Vec<f64> = (0..=m).map(|miss| q.powi((m - miss) as i32) * (1.0 - q).powi(miss as i32)).collect();
    let mut probs = vec![0.0; 1 << m];
    for h_init in 0..2 {
        for hidden in 0..(1usize << m) {
            let mut weight = 0.5 * step(h_init, hidden & 1);
            for t in 1..m {
                weight *= step((hidden >> (t - 1)) & 1, (hidden >> t) & 1);
            }
            for (word, prob) in probs.iter_mut().enumerate() {
                *prob += weight * emission[(word ^ hidden).count_ones() as usize];
            }
        }
    }
    probs
}

fn filter_walk(post: &GridPosterior, word: usize, len: usize, marginals: &[Vec<f64>], worst: &mut f64) {
    let exact = marginals[len + 1][word | (1 << len)] / marginals[len][word];
    *worst = worst.max((post.predictive().prob(1) - exact).abs());
    if len == HMM_LEN {
        return;
    }
    for s in 0..2 {
        let mut next = post.clone();
        next.observe(s).expect("positive likelihood");
        filter_walk(&next, word | (s << len), len + 1, marginals, worst);
    }
}

fn criterion_5() -> Result<String, String> {
    let mut rng = PathRng::new(2024, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = 1.0 - 0.5 * rng.uniform();
        let q = 1.0 - 0.5 * rng.uniform();
        let full = hidden_path_enumeration(p, q);
        // marginals[n][word] = P(first n symbols = word)
        let mut marginals = vec![full];
        for n in (0..=HMM_LEN).rev() {
            let longer = marginals.last().expect("nonempty");
            let shorter: Vec<f64> = (0..(1usize << n)).map(|w| longer[w] + longer[w | (1 << n)]).collect();
            marginals.push(shorter);
        }
        marginals.reverse();
        let post = GridPosterior::new(vec![(p, q)], None).map_err(|e| e.to_string())?;
        let mut local: f64 = 0.0;
        filter_walk(&post, 0, 0, &marginals, &mut local);
        ensure(local < 1e-10, || format!("(p, q) = ({p}, {q}): error {local:e}"))?;
        worst = worst.max(local);
    }
    Ok(format!("50 random (p, q), 8191 histories each, max error {worst:.1e}"))
}

// 6 ------------------------------------------------------------------------

fn criterion_6() -> Result<String, String> {
    let mut parts = Vec::new();
    for truth in [
        ComponentParams::Bernoulli { theta: 0.3 },
        ComponentParams::HiddenMarkov { p: 0.9, q: 0.8 },
        ComponentParams::War,
    ] {
        let mut good = 0;
        let mut worst: f64 = 0.0;
        for seed in seeds() {
            let mut sim = Simulator::new(&truth, seed).map_err(|e| e.to_string())?;
            let path = sim.sample_path(100_000);
            let gap = max_gap_up_to(&path, sim.component(), 3).map_err(|e| e.to_string())?;
            good += usize::from(gap < 0.02);
            worst = worst.max(gap);
        }
        ensure(good >= 18, || format!("{}: {good}/20 seeds", truth.family()))?;
        parts.push(format!("{} {good}/20 (worst {worst:.4})", truth.family()));
    }
    Ok(parts.join(", "))
}

// 7 ------------------------------------------------------------------------

fn criterion_7() -> Result<String, String> {
    for seed in seeds() {
        let r = dirac_witness_experiment(10_000, seed, params()).map_err(|e| e.to_string())?;
        ensure(r.distances.values().iter().all(|d| *d == 0.5), || format!("seed {seed}: distance other than 1/2"))?;
        ensure(r.final_cesaro_mean() == 0.5, || format!("seed {seed}: final mean {}", r.final_cesaro_mean()))?;
        ensure(!r.verdict.weak, || format!("seed {seed}: weak verdict true"))?;
        let again = dirac_witness_experiment(10_000, seed, params()).map_err(|e| e.to_string())?;
        ensure(again == r, || format!("seed {seed}: rerun differs"))?;
    }
    Ok("20 seeds, every distance 1/2, final mean 0.5, weak false, reruns identical".into())
}

// 8 ------------------------------------------------------------------------

fn criterion_8() -> Result<String, String> {
    let mut parts = Vec::new();
    for (truth, belief) in [
        (ComponentParams::War, PredictorSpec::WarBayes),
        (ComponentParams::Bernoulli { theta: 0.7 }, two_point()),
    ] {
        let problem = DecisionProblem::matching(&truth.alphabet());
        let r = epsilon_optimality_gap(&belief, &truth, &problem, 10_000, &seeds()).map_err(|e| e.to_string())?;
        for s in &r.per_seed {
            let merge = run_merging_experiment(&truth, &belief, 10_000, s.seed, params()).map_err(|e| e.to_string())?;
            ensure(merge.verdict.weak, || format!("{} seed {}: belief does not weakly merge", truth.family(), s.seed))?;
            ensure(s.gap >= -1e-12 && s.gap <= 2.0 * s.final_cesaro_mean + 0.01, || {
                format!("{} seed {}: gap {} vs Cesaro mean {}", truth.family(), s.seed, s.gap, s.final_cesaro_mean)
            })?;
        }
        ensure(r.gap >= -1e-12 && r.gap <= 2.0 * r.mean_final_cesaro + 0.01, || format!("{}: mean gap {}", truth.family(), r.gap))?;
        let same = epsilon_optimality_gap(&PredictorSpec::Oracle, &truth, &problem, 10_000, &seeds())
            .map_err(|e| e.to_string())?;
        ensure(same.gap.to_bits() == 0.0f64.to_bits() && same.per_seed.iter().all(|s| s.gap.to_bits() == 0), || {
            format!("{}: oracle-vs-oracle gap {}", truth.family(), same.gap)
        })?;
        parts.push(format!("{} gap {:.2e} (bound {:.2e})", truth.family(), r.gap, 2.0 * r.mean_final_cesaro + 0.01));
    }
    Ok(format!("{}, oracle gap exactly 0", parts.join(", ")))
}

// 9 ------------------------------------------------------------------------

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .expect("output dir")
        .map(|e| {
            let path = e.expect("dir entry").path();
            (path.file_name().expect("file").to_string_lossy().into_owned(), std::fs::read(&path).expect("artifact"))
        })
        .collect()
}

fn criterion_9() -> Result<String, String> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    let mut names = Vec::new();
    for name in [
        "merge_war", "merge_hmm", "merge_exchangeable", "merge_two_point", "dirac", "calibrate_oracle",
        "freq_war", "freq_two_point", "decide_war", "decide_two_point",
    ] {
        let mut config = load_config(&root.join(format!("{name}.json"))).map_err(|e| e.to_string())?;
        if name == "merge_hmm" {
            config = config.with_seeds(vec![1, 2]).map_err(|e| e.to_string())?;
        }
        let (a, b) = (tmp.path().join(format!("{name}_a")), tmp.path().join(format!("{name}_b")));
        run_experiment(&config, &a).map_err(|e| e.to_string())?;
        run_experiment(&config, &b).map_err(|e| e.to_string())?;
        let (sa, sb) = (snapshot(&a), snapshot(&b));
        ensure(sa == sb, || format!("{name}: artifacts differ between runs"))?;
        files += sa.len();
        names.push(name);
    }
    Ok(format!("{} configs, {files} artifacts byte-identical across reruns", names.len()))
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, u64, Check); 9] = [
        (1, "exchangeable predictive equals the block-law ratio", 10, criterion_1),
        (2, "fine Bernoulli grid matches the exchangeable predictive", 60, criterion_2),
        (3, "war process merges weakly but not strongly", 120, criterion_3),
        (4, "hidden Markov grid posterior Cesaro trend", 600, criterion_4),
        (5, "forward filter equals hidden-path enumeration", 30, criterion_5),
        (6, "block frequencies match exact block laws", 300, criterion_6),
        (7, "Dirac decomposition witness never merges", 60, criterion_7),
        (8, "decision gap bounded by prediction distance", 120, criterion_8),
        (9, "artifacts reproduce byte for byte", 600, criterion_9),
    ];
    let mut failed = 0;
    for (id, title, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        failed += usize::from(status == "FAIL");
        println!("criterion {id} {status}: {title}: {detail} [{:.1} s]", elapsed.as_secs_f64());
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
