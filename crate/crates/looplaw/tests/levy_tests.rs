//! First-passage simulator tests: exact hitting behavior, jump intensity,
//! compensation martingale, hitting-time ratios, and the weighted histogram.

use looplaw::formulas;
use looplaw::levy::{self, LevySimConfig};
use looplaw::replica_rng;
use std::f64::consts::PI;

fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got}, want {want} (tol {tol})"
    );
}

#[test]
fn config_domain_errors() {
    assert!(LevySimConfig::new(1.0, 1e-3, 1).is_err(), "beta = 1 rejected");
    assert!(LevySimConfig::new(2.0, 1e-3, 1).is_err(), "beta = 2 rejected");
    assert!(LevySimConfig::new(1.5, 0.0, 1).is_err(), "eps = 0 rejected");
    assert!(LevySimConfig::new(1.5, 1.5, 1).is_err(), "eps > 1 rejected");
    assert!(LevySimConfig::new(1.5, 1e-3, 1).is_ok());
}

#[test]
fn hitting_ends_exactly_at_level() {
    let cfg = LevySimConfig::new(1.5, 1e-2, 7).unwrap();
    for i in 0..20 {
        let mut rng = replica_rng(7, i);
        let path = levy::simulate_to_hitting(1.25, &cfg, &mut rng).unwrap();
        assert_eq!(path.terminal_level, -1.25, "terminal level is the barrier");
        assert!(path.tau_a > 0.0 && path.tau_a.is_finite());
        // Jump times are increasing and within the run.
        for w in path.jumps.windows(2) {
            assert!(w[0].time <= w[1].time, "jump times sorted");
        }
        for j in &path.jumps {
            assert!(j.size > 0.0, "spectrally positive: all jumps up");
        }
    }
    let mut rng = replica_rng(7, 0);
    assert!(levy::simulate_to_hitting(-1.0, &cfg, &mut rng).is_err());
}

#[test]
fn unconditioned_intensity_and_martingale() {
    // Fixed horizon T = 1 at a fixed cutoff: the number of jumps with size in
    // [b1, b2) is Poisson with mean T (b1^-beta - b2^-beta)/beta, and the
    // compensated endpoint has mean zero.
    let beta = 1.5;
    let cfg = LevySimConfig::new(beta, 1e-2, 11).unwrap();
    let n = 600usize;
    let (b1, b2) = (0.1f64, 1.0f64);
    let expected = (b1.powf(-beta) - b2.powf(-beta)) / beta;
    let mut count = 0usize;
    let mut terminals = Vec::with_capacity(n);
    for i in 0..n {
        let mut rng = replica_rng(11, i as u64);
        let path = levy::simulate_fixed_time(1.0, &cfg, &mut rng).unwrap();
        assert!(path.tau_a.is_infinite(), "fixed-horizon run has no passage time");
        count += path.jumps.iter().filter(|j| j.size >= b1 && j.size < b2).count();
        terminals.push(path.terminal_level);
    }
    let total_expected = expected * n as f64;
    assert_close(
        count as f64,
        total_expected,
        4.0 * total_expected.sqrt(),
        "Poisson jump count in the rectangle",
    );

    let nf = n as f64;
    let mean = terminals.iter().sum::<f64>() / nf;
    let var = terminals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    let se = (var / nf).sqrt();
    assert_close(mean, 0.0, 4.0 * se, "compensated endpoint mean");
}

#[test]
fn tau_ratio_with_zero_gap_is_one() {
    // b = 0 makes both passage times the same sample: the ratio is exactly 1.
    let cfg = LevySimConfig::new(1.25, 1e-2, 3).unwrap();
    let est = levy::estimate_tau_ratio(1.0, 0.0, &cfg, 100).unwrap();
    assert_eq!(est.mean, 1.0);
    assert_eq!(est.stderr, 0.0);
    assert!(levy::estimate_tau_ratio(0.0, 1.0, &cfg, 100).is_err());
    assert!(levy::estimate_tau_ratio(1.0, 1.0, &cfg, 10).is_err(), "replica floor");
}

#[test]
fn tau_ratio_closed_form() {
    // E[tau_{-a} / tau_{-a-b}] = a/(a+b), independent of beta.
    let cfg = LevySimConfig::new(1.5, 1e-3, 5).unwrap();
    let r11 = levy::estimate_tau_ratio(1.0, 1.0, &cfg, 1500).unwrap();
    assert_close(r11.mean, 0.5, 4.0 * r11.stderr, "tau ratio (1,1)");
    let r21 = levy::estimate_tau_ratio(2.0, 1.0, &cfg, 1500).unwrap();
    assert_close(r21.mean, 2.0 / 3.0, 4.0 * r21.stderr, "tau ratio (2,1)");
}

#[test]
fn inverse_mean_closed_form() {
    // E[1/tau_{-1}] = pi / sin(-pi beta).
    let cfg = LevySimConfig::new(1.5, 1e-3, 9).unwrap();
    let est = levy::estimate_inverse_mean(&cfg, 2000).unwrap();
    assert_close(est.mean, PI, 0.05 * PI, "inverse mean at beta = 3/2");

    let cfg = LevySimConfig::new(1.75, 1e-3, 9).unwrap();
    let est = levy::estimate_inverse_mean(&cfg, 800).unwrap();
    let target = 4.442882938158366; // pi / sin(-1.75 pi)
    assert_close(
        est.mean,
        target,
        (0.05 * target).max(4.0 * est.stderr),
        "inverse mean at beta = 7/4",
    );
}

#[test]
fn tau_scaling_ks() {
    // Self-similarity: tau_{-2} / 2^beta has the law of tau_{-1}.
    let beta = 1.25;
    let n = 1500usize;
    let cfg1 = LevySimConfig::new(beta, 1e-3, 13).unwrap();
    let t1 = levy::tau_samples(1.0, &cfg1, n).unwrap();
    let cfg2 = LevySimConfig::new(beta, 1e-3, 14).unwrap();
    let t2: Vec<f64> = levy::tau_samples(2.0, &cfg2, n)
        .unwrap()
        .into_iter()
        .map(|t| t / 2.0f64.powf(beta))
        .collect();
    let ks = levy::ks_two_sample(&t1, &t2);
    let crit = 1.628 * (2.0 / n as f64).sqrt(); // 1% two-sample critical value
    assert!(ks <= crit, "KS {ks} exceeds the 1% critical value {crit}");
}

#[test]
fn weighted_histogram_matches_jump_density() {
    // The self-normalized weighted histogram estimates the closed-form
    // density of a uniformly chosen jump on the first-passage path.
    let beta = 1.5;
    let a = 1.0;
    let cfg = LevySimConfig::new(beta, 1e-3, 17).unwrap();
    let bins = [1.0f64, 1.26, 1.59, 2.0];
    let hist = levy::weighted_jump_histogram(a, &bins, &cfg, 2000).unwrap();
    for j in 0..hist.values.len() {
        let target = formulas::levy_jump_density(beta, a, hist.abscissae[j]).unwrap();
        assert_close(
            hist.values[j],
            target,
            4.0 * hist.stderr[j],
            &format!("histogram bin {j}"),
        );
    }
    // The frozen closed-form mass of [1, 2] bounds the binwise sums sanely.
    let mass: f64 = (0..hist.values.len())
        .map(|j| hist.values[j] * (bins[j + 1] - bins[j]))
        .sum();
    assert_close(mass, 0.05889206478979936, 0.015, "total mass of [1,2]");
    assert!(levy::weighted_jump_histogram(a, &[1.0], &cfg, 100).is_err(), "needs two edges");
    assert!(
        levy::weighted_jump_histogram(a, &[1.0, 0.5], &cfg, 100).is_err(),
        "edges must increase"
    );
}

#[test]
fn weighted_paths_respect_the_floor() {
    let cfg = LevySimConfig::new(1.25, 1e-3, 19).unwrap();
    let paths = levy::weighted_jump_paths(1.0, 0.5, &cfg, 50).unwrap();
    for (sizes, weight) in &paths {
        assert!(*weight > 0.0);
        for &s in sizes {
            assert!(s >= 0.5, "recorded jump {s} below the floor");
        }
    }
}

#[test]
fn replica_streams_are_deterministic() {
    let cfg = LevySimConfig::new(1.5, 1e-2, 23).unwrap();
    let a = levy::tau_samples(1.0, &cfg, 100).unwrap();
    let b = levy::tau_samples(1.0, &cfg, 100).unwrap();
    assert_eq!(a, b, "same seed reproduces the samples bit-for-bit");
    let cfg2 = LevySimConfig::new(1.5, 1e-2, 24).unwrap();
    let c = levy::tau_samples(1.0, &cfg2, 100).unwrap();
    assert_ne!(a, c, "different seeds give different samples");
}

#[test]
fn ks_statistic_basics() {
    let xs = [1.0, 2.0, 3.0, 4.0];
    assert_eq!(levy::ks_two_sample(&xs, &xs), 0.0);
    let ys = [10.0, 11.0, 12.0, 13.0];
    assert_eq!(levy::ks_two_sample(&xs, &ys), 1.0);
}
