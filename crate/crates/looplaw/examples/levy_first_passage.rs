//! First passage of the spectrally positive stable process: hitting-time
//! ratios, the inverse-mean law, and the self-similarity of tau.
//!
//!     cargo run --release --example levy_first_passage

use looplaw::levy::{self, LevySimConfig};
use std::f64::consts::PI;

fn main() -> looplaw::Result<()> {
    let n = 5_000;
    for &beta in &[1.25f64, 1.5, 1.8333] {
        let cfg = LevySimConfig::new(beta, 1e-3, 1)?;
        println!("beta = {beta} ({n} replicas, cutoff 1e-3):");

        let r = levy::estimate_tau_ratio(1.0, 1.0, &cfg, n)?;
        println!("  E[tau(-1)/tau(-2)] = {:.4} +- {:.4}   target 1/2", r.mean, r.stderr);
        let r = levy::estimate_tau_ratio(2.0, 1.0, &cfg, n)?;
        println!("  E[tau(-2)/tau(-3)] = {:.4} +- {:.4}   target 2/3", r.mean, r.stderr);

        let inv = levy::estimate_inverse_mean(&cfg, n)?;
        let target = PI / (-PI * beta).sin();
        println!(
            "  E[1/tau(-1)]       = {:.4} +- {:.4}   target pi/sin(-pi beta) = {target:.4}",
            inv.mean, inv.stderr
        );

        // Self-similarity: tau(-2)/2^beta should look like tau(-1).
        let t1 = levy::tau_samples(1.0, &cfg, n)?;
        let mut cfg2 = cfg;
        cfg2.rng_seed = 2;
        let t2: Vec<f64> = levy::tau_samples(2.0, &cfg2, n)?
            .into_iter()
            .map(|t| t / 2.0f64.powf(beta))
            .collect();
        let ks = levy::ks_two_sample(&t1, &t2);
        println!(
            "  KS(tau(-2)/2^beta, tau(-1)) = {ks:.4}   (1% critical value {:.4})\n",
            1.628 * (2.0 / n as f64).sqrt()
        );
    }
    Ok(())
}
