//! Sample one stable looptree from a conditioned skip-free walk and print it
//! as JSON and DOT; then check the jump-moment identity on many excursions.
//!
//!     cargo run --release --example looptree_sample

use looplaw::formulas::{eval_constant, ConstantId};
use looplaw::looptree;
use looplaw::params::{from_kappa, AlphaParams};
use looplaw::replica_rng;

fn main() -> looplaw::Result<()> {
    // gamma = sqrt(3) puts the walk in the nu = 4/3 stable domain.
    let gamma = 3.0f64.sqrt();
    let nu = 4.0 / (gamma * gamma);

    let mut rng = replica_rng(5, 0);
    let e = looptree::sample_excursion(nu, 400, &mut rng)?;
    let tree = looptree::build_looptree(&e)?;
    println!("excursion of {} steps -> {} loops, total length {:.6}", e.n, tree.loops.len(), tree.sum_of_loop_lengths);
    println!("\nJSON:\n{}", looptree::to_json(&tree));
    println!("\nDOT:\n{}", looptree::to_dot(&tree));

    // Jump-moment identity: E[sum of loop lengths^p] at p = 2 alpha/gamma.
    let p3 = from_kappa(3.0)?;
    for &alpha in &[gamma, 1.5] {
        let p_exp = 2.0 * alpha / gamma;
        let target = eval_constant(ConstantId::JumpMoment, AlphaParams::new(p3, alpha), None)?;
        let est = looptree::estimate_jump_moment(nu, p_exp, 2_000, 300, 1)?;
        println!(
            "jump moment p = {p_exp:.3}: estimate {:.4} +- {:.4}, closed form {target:.4}",
            est.mean, est.stderr
        );
    }
    Ok(())
}
