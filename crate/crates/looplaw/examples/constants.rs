//! Evaluate every named closed-form constant at one parameter point.
//!
//!     cargo run --release --example constants

use looplaw::formulas::{eval_constant, ConstantId};
use looplaw::params::{from_kappa, AlphaParams};

fn main() -> looplaw::Result<()> {
    // A non-simple-regime point: kappa' = 16/3, so gamma^2 = 3.
    let p = from_kappa(16.0 / 3.0)?;
    let ap = AlphaParams::new(p, p.gamma);
    println!(
        "parameters: kappa' = {:.6}, gamma = {:.6}, Q = {:.6}, alpha = gamma",
        p.kappa_prime, p.gamma, p.q
    );
    println!("{:<22} {:>24}", "constant", "value");
    for id in ConstantId::ALL {
        // M' additionally depends on the area weight mu; use mu = 1.
        let v = eval_constant(id, ap, Some(1.0))?;
        println!("{:<22} {:>24.15e}", format!("{id:?}"), v);
    }
    Ok(())
}
