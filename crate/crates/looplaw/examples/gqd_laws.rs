//! Generalized quantum-disk laws: the area Laplace transform, its
//! area-weighted companion, the mean area, and the power-law upper tail
//! recovered by numerical Laplace inversion.
//!
//!     cargo run --release --example gqd_laws

use looplaw::formulas;
use looplaw::params::from_kappa;
use looplaw::specfun::invert_laplace;
use num_complex::Complex64;

fn main() -> looplaw::Result<()> {
    let ell = 1.0;
    for &kp in &[5.0f64, 6.0, 7.0] {
        let p = from_kappa(kp)?;
        println!("kappa' = {kp}:");
        for &mu in &[0.1f64, 1.0, 10.0] {
            println!(
                "  K(mu={mu:>4}) = {:.12}   area-weighted = {:.12}",
                formulas::gqd_laplace(p, ell, mu)?,
                formulas::gqd_area_weighted_laplace(p, ell, mu)?
            );
        }
        let mean = formulas::gqd_mean_area(p, ell)?;
        println!("  mean area E[A] = {mean:.12}");

        // Upper tail of the area-weighted law: invert (1 - phi_w(s)/E[A])/s
        // and compare with the closed-form coefficient times x^(1 - kappa'/4).
        let transform = |s: Complex64| {
            let w = formulas::gqd_area_weighted_laplace_complex(p, ell, s)
                .unwrap_or(Complex64::new(f64::NAN, 0.0));
            (Complex64::new(1.0, 0.0) - w / mean) / s
        };
        let (coeff, expo) = formulas::gqd_tail_coefficient(p)?;
        println!("  tail P[A > x] ~ {coeff:.6} * x^({expo:.4}):");
        for &x in &[1e2f64, 1e3, 1e4] {
            let inverted = invert_laplace(&transform, x, 64);
            println!(
                "    x = {x:>7.0}: inverted {inverted:.6e}  asymptote {:.6e}",
                coeff * x.powf(expo)
            );
        }
    }
    Ok(())
}
