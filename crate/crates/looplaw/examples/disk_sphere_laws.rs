//! Disk and sphere laws: the boundary-length constant, the sphere area
//! density, the reflection coefficient, and the FZZ area density with its
//! Laplace transform.
//!
//!     cargo run --release --example disk_sphere_laws

use looplaw::formulas;
use looplaw::params::{from_kappa, AlphaParams};
use looplaw::specfun::{integrate, QuadratureConfig};

fn main() -> looplaw::Result<()> {
    let quad = QuadratureConfig::default();

    // Boundary-length constant; at gamma = sqrt(2) it is exactly 4.
    for &g2 in &[1.0f64, 2.0, 3.0] {
        let p = from_kappa(g2)?;
        println!("R(gamma) at gamma^2 = {g2}: {:.15}", formulas::disk_length_constant(p)?);
    }

    // Sphere area density integrates to gamma R_bar / (4 (Q - alpha)).
    let p = from_kappa(1.0)?;
    let ap = AlphaParams::new(p, 1.5);
    let target = p.gamma * formulas::reflection_coefficient(ap)? / (4.0 * (p.q - ap.alpha));
    let integral = integrate(
        |u: f64| {
            let a = u.exp();
            formulas::sphere_area_density(ap, a).unwrap_or(f64::NAN) * a
        },
        0.0,
        60.0,
        &quad,
    )?;
    println!("\nsphere area density, total mass on (1, inf):");
    println!("  quadrature {integral:.12e}  closed form {target:.12e}");

    // FZZ: the area density is a probability density, and weighting by the
    // disk mass recovers the two-parameter Laplace transform.
    let pf = from_kappa(2.25)?;
    let apf = AlphaParams::new(pf, 1.6);
    let norm = integrate(
        |u: f64| {
            let x = u.exp();
            formulas::fzz_area_density(apf, x).unwrap_or(f64::NAN) * x
        },
        -25.0,
        30.0,
        &quad,
    )?;
    println!("\nFZZ area density normalization (should be 1): {norm:.12}");
    let (ell, mu) = (1.0f64, 0.5f64);
    let mass = formulas::disk_mass(apf, ell)?;
    let lhs = mass
        * integrate(
            |u: f64| {
                let x = u.exp();
                (-mu * ell * ell * x).exp() * formulas::fzz_area_density(apf, x).unwrap_or(f64::NAN) * x
            },
            -25.0,
            25.0,
            &quad,
        )?;
    let rhs = formulas::fzz_laplace(apf, ell, mu)?;
    println!("Laplace transform at (ell, mu) = ({ell}, {mu}):");
    println!("  density integral {lhs:.12e}  closed form {rhs:.12e}");
    Ok(())
}
