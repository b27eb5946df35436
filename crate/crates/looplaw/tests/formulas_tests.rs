//! Closed-form engine tests: frozen oracle decimals, hand-derived spot
//! values, exponent arithmetic, and cross-formula identities.

use looplaw::formulas::{self, ConstantId};
use looplaw::params::{alpha_for_lambda, from_kappa, stable_index, AlphaParams};
use looplaw::specfun::{self, QuadratureConfig};
use std::f64::consts::PI;

fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    let err = (got - want).abs() / want.abs().max(1e-300);
    assert!(err <= tol, "{what}: got {got}, want {want}, rel err {err:.3e}");
}

#[test]
fn thickness_mgf_values() {
    for &k in &[1.0f64, 2.5, 4.0, 6.0, 7.5] {
        let p = from_kappa(k).unwrap();
        assert_eq!(formulas::thickness_mgf(p, 0.0), 1.0, "normalization at kappa={k}");
        // At and above the pole the moment is infinite.
        let pole = 1.0 - p.kappa_eff() / 8.0;
        assert!(formulas::thickness_mgf(p, pole).is_infinite());
        assert!(formulas::thickness_mgf(p, pole + 0.3).is_infinite());
    }
    // Frozen oracle: [sin(pi/2)/(pi/2)] * [pi sqrt(3/4) / sin(pi sqrt(3/4))].
    let p2 = from_kappa(2.0).unwrap();
    assert_rel(
        formulas::thickness_mgf(p2, 0.5),
        4.239235343463102,
        1e-13,
        "thickness(2, 0.5)",
    );
}

#[test]
fn kw_flip_is_bit_exact() {
    for &k in &[2.5f64, 3.0, 3.7, 4.0] {
        let p = from_kappa(k).unwrap();
        let flipped = from_kappa(16.0 / p.kappa_eff()).unwrap();
        for j in 0..12 {
            let lam = -1.2 + 0.2 * j as f64;
            let a = formulas::kw_conjectured_mgf(p, lam);
            let b = formulas::thickness_mgf(flipped, lam);
            assert!(
                a == b || (a.is_infinite() && b.is_infinite()),
                "flip mismatch at kappa={k}, lambda={lam}: {a} vs {b}"
            );
        }
    }
    // Divergence asymmetry as kappa -> 8^-: the true MGF blows up at a fixed
    // admissible lambda while the flipped form stays finite.
    let p8 = from_kappa(7.999_999).unwrap();
    assert!(formulas::thickness_mgf(p8, 0.0009) > 1e3);
    let conj = formulas::kw_conjectured_mgf(p8, -0.5);
    assert!(conj.is_finite() && conj > 0.0);
}

#[test]
fn normalized_loop_mass_ratio_matches_mgf() {
    for &k in &[2.8f64, 3.0, 3.5, 3.9, 4.0, 4.5, 6.0, 7.5] {
        let p = from_kappa(k).unwrap();
        let pole = 1.0 - p.kappa_eff() / 8.0;
        // The insertion is real only when Q^2 - 4 + 2 lambda >= 0; stop a
        // little short of the pole, where the moment's condition number
        // exceeds the 1e-10 target for both expressions alike.
        let lo = (-1.0f64).max((4.0 - p.q * p.q) / 2.0 + 1e-9);
        let hi = pole - 1e-3 * (pole - lo);
        for j in 0..20 {
            let lam = lo + (hi - lo) * j as f64 / 19.0;
            let lhs = formulas::normalized_loop_mass_ratio(p, lam).unwrap();
            let rhs = formulas::thickness_mgf(p, lam);
            assert_rel(lhs, rhs, 1e-10, &format!("mgf identity at kappa={k}, lambda={lam}"));
        }
    }
}

#[test]
fn loop_mass_ratio_at_alpha_gamma() {
    // alpha = gamma makes the sine argument x = 1 - kappa/4 in the simple
    // regime; the ratio is then x / sin(pi x).
    let p = from_kappa(3.0).unwrap();
    let ap = AlphaParams::new(p, p.gamma);
    let x = 1.0 - 3.0 / 4.0;
    assert_rel(
        formulas::loop_mass_ratio(ap).unwrap(),
        x / (PI * x).sin(),
        1e-13,
        "loop mass ratio at alpha=gamma",
    );
    // Self-normalization at lambda = 0.
    assert_rel(
        formulas::normalized_loop_mass_ratio(p, 0.0).unwrap(),
        1.0,
        1e-14,
        "normalized ratio at 0",
    );
}

#[test]
fn sphere_disk_constants() {
    // Disk length constant at gamma = sqrt(2): (2pi)/( (1/2) Gamma(1/2)^2 ) = 4.
    let p2 = from_kappa(2.0).unwrap();
    assert_rel(formulas::disk_length_constant(p2).unwrap(), 4.0, 1e-12, "R at gamma=sqrt2");
    // Positivity across gamma in (0,2).
    for i in 1..20 {
        let g2 = 0.2 * i as f64;
        if g2 >= 4.0 {
            break;
        }
        let p = from_kappa(g2).unwrap();
        assert!(formulas::disk_length_constant(p).unwrap() > 0.0, "R > 0 at gamma^2={g2}");
    }
}

#[test]
fn sphere_area_density_integral() {
    // Integral over (1, infinity) of (1/2) R(alpha) a^{(2/gamma)(alpha-Q)-1}
    // equals gamma R(alpha) / (4 (Q - alpha)).
    let p = from_kappa(1.0).unwrap();
    let ap = AlphaParams::new(p, 1.5);
    let cfg = QuadratureConfig::default();
    let expo = 2.0 / p.gamma * (ap.alpha - p.q) - 1.0;
    // Substitute a = e^u to tame the tail.
    let upper = 60.0 / -(expo + 1.0);
    let quad = specfun::integrate(
        |u: f64| {
            let a = u.exp();
            formulas::sphere_area_density(ap, a).unwrap() * a
        },
        0.0,
        upper,
        &cfg,
    )
    .unwrap();
    let closed = p.gamma * formulas::reflection_coefficient(ap).unwrap() / (4.0 * (p.q - ap.alpha));
    assert_rel(quad, closed, 1e-9, "sphere density integral");
    // Scaling: density(c a) = c^{expo} density(a).
    let c = 3.7;
    assert_rel(
        formulas::sphere_area_density(ap, c * 2.0).unwrap(),
        c.powf(expo) * formulas::sphere_area_density(ap, 2.0).unwrap(),
        1e-12,
        "sphere density scaling",
    );
}

#[test]
fn reflection_positive_on_admissible_range() {
    let p = from_kappa(1.0).unwrap();
    for i in 1..20 {
        let alpha = p.gamma / 2.0 + (p.q - p.gamma / 2.0) * i as f64 / 21.0;
        let ap = AlphaParams::new(p, alpha);
        assert!(
            formulas::reflection_coefficient(ap).unwrap() > 0.0,
            "reflection coefficient must be positive at alpha={alpha}"
        );
    }
}

#[test]
fn u_bar_behavior() {
    let p = from_kappa(1.0).unwrap();
    // Near alpha = gamma/2 the value diverges like a Gamma pole.
    let near = formulas::u_bar(AlphaParams::new(p, p.gamma / 2.0 + 1e-8)).unwrap();
    assert!(near.abs() > 1e6, "u_bar should blow up near gamma/2, got {near}");
    // Direct-evaluation spot value stays finite and positive mid-range.
    let v = formulas::u_bar(AlphaParams::new(p, 2.0)).unwrap();
    assert!(v.is_finite() && v > 0.0);
}

#[test]
fn fzz_density_and_laplace() {
    let p = from_kappa(2.25).unwrap();
    let ap = AlphaParams::new(p, 1.6);
    let cfg = QuadratureConfig::default();
    // Probability density normalization.
    let norm = specfun::integrate(
        |u: f64| {
            let x = u.exp();
            formulas::fzz_area_density(ap, x).unwrap() * x
        },
        -25.0,
        30.0,
        &cfg,
    )
    .unwrap();
    assert_rel(norm, 1.0, 1e-8, "fzz density normalization");
    // |M(alpha; ell)| * E[e^{-mu ell^2 A}] = fzz_laplace on a 3x3x3 grid.
    for &gam in &[1.0f64, 1.2, 1.5] {
        let p = from_kappa(gam * gam).unwrap();
        let alpha = 0.5 * (gam / 2.0 + p.q);
        let ap = AlphaParams::new(p, alpha);
        for &ell in &[0.5f64, 1.0, 2.0] {
            for &mu in &[0.3f64, 1.0, 3.0] {
                let mass = formulas::disk_mass(ap, ell).unwrap();
                let lhs = mass
                    * specfun::integrate(
                        |u: f64| {
                            let x = u.exp();
                            (-mu * ell * ell * x).exp()
                                * formulas::fzz_area_density(ap, x).unwrap()
                                * x
                        },
                        -25.0,
                        30.0,
                        &cfg,
                    )
                    .unwrap();
                let rhs = formulas::fzz_laplace(ap, ell, mu).unwrap();
                assert_rel(lhs, rhs, 1e-8, &format!("fzz round trip g={gam} l={ell} mu={mu}"));
            }
        }
    }
    // mu -> 0 limit of the Laplace side recovers the total mass.
    let ap2 = AlphaParams::new(from_kappa(2.25).unwrap(), 1.6);
    assert_rel(
        formulas::fzz_laplace(ap2, 1.0, 1e-12).unwrap(),
        formulas::disk_mass(ap2, 1.0).unwrap(),
        1e-5,
        "fzz laplace small-mu limit",
    );
}

#[test]
fn gqd_transforms() {
    let p = from_kappa(5.0).unwrap();
    // ell -> 0 limit of the normalized transform is 1.
    assert_rel(formulas::gqd_laplace(p, 1e-9, 1.0).unwrap(), 1.0, 1e-6, "gqd_laplace ell->0");
    // Derivative identity: -d/dmu gqd_laplace = area-weighted transform.
    for &kp in &[4.5f64, 5.0, 6.0, 7.0] {
        let p = from_kappa(kp).unwrap();
        for &mu in &[0.4f64, 1.0, 2.5] {
            let h = 1e-5 * mu;
            let fd = -(formulas::gqd_laplace(p, 1.3, mu + h).unwrap()
                - formulas::gqd_laplace(p, 1.3, mu - h).unwrap())
                / (2.0 * h);
            let w = formulas::gqd_area_weighted_laplace(p, 1.3, mu).unwrap();
            assert_rel(fd, w, 1e-6, &format!("derivative identity kp={kp} mu={mu}"));
        }
    }
    // Small-mu limit of the weighted transform is the displayed mean.
    for &kp in &[5.0f64, 6.0, 7.0] {
        let p = from_kappa(kp).unwrap();
        let nu = 4.0 / kp;
        // The correction is O(z^{2-2nu}); pick mu so that it sits below 1e-6.
        let z_target = (1e-7f64).powf(1.0 / (2.0 * (1.0 - nu)));
        let qs = 4.0 * (PI * p.gamma * p.gamma / 4.0).sin();
        let mu_small = qs * (z_target / (2.0 * 1.3)).powf(8.0 / kp);
        assert_rel(
            formulas::gqd_area_weighted_laplace(p, 1.3, mu_small).unwrap(),
            formulas::gqd_mean_area(p, 1.3).unwrap(),
            1e-5,
            &format!("mean limit kp={kp}"),
        );
    }
}

#[test]
fn gqd_length_exponents() {
    let p = from_kappa(6.0).unwrap();
    let g2 = p.gamma * p.gamma;
    // Unweighted exponent -2 - gamma^2/4; weighted 4/kappa' - 2.
    let r = formulas::gqd_length_density(p, 2.0).unwrap() / formulas::gqd_length_density(p, 1.0).unwrap();
    assert_rel(r, 2.0f64.powf(-2.0 - g2 / 4.0), 1e-12, "gqd length exponent");
    let r1 = formulas::gqd1_length_density(p, 2.0).unwrap() / formulas::gqd1_length_density(p, 1.0).unwrap();
    assert_rel(r1, 2.0f64.powf(4.0 / 6.0 - 2.0), 1e-12, "gqd1 length exponent");
    // Ratio gqd(b)/gqd(a) = (a/b)^{beta + 3/2} with beta from the index table.
    let beta = stable_index(p).unwrap().beta;
    let ratio = formulas::gqd_length_density(p, 3.0).unwrap() / formulas::gqd_length_density(p, 1.7).unwrap();
    assert_rel(ratio, (1.7f64 / 3.0).powf(beta + 1.5), 1e-12, "QD ratio exponent");
}

#[test]
fn annulus_and_jump_density() {
    let p3 = from_kappa(3.0).unwrap();
    assert_rel(
        formulas::annulus_mass(1.0, 1.0, p3).unwrap(),
        1.0 / (4.0 * PI),
        1e-13,
        "annulus at gamma^2=3, a=b=1",
    );
    // Symmetry and scaling.
    let p = from_kappa(5.0).unwrap();
    assert_rel(
        formulas::annulus_mass(0.7, 2.2, p).unwrap(),
        formulas::annulus_mass(2.2, 0.7, p).unwrap(),
        1e-14,
        "annulus symmetry",
    );
    let c = 1.9;
    assert_rel(
        formulas::annulus_mass(c * 0.7, c * 2.2, p).unwrap(),
        formulas::annulus_mass(0.7, 2.2, p).unwrap() / (c * c),
        1e-12,
        "annulus scaling",
    );

    // Jump density: (b/a)^{beta+1} (a+b) density = frakC, constant in b.
    let beta = 1.5;
    let fc = formulas::frak_c(beta).unwrap();
    for &b in &[0.3f64, 1.0, 4.0] {
        let d = formulas::levy_jump_density(beta, 1.0, b).unwrap();
        assert_rel(d * b.powf(beta + 1.0) * (1.0 + b), fc, 1e-13, "frakC constancy");
    }
    // Tail ratio density(2b)/density(b) = 2^{-beta-1} (a+b)/(a+2b).
    let (a, b) = (1.0, 0.8);
    assert_rel(
        formulas::levy_jump_density(beta, a, 2.0 * b).unwrap()
            / formulas::levy_jump_density(beta, a, b).unwrap(),
        2.0f64.powf(-beta - 1.0) * (a + b) / (a + 2.0 * b),
        1e-12,
        "jump density tail ratio",
    );
    // The form is a jump intensity: it diverges like b^{-beta-1} at 0, so
    // only truncated masses are finite. Frozen oracle for the [1,2] bin at
    // beta=1.5, a=1.
    let cfg = QuadratureConfig::default();
    let bin = specfun::integrate(
        |b: f64| formulas::levy_jump_density(beta, 1.0, b).unwrap(),
        1.0,
        2.0,
        &cfg,
    )
    .unwrap();
    assert_rel(bin, 0.05889206478979936, 1e-11, "bin [1,2] mass");
    // QD-ratio form of the same density.
    let qd = |x: f64| x.powf(-beta - 1.5);
    for &b in &[0.4f64, 1.3, 2.7] {
        let lhs = formulas::levy_jump_density(beta, 1.0, b).unwrap();
        let rhs = fc * b * qd(b) / ((1.0f64 * b).sqrt() * (1.0 + b) * qd(1.0));
        assert_rel(lhs, rhs, 1e-12, "QD ratio identity");
    }
}

#[test]
fn dilation_and_cr_moment() {
    assert_rel(
        formulas::dilation_constant(from_kappa(6.0).unwrap()).unwrap(),
        1.0 / (2.0 * PI * 3.0f64.sqrt()),
        1e-13,
        "dilation at kappa=6",
    );
    assert_rel(
        formulas::dilation_constant(from_kappa(4.0).unwrap()).unwrap(),
        1.0 / (PI * PI),
        1e-10,
        "dilation at kappa=4 (limit)",
    );
    // Continuity of the removable singularity at kappa = 4: the secant slope
    // is about 2.5e-2, so +-1e-4 moves the value by about 2.5e-6 and nothing
    // more (no blow-up from the 0/0 form).
    let d4 = formulas::dilation_constant(from_kappa(4.0).unwrap()).unwrap();
    for &h in &[1e-4f64, -1e-4] {
        let v = formulas::dilation_constant(from_kappa(4.0 + h).unwrap()).unwrap();
        assert!((v - d4).abs() <= 5e-6, "dilation continuity at 4: jump {}", v - d4);
    }

    for &k in &[3.0f64, 4.0, 6.0, 7.5] {
        let p = from_kappa(k).unwrap();
        assert_rel(formulas::ssw_cr_moment(p, 0.0).unwrap(), 1.0, 1e-14, "cr moment mass");
        // Reciprocal-mean identity: dilation = 1 / E[B].
        let h = 1e-6;
        let mean = -(formulas::ssw_cr_moment(p, h).unwrap()
            - formulas::ssw_cr_moment(p, -h).unwrap())
            / (2.0 * h);
        assert_rel(
            formulas::dilation_constant(p).unwrap(),
            1.0 / mean,
            1e-8,
            &format!("reciprocal mean at kappa={k}"),
        );
    }
    // Hyperbolic-branch spot value at kappa=6, lambda=1.
    assert_rel(
        formulas::ssw_cr_moment(from_kappa(6.0).unwrap(), 1.0).unwrap(),
        0.030988997311672108,
        1e-12,
        "cr moment (6,1)",
    );
    // Divergence at the pole boundary.
    let p6 = from_kappa(6.0).unwrap();
    let pole = formulas::ssw_pole(p6);
    assert!(formulas::ssw_cr_moment(p6, pole - 1e-9).is_err());
    assert!(formulas::ssw_cr_moment(p6, pole + 1e-6).unwrap() > 1e3);
}

#[test]
fn growth_fragmentation_forms() {
    // nu_theta positivity on both branches for theta in (1, 3/2).
    for &x in &[0.6f64, 0.9, 1.4, 3.0] {
        assert!(formulas::nu_theta_density(1.25, x).unwrap() > 0.0);
    }
    assert!(formulas::nu_theta_density(1.25, 0.4).is_err(), "support starts at 1/2");
    // psi_theta: two-resolution agreement.
    let tight = QuadratureConfig { max_subdivisions: 4000, ..QuadratureConfig::default() };
    let loose = QuadratureConfig {
        abs_tol: 1e-9,
        rel_tol: 1e-8,
        max_subdivisions: 1500,
        ..QuadratureConfig::default()
    };
    let a = formulas::psi_theta(1.25, 1.0, &tight).unwrap();
    let b = formulas::psi_theta(1.25, 1.0, &loose).unwrap();
    assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "psi_theta two-resolution: {a} vs {b}");
    assert!(formulas::psi_theta(1.0, 1.0, &tight).is_err(), "theta=1 excluded");
    assert!(formulas::psi_theta(1.25, 3.6, &tight).is_err(), "lambda above 2 theta + 1");
}

#[test]
fn tail_coefficients() {
    // Direct evaluation at kappa' = 6 against the displayed Gamma product.
    let p = from_kappa(6.0).unwrap();
    let qs = 4.0 * (PI * p.gamma * p.gamma / 4.0).sin();
    let want = specfun::gamma_fn(4.0 / 6.0).unwrap()
        / (specfun::gamma_fn(2.0 - 4.0 / 6.0).unwrap() * specfun::gamma_fn(2.0 - 1.5).unwrap())
        * qs.powf(1.0 - 1.5);
    let (coeff, expo) = formulas::gqd_tail_coefficient(p).unwrap();
    assert_rel(coeff, want, 1e-13, "gqd tail coefficient kp=6");
    assert_rel(expo, -0.5, 1e-14, "gqd tail exponent kp=6");
    // alpha = gamma reduces the forested-disk exponent to the unweighted one.
    let ap = AlphaParams::new(p, p.gamma);
    let (_, e2) = formulas::fd_alpha_tail_coefficient(ap).unwrap();
    assert_rel(e2, 1.0 - 6.0 / 4.0, 1e-12, "fd exponent at alpha=gamma");
}

#[test]
fn welding_constants() {
    for &g2 in &[1.21f64, 2.25, 3.0] {
        let p = from_kappa(g2).unwrap();
        let ap = alpha_for_lambda(p, 0.0).unwrap();
        let cg = formulas::eval_constant(ConstantId::CGamma, ap, None).unwrap();
        let kg = formulas::eval_constant(ConstantId::KGamma, ap, None).unwrap();
        assert_rel(
            kg,
            cg * PI * p.gamma / (2.0 * (p.q - p.gamma) * (p.q - p.gamma)),
            1e-12,
            &format!("K = C pi gamma / (2 (Q-gamma)^2) at gamma^2={g2}"),
        );
        // Delta_gamma = (gamma/2)(Q - gamma/2) = 1 for every gamma.
        let apg = AlphaParams::new(p, p.gamma);
        assert_rel(
            formulas::eval_constant(ConstantId::DeltaAlpha, apg, None).unwrap(),
            1.0,
            1e-13,
            "Delta_gamma = 1",
        );
    }
    // K'/R'^2 at gamma = sqrt(3): leading minus cancels the negative tangent.
    // The primed constants live in the non-simple regime (kappa' = 16/3).
    let p3 = from_kappa(16.0 / 3.0).unwrap();
    let ap3 = AlphaParams::new(p3, p3.gamma);
    let kp = formulas::eval_constant(ConstantId::KprimeOverRprime2, ap3, None).unwrap();
    assert!(kp > 0.0, "K'/R'^2 must be positive, got {kp}");
    let cp = formulas::eval_constant(ConstantId::CprimeOverRprime2, ap3, None).unwrap();
    assert_rel(
        cp,
        kp * 2.0 * (p3.q - p3.gamma) * (p3.q - p3.gamma) / (PI * p3.gamma),
        1e-12,
        "C'/R'^2 vs K'/R'^2",
    );
}

#[test]
fn small_length_welding_log_growth() {
    let p = from_kappa(2.25).unwrap();
    for &alpha in &[1.2f64, 1.7] {
        let ap = AlphaParams::new(p, alpha);
        let (i1, k) = formulas::small_length_welding_integral(ap, 1e-6, 1e-2).unwrap();
        assert_rel(i1 / (k * (1e-2f64 / 1e-6).ln()), 1.0, 0.02, "log growth ratio");
        // Doubling the log range doubles the integral to leading order.
        let (i2, _) = formulas::small_length_welding_integral(ap, 1e-10, 1e-2).unwrap();
        assert_rel(i2 / i1, 2.0, 0.02, "log-linear growth");
    }
}

#[test]
fn constants_all_evaluate() {
    // Non-simple parameters (gamma = sqrt(3), kappa' = 16/3) so the primed
    // welding constants are in-domain along with everything else.
    let p = from_kappa(16.0 / 3.0).unwrap();
    let ap = AlphaParams::new(p, p.gamma);
    for id in ConstantId::ALL {
        let v = formulas::eval_constant(id, ap, Some(1.0)).unwrap();
        assert!(v.is_finite(), "{id:?} did not evaluate finitely");
    }
}
