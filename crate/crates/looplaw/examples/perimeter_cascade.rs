//! One generation of the outermost-loop perimeter cascade: the reweighted
//! histogram of loop lengths cut out by a boundary of length 1, against the
//! closed-form length density and its disk-mass-ratio form.
//!
//!     cargo run --release --example perimeter_cascade

use looplaw::cascade;
use looplaw::levy::LevySimConfig;

fn main() -> looplaw::Result<()> {
    let beta = 1.5;
    let cfg = LevySimConfig::new(beta, 1e-3, 1)?;
    let bins: Vec<f64> = (0..=10).map(|i| 0.5 + 1.5 * i as f64 / 10.0).collect();
    let report = cascade::loop_length_density_check(1.0, &bins, &cfg, 5_000)?;

    println!("loop-length density from a boundary of length 1 (beta = {beta}):");
    println!("{:>8} {:>12} {:>10} {:>12} {:>12}", "length", "empirical", "stderr", "closed form", "QD ratio");
    for j in 0..report.empirical.values.len() {
        println!(
            "{:>8.3} {:>12.5} {:>10.5} {:>12.5} {:>12.5}",
            report.empirical.abscissae[j],
            report.empirical.values[j],
            report.empirical.stderr[j],
            report.closed_form[j],
            report.qd_ratio_form[j]
        );
    }
    println!(
        "\nworst deviation {:.2} sigma, chi2 = {:.2} on {} dof, p-value {:.3}",
        report.max_sigma_discrepancy, report.chi2, report.dof, report.p_value
    );

    // The ranked-length samples behind the histogram.
    let samples = cascade::sample_outermost_lengths(1.0, &cfg, 5)?;
    println!("\nfive ranked-length samples (weight = 1/tau):");
    for s in &samples {
        println!("  weight {:.3}: {:?}", s.weight, s.lengths);
    }
    Ok(())
}
