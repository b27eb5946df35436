//! Spectrally positive β-stable process with Lévy measure 1_{x>0} x^{−β−1}dx:
//! compound-Poisson simulation of jumps above a cutoff with the exact
//! compensating drift, optional Gaussian small-jump refinement, exact
//! first-passage sampling between jumps, and the Monte-Carlo estimators for
//! the hitting-time and size-biased jump identities.

use crate::formulas::DensityCurve;
use crate::{replica_rng, Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// How the jumps below the cutoff are treated: dropped entirely (keeping the
/// full compensator drift) or replaced by a Brownian motion matching their
/// variance rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallJumpMode {
    DriftOnly,
    GaussianApprox,
}

#[derive(Debug, Clone, Copy)]
pub struct LevySimConfig {
    /// Stability index β ∈ (1, 2).
    pub beta: f64,
    /// Small-jump truncation ε ∈ (0, 1].
    pub jump_cutoff_eps: f64,
    pub small_jump_mode: SmallJumpMode,
    pub rng_seed: u64,
    /// Abort a replica whose clock passes this value.
    pub max_path_time: f64,
}

impl LevySimConfig {
    pub fn new(beta: f64, eps: f64, seed: u64) -> Result<Self> {
        if !(beta > 1.0 && beta < 2.0) {
            return Err(Error::Domain(format!("beta must lie in (1,2), got {beta}")));
        }
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::Domain(format!("cutoff must lie in (0,1], got {eps}")));
        }
        Ok(Self {
            beta,
            jump_cutoff_eps: eps,
            small_jump_mode: SmallJumpMode::GaussianApprox,
            rng_seed: seed,
            max_path_time: 1e9,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct JumpRecord {
    pub time: f64,
    pub size: f64,
}

#[derive(Debug, Clone)]
pub struct LevyPath {
    /// Simulated jumps, sorted by time; every size exceeds the cutoff.
    pub jumps: Vec<JumpRecord>,
    /// First-passage time to −a (or +∞ for fixed-horizon runs).
    pub tau_a: f64,
    pub terminal_level: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_replicas: usize,
}

fn mc_estimate(samples: &[f64]) -> MCEstimate {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0);
    MCEstimate {
        mean,
        stderr: (var / n as f64).sqrt(),
        n_replicas: n,
    }
}

/// Inverse-Gaussian(μ, λ) sample (Michael–Schucany–Haas): the first-passage
/// time of a Brownian motion with negative drift to a fixed lower level.
fn sample_inverse_gaussian(mu: f64, lambda: f64, rng: &mut ChaCha8Rng) -> f64 {
    let z: f64 = sample_std_normal(rng);
    let y = z * z;
    let x = mu + mu * mu * y / (2.0 * lambda)
        - mu / (2.0 * lambda) * (4.0 * mu * lambda * y + mu * mu * y * y).sqrt();
    let u: f64 = rng.gen();
    if u <= mu / (mu + x) {
        x
    } else {
        mu * mu / x
    }
}

fn sample_std_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller; one draw per call keeps replica streams stateless.
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Far from the barrier the cutoff is allowed to coarsen proportionally to
/// the distance D: ε_loc = max(ε, D·COARSEN_RATIO). Jumps much smaller than
/// the remaining distance act diffusively on the passage problem, and a
/// cutoff proportional to the scale preserves the process's self-similarity,
/// so the passage laws stay accurate while the event rate per scale visit is
/// bounded (≈ COARSEN_RATIO^{−β} events per visit).
const COARSEN_RATIO: f64 = 1.0 / 30.0;

struct SegmentOutcome {
    /// Time of the barrier crossing within the segment, if any.
    hit_at: Option<f64>,
    /// Endpoint displacement when no crossing happened.
    endpoint: f64,
}

/// Exact first-passage handling of one drift(+Brownian) segment of length
/// `dt` starting at distance `dist` above the barrier. Drift `d` < 0.
fn run_segment(
    dist: f64,
    d: f64,
    sigma2: f64,
    dt: f64,
    rng: &mut ChaCha8Rng,
) -> SegmentOutcome {
    if sigma2 == 0.0 {
        // Deterministic line: crossing time is dist/|d|.
        let t_hit = dist / (-d);
        if t_hit <= dt {
            SegmentOutcome { hit_at: Some(t_hit), endpoint: 0.0 }
        } else {
            SegmentOutcome { hit_at: None, endpoint: d * dt }
        }
    } else {
        // Brownian motion with drift d < 0 hits −dist a.s.; the passage time
        // is inverse-Gaussian with mean dist/|d| and shape dist²/σ².
        let t_hit = sample_inverse_gaussian(dist / (-d), dist * dist / sigma2, rng);
        if t_hit <= dt {
            return SegmentOutcome { hit_at: Some(t_hit), endpoint: 0.0 };
        }
        // No crossing by dt: endpoint density ∝ φ(B) (1 − e^{−2 dist (B+dist)/(σ²dt)})
        // on B > −dist (Brownian-bridge minimum law); rejection against φ.
        let sd = (sigma2 * dt).sqrt();
        loop {
            let b = d * dt + sd * sample_std_normal(rng);
            if b <= -dist {
                continue;
            }
            let keep = 1.0 - (-2.0 * dist * (b + dist) / (sigma2 * dt)).exp();
            if rng.gen::<f64>() < keep {
                return SegmentOutcome { hit_at: None, endpoint: b };
            }
        }
    }
}

/// Core walker: run the compensated process from 0 downward through the
/// ordered `levels` (positive depths, increasing), recording the passage time
/// of each. `eps_cap` bounds how far the adaptive cutoff may coarsen; use
/// infinity when only passage times matter and a finite bound when the jump
/// record itself is consumed.
fn simulate_levels(
    levels: &[f64],
    cfg: &LevySimConfig,
    eps_cap: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(LevyPath, Vec<f64>)> {
    let beta = cfg.beta;
    let mut x = 0.0f64; // position
    let mut t = 0.0f64;
    let mut jumps = Vec::new();
    let mut passage = Vec::with_capacity(levels.len());
    let mut next = 0usize;

    while next < levels.len() {
        if t > cfg.max_path_time {
            return Err(Error::Timeout(format!(
                "no passage of level {} by time {t}",
                levels[next]
            )));
        }
        let barrier = -levels[next];
        let dist = x - barrier;
        debug_assert!(dist > 0.0);

        let eps_loc = (dist * COARSEN_RATIO)
            .min(eps_cap)
            .max(cfg.jump_cutoff_eps);
        let rate = eps_loc.powf(-beta) / beta;
        let drift = -eps_loc.powf(1.0 - beta) / (beta - 1.0);
        let sigma2 = match cfg.small_jump_mode {
            SmallJumpMode::DriftOnly => 0.0,
            SmallJumpMode::GaussianApprox => eps_loc.powf(2.0 - beta) / (2.0 - beta),
        };

        // Exponential waiting time to the next retained jump, truncated so
        // the local cutoff is refreshed before the state can change scale.
        // Once the cutoff has bottomed out at ε there is nothing left to
        // refine, and capping would stall the deterministic drift crossing.
        let dt_exp = -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln() / rate;
        let dt_cap = if eps_loc > cfg.jump_cutoff_eps {
            let mut cap = 0.5 * dist / (-drift);
            if sigma2 > 0.0 {
                cap = cap.min((0.5 * dist) * (0.5 * dist) / sigma2);
            }
            cap
        } else {
            f64::INFINITY
        };
        let dt = dt_exp.min(dt_cap);
        let jump_now = dt_exp <= dt_cap;

        let seg = run_segment(dist, drift, sigma2, dt, rng);
        match seg.hit_at {
            Some(t_hit) => {
                // Passage of the current level; deeper levels continue from
                // the barrier (the jump clock restarts by memorylessness).
                t += t_hit;
                x = barrier;
                passage.push(t);
                next += 1;
            }
            None => {
                t += dt;
                x += seg.endpoint;
                if jump_now {
                    // Pareto(β) size above the local cutoff, inverse-CDF.
                    let size = eps_loc * rng.gen::<f64>().max(f64::MIN_POSITIVE).powf(-1.0 / beta);
                    jumps.push(JumpRecord { time: t, size });
                    x += size;
                }
            }
        }
    }

    let tau = *passage.first().unwrap();
    Ok((
        LevyPath {
            jumps,
            tau_a: tau,
            terminal_level: -levels[levels.len() - 1],
        },
        passage,
    ))
}

/// Run the compensated process until it first passes −a; the returned path is
/// truncated at τ_{−a}.
pub fn simulate_to_hitting(a: f64, cfg: &LevySimConfig, rng: &mut ChaCha8Rng) -> Result<LevyPath> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("level must be positive, got {a}")));
    }
    Ok(simulate_levels(&[a], cfg, f64::INFINITY, rng)?.0)
}

/// Unconditioned path on [0, t_max] at the fixed cutoff ε (no coarsening),
/// for intensity and martingale checks; `tau_a` is +∞.
pub fn simulate_fixed_time(t_max: f64, cfg: &LevySimConfig, rng: &mut ChaCha8Rng) -> Result<LevyPath> {
    if !(t_max > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {t_max}")));
    }
    let beta = cfg.beta;
    let eps = cfg.jump_cutoff_eps;
    let rate = eps.powf(-beta) / beta;
    let drift = -eps.powf(1.0 - beta) / (beta - 1.0);
    let sigma2 = match cfg.small_jump_mode {
        SmallJumpMode::DriftOnly => 0.0,
        SmallJumpMode::GaussianApprox => eps.powf(2.0 - beta) / (2.0 - beta),
    };
    let mut t = 0.0;
    let mut x = 0.0;
    let mut jumps = Vec::new();
    loop {
        let dt = -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln() / rate;
        let seg_end = (t + dt).min(t_max);
        let span = seg_end - t;
        x += drift * span;
        if sigma2 > 0.0 {
            x += (sigma2 * span).sqrt() * sample_std_normal(rng);
        }
        t = seg_end;
        if t >= t_max {
            break;
        }
        let size = eps * rng.gen::<f64>().max(f64::MIN_POSITIVE).powf(-1.0 / beta);
        jumps.push(JumpRecord { time: t, size });
        x += size;
    }
    Ok(LevyPath { jumps, tau_a: f64::INFINITY, terminal_level: x })
}

fn replicate<T, F>(cfg: &LevySimConfig, n: usize, body: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = replica_rng(cfg.rng_seed, i as u64);
            body(&mut rng)
        })
        .collect()
}

/// MC mean of τ_{−a}/τ_{−a−b}, both read off the same path run to −(a+b);
/// the target closed form is a/(a+b).
pub fn estimate_tau_ratio(a: f64, b: f64, cfg: &LevySimConfig, n: usize) -> Result<MCEstimate> {
    if !(a > 0.0 && b >= 0.0) {
        return Err(Error::Domain("need a > 0 and b >= 0".into()));
    }
    if n < 100 {
        return Err(Error::Domain(format!("need at least 100 replicas, got {n}")));
    }
    let levels = if b == 0.0 { vec![a] } else { vec![a, a + b] };
    let samples = replicate(cfg, n, |rng| {
        let (_, passage) = simulate_levels(&levels, cfg, f64::INFINITY, rng)?;
        Ok(passage[0] / passage[passage.len() - 1])
    })?;
    Ok(mc_estimate(&samples))
}

/// MC mean of 1/τ_{−1}; target π/sin(−πβ).
pub fn estimate_inverse_mean(cfg: &LevySimConfig, n: usize) -> Result<MCEstimate> {
    if n < 100 {
        return Err(Error::Domain(format!("need at least 100 replicas, got {n}")));
    }
    let samples = replicate(cfg, n, |rng| {
        let (path, _) = simulate_levels(&[1.0], cfg, f64::INFINITY, rng)?;
        Ok(1.0 / path.tau_a)
    })?;
    Ok(mc_estimate(&samples))
}

/// Raw first-passage times τ_{−a}, one per replica (for scaling tests).
pub fn tau_samples(a: f64, cfg: &LevySimConfig, n: usize) -> Result<Vec<f64>> {
    replicate(cfg, n, |rng| Ok(simulate_to_hitting(a, cfg, rng)?.tau_a))
}

/// Per-path jump sizes up to τ_{−a} together with the weight τ_{−a}^{−1};
/// simulated with the cutoff capped at `record_floor`/10 so that every jump
/// at or above `record_floor` is retained exactly.
pub fn weighted_jump_paths(
    a: f64,
    record_floor: f64,
    cfg: &LevySimConfig,
    n: usize,
) -> Result<Vec<(Vec<f64>, f64)>> {
    let eps_cap = (record_floor / 10.0).max(cfg.jump_cutoff_eps);
    replicate(cfg, n, |rng| {
        let (path, _) = simulate_levels(&[a], cfg, eps_cap, rng)?;
        // Keep only jumps at or above the floor: below it the path may have
        // been locally coarsened, so smaller jumps are not faithful.
        let sizes = path
            .jumps
            .iter()
            .map(|j| j.size)
            .filter(|s| *s >= record_floor)
            .collect();
        Ok((sizes, 1.0 / path.tau_a))
    })
}

/// Self-normalized importance-weighted histogram of the jump sizes on
/// [0, τ_{−a}]: each path contributes weight τ^{−1} per jump, normalized by
/// the MC mean of τ^{−1}, estimating the density of the uniformly chosen
/// jump under the reweighted first-passage law. Standard errors are
/// delta-method binwise errors of the weight ratio.
pub fn weighted_jump_histogram(
    a: f64,
    bins: &[f64],
    cfg: &LevySimConfig,
    n: usize,
) -> Result<DensityCurve> {
    if bins.len() < 2 || bins.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("need at least two strictly increasing bin edges".into()));
    }
    if bins[0] < 10.0 * cfg.jump_cutoff_eps {
        eprintln!(
            "warning: lowest bin edge {} is below 10x the jump cutoff {}; truncation bias may be visible",
            bins[0], cfg.jump_cutoff_eps
        );
    }
    let paths = weighted_jump_paths(a, bins[0], cfg, n)?;
    let nb = bins.len() - 1;
    // Per-path bin counts times the path weight.
    let mut wc = vec![vec![0.0f64; paths.len()]; nb];
    let mut w = vec![0.0f64; paths.len()];
    for (i, (sizes, weight)) in paths.iter().enumerate() {
        w[i] = *weight;
        for &s in sizes {
            if s >= bins[0] && s < bins[nb] {
                let j = bins.partition_point(|e| *e <= s) - 1;
                wc[j][i] += weight;
            }
        }
    }
    let nf = paths.len() as f64;
    let wbar = w.iter().sum::<f64>() / nf;
    let mut mids = Vec::with_capacity(nb);
    let mut vals = Vec::with_capacity(nb);
    let mut errs = Vec::with_capacity(nb);
    for j in 0..nb {
        let width = bins[j + 1] - bins[j];
        let cbar = wc[j].iter().sum::<f64>() / nf;
        let ratio = cbar / wbar;
        // Var of the ratio estimator: Var(wc − ratio·w) / (n w̄²).
        let var = wc[j]
            .iter()
            .zip(&w)
            .map(|(c, wi)| {
                let d = c - ratio * wi;
                d * d
            })
            .sum::<f64>()
            / (nf - 1.0);
        mids.push(0.5 * (bins[j] + bins[j + 1]));
        vals.push(ratio / width);
        errs.push((var / nf).sqrt() / wbar / width);
    }
    DensityCurve::new(mids, vals, errs)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).unwrap());
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < n && j < m {
        let t = a[i].min(b[j]);
        while i < n && a[i] <= t {
            i += 1;
        }
        while j < m && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}
