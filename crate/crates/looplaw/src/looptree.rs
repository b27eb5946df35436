//! Stable looptrees from conditioned skip-free random walks: a zero-mean walk
//! with steps −1 (prob q) and k ≥ 1 (prob ∝ k^{−ν−1}) is conditioned to first
//! hit −1 at time n (bridge rejection + cycle-lemma rotation); each upward
//! jump becomes a loop, nested by the stack structure of the walk, and the
//! jump-moment identity is checked against its closed form.

use crate::levy::MCEstimate;
use crate::{replica_rng, Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// ζ(s) for s > 1 by Euler–Maclaurin.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("zeta implemented for s > 1, got {s}")));
    }
    Ok(partial_power_sum(s, 24) + power_tail_sum(s, 24))
}

fn partial_power_sum(s: f64, n: usize) -> f64 {
    (1..n).map(|k| (k as f64).powf(-s)).sum()
}

/// Σ_{k≥n} k^{−s} by Euler–Maclaurin (n moderately large).
fn power_tail_sum(s: f64, n: usize) -> f64 {
    let nf = n as f64;
    let a = nf.powf(1.0 - s) / (s - 1.0);
    let b = 0.5 * nf.powf(-s);
    let c = s * nf.powf(-s - 1.0) / 12.0;
    let d = -s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0;
    let e = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * nf.powf(-s - 5.0) / 30240.0;
    a + b + c + d + e
}

/// Step distribution of the zero-mean skip-free walk: P(−1) = q,
/// P(k) = (1−q) k^{−ν−1}/ζ(ν+1), with q = ζ(ν)/(ζ(ν)+ζ(ν+1)) forcing mean 0.
/// Sampling is one alias-table lookup; sizes ≥ 2^16 fall into a tail symbol
/// resolved by exact discrete-Pareto rejection.
pub struct StepSampler {
    pub nu: f64,
    pub q: f64,
    /// Walk-tail constant: P(step = k) = c·k^{−ν−1}.
    pub tail_constant: f64,
    prob: Vec<f64>,
    alias: Vec<u32>,
    symbols: Vec<i64>,
    k0: u32,
}

const TAIL_SYMBOL: i64 = i64::MAX;

impl StepSampler {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > 1.0 && nu < 2.0) {
            return Err(Error::Domain(format!("nu must lie in (1,2), got {nu}")));
        }
        let z_nu = zeta(nu)?;
        let z_nu1 = zeta(nu + 1.0)?;
        let q = z_nu / (z_nu + z_nu1);
        let c = 1.0 / (z_nu + z_nu1);
        let k0: u32 = 1 << 16;
        let tail = power_tail_sum(nu + 1.0, k0 as usize);

        // Weighted symbols: −1, then 1..k0−1, then the tail block.
        let mut weights = Vec::with_capacity(k0 as usize + 1);
        let mut symbols = Vec::with_capacity(k0 as usize + 1);
        weights.push(q);
        symbols.push(-1i64);
        for k in 1..k0 {
            weights.push(c * (k as f64).powf(-nu - 1.0));
            symbols.push(k as i64);
        }
        weights.push(c * tail);
        symbols.push(TAIL_SYMBOL);

        // Vose alias construction.
        let m = weights.len();
        let total: f64 = weights.iter().sum();
        let mut prob: Vec<f64> = weights.iter().map(|w| w / total * m as f64).collect();
        let mut alias = vec![0u32; m];
        let mut small: Vec<u32> = Vec::new();
        let mut large: Vec<u32> = Vec::new();
        for (i, p) in prob.iter().enumerate() {
            if *p < 1.0 {
                small.push(i as u32);
            } else {
                large.push(i as u32);
            }
        }
        let mut scaled = prob.clone();
        while let (Some(s), Some(l)) = (small.pop(), large.pop()) {
            prob[s as usize] = scaled[s as usize];
            alias[s as usize] = l;
            scaled[l as usize] = scaled[l as usize] + scaled[s as usize] - 1.0;
            if scaled[l as usize] < 1.0 {
                small.push(l);
            } else {
                large.push(l);
            }
        }
        for l in large {
            prob[l as usize] = 1.0;
        }
        for s in small {
            prob[s as usize] = 1.0;
        }
        Ok(Self { nu, q, tail_constant: c, prob, alias, symbols, k0 })
    }

    #[inline]
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> i64 {
        let m = self.prob.len() as u64;
        // Lemire reduction of a full 64-bit draw to a table cell.
        let r: u64 = rng.gen();
        let mut idx = ((r as u128 * m as u128) >> 64) as usize;
        let u: f64 = rng.gen();
        if u >= self.prob[idx] {
            idx = self.alias[idx] as usize;
        }
        let sym = self.symbols[idx];
        if sym != TAIL_SYMBOL {
            return sym;
        }
        self.sample_tail(rng)
    }

    /// k ≥ k0 with P(k) ∝ k^{−ν−1}: continuous-Pareto proposal on cell
    /// midpoints, accepted with probability ν k^{−ν−1}/((k−½)^{−ν}−(k+½)^{−ν})
    /// (≤ 1 by convexity), which makes the discrete law exact.
    fn sample_tail(&self, rng: &mut ChaCha8Rng) -> i64 {
        let nu = self.nu;
        let lo = self.k0 as f64 - 0.5;
        loop {
            let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
            let x = lo * u.powf(-1.0 / nu);
            let k = (x + 0.5).floor();
            let cell = (k - 0.5).powf(-nu) - (k + 0.5).powf(-nu);
            let accept = nu * k.powf(-nu - 1.0) / cell;
            if rng.gen::<f64>() < accept {
                return k as i64;
            }
        }
    }
}

/// A skip-free-downward walk of length n that first hits −1 exactly at time
/// n; `scale` converts a discrete jump into a continuum loop length for the
/// duration-1 stable excursion.
#[derive(Debug, Clone)]
pub struct DiscreteExcursion {
    pub steps: Vec<i64>,
    pub n: usize,
    /// (n · c · Γ(−ν))^{−1/ν}: the walk converges to the excursion of the
    /// process with Lévy measure h^{−1−ν}/Γ(−ν) dh (Laplace exponent λ^ν)
    /// only after the tail constant c and Γ(−ν) are absorbed into the scale.
    pub scale: f64,
}

/// Γ(−ν) for ν ∈ (1,2), via reflection; positive on this range.
pub fn gamma_neg(nu: f64) -> Result<f64> {
    // Γ(−ν) = π / (ν·sin(−πν)·Γ(ν)) from Γ(z)Γ(1−z) = π/sin(πz) at z = −ν.
    let g = crate::specfun::gamma_fn(nu)?;
    Ok(PI / ((PI * -nu).sin() * nu * g))
}

pub fn excursion_scale(nu: f64, n: usize, tail_constant: f64) -> Result<f64> {
    Ok((n as f64 * tail_constant * gamma_neg(nu)?).powf(-1.0 / nu))
}

/// Sample one conditioned excursion: i.i.d. steps rejected until the sum is
/// −1 (a bridge), then rotated at the first minimum; the cycle lemma gives
/// exactly one rotation that is a first-passage path.
pub fn sample_excursion(nu: f64, n: usize, rng: &mut ChaCha8Rng) -> Result<DiscreteExcursion> {
    if n < 100 {
        return Err(Error::Domain(format!("need at least 100 steps, got {n}")));
    }
    let sampler = StepSampler::new(nu)?;
    sample_excursion_with(&sampler, n, rng)
}

/// As `sample_excursion` with a prebuilt step sampler (the table build is the
/// expensive part when drawing many excursions).
pub fn sample_excursion_with(
    sampler: &StepSampler,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DiscreteExcursion> {
    let mut steps = vec![0i64; n];
    'attempt: for _ in 0..1_000_000u64 {
        let mut sum: i64 = 0;
        for (i, slot) in steps.iter_mut().enumerate() {
            let s = sampler.sample(rng);
            *slot = s;
            sum += s;
            // The walk can lose at most 1 per step, so a bridge to −1 is
            // impossible once sum > n − i − 2.
            if sum > (n - i - 1) as i64 - 1 {
                continue 'attempt;
            }
        }
        if sum != -1 {
            continue;
        }
        rotate_at_first_min(&mut steps);
        debug_assert!(is_first_passage(&steps));
        return Ok(DiscreteExcursion {
            steps,
            n,
            scale: excursion_scale(sampler.nu, n, sampler.tail_constant)?,
        });
    }
    Err(Error::RejectionBudget(format!(
        "no bridge to -1 in 1e6 attempts (nu={}, n={n})",
        sampler.nu
    )))
}

/// Rotate a bridge (sum −1) at its first minimum so it becomes a
/// first-passage path: steps after the first argmin come first.
fn rotate_at_first_min(steps: &mut [i64]) {
    let mut sum = 0i64;
    let mut min = i64::MAX;
    let mut argmin = 0usize;
    for (i, &s) in steps.iter().enumerate() {
        sum += s;
        if sum < min {
            min = sum;
            argmin = i;
        }
    }
    steps.rotate_left((argmin + 1) % steps.len());
}

/// True iff the partial sums stay ≥ 0 strictly before the last step and the
/// total is −1 (first passage to −1 at time n).
pub fn is_first_passage(steps: &[i64]) -> bool {
    let mut sum = 0i64;
    for (i, &s) in steps.iter().enumerate() {
        sum += s;
        if i + 1 < steps.len() && sum < 0 {
            return false;
        }
    }
    sum == -1
}

/// Count the rotations of a bridge that are first-passage paths; the cycle
/// lemma says exactly one for a skip-free-downward bridge to −1.
pub fn count_valid_rotations(steps: &[i64]) -> usize {
    let n = steps.len();
    let mut rotated = steps.to_vec();
    let mut count = 0;
    for r in 0..n {
        rotated.copy_from_slice(steps);
        rotated.rotate_left(r);
        if is_first_passage(&rotated) {
            count += 1;
        }
    }
    count
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Loop {
    pub length: f64,
    /// Index of the enclosing loop, or None for children of the root.
    pub parent: Option<usize>,
    /// Distance along the parent loop, counterclockwise from the parent's
    /// own attachment point, at which this loop hangs; in [0, parent length).
    pub position: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Looptree {
    pub loops: Vec<Loop>,
    /// Duration of the underlying excursion after time normalization.
    pub total_boundary: f64,
    /// Σ loop lengths = Σ jumps · scale.
    pub sum_of_loop_lengths: f64,
}

/// Quotient of the excursion: each upward jump of size k opens a loop of
/// length k·scale that closes when the walk first returns to the pre-jump
/// level; a loop opened at level h inside a parent spanning (v, v+k] attaches
/// at position (v+k−h)·scale (counterclockwise convention).
pub fn build_looptree(e: &DiscreteExcursion) -> Result<Looptree> {
    let mut loops: Vec<Loop> = Vec::new();
    // (loop index, close level, top level)
    let mut stack: Vec<(usize, i64, i64)> = Vec::new();
    let mut level = 0i64;
    let mut jump_sum = 0i64;
    for &s in &e.steps {
        if s >= 1 {
            let (parent, position) = match stack.last() {
                Some(&(pi, _, top)) => (Some(pi), (top - level) as f64 * e.scale),
                None => (None, 0.0),
            };
            loops.push(Loop { length: s as f64 * e.scale, parent, position });
            stack.push((loops.len() - 1, level, level + s));
            level += s;
            jump_sum += s;
        } else if s == -1 {
            level -= 1;
            while matches!(stack.last(), Some(&(_, close, _)) if close == level) {
                stack.pop();
            }
        } else {
            return Err(Error::MalformedExcursion(format!("illegal step {s}")));
        }
    }
    if level != -1 {
        return Err(Error::MalformedExcursion(format!("walk ends at {level}, not -1")));
    }
    if !stack.is_empty() {
        return Err(Error::MalformedExcursion(format!(
            "{} loops still open at the end of the excursion",
            stack.len()
        )));
    }
    Ok(Looptree {
        loops,
        total_boundary: 1.0,
        sum_of_loop_lengths: jump_sum as f64 * e.scale,
    })
}

/// MC mean over excursions of Σ_jumps (jump·scale)^p; finite for p > ν, with
/// closed-form target Γ(1−γ²/4)Γ(2α/γ−4/γ²)/(Γ(−4/γ²)Γ(γα/2−γ²/4)) at
/// p = 2α/γ, ν = 4/γ².
pub fn estimate_jump_moment(
    nu: f64,
    p: f64,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<MCEstimate> {
    if !(p > nu) {
        return Err(Error::Domain(format!("moment diverges: need p > nu, got p={p}, nu={nu}")));
    }
    let sampler = StepSampler::new(nu)?;
    let samples = jump_moment_samples(&sampler, p, n, replicas, seed)?;
    let nf = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    Ok(MCEstimate { mean, stderr: (var / nf).sqrt(), n_replicas: samples.len() })
}

/// One Σ(jump·scale)^p sample per replica (shared by callers that evaluate
/// several exponents on the same excursions).
pub fn jump_moment_samples(
    sampler: &StepSampler,
    p: f64,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    (0..replicas)
        .into_par_iter()
        .map(|i| {
            let mut rng = replica_rng(seed, i as u64);
            let e = sample_excursion_with(sampler, n, &mut rng)?;
            Ok(e.steps
                .iter()
                .filter(|&&s| s >= 1)
                .map(|&s| (s as f64 * e.scale).powf(p))
                .sum())
        })
        .collect()
}

/// JSON form: {"n", "scale_note", "total_boundary", "sum_of_loop_lengths",
/// "loops":[{"length","parent","position"}]}.
pub fn to_json(tree: &Looptree) -> String {
    serde_json::to_string_pretty(&serde_json::json!({
        "total_boundary": tree.total_boundary,
        "sum_of_loop_lengths": tree.sum_of_loop_lengths,
        "loops": tree.loops,
    }))
    .expect("looptree serializes")
}

/// DOT digraph: one node per loop (label = length), edges child → parent
/// labelled by attachment position; children of the root point at "root".
pub fn to_dot(tree: &Looptree) -> String {
    let mut out = String::from("digraph looptree {\n  root [shape=point];\n");
    for (i, l) in tree.loops.iter().enumerate() {
        out.push_str(&format!("  n{i} [label=\"{:.6}\"];\n", l.length));
        let target = match l.parent {
            Some(p) => format!("n{p}"),
            None => "root".to_string(),
        };
        out.push_str(&format!("  n{i} -> {target} [label=\"{:.6}\"];\n", l.position));
    }
    out.push_str("}\n");
    out
}
