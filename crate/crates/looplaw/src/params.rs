//! Coupling-constant symbol table: γ, Q, κ, κ′ and the derived insertion and
//! stability indices, with the conversions between them.

use crate::{Error, Result};

/// Which loop-ensemble regime a parameter set was built from. The simple
/// regime has κ ≤ 4; the non-simple regime was constructed from κ′ ∈ (4, 8).
/// Both map to the same (γ, Q) pair, so the regime must be carried along for
/// formulas that depend on the original κ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Simple,
    NonSimple,
}

#[derive(Debug, Clone, Copy)]
pub struct LQGParams {
    pub gamma: f64,
    pub q: f64,
    /// κ = γ² ∈ (0, 4].
    pub kappa: f64,
    /// κ′ = 16/γ² ∈ [4, ∞).
    pub kappa_prime: f64,
    pub regime: Regime,
}

impl LQGParams {
    /// The κ the parameters were constructed from: κ in the simple regime,
    /// κ′ in the non-simple one.
    #[inline]
    pub fn kappa_eff(&self) -> f64 {
        match self.regime {
            Regime::Simple => self.kappa,
            Regime::NonSimple => self.kappa_prime,
        }
    }
}

/// Insertion data on top of the coupling constants.
#[derive(Debug, Clone, Copy)]
pub struct AlphaParams {
    pub base: LQGParams,
    pub alpha: f64,
    /// λ = α²/2 − Qα + 2.
    pub lambda: f64,
    /// W = 2γ(Q − α).
    pub weight_w: f64,
}

impl AlphaParams {
    pub fn new(base: LQGParams, alpha: f64) -> Self {
        let q = base.q;
        Self {
            base,
            alpha,
            lambda: alpha * alpha / 2.0 - q * alpha + 2.0,
            weight_w: 2.0 * base.gamma * (q - alpha),
        }
    }
}

/// Stability indices of the perimeter cascade and looptree constructions.
#[derive(Debug, Clone, Copy)]
pub struct StableIndex {
    /// β = 4/κ + 1/2 of the first-passage process (κ is the regime's own κ).
    pub beta: f64,
    /// θ = 4/κ.
    pub theta: f64,
    /// ν = 4/γ² of the looptree excursion, in (1, 2).
    pub nu_looptree: f64,
}

/// Build the parameter table from κ ∈ (0, 8): γ = √κ below 4, γ = 4/√κ above.
pub fn from_kappa(kappa: f64) -> Result<LQGParams> {
    if !(kappa > 0.0 && kappa < 8.0) {
        return Err(Error::Domain(format!("kappa must lie in (0,8), got {kappa}")));
    }
    // Keep the given κ exact; a √/square round trip loses the last ulps and
    // those get amplified near the poles of the moment formulas.
    let (gamma, regime, k_simple, k_prime) = if kappa <= 4.0 {
        (kappa.sqrt(), Regime::Simple, kappa, 16.0 / kappa)
    } else {
        (4.0 / kappa.sqrt(), Regime::NonSimple, 16.0 / kappa, kappa)
    };
    Ok(LQGParams {
        gamma,
        q: gamma / 2.0 + 2.0 / gamma,
        kappa: k_simple,
        kappa_prime: k_prime,
        regime,
    })
}

/// Invert λ = α²/2 − Qα + 2 for the root below Q: α = Q − √(Q² − 4 + 2λ).
pub fn alpha_for_lambda(p: LQGParams, lambda: f64) -> Result<AlphaParams> {
    let disc = p.q * p.q - 4.0 + 2.0 * lambda;
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "discriminant Q²−4+2λ = {disc} is negative; no real insertion"
        )));
    }
    Ok(AlphaParams::new(p, p.q - disc.sqrt()))
}

/// Stability indices; β needs κ ∈ (8/3, 8), ν needs κ′ ∈ (4, 8).
pub fn stable_index(p: LQGParams) -> Result<StableIndex> {
    let k = p.kappa_eff();
    if !(k > 8.0 / 3.0 && k < 8.0) {
        return Err(Error::Domain(format!(
            "stable index needs kappa in (8/3, 8), got {k}"
        )));
    }
    let theta = 4.0 / k;
    let nu = 4.0 / (p.gamma * p.gamma);
    Ok(StableIndex {
        beta: theta + 0.5,
        theta,
        nu_looptree: nu,
    })
}
