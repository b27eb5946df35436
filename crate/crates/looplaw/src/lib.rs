//! Closed-form laws and Monte-Carlo verification harness for loop-measure,
//! loop-ensemble and quantum-disk statistics.
//!
//! The crate is organised around a small numerical core ([`specfun`]) and a
//! parameter table ([`params`]); everything in [`formulas`] is a deterministic
//! closed form, while [`levy`], [`cascade`], [`looptree`] and [`crrenewal`]
//! are stochastic checks of those forms. [`report`] wires the checks into
//! named suites with machine-readable output for the `looplaw` binary.

pub mod cascade;
pub mod crrenewal;
pub mod formulas;
pub mod levy;
pub mod looptree;
pub mod params;
pub mod report;
pub mod specfun;

use rand_chacha::rand_core::SeedableRng;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole error: {0}")]
    Pole(String),
    #[error("quadrature did not converge: {0}")]
    Convergence(String),
    #[error("inversion instability: {0}")]
    Instability(String),
    #[error("path timed out: {0}")]
    Timeout(String),
    #[error("rejection budget exhausted: {0}")]
    RejectionBudget(String),
    #[error("malformed excursion: {0}")]
    MalformedExcursion(String),
}

pub type Result<T> = std::result::Result<T, Error>;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The only RNG entry point: a counter-derived stream for one replica of a
/// run. Streams for distinct `(seed, replica)` pairs are independent, and a
/// replica's draws do not depend on how replicas are scheduled across
/// workers.
pub fn replica_rng(seed: u64, replica: u64) -> rand_chacha::ChaCha8Rng {
    let mut state = seed ^ 0x6A09_E667_F3BC_C908;
    let mut key = [0u8; 32];
    let a = splitmix64(&mut state);
    let mut state2 = a ^ replica.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state2).to_le_bytes());
    }
    rand_chacha::ChaCha8Rng::from_seed(key)
}
