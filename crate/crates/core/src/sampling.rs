//! Random parameter points inside a chosen regime, by rejection from the
//! valid box `π_i ∈ (0, 1/2)`, `f_i ∈ (0, 1)`, `α ∈ (1, ALPHA_MAX)`.

use rand::Rng;

use crate::equilibrium::{classify_regimes, Lemma1Regime, Lemma2Regime, RegimeReport, Region};
use crate::game::{validate_params, Capacity, GameParams, RawParams};

pub const ALPHA_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Any,
    Lemma1Truthful,
    Lemma1OverLobbying,
    Lemma2SilentSecond,
    /// `f2 <= 1 - π1`
    Lemma2Truthful,
    Region(Region),
}

impl Target {
    pub fn matches(self, r: &RegimeReport<f64>) -> bool {
        match self {
            Target::Any => true,
            Target::Lemma1Truthful => r.lemma1 == Lemma1Regime::Truthful,
            Target::Lemma1OverLobbying => r.lemma1 == Lemma1Regime::OverLobbying,
            Target::Lemma2SilentSecond => r.lemma2 == Lemma2Regime::SilentSecond,
            Target::Lemma2Truthful => matches!(r.lemma2, Lemma2Regime::TruthfulExists | Lemma2Regime::TruthfulUnique),
            Target::Region(g) => r.region == g,
        }
    }

    /// Capacity of the game the target's lemma describes.
    pub fn capacity(self) -> Capacity {
        match self {
            Target::Lemma2SilentSecond | Target::Lemma2Truthful => Capacity::N1,
            _ => Capacity::N2,
        }
    }
}

/// Open-interval uniform draw.
fn open<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    loop {
        let v = rng.random_range(lo..hi);
        if v > lo {
            return v;
        }
    }
}

pub fn uniform_params<R: Rng + ?Sized>(rng: &mut R, capacity: Capacity) -> GameParams<f64> {
    let raw = RawParams {
        pi1: open(rng, 0.0, 0.5),
        pi2: open(rng, 0.0, 0.5),
        f1: open(rng, 0.0, 1.0),
        f2: open(rng, 0.0, 1.0),
        alpha: open(rng, 1.0, ALPHA_MAX),
        capacity,
    };
    validate_params(&raw).expect("draw lies in the valid box")
}

/// Uniform draw conditioned on `target`, skipping knife-edge points. `None`
/// after `max_tries` rejections.
pub fn sample_in<R: Rng + ?Sized>(rng: &mut R, target: Target, max_tries: usize) -> Option<GameParams<f64>> {
    for _ in 0..max_tries {
        let p = uniform_params(rng, target.capacity());
        let r = classify_regimes(&p);
        if !r.is_boundary() && target.matches(&r) {
            return Some(p);
        }
    }
    None
}
