//! Two-issue lobbying game with a capacity-constrained policymaker.
//!
//! The engine is generic over [`Scalar`]; use the aliases below for `f64`
//! work and [`Exact`] when you want rational arithmetic with no rounding.
//!
//! ```
//! use lobbygame::{equilibrium::lemma1_equilibrium, verify::verify_equilibrium, Capacity, Exact, GameParams, Scalar};
//!
//! let r = Exact::ratio;
//! let p = GameParams::new(r(2, 5), r(2, 5), r(1, 20), r(1, 20), r(2, 1), Capacity::N2).unwrap();
//! let prof = lemma1_equilibrium(&p).unwrap();
//! assert!(verify_equilibrium(&prof, &p, &Exact::default_tolerance()).unwrap().passed());
//! ```

pub mod empirics;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod payoff;
pub mod profile_doc;
pub mod sampling;
pub mod scalar;
pub mod sweep;
pub mod theorems;
mod tree;
pub mod verify;

pub use error::{Field, GameError, ParamError, Violation};
pub use game::{
    validate_params, Access, AccessRule, BeliefSystem, Capacity, GameParams, History, Issue, LobbyRule, PayoffVector,
    PolicyRule, PolicyVector, RawParams, StateVector, StrategyProfile,
};
pub use scalar::{fmt_num, round_sig, Scalar};

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type Params = GameParams<f64>;
pub type ExactParams = GameParams<Exact>;
pub type Profile = StrategyProfile<f64>;
pub type ExactProfile = StrategyProfile<Exact>;
pub type Payoffs = PayoffVector<f64>;
