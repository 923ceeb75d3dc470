//! Regime classification and closed-form equilibrium construction.
//!
//! Unconstrained game (N2): truthful lobbying when
//! `C = (π1 f1 + π2 f2) / (π1 π2) >= 1`, otherwise the unique over-lobbying
//! equilibrium. Constrained game (N1): group 2 stays silent when
//! `f2 > 1 - π1`, otherwise both groups lobby truthfully.

use std::fmt;

use serde::Serialize;

use crate::error::GameError;
use crate::game::{
    policy_best_response, AccessRule, BeliefSystem, BestResponse, Capacity, GameParams, History, Issue, IssueChoice,
    LobbyRule, PolicyRule, StrategyProfile,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma1Regime {
    Truthful,
    OverLobbying,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma2Regime {
    /// `f2 > 1 - π1`: group 1 truthful, group 2 silent.
    SilentSecond,
    /// `f2 <= 1 - π1`: a truthful equilibrium exists.
    TruthfulExists,
    /// Additionally `f_i <= 1 - π_i` for both groups.
    TruthfulUnique,
    Boundary,
}

/// Parameter regions compared across the two games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `f2 > 1 - π1`
    R1,
    /// `π1 (1 - f1/π2) <= f2 <= 1 - π1`
    R2,
    /// `f2 < π1 (1 - f1/π2)`
    R3,
}

macro_rules! display_as_debug {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    )*};
}
display_as_debug!(Lemma1Regime, Lemma2Regime, Region);

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport<S> {
    /// `C = (π1 f1 + π2 f2) / (π1 π2)`
    pub lobbying_ratio: S,
    pub lemma1: Lemma1Regime,
    pub lemma2: Lemma2Regime,
    pub region: Region,
    /// `f2` within tolerance of a region edge.
    pub region_boundary: bool,
    /// Lower edge of R2 above its upper edge.
    pub region2_empty: bool,
    /// `(α π1 f1 + (2α - 1) π2 f2) / (π1 π2)`
    pub pareto_lhs: S,
    pub pareto_condition: bool,
    pub pareto_boundary: bool,
}

impl<S: Scalar> RegimeReport<S> {
    /// Any knife-edge flag raised.
    pub fn is_boundary(&self) -> bool {
        self.lemma1 == Lemma1Regime::Boundary
            || self.lemma2 == Lemma2Regime::Boundary
            || self.region_boundary
            || self.pareto_boundary
    }
}

/// `C = (π1 f1 + π2 f2) / (π1 π2)`
pub fn lobbying_ratio<S: Scalar>(params: &GameParams<S>) -> S {
    let (p1, p2) = (params.prior(Issue::One).clone(), params.prior(Issue::Two).clone());
    (p1.clone() * params.cost(Issue::One).clone() + p2.clone() * params.cost(Issue::Two).clone()) / (p1 * p2)
}

/// Left-hand side of the Pareto-improvement condition.
pub fn pareto_lhs<S: Scalar>(params: &GameParams<S>) -> S {
    let (p1, p2) = (params.prior(Issue::One).clone(), params.prior(Issue::Two).clone());
    let a = params.alpha().clone();
    let two_a_minus_one = S::two() * a.clone() - S::one();
    (a * p1.clone() * params.cost(Issue::One).clone() + two_a_minus_one * p2.clone() * params.cost(Issue::Two).clone())
        / (p1 * p2)
}

/// Edges `(π1 (1 - f1/π2), 1 - π1)` of region R2.
pub fn region2_edges<S: Scalar>(params: &GameParams<S>) -> (S, S) {
    let p1 = params.prior(Issue::One).clone();
    let lower = p1.clone() * (S::one() - params.cost(Issue::One).clone() / params.prior(Issue::Two).clone());
    (lower, S::one() - p1)
}

pub fn classify_regimes<S: Scalar>(params: &GameParams<S>) -> RegimeReport<S> {
    classify_regimes_with_tol(params, &S::default_tolerance())
}

pub fn classify_regimes_with_tol<S: Scalar>(params: &GameParams<S>, tol: &S) -> RegimeReport<S> {
    let c = lobbying_ratio(params);
    let lemma1 = if c.approx_eq(&S::one(), tol) {
        Lemma1Regime::Boundary
    } else if c > S::one() {
        Lemma1Regime::Truthful
    } else {
        Lemma1Regime::OverLobbying
    };

    let f1 = params.cost(Issue::One).clone();
    let f2 = params.cost(Issue::Two).clone();
    let (lower, upper) = region2_edges(params);
    let lemma2 = if f2.approx_eq(&upper, tol) {
        Lemma2Regime::Boundary
    } else if f2 > upper {
        Lemma2Regime::SilentSecond
    } else if f1 <= S::one() - params.prior(Issue::One).clone() && f2 <= S::one() - params.prior(Issue::Two).clone() {
        Lemma2Regime::TruthfulUnique
    } else {
        Lemma2Regime::TruthfulExists
    };

    let region = if f2 > upper {
        Region::R1
    } else if f2 < lower {
        Region::R3
    } else {
        Region::R2
    };
    let region_boundary = f2.approx_eq(&upper, tol) || f2.approx_eq(&lower, tol);

    let lhs = pareto_lhs(params);
    RegimeReport {
        lobbying_ratio: c,
        lemma1,
        lemma2,
        region,
        region_boundary,
        region2_empty: lower > upper,
        pareto_condition: lhs <= S::one(),
        pareto_boundary: lhs.approx_eq(&S::one(), tol),
        pareto_lhs: lhs,
    }
}

/// Which closed-form equilibrium to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Construction {
    Lemma1Truthful,
    Lemma1OverLobbying,
    Lemma2SilentSecond,
    Lemma2Truthful,
}

impl Construction {
    pub fn capacity(self) -> Capacity {
        match self {
            Construction::Lemma1Truthful | Construction::Lemma1OverLobbying => Capacity::N2,
            Construction::Lemma2SilentSecond | Construction::Lemma2Truthful => Capacity::N1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Construction::Lemma1Truthful => "truthful",
            Construction::Lemma1OverLobbying => "over-lobbying",
            Construction::Lemma2SilentSecond => "silent-second",
            Construction::Lemma2Truthful => "truthful",
        }
    }
}

/// The construction matching the parameters' regime. Knife-edge points are
/// refused; callers that want one anyway must name the construction.
pub fn canonical_construction<S: Scalar>(params: &GameParams<S>) -> Result<Construction, GameError> {
    let report = classify_regimes(params);
    match params.capacity() {
        Capacity::N2 => match report.lemma1 {
            Lemma1Regime::Truthful => Ok(Construction::Lemma1Truthful),
            Lemma1Regime::OverLobbying => Ok(Construction::Lemma1OverLobbying),
            Lemma1Regime::Boundary => Err(GameError::RegimeMismatch(format!(
                "lobbying ratio {} is within tolerance of 1; request a construction explicitly",
                report.lobbying_ratio.to_f64_lossy()
            ))),
        },
        Capacity::N1 => match report.lemma2 {
            Lemma2Regime::SilentSecond => Ok(Construction::Lemma2SilentSecond),
            Lemma2Regime::TruthfulExists | Lemma2Regime::TruthfulUnique => Ok(Construction::Lemma2Truthful),
            Lemma2Regime::Boundary => Err(GameError::RegimeMismatch(
                "f2 is within tolerance of 1 - pi1; request a construction explicitly".into(),
            )),
        },
    }
}

pub fn construct<S: Scalar>(
    params: &GameParams<S>,
    construction: Construction,
) -> Result<StrategyProfile<S>, GameError> {
    match construction {
        Construction::Lemma1Truthful => lemma1_truthful(params),
        Construction::Lemma1OverLobbying => lemma1_over_lobbying(params),
        Construction::Lemma2SilentSecond => lemma2_silent_second(params),
        Construction::Lemma2Truthful => lemma2_truthful(params),
    }
}

/// Equilibrium of the game at the parameters' own capacity.
pub fn equilibrium<S: Scalar>(params: &GameParams<S>) -> Result<StrategyProfile<S>, GameError> {
    construct(params, canonical_construction(params)?)
}

pub fn lemma1_equilibrium<S: Scalar>(params: &GameParams<S>) -> Result<StrategyProfile<S>, GameError> {
    require_capacity(params, Capacity::N2)?;
    equilibrium(params)
}

pub fn lemma2_equilibrium<S: Scalar>(params: &GameParams<S>) -> Result<StrategyProfile<S>, GameError> {
    require_capacity(params, Capacity::N1)?;
    equilibrium(params)
}

fn require_capacity<S: Scalar>(params: &GameParams<S>, capacity: Capacity) -> Result<(), GameError> {
    if params.capacity() == capacity {
        Ok(())
    } else {
        Err(GameError::RegimeMismatch(format!(
            "construction needs capacity {capacity}, parameters have {}",
            params.capacity()
        )))
    }
}

/// Interval of `γ1` supporting truthful lobbying in the N2 game,
/// `[1 - f1/π2, f2/π1] ∩ [0, 1]`. Empty (lower > upper) iff `C < 1`.
pub fn truthful_access_interval<S: Scalar>(params: &GameParams<S>) -> (S, S) {
    let lower = S::one() - params.cost(Issue::One).clone() / params.prior(Issue::Two).clone();
    let upper = params.cost(Issue::Two).clone() / params.prior(Issue::One).clone();
    (S::max_of(lower, S::zero()), S::min_of(upper, S::one()))
}

/// Closed forms of the N2 over-lobbying equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct OverLobbyingForms<S> {
    /// `ξ_i(0) = π_i / (1 - π_i) · 1 / (2α_i - 1)`
    pub xi_off: [S; 2],
    /// `γ2 = f1 / (2π2)`
    pub gamma2: S,
    /// `ρ2(1,0) = π2 (2α - 1) f2 / (π1 α (2π2 - f1))`
    pub rho2_unaccessed: S,
}

pub fn over_lobbying_forms<S: Scalar>(params: &GameParams<S>) -> Result<OverLobbyingForms<S>, GameError> {
    let (p1, p2) = (params.prior(Issue::One).clone(), params.prior(Issue::Two).clone());
    let (f1, f2) = (params.cost(Issue::One).clone(), params.cost(Issue::Two).clone());
    let a = params.alpha().clone();
    let margin = S::two() * p2.clone() - f1.clone();
    if margin <= S::zero() {
        return Err(GameError::DegenerateFormula(format!(
            "2*pi2 - f1 = {} <= 0 leaves rho2(1,0) undefined",
            margin.to_f64_lossy()
        )));
    }
    let xi_off = |issue: Issue| {
        let pi = params.prior(issue).clone();
        pi.clone() / (S::one() - pi) / (S::two() * params.weight(issue) - S::one())
    };
    let rho2 = p2.clone() * (S::two() * a.clone() - S::one()) * f2 / (p1 * a * margin);
    if rho2 > S::one() {
        return Err(GameError::DegenerateFormula(format!(
            "rho2(1,0) = {} exceeds 1",
            rho2.to_f64_lossy()
        )));
    }
    Ok(OverLobbyingForms {
        xi_off: [xi_off(Issue::One), xi_off(Issue::Two)],
        gamma2: f1 / (S::two() * p2),
        rho2_unaccessed: rho2,
    })
}

/// Sequentially rational policy at every history given `beliefs`.
/// N2 ties on issue `i` use `tie_mix[i]`; N1 ties take the first option in
/// priority order (issue 1, issue 2, status quo).
pub fn best_response_policy<S: Scalar>(
    params: &GameParams<S>,
    beliefs: &BeliefSystem<S>,
    tie_mix: &[S; 2],
) -> PolicyRule<S> {
    let tol = S::default_tolerance();
    let mut rule = PolicyRule::new();
    for h in History::all() {
        let b = beliefs.policy_beliefs(&h);
        let rho = match policy_best_response(&b, params, &tol) {
            BestResponse::Separate(choices) => {
                let pick = |i: usize| match choices[i] {
                    IssueChoice::Reform => S::one(),
                    IssueChoice::StatusQuo => S::zero(),
                    IssueChoice::Indifferent => tie_mix[i].clone(),
                };
                [pick(0), pick(1)]
            }
            BestResponse::Single(options) => match options.first().copied().flatten() {
                Some(Issue::One) => [S::one(), S::zero()],
                Some(Issue::Two) => [S::zero(), S::one()],
                None => [S::zero(), S::zero()],
            },
        };
        rule.set(h, rho);
    }
    rule
}

fn demand<S: Scalar>(holds: bool, what: &str, params: &GameParams<S>, capacity: Capacity) -> Result<(), GameError> {
    require_capacity(params, capacity)?;
    if holds {
        Ok(())
    } else {
        Err(GameError::RegimeMismatch(format!("parameters violate {what}")))
    }
}

/// Truthful lobbying in the N2 game, `γ1` at the midpoint of its supporting interval.
pub fn lemma1_truthful<S: Scalar>(params: &GameParams<S>) -> Result<StrategyProfile<S>, GameError> {
    let tol = S::default_tolerance();
    demand(
        lobbying_ratio(params) >= S::one() - tol.clone(),
        "C >= 1 (truthful N=2 regime)",
        params,
        Capacity::N2,
    )?;
    let (lo, hi) = truthful_access_interval(params);
    // within tolerance of the edge the interval may be inverted by rounding
    let gamma1 = ((lo + hi) / S::two()).clamp_unit();
    let lobby = [LobbyRule::truthful(), LobbyRule::truthful()];
    let beliefs = BeliefSystem::from_bayes(params, &lobby, [[S::zero(), S::one()], [S::zero(), S::one()]]);
    let policy = best_response_policy(params, &beliefs, &[S::half(), S::half()]);
    Ok(StrategyProfile {
        lobby,
        access: AccessRule::new(gamma1),
        policy,
        beliefs,
    })
}

/// The unique N2 equilibrium when `C < 1`: both groups over-lobby, group 2
/// leaves the policymaker exactly indifferent.
pub fn lemma1_over_lobbying<S: Scalar>(params: &GameParams<S>) -> Result<StrategyProfile<S>, GameError> {
    let tol = S::default_tolerance();
    demand(
        lobbying_ratio(params) <= S::one() + tol,
        "C < 1 (over-lobbying N=2 regime)",
        params,
        Capacity::N2,
    )?;
    let forms = over_lobbying_forms(params)?;
    let [x1, x2] = forms.xi_off;
    let lobby = [LobbyRule::new(S::one(), x1), LobbyRule::new(S::one(), x2)];
    let mut beliefs = BeliefSystem::from_bayes(params, &lobby, [[S::zero(), S::one()], [S::zero(), S::half()]]);
    beliefs.access[Issue::Two.idx()][1] = S::half();
    let policy = best_response_policy(params, &beliefs, &[S::one(), forms.rho2_unaccessed]);
    Ok(StrategyProfile {
        lobby,
        access: AccessRule::new(S::one() - forms.gamma2),
        policy,
        beliefs,
    })
}

/// N1 equilibrium with `f2 > 1 - π1`: group 1 truthful, group 2 silent.
/// The off-path belief after group 2 lobbies is set to 1 and `γ1 = 1`;
/// any value works there.
pub fn lemma2_silent_second<S: Scalar>(params: &GameParams<S>) -> Result<StrategyProfile<S>, GameError> {
    let tol = S::default_tolerance();
    let edge = S::one() - params.prior(Issue::One).clone();
    demand(
        *params.cost(Issue::Two) >= edge - tol,
        "f2 > 1 - pi1 (silent-second N=1 regime)",
        params,
        Capacity::N1,
    )?;
    let lobby = [LobbyRule::truthful(), LobbyRule::silent()];
    let beliefs = BeliefSystem::from_bayes(params, &lobby, [[S::zero(), S::one()], [S::zero(), S::one()]]);
    let policy = best_response_policy(params, &beliefs, &[S::half(), S::half()]);
    Ok(StrategyProfile {
        lobby,
        access: AccessRule::new(S::one()),
        policy,
        beliefs,
    })
}

/// N1 equilibrium with `f2 <= 1 - π1`: both truthful, issue 1 prioritized,
/// `γ1 = 1` (upper end of `(1 - f1/π2, 1]`).
pub fn lemma2_truthful<S: Scalar>(params: &GameParams<S>) -> Result<StrategyProfile<S>, GameError> {
    let tol = S::default_tolerance();
    let edge = S::one() - params.prior(Issue::One).clone();
    demand(
        *params.cost(Issue::Two) <= edge + tol,
        "f2 <= 1 - pi1 (truthful N=1 regime)",
        params,
        Capacity::N1,
    )?;
    let lobby = [LobbyRule::truthful(), LobbyRule::truthful()];
    let beliefs = BeliefSystem::from_bayes(params, &lobby, [[S::zero(), S::one()], [S::zero(), S::one()]]);
    let policy = best_response_policy(params, &beliefs, &[S::half(), S::half()]);
    Ok(StrategyProfile {
        lobby,
        access: AccessRule::new(S::one()),
        policy,
        beliefs,
    })
}
