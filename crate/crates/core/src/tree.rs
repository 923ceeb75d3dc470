//! Exact enumeration of the game tree up to the policy stage.
//!
//! Leaves are (probability, θ, history) triples; policy mixing is left to the
//! caller, which takes expectations against the policy rule directly.

use crate::error::GameError;
use crate::game::{Access, GameParams, History, Issue, StateVector, StrategyProfile};
use crate::scalar::Scalar;

/// Fixes one group's state, and optionally its lobbying decision.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pin {
    pub issue: Issue,
    pub state: bool,
    pub lobby: Option<bool>,
}

fn state_weight<S: Scalar>(params: &GameParams<S>, issue: Issue, state: bool, pin: Option<Pin>) -> S {
    match pin {
        Some(p) if p.issue == issue => S::indicator(p.state == state),
        _ => {
            let prior = params.prior(issue).clone();
            if state {
                prior
            } else {
                S::one() - prior
            }
        }
    }
}

fn lobby_weight<S: Scalar>(
    profile: &StrategyProfile<S>,
    issue: Issue,
    state: bool,
    lobbied: bool,
    pin: Option<Pin>,
) -> S {
    if let Some(Pin {
        issue: pinned,
        lobby: Some(l),
        ..
    }) = pin
    {
        if pinned == issue {
            return S::indicator(l == lobbied);
        }
    }
    let x = profile.lobby_rule(issue).prob(state).clone();
    if lobbied {
        x
    } else {
        S::one() - x
    }
}

/// Access outcomes and their probabilities for a lobbying profile.
pub(crate) fn access_outcomes<S: Scalar>(profile: &StrategyProfile<S>, lobby: [bool; 2]) -> Vec<(Option<Issue>, S)> {
    match lobby {
        [false, false] => vec![(None, S::one())],
        [true, true] => vec![
            (Some(Issue::One), profile.access.gamma(Issue::One)),
            (Some(Issue::Two), profile.access.gamma(Issue::Two)),
        ],
        [l1, _] => {
            let lone = if l1 { Issue::One } else { Issue::Two };
            if profile.access.lone_grant {
                vec![(Some(lone), S::one())]
            } else {
                vec![(None, S::one())]
            }
        }
    }
}

/// Visits every positive-probability leaf.
pub(crate) fn for_each_leaf<S, F>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
    pin: Option<Pin>,
    mut visit: F,
) -> Result<(), GameError>
where
    S: Scalar,
    F: FnMut(S, StateVector, History) -> Result<(), GameError>,
{
    for t1 in [false, true] {
        for t2 in [false, true] {
            let p_state = state_weight(params, Issue::One, t1, pin) * state_weight(params, Issue::Two, t2, pin);
            if p_state.is_zero() {
                continue;
            }
            let theta = StateVector::new(t1, t2);
            for l1 in [false, true] {
                for l2 in [false, true] {
                    let p_lobby = p_state.clone()
                        * lobby_weight(profile, Issue::One, t1, l1, pin)
                        * lobby_weight(profile, Issue::Two, t2, l2, pin);
                    if p_lobby.is_zero() {
                        continue;
                    }
                    let lobby = [l1, l2];
                    for (granted, p_access) in access_outcomes(profile, lobby) {
                        let p = p_lobby.clone() * p_access;
                        if p.is_zero() {
                            continue;
                        }
                        let access = match granted {
                            None => Access::None,
                            Some(to) => Access::Granted {
                                to,
                                revealed: theta.get(to),
                            },
                        };
                        visit(p, theta, History::new(lobby, access))?;
                    }
                }
            }
        }
    }
    Ok(())
}
