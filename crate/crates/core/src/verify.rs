//! Perfect-Bayesian-equilibrium checker.
//!
//! Works from first principles on any [`StrategyProfile`]: every expectation
//! is an exact sum over the finite game tree. Nothing here reuses the closed
//! forms in [`crate::equilibrium`], so the two can arbitrate each other.

use serde::Serialize;

use crate::error::GameError;
use crate::game::{
    bayes_access_belief, dp_best_value, dp_expected_utility, Access, Capacity, GameParams, History, Issue,
    StrategyProfile,
};
use crate::scalar::{fmt_num, Scalar};
use crate::tree::{for_each_leaf, Pin};

/// Quantities the lobbying and access conditions are phrased in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationIntermediates<S> {
    /// `q_i`: unconditional probability that group `i` lobbies.
    pub q: [S; 2],
    /// `Ξ_i = q_{-i} γ_i + (1 - q_{-i})`: access probability for a lobbying group `i`.
    pub xi_access: [S; 2],
    /// `W_i`: probability of matching `p_i = θ_i` when both lobby and `i` gets access.
    pub w: [S; 2],
    /// `Z_i`: same, when the other group gets access.
    pub z: [S; 2],
    /// `X_i = W_i - Z_i`
    pub x: [S; 2],
}

pub fn compute_intermediates<S: Scalar>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
) -> Result<VerificationIntermediates<S>, GameError> {
    let q = [
        profile
            .lobby_rule(Issue::One)
            .lobbying_probability(params.prior(Issue::One)),
        profile
            .lobby_rule(Issue::Two)
            .lobbying_probability(params.prior(Issue::Two)),
    ];
    let xi_access = [Issue::One, Issue::Two].map(|i| {
        let q_other = q[i.other().idx()].clone();
        q_other.clone() * profile.access.gamma(i) + (S::one() - q_other)
    });
    let both = [true, true];
    let mut w = [S::zero(), S::zero()];
    let mut z = [S::zero(), S::zero()];
    for i in Issue::BOTH {
        w[i.idx()] = match_probability(profile, params, both, Some(i), i)?;
        z[i.idx()] = match_probability(profile, params, both, Some(i.other()), i)?;
    }
    let x = [w[0].clone() - z[0].clone(), w[1].clone() - z[1].clone()];
    Ok(VerificationIntermediates { q, xi_access, w, z, x })
}

/// Probability, as judged by the policymaker at the access stage, that the
/// policy on `issue` matches the state after lobby profile `lobby` and access
/// decision `granted`.
fn match_probability<S: Scalar>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
    lobby: [bool; 2],
    granted: Option<Issue>,
    issue: Issue,
) -> Result<S, GameError> {
    let _ = params;
    let mut total = S::zero();
    for (weight, history) in access_branches(profile, lobby, granted) {
        let b = profile.beliefs.policy_belief(&history, issue);
        let rho = profile.policy.get(&history)?[issue.idx()].clone();
        total = total + weight * (rho.clone() * b.clone() + (S::one() - rho) * (S::one() - b));
    }
    Ok(total)
}

/// Histories following an access decision, weighted by the access-stage
/// belief about the revealed state.
fn access_branches<S: Scalar>(
    profile: &StrategyProfile<S>,
    lobby: [bool; 2],
    granted: Option<Issue>,
) -> Vec<(S, History)> {
    match granted {
        None => vec![(S::one(), History::new(lobby, Access::None))],
        Some(to) => {
            let b = profile.beliefs.access_belief(to, lobby[to.idx()]).clone();
            vec![
                (b.clone(), History::granted(lobby, to, true)),
                (S::one() - b, History::granted(lobby, to, false)),
            ]
        }
    }
}

/// Policymaker's access-stage value of an access decision.
fn access_value<S: Scalar>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
    lobby: [bool; 2],
    granted: Option<Issue>,
) -> Result<S, GameError> {
    let mut total = S::zero();
    for (weight, history) in access_branches(profile, lobby, granted) {
        let beliefs = profile.beliefs.policy_beliefs(&history);
        let rho = profile.policy.get(&history)?;
        total = total + weight * dp_expected_utility(&beliefs, rho, params);
    }
    Ok(total)
}

/// Group `issue`'s expected `P(p_i = 1) - λ_i f_i` given its state, with
/// lobbying pinned when `lobby` is `Some` and drawn from the profile otherwise.
pub fn group_conditional_payoff<S: Scalar>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
    issue: Issue,
    state: bool,
    lobby: Option<bool>,
) -> Result<S, GameError> {
    let mut total = S::zero();
    let cost = params.cost(issue).clone();
    for_each_leaf(profile, params, Some(Pin { issue, state, lobby }), |p, _theta, h| {
        let rho = profile.policy.get(&h)?[issue.idx()].clone();
        let paid = if h.lobby[issue.idx()] { cost.clone() } else { S::zero() };
        total = total.clone() + p * (rho - paid);
        Ok(())
    })?;
    Ok(total)
}

/// `d Ev_i / d ξ_i(θ_i)`. The payoff is affine in `ξ_i(θ_i)`, so this is the
/// payoff from lobbying minus the payoff from staying silent.
pub fn lobby_payoff_derivative<S: Scalar>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
    issue: Issue,
    state: bool,
) -> Result<S, GameError> {
    let lobby = group_conditional_payoff(profile, params, issue, state, Some(true))?;
    let silent = group_conditional_payoff(profile, params, issue, state, Some(false))?;
    Ok(lobby - silent)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BayesCheck<S> {
    pub issue: Issue,
    pub lobbied: bool,
    pub stated: S,
    /// `None` when the lobbying outcome is off-path.
    pub posterior: Option<S>,
    pub violation: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LobbyCheck<S> {
    pub issue: Issue,
    pub state: bool,
    pub xi: S,
    pub derivative: S,
    pub violation: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccessCheck<S> {
    pub lobby: [bool; 2],
    /// Value of each available decision with the weight the profile puts on it.
    pub options: Vec<(Option<Issue>, S, S)>,
    /// `max value - expected value under the rule`
    pub violation: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyCheck<S> {
    pub history: String,
    pub beliefs: [S; 2],
    pub rho: [S; 2],
    pub regret: S,
    pub violation: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport<S> {
    pub tol: S,
    pub intermediates: VerificationIntermediates<S>,
    pub bayes: Vec<BayesCheck<S>>,
    pub lobby: Vec<LobbyCheck<S>>,
    pub access: Vec<AccessCheck<S>>,
    pub policy: Vec<PolicyCheck<S>>,
    pub max_violation: S,
}

impl<S: Scalar> VerificationReport<S> {
    fn all_within<'a>(&self, mut it: impl Iterator<Item = &'a S>) -> bool {
        it.all(|v| *v <= self.tol)
    }

    pub fn bayes_ok(&self) -> bool {
        self.all_within(self.bayes.iter().map(|c| &c.violation))
    }

    pub fn lobby_foc_ok(&self) -> bool {
        self.all_within(self.lobby.iter().map(|c| &c.violation))
    }

    pub fn access_ok(&self) -> bool {
        self.all_within(self.access.iter().map(|c| &c.violation))
    }

    pub fn policy_ok(&self) -> bool {
        self.all_within(self.policy.iter().map(|c| &c.violation))
    }

    pub fn passed(&self) -> bool {
        self.bayes_ok() && self.lobby_foc_ok() && self.access_ok() && self.policy_ok()
    }

    /// One line per checked condition.
    pub fn lines(&self) -> Vec<String> {
        let f = |v: &S| fmt_num(v.to_f64_lossy());
        let verdict = |v: &S| if *v <= self.tol { "PASS" } else { "FAIL" };
        let mut out = Vec::new();
        for c in &self.bayes {
            let posterior = c.posterior.as_ref().map_or("off-path".to_string(), f);
            out.push(format!(
                "{} bayes group={} lambda={} stated={} posterior={} violation={}",
                verdict(&c.violation),
                c.issue,
                u8::from(c.lobbied),
                f(&c.stated),
                posterior,
                f(&c.violation)
            ));
        }
        for c in &self.lobby {
            out.push(format!(
                "{} lobby group={} theta={} xi={} derivative={} violation={}",
                verdict(&c.violation),
                c.issue,
                u8::from(c.state),
                f(&c.xi),
                f(&c.derivative),
                f(&c.violation)
            ));
        }
        for c in &self.access {
            let opts: Vec<String> = c
                .options
                .iter()
                .map(|(g, value, weight)| {
                    let name = g.map_or("none".to_string(), |i| format!("g{i}"));
                    format!("{name}:value={},weight={}", f(value), f(weight))
                })
                .collect();
            out.push(format!(
                "{} access lobby={}{} {} violation={}",
                verdict(&c.violation),
                u8::from(c.lobby[0]),
                u8::from(c.lobby[1]),
                opts.join(" "),
                f(&c.violation)
            ));
        }
        for c in &self.policy {
            out.push(format!(
                "{} policy history={} beliefs={},{} rho={},{} regret={}",
                verdict(&c.violation),
                c.history,
                f(&c.beliefs[0]),
                f(&c.beliefs[1]),
                f(&c.rho[0]),
                f(&c.rho[1]),
                f(&c.regret)
            ));
        }
        let i = &self.intermediates;
        out.push(format!(
            "INFO intermediates q={},{} Xi={},{} W={},{} Z={},{} X={},{}",
            f(&i.q[0]),
            f(&i.q[1]),
            f(&i.xi_access[0]),
            f(&i.xi_access[1]),
            f(&i.w[0]),
            f(&i.w[1]),
            f(&i.z[0]),
            f(&i.z[1]),
            f(&i.x[0]),
            f(&i.x[1])
        ));
        out.push(format!(
            "{} overall max_violation={} tol={}",
            if self.passed() { "PASS" } else { "FAIL" },
            f(&self.max_violation),
            f(&self.tol)
        ));
        out
    }
}

/// Checks sequential rationality and Bayes consistency of `profile`.
///
/// Off-path beliefs are taken as stated. On-path beliefs are recomputed from
/// the lobbying rule. Access is checked at every lobby profile where some
/// group lobbies; policy is checked at every history.
pub fn verify_equilibrium<S: Scalar>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
    tol: &S,
) -> Result<VerificationReport<S>, GameError> {
    profile.check_well_formed(params.capacity())?;
    let intermediates = compute_intermediates(profile, params)?;

    let mut bayes = Vec::new();
    for issue in Issue::BOTH {
        let posterior = bayes_access_belief(params.prior(issue), profile.lobby_rule(issue));
        for lobbied in [false, true] {
            let stated = profile.beliefs.access_belief(issue, lobbied).clone();
            let post = posterior.get(lobbied).cloned();
            let violation = post.as_ref().map_or(S::zero(), |p| (p.clone() - stated.clone()).abs());
            bayes.push(BayesCheck {
                issue,
                lobbied,
                stated,
                posterior: post,
                violation,
            });
        }
    }

    let mut lobby = Vec::new();
    for issue in Issue::BOTH {
        for state in [false, true] {
            let xi = profile.lobby_rule(issue).prob(state).clone();
            let d = lobby_payoff_derivative(profile, params, issue, state)?;
            let violation = if xi == S::one() {
                S::max_of(-d.clone(), S::zero())
            } else if xi.is_zero() {
                S::max_of(d.clone(), S::zero())
            } else {
                d.abs()
            };
            lobby.push(LobbyCheck {
                issue,
                state,
                xi,
                derivative: d,
                violation,
            });
        }
    }

    let mut access = Vec::new();
    for lobby_profile in [[true, false], [false, true], [true, true]] {
        let decisions: Vec<(Option<Issue>, S)> = match lobby_profile {
            [true, true] => vec![
                (Some(Issue::One), profile.access.gamma(Issue::One)),
                (Some(Issue::Two), profile.access.gamma(Issue::Two)),
            ],
            [l1, _] => {
                let lone = if l1 { Issue::One } else { Issue::Two };
                let grant = S::indicator(profile.access.lone_grant);
                vec![(Some(lone), grant.clone()), (None, S::one() - grant)]
            }
        };
        let mut options = Vec::new();
        let mut best: Option<S> = None;
        let mut chosen = S::zero();
        for (granted, weight) in decisions {
            let value = access_value(profile, params, lobby_profile, granted)?;
            chosen = chosen + weight.clone() * value.clone();
            best = Some(match best {
                None => value.clone(),
                Some(b) => S::max_of(b, value.clone()),
            });
            options.push((granted, value, weight));
        }
        let violation = S::max_of(best.unwrap_or_else(S::zero) - chosen, S::zero());
        access.push(AccessCheck {
            lobby: lobby_profile,
            options,
            violation,
        });
    }

    let mut policy = Vec::new();
    for h in History::all() {
        let beliefs = profile.beliefs.policy_beliefs(&h);
        let rho = profile.policy.get(&h)?.clone();
        let regret = dp_best_value(&beliefs, params) - dp_expected_utility(&beliefs, &rho, params);
        let excess = match params.capacity() {
            Capacity::N1 => S::max_of(rho[0].clone() + rho[1].clone() - S::one(), S::zero()),
            Capacity::N2 => S::zero(),
        };
        let violation = S::max_of(S::max_of(regret.clone(), S::zero()), excess);
        policy.push(PolicyCheck {
            history: h.key(),
            beliefs,
            rho,
            regret,
            violation,
        });
    }

    let max_violation = bayes
        .iter()
        .map(|c| &c.violation)
        .chain(lobby.iter().map(|c| &c.violation))
        .chain(access.iter().map(|c| &c.violation))
        .chain(policy.iter().map(|c| &c.violation))
        .fold(S::zero(), |acc, v| S::max_of(acc, v.clone()));

    Ok(VerificationReport {
        tol: tol.clone(),
        intermediates,
        bayes,
        lobby,
        access,
        policy,
        max_violation,
    })
}
