//! Domain types and stage-level primitives of the two-issue lobbying game.
//!
//! Stage order: nature draws `θ`, each group privately learns its own state
//! and decides whether to lobby, the policymaker grants access to at most one
//! lobbying group (which must then reveal its state), and finally the
//! policymaker picks the policy vector under its capacity constraint.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Field, GameError, ParamError, Violation};
use crate::scalar::Scalar;

/// One of the two issues. Group `i` lobbies for issue `i`, so this also
/// indexes groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Issue {
    One,
    Two,
}

impl Issue {
    pub const BOTH: [Issue; 2] = [Issue::One, Issue::Two];

    pub fn idx(self) -> usize {
        match self {
            Issue::One => 0,
            Issue::Two => 1,
        }
    }

    pub fn other(self) -> Issue {
        match self {
            Issue::One => Issue::Two,
            Issue::Two => Issue::One,
        }
    }

    pub fn number(self) -> u8 {
        self.idx() as u8 + 1
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Leadership capacity: how many issues the policymaker can reform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Capacity {
    N1,
    N2,
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Capacity::N1 => "1",
            Capacity::N2 => "2",
        })
    }
}

impl FromStr for Capacity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "1" | "N1" => Ok(Capacity::N1),
            "2" | "N2" => Ok(Capacity::N2),
            other => Err(format!("unknown capacity `{other}` (expected 1 or 2)")),
        }
    }
}

/// Unvalidated parameters as they arrive from a user or a file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub pi1: f64,
    pub pi2: f64,
    pub f1: f64,
    pub f2: f64,
    pub alpha: f64,
    pub capacity: Capacity,
}

/// A validated game instance.
///
/// Invariants: `0 < π_i < 1/2`, `0 < f_i < 1`, `α > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GameParams<S> {
    prior: [S; 2],
    cost: [S; 2],
    alpha: S,
    capacity: Capacity,
}

impl<S: Scalar> GameParams<S> {
    pub fn new(pi1: S, pi2: S, f1: S, f2: S, alpha: S, capacity: Capacity) -> Result<Self, ParamError> {
        let mut violations = Vec::new();
        let open = |field, v: &S, lo: S, hi: S, expected, out: &mut Vec<Violation>| {
            if !(*v > lo && *v < hi) {
                out.push(Violation::OutOfRange {
                    field,
                    value: v.to_f64_lossy(),
                    expected,
                });
            }
        };
        open(Field::Pi1, &pi1, S::zero(), S::half(), "(0, 1/2)", &mut violations);
        open(Field::Pi2, &pi2, S::zero(), S::half(), "(0, 1/2)", &mut violations);
        open(Field::F1, &f1, S::zero(), S::one(), "(0, 1)", &mut violations);
        open(Field::F2, &f2, S::zero(), S::one(), "(0, 1)", &mut violations);
        if !(alpha > S::one()) {
            violations.push(Violation::OutOfRange {
                field: Field::Alpha,
                value: alpha.to_f64_lossy(),
                expected: "(1, inf)",
            });
        }
        if violations.is_empty() {
            Ok(Self {
                prior: [pi1, pi2],
                cost: [f1, f2],
                alpha,
                capacity,
            })
        } else {
            Err(ParamError { violations })
        }
    }

    /// `π_i`, the prior that reform of issue `i` is beneficial.
    pub fn prior(&self, issue: Issue) -> &S {
        &self.prior[issue.idx()]
    }

    /// `f_i`, group `i`'s lobbying cost.
    pub fn cost(&self, issue: Issue) -> &S {
        &self.cost[issue.idx()]
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    /// Policymaker weight on issue `i`: `α` for issue 1, `1` for issue 2.
    pub fn weight(&self, issue: Issue) -> S {
        match issue {
            Issue::One => self.alpha.clone(),
            Issue::Two => S::one(),
        }
    }

    pub fn capacity(&self) -> Capacity {
        self.capacity
    }

    pub fn with_capacity(&self, capacity: Capacity) -> Self {
        Self {
            capacity,
            ..self.clone()
        }
    }

    /// Re-expresses the parameters in another scalar type.
    pub fn convert<T: Scalar>(&self) -> GameParams<T> {
        let c = |v: &S| T::lit(v.to_f64_lossy());
        GameParams {
            prior: [c(&self.prior[0]), c(&self.prior[1])],
            cost: [c(&self.cost[0]), c(&self.cost[1])],
            alpha: c(&self.alpha),
            capacity: self.capacity,
        }
    }

    pub fn to_raw(&self) -> RawParams {
        RawParams {
            pi1: self.prior[0].to_f64_lossy(),
            pi2: self.prior[1].to_f64_lossy(),
            f1: self.cost[0].to_f64_lossy(),
            f2: self.cost[1].to_f64_lossy(),
            alpha: self.alpha.to_f64_lossy(),
            capacity: self.capacity,
        }
    }
}

/// Range-checks raw input and converts it to the requested scalar type.
pub fn validate_params<S: Scalar>(raw: &RawParams) -> Result<GameParams<S>, ParamError> {
    let fields = [
        (Field::Pi1, raw.pi1),
        (Field::Pi2, raw.pi2),
        (Field::F1, raw.f1),
        (Field::F2, raw.f2),
        (Field::Alpha, raw.alpha),
    ];
    let not_finite: Vec<Violation> = fields
        .iter()
        .filter(|(_, v)| !v.is_finite())
        .map(|(field, _)| Violation::NotFinite { field: *field })
        .collect();
    if !not_finite.is_empty() {
        return Err(ParamError { violations: not_finite });
    }
    GameParams::new(
        S::lit(raw.pi1),
        S::lit(raw.pi2),
        S::lit(raw.f1),
        S::lit(raw.f2),
        S::lit(raw.alpha),
        raw.capacity,
    )
}

/// Realized state `θ`; `true` means reform is the right call on that issue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateVector(pub [bool; 2]);

impl StateVector {
    pub fn new(theta1: bool, theta2: bool) -> Self {
        Self([theta1, theta2])
    }

    pub fn get(&self, issue: Issue) -> bool {
        self.0[issue.idx()]
    }
}

/// Pure policy choice `p`; `true` means reform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolicyVector(pub [bool; 2]);

impl PolicyVector {
    pub const STATUS_QUO: PolicyVector = PolicyVector([false, false]);

    pub fn new(p1: bool, p2: bool) -> Self {
        Self([p1, p2])
    }

    pub fn reform(issue: Issue) -> Self {
        let mut p = [false; 2];
        p[issue.idx()] = true;
        Self(p)
    }

    pub fn get(&self, issue: Issue) -> bool {
        self.0[issue.idx()]
    }

    pub fn fits(&self, capacity: Capacity) -> bool {
        capacity == Capacity::N2 || !(self.0[0] && self.0[1])
    }
}

/// Group lobbying rule `ξ_i`: probability of lobbying given the group's state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LobbyRule<S> {
    /// `ξ_i(1)`
    pub on: S,
    /// `ξ_i(0)`
    pub off: S,
}

impl<S: Scalar> LobbyRule<S> {
    pub fn new(on: S, off: S) -> Self {
        Self { on, off }
    }

    pub fn truthful() -> Self {
        Self::new(S::one(), S::zero())
    }

    pub fn silent() -> Self {
        Self::new(S::zero(), S::zero())
    }

    pub fn prob(&self, state: bool) -> &S {
        if state {
            &self.on
        } else {
            &self.off
        }
    }

    pub fn prob_mut(&mut self, state: bool) -> &mut S {
        if state {
            &mut self.on
        } else {
            &mut self.off
        }
    }

    /// Unconditional lobbying probability `q = π ξ(1) + (1 - π) ξ(0)`.
    pub fn lobbying_probability(&self, prior: &S) -> S {
        prior.clone() * self.on.clone() + (S::one() - prior.clone()) * self.off.clone()
    }
}

/// Access rule. Only `γ_1` is stored, so `γ_1 + γ_2 = 1` holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessRule<S> {
    /// Probability of granting access to group 1 when both groups lobby.
    pub gamma1: S,
    /// Whether a lone lobbier is granted access.
    pub lone_grant: bool,
}

impl<S: Scalar> AccessRule<S> {
    pub fn new(gamma1: S) -> Self {
        Self {
            gamma1,
            lone_grant: true,
        }
    }

    pub fn gamma(&self, issue: Issue) -> S {
        match issue {
            Issue::One => self.gamma1.clone(),
            Issue::Two => S::one() - self.gamma1.clone(),
        }
    }
}

/// Outcome of the access stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Access {
    None,
    Granted { to: Issue, revealed: bool },
}

/// Everything the policymaker has observed when choosing policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History {
    pub lobby: [bool; 2],
    pub access: Access,
}

impl History {
    pub const COUNT: usize = 11;

    pub fn new(lobby: [bool; 2], access: Access) -> Self {
        Self { lobby, access }
    }

    pub fn granted(lobby: [bool; 2], to: Issue, revealed: bool) -> Self {
        Self::new(lobby, Access::Granted { to, revealed })
    }

    /// Access can only go to a lobbying group, and when both lobby one of
    /// them is always granted.
    pub fn is_valid(&self) -> bool {
        match self.access {
            Access::None => !(self.lobby[0] && self.lobby[1]),
            Access::Granted { to, .. } => self.lobby[to.idx()],
        }
    }

    /// All observable histories, in a fixed order.
    pub fn all() -> Vec<History> {
        let mut out = Vec::with_capacity(Self::COUNT);
        for lobby in [[false, false], [true, false], [false, true], [true, true]] {
            for access in [
                Access::None,
                Access::Granted {
                    to: Issue::One,
                    revealed: false,
                },
                Access::Granted {
                    to: Issue::One,
                    revealed: true,
                },
                Access::Granted {
                    to: Issue::Two,
                    revealed: false,
                },
                Access::Granted {
                    to: Issue::Two,
                    revealed: true,
                },
            ] {
                let h = History::new(lobby, access);
                if h.is_valid() {
                    out.push(h);
                }
            }
        }
        out
    }

    /// Key used in profile documents, e.g. `11.g1t0` or `10.none`.
    pub fn key(&self) -> String {
        let l = |b: bool| if b { '1' } else { '0' };
        let access = match self.access {
            Access::None => "none".to_string(),
            Access::Granted { to, revealed } => format!("g{}t{}", to.number(), u8::from(revealed)),
        };
        format!("{}{}.{}", l(self.lobby[0]), l(self.lobby[1]), access)
    }

    pub fn parse_key(key: &str) -> Option<History> {
        let (lobby, access) = key.split_once('.')?;
        let bits: Vec<bool> = lobby
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<_>>()?;
        if bits.len() != 2 {
            return None;
        }
        let access = match access {
            "none" => Access::None,
            a => {
                let b = a.as_bytes();
                if b.len() != 4 || b[0] != b'g' || b[2] != b't' {
                    return None;
                }
                let to = match b[1] {
                    b'1' => Issue::One,
                    b'2' => Issue::Two,
                    _ => return None,
                };
                let revealed = match b[3] {
                    b'0' => false,
                    b'1' => true,
                    _ => return None,
                };
                Access::Granted { to, revealed }
            }
        };
        let h = History::new([bits[0], bits[1]], access);
        h.is_valid().then_some(h)
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Policy rule `ρ`: for each history, the probability of reforming each issue.
/// Under capacity N1 the two entries are the weights of `(1,0)` and `(0,1)`,
/// the remainder going to the status quo.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyRule<S> {
    entries: BTreeMap<History, [S; 2]>,
}

impl<S: Scalar> Default for PolicyRule<S> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> PolicyRule<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, history: History, rho: [S; 2]) {
        self.entries.insert(history, rho);
    }

    pub fn get(&self, history: &History) -> Result<&[S; 2], GameError> {
        self.entries
            .get(history)
            .ok_or_else(|| GameError::MalformedProfile(format!("policy rule has no entry for history {history}")))
    }

    pub fn get_mut(&mut self, history: &History) -> Option<&mut [S; 2]> {
        self.entries.get_mut(history)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&History, &[S; 2])> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Beliefs held by the policymaker.
///
/// `access[i][λ]` is `B_i^A(λ)`. Policy-stage beliefs are derived: the issue
/// of the accessed group is known exactly, the other keeps its access-stage
/// belief (lobbying decisions and states are independent across issues).
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefSystem<S> {
    pub access: [[S; 2]; 2],
    /// `off_path[i][λ]`: lobbying outcome `λ` of group `i` has probability zero.
    pub off_path: [[bool; 2]; 2],
}

impl<S: Scalar> BeliefSystem<S> {
    /// Bayes-consistent beliefs for `lobby`; off-path entries take `fill`.
    pub fn from_bayes(params: &GameParams<S>, lobby: &[LobbyRule<S>; 2], fill: [[S; 2]; 2]) -> Self {
        let mut access = fill;
        let mut off_path = [[false; 2]; 2];
        for issue in Issue::BOTH {
            let b = bayes_access_belief(params.prior(issue), &lobby[issue.idx()]);
            for (lambda, value) in [(0usize, b.silent), (1, b.lobbied)] {
                match value {
                    Some(v) => access[issue.idx()][lambda] = v,
                    None => off_path[issue.idx()][lambda] = true,
                }
            }
        }
        Self { access, off_path }
    }

    pub fn access_belief(&self, issue: Issue, lobbied: bool) -> &S {
        &self.access[issue.idx()][usize::from(lobbied)]
    }

    pub fn is_off_path(&self, issue: Issue, lobbied: bool) -> bool {
        self.off_path[issue.idx()][usize::from(lobbied)]
    }

    /// `B_i` at the policy stage.
    pub fn policy_belief(&self, history: &History, issue: Issue) -> S {
        match history.access {
            Access::Granted { to, revealed } if to == issue => S::indicator(revealed),
            _ => self.access_belief(issue, history.lobby[issue.idx()]).clone(),
        }
    }

    pub fn policy_beliefs(&self, history: &History) -> [S; 2] {
        [
            self.policy_belief(history, Issue::One),
            self.policy_belief(history, Issue::Two),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile<S> {
    pub lobby: [LobbyRule<S>; 2],
    pub access: AccessRule<S>,
    pub policy: PolicyRule<S>,
    pub beliefs: BeliefSystem<S>,
}

impl<S: Scalar> StrategyProfile<S> {
    pub fn lobby_rule(&self, issue: Issue) -> &LobbyRule<S> {
        &self.lobby[issue.idx()]
    }

    /// Checks that the policy rule is complete and every probability lies in `[0, 1]`.
    pub fn check_well_formed(&self, capacity: Capacity) -> Result<(), GameError> {
        let bad = |what: String| Err(GameError::MalformedProfile(what));
        for issue in Issue::BOTH {
            let rule = self.lobby_rule(issue);
            for state in [false, true] {
                if !rule.prob(state).is_probability() {
                    return bad(format!("xi{issue}({}) outside [0,1]", u8::from(state)));
                }
                if !self.beliefs.access_belief(issue, state).is_probability() {
                    return bad(format!("belief{issue}({}) outside [0,1]", u8::from(state)));
                }
            }
        }
        if !self.access.gamma1.is_probability() {
            return bad("gamma1 outside [0,1]".into());
        }
        for h in History::all() {
            let rho = self.policy.get(&h)?;
            if !rho[0].is_probability() || !rho[1].is_probability() {
                return bad(format!("rho at {h} outside [0,1]"));
            }
            if capacity == Capacity::N1 && rho[0].clone() + rho[1].clone() > S::one() + S::default_tolerance() {
                return bad(format!("rho at {h} reforms more than one issue under N=1"));
            }
        }
        Ok(())
    }

    pub fn convert<T: Scalar>(&self) -> StrategyProfile<T> {
        let c = |v: &S| T::lit(v.to_f64_lossy());
        let lr = |r: &LobbyRule<S>| LobbyRule::new(c(&r.on), c(&r.off));
        let mut policy = PolicyRule::new();
        for (h, rho) in self.policy.iter() {
            policy.set(*h, [c(&rho[0]), c(&rho[1])]);
        }
        let a = &self.beliefs.access;
        StrategyProfile {
            lobby: [lr(&self.lobby[0]), lr(&self.lobby[1])],
            access: AccessRule {
                gamma1: c(&self.access.gamma1),
                lone_grant: self.access.lone_grant,
            },
            policy,
            beliefs: BeliefSystem {
                access: [[c(&a[0][0]), c(&a[0][1])], [c(&a[1][0]), c(&a[1][1])]],
                off_path: self.beliefs.off_path,
            },
        }
    }
}

/// Ex-ante expected utilities of the two groups and the policymaker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffVector<S> {
    pub eu_gi1: S,
    pub eu_gi2: S,
    pub eu_dp: S,
}

impl<S: Scalar> PayoffVector<S> {
    pub fn new(eu_gi1: S, eu_gi2: S, eu_dp: S) -> Self {
        Self { eu_gi1, eu_gi2, eu_dp }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero())
    }

    pub fn group(&self, issue: Issue) -> &S {
        match issue {
            Issue::One => &self.eu_gi1,
            Issue::Two => &self.eu_gi2,
        }
    }

    pub fn components(&self) -> [S; 3] {
        [self.eu_gi1.clone(), self.eu_gi2.clone(), self.eu_dp.clone()]
    }

    pub fn from_components(c: [S; 3]) -> Self {
        let [a, b, d] = c;
        Self::new(a, b, d)
    }

    pub fn to_f64(&self) -> PayoffVector<f64> {
        PayoffVector::new(
            self.eu_gi1.to_f64_lossy(),
            self.eu_gi2.to_f64_lossy(),
            self.eu_dp.to_f64_lossy(),
        )
    }
}

/// Policymaker utility `α·1[p1 = θ1] + 1[p2 = θ2]`.
pub fn dp_utility<S: Scalar>(p: &PolicyVector, theta: &StateVector, params: &GameParams<S>) -> S {
    Issue::BOTH
        .iter()
        .filter(|&&i| p.get(i) == theta.get(i))
        .fold(S::zero(), |acc, &i| acc + params.weight(i))
}

/// Access-stage posteriors `B^A(1)` and `B^A(0)`; `None` marks an off-path outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessBelief<S> {
    pub lobbied: Option<S>,
    pub silent: Option<S>,
}

impl<S: Scalar> AccessBelief<S> {
    pub fn get(&self, lobbied: bool) -> Option<&S> {
        if lobbied {
            self.lobbied.as_ref()
        } else {
            self.silent.as_ref()
        }
    }
}

pub fn bayes_access_belief<S: Scalar>(prior: &S, rule: &LobbyRule<S>) -> AccessBelief<S> {
    let posterior = |good: S, bad: S| {
        let den = good.clone() + bad;
        (den > S::zero()).then(|| good / den)
    };
    let not_prior = S::one() - prior.clone();
    AccessBelief {
        lobbied: posterior(prior.clone() * rule.on.clone(), not_prior.clone() * rule.off.clone()),
        silent: posterior(
            prior.clone() * (S::one() - rule.on.clone()),
            not_prior * (S::one() - rule.off.clone()),
        ),
    }
}

/// Per-issue decision under N2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IssueChoice {
    Reform,
    StatusQuo,
    /// `B_i = 1/2`: any reform probability is optimal.
    Indifferent,
}

/// The set of optimal pure policies for given beliefs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BestResponse {
    /// N2: each issue decided on its own belief.
    Separate([IssueChoice; 2]),
    /// N1: optimal single reforms (`None` is the status quo), in priority order
    /// issue 1, issue 2, status quo.
    Single(Vec<Option<Issue>>),
}

impl BestResponse {
    pub fn optimal_policies(&self) -> Vec<PolicyVector> {
        match self {
            BestResponse::Separate(choices) => {
                let opts = |c: IssueChoice| match c {
                    IssueChoice::Reform => vec![true],
                    IssueChoice::StatusQuo => vec![false],
                    IssueChoice::Indifferent => vec![false, true],
                };
                let mut out = Vec::new();
                for p1 in opts(choices[0]) {
                    for p2 in opts(choices[1]) {
                        out.push(PolicyVector::new(p1, p2));
                    }
                }
                out
            }
            BestResponse::Single(options) => options
                .iter()
                .map(|o| o.map_or(PolicyVector::STATUS_QUO, PolicyVector::reform))
                .collect(),
        }
    }

    pub fn is_tie(&self) -> bool {
        self.optimal_policies().len() > 1
    }

    pub fn unique(&self) -> Option<PolicyVector> {
        let all = self.optimal_policies();
        (all.len() == 1).then(|| all[0])
    }
}

/// Expected gain over the status quo from reforming each issue: `α_i (2B_i - 1)`.
pub fn reform_gains<S: Scalar>(beliefs: &[S; 2], params: &GameParams<S>) -> [S; 2] {
    let gain = |i: Issue| params.weight(i) * (S::two() * beliefs[i.idx()].clone() - S::one());
    [gain(Issue::One), gain(Issue::Two)]
}

/// Optimal policies given policy-stage beliefs; gains within `tol` of each
/// other (or of zero) are reported as ties.
pub fn policy_best_response<S: Scalar>(beliefs: &[S; 2], params: &GameParams<S>, tol: &S) -> BestResponse {
    let gains = reform_gains(beliefs, params);
    match params.capacity() {
        Capacity::N2 => {
            let choice = |g: &S| {
                if g.abs() <= *tol {
                    IssueChoice::Indifferent
                } else if *g > S::zero() {
                    IssueChoice::Reform
                } else {
                    IssueChoice::StatusQuo
                }
            };
            BestResponse::Separate([choice(&gains[0]), choice(&gains[1])])
        }
        Capacity::N1 => {
            let [g1, g2] = gains;
            let best = S::max_of(S::max_of(g1.clone(), g2.clone()), S::zero());
            let mut options = Vec::new();
            for (option, g) in [(Some(Issue::One), g1), (Some(Issue::Two), g2), (None, S::zero())] {
                if best.clone() - g <= *tol {
                    options.push(option);
                }
            }
            BestResponse::Single(options)
        }
    }
}

/// Policymaker's expected utility from reform probabilities `rho` when it
/// believes `θ_i = 1` with probability `beliefs[i]`.
pub fn dp_expected_utility<S: Scalar>(beliefs: &[S; 2], rho: &[S; 2], params: &GameParams<S>) -> S {
    Issue::BOTH.iter().fold(S::zero(), |acc, &i| {
        let b = beliefs[i.idx()].clone();
        let r = rho[i.idx()].clone();
        let matched = r.clone() * b.clone() + (S::one() - r) * (S::one() - b);
        acc + params.weight(i) * matched
    })
}

/// Highest attainable expected utility under the capacity constraint.
pub fn dp_best_value<S: Scalar>(beliefs: &[S; 2], params: &GameParams<S>) -> S {
    let status_quo = dp_expected_utility(beliefs, &[S::zero(), S::zero()], params);
    let [g1, g2] = reform_gains(beliefs, params);
    let extra = match params.capacity() {
        Capacity::N2 => S::max_of(g1, S::zero()) + S::max_of(g2, S::zero()),
        Capacity::N1 => S::max_of(S::max_of(g1, g2), S::zero()),
    };
    status_quo + extra
}

/// Nature's move: `θ_i = 1` independently with probability `π_i`.
pub fn draw_state<S: Scalar, R: Rng + ?Sized>(params: &GameParams<S>, rng: &mut R) -> StateVector {
    let p1 = params.prior(Issue::One).to_f64_lossy();
    let p2 = params.prior(Issue::Two).to_f64_lossy();
    StateVector::new(rng.random::<f64>() < p1, rng.random::<f64>() < p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(pi1: f64, pi2: f64, f1: f64, f2: f64, alpha: f64, capacity: Capacity) -> GameParams<f64> {
        validate_params(&RawParams {
            pi1,
            pi2,
            f1,
            f2,
            alpha,
            capacity,
        })
        .unwrap()
    }

    fn raw(pi1: f64, pi2: f64, f1: f64, f2: f64, alpha: f64) -> RawParams {
        RawParams {
            pi1,
            pi2,
            f1,
            f2,
            alpha,
            capacity: Capacity::N2,
        }
    }

    #[test]
    fn validate_accepts_interior_point() {
        let p = validate_params::<f64>(&raw(0.4, 0.4, 0.05, 0.05, 2.0)).unwrap();
        assert_eq!(*p.prior(Issue::One), 0.4);
        assert_eq!(p.weight(Issue::One), 2.0);
        assert_eq!(p.weight(Issue::Two), 1.0);
    }

    #[test]
    fn validate_rejects_boundaries() {
        let e = validate_params::<f64>(&raw(0.5, 0.4, 0.05, 0.05, 2.0)).unwrap_err();
        assert_eq!(e.fields(), vec![Field::Pi1]);
        let e = validate_params::<f64>(&raw(0.4, 0.4, 0.05, 0.05, 1.0)).unwrap_err();
        assert_eq!(e.fields(), vec![Field::Alpha]);
        assert!(e.to_string().contains("OutOfRange(alpha)"));
    }

    #[test]
    fn validate_lists_every_violation() {
        let e = validate_params::<f64>(&raw(0.0, 0.7, 1.0, 0.0, 0.5)).unwrap_err();
        assert_eq!(
            e.fields(),
            vec![Field::Pi1, Field::Pi2, Field::F1, Field::F2, Field::Alpha]
        );
        let e = validate_params::<f64>(&raw(f64::NAN, 0.3, 0.1, 0.1, 2.0)).unwrap_err();
        assert_eq!(e.violations, vec![Violation::NotFinite { field: Field::Pi1 }]);
    }

    #[test]
    fn dp_utility_examples() {
        let p2 = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N2);
        assert_eq!(
            dp_utility(&PolicyVector::new(true, true), &StateVector::new(true, true), &p2),
            3.0
        );
        assert_eq!(
            dp_utility(&PolicyVector::new(false, true), &StateVector::new(true, true), &p2),
            1.0
        );
        let p15 = params(0.4, 0.4, 0.05, 0.05, 1.5, Capacity::N2);
        assert_eq!(
            dp_utility(&PolicyVector::new(true, false), &StateVector::new(true, false), &p15),
            2.5
        );
    }

    #[test]
    fn bayes_examples() {
        let b = bayes_access_belief(&0.4_f64, &LobbyRule::new(1.0, 2.0 / 3.0));
        assert!((b.lobbied.unwrap() - 0.5).abs() < 1e-12);
        let b = bayes_access_belief(&0.4_f64, &LobbyRule::new(1.0, 2.0 / 9.0));
        assert!((b.lobbied.unwrap() - 0.75).abs() < 1e-12);
        let b = bayes_access_belief(&0.3_f64, &LobbyRule::silent());
        assert_eq!(b.lobbied, None);
        assert!((b.silent.unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn bayes_is_exact_in_rationals() {
        let r = |n, d| BigRational::ratio(n, d);
        let b = bayes_access_belief(&r(2, 5), &LobbyRule::new(r(1, 1), r(2, 9)));
        assert_eq!(b.lobbied, Some(r(3, 4)));
        assert_eq!(b.silent, Some(r(0, 1)));
    }

    #[test]
    fn best_response_examples() {
        let p2 = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N2);
        let tol = 1e-9;
        let br = policy_best_response(&[0.75, 0.3], &p2, &tol);
        assert_eq!(br.unique(), Some(PolicyVector::new(true, false)));

        let p1 = p2.with_capacity(Capacity::N1);
        let br = policy_best_response(&[0.8, 1.0], &p1, &tol);
        assert_eq!(br.unique(), Some(PolicyVector::reform(Issue::One)));
        let br = policy_best_response(&[0.4, 0.45], &p1, &tol);
        assert_eq!(br.unique(), Some(PolicyVector::STATUS_QUO));
    }

    #[test]
    fn best_response_marks_ties() {
        let p2 = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N2);
        let br = policy_best_response(&[0.5, 0.0], &p2, &1e-9);
        assert_eq!(
            br,
            BestResponse::Separate([IssueChoice::Indifferent, IssueChoice::StatusQuo])
        );
        assert_eq!(br.optimal_policies().len(), 2);
        // N1: α(2b1 - 1) = 2b2 - 1 with α = 2, b1 = 0.75, b2 = 1
        let p1 = p2.with_capacity(Capacity::N1);
        let br = policy_best_response(&[0.75, 1.0], &p1, &1e-9);
        assert_eq!(br, BestResponse::Single(vec![Some(Issue::One), Some(Issue::Two)]));
    }

    #[test]
    fn history_keys_round_trip() {
        let all = History::all();
        assert_eq!(all.len(), History::COUNT);
        for h in all {
            assert_eq!(History::parse_key(&h.key()), Some(h));
        }
        assert_eq!(History::parse_key("00.g1t1"), None);
        assert_eq!(History::parse_key("11.none"), None);
        assert_eq!(History::parse_key("1.none"), None);
    }

    #[test]
    fn policy_beliefs_use_revealed_state() {
        let beliefs = BeliefSystem {
            access: [[0.0, 0.75], [0.1, 0.5]],
            off_path: [[false; 2]; 2],
        };
        let h = History::granted([true, true], Issue::One, false);
        assert_eq!(beliefs.policy_beliefs(&h), [0.0, 0.5]);
        let h = History::new([false, true], Access::None);
        assert_eq!(beliefs.policy_beliefs(&h), [0.0, 0.5]);
    }

    #[test]
    fn draw_state_is_seeded() {
        let p = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N2);
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            assert_eq!(draw_state(&p, &mut a), draw_state(&p, &mut b));
        }
    }

    #[test]
    fn draw_state_frequency() {
        let p = params(0.4, 0.3, 0.05, 0.05, 2.0, Capacity::N2);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 1_000_000;
        let ones = (0..n).filter(|_| draw_state(&p, &mut rng).get(Issue::One)).count();
        let mean = ones as f64 / n as f64;
        assert!((mean - 0.4).abs() <= 3.0 * (0.24f64 / n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn draw_state_small_prior() {
        let p = params(0.001, 0.001, 0.05, 0.05, 2.0, Capacity::N2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // 10^3 draws miss a 99.7% floor about one seed in seven; 10^5 draws keep a wide margin.
        let n = 100_000;
        let zeros = (0..n)
            .filter(|_| draw_state(&p, &mut rng) == StateVector::new(false, false))
            .count();
        assert!(zeros as f64 / n as f64 >= 0.997, "{zeros}");
    }

    proptest! {
        #[test]
        fn bayes_in_unit_interval(pi in 0.001f64..0.499, on in 0.0f64..=1.0, off in 0.0f64..=1.0) {
            let b = bayes_access_belief(&pi, &LobbyRule::new(on, off));
            for v in [b.lobbied, b.silent].into_iter().flatten() {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn uninformative_lobbying_keeps_prior(pi in 0.001f64..0.499, x in 0.001f64..0.999) {
            let b = bayes_access_belief(&pi, &LobbyRule::new(x, x));
            prop_assert!((b.lobbied.unwrap() - pi).abs() < 1e-12);
            prop_assert!((b.silent.unwrap() - pi).abs() < 1e-12);
        }

        #[test]
        fn lobbied_belief_above_half_iff_odds(pi in 0.001f64..0.499, on in 0.01f64..=1.0, off in 0.01f64..=1.0) {
            let b = bayes_access_belief(&pi, &LobbyRule::new(on, off)).lobbied.unwrap();
            let lhs = pi * on;
            let rhs = (1.0 - pi) * off;
            // skip numerically knife-edge draws
            prop_assume!((lhs - rhs).abs() > 1e-12);
            prop_assert_eq!(b >= 0.5, lhs >= rhs);
        }

        #[test]
        fn utility_swap_differs_only_by_weight_gap(p1: bool, p2: bool, t1: bool, t2: bool, alpha in 1.001f64..5.0) {
            // Swapping the issues changes U only through α - 1, so the two
            // labelings agree in the symmetric limit α = 1.
            let prm = params(0.4, 0.4, 0.05, 0.05, alpha, Capacity::N2);
            let m1 = f64::from(u8::from(p1 == t1));
            let m2 = f64::from(u8::from(p2 == t2));
            let a = dp_utility(&PolicyVector::new(p1, p2), &StateVector::new(t1, t2), &prm);
            let b = dp_utility(&PolicyVector::new(p2, p1), &StateVector::new(t2, t1), &prm);
            prop_assert!((a - (alpha * m1 + m2)).abs() < 1e-12);
            prop_assert!((a - b - (alpha - 1.0) * (m1 - m2)).abs() < 1e-12);
        }

        #[test]
        fn single_capacity_never_reforms_twice(b1 in 0.0f64..=1.0, b2 in 0.0f64..=1.0, alpha in 1.001f64..5.0) {
            let prm = params(0.3, 0.3, 0.1, 0.1, alpha, Capacity::N1);
            let br = policy_best_response(&[b1, b2], &prm, &1e-9);
            for p in br.optimal_policies() {
                prop_assert!(p.fits(Capacity::N1));
            }
        }

        #[test]
        fn unconstrained_response_unique_off_half(b1 in 0.0f64..=1.0, b2 in 0.0f64..=1.0) {
            prop_assume!((b1 - 0.5).abs() > 1e-6 && (b2 - 0.5).abs() > 1e-6);
            let prm = params(0.3, 0.3, 0.1, 0.1, 2.0, Capacity::N2);
            let br = policy_best_response(&[b1, b2], &prm, &1e-9);
            prop_assert_eq!(br.unique(), Some(PolicyVector::new(b1 > 0.5, b2 > 0.5)));
        }

        #[test]
        fn best_value_dominates_every_pure_policy(b1 in 0.0f64..=1.0, b2 in 0.0f64..=1.0, n1: bool) {
            let cap = if n1 { Capacity::N1 } else { Capacity::N2 };
            let prm = params(0.3, 0.3, 0.1, 0.1, 2.0, cap);
            let best = dp_best_value(&[b1, b2], &prm);
            for p in [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]] {
                if n1 && p == [1.0, 1.0] { continue; }
                prop_assert!(dp_expected_utility(&[b1, b2], &p, &prm) <= best + 1e-12);
            }
        }
    }
}
