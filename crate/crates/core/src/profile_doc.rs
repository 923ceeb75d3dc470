//! Plain-text profile documents: one `key = value` per line, `#` comments.
//!
//! ```text
//! pi1 = 0.4
//! capacity = 2
//! xi1_on = 1
//! gamma1 = 0.9375
//! lone_grant = true
//! belief2_on = 0.5
//! rho.11.g1t0 = 0 0.1
//! ```
//!
//! Off-path flags are not stored; they follow from the lobbying rules.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::GameError;
use crate::game::{
    bayes_access_belief, validate_params, AccessRule, BeliefSystem, Capacity, GameParams, History, Issue, LobbyRule,
    PolicyRule, RawParams, StrategyProfile,
};
use crate::scalar::{fmt_num, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDocument {
    pub params: GameParams<f64>,
    pub profile: StrategyProfile<f64>,
    /// Free-form label of how the profile was built.
    pub construction: Option<String>,
}

fn on_off(on: bool) -> &'static str {
    if on {
        "on"
    } else {
        "off"
    }
}

impl ProfileDocument {
    pub fn new<S: Scalar>(params: &GameParams<S>, profile: &StrategyProfile<S>, construction: Option<&str>) -> Self {
        Self {
            params: params.convert(),
            profile: profile.convert(),
            construction: construction.map(str::to_string),
        }
    }

    pub fn render(&self) -> String {
        let raw = self.params.to_raw();
        let p = &self.profile;
        let mut out = String::from("# lobbying game profile\n");
        if let Some(c) = &self.construction {
            let _ = writeln!(out, "construction = {c}");
        }
        for (k, v) in [
            ("pi1", raw.pi1),
            ("pi2", raw.pi2),
            ("f1", raw.f1),
            ("f2", raw.f2),
            ("alpha", raw.alpha),
        ] {
            let _ = writeln!(out, "{k} = {}", fmt_num(v));
        }
        let _ = writeln!(out, "capacity = {}", raw.capacity);
        for i in Issue::BOTH {
            for state in [true, false] {
                let _ = writeln!(
                    out,
                    "xi{i}_{} = {}",
                    on_off(state),
                    fmt_num(*p.lobby_rule(i).prob(state))
                );
            }
        }
        let _ = writeln!(out, "gamma1 = {}", fmt_num(p.access.gamma1));
        let _ = writeln!(out, "lone_grant = {}", p.access.lone_grant);
        for i in Issue::BOTH {
            for lobbied in [true, false] {
                let note = if p.beliefs.is_off_path(i, lobbied) {
                    "  # off-path"
                } else {
                    ""
                };
                let _ = writeln!(
                    out,
                    "belief{i}_{} = {}{note}",
                    on_off(lobbied),
                    fmt_num(*p.beliefs.access_belief(i, lobbied))
                );
            }
        }
        for (h, rho) in p.policy.iter() {
            let _ = writeln!(out, "rho.{} = {} {}", h.key(), fmt_num(rho[0]), fmt_num(rho[1]));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, GameError> {
        let bad = |m: String| GameError::MalformedProfile(m);
        let mut scalars: BTreeMap<String, (usize, String)> = BTreeMap::new();
        let mut policy = PolicyRule::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if let Some(hk) = k.strip_prefix("rho.") {
                let h = History::parse_key(hk).ok_or_else(|| bad(format!("line {}: unknown history '{hk}'", n + 1)))?;
                let nums: Vec<f64> = v
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad(format!("line {}: bad policy entry '{v}'", n + 1)))?;
                if nums.len() != 2 {
                    return Err(bad(format!("line {}: policy entry needs two numbers", n + 1)));
                }
                policy.set(h, [nums[0], nums[1]]);
            } else if scalars.insert(k.to_string(), (n + 1, v.to_string())).is_some() {
                return Err(bad(format!("line {}: duplicate key '{k}'", n + 1)));
            }
        }

        let mut take = |k: &str| scalars.remove(k).ok_or_else(|| bad(format!("missing key '{k}'")));
        let mut num = |k: &str| -> Result<f64, GameError> {
            let (line, v) = take(k)?;
            v.parse()
                .map_err(|_| bad(format!("line {line}: '{k}' is not a number: '{v}'")))
        };
        let (pi1, pi2, f1, f2, alpha) = (num("pi1")?, num("pi2")?, num("f1")?, num("f2")?, num("alpha")?);
        let (xi1_on, xi1_off, xi2_on, xi2_off) = (num("xi1_on")?, num("xi1_off")?, num("xi2_on")?, num("xi2_off")?);
        let gamma1 = num("gamma1")?;
        let beliefs = [
            [num("belief1_off")?, num("belief1_on")?],
            [num("belief2_off")?, num("belief2_on")?],
        ];
        let (cap_line, cap) = take("capacity")?;
        let capacity: Capacity = cap
            .parse()
            .map_err(|_| bad(format!("line {cap_line}: bad capacity '{cap}'")))?;
        let lone_grant = match scalars.remove("lone_grant") {
            None => true,
            Some((line, v)) => v
                .parse()
                .map_err(|_| bad(format!("line {line}: lone_grant must be true or false")))?,
        };
        let construction = scalars.remove("construction").map(|(_, v)| v);
        if let Some((k, (line, _))) = scalars.into_iter().next() {
            return Err(bad(format!("line {line}: unknown key '{k}'")));
        }

        let params = validate_params::<f64>(&RawParams {
            pi1,
            pi2,
            f1,
            f2,
            alpha,
            capacity,
        })?;
        let lobby = [LobbyRule::new(xi1_on, xi1_off), LobbyRule::new(xi2_on, xi2_off)];
        let mut off_path = [[false; 2]; 2];
        for i in Issue::BOTH {
            let post = bayes_access_belief(params.prior(i), &lobby[i.idx()]);
            for lobbied in [false, true] {
                off_path[i.idx()][usize::from(lobbied)] = post.get(lobbied).is_none();
            }
        }
        let profile = StrategyProfile {
            lobby,
            access: AccessRule { gamma1, lone_grant },
            policy,
            beliefs: BeliefSystem {
                access: beliefs,
                off_path,
            },
        };
        profile.check_well_formed(capacity)?;
        Ok(Self {
            params,
            profile,
            construction,
        })
    }
}
