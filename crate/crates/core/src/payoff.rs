//! Ex-ante payoffs: exact enumeration and a seeded Monte Carlo rollout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::GameError;
use crate::game::{
    dp_utility, draw_state, Access, Capacity, GameParams, History, Issue, PayoffVector, PolicyVector, StateVector,
    StrategyProfile,
};
use crate::scalar::Scalar;
use crate::tree::{access_outcomes, for_each_leaf};

/// Identifier of the random stream used by [`simulate`]. Trial `k` draws from
/// ChaCha8 seeded with `seed` via `seed_from_u64`, stream `k`.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64/stream=trial";

const CHUNK: u64 = 8192;

/// Exact expectation of every player's payoff over the whole game tree.
pub fn exact_payoffs<S: Scalar>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
) -> Result<PayoffVector<S>, GameError> {
    profile.check_well_formed(params.capacity())?;
    let mut eu = [S::zero(), S::zero(), S::zero()];
    for_each_leaf(profile, params, None, |p, theta, h| {
        let rho = profile.policy.get(&h)?;
        let mut dp = S::zero();
        for i in Issue::BOTH {
            let r = rho[i.idx()].clone();
            let paid = if h.lobby[i.idx()] {
                params.cost(i).clone()
            } else {
                S::zero()
            };
            eu[i.idx()] = eu[i.idx()].clone() + p.clone() * (r.clone() - paid);
            // utility is additive across issues, so only the marginal P(p_i = 1) matters
            let matched = if theta.get(i) { r } else { S::one() - r };
            dp = dp + params.weight(i) * matched;
        }
        eu[2] = eu[2].clone() + p * dp;
        Ok(())
    })?;
    Ok(PayoffVector::from_components(eu))
}

/// One realised play of the game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayTrace {
    pub theta: StateVector,
    pub lobby: [bool; 2],
    /// Group granted access, if any.
    pub access: Option<Issue>,
    pub revealed: [Option<bool>; 2],
    pub policy: PolicyVector,
    /// `(p1 - λ1 f1, p2 - λ2 f2, U)`
    pub payoffs: PayoffVector<f64>,
}

fn draw_policy<R: Rng + ?Sized>(rho: &[f64; 2], capacity: Capacity, rng: &mut R) -> PolicyVector {
    match capacity {
        Capacity::N2 => PolicyVector::new(rng.random::<f64>() < rho[0], rng.random::<f64>() < rho[1]),
        Capacity::N1 => {
            let u = rng.random::<f64>();
            if u < rho[0] {
                PolicyVector::reform(Issue::One)
            } else if u < rho[0] + rho[1] {
                PolicyVector::reform(Issue::Two)
            } else {
                PolicyVector::STATUS_QUO
            }
        }
    }
}

/// Plays the game once. The policy draw sees only the history.
pub fn single_play<S: Scalar, R: Rng + ?Sized>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
    rng: &mut R,
) -> Result<PlayTrace, GameError> {
    let theta = draw_state(params, rng);
    let lobby = Issue::BOTH.map(|i| rng.random::<f64>() < profile.lobby_rule(i).prob(theta.get(i)).to_f64_lossy());

    let u = rng.random::<f64>();
    let mut acc = 0.0;
    let mut access = None;
    for (granted, p) in access_outcomes(profile, lobby) {
        acc += p.to_f64_lossy();
        access = granted;
        if u < acc {
            break;
        }
    }
    let history = History::new(
        lobby,
        match access {
            None => Access::None,
            Some(to) => Access::Granted {
                to,
                revealed: theta.get(to),
            },
        },
    );
    let rho = profile.policy.get(&history)?;
    let rho = [rho[0].to_f64_lossy(), rho[1].to_f64_lossy()];
    let policy = draw_policy(&rho, params.capacity(), rng);

    let f = |i: Issue| {
        let paid = if lobby[i.idx()] {
            params.cost(i).to_f64_lossy()
        } else {
            0.0
        };
        f64::from(u8::from(policy.get(i))) - paid
    };
    let mut revealed = [None, None];
    if let Some(to) = access {
        revealed[to.idx()] = Some(theta.get(to));
    }
    Ok(PlayTrace {
        theta,
        lobby,
        access,
        revealed,
        policy,
        payoffs: PayoffVector::new(
            f(Issue::One),
            f(Issue::Two),
            dp_utility(&policy, &theta, params).to_f64_lossy(),
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffEstimate {
    pub mean: PayoffVector<f64>,
    /// Sample standard deviation over `sqrt(trials)`; absent for a single trial.
    pub stderr: Option<PayoffVector<f64>>,
    pub trials: u64,
    pub seed: u64,
    pub rng: String,
}

/// Rng for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Averages `trials` independent plays. Draws depend only on `(seed, trial
/// index)` and chunk sums are combined in a fixed order, so the result does
/// not depend on the thread count.
pub fn simulate<S: Scalar>(
    profile: &StrategyProfile<S>,
    params: &GameParams<S>,
    trials: u64,
    seed: u64,
) -> Result<PayoffEstimate, GameError> {
    if trials == 0 {
        return Err(GameError::InvalidArgument("trials must be at least 1".into()));
    }
    profile.check_well_formed(params.capacity())?;
    let chunks = trials.div_ceil(CHUNK);
    let sums: Vec<([f64; 3], [f64; 3])> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sum = [0.0; 3];
            let mut sq = [0.0; 3];
            for k in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let trace = single_play(profile, params, &mut trial_rng(seed, k))?;
                for (j, v) in trace.payoffs.components().into_iter().enumerate() {
                    sum[j] += v;
                    sq[j] += v * v;
                }
            }
            Ok((sum, sq))
        })
        .collect::<Result<_, GameError>>()?;

    let mut sum = [0.0; 3];
    let mut sq = [0.0; 3];
    for (s, q) in &sums {
        for j in 0..3 {
            sum[j] += s[j];
            sq[j] += q[j];
        }
    }
    let n = trials as f64;
    let mean = sum.map(|s| s / n);
    let stderr = (trials > 1).then(|| {
        let se: Vec<f64> = (0..3)
            .map(|j| {
                let var = ((sq[j] - n * mean[j] * mean[j]) / (n - 1.0)).max(0.0);
                (var / n).sqrt()
            })
            .collect();
        PayoffVector::new(se[0], se[1], se[2])
    });
    Ok(PayoffEstimate {
        mean: PayoffVector::from_components(mean),
        stderr,
        trials,
        seed,
        rng: RNG_ALGORITHM.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{lemma1_equilibrium, lemma2_equilibrium, lemma2_silent_second};
    use crate::game::{validate_params, AccessRule, BeliefSystem, LobbyRule, PolicyRule, RawParams};
    use num_rational::BigRational;
    use proptest::prelude::*;

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

    fn silent_profile(p: &GameParams<f64>) -> StrategyProfile<f64> {
        let lobby = [LobbyRule::silent(), LobbyRule::silent()];
        let mut policy = PolicyRule::new();
        for h in History::all() {
            policy.set(h, [0.0, 0.0]);
        }
        StrategyProfile {
            beliefs: BeliefSystem::from_bayes(p, &lobby, [[0.0, 1.0], [0.0, 1.0]]),
            lobby,
            access: AccessRule::new(0.5),
            policy,
        }
    }

    fn close(a: &PayoffVector<f64>, b: [f64; 3], tol: f64) -> bool {
        a.components().iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn constrained_fixture_payoffs() {
        let p = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N1);
        let eu = exact_payoffs(&lemma2_equilibrium(&p).unwrap(), &p).unwrap();
        assert!(close(&eu, [0.38, 0.22, 2.84], 1e-12), "{eu:?}");
    }

    #[test]
    fn over_lobbying_fixture_payoffs() {
        let p = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N2);
        let eu = exact_payoffs(&lemma1_equilibrium(&p).unwrap(), &p).unwrap();
        assert!((eu.eu_dp - (3.0 - 0.64 / 3.0)).abs() < 1e-12);
        assert!((eu.eu_gi1 - 0.38).abs() < 1e-12);
        // π2 - α π1 (2π2 - f1)/(2α - 1)
        assert!((eu.eu_gi2 - (0.4 - 2.0 * 0.4 * 0.75 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn exact_rational_fixture() {
        let r = BigRational::ratio;
        let p = GameParams::new(r(2, 5), r(2, 5), r(1, 20), r(1, 20), r(2, 1), Capacity::N2).unwrap();
        let eu = exact_payoffs(&lemma1_equilibrium(&p).unwrap(), &p).unwrap();
        assert_eq!(eu.eu_dp, r(3, 1) - r(16, 75));
    }

    #[test]
    fn silent_payoffs() {
        let p = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N2);
        let eu = exact_payoffs(&silent_profile(&p), &p).unwrap();
        assert!(close(&eu, [0.0, 0.0, 1.8], 1e-12));
    }

    #[test]
    fn truthful_play_follows_state() {
        let p = params(0.4, 0.4, 0.4, 0.4, 2.0, Capacity::N2);
        let prof = lemma1_equilibrium(&p).unwrap();
        let mut seen = false;
        for k in 0..200 {
            let t = single_play(&prof, &p, &mut trial_rng(1, k)).unwrap();
            assert_eq!(t.lobby, t.theta.0);
            if t.theta == StateVector::new(true, false) {
                seen = true;
                assert_eq!(t.access, Some(Issue::One));
                assert_eq!(t.revealed, [Some(true), None]);
                assert_eq!(t.policy, PolicyVector::new(true, false));
            }
        }
        assert!(seen);
    }

    #[test]
    fn silent_play_is_status_quo() {
        let p = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N2);
        let prof = silent_profile(&p);
        for k in 0..50 {
            let t = single_play(&prof, &p, &mut trial_rng(9, k)).unwrap();
            assert_eq!(t.lobby, [false, false]);
            assert_eq!(t.access, None);
            assert_eq!(t.policy, PolicyVector::STATUS_QUO);
        }
    }

    #[test]
    fn silent_second_gives_issue_one_priority() {
        let p = params(0.45, 0.3, 0.2, 0.6, 1.5, Capacity::N1);
        let prof = lemma2_silent_second(&p).unwrap();
        let mut seen = false;
        for k in 0..400 {
            let t = single_play(&prof, &p, &mut trial_rng(5, k)).unwrap();
            assert!(!t.lobby[1]);
            if t.theta == StateVector::new(true, true) {
                seen = true;
                assert_eq!(t.lobby, [true, false]);
                assert_eq!(t.policy, PolicyVector::new(true, false));
            }
        }
        assert!(seen);
    }

    #[test]
    fn single_trial_has_no_stderr() {
        let p = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N2);
        let prof = lemma1_equilibrium(&p).unwrap();
        let est = simulate(&prof, &p, 1, 77).unwrap();
        let trace = single_play(&prof, &p, &mut trial_rng(77, 0)).unwrap();
        assert_eq!(est.mean, trace.payoffs);
        assert!(est.stderr.is_none());
        assert!(matches!(simulate(&prof, &p, 0, 77), Err(GameError::InvalidArgument(_))));
    }

    #[test]
    fn simulation_is_deterministic_and_close() {
        let p = params(0.4, 0.4, 0.05, 0.05, 2.0, Capacity::N2);
        let prof = lemma1_equilibrium(&p).unwrap();
        let a = simulate(&prof, &p, 50_000, 11).unwrap();
        let b = simulate(&prof, &p, 50_000, 11).unwrap();
        assert_eq!(a, b);
        let exact = exact_payoffs(&prof, &p).unwrap();
        let se = a.stderr.clone().unwrap();
        for ((m, e), s) in a.mean.components().iter().zip(exact.components()).zip(se.components()) {
            assert!((m - e).abs() <= 5.0 * s, "{m} vs {e} (se {s})");
        }
        let c = simulate(&prof, &p, 50_000, 12).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    proptest! {
        #[test]
        fn payoff_bounds_on_arbitrary_profiles(
            pi1 in 0.01f64..0.49, pi2 in 0.01f64..0.49,
            f1 in 0.01f64..0.99, f2 in 0.01f64..0.99,
            alpha in 1.01f64..5.0, n1 in any::<bool>(),
            xs in proptest::collection::vec(0.0f64..=1.0, 7),
            rhos in proptest::collection::vec(0.0f64..=1.0, 22),
        ) {
            let cap = if n1 { Capacity::N1 } else { Capacity::N2 };
            let p = params(pi1, pi2, f1, f2, alpha, cap);
            let lobby = [LobbyRule::new(xs[0], xs[1]), LobbyRule::new(xs[2], xs[3])];
            let mut policy = PolicyRule::new();
            for (k, h) in History::all().into_iter().enumerate() {
                let (a, b) = (rhos[2 * k], rhos[2 * k + 1]);
                let rho = if n1 { [a * (1.0 - b), (1.0 - a) * b] } else { [a, b] };
                policy.set(h, rho);
            }
            let prof = StrategyProfile {
                beliefs: BeliefSystem::from_bayes(&p, &lobby, [[xs[5], xs[6]], [xs[6], xs[5]]]),
                lobby,
                access: AccessRule::new(xs[4]),
                policy,
            };
            let eu = exact_payoffs(&prof, &p).unwrap();
            prop_assert!(eu.eu_gi1 >= -f1 - 1e-12 && eu.eu_gi1 <= 1.0 + 1e-12);
            prop_assert!(eu.eu_gi2 >= -f2 - 1e-12 && eu.eu_gi2 <= 1.0 + 1e-12);
            prop_assert!(eu.eu_dp >= -1e-12 && eu.eu_dp <= alpha + 1.0 + 1e-12);
        }
    }
}
