use lobbygame::equilibrium::{classify_regimes, lemma1_equilibrium, lemma2_equilibrium, Lemma1Regime, Region};
use lobbygame::payoff::{exact_payoffs, simulate};
use lobbygame::sampling::{sample_in, uniform_params, Target};
use lobbygame::theorems::{theorem1_compare, theorem2_check};
use lobbygame::{Capacity, GameParams, Issue};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn draws(target: Target, n: usize, seed: u64) -> Vec<GameParams<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| sample_in(&mut rng, target, 1_000_000).unwrap())
        .collect()
}

fn parts(p: &GameParams<f64>) -> (f64, f64, f64, f64, f64) {
    (
        *p.prior(Issue::One),
        *p.prior(Issue::Two),
        *p.cost(Issue::One),
        *p.cost(Issue::Two),
        *p.alpha(),
    )
}

#[test]
fn constrained_truthful_closed_forms() {
    for p in draws(Target::Lemma2Truthful, 300, 1) {
        let (pi1, pi2, f1, f2, a) = parts(&p);
        let eu = exact_payoffs(&lemma2_equilibrium(&p).unwrap(), &p).unwrap();
        assert!((eu.eu_gi1 - pi1 * (1.0 - f1)).abs() < 1e-9);
        assert!((eu.eu_gi2 - pi2 * (1.0 - pi1 - f2)).abs() < 1e-9);
        assert!((eu.eu_dp - (a + 1.0 - pi1 * pi2)).abs() < 1e-9);
    }
}

#[test]
fn over_lobbying_closed_forms() {
    for p in draws(Target::Lemma1OverLobbying, 300, 2) {
        let (pi1, pi2, f1, _, a) = parts(&p);
        let eu = exact_payoffs(&lemma1_equilibrium(&p).unwrap(), &p).unwrap();
        assert!((eu.eu_gi1 - pi1 * (1.0 - f1)).abs() < 1e-9);
        assert!((eu.eu_dp - (a + 1.0 - 2.0 * pi1 * pi2 * a / (2.0 * a - 1.0))).abs() < 1e-9);
        assert!((eu.eu_gi2 - (pi2 - a * pi1 * (2.0 * pi2 - f1) / (2.0 * a - 1.0))).abs() < 1e-9);
    }
}

#[test]
fn unconstrained_truthful_group_one() {
    for p in draws(Target::Lemma1Truthful, 300, 3) {
        let (pi1, _, f1, _, _) = parts(&p);
        let eu = exact_payoffs(&lemma1_equilibrium(&p).unwrap(), &p).unwrap();
        assert!((eu.eu_gi1 - pi1 * (1.0 - f1)).abs() < 1e-9);
    }
}

#[test]
fn region_partition_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10_000 {
        let p = uniform_params(&mut rng, Capacity::N2);
        let r = classify_regimes(&p);
        if r.is_boundary() {
            continue;
        }
        assert_eq!(r.region == Region::R3, r.lobbying_ratio < 1.0);
        if r.region == Region::R1 {
            assert!(r.lobbying_ratio > 1.0);
        }
        if r.lemma1 == Lemma1Regime::OverLobbying {
            assert!(*p.cost(Issue::Two) < 1.0 - *p.prior(Issue::One));
        }
    }
}

#[test]
fn belief_precision_by_region() {
    for (k, g) in [Region::R1, Region::R2, Region::R3].into_iter().enumerate() {
        for p in draws(Target::Region(g), 300, 10 + k as u64) {
            let rep = theorem1_compare(&p).unwrap();
            assert_eq!(rep.region, g);
            assert!(rep.holds(), "{g} at {:?}: {:?}", p.to_raw(), rep.verdicts);
        }
    }
}

#[test]
fn pareto_iff_below_unit_ratio() {
    let mut hits = [0usize; 2];
    for p in draws(Target::Lemma1OverLobbying, 500, 20) {
        let rep = theorem2_check(&p).unwrap();
        assert!(rep.applicable);
        assert!(rep.consistent, "{:?}", p.to_raw());
        assert!((rep.payoffs_n1.eu_gi1 - rep.payoffs_n2.eu_gi1).abs() < 1e-9);
        assert!(rep.payoffs_n1.eu_dp > rep.payoffs_n2.eu_dp);
        hits[usize::from(rep.condition_holds)] += 1;
    }
    // both sides of the condition get exercised
    assert!(hits[0] > 0 && hits[1] > 0, "{hits:?}");
}

#[test]
fn simulation_tracks_enumeration() {
    let p = draws(Target::Lemma2Truthful, 1, 30).remove(0);
    let prof = lemma2_equilibrium(&p).unwrap();
    let est = simulate(&prof, &p, 100_000, 5).unwrap();
    let exact = exact_payoffs(&prof, &p).unwrap();
    let se = est.stderr.unwrap();
    for ((m, e), s) in est
        .mean
        .components()
        .iter()
        .zip(exact.components())
        .zip(se.components())
    {
        assert!((m - e).abs() <= 5.0 * s);
    }
}
