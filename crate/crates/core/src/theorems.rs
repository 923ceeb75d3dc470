//! Comparative statics between the constrained (N1) and unconstrained (N2)
//! games: belief precision after lobbying, and when moving to N1 is a Pareto
//! improvement.

use serde::Serialize;

use crate::equilibrium::{
    classify_regimes_with_tol, lemma1_equilibrium, lemma2_equilibrium, Lemma1Regime, Lemma2Regime, RegimeReport, Region,
};
use crate::error::GameError;
use crate::game::{bayes_access_belief, Capacity, GameParams, Issue, PayoffVector, StrategyProfile};
use crate::payoff::exact_payoffs;
use crate::scalar::Scalar;

/// Precision `|B - 1/2|` of the post-lobbying belief on one issue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IssuePrecision<S> {
    /// `(λ_i, B_i^A(λ_i), |B_i^A(λ_i) - 1/2|)` for every on-path λ_i.
    pub on_path: Vec<(bool, S, S)>,
    /// Smallest precision over on-path outcomes.
    pub min: S,
}

impl<S: Scalar> IssuePrecision<S> {
    fn from_profile(profile: &StrategyProfile<S>, params: &GameParams<S>, issue: Issue) -> Self {
        let post = bayes_access_belief(params.prior(issue), profile.lobby_rule(issue));
        let mut on_path = Vec::new();
        for lobbied in [false, true] {
            if let Some(b) = post.get(lobbied) {
                let prec = (b.clone() - S::half()).abs();
                on_path.push((lobbied, b.clone(), prec));
            }
        }
        let min = on_path.iter().map(|(_, _, p)| p.clone()).fold(S::half(), S::min_of);
        Self { on_path, min }
    }

    fn belief(&self, lobbied: bool) -> Option<&S> {
        self.on_path.iter().find(|(l, _, _)| *l == lobbied).map(|(_, b, _)| b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeliefPrecisionReport<S> {
    pub region: Region,
    /// Equilibria compared: `(N2 construction, N1 construction)`.
    pub selection: (String, String),
    /// Indexed `[issue][0 = N1, 1 = N2]`.
    pub precision: [[IssuePrecision<S>; 2]; 2],
    /// Each displayed comparison of the matching region, with its verdict.
    pub verdicts: Vec<(String, bool)>,
}

impl<S: Scalar> BeliefPrecisionReport<S> {
    pub fn get(&self, issue: Issue, capacity: Capacity) -> &IssuePrecision<S> {
        let n = match capacity {
            Capacity::N1 => 0,
            Capacity::N2 => 1,
        };
        &self.precision[issue.idx()][n]
    }

    pub fn holds(&self) -> bool {
        self.verdicts.iter().all(|(_, ok)| *ok)
    }
}

fn selection_name(lemma1: Lemma1Regime, lemma2: Lemma2Regime) -> (String, String) {
    let n2 = match lemma1 {
        Lemma1Regime::Truthful => "lemma1-truthful",
        _ => "lemma1-over-lobbying",
    };
    let n1 = match lemma2 {
        Lemma2Regime::SilentSecond => "lemma2-silent-second (group 1 truthful)",
        _ => "lemma2-truthful",
    };
    (n2.to_string(), n1.to_string())
}

pub fn theorem1_compare<S: Scalar>(params: &GameParams<S>) -> Result<BeliefPrecisionReport<S>, GameError> {
    theorem1_compare_with_tol(params, &S::default_tolerance())
}

pub fn theorem1_compare_with_tol<S: Scalar>(
    params: &GameParams<S>,
    tol: &S,
) -> Result<BeliefPrecisionReport<S>, GameError> {
    let regimes = classify_regimes_with_tol(params, tol);
    if regimes.lemma1 == Lemma1Regime::Boundary || regimes.lemma2 == Lemma2Regime::Boundary || regimes.region_boundary {
        return Err(GameError::Boundary(format!(
            "parameters sit on a region edge (C = {:?}, f2 = {:?})",
            regimes.lobbying_ratio,
            params.cost(Issue::Two)
        )));
    }
    let n2 = lemma1_equilibrium(&params.with_capacity(Capacity::N2))?;
    let n1 = lemma2_equilibrium(&params.with_capacity(Capacity::N1))?;
    let precision = Issue::BOTH.map(|i| {
        [
            IssuePrecision::from_profile(&n1, params, i),
            IssuePrecision::from_profile(&n2, params, i),
        ]
    });

    let half = S::half();
    let eq_half = |p: &IssuePrecision<S>| p.min.approx_eq(&half, tol);
    let (p1, p2) = (&precision[0], &precision[1]);
    let verdicts = match regimes.region {
        Region::R1 => vec![
            ("|B1(N2) - 1/2| = 1/2".to_string(), eq_half(&p1[1])),
            ("|B1(N1) - 1/2| = 1/2".to_string(), eq_half(&p1[0])),
            ("|B2(N2) - 1/2| = 1/2".to_string(), eq_half(&p2[1])),
            (
                "|B2(N2) - 1/2| > |B2(N1) - 1/2|".to_string(),
                p2[1].min > p2[0].min.clone() + tol.clone(),
            ),
        ],
        Region::R2 => vec![
            ("|B1(N2) - 1/2| = 1/2".to_string(), eq_half(&p1[1])),
            ("|B1(N1) - 1/2| = 1/2".to_string(), eq_half(&p1[0])),
            ("|B2(N2) - 1/2| = 1/2".to_string(), eq_half(&p2[1])),
            ("|B2(N1) - 1/2| = 1/2".to_string(), eq_half(&p2[0])),
        ],
        Region::R3 => {
            let mut v = Vec::new();
            for (i, p) in Issue::BOTH.iter().zip(&precision) {
                v.push((
                    format!("|B{i}(N2) - 1/2| <= 1/2"),
                    p[1].min <= half.clone() + tol.clone(),
                ));
                v.push((format!("|B{i}(N1) - 1/2| = 1/2"), eq_half(&p[0])));
                let b = p[1].belief(true);
                v.push((
                    format!("B{i}(N2) after lobbying in [1/2, 1)"),
                    b.is_some_and(|b| *b >= half.clone() - tol.clone() && *b < S::one()),
                ));
            }
            v.push((
                "strict for some issue".to_string(),
                precision.iter().any(|p| p[1].min < half.clone() - tol.clone()),
            ));
            v
        }
    };

    Ok(BeliefPrecisionReport {
        region: regimes.region,
        selection: selection_name(regimes.lemma1, regimes.lemma2),
        precision,
        verdicts,
    })
}

/// `EU_2` in the over-lobbying game against the two printed closed forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eu2Reconciliation<S> {
    pub enumerated: S,
    /// `π2 (1 - π1 - f2)`
    pub short_form: S,
    /// `π2 {1 - π1 [α(2π2 - f1) - (π2/π1)(2α - 1) f2] / (π2 (2α - 1)) - f2}`
    pub expanded_form: S,
    pub short_matches: bool,
    pub expanded_matches: bool,
}

impl<S: Scalar> Eu2Reconciliation<S> {
    fn new(params: &GameParams<S>, enumerated: S, tol: &S) -> Self {
        let (p1, p2) = (params.prior(Issue::One).clone(), params.prior(Issue::Two).clone());
        let (f1, f2) = (params.cost(Issue::One).clone(), params.cost(Issue::Two).clone());
        let a = params.alpha().clone();
        let k = S::two() * a.clone() - S::one();
        let short_form = p2.clone() * (S::one() - p1.clone() - f2.clone());
        let bracket =
            (a * (S::two() * p2.clone() - f1) - p2.clone() / p1.clone() * k.clone() * f2.clone()) / (p2.clone() * k);
        let expanded_form = p2 * (S::one() - p1 * bracket - f2);
        Self {
            short_matches: short_form.approx_eq(&enumerated, tol),
            expanded_matches: expanded_form.approx_eq(&enumerated, tol),
            enumerated,
            short_form,
            expanded_form,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoReport<S> {
    pub condition_lhs: S,
    pub condition_holds: bool,
    /// `C = (π1 f1 + π2 f2) / (π1 π2)`
    pub lobbying_ratio: S,
    /// `C < 1`: the over-lobbying comparison the condition is about.
    pub applicable: bool,
    /// `condition_lhs` within tolerance of 1.
    pub boundary: bool,
    pub payoffs_n1: PayoffVector<S>,
    pub payoffs_n2: PayoffVector<S>,
    /// Every player weakly better off under N1, at least one strictly.
    pub pareto_verdict: bool,
    pub consistent: bool,
    pub eu2_reconciliation: Option<Eu2Reconciliation<S>>,
}

pub fn theorem2_check<S: Scalar>(params: &GameParams<S>) -> Result<ParetoReport<S>, GameError> {
    theorem2_check_with_tol(params, &S::default_tolerance())
}

pub fn theorem2_check_with_tol<S: Scalar>(params: &GameParams<S>, tol: &S) -> Result<ParetoReport<S>, GameError> {
    let regimes: RegimeReport<S> = classify_regimes_with_tol(params, tol);
    if regimes.lemma1 == Lemma1Regime::Boundary || regimes.lemma2 == Lemma2Regime::Boundary {
        return Err(GameError::Boundary(format!(
            "no canonical equilibrium on a regime edge (C = {:?})",
            regimes.lobbying_ratio
        )));
    }
    let p2 = params.with_capacity(Capacity::N2);
    let p1 = params.with_capacity(Capacity::N1);
    let payoffs_n2 = exact_payoffs(&lemma1_equilibrium(&p2)?, &p2)?;
    let payoffs_n1 = exact_payoffs(&lemma2_equilibrium(&p1)?, &p1)?;

    let (a, b) = (payoffs_n1.components(), payoffs_n2.components());
    let weakly = a.iter().zip(&b).all(|(x, y)| *x >= y.clone() - tol.clone());
    let strictly = a.iter().zip(&b).any(|(x, y)| *x > y.clone() + tol.clone());
    let pareto_verdict = weakly && strictly;
    let applicable = regimes.lemma1 == Lemma1Regime::OverLobbying;
    let eu2_reconciliation = applicable.then(|| Eu2Reconciliation::new(params, payoffs_n2.eu_gi2.clone(), tol));

    Ok(ParetoReport {
        consistent: pareto_verdict == regimes.pareto_condition,
        condition_lhs: regimes.pareto_lhs,
        condition_holds: regimes.pareto_condition,
        lobbying_ratio: regimes.lobbying_ratio,
        applicable,
        boundary: regimes.pareto_boundary,
        payoffs_n1,
        payoffs_n2,
        pareto_verdict,
        eu2_reconciliation,
    })
}
