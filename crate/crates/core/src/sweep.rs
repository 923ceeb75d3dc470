//! Parameter grids evaluated point by point into CSV rows.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::{canonical_construction, classify_regimes_with_tol, construct};
use crate::error::GameError;
use crate::game::{validate_params, Capacity, GameParams, RawParams};
use crate::payoff::{exact_payoffs, simulate};
use crate::scalar::{fmt_num, round_sig};
use crate::theorems::{theorem1_compare_with_tol, theorem2_check_with_tol};
use crate::verify::verify_equilibrium;

/// `steps` evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.min];
        }
        let d = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    round_sig(self.min + d * k as f64, 12)
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    /// `MIN:MAX:STEPS` or a single value.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("bad number '{t}' in range '{s}'"));
        match parts.as_slice() {
            [v] => Ok(Range::new(num(v)?, num(v)?, 1)),
            [a, b, n] => {
                let steps: usize = n.parse().map_err(|_| format!("bad step count '{n}' in range '{s}'"))?;
                Ok(Range::new(num(a)?, num(b)?, steps))
            }
            _ => Err(format!("range '{s}' must be MIN:MAX:STEPS or a single value")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub pi1: Range,
    pub pi2: Range,
    pub f1: Range,
    pub f2: Range,
    pub alpha: Range,
    pub capacities: Vec<Capacity>,
    pub seed: u64,
    /// Adds simulated payoff columns when set.
    pub sim_trials: Option<u64>,
    pub tol: f64,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            pi1: Range::new(0.15, 0.45, 3),
            pi2: Range::new(0.15, 0.45, 3),
            f1: Range::new(0.05, 0.65, 4),
            f2: Range::new(0.05, 0.65, 4),
            alpha: Range::new(1.5, 3.0, 3),
            capacities: vec![Capacity::N1, Capacity::N2],
            seed: 0,
            sim_trials: None,
            tol: 1e-9,
        }
    }
}

impl SweepGrid {
    /// Checks step counts and that every grid value is a valid parameter.
    pub fn validate(&self) -> Result<(), GameError> {
        let ranges = [
            ("pi1", &self.pi1),
            ("pi2", &self.pi2),
            ("f1", &self.f1),
            ("f2", &self.f2),
            ("alpha", &self.alpha),
        ];
        for (name, r) in ranges {
            if r.steps == 0 {
                return Err(GameError::InvalidArgument(format!("{name}: steps must be at least 1")));
            }
        }
        if self.capacities.is_empty() {
            return Err(GameError::InvalidArgument("no capacity selected".into()));
        }
        if self.sim_trials == Some(0) {
            return Err(GameError::InvalidArgument("trials must be at least 1".into()));
        }
        // the corners bound every grid value
        for pi1 in [self.pi1.min, self.pi1.max] {
            for pi2 in [self.pi2.min, self.pi2.max] {
                for f1 in [self.f1.min, self.f1.max] {
                    for f2 in [self.f2.min, self.f2.max] {
                        for alpha in [self.alpha.min, self.alpha.max] {
                            validate_params::<f64>(&RawParams {
                                pi1,
                                pi2,
                                f1,
                                f2,
                                alpha,
                                capacity: Capacity::N2,
                            })?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Grid points in output order: π1, π2, f1, f2, α, capacity, last varying fastest.
    pub fn points(&self) -> Vec<RawParams> {
        let mut out = Vec::new();
        for pi1 in self.pi1.values() {
            for pi2 in self.pi2.values() {
                for f1 in self.f1.values() {
                    for f2 in self.f2.values() {
                        for alpha in self.alpha.values() {
                            for &capacity in &self.capacities {
                                out.push(RawParams {
                                    pi1,
                                    pi2,
                                    f1,
                                    f2,
                                    alpha,
                                    capacity,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimColumns {
    pub mean: [f64; 3],
    pub stderr: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub params: RawParams,
    pub lobbying_ratio: f64,
    pub pareto_lhs: f64,
    pub region: String,
    pub lemma1: String,
    pub lemma2: String,
    pub boundary: bool,
    pub construction: Option<String>,
    pub verified: Option<bool>,
    pub max_violation: Option<f64>,
    pub payoffs: Option<[f64; 3]>,
    pub theorem1_holds: Option<bool>,
    pub theorem2_verdict: Option<bool>,
    pub theorem2_consistent: Option<bool>,
    pub theorem2_applicable: Option<bool>,
    pub sim: Option<SimColumns>,
    /// Names of errors hit while filling the row.
    pub errors: Vec<String>,
}

pub const HEADER: [&str; 25] = [
    "pi1",
    "pi2",
    "f1",
    "f2",
    "alpha",
    "capacity",
    "lobbying_ratio",
    "pareto_lhs",
    "region",
    "lemma1_regime",
    "lemma2_regime",
    "boundary",
    "construction",
    "verified",
    "max_violation",
    "eu_gi1",
    "eu_gi2",
    "eu_dp",
    "theorem1_holds",
    "theorem2_condition",
    "theorem2_verdict",
    "theorem2_consistent",
    "theorem2_applicable",
    "theorem2_note",
    "error",
];

pub const SIM_HEADER: [&str; 6] = [
    "sim_eu_gi1",
    "sim_eu_gi2",
    "sim_eu_dp",
    "sim_se_gi1",
    "sim_se_gi2",
    "sim_se_dp",
];

impl SweepRow {
    /// One CSV record; `with_sim` pads rows that have no simulation.
    pub fn record(&self, with_sim: bool) -> Vec<String> {
        let opt_b = |b: Option<bool>| b.map_or(String::new(), |b| b.to_string());
        let opt_n = |n: Option<f64>| n.map_or(String::new(), fmt_num);
        let p = &self.params;
        let mut r = vec![
            fmt_num(p.pi1),
            fmt_num(p.pi2),
            fmt_num(p.f1),
            fmt_num(p.f2),
            fmt_num(p.alpha),
            p.capacity.to_string(),
            fmt_num(self.lobbying_ratio),
            fmt_num(self.pareto_lhs),
            self.region.clone(),
            self.lemma1.clone(),
            self.lemma2.clone(),
            self.boundary.to_string(),
            self.construction.clone().unwrap_or_default(),
            opt_b(self.verified),
            opt_n(self.max_violation),
        ];
        match self.payoffs {
            Some(eu) => r.extend(eu.map(fmt_num)),
            None => r.extend([String::new(), String::new(), String::new()]),
        }
        r.push(opt_b(self.theorem1_holds));
        r.push((self.pareto_lhs <= 1.0).to_string());
        r.push(opt_b(self.theorem2_verdict));
        r.push(opt_b(self.theorem2_consistent));
        r.push(opt_b(self.theorem2_applicable));
        r.push(match self.theorem2_applicable {
            Some(false) => "not-applicable:C>=1".to_string(),
            _ => String::new(),
        });
        r.push(self.errors.join(";"));
        match &self.sim {
            Some(sim) if with_sim => {
                r.extend(sim.mean.map(fmt_num));
                r.extend(sim.stderr.map(fmt_num));
            }
            None if with_sim => r.extend(std::iter::repeat_n(String::new(), SIM_HEADER.len())),
            _ => {}
        }
        r
    }
}

/// Evaluates one grid point. Errors end up in the row, never abort the sweep.
pub fn evaluate_point(raw: &RawParams, tol: f64, sim: Option<(u64, u64)>) -> Result<SweepRow, GameError> {
    let params: GameParams<f64> = validate_params(raw)?;
    let regimes = classify_regimes_with_tol(&params, &tol);
    let mut row = SweepRow {
        params: *raw,
        lobbying_ratio: regimes.lobbying_ratio,
        pareto_lhs: regimes.pareto_lhs,
        region: regimes.region.to_string(),
        lemma1: regimes.lemma1.to_string(),
        lemma2: regimes.lemma2.to_string(),
        boundary: regimes.is_boundary(),
        construction: None,
        verified: None,
        max_violation: None,
        payoffs: None,
        theorem1_holds: None,
        theorem2_verdict: None,
        theorem2_consistent: None,
        theorem2_applicable: None,
        sim: None,
        errors: Vec::new(),
    };

    match canonical_construction(&params).and_then(|c| construct(&params, c).map(|p| (c, p))) {
        Ok((c, profile)) => {
            row.construction = Some(c.name().to_string());
            match verify_equilibrium(&profile, &params, &tol) {
                Ok(rep) => {
                    row.verified = Some(rep.passed());
                    row.max_violation = Some(rep.max_violation);
                }
                Err(e) => row.errors.push(e.name().to_string()),
            }
            match exact_payoffs(&profile, &params) {
                Ok(eu) => row.payoffs = Some(eu.components()),
                Err(e) => row.errors.push(e.name().to_string()),
            }
            if let Some((trials, seed)) = sim {
                match simulate(&profile, &params, trials, seed) {
                    Ok(est) => {
                        row.sim = Some(SimColumns {
                            mean: est.mean.components(),
                            stderr: est.stderr.map_or([f64::NAN; 3], |s| s.components()),
                        })
                    }
                    Err(e) => row.errors.push(e.name().to_string()),
                }
            }
        }
        Err(e) => row.errors.push(e.name().to_string()),
    }
    match theorem1_compare_with_tol(&params, &tol) {
        Ok(rep) => row.theorem1_holds = Some(rep.holds()),
        Err(e) => row.errors.push(format!("theorem1:{}", e.name())),
    }
    match theorem2_check_with_tol(&params, &tol) {
        Ok(rep) => {
            row.theorem2_verdict = Some(rep.pareto_verdict);
            row.theorem2_consistent = Some(rep.consistent);
            row.theorem2_applicable = Some(rep.applicable);
        }
        Err(e) => row.errors.push(format!("theorem2:{}", e.name())),
    }
    Ok(row)
}

pub fn run_sweep(grid: &SweepGrid) -> Result<Vec<SweepRow>, GameError> {
    grid.validate()?;
    let points = grid.points();
    points
        .par_iter()
        .enumerate()
        .map(|(k, raw)| {
            let sim = grid.sim_trials.map(|t| (t, grid.seed.wrapping_add(k as u64)));
            evaluate_point(raw, grid.tol, sim)
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], with_sim: bool, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = HEADER.to_vec();
    if with_sim {
        header.extend(SIM_HEADER);
    }
    w.write_record(&header)?;
    for r in rows {
        w.write_record(r.record(with_sim))?;
    }
    w.flush()?;
    Ok(())
}
