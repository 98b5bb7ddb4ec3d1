//! Selection strategies over the Pareto frontier.
//!
//! Every strategy consumes the frontier of a [`CandidateSet`] and
//! produces a [`SelectionResult`]: per-member scores, the single chosen
//! id, and the tie set. Ties are always broken by ascending solution id.

mod knee;
mod scores;

pub use knee::{sample_weight_vectors, select_akp, select_ukp};
pub use scores::{score_ed, score_hv, score_pdu, score_wm};

use std::collections::BTreeMap;

use crate::dominance::{pareto_frontier, Frontier};
use crate::error::{input_err, Error, Result};
use crate::normalize::NormalizeTransform;
use crate::types::{CandidateSet, PopulationSet, SolutionPoint, UtopiaAssignment};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_WEIGHT_SAMPLES: u64 = 1000;

/// The available selection strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Angle-based knee point (two objectives only): widest reflex angle.
    Akp,
    /// Utility-based knee point: most wins over sampled weight vectors.
    Ukp,
    /// Hypervolume box against a reference point.
    Hv,
    /// Euclidean distance to a global utopia point.
    Ed,
    /// Weighted mean of the objectives.
    Wm,
    /// Population-discounted utility with a global utopia.
    Pdu,
    /// Population-discounted utility with calibrated per-sample utopias.
    Cpdu,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::Akp,
        Strategy::Ukp,
        Strategy::Hv,
        Strategy::Ed,
        Strategy::Wm,
        Strategy::Pdu,
        Strategy::Cpdu,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "akp" => Ok(Strategy::Akp),
            "ukp" => Ok(Strategy::Ukp),
            "hv" => Ok(Strategy::Hv),
            "ed" => Ok(Strategy::Ed),
            "wm" => Ok(Strategy::Wm),
            "pdu" => Ok(Strategy::Pdu),
            "cpdu" => Ok(Strategy::Cpdu),
            other => Err(input_err!(
                "unknown strategy {other:?} (expected one of akp, ukp, hv, ed, wm, pdu, cpdu)"
            )),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Akp => "akp",
            Strategy::Ukp => "ukp",
            Strategy::Hv => "hv",
            Strategy::Ed => "ed",
            Strategy::Wm => "wm",
            Strategy::Pdu => "pdu",
            Strategy::Cpdu => "cpdu",
        }
    }

    /// Whether a larger score is better for this strategy.
    pub fn maximizing(self) -> bool {
        match self {
            Strategy::Ed | Strategy::Pdu | Strategy::Cpdu => false,
            Strategy::Wm | Strategy::Hv | Strategy::Ukp | Strategy::Akp => true,
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Point-to-point distance used inside the population-discounted score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceKind {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl DistanceKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(DistanceKind::Euclidean),
            "manhattan" => Ok(DistanceKind::Manhattan),
            "chebyshev" => Ok(DistanceKind::Chebyshev),
            other => Err(input_err!(
                "unknown distance {other:?} (expected euclidean, manhattan, or chebyshev)"
            )),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Euclidean => "euclidean",
            DistanceKind::Manhattan => "manhattan",
            DistanceKind::Chebyshev => "chebyshev",
        }
    }

    pub fn between(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            DistanceKind::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            DistanceKind::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            DistanceKind::Chebyshev => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        }
    }
}

/// Everything a strategy run can be configured with. Unused fields are
/// ignored by strategies that do not need them.
#[derive(Debug, Clone)]
pub struct StrategyParams {
    /// Utopia point(s), native units. ED and PDU need a global vector,
    /// C-PDU a per-sample assignment.
    pub utopia: Option<UtopiaAssignment>,
    /// Hypervolume reference point, native units.
    pub reference: Option<Vec<f64>>,
    /// Per-objective weights for the weighted mean.
    pub weights: Option<Vec<f64>>,
    /// Number of weight vectors drawn by the utility knee.
    pub m_weight_samples: u64,
    /// PRNG seed; all randomness flows from here.
    pub seed: u64,
    /// Distance inside the population-discounted score.
    pub distance_kind: DistanceKind,
    /// Min-max normalize values (and utopia/reference/populations through
    /// the same transform, fitted on the full candidate set) first.
    pub normalize_first: bool,
}

impl Default for StrategyParams {
    fn default() -> Self {
        StrategyParams {
            utopia: None,
            reference: None,
            weights: None,
            m_weight_samples: DEFAULT_WEIGHT_SAMPLES,
            seed: DEFAULT_SEED,
            distance_kind: DistanceKind::default(),
            normalize_first: false,
        }
    }
}

impl StrategyParams {
    /// Stable `key=value` pairs describing the parameters actually used;
    /// vectors are comma-joined, the per-sample utopia is summarized by
    /// its row count.
    pub fn echo_pairs(&self) -> Vec<(String, String)> {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = Vec::new();
        match &self.utopia {
            Some(UtopiaAssignment::Global(v)) => out.push(("utopia".into(), join(v))),
            Some(UtopiaAssignment::PerSample(m)) => {
                out.push(("utopia".into(), format!("per-sample({} rows)", m.len())))
            }
            None => {}
        }
        if let Some(r) = &self.reference {
            out.push(("reference".into(), join(r)));
        }
        if let Some(w) = &self.weights {
            out.push(("weights".into(), join(w)));
        }
        out.push(("seed".into(), self.seed.to_string()));
        out.push((
            "weight_samples".into(),
            self.m_weight_samples.to_string(),
        ));
        out.push(("distance".into(), self.distance_kind.name().into()));
        out.push(("normalize".into(), self.normalize_first.to_string()));
        out
    }
}

/// Outcome of one strategy run: per-member scores (win counts for the
/// utility knee), the chosen id, and the full tie set (every id that
/// attained the winning score, ascending; length 1 means no tie).
#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub strategy: Strategy,
    pub chosen_id: String,
    pub scores: BTreeMap<String, f64>,
    pub tie_ids: Vec<String>,
    pub params_echo: StrategyParams,
}

/// Extract the Pareto frontier of `set` and run `strategy` over its
/// members. `populations` is only consulted by PDU/C-PDU.
pub fn select(
    strategy: Strategy,
    set: &CandidateSet,
    populations: Option<&PopulationSet>,
    params: &StrategyParams,
) -> Result<SelectionResult> {
    let frontier = pareto_frontier(set);
    select_on_frontier(strategy, set, &frontier, populations, params)
}

/// Run a strategy over an already-extracted frontier.
pub fn select_on_frontier(
    strategy: Strategy,
    set: &CandidateSet,
    frontier: &Frontier,
    populations: Option<&PopulationSet>,
    params: &StrategyParams,
) -> Result<SelectionResult> {
    if frontier.is_empty() {
        return Err(Error::EmptyFrontier(
            "no non-dominated candidates to select from".into(),
        ));
    }
    let scores = score_members(strategy, set, frontier.member_ids(), populations, params)?;
    let (chosen_id, tie_ids) = argbest(&scores, strategy.maximizing());
    Ok(SelectionResult {
        strategy,
        chosen_id,
        scores,
        tie_ids,
        params_echo: params.clone(),
    })
}

/// Score the listed members under one strategy. ED/WM/HV/PDU/C-PDU can
/// score any candidate (useful for diagnostics on dominated rows); the
/// two knee strategies are only meaningful on the frontier chain but
/// stay deterministic for any input list.
pub fn score_members(
    strategy: Strategy,
    set: &CandidateSet,
    ids: &[String],
    populations: Option<&PopulationSet>,
    params: &StrategyParams,
) -> Result<BTreeMap<String, f64>> {
    if ids.is_empty() {
        return Err(input_err!("no members to score"));
    }
    let members: Vec<&SolutionPoint> = ids
        .iter()
        .map(|id| {
            set.solution(id)
                .ok_or_else(|| input_err!("unknown solution id {id:?}"))
        })
        .collect::<Result<_>>()?;
    let k = set.k();
    let transform = if params.normalize_first {
        Some(NormalizeTransform::fit(set))
    } else {
        None
    };
    // native-orientation values after the optional rescale
    let value_of = |sol: &SolutionPoint| -> Vec<f64> {
        match &transform {
            Some(t) => t.apply(&sol.values).expect("arity checked at construction"),
            None => sol.values.clone(),
        }
    };
    let map_vec = |v: &[f64]| -> Result<Vec<f64>> {
        match &transform {
            Some(t) => t.apply(v),
            None => Ok(v.to_vec()),
        }
    };

    let mut out = BTreeMap::new();
    match strategy {
        Strategy::Ed => {
            let utopia = global_utopia(params, k, "ed")?;
            let utopia = map_vec(&utopia)?;
            for m in &members {
                out.insert(m.id.clone(), score_ed(&value_of(m), &utopia)?);
            }
        }
        Strategy::Wm => {
            let weights = params
                .weights
                .as_ref()
                .ok_or_else(|| input_err!("strategy wm requires per-objective weights"))?;
            for m in &members {
                out.insert(m.id.clone(), score_wm(&value_of(m), weights, set.specs())?);
            }
        }
        Strategy::Hv => {
            let reference = params
                .reference
                .as_ref()
                .ok_or_else(|| input_err!("strategy hv requires a reference point"))?;
            let reference = map_vec(reference)?;
            for m in &members {
                out.insert(
                    m.id.clone(),
                    score_hv(&value_of(m), &reference, set.specs())?,
                );
            }
        }
        Strategy::Pdu | Strategy::Cpdu => {
            let utopia = params.utopia.as_ref().ok_or_else(|| {
                input_err!("strategy {} requires a utopia assignment", strategy.name())
            })?;
            utopia.validate(k)?;
            match (strategy, utopia) {
                (Strategy::Pdu, UtopiaAssignment::PerSample(_)) => {
                    return Err(input_err!(
                        "strategy pdu takes a global utopia; use cpdu for per-sample utopias"
                    ))
                }
                (Strategy::Cpdu, UtopiaAssignment::Global(_)) => {
                    return Err(input_err!(
                        "strategy cpdu requires per-sample utopias; use pdu for a global one"
                    ))
                }
                _ => {}
            }
            let pops = populations.ok_or_else(|| {
                input_err!(
                    "strategy {} requires per-sample populations",
                    strategy.name()
                )
            })?;
            let utopia = transformed_utopia(utopia, &transform)?;
            for m in &members {
                let pop = pops.get(&m.id).ok_or_else(|| {
                    input_err!("no sample population for solution {:?}", m.id)
                })?;
                let pop = match &transform {
                    Some(t) => {
                        let mapped: Vec<(String, Vec<f64>)> = pop
                            .samples()
                            .iter()
                            .map(|(sid, v)| Ok((sid.clone(), t.apply(v)?)))
                            .collect::<Result<_>>()?;
                        std::borrow::Cow::Owned(crate::types::SamplePopulation::new(
                            m.id.clone(),
                            mapped,
                            k,
                        )?)
                    }
                    None => std::borrow::Cow::Borrowed(pop),
                };
                out.insert(
                    m.id.clone(),
                    score_pdu(pop.as_ref(), &utopia, params.distance_kind)?,
                );
            }
        }
        Strategy::Akp => {
            if k != 2 {
                return Err(Error::UnsupportedStrategy(format!(
                    "akp needs exactly 2 objectives, got {k}"
                )));
            }
            let pts: Vec<(String, [f64; 2])> = members
                .iter()
                .map(|m| {
                    let o = crate::types::orient_unchecked(&value_of(m), set.specs());
                    (m.id.clone(), [o[0], o[1]])
                })
                .collect();
            out = knee::akp_scores(&pts);
        }
        Strategy::Ukp => {
            let weights =
                sample_weight_vectors(k, params.m_weight_samples, params.seed)?;
            let pts: Vec<(String, Vec<f64>)> = members
                .iter()
                .map(|m| {
                    (
                        m.id.clone(),
                        crate::types::orient_unchecked(&value_of(m), set.specs()),
                    )
                })
                .collect();
            let wins = knee::ukp_wins(&pts, &weights, set.specs());
            out = wins
                .into_iter()
                .map(|(id, w)| (id, w as f64))
                .collect();
        }
    }
    Ok(out)
}

fn global_utopia(params: &StrategyParams, k: usize, strategy: &str) -> Result<Vec<f64>> {
    match &params.utopia {
        Some(UtopiaAssignment::Global(v)) => {
            UtopiaAssignment::Global(v.clone()).validate(k)?;
            Ok(v.clone())
        }
        Some(UtopiaAssignment::PerSample(_)) => Err(input_err!(
            "strategy {strategy} requires a single global utopia point, got a per-sample assignment"
        )),
        None => Err(input_err!("strategy {strategy} requires a utopia point")),
    }
}

fn transformed_utopia(
    ua: &UtopiaAssignment,
    transform: &Option<NormalizeTransform>,
) -> Result<UtopiaAssignment> {
    let Some(t) = transform else {
        return Ok(ua.clone());
    };
    Ok(match ua {
        UtopiaAssignment::Global(v) => UtopiaAssignment::Global(t.apply(v)?),
        UtopiaAssignment::PerSample(m) => UtopiaAssignment::PerSample(
            m.iter()
                .map(|(sid, v)| Ok((sid.clone(), t.apply(v)?)))
                .collect::<Result<_>>()?,
        ),
    })
}

/// Winner plus full tie set under exact score equality; ties break to
/// the lowest id (BTreeMap iteration is ascending by id).
fn argbest(scores: &BTreeMap<String, f64>, maximizing: bool) -> (String, Vec<String>) {
    let best = scores
        .values()
        .copied()
        .fold(if maximizing { f64::NEG_INFINITY } else { f64::INFINITY }, |acc, v| {
            if maximizing {
                acc.max(v)
            } else {
                acc.min(v)
            }
        });
    let tie_ids: Vec<String> = scores
        .iter()
        .filter(|(_, v)| **v == best)
        .map(|(id, _)| id.clone())
        .collect();
    (tie_ids[0].clone(), tie_ids)
}
