//! Per-user generalized utopia points from raw interaction data.
//!
//! The accuracy component of each user's utopia vector is a constant
//! (default 1.0). The long-tail component is derived from popularity:
//! items are ranked by transaction count, a tail anchor and a head
//! anchor are aggregated from the T least/most consumed items, and each
//! user's profile popularity is mapped linearly between the anchors —
//! 1 for a pure tail profile, 0 for a pure head profile.

use std::collections::BTreeMap;

use crate::error::{input_err, Error, Result};
use crate::types::UtopiaAssignment;

/// Raw (user_id, item_id) transaction records; repeat interactions count
/// through their multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionLog {
    records: Vec<(String, String)>,
}

impl InteractionLog {
    pub fn new(records: Vec<(String, String)>) -> Result<Self> {
        if records.is_empty() {
            return Err(input_err!("interaction log is empty"));
        }
        for (u, i) in &records {
            if u.is_empty() || i.is_empty() {
                return Err(input_err!("interaction record with empty user or item id"));
            }
        }
        Ok(InteractionLog { records })
    }

    pub fn records(&self) -> &[(String, String)] {
        &self.records
    }

    pub fn user_count(&self) -> usize {
        self.records
            .iter()
            .map(|(u, _)| u)
            .collect::<std::collections::BTreeSet<_>>()
            .len()
    }

    pub fn item_count(&self) -> usize {
        self.records
            .iter()
            .map(|(_, i)| i)
            .collect::<std::collections::BTreeSet<_>>()
            .len()
    }
}

/// How an anchor set is reduced to a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AnchorAgg {
    /// `alpha * mean + beta * population-std` — the same operator used
    /// for user profiles.
    #[default]
    MeanStd,
    /// Plain mean, ignoring alpha/beta.
    Mean,
}

impl AnchorAgg {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean-std" => Ok(AnchorAgg::MeanStd),
            "mean" => Ok(AnchorAgg::Mean),
            other => Err(input_err!(
                "unknown anchor aggregation {other:?} (expected mean-std or mean)"
            )),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AnchorAgg::MeanStd => "mean-std",
            AnchorAgg::Mean => "mean",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CalibrationParams {
    pub alpha: f64,
    pub beta: f64,
    /// Number of items in each anchor set; defaults to the rounded mean
    /// number of records per user, clamped to the distinct-item count.
    pub t_override: Option<usize>,
    /// The accuracy component every user gets (f1 of the utopia vector).
    pub accuracy_utopia: f64,
    pub anchor_agg: AnchorAgg,
}

impl Default for CalibrationParams {
    fn default() -> Self {
        CalibrationParams {
            alpha: 1.0,
            beta: 1.0,
            t_override: None,
            accuracy_utopia: 1.0,
            anchor_agg: AnchorAgg::default(),
        }
    }
}

/// What the calibration did, alongside the per-user rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationSummary {
    pub t_used: usize,
    pub pop_tail: f64,
    pub pop_head: f64,
    /// Users whose raw value fell outside [0, 1] and was clamped.
    pub clamp_count: usize,
    pub mean_aplt_utopia: f64,
}

/// Per-user utopia vectors (accuracy component, long-tail component),
/// keyed by user_id.
#[derive(Debug, Clone)]
pub struct UtopiaTable {
    rows: BTreeMap<String, [f64; 2]>,
    summary: CalibrationSummary,
}

impl UtopiaTable {
    pub fn rows(&self) -> &BTreeMap<String, [f64; 2]> {
        &self.rows
    }

    pub fn summary(&self) -> &CalibrationSummary {
        &self.summary
    }

    /// View the table as a per-sample utopia assignment (sample = user).
    pub fn to_assignment(&self) -> UtopiaAssignment {
        UtopiaAssignment::PerSample(
            self.rows
                .iter()
                .map(|(u, v)| (u.clone(), v.to_vec()))
                .collect(),
        )
    }
}

/// Transaction count per item.
pub fn item_popularity(log: &InteractionLog) -> BTreeMap<String, u64> {
    let mut pops = BTreeMap::new();
    for (_, item) in log.records() {
        *pops.entry(item.clone()).or_insert(0u64) += 1;
    }
    pops
}

/// Profile popularity per user: `alpha * mean + beta * popstd` over the
/// multiset of popularity counts of the user's interactions (population
/// standard deviation, so singleton profiles get std 0).
pub fn user_popularity(
    log: &InteractionLog,
    pops: &BTreeMap<String, u64>,
    alpha: f64,
    beta: f64,
) -> Result<BTreeMap<String, f64>> {
    check_coefficient("alpha", alpha)?;
    check_coefficient("beta", beta)?;
    let mut profile: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (user, item) in log.records() {
        let pop = pops
            .get(item)
            .ok_or_else(|| input_err!("item {item:?} missing from popularity map"))?;
        profile.entry(user.clone()).or_default().push(*pop as f64);
    }
    Ok(profile
        .into_iter()
        .map(|(user, gamma)| (user, mean_std_agg(gamma, alpha, beta)))
        .collect())
}

/// Tail and head anchors: aggregate the popularity values of the T
/// least-consumed and T most-consumed items with the same operator as
/// user profiles (ties at the T-boundary broken by ascending item_id).
/// Fails as degenerate when the head anchor does not exceed the tail
/// anchor — that means popularity carries no signal.
pub fn tail_head_anchors(
    pops: &BTreeMap<String, u64>,
    t: usize,
    alpha: f64,
    beta: f64,
) -> Result<(f64, f64)> {
    tail_head_anchors_with(pops, t, alpha, beta, AnchorAgg::MeanStd)
}

pub fn tail_head_anchors_with(
    pops: &BTreeMap<String, u64>,
    t: usize,
    alpha: f64,
    beta: f64,
    agg: AnchorAgg,
) -> Result<(f64, f64)> {
    check_coefficient("alpha", alpha)?;
    check_coefficient("beta", beta)?;
    if t == 0 {
        return Err(input_err!("anchor size T must be positive"));
    }
    if t > pops.len() {
        return Err(input_err!(
            "anchor size T = {t} exceeds the {} distinct items",
            pops.len()
        ));
    }
    // BTreeMap iterates ascending by item_id already, so a stable sort on
    // the count alone implements the id tie-break on both ends.
    let mut by_count: Vec<(&String, u64)> = pops.iter().map(|(i, c)| (i, *c)).collect();
    by_count.sort_by_key(|(_, c)| *c);
    let tail: Vec<f64> = by_count.iter().take(t).map(|(_, c)| *c as f64).collect();
    let mut by_count_desc: Vec<(&String, u64)> = pops.iter().map(|(i, c)| (i, *c)).collect();
    by_count_desc.sort_by_key(|(_, c)| std::cmp::Reverse(*c));
    let head: Vec<f64> = by_count_desc.iter().take(t).map(|(_, c)| *c as f64).collect();

    let (pop_tail, pop_head) = match agg {
        AnchorAgg::MeanStd => (
            mean_std_agg(tail, alpha, beta),
            mean_std_agg(head, alpha, beta),
        ),
        AnchorAgg::Mean => (mean(&tail), mean(&head)),
    };
    if pop_head <= pop_tail {
        return Err(Error::DegenerateCalibration(format!(
            "head anchor ({pop_head}) does not exceed tail anchor ({pop_tail}); \
             popularity carries no signal"
        )));
    }
    Ok((pop_tail, pop_head))
}

/// Long-tail utopia component of one user: linear position of `pop_u`
/// between the anchors, clamped to [0, 1]. Returns the value and
/// whether clamping fired (std inflation can push pop_u past the head
/// anchor).
pub fn aplt_utopia(pop_u: f64, pop_tail: f64, pop_head: f64) -> Result<(f64, bool)> {
    if pop_head <= pop_tail {
        return Err(input_err!(
            "anchors must satisfy head > tail, got head {pop_head}, tail {pop_tail}"
        ));
    }
    let raw = (pop_head - pop_u) / (pop_head - pop_tail);
    let clamped = raw.clamp(0.0, 1.0);
    Ok((clamped, clamped != raw))
}

/// Default anchor size: rounded mean number of records per user,
/// clamped into [1, distinct items].
pub fn default_t(log: &InteractionLog) -> usize {
    let mean = log.records().len() as f64 / log.user_count() as f64;
    (mean.round() as usize).clamp(1, log.item_count())
}

/// Full calibration pass: popularity, anchors, then one utopia row per
/// user, ordered by user_id.
pub fn calibrate(log: &InteractionLog, params: &CalibrationParams) -> Result<UtopiaTable> {
    if !params.accuracy_utopia.is_finite() {
        return Err(input_err!(
            "accuracy utopia must be finite, got {}",
            params.accuracy_utopia
        ));
    }
    let pops = item_popularity(log);
    let t = match params.t_override {
        Some(t) => {
            if t == 0 || t > pops.len() {
                return Err(input_err!(
                    "T = {t} out of range (1 ..= {} distinct items)",
                    pops.len()
                ));
            }
            t
        }
        None => default_t(log),
    };
    let (pop_tail, pop_head) =
        tail_head_anchors_with(&pops, t, params.alpha, params.beta, params.anchor_agg)?;
    let users = user_popularity(log, &pops, params.alpha, params.beta)?;

    let mut rows = BTreeMap::new();
    let mut clamp_count = 0;
    let mut sum = 0.0;
    for (user, pop_u) in &users {
        let (f2, clamped) = aplt_utopia(*pop_u, pop_tail, pop_head)?;
        if clamped {
            clamp_count += 1;
        }
        sum += f2;
        rows.insert(user.clone(), [params.accuracy_utopia, f2]);
    }
    let mean_aplt_utopia = sum / rows.len() as f64;
    Ok(UtopiaTable {
        rows,
        summary: CalibrationSummary {
            t_used: t,
            pop_tail,
            pop_head,
            clamp_count,
            mean_aplt_utopia,
        },
    })
}

fn check_coefficient(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(input_err!("{name} must be finite, got {v}"))
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `alpha * mean + beta * population-std`. Values are sorted before
/// summation so record order can never perturb the result bit-wise.
fn mean_std_agg(mut values: Vec<f64>, alpha: f64, beta: f64) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite counts"));
    let mu = mean(&values);
    let var = values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / values.len() as f64;
    alpha * mu + beta * var.sqrt()
}
