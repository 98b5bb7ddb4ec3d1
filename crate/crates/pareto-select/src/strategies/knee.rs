//! Knee-point strategies: the reflex-angle knee for two-objective
//! frontiers and the utility knee driven by sampled weight vectors.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::{SelectionResult, Strategy, StrategyParams};
use crate::dominance::Frontier;
use crate::error::{input_err, Result};
use crate::types::{CandidateSet, ObjectiveSpec, PopulationSet};

/// Draw `m` weight vectors uniformly on the (k-1)-simplex: k iid Exp(1)
/// variates normalized by their sum, from a ChaCha stream seeded with
/// `seed`. The same seed always yields the same sequence.
pub fn sample_weight_vectors(k: usize, m: u64, seed: u64) -> Result<Vec<Vec<f64>>> {
    if k == 0 {
        return Err(input_err!("weight vectors need at least one objective"));
    }
    if m == 0 {
        return Err(input_err!("m_weight_samples must be positive"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        let mut e: Vec<f64> = (0..k)
            .map(|_| {
                let u: f64 = rng.random(); // [0, 1)
                -(1.0 - u).ln()
            })
            .collect();
        let sum: f64 = e.iter().sum();
        if sum > 0.0 {
            for x in &mut e {
                *x /= sum;
            }
        } else {
            // astronomically unlikely all-zero draw; fall back to uniform
            e = vec![1.0 / k as f64; k];
        }
        out.push(e);
    }
    Ok(out)
}

/// Angle-based knee scores on oriented 2-d points, keyed by id.
///
/// The points are chained in ascending order of the first oriented
/// objective (then second, then id). Each member's score is the reflex
/// angle `2*pi - inner` between the segments toward its neighbors,
/// measured on the non-frontier side, so the sharpest bend scores
/// highest. A member without a left neighbor uses a unit vertical
/// pseudo-segment, one without a right neighbor a unit horizontal one;
/// a neighbor that coincides with the member (exact duplicate) is
/// skipped in favor of the nearest distinct point, which makes
/// duplicates tie exactly.
pub(super) fn akp_scores(points: &[(String, [f64; 2])]) -> BTreeMap<String, f64> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&points[a], &points[b]);
        (pa.1[0], pa.1[1], pa.0.as_str())
            .partial_cmp(&(pb.1[0], pb.1[1], pb.0.as_str()))
            .expect("finite coordinates")
    });

    let coord = |i: usize| points[order[i]].1;
    let mut out = BTreeMap::new();
    for (pos, &idx) in order.iter().enumerate() {
        let b = coord(pos);
        // nearest distinct point to the left, else a unit step upward
        let a = (0..pos)
            .rev()
            .map(coord)
            .find(|p| *p != b)
            .unwrap_or([b[0], b[1] + 1.0]);
        // nearest distinct point to the right, else a unit step rightward
        let c = (pos + 1..order.len())
            .map(coord)
            .find(|p| *p != b)
            .unwrap_or([b[0] + 1.0, b[1]]);
        let u = [a[0] - b[0], a[1] - b[1]];
        let v = [c[0] - b[0], c[1] - b[1]];
        let inner = angle_between(u, v);
        out.insert(points[idx].0.clone(), 2.0 * std::f64::consts::PI - inner);
    }
    out
}

/// Angle between two 2-d vectors, in [0, pi].
fn angle_between(u: [f64; 2], v: [f64; 2]) -> f64 {
    let dot = u[0] * v[0] + u[1] * v[1];
    let cross = u[0] * v[1] - u[1] * v[0];
    cross.abs().atan2(dot)
}

/// Win counts of the utility knee on oriented points.
///
/// For each sampled weight vector the member minimizing the weighted sum
/// of oriented objectives wins; per-draw ties award the lowest id. The
/// weighted sum is accumulated in canonical objective order (names
/// ascending) and the weight components are bound to objective *names*,
/// not column positions, so reordering the input columns cannot change
/// any count.
pub(super) fn ukp_wins(
    points: &[(String, Vec<f64>)],
    weights: &[Vec<f64>],
    specs: &[ObjectiveSpec],
) -> BTreeMap<String, u64> {
    // column index of each canonical rank (specs sorted by name)
    let mut by_name: Vec<usize> = (0..specs.len()).collect();
    by_name.sort_by(|&a, &b| specs[a].name.cmp(&specs[b].name));

    let mut sorted: Vec<&(String, Vec<f64>)> = points.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));

    let mut wins: BTreeMap<String, u64> =
        points.iter().map(|(id, _)| (id.clone(), 0)).collect();
    for w in weights {
        let mut best: Option<(f64, &str)> = None;
        for (id, vals) in &sorted {
            let utility: f64 = by_name
                .iter()
                .enumerate()
                .map(|(rank, &col)| w[rank] * vals[col])
                .sum();
            // strict < keeps the earliest (lowest) id on exact ties
            if best.is_none_or(|(u, _)| utility < u) {
                best = Some((utility, id));
            }
        }
        if let Some((_, id)) = best {
            *wins.get_mut(id).expect("initialized above") += 1;
        }
    }
    wins
}

/// Run the angle knee over an existing frontier with default parameters
/// (raw oriented values). Two objectives only.
pub fn select_akp(set: &CandidateSet, frontier: &Frontier) -> Result<SelectionResult> {
    super::select_on_frontier(
        Strategy::Akp,
        set,
        frontier,
        None,
        &StrategyParams::default(),
    )
}

/// Run the utility knee over an existing frontier with `m` weight draws
/// from `seed`, on raw oriented values.
pub fn select_ukp(
    set: &CandidateSet,
    frontier: &Frontier,
    m: u64,
    seed: u64,
) -> Result<SelectionResult> {
    let populations: Option<&PopulationSet> = None;
    super::select_on_frontier(
        Strategy::Ukp,
        set,
        frontier,
        populations,
        &StrategyParams {
            m_weight_samples: m,
            seed,
            ..Default::default()
        },
    )
}
