//! Scalar scores: distance to utopia, weighted mean, hypervolume box,
//! and the population-discounted utility.

use super::DistanceKind;
use crate::error::{input_err, Result};
use crate::types::{orient_unchecked, ObjectiveSpec, SamplePopulation, UtopiaAssignment};

/// Euclidean distance from a solution vector to the utopia point, both
/// in native units (the distance is orientation-independent). Lower is
/// better.
pub fn score_ed(values: &[f64], utopia: &[f64]) -> Result<f64> {
    if values.len() != utopia.len() {
        return Err(input_err!(
            "ed: solution has {} components, utopia {}",
            values.len(),
            utopia.len()
        ));
    }
    Ok(values
        .iter()
        .zip(utopia)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// Weighted mean of the objectives: `(1/k) * sum_i w_i * s_i * f_i`
/// with `s_i = +1` for Maximize and `-1` for Minimize, so higher is
/// better regardless of the mix of senses. Weights must be positive.
pub fn score_wm(values: &[f64], weights: &[f64], specs: &[ObjectiveSpec]) -> Result<f64> {
    let k = specs.len();
    if values.len() != k || weights.len() != k {
        return Err(input_err!(
            "wm: expected {k} values and weights, got {} and {}",
            values.len(),
            weights.len()
        ));
    }
    for (spec, w) in specs.iter().zip(weights) {
        if !w.is_finite() || *w <= 0.0 {
            return Err(input_err!(
                "wm: weight for objective {:?} must be positive and finite, got {w}",
                spec.name
            ));
        }
    }
    let sum: f64 = values
        .iter()
        .zip(weights)
        .zip(specs)
        .map(|((f, w), s)| w * s.direction.sign() * f)
        .sum();
    Ok(sum / k as f64)
}

/// Volume of the axis-aligned box spanned between the solution and the
/// reference point (both native units, oriented internally). Zero when
/// the solution fails to strictly improve on the reference in some
/// coordinate. Higher is better.
pub fn score_hv(values: &[f64], reference: &[f64], specs: &[ObjectiveSpec]) -> Result<f64> {
    let k = specs.len();
    if values.len() != k || reference.len() != k {
        return Err(input_err!(
            "hv: expected {k} values and reference components, got {} and {}",
            values.len(),
            reference.len()
        ));
    }
    if let Some(r) = reference.iter().find(|r| !r.is_finite()) {
        return Err(input_err!("hv: non-finite reference component {r}"));
    }
    let x = orient_unchecked(values, specs);
    let r = orient_unchecked(reference, specs);
    Ok(x.iter()
        .zip(&r)
        .map(|(xi, ri)| (ri - xi).max(0.0))
        .product())
}

/// Population-discounted utility: `ln sum_j e(utopia_j, x_j)^2`, the log
/// of the summed squared per-sample distances to each sample's utopia
/// point. Summation runs in ascending sample-id order (the population is
/// stored that way), so input row order cannot perturb the result.
/// Lower is better.
///
/// A perfect population — every sample exactly at its utopia — has sum
/// zero and returns `f64::NEG_INFINITY`: the unattainable perfect model
/// must win the comparison, not crash it.
pub fn score_pdu(
    population: &SamplePopulation,
    utopia: &UtopiaAssignment,
    distance: DistanceKind,
) -> Result<f64> {
    let mut sum = 0.0;
    for (sample_id, x) in population.samples() {
        let u = utopia.resolve(sample_id).ok_or_else(|| {
            input_err!(
                "no utopia vector for sample {sample_id:?} (solution {:?})",
                population.solution_id()
            )
        })?;
        if u.len() != x.len() {
            return Err(input_err!(
                "sample {sample_id:?}: utopia has {} components, sample {}",
                u.len(),
                x.len()
            ));
        }
        let d = distance.between(u, x);
        sum += d * d;
    }
    if sum == 0.0 {
        Ok(f64::NEG_INFINITY)
    } else {
        Ok(sum.ln())
    }
}
