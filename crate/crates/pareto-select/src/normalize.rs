//! Per-objective min-max normalization with a reusable transform, so
//! sample populations, utopia points and reference points can be mapped
//! into exactly the same scale as the candidate values.

use crate::error::{input_err, Result};
use crate::types::{CandidateSet, SolutionPoint};

/// Scaling of one objective column: `v -> (v - min) / (max - min)`.
/// A constant column (max == min) maps every input to 0.0 and is flagged
/// so callers can warn about it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnScale {
    pub min: f64,
    pub max: f64,
}

impl ColumnScale {
    pub fn is_constant(&self) -> bool {
        self.min == self.max
    }

    pub fn apply(&self, v: f64) -> f64 {
        if self.is_constant() {
            0.0
        } else {
            (v - self.min) / (self.max - self.min)
        }
    }
}

/// The fitted min-max transform of a candidate set, one scale per
/// objective. Re-applying it to the original values reproduces the
/// normalized values bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizeTransform {
    columns: Vec<ColumnScale>,
}

impl NormalizeTransform {
    /// Fit over every solution in the set (the default scope).
    pub fn fit(set: &CandidateSet) -> Self {
        Self::fit_points(set.solutions().iter(), set.k())
    }

    /// Fit over a subset of solution ids only, e.g. the frontier members.
    pub fn fit_members(set: &CandidateSet, ids: &[String]) -> Result<Self> {
        let mut points = Vec::with_capacity(ids.len());
        for id in ids {
            points.push(
                set.solution(id)
                    .ok_or_else(|| input_err!("unknown solution id {id:?}"))?,
            );
        }
        if points.is_empty() {
            return Err(input_err!("cannot fit a normalization on zero solutions"));
        }
        Ok(Self::fit_points(points.into_iter(), set.k()))
    }

    fn fit_points<'a>(points: impl Iterator<Item = &'a SolutionPoint>, k: usize) -> Self {
        let mut columns = vec![
            ColumnScale {
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            };
            k
        ];
        for p in points {
            for (c, v) in columns.iter_mut().zip(&p.values) {
                c.min = c.min.min(*v);
                c.max = c.max.max(*v);
            }
        }
        NormalizeTransform { columns }
    }

    pub fn columns(&self) -> &[ColumnScale] {
        &self.columns
    }

    /// Indices of constant (degenerate) columns.
    pub fn constant_columns(&self) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_constant())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn apply_component(&self, idx: usize, v: f64) -> f64 {
        self.columns[idx].apply(v)
    }

    pub fn apply(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.columns.len() {
            return Err(input_err!(
                "normalize: expected {} components, got {}",
                self.columns.len(),
                values.len()
            ));
        }
        Ok(values
            .iter()
            .zip(&self.columns)
            .map(|(v, c)| c.apply(*v))
            .collect())
    }
}

/// Min-max normalize every objective column of the set over all
/// candidates. Returns the rescaled set plus the fitted transform;
/// solution ids and objective specs pass through unchanged (the specs'
/// utopia/reference components stay in native units — map them with the
/// returned transform when needed).
pub fn min_max_normalize(set: &CandidateSet) -> (CandidateSet, NormalizeTransform) {
    let transform = NormalizeTransform::fit(set);
    let solutions = set
        .solutions()
        .iter()
        .map(|s| SolutionPoint {
            id: s.id.clone(),
            values: transform.apply(&s.values).expect("same arity by construction"),
        })
        .collect();
    let normalized = CandidateSet::new(set.specs().to_vec(), solutions)
        .expect("normalizing a valid set keeps it valid");
    (normalized, transform)
}
