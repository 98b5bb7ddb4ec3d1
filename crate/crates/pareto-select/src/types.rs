//! Domain types: objective specifications, candidate solutions,
//! per-sample populations and utopia assignments.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{input_err, Result};

/// Optimization sense of one objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Direction::Minimize),
            "max" => Ok(Direction::Maximize),
            other => Err(input_err!(
                "invalid direction {other:?} (expected \"min\" or \"max\")"
            )),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Minimize => "min",
            Direction::Maximize => "max",
        }
    }

    /// Sign used by weighted-mean scoring: +1 for Maximize, -1 for Minimize.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Minimize => -1.0,
            Direction::Maximize => 1.0,
        }
    }
}

/// One objective: its name, sense, and optional per-objective parameters
/// (scalar weight, utopia component, hypervolume reference component)
/// carried in native units.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub name: String,
    pub direction: Direction,
    pub weight: Option<f64>,
    pub utopia_component: Option<f64>,
    pub reference_component: Option<f64>,
}

impl ObjectiveSpec {
    pub fn new(name: impl Into<String>, direction: Direction) -> Self {
        ObjectiveSpec {
            name: name.into(),
            direction,
            weight: None,
            utopia_component: None,
            reference_component: None,
        }
    }
}

/// One candidate solution: stable id plus its aggregate objective vector
/// in native units, ordered like the objective specs.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPoint {
    pub id: String,
    pub values: Vec<f64>,
}

impl SolutionPoint {
    pub fn new(id: impl Into<String>, values: Vec<f64>) -> Self {
        SolutionPoint { id: id.into(), values }
    }
}

/// The full set of candidates under analysis. Construction validates the
/// set once so every downstream operation can assume consistent,
/// finite data and unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    specs: Vec<ObjectiveSpec>,
    solutions: Vec<SolutionPoint>,
}

impl CandidateSet {
    pub fn new(specs: Vec<ObjectiveSpec>, solutions: Vec<SolutionPoint>) -> Result<Self> {
        if specs.is_empty() {
            return Err(input_err!("candidate set needs at least one objective"));
        }
        let mut names = BTreeSet::new();
        for s in &specs {
            if s.name.is_empty() {
                return Err(input_err!("objective with empty name"));
            }
            if !names.insert(s.name.as_str()) {
                return Err(input_err!("duplicate objective name {:?}", s.name));
            }
            for (label, v) in [
                ("weight", s.weight),
                ("utopia", s.utopia_component),
                ("reference", s.reference_component),
            ] {
                if let Some(v) = v {
                    if !v.is_finite() {
                        return Err(input_err!(
                            "objective {:?}: non-finite {label} component {v}",
                            s.name
                        ));
                    }
                }
            }
        }
        if solutions.is_empty() {
            return Err(input_err!("candidate set needs at least one solution"));
        }
        let k = specs.len();
        let mut ids = BTreeSet::new();
        for sol in &solutions {
            if sol.id.is_empty() {
                return Err(input_err!("solution with empty id"));
            }
            if !ids.insert(sol.id.as_str()) {
                return Err(input_err!("duplicate solution id {:?}", sol.id));
            }
            if sol.values.len() != k {
                return Err(input_err!(
                    "solution {:?}: expected {k} objective values, got {}",
                    sol.id,
                    sol.values.len()
                ));
            }
            for (spec, v) in specs.iter().zip(&sol.values) {
                if !v.is_finite() {
                    return Err(input_err!(
                        "solution {:?}, objective {:?}: non-finite value {v}",
                        sol.id,
                        spec.name
                    ));
                }
            }
        }
        Ok(CandidateSet { specs, solutions })
    }

    pub fn specs(&self) -> &[ObjectiveSpec] {
        &self.specs
    }

    pub fn solutions(&self) -> &[SolutionPoint] {
        &self.solutions
    }

    /// Number of objectives.
    pub fn k(&self) -> usize {
        self.specs.len()
    }

    /// Number of candidate solutions.
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn solution(&self, id: &str) -> Option<&SolutionPoint> {
        self.solutions.iter().find(|s| s.id == id)
    }

    /// Oriented (minimization-form) vector of one solution.
    pub fn oriented(&self, sol: &SolutionPoint) -> Vec<f64> {
        orient_unchecked(&sol.values, &self.specs)
    }
}

/// Map a native-unit vector into minimization form: Maximize components
/// are negated, Minimize components pass through.
pub fn orient(values: &[f64], specs: &[ObjectiveSpec]) -> Result<Vec<f64>> {
    if values.len() != specs.len() {
        return Err(input_err!(
            "orient: expected {} values, got {}",
            specs.len(),
            values.len()
        ));
    }
    Ok(orient_unchecked(values, specs))
}

pub(crate) fn orient_unchecked(values: &[f64], specs: &[ObjectiveSpec]) -> Vec<f64> {
    values
        .iter()
        .zip(specs)
        .map(|(v, s)| match s.direction {
            Direction::Minimize => *v,
            Direction::Maximize => -*v,
        })
        .collect()
}

/// Per-sample objective vectors of one solution. Samples are keyed by a
/// stable sample id (query, user, ...) and canonicalized to ascending
/// sample-id order at construction, so input row order can never leak
/// into any score.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePopulation {
    solution_id: String,
    samples: Vec<(String, Vec<f64>)>,
}

impl SamplePopulation {
    pub fn new(
        solution_id: impl Into<String>,
        mut samples: Vec<(String, Vec<f64>)>,
        k: usize,
    ) -> Result<Self> {
        let solution_id = solution_id.into();
        if samples.is_empty() {
            return Err(input_err!("population for {solution_id:?} has no samples"));
        }
        samples.sort_by(|a, b| a.0.cmp(&b.0));
        for w in samples.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(input_err!(
                    "population for {solution_id:?}: duplicate sample id {:?}",
                    w[0].0
                ));
            }
        }
        for (sid, vals) in &samples {
            if vals.len() != k {
                return Err(input_err!(
                    "population for {solution_id:?}, sample {sid:?}: expected {k} values, got {}",
                    vals.len()
                ));
            }
            if let Some(v) = vals.iter().find(|v| !v.is_finite()) {
                return Err(input_err!(
                    "population for {solution_id:?}, sample {sid:?}: non-finite value {v}"
                ));
            }
        }
        Ok(SamplePopulation { solution_id, samples })
    }

    pub fn solution_id(&self) -> &str {
        &self.solution_id
    }

    /// Samples in ascending sample-id order.
    pub fn samples(&self) -> &[(String, Vec<f64>)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Populations for every solution of one analysis. All populations must
/// cover the identical sample-id set (same m, same ids).
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSet {
    populations: BTreeMap<String, SamplePopulation>,
    sample_ids: Vec<String>,
}

impl PopulationSet {
    pub fn new(pops: Vec<SamplePopulation>) -> Result<Self> {
        let mut iter = pops.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| input_err!("population set needs at least one population"))?;
        let sample_ids: Vec<String> =
            first.samples.iter().map(|(sid, _)| sid.clone()).collect();
        let mut populations = BTreeMap::new();
        let first_id = first.solution_id.clone();
        populations.insert(first_id, first);
        for p in iter {
            let ids: Vec<&String> = p.samples.iter().map(|(sid, _)| sid).collect();
            if ids.len() != sample_ids.len() || ids.iter().zip(&sample_ids).any(|(a, b)| *a != b) {
                return Err(input_err!(
                    "population for {:?} does not cover the same sample ids as the others",
                    p.solution_id
                ));
            }
            let key = p.solution_id.clone();
            if populations.insert(key, p).is_some() {
                return Err(input_err!("duplicate population for one solution id"));
            }
        }
        Ok(PopulationSet { populations, sample_ids })
    }

    pub fn get(&self, solution_id: &str) -> Option<&SamplePopulation> {
        self.populations.get(solution_id)
    }

    /// Shared sample ids, ascending.
    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn solution_ids(&self) -> impl Iterator<Item = &str> {
        self.populations.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.populations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.populations.is_empty()
    }
}

/// Where the utopia point comes from: one global vector broadcast to all
/// samples, or an individual vector per sample id (the calibrated case).
#[derive(Debug, Clone, PartialEq)]
pub enum UtopiaAssignment {
    Global(Vec<f64>),
    PerSample(BTreeMap<String, Vec<f64>>),
}

impl UtopiaAssignment {
    /// Utopia vector for one sample, if assigned.
    pub fn resolve(&self, sample_id: &str) -> Option<&[f64]> {
        match self {
            UtopiaAssignment::Global(v) => Some(v),
            UtopiaAssignment::PerSample(m) => m.get(sample_id).map(Vec::as_slice),
        }
    }

    /// The global vector, when this assignment is global.
    pub fn global(&self) -> Option<&[f64]> {
        match self {
            UtopiaAssignment::Global(v) => Some(v),
            UtopiaAssignment::PerSample(_) => None,
        }
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        let check = |label: &str, v: &[f64]| -> Result<()> {
            if v.len() != k {
                return Err(input_err!(
                    "utopia vector for {label}: expected {k} components, got {}",
                    v.len()
                ));
            }
            if let Some(x) = v.iter().find(|x| !x.is_finite()) {
                return Err(input_err!("utopia vector for {label}: non-finite component {x}"));
            }
            Ok(())
        };
        match self {
            UtopiaAssignment::Global(v) => check("*", v),
            UtopiaAssignment::PerSample(m) => {
                if m.is_empty() {
                    return Err(input_err!("per-sample utopia assignment is empty"));
                }
                for (sid, v) in m {
                    check(sid, v)?;
                }
                Ok(())
            }
        }
    }
}
