//! Pareto dominance, frontier extraction and empirical utopia/nadir
//! points.
//!
//! All comparisons run on oriented (minimization-form) vectors; the
//! public entry points take a [`CandidateSet`] and orient internally.

use crate::error::{input_err, Result};
use crate::types::{CandidateSet, Direction, SolutionPoint};

/// Ids of the non-dominated solutions of a candidate set, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    member_ids: Vec<String>,
}

impl Frontier {
    pub fn member_ids(&self) -> &[String] {
        &self.member_ids
    }

    pub fn len(&self) -> usize {
        self.member_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_ids.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.member_ids.binary_search_by(|m| m.as_str().cmp(id)).is_ok()
    }

    /// Resolve the members against the set they were extracted from.
    pub fn members<'a>(&self, set: &'a CandidateSet) -> Result<Vec<&'a SolutionPoint>> {
        self.member_ids
            .iter()
            .map(|id| {
                set.solution(id)
                    .ok_or_else(|| input_err!("frontier member {id:?} not in candidate set"))
            })
            .collect()
    }
}

/// Strict Pareto dominance on oriented vectors: `a` dominates `b` iff
/// `a` is no worse everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(input_err!(
            "dominates: vector lengths differ ({} vs {})",
            a.len(),
            b.len()
        ));
    }
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return Ok(false);
        }
        if x < y {
            strict = true;
        }
    }
    Ok(strict)
}

/// Extract the Pareto frontier by all-pairs comparison. Exact duplicates
/// do not dominate each other, so both copies stay on the frontier.
pub fn pareto_frontier(set: &CandidateSet) -> Frontier {
    let oriented: Vec<(usize, Vec<f64>)> = set
        .solutions()
        .iter()
        .enumerate()
        .map(|(i, s)| (i, set.oriented(s)))
        .collect();
    let mut member_ids: Vec<String> = oriented
        .iter()
        .filter(|(i, v)| {
            !oriented
                .iter()
                .any(|(j, w)| j != i && dominates(w, v).expect("equal arity"))
        })
        .map(|(i, _)| set.solutions()[*i].id.clone())
        .collect();
    member_ids.sort();
    Frontier { member_ids }
}

/// Sort-based frontier extraction for exactly two objectives,
/// O(n log n). Produces the identical member set as [`pareto_frontier`].
pub fn pareto_frontier_2d(set: &CandidateSet) -> Result<Frontier> {
    if set.k() != 2 {
        return Err(input_err!(
            "pareto_frontier_2d needs exactly 2 objectives, got {}",
            set.k()
        ));
    }
    let mut pts: Vec<(f64, f64, &str)> = set
        .solutions()
        .iter()
        .map(|s| {
            let o = set.oriented(s);
            (o[0], o[1], s.id.as_str())
        })
        .collect();
    pts.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).expect("finite values"));

    let mut member_ids: Vec<String> = Vec::new();
    // best (lowest) second objective seen among strictly smaller first
    // objectives; within one first-objective group only the group's
    // minimum survives, exact duplicates included.
    let mut best_prev = f64::INFINITY;
    let mut i = 0;
    while i < pts.len() {
        let mut j = i;
        while j < pts.len() && pts[j].0 == pts[i].0 {
            j += 1;
        }
        let group_min = pts[i].1; // sorted, so first in group is minimal
        if group_min < best_prev {
            for p in &pts[i..j] {
                if p.1 == group_min {
                    member_ids.push(p.2.to_string());
                }
            }
            best_prev = group_min;
        }
        i = j;
    }
    member_ids.sort();
    Ok(Frontier { member_ids })
}

/// Componentwise best value over the given solutions, in native units.
pub fn empirical_utopia(set: &CandidateSet) -> Vec<f64> {
    fold_extreme(set, set.solutions().iter().collect(), true)
}

/// Componentwise worst value over the given solutions, in native units.
pub fn empirical_nadir(set: &CandidateSet) -> Vec<f64> {
    fold_extreme(set, set.solutions().iter().collect(), false)
}

/// Componentwise best restricted to the listed members (typically the
/// frontier), in native units.
pub fn empirical_utopia_members(set: &CandidateSet, ids: &[String]) -> Result<Vec<f64>> {
    let members = resolve(set, ids)?;
    Ok(fold_extreme(set, members, true))
}

/// Componentwise worst restricted to the listed members, in native units.
pub fn empirical_nadir_members(set: &CandidateSet, ids: &[String]) -> Result<Vec<f64>> {
    let members = resolve(set, ids)?;
    Ok(fold_extreme(set, members, false))
}

fn resolve<'a>(set: &'a CandidateSet, ids: &[String]) -> Result<Vec<&'a SolutionPoint>> {
    if ids.is_empty() {
        return Err(input_err!("empty member list"));
    }
    ids.iter()
        .map(|id| {
            set.solution(id)
                .ok_or_else(|| input_err!("unknown solution id {id:?}"))
        })
        .collect()
}

fn fold_extreme(set: &CandidateSet, members: Vec<&SolutionPoint>, best: bool) -> Vec<f64> {
    let mut out = members[0].values.clone();
    for sol in &members[1..] {
        for ((acc, v), spec) in out.iter_mut().zip(&sol.values).zip(set.specs()) {
            let towards_min = match spec.direction {
                Direction::Minimize => best,
                Direction::Maximize => !best,
            };
            *acc = if towards_min { acc.min(*v) } else { acc.max(*v) };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Direction, ObjectiveSpec, SolutionPoint};
    use proptest::prelude::*;

    fn min_min_set(rows: &[(&str, Vec<f64>)]) -> CandidateSet {
        let k = rows[0].1.len();
        CandidateSet::new(
            (0..k)
                .map(|i| ObjectiveSpec::new(format!("o{i}"), Direction::Minimize))
                .collect(),
            rows.iter()
                .map(|(id, v)| SolutionPoint::new(*id, v.clone()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn dominates_basic_cases() {
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]).unwrap());
        assert!(dominates(&[1.0, 2.0], &[2.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), "no self-domination");
        assert!(!dominates(&[1.0, 3.0], &[2.0, 2.0]).unwrap(), "incomparable");
        assert!(!dominates(&[2.0, 3.0], &[1.0, 2.0]).unwrap());
        assert!(dominates(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn frontier_keeps_duplicates_and_drops_dominated() {
        let s = min_min_set(&[
            ("a", vec![1.0, 5.0]),
            ("b", vec![2.0, 4.0]),
            ("b_dup", vec![2.0, 4.0]),
            ("c", vec![3.0, 4.5]), // dominated by b
            ("d", vec![5.0, 1.0]),
        ]);
        let f = pareto_frontier(&s);
        assert_eq!(f.member_ids(), ["a", "b", "b_dup", "d"]);
        assert!(f.contains("b_dup"));
        assert!(!f.contains("c"));
    }

    #[test]
    fn single_solution_is_its_own_frontier() {
        let s = min_min_set(&[("only", vec![1.0, 2.0, 3.0])]);
        assert_eq!(pareto_frontier(&s).member_ids(), ["only"]);
    }

    #[test]
    fn utopia_and_nadir_respect_directions() {
        let s = CandidateSet::new(
            vec![
                ObjectiveSpec::new("recall", Direction::Maximize),
                ObjectiveSpec::new("latency", Direction::Minimize),
            ],
            vec![
                SolutionPoint::new("a", vec![0.2, 9.0]),
                SolutionPoint::new("b", vec![0.8, 3.0]),
                SolutionPoint::new("c", vec![0.5, 1.0]),
            ],
        )
        .unwrap();
        assert_eq!(empirical_utopia(&s), vec![0.8, 1.0]);
        assert_eq!(empirical_nadir(&s), vec![0.2, 9.0]);
        let members = vec!["a".to_string(), "c".to_string()];
        assert_eq!(empirical_utopia_members(&s, &members).unwrap(), vec![0.5, 1.0]);
        assert_eq!(empirical_nadir_members(&s, &members).unwrap(), vec![0.2, 9.0]);
    }

    fn arb_vecs(k: usize, n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(-100.0..100.0f64, k), 1..=n)
    }

    proptest! {
        // strict partial order: irreflexive + asymmetric
        #[test]
        fn dominance_is_irreflexive_and_asymmetric(v in arb_vecs(3, 8)) {
            for a in &v {
                prop_assert!(!dominates(a, a).unwrap());
                for b in &v {
                    if dominates(a, b).unwrap() {
                        prop_assert!(!dominates(b, a).unwrap());
                    }
                }
            }
        }

        #[test]
        fn dominance_is_transitive(v in arb_vecs(3, 6)) {
            for a in &v {
                for b in &v {
                    for c in &v {
                        if dominates(a, b).unwrap() && dominates(b, c).unwrap() {
                            prop_assert!(dominates(a, c).unwrap());
                        }
                    }
                }
            }
        }

        // every non-member is dominated by at least one member, and no
        // member is dominated by anything
        #[test]
        fn frontier_partition_property(v in arb_vecs(3, 12)) {
            let rows: Vec<(String, Vec<f64>)> = v
                .iter()
                .enumerate()
                .map(|(i, vals)| (format!("s{i:02}"), vals.clone()))
                .collect();
            let set = min_min_set(
                &rows.iter().map(|(id, v)| (id.as_str(), v.clone())).collect::<Vec<_>>(),
            );
            let f = pareto_frontier(&set);
            prop_assert!(!f.is_empty());
            for sol in set.solutions() {
                let ov = set.oriented(sol);
                let dominated_by_member = f
                    .members(&set)
                    .unwrap()
                    .iter()
                    .any(|m| dominates(&set.oriented(m), &ov).unwrap());
                if f.contains(&sol.id) {
                    prop_assert!(!dominated_by_member);
                } else {
                    prop_assert!(dominated_by_member);
                }
            }
        }

        // the 2-objective sweep agrees with the all-pairs reference exactly
        #[test]
        fn sweep_matches_all_pairs_in_2d(v in arb_vecs(2, 16), dup in any::<bool>()) {
            let mut rows: Vec<(String, Vec<f64>)> = v
                .iter()
                .enumerate()
                .map(|(i, vals)| (format!("s{i:02}"), vals.clone()))
                .collect();
            if dup {
                // force exact duplicates into the mix
                let copy = rows[0].1.clone();
                rows.push(("zdup".to_string(), copy));
            }
            let set = min_min_set(
                &rows.iter().map(|(id, v)| (id.as_str(), v.clone())).collect::<Vec<_>>(),
            );
            let sweep = pareto_frontier_2d(&set).unwrap();
            let reference = pareto_frontier(&set);
            prop_assert_eq!(sweep.member_ids(), reference.member_ids());
        }

        // permuting objective columns or negating a column (max<->min flip)
        // leaves the member set unchanged
        #[test]
        fn frontier_invariant_under_permutation_and_flip(v in arb_vecs(3, 10)) {
            let rows: Vec<(String, Vec<f64>)> = v
                .iter()
                .enumerate()
                .map(|(i, vals)| (format!("s{i:02}"), vals.clone()))
                .collect();
            let base = min_min_set(
                &rows.iter().map(|(id, v)| (id.as_str(), v.clone())).collect::<Vec<_>>(),
            );
            let base_front = pareto_frontier(&base);

            // rotate columns by one
            let rotated: Vec<(String, Vec<f64>)> = rows
                .iter()
                .map(|(id, v)| {
                    let mut w = v.clone();
                    w.rotate_left(1);
                    (id.clone(), w)
                })
                .collect();
            let rot_set = min_min_set(
                &rotated.iter().map(|(id, v)| (id.as_str(), v.clone())).collect::<Vec<_>>(),
            );
            let rot_front = pareto_frontier(&rot_set);
            prop_assert_eq!(base_front.member_ids(), rot_front.member_ids());

            // negate column 0 and declare it Maximize instead
            let specs = vec![
                ObjectiveSpec::new("o0", Direction::Maximize),
                ObjectiveSpec::new("o1", Direction::Minimize),
                ObjectiveSpec::new("o2", Direction::Minimize),
            ];
            let flipped = CandidateSet::new(
                specs,
                rows.iter()
                    .map(|(id, v)| {
                        SolutionPoint::new(id.clone(), vec![-v[0], v[1], v[2]])
                    })
                    .collect(),
            )
            .unwrap();
            let flip_front = pareto_frontier(&flipped);
            prop_assert_eq!(base_front.member_ids(), flip_front.member_ids());
        }
    }
}
