//! Fuzzy c-means over scalar total linkage scores, and cluster labelling.
//!
//! Scores repeat heavily (Boolean scoring produces only a handful of
//! distinct values), so the iteration runs over distinct values weighted by
//! their multiplicity. Memberships depend only on the value, which makes the
//! result identical to clustering the raw sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FcmParams {
    pub clusters: usize,
    pub fuzzifier: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for FcmParams {
    fn default() -> Self {
        Self {
            clusters: 3,
            fuzzifier: 2.0,
            tol: 1e-6,
            max_iter: 300,
            seed: 42,
        }
    }
}

impl FcmParams {
    pub fn validate(&self) -> Result<()> {
        if self.clusters < 1 {
            return Err(Error::Config("cluster count must be at least 1".into()));
        }
        if !(self.fuzzifier.is_finite() && self.fuzzifier > 1.0) {
            return Err(Error::Config(format!(
                "fuzzifier must exceed 1, got {}",
                self.fuzzifier
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Memberships of one point given the centers.
///
/// A point sitting exactly on one or more centers is shared equally among
/// them.
pub fn membership_row(x: f64, centers: &[f64], fuzzifier: f64) -> Vec<f64> {
    let dist: Vec<f64> = centers.iter().map(|c| (x - c).abs()).collect();
    let zeros = dist.iter().filter(|d| **d == 0.0).count();
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        return dist
            .iter()
            .map(|d| if *d == 0.0 { share } else { 0.0 })
            .collect();
    }
    let exponent = 2.0 / (fuzzifier - 1.0);
    let mut row: Vec<f64> = dist
        .iter()
        .map(|di| 1.0 / dist.iter().map(|dl| (di / dl).powf(exponent)).sum::<f64>())
        .collect();
    // Renormalize so the column sums to one up to a single rounding.
    let total: f64 = row.iter().sum();
    row.iter_mut().for_each(|u| *u /= total);
    row
}

/// Step-by-step fuzzy c-means over weighted scalar points.
#[derive(Debug, Clone)]
pub struct FcmState {
    points: Vec<f64>,
    weights: Vec<f64>,
    fuzzifier: f64,
    centers: Vec<f64>,
    /// `memberships[j][i]`: point `j`, cluster `i`.
    memberships: Vec<Vec<f64>>,
}

impl FcmState {
    /// Random initial memberships drawn from a generator keyed by `seed`.
    pub fn new(
        points: Vec<f64>,
        weights: Vec<f64>,
        k: usize,
        fuzzifier: f64,
        seed: u64,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("clustering input"));
        }
        if points.len() != weights.len() {
            return Err(Error::Invalid("points and weights differ in length".into()));
        }
        if k == 0 {
            return Err(Error::Config("cluster count must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let memberships = points
            .iter()
            .map(|_| {
                let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
                let total: f64 = raw.iter().sum();
                raw.into_iter().map(|u| u / total).collect()
            })
            .collect();
        Ok(Self {
            points,
            weights,
            fuzzifier,
            centers: vec![0.0; k],
            memberships,
        })
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn memberships(&self) -> &[Vec<f64>] {
        &self.memberships
    }

    /// `Σⱼ Σᵢ wⱼ uᵢⱼ^m (xⱼ - cᵢ)²` at the current state.
    pub fn objective(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .zip(&self.memberships)
            .map(|((x, w), row)| {
                w * row
                    .iter()
                    .zip(&self.centers)
                    .map(|(u, c)| u.powf(self.fuzzifier) * (x - c).powi(2))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Update centers from memberships, then memberships from centers.
    /// Returns the largest center movement.
    pub fn step(&mut self) -> f64 {
        let k = self.centers.len();
        let mut movement = 0.0f64;
        for i in 0..k {
            let mut num = 0.0;
            let mut den = 0.0;
            for ((x, w), row) in self.points.iter().zip(&self.weights).zip(&self.memberships) {
                let um = w * row[i].powf(self.fuzzifier);
                num += um * x;
                den += um;
            }
            let c = if den > 0.0 {
                num / den
            } else {
                self.centers[i]
            };
            movement = movement.max((c - self.centers[i]).abs());
            self.centers[i] = c;
        }
        for (x, row) in self.points.iter().zip(self.memberships.iter_mut()) {
            *row = membership_row(*x, &self.centers, self.fuzzifier);
        }
        movement
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcmResult {
    /// Ascending.
    pub centers: Vec<f64>,
    /// `memberships[j][i]`: membership of value `j` in cluster `i`.
    pub memberships: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each iteration.
    pub objective_history: Vec<f64>,
    /// Set when there were fewer distinct values than requested clusters:
    /// `(requested, used)`.
    pub collapsed: Option<(usize, usize)>,
}

impl FcmResult {
    pub fn k(&self) -> usize {
        self.centers.len()
    }
}

pub fn fcm(values: &[f64], params: &FcmParams) -> Result<FcmResult> {
    params.validate()?;
    if values.is_empty() {
        return Err(Error::Empty("clustering input"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Invalid(format!(
            "non-finite value {v} in clustering input"
        )));
    }

    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut points: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for v in sorted {
        if points.last() == Some(&v) {
            *weights.last_mut().expect("paired with points") += 1.0;
        } else {
            points.push(v);
            weights.push(1.0);
        }
    }

    let k = params.clusters.min(points.len());
    let collapsed = (k < params.clusters).then_some((params.clusters, k));

    let (centers, point_memberships, iterations, converged, history) = if k == 1 {
        let total: f64 = weights.iter().sum();
        let mean = points.iter().zip(&weights).map(|(x, w)| x * w).sum::<f64>() / total;
        let sse = points
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * (x - mean).powi(2))
            .sum();
        (
            vec![mean],
            vec![vec![1.0]; points.len()],
            1,
            true,
            vec![sse],
        )
    } else {
        let mut state = FcmState::new(points.clone(), weights, k, params.fuzzifier, params.seed)?;
        let mut history = Vec::new();
        let mut converged = false;
        let mut iterations = 0;
        for it in 1..=params.max_iter {
            let movement = state.step();
            history.push(state.objective());
            iterations = it;
            if it > 1 && movement < params.tol {
                converged = true;
                break;
            }
        }
        (
            state.centers.clone(),
            state.memberships.clone(),
            iterations,
            converged,
            history,
        )
    };

    // Canonical order: ascending centers.
    let mut order: Vec<usize> = (0..centers.len()).collect();
    order.sort_by(|&a, &b| centers[a].total_cmp(&centers[b]).then(a.cmp(&b)));
    let centers: Vec<f64> = order.iter().map(|&i| centers[i]).collect();
    let point_memberships: Vec<Vec<f64>> = point_memberships
        .iter()
        .map(|row| order.iter().map(|&i| row[i]).collect())
        .collect();

    let memberships = values
        .iter()
        .map(|v| {
            let j = points
                .binary_search_by(|p| p.total_cmp(v))
                .expect("value present among distinct points");
            point_memberships[j].clone()
        })
        .collect();

    Ok(FcmResult {
        centers,
        memberships,
        iterations,
        converged,
        objective_history: history,
        collapsed,
    })
}

/// Cluster labels bound to centers in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabeling {
    labels: Vec<String>,
}

pub const NON_MATCH: &str = "Non-match";
pub const POSSIBLE_MATCH: &str = "Possible Match";
pub const MATCH: &str = "Match";

impl ClusterLabeling {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Invalid("empty cluster labeling".into()));
        }
        Ok(Self { labels })
    }

    /// `Non-match`, `Possible Match`, `Match` for three clusters; other
    /// counts keep `Non-match` lowest and `Match` highest and number the
    /// possible-match bands in between.
    pub fn standard(k: usize) -> Self {
        let labels = match k {
            0 | 1 => vec![MATCH.to_string()],
            2 => vec![NON_MATCH.to_string(), MATCH.to_string()],
            3 => vec![NON_MATCH.into(), POSSIBLE_MATCH.into(), MATCH.into()],
            k => std::iter::once(NON_MATCH.to_string())
                .chain((1..k - 1).map(|i| format!("{POSSIBLE_MATCH} {i}")))
                .chain(std::iter::once(MATCH.to_string()))
                .collect(),
        };
        Self { labels }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Best cluster of one value.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Index into the labeling.
    pub label: usize,
    /// Membership per label of the labeling; labels without a cluster get 0.
    pub memberships: Vec<f64>,
}

/// Label every value by its highest-membership cluster, ties going to the
/// cluster with the higher center.
///
/// When clustering collapsed to fewer clusters than labels, the clusters
/// take the top labels (the highest center keeps the highest label).
pub fn assign_best(result: &FcmResult, labeling: &ClusterLabeling) -> Result<Vec<Assignment>> {
    let k = result.k();
    if k > labeling.len() {
        return Err(Error::Invalid(format!(
            "{k} clusters but only {} labels",
            labeling.len()
        )));
    }
    let offset = labeling.len() - k;
    Ok(result
        .memberships
        .iter()
        .map(|row| {
            let mut best = 0;
            for i in 1..row.len() {
                if row[i] >= row[best] {
                    best = i;
                }
            }
            let mut memberships = vec![0.0; labeling.len()];
            memberships[offset..].copy_from_slice(row);
            Assignment {
                label: offset + best,
                memberships,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(k: usize) -> FcmParams {
        FcmParams {
            clusters: k,
            ..FcmParams::default()
        }
    }

    /// Grid search over two centers minimizing the objective with the
    /// optimal memberships plugged in.
    fn grid_two_centers(values: &[f64]) -> (f64, f64) {
        let objective = |c: [f64; 2]| -> f64 {
            values
                .iter()
                .map(|&x| {
                    membership_row(x, &c, 2.0)
                        .iter()
                        .zip(c)
                        .map(|(u, ci)| u * u * (x - ci).powi(2))
                        .sum::<f64>()
                })
                .sum()
        };
        let mut best = (f64::INFINITY, (0.0, 0.0));
        for a in 0..=100 {
            for b in a..=100 {
                let c = [a as f64 / 100.0, b as f64 / 100.0];
                let j = objective(c);
                if j < best.0 {
                    best = (j, (c[0], c[1]));
                }
            }
        }
        best.1
    }

    #[test]
    fn two_blobs() {
        let values = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let r = fcm(&values, &params(2)).unwrap();
        let (g0, g1) = grid_two_centers(&values);
        assert!((r.centers[0] - g0).abs() < 0.05 && (r.centers[1] - g1).abs() < 0.05);
        assert!(r.centers[0].abs() < 0.05 && (r.centers[1] - 1.0).abs() < 0.05);
        for (v, row) in values.iter().zip(&r.memberships) {
            let near = if *v < 0.5 { 0 } else { 1 };
            assert!(row[near] > 0.9);
        }
        assert!(r.converged);
        assert_eq!(r.collapsed, None);
    }

    #[test]
    fn equidistant_point_splits_evenly() {
        assert_eq!(membership_row(0.5, &[0.0, 1.0], 2.0), vec![0.5, 0.5]);
        assert_eq!(membership_row(0.0, &[0.0, 1.0], 2.0), vec![1.0, 0.0]);
        let values = [0.0, 0.0, 0.5, 1.0, 1.0];
        let r = fcm(&values, &params(2)).unwrap();
        // Symmetric data converges to mirrored centers up to the stopping tolerance.
        assert!(
            (r.centers[0] + r.centers[1] - 1.0).abs() < 1e-4,
            "{:?}",
            r.centers
        );
        assert!(
            (r.memberships[2][0] - 0.5).abs() < 1e-4,
            "{:?}",
            r.memberships[2]
        );
    }

    #[test]
    fn single_cluster_is_mean() {
        let r = fcm(&[0.1, 0.2, 0.6], &params(1)).unwrap();
        assert!((r.centers[0] - 0.3).abs() < 1e-12);
        assert!(r.memberships.iter().all(|row| row == &vec![1.0]));
    }

    #[test]
    fn collapses_when_too_few_distinct_values() {
        let r = fcm(&[1.0, 1.0], &params(3)).unwrap();
        assert_eq!(r.collapsed, Some((3, 1)));
        let a = assign_best(&r, &ClusterLabeling::standard(3)).unwrap();
        assert!(a
            .iter()
            .all(|x| x.label == 2 && x.memberships == vec![0.0, 0.0, 1.0]));
        assert!(fcm(&[], &params(3)).is_err());
    }

    #[test]
    fn assign_examples() {
        let labeling = ClusterLabeling::standard(3);
        let mk = |rows: Vec<Vec<f64>>| FcmResult {
            centers: vec![0.1, 0.5, 0.9],
            memberships: rows,
            iterations: 1,
            converged: true,
            objective_history: vec![],
            collapsed: None,
        };
        let a = assign_best(&mk(vec![vec![0.1, 0.2, 0.7]]), &labeling).unwrap();
        assert_eq!(labeling.labels()[a[0].label], MATCH);
        let a = assign_best(&mk(vec![vec![0.5, 0.5, 0.0]]), &labeling).unwrap();
        assert_eq!(labeling.labels()[a[0].label], POSSIBLE_MATCH);
        let r = fcm(&[0.4; 10], &params(3)).unwrap();
        let a = assign_best(&r, &labeling).unwrap();
        assert!(a.iter().all(|x| x.label == a[0].label));
    }

    #[test]
    fn standard_labelings() {
        assert_eq!(
            ClusterLabeling::standard(3).labels(),
            [NON_MATCH, POSSIBLE_MATCH, MATCH]
        );
        assert_eq!(ClusterLabeling::standard(1).labels(), [MATCH]);
        assert_eq!(ClusterLabeling::standard(5).labels()[2], "Possible Match 2");
    }

    #[test]
    fn parameter_validation() {
        for bad in [
            FcmParams {
                clusters: 0,
                ..FcmParams::default()
            },
            FcmParams {
                fuzzifier: 1.0,
                ..FcmParams::default()
            },
            FcmParams {
                tol: 0.0,
                ..FcmParams::default()
            },
            FcmParams {
                max_iter: 0,
                ..FcmParams::default()
            },
        ] {
            assert!(fcm(&[0.1, 0.2], &bad).is_err());
        }
    }

    proptest! {
        #[test]
        fn per_iteration_invariants(
            values in prop::collection::vec(0.0f64..=1.0, 4..60), k in 2usize..5, seed in any::<u64>(),
        ) {
            let n = values.len();
            let mut state = FcmState::new(values, vec![1.0; n], k, 2.0, seed).unwrap();
            let mut prev = f64::INFINITY;
            for _ in 0..40 {
                state.step();
                for row in state.memberships() {
                    prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                    prop_assert!(row.iter().all(|u| (0.0..=1.0).contains(u)));
                }
                let j = state.objective();
                prop_assert!(j <= prev + 1e-12 * prev.max(1.0), "{j} > {prev}");
                prev = j;
            }
        }

        #[test]
        fn deterministic_and_permutation_invariant(
            values in prop::collection::vec(0.0f64..=1.0, 1..80), seed in any::<u64>(),
        ) {
            let p = FcmParams { seed, ..FcmParams::default() };
            let a = fcm(&values, &p).unwrap();
            let b = fcm(&values, &p).unwrap();
            prop_assert_eq!(&a, &b);
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(a.centers.iter().all(|c| *c >= lo - 1e-12 && *c <= hi + 1e-12));
            prop_assert!(a.centers.windows(2).all(|w| w[0] <= w[1]));
            // Reversing the input order permutes rows but not the values' fate.
            let rev: Vec<f64> = values.iter().rev().cloned().collect();
            let r = fcm(&rev, &p).unwrap();
            prop_assert_eq!(&a.centers, &r.centers);
            let labeling = ClusterLabeling::standard(3);
            let la: Vec<usize> = assign_best(&a, &labeling).unwrap().iter().map(|x| x.label).collect();
            let mut lr: Vec<usize> = assign_best(&r, &labeling).unwrap().iter().map(|x| x.label).collect();
            lr.reverse();
            prop_assert_eq!(la, lr);
        }
    }
}
