//! Deterministic and Fellegi-Sunter style probabilistic linkage, used as
//! reference strategies.

use crate::error::{Error, Result};

/// Linkage decision for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineDecision {
    pub ts: f64,
    pub is_match: bool,
}

/// Mean of per-column exact agreement; a match only if every column agrees.
///
/// `exact_scores` holds one 0/1 exact-agreement vector per pair.
pub fn deterministic_link(exact_scores: &[Vec<f64>]) -> Vec<BaselineDecision> {
    exact_scores
        .iter()
        .map(|s| {
            let n = s.len().max(1) as f64;
            let agree = s.iter().filter(|v| **v >= 1.0).count();
            BaselineDecision {
                ts: agree as f64 / n,
                is_match: !s.is_empty() && agree == s.len(),
            }
        })
        .collect()
}

/// Agreement probabilities of one column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuEstimate {
    /// P(agree | true match).
    pub m: f64,
    /// P(agree | non-match).
    pub u: f64,
}

/// Lower and upper clamp applied to estimated probabilities.
pub const PROBABILITY_CLAMP: (f64, f64) = (0.01, 0.99);

/// A pair's column scores with its ground-truth flag.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPair {
    pub scores: Vec<f64>,
    pub is_match: bool,
}

/// Count agreement (`score >= agreement_threshold`) among true matches and
/// among true non-matches, per column.
pub fn estimate_mu(sample: &[LabeledPair], agreement_threshold: f64) -> Result<Vec<MuEstimate>> {
    let matches: Vec<&LabeledPair> = sample.iter().filter(|p| p.is_match).collect();
    let non_matches: Vec<&LabeledPair> = sample.iter().filter(|p| !p.is_match).collect();
    if matches.is_empty() || non_matches.is_empty() {
        return Err(Error::Invalid(
            "m/u estimation needs at least one true match and one true non-match".into(),
        ));
    }
    let n = sample[0].scores.len();
    if sample.iter().any(|p| p.scores.len() != n) {
        return Err(Error::Invalid(
            "labeled pairs differ in column count".into(),
        ));
    }
    let rate = |group: &[&LabeledPair], col: usize| {
        let agree = group
            .iter()
            .filter(|p| p.scores[col] >= agreement_threshold)
            .count();
        (agree as f64 / group.len() as f64).clamp(PROBABILITY_CLAMP.0, PROBABILITY_CLAMP.1)
    };
    Ok((0..n)
        .map(|col| MuEstimate {
            m: rate(&matches, col),
            u: rate(&non_matches, col),
        })
        .collect())
}

/// `(log2(m / u), log2((1 - m) / (1 - u)))`.
pub fn fs_agreement_weight(m: f64, u: f64) -> (f64, f64) {
    ((m / u).log2(), ((1.0 - m) / (1.0 - u)).log2())
}

/// Positive agreement weights scaled onto the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticWeights {
    pub weights: Vec<f64>,
    /// Columns whose agreement weight was not positive and were given 0.
    pub dropped: Vec<usize>,
}

pub fn probabilistic_weights(estimates: &[MuEstimate]) -> Result<ProbabilisticWeights> {
    let raw: Vec<f64> = estimates
        .iter()
        .map(|e| fs_agreement_weight(e.m, e.u).0)
        .collect();
    let dropped: Vec<usize> = raw
        .iter()
        .enumerate()
        .filter(|(_, w)| w.is_nan() || **w <= 0.0)
        .map(|(i, _)| i)
        .collect();
    let positive: Vec<f64> = raw
        .iter()
        .map(|w| if *w > 0.0 { *w } else { 0.0 })
        .collect();
    let total: f64 = positive.iter().sum();
    if total <= 0.0 {
        return Err(Error::Invalid(
            "no column has a positive agreement weight; nothing discriminates matches".into(),
        ));
    }
    Ok(ProbabilisticWeights {
        weights: positive.iter().map(|w| w / total).collect(),
        dropped,
    })
}

/// `TS = Σ wᵢ sᵢ` with match iff `TS >= cutoff`.
pub fn probabilistic_link(
    scores: &[Vec<f64>],
    weights: &[f64],
    cutoff: f64,
) -> Vec<BaselineDecision> {
    scores
        .iter()
        .map(|s| {
            let ts = s
                .iter()
                .zip(weights)
                .map(|(x, w)| x * w)
                .sum::<f64>()
                .clamp(0.0, 1.0);
            BaselineDecision {
                ts,
                is_match: ts >= cutoff,
            }
        })
        .collect()
}
