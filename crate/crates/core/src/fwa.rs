//! Fuzzy weighted average of fuzzy match scores under fuzzy weights.
//!
//! At a given α the average is the interval
//! `[min Σ xᵢwᵢ, max Σ xᵢwᵢ]` over `xᵢ` in the α-cut of score `i` and `wᵢ`
//! in the α-cut of weight `i`, subject to `Σ wᵢ = 1`. Weights are
//! non-negative, so each extreme takes the matching score endpoint and
//! becomes a linear program over a box intersected with the simplex. That
//! program is solved exactly by starting every weight at its lower bound and
//! pouring the remaining mass into the columns with the smallest (for the
//! minimum) or largest (for the maximum) score first.

use crate::error::{Error, Result};
use crate::fahp::FuzzyWeightVector;
use crate::fuzzy::{Interval, Tfn};

/// Bins of the score histogram used to locate the mode.
pub const MODE_BINS: usize = 20;

/// Slack allowed on the simplex feasibility checks.
const FEASIBILITY_TOL: f64 = 1e-9;

/// `(min, mode, max)` of one column's observed match scores.
///
/// The mode is taken from a 20-bin histogram over `[0, 1]`: the most
/// populated bin wins (ties go to the lower bin) and the mode is the mean of
/// the scores that fell into it.
pub fn column_score_tfn(scores: &[f64]) -> Result<Tfn> {
    if scores.is_empty() {
        return Err(Error::Empty("column scores"));
    }
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::Invalid(format!("non-finite match score {s}")));
    }
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let bin_of = |s: f64| ((s.clamp(0.0, 1.0) * MODE_BINS as f64) as usize).min(MODE_BINS - 1);
    let mut counts = [0usize; MODE_BINS];
    let mut sums = [0.0f64; MODE_BINS];
    for &s in scores {
        let b = bin_of(s);
        counts[b] += 1;
        sums[b] += s;
    }
    let mut best = 0;
    for b in 1..MODE_BINS {
        if counts[b] > counts[best] {
            best = b;
        }
    }
    let mode = (sums[best] / counts[best] as f64).clamp(min, max);
    Tfn::new(min, mode, max)
}

/// Fuzzy scores, fwa-normal fuzzy weights and the α-cut level.
#[derive(Debug, Clone)]
pub struct FwaInput<'a> {
    pub scores: &'a [Tfn],
    pub weights: &'a FuzzyWeightVector,
    pub alpha: f64,
}

impl FwaInput<'_> {
    fn validate(&self) -> Result<()> {
        if self.scores.is_empty() {
            return Err(Error::Empty("fuzzy scores"));
        }
        if self.scores.len() != self.weights.len() {
            return Err(Error::Invalid(format!(
                "{} fuzzy scores but {} fuzzy weights",
                self.scores.len(),
                self.weights.len()
            )));
        }
        if let Some(s) = self.scores.iter().find(|s| s.a() < 0.0 || s.c() > 1.0) {
            return Err(Error::Invalid(format!("fuzzy score {s:?} leaves [0, 1]")));
        }
        Ok(())
    }
}

/// Exact interval of the fuzzy weighted average at `input.alpha`.
pub fn fwa_interval(input: &FwaInput<'_>) -> Result<Interval> {
    input.validate()?;
    let alpha = input.alpha;
    let xs = input
        .scores
        .iter()
        .map(|s| s.alpha_cut(alpha))
        .collect::<Result<Vec<_>>>()?;
    let ws = input
        .weights
        .weights()
        .iter()
        .map(|w| w.alpha_cut(alpha))
        .collect::<Result<Vec<_>>>()?;

    let lower_sum: f64 = ws.iter().map(Interval::lo).sum();
    let upper_sum: f64 = ws.iter().map(Interval::hi).sum();
    if lower_sum > 1.0 + FEASIBILITY_TOL {
        return Err(Error::InfeasibleWeights {
            alpha,
            detail: format!("lower weight bounds sum to {lower_sum}, above 1"),
        });
    }
    if upper_sum < 1.0 - FEASIBILITY_TOL {
        return Err(Error::InfeasibleWeights {
            alpha,
            detail: format!("upper weight bounds sum to {upper_sum}, below 1"),
        });
    }

    let lo_scores: Vec<f64> = xs.iter().map(Interval::lo).collect();
    let hi_scores: Vec<f64> = xs.iter().map(Interval::hi).collect();
    let lo = saturate(&lo_scores, &ws, false);
    let hi = saturate(&hi_scores, &ws, true);
    // Scores lie in [0, 1] and weights on the simplex, so rounding is the
    // only way out of the unit interval.
    let lo = lo.clamp(0.0, 1.0);
    let hi = hi.clamp(lo, 1.0);
    Interval::new(lo, hi)
}

/// Extreme of `Σ xᵢwᵢ` over `wᵢ ∈ boxes[i]`, `Σ wᵢ = 1`.
fn saturate(xs: &[f64], boxes: &[Interval], maximize: bool) -> f64 {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| {
        let ord = xs[i].total_cmp(&xs[j]);
        if maximize {
            ord.reverse().then(i.cmp(&j))
        } else {
            ord.then(i.cmp(&j))
        }
    });
    let mut weights: Vec<f64> = boxes.iter().map(Interval::lo).collect();
    let mut remaining = (1.0 - weights.iter().sum::<f64>()).max(0.0);
    for i in order {
        if remaining <= 0.0 {
            break;
        }
        let add = boxes[i].width().min(remaining);
        weights[i] += add;
        remaining -= add;
    }
    xs.iter().zip(&weights).map(|(x, w)| x * w).sum()
}

/// Triangular fuzzy total score `(u, v, z)`: support from the α = 0
/// interval, mode from the α = 1 interval.
pub fn fwa_tfn(scores: &[Tfn], weights: &FuzzyWeightVector) -> Result<Tfn> {
    let support = fwa_interval(&FwaInput {
        scores,
        weights,
        alpha: 0.0,
    })?;
    let core = fwa_interval(&FwaInput {
        scores,
        weights,
        alpha: 1.0,
    })?;
    let mode = support.clamp(core.midpoint());
    Tfn::new(support.lo(), mode, support.hi())
}
