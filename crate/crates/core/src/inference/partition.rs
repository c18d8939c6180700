use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fahp::LinguisticTerms;
use crate::fuzzy::{FuzzySet, Interval, Shoulder, Tfn};

/// How term peaks are placed over a variable's universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionMode {
    /// Peaks equally spaced from the lower to the upper bound.
    #[default]
    Equal,
    /// Peaks at evenly spaced quantiles of the observed values.
    Quantile,
}

/// A named universe partitioned into linguistic terms.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyVariable {
    name: String,
    universe: Interval,
    terms: Vec<(String, FuzzySet)>,
    degenerate: bool,
}

impl FuzzyVariable {
    /// Checks that supports lie in the universe and that the terms cover it.
    pub fn new(
        name: impl Into<String>,
        universe: Interval,
        terms: Vec<(String, FuzzySet)>,
    ) -> Result<Self> {
        let name = name.into();
        if terms.is_empty() {
            return Err(Error::Invalid(format!("variable {name:?} has no terms")));
        }
        for (t, set) in &terms {
            if !set.tfn().support().is_subset_of(&universe) {
                return Err(Error::Invalid(format!(
                    "term {t:?} of {name:?} reaches outside the universe [{}, {}]",
                    universe.lo(),
                    universe.hi()
                )));
            }
        }
        let var = Self {
            name,
            universe,
            terms,
            degenerate: universe.is_degenerate(),
        };
        if let Some(x) = var.uncovered_point() {
            return Err(Error::Invalid(format!(
                "terms of {:?} leave {x} uncovered",
                var.name
            )));
        }
        Ok(var)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> Interval {
        self.universe
    }

    pub fn terms(&self) -> &[(String, FuzzySet)] {
        &self.terms
    }

    /// The universe collapsed to a single point.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn term_index(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        self.terms
            .iter()
            .position(|(t, _)| t.eq_ignore_ascii_case(name))
    }

    /// Membership of `x`, clamped into the universe, in every term.
    pub fn fuzzify(&self, x: f64) -> Vec<f64> {
        let x = self.universe.clamp(x);
        self.terms
            .iter()
            .map(|(_, set)| set.membership(x))
            .collect()
    }

    /// A point of the universe where no term has positive membership,
    /// found by probing term vertices and the midpoints between them.
    fn uncovered_point(&self) -> Option<f64> {
        let mut probes: Vec<f64> = vec![self.universe.lo(), self.universe.hi()];
        for (_, s) in &self.terms {
            let t = s.tfn();
            probes.extend([t.a(), t.b(), t.c()]);
        }
        probes.retain(|p| self.universe.contains(*p));
        probes.sort_by(f64::total_cmp);
        probes.dedup();
        let mids: Vec<f64> = probes.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
        probes
            .into_iter()
            .chain(mids)
            .find(|&x| self.fuzzify(x).iter().all(|&m| m <= 0.0))
    }
}

/// Ruspini partition with equally spaced peaks over `universe`.
///
/// Interior terms are triangles between neighbouring peaks, the first term
/// is a left shoulder and the last a right shoulder, so memberships sum to
/// one everywhere on the universe. A degenerate universe collapses every
/// term onto its single point (see [`FuzzyVariable::is_degenerate`]).
pub fn build_partition(
    name: &str,
    universe: Interval,
    terms: &LinguisticTerms,
) -> Result<FuzzyVariable> {
    let n = terms.len();
    if n < 2 {
        return Err(Error::Invalid(
            "a partition needs at least two terms".into(),
        ));
    }
    let step = universe.width() / (n - 1) as f64;
    let peaks: Vec<f64> = (0..n)
        .map(|k| {
            if k == n - 1 {
                universe.hi()
            } else {
                universe.lo() + step * k as f64
            }
        })
        .collect();
    build_partition_with_peaks(name, &peaks, terms)
}

/// Ruspini partition with explicit, non-decreasing peaks.
pub fn build_partition_with_peaks(
    name: &str,
    peaks: &[f64],
    terms: &LinguisticTerms,
) -> Result<FuzzyVariable> {
    let n = terms.len();
    if peaks.len() != n {
        return Err(Error::Invalid(format!(
            "{} peaks for {n} terms",
            peaks.len()
        )));
    }
    if peaks.windows(2).any(|w| w[0] > w[1]) || peaks.iter().any(|p| !p.is_finite()) {
        return Err(Error::Invalid(format!(
            "partition peaks must be finite and ordered: {peaks:?}"
        )));
    }
    let universe = Interval::new(peaks[0], peaks[n - 1])?;
    let mut sets = Vec::with_capacity(n);
    for (k, name) in terms.names().iter().enumerate() {
        let left = if k == 0 { peaks[0] } else { peaks[k - 1] };
        let right = if k == n - 1 {
            peaks[n - 1]
        } else {
            peaks[k + 1]
        };
        let shoulder = match k {
            0 => Shoulder::Left,
            k if k == n - 1 => Shoulder::Right,
            _ => Shoulder::None,
        };
        sets.push((
            name.clone(),
            FuzzySet::new(Tfn::new(left, peaks[k], right)?, shoulder)?,
        ));
    }
    FuzzyVariable::new(name, universe, sets)
}

/// Peaks at the `k/(n-1)` quantiles of `values`; `None` unless they are
/// strictly increasing.
pub fn quantile_peaks(values: &[f64], n_terms: usize) -> Option<Vec<f64>> {
    if values.is_empty() || n_terms < 2 {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let last = (sorted.len() - 1) as f64;
    let peaks: Vec<f64> = (0..n_terms)
        .map(|k| {
            let pos = last * k as f64 / (n_terms - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
        })
        .collect();
    peaks.windows(2).all(|w| w[0] < w[1]).then_some(peaks)
}
