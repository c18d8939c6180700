//! Fuzzy weights for link columns from linguistic relevance terms, using the
//! geometric-mean fuzzy AHP.
//!
//! Each relevance term becomes a unit-spread triangular rank on the number
//! scale. Column `i` is compared with column `j` by fuzzy division of their
//! ranks, the fuzzy geometric mean of each comparison row is taken, and the
//! row means are divided by their fuzzy sum. The resulting weights are then
//! scaled so that their modes add up to one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{normalize, Tfn};

/// Ordered linguistic term names, lowest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinguisticTerms(Vec<String>);

impl Default for LinguisticTerms {
    fn default() -> Self {
        Self(vec!["low".into(), "medium".into(), "high".into()])
    }
}

impl LinguisticTerms {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names
            .into_iter()
            .map(|s| s.into().trim().to_string())
            .collect();
        if names.len() < 2 {
            return Err(Error::Config(
                "at least two linguistic terms are required".into(),
            ));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Config("empty linguistic term name".into()));
            }
            if names[..i].iter().any(|m| m.eq_ignore_ascii_case(n)) {
                return Err(Error::Config(format!("duplicate linguistic term {n:?}")));
            }
        }
        Ok(Self(names))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Case-insensitive lookup of a term's 0-based index.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        self.0.iter().position(|n| n.eq_ignore_ascii_case(name))
    }

    pub fn term(&self, name: &str) -> Result<RelevanceTerm> {
        let idx = self
            .index_of(name)
            .ok_or_else(|| Error::Config(format!("unknown linguistic term {name:?}")))?;
        Ok(RelevanceTerm {
            name: self.0[idx].clone(),
            rank: idx + 1,
        })
    }
}

/// A relevance term and its 1-based position in the term ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevanceTerm {
    pub name: String,
    pub rank: usize,
}

/// Unit-spread triangular rank `(max(r - 1, 1), r, min(r + 1, scale))`.
pub fn term_to_fuzzy_rank(term: &RelevanceTerm, scale: usize) -> Result<Tfn> {
    if scale < 2 {
        return Err(Error::Config(format!(
            "fuzzy number scale must be at least 2, got {scale}"
        )));
    }
    if term.rank == 0 || term.rank > scale {
        return Err(Error::Config(format!(
            "term {:?} has rank {} outside the {scale}-point scale",
            term.name, term.rank
        )));
    }
    let r = term.rank as f64;
    Tfn::new((r - 1.0).max(1.0), r, (r + 1.0).min(scale as f64))
}

/// Fuzzy weights, one per link column.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyWeightVector {
    weights: Vec<Tfn>,
}

impl FuzzyWeightVector {
    pub fn new(weights: Vec<Tfn>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("fuzzy weight vector"));
        }
        if let Some(w) = weights.iter().find(|w| w.a() < 0.0) {
            return Err(Error::Invalid(format!(
                "fuzzy weight {w:?} has a negative endpoint"
            )));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[Tfn] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn mode_sum(&self) -> f64 {
        self.weights.iter().map(Tfn::b).sum()
    }

    /// Whether the modes sum to one within `tol`.
    pub fn is_normal(&self, tol: f64) -> bool {
        (self.mode_sum() - 1.0).abs() <= tol
    }

    /// Divide every vertex by the sum of modes.
    pub fn fwa_normalized(&self) -> Result<Self> {
        let total = self.mode_sum();
        if total <= 0.0 {
            return Err(Error::Normalize("fuzzy weight modes sum to zero".into()));
        }
        let weights = self
            .weights
            .iter()
            .map(|w| w.scale(1.0 / total))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { weights })
    }
}

fn fuzzy_divide(x: &Tfn, y: &Tfn) -> (f64, f64, f64) {
    (x.a() / y.c(), x.b() / y.b(), x.c() / y.a())
}

/// Geometric-mean FAHP over the relevance terms of the link columns.
pub fn fahp_geometric_mean(terms: &[RelevanceTerm], scale: usize) -> Result<FuzzyWeightVector> {
    if terms.is_empty() {
        return Err(Error::Empty("relevance terms"));
    }
    let ranks = terms
        .iter()
        .map(|t| term_to_fuzzy_rank(t, scale))
        .collect::<Result<Vec<_>>>()?;
    let n = ranks.len() as f64;

    let row_means: Vec<(f64, f64, f64)> = ranks
        .iter()
        .map(|ri| {
            let (mut l, mut m, mut u) = (1.0, 1.0, 1.0);
            for rj in &ranks {
                let (cl, cm, cu) = fuzzy_divide(ri, rj);
                l *= cl;
                m *= cm;
                u *= cu;
            }
            (l.powf(1.0 / n), m.powf(1.0 / n), u.powf(1.0 / n))
        })
        .collect();

    let sum_l: f64 = row_means.iter().map(|g| g.0).sum();
    let sum_m: f64 = row_means.iter().map(|g| g.1).sum();
    let sum_u: f64 = row_means.iter().map(|g| g.2).sum();

    let weights = row_means
        .iter()
        .map(|&(l, m, u)| Tfn::new(l / sum_u, m / sum_m, u / sum_l))
        .collect::<Result<Vec<_>>>()?;
    FuzzyWeightVector::new(weights)?.fwa_normalized()
}

/// Centroid-defuzzify each weight and normalize the results to sum to one.
pub fn crisp_weights(weights: &FuzzyWeightVector) -> Result<Vec<f64>> {
    let centroids: Vec<f64> = weights.weights().iter().map(Tfn::centroid).collect();
    normalize(&centroids)
}
