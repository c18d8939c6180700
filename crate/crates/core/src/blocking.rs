//! Candidate-pair generation: full cross product, crisp equality blocking and
//! fuzzy-neighborhood blocking.
//!
//! Fuzzy blocking grades every pair by `μ = 1 - d / d_max`, where `d` is the
//! Levenshtein distance between the normalized blocking values, and keeps the
//! pairs whose membership reaches the threshold `λ`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::similarity::{levenshtein_distance, normalize_text};

/// Population over which `d_max` is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DmaxScope {
    /// Largest distance actually observed over the cross product.
    #[default]
    CrossProduct,
    /// Longest normalized field value, an upper bound on any distance.
    MaxFieldLength,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum Constraint {
    #[default]
    None,
    Crisp {
        field: String,
    },
    Fuzzy {
        field: String,
        lambda: f64,
        dmax: DmaxScope,
    },
}

impl Constraint {
    pub fn field(&self) -> Option<&str> {
        match self {
            Constraint::None => None,
            Constraint::Crisp { field } | Constraint::Fuzzy { field, .. } => Some(field),
        }
    }
}

/// A blocked record pair and its constraint membership.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidatePair {
    pub left: usize,
    pub right: usize,
    pub mu_c: f64,
}

impl CandidatePair {
    pub fn crisp(left: usize, right: usize) -> Self {
        Self {
            left,
            right,
            mu_c: 1.0,
        }
    }
}

pub fn block(
    left: &Dataset,
    right: &Dataset,
    constraint: &Constraint,
) -> Result<Vec<CandidatePair>> {
    match constraint {
        Constraint::None => Ok(full_cross(left, right)),
        Constraint::Crisp { field } => crisp_block(left, right, field),
        Constraint::Fuzzy {
            field,
            lambda,
            dmax,
        } => fuzzy_neighborhood_block(left, right, field, *lambda, *dmax),
    }
}

/// Number of pairs in the unconstrained search space.
pub fn cross_size(left_len: usize, right_len: usize) -> u64 {
    left_len as u64 * right_len as u64
}

pub fn full_cross(left: &Dataset, right: &Dataset) -> Vec<CandidatePair> {
    (0..left.len())
        .flat_map(|i| (0..right.len()).map(move |j| CandidatePair::crisp(i, j)))
        .collect()
}

fn field_values(data: &Dataset, field: &str) -> Result<Vec<String>> {
    let col = data
        .column_index(field)
        .ok_or_else(|| Error::Config(format!("unknown blocking field {field:?}")))?;
    Ok((0..data.len())
        .map(|row| normalize_text(data.value(row, col).unwrap_or("")).into_owned())
        .collect())
}

/// Groups row indices by value, keeping first-seen value order.
fn distinct(values: &[String]) -> (Vec<&str>, Vec<usize>) {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut uniq = Vec::new();
    let assignment = values
        .iter()
        .map(|v| {
            *ids.entry(v.as_str()).or_insert_with(|| {
                uniq.push(v.as_str());
                uniq.len() - 1
            })
        })
        .collect();
    (uniq, assignment)
}

fn rows_by_value(assignment: &[usize], n_values: usize) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); n_values];
    for (row, v) in assignment.iter().enumerate() {
        groups[*v].push(row);
    }
    groups
}

/// Pairs whose normalized blocking values are equal, each with `μ = 1`.
pub fn crisp_block(left: &Dataset, right: &Dataset, field: &str) -> Result<Vec<CandidatePair>> {
    let lv = field_values(left, field)?;
    let rv = field_values(right, field)?;
    let mut by_value: HashMap<&str, Vec<usize>> = HashMap::new();
    for (j, v) in rv.iter().enumerate() {
        by_value.entry(v.as_str()).or_default().push(j);
    }
    let mut out = Vec::new();
    for (i, v) in lv.iter().enumerate() {
        if let Some(rows) = by_value.get(v.as_str()) {
            out.extend(rows.iter().map(|&j| CandidatePair::crisp(i, j)));
        }
    }
    Ok(out)
}

/// The α-support set (`μ >= λ`) of the fuzzy-neighborhood constraint.
pub fn fuzzy_neighborhood_block(
    left: &Dataset,
    right: &Dataset,
    field: &str,
    lambda: f64,
    scope: DmaxScope,
) -> Result<Vec<CandidatePair>> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Config(format!(
            "fuzzy constraint lambda must lie in [0, 1], got {lambda}"
        )));
    }
    let lv = field_values(left, field)?;
    let rv = field_values(right, field)?;
    let (l_uniq, l_assign) = distinct(&lv);
    let (r_uniq, r_assign) = distinct(&rv);

    // Distances between distinct values only; rows sharing a value share it.
    let distances: Vec<Vec<usize>> = l_uniq
        .par_iter()
        .map(|s| r_uniq.iter().map(|t| levenshtein_distance(s, t)).collect())
        .collect();
    let d_max = match scope {
        DmaxScope::CrossProduct => distances.iter().flatten().copied().max().unwrap_or(0),
        DmaxScope::MaxFieldLength => l_uniq
            .iter()
            .chain(&r_uniq)
            .map(|v| v.graphemes(true).count())
            .max()
            .unwrap_or(0),
    };
    let membership = |d: usize| {
        if d_max == 0 {
            1.0
        } else {
            (1.0 - d as f64 / d_max as f64).clamp(0.0, 1.0)
        }
    };

    let r_groups = rows_by_value(&r_assign, r_uniq.len());
    let mut out = Vec::new();
    let mut row_pairs = Vec::new();
    for (i, &lval) in l_assign.iter().enumerate() {
        row_pairs.clear();
        for (rval, rows) in r_groups.iter().enumerate() {
            let mu = membership(distances[lval][rval]);
            if mu >= lambda {
                row_pairs.extend(rows.iter().map(|&j| CandidatePair {
                    left: i,
                    right: j,
                    mu_c: mu,
                }));
            }
        }
        row_pairs.sort_by_key(|p| p.right);
        out.extend_from_slice(&row_pairs);
    }
    Ok(out)
}
