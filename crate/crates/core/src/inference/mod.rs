//! Linguistic variables, fuzzy rule bases and Mamdani inference.
//!
//! Inference uses min for conjunction, min for implication, max for
//! aggregation and the discrete centroid over 1001 points of the output
//! universe for defuzzification.

mod partition;
mod rules;

pub use partition::{
    build_partition, build_partition_with_peaks, quantile_peaks, FuzzyVariable, PartitionMode,
};
pub use rules::{generate_rule_base, parse_rule_base, FuzzyRule, RuleBase};

use crate::error::{Error, Result};

/// Points of the output universe used for the centroid.
pub const OUTPUT_RESOLUTION: usize = 1001;

/// Defuzzified output of one inference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inference {
    pub value: f64,
    /// No rule fired; `value` is the midpoint of the output universe.
    pub fallback: bool,
}

/// An immutable Mamdani controller.
#[derive(Debug, Clone)]
pub struct MamdaniModel {
    inputs: Vec<FuzzyVariable>,
    output: FuzzyVariable,
    rules: RuleBase,
    grid: Vec<f64>,
    /// `grid_membership[t][k]` is the membership of `grid[k]` in output term `t`.
    grid_membership: Vec<Vec<f64>>,
}

impl MamdaniModel {
    pub fn new(inputs: Vec<FuzzyVariable>, output: FuzzyVariable, rules: RuleBase) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::InvalidRule("empty rule base".into()));
        }
        for (r, rule) in rules.rules().iter().enumerate() {
            if rule.antecedent.len() != inputs.len() {
                return Err(Error::InvalidRule(format!(
                    "rule {} has {} antecedent slots for {} input variables",
                    r + 1,
                    rule.antecedent.len(),
                    inputs.len()
                )));
            }
            for (v, term) in rule.antecedent.iter().enumerate() {
                if let Some(t) = term {
                    if *t >= inputs[v].terms().len() {
                        return Err(Error::InvalidRule(format!(
                            "rule {} uses term #{t} of {:?}, which has {} terms",
                            r + 1,
                            inputs[v].name(),
                            inputs[v].terms().len()
                        )));
                    }
                }
            }
            if rule.consequent >= output.terms().len() {
                return Err(Error::InvalidRule(format!(
                    "rule {} concludes term #{} of {:?}",
                    r + 1,
                    rule.consequent,
                    output.name()
                )));
            }
        }
        let universe = output.universe();
        let step = universe.width() / (OUTPUT_RESOLUTION - 1) as f64;
        let grid: Vec<f64> = (0..OUTPUT_RESOLUTION)
            .map(|k| {
                if k == OUTPUT_RESOLUTION - 1 {
                    universe.hi()
                } else {
                    universe.lo() + step * k as f64
                }
            })
            .collect();
        let grid_membership = output
            .terms()
            .iter()
            .map(|(_, set)| grid.iter().map(|&x| set.membership(x)).collect())
            .collect();
        Ok(Self {
            inputs,
            output,
            rules,
            grid,
            grid_membership,
        })
    }

    pub fn inputs(&self) -> &[FuzzyVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &FuzzyVariable {
        &self.output
    }

    pub fn rules(&self) -> &RuleBase {
        &self.rules
    }

    /// Strength with which each output term is asserted by the rule base.
    pub fn activations(&self, scores: &[f64]) -> Result<Vec<f64>> {
        if scores.len() != self.inputs.len() {
            return Err(Error::Invalid(format!(
                "{} scores for {} input variables",
                scores.len(),
                self.inputs.len()
            )));
        }
        let fuzzified: Vec<Vec<f64>> = self
            .inputs
            .iter()
            .zip(scores)
            .map(|(var, &x)| var.fuzzify(x))
            .collect();
        let mut activation = vec![0.0f64; self.output.terms().len()];
        for rule in self.rules.rules() {
            let strength = rule
                .antecedent
                .iter()
                .enumerate()
                .filter_map(|(v, t)| t.map(|t| fuzzified[v][t]))
                .fold(1.0f64, f64::min);
            // Clipping one term at several strengths and max-aggregating is
            // the same as clipping it once at the largest strength.
            let slot = &mut activation[rule.consequent];
            *slot = slot.max(strength);
        }
        Ok(activation)
    }

    pub fn infer(&self, scores: &[f64]) -> Result<Inference> {
        let activation = self.activations(scores)?;
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, &x) in self.grid.iter().enumerate() {
            let mu = activation
                .iter()
                .zip(&self.grid_membership)
                .map(|(&a, m)| a.min(m[k]))
                .fold(0.0f64, f64::max);
            num += x * mu;
            den += mu;
        }
        let universe = self.output.universe();
        if den <= 0.0 {
            return Ok(Inference {
                value: universe.midpoint(),
                fallback: true,
            });
        }
        Ok(Inference {
            value: universe.clamp(num / den),
            fallback: false,
        })
    }
}
