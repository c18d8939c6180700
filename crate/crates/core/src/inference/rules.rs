use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fahp::LinguisticTerms;

use super::FuzzyVariable;

/// Conjunctive rule: `antecedent[v]` is the required term index of input
/// variable `v`, or `None` when the rule does not mention it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuzzyRule {
    pub antecedent: Vec<Option<usize>>,
    pub consequent: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RuleBase {
    rules: Vec<FuzzyRule>,
}

impl RuleBase {
    /// Rejects repeated antecedent combinations.
    pub fn new(rules: Vec<FuzzyRule>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, r) in rules.iter().enumerate() {
            if !seen.insert(&r.antecedent) {
                return Err(Error::InvalidRule(format!(
                    "rule {} repeats an earlier antecedent",
                    i + 1
                )));
            }
        }
        Ok(Self { rules })
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Render in the rule-file format accepted by [`parse_rule_base`].
    pub fn to_text(&self, inputs: &[FuzzyVariable], output: &FuzzyVariable) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            let parts: Vec<String> = rule
                .antecedent
                .iter()
                .enumerate()
                .filter_map(|(v, t)| {
                    t.map(|t| format!("{}={}", inputs[v].name(), inputs[v].terms()[t].0))
                })
                .collect();
            let _ = writeln!(
                out,
                "IF {} THEN {}={}",
                parts.join(" AND "),
                output.name(),
                output.terms()[rule.consequent].0
            );
        }
        out
    }
}

/// Full cross product of term indices; each rule concludes the term whose
/// index is the weighted mean of its antecedent indices, rounded with ties
/// going down.
pub fn generate_rule_base(
    n_inputs: usize,
    terms: &LinguisticTerms,
    crisp_weights: &[f64],
) -> Result<RuleBase> {
    if crisp_weights.len() != n_inputs {
        return Err(Error::Invalid(format!(
            "{} weights for {n_inputs} input variables",
            crisp_weights.len()
        )));
    }
    let total: f64 = crisp_weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 || crisp_weights.iter().any(|w| *w < 0.0) {
        return Err(Error::Invalid(format!(
            "rule generation needs normalized weights, got {crisp_weights:?}"
        )));
    }
    let t = terms.len();
    let count = t
        .checked_pow(n_inputs as u32)
        .filter(|c| *c <= 1 << 20)
        .ok_or_else(|| Error::Invalid(format!("{t}^{n_inputs} rules is too many to generate")))?;
    let mut rules = Vec::with_capacity(count);
    let mut idx = vec![0usize; n_inputs];
    for _ in 0..count {
        let weighted: f64 = idx
            .iter()
            .zip(crisp_weights)
            .map(|(&i, w)| i as f64 * w)
            .sum();
        let consequent = ((weighted - 0.5 - 1e-9).ceil().max(0.0) as usize).min(t - 1);
        rules.push(FuzzyRule {
            antecedent: idx.iter().map(|&i| Some(i)).collect(),
            consequent,
        });
        // Odometer increment, last variable fastest.
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < t {
                break;
            }
            *slot = 0;
        }
    }
    RuleBase::new(rules)
}

/// Parse `IF <col>=<term> AND ... THEN <output>=<term>` lines.
///
/// Keywords, variable names and term names are case-insensitive. Blank lines
/// and lines starting with `#` are ignored.
pub fn parse_rule_base(
    text: &str,
    inputs: &[FuzzyVariable],
    output: &FuzzyVariable,
) -> Result<RuleBase> {
    let mut rules = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::RuleParse {
            line: lineno + 1,
            message,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !tokens.first().is_some_and(|t| t.eq_ignore_ascii_case("IF")) {
            return Err(err("expected a line starting with IF".into()));
        }
        let then_pos = tokens
            .iter()
            .position(|t| t.eq_ignore_ascii_case("THEN"))
            .ok_or_else(|| err("missing THEN".into()))?;
        let antecedent_text = tokens[1..then_pos].join(" ");
        let consequent_text = tokens[then_pos + 1..].join(" ");

        let mut antecedent = vec![None; inputs.len()];
        let clauses = split_and(&antecedent_text);
        if clauses.iter().all(|c| c.is_empty()) {
            return Err(err("empty antecedent".into()));
        }
        for clause in clauses {
            let (var, term) = split_clause(&clause)
                .ok_or_else(|| err(format!("expected <column>=<term>, got {clause:?}")))?;
            let v = inputs
                .iter()
                .position(|iv| iv.name().eq_ignore_ascii_case(var))
                .ok_or_else(|| err(format!("unknown column {var:?}")))?;
            let t = inputs[v]
                .term_index(term)
                .ok_or_else(|| err(format!("unknown term {term:?} for column {var:?}")))?;
            if antecedent[v].replace(t).is_some() {
                return Err(err(format!("column {var:?} appears twice")));
            }
        }
        let (var, term) = split_clause(&consequent_text)
            .ok_or_else(|| err(format!("expected {}=<term> after THEN", output.name())))?;
        if !var.eq_ignore_ascii_case(output.name()) {
            return Err(err(format!(
                "consequent must name {:?}, got {var:?}",
                output.name()
            )));
        }
        let consequent = output
            .term_index(term)
            .ok_or_else(|| err(format!("unknown output term {term:?}")))?;
        if !seen.insert(antecedent.clone()) {
            return Err(err("antecedent repeats an earlier rule".into()));
        }
        rules.push(FuzzyRule {
            antecedent,
            consequent,
        });
    }
    if rules.is_empty() {
        return Err(Error::RuleParse {
            line: 0,
            message: "no rules found".into(),
        });
    }
    RuleBase::new(rules)
}

fn split_and(text: &str) -> Vec<String> {
    let mut clauses = vec![String::new()];
    for tok in text.split_whitespace() {
        if tok.eq_ignore_ascii_case("AND") {
            clauses.push(String::new());
        } else {
            let cur = clauses.last_mut().expect("non-empty");
            cur.push_str(tok);
        }
    }
    clauses
}

fn split_clause(clause: &str) -> Option<(&str, &str)> {
    let (var, term) = clause.split_once('=')?;
    let (var, term) = (var.trim(), term.trim());
    (!var.is_empty() && !term.is_empty() && !term.contains('=')).then_some((var, term))
}
