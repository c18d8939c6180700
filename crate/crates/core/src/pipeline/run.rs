//! End-to-end linkage: block, score, weigh, estimate total scores, cluster.

use std::collections::HashSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines::{
    deterministic_link, estimate_mu, probabilistic_link, probabilistic_weights, BaselineDecision,
    LabeledPair,
};
use crate::blocking::{block, CandidatePair};
use crate::clustering::{assign_best, fcm, ClusterLabeling, MATCH, NON_MATCH};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fahp::{crisp_weights, fahp_geometric_mean, FuzzyWeightVector};
use crate::fuzzy::{normalize, Tfn};
use crate::fwa::{column_score_tfn, fwa_interval, FwaInput};
use crate::inference::{
    build_partition, build_partition_with_peaks, generate_rule_base, parse_rule_base,
    quantile_peaks, FuzzyVariable, MamdaniModel, PartitionMode,
};
use crate::similarity::exact_sim;

use super::config::{LinkageConfig, LinkageType, LogicType};

/// Name of the total-score output variable in rule files.
pub const SCORE_VARIABLE: &str = "score";

/// Binarize: 1 when a score reaches its column threshold, else 0.
pub fn apply_boolean_logic(scores: &[f64], thresholds: &[f64]) -> Vec<f64> {
    scores
        .iter()
        .zip(thresholds)
        .map(|(s, th)| if s >= th { 1.0 } else { 0.0 })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrispScore {
    pub ts: f64,
    /// `sᵢ·wᵢ` per column.
    pub weighted: Vec<f64>,
}

/// Weighted average `Σ sᵢwᵢ` of match scores under normalized weights.
pub fn score_pair_crisp(scores: &[f64], weights: &[f64]) -> CrispScore {
    let weighted: Vec<f64> = scores.iter().zip(weights).map(|(s, w)| s * w).collect();
    let ts = weighted.iter().sum::<f64>().clamp(0.0, 1.0);
    CrispScore { ts, weighted }
}

/// Blocked pairs with their per-column raw match scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSpace {
    pub pairs: Vec<CandidatePair>,
    pub raw: Vec<Vec<f64>>,
    /// Pairs with at least one column absent on either side.
    pub pairs_with_missing: usize,
}

fn resolve_columns(
    config: &LinkageConfig,
    left: &Dataset,
    right: &Dataset,
) -> Result<Vec<(usize, usize)>> {
    config
        .columns
        .iter()
        .map(|c| {
            let l = left.column_index(&c.spec.left).ok_or_else(|| {
                Error::Config(format!("left dataset has no column {:?}", c.spec.left))
            })?;
            let r = right.column_index(&c.spec.right).ok_or_else(|| {
                Error::Config(format!("right dataset has no column {:?}", c.spec.right))
            })?;
            Ok((l, r))
        })
        .collect()
}

impl ScoredSpace {
    pub fn build(config: &LinkageConfig, left: &Dataset, right: &Dataset) -> Result<Self> {
        if let Some(field) = config.constraint.field() {
            for (side, data) in [("left", left), ("right", right)] {
                if !data.has_column(field) {
                    return Err(Error::Config(format!(
                        "{side} dataset has no blocking column {field:?}"
                    )));
                }
            }
        }
        let cols = resolve_columns(config, left, right)?;
        let pairs = block(left, right, &config.constraint)?;
        let scored: Vec<(Vec<f64>, bool)> = pairs
            .par_iter()
            .map(|p| {
                let mut missing = false;
                let scores = cols
                    .iter()
                    .zip(&config.columns)
                    .map(|(&(lc, rc), col)| {
                        match (left.value(p.left, lc), right.value(p.right, rc)) {
                            (Some(s), Some(t)) => col.spec.matcher.similarity(s, t),
                            _ => {
                                missing = true;
                                0.0
                            }
                        }
                    })
                    .collect();
                (scores, missing)
            })
            .collect();
        let pairs_with_missing = scored.iter().filter(|(_, m)| *m).count();
        Ok(Self {
            pairs,
            raw: scored.into_iter().map(|(s, _)| s).collect(),
            pairs_with_missing,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPair {
    pub left: usize,
    pub right: usize,
    pub mu_c: f64,
    pub raw_scores: Vec<f64>,
    /// Present in crisp linkage only.
    pub weighted_scores: Option<Vec<f64>>,
    pub ts: f64,
    /// One entry per label of the run's labeling.
    pub memberships: Vec<f64>,
    /// Index into the run's labels.
    pub label: usize,
}

/// Per-strategy counts of pairs in each label.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkageReport {
    pub strategy: String,
    pub total_pairs: usize,
    pub labels: Vec<String>,
    pub counts: Vec<usize>,
    pub elapsed: Duration,
}

impl LinkageReport {
    pub fn count(&self, label: &str) -> usize {
        self.labels
            .iter()
            .zip(&self.counts)
            .filter(|(l, _)| l.as_str() == label)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn matches(&self) -> usize {
        self.count(MATCH)
    }

    pub fn non_matches(&self) -> usize {
        self.count(NON_MATCH)
    }

    /// Everything between the lowest and the highest band.
    pub fn possible_matches(&self) -> usize {
        self.total_pairs - self.matches() - self.non_matches()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkageRun {
    pub strategy: String,
    /// Output labels of the link columns.
    pub columns: Vec<String>,
    pub labels: Vec<String>,
    pub pairs: Vec<ScoredPair>,
    pub report: LinkageReport,
    pub diagnostics: Vec<String>,
}

impl LinkageRun {
    pub fn label_of(&self, pair: &ScoredPair) -> &str {
        &self.labels[pair.label]
    }
}

fn report_for(
    strategy: &str,
    labels: &[String],
    pairs: &[ScoredPair],
    started: Instant,
) -> LinkageReport {
    let mut counts = vec![0; labels.len()];
    for p in pairs {
        counts[p.label] += 1;
    }
    LinkageReport {
        strategy: strategy.to_string(),
        total_pairs: pairs.len(),
        labels: labels.to_vec(),
        counts,
        elapsed: started.elapsed(),
    }
}

/// Read the FRL configuration's inputs from disk and link them.
pub fn run_linkage_files(config: &LinkageConfig, left: &Path, right: &Path) -> Result<LinkageRun> {
    let left = Dataset::from_csv_path(left)?;
    let right = Dataset::from_csv_path(right)?;
    run_linkage(config, &left, &right)
}

pub fn run_linkage(config: &LinkageConfig, left: &Dataset, right: &Dataset) -> Result<LinkageRun> {
    let started = Instant::now();
    let space = ScoredSpace::build(config, left, right)?;
    link_space_since(config, &space, started)
}

/// Total scores for every pair of an already scored space under the
/// configured logic and linkage types.
pub fn link_space(config: &LinkageConfig, space: &ScoredSpace) -> Result<LinkageRun> {
    link_space_since(config, space, Instant::now())
}

/// FAHP fuzzy weights of the configured relevance terms.
pub fn fahp_weights(config: &LinkageConfig) -> Result<FuzzyWeightVector> {
    fahp_geometric_mean(&config.relevance_terms(), config.scale)
}

fn link_space_since(
    config: &LinkageConfig,
    space: &ScoredSpace,
    started: Instant,
) -> Result<LinkageRun> {
    let mut diagnostics = config.notices.clone();
    if space.pairs_with_missing > 0 {
        diagnostics.push(format!(
            "{} pairs had a missing field, scored as 0",
            space.pairs_with_missing
        ));
    }
    let n = config.columns.len();

    let (ts, weighted): (Vec<f64>, Option<Vec<Vec<f64>>>) = match (config.logic, config.linkage) {
        (LogicType::Boolean, _) => {
            let weights = normalize(config.crisp_weights.as_deref().unwrap_or(&vec![1.0; n]))?;
            let thresholds = config.thresholds();
            let scored: Vec<CrispScore> = space
                .raw
                .par_iter()
                .map(|s| score_pair_crisp(&apply_boolean_logic(s, &thresholds), &weights))
                .collect();
            split_crisp(scored)
        }
        (LogicType::Fuzzy, LinkageType::Crisp) => {
            let weights = crisp_weights(&fahp_weights(config)?)?;
            let scored: Vec<CrispScore> = space
                .raw
                .par_iter()
                .map(|s| score_pair_crisp(s, &weights))
                .collect();
            split_crisp(scored)
        }
        (LogicType::Fuzzy, LinkageType::Fuzzy) => {
            if space.is_empty() {
                (Vec::new(), None)
            } else {
                let model = build_fuzzy_model(config, space, &mut diagnostics)?;
                let outputs = space
                    .raw
                    .par_iter()
                    .map(|s| model.infer(s))
                    .collect::<Result<Vec<_>>>()?;
                let fallbacks = outputs.iter().filter(|o| o.fallback).count();
                if fallbacks > 0 {
                    diagnostics.push(format!(
                        "{fallbacks} pairs fired no rule and took the midpoint of the score universe"
                    ));
                }
                (outputs.into_iter().map(|o| o.value).collect(), None)
            }
        }
    };

    let labeling = ClusterLabeling::standard(config.fcm.clusters);
    let pairs = if ts.is_empty() {
        Vec::new()
    } else {
        let clusters = fcm(&ts, &config.fcm)?;
        if let Some((requested, used)) = clusters.collapsed {
            diagnostics.push(format!(
                "only {used} distinct total scores; clustering with {used} instead of {requested} clusters"
            ));
        }
        if !clusters.converged {
            diagnostics.push(format!(
                "fuzzy c-means stopped after {} iterations without converging",
                clusters.iterations
            ));
        }
        let assignments = assign_best(&clusters, &labeling)?;
        let mut weighted = weighted.map(Vec::into_iter);
        space
            .pairs
            .iter()
            .zip(&space.raw)
            .zip(ts.iter().zip(assignments))
            .map(|((p, raw), (&ts, a))| ScoredPair {
                left: p.left,
                right: p.right,
                mu_c: p.mu_c,
                raw_scores: raw.clone(),
                weighted_scores: weighted.as_mut().and_then(Iterator::next),
                ts,
                memberships: a.memberships,
                label: a.label,
            })
            .collect()
    };

    let strategy = config.strategy_name();
    let labels = labeling.labels().to_vec();
    let report = report_for(&strategy, &labels, &pairs, started);
    Ok(LinkageRun {
        strategy,
        columns: config.columns.iter().map(|c| c.label()).collect(),
        labels,
        pairs,
        report,
        diagnostics,
    })
}

fn split_crisp(scored: Vec<CrispScore>) -> (Vec<f64>, Option<Vec<Vec<f64>>>) {
    let (ts, weighted) = scored.into_iter().map(|c| (c.ts, c.weighted)).unzip();
    (ts, Some(weighted))
}

/// Partition over a column's observed scores, equal or quantile spaced.
fn column_variable(
    config: &LinkageConfig,
    name: &str,
    scores: &[f64],
    tfn: &Tfn,
    diagnostics: &mut Vec<String>,
) -> Result<FuzzyVariable> {
    if tfn.a() == tfn.c() {
        diagnostics.push(format!(
            "all {name} scores equal {}; its terms collapse to that point",
            tfn.a()
        ));
    }
    if config.partition == PartitionMode::Quantile {
        if let Some(peaks) = quantile_peaks(scores, config.terms.len()) {
            return build_partition_with_peaks(name, &peaks, &config.terms);
        }
        diagnostics.push(format!("{name}: quantiles coincide, using equal spacing"));
    }
    build_partition(name, tfn.support(), &config.terms)
}

/// Fuzzy-linkage controller: column partitions over observed score ranges,
/// the total-score partition over the fuzzy weighted average, and the rule
/// base from file or generated from the defuzzified FAHP weights.
pub fn build_fuzzy_model(
    config: &LinkageConfig,
    space: &ScoredSpace,
    diagnostics: &mut Vec<String>,
) -> Result<MamdaniModel> {
    let fuzzy_weights = fahp_weights(config)?;
    let n = config.columns.len();
    let mut column_tfns = Vec::with_capacity(n);
    let mut inputs = Vec::with_capacity(n);
    for (i, col) in config.columns.iter().enumerate() {
        let scores: Vec<f64> = space.raw.iter().map(|s| s[i]).collect();
        let tfn = column_score_tfn(&scores)?;
        inputs.push(column_variable(
            config,
            &col.label(),
            &scores,
            &tfn,
            diagnostics,
        )?);
        column_tfns.push(tfn);
    }

    let support = fwa_interval(&FwaInput {
        scores: &column_tfns,
        weights: &fuzzy_weights,
        alpha: config.alpha,
    })?;
    let core = fwa_interval(&FwaInput {
        scores: &column_tfns,
        weights: &fuzzy_weights,
        alpha: 1.0,
    })?;
    let ts_tfn = Tfn::new(support.lo(), support.clamp(core.midpoint()), support.hi())?;
    if ts_tfn.a() == ts_tfn.c() {
        diagnostics.push(format!("total-score interval collapsed to {}", ts_tfn.a()));
    }
    let output = match config.partition {
        PartitionMode::Quantile
            if config.terms.len() == 3 && ts_tfn.a() < ts_tfn.b() && ts_tfn.b() < ts_tfn.c() =>
        {
            build_partition_with_peaks(
                SCORE_VARIABLE,
                &[ts_tfn.a(), ts_tfn.b(), ts_tfn.c()],
                &config.terms,
            )?
        }
        _ => build_partition(SCORE_VARIABLE, ts_tfn.support(), &config.terms)?,
    };

    let rules = match &config.rule_base {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_rule_base(&text, &inputs, &output)?
        }
        None => generate_rule_base(n, &config.terms, &crisp_weights(&fuzzy_weights)?)?,
    };
    MamdaniModel::new(inputs, output, rules)
}

fn baseline_run(
    strategy: &str,
    space: &ScoredSpace,
    columns: Vec<String>,
    decisions: Vec<BaselineDecision>,
    diagnostics: Vec<String>,
    started: Instant,
) -> LinkageRun {
    let labels = vec![NON_MATCH.to_string(), MATCH.to_string()];
    let pairs: Vec<ScoredPair> = space
        .pairs
        .iter()
        .zip(&space.raw)
        .zip(decisions)
        .map(|((p, raw), d)| ScoredPair {
            left: p.left,
            right: p.right,
            mu_c: p.mu_c,
            raw_scores: raw.clone(),
            weighted_scores: None,
            ts: d.ts,
            memberships: if d.is_match {
                vec![0.0, 1.0]
            } else {
                vec![1.0, 0.0]
            },
            label: usize::from(d.is_match),
        })
        .collect();
    let report = report_for(strategy, &labels, &pairs, started);
    LinkageRun {
        strategy: strategy.to_string(),
        columns,
        labels,
        pairs,
        report,
        diagnostics,
    }
}

pub const DETERMINISTIC: &str = "deterministic";
pub const PROBABILISTIC: &str = "probabilistic";

/// Exact agreement on every link column.
pub fn run_deterministic(
    config: &LinkageConfig,
    left: &Dataset,
    right: &Dataset,
    space: &ScoredSpace,
) -> Result<LinkageRun> {
    let started = Instant::now();
    let cols = resolve_columns(config, left, right)?;
    let exact: Vec<Vec<f64>> = space
        .pairs
        .par_iter()
        .map(|p| {
            cols.iter()
                .map(
                    |&(lc, rc)| match (left.value(p.left, lc), right.value(p.right, rc)) {
                        (Some(s), Some(t)) => exact_sim(s, t),
                        _ => 0.0,
                    },
                )
                .collect()
        })
        .collect();
    let decisions = deterministic_link(&exact);
    let columns = config.columns.iter().map(|c| c.label()).collect();
    Ok(baseline_run(
        DETERMINISTIC,
        space,
        columns,
        decisions,
        Vec::new(),
        started,
    ))
}

/// Known true pairs `(left row, right row)`.
pub type Truth = HashSet<(usize, usize)>;

/// Read `left_id,right_id` rows.
pub fn read_truth(path: impl AsRef<Path>) -> Result<Truth> {
    let data = Dataset::from_csv_path(path.as_ref())?;
    let (l, r) = match (data.column_index("left_id"), data.column_index("right_id")) {
        (Some(l), Some(r)) => (l, r),
        _ => {
            return Err(Error::Config(format!(
                "{} needs left_id and right_id columns",
                path.as_ref().display()
            )))
        }
    };
    (0..data.len())
        .map(|row| {
            let parse = |col| {
                data.value(row, col)
                    .and_then(|v| v.trim().parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::Config(format!("truth row {} is not a pair of row ids", row + 1))
                    })
            };
            Ok((parse(l)?, parse(r)?))
        })
        .collect()
}

/// Labelled sample for m/u estimation: up to `sample_size` pairs per class,
/// drawn by a seeded shuffle. Without ground truth, pairs agreeing exactly on
/// every column stand in for true matches.
fn labeled_sample(
    config: &LinkageConfig,
    space: &ScoredSpace,
    exact_all: &[bool],
    truth: Option<&Truth>,
) -> Vec<LabeledPair> {
    let is_match = |i: usize| match truth {
        Some(t) => t.contains(&(space.pairs[i].left, space.pairs[i].right)),
        None => exact_all[i],
    };
    let (mut pos, mut neg): (Vec<usize>, Vec<usize>) = (0..space.len()).partition(|&i| is_match(i));
    let mut rng = ChaCha8Rng::seed_from_u64(config.fcm.seed);
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let take = config.baseline.sample_size;
    pos.iter()
        .take(take)
        .map(|&i| (i, true))
        .chain(neg.iter().take(take).map(|&i| (i, false)))
        .map(|(i, m)| LabeledPair {
            scores: space.raw[i].clone(),
            is_match: m,
        })
        .collect()
}

/// Fellegi-Sunter agreement weights on the configured match scores.
pub fn run_probabilistic(
    config: &LinkageConfig,
    left: &Dataset,
    right: &Dataset,
    space: &ScoredSpace,
    truth: Option<&Truth>,
) -> Result<LinkageRun> {
    let started = Instant::now();
    let mut diagnostics = Vec::new();
    let exact_all: Vec<bool> = if truth.is_none() {
        diagnostics.push(
            "no ground truth given; exact agreement on all columns stands in for true matches"
                .into(),
        );
        run_deterministic(config, left, right, space)?
            .pairs
            .iter()
            .map(|p| p.label == 1)
            .collect()
    } else {
        Vec::new()
    };
    let n = config.columns.len();
    let sample = labeled_sample(config, space, &exact_all, truth);
    let has_both = sample.iter().any(|p| p.is_match) && sample.iter().any(|p| !p.is_match);
    let estimated = if has_both {
        probabilistic_weights(&estimate_mu(&sample, config.baseline.agreement_threshold)?).ok()
    } else {
        None
    };
    let weights = match estimated {
        Some(w) => {
            for &i in &w.dropped {
                diagnostics.push(format!(
                    "column {} has a non-positive agreement weight and is ignored",
                    config.columns[i].label()
                ));
            }
            w.weights
        }
        None => {
            diagnostics
                .push("m/u probabilities could not be estimated; using equal weights".into());
            vec![1.0 / n as f64; n]
        }
    };
    let decisions = probabilistic_link(&space.raw, &weights, config.baseline.cutoff);
    let columns = config.columns.iter().map(|c| c.label()).collect();
    Ok(baseline_run(
        PROBABILISTIC,
        space,
        columns,
        decisions,
        diagnostics,
        started,
    ))
}

/// Every strategy run against one scored search space.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub runs: Vec<LinkageRun>,
}

impl Comparison {
    pub fn reports(&self) -> Vec<LinkageReport> {
        self.runs.iter().map(|r| r.report.clone()).collect()
    }

    pub fn run(&self, strategy: &str) -> Option<&LinkageRun> {
        self.runs.iter().find(|r| r.strategy == strategy)
    }
}

pub const FRL_BOOLEAN_DEFAULT: &str = "frl-boolean-crisp-default-weights";
pub const FRL_BOOLEAN_FAHP: &str = "frl-boolean-crisp-fahp-weights";

/// Deterministic, probabilistic, and Boolean-logic crisp FRL with default
/// unit weights and with defuzzified FAHP weights.
pub fn compare(
    config: &LinkageConfig,
    left: &Dataset,
    right: &Dataset,
    truth: Option<&Truth>,
) -> Result<Comparison> {
    let space = ScoredSpace::build(config, left, right)?;
    let deterministic = run_deterministic(config, left, right, &space)?;
    let probabilistic = run_probabilistic(config, left, right, &space, truth)?;

    let mut boolean = config.clone();
    boolean.logic = LogicType::Boolean;
    boolean.linkage = LinkageType::Crisp;
    boolean.notices.clear();
    boolean.crisp_weights = None;
    let mut default_run = link_space(&boolean, &space)?;
    default_run.strategy = FRL_BOOLEAN_DEFAULT.into();
    default_run.report.strategy = FRL_BOOLEAN_DEFAULT.into();

    boolean.crisp_weights = Some(crisp_weights(&fahp_weights(config)?)?);
    let mut fahp_run = link_space(&boolean, &space)?;
    fahp_run.strategy = FRL_BOOLEAN_FAHP.into();
    fahp_run.report.strategy = FRL_BOOLEAN_FAHP.into();

    Ok(Comparison {
        runs: vec![deterministic, probabilistic, default_run, fahp_run],
    })
}
