//! Linkage configuration: the TOML file format and its validation.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::blocking::{Constraint, DmaxScope};
use crate::clustering::FcmParams;
use crate::error::{Error, Result};
use crate::fahp::{LinguisticTerms, RelevanceTerm};
use crate::inference::PartitionMode;
use crate::similarity::{ColumnSpec, Matcher};

pub const DEFAULT_THRESHOLD: f64 = 0.9;
pub const DEFAULT_CUTOFF: f64 = 0.5;
pub const DEFAULT_SAMPLE_SIZE: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogicType {
    Boolean,
    #[default]
    Fuzzy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkageType {
    #[default]
    Crisp,
    Fuzzy,
}

impl LogicType {
    pub fn name(self) -> &'static str {
        match self {
            LogicType::Boolean => "boolean",
            LogicType::Fuzzy => "fuzzy",
        }
    }
}

impl LinkageType {
    pub fn name(self) -> &'static str {
        match self {
            LinkageType::Crisp => "crisp",
            LinkageType::Fuzzy => "fuzzy",
        }
    }
}

/// One link column: what to compare, how, and how much it matters.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkColumn {
    pub spec: ColumnSpec,
    pub relevance: RelevanceTerm,
    pub threshold: f64,
}

impl LinkColumn {
    /// Column label used in output headers.
    pub fn label(&self) -> String {
        if self.spec.left == self.spec.right {
            self.spec.left.clone()
        } else {
            format!("{}|{}", self.spec.left, self.spec.right)
        }
    }
}

/// Settings for the reference strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineParams {
    /// Probabilistic match cutoff on the weighted score.
    pub cutoff: f64,
    /// Score at which a column counts as agreeing when estimating m and u.
    pub agreement_threshold: f64,
    /// Upper bound on labelled pairs drawn per class for m/u estimation.
    pub sample_size: usize,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            cutoff: DEFAULT_CUTOFF,
            agreement_threshold: DEFAULT_THRESHOLD,
            sample_size: DEFAULT_SAMPLE_SIZE,
        }
    }
}

/// A validated linkage model.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkageConfig {
    pub constraint: Constraint,
    pub columns: Vec<LinkColumn>,
    pub logic: LogicType,
    pub linkage: LinkageType,
    /// User weights for Boolean logic; `None` means one per column.
    pub crisp_weights: Option<Vec<f64>>,
    pub terms: LinguisticTerms,
    pub scale: usize,
    pub alpha: f64,
    pub rule_base: Option<PathBuf>,
    pub partition: PartitionMode,
    pub fcm: FcmParams,
    pub baseline: BaselineParams,
    /// Coercions and ignored settings noticed during validation.
    pub notices: Vec<String>,
}

impl LinkageConfig {
    /// A configuration with every default and the given link columns.
    pub fn with_columns(columns: Vec<ColumnSpec>) -> Result<Self> {
        let raw = RawConfig {
            link_columns: columns
                .into_iter()
                .map(|c| RawColumn {
                    left: Some(c.left),
                    right: Some(c.right),
                    matcher: Some(c.matcher.name().to_string()),
                    ..RawColumn::default()
                })
                .collect(),
            ..RawConfig::default()
        };
        validate_config(raw, None)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        validate_config(raw, None)
    }

    /// Read a config file; a relative `rule_base` path resolves against the
    /// file's directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let raw: RawConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        validate_config(raw, path.parent())
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.columns.iter().map(|c| c.threshold).collect()
    }

    pub fn column_specs(&self) -> Vec<ColumnSpec> {
        self.columns.iter().map(|c| c.spec.clone()).collect()
    }

    pub fn relevance_terms(&self) -> Vec<RelevanceTerm> {
        self.columns.iter().map(|c| c.relevance.clone()).collect()
    }

    /// Short strategy identifier, e.g. `frl-fuzzy-crisp`.
    pub fn strategy_name(&self) -> String {
        format!("frl-{}-{}", self.logic.name(), self.linkage.name())
    }
}

/// The on-disk form of [`LinkageConfig`]; every field but the link columns
/// is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub constraint: Option<RawConstraint>,
    #[serde(default)]
    pub link_columns: Vec<RawColumn>,
    pub logic_type: Option<String>,
    pub linkage_type: Option<String>,
    pub crisp_weight_vector: Option<Vec<f64>>,
    pub linguistic_terms: Option<Vec<String>>,
    pub fuzzy_number_scale: Option<usize>,
    pub fahp_method: Option<String>,
    pub fwa_alpha: Option<f64>,
    pub rule_base: Option<PathBuf>,
    pub cluster_count: Option<usize>,
    pub partition_mode: Option<String>,
    pub fcm: Option<RawFcm>,
    pub baseline: Option<RawBaseline>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConstraint {
    pub kind: String,
    pub field: Option<String>,
    pub lambda: Option<f64>,
    pub dmax: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawColumn {
    /// Shorthand for identical `left` and `right` field names.
    pub field: Option<String>,
    pub left: Option<String>,
    pub right: Option<String>,
    pub matcher: Option<String>,
    pub relevance: Option<String>,
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFcm {
    pub seed: Option<u64>,
    pub fuzzifier: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBaseline {
    pub cutoff: Option<f64>,
    pub agreement_threshold: Option<f64>,
    pub sample_size: Option<usize>,
}

fn unit_range(name: &str, value: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Config(format!(
            "{name} must lie in [0, 1], got {value}"
        )));
    }
    Ok(value)
}

fn keyword(value: &str) -> String {
    value.trim().to_ascii_lowercase().replace(['-', ' '], "_")
}

/// Matcher used when a column does not name one.
fn default_matcher(field: &str) -> Matcher {
    let f = field.to_ascii_lowercase();
    if f.contains("name") {
        Matcher::JaroWinkler
    } else if f.contains("address") || f.contains("street") {
        Matcher::Levenshtein
    } else {
        Matcher::Exact
    }
}

/// Apply defaults, coerce Boolean logic to crisp linkage, reject
/// contradictory or out-of-range settings.
pub fn validate_config(raw: RawConfig, base_dir: Option<&Path>) -> Result<LinkageConfig> {
    let mut notices = Vec::new();

    let terms = match raw.linguistic_terms {
        Some(names) => LinguisticTerms::new(names)?,
        None => LinguisticTerms::default(),
    };
    let scale = raw.fuzzy_number_scale.unwrap_or(terms.len());
    if scale < terms.len() {
        return Err(Error::Config(format!(
            "fuzzy_number_scale {scale} is smaller than the {} linguistic terms",
            terms.len()
        )));
    }
    if let Some(method) = &raw.fahp_method {
        if keyword(method) != "geometric_mean" {
            return Err(Error::Config(format!(
                "unsupported fahp_method {method:?}; only \"geometric mean\" is available"
            )));
        }
    }

    if raw.link_columns.is_empty() {
        return Err(Error::Config("at least one link column is required".into()));
    }
    let middle = terms.names()[(terms.len() - 1) / 2].clone();
    let mut columns = Vec::with_capacity(raw.link_columns.len());
    for (i, col) in raw.link_columns.into_iter().enumerate() {
        let left = col.left.or_else(|| col.field.clone());
        let right = col.right.or(col.field);
        let (left, right) = match (left, right) {
            (Some(l), Some(r)) => (l, r),
            _ => {
                return Err(Error::Config(format!(
                    "link column {} needs `field` or both `left` and `right`",
                    i + 1
                )))
            }
        };
        let matcher = match &col.matcher {
            Some(m) => m
                .parse::<Matcher>()
                .map_err(|e| Error::Config(format!("link column {left:?}: {e}")))?,
            None => default_matcher(&left),
        };
        let relevance = terms
            .term(col.relevance.as_deref().unwrap_or(&middle))
            .map_err(|e| Error::Config(format!("link column {left:?}: {e}")))?;
        let threshold = unit_range(
            &format!("threshold of link column {left:?}"),
            col.threshold.unwrap_or(DEFAULT_THRESHOLD),
        )?;
        columns.push(LinkColumn {
            spec: ColumnSpec::new(left, right, matcher),
            relevance,
            threshold,
        });
    }

    let logic = match raw.logic_type.as_deref().map(keyword).as_deref() {
        None | Some("fuzzy") => LogicType::Fuzzy,
        Some("boolean") => LogicType::Boolean,
        Some(other) => return Err(Error::Config(format!("unknown logic_type {other:?}"))),
    };
    let mut linkage = match raw.linkage_type.as_deref().map(keyword).as_deref() {
        None | Some("crisp") => LinkageType::Crisp,
        Some("fuzzy") => LinkageType::Fuzzy,
        Some(other) => return Err(Error::Config(format!("unknown linkage_type {other:?}"))),
    };
    if logic == LogicType::Boolean && linkage == LinkageType::Fuzzy {
        linkage = LinkageType::Crisp;
        notices.push("Boolean logic supports only crisp linkage; linkage_type set to crisp".into());
    }

    let crisp_weights = match raw.crisp_weight_vector {
        None => None,
        Some(w) => {
            if w.len() != columns.len() {
                return Err(Error::Config(format!(
                    "crisp_weight_vector has {} entries for {} link columns",
                    w.len(),
                    columns.len()
                )));
            }
            if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
                return Err(Error::Config(
                    "crisp_weight_vector must be non-negative with a positive sum".into(),
                ));
            }
            if logic == LogicType::Fuzzy {
                notices.push(
                    "crisp_weight_vector is ignored under fuzzy logic (FAHP weights are used)"
                        .into(),
                );
            }
            Some(w)
        }
    };

    let alpha = unit_range("fwa_alpha", raw.fwa_alpha.unwrap_or(0.0))?;

    let partition = match raw.partition_mode.as_deref().map(keyword).as_deref() {
        None | Some("equal") => PartitionMode::Equal,
        Some("quantile") => PartitionMode::Quantile,
        Some(other) => return Err(Error::Config(format!("unknown partition_mode {other:?}"))),
    };

    let constraint = match raw.constraint {
        None => Constraint::None,
        Some(c) => {
            let kind = keyword(&c.kind);
            let field = || {
                c.field
                    .clone()
                    .ok_or_else(|| Error::Config(format!("{kind} constraint needs a field")))
            };
            match kind.as_str() {
                "none" | "false" => {
                    if c.lambda.is_some() {
                        return Err(Error::Config(
                            "lambda given without a fuzzy constraint".into(),
                        ));
                    }
                    Constraint::None
                }
                "crisp" => {
                    if c.lambda.is_some() {
                        return Err(Error::Config(
                            "lambda applies only to fuzzy constraints".into(),
                        ));
                    }
                    Constraint::Crisp { field: field()? }
                }
                "fuzzy" => {
                    let lambda = c
                        .lambda
                        .ok_or_else(|| Error::Config("fuzzy constraint needs lambda".into()))?;
                    let dmax = match c.dmax.as_deref().map(keyword).as_deref() {
                        None | Some("cross_product") => DmaxScope::CrossProduct,
                        Some("max_field_length") => DmaxScope::MaxFieldLength,
                        Some(other) => {
                            return Err(Error::Config(format!("unknown dmax scope {other:?}")))
                        }
                    };
                    Constraint::Fuzzy {
                        field: field()?,
                        lambda: unit_range("constraint lambda", lambda)?,
                        dmax,
                    }
                }
                other => return Err(Error::Config(format!("unknown constraint kind {other:?}"))),
            }
        }
    };

    let defaults = FcmParams::default();
    let raw_fcm = raw.fcm.unwrap_or_default();
    let fcm = FcmParams {
        clusters: raw.cluster_count.unwrap_or(defaults.clusters),
        fuzzifier: raw_fcm.fuzzifier.unwrap_or(defaults.fuzzifier),
        tol: raw_fcm.tol.unwrap_or(defaults.tol),
        max_iter: raw_fcm.max_iter.unwrap_or(defaults.max_iter),
        seed: raw_fcm.seed.unwrap_or(defaults.seed),
    };
    fcm.validate()?;

    let raw_base = raw.baseline.unwrap_or_default();
    let baseline = BaselineParams {
        cutoff: unit_range("baseline cutoff", raw_base.cutoff.unwrap_or(DEFAULT_CUTOFF))?,
        agreement_threshold: unit_range(
            "baseline agreement_threshold",
            raw_base.agreement_threshold.unwrap_or(DEFAULT_THRESHOLD),
        )?,
        sample_size: raw_base.sample_size.unwrap_or(DEFAULT_SAMPLE_SIZE).max(1),
    };

    let rule_base = raw.rule_base.map(|p| match base_dir {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    });
    if rule_base.is_some() && linkage == LinkageType::Crisp {
        notices.push("rule_base is only used with fuzzy linkage".into());
    }

    Ok(LinkageConfig {
        constraint,
        columns,
        logic,
        linkage,
        crisp_weights,
        terms,
        scale,
        alpha,
        rule_base,
        partition,
        fcm,
        baseline,
        notices,
    })
}
