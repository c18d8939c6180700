//! Per-column string comparison.
//!
//! All matchers work on normalized text (trimmed, inner whitespace collapsed,
//! uppercased) and count user-perceived characters (grapheme clusters), so an
//! accented letter costs one edit no matter how it is encoded.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

/// Prefix scaling factor of the Winkler boost.
const WINKLER_SCALING: f64 = 0.1;
/// Longest common prefix that earns the Winkler boost.
const WINKLER_MAX_PREFIX: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Matcher {
    Exact,
    Levenshtein,
    JaroWinkler,
}

impl Matcher {
    pub fn similarity(self, s: &str, t: &str) -> f64 {
        match self {
            Matcher::Exact => exact_sim(s, t),
            Matcher::Levenshtein => levenshtein_sim(s, t),
            Matcher::JaroWinkler => jaro_winkler_sim(s, t),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Matcher::Exact => "exact",
            Matcher::Levenshtein => "levenshtein",
            Matcher::JaroWinkler => "jaro-winkler",
        }
    }
}

impl std::str::FromStr for Matcher {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "exact" => Ok(Matcher::Exact),
            "levenshtein" => Ok(Matcher::Levenshtein),
            "jaro_winkler" | "jarowinkler" => Ok(Matcher::JaroWinkler),
            other => Err(format!("unknown matcher {other:?}")),
        }
    }
}

/// Trim, collapse internal whitespace runs to one space, uppercase.
pub fn normalize_text(s: &str) -> Cow<'_, str> {
    if is_normalized(s) {
        return Cow::Borrowed(s);
    }
    let joined = s.split_whitespace().collect::<Vec<_>>().join(" ");
    Cow::Owned(joined.to_uppercase())
}

fn is_normalized(s: &str) -> bool {
    let mut prev_space = true;
    for c in s.chars() {
        if c.is_whitespace() {
            if c != ' ' || prev_space {
                return false;
            }
            prev_space = true;
        } else {
            if c.is_lowercase() {
                return false;
            }
            prev_space = false;
        }
    }
    !(prev_space && !s.is_empty())
}

fn graphemes(s: &str) -> Vec<&str> {
    s.graphemes(true).collect()
}

/// 1.0 when the normalized forms are equal, 0.0 otherwise.
pub fn exact_sim(s: &str, t: &str) -> f64 {
    if normalize_text(s) == normalize_text(t) {
        1.0
    } else {
        0.0
    }
}

/// Levenshtein distance between the normalized forms, in graphemes.
pub fn levenshtein_distance(s: &str, t: &str) -> usize {
    let s = normalize_text(s);
    let t = normalize_text(t);
    edit_distance(&graphemes(&s), &graphemes(&t))
}

fn edit_distance(s: &[&str], t: &[&str]) -> usize {
    if s.is_empty() {
        return t.len();
    }
    if t.is_empty() {
        return s.len();
    }
    let mut prev: Vec<usize> = (0..=t.len()).collect();
    let mut cur = vec![0; t.len() + 1];
    for (i, sc) in s.iter().enumerate() {
        cur[0] = i + 1;
        for (j, tc) in t.iter().enumerate() {
            let substitution = prev[j] + usize::from(sc != tc);
            cur[j + 1] = substitution.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()]
}

/// `1 - distance / max(len)`; two empty strings are fully similar.
pub fn levenshtein_sim(s: &str, t: &str) -> f64 {
    let s = normalize_text(s);
    let t = normalize_text(t);
    let (s, t) = (graphemes(&s), graphemes(&t));
    let longest = s.len().max(t.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - edit_distance(&s, &t) as f64 / longest as f64
}

/// Standard Jaro similarity on grapheme sequences.
fn jaro(s: &[&str], t: &[&str]) -> f64 {
    if s.is_empty() && t.is_empty() {
        return 1.0;
    }
    if s.is_empty() || t.is_empty() {
        return 0.0;
    }
    let window = (s.len().max(t.len()) / 2).saturating_sub(1);
    let mut s_matched = vec![false; s.len()];
    let mut t_matched = vec![false; t.len()];
    let mut matches = 0usize;
    for (i, sc) in s.iter().enumerate() {
        let start = i.saturating_sub(window);
        let end = (i + window + 1).min(t.len());
        for j in start..end {
            if !t_matched[j] && t[j] == *sc {
                s_matched[i] = true;
                t_matched[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }
    let s_seq = s
        .iter()
        .zip(&s_matched)
        .filter(|(_, m)| **m)
        .map(|(c, _)| c);
    let t_seq = t
        .iter()
        .zip(&t_matched)
        .filter(|(_, m)| **m)
        .map(|(c, _)| c);
    let half_transpositions = s_seq.zip(t_seq).filter(|(x, y)| x != y).count();
    let m = matches as f64;
    let transpositions = (half_transpositions / 2) as f64;
    (m / s.len() as f64 + m / t.len() as f64 + (m - transpositions) / m) / 3.0
}

/// Jaro-Winkler similarity with prefix scale 0.1 and prefix cap 4.
///
/// Greedy character matching is order dependent, so the pair is put in a
/// canonical order first; this keeps the measure exactly symmetric.
pub fn jaro_winkler_sim(s: &str, t: &str) -> f64 {
    let s = normalize_text(s);
    let t = normalize_text(t);
    let (mut a, mut b) = (graphemes(&s), graphemes(&t));
    if (b.len(), &b) < (a.len(), &a) {
        std::mem::swap(&mut a, &mut b);
    }
    let sim = jaro(&a, &b);
    let prefix = a
        .iter()
        .zip(&b)
        .take(WINKLER_MAX_PREFIX)
        .take_while(|(x, y)| x == y)
        .count();
    (sim + prefix as f64 * WINKLER_SCALING * (1.0 - sim)).clamp(0.0, 1.0)
}

/// Read access to one record's fields by name.
pub trait FieldSource {
    fn field(&self, name: &str) -> Option<&str>;
}

impl<K, V, S> FieldSource for std::collections::HashMap<K, V, S>
where
    K: std::borrow::Borrow<str> + std::hash::Hash + Eq,
    V: AsRef<str>,
    S: std::hash::BuildHasher,
{
    fn field(&self, name: &str) -> Option<&str> {
        self.get(name).map(AsRef::as_ref)
    }
}

impl<K, V> FieldSource for std::collections::BTreeMap<K, V>
where
    K: std::borrow::Borrow<str> + Ord,
    V: AsRef<str>,
{
    fn field(&self, name: &str) -> Option<&str> {
        self.get(name).map(AsRef::as_ref)
    }
}

/// Which fields of the two records are compared, and how.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpec {
    pub left: String,
    pub right: String,
    pub matcher: Matcher,
}

impl ColumnSpec {
    pub fn new(left: impl Into<String>, right: impl Into<String>, matcher: Matcher) -> Self {
        Self {
            left: left.into(),
            right: right.into(),
            matcher,
        }
    }

    /// Same field name on both sides.
    pub fn same(field: impl Into<String>, matcher: Matcher) -> Self {
        let field = field.into();
        Self::new(field.clone(), field, matcher)
    }
}

/// Match scores of one record pair, in column order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
    /// `missing[i]` is set when column `i` was absent on either side and
    /// scored as 0.
    pub missing: Vec<bool>,
}

impl ScoreVector {
    pub fn has_missing(&self) -> bool {
        self.missing.iter().any(|m| *m)
    }
}

pub fn score_columns<L, R>(left: &L, right: &R, columns: &[ColumnSpec]) -> ScoreVector
where
    L: FieldSource + ?Sized,
    R: FieldSource + ?Sized,
{
    let mut out = ScoreVector {
        scores: Vec::with_capacity(columns.len()),
        missing: Vec::with_capacity(columns.len()),
    };
    for col in columns {
        match (left.field(&col.left), right.field(&col.right)) {
            (Some(s), Some(t)) => {
                out.scores.push(col.matcher.similarity(s, t));
                out.missing.push(false);
            }
            _ => {
                out.scores.push(0.0);
                out.missing.push(true);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    /// Plain recursive edit distance, exponential but obviously correct.
    fn brute_distance(s: &[char], t: &[char]) -> usize {
        match (s.split_first(), t.split_first()) {
            (None, _) => t.len(),
            (_, None) => s.len(),
            (Some((a, sr)), Some((b, tr))) => {
                let sub = brute_distance(sr, tr) + usize::from(a != b);
                let del = brute_distance(sr, t) + 1;
                let ins = brute_distance(s, tr) + 1;
                sub.min(del).min(ins)
            }
        }
    }

    fn record(pairs: &[(&str, &str)]) -> HashMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_text("  el   paso\t"), "EL PASO");
        assert_eq!(normalize_text("EL PASO"), "EL PASO");
        assert!(matches!(normalize_text("EL PASO"), Cow::Borrowed(_)));
        assert_eq!(normalize_text("EL\tPASO"), "EL PASO");
        assert_eq!(normalize_text(""), "");
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_sim("EL PASO", "EL PASO"), 1.0);
        assert_eq!(exact_sim("TAVARES", "TAVARES "), 1.0);
        assert_eq!(exact_sim("EL PASO", "TAVARES"), 0.0);
        assert_eq!(exact_sim("el paso", "EL PASO"), 1.0);
    }

    #[test]
    fn levenshtein_examples() {
        // kitten -> sitting: the recursive oracle gives 3 edits over 7 chars.
        let oracle = brute_distance(
            &"kitten".chars().collect::<Vec<_>>(),
            &"sitting".chars().collect::<Vec<_>>(),
        );
        assert_eq!(oracle, 3);
        assert!((levenshtein_sim("kitten", "sitting") - (1.0 - 3.0 / 7.0)).abs() < 1e-12);
        assert_eq!(levenshtein_sim("abc", "abc"), 1.0);
        assert_eq!(levenshtein_sim("", "abc"), 0.0);
        assert_eq!(levenshtein_sim("", ""), 1.0);
    }

    #[test]
    fn levenshtein_counts_graphemes() {
        // "e" + combining acute is a single user-perceived character.
        assert_eq!(levenshtein_distance("cafe\u{301}", "cafe"), 1);
        assert_eq!(levenshtein_distance("naïve", "naive"), 1);
    }

    #[test]
    fn jaro_winkler_examples() {
        // MARTHA/MARHTA: m = 6, t = 1, jaro = (1 + 1 + 5/6) / 3 = 0.9444,
        // common prefix 3, so 0.9444 + 0.3 * 0.0556 = 0.9611.
        let jaro_hand = (1.0 + 1.0 + 5.0 / 6.0) / 3.0;
        let jw_hand = jaro_hand + 3.0 * 0.1 * (1.0 - jaro_hand);
        let got = jaro_winkler_sim("MARTHA", "MARHTA");
        assert!((got - jw_hand).abs() < 1e-12);
        assert!((got - 0.9611).abs() < 1e-4);
        assert_eq!(jaro_winkler_sim("DIXON", "DIXON"), 1.0);
        assert_eq!(jaro_winkler_sim("ABC", "XYZ"), 0.0);
        assert_eq!(jaro_winkler_sim("", ""), 1.0);
        assert_eq!(jaro_winkler_sim("", "A"), 0.0);
    }

    #[test]
    fn jaro_winkler_reference_values() {
        // DWAYNE/DUANE: m = 4, t = 0, jaro = (4/6 + 4/5 + 1) / 3, prefix 1.
        let jaro_hand = (4.0 / 6.0 + 4.0 / 5.0 + 1.0) / 3.0;
        let jw_hand = jaro_hand + 0.1 * (1.0 - jaro_hand);
        assert!((jaro_winkler_sim("DWAYNE", "DUANE") - jw_hand).abs() < 1e-12);
    }

    #[test]
    fn score_columns_examples() {
        let cols = vec![
            ColumnSpec::same("name", Matcher::JaroWinkler),
            ColumnSpec::same("address", Matcher::Levenshtein),
            ColumnSpec::same("city", Matcher::Exact),
        ];
        let left = record(&[
            ("name", "SOUTH LAKE HOSPITAL"),
            ("address", "1900 DON WICKHAM DR"),
            ("city", "CLERMONT"),
        ]);
        let right = record(&[
            ("name", "SOUTH LAKE MEMORIAL HOSPITAL"),
            ("address", "1900 DON WICKHAM DR"),
            ("city", "CLERMONT"),
        ]);
        let sv = score_columns(&left, &right, &cols);
        assert_eq!(sv.scores[1], 1.0);
        assert_eq!(sv.scores[2], 1.0);
        assert!(sv.scores[0] > 0.0 && sv.scores[0] < 1.0);
        assert!(!sv.has_missing());

        let same = score_columns(&left, &left, &cols);
        assert_eq!(same.scores, vec![1.0, 1.0, 1.0]);

        let one = vec![ColumnSpec::same("x", Matcher::Levenshtein)];
        let empty = record(&[("x", "")]);
        assert_eq!(score_columns(&empty, &empty, &one).scores, vec![1.0]);
    }

    #[test]
    fn missing_field_scores_zero() {
        let cols = vec![
            ColumnSpec::same("name", Matcher::Exact),
            ColumnSpec::same("city", Matcher::Exact),
        ];
        let left = record(&[("name", "A"), ("city", "B")]);
        let right = record(&[("name", "A")]);
        let sv = score_columns(&left, &right, &cols);
        assert_eq!(sv.scores, vec![1.0, 0.0]);
        assert_eq!(sv.missing, vec![false, true]);
    }

    #[test]
    fn levenshtein_matches_recursive_oracle_exhaustively() {
        let alphabet = ['a', 'b', 'c'];
        let mut words = vec![String::new()];
        let mut frontier = vec![String::new()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &frontier {
                for c in alphabet {
                    next.push(format!("{w}{c}"));
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        for s in &words {
            for t in &words {
                let sc: Vec<char> = s.to_uppercase().chars().collect();
                let tc: Vec<char> = t.to_uppercase().chars().collect();
                assert_eq!(
                    levenshtein_distance(s, t),
                    brute_distance(&sc, &tc),
                    "{s} {t}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn levenshtein_oracle_up_to_six(s in "[abc]{0,6}", t in "[abc]{0,6}") {
            let sc: Vec<char> = s.to_uppercase().chars().collect();
            let tc: Vec<char> = t.to_uppercase().chars().collect();
            prop_assert_eq!(levenshtein_distance(&s, &t), brute_distance(&sc, &tc));
        }

        #[test]
        fn matchers_symmetric_and_bounded(s in "[A-Ea-e ]{0,12}", t in "[A-Ea-e ]{0,12}") {
            for m in [Matcher::Exact, Matcher::Levenshtein, Matcher::JaroWinkler] {
                let st = m.similarity(&s, &t);
                prop_assert_eq!(st, m.similarity(&t, &s));
                prop_assert!((0.0..=1.0).contains(&st));
                prop_assert_eq!(m.similarity(&s, &s), 1.0);
            }
        }
    }
}
