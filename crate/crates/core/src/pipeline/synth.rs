//! Seeded benchmark data: a left file, a right file holding corrupted copies
//! of some left records, and the true pairing.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Share of `min(n_left, n_right)` that appears on both sides.
pub const OVERLAP: f64 = 0.6;

const COLUMNS: [&str; 4] = ["name", "address", "city", "state"];

const NAME_PREFIX: &[&str] = &[
    "ST", "NORTH", "SOUTH", "EAST", "WEST", "MOUNT", "LAKE", "RIVER", "VALLEY", "CENTRAL", "GOOD",
    "HOLY",
];
const NAME_CORE: &[&str] = &[
    "MARY",
    "JOSEPH",
    "LUKE",
    "FRANCIS",
    "VINCENT",
    "ANTHONY",
    "BAPTIST",
    "MERCY",
    "GRACE",
    "HOPE",
    "CEDAR",
    "OAK",
    "PINE",
    "MAPLE",
    "WILLOW",
    "SUMMIT",
    "HARBOR",
    "MEADOW",
    "LIBERTY",
    "UNION",
    "PIONEER",
    "COLUMBIA",
    "GENESIS",
    "TRINITY",
    "PROVIDENCE",
    "SAMARITAN",
    "SHEPHERD",
    "CHRISTUS",
    "REGIONAL",
    "COMMUNITY",
];
const NAME_SUFFIX: &[&str] = &[
    "HOSPITAL",
    "MEDICAL CENTER",
    "HEALTH SYSTEM",
    "GENERAL HOSPITAL",
    "MEMORIAL HOSPITAL",
    "CLINIC",
    "HEALTH CENTER",
    "REHABILITATION HOSPITAL",
];
const STREETS: &[&str] = &[
    "MAIN",
    "OAK",
    "ELM",
    "PARK",
    "WASHINGTON",
    "LINCOLN",
    "JEFFERSON",
    "MADISON",
    "FRANKLIN",
    "HIGHLAND",
    "SUNSET",
    "RIVERSIDE",
    "CHURCH",
    "MARKET",
    "CENTER",
    "HILLCREST",
    "MEADOWBROOK",
    "LAKEVIEW",
];
const STREET_TYPES: &[&str] = &["ST", "AVE", "RD", "BLVD", "DR", "LN", "PKWY", "WAY"];
const CITIES: &[&str] = &[
    "TAVARES",
    "OCALA",
    "TAMPA",
    "AUSTIN",
    "EL PASO",
    "DALLAS",
    "FRESNO",
    "OAKLAND",
    "SALEM",
    "EUGENE",
    "BOISE",
    "NAMPA",
    "RENO",
    "ELKO",
    "MESA",
    "TUCSON",
    "DENVER",
    "BOULDER",
    "OMAHA",
    "LINCOLN",
    "TOPEKA",
    "WICHITA",
    "DULUTH",
    "ROCHESTER",
    "ALBANY",
    "BUFFALO",
    "DAYTON",
    "AKRON",
    "MACON",
    "SAVANNAH",
];
const STATES: &[&str] = &["FL", "TX", "CA", "OR", "ID", "NV", "AZ", "CO", "NE", "KS"];

/// Two datasets with columns `name, address, city, state` and the row-index
/// pairs that describe the same entity.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub left: Dataset,
    pub right: Dataset,
    pub truth: Vec<(usize, usize)>,
}

/// Configuration written next to the synthetic data.
pub const SYNTH_CONFIG: &str = r#"constraint = { kind = "crisp", field = "state" }
logic_type = "fuzzy"
linkage_type = "crisp"
linguistic_terms = ["low", "medium", "high"]
cluster_count = 3

[[link_columns]]
field = "name"
matcher = "jaro-winkler"
relevance = "high"
threshold = 0.9

[[link_columns]]
field = "address"
matcher = "levenshtein"
relevance = "medium"
threshold = 0.9

[[link_columns]]
field = "city"
matcher = "exact"
relevance = "low"
threshold = 0.9
"#;

fn pick<'a>(rng: &mut ChaCha8Rng, items: &[&'a str]) -> &'a str {
    items[rng.gen_range(0..items.len())]
}

fn fresh_record(rng: &mut ChaCha8Rng, used: &mut HashSet<String>) -> Vec<String> {
    let mut name = format!(
        "{} {} {}",
        pick(rng, NAME_PREFIX),
        pick(rng, NAME_CORE),
        pick(rng, NAME_SUFFIX)
    );
    let mut n = 2;
    while used.contains(&name) {
        name = format!(
            "{} {}",
            name.trim_end_matches(|c: char| c.is_ascii_digit() || c == ' '),
            n
        );
        n += 1;
    }
    used.insert(name.clone());
    let address = format!(
        "{} {} {}",
        rng.gen_range(1..10_000),
        pick(rng, STREETS),
        pick(rng, STREET_TYPES)
    );
    let city = rng.gen_range(0..CITIES.len());
    vec![
        name,
        address,
        CITIES[city].to_string(),
        STATES[city % STATES.len()].to_string(),
    ]
}

/// Swap two adjacent characters, delete one, or drop a whole token.
/// Always returns a different string for inputs of two or more characters.
fn corrupt(value: &str, rng: &mut ChaCha8Rng) -> String {
    let chars: Vec<char> = value.chars().collect();
    let tokens: Vec<&str> = value.split_whitespace().collect();
    for _ in 0..16 {
        let out = match rng.gen_range(0..3) {
            0 if chars.len() >= 2 => {
                let i = rng.gen_range(0..chars.len() - 1);
                let mut c = chars.clone();
                c.swap(i, i + 1);
                c.into_iter().collect()
            }
            1 if !chars.is_empty() => {
                let i = rng.gen_range(0..chars.len());
                chars
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, c)| c)
                    .collect()
            }
            2 if tokens.len() >= 2 => {
                let i = rng.gen_range(0..tokens.len());
                tokens
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, t)| *t)
                    .collect::<Vec<_>>()
                    .join(" ")
            }
            _ => continue,
        };
        if out.trim() != value.trim() && !out.trim().is_empty() {
            return out;
        }
    }
    format!("{value}X")
}

/// Left has `n_left` unique records. Right holds corrupted copies of
/// `round(0.6 · min(n_left, n_right))` randomly chosen left records plus
/// fresh records, in shuffled order. Each copy is corrupted with
/// probability `corruption_rate`; a corrupted copy has at least one of
/// name, address and city altered. State is never corrupted.
pub fn generate_synthetic(
    n_left: usize,
    n_right: usize,
    corruption_rate: f64,
    seed: u64,
) -> Result<SyntheticData> {
    if !(0.0..=1.0).contains(&corruption_rate) {
        return Err(Error::Config(format!(
            "corruption rate must lie in [0, 1], got {corruption_rate}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = HashSet::new();
    let left_rows: Vec<Vec<String>> = (0..n_left)
        .map(|_| fresh_record(&mut rng, &mut used))
        .collect();

    let overlap = (OVERLAP * n_left.min(n_right) as f64).round() as usize;
    let mut sources = (0..n_left).choose_multiple(&mut rng, overlap);
    sources.sort_unstable();

    let mut right_rows: Vec<(Vec<String>, Option<usize>)> = Vec::with_capacity(n_right);
    for &src in &sources {
        let mut row = left_rows[src].clone();
        if rng.gen_bool(corruption_rate) {
            let mut fields: Vec<usize> = (0..3).filter(|_| rng.gen_bool(0.5)).collect();
            if fields.is_empty() {
                fields.push(rng.gen_range(0..3));
            }
            for f in fields {
                row[f] = corrupt(&row[f], &mut rng);
            }
        }
        right_rows.push((row, Some(src)));
    }
    while right_rows.len() < n_right {
        right_rows.push((fresh_record(&mut rng, &mut used), None));
    }
    right_rows.shuffle(&mut rng);

    let truth = right_rows
        .iter()
        .enumerate()
        .filter_map(|(r, (_, src))| src.map(|l| (l, r)))
        .collect::<Vec<_>>();
    let headers: Vec<String> = COLUMNS.iter().map(|c| c.to_string()).collect();
    let mut truth = truth;
    truth.sort_unstable();
    Ok(SyntheticData {
        left: Dataset::new(headers.clone(), left_rows)?,
        right: Dataset::new(
            headers,
            right_rows.into_iter().map(|(row, _)| row).collect(),
        )?,
        truth,
    })
}

/// Write `left.csv`, `right.csv`, `truth.csv` and `config.toml` into `dir`.
pub fn write_synthetic(data: &SyntheticData, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    data.left.write_csv(dir.join("left.csv"))?;
    data.right.write_csv(dir.join("right.csv"))?;
    let truth = Dataset::new(
        vec!["left_id".into(), "right_id".into()],
        data.truth
            .iter()
            .map(|(l, r)| vec![l.to_string(), r.to_string()])
            .collect(),
    )?;
    truth.write_csv(dir.join("truth.csv"))?;
    let config = dir.join("config.toml");
    fs::write(&config, SYNTH_CONFIG).map_err(io(&config))
}
