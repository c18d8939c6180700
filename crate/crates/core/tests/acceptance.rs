//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criterion 10 runs against real hospital listings when
//! `FUZZYLINK_HOSPITAL_LEFT`, `FUZZYLINK_HOSPITAL_RIGHT` and
//! `FUZZYLINK_HOSPITAL_CONFIG` point at them.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fuzzylink::clustering::{fcm, FcmParams, FcmState};
use fuzzylink::dataset::Dataset;
use fuzzylink::fahp::{crisp_weights, fahp_geometric_mean, FuzzyWeightVector, LinguisticTerms};
use fuzzylink::fuzzy::{Interval, Tfn};
use fuzzylink::fwa::{fwa_interval, fwa_tfn, FwaInput};
use fuzzylink::inference::{
    build_partition, generate_rule_base, FuzzyRule, MamdaniModel, RuleBase,
};
use fuzzylink::pipeline::{
    compare, emit_report, generate_synthetic, run_linkage, LinkageConfig, LinkageType, LogicType,
    DETERMINISTIC, FRL_BOOLEAN_DEFAULT, PROBABILISTIC, SYNTH_CONFIG,
};
use fuzzylink::similarity::{ColumnSpec, Matcher};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tfn(a: f64, b: f64, c: f64) -> Tfn {
    Tfn::new(a, b, c).unwrap()
}

fn quoted_weights() -> FuzzyWeightVector {
    FuzzyWeightVector::new(vec![
        tfn(0.1, 0.16, 0.33),
        tfn(0.15, 0.3, 0.6),
        tfn(0.28, 0.54, 0.96),
    ])
    .unwrap()
}

fn fwa_worked_example() -> Outcome {
    let scores = [
        tfn(0.0, 0.25, 1.0),
        tfn(0.23, 0.55, 1.0),
        tfn(0.0, 0.0, 1.0),
    ];
    let weights = quoted_weights();
    let started = Instant::now();
    let got = fwa_tfn(&scores, &weights).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let want = [0.04, 0.21, 1.0];
    for (g, w) in [got.a(), got.b(), got.c()].iter().zip(want) {
        check((g - w).abs() <= 0.01, || {
            format!("got {got:?}, want {want:?}")
        })?;
    }
    check(elapsed < Duration::from_millis(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "({:.4}, {:.4}, {:.4}) in {elapsed:?}",
        got.a(),
        got.b(),
        got.c()
    ))
}

fn defuzzified_weights() -> Outcome {
    let started = Instant::now();
    let w = crisp_weights(&quoted_weights()).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    for (g, want) in w.iter().zip([0.17, 0.31, 0.52]) {
        check((g - want).abs() <= 0.005, || format!("got {w:?}"))?;
    }
    check(elapsed < Duration::from_millis(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{:.4?} in {elapsed:?}", w))
}

fn rule_reproduction() -> Outcome {
    let terms = LinguisticTerms::default();
    let rules = generate_rule_base(3, &terms, &[0.17, 0.31, 0.52]).map_err(|e| e.to_string())?;
    let high = terms.index_of("high").unwrap();
    let low = terms.index_of("low").unwrap();
    let rule = rules
        .rules()
        .iter()
        .find(|r| r.antecedent == [Some(high), Some(high), Some(low)])
        .ok_or("no rule for (high, high, low)")?;
    let consequent = &terms.names()[rule.consequent];
    check(consequent == "medium", || {
        format!("consequent is {consequent}")
    })?;
    Ok("(high, high, low) -> medium".into())
}

fn fahp_tolerance() -> Outcome {
    let terms = LinguisticTerms::default();
    let relevance: Vec<_> = ["low", "medium", "high"]
        .iter()
        .map(|t| terms.term(t).unwrap())
        .collect();
    let w = fahp_geometric_mean(&relevance, 3)
        .and_then(|w| w.fwa_normalized())
        .map_err(|e| e.to_string())?;
    let modes: Vec<f64> = w.weights().iter().map(Tfn::b).collect();
    check(modes.windows(2).all(|p| p[0] < p[1]), || {
        format!("modes not increasing: {modes:?}")
    })?;
    for (m, want) in modes.iter().zip([0.16, 0.30, 0.54]) {
        check((m - want).abs() <= 0.06, || format!("modes {modes:?}"))?;
    }
    let endpoints: Vec<(f64, f64)> = w.weights().iter().map(|t| (t.a(), t.c())).collect();
    Ok(format!(
        "modes {modes:.4?}; endpoints {endpoints:.3?} (informational)"
    ))
}

const NAMES: &[&str] = &[
    "ST MARY",
    "ST MARYS",
    "MERCY",
    "MERCY CTR",
    "BAPTIST",
    "LAKE",
    "LAKES",
    "",
];
const CITIES: &[&str] = &["OCALA", "TAMPA", "OCALA ", "AUSTIN", ""];

fn random_dataset(rng: &mut ChaCha8Rng, rows: usize) -> Dataset {
    let pick = |rng: &mut ChaCha8Rng, v: &[&str]| v[rng.gen_range(0..v.len())].to_string();
    Dataset::new(
        vec!["name".into(), "address".into(), "city".into()],
        (0..rows)
            .map(|_| {
                vec![
                    pick(rng, NAMES),
                    format!("{} MAIN ST", rng.gen_range(1..30)),
                    pick(rng, CITIES),
                ]
            })
            .collect(),
    )
    .unwrap()
}

fn random_config(rng: &mut ChaCha8Rng, logic: LogicType, linkage: LinkageType) -> LinkageConfig {
    let all = [
        ColumnSpec::same("name", Matcher::JaroWinkler),
        ColumnSpec::same("address", Matcher::Levenshtein),
        ColumnSpec::same("city", Matcher::Exact),
    ];
    let n = rng.gen_range(1..=3);
    let mut cfg = LinkageConfig::with_columns(all[..n].to_vec()).unwrap();
    let names = cfg.terms.names().to_vec();
    for col in &mut cfg.columns {
        col.relevance = cfg
            .terms
            .term(&names[rng.gen_range(0..names.len())])
            .unwrap();
        col.threshold = rng.gen();
    }
    cfg.logic = logic;
    cfg.linkage = linkage;
    if rng.gen_bool(0.5) {
        cfg.crisp_weights = Some((0..n).map(|_| rng.gen_range(0.01..1.0)).collect());
    }
    cfg.alpha = rng.gen();
    cfg.fcm.seed = rng.gen();
    cfg
}

fn score_bounds() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pairs = 0;
    for (logic, linkage) in [
        (LogicType::Boolean, LinkageType::Crisp),
        (LogicType::Fuzzy, LinkageType::Crisp),
        (LogicType::Fuzzy, LinkageType::Fuzzy),
    ] {
        for i in 0..1000 {
            let cfg = random_config(&mut rng, logic, linkage);
            let (nl, nr) = (rng.gen_range(1..5), rng.gen_range(1..5));
            let left = random_dataset(&mut rng, nl);
            let right = random_dataset(&mut rng, nr);
            let run = run_linkage(&cfg, &left, &right)
                .map_err(|e| format!("{} configuration {i}: {e}", cfg.strategy_name()))?;
            for p in &run.pairs {
                check((0.0..=1.0).contains(&p.ts), || {
                    format!("{} configuration {i}: TS {}", cfg.strategy_name(), p.ts)
                })?;
            }
            pairs += run.pairs.len();
        }
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "3 x 1000 configurations, {pairs} pairs, in {elapsed:.2?}"
    ))
}

/// Weight TFN with vertices on a 0.02 grid, so α-cuts at 0, 0.5 and 1 fall
/// on the 0.01 grid of the oracle.
fn grid_weight(rng: &mut ChaCha8Rng) -> Tfn {
    let mut v = [0; 3].map(|_| rng.gen_range(0..=50) as f64 * 0.02);
    v.sort_by(f64::total_cmp);
    tfn(v[0], v[1], v[2])
}

fn random_score(rng: &mut ChaCha8Rng) -> Tfn {
    let mut v = [0; 3].map(|_| rng.gen::<f64>());
    v.sort_by(f64::total_cmp);
    tfn(v[0], v[1], v[2])
}

fn hundredths(i: Interval) -> std::ops::RangeInclusive<i64> {
    (i.lo() * 100.0).round() as i64..=(i.hi() * 100.0).round() as i64
}

/// Brute force over every weight vector on the 0.01 grid inside the α-cuts.
fn grid_oracle(scores: &[Interval], weights: &[Interval]) -> Option<(f64, f64)> {
    let n = scores.len();
    let mut best: Option<(f64, f64)> = None;
    let mut visit = |w: &[i64]| {
        let lo: f64 = w
            .iter()
            .zip(scores)
            .map(|(&w, s)| w as f64 / 100.0 * s.lo())
            .sum();
        let hi: f64 = w
            .iter()
            .zip(scores)
            .map(|(&w, s)| w as f64 / 100.0 * s.hi())
            .sum();
        best = Some(match best {
            None => (lo, hi),
            Some((a, b)) => (a.min(lo), b.max(hi)),
        });
    };
    let last = hundredths(weights[n - 1]);
    let mut w = vec![0i64; n];
    let fixed = n - 1;
    let ranges: Vec<_> = weights[..fixed].iter().map(|&i| hundredths(i)).collect();
    let mut idx: Vec<i64> = ranges.iter().map(|r| *r.start()).collect();
    loop {
        let used: i64 = idx.iter().sum();
        if last.contains(&(100 - used)) {
            w[..fixed].copy_from_slice(&idx);
            w[fixed] = 100 - used;
            visit(&w);
        }
        let mut k = 0;
        loop {
            if k == fixed {
                return best;
            }
            if idx[k] < *ranges[k].end() {
                idx[k] += 1;
                break;
            }
            idx[k] = *ranges[k].start();
            k += 1;
        }
    }
}

fn fwa_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let mut worst = 0.0f64;
    while checked < 200 {
        let n = rng.gen_range(1..=3);
        let alpha = [0.0, 0.5, 1.0][rng.gen_range(0..3)];
        let scores: Vec<Tfn> = (0..n).map(|_| random_score(&mut rng)).collect();
        let weights: Vec<Tfn> = (0..n).map(|_| grid_weight(&mut rng)).collect();
        let score_cuts: Vec<Interval> =
            scores.iter().map(|t| t.alpha_cut(alpha).unwrap()).collect();
        let weight_cuts: Vec<Interval> = weights
            .iter()
            .map(|t| t.alpha_cut(alpha).unwrap())
            .collect();
        let Some((lo, hi)) = grid_oracle(&score_cuts, &weight_cuts) else {
            continue;
        };
        let w = FuzzyWeightVector::new(weights).unwrap();
        let got = fwa_interval(&FwaInput {
            scores: &scores,
            weights: &w,
            alpha,
        })
        .map_err(|e| format!("feasible instance rejected: {e}"))?;
        let err = (got.lo() - lo).abs().max((got.hi() - hi).abs());
        check(err <= 1e-3, || {
            format!(
                "n={n} alpha={alpha}: greedy [{}, {}] vs grid [{lo}, {hi}]",
                got.lo(),
                got.hi()
            )
        })?;
        worst = worst.max(err);
        checked += 1;
    }
    Ok(format!(
        "200 feasible instances, max endpoint gap {worst:.2e}"
    ))
}

fn fcm_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let values: Vec<f64> = (0..400).map(|_| rng.gen::<f64>()).collect();

    let mut state = FcmState::new(values.clone(), vec![1.0; values.len()], 3, 2.0, 9)
        .map_err(|e| e.to_string())?;
    let mut previous = f64::INFINITY;
    for it in 0..100 {
        state.step();
        for row in state.memberships() {
            let sum: f64 = row.iter().sum();
            check((sum - 1.0).abs() <= 1e-9, || {
                format!("membership sum {sum} at iteration {it}")
            })?;
        }
        let obj = state.objective();
        check(obj <= previous + 1e-12, || {
            format!("objective rose {previous} -> {obj} at iteration {it}")
        })?;
        previous = obj;
    }

    let blobs: Vec<f64> = (0..100)
        .map(|i| {
            if i % 2 == 0 {
                0.1 + rng.gen::<f64>() * 0.05
            } else {
                0.85 + rng.gen::<f64>() * 0.05
            }
        })
        .collect();
    let params = FcmParams {
        clusters: 2,
        ..FcmParams::default()
    };
    let result = fcm(&blobs, &params).map_err(|e| e.to_string())?;
    check(
        (result.centers[0] - 0.125).abs() < 0.02 && (result.centers[1] - 0.875).abs() < 0.02,
        || format!("blob centers {:?}", result.centers),
    )?;
    for (v, m) in blobs.iter().zip(&result.memberships) {
        let nearest = usize::from(*v > 0.5);
        check(m[nearest] > 0.9, || format!("{v} has memberships {m:?}"))?;
    }

    let a = fcm(&values, &FcmParams::default()).map_err(|e| e.to_string())?;
    let b = fcm(&values, &FcmParams::default()).map_err(|e| e.to_string())?;
    let bits = |r: &fuzzylink::clustering::FcmResult| {
        r.centers
            .iter()
            .chain(r.memberships.iter().flatten())
            .map(|x| x.to_bits())
            .collect::<Vec<_>>()
    };
    check(bits(&a) == bits(&b), || "fixed-seed runs differ".into())?;
    Ok(format!(
        "blob centers {:.3?}; seeded runs bit-identical",
        result.centers
    ))
}

/// Centroid of `(0.5, 1, 1)` clipped at height h, integrated in closed form.
fn clipped_high_centroid(h: f64) -> f64 {
    // Rising edge 2(x - 0.5) on [0.5, 0.5 + h/2], then flat at h to 1.
    let k = 0.5 + h / 2.0;
    let rise_area = h * (k - 0.5) / 2.0;
    let rise_moment = 2.0 * ((k.powi(3) - 0.125) / 3.0 - 0.5 * (k * k - 0.25) / 2.0);
    let flat_area = h * (1.0 - k);
    let flat_moment = h * (1.0 - k * k) / 2.0;
    (rise_moment + flat_moment) / (rise_area + flat_area)
}

fn mamdani_properties() -> Outcome {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let terms = LinguisticTerms::default();
    let var = |name: &str| build_partition(name, unit, &terms).unwrap();

    let rules = generate_rule_base(3, &terms, &[0.17, 0.31, 0.52]).unwrap();
    let model = MamdaniModel::new(vec![var("a"), var("b"), var("c")], var("score"), rules).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let s: Vec<f64> = (0..3).map(|_| rng.gen()).collect();
        let out = model.infer(&s).map_err(|e| e.to_string())?;
        check((0.0..=1.0).contains(&out.value), || {
            format!("{s:?} -> {}", out.value)
        })?;
    }

    let symmetric = model
        .infer(&[0.5, 0.5, 0.5])
        .map_err(|e| e.to_string())?
        .value;
    check((symmetric - 0.5).abs() <= 0.002, || {
        format!("symmetric input gave {symmetric}")
    })?;

    let high = terms.index_of("high").unwrap();
    let single = RuleBase::new(vec![FuzzyRule {
        antecedent: vec![Some(high)],
        consequent: high,
    }])
    .unwrap();
    let model = MamdaniModel::new(vec![var("a")], var("score"), single).unwrap();
    let mut worst = 0.0f64;
    for x in [0.6, 0.75, 0.9, 1.0] {
        let got = model.infer(&[x]).map_err(|e| e.to_string())?.value;
        let want = clipped_high_centroid(2.0 * (x - 0.5));
        check((got - want).abs() <= 0.002, || {
            format!("x={x}: centroid {got}, analytic {want}")
        })?;
        worst = worst.max((got - want).abs());
    }
    Ok(format!(
        "symmetric -> {symmetric:.4}; analytic centroid gap {worst:.1e}"
    ))
}

pub const BENCH_SEED: u64 = 42;
pub const BENCH_CORRUPTION: f64 = 0.3;

fn ordering(
    left: &Dataset,
    right: &Dataset,
    cfg: &LinkageConfig,
    out: Option<&std::path::Path>,
) -> Outcome {
    let started = Instant::now();
    let cmp = compare(cfg, left, right, None).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    if let Some(dir) = out {
        emit_report(&cmp.reports(), dir).map_err(|e| e.to_string())?;
    }
    let count = |s: &str| cmp.run(s).map(|r| r.report.matches()).unwrap_or(0);
    let (det, frl, prob) = (
        count(DETERMINISTIC),
        count(FRL_BOOLEAN_DEFAULT),
        count(PROBABILISTIC),
    );
    let summary = format!("deterministic {det} <= FRL Boolean-crisp {frl} <= probabilistic {prob}");
    check(det <= frl && frl <= prob, || {
        format!("ordering violated: {summary}")
    })?;
    check(elapsed < Duration::from_secs(120), || {
        format!("compare took {elapsed:?}")
    })?;
    Ok(format!("{summary}; compare in {elapsed:.2?}"))
}

fn end_to_end_ordering() -> Outcome {
    let data =
        generate_synthetic(500, 500, BENCH_CORRUPTION, BENCH_SEED).map_err(|e| e.to_string())?;
    let cfg = LinkageConfig::from_toml_str(SYNTH_CONFIG).map_err(|e| e.to_string())?;
    ordering(&data.left, &data.right, &cfg, None)
}

fn hospital_counts() -> Outcome {
    let var = |k: &str| std::env::var_os(k);
    let (Some(left), Some(right), Some(config)) = (
        var("FUZZYLINK_HOSPITAL_LEFT"),
        var("FUZZYLINK_HOSPITAL_RIGHT"),
        var("FUZZYLINK_HOSPITAL_CONFIG"),
    ) else {
        return Ok(
            "hospital listings not supplied; real-data counts depend on dataset versions, \
             lambda, m/u sampling and partition settings and are informational only"
                .into(),
        );
    };
    let left = Dataset::from_csv_path(left).map_err(|e| e.to_string())?;
    let right = Dataset::from_csv_path(right).map_err(|e| e.to_string())?;
    let cfg = LinkageConfig::from_path(config).map_err(|e| e.to_string())?;
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let detail = ordering(&left, &right, &cfg, Some(out.path()))?;
    let table =
        std::fs::read_to_string(out.path().join("report.txt")).map_err(|e| e.to_string())?;
    Ok(format!("{detail} (counts informational)\n{table}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("fuzzy weighted average worked example", fwa_worked_example),
        ("defuzzified weights", defuzzified_weights),
        ("generated rule consequent", rule_reproduction),
        ("FAHP modes within tolerance", fahp_tolerance),
        ("total scores bounded in every mode", score_bounds),
        ("greedy FWA matches grid search", fwa_oracle),
        ("fuzzy c-means properties", fcm_properties),
        ("Mamdani properties", mamdani_properties),
        (
            "strategy ordering on synthetic benchmark",
            end_to_end_ordering,
        ),
        ("hospital listings ordering", hospital_counts),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "\n{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
