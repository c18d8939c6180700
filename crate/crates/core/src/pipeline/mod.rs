//! Configuration, orchestration, reporting and synthetic test data.

mod config;
mod report;
mod run;
mod synth;

pub use config::{
    validate_config, BaselineParams, LinkColumn, LinkageConfig, LinkageType, LogicType,
    RawBaseline, RawColumn, RawConfig, RawConstraint, RawFcm, DEFAULT_CUTOFF, DEFAULT_SAMPLE_SIZE,
    DEFAULT_THRESHOLD,
};
pub use report::{
    emit_report, format_report_table, write_pairs, write_report_csv, PAIRS_FILE, REPORT_CSV,
    REPORT_TXT,
};
pub use run::{
    apply_boolean_logic, build_fuzzy_model, compare, fahp_weights, link_space, read_truth,
    run_deterministic, run_linkage, run_linkage_files, run_probabilistic, score_pair_crisp,
    Comparison, CrispScore, LinkageReport, LinkageRun, ScoredPair, ScoredSpace, Truth,
    DETERMINISTIC, FRL_BOOLEAN_DEFAULT, FRL_BOOLEAN_FAHP, PROBABILISTIC, SCORE_VARIABLE,
};
pub use synth::{generate_synthetic, write_synthetic, SyntheticData, SYNTH_CONFIG};
