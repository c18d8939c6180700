//! Output files: per-pair scores and per-strategy summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::run::{LinkageReport, LinkageRun};

pub const PAIRS_FILE: &str = "pairs.csv";
pub const REPORT_CSV: &str = "report.csv";
pub const REPORT_TXT: &str = "report.txt";

const REPORT_HEADER: [&str; 5] = [
    "strategy",
    "total_pairs",
    "matches",
    "possible_matches",
    "non_matches",
];

fn slug(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}

fn csv_error(path: &Path, source: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn report_row(r: &LinkageReport) -> [String; 5] {
    [
        r.strategy.clone(),
        r.total_pairs.to_string(),
        r.matches().to_string(),
        r.possible_matches().to_string(),
        r.non_matches().to_string(),
    ]
}

/// One row per pair: ids, blocking membership, raw and weighted column
/// scores, total score, cluster memberships and the assigned label.
pub fn write_pairs(run: &LinkageRun, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let weighted = run
        .pairs
        .first()
        .is_some_and(|p| p.weighted_scores.is_some());

    let mut header = vec!["left_id".to_string(), "right_id".into(), "mu_c".into()];
    header.extend(run.columns.iter().map(|c| format!("raw_{}", slug(c))));
    if weighted {
        header.extend(run.columns.iter().map(|c| format!("weighted_{}", slug(c))));
    }
    header.push("ts".into());
    header.extend(run.labels.iter().map(|l| format!("m_{}", slug(l))));
    header.push("label".into());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;

    let mut row = Vec::with_capacity(header.len());
    for p in &run.pairs {
        row.clear();
        row.push(p.left.to_string());
        row.push(p.right.to_string());
        row.push(p.mu_c.to_string());
        row.extend(p.raw_scores.iter().map(f64::to_string));
        if let Some(ws) = &p.weighted_scores {
            row.extend(ws.iter().map(f64::to_string));
        }
        row.push(p.ts.to_string());
        row.extend(p.memberships.iter().map(f64::to_string));
        row.push(run.label_of(p).to_string());
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_report_csv(reports: &[LinkageReport], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(REPORT_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for r in reports {
        w.write_record(report_row(r))
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Fixed-width text table of the reports. Strategy names are left aligned,
/// counts right aligned.
pub fn format_report_table(reports: &[LinkageReport]) -> String {
    let rows: Vec<[String; 5]> = reports.iter().map(report_row).collect();
    let mut widths = REPORT_HEADER.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: [&str; 5]| {
        let mut s = format!("{:<w$}", cells[0], w = widths[0]);
        for (cell, w) in cells[1..].iter().zip(&widths[1..]) {
            let _ = write!(s, "  {cell:>w$}");
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(REPORT_HEADER);
    let rule = widths.map(|w| "-".repeat(w));
    line([&rule[0], &rule[1], &rule[2], &rule[3], &rule[4]].map(String::as_str));
    for row in &rows {
        line([&row[0], &row[1], &row[2], &row[3], &row[4]].map(String::as_str));
    }
    out
}

/// Write `report.csv` and `report.txt` into `out_dir`, creating it if needed.
pub fn emit_report(reports: &[LinkageReport], out_dir: impl AsRef<Path>) -> Result<()> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    write_report_csv(reports, dir.join(REPORT_CSV))?;
    let txt = dir.join(REPORT_TXT);
    fs::write(&txt, format_report_table(reports)).map_err(|source| Error::Io { path: txt, source })
}
