//! Report rendering (JSON, accuracy CSV, markdown) and atomic file writes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use tweetseq_core::ensemble::EnsembleKind;
use tweetseq_core::features::Vectorizer;
use tweetseq_core::ClassifierKind;

use crate::harness::{CellResult, Family, Outcome, RunReport};
use crate::Error;

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Writes `bytes` to a temporary file beside `path`, syncs it and renames
/// it into place, so `path` never holds a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let n = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    let tmp = dir.join(format!(".{name}.tmp.{}.{n}", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

pub fn render_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> serde_json::Result<RunReport> {
    serde_json::from_str(text)
}

/// Removes every `timing` member, leaving what must be identical across reruns.
pub fn strip_timing(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Object(map) => {
            map.remove("timing");
            map.values_mut().for_each(strip_timing);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn first_seen<'a, I: IntoIterator<Item = &'a str>>(items: I) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for i in items {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

fn model_name(model: &str) -> String {
    model.parse::<ClassifierKind>().map(|k| k.display_name().to_string()).unwrap_or_else(|_| model.to_string())
}

fn base_cells(report: &RunReport, v: Vectorizer) -> Vec<&CellResult> {
    report.cells.iter().filter(|c| c.family == Family::Base && c.vectorizer == v).collect()
}

/// Vectorizers that have at least one base cell, in first-use order.
pub fn vectorizers(report: &RunReport) -> Vec<Vectorizer> {
    let mut out = Vec::new();
    for c in report.cells.iter().filter(|c| c.family == Family::Base) {
        if !out.contains(&c.vectorizer) {
            out.push(c.vectorizer);
        }
    }
    out
}

/// Base-model accuracy matrix: one row per model, one column per sequence
/// alias, four decimals. Failed cells are empty.
pub fn render_csv(report: &RunReport, v: Vectorizer) -> String {
    let cells = base_cells(report, v);
    let aliases = first_seen(cells.iter().map(|c| c.sequence.as_str()));
    let models = first_seen(cells.iter().map(|c| c.model.as_str()));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header = vec!["model".to_string()];
    header.extend(aliases.iter().map(|a| a.to_string()));
    w.write_record(&header).expect("in-memory write");
    for m in &models {
        let mut row = vec![model_name(m)];
        for a in &aliases {
            let acc = cells.iter().find(|c| c.model == *m && c.sequence == *a).and_then(|c| c.accuracy());
            row.push(acc.map(|x| format!("{x:.4}")).unwrap_or_default());
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

fn technique(model: &str) -> (String, String) {
    let (kind, rest) = model.split_once('(').unwrap_or((model, ""));
    let bases = rest.split(')').next().unwrap_or("");
    let base_names: Vec<String> = bases.split('+').filter(|b| !b.is_empty()).map(model_name).collect();
    let name = match kind.parse::<EnsembleKind>() {
        Ok(EnsembleKind::Bagging) => "Bagging Classifier",
        Ok(EnsembleKind::Adaboost) => "AdaBoost Classifier",
        Ok(EnsembleKind::VoteHard) => "Stacking Classifier (Hard)",
        Ok(EnsembleKind::VoteSoft) => "Stacking Classifier (Soft)",
        Ok(EnsembleKind::Stacking) => "Stacked Generalization",
        Err(_) => kind,
    };
    (name.to_string(), base_names.join(", "))
}

fn fmt4(x: f64) -> String {
    format!("{x:.4}")
}

pub fn render_markdown(report: &RunReport) -> String {
    let mut md = String::new();
    let _ = writeln!(md, "# Experiment report\n");
    let _ = writeln!(md, "- seed: {}", report.seed);
    let _ = writeln!(md, "- config digest: `{}`", report.config_digest);
    let _ = writeln!(md, "- cells: {} ok, {} failed", report.ok_cells, report.failed_cells);
    if let Some(c) = &report.corpus {
        let _ = writeln!(
            md,
            "- corpus: {} documents ({} inappropriate, {} normal); split {} / {} / {}",
            c.documents, c.inappropriate, c.normal, c.train, c.validation, c.test
        );
    }
    for e in &report.errors {
        let _ = writeln!(md, "- error: {e}");
    }
    for v in vectorizers(report) {
        let cells = base_cells(report, v);
        let aliases = first_seen(cells.iter().map(|c| c.sequence.as_str()));
        let models = first_seen(cells.iter().map(|c| c.model.as_str()));
        let _ = writeln!(md, "\n## Base model accuracy by sequence ({})\n", v.as_str());
        let _ = writeln!(md, "| Model | {} |", aliases.join(" | "));
        let _ = writeln!(md, "|---|{}", "---|".repeat(aliases.len()));
        for m in &models {
            let vals: Vec<String> = aliases
                .iter()
                .map(|a| {
                    cells
                        .iter()
                        .find(|c| c.model == *m && c.sequence == *a)
                        .and_then(|c| c.accuracy())
                        .map(fmt4)
                        .unwrap_or_else(|| "failed".into())
                })
                .collect();
            let _ = writeln!(md, "| {} | {} |", model_name(m), vals.join(" | "));
        }
        for a in aliases.iter().filter(|a| ["T8", "PROPOSED"].contains(a)) {
            let _ = writeln!(md, "\n## Base models on {a} ({})\n", v.as_str());
            let _ = writeln!(md, "| Model | Accuracy | Precision | Recall | F1 |");
            let _ = writeln!(md, "|---|---|---|---|---|");
            for c in cells.iter().filter(|c| c.sequence == *a) {
                if let Some(m) = c.test_metrics() {
                    let _ = writeln!(
                        md,
                        "| {} | {} | {} | {} | {} |",
                        model_name(&c.model),
                        fmt4(m.accuracy),
                        fmt4(m.precision),
                        fmt4(m.recall),
                        fmt4(m.f1)
                    );
                }
            }
        }
    }
    let ens: Vec<&CellResult> = report.cells.iter().filter(|c| c.family == Family::Ensemble).collect();
    if !ens.is_empty() {
        let _ = writeln!(md, "\n## Ensembles\n");
        let _ = writeln!(md, "| Technique | Base models | Sequence | Vectorizer | Accuracy |");
        let _ = writeln!(md, "|---|---|---|---|---|");
        for c in ens {
            let (name, bases) = technique(&c.model);
            let acc = c.accuracy().map(fmt4).unwrap_or_else(|| "failed".into());
            let _ = writeln!(md, "| {name} | {bases} | {} | {} | {acc} |", c.sequence, c.vectorizer.as_str());
        }
    }
    let failed: Vec<&CellResult> =
        report.cells.iter().filter(|c| matches!(c.outcome, Outcome::Failed { .. })).collect();
    if !failed.is_empty() {
        let _ = writeln!(md, "\n## Failed cells\n");
        for c in failed {
            if let Outcome::Failed { error } = &c.outcome {
                let _ = writeln!(md, "- `{}`: {error}", c.id);
            }
        }
    }
    md
}

/// File name for the accuracy matrix of one vectorizer.
pub fn csv_name(v: Vectorizer) -> String {
    format!("accuracy_{}.csv", v.as_str())
}

/// Writes `report.json`, one accuracy CSV per vectorizer and `report.md`
/// into `dir`. Returns the paths written.
pub fn write_reports(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let mut written = Vec::new();
    let json = dir.join("report.json");
    write_atomic(&json, render_json(report).as_bytes())?;
    written.push(json);
    for v in vectorizers(report) {
        let p = dir.join(csv_name(v));
        write_atomic(&p, render_csv(report, v).as_bytes())?;
        written.push(p);
    }
    let md = dir.join("report.md");
    write_atomic(&md, render_markdown(report).as_bytes())?;
    written.push(md);
    Ok(written)
}
