//! Loaders for the four dataset layouts. Every loader yields native labels;
//! `tweetseq_core::corpus::binarize` maps them to the binary scheme.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use tweetseq_core::corpus::{RawCorpus, RawRecord, Source};
use tweetseq_core::{Error as CoreError, LabeledCorpus};

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetFormat {
    DtCsv,
    FountaTsv,
    WzlsCsv,
    GenericCsv,
}

impl DatasetFormat {
    pub const ALL: [DatasetFormat; 4] =
        [DatasetFormat::DtCsv, DatasetFormat::FountaTsv, DatasetFormat::WzlsCsv, DatasetFormat::GenericCsv];

    pub fn as_str(self) -> &'static str {
        match self {
            DatasetFormat::DtCsv => "dt_csv",
            DatasetFormat::FountaTsv => "founta_tsv",
            DatasetFormat::WzlsCsv => "wzls_csv",
            DatasetFormat::GenericCsv => "generic_csv",
        }
    }

    pub fn source(self) -> Source {
        match self {
            DatasetFormat::DtCsv => Source::Dt,
            DatasetFormat::FountaTsv => Source::Founta,
            DatasetFormat::WzlsCsv => Source::WzLs,
            DatasetFormat::GenericCsv => Source::Generic,
        }
    }
}

impl fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DatasetFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let l = s.trim().to_ascii_lowercase().replace('-', "_");
        DatasetFormat::ALL.into_iter().find(|f| f.as_str() == l).ok_or_else(|| {
            format!("unknown dataset format {s:?}; expected dt_csv, founta_tsv, wzls_csv or generic_csv")
        })
    }
}

/// DT's numeric classes in order 0, 1, 2.
const DT_CLASSES: [&str; 3] = ["0", "1", "2"];

fn read_utf8(path: &Path) -> Result<String, Error> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    match String::from_utf8(bytes) {
        Ok(mut s) => {
            if s.starts_with('\u{feff}') {
                s.drain(..3);
            }
            Ok(s)
        }
        Err(e) => {
            let at = e.utf8_error().valid_up_to();
            let line = e.as_bytes()[..at].iter().filter(|b| **b == b'\n').count() + 1;
            Err(Error::io(path, io::Error::new(io::ErrorKind::InvalidData, format!("invalid UTF-8 at line {line}"))))
        }
    }
}

fn malformed(line: usize, reason: impl Into<String>) -> CoreError {
    CoreError::MalformedRow { line, reason: reason.into() }
}

fn check_label(source: Source, line: usize, label: &str) -> Result<(), CoreError> {
    if source.native_labels().contains(&label) {
        Ok(())
    } else {
        Err(CoreError::UnknownLabel { line, label: label.into(), permitted: source.native_labels().to_vec() })
    }
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name))
}

fn parse_csv(text: &str, format: DatasetFormat) -> Result<Vec<RawRecord>, CoreError> {
    let source = format.source();
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    let need = |name: &str| column(&headers, name).ok_or_else(|| malformed(1, format!("missing column {name:?}")));
    let (id_col, text_col, label_col) = match format {
        DatasetFormat::DtCsv => {
            // The published file's first column is an unnamed row index.
            let id = column(&headers, "id").or_else(|| headers.get(0).filter(|h| h.trim().is_empty()).map(|_| 0));
            (id, need("tweet")?, need("class")?)
        }
        _ => (Some(need("id")?), need("text")?, need("label")?),
    };
    // Under CRLF the csv crate places a record's start on the preceding `\n`
    // and miscounts lines, so lines are recounted from the byte offset.
    let line_at = |byte: u64| {
        let b = text.as_bytes();
        let at = (byte as usize).min(b.len());
        let end = if b.get(at) == Some(&b'\n') { at + 1 } else { at };
        b[..end].iter().filter(|c| **c == b'\n').count() + 1
    };
    let mut out = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| malformed(e.position().map_or(n + 2, |p| line_at(p.byte())), e.to_string()))?;
        let line = rec.position().map_or(n + 2, |p| line_at(p.byte()));
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        let field = |i: usize| {
            rec.get(i)
                .ok_or_else(|| malformed(line, format!("expected at least {} fields, found {}", i + 1, rec.len())))
        };
        let raw_label = field(label_col)?.trim();
        let label = match format {
            DatasetFormat::DtCsv => {
                let i = DT_CLASSES.iter().position(|c| *c == raw_label).ok_or_else(|| CoreError::UnknownLabel {
                    line,
                    label: raw_label.into(),
                    permitted: DT_CLASSES.to_vec(),
                })?;
                source.native_labels()[i].to_string()
            }
            _ => {
                let l = raw_label.to_ascii_lowercase();
                check_label(source, line, &l)?;
                l
            }
        };
        let id = match id_col {
            Some(i) => field(i)?.trim().to_string(),
            None => (n + 1).to_string(),
        };
        // Generic ids are kept verbatim; the other layouts get a source prefix.
        let id = if format == DatasetFormat::GenericCsv { id } else { format!("{}:{id}", source.as_str()) };
        out.push(RawRecord { id, text: field(text_col)?.to_string(), label, line });
    }
    Ok(out)
}

/// `tweet<TAB>label[<TAB>count]`, no quoting; an optional header row with a
/// `label` field is skipped.
fn parse_founta(text: &str) -> Result<Vec<RawRecord>, CoreError> {
    let source = Source::Founta;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.strip_suffix('\r').unwrap_or(raw);
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split('\t').collect();
        if fields.len() < 2 {
            return Err(malformed(line, "expected tweet<TAB>label[<TAB>count]"));
        }
        let has_count = fields.len() >= 3 && fields[fields.len() - 1].trim().parse::<u64>().is_ok();
        let label_at = if has_count { fields.len() - 2 } else { fields.len() - 1 };
        let label = fields[label_at].trim().to_ascii_lowercase();
        if line == 1 && fields.iter().any(|f| f.trim().eq_ignore_ascii_case("label")) {
            continue;
        }
        check_label(source, line, &label)?;
        out.push(RawRecord {
            id: format!("{}:{line}", source.as_str()),
            text: fields[..label_at].join("\t"),
            label,
            line,
        });
    }
    Ok(out)
}

/// Parses dataset text already in memory.
pub fn parse(text: &str, format: DatasetFormat) -> Result<RawCorpus, CoreError> {
    let records = match format {
        DatasetFormat::FountaTsv => parse_founta(text)?,
        _ => parse_csv(text, format)?,
    };
    Ok(RawCorpus { source: format.source(), records })
}

/// Reads and parses one dataset file.
pub fn load(path: &Path, format: DatasetFormat) -> Result<RawCorpus, Error> {
    let text = read_utf8(path)?;
    parse(&text, format).map_err(|source| Error::Dataset { path: path.to_path_buf(), source })
}

/// Loads and binarizes one dataset file.
pub fn load_labeled(path: &Path, format: DatasetFormat) -> Result<LabeledCorpus, Error> {
    let raw = load(path, format)?;
    tweetseq_core::corpus::binarize(&raw).map_err(|source| Error::Dataset { path: path.to_path_buf(), source })
}

/// Serializes a labeled corpus as `id,text,label`.
pub fn to_generic_csv(corpus: &LabeledCorpus) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["id", "text", "label"]).expect("in-memory write");
    for d in corpus.documents() {
        w.write_record([d.id.as_str(), d.text.as_str(), d.label.as_str()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}
