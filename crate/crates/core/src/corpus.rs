//! Labeled tweet collections: binary label unification for the three public
//! hate-speech datasets, deduplicating combination and stratified splitting.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{streams, SeedStream};

/// Binary target. `Inappropriate` is the positive (hate) class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Normal,
    Inappropriate,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Normal, Label::Inappropriate];

    pub fn is_positive(self) -> bool {
        self == Label::Inappropriate
    }

    /// `-1` for normal, `+1` for inappropriate.
    pub fn sign(self) -> f64 {
        match self {
            Label::Normal => -1.0,
            Label::Inappropriate => 1.0,
        }
    }

    pub fn from_positive(positive: bool) -> Label {
        if positive {
            Label::Inappropriate
        } else {
            Label::Normal
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Normal => "normal",
            Label::Inappropriate => "inappropriate",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "WZ_LS")]
    WzLs,
    #[serde(rename = "DT")]
    Dt,
    #[serde(rename = "FOUNTA")]
    Founta,
    #[serde(rename = "GENERIC")]
    Generic,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::WzLs => "WZ_LS",
            Source::Dt => "DT",
            Source::Founta => "FOUNTA",
            Source::Generic => "GENERIC",
        }
    }

    /// Label strings a raw file of this source may carry.
    pub fn native_labels(self) -> &'static [&'static str] {
        match self {
            Source::WzLs => &["racism", "sexism", "both", "neither"],
            Source::Dt => &["hate", "offensive", "neither"],
            Source::Founta => &["normal", "abusive", "hate", "spam"],
            Source::Generic => &["inappropriate", "normal", "hate", "nonhate"],
        }
    }

    /// Binary mapping of a native label. `Ok(None)` means the row is dropped (spam).
    pub fn map_label(self, native: &str) -> Result<Option<Label>> {
        let mapped = match (self, native) {
            (Source::WzLs, "racism" | "sexism" | "both") => Some(Label::Inappropriate),
            (Source::WzLs, "neither") => Some(Label::Normal),
            (Source::Dt, "hate" | "offensive") => Some(Label::Inappropriate),
            (Source::Dt, "neither") => Some(Label::Normal),
            (Source::Founta, "abusive" | "hate") => Some(Label::Inappropriate),
            (Source::Founta, "normal") => Some(Label::Normal),
            (Source::Founta, "spam") => return Ok(None),
            (Source::Generic, "inappropriate" | "hate") => Some(Label::Inappropriate),
            (Source::Generic, "normal" | "nonhate") => Some(Label::Normal),
            _ => None,
        };
        mapped.map(Some).ok_or_else(|| Error::UnmappedLabel { label: native.to_owned(), source: self.as_str() })
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub label: Label,
    pub source: Source,
}

/// One row of a source file with its native, possibly multi-class, label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub id: String,
    pub text: String,
    pub label: String,
    /// 1-based line (or record) number in the source file.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCorpus {
    pub source: Source,
    pub records: Vec<RawRecord>,
}

impl RawCorpus {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Count of records per native label, in `Source::native_labels` order.
    pub fn label_counts(&self) -> Vec<(&'static str, usize)> {
        self.source
            .native_labels()
            .iter()
            .map(|l| (*l, self.records.iter().filter(|r| r.label == *l).count()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub normal: usize,
    pub inappropriate: usize,
}

impl ClassCounts {
    pub fn get(&self, label: Label) -> usize {
        match label {
            Label::Normal => self.normal,
            Label::Inappropriate => self.inappropriate,
        }
    }

    pub fn total(&self) -> usize {
        self.normal + self.inappropriate
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledCorpus {
    documents: Vec<Document>,
    class_counts: ClassCounts,
}

impl LabeledCorpus {
    pub fn new(documents: Vec<Document>) -> Self {
        let mut class_counts = ClassCounts::default();
        for d in &documents {
            match d.label {
                Label::Normal => class_counts.normal += 1,
                Label::Inappropriate => class_counts.inappropriate += 1,
            }
        }
        LabeledCorpus { documents, class_counts }
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn into_documents(self) -> Vec<Document> {
        self.documents
    }

    pub fn class_counts(&self) -> ClassCounts {
        self.class_counts
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.documents.iter().map(|d| d.label).collect()
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.documents.iter().map(|d| d.text.as_str())
    }

    /// Same ids, labels and sources with every text rewritten by `f`.
    pub fn map_texts<F: FnMut(&str) -> String>(&self, mut f: F) -> LabeledCorpus {
        let documents = self.documents.iter().map(|d| Document { text: f(&d.text), ..d.clone() }).collect();
        LabeledCorpus { documents, class_counts: self.class_counts }
    }
}

/// Maps native labels onto the binary scheme. FOUNTA spam rows are dropped.
pub fn binarize(raw: &RawCorpus) -> Result<LabeledCorpus> {
    let mut documents = Vec::with_capacity(raw.records.len());
    for rec in &raw.records {
        if let Some(label) = raw.source.map_label(&rec.label)? {
            documents.push(Document { id: rec.id.clone(), text: rec.text.clone(), label, source: raw.source });
        }
    }
    Ok(LabeledCorpus::new(documents))
}

/// Case-folded, whitespace-collapsed text used to detect duplicates.
pub fn dedup_key(text: &str) -> String {
    let folded = text.to_lowercase();
    let mut key = String::with_capacity(folded.len());
    for word in folded.split_whitespace() {
        if !key.is_empty() {
            key.push(' ');
        }
        key.push_str(word);
    }
    key
}

/// Concatenates corpora and removes duplicate texts; the first occurrence wins.
pub fn combine(corpora: &[LabeledCorpus]) -> LabeledCorpus {
    let mut seen = HashSet::new();
    let mut documents = Vec::new();
    for corpus in corpora {
        for doc in &corpus.documents {
            if seen.insert(dedup_key(&doc.text)) {
                documents.push(doc.clone());
            }
        }
    }
    LabeledCorpus::new(documents)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCorpus {
    pub train: LabeledCorpus,
    pub validation: LabeledCorpus,
    pub test: LabeledCorpus,
    pub seed: u64,
    pub ratios: [f64; 3],
}

pub(crate) fn check_ratios(ratios: &[f64]) -> Result<()> {
    if ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InvalidRatios("every ratio must be positive".into()));
    }
    let sum: f64 = ratios.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidRatios(alloc::format!("ratios sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Largest-remainder apportionment of `n` items over `ratios`; ties go to the
/// earlier part.
pub(crate) fn apportion(n: usize, ratios: &[f64]) -> Vec<usize> {
    let ideal: Vec<f64> = ratios.iter().map(|r| n as f64 * r).collect();
    let mut sizes: Vec<usize> = ideal.iter().map(|x| libm::floor(*x) as usize).collect();
    let mut left = n.saturating_sub(sizes.iter().sum());
    let mut order: Vec<usize> = (0..ratios.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = ideal[a] - libm::floor(ideal[a]);
        let fb = ideal[b] - libm::floor(ideal[b]);
        fb.partial_cmp(&fa).unwrap_or(core::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for &p in order.iter().cycle() {
        if left == 0 {
            break;
        }
        sizes[p] += 1;
        left -= 1;
    }
    sizes
}

/// Per-class part sizes whose column sums match the global apportionment.
///
/// Each class takes `floor(n_c * r_p)` per part, then hands its leftover
/// documents one each to parts with a fractional remainder, preferring those
/// with room under the global target, largest remainder first.
pub(crate) fn stratified_sizes(class_sizes: &[usize], ratios: &[f64]) -> Vec<Vec<usize>> {
    let parts = ratios.len();
    let total: usize = class_sizes.iter().sum();
    let targets = apportion(total, ratios);
    let floors: Vec<Vec<usize>> =
        class_sizes.iter().map(|&n| ratios.iter().map(|r| libm::floor(n as f64 * r) as usize).collect()).collect();
    let mut assigned = vec_zeros(parts);
    let mut result = Vec::with_capacity(class_sizes.len());
    for (c, &n) in class_sizes.iter().enumerate() {
        let mut sizes = floors[c].clone();
        let mut left = n - sizes.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..parts).collect();
        let frac = |p: usize| {
            let x = n as f64 * ratios[p];
            x - libm::floor(x)
        };
        order.sort_by(|&a, &b| frac(b).partial_cmp(&frac(a)).unwrap_or(core::cmp::Ordering::Equal).then(a.cmp(&b)));
        // Room left in part p once every later class has taken its floor.
        let capacity = |p: usize, sizes: &[usize]| -> isize {
            let later: usize = floors[c + 1..].iter().map(|f| f[p]).sum();
            targets[p] as isize - assigned[p] as isize - sizes[p] as isize - later as isize
        };
        // A part never takes more than the ceiling of its share.
        let below_ceil = |p: usize, sizes: &[usize]| sizes[p] == floors[c][p] && frac(p) > 0.0;
        while left > 0 {
            let pick = order
                .iter()
                .copied()
                .find(|&p| below_ceil(p, &sizes) && capacity(p, &sizes) > 0)
                .or_else(|| order.iter().copied().find(|&p| below_ceil(p, &sizes)))
                .unwrap_or(order[0]);
            sizes[pick] += 1;
            left -= 1;
        }
        for p in 0..parts {
            assigned[p] += sizes[p];
        }
        result.push(sizes);
    }
    result
}

fn vec_zeros(n: usize) -> Vec<usize> {
    alloc::vec![0; n]
}

/// Stratified, seed-deterministic partition into train / validation / test.
///
/// Each class is shuffled independently (one ChaCha8 stream, classes in
/// `Label::ALL` order) and cut into contiguous runs; within a part, documents
/// keep their input order.
pub fn split(corpus: &LabeledCorpus, ratios: [f64; 3], seed: u64) -> Result<SplitCorpus> {
    check_ratios(&ratios)?;
    let by_class: Vec<Vec<usize>> = Label::ALL
        .iter()
        .map(|l| corpus.documents.iter().enumerate().filter(|(_, d)| d.label == *l).map(|(i, _)| i).collect())
        .collect();
    for (label, members) in Label::ALL.iter().zip(&by_class) {
        if members.len() < ratios.len() {
            return Err(Error::ClassTooSmall { label: label.as_str(), count: members.len(), parts: ratios.len() });
        }
    }
    let sizes = stratified_sizes(&by_class.iter().map(Vec::len).collect::<Vec<_>>(), &ratios);
    let mut rng = SeedStream::new(seed, streams::SPLIT);
    let mut parts: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (mut members, class_sizes) in by_class.into_iter().zip(sizes) {
        rng.shuffle(&mut members);
        let mut start = 0;
        for (p, size) in class_sizes.into_iter().enumerate() {
            parts[p].extend_from_slice(&members[start..start + size]);
            start += size;
        }
    }
    let take = |mut idx: Vec<usize>| {
        idx.sort_unstable();
        LabeledCorpus::new(idx.into_iter().map(|i| corpus.documents[i].clone()).collect())
    };
    let [train, validation, test] = parts;
    Ok(SplitCorpus { train: take(train), validation: take(validation), test: take(test), seed, ratios })
}
