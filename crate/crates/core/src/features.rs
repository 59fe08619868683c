//! Whitespace tokenization, vocabulary fitting, count and TF-IDF vectors.
//!
//! TF-IDF uses the smoothed form `idf(t) = ln((1 + n) / (1 + df(t))) + 1`
//! and L2-normalizes every non-zero vector.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use hashbrown::{HashMap, HashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MIN_DF: usize = 2;
pub const DEFAULT_MAX_FEATURES: usize = 50_000;

/// Splits on Unicode whitespace.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Sparse non-negative vector with strictly increasing indices.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    /// Sorts entries, merges duplicate indices and drops zeros.
    pub fn from_entries(dim: usize, mut entries: Vec<(u32, f64)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            if i as usize >= dim {
                return Err(Error::DimensionMismatch { expected: dim, found: i as usize + 1 });
            }
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|e| e.1 != 0.0);
        Ok(SparseVector { dim, entries: out })
    }

    pub fn zeros(dim: usize) -> Self {
        SparseVector { dim, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.entries.binary_search_by_key(&(index as u32), |e| e.0) {
            Ok(p) => self.entries[p].1,
            Err(_) => 0.0,
        }
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|e| e.1 * e.1).sum())
    }

    pub fn dot_dense(&self, w: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| w[i as usize] * v).sum()
    }

    /// Dot product of two sparse vectors by merge.
    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j, mut s) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    s += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        s
    }

    pub fn scaled(&self, c: f64) -> SparseVector {
        let entries = self.entries.iter().map(|&(i, v)| (i, v * c)).filter(|e| e.1 != 0.0).collect();
        SparseVector { dim: self.dim, entries }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = alloc::vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            d[i as usize] = v;
        }
        d
    }

    pub fn from_dense(values: &[f64]) -> Self {
        let entries = values.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (i as u32, *v)).collect();
        SparseVector { dim: values.len(), entries }
    }
}

/// Term-to-index map with document frequencies. Index order is
/// lexicographic term order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    terms: Vec<String>,
    document_frequency: Vec<u64>,
    n_documents: u64,
    index: HashMap<String, u32>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
            && self.document_frequency == other.document_frequency
            && self.n_documents == other.n_documents
    }
}

impl Eq for Vocabulary {}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    terms: Vec<String>,
    document_frequency: Vec<u64>,
    n_documents: u64,
}

impl From<VocabularyRepr> for Vocabulary {
    fn from(r: VocabularyRepr) -> Self {
        Vocabulary::from_sorted(r.terms, r.document_frequency, r.n_documents)
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        VocabularyRepr { terms: v.terms, document_frequency: v.document_frequency, n_documents: v.n_documents }
    }
}

impl Vocabulary {
    fn from_sorted(terms: Vec<String>, document_frequency: Vec<u64>, n_documents: u64) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        Vocabulary { terms, document_frequency, n_documents, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_documents(&self) -> u64 {
        self.n_documents
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).map(|i| *i as usize)
    }

    pub fn document_frequency(&self, index: usize) -> u64 {
        self.document_frequency[index]
    }

    pub fn idf(&self, index: usize) -> f64 {
        let n = self.n_documents as f64;
        libm::log((1.0 + n) / (1.0 + self.document_frequency[index] as f64)) + 1.0
    }

    /// Text form: `#n_documents<TAB>N` then one `term<TAB>index<TAB>df` line per term.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "#n_documents\t{}", self.n_documents);
        for (i, t) in self.terms.iter().enumerate() {
            let _ = writeln!(s, "{t}\t{i}\t{}", self.document_frequency[i]);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |line: usize, reason: String| Error::MalformedVocabulary { line, reason };
        let mut lines = text.lines().enumerate();
        let n_documents = match lines.next() {
            Some((_, l)) => {
                let l = l.strip_suffix('\r').unwrap_or(l);
                let v = l
                    .strip_prefix("#n_documents\t")
                    .ok_or_else(|| bad(1, "expected header `#n_documents<TAB>N`".into()))?;
                v.trim().parse::<u64>().map_err(|_| bad(1, format!("bad document count {v:?}")))?
            }
            None => return Err(bad(1, "empty file".into())),
        };
        let mut terms = Vec::new();
        let mut dfs = Vec::new();
        for (i, l) in lines {
            let line = i + 1;
            let l = l.strip_suffix('\r').unwrap_or(l);
            if l.is_empty() {
                continue;
            }
            let mut parts = l.split('\t');
            let (Some(term), Some(idx), Some(df), None) = (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad(line, "expected term<TAB>index<TAB>df".into()));
            };
            let idx: usize = idx.parse().map_err(|_| bad(line, format!("bad index {idx:?}")))?;
            let df: u64 = df.parse().map_err(|_| bad(line, format!("bad df {df:?}")))?;
            if idx != terms.len() {
                return Err(bad(line, format!("index {idx} out of sequence (expected {})", terms.len())));
            }
            if term.is_empty() || term.chars().any(char::is_whitespace) {
                return Err(bad(line, "term must be a non-empty token".into()));
            }
            if terms.last().is_some_and(|p: &String| p.as_str() >= term) {
                return Err(bad(line, "terms must be strictly increasing".into()));
            }
            if df == 0 || df > n_documents {
                return Err(bad(line, format!("df {df} outside 1..={n_documents}")));
            }
            terms.push(term.to_string());
            dfs.push(df);
        }
        if terms.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        Ok(Vocabulary::from_sorted(terms, dfs, n_documents))
    }
}

/// Keeps terms with document frequency at least `min_df`; with
/// `max_features`, the most frequent terms survive (ties to the
/// lexicographically smaller term).
pub fn fit_vocabulary<'a, I>(documents: I, min_df: usize, max_features: Option<usize>) -> Result<Vocabulary>
where
    I: IntoIterator<Item = &'a str>,
{
    if min_df == 0 {
        return Err(Error::InvalidHyperparameter("min_df must be at least 1".into()));
    }
    let mut df: BTreeMap<&'a str, u64> = BTreeMap::new();
    let mut n = 0u64;
    let mut seen = HashSet::new();
    for doc in documents {
        n += 1;
        seen.clear();
        for tok in doc.split_whitespace() {
            if seen.insert(tok) {
                *df.entry(tok).or_insert(0) += 1;
            }
        }
    }
    let mut kept: Vec<(&str, u64)> = df.into_iter().filter(|e| e.1 >= min_df as u64).collect();
    if let Some(cap) = max_features {
        if kept.len() > cap {
            kept.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
            kept.truncate(cap);
            kept.sort_by(|a, b| a.0.cmp(b.0));
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let (terms, dfs) = kept.into_iter().map(|(t, d)| (t.to_string(), d)).unzip();
    Ok(Vocabulary::from_sorted(terms, dfs, n))
}

/// Raw term counts; out-of-vocabulary tokens are dropped.
pub fn count_vectorize<S: AsRef<str>>(tokens: &[S], vocab: &Vocabulary) -> SparseVector {
    let mut entries: Vec<(u32, f64)> =
        tokens.iter().filter_map(|t| vocab.index_of(t.as_ref())).map(|i| (i as u32, 1.0)).collect();
    entries.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
    for (i, v) in entries {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += v,
            _ => out.push((i, v)),
        }
    }
    SparseVector { dim: vocab.len(), entries: out }
}

/// Scales counts by idf and L2-normalizes. Zero vectors stay zero.
pub fn tfidf_transform(counts: &SparseVector, vocab: &Vocabulary) -> SparseVector {
    let mut entries: Vec<(u32, f64)> = counts.entries.iter().map(|&(i, c)| (i, c * vocab.idf(i as usize))).collect();
    let norm = libm::sqrt(entries.iter().map(|e| e.1 * e.1).sum());
    if norm > 0.0 {
        for e in &mut entries {
            e.1 /= norm;
        }
    }
    SparseVector { dim: counts.dim, entries }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vectorizer {
    Count,
    Tfidf,
}

impl Vectorizer {
    pub fn as_str(self) -> &'static str {
        match self {
            Vectorizer::Count => "count",
            Vectorizer::Tfidf => "tfidf",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "count" => Some(Vectorizer::Count),
            "tfidf" | "tf-idf" => Some(Vectorizer::Tfidf),
            _ => None,
        }
    }

    /// Tokenizes and vectorizes one text.
    pub fn transform(self, text: &str, vocab: &Vocabulary) -> SparseVector {
        let counts = count_vectorize(&tokenize(text), vocab);
        match self {
            Vectorizer::Count => counts,
            Vectorizer::Tfidf => tfidf_transform(&counts, vocab),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn tokenize_cases() {
        assert_eq!(tokenize("she look like a tranny"), ["she", "look", "like", "a", "tranny"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("a  b\tc"), ["a", "b", "c"]);
    }

    #[test]
    fn fit_min_df_and_cap() {
        let docs = ["cat sat", "cat ran"];
        let v = fit_vocabulary(docs, 1, None).unwrap();
        assert_eq!(v.terms(), ["cat", "ran", "sat"]);
        let v2 = fit_vocabulary(docs, 2, None).unwrap();
        assert_eq!(v2.terms(), ["cat"]);
        assert_eq!(fit_vocabulary(docs, 1, Some(3)).unwrap(), v);
        assert_eq!(fit_vocabulary(docs, 1, Some(2)).unwrap().terms(), ["cat", "ran"]);
        assert_eq!(fit_vocabulary(docs, 3, None), Err(Error::EmptyVocabulary));
    }

    #[test]
    fn counts() {
        let v = fit_vocabulary(["cat sat", "cat ran"], 1, None).unwrap();
        assert_eq!(count_vectorize(&["cat", "cat", "sat", "dog"], &v).entries(), &[(0, 2.0), (2, 1.0)]);
        assert_eq!(count_vectorize::<&str>(&[], &v).nnz(), 0);
    }

    #[test]
    fn single_document_idf_is_one() {
        let v = fit_vocabulary(["a b b"], 1, None).unwrap();
        let t = tfidf_transform(&count_vectorize(&["a", "b", "b"], &v), &v);
        let n = libm::sqrt(5.0);
        assert!((t.get(0) - 1.0 / n).abs() < 1e-12);
        assert!((t.get(1) - 2.0 / n).abs() < 1e-12);
    }

    #[test]
    fn vocabulary_text_roundtrip() {
        let v = fit_vocabulary(["cat sat", "cat ran", "dog"], 1, None).unwrap();
        let back = Vocabulary::from_text(&v.to_text()).unwrap();
        assert_eq!(back, v);
        assert!(Vocabulary::from_text("#n_documents\t2\nb\t0\t1\na\t1\t1\n").is_err());
        assert!(Vocabulary::from_text("x\t0\t1\n").is_err());
    }

    #[test]
    fn sparse_ops() {
        let a = SparseVector::from_entries(5, vec![(3, 1.0), (0, 2.0), (3, 1.0), (1, 0.0)]).unwrap();
        assert_eq!(a.entries(), &[(0, 2.0), (3, 2.0)]);
        let b = SparseVector::from_dense(&[1.0, 0.0, 0.0, 0.5, 0.0]);
        assert_eq!(a.dot(&b), 3.0);
        assert_eq!(a.dot_dense(&b.to_dense()), 3.0);
        assert!(SparseVector::from_entries(2, vec![(2, 1.0)]).is_err());
    }
}
