//! The twelve tweet normalization stages and the lexicons they read.
//!
//! Every stage is a total function `&str -> String`. Stages never fail; they
//! may return an empty string. Output tokens are always separated by a single
//! ASCII space with no leading or trailing whitespace.

mod porter;
mod segment;
mod spell;
mod stages;
mod tokens;

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use hashbrown::{HashMap, HashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use porter::porter_stem;
pub use segment::{segment_words, segmentation_score};
pub use spell::spell_correct;
pub use stages::{apply_stage, stem_lemmatize};
pub use tokens::normalize_whitespace;

/// Canonical stage identifiers, numbered I..XII.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageId {
    /// I: delete URLs, @mentions, HTML entities, control characters and `#`.
    StripUrlsNoiseHashmarks,
    /// II: replace emoji and emoticons with words.
    ReplaceEmojiEmoticon,
    /// III: split concatenated words (hashtag bodies).
    SegmentHashtagWords,
    /// IV: expand slang and abbreviations.
    ExpandSlangAbbrev,
    /// V: collapse elongated character runs.
    NormalizeElongation,
    /// VI: correct out-of-vocabulary spellings.
    SpellCorrect,
    /// VII: expand contractions.
    ExpandContractions,
    /// VIII: delete punctuation.
    StripPunctuation,
    /// IX: delete numerals.
    StripNumerals,
    /// X: lowercase.
    CaseFold,
    /// XI: delete stop-words.
    RemoveStopwords,
    /// XII: lemmatize / Porter-stem.
    StemLemmatize,
}

const ROMAN: [&str; 12] = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII"];

const NAMES: [&str; 12] = [
    "strip_urls_noise_hashmarks",
    "replace_emoji_emoticon",
    "segment_hashtag_words",
    "expand_slang_abbrev",
    "normalize_elongation",
    "spell_correct",
    "expand_contractions",
    "strip_punctuation",
    "strip_numerals",
    "case_fold",
    "remove_stopwords",
    "stem_lemmatize",
];

impl StageId {
    pub const ALL: [StageId; 12] = [
        StageId::StripUrlsNoiseHashmarks,
        StageId::ReplaceEmojiEmoticon,
        StageId::SegmentHashtagWords,
        StageId::ExpandSlangAbbrev,
        StageId::NormalizeElongation,
        StageId::SpellCorrect,
        StageId::ExpandContractions,
        StageId::StripPunctuation,
        StageId::StripNumerals,
        StageId::CaseFold,
        StageId::RemoveStopwords,
        StageId::StemLemmatize,
    ];

    /// Zero-based position in `ALL` (numeral value minus one).
    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn roman(self) -> &'static str {
        ROMAN[self.ordinal()]
    }

    pub fn name(self) -> &'static str {
        NAMES[self.ordinal()]
    }

    pub fn from_roman(s: &str) -> Option<StageId> {
        ROMAN.iter().position(|r| r.eq_ignore_ascii_case(s)).map(|i| StageId::ALL[i])
    }

    pub fn from_name(s: &str) -> Option<StageId> {
        NAMES.iter().position(|n| *n == s).map(|i| StageId::ALL[i])
    }

    /// Stages satisfying `apply(apply(t)) == apply(t)`.
    pub fn is_idempotent(self) -> bool {
        matches!(
            self,
            StageId::StripUrlsNoiseHashmarks
                | StageId::NormalizeElongation
                | StageId::StripPunctuation
                | StageId::StripNumerals
                | StageId::CaseFold
                | StageId::RemoveStopwords
        )
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

impl FromStr for StageId {
    type Err = Error;

    fn from_str(s: &str) -> Result<StageId> {
        let t = s.trim();
        StageId::from_roman(t)
            .or_else(|| StageId::from_name(t))
            .ok_or_else(|| Error::InvalidSequence(alloc::format!("unknown stage {t:?}")))
    }
}

impl Serialize for StageId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.roman())
    }
}

impl<'de> Deserialize<'de> for StageId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Word frequencies used by segmentation, elongation repair and spelling.
#[derive(Debug, Clone, Default)]
pub struct Unigrams {
    counts: HashMap<String, u64>,
    total: f64,
}

impl Unigrams {
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut counts = HashMap::new();
        let mut total = 0.0;
        for (i, (w, c)) in pairs.into_iter().enumerate() {
            let w: String = w.into();
            if w.is_empty() || c == 0 {
                return Err(Error::MalformedLexicon {
                    line: i + 1,
                    reason: "unigram entries need a word and a positive count".into(),
                });
            }
            total += c as f64;
            if counts.insert(w.to_lowercase(), c).is_some() {
                return Err(Error::MalformedLexicon { line: i + 1, reason: alloc::format!("duplicate word {w:?}") });
            }
        }
        Ok(Unigrams { counts, total })
    }

    /// Count of an already-lowercased word.
    pub fn count(&self, word: &str) -> Option<u64> {
        self.counts.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.counts.contains_key(word)
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Every `(word, count)` pair, sorted by word.
    pub fn sorted_entries(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<(&str, u64)> = self.counts.iter().map(|(w, c)| (w.as_str(), *c)).collect();
        v.sort_unstable();
        v
    }
}

/// Raw text of the six lexicon files.
#[derive(Debug, Clone, Copy, Default)]
pub struct LexiconSources<'a> {
    pub emoji: &'a str,
    pub slang: &'a str,
    pub contractions: &'a str,
    pub stopwords: &'a str,
    pub unigrams: &'a str,
    pub lemmas: &'a str,
}

/// Immutable bundle of the lookup tables the stages read.
#[derive(Debug, Clone, Default)]
pub struct LexiconSet {
    emoji: HashMap<String, String>,
    emoji_max_chars: usize,
    slang: HashMap<String, String>,
    contractions: HashMap<String, String>,
    contraction_bigrams: bool,
    stopwords: HashSet<String>,
    unigrams: Unigrams,
    lemmas: HashMap<String, String>,
}

/// Parses `key<TAB>value` lines. Blank lines are skipped; keys must be unique.
pub fn parse_tab_map(text: &str) -> Result<Vec<(String, String)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('\t')
            .ok_or_else(|| Error::MalformedLexicon { line: i + 1, reason: "expected key<TAB>value".into() })?;
        if k.is_empty() || v.trim().is_empty() {
            return Err(Error::MalformedLexicon { line: i + 1, reason: "empty key or value".into() });
        }
        if !seen.insert(k.to_owned()) {
            return Err(Error::MalformedLexicon { line: i + 1, reason: alloc::format!("duplicate key {k:?}") });
        }
        out.push((k.to_owned(), v.trim().to_owned()));
    }
    Ok(out)
}

fn parse_unigrams(text: &str) -> Result<Unigrams> {
    let mut pairs = Vec::new();
    for (i, (w, c)) in parse_tab_map(text)?.into_iter().enumerate() {
        let c: u64 = c.parse().map_err(|_| Error::MalformedLexicon {
            line: i + 1,
            reason: alloc::format!("count {c:?} is not a positive integer"),
        })?;
        pairs.push((w, c));
    }
    Unigrams::from_pairs(pairs)
}

fn lower_map(pairs: Vec<(String, String)>) -> HashMap<String, String> {
    pairs.into_iter().map(|(k, v)| (tokens::normalize_apostrophes(&k.to_lowercase()), v)).collect()
}

impl LexiconSet {
    pub fn from_sources(src: LexiconSources<'_>) -> Result<Self> {
        let emoji: HashMap<String, String> = parse_tab_map(src.emoji)?
            .into_iter()
            .map(|(k, v)| if k.is_ascii() { (k.to_lowercase(), v) } else { (k, v) })
            .collect();
        let emoji_max_chars = emoji.keys().map(|k| k.chars().count()).max().unwrap_or(0);
        let contractions = lower_map(parse_tab_map(src.contractions)?);
        let contraction_bigrams = contractions.keys().any(|k| k.contains(' '));
        let mut stopwords = HashSet::new();
        for line in src.stopwords.lines() {
            let w = line.trim();
            if !w.is_empty() {
                stopwords.insert(tokens::normalize_apostrophes(&w.to_lowercase()));
            }
        }
        Ok(LexiconSet {
            emoji,
            emoji_max_chars,
            slang: lower_map(parse_tab_map(src.slang)?),
            contractions,
            contraction_bigrams,
            stopwords,
            unigrams: parse_unigrams(src.unigrams)?,
            lemmas: lower_map(parse_tab_map(src.lemmas)?),
        })
    }

    pub fn unigrams(&self) -> &Unigrams {
        &self.unigrams
    }

    pub fn emoji(&self, key: &str) -> Option<&str> {
        self.emoji.get(key).map(String::as_str)
    }

    pub fn slang(&self, key: &str) -> Option<&str> {
        self.slang.get(key).map(String::as_str)
    }

    pub fn contraction(&self, key: &str) -> Option<&str> {
        self.contractions.get(key).map(String::as_str)
    }

    pub fn lemma(&self, key: &str) -> Option<&str> {
        self.lemmas.get(key).map(String::as_str)
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    pub fn stopwords(&self) -> impl Iterator<Item = &str> {
        self.stopwords.iter().map(String::as_str)
    }

    pub(crate) fn emoji_max_chars(&self) -> usize {
        self.emoji_max_chars
    }

    pub(crate) fn has_contraction_bigrams(&self) -> bool {
        self.contraction_bigrams
    }

    /// Sizes of (emoji, slang, contractions, stopwords, unigrams, lemmas).
    pub fn sizes(&self) -> [usize; 6] {
        [
            self.emoji.len(),
            self.slang.len(),
            self.contractions.len(),
            self.stopwords.len(),
            self.unigrams.len(),
            self.lemmas.len(),
        ]
    }
}

impl fmt::Display for LexiconSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [e, s, c, sw, u, l] = self.sizes();
        write!(f, "emoji={e} slang={s} contractions={c} stopwords={sw} unigrams={u} lemmas={l}")
    }
}

/// Small lexicon used by unit tests across the crate.
#[cfg(test)]
pub(crate) fn test_lexicon() -> LexiconSet {
    let unigrams = "the\t1000\nused\t300\nby\t400\ntrendy\t20\npeople\t250\nhappy\t120\nhump\t8\nday\t200\n\
hello\t90\nfirst\t310\nfuck\t40\nfucking\t30\nsweet\t50\nspelling\t25\nspewing\t5\ntonight\t60\nnight\t80\n\
we\t500\nwill\t450\ndo\t520\nnot\t530\npay\t70\nhoes\t9\ntime\t330\nlook\t150\nlike\t300\na\t2000\ni\t1900\n\
she\t260\ntranny\t3\nsunday\t44\nis\t900\nlooking\t60\npretty\t55\ngood\t210\nso\t600\nfar\t90\nlol\t35\n\
for\t800\nlounge\t10\nexperiencing\t12\nhe\t700\nhell\t40\nlo\t4\nrun\t100\nround\t30\nhere\t200";
    LexiconSet::from_sources(LexiconSources {
        emoji: "😊\thappy\n☹️\tsad\n:)\thappy\n😂\tlaugh",
        slang: "2nite\ttonight\nnite\tnight\ngud\tgood\nlol\tlaughing out loud\nu\tyou\nj/k\tjust kidding",
        contractions: "don't\tdo not\nw'll\twe will\nwe'll\twe will\ni'm\ti am",
        stopwords: "i\nme\nwe\nwill\nthe\na\nis\nso\nand\ndo\nnot\nhe\nshe\ndon't",
        unigrams,
        lemmas: "running\trun\nran\trun\nuse\tuse\nused\tuse",
    })
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_ids_roundtrip() {
        for (i, s) in StageId::ALL.iter().enumerate() {
            assert_eq!(s.ordinal(), i);
            assert_eq!(StageId::from_roman(s.roman()), Some(*s));
            assert_eq!(StageId::from_name(s.name()), Some(*s));
            assert_eq!(s.roman().parse::<StageId>().unwrap(), *s);
        }
        assert!("XIII".parse::<StageId>().is_err());
    }

    #[test]
    fn roman_anchors() {
        assert_eq!(StageId::from_roman("I"), Some(StageId::StripUrlsNoiseHashmarks));
        assert_eq!(StageId::from_roman("IX"), Some(StageId::StripNumerals));
        assert_eq!(StageId::from_roman("XI"), Some(StageId::RemoveStopwords));
        assert_eq!(StageId::from_roman("XII"), Some(StageId::StemLemmatize));
    }

    #[test]
    fn duplicate_keys_rejected() {
        let err = parse_tab_map("a\tb\na\tc").unwrap_err();
        assert_eq!(err, Error::MalformedLexicon { line: 2, reason: "duplicate key \"a\"".into() });
    }

    #[test]
    fn missing_tab_rejected() {
        assert!(matches!(parse_tab_map("abc"), Err(Error::MalformedLexicon { line: 1, .. })));
    }

    #[test]
    fn zero_count_rejected() {
        assert!(parse_unigrams("a\t0").is_err());
        assert!(parse_unigrams("a\tx").is_err());
    }

    #[test]
    fn crlf_tolerated() {
        let m = parse_tab_map("a\tb\r\nc\td\r\n").unwrap();
        assert_eq!(m[1], ("c".into(), "d".into()));
    }

    #[test]
    fn test_lexicon_loads() {
        let lex = test_lexicon();
        assert!(lex.is_stopword("don't"));
        assert_eq!(lex.contraction("w'll"), Some("we will"));
        assert_eq!(lex.unigrams().count("hello"), Some(90));
    }
}
