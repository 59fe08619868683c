//! Preprocessing sequences: permutations of the twelve stages, the named
//! presets, ordering rules and corpus execution.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use crate::corpus::LabeledCorpus;
use crate::error::{Error, Result};
use crate::textprep::{apply_stage, LexiconSet, StageId};

use StageId::*;

/// Every preset alias, in report order.
pub const PRESET_ALIASES: [&str; 9] = ["T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "PROPOSED"];

const fn romans(n: [u8; 12]) -> [StageId; 12] {
    let mut out = [StripUrlsNoiseHashmarks; 12];
    let mut i = 0;
    while i < 12 {
        out[i] = StageId::ALL[(n[i] - 1) as usize];
        i += 1;
    }
    out
}

const PRESETS: [[StageId; 12]; 9] = [
    romans([1, 4, 6, 9, 3, 12, 8, 5, 10, 11, 7, 2]),
    romans([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]),
    romans([1, 5, 3, 4, 7, 2, 6, 8, 9, 10, 11, 12]),
    romans([1, 4, 7, 5, 2, 3, 6, 8, 9, 10, 11, 12]),
    romans([1, 5, 7, 2, 3, 4, 6, 8, 9, 10, 11, 12]),
    romans([1, 5, 4, 3, 7, 2, 6, 8, 10, 9, 11, 12]),
    romans([1, 4, 3, 2, 6, 7, 8, 10, 5, 9, 11, 12]),
    romans([1, 3, 4, 2, 6, 7, 8, 10, 5, 9, 11, 12]),
    romans([1, 2, 7, 3, 4, 5, 6, 8, 9, 10, 11, 12]),
];

/// An ordered permutation of all twelve stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequence {
    pub alias: String,
    stages: Vec<StageId>,
}

impl Sequence {
    /// Checks that `stages` uses each stage exactly once.
    pub fn new(alias: impl Into<String>, stages: Vec<StageId>) -> Result<Self> {
        if stages.len() != 12 {
            return Err(Error::InvalidSequence(format!("expected 12 stages, got {}", stages.len())));
        }
        let mut seen = [false; 12];
        for s in &stages {
            if core::mem::replace(&mut seen[s.ordinal()], true) {
                return Err(Error::InvalidSequence(format!("stage {s} appears more than once")));
            }
        }
        Ok(Sequence { alias: alias.into(), stages })
    }

    pub fn stages(&self) -> &[StageId] {
        &self.stages
    }

    pub fn position(&self, stage: StageId) -> usize {
        // A well-formed sequence contains every stage.
        self.stages.iter().position(|s| *s == stage).unwrap_or(usize::MAX)
    }

    /// `I,II,VII,...` form.
    pub fn to_roman_list(&self) -> String {
        let parts: Vec<&str> = self.stages.iter().map(|s| s.roman()).collect();
        parts.join(",")
    }

    /// Parses a comma-separated list of Roman numerals (stage names are also
    /// accepted). The alias is the normalized list itself.
    pub fn parse_roman_list(text: &str) -> Result<Self> {
        let stages = text.split(',').map(|p| p.trim().parse::<StageId>()).collect::<Result<Vec<_>>>()?;
        let seq = Sequence::new(String::new(), stages)?;
        Ok(Sequence { alias: seq.to_roman_list(), ..seq })
    }

    /// A preset alias (case-insensitive) or an explicit Roman list.
    pub fn resolve(text: &str) -> Result<Self> {
        if text.contains(',') {
            Sequence::parse_roman_list(text)
        } else {
            preset(text)
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.alias, self.to_roman_list())
    }
}

/// Looks up one of `T1`..`T8` or `PROPOSED`.
pub fn preset(alias: &str) -> Result<Sequence> {
    let upper = alias.trim().to_ascii_uppercase();
    let i = PRESET_ALIASES
        .iter()
        .position(|a| *a == upper)
        .ok_or_else(|| Error::UnknownAlias { alias: alias.to_owned(), valid: PRESET_ALIASES.to_vec() })?;
    Ok(Sequence { alias: PRESET_ALIASES[i].into(), stages: PRESETS[i].to_vec() })
}

/// Ordering rules checked by [`validate_sequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// R1: I runs first.
    UrlsFirst,
    /// R2: VII before III.
    ContractionsBeforeSegmentation,
    /// R3: IV before IX.
    SlangBeforeNumerals,
    /// R4: I before III.
    HashmarksBeforeSegmentation,
    /// R5: XI then XII in the last two slots.
    StopwordsThenStemmingLast,
    /// R6: IX before XI.
    NumeralsBeforeStopwords,
}

impl Rule {
    pub const ALL: [Rule; 6] = [
        Rule::UrlsFirst,
        Rule::ContractionsBeforeSegmentation,
        Rule::SlangBeforeNumerals,
        Rule::HashmarksBeforeSegmentation,
        Rule::StopwordsThenStemmingLast,
        Rule::NumeralsBeforeStopwords,
    ];

    pub fn id(self) -> &'static str {
        ["R1", "R2", "R3", "R4", "R5", "R6"][self as usize]
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::UrlsFirst => "urls-first",
            Rule::ContractionsBeforeSegmentation => "contractions-before-segmentation",
            Rule::SlangBeforeNumerals => "slang-before-numerals",
            Rule::HashmarksBeforeSegmentation => "hashmarks-before-segmentation",
            Rule::StopwordsThenStemmingLast => "stopwords-then-stemming-last",
            Rule::NumeralsBeforeStopwords => "numerals-before-stopwords",
        }
    }
}

/// One broken rule: the pair of stages involved and their 0-based positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub stages: (StageId, StageId),
    pub positions: (usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} at position {} / {} at position {}",
            self.rule.id(),
            self.rule.name(),
            self.stages.0,
            self.positions.0 + 1,
            self.stages.1,
            self.positions.1 + 1
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub violations: Vec<Violation>,
}

impl ConstraintReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    /// Turns violations into an error (strict mode).
    pub fn into_result(self) -> Result<()> {
        if self.is_clean() {
            return Ok(());
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| format!("{v}")).collect();
        Err(Error::ConstraintViolation(msgs.join("; ")))
    }
}

/// Reports every ordering rule `seq` breaks. Never fails.
pub fn validate_sequence(seq: &Sequence) -> ConstraintReport {
    let pos = |s| seq.position(s);
    let mut violations = Vec::new();
    let mut before = |rule, a: StageId, b: StageId| {
        if pos(a) > pos(b) {
            violations.push(Violation { rule, stages: (a, b), positions: (pos(a), pos(b)) });
        }
    };
    before(Rule::ContractionsBeforeSegmentation, ExpandContractions, SegmentHashtagWords);
    before(Rule::SlangBeforeNumerals, ExpandSlangAbbrev, StripNumerals);
    before(Rule::HashmarksBeforeSegmentation, StripUrlsNoiseHashmarks, SegmentHashtagWords);
    before(Rule::NumeralsBeforeStopwords, StripNumerals, RemoveStopwords);
    let first = seq.stages[0];
    if first != StripUrlsNoiseHashmarks {
        violations.insert(
            0,
            Violation {
                rule: Rule::UrlsFirst,
                stages: (StripUrlsNoiseHashmarks, first),
                positions: (pos(StripUrlsNoiseHashmarks), 0),
            },
        );
    }
    let (sw, st) = (pos(RemoveStopwords), pos(StemLemmatize));
    if sw != 10 || st != 11 {
        violations.push(Violation {
            rule: Rule::StopwordsThenStemmingLast,
            stages: (RemoveStopwords, StemLemmatize),
            positions: (sw, st),
        });
    }
    violations.sort_by_key(|v| v.rule as usize);
    ConstraintReport { violations }
}

/// Stage switches for [`run_text`] / [`run_pipeline`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineOptions {
    /// When false, stage VI passes text through unchanged.
    pub spell_correct: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { spell_correct: true }
    }
}

/// Runs the sequence's stages left to right over one text.
pub fn run_text(seq: &Sequence, text: &str, lex: &LexiconSet, opts: PipelineOptions) -> String {
    let mut memo = HashMap::new();
    run_text_memo(seq, text, lex, opts, &mut memo)
}

fn run_text_memo(
    seq: &Sequence,
    text: &str,
    lex: &LexiconSet,
    opts: PipelineOptions,
    memo: &mut HashMap<String, String>,
) -> String {
    let mut cur = String::from(text);
    for &stage in seq.stages() {
        cur = match stage {
            SpellCorrect if !opts.spell_correct => cur,
            SpellCorrect => spell_with_memo(&cur, lex, memo),
            _ => apply_stage(stage, &cur, lex),
        };
    }
    cur
}

/// Stage VI with a per-word cache; spelling dominates pipeline cost and
/// tweets repeat words heavily.
fn spell_with_memo(text: &str, lex: &LexiconSet, memo: &mut HashMap<String, String>) -> String {
    let mut out = String::with_capacity(text.len());
    for tok in text.split_whitespace() {
        let fixed = match memo.get(tok) {
            Some(v) => v.clone(),
            None => {
                let v = apply_stage(SpellCorrect, tok, lex);
                memo.insert(tok.into(), v.clone());
                v
            }
        };
        if fixed.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&fixed);
    }
    out
}

/// Applies the sequence to every document. Ids, labels and order are kept;
/// documents whose text becomes empty stay in the corpus.
pub fn run_pipeline(seq: &Sequence, corpus: &LabeledCorpus, lex: &LexiconSet, opts: PipelineOptions) -> LabeledCorpus {
    let mut memo = HashMap::new();
    corpus.map_texts(|t| run_text_memo(seq, t, lex, opts, &mut memo))
}
