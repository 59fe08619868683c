mod common;

use proptest::prelude::*;
use tweetseq_core::pipeline::{run_text, validate_sequence, PipelineOptions, Rule, PRESET_ALIASES};
use tweetseq_core::textprep::apply_stage;
use tweetseq_core::{LexiconSet, Sequence, StageId};

fn lex() -> &'static LexiconSet {
    common::lexicon()
}

const PIECES: [&str; 24] = [
    "RT",
    "@user:",
    "http://t.co/abc",
    "#HappyHumpDay",
    "😊",
    ":)",
    "don't",
    "u",
    "2nite",
    "Fuccckkk",
    "soooo",
    "!!!",
    "...",
    "82211",
    "&amp;",
    "the",
    "and",
    "Running",
    "cats",
    "we're",
    "gr8",
    "lol",
    "I'm",
    "ppl",
];

fn tweet() -> impl Strategy<Value = String> {
    prop_oneof![
        prop::collection::vec(prop::sample::select(PIECES.to_vec()), 0..12).prop_map(|w| w.join(" ")),
        "\\PC{0,40}",
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn idempotent_stages_reach_a_fixpoint(text in tweet()) {
        for s in StageId::ALL.into_iter().filter(|s| s.is_idempotent()) {
            let once = apply_stage(s, &text, lex());
            prop_assert_eq!(apply_stage(s, &once, lex()), once.clone(), "stage {}", s);
        }
    }

    #[test]
    fn numerals_leave_no_digits(text in tweet()) {
        let out = apply_stage(StageId::StripNumerals, &text, lex());
        prop_assert!(!out.chars().any(|c| c.is_ascii_digit()), "{:?}", out);
    }

    #[test]
    fn case_fold_leaves_no_uppercase(text in tweet()) {
        let out = apply_stage(StageId::CaseFold, &text, lex());
        prop_assert_eq!(out.to_lowercase(), out);
    }

    #[test]
    fn stopword_removal_leaves_no_stopwords(text in tweet()) {
        let out = apply_stage(StageId::RemoveStopwords, &text, lex());
        prop_assert!(!out.split_whitespace().any(|w| lex().is_stopword(&w.to_lowercase())), "{:?}", out);
    }

    #[test]
    fn every_preset_is_total(text in tweet()) {
        for alias in PRESET_ALIASES {
            let seq = Sequence::resolve(alias).unwrap();
            let out = run_text(&seq, &text, lex(), PipelineOptions::default());
            prop_assert!(!out.starts_with(' ') && !out.ends_with(' '), "{}: {:?}", alias, out);
        }
    }
}

#[test]
fn empty_text_stays_empty() {
    for s in StageId::ALL {
        assert_eq!(apply_stage(s, "", lex()), "", "stage {s}");
    }
}

#[test]
fn emoji_before_punctuation_keeps_emoticons() {
    let text = "great game :)";
    let opts = PipelineOptions::default();
    let good = run_text(&Sequence::resolve("PROPOSED").unwrap(), text, lex(), opts);
    let late = Sequence::resolve("I,VII,III,IV,V,VI,VIII,II,IX,X,XI,XII").unwrap();
    let bad = run_text(&late, text, lex(), opts);
    assert!(good.contains("happ"), "{good:?}");
    assert!(!bad.contains("happ"), "{bad:?}");
}

#[test]
fn constraint_checks() {
    let t8 = Sequence::resolve("T8").unwrap();
    assert!(validate_sequence(&t8).violates(Rule::ContractionsBeforeSegmentation));
    assert!(validate_sequence(&Sequence::resolve("PROPOSED").unwrap()).is_clean());
    assert!(Sequence::resolve("I,I").is_err());
    assert!(Sequence::resolve("XIII").is_err());
}

#[test]
fn preset_round_trips_through_roman_list() {
    for alias in PRESET_ALIASES {
        let seq = Sequence::resolve(alias).unwrap();
        let again = Sequence::parse_roman_list(&seq.to_roman_list()).unwrap();
        assert_eq!(seq.stages(), again.stages(), "{alias}");
    }
}
