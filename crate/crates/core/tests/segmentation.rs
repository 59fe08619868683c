mod common;

use proptest::prelude::*;
use tweetseq_core::textprep::{segment_words, segmentation_score};

/// Best score over all 2^(n-1) ways to cut `token`.
fn brute_force(token: &str, lex: &tweetseq_core::LexiconSet) -> f64 {
    let chars: Vec<char> = token.chars().collect();
    let n = chars.len();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << (n - 1)) {
        let mut pieces = Vec::new();
        let mut cur = String::new();
        for (i, c) in chars.iter().enumerate() {
            cur.push(*c);
            if i + 1 < n && mask & (1 << i) != 0 {
                pieces.push(std::mem::take(&mut cur));
            }
        }
        pieces.push(cur);
        let refs: Vec<&str> = pieces.iter().map(String::as_str).collect();
        best = best.max(segmentation_score(&refs, lex.unigrams()));
    }
    best
}

#[test]
fn known_hashtags() {
    let lex = common::lexicon();
    assert_eq!(segment_words("happyhumpday", lex.unigrams()), ["happy", "hump", "day"]);
    assert_eq!(segment_words("usedbytrendypeople", lex.unigrams()), ["used", "by", "trendy", "people"]);
    assert_eq!(segment_words("GoodVibes", lex.unigrams()), ["Good", "Vibes"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn matches_exhaustive_search(token in "[a-z]{1,12}") {
        let lex = common::lexicon();
        let pieces = segment_words(&token, lex.unigrams());
        prop_assert_eq!(pieces.concat(), token.clone());
        let refs: Vec<&str> = pieces.iter().map(String::as_str).collect();
        let got = segmentation_score(&refs, lex.unigrams());
        let want = brute_force(&token, lex);
        prop_assert!((got - want).abs() < 1e-9, "{:?}: {} vs {}", pieces, got, want);
    }
}
