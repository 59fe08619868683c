//! Maximum-likelihood word segmentation over unigram frequencies.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::Unigrams;

/// Longest input considered; longer tokens come back unsplit.
const MAX_INPUT_CHARS: usize = 64;

/// Natural-log probability of one segment. Unknown segments get a smoothed
/// probability that shrinks tenfold per character, so long unknown pieces
/// lose to known words.
fn piece_log_prob(piece: &str, unigrams: &Unigrams) -> f64 {
    let total = unigrams.total().max(1.0);
    match unigrams.count(piece) {
        Some(c) => libm::log(c as f64 / total),
        None => {
            let len = piece.chars().count() as f64;
            libm::log(10.0 / total) - len * core::f64::consts::LN_10
        }
    }
}

/// Sum of per-piece log probabilities (pieces are lowercased for lookup).
pub fn segmentation_score(pieces: &[&str], unigrams: &Unigrams) -> f64 {
    pieces.iter().map(|p| piece_log_prob(&p.to_lowercase(), unigrams)).sum()
}

/// Splits `token` into the word sequence with the highest product of unigram
/// probabilities. Pieces are slices of the input, so its casing survives;
/// lookups are case-insensitive.
pub fn segment_words(token: &str, unigrams: &Unigrams) -> Vec<String> {
    let chars: Vec<(usize, char)> = token.char_indices().collect();
    let n = chars.len();
    if n == 0 {
        return Vec::new();
    }
    if n > MAX_INPUT_CHARS {
        return vec![token.into()];
    }
    let lower: Vec<String> = chars.iter().map(|(_, c)| c.to_lowercase().collect()).collect();
    let offset = |i: usize| if i == n { token.len() } else { chars[i].0 };

    // best[i]: best score of a segmentation of the first i chars.
    let mut best = vec![f64::NEG_INFINITY; n + 1];
    let mut back = vec![0usize; n + 1];
    best[0] = 0.0;
    let mut piece = String::new();
    for end in 1..=n {
        for start in 0..end {
            if best[start] == f64::NEG_INFINITY {
                continue;
            }
            piece.clear();
            for s in &lower[start..end] {
                piece.push_str(s);
            }
            let score = best[start] + piece_log_prob(&piece, unigrams);
            if score > best[end] {
                best[end] = score;
                back[end] = start;
            }
        }
    }
    let mut pieces = Vec::new();
    let mut end = n;
    while end > 0 {
        let start = back[end];
        pieces.push(String::from(&token[offset(start)..offset(end)]));
        end = start;
    }
    pieces.reverse();
    pieces
}

#[cfg(test)]
mod tests {
    use super::super::test_lexicon;
    use super::*;

    #[test]
    fn paper_hashtag() {
        let lex = test_lexicon();
        assert_eq!(segment_words("usedbytrendypeople", lex.unigrams()), ["used", "by", "trendy", "people"]);
    }

    #[test]
    fn known_word_stays_whole() {
        let lex = test_lexicon();
        assert_eq!(segment_words("hello", lex.unigrams()), ["hello"]);
    }

    #[test]
    fn casing_preserved() {
        let lex = test_lexicon();
        assert_eq!(segment_words("HappyHumpDay", lex.unigrams()), ["Happy", "Hump", "Day"]);
    }

    #[test]
    fn empty_input() {
        let lex = test_lexicon();
        assert!(segment_words("", lex.unigrams()).is_empty());
    }
}
