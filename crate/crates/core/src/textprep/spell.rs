//! Frequency-ranked spelling correction by edit generation.
//!
//! Candidates are all strings one edit away (delete, adjacent transpose,
//! replace, insert over `a..=z`), then two edits away. The known candidate with
//! the highest count wins; ties go to the lexicographically smaller word.

use alloc::string::String;
use alloc::vec::Vec;

use super::tokens::match_case;
use super::Unigrams;

const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

#[derive(Default)]
struct Best {
    word: Option<String>,
    count: u64,
}

impl Best {
    fn offer(&mut self, candidate: &[u8], unigrams: &Unigrams) {
        // Candidates are built from ASCII letters only.
        let Ok(s) = core::str::from_utf8(candidate) else {
            return;
        };
        if let Some(c) = unigrams.count(s) {
            let better = match &self.word {
                None => true,
                Some(w) => c > self.count || (c == self.count && s < w.as_str()),
            };
            if better {
                self.word = Some(String::from(s));
                self.count = c;
            }
        }
    }
}

/// Calls `f` with every string one edit away from `word`.
fn for_each_edit<F: FnMut(&[u8])>(word: &[u8], buf: &mut Vec<u8>, mut f: F) {
    let n = word.len();
    for i in 0..n {
        buf.clear();
        buf.extend_from_slice(&word[..i]);
        buf.extend_from_slice(&word[i + 1..]);
        f(buf);
    }
    for i in 0..n.saturating_sub(1) {
        buf.clear();
        buf.extend_from_slice(word);
        buf.swap(i, i + 1);
        f(buf);
    }
    for i in 0..n {
        for &c in ALPHABET {
            if word[i] == c {
                continue;
            }
            buf.clear();
            buf.extend_from_slice(word);
            buf[i] = c;
            f(buf);
        }
    }
    for i in 0..=n {
        for &c in ALPHABET {
            buf.clear();
            buf.extend_from_slice(&word[..i]);
            buf.push(c);
            buf.extend_from_slice(&word[i..]);
            f(buf);
        }
    }
}

/// Corrects an out-of-vocabulary word. Known words, words with non-ASCII or
/// non-letter characters, and words with no candidate within two edits are
/// returned unchanged. Capitalization of the input is carried over.
pub fn spell_correct(token: &str, unigrams: &Unigrams) -> String {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_alphabetic()) {
        return token.into();
    }
    let lower = token.to_ascii_lowercase();
    if unigrams.contains(&lower) {
        return token.into();
    }
    let word = lower.as_bytes();
    let mut buf = Vec::with_capacity(word.len() + 2);
    let mut best = Best::default();
    for_each_edit(word, &mut buf, |cand| best.offer(cand, unigrams));
    if best.word.is_none() {
        let mut first = Vec::new();
        for_each_edit(word, &mut buf, |cand| first.push(cand.to_vec()));
        first.sort_unstable();
        first.dedup();
        let mut inner = Vec::with_capacity(word.len() + 3);
        for e1 in &first {
            for_each_edit(e1, &mut inner, |cand| best.offer(cand, unigrams));
        }
    }
    match best.word {
        Some(w) => match_case(token, &w),
        None => token.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_lexicon;
    use super::*;

    #[test]
    fn frst_becomes_first() {
        let lex = test_lexicon();
        assert_eq!(spell_correct("frst", lex.unigrams()), "first");
    }

    #[test]
    fn known_word_is_identity() {
        let lex = test_lexicon();
        assert_eq!(spell_correct("hello", lex.unigrams()), "hello");
        assert_eq!(spell_correct("Hello", lex.unigrams()), "Hello");
    }

    #[test]
    fn frequency_decides() {
        // "speling" is one edit from both "spelling" (25) and "spewing" (5).
        let lex = test_lexicon();
        assert_eq!(spell_correct("speling", lex.unigrams()), "spelling");
    }

    #[test]
    fn two_edits() {
        let lex = test_lexicon();
        assert_eq!(spell_correct("pple", lex.unigrams()), "people");
    }

    #[test]
    fn hopeless_and_non_alpha_unchanged() {
        let lex = test_lexicon();
        assert_eq!(spell_correct("qzxqzxqzx", lex.unigrams()), "qzxqzxqzx");
        assert_eq!(spell_correct("2nite", lex.unigrams()), "2nite");
        assert_eq!(spell_correct("don't", lex.unigrams()), "don't");
    }

    #[test]
    fn capitalization_kept() {
        let lex = test_lexicon();
        assert_eq!(spell_correct("Frst", lex.unigrams()), "First");
    }
}
