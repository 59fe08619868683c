use alloc::string::String;
use alloc::vec::Vec;

use super::porter::porter_stem;
use super::segment::segment_words;
use super::spell::spell_correct;
use super::tokens::{
    is_pictograph, is_punctuation, match_case, normalize_apostrophes, normalize_whitespace, split_affixes,
};
use super::{LexiconSet, StageId};

/// Runs one normalization stage over `text`.
pub fn apply_stage(stage: StageId, text: &str, lex: &LexiconSet) -> String {
    match stage {
        StageId::StripUrlsNoiseHashmarks => strip_noise(text),
        StageId::ReplaceEmojiEmoticon => replace_emoji(text, lex),
        StageId::SegmentHashtagWords => map_tokens(text, |t| segment_token(t, lex)),
        StageId::ExpandSlangAbbrev => map_tokens(text, |t| expand_slang(t, lex)),
        StageId::NormalizeElongation => map_tokens(text, |t| map_core(t, |c| fix_elongation(c, lex))),
        StageId::SpellCorrect => map_tokens(text, |t| map_core(t, |c| spell_correct(c, lex.unigrams()))),
        StageId::ExpandContractions => expand_contractions(text, lex),
        StageId::StripPunctuation => {
            normalize_whitespace(&text.chars().filter(|c| !is_punctuation(*c)).collect::<String>())
        }
        StageId::StripNumerals => normalize_whitespace(&text.chars().filter(|c| !c.is_numeric()).collect::<String>()),
        StageId::CaseFold => normalize_whitespace(&text.to_lowercase()),
        StageId::RemoveStopwords => remove_stopwords(text, lex),
        StageId::StemLemmatize => map_tokens(text, |t| map_core(t, |c| stem_lemmatize(c, lex))),
    }
}

fn map_tokens<F: FnMut(&str) -> String>(text: &str, mut f: F) -> String {
    let mut out = String::with_capacity(text.len());
    for tok in text.split_whitespace() {
        let mapped = f(tok);
        let mapped = mapped.trim();
        if mapped.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(mapped);
    }
    out
}

/// Rewrites the alphanumeric core of a token, keeping surrounding punctuation.
fn map_core<F: FnOnce(&str) -> String>(token: &str, f: F) -> String {
    let a = split_affixes(token);
    if a.core.is_empty() {
        return token.into();
    }
    let mut out = String::from(a.lead);
    out.push_str(&f(a.core));
    out.push_str(a.trail);
    out
}

// ---- I: URLs, mentions, entities, control characters, '#' ----

fn strip_noise(text: &str) -> String {
    let mut cur = normalize_whitespace(text);
    // Each pass only deletes, so this terminates; looping makes the stage idempotent.
    loop {
        let next = strip_noise_pass(&cur);
        if next == cur {
            return next;
        }
        cur = next;
    }
}

fn strip_noise_pass(text: &str) -> String {
    let cleaned: String = text
        .chars()
        .map(|c| if c.is_control() && c.is_whitespace() { ' ' } else { c })
        .filter(|c| !c.is_control())
        .collect();
    let cleaned = strip_entities(&cleaned);
    let mut out = String::with_capacity(cleaned.len());
    for tok in cleaned.split_whitespace() {
        if is_url(tok) || is_mention(tok) {
            continue;
        }
        let kept: String = tok.chars().filter(|c| *c != '#').collect();
        if kept.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&kept);
    }
    out
}

fn is_url(tok: &str) -> bool {
    let t = tok.trim_start_matches(['<', '(', '[', '"', '\'']);
    let lower = t.to_ascii_lowercase();
    lower.starts_with("http://")
        || lower.starts_with("https://")
        || lower.starts_with("www.")
        || lower.starts_with("pic.twitter.com/")
        || lower.contains("://")
}

fn is_mention(tok: &str) -> bool {
    let t = tok.trim_start_matches(['.', '"', '\'', '(', '[']);
    let mut chars = t.chars();
    chars.next() == Some('@') && chars.next().is_some_and(|c| c.is_alphanumeric() || c == '_')
}

/// Deletes `&name;`, `&#123;`, `&#x1F;` and the bare `&#123` / `&123` forms.
fn strip_entities(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '&' {
            if let Some(end) = entity_end(&chars, i) {
                i = end;
                continue;
            }
        }
        out.push(chars[i]);
        i += 1;
    }
    out
}

fn entity_end(chars: &[char], start: usize) -> Option<usize> {
    let mut i = start + 1;
    let numeric = chars.get(i) == Some(&'#');
    if numeric {
        i += 1;
        if matches!(chars.get(i), Some('x' | 'X')) && chars.get(i + 1).is_some_and(char::is_ascii_hexdigit) {
            i += 1;
            while chars.get(i).is_some_and(char::is_ascii_hexdigit) {
                i += 1;
            }
            return Some(if chars.get(i) == Some(&';') { i + 1 } else { i });
        }
    }
    let body = i;
    if chars.get(i).is_some_and(char::is_ascii_digit) {
        while chars.get(i).is_some_and(char::is_ascii_digit) {
            i += 1;
        }
        return Some(if chars.get(i) == Some(&';') { i + 1 } else { i });
    }
    if numeric {
        return None;
    }
    while chars.get(i).is_some_and(char::is_ascii_alphanumeric) {
        i += 1;
    }
    (i > body && chars.get(i) == Some(&';')).then_some(i + 1)
}

// ---- II: emoji and emoticons ----

fn replace_emoji(text: &str, lex: &LexiconSet) -> String {
    let mut out = String::with_capacity(text.len());
    for tok in text.split_whitespace() {
        out.push(' ');
        if tok.is_ascii() {
            match lex.emoji(&tok.to_ascii_lowercase()) {
                Some(word) => out.push_str(word),
                None => out.push_str(tok),
            }
            continue;
        }
        replace_emoji_chars(tok, lex, &mut out);
    }
    normalize_whitespace(&out)
}

fn replace_emoji_chars(tok: &str, lex: &LexiconSet, out: &mut String) {
    let chars: Vec<char> = tok.chars().collect();
    let max = lex.emoji_max_chars();
    let mut key = String::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_ascii() {
            out.push(chars[i]);
            i += 1;
            continue;
        }
        let mut matched = None;
        for len in (1..=max.min(chars.len() - i)).rev() {
            key.clear();
            key.extend(&chars[i..i + len]);
            if let Some(word) = lex.emoji(&key) {
                matched = Some((len, word));
                break;
            }
        }
        match matched {
            Some((len, word)) => {
                out.push(' ');
                out.push_str(word);
                out.push(' ');
                i += len;
            }
            None => {
                if is_pictograph(chars[i]) {
                    out.push(' ');
                } else {
                    out.push(chars[i]);
                }
                i += 1;
            }
        }
    }
}

// ---- III: word segmentation ----

/// Non-hashtag tokens shorter than this are never split.
const MIN_SPLIT_CHARS: usize = 6;

fn segment_token(token: &str, lex: &LexiconSet) -> String {
    let a = split_affixes(token);
    let hashtag = a.lead.ends_with('#');
    let core = a.core;
    if core.chars().count() < 2 || !core.chars().all(char::is_alphabetic) {
        return token.into();
    }
    let unigrams = lex.unigrams();
    if unigrams.contains(&core.to_lowercase()) {
        return token.into();
    }
    let pieces = segment_words(core, unigrams);
    if pieces.len() < 2 {
        return token.into();
    }
    if !hashtag {
        let plausible = core.chars().count() >= MIN_SPLIT_CHARS
            && pieces.iter().all(|p| {
                let l = p.to_lowercase();
                unigrams.contains(&l) && (l.chars().count() >= 2 || l == "a" || l == "i")
            });
        if !plausible {
            return token.into();
        }
    }
    let mut out = String::from(a.lead);
    out.push_str(&pieces.join(" "));
    out.push_str(a.trail);
    out
}

// ---- IV: slang ----

fn expand_slang(token: &str, lex: &LexiconSet) -> String {
    let lower = token.to_lowercase();
    if let Some(rep) = lex.slang(&lower) {
        return match_case(token, rep);
    }
    map_core(token, |core| match lex.slang(&core.to_lowercase()) {
        Some(rep) => match_case(core, rep),
        None => core.into(),
    })
}

// ---- V: elongation ----

/// At most this many elongated runs are resolved by search; beyond it every
/// run is cut to two characters.
const MAX_RUNS: usize = 10;

fn fix_elongation(core: &str, lex: &LexiconSet) -> String {
    let chars: Vec<char> = core.chars().collect();
    // (start, len) of letter runs of length >= 3, compared case-insensitively.
    let mut runs = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut j = i + 1;
        while j < chars.len() && same_letter(chars[i], chars[j]) {
            j += 1;
        }
        if j - i >= 3 && chars[i].is_alphabetic() {
            runs.push((i, j - i));
        }
        i = j;
    }
    if runs.is_empty() {
        return core.into();
    }
    let build = |mask: u32| -> String {
        let mut s = String::with_capacity(core.len());
        let mut pos = 0;
        for (r, &(start, len)) in runs.iter().enumerate() {
            s.extend(&chars[pos..start]);
            let keep = if mask & (1 << r) != 0 { 1 } else { 2 };
            s.extend(&chars[start..start + keep]);
            pos = start + len;
        }
        s.extend(&chars[pos..]);
        s
    };
    if runs.len() > MAX_RUNS {
        return build(0);
    }
    let unigrams = lex.unigrams();
    let mut best: Option<(u64, String)> = None;
    // mask bit r set => run r collapses to one character; mask 0 is all-doubles.
    for mask in 0..(1u32 << runs.len()) {
        let cand = build(mask);
        if let Some(c) = unigrams.count(&cand.to_lowercase()) {
            if best.as_ref().is_none_or(|(bc, _)| c > *bc) {
                best = Some((c, cand));
            }
        }
    }
    best.map(|(_, s)| s).unwrap_or_else(|| build(0))
}

fn same_letter(a: char, b: char) -> bool {
    a == b || (a.is_alphabetic() && a.to_lowercase().eq(b.to_lowercase()))
}

// ---- VII: contractions ----

fn expand_contractions(text: &str, lex: &LexiconSet) -> String {
    let tokens: Vec<String> = text.split_whitespace().map(normalize_apostrophes).collect();
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if lex.has_contraction_bigrams() && i + 1 < tokens.len() {
            let pair = alloc::format!("{} {}", tokens[i], tokens[i + 1]).to_lowercase();
            if let Some(rep) = lex.contraction(&pair) {
                out.push(match_case(&tokens[i], rep));
                i += 2;
                continue;
            }
        }
        out.push(expand_contraction_token(&tokens[i], lex));
        i += 1;
    }
    normalize_whitespace(&out.join(" "))
}

fn expand_contraction_token(token: &str, lex: &LexiconSet) -> String {
    if let Some(rep) = lex.contraction(&token.to_lowercase()) {
        return match_case(token, rep);
    }
    map_core(token, |core| match lex.contraction(&core.to_lowercase()) {
        Some(rep) => match_case(core, rep),
        None => core.into(),
    })
}

// ---- XI: stop-words ----

fn remove_stopwords(text: &str, lex: &LexiconSet) -> String {
    map_tokens(text, |tok| {
        let lower = normalize_apostrophes(&tok.to_lowercase());
        let core = split_affixes(&lower).core;
        if lex.is_stopword(&lower) || (!core.is_empty() && lex.is_stopword(core)) {
            String::new()
        } else {
            tok.into()
        }
    })
}

// ---- XII: lemmatize / stem ----

/// Irregular forms come from the lemma table; everything else is
/// Porter-stemmed. Leading capitals are kept.
pub fn stem_lemmatize(token: &str, lex: &LexiconSet) -> String {
    let lower = token.to_lowercase();
    if let Some(lemma) = lex.lemma(&lower) {
        return match_case(token, lemma);
    }
    if lower.bytes().all(|b| b.is_ascii_lowercase()) {
        let stem = porter_stem(&lower);
        if stem == lower {
            return token.into();
        }
        return match_case(token, &stem);
    }
    token.into()
}
