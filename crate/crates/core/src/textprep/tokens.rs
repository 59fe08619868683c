use alloc::string::String;

/// Splits on Unicode whitespace and rejoins with single spaces.
pub fn normalize_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for tok in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(tok);
    }
    out
}

pub(crate) fn normalize_apostrophes(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '\u{2019}' | '\u{2018}' | '\u{02bc}' | '`' | '\u{00b4}' => '\'',
            c => c,
        })
        .collect()
}

/// A token cut into leading non-alphanumerics, the alphanumeric core
/// (which may contain inner punctuation such as apostrophes) and the
/// trailing non-alphanumerics.
pub(crate) struct Affixes<'a> {
    pub lead: &'a str,
    pub core: &'a str,
    pub trail: &'a str,
}

pub(crate) fn split_affixes(token: &str) -> Affixes<'_> {
    let start = token.char_indices().find(|(_, c)| c.is_alphanumeric()).map(|(i, _)| i);
    let Some(start) = start else {
        return Affixes { lead: token, core: "", trail: "" };
    };
    let end = token
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_alphanumeric())
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(token.len());
    Affixes { lead: &token[..start], core: &token[start..end], trail: &token[end..] }
}

/// Carries the capitalization of `original` over to `replacement`:
/// ALL-CAPS (two or more letters) stays upper case, a leading capital is
/// kept, anything else is returned unchanged.
pub(crate) fn match_case(original: &str, replacement: &str) -> String {
    let letters = original.chars().filter(|c| c.is_alphabetic()).count();
    let all_upper = letters >= 2 && original.chars().filter(|c| c.is_alphabetic()).all(char::is_uppercase);
    if all_upper {
        return replacement.to_uppercase();
    }
    match original.chars().next() {
        Some(c) if c.is_uppercase() => {
            let mut chars = replacement.chars();
            match chars.next() {
                Some(first) => {
                    let mut out: String = first.to_uppercase().collect();
                    out.push_str(chars.as_str());
                    out
                }
                None => String::new(),
            }
        }
        _ => replacement.into(),
    }
}

pub(crate) fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(c,
            '\u{00a1}' | '\u{00a7}' | '\u{00ab}' | '\u{00b6}' | '\u{00b7}' | '\u{00bb}' | '\u{00bf}'
            | '\u{00b4}' | '\u{02bc}'
            | '\u{2010}'..='\u{2027}'
            | '\u{2030}'..='\u{205e}'
            | '\u{2e00}'..='\u{2e4f}'
            | '\u{3001}'..='\u{3003}'
            | '\u{3008}'..='\u{3011}'
            | '\u{ff01}'..='\u{ff0f}'
            | '\u{ff1a}'..='\u{ff20}'
            | '\u{ff3b}'..='\u{ff40}'
            | '\u{ff5b}'..='\u{ff65}')
}

/// Emoji, pictographs and the joiners/modifiers that glue them together.
pub(crate) fn is_pictograph(c: char) -> bool {
    matches!(c,
        '\u{1f000}'..='\u{1faff}'
        | '\u{2600}'..='\u{27bf}'
        | '\u{2300}'..='\u{23ff}'
        | '\u{2b00}'..='\u{2bff}'
        | '\u{2190}'..='\u{21ff}'
        | '\u{3030}' | '\u{303d}' | '\u{3297}' | '\u{3299}'
        | '\u{00a9}' | '\u{00ae}' | '\u{203c}' | '\u{2049}' | '\u{2122}' | '\u{2139}'
        | '\u{fe0e}' | '\u{fe0f}' | '\u{200d}' | '\u{20e3}'
        | '\u{e0020}'..='\u{e007f}')
}
