//! Shared fixtures for the integration tests.

use std::sync::OnceLock;

use tweetseq_core::textprep::LexiconSources;
use tweetseq_core::LexiconSet;

pub fn lexicon() -> &'static LexiconSet {
    static LEX: OnceLock<LexiconSet> = OnceLock::new();
    LEX.get_or_init(|| {
        LexiconSet::from_sources(LexiconSources {
            emoji: include_str!("../../../tweetseq/resources/emoji.tsv"),
            slang: include_str!("../../../tweetseq/resources/slang.tsv"),
            contractions: include_str!("../../../tweetseq/resources/contractions.tsv"),
            stopwords: include_str!("../../../tweetseq/resources/stopwords.txt"),
            unigrams: include_str!("../../../tweetseq/resources/unigrams.tsv"),
            lemmas: include_str!("../../../tweetseq/resources/lemmas.tsv"),
        })
        .expect("lexicons parse")
    })
}
