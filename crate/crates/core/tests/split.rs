use std::collections::BTreeSet;

use proptest::prelude::*;
use tweetseq_core::corpus::split;
use tweetseq_core::{Document, Label, LabeledCorpus, Source};

fn corpus(pos: usize, neg: usize) -> LabeledCorpus {
    let docs = (0..pos + neg)
        .map(|i| Document {
            id: format!("d{i}"),
            text: format!("text {i}"),
            label: Label::from_positive(i < pos),
            source: Source::Generic,
        })
        .collect();
    LabeledCorpus::new(docs)
}

fn ids(c: &LabeledCorpus) -> BTreeSet<String> {
    c.documents().iter().map(|d| d.id.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parts_partition_the_corpus(pos in 3usize..200, neg in 3usize..200, seed in any::<u64>()) {
        let c = corpus(pos, neg);
        let s = split(&c, [0.8, 0.1, 0.1], seed).unwrap();
        let (a, b, t) = (ids(&s.train), ids(&s.validation), ids(&s.test));
        prop_assert!(a.is_disjoint(&b) && a.is_disjoint(&t) && b.is_disjoint(&t));
        prop_assert_eq!(a.len() + b.len() + t.len(), c.len());
        prop_assert_eq!(a.union(&b).chain(t.iter()).count(), c.len());
    }

    #[test]
    fn each_class_follows_the_ratios(pos in 3usize..300, neg in 3usize..300, seed in any::<u64>()) {
        let ratios = [0.8, 0.1, 0.1];
        let s = split(&corpus(pos, neg), ratios, seed).unwrap();
        for (label, size) in [(Label::Inappropriate, pos), (Label::Normal, neg)] {
            for (part, r) in [&s.train, &s.validation, &s.test].iter().zip(ratios) {
                let got = part.class_counts().get(label) as f64;
                prop_assert!((got - r * size as f64).abs() <= 1.0, "{:?}: {} vs {}", label, got, r * size as f64);
            }
        }
    }

    #[test]
    fn same_seed_same_split(seed in any::<u64>()) {
        let c = corpus(40, 60);
        prop_assert_eq!(split(&c, [0.8, 0.1, 0.1], seed).unwrap(), split(&c, [0.8, 0.1, 0.1], seed).unwrap());
    }
}

#[test]
fn rejects_bad_ratios_and_tiny_classes() {
    let c = corpus(20, 20);
    assert!(split(&c, [0.5, 0.2, 0.2], 1).is_err());
    assert!(split(&c, [1.0, 0.0, 0.0], 1).is_err());
    assert!(split(&corpus(2, 20), [0.8, 0.1, 0.1], 1).is_err());
}

#[test]
fn different_seeds_shuffle_differently() {
    let c = corpus(50, 50);
    let a = split(&c, [0.8, 0.1, 0.1], 1).unwrap();
    let b = split(&c, [0.8, 0.1, 0.1], 2).unwrap();
    assert_ne!(ids(&a.test), ids(&b.test));
}
