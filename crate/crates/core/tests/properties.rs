use std::path::Path;

use proptest::prelude::*;
use satd_core::corpus::{parse_corpus, write_corpus_to, Comment, CommentKind, Corpus, Label};
use satd_core::eval::{cliffs_delta, scores, wilcoxon_signed_rank, ConfusionMatrix};
use satd_core::exec::Execution;
use satd_core::extractor::{extract_comments, group_consecutive, LanguageProfile};
use satd_core::matchers::{classify_corpus_with, classify_mat, extend_tags, Classifier, MatchStrategy, TagSet};
use satd_core::textprep::{preprocess, tokenize};

const WORDS: &[&str] = &[
    "todo",
    "TODO:",
    "Todo",
    "fixme",
    "FIXME",
    "pleasefixme",
    "fixmehere",
    "prefixmess",
    "xxx",
    "XXXX",
    "hack",
    "hacks",
    "HACKY",
    "to",
    "do",
    "workaround",
    "tbd",
    "note",
    "remove",
    "this",
    "code",
    "ugly",
    "the",
    "parser",
    "é",
    "naïve",
    "//",
    "*",
    "!!!",
    "42",
    "foo_bar",
    "\n",
];

fn text() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(WORDS), 0..12).prop_map(|w| w.join(" "))
}

fn comments(max: usize) -> impl Strategy<Value = Vec<Comment>> {
    prop::collection::vec((text(), any::<bool>()), 1..max).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (t, satd))| {
                let t = if t.trim().is_empty() { "x".to_string() } else { t };
                Comment::new("p", i as u64 + 1, t, CommentKind::Line).with_label(if satd {
                    Label::Satd
                } else {
                    Label::NonSatd
                })
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn tokens_are_lowercase_letters(t in ".{0,80}") {
        for token in tokenize(&t).iter() {
            prop_assert!(!token.is_empty() && token.bytes().all(|b| b.is_ascii_lowercase()));
        }
    }

    #[test]
    fn fuzzy_dominates_strict(t in text()) {
        let c = Comment::new("p", 1, t, CommentKind::Line);
        let tags = TagSet::default();
        if classify_mat(&c, &tags, MatchStrategy::Strict).label.is_satd() {
            prop_assert!(classify_mat(&c, &tags, MatchStrategy::Fuzzy).label.is_satd());
        }
    }

    #[test]
    fn more_tags_never_lose_matches(t in text(), extra in prop::sample::subsequence(vec!["workaround", "tbd", "note", "remind"], 0..4)) {
        let c = Comment::new("p", 1, t, CommentKind::Line);
        let base = TagSet::default();
        let ext = extend_tags(&base, &extra).unwrap();
        prop_assert!(base.is_subset_of(&ext));
        for strategy in [MatchStrategy::Strict, MatchStrategy::Fuzzy] {
            if classify_mat(&c, &base, strategy).label.is_satd() {
                prop_assert!(classify_mat(&c, &ext, strategy).label.is_satd());
            }
        }
    }

    #[test]
    fn preprocessing_is_deterministic(t in text()) {
        prop_assert_eq!(preprocess(&t), preprocess(&t));
    }

    #[test]
    fn metric_identities(tp in 0usize..50, fp in 0usize..50, tn in 0usize..50, fn_ in 0usize..50) {
        let s = scores(&ConfusionMatrix { tp, fp, tn, fn_ });
        if let (Some(p), Some(r), Some(f)) = (s.precision, s.recall, s.f1) {
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(f <= p.max(r) + 1e-12);
            if p + r > 0.0 {
                prop_assert!((f - 2.0 * p * r / (p + r)).abs() <= 1e-12);
            }
            prop_assert_eq!(f == 0.0, tp == 0);
        }
    }

    #[test]
    fn cliffs_delta_antisymmetric(a in prop::collection::vec(0.0f64..1.0, 1..15), b in prop::collection::vec(0.0f64..1.0, 1..15)) {
        let ab = cliffs_delta(&a, &b).unwrap().delta;
        let ba = cliffs_delta(&b, &a).unwrap().delta;
        prop_assert!((-1.0..=1.0).contains(&ab));
        prop_assert!((ab + ba).abs() < 1e-12);
        let cube = |v: &[f64]| v.iter().map(|x| x.powi(3) + 2.0).collect::<Vec<_>>();
        prop_assert!((cliffs_delta(&cube(&a), &cube(&b)).unwrap().delta - ab).abs() < 1e-12);
    }

    #[test]
    fn wilcoxon_symmetric_and_order_free(pairs in prop::collection::vec((0u8..20, 0u8..20), 2..30), rot in 0usize..30) {
        let a: Vec<f64> = pairs.iter().map(|p| p.0 as f64 / 10.0).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1 as f64 / 10.0).collect();
        let p = wilcoxon_signed_rank(&a, &b).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
        prop_assert!((p - wilcoxon_signed_rank(&b, &a).unwrap()).abs() < 1e-12);
        let k = rot % a.len();
        let (mut ra, mut rb) = (a.clone(), b.clone());
        ra.rotate_left(k);
        rb.rotate_left(k);
        prop_assert!((p - wilcoxon_signed_rank(&ra, &rb).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn corpus_round_trip(texts in prop::collection::vec("[^\u{0}]{1,40}", 0..20)) {
        let rows: Vec<Comment> = texts
            .into_iter()
            .filter(|t| !t.trim().is_empty())
            .enumerate()
            .map(|(i, t)| Comment::new("p", i as u64 + 1, t, CommentKind::Block))
            .collect();
        let corpus = Corpus::new("rt", rows).unwrap();
        let mut buf = Vec::new();
        write_corpus_to(&corpus, &mut buf).unwrap();
        let back = parse_corpus("rt", Path::new("rt.jsonl"), &buf[..]).unwrap();
        prop_assert_eq!(back, corpus);
    }

    #[test]
    fn classification_independent_of_execution(rows in comments(60)) {
        let corpus = Corpus::new("p", rows).unwrap();
        let classifier = Classifier::mat_fuzzy();
        prop_assert_eq!(
            classify_corpus_with(Execution::Sequential, &corpus, &classifier),
            classify_corpus_with(Execution::Parallel, &corpus, &classifier)
        );
    }

    #[test]
    fn extraction_conserves_comment_bodies(bodies in prop::collection::vec("[a-z ]{1,12}", 1..8), block in prop::collection::vec(any::<bool>(), 8)) {
        // one comment per line; the trimmed bodies must come back in order
        let mut src = String::new();
        for (i, b) in bodies.iter().enumerate() {
            if block[i] {
                src.push_str(&format!("x = 1; /*{b}*/\n"));
            } else {
                src.push_str(&format!("y(); //{b}\n"));
            }
        }
        let got: String = group_consecutive(extract_comments(&src, &LanguageProfile::java(), Path::new("t.java")).comments)
            .iter()
            .flat_map(|c| c.text.lines().map(str::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .join("|");
        let want: String = bodies.iter().map(|b| b.trim()).filter(|b| !b.is_empty()).collect::<Vec<_>>().join("|");
        prop_assert_eq!(got, want);
    }
}
