use proptest::prelude::*;
use proptest::sample::select;

use thaimisp::classifier::{argmax, cross_entropy, fit_features, softmax};
use thaimisp::corpus::CorpusRecord;
use thaimisp::mae::align_subtokens;
use thaimisp::patterns::{classify_pattern_traced, classify_with_order, cluster_diff, RULE_ORDER};
use thaimisp::stats::{cohen_kappa, corpus_summary, label_entropy, TermObservations};
use thaimisp::thai_script::{grapheme_clusters, is_tone_mark, join_clusters};
use thaimisp::{
    correct, detect, featurize, mae_vector, segment, EmbeddingStore, FeatureMode, Intention, Lexicon, MispTag,
    Sentiment, SentimentModel, TokenizedSentence, TrainConfig,
};

fn thai_text() -> impl Strategy<Value = String> {
    "[ก-๛ a-z0-9\t]{0,24}"
}

fn lexicon_tokens() -> Vec<String> {
    let lex = Lexicon::bundled();
    let mut v: Vec<String> = lex.entries().map(|e| e.misspelt.clone()).collect();
    v.extend(lex.wordlist().map(str::to_string));
    v
}

fn token() -> impl Strategy<Value = String> {
    prop_oneof![
        2 => select(lexicon_tokens()),
        1 => "[ก-ฮะ-ู็-์5ๆ]{1,6}",
        1 => (select(lexicon_tokens()), 3usize..6).prop_map(|(w, n)| {
            let last = grapheme_clusters(&w).pop().unwrap();
            format!("{w}{}", last.as_str().repeat(n))
        }),
    ]
}

fn store() -> EmbeddingStore {
    thaimisp::mae::gen_embeddings(&lexicon_tokens(), 5, 11).unwrap()
}

proptest! {
    #[test]
    fn clusters_round_trip(s in thai_text()) {
        let cl = grapheme_clusters(&s);
        prop_assert_eq!(join_clusters(&cl), s);
        for c in &cl {
            prop_assert!(!c.as_str().is_empty());
            prop_assert!(c.as_str().chars().filter(|&ch| is_tone_mark(ch)).count() <= 1);
        }
    }

    #[test]
    fn segmentation_covers_input(s in thai_text()) {
        let lex = Lexicon::bundled();
        let seg = segment(&s, &lex);
        prop_assert_eq!(seg.text(), s.clone());
        let clusters: Vec<_> = grapheme_clusters(&s).into_iter().filter(|c| !c.is_whitespace()).collect();
        let token_clusters: Vec<_> = seg.tokens.iter().flat_map(|t| grapheme_clusters(t)).collect();
        prop_assert_eq!(token_clusters, clusters);
        for t in &seg.tokens {
            prop_assert!(!t.is_empty() && !t.chars().any(char::is_whitespace));
        }
    }

    #[test]
    fn vocabulary_word_alone_is_one_token(w in select(lexicon_tokens())) {
        let lex = Lexicon::bundled();
        prop_assert_eq!(segment(&w, &lex).tokens, vec![w]);
    }

    #[test]
    fn longer_prefix_word_never_shortens_first_token(a in "[ก-ฮ]{1,3}", b in "[ก-ฮ]{1,3}", rest in "[ก-ฮ]{0,3}") {
        let short = Lexicon::parse("", &format!("{a}\n")).unwrap();
        let long = Lexicon::parse("", &format!("{a}\n{a}{b}\n")).unwrap();
        let text = format!("{a}{b}{rest}");
        let first_short = segment(&text, &short).tokens[0].chars().count();
        let first_long = segment(&text, &long).tokens[0].chars().count();
        prop_assert!(first_long >= first_short);
    }

    #[test]
    fn null_detection_leaves_token_alone(t in token()) {
        let lex = Lexicon::bundled();
        if detect(&t, &lex) == MispTag::Null {
            prop_assert_eq!(correct(&t, &lex), t);
        }
    }

    #[test]
    fn laughter_wins(prefix in "[ก-ฮ]{0,3}", suffix in "[ก-ฮ5]{0,3}") {
        let lex = Lexicon::bundled();
        let t = format!("{prefix}555{suffix}");
        prop_assert_eq!(detect(&t, &lex), MispTag::Lol);
    }

    #[test]
    fn correction_is_stable(t in token()) {
        let lex = Lexicon::bundled();
        let once = correct(&t, &lex);
        if !lex.is_misspelt_key(&once) {
            prop_assert_eq!(correct(&once, &lex), once);
        }
    }

    #[test]
    fn diff_replays_to_misspelt(m in "[ก-ฮะ-ู่-์ๆ]{1,8}", c in "[ก-ฮะ-ู่-์]{1,8}") {
        prop_assert_eq!(cluster_diff(&m, &c).apply(&c), Some(m));
    }

    #[test]
    fn classification_is_total_and_stable(
        m in "[ก-ฮะ-ู่-์ๆ]{1,8}",
        c in "[ก-ฮะ-ู่-์]{1,8}",
        intentional in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let i = if intentional { Intention::Intentional } else { Intention::Unintentional };
        if m == c {
            prop_assert!(classify_pattern_traced(&m, &c, i).is_err());
        } else {
            let (label, trace) = classify_pattern_traced(&m, &c, i).unwrap();
            let fired_at = trace.len() - 1;
            // shuffle every rule after the one that fired
            let mut order = RULE_ORDER.to_vec();
            let tail = &mut order[fired_at + 1..];
            let n = tail.len();
            for k in (1..n).rev() {
                tail.swap(k, (seed as usize).wrapping_add(k * 31) % (k + 1));
            }
            let (again, _) = classify_with_order(&m, &c, i, &order).unwrap();
            prop_assert_eq!(again, label);
        }
    }

    #[test]
    fn mae_lies_between_sources(t in token()) {
        let lex = Lexicon::bundled();
        let st = store();
        let own = thaimisp::embed_token(&st, &t).0;
        let fixed = thaimisp::embed_token(&st, &correct(&t, &lex)).0;
        let m = mae_vector(&st, &t, &lex);
        for k in 0..st.dim() {
            prop_assert!(own[k].min(fixed[k]) <= m[k] && m[k] <= own[k].max(fixed[k]));
        }
        if correct(&t, &lex) == t {
            prop_assert_eq!(m, own);
        }
    }

    #[test]
    fn alignment_length(misp in prop::collection::vec("[a-z]{1,3}", 1..6), norm in prop::collection::vec("[a-z]{1,3}", 1..6)) {
        prop_assert_eq!(align_subtokens(&misp, &norm).unwrap().len(), misp.len());
    }

    #[test]
    fn feature_modes_agree_on_clean_sentences(tokens in prop::collection::vec(select(lexicon_tokens()), 0..6)) {
        let lex = Lexicon::bundled();
        let st = store();
        let s = TokenizedSentence::from_tokens(tokens.clone(), None).unwrap();
        let none = featurize(&s, FeatureMode::None_, &st, &lex).unwrap();
        let clean = tokens.iter().all(|t| detect(t, &lex).is_null());
        if clean {
            prop_assert_eq!(&none, &featurize(&s, FeatureMode::Mae, &st, &lex).unwrap());
        }
        let untouched = tokens.iter().all(|t| correct(t, &lex) == *t);
        if untouched {
            prop_assert_eq!(&none, &featurize(&s, FeatureMode::Norm, &st, &lex).unwrap());
        }
    }

    #[test]
    fn argmax_shift_invariant(scores in prop::array::uniform3(-50.0f64..50.0), shift in -1e3f64..1e3) {
        let shifted: Vec<f64> = scores.iter().map(|s| s + shift).collect();
        prop_assert_eq!(argmax(&scores), argmax(&shifted));
        let (p, q) = (softmax(&scores), softmax(&shifted));
        for k in 0..3 {
            prop_assert!((p[k] - q[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn kappa_bounds(a in prop::collection::vec(any::<bool>(), 1..30), flips in prop::collection::vec(any::<bool>(), 30)) {
        let b: Vec<bool> = a.iter().zip(&flips).map(|(x, f)| x ^ f).collect();
        let k = cohen_kappa(&a, &b).unwrap();
        prop_assert!((-1.0..=1.0).contains(&k));
        if a.iter().any(|&x| x) && a.iter().any(|&x| !x) {
            prop_assert_eq!(cohen_kappa(&a, &a).unwrap(), 1.0);
        }
    }

    #[test]
    fn entropy_bounds(i in 0usize..20, u in 0usize..20) {
        let obs = TermObservations {
            term: "t".into(),
            labels: [vec![Intention::Intentional; i], vec![Intention::Unintentional; u]].concat(),
        };
        if let Some(h) = label_entropy(&obs, 1) {
            prop_assert!((0.0..=1.0).contains(&h));
            prop_assert_eq!(h == 1.0, i == u);
        }
    }

    #[test]
    fn summary_ignores_order(seed in any::<u64>()) {
        let lines = [
            r#"{"text":"กุไป","label":"positive","misspellings":[{"start":0,"end":2,"intention":"intentional"}]}"#,
            r#"{"text":"ค่ะ","label":"neutral","misspellings":[{"start":0,"end":3,"intention":"unintentional"}]}"#,
            r#"{"text":"ดี","label":"positive"}"#,
            r#"{"text":"กุกุ","misspellings":[{"start":0,"end":2,"intention":"intentional"},{"start":2,"end":4,"intention":"unintentional"}]}"#,
        ];
        let mut records: Vec<_> = lines.iter().enumerate()
            .map(|(i, l)| (i + 1, CorpusRecord::from_line(l, i + 1, "t").unwrap()))
            .collect();
        let base = corpus_summary(&records, 5, "t").unwrap();
        let n = records.len();
        for k in (1..n).rev() {
            records.swap(k, (seed as usize).wrapping_add(k * 7) % (k + 1));
        }
        prop_assert_eq!(corpus_summary(&records, 5, "t").unwrap(), base);
    }
}

#[test]
fn correction_idempotent_over_lexicon() {
    let lex = Lexicon::bundled();
    for e in lex.entries() {
        let once = correct(&e.misspelt, &lex);
        if lex.is_misspelt_key(&once) {
            // the คะ/ค่ะ pair corrects in both directions
            assert_eq!(correct(&once, &lex), e.misspelt, "{}", e.misspelt);
        } else {
            assert_eq!(correct(&once, &lex), once, "{}", e.misspelt);
        }
    }
}

#[test]
fn loss_never_increases_with_small_steps() {
    let lex = Lexicon::bundled();
    let st = store();
    let corpus: Vec<TokenizedSentence> = [
        ("อร่อยมากกก", Sentiment::Positive),
        ("ดี ชอบ", Sentiment::Positive),
        ("แย่ เกลียด", Sentiment::Negative),
        ("แม่ง ช้า", Sentiment::Negative),
        ("ไปกินข้าว", Sentiment::Neutral),
        ("ร้านนี้ ค่ะ", Sentiment::Neutral),
    ]
    .iter()
    .map(|(t, l)| segment(t, &lex).with_label(Some(*l)))
    .collect();
    let xs: Vec<Vec<f64>> = corpus
        .iter()
        .map(|s| featurize(s, FeatureMode::Mst, &st, &lex).unwrap())
        .collect();
    let ys: Vec<Sentiment> = corpus.iter().map(|s| s.label.unwrap()).collect();
    let cfg = TrainConfig {
        epochs: 300,
        learning_rate: 0.01,
        seed: 0,
    };
    let mut model = SentimentModel::zeros(st.dim(), FeatureMode::Mst, cfg);
    let mut losses = Vec::new();
    fit_features(&mut model, &xs, &ys, |_, l| losses.push(l));
    losses.push(cross_entropy(&model, &xs, &ys));
    for w in losses.windows(2) {
        assert!(w[1] <= w[0] + 1e-15, "{} -> {}", w[0], w[1]);
    }
    assert!(losses.last().unwrap() < &losses[0]);
}
