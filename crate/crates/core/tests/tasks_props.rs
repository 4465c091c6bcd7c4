mod common;

use proptest::prelude::*;
use qdiscocirc::compiler::compile;
use qdiscocirc::ir::Builder;
use qdiscocirc::parser::Pos;
use qdiscocirc::qsim::Simulator;
use qdiscocirc::tasks::{
    character_arc, question_answer, text_similarity, Mode, QaInstance, TaskError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn similarity_is_a_symmetric_probability(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = common::random_embeddings(&mut rng, 2);
        // nouns missing from one side are padded with their own state
        for x in common::names(3) {
            let a = common::random_ansatz(&mut rng, 1);
            v.insert(&x, 1, Pos::ProperNoun, a);
        }
        let n = rng.random_range(1..=3);
        let (discard, m) = (rng.random_bool(0.3), rng.random_range(1..=3));
        let a = common::random_closed_text(&mut rng, n, 3, discard);
        let b = common::random_closed_text(&mut rng, m, 3, false);
        let sim = Simulator::default();
        if discard && n >= 2 && m >= n {
            // b would have to trace out the noun a discarded: both mixed
            let r = text_similarity(&a, &b, &v, Mode::Exact, &sim);
            prop_assert!(matches!(r, Err(TaskError::Purity(_))), "{:?}", r);
            return Ok(());
        }
        let ab = text_similarity(&a, &b, &v, Mode::Exact, &sim).unwrap();
        let ba = text_similarity(&b, &a, &v, Mode::Exact, &sim).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab.value));
        prop_assert!((ab.raw - ba.raw).abs() < 1e-10);
        let s = text_similarity(&a, &b, &v, Mode::Sampled { epsilon: 0.2, delta: 0.1, seed }, &sim).unwrap();
        prop_assert!((0.0..=1.0).contains(&s.value));
        prop_assert_eq!(s.shots, 600);
    }

    #[test]
    fn qa_over_every_noun_is_similarity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = common::random_embeddings(&mut rng, 2);
        let n = rng.random_range(1..=3);
        let context = common::random_closed_text(&mut rng, n, 4, false);
        let questions: Vec<_> = (0..3).map(|_| common::random_closed_text(&mut rng, n, 2, false)).collect();
        let inst = QaInstance { context: context.clone(), questions: questions.clone(), queried: common::names(n) };
        let sim = Simulator::default();
        let r = question_answer(&inst, &v, Mode::Exact, &sim).unwrap();
        for (q, s) in questions.iter().zip(&r.raw) {
            let want = text_similarity(&context, q, &v, Mode::Exact, &sim).unwrap().raw;
            prop_assert!((want - s).abs() < 1e-10);
        }
        prop_assert!(r.raw.iter().all(|x| *x <= r.raw[r.chosen]));
    }

    #[test]
    fn traced_arc_ignores_the_starting_state(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = common::random_embeddings(&mut rng, 2);
        let n = rng.random_range(1..=3);
        let nouns = common::names(n);
        let ops = rng.random_range(1..=4);
        let body = |b: &mut Builder, rng: &mut ChaCha8Rng| common::random_ops(rng, b, &nouns, ops, true);
        let mut texts = Vec::new();
        for start in ["s0", "s3"] {
            // same ops on both texts: replay the rng
            let mut r = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let mut b = Builder::new();
            b.state(start, &nouns[0]).unwrap();
            for x in &nouns[1..] {
                b.state("s1", x).unwrap();
            }
            body(&mut b, &mut r);
            texts.push(b.finish());
        }
        let sim = Simulator::default();
        let a0 = character_arc(&texts[0], &["n0"], true, &v, &sim).unwrap();
        let a1 = character_arc(&texts[1], &["n0"], true, &v, &sim).unwrap();
        prop_assert!((a0 - a1).abs() < 1e-10, "{} vs {}", a0, a1);
        prop_assert!((0.0..=1.0).contains(&a0));
        let plain = character_arc(&texts[0], &["n0"], false, &v, &sim).unwrap();
        prop_assert!((0.0..=1.0).contains(&plain));
        compile(&texts[0], &v).unwrap();
    }
}
