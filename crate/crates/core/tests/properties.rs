use ggc_core::{
    decide_subgroup_conjugacy, oracle_brute_force, oracle_free_conjugacy, stallings_graph,
    verify_witness, BackendKind, Budget, GroupContext, Letter, Presentation, Subgroup, Verdict,
    Word,
};
use proptest::prelude::*;

fn f2() -> GroupContext {
    GroupContext::new(Presentation::free("ab").unwrap(), 0).unwrap()
}

fn surface() -> GroupContext {
    GroupContext::new(Presentation::from_strs("abcd", &["abABcdCD"]).unwrap(), 1).unwrap()
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * rank, 0..=max_len)
        .prop_map(|codes| Word::from_letters(codes.into_iter().map(Letter::from_code).collect()))
}

fn nontrivial(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    word(rank, max_len)
        .prop_map(|w| w.free_reduce())
        .prop_filter("nontrivial", |w| !w.is_empty())
}

fn generators(max_count: usize, max_len: usize) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(nontrivial(2, max_len), 1..=max_count)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_reduce_is_idempotent(w in word(3, 24)) {
        let r = w.free_reduce();
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(r.free_reduce(), r);
    }

    #[test]
    fn inverse_cancels(w in word(4, 20)) {
        let ctx = surface();
        prop_assert!(ctx.is_trivial(&w.concat(&w.inverse())));
        prop_assert!(ctx.is_trivial(&w.inverse().concat(&w)));
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn cyclic_reduce_recovers_word(w in word(2, 16)) {
        let w = w.free_reduce();
        let (core, conj) = w.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        let back = Word::product(&[&conj, &core, &conj.inverse()]).free_reduce();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn conjugates_are_free_conjugate(u in nontrivial(2, 8), g in word(2, 6)) {
        let v = Word::product(&[&g, &u, &g.inverse()]).free_reduce();
        prop_assert!(oracle_free_conjugacy(&u, &v));
    }

    #[test]
    fn stallings_graph_is_folded_and_accepts_generators(gens in generators(3, 5)) {
        let core = stallings_graph(2, &gens);
        prop_assert!(core.is_folded());
        for g in &gens {
            prop_assert!(core.accepts(&g.free_reduce()));
            prop_assert!(core.accepts(&g.inverse().free_reduce()));
        }
        let p = Word::product(&[&gens[0], &gens[gens.len() - 1]]).free_reduce();
        prop_assert!(core.accepts(&p));
    }

    #[test]
    fn backends_agree(gens in generators(2, 3), w in word(2, 5)) {
        let ctx = f2();
        let st = Subgroup::new(&ctx, gens.clone(), None, Some(BackendKind::Stallings)).unwrap();
        let bc = Subgroup::new(&ctx, gens, None, Some(BackendKind::BallClosure)).unwrap();
        prop_assert_eq!(st.member(&ctx, &w).unwrap(), bc.member(&ctx, &w).unwrap());
    }

    #[test]
    fn larger_budgets_keep_yes(h in generators(2, 3), k in generators(2, 3)) {
        let ctx = f2();
        let h = Subgroup::new(&ctx, h, None, None).unwrap();
        let k = Subgroup::new(&ctx, k, None, None).unwrap();
        let small = decide_subgroup_conjugacy(&ctx, &h, &k, Budget::new(2, 3)).unwrap();
        let large = decide_subgroup_conjugacy(&ctx, &h, &k, Budget::new(4, 4)).unwrap();
        if small.verdict.witness().is_some() {
            prop_assert!(large.verdict.witness().is_some());
        }
    }

    #[test]
    fn solver_matches_oracle(h in generators(2, 3), k in generators(2, 3)) {
        let ctx = f2();
        let h = Subgroup::new(&ctx, h, None, None).unwrap();
        let k = Subgroup::new(&ctx, k, None, None).unwrap();
        let d = decide_subgroup_conjugacy(&ctx, &h, &k, Budget::new(3, 4)).unwrap();
        let o = oracle_brute_force(&ctx, &h, &k, 3, 4).unwrap();
        prop_assert_eq!(&d.verdict, &o.verdict);
        if let Verdict::Yes(w) = &d.verdict {
            prop_assert!(verify_witness(&ctx, &h, &k, w).unwrap());
        }
    }
}
