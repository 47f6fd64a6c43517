use marked_groups::circle_product::{
    commutator_trivial, gp_reduce, in_difference_set, racg_matrix_oracle, ts_adjacent, w_multiply, GPWord, SSpec,
    WElement,
};
use proptest::prelude::*;

fn spec() -> impl Strategy<Value = SSpec> {
    (1u32..=3).prop_map(|m| SSpec::corrected(m).unwrap())
}

fn gp_word(modulus: u32, max_syll: usize) -> impl Strategy<Value = GPWord> {
    prop::collection::vec((0i64..9, 1i64..modulus as i64), 0..=max_syll)
        .prop_map(move |s| GPWord::new(modulus, s).unwrap())
}

fn adj(spec: SSpec) -> impl Fn(i64, i64) -> bool + Copy {
    move |a, b| a != b && in_difference_set(a - b, &spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn reduction_is_a_congruence(s in spec(), n in 2u32..4, u in gp_word(3, 10), v in gp_word(3, 10)) {
        let u = GPWord::new(n, u.syllables().iter().map(|&(a, e)| (a, e as i64))).unwrap();
        let v = GPWord::new(n, v.syllables().iter().map(|&(a, e)| (a, e as i64))).unwrap();
        let whole = gp_reduce(&u.concat(&v).unwrap(), adj(s)).unwrap();
        let parts = gp_reduce(
            &gp_reduce(&u, adj(s)).unwrap().concat(&gp_reduce(&v, adj(s)).unwrap()).unwrap(),
            adj(s),
        )
        .unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn reduction_matches_reflections(s in spec(), w in gp_word(2, 12)) {
        let empty = gp_reduce(&w, adj(s)).unwrap().is_empty();
        prop_assert_eq!(empty, racg_matrix_oracle(&w, 0..=8, adj(s)).unwrap());
    }

    #[test]
    fn reduction_commutes_with_translation(s in spec(), w in gp_word(2, 12), z in -20i64..20) {
        prop_assert_eq!(
            gp_reduce(&w, adj(s)).unwrap().translate(z),
            gp_reduce(&w.translate(z), adj(s)).unwrap()
        );
    }

    #[test]
    fn formal_inverse_cancels(s in spec(), w in gp_word(3, 10), z in -5i64..5) {
        let g = WElement { word: w, shift: z };
        prop_assert!(w_multiply(&g, &g.formal_inverse(), &s).unwrap().is_identity());
    }

    #[test]
    fn adjacency_follows_translates(s in spec(), g in -30i64..30, i in 0usize..12, j in 0usize..12) {
        let a = marked_groups::circle_product::build_s_sequence(&s, 12);
        if i != j {
            prop_assert!(ts_adjacent(a[i] + g, a[j] + g, &s).unwrap());
        }
    }
}

#[test]
fn commutators_follow_the_difference_set() {
    for m in 1..=3 {
        let s = SSpec::corrected(m).unwrap();
        for i in (-15i64..=15).filter(|&i| i != 0) {
            let predicted = ts_adjacent(0, -i, &s).unwrap();
            assert_eq!(commutator_trivial(i, &s, 2).unwrap(), predicted, "m={m} i={i}");
            assert_eq!(predicted, i.abs() != m as i64);
        }
    }
}
