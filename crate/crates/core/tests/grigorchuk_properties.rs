use marked_groups::grigorchuk::{is_trivial, order_of, portrait_of, sections, OmegaWord, Order};
use marked_groups::words::{klein_reduce, Gen, GenWord};
use proptest::prelude::*;

/// Leaf permutations of the generators at a fixed depth, computed from the
/// recursive definitions `b_ω = (β(ω₀), b_{τω})` and so on.
struct LeafAction {
    depth: usize,
    perms: [Vec<u32>; 4],
}

impl LeafAction {
    fn new(omega: &OmegaWord, depth: usize) -> Self {
        let table = |g: Gen, s: u8| match g {
            Gen::B => s != 2,
            Gen::C => s != 1,
            Gen::D => s != 0,
            Gen::A => unreachable!(),
        };
        let perm = |g: Gen| -> Vec<u32> {
            (0..1u32 << depth)
                .map(|leaf| {
                    let bit = |i: usize| (leaf >> (depth - 1 - i)) & 1;
                    let flip = |i: usize| leaf ^ (1 << (depth - 1 - i));
                    if g == Gen::A {
                        return flip(0);
                    }
                    match (0..depth).find(|&i| bit(i) == 0) {
                        Some(i) if i + 1 < depth && table(g, omega.symbol(i)) => flip(i + 1),
                        _ => leaf,
                    }
                })
                .collect()
        };
        LeafAction { depth, perms: [perm(Gen::A), perm(Gen::B), perm(Gen::C), perm(Gen::D)] }
    }

    fn fixes_all(&self, w: &GenWord) -> bool {
        (0..1u32 << self.depth).all(|leaf| w.letters().iter().fold(leaf, |x, &g| self.perms[g as usize][x as usize]) == leaf)
    }
}

fn gen_word(max_len: usize) -> impl Strategy<Value = GenWord> {
    prop::collection::vec(0..4u8, 0..=max_len).prop_map(|v| GenWord(v.into_iter().map(Gen::from_index).collect()))
}

fn omega() -> impl Strategy<Value = OmegaWord> {
    (prop::collection::vec(0..3u8, 0..4), prop::collection::vec(0..3u8, 2..5))
        .prop_filter_map("eventually constant", |(pre, per)| {
            OmegaWord::new(pre, per).ok().filter(|o| !o.is_eventually_constant())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn contraction_matches_leaf_action(w in gen_word(16), om in omega()) {
        let leaves = LeafAction::new(&om, 12);
        prop_assert_eq!(is_trivial(&w, &om).unwrap(), leaves.fixes_all(&w));
    }

    #[test]
    fn triviality_is_a_congruence(u in gen_word(10), v in gen_word(10), om in omega()) {
        let tu = is_trivial(&u, &om).unwrap();
        let tv = is_trivial(&v, &om).unwrap();
        if tu && tv {
            prop_assert!(is_trivial(&u.concat(&v), &om).unwrap());
        }
        // conjugation preserves the verdict
        prop_assert_eq!(is_trivial(&u.conj(&v), &om).unwrap(), tu);
        prop_assert!(is_trivial(&v.concat(&v.inverse()), &om).unwrap());
    }

    #[test]
    fn portraits_respect_equality(u in gen_word(10), v in gen_word(10), om in omega()) {
        let same = is_trivial(&u.concat(&v.inverse()), &om).unwrap();
        if same {
            prop_assert_eq!(portrait_of(&u, &om, 8), portrait_of(&v, &om, 8));
        }
    }

    #[test]
    fn sections_halve_length(w in gen_word(40), om in omega()) {
        let w = klein_reduce(&w);
        if w.count_a().is_multiple_of(2) {
            let (w0, w1) = sections(&w, &om).unwrap();
            prop_assert!(w0.len() + w1.len() <= w.len() + 1);
        }
    }

    #[test]
    fn defining_relations(om in omega()) {
        for r in ["aa", "bb", "cc", "dd", "bcd", "dcb"] {
            prop_assert!(is_trivial(&GenWord::parse(r).unwrap(), &om).unwrap());
        }
    }

    #[test]
    fn orders_are_powers_of_two(w in gen_word(8)) {
        let om: OmegaWord = "(012)".parse().unwrap();
        match order_of(&w, &om, 6).unwrap() {
            Order::Exact(n) => prop_assert!(n.is_power_of_two()),
            Order::Unknown => prop_assert!(false, "order beyond 2^6 for a short word"),
        }
    }
}

// Sections of `d^{(ab)^n}` in the approximants `G_{0^k (012)^∞}`: the identity
// and `d^{(ab)^j}` for `n = 2j`, `d^{(ab)^j a}` and the identity for `n = 2j+1`.
#[test]
fn sections_of_conjugated_d() {
    let d = GenWord::parse("d").unwrap();
    let ab = GenWord::parse("ab").unwrap();
    let a = GenWord::parse("a").unwrap();
    for k in 1..=5 {
        let om = OmegaWord::zeros_then_012(k);
        let tail = om.shift();
        let same = |u: &GenWord, v: &GenWord| is_trivial(&u.concat(&v.inverse()), &tail).unwrap();
        for n in 0..=6 {
            let (w0, w1) = sections(&d.conj(&ab.pow(n)), &om).unwrap();
            let j = n / 2;
            let (e0, e1) = if n % 2 == 0 {
                (GenWord::new(), d.conj(&ab.pow(j)))
            } else {
                (d.conj(&ab.pow(j).concat(&a)), GenWord::new())
            };
            assert!(same(&w0, &e0) && same(&w1, &e1), "k={k} n={n}");
        }
    }
}
