//! Randomised checks of invariants that the exhaustive suites cover only
//! for small sizes.

use proptest::prelude::*;

use slidebij::bijection::{last, tree_of_word, word_of};
use slidebij::caterpillar::{caterpillar_member, caterpillar_member_by_labeling, word_stats};
use slidebij::compositions::{asym_multinomial, derive, is_reverse_catalan, maxzero, multinomial, AsymMemo};
use slidebij::parking::{cpf_to_slide, ParkingFunction};
use slidebij::patterns::{contains_vincular, reduce, Pattern, VincularPattern};
use slidebij::trees::enumerate_trivalent;
use slidebij::{enumerate_slide_set, is_member, slide_labeling, Composition, LeafLabel, Maxzero, SlideRule, StableTree, Word};

/// A word of length `1..=max_n` over `1..=n`.
fn word(max_n: usize) -> impl Strategy<Value = Word> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(1..=n as u32, n)).prop_map(Word::new)
}

fn composition(max_n: usize) -> impl Strategy<Value = Composition> {
    word(max_n).prop_map(|w| w.content().unwrap())
}

fn reverse_catalan(max_n: usize) -> impl Strategy<Value = Composition> {
    composition(max_n).prop_filter("reverse Catalan", is_reverse_catalan)
}

/// A member of `Slide^rule(k)` picked by index.
fn member(max_n: usize, rule: SlideRule) -> impl Strategy<Value = (Composition, StableTree)> {
    (reverse_catalan(max_n), any::<prop::sample::Index>()).prop_map(move |(k, idx)| {
        let set = enumerate_slide_set(&k, rule).unwrap();
        let t = idx.get(&set).clone();
        (k, t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn asym_is_positive_exactly_on_reverse_catalan(k in composition(8)) {
        let a = asym_multinomial(&k).unwrap();
        prop_assert_eq!(a > 0u32.into(), is_reverse_catalan(&k));
        prop_assert!(a <= multinomial(&k));
    }

    #[test]
    fn asym_recursion_is_consistent(k in reverse_catalan(8)) {
        let mut memo = AsymMemo::new();
        let z = maxzero(&k);
        let sum = (1..=k.len())
            .filter(|&j| Maxzero::At(j) > z && k.get(j) > 0)
            .map(|j| memo.get(&derive(&k, j).unwrap()).unwrap())
            .fold(0u32.into(), |acc: num_bigint::BigUint, x| acc + x);
        prop_assert_eq!(sum, asym_multinomial(&k).unwrap());
    }

    #[test]
    fn omega_members_round_trip_through_words((k, t) in member(6, SlideRule::Omega)) {
        let w = word_of(&t, &k).unwrap();
        prop_assert_eq!(w.content().unwrap(), k.clone());
        prop_assert_eq!(tree_of_word(&w).unwrap(), t.clone());
        prop_assert!(is_member(&t, &k, SlideRule::Psi).unwrap());
        let j = last(&t, &k).unwrap();
        prop_assert_eq!(Some(j), w.last().map(LeafLabel::Num));
    }

    #[test]
    fn labels_lie_between_their_leaf_and_a((k, t) in member(6, SlideRule::Psi)) {
        let g = t.graph();
        let lab = slide_labeling(&t, &k, SlideRule::Psi).unwrap().into_labeling().unwrap();
        let mut content = vec![0u32; k.len()];
        for v in g.internal_edges() {
            let l = lab.label(v).unwrap();
            content[l as usize - 1] += 1;
            prop_assert!(g.leaves(v).contains(LeafLabel::Num(l)));
        }
        prop_assert_eq!(content.as_slice(), k.parts());
    }

    #[test]
    fn tree_text_round_trips(idx in any::<prop::sample::Index>(), n in 0u32..=5) {
        let trees = enumerate_trivalent(n);
        let t = idx.get(&trees);
        prop_assert!(t.is_canonical());
        prop_assert_eq!(&t.to_string().parse::<StableTree>().unwrap(), t);
    }

    #[test]
    fn word_and_composition_text_round_trip(w in word(12)) {
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w.clone());
        let k = w.content().unwrap();
        prop_assert_eq!(k.to_string().parse::<Composition>().unwrap(), k);
    }

    #[test]
    fn caterpillar_predicate_matches_labeling(w in word(7)) {
        for rule in [SlideRule::Omega, SlideRule::Psi] {
            prop_assert_eq!(caterpillar_member(&w, rule), caterpillar_member_by_labeling(&w, rule), "{} under {}", w, rule);
        }
        if caterpillar_member(&w, SlideRule::Omega) {
            prop_assert!(caterpillar_member(&w, SlideRule::Psi));
        }
    }

    #[test]
    fn big_repeats_never_exceed_total(w in word(10), pick in any::<prop::sample::Index>()) {
        let letter = *pick.get(w.letters());
        let s = word_stats(&w, letter).unwrap();
        prop_assert!(s.big_rep <= s.total_rep);
        prop_assert!(s.ell >= 1);
    }

    #[test]
    fn reduction_preserves_order(w in word(10)) {
        let r = reduce(&w).unwrap();
        prop_assert_eq!(reduce(&r).unwrap(), r.clone());
        let (l, rl) = (w.letters(), r.letters());
        for p in 0..l.len() {
            for q in 0..l.len() {
                prop_assert_eq!(l[p].cmp(&l[q]), rl[p].cmp(&rl[q]));
            }
        }
    }

    #[test]
    fn vincular_containment_is_monotone_in_adjacency(w in word(7)) {
        // Dropping an adjacency requirement can only find more occurrences.
        let strict = VincularPattern::new(vec![2, 3, 1], vec![true, false]);
        let loose = VincularPattern::classical(vec![2, 3, 1]);
        if contains_vincular(&w, &strict) {
            prop_assert!(contains_vincular(&w, &loose));
        }
        let parsed: Pattern = "23-1".parse().unwrap();
        prop_assert_eq!(parsed.is_avoided_by(&w), !contains_vincular(&w, &strict));
    }

    #[test]
    fn column_restricted_functions_give_slide_trees(w in word(6)) {
        if let Ok(p) = ParkingFunction::from_word(&w) {
            prop_assert_eq!(p.to_string().parse::<ParkingFunction>().unwrap(), p.clone());
            for x in 1..=p.n() as u32 {
                prop_assert!(p.dominance_index(x) < p.n());
            }
            if p.is_cpf() {
                let t = cpf_to_slide(&p).unwrap();
                let k = p.composition();
                prop_assert!(is_member(&t, &k, SlideRule::Omega).unwrap());
                prop_assert_eq!(word_of(&t, &k).unwrap(), w.reversed());
            } else {
                prop_assert!(cpf_to_slide(&p).is_err());
            }
        }
    }
}
