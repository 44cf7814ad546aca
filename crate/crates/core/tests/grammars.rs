//! Text round trips for every grammar: words, ordinals, sets and rationals.

use proptest::prelude::*;
use zw_core::{ExactRational, FiniteSet, Letter, LocatedWord, Ordinal, Profile};

fn arb_word() -> impl Strategy<Value = LocatedWord> {
    prop::collection::btree_map((-12i64..=12).prop_filter("nonzero", |p| *p != 0), 0u64..=12, 1..8).prop_map(|m| {
        let entries = m.into_iter().map(|(p, d)| {
            let d = d.min(p.unsigned_abs());
            if d == 0 {
                (p, Letter::Var)
            } else {
                (p, Letter::Sym(p.signum() * d as i64))
            }
        });
        LocatedWord::new(entries, Profile::Abs).unwrap()
    })
}

fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
    let leaf = (0u64..6).prop_map(Ordinal::nat);
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop::collection::vec((inner, 1u64..5), 1..4).prop_map(|mut terms| {
            terms.sort_by(|a, b| b.0.cmp(&a.0));
            terms.dedup_by(|a, b| a.0 == b.0);
            let parts: Vec<String> = terms
                .iter()
                .map(|(e, c)| format!("w^({e})*{c}"))
                .collect();
            parts.join("+").parse().unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn word_text_round_trip(w in arb_word()) {
        prop_assert_eq!(LocatedWord::parse(&w.to_string(), &Profile::Abs).unwrap(), w);
    }

    #[test]
    fn ordinal_text_round_trip(x in arb_ordinal()) {
        prop_assert_eq!(x.to_string().parse::<Ordinal>().unwrap(), x);
    }

    #[test]
    fn set_text_round_trip(s in prop::collection::btree_set(1u64..1000, 0..10)) {
        let set = FiniteSet::new(s.into_iter().collect()).unwrap();
        prop_assert_eq!(set.to_string().parse::<FiniteSet>().unwrap(), set);
    }

    #[test]
    fn rational_text_round_trip(p in -100_000i64..100_000, q in 1i64..10_000) {
        let r = ExactRational::new(p, q);
        prop_assert_eq!(r.to_string().parse::<ExactRational>().unwrap(), r);
    }
}

#[test]
fn non_canonical_inputs_normalize() {
    assert_eq!("4/6".parse::<ExactRational>().unwrap().to_string(), "2/3");
    assert_eq!("ω^2".parse::<Ordinal>().unwrap().to_string(), "w^2");
    assert_eq!(LocatedWord::parse("2:v, -1:-1", &Profile::Abs).unwrap().to_string(), "-1:-1,2:v");
}
