use std::sync::OnceLock;

use dorp_core::enumerate::{enumerate_dorp, enumerate_jstar};
use dorp_core::semigroup::{closure, ClosureOptions, ProductRule};
use dorp_core::{Bounds, Composition, PartialMap, ReesElement, ReesQuotient};
use proptest::prelude::*;

fn monoid(n: usize) -> &'static [PartialMap] {
    static SETS: OnceLock<Vec<Vec<PartialMap>>> = OnceLock::new();
    let sets = SETS.get_or_init(|| {
        (0..=6)
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    enumerate_dorp(n, &Bounds::default()).unwrap().into_vec()
                }
            })
            .collect()
    });
    &sets[n]
}

fn member(n: usize) -> impl Strategy<Value = PartialMap> {
    (0..monoid(n).len()).prop_map(move |i| monoid(n)[i])
}

fn triple() -> impl Strategy<Value = (PartialMap, PartialMap, PartialMap)> {
    (1usize..=6).prop_flat_map(|n| (member(n), member(n), member(n)))
}

fn any_partial_map() -> impl Strategy<Value = PartialMap> {
    (1usize..=9).prop_flat_map(|n| {
        prop::collection::vec(prop::option::of(1..=n), n)
            .prop_map(move |a| PartialMap::new(n, &a).unwrap())
    })
}

proptest! {
    #[test]
    fn composition_is_associative_and_closed((a, b, c) in triple()) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert!(a.then(&b).in_dorp());
        prop_assert!(a.then(&b).height() <= a.height().min(b.height()));
    }

    #[test]
    fn literals_round_trip(m in any_partial_map()) {
        let text = m.to_string();
        prop_assert_eq!(text.parse::<PartialMap>().unwrap(), m);
    }

    #[test]
    fn closure_is_idempotent(gens in (2usize..=5).prop_flat_map(|n| prop::collection::vec(member(n), 1..4))) {
        let once = closure(&gens, &Composition, ClosureOptions::default()).unwrap().sorted();
        let twice = closure(&once, &Composition, ClosureOptions::default()).unwrap().sorted();
        prop_assert_eq!(&once, &twice);
        for g in &gens {
            prop_assert!(once.contains(g));
        }
    }
}

#[test]
fn rees_product_is_associative_and_matches_truncation() {
    for n in 1..=4 {
        for p in 1..=n {
            let rule = ReesQuotient::new(n, p).unwrap();
            let mut carrier: Vec<ReesElement> = enumerate_jstar(n, p, &Bounds::default())
                .unwrap()
                .into_vec()
                .into_iter()
                .map(ReesElement::Map)
                .collect();
            carrier.push(ReesElement::Zero);
            let truncated = |a: &ReesElement, b: &ReesElement| match (a.as_map(), b.as_map()) {
                (Some(x), Some(y)) if x.then(y).height() == p => ReesElement::Map(x.then(y)),
                _ => ReesElement::Zero,
            };
            for a in &carrier {
                for b in &carrier {
                    let ab = rule.product(a, b);
                    assert_eq!(ab, truncated(a, b), "n={n} p={p} {a} {b}");
                    for c in &carrier {
                        assert_eq!(rule.product(&ab, c), rule.product(a, &rule.product(b, c)));
                    }
                }
            }
        }
    }
}
