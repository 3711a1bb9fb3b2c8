use std::collections::BTreeSet;

use dorp_core::enumerate::{enumerate_dorp, enumerate_ideal, enumerate_jstar};
use dorp_core::map::ceil_half;
use dorp_core::rank::{generating_set_g, generating_set_w, monoid_generating_set};
use dorp_core::semigroup::{closure, ClosureOptions};
use dorp_core::vital::VitalElement;
use dorp_core::{Bounds, Composition, PartialMap, ReesElement, ReesQuotient};

fn generated(gens: &[PartialMap]) -> BTreeSet<PartialMap> {
    closure(gens, &Composition, ClosureOptions::default())
        .unwrap()
        .sorted()
        .into_iter()
        .collect()
}

fn set(maps: impl IntoIterator<Item = PartialMap>) -> BTreeSet<PartialMap> {
    maps.into_iter().collect()
}

#[test]
fn quotient_generators_generate() {
    for n in 1..=6 {
        for p in 1..=n {
            let rule = ReesQuotient::new(n, p).unwrap();
            let gens: Vec<ReesElement> = generating_set_g(n, p)
                .unwrap()
                .into_vec()
                .into_iter()
                .map(ReesElement::Map)
                .collect();
            let got: BTreeSet<ReesElement> = closure(&gens, &rule, ClosureOptions::default())
                .unwrap()
                .sorted()
                .into_iter()
                .collect();
            let mut want: BTreeSet<ReesElement> = enumerate_jstar(n, p, &Bounds::default())
                .unwrap()
                .into_vec()
                .into_iter()
                .map(ReesElement::Map)
                .collect();
            want.insert(ReesElement::Zero);
            // products may or may not reach the zero when p = n
            let got_maps: BTreeSet<_> = got.iter().filter(|x| !x.is_zero()).collect();
            let want_maps: BTreeSet<_> = want.iter().filter(|x| !x.is_zero()).collect();
            assert_eq!(got_maps, want_maps, "n={n} p={p}");
        }
    }
}

#[test]
fn ideal_and_monoid_generators_generate() {
    for n in 2..=6 {
        for p in 0..n {
            let w = generating_set_w(n, p).unwrap().into_vec();
            assert_eq!(
                generated(&w),
                set(enumerate_ideal(n, p, &Bounds::default())
                    .unwrap()
                    .into_vec()),
                "n={n} p={p}"
            );
        }
        let gens = monoid_generating_set(n).unwrap().into_vec();
        assert_eq!(
            generated(&gens),
            set(enumerate_dorp(n, &Bounds::default()).unwrap().into_vec()),
            "n={n}"
        );
    }
}

#[test]
fn each_height_descends_from_the_next() {
    // the top class holds only the identity, so descent starts one level lower
    for n in 3..=6 {
        for p in 1..=n - 2 {
            let mut gens = enumerate_jstar(n, p + 1, &Bounds::default())
                .unwrap()
                .into_vec();
            if (2..=ceil_half(n)).contains(&p) {
                for i in [p, n - p + 1] {
                    gens.push(VitalElement::convex_at(n, p, i).unwrap().map);
                }
            }
            let reach = generated(&gens);
            for x in enumerate_jstar(n, p, &Bounds::default()).unwrap().iter() {
                assert!(reach.contains(x), "n={n} p={p}: {x} not reached");
            }
        }
    }
}

#[test]
fn extremes_are_needed_inside_the_middle_range() {
    // without the extreme convex vitals the next height does not reach them
    for n in 4..=6 {
        for p in 2..=ceil_half(n) {
            let reach = generated(
                &enumerate_jstar(n, p + 1, &Bounds::default())
                    .unwrap()
                    .into_vec(),
            );
            let extreme = VitalElement::convex_at(n, p, p).unwrap().map;
            assert!(!reach.contains(&extreme), "n={n} p={p}");
        }
    }
}
