use std::collections::BTreeMap;

use dorp_core::enumerate::{all_partial_maps, enumerate_dorp};
use dorp_core::vital::{all_vitals, convex_vitals, extreme_vitals, is_vital, VitalElement};
use dorp_core::{Bounds, PartialMap};

/// Injective antitone map of height at least two on an interval whose least
/// point is fixed.
fn vital_by_shape(m: &PartialMap) -> bool {
    let d = m.domain();
    m.height() >= 2
        && m.is_injective()
        && m.is_antitone()
        && d.windows(2).all(|w| w[1] == w[0] + 1)
        && m.get(d[0]) == Some(d[0])
}

#[test]
fn one_vital_per_antitone_lstar_class() {
    for n in 2..=6 {
        // image mask -> (vitals by shape, vitals by recognizer, has an antitone member)
        let mut classes: BTreeMap<u32, (usize, usize, bool)> = BTreeMap::new();
        for m in enumerate_dorp(n, &Bounds::default()).unwrap().iter() {
            if m.height() < 2 {
                continue;
            }
            let c = classes.entry(m.image_mask()).or_default();
            c.0 += vital_by_shape(m) as usize;
            c.1 += is_vital(m) as usize;
            c.2 |= m.is_antitone();
        }
        for (mask, (shape, recognized, antitone)) in classes {
            assert_eq!(shape, recognized, "n={n} image {mask:b}");
            assert_eq!(shape, antitone as usize, "n={n} image {mask:b}");
        }
    }
}

#[test]
fn vital_of_an_image() {
    let v = VitalElement::from_image(4, &[1, 3]).unwrap();
    assert_eq!(v.map, "n=4;3->3,4->1".parse().unwrap());
    assert!(!v.convex);
    assert!(VitalElement::from_image(4, &[1, 4]).is_err());
}

#[test]
fn constructed_vitals_have_the_vital_shape() {
    for n in 1..=8 {
        let vitals = all_vitals(n);
        for v in &vitals {
            let m = v.map;
            assert!(m.in_dorp() && m.is_injective() && m.is_antitone(), "{m}");
            assert!(vital_by_shape(&m), "{m}");
            assert_eq!(VitalElement::recognize(&m).as_ref(), Some(v));
        }
        if n <= 6 {
            let by_scan = all_partial_maps(n)
                .unwrap()
                .into_iter()
                .filter(vital_by_shape)
                .count();
            assert_eq!(vitals.len(), by_scan, "n={n}");
        }
    }
}

#[test]
fn convex_vitals_are_runs() {
    for n in 2usize..=12 {
        for p in 2..=n.div_ceil(2) {
            let m = convex_vitals(n, p).unwrap();
            assert_eq!(m.len(), n + 2 - 2 * p, "n={n} p={p}");
            for v in &m {
                let img = v.map.image();
                assert!(img.windows(2).all(|w| w[1] == w[0] + 1), "{}", v.map);
                assert_eq!(v.map.domain()[0], *img.last().unwrap());
            }
            let extremes = extreme_vitals(n, p).unwrap();
            let expected = if n + 1 == 2 * p { 1 } else { 2 };
            assert_eq!(extremes.len(), expected, "n={n} p={p}");
            assert!(extremes.iter().all(|e| e.extreme && m.contains(e)));
        }
    }
}
