//! Enumerators for the monoid and its ideals.
//!
//! `all_partial_maps` is the brute-force substrate used by the oracles; the
//! monoid itself is generated directly (domain, then convex kernel blocks,
//! then an admissible image chain) so it never visits the `(n+1)^n` maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{ChainSize, PartialMap};

/// Size caps for the enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest `n` for which all `(n+1)^n` partial maps may be listed.
    pub oracle: usize,
    /// Largest `n` for which the monoid may be generated directly.
    pub direct: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            oracle: 7,
            direct: 9,
        }
    }
}

fn check_bound(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::ResourceLimit {
            what,
            limit,
            actual: n,
        });
    }
    Ok(())
}

/// A deduplicated set of maps on one chain, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSet {
    n: ChainSize,
    members: Vec<PartialMap>,
}

impl ElementSet {
    /// Collects `maps`, sorting and deduplicating them.
    pub fn new(n: usize, maps: impl IntoIterator<Item = PartialMap>) -> Result<Self> {
        let size = ChainSize::new(n)?;
        let mut members: Vec<PartialMap> = maps.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| m.n() != n) {
            return Err(Error::SizeMismatch {
                left: n,
                right: bad.n(),
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(ElementSet { n: size, members })
    }

    pub fn n(&self) -> usize {
        self.n.get()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[PartialMap] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PartialMap> {
        self.members.iter()
    }

    pub fn contains(&self, map: &PartialMap) -> bool {
        self.index_of(map).is_some()
    }

    pub fn index_of(&self, map: &PartialMap) -> Option<usize> {
        self.members.binary_search(map).ok()
    }

    pub fn filter(&self, mut keep: impl FnMut(&PartialMap) -> bool) -> ElementSet {
        ElementSet {
            n: self.n,
            members: self.members.iter().copied().filter(|m| keep(m)).collect(),
        }
    }

    pub fn union(&self, other: &ElementSet) -> Result<ElementSet> {
        ElementSet::new(
            self.n(),
            self.members.iter().chain(other.members.iter()).copied(),
        )
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    pub fn into_vec(self) -> Vec<PartialMap> {
        self.members
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a PartialMap;
    type IntoIter = std::slice::Iter<'a, PartialMap>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Streams every partial map of `[n]` once, in canonical order.
///
/// Canonical order is a preorder walk: a map's pair list is a prefix of all
/// maps listed after it until the next sibling.
#[derive(Debug, Clone)]
pub struct AllPartialMaps {
    n: usize,
    current: PartialMap,
    // defined (x, v) pairs of `current`, in increasing x
    stack: Vec<(usize, usize)>,
    started: bool,
    done: bool,
}

impl AllPartialMaps {
    fn assign(&mut self) {
        let pairs: Vec<(usize, usize)> = self.stack.clone();
        self.current = PartialMap::from_pairs(self.n, &pairs).expect("pairs in range");
    }

    fn advance(&mut self) -> bool {
        let last_x = self.stack.last().map_or(0, |&(x, _)| x);
        if last_x < self.n {
            self.stack.push((last_x + 1, 1));
            return true;
        }
        while let Some((x, v)) = self.stack.pop() {
            if v < self.n {
                self.stack.push((x, v + 1));
                return true;
            }
            if x < self.n {
                self.stack.push((x + 1, 1));
                return true;
            }
        }
        false
    }
}

impl Iterator for AllPartialMaps {
    type Item = PartialMap;

    fn next(&mut self) -> Option<PartialMap> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.advance() {
                self.done = true;
                return None;
            }
            self.assign();
        }
        self.started = true;
        Some(self.current)
    }
}

/// All `(n+1)^n` partial maps, subject to the oracle bound.
pub fn enumerate_all_partial_maps(n: usize, bounds: &Bounds) -> Result<AllPartialMaps> {
    ChainSize::new(n)?;
    check_bound("oracle enumeration", n, bounds.oracle)?;
    Ok(AllPartialMaps {
        n,
        current: PartialMap::empty(n)?,
        stack: Vec::new(),
        started: false,
        done: false,
    })
}

/// Shorthand for collecting [`enumerate_all_partial_maps`] with default bounds.
pub fn all_partial_maps(n: usize) -> Result<Vec<PartialMap>> {
    Ok(enumerate_all_partial_maps(n, &Bounds::default())?.collect())
}

/// Which monotone decreasing maps to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    /// Isotone maps (the large Schröder monoid).
    Isotone,
    /// Antitone maps.
    Antitone,
    /// Both.
    All,
}

fn for_each_composition(len: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    // cut positions 1..len, strictly increasing, parts-1 of them
    fn rec(
        start: usize,
        len: usize,
        left: usize,
        cuts: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if left == 0 {
            f(cuts);
            return;
        }
        for c in start..len {
            if len - c < left {
                break;
            }
            cuts.push(c);
            rec(c + 1, len, left - 1, cuts, f);
            cuts.pop();
        }
    }
    let mut cuts = Vec::with_capacity(parts);
    rec(1, len, parts - 1, &mut cuts, f);
}

fn for_each_isotone_chain(mins: &[usize], f: &mut dyn FnMut(&[usize])) {
    // a_1 < … < a_p with a_i ≤ mins[i]
    fn rec(i: usize, lo: usize, mins: &[usize], acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == mins.len() {
            f(acc);
            return;
        }
        for a in lo..=mins[i] {
            acc.push(a);
            rec(i + 1, a + 1, mins, acc, f);
            acc.pop();
        }
    }
    rec(0, 1, mins, &mut Vec::with_capacity(mins.len()), f);
}

fn for_each_subset(of: usize, size: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(lo: usize, of: usize, left: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if left == 0 {
            f(acc);
            return;
        }
        for a in lo..=of {
            if of - a + 1 < left {
                break;
            }
            acc.push(a);
            rec(a + 1, of, left - 1, acc, f);
            acc.pop();
        }
    }
    rec(1, of, size, &mut Vec::with_capacity(size), f);
}

/// Generates the chosen part of the monoid directly, without filtering.
///
/// Maps are built by choosing the domain (its minimum `w` first), splitting it
/// into consecutive blocks, and assigning an image chain that respects the
/// decreasing condition. Antitone maps of height ≤ 1 are isotone as well and
/// are emitted only once.
pub fn generate_monotone(n: usize, part: Part, bounds: &Bounds) -> Result<Vec<PartialMap>> {
    ChainSize::new(n)?;
    check_bound("direct enumeration", n, bounds.direct)?;
    let mut out = vec![PartialMap::empty(n)?];
    let iso = matches!(part, Part::Isotone | Part::All);
    let anti = matches!(part, Part::Antitone | Part::All);
    let mut assignment = vec![None; n];
    for w in 1..=n {
        // remaining domain points are chosen from w+1..=n
        for rest_mask in 0u32..(1 << (n - w)) {
            let domain: Vec<usize> = std::iter::once(w)
                .chain(
                    (0..n - w)
                        .filter(|b| rest_mask & (1 << b) != 0)
                        .map(|b| w + 1 + b),
                )
                .collect();
            let r = domain.len();
            for p in 1..=r {
                for_each_composition(r, p, &mut |cuts| {
                    let mut bounds_at = Vec::with_capacity(p + 1);
                    bounds_at.push(0);
                    bounds_at.extend_from_slice(cuts);
                    bounds_at.push(r);
                    let blocks: Vec<&[usize]> =
                        bounds_at.windows(2).map(|b| &domain[b[0]..b[1]]).collect();
                    let mut emit = |images: &[usize]| {
                        assignment.iter_mut().for_each(|a| *a = None);
                        for (block, &a) in blocks.iter().zip(images) {
                            for &x in block.iter() {
                                assignment[x - 1] = Some(a);
                            }
                        }
                        out.push(PartialMap::new(n, &assignment).expect("valid assignment"));
                    };
                    let include_iso = iso || (anti && p == 1);
                    if include_iso {
                        let mins: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
                        for_each_isotone_chain(&mins, &mut |chain| emit(chain));
                    }
                    if anti && p >= 2 {
                        // all images ≤ w, assigned in decreasing order
                        for_each_subset(w, p, &mut |set| {
                            let rev: Vec<usize> = set.iter().rev().copied().collect();
                            emit(&rev);
                        });
                    }
                });
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The monoid of all monotone, order-decreasing partial maps of `[n]`.
pub fn enumerate_dorp(n: usize, bounds: &Bounds) -> Result<ElementSet> {
    ElementSet::new(n, generate_monotone(n, Part::All, bounds)?)
}

/// Isotone decreasing maps (the large Schröder monoid).
pub fn enumerate_ls(n: usize, bounds: &Bounds) -> Result<ElementSet> {
    ElementSet::new(n, generate_monotone(n, Part::Isotone, bounds)?)
}

/// Antitone decreasing maps, including the empty map and height-1 maps.
pub fn enumerate_drp(n: usize, bounds: &Bounds) -> Result<ElementSet> {
    ElementSet::new(n, generate_monotone(n, Part::Antitone, bounds)?)
}

fn check_height(n: usize, p: usize) -> Result<()> {
    if p > n {
        return Err(Error::domain(format!("height {p} is outside 0..={n}")));
    }
    Ok(())
}

/// The ideal of maps of height at most `p`.
pub fn enumerate_ideal(n: usize, p: usize, bounds: &Bounds) -> Result<ElementSet> {
    check_height(n, p)?;
    Ok(enumerate_dorp(n, bounds)?.filter(|m| m.height() <= p))
}

/// Maps of height exactly `p`.
pub fn enumerate_jstar(n: usize, p: usize, bounds: &Bounds) -> Result<ElementSet> {
    check_height(n, p)?;
    Ok(enumerate_dorp(n, bounds)?.filter(|m| m.height() == p))
}
