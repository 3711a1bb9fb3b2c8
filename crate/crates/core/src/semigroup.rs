//! Finite-semigroup machinery: subsemigroup closure with word recovery,
//! Rees-quotient arithmetic and Cayley tables over an explicit carrier.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::map::PartialMap;

/// A binary operation on `T`.
pub trait ProductRule<T>: Sync {
    fn product(&self, a: &T, b: &T) -> T;
}

/// Plain composition of partial maps (`ρσ`: apply `ρ` first).
#[derive(Debug, Clone, Copy, Default)]
pub struct Composition;

impl ProductRule<PartialMap> for Composition {
    #[inline]
    fn product(&self, a: &PartialMap, b: &PartialMap) -> PartialMap {
        a.then(b)
    }
}

/// An element of the Rees quotient `I(n,p)/I(n,p-1)`: either the zero or a
/// map of height exactly `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReesElement {
    Zero,
    Map(PartialMap),
}

impl ReesElement {
    pub fn as_map(&self) -> Option<&PartialMap> {
        match self {
            ReesElement::Zero => None,
            ReesElement::Map(m) => Some(m),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ReesElement::Zero)
    }
}

impl fmt::Display for ReesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReesElement::Zero => f.write_str("0"),
            ReesElement::Map(m) => fmt::Display::fmt(m, f),
        }
    }
}

impl FromStr for ReesElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "0" {
            Ok(ReesElement::Zero)
        } else {
            s.parse().map(ReesElement::Map)
        }
    }
}

impl Serialize for ReesElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReesElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Multiplication in `RQ_p(n)`: compose, and collapse to zero when the height
/// drops below `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReesQuotient {
    pub n: usize,
    pub p: usize,
}

impl ReesQuotient {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if p == 0 || p > n {
            return Err(Error::domain(format!(
                "Rees quotient height {p} outside 1..={n}"
            )));
        }
        Ok(ReesQuotient { n, p })
    }

    /// Wraps `map` as a nonzero element, checking its height.
    pub fn element(&self, map: PartialMap) -> Result<ReesElement> {
        if map.n() != self.n || map.height() != self.p {
            return Err(Error::domain(format!(
                "{map} is not an element of height {} on a {}-chain",
                self.p, self.n
            )));
        }
        Ok(ReesElement::Map(map))
    }
}

impl ProductRule<ReesElement> for ReesQuotient {
    #[inline]
    fn product(&self, a: &ReesElement, b: &ReesElement) -> ReesElement {
        match (a, b) {
            (ReesElement::Map(x), ReesElement::Map(y)) => {
                let c = x.then(y);
                if c.height() < self.p {
                    ReesElement::Zero
                } else {
                    ReesElement::Map(c)
                }
            }
            _ => ReesElement::Zero,
        }
    }
}

/// Checked product in `RQ_p(n)`.
pub fn rees_product(a: &ReesElement, b: &ReesElement, p: usize) -> Result<ReesElement> {
    let mut n = None;
    for e in [a, b] {
        if let ReesElement::Map(m) = e {
            if m.height() != p {
                return Err(Error::domain(format!("{m} does not have height {p}")));
            }
            if *n.get_or_insert(m.n()) != m.n() {
                return Err(Error::SizeMismatch {
                    left: n.unwrap(),
                    right: m.n(),
                });
            }
        }
    }
    let Some(n) = n else {
        return Ok(ReesElement::Zero);
    };
    Ok(ReesQuotient::new(n, p)?.product(a, b))
}

/// Knobs for [`closure`].
#[derive(Debug, Clone, Copy)]
pub struct ClosureOptions {
    pub cap: usize,
    pub track_parents: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            cap: 5_000_000,
            track_parents: true,
        }
    }
}

/// Result of a closure run.
///
/// Elements appear in discovery order: the generators (sorted), then each
/// round's new products. Every non-generator carries the pair of indices whose
/// product first produced it.
#[derive(Debug, Clone)]
pub struct GenerationTrace<T> {
    elements: Vec<T>,
    index: HashMap<T, usize>,
    parents: Vec<Option<(usize, usize)>>,
    generator_count: usize,
    rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub generator_count: usize,
    pub closure_size: usize,
    pub rounds: usize,
    pub capped: bool,
}

impl<T: Clone + Eq + Hash + Ord> GenerationTrace<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    /// Members in canonical (sorted) order.
    pub fn sorted(&self) -> Vec<T> {
        let mut v = self.elements.clone();
        v.sort();
        v
    }

    pub fn contains(&self, x: &T) -> bool {
        self.index.contains_key(x)
    }

    pub fn generators(&self) -> &[T] {
        &self.elements[..self.generator_count]
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// The recorded factor pair of a non-generator.
    pub fn parents_of(&self, x: &T) -> Option<(&T, &T)> {
        let i = *self.index.get(x)?;
        let (l, r) = self.parents.get(i).copied().flatten()?;
        Some((&self.elements[l], &self.elements[r]))
    }

    pub fn report(&self) -> ClosureReport {
        ClosureReport {
            generator_count: self.generator_count,
            closure_size: self.elements.len(),
            rounds: self.rounds,
            capped: false,
        }
    }
}

/// Least set containing `generators` and closed under `rule`.
///
/// Each round multiplies the newly found elements against everything found so
/// far, on both sides. Products of a round are computed in parallel and merged
/// in the sequential order, so the trace does not depend on the thread count.
pub fn closure<T, R>(generators: &[T], rule: &R, opts: ClosureOptions) -> Result<GenerationTrace<T>>
where
    T: Clone + Eq + Hash + Ord + Send + Sync,
    R: ProductRule<T>,
{
    if generators.is_empty() {
        return Err(Error::domain("closure needs at least one generator"));
    }
    let mut gens = generators.to_vec();
    gens.sort();
    gens.dedup();
    if gens.len() > opts.cap {
        return Err(Error::ResourceLimit {
            what: "closure size",
            limit: opts.cap,
            actual: gens.len(),
        });
    }
    let index: HashMap<T, usize> = gens
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, g)| (g, i))
        .collect();
    let mut trace = GenerationTrace {
        parents: vec![None; gens.len()],
        generator_count: gens.len(),
        elements: gens,
        index,
        rounds: 0,
    };
    let mut frontier = 0..trace.elements.len();
    while !frontier.is_empty() {
        trace.rounds += 1;
        let known = trace.elements.len();
        let elements = &trace.elements;
        let index = &trace.index;
        let found: Vec<Vec<(T, usize, usize)>> = frontier
            .clone()
            .into_par_iter()
            .map(|a| {
                let mut local = Vec::new();
                for b in 0..known {
                    for (l, r) in [(a, b), (b, a)] {
                        let c = rule.product(&elements[l], &elements[r]);
                        if !index.contains_key(&c) {
                            local.push((c, l, r));
                        }
                    }
                }
                local
            })
            .collect();
        let start = trace.elements.len();
        for (c, l, r) in found.into_iter().flatten() {
            if trace.index.contains_key(&c) {
                continue;
            }
            if trace.elements.len() >= opts.cap {
                return Err(Error::ResourceLimit {
                    what: "closure size",
                    limit: opts.cap,
                    actual: trace.elements.len() + 1,
                });
            }
            trace.index.insert(c.clone(), trace.elements.len());
            trace.elements.push(c);
            trace.parents.push(if opts.track_parents {
                Some((l, r))
            } else {
                None
            });
        }
        frontier = start..trace.elements.len();
    }
    Ok(trace)
}

/// A word over the generators whose product is `x`.
///
/// Unfolds the recorded parent pairs; a generator maps to itself.
pub fn word_for<T: Clone + Eq + Hash + Ord>(x: &T, trace: &GenerationTrace<T>) -> Result<Vec<T>> {
    let &i = trace.index.get(x).ok_or(Error::NotGenerated)?;
    let mut out = Vec::new();
    let mut stack = vec![i];
    while let Some(j) = stack.pop() {
        if j < trace.generator_count {
            out.push(trace.elements[j].clone());
            continue;
        }
        let (l, r) = trace.parents[j]
            .ok_or_else(|| Error::domain("closure was run without parent tracking"))?;
        // right factor pushed first so the left one is unfolded first
        stack.push(r);
        stack.push(l);
    }
    Ok(out)
}

/// Whether `generators` generate all of `carrier` under `rule`.
pub fn is_generating<T, R>(generators: &[T], carrier: &[T], rule: &R, cap: usize) -> Result<bool>
where
    T: Clone + Eq + Hash + Ord + Send + Sync,
    R: ProductRule<T>,
{
    let trace = closure(
        generators,
        rule,
        ClosureOptions {
            cap,
            track_parents: false,
        },
    )?;
    let mut want = carrier.to_vec();
    want.sort();
    want.dedup();
    Ok(trace.sorted() == want)
}

/// Multiplication table of a finite semigroup given by an explicit carrier.
///
/// Elements are addressed by their position in the sorted carrier.
#[derive(Debug, Clone)]
pub struct CayleyTable<T> {
    elements: Vec<T>,
    table: Vec<u32>,
}

impl<T> CayleyTable<T>
where
    T: Clone + Eq + Hash + Ord + Send + Sync + fmt::Display,
{
    /// Tabulates `rule` on `carrier`; fails if the carrier is not closed or
    /// exceeds `max_size` elements.
    pub fn build<R: ProductRule<T>>(carrier: &[T], rule: &R, max_size: usize) -> Result<Self> {
        let mut elements = carrier.to_vec();
        elements.sort();
        elements.dedup();
        let size = elements.len();
        if size > max_size {
            return Err(Error::ResourceLimit {
                what: "carrier size",
                limit: max_size,
                actual: size,
            });
        }
        let index: HashMap<&T, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i as u32))
            .collect();
        let rows: Vec<Result<Vec<u32>>> = (0..size)
            .into_par_iter()
            .map(|a| {
                (0..size)
                    .map(|b| {
                        let c = rule.product(&elements[a], &elements[b]);
                        index.get(&c).copied().ok_or_else(|| {
                            Error::domain(format!(
                                "carrier not closed: {} · {} = {c}",
                                elements[a], elements[b]
                            ))
                        })
                    })
                    .collect()
            })
            .collect();
        let mut table = Vec::with_capacity(size * size);
        for row in rows {
            table.extend(row?);
        }
        drop(index);
        Ok(CayleyTable { elements, table })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &T {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b] as usize
    }

    /// Indices of idempotents.
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.mul(e, e) == e).collect()
    }

    /// Elements admitting no factorization `g = ab` with `a ≠ g` and `b ≠ g`.
    ///
    /// Equivalently, `g ∉ ⟨S \ {g}⟩`: such elements lie in every generating set.
    pub fn irreducibles(&self) -> Vec<usize> {
        let size = self.len();
        let reducible: Vec<bool> = (0..size)
            .into_par_iter()
            .fold(
                || vec![false; size],
                |mut acc, a| {
                    for b in 0..size {
                        let c = self.mul(a, b);
                        if c != a && c != b {
                            acc[c] = true;
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![false; size],
                |mut x, y| {
                    x.iter_mut().zip(y).for_each(|(p, q)| *p |= q);
                    x
                },
            );
        (0..size).filter(|&g| !reducible[g]).collect()
    }

    /// Membership vector of the subsemigroup generated by `base ∪ extra`,
    /// where `base` is already closed (or empty).
    pub fn close_from(&self, base: &[bool], extra: &[usize]) -> Vec<bool> {
        let mut member = base.to_vec();
        let mut list: Vec<usize> = (0..self.len()).filter(|&i| member[i]).collect();
        let mut frontier: Vec<usize> = Vec::new();
        for &x in extra {
            if !member[x] {
                member[x] = true;
                list.push(x);
                frontier.push(x);
            }
        }
        while let Some(a) = frontier.pop() {
            let mut i = 0;
            while i < list.len() {
                let b = list[i];
                for c in [self.mul(a, b), self.mul(b, a)] {
                    if !member[c] {
                        member[c] = true;
                        list.push(c);
                        frontier.push(c);
                    }
                }
                i += 1;
            }
        }
        member
    }

    /// Membership vector of `⟨generators⟩`.
    pub fn generated(&self, generators: &[usize]) -> Vec<bool> {
        self.close_from(&vec![false; self.len()], generators)
    }
}
