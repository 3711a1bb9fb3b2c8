//! Vital elements and constructive factorizations of antitone maps.
//!
//! A vital element of height `p ≥ 2` with image `y_1 < … < y_p` is the
//! injective antitone map on the run `y_p, …, y_p + p − 1` sending
//! `y_p + j ↦ y_{p−j}`. It is convex when the image is itself a run; the
//! convex vital element of height `p` centred at `i` sends `i + j ↦ i − j`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enumerate::ElementSet;
use crate::error::{Error, Result};
use crate::map::{ceil_half, PartialMap};
use crate::semigroup::{
    closure, word_for, ClosureOptions, GenerationTrace, ReesElement, ReesQuotient,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VitalElement {
    pub map: PartialMap,
    /// Image in increasing order.
    pub image: Vec<usize>,
    pub convex: bool,
    pub extreme: bool,
}

impl VitalElement {
    /// The unique vital element whose image is `image`.
    pub fn from_image(n: usize, image: &[usize]) -> Result<Self> {
        let mut y = image.to_vec();
        y.sort_unstable();
        y.dedup();
        let p = y.len();
        if p < 2 || p != image.len() {
            return Err(Error::domain(format!(
                "a vital element needs at least two distinct image points, got {image:?}"
            )));
        }
        if y[0] == 0 {
            return Err(Error::domain("image points start at 1"));
        }
        let top = y[p - 1];
        if top + p - 1 > n {
            return Err(Error::domain(format!(
                "image {y:?} admits no vital element on a chain of {n} points"
            )));
        }
        let pairs: Vec<(usize, usize)> = (0..p).map(|j| (top + j, y[p - 1 - j])).collect();
        let map = PartialMap::from_pairs(n, &pairs)?;
        let convex = top + 1 - y[0] == p;
        let extreme = convex && (top == p || top == n - p + 1);
        Ok(VitalElement {
            map,
            image: y,
            convex,
            extreme,
        })
    }

    /// The convex vital element `i + j ↦ i − j`, `0 ≤ j < p`.
    pub fn convex_at(n: usize, p: usize, i: usize) -> Result<Self> {
        if p < 2 || i < p || i + p > n + 1 {
            return Err(Error::domain(format!(
                "no convex vital element of height {p} at {i} on a chain of {n} points"
            )));
        }
        VitalElement::from_image(n, &((i + 1 - p)..=i).collect::<Vec<_>>())
    }

    /// Recognizes `map` as a vital element.
    pub fn recognize(map: &PartialMap) -> Option<Self> {
        let image = map.image();
        let v = VitalElement::from_image(map.n(), &image).ok()?;
        (v.map == *map).then_some(v)
    }

    pub fn height(&self) -> usize {
        self.image.len()
    }

    /// The largest image point, which is also the least domain point.
    pub fn top(&self) -> usize {
        *self.image.last().expect("height at least 2")
    }
}

impl fmt::Display for VitalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.map, f)
    }
}

pub fn is_vital(map: &PartialMap) -> bool {
    VitalElement::recognize(map).is_some()
}

/// All convex vital elements of height `p`, by increasing centre.
pub fn convex_vitals(n: usize, p: usize) -> Result<Vec<VitalElement>> {
    if p < 2 || p > ceil_half(n) {
        return Err(Error::domain(format!(
            "convex vital elements exist for heights 2..={}, got {p}",
            ceil_half(n)
        )));
    }
    (p..=n + 1 - p)
        .map(|i| VitalElement::convex_at(n, p, i))
        .collect()
}

/// The extreme convex vital elements of height `p` (one when `n = 2p − 1`).
pub fn extreme_vitals(n: usize, p: usize) -> Result<Vec<VitalElement>> {
    let mut out = convex_vitals(n, p)?;
    let last = out.len() - 1;
    let mut keep = vec![out.swap_remove(last)];
    if !out.is_empty() {
        keep.insert(0, out.swap_remove(0));
    }
    Ok(keep)
}

/// Every vital element on an `n`-chain, grouped by height then image.
pub fn all_vitals(n: usize) -> Vec<VitalElement> {
    let mut out = Vec::new();
    for p in 2..=ceil_half(n) {
        for mask in 1u32..(1 << n) {
            if mask.count_ones() as usize != p {
                continue;
            }
            let image: Vec<usize> = (1..=n).filter(|&x| mask >> (x - 1) & 1 == 1).collect();
            if let Ok(v) = VitalElement::from_image(n, &image) {
                out.push(v);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorTag {
    Idempotent,
    Vital,
    ConvexVital,
    IsotonePart,
}

impl fmt::Display for FactorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorTag::Idempotent => "idempotent",
            FactorTag::Vital => "vital",
            FactorTag::ConvexVital => "convex-vital",
            FactorTag::IsotonePart => "isotone-part",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub map: PartialMap,
    pub tag: FactorTag,
}

/// A product of tagged maps, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationWord {
    pub target: PartialMap,
    pub factors: Vec<Factor>,
}

impl FactorizationWord {
    fn new(target: PartialMap) -> Self {
        FactorizationWord {
            target,
            factors: Vec::new(),
        }
    }

    fn push(&mut self, map: PartialMap, tag: FactorTag) {
        self.factors.push(Factor { map, tag });
    }

    fn push_vital(&mut self, v: &VitalElement) {
        let tag = if v.convex {
            FactorTag::ConvexVital
        } else {
            FactorTag::Vital
        };
        self.push(v.map, tag);
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn maps(&self) -> Vec<PartialMap> {
        self.factors.iter().map(|f| f.map).collect()
    }

    /// Left-to-right composition of the factors.
    pub fn product(&self) -> Option<PartialMap> {
        let mut it = self.factors.iter();
        let first = it.next()?.map;
        Some(it.fold(first, |acc, f| acc.then(&f.map)))
    }

    pub fn recomposes(&self) -> bool {
        self.product() == Some(self.target)
    }

    pub fn count(&self, tag: FactorTag) -> usize {
        self.factors.iter().filter(|f| f.tag == tag).count()
    }
}

impl fmt::Display for FactorizationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.target)?;
        for (k, factor) in self.factors.iter().enumerate() {
            let sep = if k == 0 { " " } else { " · " };
            write!(f, "{sep}[{}] {}", factor.tag, factor.map)?;
        }
        Ok(())
    }
}

fn require_antitone(map: &PartialMap, what: &str) -> Result<()> {
    if !map.in_dorp() || !map.is_antitone() || map.height() < 2 {
        return Err(Error::domain(format!(
            "{what}: {map} is not a decreasing antitone map of height at least 2"
        )));
    }
    Ok(())
}

fn has_convex_domain(map: &PartialMap) -> bool {
    let dom = map.domain();
    match (dom.first(), dom.last()) {
        (Some(&lo), Some(&hi)) => hi + 1 - lo == dom.len(),
        _ => true,
    }
}

fn run_identity(n: usize, from: usize, len: usize) -> Result<PartialMap> {
    PartialMap::identity_on(n, from..from + len)
}

/// Writes an injective antitone map on a run as idempotents followed by the
/// vital element with the same image.
///
/// With domain `t, …, t + p − 1` and image `a_1 < … < a_p`, the word is the
/// identity on the domain, then for `i = 1..p` the idempotent fixing
/// `a_p, …, a_p + i − 2`, collapsing `{a_p + i − 1, t + i − 1}` to
/// `a_p + i − 1` and fixing `t + i, …, t + p − 1`, then the vital element.
pub fn factor_injective_antitone(map: &PartialMap) -> Result<FactorizationWord> {
    require_antitone(map, "factor_injective_antitone")?;
    if !map.is_injective() || !has_convex_domain(map) {
        return Err(Error::domain(format!(
            "factor_injective_antitone: {map} is not injective on a run"
        )));
    }
    let n = map.n();
    let a = map.image();
    let p = a.len();
    let t = map.domain()[0];
    let top = a[p - 1];
    let vital = VitalElement::from_image(n, &a)?;

    let mut word = FactorizationWord::new(*map);
    word.push(run_identity(n, t, p)?, FactorTag::Idempotent);
    for i in 1..=p {
        let mut pairs: Vec<(usize, usize)> = (top..top + i - 1).map(|x| (x, x)).collect();
        let hinge = top + i - 1;
        pairs.push((hinge, hinge));
        if t + i - 1 != hinge {
            pairs.push((t + i - 1, hinge));
        }
        pairs.extend((t + i..t + p).map(|x| (x, x)));
        pairs.sort_unstable();
        word.push(PartialMap::from_pairs(n, &pairs)?, FactorTag::Idempotent);
    }
    word.push_vital(&vital);
    Ok(word)
}

/// Writes any antitone map of height at least two as idempotents followed by
/// a factorization of an injective antitone map on a run.
///
/// With kernel blocks `A_1 < … < A_p` and `t_i = min A_i`, the word is the
/// idempotent `A_i ↦ t_i`, then idempotents sliding `t_{i+1}` down to
/// `t_1 + i`, then the factors of `t_1 + j ↦ a_{p−j}`.
pub fn factor_antitone(map: &PartialMap) -> Result<FactorizationWord> {
    require_antitone(map, "factor_antitone")?;
    if map.is_injective() && has_convex_domain(map) {
        return factor_injective_antitone(map);
    }
    let n = map.n();
    let kd = map.kernel_decomposition();
    let p = kd.len();
    let t: Vec<usize> = kd.blocks.iter().map(|b| b[0]).collect();
    let a = map.image();

    let mut word = FactorizationWord::new(*map);
    let collapse: Vec<(usize, usize)> = kd
        .blocks
        .iter()
        .flat_map(|b| b.iter().map(move |&x| (x, b[0])))
        .collect();
    word.push(PartialMap::from_pairs(n, &collapse)?, FactorTag::Idempotent);
    for i in 1..p {
        let mut pairs: Vec<(usize, usize)> = (t[0]..t[0] + i).map(|x| (x, x)).collect();
        pairs.extend((t[0] + i..=t[i]).map(|x| (x, t[0] + i)));
        pairs.extend(t[i + 1..].iter().map(|&x| (x, x)));
        word.push(PartialMap::from_pairs(n, &pairs)?, FactorTag::Idempotent);
    }
    let sigma_pairs: Vec<(usize, usize)> = (0..p).map(|j| (t[0] + j, a[p - 1 - j])).collect();
    let sigma = PartialMap::from_pairs(n, &sigma_pairs)?;
    word.factors
        .extend(factor_injective_antitone(&sigma)?.factors);
    Ok(word)
}

/// Words over the idempotents of one height for isotone maps of that height,
/// read off a closure in the Rees quotient at that height.
#[derive(Debug, Clone)]
pub struct IsotoneWordBook {
    n: usize,
    p: usize,
    trace: GenerationTrace<ReesElement>,
}

impl IsotoneWordBook {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        let gens: Vec<ReesElement> = idempotents_of_height(n, p)?
            .into_iter()
            .map(ReesElement::Map)
            .collect();
        let rule = ReesQuotient::new(n, p)?;
        let trace = closure(&gens, &rule, ClosureOptions::default())?;
        Ok(IsotoneWordBook { n, p, trace })
    }

    /// A word of idempotents of height `p` multiplying to `map`.
    pub fn word(&self, map: &PartialMap) -> Result<Vec<PartialMap>> {
        if map.n() != self.n || map.height() != self.p {
            return Err(Error::domain(format!(
                "word book for height {} on {} points cannot factor {map}",
                self.p, self.n
            )));
        }
        Ok(word_for(&ReesElement::Map(*map), &self.trace)?
            .into_iter()
            .filter_map(|e| e.as_map().copied())
            .collect())
    }
}

/// Splits a non-convex vital element into the convex vital element on the
/// same domain followed by an injective isotone map.
pub fn nonconvex_vital_split(map: &PartialMap) -> Result<(VitalElement, PartialMap)> {
    let v = VitalElement::recognize(map)
        .ok_or_else(|| Error::domain(format!("{map} is not a vital element")))?;
    if v.convex {
        return Err(Error::domain(format!("{map} is already convex")));
    }
    let n = map.n();
    let p = v.height();
    let top = v.top();
    let convex = VitalElement::convex_at(n, p, top)?;
    let pairs: Vec<(usize, usize)> = (0..p).map(|k| (top + 1 - p + k, v.image[k])).collect();
    Ok((convex, PartialMap::from_pairs(n, &pairs)?))
}

/// Factors a non-convex vital element as a convex vital element followed by
/// idempotents of the same height.
pub fn factor_nonconvex_vital(map: &PartialMap) -> Result<FactorizationWord> {
    let p = map.height();
    factor_nonconvex_vital_with(map, &IsotoneWordBook::new(map.n(), p)?)
}

pub fn factor_nonconvex_vital_with(
    map: &PartialMap,
    book: &IsotoneWordBook,
) -> Result<FactorizationWord> {
    let (convex, isotone) = nonconvex_vital_split(map)?;
    let mut word = FactorizationWord::new(*map);
    word.push_vital(&convex);
    for e in book.word(&isotone)? {
        word.push(e, FactorTag::Idempotent);
    }
    Ok(word)
}

/// Writes the non-extreme convex vital element of height `p` at `i` as the
/// convex vital element of height `p + 1` at `i` followed by the identity on
/// `i − p + 1, …, i + 1`.
pub fn deflate_convex_vital(n: usize, p: usize, i: usize) -> Result<(VitalElement, PartialMap)> {
    VitalElement::convex_at(n, p, i)?;
    if i == p || i == n + 1 - p {
        return Err(Error::ExtremeElement { p, i });
    }
    let c = ceil_half(n);
    if p + 1 > c {
        return Err(Error::domain(format!(
            "deflation needs 2 ≤ p ≤ {}, got p = {p}",
            c.saturating_sub(1)
        )));
    }
    let bigger = VitalElement::convex_at(n, p + 1, i)?;
    let idem = run_identity(n, i + 1 - p, p + 1)?;
    Ok((bigger, idem))
}

/// Idempotents of height `p`: each kernel block mapped to its least point.
pub fn idempotents_of_height(n: usize, p: usize) -> Result<Vec<PartialMap>> {
    crate::map::ChainSize::new(n)?;
    if p > n {
        return Err(Error::domain(format!("height {p} exceeds {n}")));
    }
    let mut out = Vec::new();
    for dom in 0u32..(1 << n) {
        let r = dom.count_ones() as usize;
        if r < p || (p == 0 && r > 0) {
            continue;
        }
        let points: Vec<usize> = (1..=n).filter(|&x| dom >> (x - 1) & 1 == 1).collect();
        if p == 0 {
            out.push(PartialMap::empty(n)?);
            continue;
        }
        // choose p − 1 cut positions among the r − 1 gaps
        for cuts in 0u32..(1 << (r - 1)) {
            if cuts.count_ones() as usize != p - 1 {
                continue;
            }
            let mut assignment = vec![None; n];
            let mut head = points[0];
            for (k, &x) in points.iter().enumerate() {
                if k > 0 && cuts >> (k - 1) & 1 == 1 {
                    head = x;
                }
                assignment[x - 1] = Some(head);
            }
            out.push(PartialMap::new(n, &assignment)?);
        }
    }
    out.sort();
    Ok(out)
}

/// The idempotents of height `p` as an element set.
pub fn idempotent_set(n: usize, p: usize) -> Result<ElementSet> {
    ElementSet::new(n, idempotents_of_height(n, p)?)
}

/// Factors any element of the monoid over idempotents and convex vital
/// elements.
///
/// Antitone maps of height at least two go through [`factor_antitone`], with
/// any non-convex vital factor expanded by [`factor_nonconvex_vital`]; other
/// elements are isotone and are written over idempotents of their height.
pub fn factorize(map: &PartialMap) -> Result<FactorizationWord> {
    if !map.in_dorp() {
        return Err(Error::domain(format!(
            "{map} is not monotone and decreasing"
        )));
    }
    let n = map.n();
    let mut books: HashMap<usize, IsotoneWordBook> = HashMap::new();
    let mut book = |p: usize| -> Result<IsotoneWordBook> {
        if let Some(b) = books.get(&p) {
            return Ok(b.clone());
        }
        let b = IsotoneWordBook::new(n, p)?;
        books.insert(p, b.clone());
        Ok(b)
    };
    if map.is_antitone() && map.height() >= 2 {
        let raw = factor_antitone(map)?;
        let mut word = FactorizationWord::new(*map);
        for f in raw.factors {
            if f.tag == FactorTag::Vital {
                let sub = factor_nonconvex_vital_with(&f.map, &book(f.map.height())?)?;
                word.factors.extend(sub.factors);
            } else {
                word.factors.push(f);
            }
        }
        return Ok(word);
    }
    let mut word = FactorizationWord::new(*map);
    if map.height() == 0 || map.is_idempotent() {
        word.push(*map, FactorTag::Idempotent);
        return Ok(word);
    }
    for e in book(map.height())?.word(map)? {
        word.push(e, FactorTag::Idempotent);
    }
    Ok(word)
}
