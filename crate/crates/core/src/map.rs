//! Partial transformations of the chain `[n] = {1, …, n}`.
//!
//! A [`PartialMap`] stores its assignment inline (`0` marks an undefined
//! point), so values are `Copy`, hash cheaply and can be shared freely across
//! worker threads. Composition is right-handed: `x(ρσ) = ((x)ρ)σ`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest chain size a [`PartialMap`] can carry.
pub const MAX_N: usize = 16;

/// `⌈n/2⌉`, the largest height an antitone decreasing map can reach.
pub fn ceil_half(n: usize) -> usize {
    n.div_ceil(2)
}

/// Number of points in the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct ChainSize(u8);

impl TryFrom<usize> for ChainSize {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        ChainSize::new(n)
    }
}

impl From<ChainSize> for usize {
    fn from(n: ChainSize) -> usize {
        n.get()
    }
}

impl ChainSize {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidChainSize(n));
        }
        Ok(ChainSize(n as u8))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

/// Monotonicity and decrease flags of a partial map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapClass {
    pub isotone: bool,
    pub antitone: bool,
    pub decreasing: bool,
}

/// Kernel blocks `A_1 < … < A_p` (ordered by their elements) paired with the
/// image `a_i` each block is sent to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KernelDecomposition {
    pub blocks: Vec<Vec<usize>>,
    pub images: Vec<usize>,
}

impl KernelDecomposition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Whether every block is an interval of the domain once undefined points
    /// are skipped, i.e. no block interleaves with another.
    pub fn is_convex_modulo_domain(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0].last() < w[1].first())
    }
}

/// A partial self-map of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartialMap {
    n: u8,
    img: [u8; MAX_N],
}

impl PartialMap {
    /// Builds a map from a length-`n` assignment where `assignment[x - 1]` is
    /// the image of `x`.
    pub fn new(n: usize, assignment: &[Option<usize>]) -> Result<Self> {
        let size = ChainSize::new(n)?;
        if assignment.len() != n {
            return Err(Error::SizeMismatch {
                left: n,
                right: assignment.len(),
            });
        }
        let mut map = PartialMap::empty_sized(size);
        for (i, v) in assignment.iter().enumerate() {
            if let Some(v) = *v {
                map.set(i + 1, v)?;
            }
        }
        Ok(map)
    }

    /// Builds a map from `(source, target)` pairs, 1-indexed.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut map = PartialMap::empty_sized(ChainSize::new(n)?);
        for &(x, v) in pairs {
            if x == 0 || x > n {
                return Err(Error::ValueOutOfRange {
                    point: x,
                    value: v,
                    n,
                });
            }
            map.set(x, v)?;
        }
        Ok(map)
    }

    fn set(&mut self, x: usize, v: usize) -> Result<()> {
        let n = self.n();
        if v == 0 || v > n {
            return Err(Error::ValueOutOfRange {
                point: x,
                value: v,
                n,
            });
        }
        self.img[x - 1] = v as u8;
        Ok(())
    }

    fn empty_sized(n: ChainSize) -> Self {
        PartialMap {
            n: n.0,
            img: [0; MAX_N],
        }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Ok(PartialMap::empty_sized(ChainSize::new(n)?))
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut map = PartialMap::empty(n)?;
        for x in 1..=n {
            map.img[x - 1] = x as u8;
        }
        Ok(map)
    }

    /// The partial identity on `points`.
    pub fn identity_on(n: usize, points: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut map = PartialMap::empty(n)?;
        for x in points {
            if x == 0 || x > n {
                return Err(Error::ValueOutOfRange {
                    point: x,
                    value: x,
                    n,
                });
            }
            map.img[x - 1] = x as u8;
        }
        Ok(map)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn chain_size(&self) -> ChainSize {
        ChainSize(self.n)
    }

    /// Image of `x`, if defined.
    #[inline]
    pub fn get(&self, x: usize) -> Option<usize> {
        match self.img.get(x.wrapping_sub(1)) {
            Some(&v) if v != 0 && x <= self.n() => Some(v as usize),
            _ => None,
        }
    }

    /// Defined `(x, xρ)` pairs in increasing order of `x`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.img[..self.n()]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i + 1, v as usize))
    }

    pub fn assignment(&self) -> Vec<Option<usize>> {
        (1..=self.n()).map(|x| self.get(x)).collect()
    }

    pub fn domain(&self) -> Vec<usize> {
        self.pairs().map(|(x, _)| x).collect()
    }

    /// Image set in increasing order.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = [false; MAX_N + 1];
        for (_, v) in self.pairs() {
            seen[v] = true;
        }
        (1..=self.n()).filter(|&v| seen[v]).collect()
    }

    /// Bitmask of the image (bit `v - 1` set for each image point).
    pub fn image_mask(&self) -> u32 {
        self.pairs().fold(0, |m, (_, v)| m | 1 << (v - 1))
    }

    /// Bitmask of the domain.
    pub fn domain_mask(&self) -> u32 {
        self.pairs().fold(0, |m, (x, _)| m | 1 << (x - 1))
    }

    /// `|im ρ|`.
    pub fn height(&self) -> usize {
        self.image_mask().count_ones() as usize
    }

    /// `|dom ρ|`.
    pub fn width(&self) -> usize {
        self.pairs().count()
    }

    /// Fixed points in increasing order.
    pub fn fix(&self) -> Vec<usize> {
        self.pairs()
            .filter(|(x, v)| x == v)
            .map(|(x, _)| x)
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs().next().is_none()
    }

    /// `ρσ` (apply `self` first), or a size-mismatch error.
    pub fn compose(&self, other: &PartialMap) -> Result<PartialMap> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(self.then(other))
    }

    /// `ρσ` for maps already known to share `n`.
    ///
    /// # Panics
    /// Panics if the chain sizes differ.
    #[inline]
    pub fn then(&self, other: &PartialMap) -> PartialMap {
        assert_eq!(self.n, other.n, "composing maps on different chains");
        let mut out = PartialMap {
            n: self.n,
            img: [0; MAX_N],
        };
        for i in 0..self.n() {
            let v = self.img[i];
            if v != 0 {
                out.img[i] = other.img[v as usize - 1];
            }
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        self.then(self) == *self
    }

    pub fn is_decreasing(&self) -> bool {
        self.pairs().all(|(x, v)| v <= x)
    }

    pub fn is_isotone(&self) -> bool {
        let vals: Vec<usize> = self.pairs().map(|(_, v)| v).collect();
        vals.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_antitone(&self) -> bool {
        let vals: Vec<usize> = self.pairs().map(|(_, v)| v).collect();
        vals.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_injective(&self) -> bool {
        self.height() == self.width()
    }

    pub fn classify(&self) -> MapClass {
        MapClass {
            isotone: self.is_isotone(),
            antitone: self.is_antitone(),
            decreasing: self.is_decreasing(),
        }
    }

    /// Membership in the monoid of monotone, order-decreasing partial maps.
    pub fn in_dorp(&self) -> bool {
        let c = self.classify();
        c.decreasing && (c.isotone || c.antitone)
    }

    /// Partition of the domain by equal image, blocks listed in increasing
    /// order of their minimum.
    pub fn kernel_decomposition(&self) -> KernelDecomposition {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut images: Vec<usize> = Vec::new();
        for (x, v) in self.pairs() {
            match images.iter().position(|&a| a == v) {
                Some(i) => blocks[i].push(x),
                None => {
                    blocks.push(vec![x]);
                    images.push(v);
                }
            }
        }
        KernelDecomposition { blocks, images }
    }

    /// Kernel as a list of domain bitmasks, ordered by block minimum.
    pub fn kernel_masks(&self) -> Vec<u32> {
        self.kernel_decomposition()
            .blocks
            .iter()
            .map(|b| b.iter().fold(0u32, |m, &x| m | 1 << (x - 1)))
            .collect()
    }

    /// The map with the same kernel blocks and the image written in the
    /// opposite order, when it stays inside the monoid.
    ///
    /// Returns `Ok(None)` when the reversal leaves the monoid, i.e. unless
    /// `max im ρ ≤ min dom ρ` and `p ≤ ⌈n/2⌉`.
    pub fn reverse(&self) -> Result<Option<PartialMap>> {
        if !self.in_dorp() {
            return Err(Error::domain("reverse: map is not monotone and decreasing"));
        }
        let kd = self.kernel_decomposition();
        let p = kd.len();
        if p == 0 {
            return Err(Error::domain(
                "reverse: the empty map has no image to reverse",
            ));
        }
        let max_image = *kd.images.iter().max().expect("nonempty");
        let min_domain = kd.blocks[0][0];
        if max_image > min_domain || p > ceil_half(self.n()) {
            return Ok(None);
        }
        let mut out = PartialMap::empty_sized(self.chain_size());
        for (block, &a) in kd.blocks.iter().zip(kd.images.iter().rev()) {
            for &x in block {
                out.img[x - 1] = a as u8;
            }
        }
        Ok(Some(out))
    }

    /// A partial map `ρ′` with `ρρ′ρ = ρ`, `ρρ′` idempotent in the monoid and
    /// `ρ′ρ = 1_{im ρ}`.
    ///
    /// Each image point is sent back to the minimum of its preimage block. For
    /// an isotone map this is `a_i ↦ min A_i`; for an antitone map the blocks
    /// are matched in reverse, `a_i ↦ min A_{p-i+1}`, which is the same rule.
    pub fn inverse_witness(&self) -> Result<PartialMap> {
        if !self.in_dorp() {
            return Err(Error::domain(
                "inverse_witness: map is not monotone and decreasing",
            ));
        }
        let kd = self.kernel_decomposition();
        let mut out = PartialMap::empty_sized(self.chain_size());
        for (block, &a) in kd.blocks.iter().zip(&kd.images) {
            out.img[a - 1] = block[0] as u8;
        }
        Ok(out)
    }

    /// Restriction of the map to the points in `mask`.
    pub fn restrict(&self, mask: u32) -> PartialMap {
        let mut out = *self;
        for i in 0..self.n() {
            if mask & (1 << i) == 0 {
                out.img[i] = 0;
            }
        }
        out
    }
}

impl Ord for PartialMap {
    /// Lexicographic on the list of defined `(x, xρ)` pairs; for `n ≤ 9` this
    /// matches byte order of the literal form.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.pairs().cmp(other.pairs()))
    }
}

impl PartialOrd for PartialMap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.n)?;
        for (i, (x, v)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}->{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Option<usize> {
    let canonical =
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if canonical {
        s.parse().ok()
    } else {
        None
    }
}

impl FromStr for PartialMap {
    type Err = Error;

    fn from_str(literal: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            literal: literal.to_string(),
            reason: reason.to_string(),
        };
        let rest = literal
            .strip_prefix("n=")
            .ok_or_else(|| fail("expected `n=` prefix"))?;
        let (n_str, pairs) = rest.split_once(';').ok_or_else(|| fail("missing `;`"))?;
        let n = parse_int(n_str).ok_or_else(|| fail("bad chain size"))?;
        let mut map = PartialMap::empty_sized(ChainSize::new(n)?);
        if pairs.is_empty() {
            return Ok(map);
        }
        let mut last = 0;
        for pair in pairs.split(',') {
            let (src, dst) = pair
                .split_once("->")
                .ok_or_else(|| fail("expected `<src>-><dst>`"))?;
            let x = parse_int(src).ok_or_else(|| fail("bad source"))?;
            let v = parse_int(dst).ok_or_else(|| fail("bad target"))?;
            if x <= last {
                return Err(fail("sources must be strictly increasing"));
            }
            if x > n {
                return Err(Error::ValueOutOfRange {
                    point: x,
                    value: v,
                    n,
                });
            }
            map.set(x, v)?;
            last = x;
        }
        Ok(map)
    }
}

impl Serialize for PartialMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PartialMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
