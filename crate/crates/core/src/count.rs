//! Exact counting formulas, evaluated with arbitrary-precision integers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::map::ceil_half;

/// `C(a, b)`, taken to be zero whenever `b < 0` or `b > a` (and for `a < 0`).
pub fn binomial(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

fn c(a: usize, b: usize) -> BigUint {
    binomial(a as i64, b as i64)
}

fn ci(a: i64, b: i64) -> BigUint {
    binomial(a, b)
}

/// Large Schröder number `s_n`, the order of the isotone part.
pub fn schroder(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    let sum: BigUint = (0..=n).map(|r| c(n + 1, n - r) * c(n + r, r)).sum();
    let d = BigUint::from(n + 1);
    debug_assert!((&sum % &d).is_zero());
    sum / d
}

/// Number of antitone decreasing maps of width `r` and height `p`:
/// `C(r-1, p-1) · C(n+1, r+p)`.
pub fn count_f(n: usize, r: usize, p: usize) -> BigUint {
    ci(r as i64 - 1, p as i64 - 1) * c(n + 1, r + p)
}

/// Number of antitone decreasing maps of height `p`, summed over widths
/// `p ≤ r ≤ n-p+1`. Zero once `p > ⌈n/2⌉`.
pub fn count_fp(n: usize, p: usize) -> BigUint {
    let hi = (n + 1) as i64 - p as i64;
    (p as i64..=hi).map(|r| count_f(n, r as usize, p)).sum()
}

/// `a_n`: antitone decreasing maps of height `2..=⌈n/2⌉`.
pub fn count_a(n: usize) -> BigUint {
    (2..=ceil_half(n)).map(|p| count_fp(n, p)).sum()
}

/// `|DORP_n| = s_n + a_n`.
pub fn order_dorp(n: usize) -> BigUint {
    schroder(n) + count_a(n)
}

/// Both sides of `Σ_{j=k}^{m} C(j,k)·C(m+n-j, n) = C(m+n+1, n+k+1)`.
pub fn binomial_identity_sides(m: usize, n: usize, k: usize) -> (BigUint, BigUint) {
    let lhs: BigUint = (k..=m).map(|j| c(j, k) * c(m + n - j, n)).sum();
    let rhs = c(m + n + 1, n + k + 1);
    (lhs, rhs)
}

pub fn binomial_identity_check(m: usize, n: usize, k: usize) -> bool {
    let (l, r) = binomial_identity_sides(m, n, k);
    l == r
}

/// `(3^n + 1) / 2`, the number of idempotents.
pub fn idempotent_count_formula(n: usize) -> BigUint {
    (BigUint::from(3u32).pow(n as u32) + 1u32) / 2u32
}

/// `Σ_{r=p}^{n} C(n,r)·C(r-1,p-1)`: ordered partitions of a subset of `[n]`
/// into `p` convex blocks. Counts R*-classes (and idempotents) of height `p`.
pub fn rstar_class_count(n: usize, p: usize) -> BigUint {
    (p..=n)
        .map(|r| c(n, r) * ci(r as i64 - 1, p as i64 - 1))
        .sum()
}

/// `C(n, p)`: L*-classes of height `p`.
pub fn lstar_class_count(n: usize, p: usize) -> BigUint {
    c(n, p)
}

/// `|M(p)| = n - 2p + 2` for `2 ≤ p ≤ ⌈n/2⌉`, zero elsewhere.
pub fn convex_vital_count(n: usize, p: usize) -> usize {
    if p >= 2 && p <= ceil_half(n) {
        n + 2 - 2 * p
    } else {
        0
    }
}

/// `(n+2)(⌈n/2⌉-1) - (⌈n/2⌉(⌈n/2⌉+1) - 2)`, the total number of convex vital
/// elements over all heights.
pub fn convex_vital_total_formula(n: usize) -> BigInt {
    let n = BigInt::from(n);
    let h = (&n + 1u32) / 2u32;
    (&n + 2u32) * (&h - 1u32) - (&h * (&h + 1u32) - 2u32)
}

/// Which table a [`CountTable`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Schroder,
    F,
    Fp,
    A,
    Order,
    Idempotents,
    Mp,
}

impl TableKind {
    pub const ALL: [TableKind; 7] = [
        TableKind::Schroder,
        TableKind::F,
        TableKind::Fp,
        TableKind::A,
        TableKind::Order,
        TableKind::Idempotents,
        TableKind::Mp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Schroder => "schroder",
            TableKind::F => "f",
            TableKind::Fp => "fp",
            TableKind::A => "a",
            TableKind::Order => "order",
            TableKind::Idempotents => "idempotents",
            TableKind::Mp => "mp",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        TableKind::ALL.into_iter().find(|k| k.name() == s)
    }

    fn has_r(self) -> bool {
        self == TableKind::F
    }

    fn has_p(self) -> bool {
        matches!(self, TableKind::F | TableKind::Fp | TableKind::Mp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(with = "decimal")]
    pub value: BigUint,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rows of one counting table for chain sizes `1..=max_n` (`0..=max_n` for
/// the Schröder numbers).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub schema: u32,
    pub table: TableKind,
    pub rows: Vec<CountRow>,
}

impl CountTable {
    pub fn build(table: TableKind, max_n: usize) -> CountTable {
        let mut rows = Vec::new();
        let row = |n, r, p, value| CountRow { n, r, p, value };
        let start = if table == TableKind::Schroder { 0 } else { 1 };
        for n in start..=max_n {
            match table {
                TableKind::Schroder => rows.push(row(n, None, None, schroder(n))),
                TableKind::A => rows.push(row(n, None, None, count_a(n))),
                TableKind::Order => rows.push(row(n, None, None, order_dorp(n))),
                TableKind::Idempotents => {
                    rows.push(row(n, None, None, idempotent_count_formula(n)))
                }
                TableKind::F => {
                    for r in 1..=n {
                        for p in 1..=r {
                            rows.push(row(n, Some(r), Some(p), count_f(n, r, p)));
                        }
                    }
                }
                TableKind::Fp => {
                    for p in 1..=ceil_half(n) {
                        rows.push(row(n, None, Some(p), count_fp(n, p)));
                    }
                }
                TableKind::Mp => {
                    for p in 2..=ceil_half(n) {
                        rows.push(row(
                            n,
                            None,
                            Some(p),
                            BigUint::from(convex_vital_count(n, p)),
                        ));
                    }
                }
            }
        }
        CountTable {
            schema: 1,
            table,
            rows,
        }
    }

    /// CSV with the table's own key columns, e.g. `n,r,p,value` for `F` and
    /// `n,value` for the single-index sequences.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["n"];
        if self.table.has_r() {
            header.push("r");
        }
        if self.table.has_p() {
            header.push("p");
        }
        header.push("value");
        let mut out = header.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut cells = vec![row.n.to_string()];
            if self.table.has_r() {
                cells.push(row.r.map(|v| v.to_string()).unwrap_or_default());
            }
            if self.table.has_p() {
                cells.push(row.p.map(|v| v.to_string()).unwrap_or_default());
            }
            cells.push(row.value.to_string());
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn values(&self) -> impl Iterator<Item = &BigUint> {
        self.rows.iter().map(|r| &r.value)
    }
}

/// Convenience for small values in tests and reports.
pub fn to_u64(v: &BigUint) -> u64 {
    v.to_u64().expect("value fits in u64")
}
