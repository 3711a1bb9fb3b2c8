//! Generating sets, closed-form ranks and closure-backed rank certificates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::count::rstar_class_count;
use crate::enumerate::{enumerate_dorp, enumerate_ideal, enumerate_jstar, Bounds, ElementSet};
use crate::error::{Error, Result};
use crate::greens::Classifiable;
use crate::map::{ceil_half, PartialMap};
use crate::semigroup::{
    closure, CayleyTable, ClosureOptions, Composition, ProductRule, ReesElement, ReesQuotient,
};
use crate::vital::{convex_vitals, extreme_vitals, idempotents_of_height};

/// Convex vital elements of height `p` followed by the idempotents of that
/// height; just the idempotents outside `2..=⌈n/2⌉`.
pub fn generating_set_g(n: usize, p: usize) -> Result<ElementSet> {
    if p < 1 || p > n {
        return Err(Error::domain(format!("G(p) needs 1 ≤ p ≤ {n}, got {p}")));
    }
    let mut maps = idempotents_of_height(n, p)?;
    if (2..=ceil_half(n)).contains(&p) {
        maps.extend(convex_vitals(n, p)?.into_iter().map(|v| v.map));
    }
    ElementSet::new(n, maps)
}

fn lower_extremes(n: usize, below: usize) -> Result<Vec<PartialMap>> {
    let mut out = Vec::new();
    for i in 2..below {
        out.extend(extreme_vitals(n, i)?.into_iter().map(|v| v.map));
    }
    Ok(out)
}

/// Generating set of the ideal of maps of height at most `p`.
pub fn generating_set_w(n: usize, p: usize) -> Result<ElementSet> {
    if n == 0 || p >= n {
        return Err(Error::domain(format!(
            "W(p) needs 0 ≤ p ≤ {}, got {p}",
            n.saturating_sub(1)
        )));
    }
    let c = ceil_half(n);
    let maps = match p {
        0 | 1 => idempotents_of_height(n, p)?,
        _ if p <= c => {
            let mut maps = generating_set_g(n, p)?.into_vec();
            maps.extend(lower_extremes(n, p)?);
            maps
        }
        _ => {
            let mut maps = idempotents_of_height(n, p)?;
            maps.extend(convex_vitals(n, c)?.into_iter().map(|v| v.map));
            maps.extend(lower_extremes(n, c)?);
            maps
        }
    };
    ElementSet::new(n, maps)
}

/// `W(n − 1)` together with the identity.
pub fn monoid_generating_set(n: usize) -> Result<ElementSet> {
    if n < 2 {
        return Err(Error::domain(
            "rank of the monoid is only claimed for n ≥ 2",
        ));
    }
    let mut maps = generating_set_w(n, n - 1)?.into_vec();
    maps.push(PartialMap::identity(n)?);
    ElementSet::new(n, maps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankObject {
    /// Rees quotient at height `p`.
    Rq,
    /// Ideal of maps of height at most `p`.
    Ideal,
    /// The whole monoid.
    Dorp,
}

impl RankObject {
    pub fn name(self) -> &'static str {
        match self {
            RankObject::Rq => "rq",
            RankObject::Ideal => "ideal",
            RankObject::Dorp => "dorp",
        }
    }
}

impl fmt::Display for RankObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RankObject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rq" => Ok(RankObject::Rq),
            "ideal" => Ok(RankObject::Ideal),
            "dorp" => Ok(RankObject::Dorp),
            _ => Err(Error::domain(format!(
                "unknown rank object `{s}` (rq, ideal, dorp)"
            ))),
        }
    }
}

pub fn rank_rq(n: usize, p: usize) -> Result<BigUint> {
    if p < 1 || p > n {
        return Err(Error::domain(format!(
            "Rees quotient rank needs 1 ≤ p ≤ {n}, got {p}"
        )));
    }
    let mut r = rstar_class_count(n, p);
    if (2..=ceil_half(n)).contains(&p) {
        r += BigUint::from(n + 2 - 2 * p);
    }
    Ok(r)
}

pub fn rank_ideal(n: usize, p: usize) -> Result<BigUint> {
    if n == 0 || p >= n {
        return Err(Error::domain(format!(
            "ideal rank needs 0 ≤ p ≤ {}, got {p}",
            n.saturating_sub(1)
        )));
    }
    Ok(match p {
        0 => BigUint::one(),
        1 => (BigUint::one() << n) - 1u32,
        _ => rstar_class_count(n, p) + BigUint::from(n - 2),
    })
}

pub fn rank_dorp(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::domain(
            "rank of the monoid is only claimed for n ≥ 2",
        ));
    }
    Ok(BigUint::from(3 * n - 2))
}

pub fn rank_formula(object: RankObject, n: usize, p: Option<usize>) -> Result<BigUint> {
    let need_p = || p.ok_or_else(|| Error::domain(format!("rank of {object} needs p")));
    match object {
        RankObject::Rq => rank_rq(n, need_p()?),
        RankObject::Ideal => rank_ideal(n, need_p()?),
        RankObject::Dorp => rank_dorp(n),
    }
}

/// Outcome of the exact rank search on a tabulated semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRank {
    /// Indices of elements with no factorization into two other elements.
    pub irreducibles: Vec<usize>,
    /// A smallest set of extra elements that, with the irreducibles,
    /// generates everything.
    pub completion: Vec<usize>,
    /// Number of candidates left after dominance pruning.
    pub candidates: usize,
    pub rank: usize,
}

/// Largest number of candidate subsets the completion search will try.
pub const COMPLETION_LIMIT: usize = 2_000_000;

/// Irreducible elements of a tabulated semigroup, leaving out `zero`.
pub fn irreducible_indices<T>(table: &CayleyTable<T>, zero: Option<usize>) -> Vec<usize>
where
    T: Clone + Eq + std::hash::Hash + Ord + Send + Sync + fmt::Display,
{
    table
        .irreducibles()
        .into_iter()
        .filter(|&g| Some(g) != zero)
        .collect()
}

/// Exact rank of a tabulated semigroup, ignoring an adjoined `zero`.
///
/// Every generating set contains the irreducibles `N`, so the rank is
/// `|N| + k` for the least `k` such that some `k` further elements finish the
/// job. Candidates are restricted to one representative of each maximal
/// class of the preorder `x ≤ y ⇔ x ∈ ⟨⟨N⟩ ∪ {y}⟩`, which loses nothing since
/// replacing a chosen element by one above it can only enlarge the closure.
pub fn exact_rank<T>(table: &CayleyTable<T>, zero: Option<usize>) -> Result<ExactRank>
where
    T: Clone + Eq + std::hash::Hash + Ord + Send + Sync + fmt::Display,
{
    let size = table.len();
    let irreducibles = irreducible_indices(table, zero);
    let base = table.generated(&irreducibles);
    let missing: Vec<usize> = (0..size).filter(|&x| !base[x] && Some(x) != zero).collect();
    if missing.is_empty() {
        return Ok(ExactRank {
            rank: irreducibles.len(),
            irreducibles,
            completion: Vec::new(),
            candidates: 0,
        });
    }
    let reach: Vec<Vec<bool>> = missing
        .par_iter()
        .map(|&y| table.close_from(&base, &[y]))
        .collect();
    let mut candidates: Vec<usize> = Vec::new();
    for (a, &y) in missing.iter().enumerate() {
        let maximal = missing
            .iter()
            .enumerate()
            .all(|(b, &z)| !reach[b][y] || reach[a][z]);
        // the least member of an equivalence class represents it
        let least = missing
            .iter()
            .enumerate()
            .take_while(|&(b, _)| b < a)
            .all(|(b, &z)| !(reach[a][z] && reach[b][y]));
        if maximal && least {
            candidates.push(y);
        }
    }
    let covers = |chosen: &[usize]| {
        let got = table.close_from(&base, chosen);
        missing.iter().all(|&x| got[x])
    };
    for k in 1..=candidates.len() {
        let combos = combinations(candidates.len(), k, COMPLETION_LIMIT)?;
        let hit = combos.par_iter().find_first(|idx| {
            let chosen: Vec<usize> = idx.iter().map(|&i| candidates[i]).collect();
            covers(&chosen)
        });
        if let Some(idx) = hit {
            let completion: Vec<usize> = idx.iter().map(|&i| candidates[i]).collect();
            return Ok(ExactRank {
                rank: irreducibles.len() + completion.len(),
                irreducibles,
                completion,
                candidates: candidates.len(),
            });
        }
    }
    Err(Error::domain(
        "completion search exhausted without generating the carrier",
    ))
}

fn combinations(len: usize, k: usize, limit: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if out.len() >= limit {
            return Err(Error::ResourceLimit {
                what: "completion subsets",
                limit,
                actual: out.len() + 1,
            });
        }
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == len - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return Ok(out);
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Knobs for [`certify_rank`].
#[derive(Debug, Clone, Copy)]
pub struct RankOptions {
    pub closure_cap: usize,
    /// Largest carrier for which a multiplication table is built.
    pub table_limit: usize,
    /// Run the exact completion search on top of the irreducible count.
    pub exact: bool,
    pub bounds: Bounds,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            closure_cap: ClosureOptions::default().cap,
            table_limit: 2000,
            exact: true,
            bounds: Bounds::default(),
        }
    }
}

/// Closure-backed evidence for a rank value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub object: RankObject,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    pub formula_rank: u64,
    pub generators: Vec<String>,
    pub generator_count: usize,
    pub closure_size: usize,
    pub carrier_size: usize,
    /// The generators' closure (with the zero, for a Rees quotient) is the
    /// whole carrier.
    pub generated: bool,
    pub irreducible_count: Option<usize>,
    pub exact_rank: Option<usize>,
    /// Elements added to the irreducibles by the exact search.
    pub completion: Vec<String>,
    pub pass: bool,
}

impl RankCertificate {
    /// The best proven lower bound on the rank.
    pub fn lower_bound(&self) -> Option<usize> {
        self.exact_rank.or(self.irreducible_count)
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("certificate serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }
}

struct Instance<T> {
    carrier: Vec<T>,
    generators: Vec<T>,
    zero: Option<T>,
}

fn certify_with<T, R>(
    object: RankObject,
    n: usize,
    p: Option<usize>,
    inst: Instance<T>,
    rule: &R,
    opts: &RankOptions,
) -> Result<RankCertificate>
where
    T: Classifiable,
    R: ProductRule<T>,
{
    let formula = crate::count::to_u64(&rank_formula(object, n, p)?);
    let trace = closure(
        &inst.generators,
        rule,
        ClosureOptions {
            cap: opts.closure_cap,
            track_parents: false,
        },
    )?;
    let mut got = trace.sorted();
    if let Some(z) = &inst.zero {
        if !got.contains(z) {
            got.push(z.clone());
            got.sort();
        }
    }
    let mut carrier = inst.carrier;
    carrier.sort();
    carrier.dedup();
    let generated = got == carrier;

    let (mut irreducible_count, mut exact, mut completion) = (None, None, Vec::new());
    if carrier.len() <= opts.table_limit {
        let table = CayleyTable::build(&carrier, rule, opts.table_limit)?;
        let zero = inst.zero.as_ref().and_then(|z| table.index_of(z));
        if opts.exact {
            let er = exact_rank(&table, zero)?;
            irreducible_count = Some(er.irreducibles.len());
            exact = Some(er.rank);
            completion = er
                .completion
                .iter()
                .map(|&i| table.element(i).to_string())
                .collect();
        } else {
            irreducible_count = Some(irreducible_indices(&table, zero).len());
        }
    }
    let generator_count = inst.generators.len();
    let lower = exact.or(irreducible_count);
    let pass =
        generated && generator_count as u64 == formula && lower.map(|l| l as u64) == Some(formula);
    Ok(RankCertificate {
        object,
        n,
        p,
        formula_rank: formula,
        generators: inst.generators.iter().map(ToString::to_string).collect(),
        generator_count,
        closure_size: trace.len(),
        carrier_size: carrier.len(),
        generated,
        irreducible_count,
        exact_rank: exact,
        completion,
        pass,
    })
}

/// Checks that the constructed generating set has the formula's size,
/// generates the carrier, and that no smaller set can.
pub fn certify_rank(
    object: RankObject,
    n: usize,
    p: Option<usize>,
    opts: &RankOptions,
) -> Result<RankCertificate> {
    rank_formula(object, n, p)?;
    match object {
        RankObject::Rq => {
            let p = p.expect("checked by rank_formula");
            let rule = ReesQuotient::new(n, p)?;
            let mut carrier: Vec<ReesElement> = enumerate_jstar(n, p, &opts.bounds)?
                .into_vec()
                .into_iter()
                .map(ReesElement::Map)
                .collect();
            carrier.push(ReesElement::Zero);
            let generators = generating_set_g(n, p)?
                .into_vec()
                .into_iter()
                .map(ReesElement::Map)
                .collect();
            let inst = Instance {
                carrier,
                generators,
                zero: Some(ReesElement::Zero),
            };
            certify_with(object, n, Some(p), inst, &rule, opts)
        }
        RankObject::Ideal => {
            let p = p.expect("checked by rank_formula");
            let inst = Instance {
                carrier: enumerate_ideal(n, p, &opts.bounds)?.into_vec(),
                generators: generating_set_w(n, p)?.into_vec(),
                zero: None,
            };
            certify_with(object, n, Some(p), inst, &Composition, opts)
        }
        RankObject::Dorp => {
            let inst = Instance {
                carrier: enumerate_dorp(n, &opts.bounds)?.into_vec(),
                generators: monoid_generating_set(n)?.into_vec(),
                zero: None,
            };
            certify_with(object, n, None, inst, &Composition, opts)
        }
    }
}

/// Irreducible elements of a carrier of maps under composition.
pub fn irreducibles(carrier: &ElementSet, bound: usize) -> Result<ElementSet> {
    let table = CayleyTable::build(carrier.members(), &Composition, bound)?;
    ElementSet::new(
        carrier.n(),
        irreducible_indices(&table, None)
            .into_iter()
            .map(|i| *table.element(i)),
    )
}

/// Irreducible nonzero elements of a Rees quotient.
pub fn rees_irreducibles(n: usize, p: usize, bound: usize) -> Result<ElementSet> {
    let rule = ReesQuotient::new(n, p)?;
    let mut carrier: Vec<ReesElement> = enumerate_jstar(n, p, &Bounds::default())?
        .into_vec()
        .into_iter()
        .map(ReesElement::Map)
        .collect();
    carrier.push(ReesElement::Zero);
    let table = CayleyTable::build(&carrier, &rule, bound)?;
    let zero = table.index_of(&ReesElement::Zero);
    ElementSet::new(
        n,
        irreducible_indices(&table, zero)
            .into_iter()
            .filter_map(|i| table.element(i).as_map().copied()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vital::VitalElement;

    fn m(s: &str) -> PartialMap {
        s.parse().unwrap()
    }

    #[test]
    fn generating_set_examples() {
        let w0 = generating_set_w(5, 0).unwrap();
        assert_eq!(w0.members(), &[PartialMap::empty(5).unwrap()]);
        let w21 = generating_set_w(2, 1).unwrap();
        assert_eq!(
            w21.members(),
            &[m("n=2;1->1"), m("n=2;1->1,2->1"), m("n=2;2->2")]
        );
        assert_eq!(generating_set_w(4, 2).unwrap().len(), 19);
        assert!(generating_set_w(4, 4).is_err());
        assert!(generating_set_g(4, 0).is_err());
    }

    #[test]
    fn odd_chain_high_range_includes_the_single_centre_vital() {
        let w = generating_set_w(5, 4).unwrap();
        assert!(w.contains(&VitalElement::convex_at(5, 3, 3).unwrap().map));
        assert_eq!(w.len(), 12);
    }

    #[test]
    fn rank_formula_examples() {
        assert_eq!(rank_ideal(3, 1).unwrap(), BigUint::from(7u32));
        assert_eq!(rank_rq(4, 2).unwrap(), BigUint::from(19u32));
        assert_eq!(rank_dorp(5).unwrap(), BigUint::from(13u32));
        assert_eq!(rank_ideal(4, 0).unwrap(), BigUint::one());
        assert!(rank_dorp(1).is_err());
        assert!(rank_rq(3, 0).is_err());
    }

    #[test]
    fn set_sizes_follow_formulas() {
        for n in 2..=8 {
            for p in 1..=n {
                let g = generating_set_g(n, p).unwrap().len();
                assert_eq!(BigUint::from(g), rank_rq(n, p).unwrap(), "G n={n} p={p}");
            }
            for p in 0..n {
                let w = generating_set_w(n, p).unwrap().len();
                assert_eq!(BigUint::from(w), rank_ideal(n, p).unwrap(), "W n={n} p={p}");
            }
            let d = monoid_generating_set(n).unwrap().len();
            assert_eq!(BigUint::from(d), rank_dorp(n).unwrap());
        }
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let c = combinations(4, 2, 100).unwrap();
        assert_eq!(
            c,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 3, 100).unwrap(), vec![vec![0, 1, 2]]);
        assert!(combinations(10, 5, 10).is_err());
    }

    #[test]
    fn small_rees_irreducibles() {
        let irr = rees_irreducibles(2, 1, 100).unwrap();
        assert_eq!(irr.len(), 3);
        assert!(irr.iter().all(PartialMap::is_idempotent));
    }

    #[test]
    fn certificate_for_four_chain_monoid() {
        let cert = certify_rank(RankObject::Dorp, 4, None, &RankOptions::default()).unwrap();
        assert_eq!(cert.formula_rank, 10);
        assert_eq!(cert.closure_size, 97);
        assert!(cert.generated);
        assert_eq!(cert.exact_rank, Some(10));
        assert!(cert.pass, "{}", cert.to_json());
    }

    #[test]
    fn certificate_for_rees_quotient() {
        let cert = certify_rank(RankObject::Rq, 4, Some(2), &RankOptions::default()).unwrap();
        assert!(cert.generated);
        assert_eq!(cert.generator_count, 19);
        assert_eq!(cert.exact_rank, Some(19));
        assert!(cert.pass);
    }

    #[test]
    fn exact_rank_of_small_ideals() {
        for n in 2..=4 {
            for p in 0..n {
                let cert =
                    certify_rank(RankObject::Ideal, n, Some(p), &RankOptions::default()).unwrap();
                assert!(cert.pass, "{}", cert.to_json());
            }
        }
    }
}
