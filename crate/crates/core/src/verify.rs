//! Verification suites: each compares closed forms or structural
//! characterizations with brute-force evidence and returns a report.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};

use crate::count::{
    binomial_identity_sides, convex_vital_count, convex_vital_total_formula, count_f,
    idempotent_count_formula, lstar_class_count, order_dorp, rstar_class_count,
};
use crate::enumerate::{
    all_partial_maps, enumerate_dorp, enumerate_ideal, enumerate_jstar, enumerate_ls, Bounds,
};
use crate::error::{Error, Result};
use crate::greens::{
    abundance_checks, definitional_partition, hstar_class_size, hstar_class_size_by_height,
    key_partition, star_chain_checks, EggBox, OracleBound, RelationKind,
};
use crate::map::{ceil_half, PartialMap};
use crate::rank::{certify_rank, RankObject, RankOptions};
use crate::report::{Check, VerificationReport};
use crate::semigroup::{CayleyTable, Composition, ReesElement, ReesQuotient};
use crate::vital::{
    convex_vitals, deflate_convex_vital, factor_antitone, factor_injective_antitone,
    factor_nonconvex_vital_with, is_vital, IsotoneWordBook, VitalElement,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Order,
    Antitone,
    Identity,
    Greens,
    Abundance,
    Idempotents,
    Starred,
    Hstar,
    Classes,
    Ranks,
    Factorizations,
    ConvexVitals,
    Inverse,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Order,
        Suite::Antitone,
        Suite::Identity,
        Suite::Greens,
        Suite::Abundance,
        Suite::Idempotents,
        Suite::Starred,
        Suite::Hstar,
        Suite::Classes,
        Suite::Ranks,
        Suite::Factorizations,
        Suite::ConvexVitals,
        Suite::Inverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Order => "order",
            Suite::Antitone => "antitone",
            Suite::Identity => "identity",
            Suite::Greens => "greens",
            Suite::Abundance => "abundance",
            Suite::Idempotents => "idempotents",
            Suite::Starred => "starred",
            Suite::Hstar => "hstar",
            Suite::Classes => "classes",
            Suite::Ranks => "ranks",
            Suite::Factorizations => "factorizations",
            Suite::ConvexVitals => "convex-vitals",
            Suite::Inverse => "inverse",
        }
    }

    /// Largest `n` covered when none is given.
    pub fn default_n(self) -> usize {
        match self {
            Suite::Order | Suite::Idempotents => 8,
            Suite::Antitone | Suite::Classes => 7,
            Suite::Identity => 20,
            Suite::Greens => 4,
            Suite::Starred => 5,
            Suite::Abundance
            | Suite::Hstar
            | Suite::Ranks
            | Suite::Factorizations
            | Suite::Inverse => 6,
            Suite::ConvexVitals => 12,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::domain(format!("unknown suite `{s}` (one of {})", names.join(", ")))
            })
    }
}

/// Parameters shared by the suites.
#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteConfig {
    /// Largest chain size; the suite default when absent.
    pub n: Option<usize>,
    /// Restrict to one height where a suite ranges over heights.
    pub p: Option<usize>,
    /// Largest carrier scanned by the definitional oracles.
    pub bound: Option<usize>,
}

impl SuiteConfig {
    fn max_n(&self, suite: Suite) -> usize {
        self.n.unwrap_or_else(|| suite.default_n())
    }

    fn heights(&self, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        match self.p {
            Some(p) => range.filter(|&x| x == p).collect(),
            None => range.collect(),
        }
    }

    fn oracle(&self, default: usize) -> OracleBound {
        OracleBound {
            max_carrier: self.bound.unwrap_or(default),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let n = cfg.max_n(suite);
    let mut report = VerificationReport::new(format!("verify {suite}")).param("n", n);
    if let Some(p) = cfg.p {
        report.set_param("p", p);
    }
    if let Some(b) = cfg.bound {
        report.set_param("bound", b);
    }
    match suite {
        Suite::Order => order(&mut report, n)?,
        Suite::Antitone => antitone(&mut report, n)?,
        Suite::Identity => identity(&mut report, n),
        Suite::Greens => greens(&mut report, n, cfg)?,
        Suite::Abundance => abundance(&mut report, n, cfg)?,
        Suite::Idempotents => idempotents(&mut report, n)?,
        Suite::Starred => starred(&mut report, n, cfg)?,
        Suite::Hstar => hstar(&mut report, n)?,
        Suite::Classes => classes(&mut report, n, cfg)?,
        Suite::Ranks => ranks(&mut report, n, cfg)?,
        Suite::Factorizations => factorizations(&mut report, n)?,
        Suite::ConvexVitals => convex(&mut report, n)?,
        Suite::Inverse => inverse(&mut report, n)?,
    }
    Ok(report.finish())
}

const ORACLE_MAX: usize = 7;

fn order(report: &mut VerificationReport, max_n: usize) -> Result<()> {
    let bounds = Bounds {
        oracle: ORACLE_MAX,
        direct: max_n.max(Bounds::default().direct),
    };
    for n in 1..=max_n {
        let direct = enumerate_dorp(n, &bounds)?.len();
        report.check_eq(
            format!("n={n}: generated size = Schröder + antitone count"),
            order_dorp(n),
            BigUint::from(direct),
        );
        if n <= ORACLE_MAX {
            let filtered = all_partial_maps(n)?
                .into_iter()
                .filter(PartialMap::in_dorp)
                .count();
            report.check_eq(
                format!("n={n}: filter-all oracle = generated size"),
                filtered,
                direct,
            );
        }
    }
    Ok(())
}

fn antitone(report: &mut VerificationReport, max_n: usize) -> Result<()> {
    for n in 1..=max_n {
        let mut tally = vec![vec![0u64; n + 1]; n + 1];
        for x in all_partial_maps(n)? {
            if x.is_decreasing() && x.is_antitone() && x.height() >= 1 {
                tally[x.width()][x.height()] += 1;
            }
        }
        let mut bad = Vec::new();
        for (r, row) in tally.iter().enumerate().skip(1) {
            for (p, &found) in row.iter().enumerate().skip(1) {
                if count_f(n, r, p) != BigUint::from(found) {
                    bad.push(format!("(r={r},p={p})"));
                }
            }
        }
        report.check_clean(format!("n={n}: formula = brute force on every (r,p)"), bad);
    }
    Ok(())
}

fn identity(report: &mut VerificationReport, max: usize) {
    let mut bad = Vec::new();
    let mut cells = 0usize;
    for m in 0..=max {
        for n in 0..=max {
            for k in 0..=max {
                cells += 1;
                let (l, r) = binomial_identity_sides(m, n, k);
                if l != r {
                    bad.push(format!("(m={m},n={n},k={k})"));
                }
            }
        }
    }
    report.check_clean(format!("both sides agree on {cells} grid cells"), bad);
}

fn greens(report: &mut VerificationReport, max_n: usize, cfg: &SuiteConfig) -> Result<()> {
    let bound = cfg.oracle(crate::count::to_u64(&order_dorp(max_n)) as usize);
    for n in 1..=max_n {
        let table = CayleyTable::build(
            enumerate_dorp(n, &Bounds::default())?.members(),
            &Composition,
            bound.max_carrier,
        )?;
        for kind in [
            RelationKind::L,
            RelationKind::R,
            RelationKind::LStar,
            RelationKind::RStar,
        ] {
            let def = definitional_partition(&table, kind, bound)?;
            report.check(
                format!("n={n}: definitional {kind} = key {kind}"),
                def == key_partition(&table, kind),
            );
        }
        let h = definitional_partition(&table, RelationKind::H, bound)?;
        let r = definitional_partition(&table, RelationKind::R, bound)?;
        report.check(format!("n={n}: H = R"), h == r);
        let d = definitional_partition(&table, RelationKind::D, bound)?;
        let l = definitional_partition(&table, RelationKind::L, bound)?;
        report.check(format!("n={n}: D (join of L and R) = L"), d == l);
    }
    Ok(())
}

fn rees_carrier(n: usize, p: usize) -> Result<Vec<ReesElement>> {
    let mut carrier: Vec<ReesElement> = enumerate_jstar(n, p, &Bounds::default())?
        .into_vec()
        .into_iter()
        .map(ReesElement::Map)
        .collect();
    carrier.push(ReesElement::Zero);
    Ok(carrier)
}

fn absorb(report: &mut VerificationReport, label: &str, sub: VerificationReport) {
    for c in sub.checks {
        report.push(Check {
            name: format!("{label}: {}", c.name),
            ..c
        });
    }
}

fn abundance(report: &mut VerificationReport, max_n: usize, cfg: &SuiteConfig) -> Result<()> {
    for n in 1..=max_n {
        let all = enumerate_dorp(n, &Bounds::default())?;
        if cfg.p.is_none() {
            absorb(
                report,
                &format!("monoid n={n}"),
                abundance_checks(all.members()),
            );
        }
        for p in cfg.heights(1..=n.saturating_sub(1)) {
            let ideal = enumerate_ideal(n, p, &Bounds::default())?;
            absorb(
                report,
                &format!("ideal n={n} p={p}"),
                abundance_checks(ideal.members()),
            );
        }
        for p in cfg.heights(1..=n) {
            absorb(
                report,
                &format!("quotient n={n} p={p}"),
                abundance_checks(&rees_carrier(n, p)?),
            );
        }
    }
    Ok(())
}

fn idempotents(report: &mut VerificationReport, max_n: usize) -> Result<()> {
    let bounds = Bounds {
        oracle: ORACLE_MAX,
        direct: max_n.max(Bounds::default().direct),
    };
    for n in 1..=max_n {
        let all = enumerate_dorp(n, &bounds)?;
        let e: Vec<PartialMap> = all.iter().filter(|x| x.is_idempotent()).copied().collect();
        report.check_eq(
            format!("n={n}: idempotent count = (3^n+1)/2"),
            idempotent_count_formula(n),
            BigUint::from(e.len()),
        );
        if n <= 6 {
            let ls: Vec<PartialMap> = enumerate_ls(n, &bounds)?
                .iter()
                .filter(|x| x.is_idempotent())
                .copied()
                .collect();
            report.check(
                format!("n={n}: idempotents coincide with those of the isotone part"),
                e == ls,
            );
        }
    }
    Ok(())
}

fn starred(report: &mut VerificationReport, max_n: usize, cfg: &SuiteConfig) -> Result<()> {
    let bound = cfg.oracle(crate::count::to_u64(&order_dorp(max_n.max(1))) as usize);
    let monoid_from = if max_n >= 4 { 4 } else { 1 };
    if cfg.p.is_none() {
        for n in monoid_from..=max_n {
            let table = CayleyTable::build(
                enumerate_dorp(n, &Bounds::default())?.members(),
                &Composition,
                bound.max_carrier,
            )?;
            absorb(
                report,
                &format!("monoid n={n}"),
                star_chain_checks(&table, bound)?,
            );
        }
    }
    for n in 1..=max_n.min(4) {
        for p in cfg.heights(1..=n.saturating_sub(1)) {
            let ideal = enumerate_ideal(n, p, &Bounds::default())?;
            let table = CayleyTable::build(ideal.members(), &Composition, bound.max_carrier)?;
            absorb(
                report,
                &format!("ideal n={n} p={p}"),
                star_chain_checks(&table, bound)?,
            );
        }
        for p in cfg.heights(1..=n) {
            let table = CayleyTable::build(
                &rees_carrier(n, p)?,
                &ReesQuotient::new(n, p)?,
                bound.max_carrier,
            )?;
            absorb(
                report,
                &format!("quotient n={n} p={p}"),
                star_chain_checks(&table, bound)?,
            );
        }
    }
    Ok(())
}

fn hstar(report: &mut VerificationReport, max_n: usize) -> Result<()> {
    for n in 1..=max_n {
        let all = enumerate_dorp(n, &Bounds::default())?.into_vec();
        let boxes = EggBox::build(&all, RelationKind::HStar);
        let mut wrong = Vec::new();
        let mut split_disagrees = Vec::new();
        for class in &boxes.classes {
            for x in class {
                if hstar_class_size(x) != class.len() {
                    wrong.push(x.to_string());
                }
                if hstar_class_size_by_height(n, x.height()) != class.len() {
                    split_disagrees.push(*x);
                }
            }
        }
        report.check_clean(
            format!("n={n}: predicate = H*-class size for every element"),
            wrong,
        );
        if n <= 4 {
            let table = CayleyTable::build(&all, &Composition, all.len())?;
            let def = definitional_partition(
                &table,
                RelationKind::HStar,
                OracleBound {
                    max_carrier: all.len(),
                },
            )?;
            let sizes_ok = def.classes().iter().all(|c| {
                c.iter()
                    .all(|&i| hstar_class_size(table.element(i)) == c.len())
            });
            report.check(
                format!("n={n}: predicate = definitional H*-class size"),
                sizes_ok,
            );
        }
        split_disagrees.sort_by_key(|x| (x.width(), *x));
        let shown: Vec<String> = split_disagrees
            .iter()
            .take(6)
            .map(ToString::to_string)
            .collect();
        report.note(
            format!("n={n}: height-only case split"),
            "agrees with class sizes",
            format!(
                "{} disagreements{}{}",
                split_disagrees.len(),
                if shown.is_empty() { "" } else { ", e.g. " },
                shown.join(" ")
            ),
            "a height in 2..=⌈n/2⌉ gives a class of size 2 only when max im ≤ min dom",
        );
    }
    Ok(())
}

fn classes(report: &mut VerificationReport, max_n: usize, cfg: &SuiteConfig) -> Result<()> {
    for n in 1..=max_n {
        for p in cfg.heights(1..=n) {
            let j = enumerate_jstar(n, p, &Bounds::default())?.into_vec();
            let r = EggBox::build(&j, RelationKind::RStar).len();
            let l = EggBox::build(&j, RelationKind::LStar).len();
            report.check_eq(
                format!("n={n} p={p}: R*-classes"),
                rstar_class_count(n, p),
                BigUint::from(r),
            );
            report.check_eq(
                format!("n={n} p={p}: L*-classes"),
                lstar_class_count(n, p),
                BigUint::from(l),
            );
        }
    }
    Ok(())
}

fn rank_checks(
    report: &mut VerificationReport,
    label: &str,
    object: RankObject,
    n: usize,
    p: Option<usize>,
) -> Result<()> {
    let cert = certify_rank(object, n, p, &RankOptions::default())?;
    let f = cert.formula_rank;
    report.check(format!("{label}: generating set generates"), cert.generated);
    report.check_eq(
        format!("{label}: generating set size = formula"),
        f,
        cert.generator_count as u64,
    );
    report.check_eq(
        format!("{label}: irreducible count = formula"),
        f,
        cert.irreducible_count.unwrap_or_default() as u64,
    );
    report.check_eq(
        format!("{label}: exact rank = formula"),
        f,
        cert.exact_rank.unwrap_or_default() as u64,
    );
    Ok(())
}

fn ranks(report: &mut VerificationReport, max_n: usize, cfg: &SuiteConfig) -> Result<()> {
    for n in 1..=max_n {
        for p in cfg.heights(1..=n) {
            rank_checks(
                report,
                &format!("quotient n={n} p={p}"),
                RankObject::Rq,
                n,
                Some(p),
            )?;
        }
        if n >= 2 {
            for p in cfg.heights(0..=n - 1) {
                rank_checks(
                    report,
                    &format!("ideal n={n} p={p}"),
                    RankObject::Ideal,
                    n,
                    Some(p),
                )?;
            }
            if cfg.p.is_none() {
                rank_checks(report, &format!("monoid n={n}"), RankObject::Dorp, n, None)?;
            }
        }
    }
    if max_n >= 1 {
        report.note(
            "monoid n=1",
            "rank claimed",
            "not claimed",
            "the monoid on one point needs both of its elements",
        );
    }
    Ok(())
}

fn factorizations(report: &mut VerificationReport, max_n: usize) -> Result<()> {
    for n in 2..=max_n {
        let all = enumerate_dorp(n, &Bounds::default())?;
        let antitone: Vec<PartialMap> = all
            .iter()
            .filter(|x| x.is_antitone() && x.height() >= 2)
            .copied()
            .collect();
        let mut counts = [0usize; 3];
        let mut bad = Vec::new();
        for x in &antitone {
            let dom = x.domain();
            let run = dom[dom.len() - 1] + 1 - dom[0] == dom.len();
            if x.is_injective() && run {
                counts[0] += 1;
                if !factor_injective_antitone(x)?.recomposes() {
                    bad.push(format!("injective {x}"));
                }
            }
            counts[1] += 1;
            if !factor_antitone(x)?.recomposes() {
                bad.push(format!("antitone {x}"));
            }
        }
        for p in 2..=ceil_half(n) {
            let book = IsotoneWordBook::new(n, p)?;
            for x in antitone.iter().filter(|x| x.height() == p && is_vital(x)) {
                if VitalElement::recognize(x).is_some_and(|v| !v.convex) {
                    counts[2] += 1;
                    if !factor_nonconvex_vital_with(x, &book)?.recomposes() {
                        bad.push(format!("non-convex vital {x}"));
                    }
                }
            }
        }
        report.check_clean(
            format!(
                "n={n}: every word recomposes ({} injective, {} antitone, {} non-convex vital)",
                counts[0], counts[1], counts[2]
            ),
            bad,
        );

        let mut deflated = 0;
        let mut rejected = 0;
        let mut bad = Vec::new();
        for p in 2..=ceil_half(n) {
            for v in convex_vitals(n, p)? {
                let i = v.top();
                match deflate_convex_vital(n, p, i) {
                    Ok((big, e)) => {
                        deflated += 1;
                        if big.map.then(&e) != v.map || !e.is_idempotent() || big.height() != p + 1
                        {
                            bad.push(format!("deflation ({p},{i})"));
                        }
                    }
                    Err(Error::ExtremeElement { .. }) => {
                        rejected += 1;
                        if !v.extreme {
                            bad.push(format!("non-extreme ({p},{i}) rejected"));
                        }
                    }
                    Err(_) => {
                        if !(v.extreme || p == ceil_half(n)) {
                            bad.push(format!("({p},{i}) refused"));
                        }
                    }
                }
                if v.extreme && deflate_convex_vital(n, p, i).is_ok() {
                    bad.push(format!("extreme ({p},{i}) accepted"));
                }
            }
        }
        report.check_clean(
            format!("n={n}: deflations recompose ({deflated} done, {rejected} extremes rejected)"),
            bad,
        );
    }
    Ok(())
}

fn convex(report: &mut VerificationReport, max_n: usize) -> Result<()> {
    for n in 1..=max_n {
        let mut total = 0usize;
        for p in 2..=ceil_half(n) {
            let got = convex_vitals(n, p)?.len();
            total += got;
            report.check_eq(
                format!("n={n} p={p}: |M(p)| = n-2p+2"),
                convex_vital_count(n, p),
                got,
            );
        }
        report.check_eq(
            format!("n={n}: total = closed form"),
            convex_vital_total_formula(n),
            BigInt::from(total),
        );
    }
    Ok(())
}

fn inverse(report: &mut VerificationReport, max_n: usize) -> Result<()> {
    for n in 1..=max_n {
        let all = enumerate_dorp(n, &Bounds::default())?;
        let mut bad = Vec::new();
        for x in all.iter() {
            let w = x.inverse_witness()?;
            let xw = x.then(&w);
            let ok = x.then(&w).then(x) == *x
                && xw.is_idempotent()
                && all.contains(&xw)
                && w.then(x) == PartialMap::identity_on(n, x.image())?;
            if !ok {
                bad.push(x.to_string());
            }
        }
        report.check_clean(
            format!(
                "n={n}: witness conditions hold for all {} elements",
                all.len()
            ),
            bad,
        );
    }
    Ok(())
}
