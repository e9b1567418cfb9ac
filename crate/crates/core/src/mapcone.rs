//! Iterated mapping cones: adding generators one at a time and comparing the
//! Betti table the cone would give with the true one.
//!
//! For `I = I' + (m)` the mapping cone of `R/(I':m)(-deg m) -> R/I'`
//! resolves `R/I` with `β_{i,d} = β_{i,d}(R/I') + β_{i-1,d-deg m}(R/(I':m))`.
//! It is minimal exactly when these ranks equal the oracle's.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::betti::{GradedBettiTable, MultigradedBettiTable};
use crate::error::{Error, Result};
use crate::linalg::FieldChar;
use crate::monomial::{minimalize, Monomial, MonomialIdeal};
use crate::oracle::BettiCache;

/// Largest generator count accepted by [`all_orders_check`].
pub const MAX_ORDER_GENS: usize = 9;

/// One generator added to the running ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapconeStep {
    /// 1-based position of the added generator in the ordering (at least 2).
    pub step: usize,
    pub added: Monomial,
    /// `I' : m` for the ideal `I'` of the earlier generators.
    pub colon: MonomialIdeal,
    pub predicted: GradedBettiTable,
    pub actual: GradedBettiTable,
    pub minimal: bool,
    /// Smallest `(i, d)` where predicted and actual differ.
    pub first_discrepancy: Option<(usize, BigUint)>,
}

impl MapconeStep {
    /// Entries where the cone overshoots, or `None` if it undershoots anywhere.
    pub fn surplus(&self) -> Option<BTreeMap<(usize, BigUint), u64>> {
        self.predicted.checked_sub(&self.actual)
    }

    /// `Σ_i (-1)^i surplus(i, d) = 0` for every `d`: cancellations remove
    /// equal ranks from adjacent homological degrees.
    pub fn surplus_is_balanced(&self) -> bool {
        let Some(surplus) = self.surplus() else {
            return false;
        };
        let mut by_degree: BTreeMap<&BigUint, i128> = BTreeMap::new();
        for ((i, d), m) in &surplus {
            let signed = if i % 2 == 0 { *m as i128 } else { -(*m as i128) };
            *by_degree.entry(d).or_default() += signed;
        }
        by_degree.values().all(|&v| v == 0)
    }
}

/// `predicted(i, d) = Tprev(i, d) + Tcolon(i - 1, d - deg m)` for `i >= 1`.
pub fn mapcone_predict(prev: &GradedBettiTable, colon: &GradedBettiTable, deg_m: &BigUint) -> Result<GradedBettiTable> {
    let mut entries: Vec<(usize, BigUint, u64)> = prev.entries().map(|(i, d, m)| (i, d.clone(), m)).collect();
    entries.extend(colon.entries().map(|(i, d, m)| (i + 1, d + deg_m, m)));
    GradedBettiTable::from_entries(entries)
}

/// Multigraded version: `M(i, b) = Mprev(i, b) + Mcolon(i - 1, b / m)`.
pub fn mapcone_predict_multigraded(
    prev: &MultigradedBettiTable,
    colon: &MultigradedBettiTable,
    m: &Monomial,
) -> Result<MultigradedBettiTable> {
    if prev.nvars() != colon.nvars() || prev.nvars() != m.nvars() {
        return Err(Error::DimensionMismatch {
            left: prev.nvars(),
            right: colon.nvars().max(m.nvars()),
        });
    }
    let mut out = prev.clone();
    for (i, b, mult) in colon.entries() {
        out.insert(i + 1, b.mul_unchecked(m), mult);
    }
    Ok(out)
}

fn first_difference(a: &GradedBettiTable, b: &GradedBettiTable) -> Option<(usize, BigUint)> {
    let keys: std::collections::BTreeSet<(usize, &BigUint)> = a
        .entries()
        .map(|(i, d, _)| (i, d))
        .chain(b.entries().map(|(i, d, _)| (i, d)))
        .collect();
    keys.into_iter()
        .find(|&(i, d)| a.get(i, d) != b.get(i, d))
        .map(|(i, d)| (i, d.clone()))
}

fn check_order(gens: &[Monomial]) -> Result<()> {
    if gens.len() < 2 {
        return Err(Error::InvalidArgument("need at least two generators".into()));
    }
    let n = gens[0].nvars();
    if let Some(bad) = gens.iter().find(|g| g.nvars() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: bad.nvars(),
        });
    }
    Ok(())
}

/// Runs the cone for steps `2..=len` using `cache` for all oracle calls.
///
/// With `stop_early` the run ends at the first non-minimal step.
pub fn iterated_mapcone_cached(
    gens: &[Monomial],
    field: FieldChar,
    cache: &BettiCache,
    stop_early: bool,
) -> Result<Vec<MapconeStep>> {
    check_order(gens)?;
    let mut steps = Vec::new();
    let mut prefix = minimalize(gens[..1].iter().cloned())?;
    let mut prev = cache.graded(&prefix, field)?;
    for (k, m) in gens.iter().enumerate().skip(1) {
        let colon = prefix.colon(m)?;
        let colon_table = cache.graded(&colon, field)?;
        let predicted = mapcone_predict(&prev, &colon_table, &m.degree())?;
        let next = minimalize(prefix.gens().iter().cloned().chain([m.clone()]))?;
        let actual = cache.graded(&next, field)?;
        let first_discrepancy = first_difference(&predicted, &actual);
        let minimal = first_discrepancy.is_none();
        steps.push(MapconeStep {
            step: k + 1,
            added: m.clone(),
            colon,
            predicted,
            actual: (*actual).clone(),
            minimal,
            first_discrepancy,
        });
        if stop_early && !minimal {
            break;
        }
        prefix = next;
        prev = actual;
    }
    Ok(steps)
}

/// Adds `gens` one at a time and reports every step.
pub fn iterated_mapcone(gens: &[Monomial], field: FieldChar) -> Result<Vec<MapconeStep>> {
    iterated_mapcone_cached(gens, field, &BettiCache::new(), false)
}

/// Outcome of running every ordering of `G(I)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdersReport {
    pub generators: Vec<Monomial>,
    /// Each ordering (as 0-based indices into `generators`) with its first
    /// non-minimal step, or `None` if every step is minimal.
    pub runs: Vec<(Vec<usize>, Option<usize>)>,
}

impl OrdersReport {
    pub fn total(&self) -> usize {
        self.runs.len()
    }

    pub fn minimal_count(&self) -> usize {
        self.runs.iter().filter(|(_, bad)| bad.is_none()).count()
    }

    /// How many orderings first fail at each step.
    pub fn first_bad_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for step in self.runs.iter().filter_map(|(_, bad)| *bad) {
            *h.entry(step).or_default() += 1;
        }
        h
    }

    /// One `perm TAB first_bad_step|ok` line per ordering (1-based generator
    /// indices), then a summary footer.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (perm, bad) in &self.runs {
            let p = perm.iter().map(|i| (i + 1).to_string()).join(",");
            let verdict = bad.map_or_else(|| "ok".to_string(), |s| s.to_string());
            writeln!(out, "{p}\t{verdict}").unwrap();
        }
        out.push_str(&self.summary());
        out
    }

    /// Generator legend and counts.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (k, g) in self.generators.iter().enumerate() {
            writeln!(out, "# {} = {g}", k + 1).unwrap();
        }
        for (step, count) in self.first_bad_histogram() {
            writeln!(out, "# first non-minimal at step {step}: {count}").unwrap();
        }
        writeln!(out, "{} / {} orderings minimal", self.minimal_count(), self.total()).unwrap();
        out
    }
}

/// Runs the iterated mapping cone for every ordering of `G(I)`.
pub fn all_orders_check(ideal: &MonomialIdeal, field: FieldChar) -> Result<OrdersReport> {
    all_orders_check_cached(ideal, field, &BettiCache::new())
}

pub fn all_orders_check_cached(ideal: &MonomialIdeal, field: FieldChar, cache: &BettiCache) -> Result<OrdersReport> {
    let r = ideal.num_gens();
    if r > MAX_ORDER_GENS {
        return Err(Error::TooLarge(format!(
            "{r} generators (at most {MAX_ORDER_GENS} orderings are enumerated)"
        )));
    }
    let gens = ideal.gens().to_vec();
    if r < 2 {
        return Ok(OrdersReport {
            generators: gens,
            runs: vec![((0..r).collect(), None)],
        });
    }
    let perms: Vec<Vec<usize>> = (0..r).permutations(r).collect();
    let runs = perms
        .into_par_iter()
        .map(|perm| {
            let ordered: Vec<Monomial> = perm.iter().map(|&k| gens[k].clone()).collect();
            let steps = iterated_mapcone_cached(&ordered, field, cache, true)?;
            let bad = steps.iter().find(|s| !s.minimal).map(|s| s.step);
            Ok((perm, bad))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrdersReport { generators: gens, runs })
}

/// Pairs `(i, b)` with `M1(i, b) > 0` and `M2(i, b / offset) > 0`: the
/// multidegrees where the comparison map `G_i(-offset) -> F_i` of a mapping
/// cone could carry a unit and cancel.
pub fn common_multidegree_shifts(
    m1: &MultigradedBettiTable,
    m2: &MultigradedBettiTable,
    offset: &Monomial,
) -> Result<Vec<(usize, Monomial)>> {
    if m1.nvars() != m2.nvars() || m1.nvars() != offset.nvars() {
        return Err(Error::DimensionMismatch {
            left: m1.nvars(),
            right: m2.nvars().max(offset.nvars()),
        });
    }
    Ok(m1
        .entries()
        .filter(|(i, _, _)| *i >= 1)
        .filter(|(i, b, _)| b.checked_div(offset).ok().flatten().is_some_and(|q| m2.get(*i, &q) > 0))
        .map(|(i, b, _)| (i, b.clone()))
        .collect())
}
