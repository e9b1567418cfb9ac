//! Graded and multigraded Betti tables of quotients `R/I`.
//!
//! Tables are always indexed for the quotient: the entry `(0, 0)` is `1` and
//! the minimal generators of `I` sit in homological degree `1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::monomial::Monomial;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedBettiTable {
    entries: BTreeMap<(usize, BigUint), u64>,
}

/// Regularity data read off a Betti table of `R/I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regularity {
    /// `reg(R/I) = max(d - i)`.
    pub quotient: BigUint,
    /// `reg(I) = reg(R/I) + 1`.
    pub ideal: BigUint,
    /// Projective dimension of `R/I`.
    pub pdim: usize,
}

impl GradedBettiTable {
    /// A table holding only `(0,0) ↦ 1`.
    pub fn unit() -> Self {
        Self {
            entries: BTreeMap::from([((0, BigUint::zero()), 1)]),
        }
    }

    /// Builds a table from `(i, d, multiplicity)` triples, summing repeats and
    /// dropping zeros. Exactly one entry may sit at `i = 0`, namely `(0,0) ↦ 1`.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, BigUint, u64)>,
    {
        let mut map: BTreeMap<(usize, BigUint), u64> = BTreeMap::new();
        for (i, d, m) in entries {
            if m > 0 {
                *map.entry((i, d)).or_default() += m;
            }
        }
        let table = Self { entries: map };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        let at_zero: Vec<_> = self.entries.iter().filter(|((i, _), _)| *i == 0).collect();
        match at_zero.as_slice() {
            [((0, d), 1)] if d.is_zero() => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "a quotient Betti table needs exactly (0,0) -> 1 in homological degree 0".into(),
                ))
            }
        }
        // a syzygy in homological degree i has internal degree at least i
        match self.entries.keys().find(|(i, d)| *d < BigUint::from(*i)) {
            Some((i, d)) => Err(Error::InvalidArgument(format!("entry ({i}, {d}) has degree below {i}"))),
            None => Ok(()),
        }
    }

    pub fn get(&self, i: usize, d: &BigUint) -> u64 {
        self.entries.get(&(i, d.clone())).copied().unwrap_or(0)
    }

    /// Nonzero entries `(i, d, multiplicity)` in increasing `(i, d)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &BigUint, u64)> {
        self.entries.iter().map(|((i, d), &m)| (*i, d, m))
    }

    /// Nonzero entries in homological degree `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (&BigUint, u64)> {
        self.entries
            .range((i, BigUint::zero())..)
            .take_while(move |((j, _), _)| *j == i)
            .map(|((_, d), &m)| (d, m))
    }

    /// Projective dimension: the largest homological degree with an entry.
    pub fn pdim(&self) -> usize {
        self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    /// Total Betti numbers `β_0, ..., β_pdim`.
    pub fn totals(&self) -> Vec<u64> {
        let mut t = vec![0; self.pdim() + 1];
        for ((i, _), m) in &self.entries {
            t[*i] += m;
        }
        t
    }

    /// Smallest and largest internal degree with a nonzero entry in homological degree `i`.
    ///
    /// Raw quotient indexing: `i = 1` holds the generator degrees.
    pub fn min_max_shifts(&self, i: usize) -> Result<(BigUint, BigUint)> {
        let mut row = self.row(i).map(|(d, _)| d);
        let first = row
            .next()
            .ok_or_else(|| Error::InvalidArgument(format!("no entries in homological degree {i}")))?;
        let last = row.last().unwrap_or(first);
        Ok((first.clone(), last.clone()))
    }

    pub fn regularity_and_pdim(&self) -> Regularity {
        let quotient = self
            .entries
            .keys()
            .map(|(i, d)| d - BigUint::from(*i))
            .max()
            .unwrap_or_default();
        Regularity {
            ideal: &quotient + 1u32,
            quotient,
            pdim: self.pdim(),
        }
    }

    /// Entry-wise `self - other` where `self >= other` everywhere; `None` otherwise.
    pub fn checked_sub(&self, other: &Self) -> Option<BTreeMap<(usize, BigUint), u64>> {
        let mut out = BTreeMap::new();
        for (key, &m) in &other.entries {
            if self.entries.get(key).copied().unwrap_or(0) < m {
                return None;
            }
        }
        for (key, &m) in &self.entries {
            let diff = m - other.entries.get(key).copied().unwrap_or(0);
            if diff > 0 {
                out.insert(key.clone(), diff);
            }
        }
        Some(out)
    }

    /// The Betti diagram in the customary layout: column `i`, row `d - i`,
    /// with a `total:` line first and `.` for zero entries.
    pub fn to_diagram(&self) -> String {
        let pdim = self.pdim();
        let reg = self.regularity_and_pdim().quotient;
        let mut rows: Vec<BigUint> = match reg.to_usize() {
            Some(r) if r <= 1000 => (0..=r).map(BigUint::from).collect(),
            _ => {
                let mut v: Vec<BigUint> = self.entries.keys().map(|(i, d)| d - BigUint::from(*i)).collect();
                v.sort();
                v.dedup();
                v
            }
        };
        if rows.is_empty() {
            rows.push(BigUint::zero());
        }
        let cell = |r: &BigUint, i: usize| -> String {
            match self.get(i, &(r + BigUint::from(i))) {
                0 => ".".to_string(),
                m => m.to_string(),
            }
        };
        let mut grid: Vec<(String, Vec<String>)> = Vec::new();
        grid.push(("total:".to_string(), self.totals().iter().map(u64::to_string).collect()));
        for r in &rows {
            grid.push((format!("{r}:"), (0..=pdim).map(|i| cell(r, i)).collect()));
        }
        let label_w = grid.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        let col_w: Vec<usize> = (0..=pdim)
            .map(|i| grid.iter().map(|(_, c)| c[i].len()).max().unwrap_or(1))
            .collect();
        let mut out = String::new();
        for (label, cells) in &grid {
            let _ = write!(out, "{label:>label_w$}");
            for (c, w) in cells.iter().zip(&col_w) {
                let _ = write!(out, " {c:>w$}");
            }
            out.push('\n');
        }
        out
    }

    /// One `i TAB d TAB multiplicity` line per nonzero entry.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (i, d, m) in self.entries() {
            let _ = writeln!(out, "{i}\t{d}\t{m}");
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected `i TAB d TAB m`", lineno + 1));
            let mut parts = line.split('\t');
            let (Some(i), Some(d), Some(m), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(bad());
            };
            entries.push((
                i.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
                m.trim().parse().map_err(|_| bad())?,
            ));
        }
        Self::from_entries(entries)
    }
}

/// Betti numbers of `R/I` indexed by homological degree and multidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultigradedBettiTable {
    nvars: usize,
    entries: BTreeMap<(usize, Monomial), u64>,
}

impl MultigradedBettiTable {
    /// Table with only `(0, 1) ↦ 1`.
    pub fn unit(nvars: usize) -> Self {
        Self {
            nvars,
            entries: BTreeMap::from([((0, Monomial::one(nvars)), 1)]),
        }
    }

    pub(crate) fn insert(&mut self, i: usize, b: Monomial, m: u64) {
        debug_assert_eq!(b.nvars(), self.nvars);
        if m > 0 {
            *self.entries.entry((i, b)).or_default() += m;
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, b: &Monomial) -> u64 {
        self.entries.get(&(i, b.clone())).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Monomial, u64)> {
        self.entries.iter().map(|((i, b), &m)| (*i, b, m))
    }

    /// Sums multiplicities over multidegrees of equal total degree.
    pub fn coarse(&self) -> GradedBettiTable {
        GradedBettiTable::from_entries(self.entries().map(|(i, b, m)| (i, b.degree(), m)))
            .expect("multigraded table always carries (0,0) -> 1")
    }

    /// One `i TAB b1,...,bn TAB multiplicity` line per nonzero entry.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (i, b, m) in self.entries() {
            let exps: Vec<String> = b.exponents().iter().map(BigUint::to_string).collect();
            let _ = writeln!(out, "{i}\t{}\t{m}", exps.join(","));
        }
        out
    }
}

/// Convenience for the common case: `coarse_table(M)`.
pub fn coarse_table(table: &MultigradedBettiTable) -> GradedBettiTable {
    table.coarse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(entries: &[(usize, u64, u64)]) -> GradedBettiTable {
        GradedBettiTable::from_entries(entries.iter().map(|&(i, d, m)| (i, BigUint::from(d), m))).unwrap()
    }

    fn big(d: u64) -> BigUint {
        BigUint::from(d)
    }

    #[test]
    fn rejects_bad_degree_zero() {
        assert!(GradedBettiTable::from_entries([(1, big(1), 3)]).is_err());
        assert!(GradedBettiTable::from_entries([(0, big(0), 2)]).is_err());
        assert!(GradedBettiTable::from_entries([(0, big(0), 1), (0, big(1), 1)]).is_err());
        assert!(GradedBettiTable::from_entries([(0, big(0), 1), (3, big(2), 1)]).is_err());
    }

    #[test]
    fn diagram_matches_printed_layout() {
        let koszul = table(&[(0, 0, 1), (1, 1, 3), (2, 2, 3), (3, 3, 1)]);
        assert_eq!(koszul.to_diagram(), "total: 1 3 3 1\n    0: 1 3 3 1\n");
        let frob = table(&[(0, 0, 1), (1, 2, 3), (2, 4, 3), (3, 6, 1)]);
        assert_eq!(
            frob.to_diagram(),
            "total: 1 3 3 1\n    0: 1 . . .\n    1: . 3 . .\n    2: . . 3 .\n    3: . . . 1\n"
        );
        let prod = table(&[(0, 0, 1), (1, 3, 9), (2, 4, 12), (3, 5, 3), (3, 6, 1)]);
        assert_eq!(
            prod.to_diagram(),
            "total: 1 9 12 4\n    0: 1 .  . .\n    1: . .  . .\n    2: . 9 12 3\n    3: . .  . 1\n"
        );
    }

    #[test]
    fn shifts_and_regularity() {
        let prod = table(&[(0, 0, 1), (1, 3, 9), (2, 4, 12), (3, 5, 3), (3, 6, 1)]);
        assert_eq!(prod.min_max_shifts(3).unwrap(), (big(5), big(6)));
        assert!(prod.min_max_shifts(4).is_err());
        let reg = prod.regularity_and_pdim();
        assert_eq!((reg.quotient, reg.ideal, reg.pdim), (big(3), big(4), 3));
        assert_eq!(prod.totals(), vec![1, 9, 12, 4]);
    }

    #[test]
    fn tsv_round_trip() {
        let prod = table(&[(0, 0, 1), (1, 3, 9), (2, 4, 12), (3, 5, 3), (3, 6, 1)]);
        let text = prod.to_tsv();
        assert!(text.starts_with("0\t0\t1\n1\t3\t9\n"));
        assert_eq!(GradedBettiTable::from_tsv(&text).unwrap(), prod);
        assert!(GradedBettiTable::from_tsv("1 3 9").is_err());
    }

    proptest::proptest! {
        #[test]
        fn tsv_round_trips_random_tables(
            raw in proptest::collection::vec((1usize..6, 6u64..40, 1u64..1000), 0..20)
        ) {
            let t = GradedBettiTable::from_entries(
                std::iter::once((0, big(0), 1)).chain(raw.iter().map(|&(i, d, m)| (i, big(d), m))),
            ).unwrap();
            proptest::prop_assert_eq!(GradedBettiTable::from_tsv(&t.to_tsv()).unwrap(), t);
        }
    }
}
