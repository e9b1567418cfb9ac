//! Special ideals `∏_j (x_1^{p_j}, ..., x_{ℓ_j}^{p_j})^{a_j}` and the closed-form
//! shape of their minimal resolutions.
//!
//! The Betti table is assembled factor by factor: with `T_1` the table of
//! `R/(x_1, ..., x_{ℓ_1})^{a_1 [p_1]}` and `g_k` the number of generators of
//! the `k`-th factor,
//!
//! ```text
//! T_k(i, d) = g_k · T_{k-1}(i, d - a_k p_k) + [2 <= i <= ℓ_k] B_k(i, d)
//! ```
//!
//! where `B_k` is the table of the `k`-th factor alone. The shifts are
//! summarized by the sets `S_{i,k}` and the regularity by Pardue's formula.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::betti::GradedBettiTable;
use crate::error::{Error, Result};
use crate::linalg::is_prime;
use crate::monomial::MonomialIdeal;

/// Validated parameters `(n, ℓ_j, a_j, p_j)` of a special ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpecialIdealSpec {
    n: usize,
    ell: Vec<usize>,
    a: Vec<u64>,
    p: Vec<BigUint>,
}

/// How the scales `p_j` relate to a single prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleBase {
    /// Every scale is `1`, so the ideal is p-Borel for every prime.
    AnyPrime,
    /// Every scale is a power of this prime.
    Prime(u64),
    /// Not all scales are powers of one prime.
    NotPrimePower,
}

impl SpecialIdealSpec {
    /// Checks the defining constraints and drops factors with `a_j = 0`.
    ///
    /// Constraints: `ℓ_1 = n >= ℓ_2 >= ... >= ℓ_s >= 1`, `p_1 >= 1`, and for
    /// `j < s` the ratio `p_{j+1}/p_j` is an integer `>= 2` exceeding `a_j`.
    pub fn new(n: usize, ell: Vec<usize>, a: Vec<u64>, p: Vec<BigUint>) -> Result<Self> {
        let s = ell.len();
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if s == 0 {
            return bad("at least one factor is required".into());
        }
        if a.len() != s || p.len() != s {
            return bad(format!(
                "parameter lists differ in length: l has {s}, a has {}, p has {}",
                a.len(),
                p.len()
            ));
        }
        if ell[0] != n {
            return bad(format!("l_1 = {} must equal n = {n}", ell[0]));
        }
        if let Some(j) = (1..s).find(|&j| ell[j] > ell[j - 1]) {
            return bad(format!(
                "l must be non-increasing: l_{} = {} > l_{} = {}",
                j + 1,
                ell[j],
                j,
                ell[j - 1]
            ));
        }
        if ell[s - 1] == 0 {
            return bad("every l_j must be at least 1".into());
        }
        if p[0].is_zero() {
            return bad("p_1 must be at least 1".into());
        }
        for j in 0..s - 1 {
            let (ratio, rem) = p[j + 1].div_rem(&p[j]);
            if !rem.is_zero() {
                return bad(format!(
                    "p_{} = {} is not divisible by p_{} = {}",
                    j + 2,
                    p[j + 1],
                    j + 1,
                    p[j]
                ));
            }
            if ratio < BigUint::from(2u32) {
                return bad(format!("p_{}/p_{} = {ratio} must be at least 2", j + 2, j + 1));
            }
            if BigUint::from(a[j]) >= ratio {
                return bad(format!(
                    "a_{} = {} must be below p_{}/p_{} = {ratio}",
                    j + 1,
                    a[j],
                    j + 2,
                    j + 1
                ));
            }
        }
        let keep: Vec<usize> = (0..s).filter(|&j| a[j] > 0).collect();
        if keep.is_empty() {
            return bad("all a_j are zero (the unit ideal)".into());
        }
        Ok(Self {
            n,
            ell: keep.iter().map(|&j| ell[j]).collect(),
            a: keep.iter().map(|&j| a[j]).collect(),
            p: keep.iter().map(|&j| p[j].clone()).collect(),
        })
    }

    /// Convenience constructor with machine-sized scales.
    pub fn from_parts(n: usize, ell: &[usize], a: &[u64], p: &[u64]) -> Result<Self> {
        Self::new(
            n,
            ell.to_vec(),
            a.to_vec(),
            p.iter().map(|&x| BigUint::from(x)).collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Number of factors `s`.
    pub fn num_factors(&self) -> usize {
        self.ell.len()
    }

    pub fn ell(&self) -> &[usize] {
        &self.ell
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn p(&self) -> &[BigUint] {
        &self.p
    }

    /// The spec made of the first `k` factors (`1 <= k <= s`).
    pub fn prefix(&self, k: usize) -> Self {
        assert!((1..=self.num_factors()).contains(&k), "prefix length out of range");
        Self {
            n: self.n,
            ell: self.ell[..k].to_vec(),
            a: self.a[..k].to_vec(),
            p: self.p[..k].to_vec(),
        }
    }

    /// `a_j p_j` for factor `j` (0-based).
    fn weight(&self, j: usize) -> BigUint {
        &self.p[j] * self.a[j]
    }

    /// `Σ_{m >= j} a_m p_m` (0-based `j`).
    fn tail_weight(&self, j: usize) -> BigUint {
        (j..self.num_factors()).map(|m| self.weight(m)).sum()
    }

    /// The factor ideal `(x_1^{p_j}, ..., x_{ℓ_j}^{p_j})^{a_j}`.
    pub fn factor_ideal(&self, j: usize) -> Result<MonomialIdeal> {
        MonomialIdeal::power_ideal(self.n, self.ell[j], self.a[j], self.p[j].clone())
    }

    pub fn scale_base(&self) -> ScaleBase {
        if self.p.iter().all(One::is_one) {
            return ScaleBase::AnyPrime;
        }
        let largest = self.p.last().expect("nonempty");
        let Some(q) = smallest_prime_factor(largest) else {
            return ScaleBase::NotPrimePower;
        };
        if self.p.iter().all(|pj| is_power_of(pj, q)) {
            ScaleBase::Prime(q)
        } else {
            ScaleBase::NotPrimePower
        }
    }
}

fn smallest_prime_factor(v: &BigUint) -> Option<u64> {
    for d in 2u64..1_000_000 {
        if BigUint::from(d) * d > *v {
            break;
        }
        if (v % d).is_zero() {
            return Some(d);
        }
    }
    v.to_u64().filter(|&x| is_prime(x))
}

fn is_power_of(v: &BigUint, q: u64) -> bool {
    let mut v = v.clone();
    while !v.is_one() {
        let (quot, rem) = v.div_rem(&BigUint::from(q));
        if !rem.is_zero() {
            return false;
        }
        v = quot;
    }
    true
}

impl fmt::Display for SpecialIdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        write!(
            f,
            "n={}; l={}; a={}; p={}",
            self.n,
            join(self.ell.iter().map(ToString::to_string).collect()),
            join(self.a.iter().map(ToString::to_string).collect()),
            join(self.p.iter().map(ToString::to_string).collect()),
        )
    }
}

impl FromStr for SpecialIdealSpec {
    type Err = Error;

    /// Parses `n=3; l=3,3; a=1,1; p=1,2`.
    fn from_str(text: &str) -> Result<Self> {
        let mut n = None;
        let mut ell = None;
        let mut a = None;
        let mut p = None;
        for field in text.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {field:?}")))?;
            let value = value.trim();
            match key.trim() {
                "n" => n = Some(parse_num::<usize>(value)?),
                "l" => ell = Some(parse_list::<usize>(value)?),
                "a" => a = Some(parse_list::<u64>(value)?),
                "p" => p = Some(parse_list::<BigUint>(value)?),
                other => return Err(Error::Parse(format!("unknown spec key {other:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("spec is missing {k}="));
        Self::new(
            n.ok_or_else(|| missing("n"))?,
            ell.ok_or_else(|| missing("l"))?,
            a.ok_or_else(|| missing("a"))?,
            p.ok_or_else(|| missing("p"))?,
        )
    }
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',').map(parse_num).collect()
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn to_mult(v: BigUint) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| Error::TooLarge(format!("Betti number {v} exceeds 64 bits")))
}

/// The product ideal of a validated spec.
pub fn expand_spec(spec: &SpecialIdealSpec) -> Result<MonomialIdeal> {
    let mut ideal = spec.factor_ideal(0)?;
    for j in 1..spec.num_factors() {
        ideal = ideal.product(&spec.factor_ideal(j)?)?;
    }
    Ok(ideal)
}

/// Number of minimal generators of `(x_1, ..., x_ℓ)^a`.
pub fn power_ideal_gens(ell: usize, a: u64) -> BigUint {
    binomial(a + ell as u64 - 1, ell as u64 - 1)
}

/// Betti table of `R/(x_1^scale, ..., x_ℓ^scale)^a` (an Eliahou–Kervaire shape
/// with every shift multiplied by `scale`).
pub fn base_betti(ell: usize, a: u64, scale: &BigUint) -> Result<GradedBettiTable> {
    if ell == 0 || a == 0 || scale.is_zero() {
        return Err(Error::InvalidArgument("need ell, a, scale >= 1".into()));
    }
    let ell64 = ell as u64;
    let mut entries = vec![(0, BigUint::zero(), 1)];
    for i in 1..=ell64 {
        let mult = binomial(a + ell64 - 1, a + i - 1) * binomial(a + i - 2, i - 1);
        entries.push((i as usize, scale * (a + i - 1), to_mult(mult)?));
    }
    GradedBettiTable::from_entries(entries)
}

/// The shift sets `S_{i,s}` for `i = 1..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSet {
    sets: Vec<BTreeSet<BigUint>>,
}

impl ShiftSet {
    /// `S_i` for `1 <= i`; empty past `n`.
    pub fn at(&self, i: usize) -> BTreeSet<BigUint> {
        i.checked_sub(1)
            .and_then(|k| self.sets.get(k))
            .cloned()
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// `S_{1} = {Σ a_j p_j}` and, for `i >= 2`,
/// `S_i = {(a_j + i - 1) p_j + Σ_{m > j} a_m p_m : ℓ_j >= i}`.
pub fn shift_sets(spec: &SpecialIdealSpec) -> ShiftSet {
    let mut sets = vec![BTreeSet::from([spec.tail_weight(0)])];
    for i in 2..=spec.n {
        let set = (0..spec.num_factors())
            .filter(|&j| spec.ell[j] >= i)
            .map(|j| &spec.p[j] * (spec.a[j] + i as u64 - 1) + spec.tail_weight(j + 1))
            .collect();
        sets.push(set);
    }
    ShiftSet { sets }
}

/// The Betti table of `R/I` for the special ideal `I`, built factor by factor.
pub fn special_betti_table(spec: &SpecialIdealSpec) -> Result<GradedBettiTable> {
    let mut table = base_betti(spec.ell[0], spec.a[0], &spec.p[0])?;
    for k in 1..spec.num_factors() {
        let gens = to_mult(power_ideal_gens(spec.ell[k], spec.a[k]))?;
        let shift = spec.weight(k);
        let factor = base_betti(spec.ell[k], spec.a[k], &spec.p[k])?;
        let mut entries = vec![(0, BigUint::zero(), 1)];
        for (i, d, m) in table.entries().filter(|(i, _, _)| *i >= 1) {
            let mult = m
                .checked_mul(gens)
                .ok_or_else(|| Error::TooLarge("Betti number exceeds 64 bits".into()))?;
            entries.push((i, d + &shift, mult));
        }
        for (i, d, m) in factor.entries().filter(|(i, _, _)| (2..=spec.ell[k]).contains(i)) {
            entries.push((i, d.clone(), m));
        }
        table = GradedBettiTable::from_entries(entries)?;
    }
    Ok(table)
}

/// Regularity of a special ideal from the closed formula, plus whether the
/// spec is genuinely p-Borel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PardueRegularity {
    /// `reg(I)`.
    pub value: BigUint,
    pub scale_base: ScaleBase,
}

/// `reg(I) = max_j [ Σ_{m >= j} a_m p_m + (p_j - 1)(ℓ_j - 1) ]`.
///
/// The formula is evaluated for any valid spec; `scale_base` reports whether
/// the scales are powers of one prime (the case the formula is stated for).
pub fn pardue_regularity(spec: &SpecialIdealSpec) -> PardueRegularity {
    let value = (0..spec.num_factors())
        .map(|j| spec.tail_weight(j) + (&spec.p[j] - 1u32) * (spec.ell[j] - 1))
        .max()
        .expect("at least one factor");
    PardueRegularity {
        value,
        scale_base: spec.scale_base(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, ell: &[usize], a: &[u64], p: &[u64]) -> SpecialIdealSpec {
        SpecialIdealSpec::from_parts(n, ell, a, p).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn rows(t: &GradedBettiTable) -> Vec<(usize, u64, u64)> {
        t.entries().map(|(i, d, m)| (i, d.to_u64().unwrap(), m)).collect()
    }

    #[test]
    fn validation_examples() {
        assert!(SpecialIdealSpec::from_parts(3, &[3, 3], &[1, 1], &[1, 2]).is_ok());
        assert!(SpecialIdealSpec::from_parts(3, &[3, 2], &[2, 1], &[1, 4]).is_ok());
        let err = SpecialIdealSpec::from_parts(3, &[3, 3], &[2, 1], &[1, 2]).unwrap_err();
        assert!(err.to_string().contains("a_1 = 2 must be below"), "{err}");
    }

    type Rejection = (usize, &'static [usize], &'static [u64], &'static [u64], &'static str);

    #[test]
    fn validation_rejections() {
        let cases: [Rejection; 7] = [
            (3, &[3, 3], &[1, 1], &[2, 3], "not divisible"),
            (3, &[3, 3], &[1, 1], &[2, 2], "at least 2"),
            (3, &[3, 2], &[1, 1], &[1, 0], "at least 2"),
            (3, &[2, 3], &[1, 1], &[1, 2], "l_1 = 2 must equal n = 3"),
            (3, &[3, 3], &[1], &[1, 2], "differ in length"),
            (3, &[3, 2], &[0, 0], &[1, 2], "unit ideal"),
            (3, &[3], &[1], &[0], "p_1"),
        ];
        for (n, ell, a, p, needle) in cases {
            let err = SpecialIdealSpec::from_parts(n, ell, a, p).unwrap_err();
            assert!(err.to_string().contains(needle), "{err} lacks {needle:?}");
        }
        assert!(SpecialIdealSpec::from_parts(3, &[3, 4], &[1, 1], &[1, 2]).is_err());
    }

    #[test]
    fn zero_factors_are_dropped() {
        let s = spec(3, &[3, 3, 2], &[1, 0, 1], &[1, 2, 4]);
        assert_eq!(s.num_factors(), 2);
        assert_eq!(s.p(), &[big(1), big(4)]);
        assert_eq!(s.ell(), &[3, 2]);
    }

    #[test]
    fn text_form_round_trips() {
        let s: SpecialIdealSpec = "n=3; l=3,2; a=2,1; p=1,4".parse().unwrap();
        assert_eq!(s, spec(3, &[3, 2], &[2, 1], &[1, 4]));
        assert_eq!(s.to_string(), "n=3; l=3,2; a=2,1; p=1,4");
        assert!("n=3; l=3; a=1".parse::<SpecialIdealSpec>().is_err());
        assert!("n=3; l=3; a=1; p=1; q=2".parse::<SpecialIdealSpec>().is_err());
    }

    #[test]
    fn expansion_examples() {
        let prod = expand_spec(&spec(3, &[3, 3], &[1, 1], &[1, 2])).unwrap();
        assert_eq!(prod.to_string(), "a^3,a^2*b,a^2*c,a*b^2,a*c^2,b^3,b^2*c,b*c^2,c^3");
        assert_eq!(expand_spec(&spec(3, &[3, 2], &[2, 1], &[1, 4])).unwrap().num_gens(), 12);
        let single = expand_spec(&spec(2, &[2], &[3], &[1])).unwrap();
        assert_eq!(single.to_string(), "a^3,a^2*b,a*b^2,b^3");
    }

    #[test]
    fn base_betti_examples() {
        assert_eq!(
            rows(&base_betti(3, 1, &big(1)).unwrap()),
            vec![(0, 0, 1), (1, 1, 3), (2, 2, 3), (3, 3, 1)]
        );
        assert_eq!(
            rows(&base_betti(3, 1, &big(2)).unwrap()),
            vec![(0, 0, 1), (1, 2, 3), (2, 4, 3), (3, 6, 1)]
        );
        assert_eq!(
            rows(&base_betti(3, 2, &big(1)).unwrap()),
            vec![(0, 0, 1), (1, 2, 6), (2, 3, 8), (3, 4, 3)]
        );
    }

    #[test]
    fn shift_set_examples() {
        let s = shift_sets(&spec(3, &[3, 3], &[1, 1], &[1, 2]));
        assert_eq!(s.at(1), BTreeSet::from([big(3)]));
        assert_eq!(s.at(2), BTreeSet::from([big(4)]));
        assert_eq!(s.at(3), BTreeSet::from([big(5), big(6)]));
        assert!(s.at(4).is_empty());

        let max = shift_sets(&spec(3, &[3], &[1], &[1]));
        for i in 1..=3 {
            assert_eq!(max.at(i), BTreeSet::from([big(i as u64)]));
        }

        let t = shift_sets(&spec(3, &[3, 2], &[2, 1], &[1, 4]));
        assert_eq!(t.at(1), BTreeSet::from([big(6)]));
        assert_eq!(t.at(2), BTreeSet::from([big(7), big(8)]));
        assert_eq!(t.at(3), BTreeSet::from([big(8)]));
    }

    #[test]
    fn recursion_examples() {
        let t = special_betti_table(&spec(3, &[3, 3], &[1, 1], &[1, 2])).unwrap();
        assert_eq!(rows(&t), vec![(0, 0, 1), (1, 3, 9), (2, 4, 12), (3, 5, 3), (3, 6, 1)]);
        let single = spec(4, &[4], &[3], &[5]);
        assert_eq!(
            special_betti_table(&single).unwrap(),
            base_betti(4, 3, &big(5)).unwrap()
        );
        // frozen after agreeing with the homology oracle in chars 0, 2, 3
        let t = special_betti_table(&spec(3, &[3, 2], &[2, 1], &[1, 4])).unwrap();
        assert_eq!(rows(&t), vec![(0, 0, 1), (1, 6, 12), (2, 7, 16), (2, 8, 1), (3, 8, 6)]);
    }

    #[test]
    fn pardue_examples() {
        let r = pardue_regularity(&spec(3, &[3, 3], &[1, 1], &[1, 2]));
        assert_eq!(
            r,
            PardueRegularity {
                value: big(4),
                scale_base: ScaleBase::Prime(2)
            }
        );
        assert_eq!(pardue_regularity(&spec(5, &[5], &[1], &[1])).value, big(1));
        assert_eq!(
            pardue_regularity(&spec(5, &[5], &[1], &[1])).scale_base,
            ScaleBase::AnyPrime
        );
        assert_eq!(pardue_regularity(&spec(3, &[3, 2], &[2, 1], &[1, 4])).value, big(7));
        let mixed = pardue_regularity(&spec(3, &[3, 3], &[1, 1], &[2, 6]));
        assert_eq!(mixed.scale_base, ScaleBase::NotPrimePower);
        assert_eq!(
            pardue_regularity(&spec(2, &[2, 1], &[2, 1], &[3, 27])).scale_base,
            ScaleBase::Prime(3)
        );
    }

    #[test]
    fn huge_scales_stay_exact() {
        let p2: BigUint = BigUint::one() << 100u32;
        let s = SpecialIdealSpec::new(2, vec![2, 2], vec![1, 1], vec![big(1), p2.clone()]).unwrap();
        assert_eq!(s.scale_base(), ScaleBase::Prime(2));
        let t = special_betti_table(&s).unwrap();
        assert_eq!(t.totals(), vec![1, 4, 3]);
        // j = 2 term: p2 + (p2 - 1) * 1
        assert_eq!(pardue_regularity(&s).value, &p2 * 2u32 - 1u32);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(2, 5), big(0));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(power_ideal_gens(3, 2), big(6));
    }

    #[test]
    fn small_specs_match_oracle() {
        use crate::linalg::FieldChar;
        use crate::oracle::betti_table;
        let specs = [
            spec(3, &[3, 2], &[2, 1], &[1, 4]),
            spec(3, &[3, 3], &[1, 1], &[1, 2]),
            spec(2, &[2, 1], &[1, 2], &[1, 3]),
            spec(3, &[3, 1], &[1, 1], &[2, 4]),
        ];
        for s in &specs {
            let ideal = expand_spec(s).unwrap();
            let ours = special_betti_table(s).unwrap();
            for c in [0, 2, 3] {
                let field = if c == 0 {
                    FieldChar::ZERO
                } else {
                    FieldChar::new(c).unwrap()
                };
                assert_eq!(ours, betti_table(&ideal, field).unwrap(), "{s} char {c}");
            }
        }
    }
}
