//! Monomials and monomial ideals.
//!
//! A [`Monomial`] is an exponent vector of arbitrary-precision naturals in a
//! fixed number of variables. A [`MonomialIdeal`] always stores its unique
//! minimal generating set, sorted by degree and then lexicographically with
//! `x1 > x2 > ... > xn`, so two ideals are equal exactly when their
//! generator lists are.
//!
//! Text syntax: a monomial is a product of tokens `x<i>^<e>` (or the letters
//! `a`..`e` for `x1`..`x5`) joined by `*`, for example `x1^3*x2` or `a^3*b`;
//! `1` is the identity. The `*` may be omitted between letter tokens, so
//! `a^2bc` is accepted too. An ideal is a comma-separated list of monomials.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const LETTERS: [char; 5] = ['a', 'b', 'c', 'd', 'e'];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<BigUint>,
}

impl Monomial {
    pub fn new(exps: Vec<BigUint>) -> Self {
        Self { exps }
    }

    /// Builds a monomial from machine-sized exponents.
    pub fn from_exps(exps: &[u64]) -> Self {
        Self {
            exps: exps.iter().map(|&e| BigUint::from(e)).collect(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self {
            exps: vec![BigUint::zero(); nvars],
        }
    }

    /// `x_var^exp` in `nvars` variables (0-based `var`).
    pub fn var_power(nvars: usize, var: usize, exp: impl Into<BigUint>) -> Self {
        let mut m = Self::one(nvars);
        m.exps[var] = exp.into();
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[BigUint] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> &BigUint {
        &self.exps[var]
    }

    pub fn degree(&self) -> BigUint {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(Zero::is_zero)
    }

    /// Indices of the variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, _)| i)
    }

    /// Exponents as `u64`, or `None` if one does not fit.
    pub fn to_u64_exps(&self) -> Option<Vec<u64>> {
        self.exps.iter().map(ToPrimitive::to_u64).collect()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.nvars() == other.nvars() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.nvars(),
                right: other.nvars(),
            })
        }
    }

    /// True iff `self` divides `other`.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.divides_unchecked(other))
    }

    pub(crate) fn divides_unchecked(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.lcm_unchecked(other))
    }

    pub(crate) fn lcm_unchecked(&self, other: &Self) -> Self {
        Self {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.gcd_unchecked(other))
    }

    pub(crate) fn gcd_unchecked(&self, other: &Self) -> Self {
        Self {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
        }
    }

    /// Componentwise max and min.
    pub fn lcm_gcd(&self, other: &Self) -> Result<(Self, Self)> {
        self.check_dim(other)?;
        Ok((self.lcm_unchecked(other), self.gcd_unchecked(other)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        Self {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Self) -> Result<Option<Self>> {
        self.check_dim(other)?;
        if !other.divides_unchecked(self) {
            return Ok(None);
        }
        Ok(Some(Self {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        }))
    }

    /// Every exponent multiplied by `k` (the Frobenius-style bracket power `u^[k]`).
    pub fn scale(&self, k: &BigUint) -> Self {
        Self {
            exps: self.exps.iter().map(|e| e * k).collect(),
        }
    }

    /// Parses a monomial in exactly `nvars` variables.
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let factors = parse_factors(text)?;
        let mut m = Self::one(nvars);
        for (var, exp) in factors {
            if var >= nvars {
                return Err(Error::Parse(format!(
                    "variable x{} out of range for {nvars} variables",
                    var + 1
                )));
            }
            m.exps[var] += exp;
        }
        Ok(m)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with `x1 > x2 > ... > xn`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let letters = self.nvars() <= LETTERS.len();
        let mut first = true;
        for (i, e) in self.exps.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if letters {
                write!(f, "{}", LETTERS[i])?;
            } else {
                write!(f, "x{}", i + 1)?;
            }
            if !e.is_one() {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Splits monomial text into `(0-based variable, exponent)` factors.
fn parse_factors(text: &str) -> Result<Vec<(usize, BigUint)>> {
    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty monomial".into()));
    }
    if s == ['1'] {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < s.len() {
        if s[pos] == '*' {
            if pos == 0 || pos + 1 == s.len() || s[pos + 1] == '*' {
                return Err(Error::Parse(format!("misplaced '*' in {text:?}")));
            }
            pos += 1;
            continue;
        }
        let var = match s[pos] {
            c @ 'a'..='e' => {
                pos += 1;
                c as usize - 'a' as usize
            }
            'x' => {
                pos += 1;
                let digits = take_digits(&s, &mut pos);
                let idx: usize = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable index in {text:?}")))?;
                if idx == 0 {
                    return Err(Error::Parse("variables are numbered from x1".into()));
                }
                idx - 1
            }
            c => return Err(Error::Parse(format!("unexpected {c:?} in {text:?}"))),
        };
        let exp = if pos < s.len() && s[pos] == '^' {
            pos += 1;
            let digits = take_digits(&s, &mut pos);
            digits
                .parse::<BigUint>()
                .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?
        } else {
            BigUint::one()
        };
        out.push((var, exp));
    }
    Ok(out)
}

fn take_digits(s: &[char], pos: &mut usize) -> String {
    let start = *pos;
    while *pos < s.len() && s[*pos].is_ascii_digit() {
        *pos += 1;
    }
    s[start..*pos].iter().collect()
}

/// Number of variables mentioned by monomial text (highest index used).
fn max_var_in(text: &str) -> Result<usize> {
    Ok(parse_factors(text)?.iter().map(|(v, _)| v + 1).max().unwrap_or(0))
}

/// A monomial ideal, stored as its minimal generating set `G(I)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

/// Minimal elements of `raw` under divisibility, as an ideal.
///
/// Rejects the empty set (the zero ideal) and any set containing `1`.
pub fn minimalize<I>(raw: I) -> Result<MonomialIdeal>
where
    I: IntoIterator<Item = Monomial>,
{
    let mut raw: Vec<Monomial> = raw.into_iter().collect();
    let nvars = raw.first().ok_or(Error::ZeroIdeal)?.nvars();
    if let Some(bad) = raw.iter().find(|m| m.nvars() != nvars) {
        return Err(Error::DimensionMismatch {
            left: nvars,
            right: bad.nvars(),
        });
    }
    raw.sort();
    raw.dedup();
    let mut gens: Vec<Monomial> = Vec::with_capacity(raw.len());
    for m in raw {
        if !gens.iter().any(|g| g.divides_unchecked(&m)) {
            gens.push(m);
        }
    }
    if gens[0].is_one() {
        return Err(Error::UnitIdeal);
    }
    gens.sort_by(canonical_order);
    Ok(MonomialIdeal { nvars, gens })
}

/// Degree ascending, then lexicographically descending (`a^3` before `a^2b`).
pub(crate) fn canonical_order(u: &Monomial, v: &Monomial) -> Ordering {
    u.degree().cmp(&v.degree()).then_with(|| v.exps.cmp(&u.exps))
}

impl MonomialIdeal {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides_unchecked(m))
    }

    /// lcm of all minimal generators.
    pub fn lcm(&self) -> Monomial {
        self.gens
            .iter()
            .skip(1)
            .fold(self.gens[0].clone(), |acc, g| acc.lcm_unchecked(g))
    }

    /// The common degree of `G(I)`, if all generators share one.
    pub fn equigenerated_degree(&self) -> Option<BigUint> {
        let d = self.gens[0].degree();
        self.gens.iter().all(|g| g.degree() == d).then_some(d)
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.nvars == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.nvars,
                right: other,
            })
        }
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.nvars)?;
        minimalize(
            self.gens
                .iter()
                .flat_map(|u| other.gens.iter().map(move |v| u.mul_unchecked(v))),
        )
    }

    /// `I^[k]`: every generator with its exponents multiplied by `k`.
    pub fn bracket_power(&self, k: impl Into<BigUint>) -> Result<Self> {
        let k = k.into();
        if k.is_zero() {
            return Err(Error::InvalidArgument("bracket power k must be >= 1".into()));
        }
        // scaling preserves and reflects divisibility, so no re-minimalization
        let mut gens: Vec<Monomial> = self.gens.iter().map(|g| g.scale(&k)).collect();
        gens.sort_by(canonical_order);
        Ok(Self {
            nvars: self.nvars,
            gens,
        })
    }

    /// The colon ideal `I : m`.
    ///
    /// Fails with [`Error::UnitIdeal`] when `m` already lies in `I`.
    pub fn colon(&self, m: &Monomial) -> Result<Self> {
        self.check_dim(m.nvars())?;
        minimalize(self.gens.iter().map(|u| {
            let g = u.gcd_unchecked(m);
            u.checked_div(&g).unwrap().unwrap()
        }))
    }

    /// `(x1^scale, ..., x_ell^scale)^a` in `nvars` variables.
    pub fn power_ideal(nvars: usize, ell: usize, a: u64, scale: impl Into<BigUint>) -> Result<Self> {
        let scale = scale.into();
        if ell == 0 || ell > nvars {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= ell <= n, got ell={ell}, n={nvars}"
            )));
        }
        if a == 0 {
            return Err(Error::InvalidArgument("power a must be >= 1".into()));
        }
        if scale.is_zero() {
            return Err(Error::InvalidArgument("scale must be >= 1".into()));
        }
        let mut gens = Vec::new();
        let mut exps = vec![0u64; nvars];
        compositions(a, ell, 0, &mut exps, &mut |e| {
            gens.push(Monomial::from_exps(e).scale(&scale));
        });
        gens.sort_by(canonical_order);
        Ok(Self { nvars, gens })
    }

    /// Parses comma-separated monomials. With `nvars = None` the ambient
    /// dimension is the largest variable index that occurs.
    pub fn parse(text: &str, nvars: Option<usize>) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
        if parts.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        let needed = parts
            .iter()
            .map(|p| max_var_in(p))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0)
            .max(1);
        let n = match nvars {
            Some(n) if n < needed => {
                return Err(Error::Parse(format!(
                    "ideal uses {needed} variables but only {n} were declared"
                )))
            }
            Some(n) => n,
            None => needed,
        };
        minimalize(
            parts
                .iter()
                .map(|p| Monomial::parse(p, n))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

/// Calls `f` with every exponent vector of total degree `remaining` supported on
/// positions `pos..ell`.
fn compositions(remaining: u64, ell: usize, pos: usize, exps: &mut [u64], f: &mut impl FnMut(&[u64])) {
    if pos + 1 == ell {
        exps[pos] = remaining;
        f(exps);
        exps[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        exps[pos] = e;
        compositions(remaining - e, ell, pos + 1, exps, f);
    }
    exps[pos] = 0;
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}
