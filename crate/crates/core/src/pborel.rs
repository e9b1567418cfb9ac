//! The digit order `≺_p`, p-Borel ideals, Borel-sense generation, and the
//! product structure of principal p-Borel ideals.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::is_prime;
use crate::monomial::{minimalize, Monomial, MonomialIdeal};

/// Base-`p` digits of a natural number, least significant first, without
/// trailing zeros (zero has no digits).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicExpansion {
    base: u64,
    digits: Vec<u64>,
}

impl PAdicExpansion {
    pub fn new(value: &BigUint, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base {base} is below 2")));
        }
        let b = BigUint::from(base);
        let mut v = value.clone();
        let mut digits = Vec::new();
        while !v.is_zero() {
            let r = &v % &b;
            digits.push(r.to_u64().expect("digit below base"));
            v /= &b;
        }
        Ok(Self { base, digits })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at position `i` (zero past the end).
    pub fn digit(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn value(&self) -> BigUint {
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * self.base + d)
    }

    /// Every `s` whose digits are bounded by these digits, in increasing order.
    fn dominated(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero()];
        let mut place = BigUint::one();
        for &d in &self.digits {
            let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
            for k in 0..=d {
                let add = &place * k;
                next.extend(out.iter().map(|s| s + &add));
            }
            out = next;
            place *= self.base;
        }
        out.sort();
        out
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `s ≺_p t`: every base-`p` digit of `s` is at most the matching digit of `t`.
pub fn prec_p(s: &BigUint, t: &BigUint, p: u64) -> Result<bool> {
    check_prime(p)?;
    let s = PAdicExpansion::new(s, p)?;
    let t = PAdicExpansion::new(t, p)?;
    Ok((0..s.digits.len()).all(|i| s.digit(i) <= t.digit(i)))
}

/// A failed p-Borel move: `(x_to / x_from)^s · m` is not in the ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelViolation {
    pub generator: Monomial,
    /// 0-based index of the variable gaining exponent (`i < j`).
    pub to: usize,
    /// 0-based index of the variable losing exponent.
    pub from: usize,
    pub s: BigUint,
}

impl fmt::Display for BorelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x{}/x{})^{} * {} is not in the ideal",
            self.to + 1,
            self.from + 1,
            self.s,
            self.generator
        )
    }
}

/// All p-Borel moves of `m`: `(x_i/x_j)^s · m` for `i < j`, `x_j^t ‖ m`,
/// `0 < s ≺_p t`.
fn moves(m: &Monomial, p: u64) -> Vec<(usize, usize, BigUint, Monomial)> {
    let n = m.nvars();
    let mut out = Vec::new();
    for j in 1..n {
        let t = m.exponent(j);
        if t.is_zero() {
            continue;
        }
        let exp = PAdicExpansion::new(t, p).expect("p is at least 2");
        for s in exp.dominated().into_iter().skip(1) {
            assert!(&s <= t, "s ≺_p t must imply s <= t");
            for i in 0..j {
                let mut e = m.exponents().to_vec();
                e[i] += &s;
                e[j] -= &s;
                out.push((i, j, s.clone(), Monomial::new(e)));
            }
        }
    }
    out
}

/// The first failing move over the minimal generators, or `None` when `I` is p-Borel.
pub fn p_borel_violation(ideal: &MonomialIdeal, p: u64) -> Result<Option<BorelViolation>> {
    check_prime(p)?;
    for m in ideal.gens() {
        for (i, j, s, moved) in moves(m, p) {
            if !ideal.contains(&moved) {
                return Ok(Some(BorelViolation {
                    generator: m.clone(),
                    to: i,
                    from: j,
                    s,
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_p_borel(ideal: &MonomialIdeal, p: u64) -> Result<bool> {
    Ok(p_borel_violation(ideal, p)?.is_none())
}

/// The smallest p-Borel ideal containing every monomial of `seeds`
/// (the ideal generated by `seeds` "in the Borel sense").
pub fn p_borel_closure(seeds: &[Monomial], p: u64, nvars: usize) -> Result<MonomialIdeal> {
    check_prime(p)?;
    if seeds.is_empty() {
        return Err(Error::ZeroIdeal);
    }
    if let Some(bad) = seeds.iter().find(|m| m.nvars() != nvars) {
        return Err(Error::DimensionMismatch {
            left: nvars,
            right: bad.nvars(),
        });
    }
    let mut found: Vec<Monomial> = Vec::new();
    let mut queue: VecDeque<Monomial> = seeds.iter().cloned().collect();
    while let Some(m) = queue.pop_front() {
        // moves never leave the ideal, so anything already covered adds nothing
        if found.iter().any(|g| g.divides_unchecked(&m)) {
            continue;
        }
        found.push(m.clone());
        for (_, _, _, moved) in moves(&m, p) {
            if !found.iter().any(|g| g.divides_unchecked(&moved)) {
                queue.push_back(moved);
            }
        }
    }
    minimalize(found)
}

/// `<x^μ>` computed through the factorization
/// `∏_{k,i} (x_1^{p^i}, ..., x_k^{p^i})^{μ_{k,i}}` with `μ_k = Σ_i μ_{k,i} p^i`.
pub fn principal_structure(mu: &[BigUint], p: u64) -> Result<MonomialIdeal> {
    check_prime(p)?;
    let n = mu.len();
    let mut result: Option<MonomialIdeal> = None;
    for (k, mu_k) in mu.iter().enumerate() {
        let digits = PAdicExpansion::new(mu_k, p)?;
        let mut scale = BigUint::one();
        for &d in digits.digits() {
            if d > 0 {
                let factor = MonomialIdeal::power_ideal(n, k + 1, d, scale.clone())?;
                result = Some(match result {
                    None => factor,
                    Some(acc) => acc.product(&factor)?,
                });
            }
            scale *= p;
        }
    }
    result.ok_or_else(|| Error::InvalidArgument("exponent vector μ is zero".into()))
}
