//! Exact matrix rank over `Q` and over prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Characteristic of the coefficient field: `0` (the rationals) or a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldChar(u64);

impl FieldChar {
    pub const ZERO: FieldChar = FieldChar(0);

    pub fn new(value: u64) -> Result<Self> {
        if value == 0 || is_prime(value) {
            Ok(Self(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for FieldChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for FieldChar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad characteristic {s:?}")))?;
        Self::new(v)
    }
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn rank(&self, field: FieldChar) -> usize {
        match field.value() {
            0 => rank_rational(self),
            p => rank_mod_p(self, p),
        }
    }
}

/// Fraction-free (Bareiss) elimination over the integers; the rank over `Q`.
fn rank_rational(m: &IntMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| (0..cols).map(|c| BigInt::from(m.get(r, c))).collect())
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        if rank == rows {
            break;
        }
        // smallest nonzero pivot keeps intermediate entries short
        let Some(piv) = (rank..rows)
            .filter(|&r| !a[r][col].is_zero())
            .min_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()))
        else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                for c in col + 1..cols {
                    // keep the row on the common Bareiss scale
                    a[r][c] = &a[r][c] * &a[rank][col] / &prev;
                }
                continue;
            }
            let factor = a[r][col].clone();
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &factor * &a[rank][c];
                debug_assert!((&v % &prev).is_zero(), "inexact Bareiss division");
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let p128 = p as i128;
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| (m.get(r, c) as i128).rem_euclid(p128) as u64)
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = mod_inverse(a[rank][col], p);
        for x in &mut a[rank][col..cols] {
            *x = mul_mod(*x, inv, p);
        }
        let (top, below) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in below.iter_mut().take(rows - rank - 1) {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for (x, &y) in row[col..cols].iter_mut().zip(&pivot_row[col..cols]) {
                let sub = mul_mod(f, y, p);
                *x = (*x + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}
