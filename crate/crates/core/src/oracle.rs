//! Brute-force Betti numbers of arbitrary monomial ideals.
//!
//! For a multidegree `b`, the upper Koszul simplicial complex is
//! `K^b(I) = { σ ⊆ supp(b) squarefree : x^(b - σ) ∈ I }` and
//! `β_{i,b}(R/I) = dim H̃_{i-2}(K^b(I); k)` for `i >= 1`. Every `b` in the box
//! below `lcm(G(I))` is visited; only multidegrees in the lcm lattice can
//! contribute, but the box stays small for the ideals handled here.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::betti::{GradedBettiTable, MultigradedBettiTable};
use crate::error::{Error, Result};
use crate::linalg::FieldChar;
use crate::monomial::{Monomial, MonomialIdeal};
use crate::simplicial::SimplicialComplex;

/// Upper bound on the number of multidegrees visited by [`multigraded_betti`].
pub const MAX_BOX_POINTS: u64 = 20_000_000;

/// Generators as machine exponent vectors.
struct SmallIdeal {
    gens: Vec<Vec<u64>>,
}

impl SmallIdeal {
    fn new(ideal: &MonomialIdeal) -> Result<Self> {
        let gens = ideal
            .gens()
            .iter()
            .map(|g| {
                g.to_u64_exps()
                    .ok_or_else(|| Error::TooLarge(format!("exponent of {g} exceeds 64 bits")))
            })
            .collect::<Result<_>>()?;
        Ok(Self { gens })
    }

    fn contains(&self, exps: &[u64]) -> bool {
        self.gens.iter().any(|g| g.iter().zip(exps).all(|(a, b)| a <= b))
    }

    /// `K^b` with faces given as bitmasks over variable indices.
    fn upper_koszul_masks(&self, b: &[u64]) -> Vec<u32> {
        let support: u32 = b
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |acc, (i, _)| acc | 1 << i);
        let mut shifted = b.to_vec();
        let mut faces = Vec::new();
        // iterate the submasks of the support, including the empty set
        let mut sigma = support;
        loop {
            for (i, e) in shifted.iter_mut().enumerate() {
                *e = b[i] - u64::from(sigma >> i & 1);
            }
            if self.contains(&shifted) {
                faces.push(sigma);
            }
            if sigma == 0 {
                break;
            }
            sigma = (sigma - 1) & support;
        }
        faces
    }
}

fn masks_to_complex(masks: &[u32]) -> SimplicialComplex {
    let faces: BTreeSet<Vec<usize>> = masks
        .iter()
        .map(|&m| (0..32).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    SimplicialComplex::from_faces_unchecked(faces)
}

/// The upper Koszul simplicial complex `K^b(I)` on vertices `0..n`.
pub fn upper_koszul(ideal: &MonomialIdeal, b: &Monomial) -> Result<SimplicialComplex> {
    if b.nvars() != ideal.nvars() {
        return Err(Error::DimensionMismatch {
            left: ideal.nvars(),
            right: b.nvars(),
        });
    }
    check_width(ideal.nvars())?;
    let small = SmallIdeal::new(ideal)?;
    let Some(bb) = b.to_u64_exps() else {
        return Err(Error::TooLarge(format!("multidegree {b} exceeds 64 bits")));
    };
    Ok(masks_to_complex(&small.upper_koszul_masks(&bb)))
}

fn check_width(nvars: usize) -> Result<()> {
    if nvars > 31 {
        Err(Error::TooLarge(format!("{nvars} variables (at most 31 supported)")))
    } else {
        Ok(())
    }
}

/// Multigraded Betti numbers of `R/I` over a field of the given characteristic.
pub fn multigraded_betti(ideal: &MonomialIdeal, field: FieldChar) -> Result<MultigradedBettiTable> {
    let n = ideal.nvars();
    check_width(n)?;
    let small = SmallIdeal::new(ideal)?;
    let bound = ideal
        .lcm()
        .to_u64_exps()
        .ok_or_else(|| Error::TooLarge("lcm exponent exceeds 64 bits".into()))?;
    let points = bound
        .iter()
        .try_fold(1u64, |acc, &e| acc.checked_mul(e + 1))
        .filter(|&p| p <= MAX_BOX_POINTS)
        .ok_or_else(|| Error::TooLarge(format!("multidegree box below {} is too large", ideal.lcm())))?;

    let contributions: Vec<(usize, Vec<u64>, u64)> = (0..points)
        .into_par_iter()
        .flat_map_iter(|idx| {
            let b = unrank(idx, &bound);
            let masks = if small.contains(&b) {
                small.upper_koszul_masks(&b)
            } else {
                Vec::new()
            };
            let mut out = Vec::new();
            if !masks.is_empty() {
                let h = masks_to_complex(&masks).reduced_homology(field);
                for (k, dim) in h.nonzero() {
                    out.push(((k + 2) as usize, b.clone(), dim as u64));
                }
            }
            out
        })
        .collect();

    let mut table = MultigradedBettiTable::unit(n);
    for (i, b, m) in contributions {
        table.insert(i, Monomial::from_exps(&b), m);
    }
    Ok(table)
}

/// Mixed-radix decoding of a box index.
fn unrank(mut idx: u64, bound: &[u64]) -> Vec<u64> {
    bound
        .iter()
        .map(|&e| {
            let v = idx % (e + 1);
            idx /= e + 1;
            v
        })
        .collect()
}

/// Graded Betti table of `R/I`.
pub fn betti_table(ideal: &MonomialIdeal, field: FieldChar) -> Result<GradedBettiTable> {
    Ok(multigraded_betti(ideal, field)?.coarse())
}

/// Thread-safe memo of oracle tables keyed by `(ideal, characteristic)`.
#[derive(Default)]
pub struct BettiCache {
    graded: Mutex<HashMap<(MonomialIdeal, FieldChar), Arc<GradedBettiTable>>>,
    multigraded: Mutex<HashMap<(MonomialIdeal, FieldChar), Arc<MultigradedBettiTable>>>,
}

impl BettiCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn graded(&self, ideal: &MonomialIdeal, field: FieldChar) -> Result<Arc<GradedBettiTable>> {
        let key = (ideal.clone(), field);
        if let Some(t) = self.graded.lock().unwrap().get(&key) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(self.multigraded(ideal, field)?.coarse());
        Ok(Arc::clone(self.graded.lock().unwrap().entry(key).or_insert(table)))
    }

    pub fn multigraded(&self, ideal: &MonomialIdeal, field: FieldChar) -> Result<Arc<MultigradedBettiTable>> {
        let key = (ideal.clone(), field);
        if let Some(t) = self.multigraded.lock().unwrap().get(&key) {
            return Ok(Arc::clone(t));
        }
        // computed outside the lock; a racing duplicate is discarded
        let table = Arc::new(multigraded_betti(ideal, field)?);
        Ok(Arc::clone(self.multigraded.lock().unwrap().entry(key).or_insert(table)))
    }

    pub fn len(&self) -> usize {
        self.multigraded.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
