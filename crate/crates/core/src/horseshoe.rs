//! Conjoined pairs and the Betti table of the reduced horseshoe resolution
//! of `R/IJ` built from resolutions of `R/I` and `R/J`.
//!
//! All tables describe quotients (generators at homological degree 1). The
//! minimality test compares shifts at the same quotient index, matching the
//! worked examples.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::betti::GradedBettiTable;
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal};

/// `(min d, max d)` over the nonzero entries `T(i, d)`.
pub fn min_max_shifts(table: &GradedBettiTable, i: usize) -> Result<(BigUint, BigUint)> {
    table.min_max_shifts(i)
}

/// `|G(IJ)| = |G(I)| · |G(J)|`.
pub fn conjoined_condition_i(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<bool> {
    let product = i.product(j)?;
    Ok(product.num_gens() == i.num_gens() * j.num_gens())
}

/// Outcome of checking the sufficient condition for `(Ibase^[k], J)` to be conjoined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjoinedCheck {
    /// All hypotheses hold.
    Certified,
    BaseNotEquigenerated,
    JNotEquigenerated,
    /// `x_var^(k-1)` is not in `J` (0-based `var`).
    MissingPower {
        var: usize,
        exponent: u64,
    },
}

impl ConjoinedCheck {
    pub fn is_certified(&self) -> bool {
        *self == ConjoinedCheck::Certified
    }
}

impl fmt::Display for ConjoinedCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjoinedCheck::Certified => write!(f, "conjoined"),
            ConjoinedCheck::BaseNotEquigenerated => write!(f, "base ideal is not equigenerated"),
            ConjoinedCheck::JNotEquigenerated => write!(f, "second ideal is not equigenerated"),
            ConjoinedCheck::MissingPower { var, exponent } => {
                write!(f, "x{}^{} is not in the second ideal", var + 1, exponent)
            }
        }
    }
}

/// Checks that `G(Ibase)` and `G(J)` are equigenerated and that
/// `x_i^(k-1) ∈ J` for every `i <= m`, where `x_m` is the last variable
/// dividing a generator of `Ibase`.
pub fn conjoined_by_powers(base: &MonomialIdeal, k: u64, j: &MonomialIdeal) -> Result<ConjoinedCheck> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "bracket exponent k = {k} must be at least 2"
        )));
    }
    if base.nvars() != j.nvars() {
        return Err(Error::DimensionMismatch {
            left: base.nvars(),
            right: j.nvars(),
        });
    }
    if base.equigenerated_degree().is_none() {
        return Ok(ConjoinedCheck::BaseNotEquigenerated);
    }
    if j.equigenerated_degree().is_none() {
        return Ok(ConjoinedCheck::JNotEquigenerated);
    }
    let m = base
        .gens()
        .iter()
        .filter_map(|g| g.support().max())
        .max()
        .map_or(0, |v| v + 1);
    for var in 0..m {
        if !j.contains(&Monomial::var_power(j.nvars(), var, k - 1)) {
            return Ok(ConjoinedCheck::MissingPower { var, exponent: k - 1 });
        }
    }
    Ok(ConjoinedCheck::Certified)
}

/// `m_{k+1}(I) > M_1(I) + M_k(J)` for `1 <= k <= pdim(R/I) - 1`, with every
/// shift read at the same quotient index; a missing row of `J` makes the
/// inequality vacuous.
pub fn shift_gap_minimality(ti: &GradedBettiTable, tj: &GradedBettiTable) -> bool {
    let pdim = ti.pdim();
    if pdim < 2 {
        return true;
    }
    let Ok((_, max1)) = ti.min_max_shifts(1) else {
        return true;
    };
    (1..pdim).all(|k| {
        let Ok((min_next, _)) = ti.min_max_shifts(k + 1) else {
            return true;
        };
        match tj.min_max_shifts(k) {
            Ok((_, max_j)) => min_next > &max1 + max_j,
            Err(_) => true,
        }
    })
}

/// Table of `R/IJ` from the reduced horseshoe resolution:
/// `out(i, d) = g · TJ(i, d - e) + [i >= 2] TI(i, d)` for `i >= 1`.
///
/// `TI` must have its degree-1 row equal to `g` generators of degree `e`.
pub fn reduced_horseshoe_compose(
    ti: &GradedBettiTable,
    tj: &GradedBettiTable,
    g: u64,
    e: &BigUint,
) -> Result<GradedBettiTable> {
    let row1: Vec<(&BigUint, u64)> = ti.row(1).collect();
    if row1.len() != 1 {
        return Err(Error::Precondition(
            "first ideal is not generated in a single degree".into(),
        ));
    }
    if row1[0] != (e, g) {
        return Err(Error::Precondition(format!(
            "first ideal has {} generators of degree {}, not {g} of degree {e}",
            row1[0].1, row1[0].0
        )));
    }
    let mut entries = vec![(0, BigUint::zero(), 1)];
    for (i, d, m) in tj.entries().filter(|(i, _, _)| *i >= 1) {
        let mult = m
            .checked_mul(g)
            .ok_or_else(|| Error::TooLarge("Betti number exceeds 64 bits".into()))?;
        entries.push((i, d + e, mult));
    }
    entries.extend(
        ti.entries()
            .filter(|(i, _, _)| *i >= 2)
            .map(|(i, d, m)| (i, d.clone(), m)),
    );
    GradedBettiTable::from_entries(entries)
}

/// Degree and count of the generators of an equigenerated ideal, as
/// expected by [`reduced_horseshoe_compose`].
pub fn generator_shape(ideal: &MonomialIdeal) -> Result<(u64, BigUint)> {
    let e = ideal
        .equigenerated_degree()
        .ok_or_else(|| Error::Precondition(format!("{ideal} is not equigenerated")))?;
    Ok((ideal.num_gens() as u64, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldChar;
    use crate::oracle::betti_table;

    fn ideal(s: &str) -> MonomialIdeal {
        MonomialIdeal::parse(s, Some(3)).unwrap()
    }

    fn table(s: &str) -> GradedBettiTable {
        betti_table(&ideal(s), FieldChar::ZERO).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn min_max_examples() {
        assert_eq!(min_max_shifts(&table("a^2,b^2,c^2"), 2).unwrap(), (big(4), big(4)));
        assert_eq!(min_max_shifts(&table("a,b,c"), 1).unwrap(), (big(1), big(1)));
        let prod = ideal("a,b,c").product(&ideal("a^2,b^2,c^2")).unwrap();
        let t = betti_table(&prod, FieldChar::ZERO).unwrap();
        assert_eq!(min_max_shifts(&t, 3).unwrap(), (big(5), big(6)));
        assert!(min_max_shifts(&t, 4).is_err());
    }

    #[test]
    fn condition_i_examples() {
        assert!(conjoined_condition_i(&ideal("a^2,b^2,c^2"), &ideal("a,b,c")).unwrap());
        assert!(conjoined_condition_i(&ideal("a"), &ideal("a")).unwrap());
        assert!(!conjoined_condition_i(&ideal("a,b"), &ideal("a,b")).unwrap());
    }

    #[test]
    fn conjoined_by_powers_examples() {
        let max = ideal("a,b,c");
        assert_eq!(conjoined_by_powers(&max, 2, &max).unwrap(), ConjoinedCheck::Certified);
        let w = conjoined_by_powers(&max, 2, &ideal("a,b")).unwrap();
        assert_eq!(w, ConjoinedCheck::MissingPower { var: 2, exponent: 1 });
        assert_eq!(w.to_string(), "x3^1 is not in the second ideal");
        let ab = ideal("a,b");
        let cube = ab.product(&ab).unwrap().product(&ab).unwrap();
        assert!(conjoined_by_powers(&ab, 4, &cube).unwrap().is_certified());
        assert_eq!(
            conjoined_by_powers(&ideal("a,b^2"), 2, &max).unwrap(),
            ConjoinedCheck::BaseNotEquigenerated
        );
        assert_eq!(
            conjoined_by_powers(&max, 2, &ideal("a,b^2,c")).unwrap(),
            ConjoinedCheck::JNotEquigenerated
        );
        assert!(conjoined_by_powers(&max, 1, &max).is_err());
    }

    #[test]
    fn shift_gap_examples() {
        assert!(shift_gap_minimality(&table("a^2,b^2,c^2"), &table("a,b,c")));
        assert!(shift_gap_minimality(&table("a*b"), &table("a,b,c")));
        assert!(!shift_gap_minimality(&table("a,b"), &table("a,b")));
    }

    #[test]
    fn compose_examples() {
        let out = reduced_horseshoe_compose(&table("a^2,b^2,c^2"), &table("a,b,c"), 3, &big(2)).unwrap();
        let prod = ideal("a,b,c").product(&ideal("a^2,b^2,c^2")).unwrap();
        assert_eq!(out, betti_table(&prod, FieldChar::ZERO).unwrap());
        assert_eq!(out.get(2, &big(4)), 12);

        let a = table("a");
        let sq = reduced_horseshoe_compose(&a, &a, 1, &big(1)).unwrap();
        assert_eq!(sq, table("a^2"));

        // not conjoined: the composition overcounts generators of (a,b)^2
        let ab = table("a,b");
        let wrong = reduced_horseshoe_compose(&ab, &ab, 2, &big(1)).unwrap();
        assert_eq!(wrong.totals()[1], 4);
        assert_eq!(table("a^2,a*b,b^2").totals()[1], 3);
    }

    #[test]
    fn compose_validates_generator_shape() {
        let t = table("a^2,b^2,c^2");
        let j = table("a,b,c");
        assert!(reduced_horseshoe_compose(&t, &j, 2, &big(2)).is_err());
        assert!(reduced_horseshoe_compose(&t, &j, 3, &big(3)).is_err());
        assert!(reduced_horseshoe_compose(&table("a,b^2"), &j, 2, &big(1)).is_err());
        assert_eq!(generator_shape(&ideal("a^2,b^2,c^2")).unwrap(), (3, big(2)));
        assert!(generator_shape(&ideal("a,b^2")).is_err());
    }
}
