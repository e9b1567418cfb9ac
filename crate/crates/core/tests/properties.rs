use std::collections::BTreeMap;

use proptest::prelude::*;

use pborel_core::oracle::{betti_table, multigraded_betti};
use pborel_core::pborel::{is_p_borel, p_borel_closure, principal_structure};
use pborel_core::special::{expand_spec, special_betti_table};
use pborel_core::{minimalize, FieldChar, Monomial, MonomialIdeal, SpecialIdealSpec};

fn monomial(n: usize, max: u64) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max, n).prop_map(|e| Monomial::from_exps(&e))
}

fn ideal(n: usize, max: u64, gens: usize) -> impl Strategy<Value = MonomialIdeal> {
    prop::collection::vec(monomial(n, max), 1..=gens).prop_filter_map("unit ideal", |g| minimalize(g).ok())
}

fn field() -> impl Strategy<Value = FieldChar> {
    prop_oneof![Just(0u64), Just(2), Just(3), Just(5)].prop_map(|c| FieldChar::new(c).unwrap_or(FieldChar::ZERO))
}

/// `Σ_{S ⊆ G} (-1)^|S| t^deg lcm(S)`, keyed by degree.
fn k_polynomial_by_inclusion_exclusion(i: &MonomialIdeal) -> BTreeMap<u64, i64> {
    let gens = i.gens();
    let mut poly = BTreeMap::new();
    for mask in 0u32..(1 << gens.len()) {
        let mut lcm = Monomial::one(i.nvars());
        for (k, g) in gens.iter().enumerate() {
            if mask >> k & 1 == 1 {
                lcm = lcm.lcm(g).unwrap();
            }
        }
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        *poly.entry(u64::try_from(lcm.degree()).unwrap()).or_default() += sign;
    }
    poly.retain(|_, c| *c != 0);
    poly
}

fn valid_spec() -> impl Strategy<Value = SpecialIdealSpec> {
    (1..=3usize, 1..=2usize, 1..=2u64, 2..=4u64, 1..=3u64, 1..=2u64)
        .prop_flat_map(|(n, s, p1, ratio, a1, a2)| (Just((n, s, p1, ratio, a2)), 1..=n, Just(a1.min(ratio - 1))))
        .prop_map(|((n, s, p1, ratio, a2), l2, a1)| {
            if s == 1 {
                SpecialIdealSpec::from_parts(n, &[n], &[a1], &[p1]).unwrap()
            } else {
                SpecialIdealSpec::from_parts(n, &[n, l2], &[a1, a2], &[p1, p1 * ratio]).unwrap()
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimalize_is_idempotent(i in ideal(4, 5, 8)) {
        prop_assert_eq!(minimalize(i.gens().iter().cloned()).unwrap(), i.clone());
        for (a, b) in i.gens().iter().zip(i.gens().iter().skip(1)) {
            prop_assert!(!a.divides(b).unwrap() && !b.divides(a).unwrap());
        }
    }

    #[test]
    fn bracket_powers_compose(i in ideal(3, 4, 6), k in 1..5u32, l in 1..5u32) {
        let lhs = i.bracket_power(k).unwrap().bracket_power(l).unwrap();
        prop_assert_eq!(lhs, i.bracket_power(k * l).unwrap());
    }

    #[test]
    fn colon_undoes_principal_product(i in ideal(3, 4, 6), m in monomial(3, 3)) {
        let principal = minimalize([m.clone()]);
        prop_assume!(principal.is_ok());
        let back = i.product(&principal.unwrap()).unwrap().colon(&m).unwrap();
        prop_assert_eq!(back, i);
    }

    #[test]
    fn colon_contains_ideal(i in ideal(3, 4, 6), m in monomial(3, 3)) {
        prop_assume!(!i.contains(&m));
        let c = i.colon(&m).unwrap();
        prop_assert!(i.gens().iter().all(|g| c.contains(g)));
        prop_assert!(c.gens().iter().all(|g| i.contains(&g.mul(&m).unwrap())));
    }

    #[test]
    fn oracle_matches_inclusion_exclusion(i in ideal(3, 3, 6), f in field()) {
        let t = betti_table(&i, f).unwrap();
        let mut alternating: BTreeMap<u64, i64> = BTreeMap::new();
        for (k, d, m) in t.entries() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            *alternating.entry(u64::try_from(d).unwrap()).or_default() += sign * m as i64;
        }
        alternating.retain(|_, c| *c != 0);
        prop_assert_eq!(alternating, k_polynomial_by_inclusion_exclusion(&i));
        prop_assert!(t.pdim() <= i.nvars());
        prop_assert_eq!(t.totals()[1] as usize, i.num_gens());
    }

    #[test]
    fn multigraded_degrees_lie_in_lcm_lattice(i in ideal(3, 3, 5)) {
        let m = multigraded_betti(&i, FieldChar::ZERO).unwrap();
        for (k, b, _) in m.entries() {
            if k == 0 {
                continue;
            }
            let below: Vec<&Monomial> = i.gens().iter().filter(|g| g.divides(b).unwrap()).collect();
            let lcm = below.iter().fold(Monomial::one(3), |acc, g| acc.lcm(g).unwrap());
            prop_assert_eq!(&lcm, b);
        }
    }

    #[test]
    fn closure_is_p_borel_and_minimal_over_seeds(seed in monomial(3, 5), p in prop_oneof![Just(2u64), Just(3)]) {
        prop_assume!(!seed.is_one());
        let c = p_borel_closure(std::slice::from_ref(&seed), p, 3).unwrap();
        prop_assert!(is_p_borel(&c, p).unwrap());
        prop_assert!(c.contains(&seed));
        prop_assert_eq!(principal_structure(seed.exponents(), p).unwrap(), c);
    }

    #[test]
    fn special_table_matches_oracle(spec in valid_spec(), f in field()) {
        let t = special_betti_table(&spec).unwrap();
        prop_assert_eq!(t, betti_table(&expand_spec(&spec).unwrap(), f).unwrap());
    }
}
