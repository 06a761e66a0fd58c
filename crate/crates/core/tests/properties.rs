use num_bigint::BigInt;
use num_integer::binomial;
use proptest::prelude::*;

use rostmot_core::arith::{binom_mod_p, unit_power, LocalInt, Prime};
use rostmot_core::correspondences::Corr;
use rostmot_core::end_algebra::EndTuple;
use rostmot_core::motivic_cohomology::{gamma, mu, Bidegree};
use rostmot_core::rost_chow::{closed_form, recurrence, ChowKind};
use rostmot_core::split_algebra::{ChowClass, SymbolParams};
use rostmot_core::steenrod::{
    audit_generators, audit_leading_term, replay, valuation_bound, PairingContext, Slot, SteenAtom, SteenProduct,
    Verdict,
};
use rostmot_core::sym_powers::build_morphisms;

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

/// A `p`-local rational with small numerator and denominator.
fn local(p: u64) -> impl Strategy<Value = LocalInt> {
    (-60i64..=60, 1i64..=40).prop_map(move |(n, d)| {
        let d = if (d as u64).is_multiple_of(p) { d + 1 } else { d };
        LocalInt::new(n, d).unwrap()
    })
}

fn unit_degree(p: u64) -> impl Strategy<Value = LocalInt> {
    local(p).prop_filter("unit", move |x| x.is_unit(prime(p)))
}

fn params_with(p: u64) -> impl Strategy<Value = SymbolParams> {
    (1u32..=3, unit_degree(p)).prop_map(move |(n, e)| SymbolParams::new(p, n, e).unwrap())
}

fn any_params() -> impl Strategy<Value = SymbolParams> {
    small_prime().prop_flat_map(params_with)
}

fn class(s: SymbolParams) -> impl Strategy<Value = ChowClass> {
    let p = s.p();
    prop::collection::vec(local(p), s.top() as usize + 1).prop_map(move |cs| {
        ChowClass::from_terms(&s, cs.into_iter().enumerate().map(|(k, c)| (k as u32, c))).unwrap()
    })
}

fn corr(s: SymbolParams) -> impl Strategy<Value = Corr> {
    let p = s.p();
    let size = (s.top() as usize + 1).pow(2);
    prop::collection::vec(local(p), size).prop_map(move |cs| {
        let w = s.top() + 1;
        Corr::from_terms(&s, cs.into_iter().enumerate().map(|(idx, c)| ((idx as u32 / w, idx as u32 % w), c))).unwrap()
    })
}

fn antidiagonal(s: SymbolParams) -> impl Strategy<Value = Corr> {
    let p = s.p();
    prop::collection::vec(local(p), s.top() as usize + 1).prop_map(move |cs| {
        let top = s.top();
        Corr::from_terms(&s, cs.into_iter().enumerate().map(|(i, c)| ((i as u32, top - i as u32), c))).unwrap()
    })
}

fn rational_tuple(p: u64) -> impl Strategy<Value = EndTuple> {
    (local(p), prop::collection::vec(local(p), p as usize)).prop_map(move |(lambda, u)| {
        let pp = LocalInt::from(p);
        EndTuple::new(u.iter().map(|x| &lambda + &(&pp * x)).collect(), prime(p)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_is_idempotent(n in -1000i64..1000, d in 1i64..1000) {
        let x = LocalInt::new(n, d).unwrap();
        let y = LocalInt::new(x.numer().clone(), x.denom().clone()).unwrap();
        prop_assert_eq!(&x, &y);
        prop_assert_eq!(x.to_string().parse::<LocalInt>().unwrap(), x.clone());
    }

    #[test]
    fn valuation_is_additive((p, x, y) in small_prime().prop_flat_map(|p| (Just(p), local(p), local(p)))) {
        let q = prime(p);
        let (vx, vy) = (x.val_p(q).unwrap(), y.val_p(q).unwrap());
        prop_assert_eq!((&x * &y).val_p(q).unwrap(), vx + vy);
        prop_assert!((&x + &y).val_p(q).unwrap() >= vx.min(vy));
    }

    #[test]
    fn one_unit_powers_grow((p, u) in small_prime().prop_flat_map(|p| (Just(p), local(p))), r in 0u32..=5) {
        if p.pow(r) > 3200 {
            return Ok(());
        }
        let lambda = &LocalInt::one() + &(&LocalInt::from(p) * &u);
        let power = unit_power(&lambda, p.pow(r) as u32, prime(p)).unwrap();
        prop_assert!((&power - &LocalInt::one()).val_p(prime(p)).unwrap().is_at_least(r as u64 + 1));
    }

    #[test]
    fn class_ring_laws((a, b, c) in any_params().prop_flat_map(|s| (class(s.clone()), class(s.clone()), class(s)))) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn degree_pairing((a, b) in any_params().prop_flat_map(|s| (class(s.clone()), class(s)))) {
        let s = a.params().clone();
        let top = s.top();
        let pairing: LocalInt = (0..=top).map(|i| &a.coeff(i) * &b.coeff(top - i)).sum();
        prop_assert_eq!(a.mul(&b).unwrap().degree(), s.e() * &pairing);
        let shifted = ChowClass::h_power(&s, 1).unwrap().mul(&a).unwrap();
        for k in 1..=top {
            prop_assert_eq!(shifted.coeff(k), a.coeff(k - 1));
        }
    }

    #[test]
    fn composition_is_associative(
        (a, b, c) in small_prime().prop_filter("small", |p| *p <= 5).prop_flat_map(params_with)
            .prop_flat_map(|s| (corr(s.clone()), corr(s.clone()), corr(s)))
    ) {
        let left = c.compose(&b).unwrap().compose(&a).unwrap();
        let right = c.compose(&b.compose(&a).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(b.compose(&a).unwrap().transpose(), a.transpose().compose(&b.transpose()).unwrap());
    }

    #[test]
    fn tuples_intertwine_composition((a, b) in any_params().prop_flat_map(|s| (antidiagonal(s.clone()), antidiagonal(s)))) {
        let composed = b.compose(&a).unwrap();
        prop_assert_eq!(
            composed.to_tuple().unwrap(),
            b.to_tuple().unwrap().mul(&a.to_tuple().unwrap()).unwrap()
        );
        let s = a.params().clone();
        prop_assert_eq!(Corr::from_tuple(&s, &a.to_tuple().unwrap()).unwrap(), a);
    }

    #[test]
    fn projector_laws_for_any_unit_degree(s in any_params()) {
        let pi = Corr::rost_projector(&s);
        prop_assert_eq!(pi.compose(&pi).unwrap(), pi.clone());
        prop_assert_eq!(pi.transpose(), pi.clone());
        prop_assert!(pi.mult().is_one());
        prop_assert_eq!(pi.diag_pullback().degree(), LocalInt::from(s.p()));
        let sigma = Corr::sigma(&s);
        prop_assert_eq!(sigma.transpose(), sigma.neg());
    }

    #[test]
    fn rational_tuples_are_closed(
        (p, a, b, c) in small_prime().prop_flat_map(|p| (Just(p), rational_tuple(p), rational_tuple(p), local(p)))
    ) {
        prop_assert!(a.mul(&b).unwrap().is_rational());
        prop_assert!(a.add(&b).unwrap().is_rational());
        prop_assert!(a.scale(&c).is_rational());
        let unit = EndTuple::new(
            a.entries().iter().map(|x| x - &a.entries()[0] + LocalInt::one()).collect(),
            prime(p),
        ).unwrap();
        prop_assert!(unit.entries().iter().all(|x| x.reduce_mod_p(prime(p)).unwrap().value() == 1));
        let inv = unit.invert().unwrap();
        prop_assert!(inv.is_rational());
        prop_assert_eq!(inv.mul(&unit).unwrap(), EndTuple::identity(prime(p)));
    }

    #[test]
    fn split_degree_monotone_under_theta(
        p in small_prime(),
        atoms in prop::collection::vec(atom(), 0..6),
        l in 0u64..4,
        h in (0u32..3, 0u32..3),
    ) {
        let s = SymbolParams::with_unit_degree(p, 2).unwrap();
        let prod = SteenProduct::new(atoms, LocalInt::one(), PairingContext::SplitDegree { h_first: h.0, h_second: h.1 });
        let before = valuation_bound(&prod, &s).unwrap();
        let theta = prod.with_atom(SteenAtom::Theta(l * (p - 1)));
        let after = valuation_bound(&theta, &s).unwrap();
        prop_assert!(replay(&prod, &before, &s));
        prop_assert!(replay(&theta, &after, &s));
        prop_assert!(monotone(&before, &after), "{} then {}", before, after);
    }
}

fn atom() -> impl Strategy<Value = SteenAtom> {
    let slot = prop::sample::select(vec![Slot::First, Slot::Second]);
    prop_oneof![
        Just(SteenAtom::SigmaFactor),
        (1u64..4).prop_map(|l| SteenAtom::SecondType(2 * l)),
        (1u64..4).prop_map(|l| SteenAtom::ThirdType(2 * l)),
        (1u64..4).prop_map(|l| SteenAtom::Theta(2 * l)),
        (0u64..4, slot.clone()).prop_map(|(index, slot)| SteenAtom::ChernX { index, slot }),
        (0u32..3, slot).prop_map(|(exponent, slot)| SteenAtom::HPower { exponent, slot }),
    ]
}

/// Non-zero verdicts never lose valuation; a zero verdict may only become
/// zero or negligible.
fn monotone(before: &Verdict, after: &Verdict) -> bool {
    if before.is_zero() {
        after.negligible()
    } else {
        after.valuation() >= before.valuation()
    }
}

#[test]
fn lucas_matches_big_binomials() {
    for p in [2u64, 3, 5, 7] {
        let pb = BigInt::from(p);
        for a in 0..=200i64 {
            for b in 0..=a {
                let exact = binomial(BigInt::from(a), BigInt::from(b)) % &pb;
                assert_eq!(BigInt::from(binom_mod_p(a, b, prime(p)).value()), exact, "p={p} C({a},{b})");
            }
        }
    }
}

#[test]
fn rational_idempotents_are_trivial() {
    for p in [2u64, 3, 5, 7] {
        for mask in 0u32..(1 << p) {
            let entries: Vec<i64> = (0..p).map(|i| (mask >> i & 1) as i64).collect();
            let t = EndTuple::from_ints(&entries, prime(p)).unwrap();
            assert!(t.is_idempotent());
            let trivial = mask == 0 || mask == (1 << p) - 1;
            assert_eq!(t.is_rational(), trivial, "p={p} {t}");
        }
    }
}

#[test]
fn named_bidegrees_on_grid() {
    for p in [2u64, 3, 5, 7] {
        for n in 1..=4 {
            let s = SymbolParams::with_unit_degree(p, n).unwrap();
            let (b, c) = (s.b() as i64, s.c() as i64);
            assert_eq!(mu(&s).bidegree(&s).unwrap(), Bidegree { i: 2 * b + 1, j: b });
            assert_eq!(gamma(&s).bidegree(&s).unwrap(), Bidegree { i: 2 * c, j: c - 1 });
        }
    }
}

#[test]
fn rost_table_invariants() {
    for p in [2u64, 3, 5, 7] {
        for n in 1..=5 {
            let s = SymbolParams::with_unit_degree(p, n).unwrap();
            let table = closed_form(&s);
            assert_eq!(table.free_count(), p as usize);
            assert_eq!(table.torsion_count(), ((p - 1) * (n as u64 - 1)) as usize);
            for (j, g) in table.nonzero() {
                if g.kind == ChowKind::CyclicP {
                    let k = g.provenance.unwrap().k as u64;
                    assert!(s.b() * (k - 1) < j && j < s.b() * k, "p={p} n={n} j={j}");
                }
            }
            let rec = recurrence(&s).unwrap();
            assert_eq!(rec.trace.keys().copied().collect::<Vec<_>>(), (0..=s.d()).collect::<Vec<_>>());
        }
    }
}

#[test]
fn constructed_maps_are_homogeneous() {
    for p in [3u64, 5, 7] {
        let s = SymbolParams::with_unit_degree(p, 2).unwrap();
        for i in 1..p as u32 {
            let m = build_morphisms(i, &s).unwrap();
            for f in [&m.a, &m.b, &m.x, &m.y, &m.r] {
                assert!(f.is_homogeneous(), "p={p} i={i}");
            }
        }
    }
}

/// Swapping one rational expansion atom for `pθ` with the same index keeps
/// the index budget and can only help.
#[test]
fn audit_cases_monotone_under_theta_substitution() {
    for (p, n) in [(2, 2), (3, 2)] {
        let s = SymbolParams::with_unit_degree(p, n).unwrap();
        let mut reports = vec![audit_leading_term(&s, 1, 0).unwrap(), audit_leading_term(&s, 3, s.d()).unwrap()];
        reports.push(audit_generators(&s, 1, 1).unwrap());
        for report in reports {
            for case in &report.cases {
                let Some(pos) = case
                    .product
                    .atoms
                    .iter()
                    .position(|a| matches!(a, SteenAtom::SecondType(_) | SteenAtom::ThirdType(_)))
                else {
                    continue;
                };
                let l = case.product.atoms[pos].steen_index().unwrap();
                let mut atoms = case.product.atoms.clone();
                atoms[pos] = SteenAtom::Theta(l);
                let swapped = SteenProduct::new(atoms, case.product.scalar.clone(), case.product.context);
                let after = valuation_bound(&swapped, &s).unwrap();
                assert!(replay(&swapped, &after, &s));
                assert!(monotone(&case.verdict, &after), "{} -> {}", case.verdict, after);
            }
        }
    }
}
