//! Property tests: exact ring laws, restriction homomorphism, cyclotomic
//! reduction idempotence, group classification invariance, canonical
//! polynomial invariants, tensoring preservation, and the representability
//! solver against exhaustive search.

use num_bigint::BigInt;
use num_integer::gcd;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use spheremap::poly::cyclotomic::CyclotomicInteger;
use spheremap::{
    canonical_polynomial, closed_form, explore_spectrum, postage_stamp_decompose, tensor_at,
    AdmissibilityTag, ClosedFormFamily, DiagonalCyclicGroup, MultiIndex, Polynomial, SearchConfig,
};

fn rational(numer: i64, denom: u8) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom.max(1)))
}

fn arb_poly(num_vars: usize) -> impl Strategy<Value = Polynomial> {
    let term = (
        proptest::collection::vec(0u32..=2, num_vars)
            .prop_filter("degree at most 6", |e| e.iter().sum::<u32>() <= 6),
        -9i64..=9,
        1u8..=4,
    );
    proptest::collection::vec(term, 0..=6).prop_map(move |terms| {
        Polynomial::from_terms(
            num_vars,
            terms
                .into_iter()
                .map(|(exps, n, d)| (MultiIndex::new(exps), rational(n, d))),
        )
        .unwrap()
    })
}

fn arb_poly_any_arity() -> impl Strategy<Value = (usize, Polynomial, Polynomial, Polynomial)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), arb_poly(n), arb_poly(n), arb_poly(n)))
}

fn assert_canonical_form(p: &Polynomial) {
    let mut prev: Option<&MultiIndex> = None;
    for (mi, c) in p.terms() {
        assert!(!c.is_zero(), "zero coefficient stored at {mi}");
        if let Some(q) = prev {
            assert!(
                (q.degree(), q.exponents()) < (mi.degree(), mi.exponents()),
                "terms out of graded-lex order: {q} before {mi}"
            );
        }
        prev = Some(mi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_laws_hold_exactly((_n, a, b, c) in arb_poly_any_arity()) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);

        let distributed = a.mul(&b.add(&c).unwrap()).unwrap();
        let expanded = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&distributed, &expanded);

        let add_assoc_l = a.add(&b).unwrap().add(&c).unwrap();
        let add_assoc_r = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(&add_assoc_l, &add_assoc_r);

        assert_canonical_form(&ab_c);
        assert_canonical_form(&distributed);
    }
}

proptest! {
    #[test]
    fn signature_counts_sum_to_rank((_n, a, _b, _c) in arb_poly_any_arity()) {
        let (rank, sig) = a.rank_and_signature();
        prop_assert_eq!(sig.n_plus + sig.n_minus, rank);
    }

    #[test]
    fn hyperplane_restriction_is_a_ring_map((_n, a, b, _c) in arb_poly_any_arity()) {
        let prod = a.mul(&b).unwrap().restrict_to_hyperplane();
        let factored = a
            .restrict_to_hyperplane()
            .mul(&b.restrict_to_hyperplane())
            .unwrap();
        prop_assert_eq!(prod, factored);

        let sum = a.add(&b).unwrap().restrict_to_hyperplane();
        let parts = a
            .restrict_to_hyperplane()
            .add(&b.restrict_to_hyperplane())
            .unwrap();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn cyclotomic_reduction_is_idempotent(
        p in 1u32..=12,
        coeffs in proptest::collection::vec(-20i64..=20, 1..=30),
    ) {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let once = CyclotomicInteger::from_dense(p, &big).unwrap();
        let twice = CyclotomicInteger::from_dense(p, once.coords()).unwrap();
        prop_assert_eq!(&once, &twice);
    }

    #[test]
    fn classification_ignores_units_and_permutations(
        p in 2i64..=13,
        weights in proptest::collection::vec(0i64..=12, 1..=4),
        unit_pick in 0usize..8,
        swap in any::<bool>(),
    ) {
        let group = DiagonalCyclicGroup::new(p, &weights).unwrap();
        if !group.is_fixed_point_free() {
            return Ok(());
        }
        let units: Vec<i64> = (1..=p).filter(|&u| gcd(u, p) == 1).collect();
        let u = units[unit_pick % units.len()];
        let mut relabeled: Vec<i64> =
            group.weights().iter().map(|&a| (a as i64 * u) % p).collect();
        if swap && relabeled.len() > 1 {
            relabeled.reverse();
        }
        let other = DiagonalCyclicGroup::new(p, &relabeled).unwrap();
        let lhs = group.classify().unwrap();
        let rhs = other.classify().unwrap();
        prop_assert_eq!(lhs.tag, rhs.tag);
        prop_assert_eq!(lhs.normalized_weights, rhs.normalized_weights);
    }

    #[test]
    fn tensoring_preserves_the_three_properties(
        seed in 0usize..1_000_000,
        fractions in proptest::collection::vec((1i64..=4, 1i64..=4), 1..=4),
    ) {
        // Admissible base groups of small order, two and three variables.
        let pool: [(i64, &[i64]); 8] = [
            (2, &[1, 1]),
            (3, &[1, 2]),
            (3, &[1, 1, 2]),
            (4, &[1, 1]),
            (5, &[1, 2]),
            (5, &[1, 2, 2]),
            (7, &[1, 2, 4]),
            (7, &[1, 1]),
        ];
        let (p, w) = pool[seed % pool.len()];
        let group = DiagonalCyclicGroup::new(p, w).unwrap();
        let f = canonical_polynomial(&group).unwrap().f_gamma;
        let mut g = f.clone();
        let mut state = seed;
        for (num, den) in fractions {
            // arbitrary fractions in (0, 1] are allowed, not only 1 and 1/2
            let s = BigRational::new(BigInt::from(num.min(den)), BigInt::from(den));
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let support: Vec<MultiIndex> = g.support_desc().cloned().collect();
            let alpha = support[state % support.len()].clone();
            let before = g.rank();
            g = tensor_at(&g, &alpha, &s, &f).unwrap();
            if s.is_one() {
                prop_assert!(g.rank() + 1 >= before);
            } else {
                prop_assert!(g.rank() >= before);
            }
            prop_assert!(group.is_invariant(&g).unwrap());
            prop_assert!(g.satisfies_hyperplane_identity());
            prop_assert!(g.has_nonnegative_coefficients());
            assert_canonical_form(&g);
        }
    }
}

#[test]
fn fixed_point_free_flag_matches_brute_force() {
    fn brute_force(p: u32, weights: &[u32]) -> bool {
        (1..p).all(|k| {
            weights
                .iter()
                .all(|&a| !(k as u64 * a as u64).is_multiple_of(p as u64))
        })
    }
    for p in 1..=100i64 {
        for a in 0..p {
            let g = DiagonalCyclicGroup::new(p, &[a]).unwrap();
            assert_eq!(
                g.is_fixed_point_free(),
                brute_force(p as u32, g.weights()),
                "p={p}, weights=[{a}]"
            );
        }
    }
    for p in 1..=100i64 {
        // deterministic sample of two- and three-variable weight vectors
        for step in 0..40i64 {
            let a = (step * 7 + 1) % p.max(1);
            let b = (step * 13 + 3) % p.max(1);
            let c = (step * 29 + 5) % p.max(1);
            for weights in [vec![a, b], vec![a, b, c]] {
                let g = DiagonalCyclicGroup::new(p, &weights).unwrap();
                assert_eq!(
                    g.is_fixed_point_free(),
                    brute_force(p as u32, g.weights()),
                    "p={p}, weights={weights:?}"
                );
            }
        }
    }
}

#[test]
fn canonical_polynomials_pass_all_invariants() {
    let mut groups: Vec<DiagonalCyclicGroup> = Vec::new();
    for p in 1..=13i64 {
        for n in 1..=3usize {
            groups.push(DiagonalCyclicGroup::new(p, &vec![1; n]).unwrap());
        }
    }
    for p in (3..=13i64).step_by(2) {
        for n in 2..=3usize {
            for k in 1..n {
                let mut w = vec![1i64; k];
                w.extend(std::iter::repeat_n(2, n - k));
                groups.push(DiagonalCyclicGroup::new(p, &w).unwrap());
            }
        }
    }
    groups.push(DiagonalCyclicGroup::new(7, &[1, 2, 4]).unwrap());

    for group in &groups {
        let res = canonical_polynomial(group).unwrap();
        let f = &res.f_gamma;
        assert!(group.is_invariant(f).unwrap(), "{group}");
        assert!(f.satisfies_hyperplane_identity(), "{group}");
        assert!(
            f.coeff(&MultiIndex::zero(group.dimension())).is_none(),
            "{group}: constant term must vanish"
        );
        assert!(f.has_nonnegative_coefficients(), "{group}");
        assert!(f.terms().all(|(_, c)| c.is_integer()), "{group}");
        for (j, &a) in group.weights().iter().enumerate() {
            if gcd(a, group.p()) == 1 {
                assert_eq!(
                    f.coeff(&MultiIndex::power(group.dimension(), j, group.p())),
                    Some(&BigRational::one()),
                    "{group}: pure power of x{}",
                    j + 1
                );
            }
        }
    }
}

#[test]
fn closed_forms_agree_with_expansion_up_to_thirteen() {
    for p in 1..=13 {
        let expect = closed_form(ClosedFormFamily::Gp1, p).unwrap();
        let got = canonical_polynomial(&DiagonalCyclicGroup::new(p as i64, &[1, 1]).unwrap())
            .unwrap()
            .f_gamma;
        assert_eq!(expect, got, "scalar family, p = {p}");
        assert_eq!(got.rank(), p as usize + 1, "rank of the scalar family");
    }
    for p in (3..=13).step_by(2) {
        let expect = closed_form(ClosedFormFamily::Gp2, p).unwrap();
        let got = canonical_polynomial(&DiagonalCyclicGroup::new(p as i64, &[1, 2]).unwrap())
            .unwrap()
            .f_gamma;
        assert_eq!(expect, got, "two-block family, p = {p}");
        assert_eq!(
            got.rank(),
            (p as usize + 3) / 2,
            "rank of the two-block family"
        );
    }
}

#[test]
fn postage_stamp_agrees_with_exhaustive_search() {
    for a in 1u64..=20 {
        for b in 1u64..=20 {
            if gcd(a, b) != 1 {
                assert!(postage_stamp_decompose(10, a, b).is_err() || gcd(a, b) == 1);
                continue;
            }
            for m in 0i64..=400 {
                let expected = exhaustive_decompose(m as u64, a, b);
                match postage_stamp_decompose(m, a, b) {
                    Ok(pair) => assert_eq!(Some(pair), expected, "m={m}, a={a}, b={b}"),
                    Err(_) => assert_eq!(None, expected, "m={m}, a={a}, b={b}"),
                }
                // Sylvester bound: representable from (a-1)(b-1) onward.
                if m as u64 >= (a - 1) * (b - 1) {
                    assert!(expected.is_some(), "bound violated at m={m}, a={a}, b={b}");
                }
            }
        }
    }
}

fn exhaustive_decompose(m: u64, a: u64, b: u64) -> Option<(u64, u64)> {
    let mut best: Option<(u64, u64)> = None;
    for j in 0..=m / a {
        for k in 0..=m / b {
            if j * a + k * b == m {
                let candidate = (j, k);
                if best.is_none_or(|cur| candidate < cur) {
                    best = Some(candidate);
                }
            }
        }
    }
    best
}

#[test]
fn monotone_closure_extends_any_witness_by_six() {
    // For the order-3 two-block group in three variables the canonical rank
    // is 7, and multiplying the graded-lex-maximal term adds exactly 6.
    let group = DiagonalCyclicGroup::new(3, &[1, 1, 2]).unwrap();
    let f = canonical_polynomial(&group).unwrap().f_gamma;
    let report = explore_spectrum(&group, &SearchConfig::new(2)).unwrap();
    for trace in report.achieved.values().take(8) {
        let mut g = trace.result.clone();
        for _ in 0..5 {
            let top = g.leading_monomial().unwrap().clone();
            let before = g.rank();
            let next = tensor_at(&g, &top, &BigRational::one(), &f).unwrap();
            assert_eq!(
                next.rank(),
                before + 6,
                "support recount after the top multiply"
            );
            assert!(next.satisfies_hyperplane_identity());
            assert!(group.is_invariant(&next).unwrap());
            assert!(next.has_nonnegative_coefficients());
            g = next;
        }
    }
}

#[test]
fn seven_block_classification_requires_order_seven() {
    // weights {1,2,4} patterns with p != 7 are not in the third family
    let g = DiagonalCyclicGroup::new(9, &[1, 2, 4]).unwrap();
    let c = g.classify().unwrap();
    assert_eq!(c.tag, AdmissibilityTag::NotAdmissible);
}
