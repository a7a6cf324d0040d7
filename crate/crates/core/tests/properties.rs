use proptest::prelude::*;

use atkin_core::atkin::{eval_all_exact, eval_all_f64, normalize, AtkinFamily, Scale};
use atkin_core::exact::{gen_binom, pochhammer, q, Rational};
use atkin_core::genfun::delta_eps;
use atkin_core::jacobi::{assoc_family, AJParams, Variant};
use atkin_core::supersingular::{match_report, FpPoly};
use atkin_core::{Execution, RatPoly};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..30).prop_map(|(n, d)| q(n, d))
}

fn rat_poly() -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(rational(), 0..6).prop_map(RatPoly::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!(&a - &a, Rational::zero());
    }

    #[test]
    fn pochhammer_splits(a in rational(), m in 0u64..6, n in 0u64..6) {
        prop_assert_eq!(pochhammer(&a, m + n), pochhammer(&a, m) * pochhammer(&(&a + m as i64), n));
    }

    #[test]
    fn binomial_pascal(a in rational(), k in 1u64..8) {
        prop_assert_eq!(gen_binom(&(&a + 1), k), gen_binom(&a, k) + gen_binom(&a, k - 1));
    }

    #[test]
    fn poly_ring_and_evaluation(p in rat_poly(), r in rat_poly(), x in rational()) {
        prop_assert_eq!((&p * &r).eval(&x), p.eval(&x) * r.eval(&x));
        prop_assert_eq!((&p + &r).eval(&x), p.eval(&x) + r.eval(&x));
    }

    #[test]
    fn affine_substitution_inverts(p in rat_poly(), a in rational(), b in rational()) {
        prop_assume!(!a.is_zero());
        let there = p.affine_substitute(&a, &b).unwrap();
        let back = there.affine_substitute(&a.recip().unwrap(), &(-(&b / &a))).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn recurrence_values_match_expanded_polynomials(n in 0usize..12, x in rational()) {
        let mut fam = AtkinFamily::new(Scale::Normalized);
        fam.fill(n);
        let values = eval_all_exact(Scale::Normalized, n, &x);
        for (k, v) in values.iter().enumerate() {
            prop_assert_eq!(&fam.polys()[k].eval(&x), v);
        }
    }

    #[test]
    fn float_recurrence_tracks_exact(n in 1usize..25, num in 1i64..99) {
        let x = q(num, 100);
        let exact = eval_all_exact(Scale::Normalized, n, &x);
        let float = eval_all_f64(Scale::Normalized, n, x.to_f64());
        for (e, f) in exact.iter().zip(&float) {
            let e = e.to_f64();
            prop_assert!((e - f).abs() <= 1e-12 * e.abs().max(1e-300) + 1e-300, "{} vs {}", e, f);
        }
    }

    #[test]
    fn associated_families_are_monic(a in rational(), b in rational(), c in rational()) {
        let p = AJParams::new(a, b, c);
        for variant in [Variant::V, Variant::CalV] {
            if let Ok(fam) = assoc_family(&p, variant, 6) {
                for (n, poly) in fam.iter().enumerate() {
                    prop_assert!(poly.is_monic());
                    prop_assert_eq!(poly.degree(), Some(n));
                }
            }
        }
    }

    #[test]
    fn delta_and_epsilon_are_the_two_roots(t in 0.01f64..0.99, x in 0.01f64..0.99) {
        let de = delta_eps(t, x).unwrap();
        prop_assert!(de.delta <= de.epsilon);
        prop_assert!((de.delta + de.epsilon - (1.0 + t) / t).abs() <= 1e-12 * (1.0 + t) / t);
        prop_assert!((de.delta * de.epsilon - x / t).abs() <= 1e-12 * x / t);
        for y in [de.delta, de.epsilon] {
            let scale = t * y * y + (1.0 + t) * y + x;
            prop_assert!((t * y * y - (1.0 + t) * y + x).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn fp_gcd_divides_both(
        a in prop::collection::vec(0u64..13, 1..7),
        b in prop::collection::vec(0u64..13, 1..7),
    ) {
        let (a, b) = (FpPoly::new(13, a), FpPoly::new(13, b));
        let g = a.gcd(&b);
        if !g.is_zero() {
            prop_assert!(a.rem(&g).is_zero());
            prop_assert!(b.rem(&g).is_zero());
        }
    }
}

#[test]
fn rescaling_commutes_with_the_recurrence() {
    let mut orig = AtkinFamily::new(Scale::Original);
    let mut norm = AtkinFamily::new(Scale::Normalized);
    for n in 0..=10 {
        assert_eq!(&normalize(orig.get(n)), norm.get(n));
    }
}

#[test]
fn sequential_and_parallel_reports_agree() {
    let a = match_report(61, Execution::Sequential).unwrap();
    let b = match_report(61, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}
