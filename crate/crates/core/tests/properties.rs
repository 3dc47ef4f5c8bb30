use dlog_lift::bench::{paired_instances, solvable_instance, unsolvable_instance};
use dlog_lift::oracle::{brute_dlog, mult_order};
use dlog_lift::ring::ceil_log2;
use dlog_lift::{
    bach_lift, lift, lift_with_order, valuation, LiftInstance, OpCounter, OrderCheck,
    PrimePowerModulus, Ring,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

const PRIMES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 101, 997];

fn u(x: u64) -> BigUint {
    BigUint::from(x)
}

#[test]
fn pow_mod_matches_repeated_multiplication() {
    let mut c = OpCounter::new();
    for m in 1..=1000u64 {
        let ring = Ring::<u64>::new(m);
        for a in 0..m {
            let mut acc = 1 % m;
            for e in 0..=32u64 {
                assert_eq!(ring.pow_mod(&a, &e, &mut c), acc, "a={a} e={e} m={m}");
                acc = ring.mul_mod(&acc, &a, &mut c);
            }
        }
    }
}

#[test]
fn p_two_first_digit_rule() {
    for k in 1..=10u32 {
        let m = 1u64 << k;
        let ctx = PrimePowerModulus::from_u64(2, k).unwrap();
        for a in (1..m).step_by(2) {
            let r = ((a * a - 1).trailing_zeros()).min(k);
            let v = 1u64 << r;
            for b in (1..m).step_by(2) {
                let inst = LiftInstance::new(a, 0, b, ctx.clone()).unwrap();
                let out = lift(&inst, &mut OpCounter::new());
                let truth = brute_dlog(a, b, &ctx).unwrap().minimal_x;
                assert_eq!(out.solution.is_some(), truth.is_some(), "a={a} b={b} k={k}");
                if !(b + m - 1).is_multiple_of(v) {
                    assert_eq!(
                        out.solution.is_some(),
                        (b + m - a).is_multiple_of(v),
                        "a={a} b={b} k={k}"
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn pow_dual_matches_pow_mod(
        m in 1u64..=u64::MAX,
        a in any::<u64>(),
        b2 in any::<u64>(),
        frac in 0.0f64..=1.0,
    ) {
        let b1 = ((b2 as f64) * frac) as u64;
        let b1 = b1.min(b2);
        let ring = Ring::new(u(m));
        let mut c = OpCounter::new();
        let (r1, r2) = ring.pow_dual(&u(a), &u(b1), &u(b2), &mut c).unwrap();
        prop_assert_eq!(r1, u(a).modpow(&u(b1), &u(m)));
        prop_assert_eq!(r2, u(a).modpow(&u(b2), &u(m)));
        if b2 >= 16 {
            prop_assert!(c.mults_mod_m() <= 3 * ceil_log2(&u(b2)) + 2);
        }
    }

    #[test]
    fn pow_dual_rejects_reversed_exponents(b1 in 1u64..1000, gap in 1u64..1000) {
        let ring = Ring::new(u(1009));
        prop_assert!(ring.pow_dual(&u(3), &u(b1 + gap), &u(b1), &mut OpCounter::new()).is_err());
    }

    #[test]
    fn valuation_decomposes(x in any::<i64>(), p in prop::sample::select(PRIMES.to_vec()), cap in 0u32..70) {
        let (r, h) = valuation(&BigInt::from(x), &u(p), cap);
        prop_assert_eq!(BigInt::from(u(p).pow(r)) * &h, BigInt::from(x));
        let h_mod = (&h % BigInt::from(p)).is_zero();
        prop_assert!(r == cap || !h_mod);
    }

    #[test]
    fn lift_solution_shape(p in prop::sample::select(PRIMES.to_vec()), k in 1u32..40, seed in any::<u64>()) {
        let inst = solvable_instance(p, k, seed).unwrap();
        let out = lift(&inst, &mut OpCounter::new());
        let x = out.solution.expect("solvable instance");
        let m = inst.ctx().m();
        prop_assert_eq!(inst.a().modpow(&x, m), inst.b() % m);
        prop_assert!(out.iterations <= k.saturating_sub(out.r));
        if p != 2 {
            prop_assert_eq!(&x % (p - 1), inst.z().clone());
        }
    }

    #[test]
    fn lift_rejects_unsolvable_pairs(p in prop::sample::select(PRIMES.to_vec()), k in 5u32..40, seed in any::<u64>()) {
        let (yes, no) = paired_instances(p, k, seed).unwrap();
        let mut cy = OpCounter::new();
        let mut cn = OpCounter::new();
        prop_assert!(lift(&yes, &mut cy).solution.is_some());
        prop_assert!(lift(&no, &mut cn).solution.is_none());
        prop_assert!(cn.mults_mod_m() < cy.mults_mod_m());
        if p != 2 {
            let mut by = OpCounter::new();
            let mut bn = OpCounter::new();
            bach_lift(&yes, &mut by).unwrap();
            bach_lift(&no, &mut bn).unwrap();
            let (by, bn) = (by.mults_mod_wide() as f64, bn.mults_mod_wide() as f64);
            prop_assert!((by - bn).abs() / by.max(bn) < 0.05);
        }
    }

    #[test]
    fn unsolvable_instances_have_no_solution(p in prop::sample::select(PRIMES.to_vec()), k in 2u32..40, seed in any::<u64>()) {
        let inst = unsolvable_instance(p, k, seed).unwrap();
        prop_assert!(lift(&inst, &mut OpCounter::new()).solution.is_none());
    }

    #[test]
    fn bach_cost_shape(p in prop::sample::select(PRIMES[1..].to_vec()), k in 8u32..64, seed in any::<u64>()) {
        let inst = solvable_instance(p, k, seed).unwrap();
        let mut c = OpCounter::new();
        let out = bach_lift(&inst, &mut c).unwrap();
        prop_assert!(out.solution.is_some());
        let phi = (u(p) - 1u32) * u(p).pow(k - 1);
        let square_and_multiply = phi.bits() - 1 + phi.count_ones() - 1;
        prop_assert_eq!(c.mults_mod_wide(), 2 * square_and_multiply);
        let estimate = 4.0 * ceil_log2(&phi) as f64;
        let got = c.mults_mod_wide() as f64;
        prop_assert!(got <= 1.5 * estimate && got >= estimate / 2.0, "got {got}, estimate {estimate}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ordered_lift_is_minimal(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), k in 1u32..6, a in 1u64..1_000_000, b in 0u64..1_000_000) {
        let ctx = PrimePowerModulus::from_u64(p, k).unwrap();
        let m = ctx.m().to_u64().unwrap();
        prop_assume!(m <= 200_000 && a % p != 0);
        let (a, b) = (a % m, b % m);
        let ord = mult_order(a, p).unwrap();
        let Some(z) = brute_dlog(a, b, &PrimePowerModulus::from_u64(p, 1).unwrap()).unwrap().minimal_x else {
            return Ok(());
        };
        let inst = LiftInstance::new(a, z, b, ctx.clone()).unwrap();
        let out = lift_with_order(&inst, &u(ord), OrderCheck::Validate, &mut OpCounter::new()).unwrap();
        let truth = brute_dlog(a, b, &ctx).unwrap();
        prop_assert_eq!(out.solution.map(|x| x.to_u64().unwrap()), truth.minimal_x);
        if let Some(x) = truth.minimal_x {
            prop_assert_eq!(x % ord, z % ord);
            prop_assert!(x < truth.period);
        }
    }
}
