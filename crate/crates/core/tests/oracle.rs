mod common;

use common::{all, reference_sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use ussr_core::instances::is_zero;
use ussr_core::oracle::{certified_precision, eval_interval, sign_exact, value_lower_bound};
use ussr_core::poly::annihilating_poly;
use ussr_core::Sign;

#[test]
fn zero_test_and_certified_termination() {
    for k in 1..=6 {
        for inst in all(k, 2) {
            let sign = sign_exact(&inst).unwrap();
            let zero = inst.delta().iter().all(|&d| d == 0);
            assert_eq!(sign == Sign::Zero, zero, "{:?}", inst.delta());
            assert_eq!(is_zero(&inst), zero);
            assert_eq!(sign, reference_sign(&inst), "{:?}", inst.delta());
            if !zero {
                let p = certified_precision(&inst).unwrap();
                let iv = eval_interval(&inst, p).unwrap();
                assert!(!iv.contains_zero(), "{:?} at {p} bits", inst.delta());
            }
        }
    }
}

#[test]
fn lower_bound_is_below_value() {
    for k in [3, 5, 6] {
        for inst in all(k, 2) {
            if is_zero(&inst) {
                continue;
            }
            let bound = value_lower_bound(&inst).unwrap().to_rational();
            let iv = eval_interval(&inst, 256).unwrap().abs();
            assert!(iv.lo().to_rational() >= bound, "{:?}", inst.delta());
        }
    }
}

#[test]
fn enclosures_nest() {
    for k in 1..=6 {
        for inst in all(k, 3) {
            for p in [8, 16, 32] {
                let coarse = eval_interval(&inst, p).unwrap();
                let fine = eval_interval(&inst, p + 64).unwrap();
                assert!(coarse.contains_interval(&fine), "{:?} at {p}", inst.delta());
                let m = inst.delta().len() as i64;
                let width_cap = BigRational::new((m * 3).into(), BigInt::from(1) << p as usize);
                assert!(coarse.width().to_rational() <= width_cap);
            }
        }
    }
}

#[test]
fn antisymmetry() {
    for k in [2, 5, 6] {
        for inst in all(k, 2) {
            assert_eq!(sign_exact(&inst.negated()).unwrap(), -sign_exact(&inst).unwrap());
        }
    }
}

#[test]
fn annihilating_polynomial_vanishes() {
    let mut checked = 0;
    for inst in all(6, 2) {
        let radicals = inst.delta()[1..].iter().filter(|&&d| d != 0).count();
        if radicals > 3 {
            continue;
        }
        let poly = annihilating_poly(&inst).unwrap();
        assert_eq!(poly.degree(), Some(1 << radicals));
        assert_eq!(poly.leading_coefficient().cloned(), Some(1.into()));
        let at = eval_interval(&inst, 205).unwrap();
        assert!(at.width().to_rational() <= BigRational::new(1.into(), BigInt::from(1) << 200));
        assert!(poly.eval_interval(&at).contains_zero(), "{:?}", inst.delta());
        checked += 1;
    }
    assert!(checked > 1000);
}
