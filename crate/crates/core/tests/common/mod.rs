#![allow(dead_code)]

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use ussr_core::{DomainSpec, Sign, UussrInstance};

/// Floor and ceiling of `Σ Δⱼ√sⱼ · 2^bits`, computed term by term with an
/// integer square root and no library arithmetic.
pub fn reference_bounds(basis: &[u64], delta: &[i64], bits: u32) -> (BigInt, BigInt) {
    let mut lo = BigInt::from(0);
    let mut hi = BigInt::from(0);
    for (&s, &d) in basis.iter().zip(delta) {
        if d == 0 {
            continue;
        }
        let scaled = BigUint::from(s) << (2 * bits as usize);
        let r = BigInt::from_biguint(BigSign::Plus, scaled.sqrt());
        let exact = &r * &r == BigInt::from_biguint(BigSign::Plus, BigUint::from(s) << (2 * bits as usize));
        let (a, b) = if exact { (r.clone(), r) } else { (r.clone(), r + 1) };
        if d > 0 {
            lo += &a * d;
            hi += &b * d;
        } else {
            lo += &b * d;
            hi += &a * d;
        }
    }
    (lo, hi)
}

/// Sign from a 1024-bit reference enclosure; panics if it is inconclusive.
pub fn reference_sign(inst: &UussrInstance) -> Sign {
    if inst.delta().iter().all(|&d| d == 0) {
        return Sign::Zero;
    }
    let (lo, hi) = reference_bounds(inst.basis().elements(), inst.delta(), 1024);
    let zero = BigInt::from(0);
    if lo > zero {
        Sign::Positive
    } else if hi < zero {
        Sign::Negative
    } else {
        panic!("reference enclosure of {:?} straddles zero", inst.delta())
    }
}

pub fn dom(k: u64, bound: i64) -> DomainSpec {
    DomainSpec::new(k, bound).unwrap()
}

pub fn all(k: u64, bound: i64) -> Vec<UussrInstance> {
    ussr_core::instances::enumerate_domain(&dom(k, bound), 1 << 20).unwrap().collect()
}
