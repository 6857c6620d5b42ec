//! Ground-truth signs.
//!
//! Values are enclosed with dyadic interval arithmetic at precisions
//! `64, 128, 256, …` until the enclosure excludes zero. Termination is
//! certified by [`value_lower_bound`]: an enclosure of width below the bound
//! cannot contain zero.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::dyadic::{sqrt_interval, DyadicInterval};
use crate::error::{domain, resource, Result};
use crate::instances::{is_zero, UssrInstance, UussrInstance};
use crate::sign::Sign;

/// First precision tried by the adaptive schedule.
pub const START_PRECISION: u64 = 64;

/// Encloses `Σⱼ Δⱼ√sⱼ` with width at most `Σ|Δⱼ|·2^-p`.
pub fn eval_interval(inst: &UussrInstance, precision: u64) -> Result<DyadicInterval> {
    let mut acc = DyadicInterval::zero();
    for (&s, &d) in inst.basis().elements().iter().zip(inst.delta()) {
        if d == 0 {
            continue;
        }
        let root = sqrt_interval(s, precision)?;
        acc = &acc + &root.scale(&BigInt::from(d));
    }
    Ok(acc)
}

/// Encloses `Σ δᵢ√aᵢ` term by term, without normalizing.
pub fn eval_ussr_interval(inst: &UssrInstance, precision: u64) -> Result<DyadicInterval> {
    let mut acc = DyadicInterval::zero();
    for t in inst.terms() {
        let root = sqrt_interval(t.radicand, precision)?;
        acc = if t.negative { &acc - &root } else { &acc + &root };
    }
    Ok(acc)
}

/// `|value| >= 1 / norm_bound^exponent` for a nonzero instance.
///
/// The value is an algebraic integer. Its conjugates are obtained by
/// flipping the signs of the radical terms, each is bounded in magnitude by
/// `N = Σ|Δⱼ|·⌈√sⱼ⌉`, and the product over all `d = 2^r` sign patterns
/// (`r` radical terms) is a nonzero rational integer. Hence
/// `|value| >= 1 / N^(d-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub norm_bound: BigUint,
    pub exponent: u64,
}

impl LowerBound {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.norm_bound.clone().pow(self.exponent)))
    }

    /// Upper bound on `log₂(1/L)` that avoids materializing `N^(d-1)`.
    fn log2_inverse_upper(&self) -> u64 {
        ceil_log2(&self.norm_bound).saturating_mul(self.exponent)
    }
}

/// Largest number of radical terms for which the conjugate product is
/// tracked; `2^63 - 1` is the largest exponent a `u64` holds.
const MAX_RADICAL_TERMS: usize = 63;

pub fn value_lower_bound(inst: &UussrInstance) -> Result<LowerBound> {
    if is_zero(inst) {
        return Err(domain("value_lower_bound is undefined for the zero instance"));
    }
    let mut norm = BigUint::zero();
    let mut radicals = 0usize;
    for (j, (&s, &d)) in inst.basis().elements().iter().zip(inst.delta()).enumerate() {
        if d == 0 {
            continue;
        }
        if j > 0 {
            radicals += 1;
        }
        norm += BigUint::from(d.unsigned_abs()) * ceil_sqrt_u64(s);
    }
    if radicals > MAX_RADICAL_TERMS {
        return Err(resource(format!("{radicals} radical terms exceed the conjugate-product cap")));
    }
    Ok(LowerBound { norm_bound: norm, exponent: (1u64 << radicals) - 1 })
}

fn ceil_sqrt_u64(s: u64) -> u64 {
    let r = s.sqrt();
    if r * r == s {
        r
    } else {
        r + 1
    }
}

/// `⌈log₂ x⌉` for `x >= 1`.
pub(crate) fn ceil_log2(x: &BigUint) -> u64 {
    if x.is_zero() || x.is_one() {
        return 0;
    }
    let bits = x.bits();
    if x.trailing_zeros() == Some(bits - 1) {
        bits - 1
    } else {
        bits
    }
}

/// Past this many bits `N^(d-1)` is not expanded and the certified
/// precision falls back to a slightly larger upper bound.
const EXACT_BOUND_BITS: u64 = 1 << 24;

/// Precision at which [`eval_interval`] provably excludes zero:
/// `⌈log₂((m+1)·max|Δⱼ| / L)⌉ + 1`. Zero for the zero instance.
pub fn certified_precision(inst: &UussrInstance) -> Result<u64> {
    if is_zero(inst) {
        return Ok(0);
    }
    let bound = value_lower_bound(inst)?;
    let scale = BigUint::from(inst.delta().len() as u64) * inst.max_abs_coefficient();
    if bound.log2_inverse_upper() <= EXACT_BOUND_BITS {
        let x = scale * bound.norm_bound.pow(bound.exponent);
        Ok(ceil_log2(&x) + 1)
    } else {
        Ok(ceil_log2(&scale).saturating_add(bound.log2_inverse_upper()).saturating_add(1))
    }
}

/// A decided sign together with the precision that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub sign: Sign,
    /// Zero instances are settled by the exact zero test and report 1.
    pub bits_used: u64,
}

/// Exact sign of `Σⱼ Δⱼ√sⱼ`.
pub fn sign_exact(inst: &UussrInstance) -> Result<Sign> {
    decide(inst, None).map(|d| d.sign)
}

/// Adaptive evaluation with an explicit precision cap. Without a cap the
/// limit is `max(4 · certified_precision, 64)`; hitting it means the
/// certified bound was wrong.
pub fn decide(inst: &UussrInstance, max_bits: Option<u64>) -> Result<Decision> {
    if is_zero(inst) {
        return Ok(Decision { sign: Sign::Zero, bits_used: 1 });
    }
    let mut cap = max_bits;
    let mut p = START_PRECISION.min(max_bits.unwrap_or(u64::MAX)).max(1);
    loop {
        if let Some(sign) = eval_interval(inst, p)?.sign() {
            return Ok(Decision { sign, bits_used: p });
        }
        let limit = match cap {
            Some(c) => c,
            None => {
                let c = certified_precision(inst)?.saturating_mul(4).max(START_PRECISION);
                cap = Some(c);
                c
            }
        };
        if p >= limit {
            return Err(resource(format!(
                "sign of {:?} undecided at the {limit}-bit cap",
                inst.delta()
            )));
        }
        p = p.saturating_mul(2).min(limit);
    }
}

/// Adaptive evaluation of the raw sum `Σ δᵢ√aᵢ`, independent of the normal
/// form. Returns `None` if the enclosure still contains zero at `max_bits`.
pub fn direct_interval_sign(inst: &UssrInstance, max_bits: u64) -> Result<Option<Decision>> {
    let mut p = START_PRECISION.min(max_bits).max(1);
    loop {
        let iv = eval_ussr_interval(inst, p)?;
        match iv.sign() {
            Some(Sign::Zero) if !inst.terms().is_empty() => {}
            Some(sign) => return Ok(Some(Decision { sign, bits_used: p })),
            None => {}
        }
        if p >= max_bits {
            return Ok(None);
        }
        p = p.saturating_mul(2).min(max_bits);
    }
}
