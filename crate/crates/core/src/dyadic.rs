//! Dyadic rationals `mantissa · 2^exponent` and closed intervals over them.
//!
//! Sums, differences and products of dyadics are exact, so intervals only
//! widen where a caller explicitly rounds outward.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::sign::Sign;

#[derive(Debug, Clone)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Dyadic {
        Dyadic { mantissa, exponent }.normalized()
    }

    pub fn zero() -> Dyadic {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Dyadic {
        Dyadic::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Strips trailing zero bits so that equal values share a representation.
    fn normalized(mut self) -> Dyadic {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return self;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exponent += tz as i64;
        }
        self
    }

    /// Mantissas of `self` and `other` over the common exponent.
    fn align(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        (a, b, e)
    }

    pub fn sign(&self) -> Sign {
        Sign::of_bigint(&self.mantissa)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// `self · 2^shift`.
    pub fn ldexp(&self, shift: i64) -> Dyadic {
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + shift }
    }

    pub fn mul_int(&self, n: &BigInt) -> Dyadic {
        Dyadic::new(&self.mantissa * n, self.exponent)
    }

    /// Largest multiple of `2^-frac_bits` that is `<= self`.
    pub fn floor_to(&self, frac_bits: i64) -> Dyadic {
        let shift = -frac_bits - self.exponent;
        if shift <= 0 {
            return self.clone();
        }
        Dyadic::new(self.mantissa.div_floor(&(BigInt::one() << shift as usize)), -frac_bits)
    }

    /// Smallest multiple of `2^-frac_bits` that is `>= self`.
    pub fn ceil_to(&self, frac_bits: i64) -> Dyadic {
        -(-self).floor_to(frac_bits)
    }

    pub fn floor(&self) -> BigInt {
        self.floor_to(0).to_integer_unchecked()
    }

    fn to_integer_unchecked(&self) -> BigInt {
        debug_assert!(self.exponent >= 0);
        &self.mantissa << self.exponent as usize
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    /// `⌊log₂|self|⌋`, or `None` for zero.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.mantissa.is_zero() {
            return None;
        }
        Some(self.mantissa.bits() as i64 - 1 + self.exponent)
    }

    /// Lossy conversion for display and diagnostics.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 60).max(0);
        let m: i64 = (&self.mantissa >> drop as usize).try_into().unwrap_or(0);
        m as f64 * 2f64.powi((self.exponent + drop) as i32)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

/// `<mantissa>*2^<exponent>`, e.g. `23*2^-4`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dyadic> {
        let bad = || domain(format!("not a dyadic literal: {s:?}"));
        match s.split_once("*2^") {
            Some((m, e)) => {
                let m: BigInt = m.parse().map_err(|_| bad())?;
                let e: i64 = e.parse().map_err(|_| bad())?;
                Ok(Dyadic::new(m, e))
            }
            None => Ok(Dyadic::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<DyadicInterval> {
        if lo > hi {
            return Err(domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(DyadicInterval { lo, hi })
    }

    pub fn point(x: Dyadic) -> DyadicInterval {
        DyadicInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> DyadicInterval {
        DyadicInterval::point(Dyadic::zero())
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, inner: &DyadicInterval) -> bool {
        self.lo <= inner.lo && inner.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    /// The common sign of every point, or `None` if the interval meets zero
    /// without being exactly `[0, 0]`.
    pub fn sign(&self) -> Option<Sign> {
        if self.lo.sign() == Sign::Positive {
            Some(Sign::Positive)
        } else if self.hi.sign() == Sign::Negative {
            Some(Sign::Negative)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Sign::Zero)
        } else {
            None
        }
    }

    pub fn scale(&self, n: &BigInt) -> DyadicInterval {
        let a = self.lo.mul_int(n);
        let b = self.hi.mul_int(n);
        if n.is_negative() {
            DyadicInterval { lo: b, hi: a }
        } else {
            DyadicInterval { lo: a, hi: b }
        }
    }

    pub fn abs(&self) -> DyadicInterval {
        match self.sign() {
            Some(Sign::Negative) => -self,
            Some(_) => self.clone(),
            None => DyadicInterval {
                lo: Dyadic::zero(),
                hi: self.hi.clone().max(-&self.lo),
            },
        }
    }

    /// Rounds the endpoints outward to multiples of `2^-frac_bits`.
    pub fn round_outward(&self, frac_bits: i64) -> DyadicInterval {
        DyadicInterval {
            lo: self.lo.floor_to(frac_bits),
            hi: self.hi.ceil_to(frac_bits),
        }
    }
}

impl Add for &DyadicInterval {
    type Output = DyadicInterval;
    fn add(self, rhs: &DyadicInterval) -> DyadicInterval {
        DyadicInterval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &DyadicInterval {
    type Output = DyadicInterval;
    fn sub(self, rhs: &DyadicInterval) -> DyadicInterval {
        DyadicInterval { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Mul for &DyadicInterval {
    type Output = DyadicInterval;
    fn mul(self, rhs: &DyadicInterval) -> DyadicInterval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = products.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        DyadicInterval { lo, hi }
    }
}

impl Neg for &DyadicInterval {
    type Output = DyadicInterval;
    fn neg(self) -> DyadicInterval {
        DyadicInterval { lo: -&self.hi, hi: -&self.lo }
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Enclosure of `√n` of width at most `2^-precision`.
///
/// With `r = ⌊√(n·4^p)⌋` the result is `[r, r+1]·2^-p`, collapsing to the
/// exact point when `n` is a perfect square.
pub fn sqrt_interval(n: u64, precision: u64) -> Result<DyadicInterval> {
    if n == 0 {
        return Err(domain("sqrt_interval requires n >= 1"));
    }
    if precision == 0 {
        return Err(domain("sqrt_interval requires precision >= 1"));
    }
    let scaled = BigUint::from(n) << (2 * precision) as usize;
    let root = scaled.sqrt();
    let exact = &root * &root == scaled;
    let e = -(precision as i64);
    let lo = Dyadic::new(BigInt::from(root.clone()), e);
    if exact {
        return Ok(DyadicInterval::point(lo));
    }
    let hi = Dyadic::new(BigInt::from(root + 1u32), e);
    Ok(DyadicInterval { lo, hi })
}
