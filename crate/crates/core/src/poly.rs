//! Integer polynomials, the annihilating polynomial of an instance, and
//! Mahler's root-separation bound.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{Dyadic, DyadicInterval};
use crate::error::{domain, internal, resource, Result};
use crate::instances::UussrInstance;

/// Coefficients constant term first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> IntPolynomial {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> IntPolynomial {
        IntPolynomial::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coefficients.last()
    }

    /// `Σ|aₖ|`.
    pub fn size(&self) -> BigUint {
        self.coefficients.iter().map(|c| c.magnitude()).sum()
    }

    /// Horner evaluation over intervals; contains `P(x)` for every `x` in
    /// `at`.
    pub fn eval_interval(&self, at: &DyadicInterval) -> DyadicInterval {
        let mut acc = DyadicInterval::zero();
        for c in self.coefficients.iter().rev() {
            acc = &(&acc * at) + &DyadicInterval::point(Dyadic::from_int(c.clone()));
        }
        acc
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if i == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Element of `Z[√s : s square-free]`, keyed by radicand (1 for integers).
type Radical = BTreeMap<u64, BigInt>;

fn radical_mul(a: &Radical, b: &Radical) -> Radical {
    let mut out = Radical::new();
    for (&x, cx) in a {
        for (&y, cy) in b {
            // √x·√y = g·√(xy/g²) for square-free x, y with g = gcd(x, y)
            let g = x.gcd(&y);
            let key = (x / g) * (y / g);
            *out.entry(key).or_insert_with(BigInt::zero) += cx * cy * BigInt::from(g);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn radical_add_assign(a: &mut Radical, b: &Radical) {
    for (&k, c) in b {
        *a.entry(k).or_insert_with(BigInt::zero) += c;
    }
    a.retain(|_, c| !c.is_zero());
}

/// Polynomial with radical coefficients, constant term first.
fn radical_poly_mul(p: &[Radical], q: &[Radical]) -> Vec<Radical> {
    let mut out = vec![Radical::new(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            radical_add_assign(&mut out[i + j], &radical_mul(a, b));
        }
    }
    out
}

/// Largest number of radical terms expanded by [`annihilating_poly`].
pub const ANNIHILATOR_TERM_CAP: usize = 6;

/// `∏_ε (x − Δ₀ − Σⱼ εⱼΔⱼ√sⱼ)` over all sign patterns `ε` of the nonzero
/// radical terms: monic, integer, of degree `2^r`, vanishing at the value.
pub fn annihilating_poly(inst: &UussrInstance) -> Result<IntPolynomial> {
    let elements = inst.basis().elements();
    let delta = inst.delta();
    let radicals: Vec<(u64, i64)> = elements
        .iter()
        .zip(delta)
        .skip(1)
        .filter(|(_, &d)| d != 0)
        .map(|(&s, &d)| (s, d))
        .collect();
    if radicals.len() > ANNIHILATOR_TERM_CAP {
        return Err(resource(format!(
            "{} radical terms exceed the cap of {ANNIHILATOR_TERM_CAP}",
            radicals.len()
        )));
    }
    let one: Radical = [(1u64, BigInt::one())].into_iter().collect();
    let mut product = vec![one.clone()];
    for pattern in 0u32..(1 << radicals.len()) {
        let mut root = Radical::new();
        if delta[0] != 0 {
            root.insert(1, BigInt::from(delta[0]));
        }
        for (bit, &(s, d)) in radicals.iter().enumerate() {
            let c = if pattern >> bit & 1 == 1 { -d } else { d };
            root.insert(s, BigInt::from(c));
        }
        let neg_root: Radical = root.into_iter().map(|(s, c)| (s, -c)).collect();
        product = radical_poly_mul(&product, &[neg_root, one.clone()]);
    }
    let coefficients = product
        .into_iter()
        .map(|c| match c.len() {
            0 => Ok(BigInt::zero()),
            1 if c.contains_key(&1) => Ok(c[&1].clone()),
            _ => Err(internal("annihilating product kept an irrational coefficient")),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::new(coefficients))
}

/// Rational lower bound on the minimal distance between distinct roots:
/// `√3 / (n^(n/2+1) · s^(n−1))` with `√3` replaced by `433/250` and
/// `n^(n/2+1)` by `⌈√(n^(n+2))⌉`.
pub fn mahler_sep(p: &IntPolynomial) -> Result<BigRational> {
    let n = match p.degree() {
        Some(n) if n >= 2 => n,
        _ => return Err(domain("mahler_sep requires degree >= 2")),
    };
    let n_big = BigUint::from(n);
    let pow = num_traits::pow(n_big, n + 2);
    let mut root = pow.sqrt();
    if &root * &root != pow {
        root += 1u32;
    }
    let denominator = root * num_traits::pow(p.size(), n - 1) * BigUint::from(250u32);
    Ok(BigRational::new(BigInt::from(433), BigInt::from(denominator)))
}
