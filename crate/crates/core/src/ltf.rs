//! Integer weight advice.
//!
//! Over a fixed domain `[-B, B]^(m+1)` the map `Δ ↦ sign(Σ Δⱼ√sⱼ)` is a
//! linear threshold function with weights `√sⱼ`. Any integer vector `u`
//! realizing the same function turns every sign query into one exact
//! integer dot product. Two synthesizers are provided: scale-and-round from
//! the minimum gap of the domain, and a vertex of the weight LP whose
//! entries are ratios of small determinants.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::dyadic::{sqrt_interval, Dyadic, DyadicInterval};
use crate::error::{domain, internal, resource, Error, Result};
use crate::instances::{enumerate_domain, is_zero, min_gap, DomainSpec, UussrInstance};
use crate::oracle::{ceil_log2, sign_exact};
use crate::sign::Sign;
use crate::simplex::solve_weight_lp;

/// Guideline ceiling on LP constraints.
pub const MAX_LP_CONSTRAINTS: usize = 10_000;
const MAX_LP_PIVOTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LtfMethod {
    Round,
    Lp,
}

impl fmt::Display for LtfMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LtfMethod::Round => "round",
            LtfMethod::Lp => "lp",
        })
    }
}

impl FromStr for LtfMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<LtfMethod> {
        match s {
            "round" => Ok(LtfMethod::Round),
            "lp" => Ok(LtfMethod::Lp),
            other => Err(domain(format!("unknown ltf method {other:?}"))),
        }
    }
}

/// How a weight vector was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LtfProvenance {
    /// Read from a file without provenance lines.
    Unrecorded,
    /// Weights `round(λ·√sⱼ)` with `λ = ⌈2(m+1)B / ε⌉`, `ε` the lower end
    /// of the minimum-gap enclosure.
    Round { lambda: BigInt, eps_min: DyadicInterval },
    /// Lexicographic domain indices of the tight constraints at the vertex.
    Lp { tight: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtfAdvice {
    domain: DomainSpec,
    weights: Vec<BigInt>,
    method: LtfMethod,
    provenance: LtfProvenance,
}

impl LtfAdvice {
    pub fn new(
        dom: DomainSpec,
        weights: Vec<BigInt>,
        method: LtfMethod,
        provenance: LtfProvenance,
    ) -> Result<LtfAdvice> {
        let dim = dom.basis().len();
        if weights.len() != dim {
            return Err(domain(format!(
                "{} weights given, basis for k = {} has {dim} elements",
                weights.len(),
                dom.k()
            )));
        }
        Ok(LtfAdvice { domain: dom, weights, method, provenance })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn method(&self) -> LtfMethod {
        self.method
    }

    pub fn provenance(&self) -> &LtfProvenance {
        &self.provenance
    }

    pub fn max_abs_weight(&self) -> BigInt {
        self.weights.iter().map(|w| w.abs()).max().unwrap_or_default()
    }

    /// Every weight multiplied by `factor`.
    pub fn scaled(&self, factor: &BigInt) -> Result<LtfAdvice> {
        if !factor.is_positive() {
            return Err(domain("scaling factor must be positive"));
        }
        Ok(LtfAdvice {
            weights: self.weights.iter().map(|w| w * factor).collect(),
            provenance: LtfProvenance::Unrecorded,
            ..self.clone()
        })
    }
}

/// `(m+2)!·B^(m+1)`: the determinant bound on LP vertex weights.
pub fn lp_weight_bound(dom: &DomainSpec) -> BigInt {
    let m = dom.basis().m() as u64;
    let fact: BigInt = (1..=m + 2).map(BigInt::from).product();
    fact * num_traits::pow(BigInt::from(dom.bound()), (m + 1) as usize)
}

fn nearest_integer(x: &Dyadic) -> BigInt {
    (x + &Dyadic::new(BigInt::one(), -1)).floor()
}

/// Scale-and-round synthesis.
///
/// With `λ·ε_min >= 2(m+1)B`, rounding each `λ√sⱼ` moves `Σ Δⱼuⱼ` by at most
/// `(m+1)B/2`, less than half of `λ·|Σ Δⱼ√sⱼ|`, so no sign can flip.
pub fn synth_round(dom: &DomainSpec, cap: u64) -> Result<LtfAdvice> {
    let gap = min_gap(dom, cap)?;
    let eps = gap.enclosure.lo();
    let basis = dom.basis();
    let numerator = BigInt::from(2 * basis.len() as u64) * BigInt::from(dom.bound());
    let lambda = (BigRational::from_integer(numerator) / eps.to_rational()).ceil().to_integer();
    let start = ceil_log2(lambda.magnitude()) + 8;
    let mut weights = Vec::with_capacity(basis.len());
    for &s in basis.elements() {
        let mut p = start;
        // √s is irrational for s > 1, so λ√s is never a half-integer and
        // the loop ends; s = 1 is exact from the start.
        let u = loop {
            let iv = sqrt_interval(s, p)?.scale(&lambda);
            let lo = nearest_integer(iv.lo());
            if lo == nearest_integer(iv.hi()) {
                break lo;
            }
            p *= 2;
        };
        weights.push(u);
    }
    LtfAdvice::new(
        *dom,
        weights,
        LtfMethod::Round,
        LtfProvenance::Round { lambda, eps_min: gap.enclosure },
    )
}

/// LP synthesis: a vertex of `{z : ⟨Δ, z⟩ >= 1 for every Δ with positive
/// value}` minimizing `Σ zⱼ`, scaled to integers.
pub fn synth_lp(dom: &DomainSpec, cap: u64) -> Result<LtfAdvice> {
    let basis = dom.basis();
    let mut constraints = Vec::new();
    let mut indices = Vec::new();
    for (idx, inst) in enumerate_domain(dom, cap)?.enumerate() {
        if is_zero(&inst) || sign_exact(&inst)? != Sign::Positive {
            continue;
        }
        if constraints.len() == MAX_LP_CONSTRAINTS {
            return Err(resource(format!("weight LP exceeds {MAX_LP_CONSTRAINTS} constraints")));
        }
        constraints.push(inst.delta().to_vec());
        indices.push(idx as u64);
    }
    let vertex = solve_weight_lp(&constraints, basis.len(), MAX_LP_PIVOTS)?;
    let lcm = vertex
        .z
        .iter()
        .fold(BigInt::one(), |acc, z| acc.lcm(z.denom()));
    let weights: Vec<BigInt> = vertex.z.iter().map(|z| (z * &lcm).to_integer()).collect();
    for c in &constraints {
        let dot: BigInt = c.iter().zip(&weights).map(|(&d, u)| u * d).sum();
        if !dot.is_positive() {
            return Err(internal(format!("LP weights misclassify {c:?}")));
        }
    }
    let tight = vertex.tight.iter().map(|&t| indices[t]).collect();
    LtfAdvice::new(*dom, weights, LtfMethod::Lp, LtfProvenance::Lp { tight })
}

/// `sign(Σ Δⱼuⱼ)`, after the exact zero test.
pub fn decide_ltf(inst: &UussrInstance, adv: &LtfAdvice) -> Result<Sign> {
    if !adv.domain.contains(inst) {
        return Err(domain(format!(
            "instance {:?} (k = {}) lies outside the advice domain {}",
            inst.delta(),
            inst.k(),
            adv.domain
        )));
    }
    if is_zero(inst) {
        return Ok(Sign::Zero);
    }
    let dot: BigInt = inst
        .delta()
        .iter()
        .zip(&adv.weights)
        .filter(|(&d, _)| d != 0)
        .map(|(&d, u)| u * d)
        .sum();
    Ok(Sign::of_bigint(&dot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::DEFAULT_ENUMERATION_CAP;

    fn dom(k: u64, b: i64) -> DomainSpec {
        DomainSpec::new(k, b).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn agrees_everywhere(adv: &LtfAdvice) -> bool {
        enumerate_domain(adv.domain(), DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .all(|i| decide_ltf(&i, adv).unwrap() == sign_exact(&i).unwrap())
    }

    #[test]
    fn round_examples() {
        let a = synth_round(&dom(3, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(a.weights(), ints(&[19, 27, 33]).as_slice());
        assert!(matches!(a.provenance(), LtfProvenance::Round { lambda, .. } if *lambda == BigInt::from(19)));
        assert!(agrees_everywhere(&a));

        let a = synth_round(&dom(2, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(a.weights(), ints(&[10, 14]).as_slice());

        // ε = 1: λ = ⌈2·1·5 / 1⌉ = 10
        let a = synth_round(&dom(1, 5), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(a.weights(), ints(&[10]).as_slice());
        assert!(agrees_everywhere(&a));
    }

    #[test]
    fn lp_examples() {
        let a = synth_lp(&dom(1, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(a.weights(), ints(&[1]).as_slice());

        let a = synth_lp(&dom(2, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(a.weights(), ints(&[1, 2]).as_slice());
        assert!(a.max_abs_weight() <= lp_weight_bound(&dom(2, 1)));
        assert!(agrees_everywhere(&a));

        let a = synth_lp(&dom(3, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(a.max_abs_weight() <= BigInt::from(24));
        assert!(agrees_everywhere(&a));
        match a.provenance() {
            LtfProvenance::Lp { tight } => assert_eq!(tight.len(), 3),
            other => panic!("unexpected provenance {other:?}"),
        }
    }

    #[test]
    fn hand_written_realizations() {
        let a = LtfAdvice::new(dom(3, 1), ints(&[3, 4, 5]), LtfMethod::Lp, LtfProvenance::Unrecorded).unwrap();
        assert!(agrees_everywhere(&a));
        let a = LtfAdvice::new(dom(2, 1), ints(&[2, 3]), LtfMethod::Lp, LtfProvenance::Unrecorded).unwrap();
        assert!(agrees_everywhere(&a));
        // (1, 1) cannot tell √2 − 1 from 0
        let a = LtfAdvice::new(dom(2, 1), ints(&[1, 1]), LtfMethod::Lp, LtfProvenance::Unrecorded).unwrap();
        assert!(!agrees_everywhere(&a));
    }

    #[test]
    fn decide_examples() {
        let a = LtfAdvice::new(dom(3, 1), ints(&[19, 27, 33]), LtfMethod::Round, LtfProvenance::Unrecorded).unwrap();
        let i = |d: &[i64]| UussrInstance::from_k(3, d.to_vec()).unwrap();
        assert_eq!(decide_ltf(&i(&[0, 0, 0]), &a).unwrap(), Sign::Zero);
        assert_eq!(decide_ltf(&i(&[1, 1, -1]), &a).unwrap(), Sign::Positive);
        assert_eq!(decide_ltf(&i(&[0, 1, -1]), &a).unwrap(), Sign::Negative);
        assert!(matches!(decide_ltf(&i(&[2, 0, 0]), &a), Err(Error::Domain(_))));
        let other_k = UussrInstance::from_k(4, vec![1, 0, 0]).unwrap();
        assert!(matches!(decide_ltf(&other_k, &a), Err(Error::Domain(_))));
    }

    #[test]
    fn weight_count_must_match() {
        assert!(LtfAdvice::new(dom(3, 1), ints(&[1, 2]), LtfMethod::Lp, LtfProvenance::Unrecorded).is_err());
    }

    #[test]
    fn lp_bound_values() {
        assert_eq!(lp_weight_bound(&dom(2, 1)), BigInt::from(6));
        assert_eq!(lp_weight_bound(&dom(3, 1)), BigInt::from(24));
        assert_eq!(lp_weight_bound(&dom(3, 2)), BigInt::from(24 * 8));
    }

    #[test]
    fn method_names() {
        assert_eq!("round".parse::<LtfMethod>().unwrap(), LtfMethod::Round);
        assert_eq!(LtfMethod::Lp.to_string(), "lp");
        assert!("simplex".parse::<LtfMethod>().is_err());
    }
}
