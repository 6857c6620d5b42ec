//! Lightest-basis advice.
//!
//! The positive-value vectors of a domain, ordered by value, yield a unique
//! greedy basis `b⁽⁰⁾, …, b⁽ᵐ⁾` with values `0 < v₀ < … < v_m`. Any instance
//! `Δ = Σ cᵢ·b⁽ⁱ⁾` satisfies `|Σ Δⱼ√sⱼ| >= v_{m₁}` where `m₁` is the last index
//! with `cᵢ ≠ 0`, so short approximations `vᵢ ≈ βᵢ·2^(-eᵢ)` are enough to
//! read off its sign.
//!
//! Precision: with `C = (m+1)!·B^(m+1)` bounding every `|cᵢ|`, the default
//! `P* = m² + ⌈log₂(4(m+1)·C)⌉` for both the mantissa width and the drop
//! window keeps the total error of the truncated sum below
//! `2^(-e_{m₁})·2^(-m²-1) < v_{m₁}`.

use std::cell::RefCell;
use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{Dyadic, DyadicInterval};
use crate::error::{domain, internal, resource, Error, Result};
use crate::instances::{enumerate_domain, is_zero, DomainSpec, UussrInstance};
use crate::linalg::{self, IncrementalEchelon, Matrix};
use crate::oracle::{ceil_log2, certified_precision, eval_interval, sign_exact, START_PRECISION};
use crate::sign::Sign;

/// Basis rows without value approximations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightestBasis {
    domain: DomainSpec,
    rows: Vec<Vec<i64>>,
}

impl LightestBasis {
    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// Lightest first.
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSearchReport {
    pub domain: DomainSpec,
    /// Vectors with positive value, `t = |W|`.
    pub positive_count: u64,
    pub examined: u64,
    /// Positive vectors rejected as dependent before the basis filled up.
    pub skipped_dependent: u64,
}

/// `v ≈ β·2^(-e)` with `β = mantissa / 2^p_mant` in `[1, 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxValue {
    pub mantissa: BigInt,
    pub exponent: i64,
}

impl ApproxValue {
    pub fn beta(&self, p_mant: u64) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << p_mant as usize)
    }

    /// `β·2^(-e)`.
    pub fn value(&self, p_mant: u64) -> BigRational {
        self.beta(p_mant) * pow2(-self.exponent)
    }
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisAdvice {
    domain: DomainSpec,
    rows: Vec<Vec<i64>>,
    values: Vec<ApproxValue>,
    /// `(rowsᵀ)⁻¹`, so that `c = inverse · Δ`.
    inverse: Option<Matrix>,
    p_mant: u64,
    p_drop: u64,
}

impl BasisAdvice {
    /// Assembles advice from stored parts, checking shapes and ranges.
    pub fn from_parts(
        dom: DomainSpec,
        rows: Vec<Vec<i64>>,
        values: Vec<ApproxValue>,
        inverse: Option<Matrix>,
        p_mant: u64,
        p_drop: u64,
    ) -> Result<BasisAdvice> {
        let dim = dom.basis().len();
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(domain(format!("basis must be {dim} x {dim}")));
        }
        if rows.iter().flatten().any(|x| x.abs() > dom.bound()) {
            return Err(domain(format!("basis entry outside [-{0}, {0}]", dom.bound())));
        }
        if values.len() != dim {
            return Err(domain(format!("expected {dim} values, got {}", values.len())));
        }
        let one = BigInt::one() << p_mant as usize;
        let two = &one << 1;
        if values.iter().any(|v| v.mantissa < one || v.mantissa >= two) {
            return Err(domain("every mantissa must lie in [1, 2)"));
        }
        if linalg::determinant(&rows)?.is_zero() {
            return Err(domain("basis rows are linearly dependent"));
        }
        if let Some(inv) = &inverse {
            if inv.len() != dim || inv.iter().any(|r| r.len() != dim) {
                return Err(domain(format!("inverse must be {dim} x {dim}")));
            }
            let rows_t = linalg::transpose(&linalg::to_rational_matrix(&rows));
            if linalg::mat_mul(inv, &rows_t) != linalg::identity(dim) {
                return Err(domain("inverse does not invert the transposed basis"));
            }
        }
        Ok(BasisAdvice { domain: dom, rows, values, inverse, p_mant, p_drop })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn values(&self) -> &[ApproxValue] {
        &self.values
    }

    pub fn inverse(&self) -> Option<&Matrix> {
        self.inverse.as_ref()
    }

    pub fn p_mant(&self) -> u64 {
        self.p_mant
    }

    pub fn p_drop(&self) -> u64 {
        self.p_drop
    }

    /// Attaches `(rowsᵀ)⁻¹` so that deciding needs no elimination.
    pub fn with_inverse(mut self) -> Result<BasisAdvice> {
        let m = linalg::transpose(&linalg::to_rational_matrix(&self.rows));
        self.inverse = Some(linalg::inverse(&m)?);
        Ok(self)
    }

    pub fn without_inverse(mut self) -> BasisAdvice {
        self.inverse = None;
        self
    }

    pub fn determinant(&self) -> Result<BigInt> {
        linalg::determinant(&self.rows)
    }

    fn row_instance(&self, i: usize) -> Result<UussrInstance> {
        UussrInstance::new(self.domain.basis(), self.rows[i].clone())
    }
}

/// `(m+1)!·B^(m+1)`: Cramer bound on basis coordinates.
pub fn coordinate_bound(dom: &DomainSpec) -> BigInt {
    let dim = dom.basis().len() as u64;
    let fact: BigInt = (1..=dim).map(BigInt::from).product();
    fact * num_traits::pow(BigInt::from(dom.bound()), dim as usize)
}

/// `P* = m² + ⌈log₂(4·(m+1)·(m+1)!·B^(m+1))⌉`.
pub fn default_precision(dom: &DomainSpec) -> u64 {
    let m = dom.basis().m() as u64;
    let x = BigInt::from(4 * (m + 1)) * coordinate_bound(dom);
    m * m + ceil_log2(x.magnitude())
}

/// Greedy search over the domain sorted by exact value.
pub fn lightest_basis(dom: &DomainSpec, cap: u64) -> Result<(LightestBasis, BasisSearchReport)> {
    let mut examined = 0u64;
    let mut positive = Vec::new();
    for inst in enumerate_domain(dom, cap)? {
        examined += 1;
        if !is_zero(&inst) && sign_exact(&inst)? == Sign::Positive {
            let enclosure = eval_interval(&inst, START_PRECISION)?;
            positive.push((inst, enclosure));
        }
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    positive.sort_by(|(a, ea), (b, eb)| {
        if ea.hi() < eb.lo() {
            return Ordering::Less;
        }
        if eb.hi() < ea.lo() {
            return Ordering::Greater;
        }
        let exact = a.difference(b).and_then(|d| sign_exact(&d));
        match exact {
            Ok(Sign::Negative) => Ordering::Less,
            Ok(Sign::Positive) => Ordering::Greater,
            Ok(Sign::Zero) => Ordering::Equal,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Ordering::Equal
            }
        }
    });
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let dim = dom.basis().len();
    let mut echelon = IncrementalEchelon::new();
    let mut rows = Vec::with_capacity(dim);
    let mut skipped = 0u64;
    for (inst, _) in &positive {
        if rows.len() == dim {
            break;
        }
        if echelon.try_insert(inst.delta()) {
            rows.push(inst.delta().to_vec());
        } else {
            skipped += 1;
        }
    }
    if rows.len() != dim {
        return Err(internal("positive vectors do not span; unit vectors should always be present"));
    }
    let report = BasisSearchReport {
        domain: *dom,
        positive_count: positive.len() as u64,
        examined,
        skipped_dependent: skipped,
    };
    Ok((LightestBasis { domain: *dom, rows }, report))
}

/// Approximates every basis value as `β·2^(-e)` with `β ∈ [1, 2)` accurate to
/// `p_mant` bits. Both precisions default to [`default_precision`].
pub fn approx_values(
    basis: &LightestBasis,
    p_mant: Option<u64>,
    p_drop: Option<u64>,
) -> Result<BasisAdvice> {
    let dom = basis.domain;
    let p_mant = p_mant.unwrap_or_else(|| default_precision(&dom));
    let p_drop = p_drop.unwrap_or_else(|| default_precision(&dom));
    let shared = dom.basis();
    let mut values = Vec::with_capacity(basis.rows.len());
    for row in &basis.rows {
        let inst = UussrInstance::new(shared.clone(), row.clone())?;
        values.push(approximate(&inst, p_mant)?);
    }
    BasisAdvice::from_parts(dom, basis.rows.clone(), values, None, p_mant, p_drop)
}

fn approximate(inst: &UussrInstance, p_mant: u64) -> Result<ApproxValue> {
    let cap = certified_precision(inst)?
        .saturating_add(p_mant)
        .saturating_add(64)
        .saturating_mul(4);
    let mut p = p_mant + 16;
    loop {
        let iv = eval_interval(inst, p)?;
        if iv.lo().sign() == Sign::Positive {
            let (lo_log, hi_log) = (iv.lo().floor_log2(), iv.hi().floor_log2());
            if let (Some(l), Some(h)) = (lo_log, hi_log) {
                let e = -l;
                // need the whole enclosure inside one binade and width·2^e <= 2^-(p_mant+1)
                let fine = iv.width().ldexp(e) <= Dyadic::new(BigInt::one(), -(p_mant as i64) - 1);
                if l == h && fine {
                    let scaled = iv.lo().ldexp(e + p_mant as i64);
                    let mut mantissa = (&scaled + &Dyadic::new(BigInt::one(), -1)).floor();
                    let top = BigInt::one() << (p_mant as usize + 1);
                    if mantissa >= top {
                        mantissa = top - 1;
                    }
                    return Ok(ApproxValue { mantissa, exponent: e });
                }
            }
        }
        if p >= cap {
            return Err(resource(format!("value of {:?} not resolved at {cap} bits", inst.delta())));
        }
        p = p.saturating_mul(2).min(cap);
    }
}

/// `Δ = Σ cᵢ·b⁽ⁱ⁾` with the window `[m₀, m₁]` of terms kept by the decider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisCoordinates {
    pub c: Vec<BigRational>,
    /// Largest index with `cᵢ ≠ 0`.
    pub m1: usize,
    /// Smallest index `<= m1` with `e_{m0} - e_{m1} <= p_drop`.
    pub m0: usize,
}

impl BasisCoordinates {
    pub fn max_abs(&self) -> BigRational {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
    }

    /// True when `Δ` is a scalar multiple of a single basis row.
    pub fn is_ray(&self) -> bool {
        self.c.iter().filter(|x| !x.is_zero()).count() == 1
    }
}

fn check_domain(inst: &UussrInstance, adv: &BasisAdvice) -> Result<()> {
    if !adv.domain.contains(inst) {
        return Err(domain(format!(
            "instance {:?} (k = {}) lies outside the advice domain {}",
            inst.delta(),
            inst.k(),
            adv.domain
        )));
    }
    Ok(())
}

pub fn express_in_basis(inst: &UussrInstance, adv: &BasisAdvice) -> Result<BasisCoordinates> {
    check_domain(inst, adv)?;
    if is_zero(inst) {
        return Err(domain("the zero vector has no nonzero basis coordinate"));
    }
    let target: Vec<BigRational> =
        inst.delta().iter().map(|&d| BigRational::from_integer(d.into())).collect();
    let c = match &adv.inverse {
        Some(inv) => linalg::mat_vec(inv, &target),
        None => {
            let m = linalg::transpose(&linalg::to_rational_matrix(&adv.rows));
            linalg::solve(&m, &target)?
        }
    };
    let m1 = c
        .iter()
        .rposition(|x| !x.is_zero())
        .ok_or_else(|| internal("nonzero vector got all-zero coordinates"))?;
    let e1 = adv.values[m1].exponent;
    let m0 = (0..=m1)
        .find(|&i| adv.values[i].exponent - e1 <= adv.p_drop as i64)
        .unwrap_or(m1);
    Ok(BasisCoordinates { c, m1, m0 })
}

/// `Ṽ = Σ_{i=m0}^{m1} cᵢ·βᵢ·2^(-eᵢ)`.
pub fn truncated_value(coords: &BasisCoordinates, adv: &BasisAdvice) -> BigRational {
    (coords.m0..=coords.m1)
        .map(|i| &coords.c[i] * adv.values[i].value(adv.p_mant))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// Upper bound on `|Ṽ − Σ cᵢvᵢ|`:
/// `(m1−m0+1)·max|c|·2^(-p_mant-e_{m1}) + m0·max|c|·2·2^(-e_{m1}-p_drop)`.
pub fn error_bound(coords: &BasisCoordinates, adv: &BasisAdvice) -> BigRational {
    let cmax = coords.max_abs();
    let e1 = adv.values[coords.m1].exponent;
    let kept = BigRational::from_integer(BigInt::from(coords.m1 - coords.m0 + 1));
    let dropped = BigRational::from_integer(BigInt::from(2 * coords.m0));
    &cmax * (kept * pow2(-(adv.p_mant as i64) - e1) + dropped * pow2(-e1 - adv.p_drop as i64))
}

pub fn decide_basis(inst: &UussrInstance, adv: &BasisAdvice) -> Result<Sign> {
    check_domain(inst, adv)?;
    if is_zero(inst) {
        return Ok(Sign::Zero);
    }
    let coords = express_in_basis(inst, adv)?;
    let e1 = adv.values[coords.m1].exponent;
    // scaled by 2^(e_{m1}) to keep every power nonnegative
    let scaled = (coords.m0..=coords.m1)
        .map(|i| &coords.c[i] * adv.values[i].beta(adv.p_mant) * pow2(e1 - adv.values[i].exponent))
        .fold(BigRational::zero(), |acc, x| acc + x);
    if scaled.is_zero() {
        return Err(internal(format!("truncated sum vanished for {:?}", inst.delta())));
    }
    Ok(if scaled.is_positive() { Sign::Positive } else { Sign::Negative })
}

/// Outcome of checking `|Σ Δⱼ√sⱼ| > v_{m1}` over a domain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Prop6Report {
    pub checked: u64,
    /// Instances off every basis ray where the strict inequality held.
    pub strict: u64,
    /// Scalar multiples `c·b⁽ⁱ⁾`, where `|A| = |c|·vᵢ >= vᵢ` is checked.
    pub rays: u64,
    pub violations: Vec<Vec<i64>>,
}

pub fn verify_prop6(dom: &DomainSpec, adv: &BasisAdvice, cap: u64) -> Result<Prop6Report> {
    if adv.domain != *dom {
        return Err(domain("advice was built for a different domain"));
    }
    let mut report = Prop6Report::default();
    for inst in enumerate_domain(dom, cap)? {
        if is_zero(&inst) {
            continue;
        }
        report.checked += 1;
        let coords = express_in_basis(&inst, adv)?;
        let oriented = match sign_exact(&inst)? {
            Sign::Negative => inst.negated(),
            _ => inst.clone(),
        };
        let gap = sign_exact(&oriented.difference(&adv.row_instance(coords.m1)?)?)?;
        let ok = if coords.is_ray() {
            report.rays += 1;
            gap != Sign::Negative
        } else {
            report.strict += 1;
            gap == Sign::Positive
        };
        if !ok {
            report.violations.push(inst.delta().to_vec());
        }
    }
    Ok(report)
}

/// Enclosure of `Σ cᵢvᵢ = Σ Δⱼ√sⱼ` used by error-certificate checks.
pub fn exact_value_enclosure(inst: &UussrInstance, precision: u64) -> Result<DyadicInterval> {
    eval_interval(inst, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::DEFAULT_ENUMERATION_CAP;

    fn dom(k: u64, b: i64) -> DomainSpec {
        DomainSpec::new(k, b).unwrap()
    }

    fn advice(k: u64, b: i64) -> BasisAdvice {
        let (lb, _) = lightest_basis(&dom(k, b), DEFAULT_ENUMERATION_CAP).unwrap();
        approx_values(&lb, None, None).unwrap()
    }

    fn inst(k: u64, d: &[i64]) -> UussrInstance {
        UussrInstance::from_k(k, d.to_vec()).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn basis_examples() {
        let (lb, report) = lightest_basis(&dom(1, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(lb.rows(), &[vec![1]]);
        assert_eq!(report.positive_count, 1);

        let (lb, report) = lightest_basis(&dom(2, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(lb.rows(), &[vec![-1, 1], vec![1, 0]]);
        assert_eq!(report.positive_count, 4);
        assert_eq!(report.examined, 9);
        assert_eq!(report.skipped_dependent, 0);

        let (lb, report) = lightest_basis(&dom(3, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(lb.rows(), &[vec![0, -1, 1], vec![-1, 1, 0], vec![1, 1, -1]]);
        assert_eq!(report.positive_count, 13);
        // (−1, 0, 1) ≈ 0.318 + 0.414 lies in the span of the first two rows
        assert_eq!(report.skipped_dependent, 0);
        assert_eq!(linalg::determinant(lb.rows()).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn values_examples() {
        let adv = advice(3, 1);
        let p = adv.p_mant();
        assert_eq!(adv.values()[0].exponent, 2);
        assert_eq!(adv.values()[1].exponent, 2);
        assert_eq!(adv.values()[2].exponent, 1);
        let tol = 2f64.powi(-(p as i32));
        let b0 = adv.values()[0].beta(p);
        assert!((b0.to_f64_lossy() - 4.0 * (3f64.sqrt() - 2f64.sqrt())).abs() <= tol);
        let b2 = adv.values()[2].beta(p);
        assert!((b2.to_f64_lossy() - 2.0 * (1.0 + 2f64.sqrt() - 3f64.sqrt())).abs() <= tol);

        let one = advice(1, 1);
        assert_eq!(one.values()[0].exponent, 0);
        assert_eq!(one.values()[0].beta(one.p_mant()), q(1));
    }

    trait Lossy {
        fn to_f64_lossy(&self) -> f64;
    }

    impl Lossy for BigRational {
        fn to_f64_lossy(&self) -> f64 {
            use num_traits::ToPrimitive;
            self.to_f64().unwrap()
        }
    }

    #[test]
    fn express_examples() {
        let adv = advice(3, 1);
        let c = express_in_basis(&inst(3, &[0, -1, 1]), &adv).unwrap();
        assert_eq!(c.c, vec![q(1), q(0), q(0)]);
        assert_eq!((c.m0, c.m1), (0, 0));

        let c = express_in_basis(&inst(3, &[1, 0, 0]), &adv).unwrap();
        assert_eq!(c.c, vec![q(1), q(0), q(1)]);
        assert_eq!(c.m1, 2);

        let c = express_in_basis(&inst(3, &[0, 0, 1]), &adv).unwrap();
        assert_eq!(c.c, vec![q(2), q(1), q(1)]);
        assert_eq!(c.m1, 2);

        let with_inv = adv.clone().with_inverse().unwrap();
        for d in [[1, 0, 0], [0, 0, 1], [1, -1, 1]] {
            assert_eq!(
                express_in_basis(&inst(3, &d), &with_inv).unwrap(),
                express_in_basis(&inst(3, &d), &adv).unwrap()
            );
        }
        assert!(express_in_basis(&inst(3, &[0, 0, 0]), &adv).is_err());
        assert!(express_in_basis(&inst(3, &[2, 0, 0]), &adv).is_err());
    }

    #[test]
    fn decide_examples() {
        let adv = advice(3, 1);
        assert_eq!(decide_basis(&inst(3, &[0, 0, 0]), &adv).unwrap(), Sign::Zero);
        assert_eq!(decide_basis(&inst(3, &[1, 0, 0]), &adv).unwrap(), Sign::Positive);
        assert_eq!(decide_basis(&inst(3, &[0, 1, -1]), &adv).unwrap(), Sign::Negative);
        let c = express_in_basis(&inst(3, &[1, 0, 0]), &adv).unwrap();
        let v = truncated_value(&c, &adv).to_f64_lossy();
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn prop6_examples() {
        let adv = advice(2, 1);
        let c = express_in_basis(&inst(2, &[1, 1]), &adv).unwrap();
        assert_eq!(c.c, vec![q(1), q(2)]);
        assert_eq!(c.m1, 1);
        let report = verify_prop6(&dom(2, 1), &adv, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(report.violations.is_empty());
        assert_eq!(report.checked, 8);

        let report = verify_prop6(&dom(3, 1), &advice(3, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(report.violations.is_empty());
        assert_eq!(report.rays, 6);
    }

    #[test]
    fn precision_constants() {
        // m = 2, B = 1: 4 + ⌈log₂(4·3·6)⌉ = 4 + 7
        assert_eq!(default_precision(&dom(3, 1)), 11);
        assert_eq!(coordinate_bound(&dom(3, 2)), BigInt::from(6 * 8));
    }

    #[test]
    fn from_parts_validation() {
        let adv = advice(3, 1);
        let bad_rows = BasisAdvice::from_parts(
            dom(3, 1),
            vec![vec![0, -1, 2], vec![-1, 1, 0], vec![1, 1, -1]],
            adv.values().to_vec(),
            None,
            adv.p_mant(),
            adv.p_drop(),
        );
        assert!(bad_rows.is_err());
        let mut vals = adv.values().to_vec();
        vals[0].mantissa = BigInt::one();
        let bad_mant =
            BasisAdvice::from_parts(dom(3, 1), adv.rows().to_vec(), vals, None, adv.p_mant(), adv.p_drop());
        assert!(bad_mant.is_err());
    }
}
