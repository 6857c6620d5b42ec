//! Instance model: raw signed sums, their normal form over the square-free
//! basis, coefficient domains and instance families.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::{Dyadic, DyadicInterval};
use crate::error::{domain, resource, Error, Result};
use crate::numtheory::{primes_up_to, square_free_basis, square_free_part, SquareFreeBasis};
use crate::oracle::{eval_interval, sign_exact};
use crate::sign::Sign;

/// Default ceiling on the number of vectors a domain may enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// One term `±√radicand`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub negative: bool,
    pub radicand: u64,
}

impl Term {
    pub fn plus(radicand: u64) -> Term {
        Term { negative: false, radicand }
    }

    pub fn minus(radicand: u64) -> Term {
        Term { negative: true, radicand }
    }

    pub fn sign(&self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { '-' } else { '+' }, self.radicand)
    }
}

/// `Σ ±√aᵢ` with every `aᵢ` in `[1, k]`. Repeated radicands are allowed and
/// the number of terms is unrestricted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UssrInstance {
    k: u64,
    terms: Vec<Term>,
}

impl UssrInstance {
    pub fn new(k: u64, terms: Vec<Term>) -> Result<UssrInstance> {
        if k < 1 {
            return Err(domain("k must be >= 1"));
        }
        if let Some(t) = terms.iter().find(|t| t.radicand < 1 || t.radicand > k) {
            return Err(domain(format!("radicand {} outside [1, {k}]", t.radicand)));
        }
        Ok(UssrInstance { k, terms })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
}

/// `Σⱼ Δⱼ·√sⱼ` over the square-free basis of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UussrInstance {
    basis: Arc<SquareFreeBasis>,
    delta: Vec<i64>,
}

impl UussrInstance {
    pub fn new(basis: Arc<SquareFreeBasis>, delta: Vec<i64>) -> Result<UussrInstance> {
        if delta.len() != basis.len() {
            return Err(domain(format!(
                "coefficient vector has length {}, basis for k = {} has {} elements",
                delta.len(),
                basis.k(),
                basis.len()
            )));
        }
        Ok(UussrInstance { basis, delta })
    }

    pub fn from_k(k: u64, delta: Vec<i64>) -> Result<UussrInstance> {
        UussrInstance::new(Arc::new(square_free_basis(k)?), delta)
    }

    pub fn k(&self) -> u64 {
        self.basis.k()
    }

    pub fn basis(&self) -> &Arc<SquareFreeBasis> {
        &self.basis
    }

    pub fn delta(&self) -> &[i64] {
        &self.delta
    }

    pub fn max_abs_coefficient(&self) -> u64 {
        self.delta.iter().map(|d| d.unsigned_abs()).max().unwrap_or(0)
    }

    /// Same basis, different coefficients.
    pub fn with_delta(&self, delta: Vec<i64>) -> Result<UussrInstance> {
        UussrInstance::new(self.basis.clone(), delta)
    }

    pub fn negated(&self) -> UussrInstance {
        UussrInstance {
            basis: self.basis.clone(),
            delta: self.delta.iter().map(|d| -d).collect(),
        }
    }

    /// Coefficient-wise `self - other`. Both must share `k`.
    pub fn difference(&self, other: &UussrInstance) -> Result<UussrInstance> {
        if self.k() != other.k() {
            return Err(domain("instances over different k"));
        }
        let delta = self
            .delta
            .iter()
            .zip(&other.delta)
            .map(|(a, b)| a.checked_sub(*b).ok_or_else(|| resource("coefficient overflow")))
            .collect::<Result<Vec<_>>>()?;
        self.with_delta(delta)
    }
}

/// Rewrites `Σ δᵢ√aᵢ` as `Δ₀ + Σ Δⱼ√sⱼ`: each `aᵢ = c²·s` adds `δᵢ·c` to the
/// coefficient of `√s`, perfect squares landing on `s₀ = 1`.
pub fn normalize(inst: &UssrInstance) -> Result<UussrInstance> {
    let basis = Arc::new(square_free_basis(inst.k)?);
    let mut delta = vec![0i64; basis.len()];
    for term in &inst.terms {
        if term.radicand < 1 || term.radicand > inst.k {
            return Err(domain(format!("radicand {} outside [1, {}]", term.radicand, inst.k)));
        }
        let dec = square_free_part(term.radicand)?;
        let j = basis
            .index_of(dec.part)
            .ok_or_else(|| crate::error::internal(format!("{} missing from basis", dec.part)))?;
        let step = term.sign() * dec.core as i64;
        delta[j] = delta[j]
            .checked_add(step)
            .ok_or_else(|| resource("coefficient overflow"))?;
    }
    UussrInstance::new(basis, delta)
}

/// Exact zero test: the basis square roots are linearly independent over
/// the rationals, so the value vanishes iff every coefficient does.
pub fn is_zero(inst: &UussrInstance) -> bool {
    inst.delta.iter().all(|&d| d == 0)
}

/// The coefficient box `[-bound, bound]^(m+1)` over the square-free basis
/// of `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    k: u64,
    bound: i64,
}

impl DomainSpec {
    pub fn new(k: u64, bound: i64) -> Result<DomainSpec> {
        if k < 1 {
            return Err(domain("domain requires k >= 1"));
        }
        if bound < 1 {
            return Err(domain("domain requires B >= 1"));
        }
        Ok(DomainSpec { k, bound })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn basis(&self) -> Arc<SquareFreeBasis> {
        Arc::new(square_free_basis(self.k).expect("k >= 1 checked at construction"))
    }

    /// `(2B+1)^(m+1)`, or `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        let dim = self.basis().len() as u32;
        (2 * self.bound as u64 + 1).checked_pow(dim)
    }

    pub fn contains(&self, inst: &UussrInstance) -> bool {
        inst.k() == self.k && inst.delta().iter().all(|d| d.abs() <= self.bound)
    }

    /// Position of `delta` in the lexicographic enumeration order.
    pub fn index_of(&self, delta: &[i64]) -> Option<u64> {
        let radix = 2 * self.bound as u64 + 1;
        delta.iter().try_fold(0u64, |acc, &d| {
            if d.abs() > self.bound {
                return None;
            }
            acc.checked_mul(radix)?.checked_add((d + self.bound) as u64)
        })
    }

    pub fn vector_at(&self, mut index: u64) -> Vec<i64> {
        let dim = self.basis().len();
        let radix = 2 * self.bound as u64 + 1;
        let mut v = vec![0i64; dim];
        for slot in v.iter_mut().rev() {
            *slot = (index % radix) as i64 - self.bound;
            index /= radix;
        }
        v
    }

    /// Uniform random member of the domain.
    pub fn sample<R: Rng>(&self, basis: &Arc<SquareFreeBasis>, rng: &mut R) -> UussrInstance {
        let delta = (0..basis.len()).map(|_| rng.gen_range(-self.bound..=self.bound)).collect();
        UussrInstance { basis: basis.clone(), delta }
    }

    fn check_enumerable(&self, cap: u64) -> Result<u64> {
        match self.size() {
            Some(n) if n <= cap => Ok(n),
            Some(n) => Err(resource(format!(
                "domain k = {}, B = {} has {n} vectors, cap is {cap}",
                self.k, self.bound
            ))),
            None => Err(resource(format!(
                "domain k = {}, B = {} is too large to enumerate",
                self.k, self.bound
            ))),
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} B={}", self.k, self.bound)
    }
}

/// Lexicographic odometer over a domain; the last coordinate varies fastest.
#[derive(Debug, Clone)]
pub struct DomainIter {
    basis: Arc<SquareFreeBasis>,
    bound: i64,
    next: Option<Vec<i64>>,
    remaining: u64,
}

impl Iterator for DomainIter {
    type Item = UussrInstance;

    fn next(&mut self) -> Option<UussrInstance> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for slot in succ.iter_mut().rev() {
            if *slot < self.bound {
                *slot += 1;
                carried = false;
                break;
            }
            *slot = -self.bound;
        }
        if !carried {
            self.next = Some(succ);
        }
        self.remaining -= 1;
        Some(UussrInstance { basis: self.basis.clone(), delta: current })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

/// Every vector of `dom` exactly once, in lexicographic order.
pub fn enumerate_domain(dom: &DomainSpec, cap: u64) -> Result<DomainIter> {
    let total = dom.check_enumerable(cap)?;
    let basis = dom.basis();
    let start = vec![-dom.bound; basis.len()];
    Ok(DomainIter { basis, bound: dom.bound, next: Some(start), remaining: total })
}

/// Smallest nonzero `|Σ Δⱼ√sⱼ|` over a domain.
#[derive(Debug, Clone)]
pub struct MinGap {
    /// Positive enclosure of the minimum, width at most `2^-32`.
    pub enclosure: DyadicInterval,
    /// Lexicographically first vector attaining the minimum.
    pub witness: UussrInstance,
}

pub const MIN_GAP_WIDTH_BITS: u64 = 32;

pub fn min_gap(dom: &DomainSpec, cap: u64) -> Result<MinGap> {
    // (witness, witness oriented to positive value)
    let mut best: Option<(UussrInstance, UussrInstance)> = None;
    for inst in enumerate_domain(dom, cap)? {
        if is_zero(&inst) {
            continue;
        }
        let oriented = match sign_exact(&inst)? {
            Sign::Negative => inst.negated(),
            _ => inst.clone(),
        };
        let replace = match &best {
            None => true,
            Some((_, cur)) => sign_exact(&oriented.difference(cur)?)? == Sign::Negative,
        };
        if replace {
            best = Some((inst, oriented));
        }
    }
    // k >= 1 and B >= 1 always admit the nonzero vector (1, 0, …)
    let (witness, oriented) = best.ok_or_else(|| crate::error::internal("empty domain"))?;
    let dim = witness.delta().len() as u64;
    let scale = dim * dom.bound as u64;
    let mut p = MIN_GAP_WIDTH_BITS + 64 - scale.leading_zeros() as u64;
    let target = Dyadic::new(1.into(), -(MIN_GAP_WIDTH_BITS as i64));
    loop {
        let iv = eval_interval(&oriented, p)?;
        if iv.lo().sign() == Sign::Positive && iv.width() <= target {
            return Ok(MinGap { enclosure: iv, witness });
        }
        p *= 2;
    }
}

/// Named instance generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `+√p` for every prime `p <= k`.
    Primes,
    /// `+√2 −√3 +√5 …` over the primes `<= k`.
    AlternatingPrimes,
    /// `k` terms with uniform radicands in `[1, k]` and uniform signs.
    Random,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s {
            "primes" => Ok(Family::Primes),
            "alternating-primes" => Ok(Family::AlternatingPrimes),
            "random" => Ok(Family::Random),
            other => Err(domain(format!(
                "unknown family {other:?} (expected primes, alternating-primes or random)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Primes => "primes",
            Family::AlternatingPrimes => "alternating-primes",
            Family::Random => "random",
        })
    }
}

/// Deterministic in `(family, k, seed)`; the seed only affects `Random`.
pub fn gen_family(family: Family, k: u64, seed: u64) -> Result<UssrInstance> {
    let terms = match family {
        Family::Primes => primes_up_to(k).into_iter().map(Term::plus).collect(),
        Family::AlternatingPrimes => primes_up_to(k)
            .into_iter()
            .enumerate()
            .map(|(i, p)| Term { negative: i % 2 == 1, radicand: p })
            .collect(),
        Family::Random => {
            if k < 1 {
                return Err(domain("k must be >= 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..k)
                .map(|_| {
                    let radicand = rng.gen_range(1..=k);
                    Term { negative: rng.gen_bool(0.5), radicand }
                })
                .collect()
        }
    };
    UssrInstance::new(k, terms)
}
