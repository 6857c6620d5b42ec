//! Square-free structure of `1..=k`.

use std::sync::OnceLock;

use crate::error::{domain, Result};

/// `n = core² · part` with `part` square-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SquareFreeDecomposition {
    pub n: u64,
    pub core: u64,
    pub part: u64,
}

/// The square-free integers in `[1, k]` in increasing order. Element 0 is
/// always 1, so the basis has `m + 1` elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareFreeBasis {
    k: u64,
    elements: Vec<u64>,
}

impl SquareFreeBasis {
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// Number of elements, `m + 1`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Never true: 1 is always present.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the largest element, `m`.
    pub fn m(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn index_of(&self, s: u64) -> Option<usize> {
        self.elements.binary_search(&s).ok()
    }
}

const SHARED_PRIME_LIMIT: u64 = 1 << 16;

fn shared_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(SHARED_PRIME_LIMIT))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

pub fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn square_free_part(n: u64) -> Result<SquareFreeDecomposition> {
    if n == 0 {
        return Err(domain("square_free_part requires n >= 1"));
    }
    let root = isqrt_u64(n);
    let owned;
    let primes: &[u64] = if root <= SHARED_PRIME_LIMIT {
        shared_primes()
    } else {
        owned = primes_up_to(root);
        &owned
    };
    let mut rest = n;
    let mut core = 1u64;
    let mut part = 1u64;
    for &p in primes {
        if p * p > rest {
            break;
        }
        let mut exp = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            exp += 1;
        }
        core *= p.pow(exp / 2);
        if exp % 2 == 1 {
            part *= p;
        }
    }
    // whatever is left is 1 or a single prime
    part *= rest;
    Ok(SquareFreeDecomposition { n, core, part })
}

/// `flags[i]` is true iff `i` is square-free, for `i` in `1..=k`.
fn square_free_sieve(k: u64) -> Vec<bool> {
    let n = k as usize;
    let mut flags = vec![true; n + 1];
    flags[0] = false;
    let mut d = 2usize;
    while d * d <= n {
        let sq = d * d;
        let mut j = sq;
        while j <= n {
            flags[j] = false;
            j += sq;
        }
        d += 1;
    }
    flags
}

pub fn square_free_basis(k: u64) -> Result<SquareFreeBasis> {
    if k < 1 {
        return Err(domain("square_free_basis requires k >= 1"));
    }
    let elements = square_free_sieve(k)
        .iter()
        .enumerate()
        .filter(|(_, &sf)| sf)
        .map(|(i, _)| i as u64)
        .collect();
    Ok(SquareFreeBasis { k, elements })
}

pub fn square_free_count(k: u64) -> Result<u64> {
    if k < 1 {
        return Err(domain("square_free_count requires k >= 1"));
    }
    Ok(square_free_sieve(k).iter().filter(|&&sf| sf).count() as u64)
}
