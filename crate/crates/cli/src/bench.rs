//! Oracle precision benchmark over instance families.

use std::fmt::Write;

use ussr_core::instances::{gen_family, is_zero, normalize};
use ussr_core::numtheory::primes_up_to;
use ussr_core::oracle::{certified_precision, decide};
use ussr_core::{Family, Result, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub family: Family,
    pub k: u64,
    pub terms: usize,
    pub bits_used: u64,
    /// Precision at which termination is guaranteed; 1 for zero sums.
    pub certified_bits: u64,
    pub sign: Sign,
}

/// The `k` values benchmarked for a family. Prime families only change at
/// primes, so they are sampled there and at `k_max`.
pub fn bench_ks(family: Family, k_max: u64) -> Vec<u64> {
    match family {
        Family::Random => (1..=k_max).collect(),
        Family::Primes | Family::AlternatingPrimes => {
            let mut ks = primes_up_to(k_max);
            if k_max >= 1 && ks.last() != Some(&k_max) {
                ks.push(k_max);
            }
            ks
        }
    }
}

/// One record per benchmarked `k`, in increasing order of `k`.
pub fn bench_precision(family: Family, k_max: u64, seed: u64) -> Result<Vec<BenchRecord>> {
    bench_ks(family, k_max)
        .into_iter()
        .map(|k| {
            let inst = gen_family(family, k, seed)?;
            let normal = normalize(&inst)?;
            let decision = decide(&normal, None)?;
            let certified_bits = if is_zero(&normal) { 1 } else { certified_precision(&normal)? };
            Ok(BenchRecord {
                family,
                k,
                terms: inst.terms().len(),
                bits_used: decision.bits_used,
                certified_bits,
                sign: decision.sign,
            })
        })
        .collect()
}

pub fn records_to_csv(family: Family, k_max: u64, seed: u64, records: &[BenchRecord]) -> String {
    let mut out = format!(
        "# ussr bench {}\n# family: {family} k_max={k_max} seed={seed}\n# family,k,terms,bits_used,certified_bits,sign\n",
        env!("CARGO_PKG_VERSION")
    );
    for r in records {
        writeln!(out, "{},{},{},{},{},{}", r.family, r.k, r.terms, r.bits_used, r.certified_bits, r.sign).unwrap();
    }
    out
}
