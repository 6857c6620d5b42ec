//! Advice verification against the exact oracle.

use std::fmt::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ussr_core::instances::{enumerate_domain, is_zero, DEFAULT_ENUMERATION_CAP};
use ussr_core::oracle::{certified_precision, decide};
use ussr_core::{Advice, DomainSpec, Result, Sign, UussrInstance};

use crate::parallel_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub delta: Vec<i64>,
    pub expected: Sign,
    pub got: Sign,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub domain: DomainSpec,
    pub kind: &'static str,
    pub method: String,
    pub mode: VerifyMode,
    pub total: u64,
    pub agree: u64,
    pub disagree: Vec<Disagreement>,
    pub max_bits_used: u64,
    /// Largest certified termination precision over the nonzero instances.
    pub max_certified_bits: u64,
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn verified(&self) -> bool {
        self.disagree.is_empty()
    }

    /// CSV with a `#` header; wall time is left out so reruns diff clean.
    pub fn to_csv(&self) -> String {
        let mode = match self.mode {
            VerifyMode::Exhaustive => "exhaustive".to_string(),
            VerifyMode::Sampled { samples, seed } => {
                format!("sampled n={samples} seed={seed} (non-exhaustive)")
            }
        };
        let mut out = format!(
            "# ussr verify {}\n# advice: {} {}\n# domain: {}\n# mode: {mode}\n",
            env!("CARGO_PKG_VERSION"),
            self.kind,
            self.method,
            self.domain
        );
        out.push_str("# k,B,kind,method,mode,total,agree,disagree,max_bits_used,max_certified_bits,status\n");
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.domain.k(),
            self.domain.bound(),
            self.kind,
            self.method,
            match self.mode {
                VerifyMode::Exhaustive => "exhaustive",
                VerifyMode::Sampled { .. } => "sampled",
            },
            self.total,
            self.agree,
            self.disagree.len(),
            self.max_bits_used,
            self.max_certified_bits,
            if self.verified() { "verified" } else { "disagreement" }
        )
        .unwrap();
        for d in &self.disagree {
            let delta: Vec<String> = d.delta.iter().map(i64::to_string).collect();
            writeln!(out, "# disagree: {} expected {} got {}", delta.join(" "), d.expected, d.got).unwrap();
        }
        out
    }
}

struct Outcome {
    bits: u64,
    certified: u64,
    miss: Option<Disagreement>,
}

fn check(adv: &Advice, inst: &UussrInstance) -> Result<Outcome> {
    let truth = decide(inst, None)?;
    let got = adv.decide(inst)?;
    let certified = if is_zero(inst) { 0 } else { certified_precision(inst)? };
    let miss = (got != truth.sign).then(|| Disagreement {
        delta: inst.delta().to_vec(),
        expected: truth.sign,
        got,
    });
    Ok(Outcome { bits: truth.bits_used, certified, miss })
}

/// Compares `adv` with the exact oracle on every domain vector, or on
/// `samples` vectors drawn uniformly from a seeded stream.
pub fn verify_advice(adv: &Advice, mode: VerifyMode, workers: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let dom = *adv.domain();
    let instances: Vec<UussrInstance> = match mode {
        VerifyMode::Exhaustive => enumerate_domain(&dom, DEFAULT_ENUMERATION_CAP)?.collect(),
        VerifyMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis = dom.basis();
            (0..samples).map(|_| dom.sample(&basis, &mut rng)).collect()
        }
    };
    let outcomes = parallel_map(&instances, workers, |inst| check(adv, inst))?;
    let mut report = VerificationReport {
        domain: dom,
        kind: adv.kind(),
        method: adv.method(),
        mode,
        total: outcomes.len() as u64,
        agree: 0,
        disagree: Vec::new(),
        max_bits_used: 0,
        max_certified_bits: 0,
        wall_time: Duration::ZERO,
    };
    for o in outcomes {
        report.max_bits_used = report.max_bits_used.max(o.bits);
        report.max_certified_bits = report.max_certified_bits.max(o.certified);
        match o.miss {
            Some(d) => report.disagree.push(d),
            None => report.agree += 1,
        }
    }
    report.wall_time = start.elapsed();
    Ok(report)
}
