//! High-throughput searches: Wolstenholme primes over segmented prime
//! ranges, irregular pairs (p, p-3), and converse-of-Wolstenholme scans
//! over composite candidates. Segments run in parallel; hits merge in
//! canonical ascending order; a single writer owns checkpoint emission.

mod checkpoint;

pub use checkpoint::{HuntCheckpoint, CHECKPOINT_VERSION};

use crate::bernoulli::{b_pminus3_fast, bernoulli_mod, fast_method_validated};
use crate::combinatorics::binomial_mod_composite;
use crate::error::{Error, Result};
use crate::primes::{factorize, is_prime, primes_in_segment, primes_up_to};
use crate::residues::montgomery::{inv_mod_u128, inv_mod_u64, Mont128, Mont64};
use rayon::prelude::*;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

pub const DEFAULT_SEGMENT: u64 = 1 << 16;

/// Scan criteria for the Wolstenholme hunt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMethod {
    /// H_{p-1} = 0 mod p^3 (the O(p) default)
    Harmonic,
    /// C(2p-1, p-1) = 1 mod p^order (the audit method)
    Direct,
    /// short Bernoulli-sum pre-filter, gated; positives confirmed by Harmonic
    Fast,
}

impl ScanMethod {
    pub fn id(&self) -> &'static str {
        match self {
            ScanMethod::Harmonic => "harmonic",
            ScanMethod::Direct => "direct",
            ScanMethod::Fast => "fast",
        }
    }

    pub fn from_id(s: &str) -> Option<Self> {
        match s {
            "harmonic" => Some(ScanMethod::Harmonic),
            "direct" => Some(ScanMethod::Direct),
            "fast" => Some(ScanMethod::Fast),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub lo: u64,
    pub hi: u64,
    pub method: ScanMethod,
    /// binomial congruence order: 4 for the standard hunt, 5 for the W5 audit
    pub order: u32,
    pub segment_size: u64,
    pub checkpoint_path: Option<PathBuf>,
}

impl ScanConfig {
    pub fn new(lo: u64, hi: u64) -> Self {
        ScanConfig {
            lo,
            hi,
            method: ScanMethod::Harmonic,
            order: 4,
            segment_size: DEFAULT_SEGMENT,
            checkpoint_path: None,
        }
    }

    fn kind_string(&self) -> String {
        format!("wolstenholme order={}", self.order)
    }
}

/// A hit with both witness residues (harmonic mod p^3, binomial mod p^4;
/// for the W5 audit the binomial witness is mod p^5).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WolstenholmeHit {
    pub p: u64,
    pub harmonic_witness: u128,
    pub binomial_witness: u128,
}

impl WolstenholmeHit {
    fn to_line(&self) -> String {
        format!(
            "{} harmonic={} binomial={}",
            self.p, self.harmonic_witness, self.binomial_witness
        )
    }

    fn from_line(line: &str) -> Result<Self> {
        let mut parts = line.split_whitespace();
        let p = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::CheckpointFormat(format!("bad hit line `{line}`")))?;
        let mut harmonic_witness = 0;
        let mut binomial_witness = 0;
        for t in parts {
            if let Some(v) = t.strip_prefix("harmonic=") {
                harmonic_witness = v
                    .parse()
                    .map_err(|_| Error::CheckpointFormat(format!("bad hit line `{line}`")))?;
            } else if let Some(v) = t.strip_prefix("binomial=") {
                binomial_witness = v
                    .parse()
                    .map_err(|_| Error::CheckpointFormat(format!("bad hit line `{line}`")))?;
            }
        }
        Ok(WolstenholmeHit { p, harmonic_witness, binomial_witness })
    }
}

/// Per-segment status for the machine-readable progress stream.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SegmentStatus {
    pub segment: u64,
    pub lo: u64,
    pub hi: u64,
    pub primes: u64,
    pub hits: u64,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub hits: Vec<WolstenholmeHit>,
    pub checkpoint: HuntCheckpoint,
    pub completed: bool,
}

/// H_{p-1} mod p^3 by prefix products in Montgomery form: one extended
/// Euclid per prime.
pub fn harmonic_witness_mod_p3(p: u64) -> u128 {
    if let Some(m) = p.checked_pow(3) {
        let ctx = Mont64::new(m);
        let mut num = 0u64; // 0 in Montgomery form
        let mut den = ctx.r1; // 1
        let mut k_mont = 0u64;
        for _k in 1..p {
            k_mont = ctx.add(k_mont, ctx.r1);
            num = ctx.add(ctx.mul(num, k_mont), den);
            den = ctx.mul(den, k_mont);
        }
        let num = ctx.from_mont(num);
        let den = ctx.from_mont(den);
        let inv = inv_mod_u64(den, m).expect("(p-1)! is a unit mod p^3");
        crate::residues::montgomery::mulmod_u64(num, inv, m) as u128
    } else {
        harmonic_witness_u128(p, u128::from(p).pow(3))
    }
}

fn harmonic_witness_u128(p: u64, m: u128) -> u128 {
    let ctx = Mont128::new(m);
    let mut num = 0u128;
    let mut den = ctx.r1;
    let mut k_mont = 0u128;
    for _k in 1..p {
        k_mont = ctx.add(k_mont, ctx.r1);
        num = ctx.add(ctx.mul(num, k_mont), den);
        den = ctx.mul(den, k_mont);
    }
    let num = ctx.from_mont(num);
    let den = ctx.from_mont(den);
    let inv = inv_mod_u128(den, m).expect("(p-1)! is a unit");
    ctx.from_mont(ctx.mul(ctx.to_mont(num), ctx.to_mont(inv)))
}

/// C(2p-1, p-1) mod p^order as the product of (p+k)/k, k = 1..p-1.
pub fn binomial_witness(p: u64, order: u32) -> u128 {
    if let Some(m) = crate::residues::checked_pow_u64(p, order) {
        let ctx = Mont64::new(m);
        let mut num = ctx.r1;
        let mut den = ctx.r1;
        let mut k_mont = 0u64;
        let mut pk_mont = ctx.to_mont(p % m);
        for _k in 1..p {
            k_mont = ctx.add(k_mont, ctx.r1);
            pk_mont = ctx.add(pk_mont, ctx.r1);
            num = ctx.mul(num, pk_mont);
            den = ctx.mul(den, k_mont);
        }
        let num = ctx.from_mont(num);
        let den = ctx.from_mont(den);
        let inv = inv_mod_u64(den, m).expect("(p-1)! is a unit");
        crate::residues::montgomery::mulmod_u64(num, inv, m) as u128
    } else {
        let m = u128::from(p).pow(order);
        assert!(m < (1u128 << 127), "order too deep for the fixed-width path");
        let ctx = Mont128::new(m);
        let mut num = ctx.r1;
        let mut den = ctx.r1;
        let mut k_mont = 0u128;
        let mut pk_mont = ctx.to_mont(u128::from(p));
        for _k in 1..p {
            k_mont = ctx.add(k_mont, ctx.r1);
            pk_mont = ctx.add(pk_mont, ctx.r1);
            num = ctx.mul(num, pk_mont);
            den = ctx.mul(den, k_mont);
        }
        let num = ctx.from_mont(num);
        let den = ctx.from_mont(den);
        let inv = inv_mod_u128(den, m).expect("(p-1)! is a unit");
        ctx.from_mont(ctx.mul(ctx.to_mont(num), ctx.to_mont(inv)))
    }
}

/// Short Bernoulli-sum pre-filter residue (B_{p-3}-proportional) mod p.
fn fast_filter_positive(p: u64) -> bool {
    if p < 11 {
        return true; // below the sum's floor: defer to the harmonic check
    }
    b_pminus3_fast(p).is_zero()
}

fn prime_is_hit(p: u64, method: ScanMethod, order: u32) -> Option<WolstenholmeHit> {
    let hit = match method {
        ScanMethod::Harmonic => {
            if order == 4 {
                harmonic_witness_mod_p3(p) == 0
            } else {
                // orders beyond 4 audit the binomial form directly
                binomial_witness(p, order) == 1
            }
        }
        ScanMethod::Direct => binomial_witness(p, order) == 1,
        ScanMethod::Fast => fast_filter_positive(p) && harmonic_witness_mod_p3(p) == 0,
    };
    if hit {
        Some(WolstenholmeHit {
            p,
            harmonic_witness: harmonic_witness_mod_p3(p),
            binomial_witness: binomial_witness(p, order),
        })
    } else {
        None
    }
}

static FAST_GATE: OnceLock<bool> = OnceLock::new();

/// Cached result of the fast-method validation gate (oracle comparison on
/// 13 <= p <= 499).
pub fn fast_gate_passed() -> bool {
    *FAST_GATE.get_or_init(fast_method_validated)
}

/// Scan [lo, hi] for Wolstenholme primes. Deterministic: parallel segment
/// execution merges in ascending order.
pub fn wolstenholme_scan(
    cfg: &ScanConfig,
    progress: Option<&(dyn Fn(&SegmentStatus) + Sync)>,
) -> Result<ScanOutcome> {
    run_scan(cfg, None, progress, None)
}

/// Resume a scan from a checkpoint; kind/method/range must match.
pub fn wolstenholme_scan_resume(
    cfg: &ScanConfig,
    from: &HuntCheckpoint,
    progress: Option<&(dyn Fn(&SegmentStatus) + Sync)>,
) -> Result<ScanOutcome> {
    run_scan(cfg, Some(from), progress, None)
}

/// Test hook: abort (simulating a kill) after the given number of
/// checkpoint windows.
pub fn wolstenholme_scan_abortable(
    cfg: &ScanConfig,
    from: Option<&HuntCheckpoint>,
    abort_after_windows: u64,
) -> Result<ScanOutcome> {
    run_scan(cfg, from, None, Some(abort_after_windows))
}

fn run_scan(
    cfg: &ScanConfig,
    resume: Option<&HuntCheckpoint>,
    progress: Option<&(dyn Fn(&SegmentStatus) + Sync)>,
    abort_after_windows: Option<u64>,
) -> Result<ScanOutcome> {
    if cfg.lo < 5 || cfg.hi < cfg.lo {
        return Err(Error::InvalidRange {
            lo: cfg.lo,
            hi: cfg.hi,
            reason: "Wolstenholme scans need 5 <= lo <= hi".into(),
        });
    }
    if cfg.method == ScanMethod::Fast && !fast_gate_passed() {
        return Err(Error::FastMethodNotValidated);
    }
    let mut hits: Vec<WolstenholmeHit> = Vec::new();
    let mut start_at = cfg.lo;
    if let Some(cp) = resume {
        let want_kind = cfg.kind_string();
        if cp.kind != want_kind || cp.method != cfg.method.id() || cp.lo != cfg.lo || cp.hi != cfg.hi
        {
            return Err(Error::ResumeMismatch(format!(
                "checkpoint is `{} {} [{}, {}]`, request is `{} {} [{}, {}]`",
                cp.kind, cp.method, cp.lo, cp.hi, want_kind, cfg.method.id(), cfg.lo, cfg.hi
            )));
        }
        for line in &cp.hits {
            hits.push(WolstenholmeHit::from_line(line)?);
        }
        start_at = cp.done_hi + 1;
    }

    let t0 = Instant::now();
    let base_elapsed = resume.map(|c| c.elapsed_ms).unwrap_or(0);
    let seg = cfg.segment_size.max(1024);
    let window_segments = (rayon::current_num_threads() as u64 * 4).max(4);
    let base_primes = primes_up_to((cfg.hi as f64).sqrt() as u64 + 2);

    let mut window_index = 0u64;
    let mut cursor = start_at;
    let mut completed = start_at > cfg.hi;
    let mut segment_counter = (start_at.saturating_sub(cfg.lo)) / seg;
    while cursor <= cfg.hi {
        let window_hi = (cursor + seg * window_segments - 1).min(cfg.hi);
        let bounds: Vec<(u64, u64, u64)> = {
            let mut v = Vec::new();
            let mut lo = cursor;
            while lo <= window_hi {
                let hi = (lo + seg - 1).min(window_hi);
                v.push((segment_counter, lo, hi));
                segment_counter += 1;
                lo = hi + 1;
            }
            v
        };
        let results: Vec<(u64, SegmentStatus, Vec<WolstenholmeHit>)> = bounds
            .par_iter()
            .map(|&(idx, lo, hi)| {
                let s0 = Instant::now();
                let mut seg_hits = Vec::new();
                let mut primes = 0u64;
                primes_in_segment(lo.max(5), hi, &base_primes, |p| {
                    primes += 1;
                    if let Some(h) = prime_is_hit(p, cfg.method, cfg.order) {
                        seg_hits.push(h);
                    }
                });
                let status = SegmentStatus {
                    segment: idx,
                    lo,
                    hi,
                    primes,
                    hits: seg_hits.len() as u64,
                    elapsed_ms: s0.elapsed().as_millis() as u64,
                };
                (idx, status, seg_hits)
            })
            .collect();
        // single-writer merge in canonical segment order
        let mut ordered = results;
        ordered.sort_by_key(|(idx, _, _)| *idx);
        for (_, status, seg_hits) in ordered {
            if let Some(f) = progress {
                f(&status);
            }
            hits.extend(seg_hits);
        }
        cursor = window_hi + 1;
        completed = cursor > cfg.hi;
        window_index += 1;

        let cp = HuntCheckpoint {
            version: CHECKPOINT_VERSION,
            kind: cfg.kind_string(),
            method: cfg.method.id().into(),
            lo: cfg.lo,
            hi: cfg.hi,
            done_hi: window_hi,
            hits: hits.iter().map(|h| h.to_line()).collect(),
            elapsed_ms: base_elapsed + t0.elapsed().as_millis() as u64,
        };
        if let Some(path) = &cfg.checkpoint_path {
            cp.write_atomic(path)?;
        }
        if let Some(cap) = abort_after_windows {
            if window_index >= cap && !completed {
                return Ok(ScanOutcome { hits, checkpoint: cp, completed: false });
            }
        }
        if completed {
            return Ok(ScanOutcome { hits, checkpoint: cp, completed: true });
        }
    }
    // empty range after resume
    let cp = HuntCheckpoint {
        version: CHECKPOINT_VERSION,
        kind: cfg.kind_string(),
        method: cfg.method.id().into(),
        lo: cfg.lo,
        hi: cfg.hi,
        done_hi: cfg.hi,
        hits: hits.iter().map(|h| h.to_line()).collect(),
        elapsed_ms: base_elapsed + t0.elapsed().as_millis() as u64,
    };
    if let Some(path) = &cfg.checkpoint_path {
        cp.write_atomic(path)?;
    }
    Ok(ScanOutcome { hits, checkpoint: cp, completed: true })
}

/// (p, p-3) is an irregular pair iff p divides the numerator of B_{p-3}.
pub fn irregular_pair_check(p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(p >= 7);
    Ok(bernoulli_mod(p - 3, p, 1)?.is_zero_mod(1))
}

/// Candidate classes for the converse scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateFilter {
    /// all odd n >= 5 (primes included)
    OddAll,
    /// odd composite n (prime powers included, tagged by class)
    OddComposites,
    Even,
    PrimePowers,
}

impl CandidateFilter {
    pub fn id(&self) -> &'static str {
        match self {
            CandidateFilter::OddAll => "odd-all",
            CandidateFilter::OddComposites => "odd-composite",
            CandidateFilter::Even => "even",
            CandidateFilter::PrimePowers => "prime-power",
        }
    }

    pub fn from_id(s: &str) -> Option<Self> {
        match s {
            "odd-all" => Some(CandidateFilter::OddAll),
            "odd-composite" => Some(CandidateFilter::OddComposites),
            "even" => Some(CandidateFilter::Even),
            "prime-power" => Some(CandidateFilter::PrimePowers),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateClass {
    Prime,
    PrimePower,
    OtherComposite,
}

impl CandidateClass {
    pub fn id(&self) -> &'static str {
        match self {
            CandidateClass::Prime => "prime",
            CandidateClass::PrimePower => "prime-power",
            CandidateClass::OtherComposite => "composite",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConverseHit {
    pub n: u64,
    pub class: CandidateClass,
    /// A(n) mod n^j for j = 1..=k (the W-chain witnesses; all must be 1)
    pub residues: Vec<u128>,
}

#[derive(Clone, Debug)]
pub struct ConverseConfig {
    pub lo: u64,
    pub hi: u64,
    pub k: u32,
    pub filter: CandidateFilter,
    pub segment_size: u64,
}

impl ConverseConfig {
    pub fn new(lo: u64, hi: u64, k: u32, filter: CandidateFilter) -> Self {
        ConverseConfig { lo, hi, k, filter, segment_size: DEFAULT_SEGMENT }
    }
}

fn classify(factors: &[(u64, u32)]) -> CandidateClass {
    match factors {
        [(_, 1)] => CandidateClass::Prime,
        [(_, _)] => CandidateClass::PrimePower,
        _ => CandidateClass::OtherComposite,
    }
}

/// A(n) = C(2n-1, n-1) mod n^k membership test with the candidate's
/// factorization lifted to the power modulus.
pub fn converse_candidate(n: u64, k: u32) -> Result<Option<ConverseHit>> {
    assert!(n >= 2);
    let factors = factorize(n);
    let modulus = crate::residues::checked_pow_u64(n, k).ok_or(Error::InvalidRange {
        lo: n,
        hi: n,
        reason: format!("n^{k} exceeds the machine-word budget"),
    })?;
    let lifted: Vec<(u64, u32)> = factors.iter().map(|&(p, e)| (p, e * k)).collect();
    let a = binomial_mod_composite(2 * n - 1, (n - 1) as i64, modulus, &lifted)?;
    if !a.is_one() {
        return Ok(None);
    }
    // W-chain: membership at k implies membership at every j < k; verify
    // the reductions explicitly as the on-the-fly chain witness.
    let mut residues = Vec::with_capacity(k as usize);
    for j in 1..=k {
        let mj = crate::residues::Modulus::prime_power(n, j);
        let r = a.reduce_to(&mj);
        assert!(r.is_one(), "W-chain violated at n={n} j={j}");
        residues.push(r.value_u64().map(u128::from).unwrap_or(1));
    }
    Ok(Some(ConverseHit { n, class: classify(&factors), residues }))
}

#[derive(Clone, Debug)]
pub struct ConverseOutcome {
    pub hits: Vec<ConverseHit>,
    pub candidates: u64,
}

/// Scan a range of candidates for A(n) = 1 mod n^k membership.
pub fn converse_scan(
    cfg: &ConverseConfig,
    progress: Option<&(dyn Fn(&SegmentStatus) + Sync)>,
) -> Result<ConverseOutcome> {
    if cfg.hi < cfg.lo {
        return Err(Error::InvalidRange { lo: cfg.lo, hi: cfg.hi, reason: "empty range".into() });
    }
    let seg = cfg.segment_size.max(1024);
    let mut bounds = Vec::new();
    let mut lo = cfg.lo;
    let mut idx = 0u64;
    while lo <= cfg.hi {
        let hi = (lo + seg - 1).min(cfg.hi);
        bounds.push((idx, lo, hi));
        idx += 1;
        lo = hi + 1;
    }
    let results: Vec<(u64, SegmentStatus, Vec<ConverseHit>)> = bounds
        .par_iter()
        .map(|&(idx, lo, hi)| {
            let s0 = Instant::now();
            let mut hits = Vec::new();
            let mut candidates = 0u64;
            for n in lo..=hi {
                if !candidate_matches(n, cfg.filter) {
                    continue;
                }
                candidates += 1;
                if let Ok(Some(hit)) = converse_candidate(n, cfg.k) {
                    hits.push(hit);
                }
            }
            let status = SegmentStatus {
                segment: idx,
                lo,
                hi,
                primes: candidates,
                hits: hits.len() as u64,
                elapsed_ms: s0.elapsed().as_millis() as u64,
            };
            (idx, status, hits)
        })
        .collect();
    let mut ordered = results;
    ordered.sort_by_key(|(i, _, _)| *i);
    let mut hits = Vec::new();
    let mut candidates = 0;
    for (_, status, segment_hits) in ordered {
        if let Some(f) = progress {
            f(&status);
        }
        candidates += status.primes;
        hits.extend(segment_hits);
    }
    Ok(ConverseOutcome { hits, candidates })
}

fn candidate_matches(n: u64, filter: CandidateFilter) -> bool {
    if n < 5 {
        return false;
    }
    match filter {
        CandidateFilter::OddAll => n % 2 == 1,
        CandidateFilter::OddComposites => n % 2 == 1 && !is_prime(n),
        CandidateFilter::Even => n % 2 == 0,
        CandidateFilter::PrimePowers => {
            let f = factorize(n);
            f.len() == 1 && f[0].1 >= 2
        }
    }
}
