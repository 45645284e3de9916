//! Exact arithmetic/geometric progression detection in finite sets, the
//! mod-20 composite-branch verification, certified geometric progressions
//! inside N2 and N3, the preimage-scaling test phi^-1(m(p-1)) = p phi^-1(m),
//! and reciprocal-sum divergence profiles.

use crate::error::{Error, Result};
use crate::families::{gen_k_max, gen_k_min, CertifyOptions, FamilyCertificate};
use crate::inverse_totient::inverse_phi;
use crate::Rational;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProgressionKind {
    Ap,
    Gp,
}

/// A progression of length >= 3 found inside a queried set. For APs the
/// step is an integer rendered as a rational; for GPs the ratio is an exact
/// rational > 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgressionRecord {
    pub kind: ProgressionKind,
    pub first: u64,
    pub step_or_ratio: Rational,
    pub length: usize,
    pub elements: Vec<u64>,
}

const MAX_DP_ELEMENTS: usize = 8192;

fn validate_set(set: &[u64]) -> Result<()> {
    if set.len() < 3 {
        return Err(Error::TooSmall { needed: 3, got: set.len() });
    }
    if set[0] == 0 || set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("set must be sorted, strictly increasing, positive".into()));
    }
    if set.len() > MAX_DP_ELEMENTS {
        return Err(Error::Resource {
            what: "progression DP table".into(),
            requested: (set.len() * set.len() * 4) as u64,
            limit: (MAX_DP_ELEMENTS * MAX_DP_ELEMENTS * 4) as u64,
        });
    }
    Ok(())
}

/// A maximum-length arithmetic progression contained in the set.
/// Ties break toward the smallest step, then the smallest first element.
pub fn longest_ap(set: &[u64]) -> Result<ProgressionRecord> {
    validate_set(set)?;
    let n = set.len();
    let index: HashMap<u64, usize> = set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // dp[i * n + j] = length of the unique AP ending with (set[i], set[j]).
    let mut dp = vec![0u32; n * n];
    let mut best: Option<(u32, u64, u64)> = None; // (length, step, first)
    for j in 1..n {
        for i in 0..j {
            let prev = 2 * set[i] as i128 - set[j] as i128;
            let len = match u64::try_from(prev).ok().and_then(|v| index.get(&v)) {
                Some(&h) => dp[h * n + i] + 1,
                None => 2,
            };
            dp[i * n + j] = len;
            if len >= 3 {
                let step = set[j] - set[i];
                let first = set[j] - (len as u64 - 1) * step;
                let cand = (len, step, first);
                let improves = match best {
                    None => true,
                    Some((bl, bs, bf)) => {
                        len > bl || (len == bl && (step < bs || (step == bs && first < bf)))
                    }
                };
                if improves {
                    best = Some(cand);
                }
            }
        }
    }
    let (length, step, first) = best.ok_or(Error::NoProgression)?;
    let elements: Vec<u64> = (0..length as u64).map(|t| first + t * step).collect();
    debug_assert!(elements.iter().all(|v| index.contains_key(v)));
    Ok(ProgressionRecord {
        kind: ProgressionKind::Ap,
        first,
        step_or_ratio: Rational::new(step, 1),
        length: length as usize,
        elements,
    })
}

/// A maximum-length geometric progression with exact rational ratio > 1.
/// By default only integer ratios are considered (the families here all
/// have prime ratio); `allow_rational` admits reduced ratios p/q with q > 1.
/// Ties break toward the smallest ratio, then the smallest first element.
pub fn longest_gp(set: &[u64], allow_rational: bool) -> Result<ProgressionRecord> {
    validate_set(set)?;
    let n = set.len();
    let index: HashMap<u64, usize> = set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut dp = vec![0u32; n * n];
    let mut best: Option<(u32, u64, u64, u64)> = None; // (length, p, q, first)
    let ratio_of = |i: usize, j: usize| {
        let g = num_integer::gcd(set[i], set[j]);
        (set[j] / g, set[i] / g) // (p, q) with ratio p/q > 1
    };
    for j in 1..n {
        for i in 0..j {
            let (p, q) = ratio_of(i, j);
            if !allow_rational && q != 1 {
                continue;
            }
            // Predecessor v with v * p == set[i] * q; gcd(p, q) = 1 forces p | set[i].
            let len = if set[i].is_multiple_of(p) {
                match index.get(&(set[i] / p * q)) {
                    Some(&h) if ratio_of(h, i) == (p, q) => dp[h * n + i] + 1,
                    _ => 2,
                }
            } else {
                2
            };
            dp[i * n + j] = len;
            if len >= 3 {
                // Walk back to the first element; every hop is exact.
                let mut first = set[i];
                for _ in 0..len - 2 {
                    first = first / p * q;
                }
                let improves = match best {
                    None => true,
                    Some((bl, bp, bq, bf)) => {
                        let smaller_ratio = (p as u128) * (bq as u128) < (bp as u128) * (q as u128);
                        let equal_ratio = (p as u128) * (bq as u128) == (bp as u128) * (q as u128);
                        len > bl || (len == bl && (smaller_ratio || (equal_ratio && first < bf)))
                    }
                };
                if improves {
                    best = Some((len, p, q, first));
                }
            }
        }
    }
    let (length, p, q, first) = best.ok_or(Error::NoProgression)?;
    let mut elements = Vec::with_capacity(length as usize);
    let mut v = first;
    for _ in 0..length {
        elements.push(v);
        v = v / q * p;
    }
    debug_assert!(elements.iter().all(|v| index.contains_key(v)));
    Ok(ProgressionRecord {
        kind: ProgressionKind::Gp,
        first,
        step_or_ratio: Rational::new(p, q),
        length: length as usize,
        elements,
    })
}

/// The residue class of r for which 5 divides q^r(q-1) + 1:
/// r = 3 (mod 4) when q = 3 (mod 20), r = 2 (mod 4) when q = 7 (mod 20).
pub fn mod20_residue_class(q: u64) -> Result<u32> {
    if !crate::arith::is_prime(q) {
        return Err(Error::Domain(format!("q = {q} is not prime")));
    }
    match q % 20 {
        3 => Ok(3),
        7 => Ok(2),
        other => Err(Error::Residue(format!(
            "q = {q} is {other} (mod 20); the lemma needs 3 or 7"
        ))),
    }
}

fn kqr_value(q: u64, r: u32) -> Option<u64> {
    q.checked_pow(r)?.checked_mul(q - 1)?.checked_add(1)
}

/// Largest r <= cap with q^r(q-1)+1 inside u64.
pub fn mod20_max_r(q: u64, cap: u32) -> u32 {
    (1..=cap).rev().find(|&r| kqr_value(q, r).is_some()).unwrap_or(0)
}

/// For each r <= r_max in the designated residue class, verifies that
/// 5 divides q^r(q-1) + 1 (hence k_{q,r} takes the composite branch).
pub fn mod20_composite_branch(q: u64, r_max: u32) -> Result<Vec<(u32, bool)>> {
    let class = mod20_residue_class(q)?;
    let mut out = Vec::new();
    for r in 1..=r_max {
        if r % 4 != class {
            continue;
        }
        let value = kqr_value(q, r)
            .ok_or_else(|| Error::Overflow(format!("{q}^{r}({q}-1)+1 exceeds u64")))?;
        out.push((r, value % 5 == 0));
    }
    Ok(out)
}

/// The geometric progression {K_{q,r}}_{r <= r_max} with every element
/// carrying a true N2 certificate.
pub fn gp_in_n2_witness(
    q: u64,
    r_max: u32,
    opts: &CertifyOptions,
) -> Result<(ProgressionRecord, Vec<FamilyCertificate>)> {
    if r_max < 3 {
        return Err(Error::TooSmall { needed: 3, got: r_max as usize });
    }
    let mut certs = Vec::new();
    for r in 1..=r_max {
        let cert = gen_k_max(q, r, opts)?;
        if !cert.verdict() {
            return Err(Error::ClassificationFailed {
                m: cert.m,
                detail: format!("K_{{{q},{r}}} = {} failed N2 certification", cert.element),
            });
        }
        certs.push(cert);
    }
    let elements: Vec<u64> = certs.iter().map(|c| c.element).collect();
    let record = ProgressionRecord {
        kind: ProgressionKind::Gp,
        first: elements[0],
        step_or_ratio: Rational::new(q, 1),
        length: elements.len(),
        elements,
    };
    Ok((record, certs))
}

/// A geometric progression in N3 from the composite branch of k_{q,r}:
/// r_list must be an arithmetic progression inside the mod-20 composite
/// residue class, so the elements q^(r+1) form a GP with ratio q^step.
pub fn gp_in_n3_witness(
    q: u64,
    r_list: &[u32],
    opts: &CertifyOptions,
) -> Result<(ProgressionRecord, Vec<FamilyCertificate>)> {
    let class = mod20_residue_class(q)?;
    if r_list.len() < 3 {
        return Err(Error::TooSmall { needed: 3, got: r_list.len() });
    }
    if r_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("r_list must be strictly increasing".into()));
    }
    let step = r_list[1] - r_list[0];
    if r_list.windows(2).any(|w| w[1] - w[0] != step) {
        return Err(Error::Domain("r_list must form an arithmetic progression".into()));
    }
    if let Some(&bad) = r_list.iter().find(|&&r| r % 4 != class) {
        return Err(Error::Domain(format!(
            "r = {bad} is outside the composite residue class r = {class} (mod 4) for q = {q}"
        )));
    }
    let mut certs = Vec::new();
    for &r in r_list {
        let cert = gen_k_min(q, r, opts)?;
        if cert.composite_member != Some(true) {
            return Err(Error::ClassificationFailed {
                m: cert.m,
                detail: format!("k_{{{q},{r}}} unexpectedly took the prime branch"),
            });
        }
        if !cert.verdict() {
            return Err(Error::ClassificationFailed {
                m: cert.m,
                detail: format!("k_{{{q},{r}}} = {} failed N3 certification", cert.element),
            });
        }
        certs.push(cert);
    }
    let elements: Vec<u64> = certs.iter().map(|c| c.element).collect();
    let ratio = q
        .checked_pow(step)
        .ok_or_else(|| Error::Overflow(format!("{q}^{step} exceeds u64")))?;
    let record = ProgressionRecord {
        kind: ProgressionKind::Gp,
        first: elements[0],
        step_or_ratio: Rational::new(ratio, 1),
        length: elements.len(),
        elements,
    };
    Ok((record, certs))
}

const ERDOS_TARGET_LIMIT: u64 = 1_000_000_000_000;

/// True iff phi^-1(m(p-1)) equals the elementwise scaling p * phi^-1(m).
/// Requires A(m) = 2.
pub fn erdos_scaling_test(m: u64, p: u64) -> Result<bool> {
    if !crate::arith::is_prime(p) {
        return Err(Error::Domain(format!("p = {p} is not prime")));
    }
    let pre = inverse_phi(m)?;
    if pre.multiplicity() != 2 {
        return Err(Error::Multiplicity { m, found: pre.multiplicity(), expected: 2 });
    }
    let target = m
        .checked_mul(p - 1)
        .ok_or_else(|| Error::Overflow(format!("{m}({p}-1) exceeds u64")))?;
    if target > ERDOS_TARGET_LIMIT {
        return Err(Error::Budget {
            what: format!("inverse phi of {target}"),
            requested: target,
            limit: ERDOS_TARGET_LIMIT,
        });
    }
    let scaled: Vec<u64> = pre
        .solutions()
        .iter()
        .map(|&x| {
            x.checked_mul(p)
                .ok_or_else(|| Error::Overflow(format!("{x} * {p} exceeds u64")))
        })
        .collect::<Result<_>>()?;
    Ok(inverse_phi(target)?.solutions() == scaled)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    N2,
    N3,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReciprocalRow {
    pub checkpoint: u64,
    pub totients: u64,
    pub partial_sum: f64,
}

/// Partial sums of 1/f(m) over totients m up to each checkpoint, f picking
/// N2 or N3 from each preimage. Divergence evidence, not proof; the sums
/// are floating point while the underlying selections stay exact.
#[derive(Debug, Clone, Serialize)]
pub struct ReciprocalSumProfile {
    pub selector: Selector,
    pub rows: Vec<ReciprocalRow>,
}

pub fn reciprocal_sum_profile(selector: Selector, checkpoints: &[u64]) -> Result<ReciprocalSumProfile> {
    let &max = checkpoints
        .iter()
        .max()
        .ok_or_else(|| Error::Domain("need at least one checkpoint".into()))?;
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("checkpoints must be strictly increasing".into()));
    }
    if max > 1_000_000 {
        return Err(Error::Budget {
            what: "reciprocal sum scan".into(),
            requested: max,
            limit: 1_000_000,
        });
    }
    let mut rows = Vec::new();
    let mut sum = 0.0f64;
    let mut totients = 0u64;
    let mut next = checkpoints.iter().copied();
    let mut checkpoint = next.next();
    for m in 1..=max {
        let pre = inverse_phi(m)?;
        if let (Some(n2), Some(n3)) = (pre.n2(), pre.n3()) {
            totients += 1;
            let f = match selector {
                Selector::N2 => n2,
                Selector::N3 => n3,
            };
            sum += 1.0 / f as f64;
        }
        if checkpoint == Some(m) {
            rows.push(ReciprocalRow { checkpoint: m, totients, partial_sum: sum });
            checkpoint = next.next();
        }
    }
    Ok(ReciprocalSumProfile { selector, rows })
}
