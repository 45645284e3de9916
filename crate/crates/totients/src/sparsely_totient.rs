//! The phi sieve, N1(m) = max{x : phi(x) <= m}, enumeration of the sparsely
//! totient numbers, the Masser-Shiu generator, BN1, and the h(n)/n
//! non-monotonicity experiment.

use crate::arith::{euler_phi, first_n_primes, is_prime, primorial, DEFAULT_MEMORY_BUDGET_BYTES};
use crate::error::{Error, Result};
use crate::Rational;
use serde::Serialize;

/// Euler-Mascheroni constant, 18 decimal digits. Used for diagnostics and
/// for the opt-in Rosser-Schoenfeld horizon; exact verdicts never compare
/// against it directly.
#[allow(clippy::excessive_precision)]
pub const EULER_MASCHERONI: f64 = 0.577215664901532861;

/// Tabulated phi(1..=n) built by a linear sieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiSieve {
    // values[k] = phi(k); values[0] is a zero sentinel.
    values: Vec<u64>,
}

impl PhiSieve {
    pub fn build(n: u64) -> Result<Self> {
        Self::build_with_budget(n, DEFAULT_MEMORY_BUDGET_BYTES)
    }

    pub fn build_with_budget(n: u64, budget_bytes: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("phi sieve horizon must be >= 1".into()));
        }
        // values plus the prime list: ~9 bytes per entry.
        let requested = (n + 1).saturating_mul(9);
        if requested > budget_bytes {
            return Err(Error::Resource {
                what: format!("phi sieve to {n}"),
                requested,
                limit: budget_bytes,
            });
        }
        let n = n as usize;
        let mut values = vec![0u64; n + 1];
        values[1] = 1;
        let mut primes: Vec<usize> = Vec::new();
        for i in 2..=n {
            if values[i] == 0 {
                primes.push(i);
                values[i] = i as u64 - 1;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > n {
                    break;
                }
                if i % p == 0 {
                    values[ip] = values[i] * p as u64;
                    break;
                }
                values[ip] = values[i] * (p as u64 - 1);
            }
        }
        Ok(PhiSieve { values })
    }

    pub(crate) fn from_phi_values(phi_1_to_n: Vec<u64>) -> Self {
        let mut values = Vec::with_capacity(phi_1_to_n.len() + 1);
        values.push(0);
        values.extend(phi_1_to_n);
        PhiSieve { values }
    }

    pub fn horizon(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    #[inline]
    pub fn phi(&self, k: u64) -> u64 {
        self.values[k as usize]
    }

    /// phi(1..=n), without the index-0 sentinel.
    pub fn phi_values(&self) -> &[u64] {
        &self.values[1..]
    }
}

/// How to bound the search space when answering "no x beyond H has
/// phi(x) <= m".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonPolicy {
    /// 2m^2, from phi(x) >= sqrt(x/2). Always valid, quadratic in m.
    Conservative,
    /// Smallest H with n/(e^gamma ln ln n + 2.51/ln ln n) > m for all n > H.
    /// The denominator constant 2.51 exceeds 2.50637, so the bound holds for
    /// every n >= 3 including the single near-tight primorial case. Linear
    /// in m up to the doubly-logarithmic factor.
    RosserSchoenfeld,
}

fn rs_phi_lower(n: u64) -> f64 {
    if n < 3 {
        return 0.0;
    }
    let lln = (n as f64).ln().ln();
    let denom = EULER_MASCHERONI.exp() * lln + 2.51 / lln;
    (n as f64) / denom * (1.0 - 1e-9)
}

/// Smallest certified horizon for m under the policy: every x beyond the
/// returned value has phi(x) > m.
pub fn safe_horizon(m: u64, policy: HorizonPolicy) -> Result<u64> {
    if m == 0 {
        return Err(Error::Domain("safe_horizon requires m >= 1".into()));
    }
    let conservative = (m as u128) * (m as u128) * 2;
    let conservative_u64 = u64::try_from(conservative).ok();
    match policy {
        HorizonPolicy::Conservative => conservative_u64
            .ok_or_else(|| Error::Overflow(format!("conservative horizon 2*{m}^2 exceeds u64"))),
        HorizonPolicy::RosserSchoenfeld => {
            let target = (m as f64) * (1.0 + 1e-9) + 1.0;
            // rs_phi_lower is increasing for n >= 64 (the derivative argument
            // needs n >= 30), so binary search applies.
            let mut lo = 64u64;
            let mut hi = conservative_u64.unwrap_or(u64::MAX / 2).max(lo);
            if rs_phi_lower(hi) <= target {
                return Err(Error::Overflow(format!("no Rosser-Schoenfeld horizon for m = {m} in u64")));
            }
            if rs_phi_lower(lo) > target {
                hi = lo;
            }
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if rs_phi_lower(mid) > target {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            Ok(match conservative_u64 {
                Some(c) => c.min(lo),
                None => lo,
            })
        }
    }
}

/// N1(m): the largest x with phi(x) <= m. Defined for every m >= 1.
/// The sieve must reach safe_horizon(m, policy).
pub fn n1_of(m: u64, sieve: &PhiSieve, policy: HorizonPolicy) -> Result<u64> {
    let required = safe_horizon(m, policy)?;
    if sieve.horizon() < required {
        return Err(Error::HorizonTooSmall {
            required,
            have: sieve.horizon(),
        });
    }
    let mut x = required;
    while x >= 1 {
        if sieve.phi(x) <= m {
            return Ok(x);
        }
        x -= 1;
    }
    unreachable!("phi(2) = 1 <= m for every m >= 1");
}

/// One pass over the sieve producing, for every m <= m_max:
/// N1(m) (index m of `.0`) and whether m is a totient (index m of `.1`).
/// The totient marking is complete because the horizon covers every
/// preimage of every m <= m_max.
pub(crate) fn n1_scan(m_max: u64, sieve: &PhiSieve, policy: HorizonPolicy) -> Result<(Vec<u64>, Vec<bool>)> {
    let required = safe_horizon(m_max, policy)?;
    if sieve.horizon() < required {
        return Err(Error::HorizonTooSmall {
            required,
            have: sieve.horizon(),
        });
    }
    let mut best = vec![0u64; m_max as usize + 1];
    let mut in_v = vec![false; m_max as usize + 1];
    for x in 1..=required {
        let v = sieve.phi(x);
        if v <= m_max {
            in_v[v as usize] = true;
            if x > best[v as usize] {
                best[v as usize] = x;
            }
        }
    }
    let mut running = 0u64;
    for slot in best.iter_mut().skip(1) {
        running = running.max(*slot);
        *slot = running;
    }
    Ok((best, in_v))
}

/// N1(m) for every 1 <= m <= m_max (index 0 unused).
pub fn n1_table(m_max: u64, sieve: &PhiSieve, policy: HorizonPolicy) -> Result<Vec<u64>> {
    Ok(n1_scan(m_max, sieve, policy)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Certification {
    /// Certified by a suffix-minimum scan of a sieve with the given horizon.
    Sieve { horizon: u64 },
    /// Certified by the Masser-Shiu criterion with parameters (d, k, l).
    MasserShiu { d: u64, k: u32, l: u32 },
}

/// A sparsely totient number n together with m = phi(n) and how it was
/// certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SparselyTotientRecord {
    pub n: u64,
    pub m: u64,
    #[serde(flatten)]
    pub certified_by: Certification,
}

/// All sparsely totient numbers <= x: n qualifies iff phi(y) > phi(n) for
/// every y > n, checked by right-to-left running minima over a sieve whose
/// horizon guarantees phi(y) > x beyond it.
pub fn n1_set_up_to(x: u64, policy: HorizonPolicy) -> Result<Vec<SparselyTotientRecord>> {
    if x < 1 {
        return Err(Error::Domain("n1_set_up_to requires x >= 1".into()));
    }
    let horizon = safe_horizon(x, policy)?;
    let sieve = PhiSieve::build(horizon)?;
    let mut out = Vec::new();
    let mut min_beyond = u64::MAX;
    for n in (1..=horizon).rev() {
        let v = sieve.phi(n);
        if n <= x && v < min_beyond {
            out.push(SparselyTotientRecord {
                n,
                m: v,
                certified_by: Certification::Sieve { horizon },
            });
        }
        min_beyond = min_beyond.min(v);
    }
    out.reverse();
    Ok(out)
}

/// The Masser-Shiu generator: for k >= 2, d >= 1, l >= 0 with
/// d < p_{k+1} - 1 and d(p_{k+l} - 1) < (d+1)(p_k - 1), the number
/// d * p_1 ... p_{k-1} * p_{k+l} is sparsely totient.
pub fn masser_shiu_generate(d: u64, k: u32, l: u32) -> Result<SparselyTotientRecord> {
    if k < 2 {
        return Err(Error::Domain(format!("masser_shiu_generate requires k >= 2, got {k}")));
    }
    if d < 1 {
        return Err(Error::Domain("masser_shiu_generate requires d >= 1".into()));
    }
    let count = (k as usize + 1).max(k as usize + l as usize);
    let primes = first_n_primes(count)?;
    let p = |i: u32| primes[i as usize - 1]; // 1-indexed, p(1) = 2
    if d >= p(k + 1) - 1 {
        return Err(Error::CriterionViolated(format!(
            "d < p_(k+1) - 1 fails: d = {d}, p_(k+1) - 1 = {}",
            p(k + 1) - 1
        )));
    }
    let lhs = (d as u128) * (p(k + l) as u128 - 1);
    let rhs = (d as u128 + 1) * (p(k) as u128 - 1);
    if lhs >= rhs {
        return Err(Error::CriterionViolated(format!(
            "d(p_(k+l) - 1) < (d+1)(p_k - 1) fails: {lhs} >= {rhs}"
        )));
    }
    let mut n = d;
    for i in 1..k {
        n = n
            .checked_mul(p(i))
            .ok_or_else(|| Error::Overflow("Masser-Shiu product exceeds u64".into()))?;
    }
    n = n
        .checked_mul(p(k + l))
        .ok_or_else(|| Error::Overflow("Masser-Shiu product exceeds u64".into()))?;
    let m = euler_phi(n)?;
    Ok(SparselyTotientRecord {
        n,
        m,
        certified_by: Certification::MasserShiu { d, k, l },
    })
}

/// Scans totients m in [lo, hi] for the least threshold after which every
/// N1(m) in the range is divisible by p. None when no such threshold exists
/// within the range.
pub fn n1_divisibility_check(p: u64, lo: u64, hi: u64, policy: HorizonPolicy) -> Result<Option<u64>> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if lo < 1 || lo > hi {
        return Err(Error::Domain(format!("bad range [{lo}, {hi}]")));
    }
    let horizon = safe_horizon(hi, policy)?;
    let sieve = PhiSieve::build(horizon)?;
    let (n1, in_v) = n1_scan(hi, &sieve, policy)?;
    let mut threshold = None;
    for m in (lo..=hi).rev() {
        if !in_v[m as usize] {
            continue;
        }
        if n1[m as usize] % p == 0 {
            threshold = Some(m);
        } else {
            break;
        }
    }
    Ok(threshold)
}

/// BN1 within [lo, hi]: totients m with N1(m) = N2(m). N2 here comes from a
/// sieve maximum, which is complete because the horizon covers 2m^2.
pub fn bn1_set(lo: u64, hi: u64, policy: HorizonPolicy) -> Result<Vec<u64>> {
    if lo < 1 || lo > hi {
        return Err(Error::Domain(format!("bad range [{lo}, {hi}]")));
    }
    let horizon = safe_horizon(hi, policy)?;
    let sieve = PhiSieve::build(horizon)?;
    let (n1, in_v) = n1_scan(hi, &sieve, policy)?;
    let mut n2_by_m = vec![0u64; hi as usize + 1];
    for x in 1..=horizon {
        let v = sieve.phi(x);
        if v <= hi && x > n2_by_m[v as usize] {
            n2_by_m[v as usize] = x;
        }
    }
    Ok((lo..=hi)
        .filter(|&m| in_v[m as usize] && n1[m as usize] == n2_by_m[m as usize])
        .collect())
}

/// The two-primorial comparison showing h(n)/n = N1(m)/m is not monotone:
/// for consecutive primes 3 < p1 < p2, with a = X_{p1} and b = X_{p2}/p1,
/// the phi-values satisfy M_a < M_b while a/M_a > b/M_b.
#[derive(Debug, Clone, Serialize)]
pub struct HRatioReport {
    pub p1: u64,
    pub p2: u64,
    pub a: u64,
    pub b: u64,
    pub m_a: u64,
    pub m_b: u64,
    /// N1(M_a) = a and N1(M_b) = b, re-proved by sieve.
    pub n1_verified: bool,
    pub ratio_a: Rational,
    pub ratio_b: Rational,
    pub verdict: bool,
}

pub fn h_ratio_experiment(p1: u64, p2: u64, policy: HorizonPolicy) -> Result<HRatioReport> {
    if !is_prime(p1) || !is_prime(p2) {
        return Err(Error::Domain(format!("{p1}, {p2} must both be prime")));
    }
    if p1 <= 3 {
        return Err(Error::Domain(format!("the construction requires p1 > 3, got {p1}")));
    }
    if p2 <= p1 {
        return Err(Error::Domain(format!("need p1 < p2, got {p1} >= {p2}")));
    }
    if (p1 + 1..p2).any(is_prime) {
        return Err(Error::Domain(format!("{p1} and {p2} are not consecutive primes")));
    }
    let a = primorial(p1)?;
    let b = primorial(p2)? / p1;
    let m_a = euler_phi(a)?;
    let m_b = euler_phi(b)?;
    let horizon = safe_horizon(m_a.max(m_b), policy)?;
    let sieve = PhiSieve::build(horizon)?;
    let n1_verified = n1_of(m_a, &sieve, policy)? == a && n1_of(m_b, &sieve, policy)? == b;
    let ratio_a = Rational::new(a, m_a);
    let ratio_b = Rational::new(b, m_b);
    let verdict = m_a < m_b && ratio_a > ratio_b;
    Ok(HRatioReport { p1, p2, a, b, m_a, m_b, n1_verified, ratio_a, ratio_b, verdict })
}

#[derive(Debug, Clone, Serialize)]
pub struct SannaRow {
    pub m: u64,
    pub n1: u64,
    /// N1(m) / (m ln ln m); diagnostic only.
    pub normalized: f64,
}

/// Growth diagnostic for N1(m)/m: sampled normalized rows plus the exact
/// maximum of N1(m)/m over totients m <= m_max.
#[derive(Debug, Clone, Serialize)]
pub struct SannaReport {
    pub max_ratio_m: u64,
    pub max_ratio: Rational,
    pub rows: Vec<SannaRow>,
}

pub fn sanna_diagnostic(m_max: u64, sample_stride: u64, policy: HorizonPolicy) -> Result<SannaReport> {
    if m_max < 3 || sample_stride == 0 {
        return Err(Error::Domain("sanna_diagnostic requires m_max >= 3, stride >= 1".into()));
    }
    let horizon = safe_horizon(m_max, policy)?;
    let sieve = PhiSieve::build(horizon)?;
    let (n1, in_v) = n1_scan(m_max, &sieve, policy)?;
    let mut best_m = 1u64;
    let mut rows = Vec::new();
    for m in 1..=m_max {
        if !in_v[m as usize] {
            continue;
        }
        // exact cross-multiplied comparison: n1[m]/m > n1[best]/best
        if (n1[m as usize] as u128) * (best_m as u128) > (n1[best_m as usize] as u128) * (m as u128) {
            best_m = m;
        }
        if m >= 1000 && m % sample_stride == 0 {
            let lln = (m as f64).ln().ln();
            rows.push(SannaRow {
                m,
                n1: n1[m as usize],
                normalized: n1[m as usize] as f64 / (m as f64 * lln),
            });
        }
    }
    Ok(SannaReport {
        max_ratio_m: best_m,
        max_ratio: Rational::new(n1[best_m as usize], best_m),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_examples() {
        let s = PhiSieve::build(1).unwrap();
        assert_eq!(s.phi_values(), &[1]);
        let s = PhiSieve::build(12).unwrap();
        assert_eq!(s.phi(12), 4);
        let s = PhiSieve::build(1_000_000).unwrap();
        assert_eq!(s.phi(30_030), 5760);
    }

    #[test]
    fn sieve_matches_direct_phi() {
        let s = PhiSieve::build(3000).unwrap();
        for k in 1..=3000u64 {
            assert_eq!(s.phi(k), euler_phi(k).unwrap(), "phi({k})");
        }
    }

    #[test]
    fn sieve_budget() {
        match PhiSieve::build_with_budget(1 << 24, 1 << 10) {
            Err(Error::Resource { .. }) => {}
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn horizons_are_safe_and_ordered() {
        for m in [1u64, 4, 10, 100, 5000, 100_000] {
            let cons = safe_horizon(m, HorizonPolicy::Conservative).unwrap();
            let rs = safe_horizon(m, HorizonPolicy::RosserSchoenfeld).unwrap();
            assert!(rs <= cons, "rs horizon must not exceed 2m^2 at m = {m}");
            assert_eq!(cons, 2 * m * m);
        }
        // Exhaustive safety check at small scale: nothing beyond the horizon
        // has phi <= m.
        let sieve = PhiSieve::build(safe_horizon(60, HorizonPolicy::Conservative).unwrap()).unwrap();
        for m in 1..=60u64 {
            let rs = safe_horizon(m, HorizonPolicy::RosserSchoenfeld).unwrap();
            for x in rs + 1..=sieve.horizon() {
                assert!(sieve.phi(x) > m, "phi({x}) <= {m} beyond rs horizon {rs}");
            }
        }
    }

    #[test]
    fn n1_examples() {
        let sieve = PhiSieve::build(2 * 8 * 8).unwrap();
        assert_eq!(n1_of(1, &sieve, HorizonPolicy::Conservative).unwrap(), 2);
        assert_eq!(n1_of(4, &sieve, HorizonPolicy::Conservative).unwrap(), 12);
        assert_eq!(n1_of(8, &sieve, HorizonPolicy::Conservative).unwrap(), 30);
    }

    #[test]
    fn n1_horizon_error_names_requirement() {
        let sieve = PhiSieve::build(10).unwrap();
        match n1_of(100, &sieve, HorizonPolicy::Conservative) {
            Err(Error::HorizonTooSmall { required, have }) => {
                assert_eq!(required, 20_000);
                assert_eq!(have, 10);
            }
            other => panic!("expected horizon error, got {other:?}"),
        }
    }

    #[test]
    fn n1_table_matches_pointwise() {
        let m_max = 200u64;
        let sieve = PhiSieve::build(2 * m_max * m_max).unwrap();
        let table = n1_table(m_max, &sieve, HorizonPolicy::Conservative).unwrap();
        for m in 1..=m_max {
            assert_eq!(table[m as usize], n1_of(m, &sieve, HorizonPolicy::Conservative).unwrap());
        }
        // non-decreasing in m
        assert!(table[1..].windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn n1_set_examples() {
        let set: Vec<u64> = n1_set_up_to(10, HorizonPolicy::Conservative)
            .unwrap()
            .iter()
            .map(|r| r.n)
            .collect();
        assert!(set.contains(&2) && set.contains(&6));
        let set: Vec<u64> = n1_set_up_to(30, HorizonPolicy::RosserSchoenfeld)
            .unwrap()
            .iter()
            .map(|r| r.n)
            .collect();
        assert!(set.contains(&30));
    }

    #[test]
    fn n1_set_matches_definition_to_100() {
        let records = n1_set_up_to(100, HorizonPolicy::Conservative).unwrap();
        let horizon = safe_horizon(100, HorizonPolicy::Conservative).unwrap();
        let sieve = PhiSieve::build(horizon).unwrap();
        let set: Vec<u64> = records.iter().map(|r| r.n).collect();
        for n in 1..=100u64 {
            let sparse = (n + 1..=horizon).all(|y| sieve.phi(y) > sieve.phi(n));
            assert_eq!(set.contains(&n), sparse, "n = {n}");
        }
        for r in &records {
            assert_eq!(r.m, sieve.phi(r.n));
        }
    }

    #[test]
    fn n1_set_policy_independent() {
        let a = n1_set_up_to(500, HorizonPolicy::Conservative).unwrap();
        let b = n1_set_up_to(500, HorizonPolicy::RosserSchoenfeld).unwrap();
        let na: Vec<u64> = a.iter().map(|r| r.n).collect();
        let nb: Vec<u64> = b.iter().map(|r| r.n).collect();
        assert_eq!(na, nb);
    }

    #[test]
    fn masser_shiu_examples() {
        assert_eq!(masser_shiu_generate(1, 2, 0).unwrap().n, 6);
        assert_eq!(masser_shiu_generate(1, 3, 0).unwrap().n, 30);
        match masser_shiu_generate(1, 2, 5) {
            Err(Error::CriterionViolated(msg)) => assert!(msg.contains("16 >= 4")),
            other => panic!("expected criterion violation, got {other:?}"),
        }
        assert!(masser_shiu_generate(1, 1, 0).is_err());
    }

    #[test]
    fn masser_shiu_outputs_are_sparsely_totient() {
        let set: Vec<u64> = n1_set_up_to(3000, HorizonPolicy::RosserSchoenfeld)
            .unwrap()
            .iter()
            .map(|r| r.n)
            .collect();
        for (d, k, l) in [(1, 2, 0), (1, 3, 0), (1, 4, 0), (2, 3, 0), (1, 4, 1), (3, 4, 0)] {
            let rec = masser_shiu_generate(d, k, l).unwrap();
            if rec.n <= 3000 {
                assert!(set.contains(&rec.n), "{rec:?} missing from N1");
            }
        }
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(
            n1_divisibility_check(2, 1, 100, HorizonPolicy::Conservative).unwrap(),
            Some(1)
        );
        let t3 = n1_divisibility_check(3, 1, 100, HorizonPolicy::Conservative)
            .unwrap()
            .expect("threshold for 3 within range");
        assert!(t3 > 1 && t3 <= 100);
        assert_eq!(
            n1_divisibility_check(97, 1, 50, HorizonPolicy::Conservative).unwrap(),
            None
        );
        assert!(n1_divisibility_check(4, 1, 10, HorizonPolicy::Conservative).is_err());
    }

    #[test]
    fn bn1_examples() {
        let set = bn1_set(1, 100, HorizonPolicy::Conservative).unwrap();
        assert!(set.contains(&8));
        assert!(set.contains(&4));
        let set = bn1_set(1, 60, HorizonPolicy::RosserSchoenfeld).unwrap();
        assert!(set.contains(&8));
        // N1(54) = 180 > 162 = N2(54), so 54 is excluded.
        let set = bn1_set(50, 60, HorizonPolicy::Conservative).unwrap();
        assert!(!set.contains(&54));
    }

    #[test]
    fn n1_dominates_n2_with_equality_exactly_on_bn1() {
        let hi = 1000u64;
        let policy = HorizonPolicy::RosserSchoenfeld;
        let bn1 = bn1_set(1, hi, policy).unwrap();
        let sieve = PhiSieve::build(safe_horizon(hi, policy).unwrap()).unwrap();
        let table = n1_table(hi, &sieve, policy).unwrap();
        for m in 1..=hi {
            // structural N2, independent of the sieve maxima inside bn1_set
            let Some(n2) = crate::inverse_totient::inverse_phi(m).unwrap().n2() else {
                assert!(!bn1.contains(&m));
                continue;
            };
            assert!(table[m as usize] >= n2, "N1({m}) >= N2({m})");
            assert_eq!(bn1.contains(&m), table[m as usize] == n2, "BN1 membership of {m}");
        }
    }

    #[test]
    fn h_ratio_examples() {
        let r = h_ratio_experiment(5, 7, HorizonPolicy::Conservative).unwrap();
        assert_eq!((r.a, r.b, r.m_a, r.m_b), (30, 42, 8, 12));
        assert!(r.n1_verified && r.verdict);
        assert_eq!(r.ratio_a, Rational::new(15, 4));
        assert_eq!(r.ratio_b, Rational::new(7, 2));

        let r = h_ratio_experiment(7, 11, HorizonPolicy::RosserSchoenfeld).unwrap();
        assert_eq!((r.a, r.b), (210, 330));
        assert!(r.n1_verified && r.verdict);

        assert!(h_ratio_experiment(3, 5, HorizonPolicy::Conservative).is_err());
        assert!(h_ratio_experiment(5, 11, HorizonPolicy::Conservative).is_err());
    }

    #[test]
    fn sanna_max_ratio_small() {
        let rep = sanna_diagnostic(6000, 1000, HorizonPolicy::RosserSchoenfeld).unwrap();
        // N1(5760) = 30030 gives ratio 5.21...; anything >= 4 confirms growth.
        assert!(rep.max_ratio >= Rational::new(4, 1), "max {:?}", rep.max_ratio);
    }
}
