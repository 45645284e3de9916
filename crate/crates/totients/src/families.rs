//! Generators and certifiers for the explicit extremal families
//! K_{q,r} = 2q^(r+1), the piecewise k_{q,r}, R(r1,r2) = 2*3^r1*5^r2 and the
//! Fermat-prime products 2^a * F_1...F_k, plus the D(A,B) quantity and the
//! supporting inequality lemmas verified over finite grids.

use crate::arith::{euler_phi, is_prime, DEFAULT_MEMORY_BUDGET_BYTES};
use crate::error::{Error, Result};
use crate::inverse_totient::{inverse_phi, inverse_phi_oracle_with_budget};
use crate::sparsely_totient::{n1_of, safe_horizon, HorizonPolicy, PhiSieve};
use crate::Rational;
use num_rational::Ratio;
use serde::Serialize;

/// The five known Fermat primes F_1..F_5. Existence of F_6 is open.
pub const FERMAT_PRIMES: [u64; 5] = [3, 5, 17, 257, 65537];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreeValued {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct FermatPrimeTable {
    pub known: [u64; 5],
    pub next_exists: ThreeValued,
}

impl Default for FermatPrimeTable {
    fn default() -> Self {
        FermatPrimeTable {
            known: FERMAT_PRIMES,
            next_exists: ThreeValued::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    KMax,
    KMin,
    R,
    Fermat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FamilyParams {
    Kqr { q: u64, r: u32 },
    R { r1: u32, r2: u32 },
    Fermat { k: u32, a: u32 },
}

/// Which rung of the certification ladder produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMethod {
    OracleScan,
    StructuralInvphi,
    Sieve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremeKind {
    Max,
    Min,
}

/// A family element with the evidence that it is the max (resp. min) of
/// phi^-1(m), plus its N1-membership status when a sieve was affordable.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyCertificate {
    pub element: u64,
    pub family: Family,
    pub parameters: FamilyParams,
    pub m: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict_n2: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict_n3: Option<bool>,
    pub method: CertMethod,
    pub in_n1: ThreeValued,
    /// Fermat k = 5 certificates are valid contingent on F_6 not existing.
    pub conditional: bool,
    /// For K_min: whether q^r(q-1)+1 is prime (the non-composite branch).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plus_one_prime: Option<bool>,
    /// For K_min: element = q^(r+1), a composite member of the family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composite_member: Option<bool>,
}

impl FamilyCertificate {
    pub fn verdict(&self) -> bool {
        self.verdict_n2.or(self.verdict_n3).unwrap_or(false)
    }
}

/// Ladder limits: oracle scan below `oracle_m_limit`, structural inverse-phi
/// below `structural_m_limit`, then a phi sieve to the safe horizon when it
/// fits `sieve_budget_bytes` (structural self-consistency otherwise).
#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub oracle_m_limit: u64,
    pub structural_m_limit: u64,
    pub sieve_budget_bytes: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            oracle_m_limit: 2000,
            structural_m_limit: 10_000_000,
            sieve_budget_bytes: DEFAULT_MEMORY_BUDGET_BYTES,
        }
    }
}

fn sieve_extreme(m: u64, kind: ExtremeKind, budget: u64) -> Result<Option<u64>> {
    let horizon = safe_horizon(m, HorizonPolicy::RosserSchoenfeld)?;
    let sieve = PhiSieve::build_with_budget(horizon, budget)?;
    let found = match kind {
        ExtremeKind::Max => (1..=horizon).rev().find(|&x| sieve.phi(x) == m),
        ExtremeKind::Min => (1..=horizon).find(|&x| sieve.phi(x) == m),
    };
    Ok(found)
}

/// Certify `element` as the extreme of phi^-1(m) by an explicitly chosen
/// method. The sieve and oracle routes are independent of the structural
/// enumeration.
pub fn certify_extreme_with(
    element: u64,
    m: u64,
    kind: ExtremeKind,
    method: CertMethod,
    opts: &CertifyOptions,
) -> Result<bool> {
    let extreme = match method {
        CertMethod::OracleScan => {
            let pre = inverse_phi_oracle_with_budget(m, opts.sieve_budget_bytes / 9)?;
            match kind {
                ExtremeKind::Max => pre.n2(),
                ExtremeKind::Min => pre.n3(),
            }
        }
        CertMethod::StructuralInvphi => {
            let pre = inverse_phi(m)?;
            match kind {
                ExtremeKind::Max => pre.n2(),
                ExtremeKind::Min => pre.n3(),
            }
        }
        CertMethod::Sieve => sieve_extreme(m, kind, opts.sieve_budget_bytes)?,
    };
    Ok(extreme == Some(element))
}

fn certify_extreme(element: u64, m: u64, kind: ExtremeKind, opts: &CertifyOptions) -> Result<(bool, CertMethod)> {
    let method = if m <= opts.oracle_m_limit {
        CertMethod::OracleScan
    } else if m <= opts.structural_m_limit {
        CertMethod::StructuralInvphi
    } else {
        let sieve_fits = safe_horizon(m, HorizonPolicy::RosserSchoenfeld)
            .ok()
            .is_some_and(|h| h.saturating_add(1).saturating_mul(9) <= opts.sieve_budget_bytes);
        if sieve_fits {
            CertMethod::Sieve
        } else {
            CertMethod::StructuralInvphi
        }
    };
    Ok((certify_extreme_with(element, m, kind, method, opts)?, method))
}

fn in_n1_status(element: u64, m: u64, opts: &CertifyOptions) -> ThreeValued {
    let Ok(horizon) = safe_horizon(m, HorizonPolicy::RosserSchoenfeld) else {
        return ThreeValued::Unknown;
    };
    if horizon.saturating_add(1).saturating_mul(9) > opts.sieve_budget_bytes {
        return ThreeValued::Unknown;
    }
    let Ok(sieve) = PhiSieve::build_with_budget(horizon, opts.sieve_budget_bytes) else {
        return ThreeValued::Unknown;
    };
    match n1_of(m, &sieve, HorizonPolicy::RosserSchoenfeld) {
        Ok(n1) if n1 == element => ThreeValued::Yes,
        Ok(_) => ThreeValued::No,
        Err(_) => ThreeValued::Unknown,
    }
}

/// D(A,B) = prod_{q in A} (q-1)/q * prod_{q in B} q/(q-1), exact.
pub fn d_quantity(a: &[u64], b: &[u64]) -> Result<Rational> {
    for &q in a.iter().chain(b) {
        if !is_prime(q) {
            return Err(Error::Domain(format!("D(A,B) member {q} is not prime")));
        }
    }
    let dedup = |s: &[u64]| {
        let mut v = s.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut acc: Ratio<u128> = Ratio::new(1, 1);
    for q in dedup(a) {
        acc *= Ratio::new(q as u128 - 1, q as u128);
    }
    for q in dedup(b) {
        acc *= Ratio::new(q as u128, q as u128 - 1);
    }
    let numer = u64::try_from(*acc.numer());
    let denom = u64::try_from(*acc.denom());
    match (numer, denom) {
        (Ok(n), Ok(d)) => Ok(Rational::new(n, d)),
        _ => Err(Error::Overflow("D(A,B) does not fit a u64 rational".into())),
    }
}

fn checked_pow(base: u64, exp: u32, what: &str) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{what}: {base}^{exp} exceeds u64")))
}

fn require_q_3_mod_4(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::Domain(format!("q = {q} is not prime")));
    }
    if q % 4 != 3 {
        return Err(Error::Residue(format!("q = {q} is not 3 (mod 4)")));
    }
    Ok(())
}

/// K_{q,r} = 2q^(r+1), certified as N2(q^r(q-1)).
pub fn gen_k_max(q: u64, r: u32, opts: &CertifyOptions) -> Result<FamilyCertificate> {
    require_q_3_mod_4(q)?;
    if r < 1 {
        return Err(Error::Domain("gen_k_max requires r >= 1".into()));
    }
    let qr = checked_pow(q, r, "K_{q,r}")?;
    let m = qr
        .checked_mul(q - 1)
        .ok_or_else(|| Error::Overflow(format!("q^r(q-1) exceeds u64 for q = {q}, r = {r}")))?;
    let element = qr
        .checked_mul(2 * q)
        .ok_or_else(|| Error::Overflow(format!("2q^(r+1) exceeds u64 for q = {q}, r = {r}")))?;
    let (holds, method) = certify_extreme(element, m, ExtremeKind::Max, opts)?;
    Ok(FamilyCertificate {
        element,
        family: Family::KMax,
        parameters: FamilyParams::Kqr { q, r },
        m,
        verdict_n2: Some(holds),
        verdict_n3: None,
        method,
        in_n1: in_n1_status(element, m, opts),
        conditional: false,
        plus_one_prime: None,
        composite_member: None,
    })
}

/// k_{q,r} = q^r(q-1)+1 when that is prime, else q^(r+1); certified as
/// N3(q^r(q-1)). The composite branch supplies the composite members of the
/// family.
pub fn gen_k_min(q: u64, r: u32, opts: &CertifyOptions) -> Result<FamilyCertificate> {
    require_q_3_mod_4(q)?;
    if r < 1 {
        return Err(Error::Domain("gen_k_min requires r >= 1".into()));
    }
    let qr = checked_pow(q, r, "k_{q,r}")?;
    let m = qr
        .checked_mul(q - 1)
        .ok_or_else(|| Error::Overflow(format!("q^r(q-1) exceeds u64 for q = {q}, r = {r}")))?;
    let plus_one = m + 1;
    let plus_one_prime = is_prime(plus_one);
    let element = if plus_one_prime {
        plus_one
    } else {
        checked_pow(q, r + 1, "k_{q,r}")?
    };
    let (holds, method) = certify_extreme(element, m, ExtremeKind::Min, opts)?;
    Ok(FamilyCertificate {
        element,
        family: Family::KMin,
        parameters: FamilyParams::Kqr { q, r },
        m,
        verdict_n2: None,
        verdict_n3: Some(holds),
        method,
        in_n1: in_n1_status(element, m, opts),
        conditional: false,
        plus_one_prime: Some(plus_one_prime),
        composite_member: Some(!plus_one_prime),
    })
}

/// R(r1,r2) = 2 * 3^r1 * 5^r2 with r2 > 2, certified as N2(phi(R)).
pub fn gen_r(r1: u32, r2: u32, opts: &CertifyOptions) -> Result<FamilyCertificate> {
    if r1 < 1 {
        return Err(Error::Domain("gen_r requires r1 >= 1".into()));
    }
    if r2 <= 2 {
        return Err(Error::Hypothesis(format!("R(r1,r2) requires r2 > 2, got r2 = {r2}")));
    }
    let element = 2u64
        .checked_mul(checked_pow(3, r1, "R(r1,r2)")?)
        .and_then(|v| v.checked_mul(checked_pow(5, r2, "R(r1,r2)").ok()?))
        .ok_or_else(|| Error::Overflow(format!("2*3^{r1}*5^{r2} exceeds u64")))?;
    let m = euler_phi(element)?;
    let (holds, method) = certify_extreme(element, m, ExtremeKind::Max, opts)?;
    Ok(FamilyCertificate {
        element,
        family: Family::R,
        parameters: FamilyParams::R { r1, r2 },
        m,
        verdict_n2: Some(holds),
        verdict_n3: None,
        method,
        in_n1: in_n1_status(element, m, opts),
        conditional: false,
        plus_one_prime: None,
        composite_member: None,
    })
}

/// 2^a * F_1...F_k, certified as N2 of its (power of two) phi value.
/// For k < 5 the admissible range is 1 <= a <= log2(F_{k+1} - 1) = 2^k.
/// For k = 5 every a is accepted but the certificate is conditional on the
/// nonexistence of F_6.
pub fn gen_fermat(k: u32, a: u32, opts: &CertifyOptions) -> Result<FamilyCertificate> {
    if !(1..=5).contains(&k) {
        return Err(Error::Domain(format!("k = {k} is outside the known Fermat range 1..=5")));
    }
    if a < 1 {
        return Err(Error::Domain("gen_fermat requires a >= 1".into()));
    }
    let conditional = k == 5;
    if k < 5 {
        let bound = 1u32 << k; // log2(F_{k+1} - 1)
        if a > bound {
            return Err(Error::Bound(format!(
                "a = {a} exceeds log2(F_{}-1) = {bound}",
                k + 1
            )));
        }
    }
    let mut element = 2u64
        .checked_pow(a)
        .ok_or_else(|| Error::Overflow(format!("2^{a} exceeds u64")))?;
    for &f in &FERMAT_PRIMES[..k as usize] {
        element = element
            .checked_mul(f)
            .ok_or_else(|| Error::Overflow(format!("2^{a} * F_1..F_{k} exceeds u64")))?;
    }
    let m = euler_phi(element)?;
    if !m.is_power_of_two() {
        return Err(Error::ClassificationFailed {
            m,
            detail: "phi of a Fermat product must be a power of two".into(),
        });
    }
    let (holds, method) = certify_extreme(element, m, ExtremeKind::Max, opts)?;
    Ok(FamilyCertificate {
        element,
        family: Family::Fermat,
        parameters: FamilyParams::Fermat { k, a },
        m,
        verdict_n2: Some(holds),
        verdict_n3: None,
        method,
        in_n1: in_n1_status(element, m, opts),
        conditional,
        plus_one_prime: None,
        composite_member: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct N2MembershipRow {
    /// Exponent r_q for each odd prime q < p, in prime order.
    pub exponents: Vec<u32>,
    pub element: u64,
    pub in_n2: bool,
}

/// Experimental scan for the open question: past which exponent floors does
/// 2 * prod_{2 < q < p} q^{r_q} always lie in N2? Reports a verdict for
/// every exponent vector in [1, r_max]^k; no resolution is claimed.
pub fn n2_membership_scan(p: u64, r_max: u32, opts: &CertifyOptions) -> Result<Vec<N2MembershipRow>> {
    if !is_prime(p) || p < 5 {
        return Err(Error::Domain(format!("scan needs an odd prime p >= 5, got {p}")));
    }
    let odd_primes: Vec<u64> = crate::arith::primes_up_to(p - 1)?
        .into_iter()
        .filter(|&q| q > 2)
        .collect();
    let k = odd_primes.len() as u32;
    let mut rows = Vec::new();
    let span = r_max as u64;
    for code in 0..span.pow(k) {
        let mut exponents = Vec::with_capacity(k as usize);
        let mut c = code;
        for _ in 0..k {
            exponents.push((c % span) as u32 + 1);
            c /= span;
        }
        let mut element = 2u64;
        for (&q, &r) in odd_primes.iter().zip(&exponents) {
            element = element
                .checked_mul(checked_pow(q, r, "N2 membership scan")?)
                .ok_or_else(|| Error::Overflow("scan element exceeds u64".into()))?;
        }
        let m = euler_phi(element)?;
        let in_n2 = certify_extreme(element, m, ExtremeKind::Max, opts)?.0;
        rows.push(N2MembershipRow { exponents, element, in_n2 });
    }
    Ok(rows)
}

/// Finite-grid verification outcome for one of the inequality lemmas.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaGridReport {
    pub lemma: &'static str,
    pub instances: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl LemmaGridReport {
    pub fn pass(&self) -> bool {
        self.instances > 0 && self.failures == 0
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

/// sum a^{x_i} <= a^{x_1+...+x_k} for 2 <= k <= a and at least two positive
/// exponents, over the full grid a <= a_max, k <= k_max, x_i <= x_max.
pub fn check_lemma_power_sums(a_max: u64, k_max: u32, x_max: u32) -> LemmaGridReport {
    let mut report = LemmaGridReport { lemma: "power_sums", instances: 0, failures: 0, first_failure: None };
    for a in 2..=a_max {
        for k in 2..=(k_max.min(a as u32)) {
            let radix = x_max as u64 + 1;
            let tuples = radix.pow(k);
            for code in 0..tuples {
                let mut xs = Vec::with_capacity(k as usize);
                let mut c = code;
                for _ in 0..k {
                    xs.push((c % radix) as u32);
                    c /= radix;
                }
                if xs.iter().filter(|&&x| x > 0).count() < 2 {
                    continue;
                }
                let total: u32 = xs.iter().sum();
                let lhs: u128 = xs.iter().map(|&x| (a as u128).pow(x)).sum();
                let rhs = (a as u128).pow(total);
                report.record(lhs <= rhs, || format!("a={a}, xs={xs:?}: {lhs} > {rhs}"));
            }
        }
    }
    report
}

/// sum x^{a_i} y^{b_i} <= x^t y^u with a_i + b_i != 0, k <= min(x, y), over
/// the grid x, y <= base_max, k <= k_max, exponents <= e_max.
pub fn check_lemma_two_base(base_max: u64, k_max: u32, e_max: u32) -> LemmaGridReport {
    let mut report = LemmaGridReport { lemma: "two_base", instances: 0, failures: 0, first_failure: None };
    let radix = (e_max as u64 + 1).pow(2);
    for x in 2..=base_max {
        for y in 2..=base_max {
            for k in 2..=k_max.min(x.min(y) as u32) {
                let tuples = radix.pow(k);
                'tuple: for code in 0..tuples {
                    let mut pairs = Vec::with_capacity(k as usize);
                    let mut c = code;
                    for _ in 0..k {
                        let pair = c % radix;
                        c /= radix;
                        let a_i = (pair / (e_max as u64 + 1)) as u32;
                        let b_i = (pair % (e_max as u64 + 1)) as u32;
                        if a_i + b_i == 0 {
                            continue 'tuple;
                        }
                        pairs.push((a_i, b_i));
                    }
                    let t: u32 = pairs.iter().map(|p| p.0).sum();
                    let u: u32 = pairs.iter().map(|p| p.1).sum();
                    let lhs: u128 = pairs
                        .iter()
                        .map(|&(a_i, b_i)| (x as u128).pow(a_i) * (y as u128).pow(b_i))
                        .sum();
                    let rhs = (x as u128).pow(t) * (y as u128).pow(u);
                    report.record(lhs <= rhs, || format!("x={x}, y={y}, pairs={pairs:?}: {lhs} > {rhs}"));
                }
            }
        }
    }
    report
}

/// D(B,A) >= 1 whenever |B| <= |A| and (B subset of A or min(B\A) > max(A)),
/// over all subset pairs of the given prime pool.
pub fn check_lemma_d_subset(pool: &[u64]) -> Result<LemmaGridReport> {
    let mut report = LemmaGridReport { lemma: "d_subset", instances: 0, failures: 0, first_failure: None };
    let n = pool.len();
    for a_mask in 0u32..(1 << n) {
        for b_mask in 0u32..(1 << n) {
            let a: Vec<u64> = (0..n).filter(|i| a_mask >> i & 1 == 1).map(|i| pool[i]).collect();
            let b: Vec<u64> = (0..n).filter(|i| b_mask >> i & 1 == 1).map(|i| pool[i]).collect();
            if b.len() > a.len() {
                continue;
            }
            let b_minus_a: Vec<u64> = b.iter().copied().filter(|q| !a.contains(q)).collect();
            let hypothesis = b_minus_a.is_empty()
                || a.iter().max().is_some_and(|&ma| b_minus_a.iter().min().unwrap() > &ma);
            if !hypothesis {
                continue;
            }
            let d = d_quantity(&b, &a)?;
            report.record(d >= Rational::new(1, 1), || format!("A={a:?}, B={b:?}: D(B,A)={d}"));
        }
    }
    Ok(report)
}

/// D(W(y), W(x)) < 1 whenever phi(y) <= phi(x) and y > x, for
/// 2 <= x < y <= n_max.
pub fn check_lemma_d_phi(n_max: u64) -> Result<LemmaGridReport> {
    let mut report = LemmaGridReport { lemma: "d_phi", instances: 0, failures: 0, first_failure: None };
    let sieve = PhiSieve::build(n_max)?;
    let primes: Vec<Vec<u64>> = (0..=n_max)
        .map(|n| {
            if n < 2 {
                Vec::new()
            } else {
                crate::arith::factorize(n).unwrap().prime_divisors().collect()
            }
        })
        .collect();
    for y in 3..=n_max {
        for x in 2..y {
            if sieve.phi(y) > sieve.phi(x) {
                continue;
            }
            let d = d_quantity(&primes[y as usize], &primes[x as usize])?;
            report.record(d < Rational::new(1, 1), || format!("y={y}, x={x}: D(W(y),W(x))={d}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> CertifyOptions {
        CertifyOptions::default()
    }

    #[test]
    fn d_quantity_examples() {
        assert_eq!(d_quantity(&[3], &[3]).unwrap(), Rational::new(1, 1));
        assert_eq!(d_quantity(&[], &[2]).unwrap(), Rational::new(2, 1));
        assert_eq!(d_quantity(&[2, 3], &[5]).unwrap(), Rational::new(5, 12));
        assert!(d_quantity(&[4], &[]).is_err());
    }

    #[test]
    fn k_max_examples() {
        let c = gen_k_max(3, 1, &opts()).unwrap();
        assert_eq!((c.element, c.m), (18, 6));
        assert_eq!(c.verdict_n2, Some(true));
        assert_eq!(c.method, CertMethod::OracleScan);
        assert_eq!(c.in_n1, ThreeValued::Yes);

        let c = gen_k_max(3, 3, &opts()).unwrap();
        assert_eq!((c.element, c.m), (162, 54));
        assert_eq!(c.verdict_n2, Some(true));
        // Of the K family only the (3,1) element is sparsely totient.
        assert_eq!(c.in_n1, ThreeValued::No);

        let c = gen_k_max(7, 1, &opts()).unwrap();
        assert_eq!((c.element, c.m), (98, 42));
        assert_eq!(c.verdict_n2, Some(true));

        assert!(matches!(gen_k_max(5, 1, &opts()), Err(Error::Residue(_))));
        assert!(matches!(gen_k_max(3, 45, &opts()), Err(Error::Overflow(_))));
    }

    #[test]
    fn k_min_examples() {
        let c = gen_k_min(3, 1, &opts()).unwrap();
        assert_eq!(c.element, 7);
        assert_eq!(c.verdict_n3, Some(true));
        assert_eq!(c.plus_one_prime, Some(true));
        assert_eq!(c.composite_member, Some(false));

        let c = gen_k_min(3, 3, &opts()).unwrap();
        assert_eq!(c.element, 81); // 55 = 5*11 is composite
        assert_eq!(c.verdict_n3, Some(true));
        assert_eq!(c.composite_member, Some(true));

        let c = gen_k_min(7, 1, &opts()).unwrap();
        assert_eq!(c.element, 43);
        assert_eq!(c.verdict_n3, Some(true));
    }

    #[test]
    fn r_examples() {
        let c = gen_r(1, 3, &opts()).unwrap();
        assert_eq!((c.element, c.m), (750, 200));
        assert_eq!(c.verdict_n2, Some(true));
        assert_eq!(c.method, CertMethod::OracleScan);

        let c = gen_r(2, 3, &opts()).unwrap();
        assert_eq!((c.element, c.m), (2250, 600));
        assert_eq!(c.verdict_n2, Some(true));

        assert!(matches!(gen_r(1, 2, &opts()), Err(Error::Hypothesis(_))));
        assert!(matches!(gen_r(0, 3, &opts()), Err(Error::Domain(_))));
    }

    #[test]
    fn fermat_examples() {
        let c = gen_fermat(1, 2, &opts()).unwrap();
        assert_eq!((c.element, c.m), (12, 4));
        assert_eq!(c.verdict_n2, Some(true));
        assert!(!c.conditional);

        let c = gen_fermat(2, 4, &opts()).unwrap();
        assert_eq!((c.element, c.m), (240, 64));
        assert_eq!(c.verdict_n2, Some(true));

        assert!(matches!(gen_fermat(1, 3, &opts()), Err(Error::Bound(_))));
        assert!(matches!(gen_fermat(6, 1, &opts()), Err(Error::Domain(_))));

        let c = gen_fermat(5, 1, &opts()).unwrap();
        assert!(c.conditional);
        assert_eq!(c.m, 2u64.pow(31));
        assert_eq!(c.verdict_n2, Some(true));
        assert_eq!(c.method, CertMethod::StructuralInvphi);
    }

    #[test]
    fn fermat_phi_is_power_of_two() {
        for k in 1..=5u32 {
            let a_hi = if k < 5 { 1 << k } else { 8 };
            for a in 1..=a_hi {
                let c = gen_fermat(k, a, &opts()).unwrap();
                assert!(c.m.is_power_of_two(), "phi({}) = {} not a 2-power", c.element, c.m);
            }
        }
    }

    #[test]
    fn fermat_largest_in_range() {
        // 2^32 * (2^32 - 1) = 2^64 - 2^32 is the largest family element
        // representable in u64; one more doubling overflows.
        let c = gen_fermat(5, 32, &opts()).unwrap();
        assert_eq!(c.element, u64::MAX - (1 << 32) + 1);
        assert_eq!(c.m, 1u64 << 62);
        assert_eq!(c.verdict_n2, Some(true));
        assert!(matches!(gen_fermat(5, 33, &opts()), Err(Error::Overflow(_))));
    }

    #[test]
    fn certificates_agree_with_structural_module() {
        for (q, r) in [(3u64, 1u32), (3, 4), (7, 2), (11, 1), (19, 1)] {
            let cmax = gen_k_max(q, r, &opts()).unwrap();
            assert!(cmax.verdict());
            assert_eq!(crate::inverse_totient::n2(cmax.m).unwrap(), cmax.element);
            let cmin = gen_k_min(q, r, &opts()).unwrap();
            assert!(cmin.verdict());
            assert_eq!(crate::inverse_totient::n3(cmin.m).unwrap(), cmin.element);
        }
    }

    #[test]
    fn explicit_method_selection() {
        // m = 16384 certifies by sieve independently of the structural route.
        let c = gen_fermat(3, 8, &opts()).unwrap();
        assert_eq!(c.m, 16384);
        assert!(certify_extreme_with(c.element, c.m, ExtremeKind::Max, CertMethod::Sieve, &opts()).unwrap());
        assert!(!certify_extreme_with(c.element + 2, c.m, ExtremeKind::Max, CertMethod::Sieve, &opts()).unwrap());
    }

    #[test]
    fn k_min_takes_composite_branch_on_mod20_class() {
        // q = 3 (mod 20) with r = 3 (mod 4): 5 | q^r(q-1)+1, so the element
        // must be q^(r+1).
        for q in [3u64, 23, 43] {
            for r in [3u32, 7, 11] {
                let Some(expected) = q.checked_pow(r).and_then(|v| v.checked_mul(q)) else {
                    continue;
                };
                let Ok(cert) = gen_k_min(q, r, &opts()) else { continue };
                assert_eq!(cert.composite_member, Some(true), "k_{{{q},{r}}}");
                assert_eq!(cert.element, expected);
                assert!(cert.verdict());
            }
        }
    }

    #[test]
    fn k_max_geometric_progression_in_q() {
        let elements: Vec<u64> = (1..=5)
            .map(|r| gen_k_max(3, r, &opts()).unwrap().element)
            .collect();
        assert!(elements.windows(2).all(|w| w[1] == 3 * w[0]));
    }

    #[test]
    fn lemma_grids_pass() {
        let r = check_lemma_power_sums(5, 4, 3);
        assert!(r.pass(), "{r:?}");
        let r = check_lemma_two_base(5, 3, 2);
        assert!(r.pass(), "{r:?}");
        let r = check_lemma_d_subset(&[2, 3, 5, 7, 11, 13]).unwrap();
        assert!(r.pass(), "{r:?}");
        let r = check_lemma_d_phi(200).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn n2_membership_scan_spot_values() {
        // p = 5: the scan covers 2 * 3^r; every small exponent lands in N2.
        let rows = n2_membership_scan(5, 4, &opts()).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.in_n2));
        // p = 7: includes 2 * 3 * 5^3 = 750, the R(1,3) element.
        let rows = n2_membership_scan(7, 3, &opts()).unwrap();
        assert_eq!(rows.len(), 9);
        let r13 = rows.iter().find(|r| r.element == 750).unwrap();
        assert_eq!(r13.exponents, vec![1, 3]);
        assert!(r13.in_n2);
        assert!(n2_membership_scan(4, 2, &opts()).is_err());
    }

    #[test]
    fn lemma_d_phi_example_pair() {
        // phi(9) = 6 <= phi(7) = 6 with 9 > 7: D(W(9), W(7)) = 7/9 < 1.
        let d = d_quantity(&[3], &[7]).unwrap();
        assert_eq!(d, Rational::new(7, 9));
    }

    #[test]
    fn certificate_serialization_shape() {
        let c = gen_k_min(3, 3, &opts()).unwrap();
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["element"], 81);
        assert_eq!(json["family"], "k_min");
        assert_eq!(json["parameters"]["q"], 3);
        assert_eq!(json["verdict_n3"], true);
        assert_eq!(json["composite_member"], true);
        assert!(json.get("verdict_n2").is_none());
    }
}
