//! Exact 64-bit integer arithmetic: primality, factorization, Euler's phi,
//! p-adic valuation, prime enumeration, primorials.
//!
//! Everything here is deterministic and exact for the full `u64` range.
//! Overflow is an explicit error, never silent wraparound.

use crate::error::{Error, Result};

/// Default memory budget for sieve-style allocations (1 GiB).
pub const DEFAULT_MEMORY_BUDGET_BYTES: u64 = 1 << 30;

/// Prime-power decomposition of a positive 64-bit integer.
///
/// Invariants: the listed primes are strictly increasing, every exponent is
/// at least 1, and the product of `p^e` reconstructs `value`. The list is
/// empty exactly for `value == 1` (empty product convention).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The set of prime divisors, in increasing order.
    pub fn prime_divisors(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn num_prime_divisors(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// All divisors of `value`, sorted increasing.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// phi(value) computed from the decomposition.
    pub fn phi(&self) -> u64 {
        let mut out = 1u64;
        for &(p, e) in &self.factors {
            out *= p.pow(e - 1) * (p - 1);
        }
        out
    }
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u64;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
///
/// The twelve-prime base set is a proven deterministic witness set below
/// 3.3 * 10^24, which covers `u64`. Returns false for 0 and 1.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let r = (n - 1).trailing_zeros();
    let d = (n - 1) >> r;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho with a deterministic constant sequence.
/// Precondition: n is odd, composite, and not a prime power of a small prime.
fn pollard_rho(n: u64) -> u64 {
    for c in 1..64u64 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = num_integer::gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("pollard rho exhausted constants for n = {n}");
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Exact prime-power decomposition. Trial division by small primes, then a
/// deterministic Pollard splitter on the remaining cofactor.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("factorize(0) is undefined".into()));
    }
    let value = n;
    let mut n = n;
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    let mut p = 37u64;
    while p <= 1 << 16 && p * p <= n {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
        p += 2;
    }
    if n > 1 {
        factor_into(n, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Ok(Factorization { value, factors })
}

/// Euler's totient: the number of 1 <= k <= n coprime to n.
pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.phi())
}

/// p-adic valuation of n, with v_p(0) = infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(r) => Some(r),
            Valuation::Infinite => None,
        }
    }
}

/// Largest r with p^r | n; the distinguished infinite marker for n = 0.
pub fn valuation(p: u64, n: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("valuation base {p} is not prime")));
    }
    if n == 0 {
        return Ok(Valuation::Infinite);
    }
    let mut n = n;
    let mut r = 0u32;
    while n.is_multiple_of(p) {
        n /= p;
        r += 1;
    }
    Ok(Valuation::Finite(r))
}

/// All primes <= x in increasing order, by Eratosthenes sieve.
pub fn primes_up_to(x: u64) -> Result<Vec<u64>> {
    primes_up_to_with_budget(x, DEFAULT_MEMORY_BUDGET_BYTES)
}

pub fn primes_up_to_with_budget(x: u64, budget_bytes: u64) -> Result<Vec<u64>> {
    if x < 1 {
        return Err(Error::Domain("primes_up_to requires x >= 1".into()));
    }
    if x + 1 > budget_bytes {
        return Err(Error::Resource {
            what: format!("prime sieve to {x}"),
            requested: x + 1,
            limit: budget_bytes,
        });
    }
    let n = x as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    Ok(primes)
}

/// The first `count` primes, 1-indexed convention p_1 = 2.
pub fn first_n_primes(count: usize) -> Result<Vec<u64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    // p_n < n (ln n + ln ln n) for n >= 6; small counts padded by a constant.
    let n = count as f64;
    let bound = if count < 6 {
        16.0
    } else {
        n * (n.ln() + n.ln().ln()) + 8.0
    };
    let mut primes = primes_up_to(bound as u64)?;
    while primes.len() < count {
        let next = primes.last().unwrap() * 2;
        primes = primes_up_to(next)?;
    }
    primes.truncate(count);
    Ok(primes)
}

/// Product of all primes <= p (X_p). Errors on non-prime p and on overflow,
/// naming the offending prime.
pub fn primorial(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("primorial argument {p} is not prime")));
    }
    let mut acc = 1u64;
    for q in primes_up_to(p)? {
        acc = acc
            .checked_mul(q)
            .ok_or_else(|| Error::Overflow(format!("primorial overflows u64 at prime {q}")))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::gcd;
    use proptest::prelude::*;

    #[test]
    fn is_prime_examples() {
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(!is_prime(55));
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime(0));
        // Carmichael number
        assert!(!is_prime(561));
    }

    #[test]
    fn is_prime_matches_trial_division() {
        for n in 1..5000u64 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "mismatch at {n}");
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap().factors(), &[]);
        assert_eq!(factorize(750).unwrap().factors(), &[(2, 1), (3, 1), (5, 3)]);
        assert_eq!(factorize(97).unwrap().factors(), &[(97, 1)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_large_semiprime() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors(), &[(q, 1), (p, 1)]);
    }

    #[test]
    fn factorization_reconstructs_value() {
        for n in 1..10_000u64 {
            let f = factorize(n).unwrap();
            let product: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(product, n);
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.prime_divisors().all(is_prime));
        }
    }

    #[test]
    fn euler_phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(750).unwrap(), 200);
        assert_eq!(euler_phi(23).unwrap(), 22);
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn euler_phi_equals_coprime_count_up_to_10000() {
        for n in 1..=10_000u64 {
            let count = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n).unwrap(), count, "phi({n})");
        }
    }

    #[test]
    fn phi_multiplicative_on_random_coprime_pairs() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0xf01);
        let mut checked = 0;
        while checked < 1000 {
            let a = rng.gen_range(1..=1_000_000u64);
            let b = rng.gen_range(1..=1_000_000u64);
            if gcd(a, b) != 1 {
                continue;
            }
            assert_eq!(
                euler_phi(a * b).unwrap(),
                euler_phi(a).unwrap() * euler_phi(b).unwrap()
            );
            checked += 1;
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(2, 40).unwrap(), Valuation::Finite(3));
        assert_eq!(valuation(5, 40).unwrap(), Valuation::Finite(1));
        assert_eq!(valuation(3, 0).unwrap(), Valuation::Infinite);
        assert!(valuation(4, 10).is_err());
    }

    #[test]
    fn primes_up_to_examples() {
        assert!(primes_up_to(1).unwrap().is_empty());
        assert_eq!(primes_up_to(10).unwrap(), vec![2, 3, 5, 7]);
        let p30 = primes_up_to(30).unwrap();
        assert_eq!(p30.len(), 10);
        assert_eq!(*p30.last().unwrap(), 29);
    }

    #[test]
    fn primes_up_to_respects_budget() {
        match primes_up_to_with_budget(1 << 20, 1024) {
            Err(Error::Resource { .. }) => {}
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn first_n_primes_indexing() {
        let ps = first_n_primes(10).unwrap();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn primorial_examples() {
        assert_eq!(primorial(2).unwrap(), 2);
        assert_eq!(primorial(5).unwrap(), 30);
        assert_eq!(primorial(7).unwrap(), 210);
        assert_eq!(primorial(47).unwrap(), 614_889_782_588_491_410);
        match primorial(53) {
            Err(Error::Overflow(msg)) => assert!(msg.contains("53")),
            other => panic!("expected overflow, got {other:?}"),
        }
        assert!(primorial(4).is_err());
    }

    #[test]
    fn divisors_are_complete_and_sorted() {
        let f = factorize(360).unwrap();
        let divs = f.divisors();
        let direct: Vec<u64> = (1..=360).filter(|d| 360 % d == 0).collect();
        assert_eq!(divs, direct);
    }

    proptest! {
        #[test]
        fn factorize_roundtrip_random(n in 1u64..=u32::MAX as u64 * 16) {
            let f = factorize(n).unwrap();
            let product: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(product, n);
            prop_assert!(f.prime_divisors().all(is_prime));
        }
    }
}
