//! Exact enumeration of the inverse totient set phi^-1(m), its extremes
//! N2(m) / N3(m), the solution count A(m), and the structural facts about
//! preimages of m = 2 (mod 4) and of 4m for odd m.
//!
//! Two independent routes are provided. `inverse_phi` assembles solutions
//! structurally from prime powers p^k whose contribution p^(k-1)(p-1)
//! divides m; completeness follows from the divisor structure alone.
//! `inverse_phi_oracle` scans every n <= 2m^2 (every solution lies there
//! because phi(n) >= sqrt(n/2)) and exists to certify the structural route.

use crate::arith::{factorize, is_prime, DEFAULT_MEMORY_BUDGET_BYTES};
use crate::error::{Error, Result};
use crate::sparsely_totient::PhiSieve;
use crate::Rational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// The complete solution set of phi(x) = m, sorted strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageSet {
    m: u64,
    solutions: Vec<u64>,
}

impl PreimageSet {
    pub(crate) fn new(m: u64, solutions: Vec<u64>) -> Self {
        debug_assert!(solutions.windows(2).all(|w| w[0] < w[1]));
        PreimageSet { m, solutions }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn solutions(&self) -> &[u64] {
        &self.solutions
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// A(m), the number of solutions.
    pub fn multiplicity(&self) -> usize {
        self.solutions.len()
    }

    /// N2(m) = max of the preimage.
    pub fn n2(&self) -> Option<u64> {
        self.solutions.last().copied()
    }

    /// N3(m) = min of the preimage.
    pub fn n3(&self) -> Option<u64> {
        self.solutions.first().copied()
    }
}

impl Serialize for PreimageSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let extra = usize::from(!self.is_empty()) * 2;
        let mut st = serializer.serialize_struct("PreimageSet", 2 + extra)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("solutions", &self.solutions)?;
        if let (Some(n2), Some(n3)) = (self.n2(), self.n3()) {
            st.serialize_field("n2", &n2)?;
            st.serialize_field("n3", &n3)?;
        }
        st.end()
    }
}

// Candidate primes for the structural assembly: p is usable iff (p-1) | m.
fn candidate_primes(m: u64) -> Result<Vec<u64>> {
    let mut cands: Vec<u64> = factorize(m)?
        .divisors()
        .into_iter()
        .filter_map(|d| {
            let p = d.checked_add(1)?;
            is_prime(p).then_some(p)
        })
        .collect();
    // Larger primes have fewer exponent options; placing them first keeps
    // the search tree narrow.
    cands.sort_unstable_by(|a, b| b.cmp(a));
    Ok(cands)
}

fn assemble(cands: &[u64], idx: usize, rem: u64, acc: u128, out: &mut Vec<u64>) -> Result<()> {
    // Every contribution is even except the unit contribution of 2^1, so an
    // odd remainder above 1 is unreachable.
    if rem > 1 && rem % 2 == 1 {
        return Ok(());
    }
    if idx == cands.len() {
        if rem == 1 {
            let x = u64::try_from(acc)
                .map_err(|_| Error::Overflow(format!("preimage solution {acc} exceeds u64")))?;
            out.push(x);
        }
        return Ok(());
    }
    assemble(cands, idx + 1, rem, acc, out)?;
    let p = cands[idx];
    let mut contribution = p - 1; // phi(p^k) = p^(k-1)(p-1), starting at k = 1
    let mut power = p as u128;
    loop {
        if contribution <= rem && rem.is_multiple_of(contribution) {
            assemble(cands, idx + 1, rem / contribution, acc * power, out)?;
        }
        match contribution.checked_mul(p) {
            Some(c) if c <= rem => {
                contribution = c;
                power *= p as u128;
            }
            _ => break,
        }
    }
    Ok(())
}

/// Structural enumeration of phi^-1(m). Complete by construction: every
/// solution factors into prime powers whose phi-contributions multiply to m,
/// and the search walks exactly those assignments.
pub fn inverse_phi(m: u64) -> Result<PreimageSet> {
    if m == 0 {
        return Err(Error::Domain("inverse_phi requires m >= 1".into()));
    }
    let cands = candidate_primes(m)?;
    let mut solutions = Vec::new();
    assemble(&cands, 0, m, 1, &mut solutions)?;
    solutions.sort_unstable();
    Ok(PreimageSet::new(m, solutions))
}

/// True iff m lies in V = phi(N).
pub fn is_totient(m: u64) -> Result<bool> {
    Ok(!inverse_phi(m)?.is_empty())
}

/// Brute-force oracle: scan all n <= 2m^2. phi(n) >= sqrt(n/2) guarantees
/// every solution is inside the scanned range. Test/certification use only.
pub fn inverse_phi_oracle(m: u64) -> Result<PreimageSet> {
    inverse_phi_oracle_with_budget(m, DEFAULT_MEMORY_BUDGET_BYTES / 9)
}

pub fn inverse_phi_oracle_with_budget(m: u64, max_scan: u64) -> Result<PreimageSet> {
    if m == 0 {
        return Err(Error::Domain("inverse_phi_oracle requires m >= 1".into()));
    }
    let bound = 2u128 * (m as u128) * (m as u128);
    if bound > max_scan as u128 {
        return Err(Error::Budget {
            what: format!("oracle scan for m = {m}"),
            requested: bound.min(u64::MAX as u128) as u64,
            limit: max_scan,
        });
    }
    let sieve = PhiSieve::build(bound as u64)?;
    inverse_phi_scan(m, &sieve)
}

/// Oracle scan against a caller-provided phi table. The table horizon must
/// cover the full 2m^2 completeness bound.
pub fn inverse_phi_scan(m: u64, sieve: &PhiSieve) -> Result<PreimageSet> {
    let bound = 2u128 * (m as u128) * (m as u128);
    let bound = u64::try_from(bound)
        .map_err(|_| Error::Overflow(format!("2 * {m}^2 exceeds u64")))?;
    if sieve.horizon() < bound {
        return Err(Error::HorizonTooSmall {
            required: bound,
            have: sieve.horizon(),
        });
    }
    let solutions = (1..=bound).filter(|&n| sieve.phi(n) == m).collect();
    Ok(PreimageSet::new(m, solutions))
}

/// Batched oracle: phi^-1(m) for every m <= m_max from a single sieve pass.
pub fn preimages_up_to_oracle(m_max: u64, sieve: &PhiSieve) -> Result<Vec<PreimageSet>> {
    let bound = 2u128 * (m_max as u128) * (m_max as u128);
    let bound = u64::try_from(bound)
        .map_err(|_| Error::Overflow(format!("2 * {m_max}^2 exceeds u64")))?;
    if sieve.horizon() < bound {
        return Err(Error::HorizonTooSmall {
            required: bound,
            have: sieve.horizon(),
        });
    }
    let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); m_max as usize + 1];
    for n in 1..=bound {
        let v = sieve.phi(n);
        if v <= m_max && (n as u128) <= 2 * (v as u128) * (v as u128) {
            buckets[v as usize].push(n);
        }
    }
    Ok(buckets
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(m, sols)| PreimageSet::new(m as u64, sols))
        .collect())
}

/// N2(m) = max(phi^-1(m)).
pub fn n2(m: u64) -> Result<u64> {
    inverse_phi(m)?.n2().ok_or(Error::NotTotient { m })
}

/// N3(m) = min(phi^-1(m)).
pub fn n3(m: u64) -> Result<u64> {
    inverse_phi(m)?.n3().ok_or(Error::NotTotient { m })
}

/// A(m) = |phi^-1(m)|; errors when m is not a totient.
pub fn multiplicity(m: u64) -> Result<usize> {
    let pre = inverse_phi(m)?;
    if pre.is_empty() {
        return Err(Error::NotTotient { m });
    }
    Ok(pre.multiplicity())
}

/// The preimage shape for m = 2 (mod 4), m > 2: either {p^a, 2p^a} or
/// {p^b, 2p^b, q, 2q} with p < q, b > 1, and both primes 3 (mod 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum KleeShape {
    Pair { p: u64, alpha: u32 },
    Quad { p: u64, beta: u32, q: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct KleeClassification {
    pub m: u64,
    #[serde(flatten)]
    pub shape: KleeShape,
}

impl KleeClassification {
    /// Materializes the preimage the shape describes, sorted.
    pub fn reconstruct(&self) -> Vec<u64> {
        let mut v = match self.shape {
            KleeShape::Pair { p, alpha } => {
                let x = p.pow(alpha);
                vec![x, 2 * x]
            }
            KleeShape::Quad { p, beta, q } => {
                let x = p.pow(beta);
                vec![x, 2 * x, q, 2 * q]
            }
        };
        v.sort_unstable();
        v
    }
}

/// Classifies phi^-1(m) for m = 2 (mod 4), m > 2. m = 2 is rejected:
/// A(2) = 3 breaks the {0, 2, 4} trichotomy.
pub fn klee_classify(m: u64) -> Result<KleeClassification> {
    if m % 4 != 2 {
        return Err(Error::Residue(format!("klee_classify requires m = 2 (mod 4), got {m}")));
    }
    if m == 2 {
        return Err(Error::Domain("klee_classify excludes m = 2 (A(2) = 3)".into()));
    }
    let pre = inverse_phi(m)?;
    if pre.is_empty() {
        return Err(Error::NotTotient { m });
    }
    let odd: Vec<u64> = pre.solutions().iter().copied().filter(|x| x % 2 == 1).collect();
    let fail = |detail: String| Error::ClassificationFailed { m, detail };

    let shape = match pre.multiplicity() {
        2 => {
            let &[x] = odd.as_slice() else {
                return Err(fail(format!("expected one odd solution, got {odd:?}")));
            };
            let f = factorize(x)?;
            let &[(p, alpha)] = f.factors() else {
                return Err(fail(format!("{x} is not a prime power")));
            };
            if p % 4 != 3 {
                return Err(fail(format!("prime {p} is not 3 (mod 4)")));
            }
            KleeShape::Pair { p, alpha }
        }
        4 => {
            let &[a, b] = odd.as_slice() else {
                return Err(fail(format!("expected two odd solutions, got {odd:?}")));
            };
            // One odd solution is the prime q, the other the power p^beta
            // with beta > 1 and p < q.
            let fa = factorize(a)?;
            let fb = factorize(b)?;
            let (q, (p, beta)) = match (fa.factors(), fb.factors()) {
                (&[(q, 1)], &[(p, e)]) if e > 1 => (q, (p, e)),
                (&[(p, e)], &[(q, 1)]) if e > 1 => (q, (p, e)),
                _ => return Err(fail(format!("odd solutions {a}, {b} do not split into prime and proper power"))),
            };
            if p % 4 != 3 || q % 4 != 3 {
                return Err(fail(format!("primes {p}, {q} are not both 3 (mod 4)")));
            }
            if p >= q {
                return Err(fail(format!("expected p < q, got p = {p}, q = {q}")));
            }
            KleeShape::Quad { p, beta, q }
        }
        k => return Err(fail(format!("A({m}) = {k}, expected 2 or 4"))),
    };

    let classification = KleeClassification { m, shape };
    if classification.reconstruct() != pre.solutions() {
        return Err(fail("shape does not reproduce the preimage".into()));
    }
    Ok(classification)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    TwoMod4,
    FourMod8,
}

/// Verdicts for the extreme-value bounds on N2/N3 when m is 2 (mod 4) or
/// 4 (mod 8): the headline bounds m < N3 < 2m and 2m < N2 < 4m, plus the
/// tighter per-case bounds N3 <= 3m/2 and N2 <= 3m available for 2 (mod 4).
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub m: u64,
    pub n3: u64,
    pub n2: u64,
    pub case: BoundCase,
    pub theorem_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tighter_pass: Option<bool>,
}

pub fn check_extreme_bounds(m: u64) -> Result<BoundReport> {
    let case = if m % 4 == 2 {
        BoundCase::TwoMod4
    } else if m % 8 == 4 {
        BoundCase::FourMod8
    } else {
        return Err(Error::Residue(format!(
            "bound check requires m = 2 (mod 4) or m = 4 (mod 8), got {m}"
        )));
    };
    let pre = inverse_phi(m)?;
    let (Some(n3), Some(n2)) = (pre.n3(), pre.n2()) else {
        return Err(Error::NotTotient { m });
    };
    let (m_w, n2_w, n3_w) = (m as u128, n2 as u128, n3 as u128);
    let theorem_pass = m_w < n3_w && n3_w < 2 * m_w && 2 * m_w < n2_w && n2_w < 4 * m_w;
    let tighter_pass = match case {
        BoundCase::TwoMod4 => Some(2 * n3_w <= 3 * m_w && n2_w <= 3 * m_w),
        BoundCase::FourMod8 => None,
    };
    Ok(BoundReport { m, n3, n2, case, theorem_pass, tighter_pass })
}

/// N2(m)/N3(m) in lowest terms.
pub fn ratio_n2_n3(m: u64) -> Result<Rational> {
    let pre = inverse_phi(m)?;
    let (Some(n3), Some(n2)) = (pre.n3(), pre.n2()) else {
        return Err(Error::NotTotient { m });
    };
    Ok(Rational::new(n2, n3))
}

/// Certified form of an odd solution u of phi(u) = 4m, m odd:
/// u = (2z1+1)(2z2+1)/(z1 z2) * m with two prime factors, or
/// u = (4z3+1)/z3 * m with one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum OddSolutionForm {
    TwoPrimes { z1: u64, z2: u64 },
    OnePrime { z3: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct OddPreimageEntry {
    pub u: u64,
    #[serde(flatten)]
    pub form: OddSolutionForm,
    /// 4m < u <= 7m
    pub in_range: bool,
}

/// Enumerates every odd u with phi(u) = 4m for odd m, certifying each
/// against its structural form and the window (4m, 7m].
pub fn odd_preimages_of_4m(m: u64) -> Result<Vec<OddPreimageEntry>> {
    if m.is_multiple_of(2) {
        return Err(Error::Domain(format!("odd_preimages_of_4m requires odd m, got {m}")));
    }
    let target = m
        .checked_mul(4)
        .ok_or_else(|| Error::Overflow(format!("4 * {m} exceeds u64")))?;
    let pre = inverse_phi(target)?;
    let mut out = Vec::new();
    for &u in pre.solutions().iter().filter(|&&u| u % 2 == 1) {
        let f = factorize(u)?;
        let form = match *f.factors() {
            [(q, _)] => {
                if q % 8 != 5 {
                    return Err(Error::ClassificationFailed {
                        m,
                        detail: format!("single prime {q} of {u} is not 5 (mod 8)"),
                    });
                }
                let z3 = (q - 1) / 4;
                let consistent = m.is_multiple_of(z3)
                    && (u as u128) * (z3 as u128) == (4 * z3 as u128 + 1) * m as u128;
                if !consistent {
                    return Err(Error::ClassificationFailed {
                        m,
                        detail: format!("u = {u} fails the (4z3+1)/z3 form with z3 = {z3}"),
                    });
                }
                OddSolutionForm::OnePrime { z3 }
            }
            [(q1, _), (q2, _)] => {
                if q1 % 4 != 3 || q2 % 4 != 3 {
                    return Err(Error::ClassificationFailed {
                        m,
                        detail: format!("primes {q1}, {q2} of {u} are not both 3 (mod 4)"),
                    });
                }
                let (z1, z2) = ((q1 - 1) / 2, (q2 - 1) / 2);
                let consistent = z1 != z2
                    && m.is_multiple_of(z1 * z2)
                    && (u as u128) * (z1 as u128) * (z2 as u128)
                        == (2 * z1 as u128 + 1) * (2 * z2 as u128 + 1) * m as u128;
                if !consistent {
                    return Err(Error::ClassificationFailed {
                        m,
                        detail: format!("u = {u} fails the two-prime form with z1 = {z1}, z2 = {z2}"),
                    });
                }
                OddSolutionForm::TwoPrimes { z1, z2 }
            }
            _ => {
                return Err(Error::ClassificationFailed {
                    m,
                    detail: format!("odd solution {u} has more than two prime factors"),
                })
            }
        };
        let in_range = (u as u128) > 4 * m as u128 && (u as u128) <= 7 * m as u128;
        out.push(OddPreimageEntry { u, form, in_range });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sols(m: u64) -> Vec<u64> {
        inverse_phi(m).unwrap().solutions().to_vec()
    }

    #[test]
    fn inverse_phi_examples() {
        assert_eq!(sols(1), vec![1, 2]);
        assert_eq!(sols(3), Vec::<u64>::new());
        assert_eq!(sols(4), vec![5, 8, 10, 12]);
        assert_eq!(sols(6), vec![7, 9, 14, 18]);
        assert!(inverse_phi(0).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(inverse_phi_oracle(1).unwrap().solutions(), &[1, 2]);
        assert_eq!(inverse_phi_oracle(10).unwrap().solutions(), &[11, 22]);
        assert!(inverse_phi_oracle(14).unwrap().is_empty());
    }

    #[test]
    fn oracle_budget_error() {
        match inverse_phi_oracle_with_budget(10_000, 1000) {
            Err(Error::Budget { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn structural_matches_oracle_small() {
        let sieve = PhiSieve::build(2 * 300 * 300).unwrap();
        for m in 1..=300u64 {
            let structural = inverse_phi(m).unwrap();
            let oracle = inverse_phi_scan(m, &sieve).unwrap();
            assert_eq!(structural, oracle, "mismatch at m = {m}");
        }
    }

    #[test]
    fn batched_oracle_matches_single() {
        let m_max = 60u64;
        let sieve = PhiSieve::build(2 * m_max * m_max).unwrap();
        let batch = preimages_up_to_oracle(m_max, &sieve).unwrap();
        assert_eq!(batch.len(), m_max as usize);
        for pre in &batch {
            assert_eq!(pre, &inverse_phi_scan(pre.m(), &sieve).unwrap());
        }
    }

    #[test]
    fn extreme_examples() {
        assert_eq!(n2(4).unwrap(), 12);
        assert_eq!(n3(4).unwrap(), 5);
        for p in [5u64, 11, 23] {
            assert_eq!(n3(p - 1).unwrap(), p);
        }
        assert_eq!(multiplicity(2).unwrap(), 3);
        assert!(matches!(n2(14), Err(Error::NotTotient { m: 14 })));
        assert!(matches!(multiplicity(3), Err(Error::NotTotient { m: 3 })));
    }

    #[test]
    fn preimage_parity_structure() {
        // For m > 1 a nonempty preimage has even maximum, odd minimum pairing.
        for m in 2..=500u64 {
            let pre = inverse_phi(m).unwrap();
            if pre.is_empty() {
                continue;
            }
            assert_eq!(pre.n2().unwrap() % 2, 0, "N2({m}) must be even");
            assert!(pre.n3().unwrap() > m, "N3({m}) > m");
            for &x in pre.solutions() {
                if x % 2 == 1 {
                    assert!(pre.solutions().contains(&(2 * x)), "{x} in phi^-1({m}) but 2*{x} missing");
                }
            }
        }
    }

    #[test]
    fn klee_examples() {
        let c = klee_classify(6).unwrap();
        assert_eq!(c.shape, KleeShape::Quad { p: 3, beta: 2, q: 7 });
        let c = klee_classify(10).unwrap();
        assert_eq!(c.shape, KleeShape::Pair { p: 11, alpha: 1 });
        let c = klee_classify(54).unwrap();
        assert_eq!(c.shape, KleeShape::Pair { p: 3, alpha: 4 });
        assert!(matches!(klee_classify(2), Err(Error::Domain(_))));
        assert!(matches!(klee_classify(8), Err(Error::Residue(_))));
        assert!(matches!(klee_classify(14), Err(Error::NotTotient { m: 14 })));
    }

    #[test]
    fn bound_report_examples() {
        let r = check_extreme_bounds(6).unwrap();
        assert_eq!((r.n3, r.n2), (7, 18));
        assert!(r.theorem_pass && r.tighter_pass.unwrap());

        let r = check_extreme_bounds(4).unwrap();
        assert_eq!((r.n3, r.n2), (5, 12));
        assert_eq!(r.case, BoundCase::FourMod8);
        assert!(r.theorem_pass && r.tighter_pass.is_none());

        let r = check_extreme_bounds(54).unwrap();
        assert_eq!((r.n3, r.n2), (81, 162));
        assert!(r.theorem_pass);

        assert!(matches!(check_extreme_bounds(8), Err(Error::Residue(_))));
        assert!(matches!(check_extreme_bounds(16), Err(Error::Residue(_))));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio_n2_n3(54).unwrap(), Rational::new(2, 1));
        assert_eq!(ratio_n2_n3(6).unwrap(), Rational::new(18, 7));
        assert_eq!(ratio_n2_n3(1).unwrap(), Rational::new(2, 1));
    }

    #[test]
    fn odd_4m_examples() {
        let entries = odd_preimages_of_4m(1).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].u, 5);
        assert_eq!(entries[0].form, OddSolutionForm::OnePrime { z3: 1 });
        assert!(entries[0].in_range);

        // phi^-1(12) has odd members 13 and 21; both must certify.
        let entries = odd_preimages_of_4m(3).unwrap();
        let us: Vec<u64> = entries.iter().map(|e| e.u).collect();
        assert_eq!(us, vec![13, 21]);
        assert_eq!(entries[0].form, OddSolutionForm::OnePrime { z3: 3 });
        assert_eq!(entries[1].form, OddSolutionForm::TwoPrimes { z1: 1, z2: 3 });
        assert!(entries.iter().all(|e| e.in_range));

        let entries = odd_preimages_of_4m(7).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].u, 29);
        assert_eq!(entries[0].form, OddSolutionForm::OnePrime { z3: 7 });
        assert!(entries[0].in_range);

        assert!(odd_preimages_of_4m(4).is_err());
    }

    #[test]
    fn serialization_matches_contract() {
        let pre = inverse_phi(4).unwrap();
        assert_eq!(
            serde_json::to_string(&pre).unwrap(),
            r#"{"m":4,"solutions":[5,8,10,12],"n2":12,"n3":5}"#
        );
        let empty = inverse_phi(3).unwrap();
        assert_eq!(serde_json::to_string(&empty).unwrap(), r#"{"m":3,"solutions":[]}"#);
    }

    proptest! {
        // An odd x > 1 lies in phi^-1(m) iff 2x does.
        #[test]
        fn odd_doubling_pairing(x in (1u64..20_000).prop_map(|v| 2 * v + 1)) {
            let m = crate::arith::euler_phi(x).unwrap();
            let pre = inverse_phi(m).unwrap();
            prop_assert!(pre.solutions().contains(&x));
            prop_assert!(pre.solutions().contains(&(2 * x)));
        }

        // Every structural solution actually satisfies phi(x) = m.
        #[test]
        fn structural_solutions_verify(m in 1u64..5000) {
            for &x in inverse_phi(m).unwrap().solutions() {
                prop_assert_eq!(crate::arith::euler_phi(x).unwrap(), m);
            }
        }
    }
}
