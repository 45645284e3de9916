//! Interval-window density machinery: exact window densities, asymptotic
//! density profiles, a sliding-window lower-bound estimator for Banach
//! density, totient counting V(x), and the block-map / linear-corridor
//! experiments.
//!
//! Banach density itself is a supremum over all Folner sequences and is not
//! finitely computable; interval windows suffice in principle, and the
//! estimator here reports a lower bound for it, never the value.

use crate::error::{Error, Result};
use crate::inverse_totient::inverse_phi;
use crate::sparsely_totient::{n1_set_up_to, safe_horizon, HorizonPolicy, PhiSieve};
use crate::Rational;
use serde::Serialize;

/// The integer interval (start, start + length].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FolnerWindow {
    pub start: u64,
    pub length: u64,
}

/// A set of positive integers materialized as membership over [1, limit],
/// with prefix counts for O(1) interval queries.
#[derive(Debug, Clone)]
pub struct SetBitmap {
    id: String,
    limit: u64,
    prefix: Vec<u64>, // prefix[n] = |A intersect [1, n]|
}

impl SetBitmap {
    pub fn from_predicate(id: impl Into<String>, limit: u64, pred: impl Fn(u64) -> bool) -> Self {
        let mut prefix = Vec::with_capacity(limit as usize + 1);
        prefix.push(0);
        for n in 1..=limit {
            prefix.push(prefix[n as usize - 1] + u64::from(pred(n)));
        }
        SetBitmap { id: id.into(), limit, prefix }
    }

    pub fn from_sorted_members(id: impl Into<String>, limit: u64, members: &[u64]) -> Self {
        let mut prefix = vec![0u64; limit as usize + 1];
        for &x in members.iter().take_while(|&&x| x <= limit) {
            prefix[x as usize] = 1;
        }
        for n in 1..=limit as usize {
            prefix[n] += prefix[n - 1];
        }
        SetBitmap { id: id.into(), limit, prefix }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n <= self.limit && self.prefix[n as usize] > self.prefix[n as usize - 1]
    }

    /// |A intersect [1, n]|.
    pub fn count_up_to(&self, n: u64) -> u64 {
        self.prefix[n.min(self.limit) as usize]
    }

    /// |A intersect (start, start + length]|.
    pub fn count_in(&self, w: FolnerWindow) -> u64 {
        self.count_up_to(w.start + w.length) - self.count_up_to(w.start)
    }

    pub fn evens(limit: u64) -> Self {
        Self::from_predicate("evens", limit, |n| n % 2 == 0)
    }

    pub fn naturals(limit: u64) -> Self {
        Self::from_predicate("naturals", limit, |_| true)
    }

    pub fn empty(limit: u64) -> Self {
        Self::from_predicate("empty", limit, |_| false)
    }

    pub fn primes(limit: u64) -> Result<Self> {
        let members = crate::arith::primes_up_to(limit.max(1))?;
        Ok(Self::from_sorted_members("primes", limit, &members))
    }

    /// The union of [10^n, 10^n + n]: asymptotic density zero yet Banach
    /// density one.
    pub fn decade_runs(limit: u64) -> Self {
        Self::from_predicate("decade_runs", limit, |x| {
            let mut p = 10u64;
            let mut n = 1u64;
            while p <= x {
                if x <= p + n {
                    return true;
                }
                match p.checked_mul(10) {
                    Some(next) => {
                        p = next;
                        n += 1;
                    }
                    None => return false,
                }
            }
            false
        })
    }

    /// V intersect [1, limit], marked from a phi sieve reaching
    /// safe_horizon(limit): every preimage of every m <= limit lies within
    /// the horizon, so the image marking is complete.
    pub fn totients(limit: u64, policy: HorizonPolicy) -> Result<Self> {
        let horizon = safe_horizon(limit, policy)?;
        let sieve = PhiSieve::build(horizon)?;
        let mut seen = vec![false; limit as usize + 1];
        for x in 1..=horizon {
            let v = sieve.phi(x);
            if v <= limit {
                seen[v as usize] = true;
            }
        }
        Ok(Self::from_predicate("v", limit, |n| seen[n as usize]))
    }

    /// The sparsely totient numbers up to limit.
    pub fn n1(limit: u64, policy: HorizonPolicy) -> Result<Self> {
        let members: Vec<u64> = n1_set_up_to(limit, policy)?.iter().map(|r| r.n).collect();
        Ok(Self::from_sorted_members("n1", limit, &members))
    }

    /// {N2(m) : m in V} intersect [1, limit]. N2(m) > m, so scanning
    /// totients m < limit is exhaustive.
    pub fn n2(limit: u64) -> Result<Self> {
        let mut members = Vec::new();
        for m in 1..limit {
            if let Some(n2) = inverse_phi(m)?.n2() {
                if n2 <= limit {
                    members.push(n2);
                }
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted_members("n2", limit, &members))
    }

    /// {N3(m) : m in V} intersect [1, limit].
    pub fn n3(limit: u64) -> Result<Self> {
        let mut members = Vec::new();
        for m in 1..limit {
            if let Some(n3) = inverse_phi(m)?.n3() {
                if n3 <= limit {
                    members.push(n3);
                }
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted_members("n3", limit, &members))
    }
}

fn check_window(set: &SetBitmap, end: u64, what: &str) -> Result<()> {
    if end > set.limit() {
        return Err(Error::Budget {
            what: format!("{what} over '{}'", set.id()),
            requested: end,
            limit: set.limit(),
        });
    }
    Ok(())
}

/// Exact |A intersect (start, start+length]| / length.
pub fn window_density(set: &SetBitmap, w: FolnerWindow) -> Result<Rational> {
    if w.length == 0 {
        return Err(Error::Domain("window length must be >= 1".into()));
    }
    check_window(set, w.start + w.length, "window density")?;
    Ok(Rational::new(set.count_in(w), w.length))
}

/// Exact |A intersect [1, n]| / n at each checkpoint.
pub fn asymptotic_density_profile(set: &SetBitmap, checkpoints: &[u64]) -> Result<Vec<(u64, Rational)>> {
    checkpoints
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::Domain("checkpoint must be >= 1".into()));
            }
            check_window(set, n, "asymptotic density")?;
            Ok((n, Rational::new(set.count_up_to(n), n)))
        })
        .collect()
}

/// The maximum window density over every window of the given length inside
/// [1, range_end]. This is a LOWER bound for the Banach density d*(A),
/// not d*(A) itself. Ties resolve to the earliest window.
pub fn banach_lower_bound(
    set: &SetBitmap,
    range_end: u64,
    window_length: u64,
) -> Result<(FolnerWindow, Rational)> {
    if window_length == 0 || window_length > range_end {
        return Err(Error::Domain(format!(
            "window length {window_length} must lie in [1, {range_end}]"
        )));
    }
    check_window(set, range_end, "sliding window scan")?;
    let mut best_start = 0u64;
    let mut best_count = set.count_in(FolnerWindow { start: 0, length: window_length });
    for start in 1..=(range_end - window_length) {
        let count = set.count_in(FolnerWindow { start, length: window_length });
        if count > best_count {
            best_count = count;
            best_start = start;
        }
    }
    let window = FolnerWindow { start: best_start, length: window_length };
    Ok((window, Rational::new(best_count, window_length)))
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowRow {
    pub window: FolnerWindow,
    pub count: u64,
    pub density: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensitySummary {
    /// Best sliding window of the given length: a lower bound for d*.
    pub max_window: WindowRow,
    pub min_tile_density: Rational,
    pub asymptotic: Vec<(u64, Rational)>,
}

/// Tiled window rows over [0, range_end] plus summary statistics.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub set_id: String,
    pub windows: Vec<WindowRow>,
    pub summary: DensitySummary,
}

pub fn density_report(set: &SetBitmap, range_end: u64, window_length: u64) -> Result<DensityReport> {
    if window_length == 0 || range_end < window_length {
        return Err(Error::Domain(format!(
            "window length {window_length} must lie in [1, {range_end}]"
        )));
    }
    check_window(set, range_end, "density report")?;
    let mut windows = Vec::new();
    let mut start = 0u64;
    while start + window_length <= range_end {
        let window = FolnerWindow { start, length: window_length };
        let count = set.count_in(window);
        windows.push(WindowRow { window, count, density: Rational::new(count, window_length) });
        start += window_length;
    }
    let (best_window, best_density) = banach_lower_bound(set, range_end, window_length)?;
    let min_tile_density = windows.iter().map(|w| w.density).min().unwrap();
    let mut checkpoints = vec![range_end / 100, range_end / 10, range_end];
    checkpoints.retain(|&c| c >= 1);
    checkpoints.dedup();
    let asymptotic = asymptotic_density_profile(set, &checkpoints)?;
    Ok(DensityReport {
        set_id: set.id().to_string(),
        windows,
        summary: DensitySummary {
            max_window: WindowRow {
                window: best_window,
                count: set.count_in(best_window),
                density: best_density,
            },
            min_tile_density,
            asymptotic,
        },
    })
}

/// V(x): the number of totients <= x, by marking phi values over a sieve
/// reaching safe_horizon(x).
pub fn totient_count(x: u64, policy: HorizonPolicy) -> Result<u64> {
    if x < 1 {
        return Err(Error::Domain("totient_count requires x >= 1".into()));
    }
    let horizon = safe_horizon(x, policy)?;
    let sieve = PhiSieve::build(horizon)?;
    let mut seen = vec![false; x as usize + 1];
    let mut count = 0u64;
    for n in 1..=horizon {
        let v = sieve.phi(n);
        if v <= x && !seen[v as usize] {
            seen[v as usize] = true;
            count += 1;
        }
    }
    Ok(count)
}

/// One checkpoint of the totient-count growth diagnostic. `c_implied` is
/// the exponent C solving V(x) = (x/log x) exp(C (log log log x)^2); the
/// o(1) terms dominate at desk scale, so this is reported, never gated.
#[derive(Debug, Clone, Serialize)]
pub struct FordRow {
    pub x: u64,
    pub v_count: u64,
    pub x_over_log_x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_implied: Option<f64>,
}

pub fn ford_diagnostic(checkpoints: &[u64], policy: HorizonPolicy) -> Result<Vec<FordRow>> {
    checkpoints
        .iter()
        .map(|&x| {
            let v_count = totient_count(x, policy)?;
            let xf = x as f64;
            let x_over_log_x = xf / xf.ln();
            let c_implied = (x > 15).then(|| {
                let lll = xf.ln().ln().ln();
                (v_count as f64 * xf.ln() / xf).ln() / (lll * lll)
            });
            Ok(FordRow { x, v_count, x_over_log_x, c_implied })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockMapBlock {
    pub n: u32,
    pub start_x: u64,
    pub length: u64,
    pub first_value: u64,
    pub difference: u64,
    pub is_ap: bool,
}

/// Materialization report for the block-alternating power map: injectivity,
/// non-monotonicity of f(x)/x, and the arithmetic-progression image blocks
/// f([k^{2n}, k^{2n+1})) with common difference l-1.
#[derive(Debug, Clone, Serialize)]
pub struct BlockMapReport {
    pub k: u64,
    pub l: u32,
    pub horizon: u64,
    pub injective_increasing: bool,
    pub ratio_has_increase: bool,
    pub ratio_has_decrease: bool,
    pub blocks: Vec<BlockMapBlock>,
}

impl BlockMapReport {
    pub fn ratio_monotone(&self) -> bool {
        !(self.ratio_has_increase && self.ratio_has_decrease)
    }
}

fn block_map_value(k: u64, l: u32, x: u64) -> Result<u64> {
    // Block index b with k^b <= x < k^(b+1).
    let mut b = 0u32;
    let mut kb = 1u64;
    while kb.saturating_mul(k) <= x {
        kb = kb.saturating_mul(k);
        b += 1;
    }
    let overflow = || Error::Overflow(format!("f_({k},{l})({x}) exceeds u64"));
    if b.is_multiple_of(2) {
        // k^(bl) + (l-1)x
        let lead = kb.checked_pow(l).ok_or_else(overflow)?;
        lead.checked_add((l as u64 - 1).checked_mul(x).ok_or_else(overflow)?)
            .ok_or_else(overflow)
    } else {
        x.checked_pow(l).ok_or_else(overflow)
    }
}

pub fn block_map_experiment(k: u64, l: u32, horizon: u64) -> Result<BlockMapReport> {
    if k < 2 || l < 2 {
        return Err(Error::Domain("block map requires k >= 2 and l >= 2".into()));
    }
    if horizon < 1 {
        return Err(Error::Domain("horizon must be >= 1".into()));
    }
    let values: Vec<u64> = (1..=horizon).map(|x| block_map_value(k, l, x)).collect::<Result<_>>()?;
    let injective_increasing = values.windows(2).all(|w| w[0] < w[1]);
    // f(x)/x comparisons by cross multiplication, exact.
    let mut ratio_has_increase = false;
    let mut ratio_has_decrease = false;
    for x in 1..values.len() {
        let prev = values[x - 1] as u128 * (x as u128 + 1);
        let next = values[x] as u128 * x as u128;
        if next > prev {
            ratio_has_increase = true;
        }
        if next < prev {
            ratio_has_decrease = true;
        }
    }
    let mut blocks = Vec::new();
    for n in 0.. {
        let bounds = k.checked_pow(2 * n).zip(k.checked_pow(2 * n + 1));
        let Some((start, end)) = bounds.filter(|&(_, end)| end - 1 <= horizon) else {
            break;
        };
        let block: &[u64] = &values[start as usize - 1..end as usize - 1];
        let is_ap = block.windows(2).all(|w| w[1] - w[0] == l as u64 - 1);
        blocks.push(BlockMapBlock {
            n,
            start_x: start,
            length: end - start,
            first_value: block[0],
            difference: l as u64 - 1,
            is_ap,
        });
    }
    Ok(BlockMapReport {
        k,
        l,
        horizon,
        injective_increasing,
        ratio_has_increase,
        ratio_has_decrease,
        blocks,
    })
}

/// Linear-corridor image experiment: for injective increasing f with
/// c1 n <= f(n) <= c2 n, the image keeps a window density of at least
/// 1/(c1 (r-1)^2) where r is the least integer >= 2 with c2 < (r-1) c1.
#[derive(Debug, Clone, Serialize)]
pub struct LinearImageReport {
    pub c1: Rational,
    pub c2: Rational,
    pub r: u64,
    pub threshold: Rational,
    pub best_window: FolnerWindow,
    pub observed: Rational,
    pub pass: bool,
}

pub fn linear_image_density(
    f: impl Fn(u64) -> u64,
    n_max: u64,
    c1: Rational,
    c2: Rational,
    window_length: u64,
) -> Result<LinearImageReport> {
    if n_max < 2 {
        return Err(Error::Domain("linear_image_density requires n_max >= 2".into()));
    }
    if c1.numer() == &0 || c1 > c2 {
        return Err(Error::Domain("need 0 < c1 <= c2".into()));
    }
    let mut values = Vec::with_capacity(n_max as usize);
    let mut prev = 0u64;
    for n in 1..=n_max {
        let v = f(n);
        if v <= prev {
            return Err(Error::Hypothesis(format!("f is not increasing at n = {n}")));
        }
        // c1 * n <= v <= c2 * n, cross multiplied.
        if (c1.numer() * n) as u128 > (v as u128) * (*c1.denom() as u128)
            || (v as u128) * (*c2.denom() as u128) > (*c2.numer() as u128) * (n as u128)
        {
            return Err(Error::Hypothesis(format!(
                "f({n}) = {v} leaves the corridor [{c1} n, {c2} n]"
            )));
        }
        prev = v;
        values.push(v);
    }
    // Least s = r - 1 >= 1 with c2 < s * c1.
    let s = (c2 / c1).to_integer() + 1;
    let threshold = Rational::new(*c1.denom(), c1.numer() * s * s);
    let limit = *values.last().unwrap();
    let image = SetBitmap::from_sorted_members("image", limit, &values);
    let (best_window, observed) = banach_lower_bound(&image, limit, window_length)?;
    Ok(LinearImageReport {
        c1,
        c2,
        r: s + 1,
        threshold,
        best_window,
        observed,
        pass: observed >= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    #[test]
    fn window_density_examples() {
        let evens = SetBitmap::evens(1000);
        assert_eq!(
            window_density(&evens, FolnerWindow { start: 13, length: 100 }).unwrap(),
            Rational::new(1, 2)
        );
        let primes = SetBitmap::primes(1000).unwrap();
        assert_eq!(
            window_density(&primes, FolnerWindow { start: 0, length: 100 }).unwrap(),
            Rational::new(25, 100)
        );
        assert!(window_density(&evens, FolnerWindow { start: 990, length: 100 }).is_err());
    }

    #[test]
    fn window_density_matches_direct_loop() {
        let sets = [SetBitmap::primes(2000).unwrap(), SetBitmap::evens(2000), SetBitmap::decade_runs(2000)];
        let mut rng = StdRng::seed_from_u64(0xd0);
        for set in &sets {
            for _ in 0..100 {
                let length = rng.gen_range(1..=200u64);
                let start = rng.gen_range(0..=2000 - length);
                let w = FolnerWindow { start, length };
                let direct = (start + 1..=start + length).filter(|&n| set.contains(n)).count() as u64;
                assert_eq!(window_density(set, w).unwrap(), Rational::new(direct, length));
            }
        }
    }

    #[test]
    fn asymptotic_examples() {
        let v = SetBitmap::totients(10, HorizonPolicy::Conservative).unwrap();
        assert_eq!(
            asymptotic_density_profile(&v, &[10]).unwrap(),
            vec![(10, Rational::new(6, 10))]
        );
        let all = SetBitmap::naturals(100);
        assert_eq!(asymptotic_density_profile(&all, &[7, 100]).unwrap()[1].1, Rational::new(1, 1));
        let none = SetBitmap::empty(100);
        assert_eq!(asymptotic_density_profile(&none, &[100]).unwrap()[0].1, Rational::new(0, 1));
    }

    #[test]
    fn banach_examples() {
        let evens = SetBitmap::evens(10_000);
        let (_, d) = banach_lower_bound(&evens, 10_000, 100).unwrap();
        assert_eq!(d, Rational::new(1, 2));

        // The decade-runs set achieves window density 1: (999, 1003] is all members.
        let runs = SetBitmap::decade_runs(10_000);
        let (w, d) = banach_lower_bound(&runs, 10_000, 4).unwrap();
        assert_eq!(d, Rational::new(1, 1));
        assert!(runs.contains(w.start + 1) && runs.contains(w.start + w.length));
    }

    #[test]
    fn banach_monotone_in_range_end() {
        let primes = SetBitmap::primes(5000).unwrap();
        let mut last = Rational::new(0, 1);
        for range_end in [500u64, 1000, 2000, 5000] {
            let (_, d) = banach_lower_bound(&primes, range_end, 100).unwrap();
            assert!(d >= last);
            last = d;
        }
    }

    #[test]
    fn totient_count_examples() {
        assert_eq!(totient_count(10, HorizonPolicy::Conservative).unwrap(), 6);
        assert_eq!(totient_count(1, HorizonPolicy::Conservative).unwrap(), 1);
        let by_marking = totient_count(100, HorizonPolicy::Conservative).unwrap();
        let structural = (1..=100u64)
            .filter(|&m| crate::inverse_totient::is_totient(m).unwrap())
            .count() as u64;
        assert_eq!(by_marking, structural);
    }

    #[test]
    fn totient_count_policies_agree() {
        for x in [10u64, 50, 200, 500] {
            assert_eq!(
                totient_count(x, HorizonPolicy::Conservative).unwrap(),
                totient_count(x, HorizonPolicy::RosserSchoenfeld).unwrap(),
            );
        }
    }

    #[test]
    fn ford_rows() {
        let rows = ford_diagnostic(&[10, 1000], HorizonPolicy::RosserSchoenfeld).unwrap();
        assert_eq!(rows[0].v_count, 6);
        assert!(rows[0].c_implied.is_none());
        assert!(rows[1].c_implied.is_some());
    }

    #[test]
    fn block_map_examples() {
        let rep = block_map_experiment(2, 2, 64).unwrap();
        assert!(rep.injective_increasing);
        assert!(!rep.ratio_monotone());
        let block1 = rep.blocks.iter().find(|b| b.n == 1).unwrap();
        assert_eq!(block1.start_x, 4);
        assert_eq!(block1.length, 4);
        assert_eq!(block1.first_value, 20);
        assert_eq!(block1.difference, 1);
        assert!(block1.is_ap);

        let rep = block_map_experiment(3, 2, 30).unwrap();
        let block1 = rep.blocks.iter().find(|b| b.n == 1).unwrap();
        assert_eq!(block1.length, 18);
        assert!(block1.is_ap);

        assert!(block_map_experiment(1, 2, 10).is_err());
    }

    #[test]
    fn block_map_values_follow_definition() {
        // k = 2, l = 2: x in [4, 8) maps to 16 + x; x in [2, 4) maps to x^2.
        for (x, want) in [(1u64, 2u64), (2, 4), (3, 9), (4, 20), (7, 23), (8, 64), (15, 225), (16, 272)] {
            assert_eq!(super::block_map_value(2, 2, x).unwrap(), want, "f(2,2)({x})");
        }
    }

    #[test]
    fn linear_image_examples() {
        let rep = linear_image_density(|n| 2 * n, 2000, Rational::new(2, 1), Rational::new(2, 1), 100).unwrap();
        assert_eq!(rep.observed, Rational::new(1, 2));
        assert_eq!(rep.r, 3);
        assert_eq!(rep.threshold, Rational::new(1, 8));
        assert!(rep.pass);

        let rep = linear_image_density(|n| 2 * n + 3, 2000, Rational::new(2, 1), Rational::new(5, 1), 100).unwrap();
        assert!(rep.observed > Rational::new(0, 1));
        assert!(rep.pass);

        match linear_image_density(|n| n * n, 100, Rational::new(1, 1), Rational::new(2, 1), 10) {
            Err(Error::Hypothesis(_)) => {}
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn density_report_shape() {
        let primes = SetBitmap::primes(1000).unwrap();
        let rep = density_report(&primes, 1000, 100).unwrap();
        assert_eq!(rep.windows.len(), 10);
        // Direct sliding maximum: (1, 101] picks up the prime 101 and loses
        // nothing, beating the initial tile.
        let direct_max = (0..=900u64)
            .map(|s| (s + 1..=s + 100).filter(|&n| primes.contains(n)).count() as u64)
            .max()
            .unwrap();
        assert_eq!(rep.summary.max_window.count, direct_max);
        assert_eq!(rep.summary.max_window.window.start, 1);
        assert!(rep.summary.min_tile_density <= rep.summary.max_window.density);
    }
}
