//! Verification campaigns: speed normalization, adversarial speed
//! enumeration, robustness measurement, and the exhaustive sweeps that
//! check the bricks, sand and pebbles guarantees on finite grids.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bricks::{bricks_alt_counts, robust_bags, Branch, BrickSizer};
use crate::error::{Error, Result};
use crate::model::{makespan, BagProfile, Instance, SpeedProfile};
use crate::numerics::Rational;
use crate::pebbles::{pebble_q, pebbles_bags};
use crate::sand::{adversary_configs, rho_bar, sand_bags, sand_reference, SandSequence};
use crate::second_stage::{greedy_assignment, greedy_trace, integral_assignment, optimal_direct, optimal_direct_with_witness, optimal_second_stage};

/// One counterexample found by a campaign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub instance: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speeds: Option<Vec<Rational>>,
    pub reason: String,
}

impl Failure {
    fn new(instance: &[(&str, String)], speeds: Option<Vec<Rational>>, reason: impl Into<String>) -> Self {
        Failure {
            instance: instance.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            speeds,
            reason: reason.into(),
        }
    }
}

/// Result of a campaign. `failures` is empty exactly when the checked
/// claim held on every grid point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub grid: BTreeMap<String, String>,
    pub checked: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    fn new(grid: &[(&str, String)]) -> Self {
        VerificationReport {
            grid: grid.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            checked: 0,
            failures: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Folds another report's counts and failures into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.elapsed_ms += other.elapsed_ms;
    }

    /// The report with timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport { elapsed_ms: 0, ..self.clone() }
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

// ---------------------------------------------------------------------------
// Speed profiles
// ---------------------------------------------------------------------------

/// Non-increasing vectors of `m` non-negative integers summing to `n`
/// (partitions of `n` into at most `m` parts), in reverse lexicographic
/// order.
#[derive(Clone, Debug)]
pub struct IntegralPartitions {
    parts: Vec<u64>,
    total: u64,
    fresh: bool,
}

impl IntegralPartitions {
    pub fn new(total: u64, slots: usize) -> Self {
        assert!(slots >= 1, "need at least one slot");
        let mut parts = vec![0; slots];
        parts[0] = total;
        IntegralPartitions { parts, total, fresh: true }
    }
}

impl Iterator for IntegralPartitions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.fresh {
            self.fresh = false;
            return Some(self.parts.clone());
        }
        let m = self.parts.len();
        // Rightmost slot that can shrink while the slots after it can still
        // absorb the remainder without exceeding it.
        let mut prefix: u64 = self.parts.iter().sum::<u64>() - self.parts[m - 1];
        for j in (0..m.saturating_sub(1)).rev() {
            prefix -= self.parts[j];
            let remaining = self.total - prefix;
            let slots_after = (m - j) as u64;
            if self.parts[j] > remaining.div_ceil(slots_after) {
                let cap = self.parts[j] - 1;
                self.parts[j] = cap;
                let mut left = remaining - cap;
                for slot in self.parts.iter_mut().skip(j + 1) {
                    *slot = cap.min(left);
                    left -= *slot;
                }
                debug_assert_eq!(left, 0);
                return Some(self.parts.clone());
            }
        }
        None
    }
}

/// Every integral speed profile of `m` machines with total speed `n`.
pub fn enumerate_integral_speed_profiles(n: u64, m: u64) -> impl Iterator<Item = SpeedProfile> {
    assert!(n >= 1 && m >= 1);
    IntegralPartitions::new(n, m as usize)
        .map(|p| SpeedProfile::from_integers(&p).expect("partition of a positive total"))
}

/// Number of partitions of `n` into at most `m` parts, saturating at
/// `u128::MAX`.
pub fn partition_count(n: u64, m: u64) -> u128 {
    // Parts of size at most m, counted by conjugation.
    let n = n as usize;
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in 1..=(m as usize).min(n.max(1)) {
        for total in part..=n {
            ways[total] = ways[total].saturating_add(ways[total - part]);
        }
    }
    ways[n]
}

/// Uniform sampler over partitions of `n` into at most `m` parts.
struct PartitionSampler {
    n: usize,
    m: usize,
    // counts[k][t]: partitions of t with every part at most k
    counts: Vec<Vec<f64>>,
}

impl PartitionSampler {
    fn new(n: u64, m: u64) -> Self {
        let (n, m) = (n as usize, m as usize);
        let mut counts = vec![vec![0f64; n + 1]; m + 1];
        counts[0][0] = 1.0;
        for k in 1..=m {
            for t in 0..=n {
                let mut v = counts[k - 1][t];
                if t >= k {
                    v += counts[k][t - k];
                }
                counts[k][t] = v;
            }
        }
        PartitionSampler { n, m, counts }
    }

    /// Draws parts at most `m`, then conjugates to at most `m` parts.
    fn sample(&self, rng: &mut impl Rng) -> Vec<u64> {
        let (mut rest, mut k) = (self.n, self.m);
        let mut at_least = vec![0u64; self.m + 1];
        while rest > 0 {
            let take = if k <= rest { self.counts[k][rest - k] / self.counts[k][rest] } else { 0.0 };
            if rng.random::<f64>() < take {
                // a part of size k adds one to each of the first k columns
                at_least[k] += 1;
                rest -= k;
            } else {
                k -= 1;
            }
        }
        let mut conj = vec![0u64; self.m];
        let mut running = 0;
        for k in (1..=self.m).rev() {
            running += at_least[k];
            conj[k - 1] = running;
        }
        conj
    }
}

/// Rescales speeds so the adversary's optimum is exactly 1 with every used
/// machine fully loaded: each machine's new speed is its load in an
/// optimal direct schedule. The result sums to the total job size.
pub fn normalize_speeds(jobs: &[Rational], speeds: &SpeedProfile) -> Result<SpeedProfile> {
    let (opt, witness) = optimal_direct_with_witness(jobs, speeds)?;
    if opt.is_zero() {
        return Err(Error::DivisionUndefined);
    }
    SpeedProfile::new(witness.loads(jobs, speeds.len()))
}

/// Optimal second-stage makespan over the bags divided by the adversary's
/// optimum over the jobs.
pub fn robustness_ratio(bags: &BagProfile, jobs: &[Rational], speeds: &SpeedProfile) -> Result<Rational> {
    let direct = optimal_direct(jobs, speeds)?;
    if direct.is_zero() {
        return Err(Error::DivisionUndefined);
    }
    let (second, _) = optimal_second_stage(bags, speeds)?;
    Ok(second / direct)
}

// ---------------------------------------------------------------------------
// Campaigns
// ---------------------------------------------------------------------------

/// For every `m ≤ m_max` and `1 ≤ n ≤ lambda_max · m`, checks that the
/// batched bricks run with `b = m` has total size at least `n` at `rho`.
pub fn verify_bricks_success_range(m_max: u64, lambda_max: u64, rho: &Rational) -> VerificationReport {
    verify_bricks_success_range_with_progress(m_max, lambda_max, rho, &|_, _| {})
}

/// [`verify_bricks_success_range`] reporting `(machines done, m_max)` as
/// each machine count completes. Rows run in parallel.
pub fn verify_bricks_success_range_with_progress(
    m_max: u64,
    lambda_max: u64,
    rho: &Rational,
    progress: &(dyn Fn(u64, u64) + Sync),
) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(&[
        ("m", format!("1..={m_max}")),
        ("n", format!("1..={lambda_max}*m")),
        ("b", "m".into()),
        ("rho", rho.to_string()),
    ]);
    let sizer = BrickSizer::new(rho, lambda_max + 1);
    let done = std::sync::atomic::AtomicU64::new(0);
    let rows: Vec<(u64, Vec<Failure>)> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut failures = Vec::new();
            for n in 1..=lambda_max * m {
                let counts = bricks_alt_counts(n, m, m);
                let size = sizer.total(&counts);
                if size < n {
                    let solution: Vec<String> = counts.iter().map(|(z, x)| format!("{z}:{x}")).collect();
                    failures.push(Failure::new(
                        &[("n", n.to_string()), ("m", m.to_string()), ("rho", rho.to_string())],
                        None,
                        format!("solution size {size} < n; costs {{{}}}", solution.join(", ")),
                    ));
                }
            }
            let finished = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            progress(finished, m_max);
            (lambda_max * m, failures)
        })
        .collect();
    for (checked, failures) in rows {
        report.checked += checked;
        report.failures.extend(failures);
    }
    report.elapsed_ms = elapsed_ms(start);
    report
}

/// How [`verify_bricks_robustness`] covers the speed profiles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustnessOptions {
    /// Enumerate every profile when there are at most this many.
    pub exhaustive_limit: u128,
    /// Profiles drawn uniformly otherwise.
    pub samples: u64,
    pub seed: u64,
}

impl Default for RobustnessOptions {
    fn default() -> Self {
        RobustnessOptions { exhaustive_limit: 2_000_000, samples: 20_000, seed: 0 }
    }
}

/// Builds the dispatcher's bags for `n` bricks and `b = m`, then checks the
/// matching second stage against every integral speed profile summing to
/// `n`. Unit jobs on such speeds have optimum 1, so success means makespan
/// at most the branch's `ρ` times the optimum.
pub fn verify_bricks_robustness(n: u64, m: u64) -> VerificationReport {
    verify_bricks_robustness_with(n, m, &RobustnessOptions::default())
}

pub fn verify_bricks_robustness_with(n: u64, m: u64, options: &RobustnessOptions) -> VerificationReport {
    let start = Instant::now();
    let count = partition_count(n, m);
    let exhaustive = count <= options.exhaustive_limit;
    let mut report = VerificationReport::new(&[
        ("n", n.to_string()),
        ("m", m.to_string()),
        ("b", m.to_string()),
        ("profiles", if exhaustive { format!("all {count}") } else { format!("{} sampled, seed {}", options.samples, options.seed) }),
    ]);
    let params = [("n", n.to_string()), ("m", m.to_string())];
    let bags = match robust_bags(n, m, m) {
        Ok(b) => b,
        Err(e) => {
            report.failures.push(Failure::new(&params, None, e.to_string()));
            report.elapsed_ms = elapsed_ms(start);
            return report;
        }
    };
    let sizes = bags.profile.to_integers().expect("brick bags are integral");

    let check = |speeds: Vec<u64>| -> Option<Failure> {
        let profile = SpeedProfile::from_integers(&speeds).expect("positive total");
        let outcome = match bags.branch {
            Branch::Bricks => integral_assignment(&sizes, &speeds, &bags.rho),
            Branch::Pebbles => greedy_assignment(&bags.profile, &profile, &bags.rho),
        };
        let speeds_r = || Some(profile.speeds().to_vec());
        match outcome {
            Err(f) => Some(Failure::new(&params, speeds_r(), f.to_string())),
            Ok(assignment) => {
                let ms = makespan(&assignment, &bags.profile, &profile).expect("valid assignment");
                (ms > bags.rho).then(|| Failure::new(&params, speeds_r(), format!("makespan {ms} exceeds {}", bags.rho)))
            }
        }
    };

    if exhaustive {
        for speeds in IntegralPartitions::new(n, m as usize) {
            report.checked += 1;
            report.failures.extend(check(speeds));
        }
    } else {
        let sampler = PartitionSampler::new(n, m);
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        for _ in 0..options.samples {
            report.checked += 1;
            report.failures.extend(check(sampler.sample(&mut rng)));
        }
    }
    report.elapsed_ms = elapsed_ms(start);
    report
}

/// Uniform integers from `[0, 1000]`, not all zero, rescaled to sum to `total`.
pub fn random_speed_profile(m: u64, total: &Rational, rng: &mut impl Rng) -> SpeedProfile {
    loop {
        let raw: Vec<u64> = (0..m).map(|_| rng.random_range(0..=1000u64)).collect();
        if raw.iter().any(|&s| s > 0) {
            return SpeedProfile::from_integers(&raw).expect("not all zero").normalized_to(total);
        }
    }
}

/// Greedy assignment at `ρ̄(m, b)` on the sand bags against all adversary
/// configurations and `trials` seeded random profiles, all summing to `P`.
pub fn verify_sand_upper(m: u64, b: u64, trials: u64, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(&[
        ("m", m.to_string()),
        ("b", b.to_string()),
        ("trials", trials.to_string()),
        ("seed", seed.to_string()),
    ]);
    let total = Rational::from(SandSequence::new(m, b).lower);
    let bags = sand_bags(m, b, &total);
    let rho = rho_bar(m, b);
    let params = [("m", m.to_string()), ("b", b.to_string()), ("rho", rho.to_string())];
    let check = |speeds: SpeedProfile, report: &mut VerificationReport| {
        report.checked += 1;
        if let Err(f) = greedy_assignment(&bags, &speeds, &rho) {
            report.failures.push(Failure::new(&params, Some(speeds.speeds().to_vec()), f.to_string()));
        }
    };
    for config in adversary_configs(m, b) {
        check(config.normalized_to(&total), &mut report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        check(random_speed_profile(m, &total, &mut rng), &mut report);
    }
    report.elapsed_ms = elapsed_ms(start);
    report
}

/// Random `q`-pebble instances: `m ∈ [2, 8]`, `b ∈ {m, 2m}`,
/// `q ∈ [0.05, 1]` in steps of 0.01, integer jobs from `[1, 100]` added until
/// the instance is `q`-pebbles. Checks, at `ρ = ρ̄(m, b) + q`, that every
/// job is packed, each bag meets its bound, partial sums dominate the sand
/// reference sequence, and greedy assignment succeeds against a random
/// speed profile summing to `P`, with bags both in packing order and sorted.
pub fn verify_pebbles_random(trials: u64, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(&[
        ("trials", trials.to_string()),
        ("seed", seed.to_string()),
        ("m", "2..=8".into()),
        ("b", "m or 2m".into()),
        ("q", "5/100..=1".into()),
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let m = rng.random_range(2..=8u64);
        let b = if rng.random_bool(0.5) { m } else { 2 * m };
        let q = Rational::frac(rng.random_range(5..=100i64), 100);
        let mut jobs: Vec<Rational> = Vec::new();
        let instance = loop {
            jobs.push(Rational::from(rng.random_range(1..=100u64)));
            let inst = Instance::new(jobs.clone(), m as usize, b as usize).expect("positive jobs");
            if pebble_q(&inst) <= q {
                break inst;
            }
        };
        report.checked += 1;
        let params = [
            ("m", m.to_string()),
            ("b", b.to_string()),
            ("q", q.to_string()),
            ("jobs", instance.job_sizes().len().to_string()),
        ];
        let rho = rho_bar(m, b) + &q;
        let packed = pebbles_bags(&instance, &rho);
        if !packed.packed_all {
            report.failures.push(Failure::new(&params, None, "jobs left unpacked"));
            continue;
        }
        let mm = Rational::from(m);
        let (mut pd, mut pa) = (Rational::zero(), Rational::zero());
        for (k, (d, a)) in packed.normalized_sizes().iter().zip(sand_reference(m, b)).enumerate() {
            if *d > &rho - &pd / &mm {
                report.failures.push(Failure::new(&params, None, format!("bag {k} exceeds its bound")));
            }
            pd += d;
            pa += a;
            if pd < pa {
                report.failures.push(Failure::new(&params, None, format!("prefix {k} below sand reference")));
            }
        }
        let speeds = random_speed_profile(m, &instance.total(), &mut rng);
        if let Some(f) = greedy_trace(&packed.bag_sizes, &speeds, &rho).failure {
            report.failures.push(Failure::new(&params, Some(speeds.speeds().to_vec()), format!("packing order: {f}")));
        }
        if let Err(f) = greedy_assignment(&packed.profile(), &speeds, &rho) {
            report.failures.push(Failure::new(&params, Some(speeds.speeds().to_vec()), format!("sorted: {f}")));
        }
    }
    report.elapsed_ms = elapsed_ms(start);
    report
}

/// Checks [`verify_bricks_robustness`] over every `n ≤ n_max`, `m ≤ m_max`.
pub fn verify_bricks_robustness_grid(n_max: u64, m_max: u64, options: &RobustnessOptions) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(&[
        ("n", format!("1..={n_max}")),
        ("m", format!("1..={m_max}")),
        ("b", "m".into()),
    ]);
    let cells: Vec<(u64, u64)> = (1..=m_max).flat_map(|m| (1..=n_max).map(move |n| (n, m))).collect();
    let parts: Vec<VerificationReport> =
        cells.par_iter().map(|&(n, m)| verify_bricks_robustness_with(n, m, options)).collect();
    for part in parts {
        report.checked += part.checked;
        report.failures.extend(part.failures);
    }
    report.elapsed_ms = elapsed_ms(start);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bricks::brick_rho;

    /// Independent count: partitions of `n` into parts of size at most `k`
    /// via the two-term recurrence, memoized.
    fn partitions_oracle(n: i64, k: i64, memo: &mut BTreeMap<(i64, i64), u128>) -> u128 {
        if n == 0 {
            return 1;
        }
        if n < 0 || k == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&(n, k)) {
            return v;
        }
        let v = partitions_oracle(n, k - 1, memo) + partitions_oracle(n - k, k, memo);
        memo.insert((n, k), v);
        v
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn enumeration_examples() {
        let got: Vec<Vec<u64>> = IntegralPartitions::new(3, 2).collect();
        assert_eq!(got, vec![vec![3, 0], vec![2, 1]]);
        let got: Vec<Vec<u64>> = IntegralPartitions::new(4, 2).collect();
        assert_eq!(got, vec![vec![4, 0], vec![3, 1], vec![2, 2]]);
        for m in 1..6 {
            let got: Vec<SpeedProfile> = enumerate_integral_speed_profiles(1, m).collect();
            assert_eq!(got.len(), 1);
            assert_eq!(got[0].to_integers().unwrap()[0], 1);
        }
    }

    #[test]
    fn enumeration_count_matches_recurrence() {
        let mut memo = BTreeMap::new();
        for n in 1..=30u64 {
            for m in 1..=10u64 {
                let seen: Vec<Vec<u64>> = IntegralPartitions::new(n, m as usize).collect();
                let expect = partitions_oracle(n as i64, m as i64, &mut memo);
                assert_eq!(seen.len() as u128, expect, "n={n} m={m}");
                assert_eq!(partition_count(n, m), expect);
                let mut dedup = seen.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), seen.len());
                for p in &seen {
                    assert_eq!(p.len() as u64, m);
                    assert_eq!(p.iter().sum::<u64>(), n);
                    assert!(p.windows(2).all(|w| w[0] >= w[1]));
                }
            }
        }
    }

    #[test]
    fn sampler_covers_small_space() {
        let sampler = PartitionSampler::new(6, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = BTreeMap::new();
        for _ in 0..7000 {
            let p = sampler.sample(&mut rng);
            assert_eq!(p.iter().sum::<u64>(), 6);
            assert!(p.windows(2).all(|w| w[0] >= w[1]));
            *seen.entry(p).or_insert(0u32) += 1;
        }
        // 7 partitions of 6 into at most 3 parts, roughly equally likely
        assert_eq!(seen.len(), 7);
        assert!(seen.values().all(|&c| (800..1200).contains(&c)), "{seen:?}");
    }

    #[test]
    fn normalize_examples() {
        let one = Rational::one();
        let s = normalize_speeds(&[one.clone(), one.clone()], &SpeedProfile::new(ints(&[2, 2])).unwrap()).unwrap();
        assert_eq!(s.speeds(), ints(&[1, 1]).as_slice());
        let s = normalize_speeds(std::slice::from_ref(&one), &SpeedProfile::new(ints(&[1])).unwrap()).unwrap();
        assert_eq!(s.speeds(), ints(&[1]).as_slice());
        let s = normalize_speeds(&ints(&[2, 1]), &SpeedProfile::new(ints(&[4, 2])).unwrap()).unwrap();
        assert_eq!(s.speeds(), ints(&[2, 1]).as_slice());
    }

    #[test]
    fn normalized_speeds_have_unit_optimum() {
        let jobs = ints(&[5, 3, 3, 2, 1]);
        for raw in [[7, 3, 1], [1, 1, 1], [10, 0, 0], [4, 4, 2]] {
            let s = normalize_speeds(&jobs, &SpeedProfile::new(ints(&raw)).unwrap()).unwrap();
            assert_eq!(s.total(), Rational::from(14));
            assert_eq!(optimal_direct(&jobs, &s).unwrap(), Rational::one());
        }
        assert!(normalize_speeds(&ints(&[0]), &SpeedProfile::new(ints(&[1])).unwrap()).is_err());
    }

    #[test]
    fn ratio_examples() {
        let jobs = ints(&[3, 2, 2]);
        let bags = BagProfile::new(jobs.clone()).unwrap();
        let s = SpeedProfile::new(ints(&[3, 2])).unwrap();
        assert_eq!(robustness_ratio(&bags, &jobs, &s).unwrap(), Rational::one());

        let units = vec![Rational::one(); 4];
        let r = robustness_ratio(&BagProfile::from_integers(&[2, 2]), &units, &SpeedProfile::new(ints(&[3, 1])).unwrap());
        assert_eq!(r.unwrap(), Rational::frac(4, 3));

        // sand bags for m = b = 2 at P = 12, against each S_k scaled to 12
        let units = vec![Rational::one(); 12];
        let bags = sand_bags(2, 2, &Rational::from(12));
        let worst = adversary_configs(2, 2)
            .into_iter()
            .map(|c| robustness_ratio(&bags, &units, &c.normalized_to(&Rational::from(12))).unwrap())
            .max()
            .unwrap();
        assert_eq!(worst, rho_bar(2, 2));

        assert!(matches!(
            robustness_ratio(&BagProfile::from_integers(&[0]), &ints(&[0]), &SpeedProfile::new(ints(&[1])).unwrap()),
            Err(Error::DivisionUndefined)
        ));
    }

    #[test]
    fn success_range_small() {
        let r = verify_bricks_success_range(9, 5, &brick_rho());
        assert!(r.passed());
        assert_eq!(r.checked, 5 * 45);

        let r = verify_bricks_success_range(9, 5, &Rational::frac(159, 100));
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f.instance["n"] == "45" && f.instance["m"] == "9"));
    }

    #[test]
    fn robustness_examples() {
        assert!(verify_bricks_robustness(45, 9).passed());
        assert!(verify_bricks_robustness(13, 10).passed());
        for m in [1, 5, 12] {
            let r = verify_bricks_robustness(m, m);
            assert!(r.passed());
            assert_eq!(r.checked as u128, partition_count(m, m));
        }
    }

    #[test]
    fn robustness_sampling_path() {
        let options = RobustnessOptions { exhaustive_limit: 10, samples: 300, seed: 3 };
        let r = verify_bricks_robustness_with(40, 8, &options);
        assert!(r.passed());
        assert_eq!(r.checked, 300);
        // pebbles branch
        let r = verify_bricks_robustness_with(130, 2, &RobustnessOptions::default());
        assert_eq!(r.checked, 66);
        assert!(r.passed());
    }

    #[test]
    fn unit_jobs_on_integral_speeds_have_unit_optimum() {
        let jobs = vec![Rational::one(); 11];
        for speeds in enumerate_integral_speed_profiles(11, 4) {
            assert_eq!(optimal_direct(&jobs, &speeds).unwrap(), Rational::one());
        }
    }

    #[test]
    fn sand_upper_examples() {
        assert!(verify_sand_upper(2, 4, 1000, 11).passed());
        assert!(verify_sand_upper(5, 5, 1000, 12).passed());
        let r = verify_sand_upper(3, 6, 0, 0);
        assert!(r.passed());
        assert_eq!(r.checked, 6);
    }

    #[test]
    fn campaigns_are_deterministic() {
        let a = verify_sand_upper(3, 4, 50, 99);
        let b = verify_sand_upper(3, 4, 50, 99);
        assert_eq!(
            serde_json::to_string(&a.without_timing()).unwrap(),
            serde_json::to_string(&b.without_timing()).unwrap()
        );
        let a = verify_bricks_success_range(12, 7, &Rational::frac(3, 2));
        let b = verify_bricks_success_range(12, 7, &Rational::frac(3, 2));
        assert!(!a.passed());
        assert_eq!(a.without_timing(), b.without_timing());
    }

    #[test]
    fn pebbles_campaign_small() {
        let r = verify_pebbles_random(40, 5);
        assert_eq!(r.checked, 40);
        assert!(r.passed(), "{:?}", r.failures);
    }
}
