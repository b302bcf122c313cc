//! Fixed inputs shared by the benchmarks.

use speedrobust::{BagProfile, Instance, Rational, SpeedProfile};

/// Speeds `1, 2, …, m` rescaled to sum to `total`.
pub fn ramp_speeds(m: u64, total: &Rational) -> SpeedProfile {
    let raw: Vec<u64> = (1..=m).collect();
    SpeedProfile::from_integers(&raw).expect("positive").normalized_to(total)
}

/// `n` jobs of sizes cycling through `1..=10`.
pub fn cycling_jobs(n: usize, m: usize, b: usize) -> Instance {
    let jobs = (0..n).map(|j| Rational::from((j % 10 + 1) as u64)).collect();
    Instance::new(jobs, m, b).expect("positive jobs")
}

/// A bag profile with distinct sizes `b, b-1, …, 1` scaled by `1/3`.
pub fn staircase_bags(b: u64) -> BagProfile {
    BagProfile::new((1..=b).map(|k| Rational::frac(k as i64, 3)).collect()).expect("non-negative")
}
