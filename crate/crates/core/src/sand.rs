//! Infinitesimal jobs: geometric bag sizes, the tight robustness factor
//! `ρ̄(m, b) = m^b / (m^b − (m−1)^b)`, and the adversary's speed
//! configurations used to probe lower bounds.

use num_bigint::BigInt;
use num_traits::{pow, One};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BagProfile, SpeedProfile};
use crate::numerics::Rational;
use crate::second_stage::optimal_second_stage;

/// The integer skeleton `t_j = m^(b−j) (m−1)^(j−1)` with `U = m^b` and
/// `L = m^b − (m−1)^b = Σ t_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandSequence {
    pub m: u64,
    pub b: u64,
    #[serde(serialize_with = "ser_bigints")]
    pub t: Vec<BigInt>,
    #[serde(serialize_with = "ser_bigint")]
    pub upper: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub lower: BigInt,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl SandSequence {
    pub fn new(m: u64, b: u64) -> Self {
        assert!(m >= 1 && b >= 1, "m and b must be positive");
        let mb = BigInt::from(m);
        let m1 = BigInt::from(m - 1);
        let upper = pow(mb.clone(), b as usize);
        let lower = &upper - pow(m1.clone(), b as usize);
        // t_1 = m^(b-1); each step multiplies by (m-1)/m exactly.
        let mut t = Vec::with_capacity(b as usize);
        let mut hi = pow(mb.clone(), (b - 1) as usize);
        let mut lo = BigInt::one();
        for _ in 0..b {
            t.push(&hi * &lo);
            hi /= &mb;
            lo *= &m1;
        }
        SandSequence { m, b, t, upper, lower }
    }

    /// `U / L`.
    pub fn rho_bar(&self) -> Rational {
        Rational::new(self.upper.clone(), self.lower.clone()).expect("L > 0")
    }
}

/// `ρ̄(m, b) = m^b / (m^b − (m−1)^b)`.
pub fn rho_bar(m: u64, b: u64) -> Rational {
    SandSequence::new(m, b).rho_bar()
}

/// Bag sizes `a_j = t_j · P / L`, non-increasing and summing to `P`.
///
/// The geometric sizes are used for every `b`, including `b < m`: the
/// greedy condition holds with equality at `ρ̄(m, b)` regardless of how `b`
/// compares to `m`.
pub fn sand_bags(m: u64, b: u64, total: &Rational) -> BagProfile {
    assert!(total.is_positive(), "total amount of sand must be positive");
    let seq = SandSequence::new(m, b);
    let unit = total / Rational::from(seq.lower.clone());
    BagProfile::new(seq.t.iter().map(|t| Rational::from(t.clone()) * &unit).collect())
        .expect("sand sizes are non-negative")
}

/// Sand bags normalized to `P = m`: the reference sequence
/// `a_k = ρ̄ − (1/m) Σ_{j<k} a_j` that pebble bags are compared against.
pub fn sand_reference(m: u64, b: u64) -> Vec<Rational> {
    sand_bags(m, b, &Rational::from(m)).sizes().to_vec()
}

/// The `b` configurations `S_k = (U − (m−1)t_k, t_k, …, t_k)`, each summing
/// to `U`. For `m = 1` the only configuration is `(U)`.
pub fn adversary_configs(m: u64, b: u64) -> Vec<SpeedProfile> {
    let seq = SandSequence::new(m, b);
    if m == 1 {
        return vec![SpeedProfile::new(vec![Rational::from(seq.upper)]).expect("U > 0")];
    }
    let slow = BigInt::from(m - 1);
    seq.t
        .iter()
        .map(|tk| {
            let mut speeds = vec![Rational::from(&seq.upper - &slow * tk)];
            speeds.extend(std::iter::repeat_n(Rational::from(tk.clone()), (m - 1) as usize));
            SpeedProfile::new(speeds).expect("positive speeds")
        })
        .collect()
}

/// Outcome of probing a bag profile against every `S_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeResult {
    /// `max_k` of the optimal second-stage makespan.
    pub value: Rational,
    /// Optimal makespan per configuration, in `k` order.
    pub per_config: Vec<Rational>,
    pub worst_config: usize,
}

/// Optimal second-stage makespan against each `S_k`, maximized over `k`.
/// The bags must already be scaled so that they sum to `U = m^b`.
///
/// Since every configuration lets the adversary reach makespan 1, the value
/// is a lower bound on the robustness of any algorithm that outputs `bags`.
pub fn lower_bound_probe(m: u64, b: u64, bags: &BagProfile) -> Result<ProbeResult> {
    let seq = SandSequence::new(m, b);
    let upper = Rational::from(seq.upper.clone());
    let total = bags.total();
    if total != upper {
        return Err(Error::ScaleMismatch { expected: upper.to_string(), actual: total.to_string() });
    }
    let mut per_config = Vec::with_capacity(b as usize);
    for speeds in adversary_configs(m, b) {
        per_config.push(optimal_second_stage(bags, &speeds)?.0);
    }
    let (worst_config, value) = per_config
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(&x.0)))
        .map(|(k, v)| (k, v.clone()))
        .unwrap_or((0, Rational::zero()));
    Ok(ProbeResult { value, per_config, worst_config })
}

/// All non-increasing integer profiles of length `b` summing to `total`.
pub fn integer_bag_profiles(total: u64, b: u64) -> impl Iterator<Item = BagProfile> {
    crate::verify::IntegralPartitions::new(total, b as usize).map(|p| {
        BagProfile::new(p.into_iter().map(Rational::from).collect()).expect("non-negative")
    })
}

/// Smallest probe value over every integral bag profile at scale `P = U`.
///
/// This is a finite certificate at that discretization only; it says nothing
/// about real-valued profiles between the grid points.
pub fn discretized_lower_bound(m: u64, b: u64) -> Result<(Rational, BagProfile)> {
    let seq = SandSequence::new(m, b);
    let upper: u64 = seq
        .upper
        .clone()
        .try_into()
        .map_err(|_| Error::SizeLimit(format!("U = {} too large to enumerate", seq.upper)))?;
    let mut best: Option<(Rational, BagProfile)> = None;
    for bags in integer_bag_profiles(upper, b) {
        let value = lower_bound_probe(m, b, &bags)?.value;
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, bags));
        }
    }
    best.ok_or_else(|| Error::Internal("no profiles enumerated".into()))
}
