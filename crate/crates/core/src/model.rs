//! Domain types shared by the first-stage and second-stage algorithms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Rational;

fn sort_desc(values: &mut [Rational]) {
    values.sort_unstable_by(|a, b| b.cmp(a));
}

fn check_non_negative(what: &str, values: &[Rational]) -> Result<()> {
    match values.iter().find(|v| v.is_negative()) {
        Some(v) => Err(Error::InvalidInput(format!("{what} must be non-negative, got {v}"))),
        None => Ok(()),
    }
}

/// First-stage input: job processing times, machine count `m`, bag count `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    job_sizes: Vec<Rational>,
    machine_count: usize,
    bag_count: usize,
}

impl Instance {
    /// Sorts the jobs non-increasingly. Rejects negative jobs, a zero total,
    /// and zero machines or bags.
    pub fn new(mut job_sizes: Vec<Rational>, machine_count: usize, bag_count: usize) -> Result<Self> {
        if machine_count == 0 || bag_count == 0 {
            return Err(Error::InvalidInput("machine and bag counts must be positive".into()));
        }
        check_non_negative("job sizes", &job_sizes)?;
        sort_desc(&mut job_sizes);
        if !job_sizes.iter().sum::<Rational>().is_positive() {
            return Err(Error::InvalidInput("total processing time must be positive".into()));
        }
        Ok(Instance { job_sizes, machine_count, bag_count })
    }

    /// `n` unit-size jobs (bricks).
    pub fn bricks(n: u64, machine_count: usize, bag_count: usize) -> Result<Self> {
        Self::new(vec![Rational::one(); n as usize], machine_count, bag_count)
    }

    pub fn job_sizes(&self) -> &[Rational] {
        &self.job_sizes
    }

    pub fn machine_count(&self) -> usize {
        self.machine_count
    }

    pub fn bag_count(&self) -> usize {
        self.bag_count
    }

    pub fn total(&self) -> Rational {
        self.job_sizes.iter().sum()
    }
}

/// Bag sizes `a_1 ≥ … ≥ a_b` committed in the first stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BagProfile(Vec<Rational>);

impl BagProfile {
    pub fn new(mut sizes: Vec<Rational>) -> Result<Self> {
        check_non_negative("bag sizes", &sizes)?;
        sort_desc(&mut sizes);
        Ok(BagProfile(sizes))
    }

    pub fn from_integers(sizes: &[u64]) -> Self {
        Self::new(sizes.iter().map(|&s| Rational::from(s)).collect()).expect("non-negative")
    }

    pub fn sizes(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    /// Sizes as machine integers, when every bag is integral.
    pub fn to_integers(&self) -> Option<Vec<u64>> {
        self.0
            .iter()
            .map(|s| if s.is_integer() { s.floor_u64() } else { None })
            .collect()
    }

    pub fn scaled(&self, factor: &Rational) -> BagProfile {
        BagProfile(self.0.iter().map(|s| s * factor).collect())
    }
}

/// Machine speeds `s_1 ≥ … ≥ s_m`, chosen by the adversary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct SpeedProfile(Vec<Rational>);

impl SpeedProfile {
    pub fn new(mut speeds: Vec<Rational>) -> Result<Self> {
        check_non_negative("speeds", &speeds)?;
        if speeds.iter().all(Rational::is_zero) {
            return Err(Error::InvalidInput("at least one speed must be positive".into()));
        }
        sort_desc(&mut speeds);
        Ok(SpeedProfile(speeds))
    }

    pub fn from_integers(speeds: &[u64]) -> Result<Self> {
        Self::new(speeds.iter().map(|&s| Rational::from(s)).collect())
    }

    pub fn speeds(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn to_integers(&self) -> Option<Vec<u64>> {
        self.0
            .iter()
            .map(|s| if s.is_integer() { s.floor_u64() } else { None })
            .collect()
    }

    /// Multiplies every speed by a positive factor.
    pub fn scaled(&self, factor: &Rational) -> SpeedProfile {
        assert!(factor.is_positive());
        SpeedProfile(self.0.iter().map(|s| s * factor).collect())
    }

    /// Rescales so the speeds sum to `total`.
    pub fn normalized_to(&self, total: &Rational) -> SpeedProfile {
        self.scaled(&(total / self.total()))
    }
}

impl TryFrom<Vec<Rational>> for SpeedProfile {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        SpeedProfile::new(v)
    }
}

impl From<SpeedProfile> for Vec<Rational> {
    fn from(p: SpeedProfile) -> Self {
        p.0
    }
}

/// Bag-to-machine map; entry `k` is the 0-based machine receiving bag `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment {
    machine_of_bag: Vec<usize>,
}

impl Assignment {
    pub fn new(machine_of_bag: Vec<usize>) -> Self {
        Assignment { machine_of_bag }
    }

    pub fn machine_of_bag(&self) -> &[usize] {
        &self.machine_of_bag
    }

    /// Total size placed on each of `machine_count` machines.
    pub fn loads(&self, bags: &[Rational], machine_count: usize) -> Vec<Rational> {
        let mut loads = vec![Rational::zero(); machine_count];
        for (bag, &machine) in bags.iter().zip(&self.machine_of_bag) {
            loads[machine] += bag;
        }
        loads
    }

    /// Sets `M_1 … M_m` of bag indices.
    pub fn machine_sets(&self, machine_count: usize) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); machine_count];
        for (bag, &machine) in self.machine_of_bag.iter().enumerate() {
            sets[machine].push(bag);
        }
        sets
    }

    fn validate(&self, bags: &[Rational], speeds: &[Rational]) -> Result<()> {
        if self.machine_of_bag.len() != bags.len() {
            return Err(Error::InvalidAssignment(format!(
                "{} bags but {} assignment entries",
                bags.len(),
                self.machine_of_bag.len()
            )));
        }
        for (k, (&machine, bag)) in self.machine_of_bag.iter().zip(bags).enumerate() {
            let Some(speed) = speeds.get(machine) else {
                return Err(Error::InvalidAssignment(format!(
                    "bag {k} assigned to machine {machine}, only {} machines",
                    speeds.len()
                )));
            };
            if speed.is_zero() && bag.is_positive() {
                return Err(Error::InvalidAssignment(format!(
                    "bag {k} of size {bag} on zero-speed machine {machine}"
                )));
            }
        }
        Ok(())
    }
}

/// `max_i load_i / s_i`; idle zero-speed machines contribute 0.
pub fn makespan(assignment: &Assignment, bags: &BagProfile, speeds: &SpeedProfile) -> Result<Rational> {
    makespan_of(assignment, bags.sizes(), speeds.speeds())
}

pub(crate) fn makespan_of(assignment: &Assignment, bags: &[Rational], speeds: &[Rational]) -> Result<Rational> {
    assignment.validate(bags, speeds)?;
    Ok(assignment
        .loads(bags, speeds.len())
        .iter()
        .zip(speeds)
        .filter(|(_, s)| s.is_positive())
        .map(|(load, s)| load / s)
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Bag cost `z` mapped to a possibly fractional bag count `F(z)`.
///
/// Zero counts are never stored. When coins run out before bags do, the
/// counts sum to less than `b`; the shortfall is bags of cost 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FractionalSolution {
    counts: BTreeMap<u64, Rational>,
}

impl FractionalSolution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `F(cost)`; costs must be positive and counts non-negative.
    pub fn set(&mut self, cost: u64, count: Rational) {
        assert!(cost > 0, "bag cost must be positive");
        assert!(!count.is_negative(), "bag count must be non-negative");
        if count.is_zero() {
            self.counts.remove(&cost);
        } else {
            self.counts.insert(cost, count);
        }
    }

    pub fn get(&self, cost: u64) -> Rational {
        self.counts.get(&cost).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(cost, count)` pairs in increasing cost order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u64, &Rational)> {
        self.counts.iter().map(|(&z, c)| (z, c))
    }

    pub fn bag_count(&self) -> Rational {
        self.counts.values().sum()
    }

    /// `Σ F(z) · z`.
    pub fn total_cost(&self) -> Rational {
        self.counts.iter().map(|(&z, c)| c * Rational::from(z)).sum()
    }

    pub fn z_min(&self) -> Option<u64> {
        self.counts.keys().next().copied()
    }

    pub fn z_max(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    pub fn is_integral(&self) -> bool {
        self.counts.values().all(Rational::is_integer)
    }

    pub fn scaled(&self, factor: &Rational) -> FractionalSolution {
        let mut out = FractionalSolution::new();
        for (&z, c) in &self.counts {
            out.set(z, c * factor);
        }
        out
    }
}
