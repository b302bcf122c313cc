//! Second stage: once speeds are known, place the committed bags.
//!
//! [`greedy_assignment`] hands each bag to the machine with the most
//! remaining capacity `ρ s_i`. [`integral_assignment`] does the same with
//! integral coins, paying `⌈a_k / ρ⌉` per bag. [`optimal_second_stage`] and
//! [`optimal_direct`] are exact branch-and-bound oracles for small inputs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{makespan_of, Assignment, BagProfile, SpeedProfile};
use crate::numerics::{ceil_unscale, Rational};

/// Largest bag (or job) count the exact oracles accept.
pub const MAX_EXACT_ITEMS: usize = 16;
/// Largest machine count the exact oracles accept.
pub const MAX_EXACT_MACHINES: usize = 8;

/// One placement: bag `bag` went to `machine`, whose remaining capacity (or
/// coin count) moved from `before` to `after`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub bag: usize,
    pub machine: usize,
    pub before: Rational,
    pub after: Rational,
}

/// No machine could absorb bag `bag`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentFailure {
    pub bag: usize,
    pub machine: usize,
    pub available: Rational,
    pub needed: Rational,
}

impl fmt::Display for AssignmentFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bag {} needs {} but the best machine ({}) has only {}",
            self.bag, self.needed, self.machine, self.available
        )
    }
}

impl std::error::Error for AssignmentFailure {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentTrace {
    pub steps: Vec<TraceStep>,
    pub assignment: Option<Assignment>,
    pub failure: Option<AssignmentFailure>,
}

impl AssignmentTrace {
    pub fn into_result(self) -> std::result::Result<Assignment, AssignmentFailure> {
        match (self.assignment, self.failure) {
            (Some(a), None) => Ok(a),
            (_, Some(f)) => Err(f),
            (None, None) => unreachable!("trace has neither outcome"),
        }
    }
}

/// Index of the largest value; ties go to the lowest index.
fn argmax<T: Ord>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Shared loop of both assigners. `price` maps a positive bag to what the
/// chosen machine pays for it.
fn run_capacity_assigner(
    bags: &[Rational],
    speeds: &[Rational],
    mut capacity: Vec<Rational>,
    price: impl Fn(usize) -> Rational,
) -> AssignmentTrace {
    let first_live = speeds.iter().position(Rational::is_positive).unwrap_or(0);
    let mut machine_of_bag = vec![0; bags.len()];
    let mut steps = Vec::with_capacity(bags.len());
    for (k, size) in bags.iter().enumerate() {
        if size.is_zero() {
            machine_of_bag[k] = first_live;
            continue;
        }
        let i = argmax(&capacity);
        let needed = price(k);
        if capacity[i] < needed {
            return AssignmentTrace {
                steps,
                assignment: None,
                failure: Some(AssignmentFailure { bag: k, machine: i, available: capacity[i].clone(), needed }),
            };
        }
        let before = capacity[i].clone();
        capacity[i] -= &needed;
        steps.push(TraceStep { bag: k, machine: i, before, after: capacity[i].clone() });
        machine_of_bag[k] = i;
    }
    AssignmentTrace { steps, assignment: Some(Assignment::new(machine_of_bag)), failure: None }
}

/// GreedyAssignment over bags in the given order, with capacities `ρ s_i`.
pub fn greedy_trace(bags: &[Rational], speeds: &SpeedProfile, rho: &Rational) -> AssignmentTrace {
    let capacity = speeds.speeds().iter().map(|s| rho * s).collect();
    run_capacity_assigner(bags, speeds.speeds(), capacity, |k| bags[k].clone())
}

/// GreedyAssignment: largest bag first, each to the machine with the largest
/// remaining capacity. Success means every machine `i` received at most
/// `ρ s_i`, hence makespan at most `ρ`.
pub fn greedy_assignment(
    bags: &BagProfile,
    speeds: &SpeedProfile,
    rho: &Rational,
) -> std::result::Result<Assignment, AssignmentFailure> {
    greedy_trace(bags.sizes(), speeds, rho).into_result()
}

/// IntegralAssignment with its full coin trace. Machine `i` starts with
/// `s_i` coins and pays `⌈a_k / ρ⌉` for bag `k`.
pub fn integral_trace(bags: &[u64], speeds: &[u64], rho: &Rational) -> AssignmentTrace {
    let sizes: Vec<Rational> = bags.iter().map(|&a| Rational::from(a)).collect();
    let speeds_r: Vec<Rational> = speeds.iter().map(|&s| Rational::from(s)).collect();
    let coins = speeds_r.clone();
    run_capacity_assigner(&sizes, &speeds_r, coins, |k| Rational::from(ceil_unscale(bags[k], rho)))
}

/// IntegralAssignment. On success each machine holds at most `ρ s_i`.
pub fn integral_assignment(
    bags: &[u64],
    speeds: &[u64],
    rho: &Rational,
) -> std::result::Result<Assignment, AssignmentFailure> {
    integral_assignment_fast(bags, speeds, rho)
}

/// Same decisions as [`integral_trace`] on machine integers, for sweeps.
fn integral_assignment_fast(
    bags: &[u64],
    speeds: &[u64],
    rho: &Rational,
) -> std::result::Result<Assignment, AssignmentFailure> {
    let first_live = speeds.iter().position(|&s| s > 0).unwrap_or(0);
    let mut coins = speeds.to_vec();
    let mut machine_of_bag = vec![0; bags.len()];
    for (k, &a) in bags.iter().enumerate() {
        if a == 0 {
            machine_of_bag[k] = first_live;
            continue;
        }
        let i = argmax(&coins);
        let cost = ceil_unscale(a, rho);
        if coins[i] < cost {
            return Err(AssignmentFailure {
                bag: k,
                machine: i,
                available: Rational::from(coins[i]),
                needed: Rational::from(cost),
            });
        }
        coins[i] -= cost;
        machine_of_bag[k] = i;
    }
    Ok(Assignment::new(machine_of_bag))
}

// ---------------------------------------------------------------------------
// Exact oracle
// ---------------------------------------------------------------------------

/// `load / speed` with integer parts, compared by cross-multiplication.
#[derive(Clone, Debug)]
struct Ratio<T> {
    load: T,
    speed: T,
}

impl<T> Ratio<T>
where
    T: Clone + Ord + Mul<Output = T>,
{
    fn cmp(&self, other: &Self) -> Ordering {
        (self.load.clone() * other.speed.clone()).cmp(&(other.load.clone() * self.speed.clone()))
    }
}

struct Search<'a, T> {
    items: &'a [T],
    speeds: &'a [T],
    loads: Vec<T>,
    current: Vec<usize>,
    best: Ratio<T>,
    best_assignment: Vec<usize>,
    lower_bound: Ratio<T>,
    done: bool,
}

impl<T> Search<'_, T>
where
    T: Clone + Ord + Zero + Add<Output = T> + Mul<Output = T>,
{
    fn dfs(&mut self, k: usize, cur: Ratio<T>) {
        if self.done {
            return;
        }
        if k == self.items.len() {
            if cur.cmp(&self.best) == Ordering::Less {
                self.best = cur;
                self.best_assignment.clone_from(&self.current);
                if self.best.cmp(&self.lower_bound) != Ordering::Greater {
                    self.done = true;
                }
            }
            return;
        }
        let item = self.items[k].clone();
        let mut candidates: Vec<(usize, Ratio<T>)> = Vec::with_capacity(self.speeds.len());
        'machines: for i in 0..self.speeds.len() {
            if self.speeds[i].is_zero() {
                continue;
            }
            for &(j, _) in &candidates {
                if self.loads[j] == self.loads[i] && self.speeds[j] == self.speeds[i] {
                    continue 'machines;
                }
            }
            let r = Ratio { load: self.loads[i].clone() + item.clone(), speed: self.speeds[i].clone() };
            if r.cmp(&self.best) != Ordering::Less {
                continue;
            }
            candidates.push((i, r));
        }
        candidates.sort_by(|a, b| a.1.cmp(&b.1));
        for (i, r) in candidates {
            if r.cmp(&self.best) != Ordering::Less {
                break;
            }
            let next = if r.cmp(&cur) == Ordering::Greater { r } else { cur.clone() };
            let saved = self.loads[i].clone();
            self.loads[i] = saved.clone() + item.clone();
            self.current[k] = i;
            self.dfs(k + 1, next);
            self.loads[i] = saved;
            if self.done {
                return;
            }
        }
    }
}

/// Minimum makespan of placing `items` (non-increasing, all positive) on
/// machines with integral `speeds`. Returns the machine of each item.
fn branch_and_bound<T>(items: &[T], speeds: &[T]) -> Vec<usize>
where
    T: Clone + Ord + Zero + Add<Output = T> + Mul<Output = T>,
{
    let m = speeds.len();
    // Incumbent: place each item where it finishes earliest.
    let mut loads = vec![T::zero(); m];
    let mut incumbent = vec![0; items.len()];
    let mut worst: Option<Ratio<T>> = None;
    for (k, item) in items.iter().enumerate() {
        let mut choice: Option<(usize, Ratio<T>)> = None;
        for i in (0..m).filter(|&i| !speeds[i].is_zero()) {
            let r = Ratio { load: loads[i].clone() + item.clone(), speed: speeds[i].clone() };
            if choice.as_ref().is_none_or(|(_, c)| r.cmp(c) == Ordering::Less) {
                choice = Some((i, r));
            }
        }
        let (i, r) = choice.expect("at least one positive speed");
        loads[i] = r.load.clone();
        incumbent[k] = i;
        if worst.as_ref().is_none_or(|w| r.cmp(w) == Ordering::Greater) {
            worst = Some(r);
        }
    }
    let Some(worst) = worst else {
        return incumbent;
    };

    let total = items.iter().cloned().fold(T::zero(), |a, b| a + b);
    let speed_sum = speeds.iter().cloned().fold(T::zero(), |a, b| a + b);
    let averaging = Ratio { load: total, speed: speed_sum };
    let largest = Ratio { load: items[0].clone(), speed: speeds[0].clone() };
    let lower_bound = if averaging.cmp(&largest) == Ordering::Less { largest } else { averaging };
    if worst.cmp(&lower_bound) != Ordering::Greater {
        return incumbent;
    }

    // Any strictly better schedule must beat `worst`, so searching from a
    // zero-load start with `best = worst` is exact.
    let mut search = Search {
        items,
        speeds,
        loads: vec![T::zero(); m],
        current: vec![0; items.len()],
        best: worst,
        best_assignment: incumbent,
        lower_bound,
        done: false,
    };
    let start = Ratio { load: T::zero(), speed: speeds[0].clone() };
    search.dfs(0, start);
    search.best_assignment
}

/// Integers proportional to `values`: multiplies by the lcm of denominators.
fn common_scale(values: &[Rational]) -> Vec<BigInt> {
    let lcm = values.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    values.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
}

/// Exact minimum makespan of placing `items` on `speeds`, plus a witness.
fn exact_min_makespan(items: &[Rational], speeds: &SpeedProfile, what: &str) -> Result<(Rational, Assignment)> {
    if items.len() > MAX_EXACT_ITEMS || speeds.len() > MAX_EXACT_MACHINES {
        return Err(Error::SizeLimit(format!(
            "{} {what} on {} machines (limits {MAX_EXACT_ITEMS} and {MAX_EXACT_MACHINES})",
            items.len(),
            speeds.len()
        )));
    }
    let speed_values = speeds.speeds();
    let first_live = speed_values.iter().position(Rational::is_positive).ok_or_else(|| {
        Error::Infeasible("all speeds are zero".into())
    })?;

    // Positive items in non-increasing order; zero items ride on the first
    // live machine.
    let mut order: Vec<usize> = (0..items.len()).filter(|&k| items[k].is_positive()).collect();
    order.sort_by(|&a, &b| items[b].cmp(&items[a]));
    let mut machine_of = vec![first_live; items.len()];

    if !order.is_empty() {
        let positive: Vec<Rational> = order.iter().map(|&k| items[k].clone()).collect();
        let scaled_items = common_scale(&positive);
        let scaled_speeds = common_scale(speed_values);
        let bits = scaled_items.iter().map(BigInt::bits).sum::<u64>().max(1)
            + scaled_speeds.iter().map(BigInt::bits).max().unwrap_or(0)
            + 8;
        let placement = if bits < 126 {
            let it: Vec<i128> = scaled_items.iter().map(|v| v.to_i128().expect("fits")).collect();
            let sp: Vec<i128> = scaled_speeds.iter().map(|v| v.to_i128().expect("fits")).collect();
            branch_and_bound(&it, &sp)
        } else {
            branch_and_bound(&scaled_items, &scaled_speeds)
        };
        for (pos, &k) in order.iter().enumerate() {
            machine_of[k] = placement[pos];
        }
    }
    let assignment = Assignment::new(machine_of);
    let value = makespan_of(&assignment, items, speed_values)?;
    Ok((value, assignment))
}

/// Exact optimal second stage: minimum makespan over every assignment of
/// the bags, with a witness. Depth-first over bags largest first, skipping
/// machines whose (load, speed) duplicates an already-tried sibling and
/// anything that cannot beat the incumbent. Limited to 16 bags and 8
/// machines.
pub fn optimal_second_stage(bags: &BagProfile, speeds: &SpeedProfile) -> Result<(Rational, Assignment)> {
    exact_min_makespan(bags.sizes(), speeds, "bags")
}

/// The adversary's optimum `C*_max`: jobs placed directly on machines.
pub fn optimal_direct(jobs: &[Rational], speeds: &SpeedProfile) -> Result<Rational> {
    Ok(optimal_direct_with_witness(jobs, speeds)?.0)
}

/// [`optimal_direct`] plus the machine of each job (indexed like `jobs`).
pub fn optimal_direct_with_witness(jobs: &[Rational], speeds: &SpeedProfile) -> Result<(Rational, Assignment)> {
    if jobs.iter().any(Rational::is_negative) {
        return Err(Error::InvalidInput("job sizes must be non-negative".into()));
    }
    exact_min_makespan(jobs, speeds, "jobs")
}
