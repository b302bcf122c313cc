//! Unit-size jobs (bricks) with `b = m` bags.
//!
//! The first stage spends coins: starting from `c = n`, each bag costs
//! `z = ⌈c/m⌉` coins and gets size `⌊z ρ⌋`. Integral speeds summing to `n`
//! guarantee some machine still holds `z` coins when the bag is placed, so
//! the bags fit at makespan `ρ` whenever their sizes add up to `n`.
//!
//! Besides the algorithm itself this module carries the machinery used to
//! show that `ρ = 8/5` always suffices for `n/m ≤ 60`: the batched variant
//! [`bricks_alt`], its fractional relaxation [`bricks_fract`], the rounding
//! loss per cost level [`transformation_factor`], and the normalized brick
//! surplus as a piecewise-linear function of `λ = n/m`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BagProfile, FractionalSolution, Instance};
use crate::numerics::{ceil_div, floor_scale, Rational};
use crate::pebbles::pebbles_bags;
use crate::sand::rho_bar;

/// The robustness factor of the bricks algorithm, `8/5`.
pub fn brick_rho() -> Rational {
    Rational::frac(8, 5)
}

/// Largest `λ = n/m` handled by coin accounting; beyond it pebbles packing
/// already beats `8/5`.
pub const BRICKS_LAMBDA_LIMIT: u64 = 60;

/// Output of [`bricks_bags`], bags in creation order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrickSolution {
    pub bag_sizes: Vec<u64>,
    pub bag_costs: Vec<u64>,
    pub total_size: u64,
    pub successful: bool,
}

impl BrickSolution {
    pub fn profile(&self) -> BagProfile {
        BagProfile::from_integers(&self.bag_sizes)
    }
}

/// Bag sizes for `n` bricks, `m` machines and `b` bags. Exactly `b` bags
/// are produced; once the coins run out the rest have cost and size 0.
pub fn bricks_bags(n: u64, m: u64, b: u64, rho: &Rational) -> BrickSolution {
    assert!(n >= 1 && m >= 1 && b >= 1, "n, m, b must be positive");
    let mut coins = n;
    let mut bag_sizes = Vec::with_capacity(b as usize);
    let mut bag_costs = Vec::with_capacity(b as usize);
    for _ in 0..b {
        let z = ceil_div(coins, m);
        bag_costs.push(z);
        bag_sizes.push(if z == 0 { 0 } else { floor_scale(z, rho) });
        coins -= z;
    }
    let total_size = bag_sizes.iter().sum();
    BrickSolution { bag_sizes, bag_costs, total_size, successful: total_size >= n }
}

/// Shrinks a successful solution to total exactly `n`: empties the
/// smallest bags from the back, then reduces the last non-empty one.
/// Costs are left as reserved.
pub fn trim_to_n(solution: &BrickSolution, n: u64) -> Result<BrickSolution> {
    if solution.total_size < n {
        return Err(Error::Infeasible(format!(
            "bags hold {} bricks, fewer than n = {n}",
            solution.total_size
        )));
    }
    let mut trimmed = solution.clone();
    let mut excess = solution.total_size - n;
    for size in trimmed.bag_sizes.iter_mut().rev() {
        if excess == 0 {
            break;
        }
        let cut = excess.min(*size);
        *size -= cut;
        excess -= cut;
    }
    trimmed.total_size = n;
    Ok(trimmed)
}

/// [`bricks_alt`] as `(cost, count)` pairs in decreasing cost order.
pub fn bricks_alt_counts(n: u64, m: u64, b: u64) -> Vec<(u64, u64)> {
    let mut remaining_bags = b;
    let mut coins = n;
    let mut out = Vec::new();
    while remaining_bags > 0 && coins > 0 {
        let z = ceil_div(coins, m);
        let x = remaining_bags.min(ceil_div(coins - m * (z - 1), z));
        remaining_bags -= x;
        coins -= x * z;
        out.push((z, x));
    }
    out
}

/// BricksAlt: the bricks algorithm batched by cost. For each cost `z` it
/// takes as many bags as are needed to bring the coins down to `m(z−1)`,
/// which is exactly how many bags of cost `z` [`bricks_bags`] creates.
pub fn bricks_alt(n: u64, m: u64, b: u64) -> FractionalSolution {
    let mut sol = FractionalSolution::new();
    for (z, x) in bricks_alt_counts(n, m, b) {
        sol.set(z, Rational::from(x));
    }
    sol
}

/// BricksFract: [`bricks_alt`] without rounding the bag counts, defined for
/// any positive rational `n`, `m`, `b`. Between the smallest and largest
/// cost used, `F(z) = m/z`, and scaling all inputs by `α` scales `F` by `α`.
pub fn bricks_fract(n: &Rational, m: &Rational, b: &Rational) -> FractionalSolution {
    assert!(n.is_positive() && m.is_positive() && b.is_positive(), "inputs must be positive");
    let mut remaining_bags = b.clone();
    let mut coins = n.clone();
    let mut sol = FractionalSolution::new();
    while remaining_bags.is_positive() && coins.is_positive() {
        let z = (&coins / m).ceil_u64().expect("cost fits in u64");
        let zr = Rational::from(z);
        let x = remaining_bags.clone().min((&coins - m * Rational::from(z - 1)) / &zr);
        remaining_bags -= &x;
        coins -= &x * &zr;
        sol.set(z, x);
    }
    sol
}

/// `size(F, ρ) = Σ_z F(z) ⌊z ρ⌋`.
pub fn solution_size(sol: &FractionalSolution, rho: &Rational) -> Rational {
    sol.iter().map(|(z, count)| count * Rational::from(floor_scale(z, rho))).sum()
}

/// Memoized `⌊z ρ⌋` for sweeps over many instances at one `ρ`.
#[derive(Clone, Debug)]
pub struct BrickSizer {
    rho: Rational,
    sizes: Vec<u64>,
}

impl BrickSizer {
    pub fn new(rho: &Rational, max_cost: u64) -> Self {
        let sizes = (0..=max_cost).map(|z| floor_scale(z, rho)).collect();
        BrickSizer { rho: rho.clone(), sizes }
    }

    pub fn size(&self, z: u64) -> u64 {
        match self.sizes.get(z as usize) {
            Some(&s) => s,
            None => floor_scale(z, &self.rho),
        }
    }

    /// Total size of integral `(cost, count)` pairs.
    pub fn total(&self, counts: &[(u64, u64)]) -> u64 {
        counts.iter().map(|&(z, x)| self.size(z) * x).sum()
    }
}

/// Change in solution size per unit of rounding at cost `z`:
/// `f(z) = ⌊zρ⌋ − (z/(z−1))⌊(z−1)ρ⌋ + (1/(z−1))⌊ρ⌋`.
pub fn transformation_factor(z: u64, rho: &Rational) -> Rational {
    assert!(z >= 2, "transformation factor needs z >= 2");
    let prev = Rational::from(z - 1);
    Rational::from(floor_scale(z, rho))
        - Rational::from(z) / &prev * Rational::from(floor_scale(z - 1, rho))
        + Rational::from(floor_scale(1, rho)) / &prev
}

/// `Σ_{z=2}^{z_max} min(0, f(z))`: the worst total rounding loss between
/// the fractional and integral solutions.
pub fn negative_f_sum(z_max: u64, rho: &Rational) -> Rational {
    (2..=z_max)
        .map(|z| transformation_factor(z, rho))
        .filter(Rational::is_negative)
        .sum()
}

/// One row of the transformation-factor table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorRow {
    pub z: u64,
    pub exact: Rational,
    pub decimal: String,
}

pub fn transformation_factor_table(z_max: u64, rho: &Rational) -> Vec<FactorRow> {
    (2..=z_max)
        .map(|z| {
            let exact = transformation_factor(z, rho);
            let decimal = exact.to_decimal(5);
            FactorRow { z, exact, decimal }
        })
        .collect()
}

/// `(size(F, ρ) − n)/m` for the fractional solution with `b = m`, where
/// `λ = n/m`. It depends on `λ` alone, so it is computed at `m = 1`.
pub fn normalized_surplus_at(lambda: &Rational, rho: &Rational) -> Rational {
    assert!(lambda.is_positive(), "lambda must be positive");
    let one = Rational::one();
    solution_size(&bricks_fract(lambda, &one, &one), rho) - lambda
}

/// Normalized brick surplus at `ρ = 8/5`.
pub fn normalized_surplus(lambda: &Rational) -> Rational {
    normalized_surplus_at(lambda, &brick_rho())
}

/// A corner of the piecewise-linear surplus function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurplusPoint {
    pub lambda: Rational,
    pub surplus: Rational,
    /// For a non-integer corner: the bag cost that stops being used there.
    pub retired_cost: Option<u64>,
}

/// Every corner of the surplus function on `[1, lambda_max]`.
///
/// The largest cost changes at integer `λ`. Between integers `k` and `k+1`
/// the top cost `k+1` gains `δ/(k+1)` bags as `λ = k + δ` while the
/// smallest cost in use loses the same amount, so that cost disappears at
/// `λ = k + F_k(z_min)(k+1)` if this lands before `k+1`.
pub fn surplus_breakpoints(lambda_max: &Rational) -> Vec<SurplusPoint> {
    assert!(*lambda_max >= Rational::one(), "lambda_max must be at least 1");
    let one = Rational::one();
    let last = lambda_max.floor_u64().expect("lambda_max fits in u64");
    let mut points = Vec::new();
    for k in 1..=last {
        let lambda = Rational::from(k);
        points.push(SurplusPoint { surplus: normalized_surplus(&lambda), lambda: lambda.clone(), retired_cost: None });

        let sol = bricks_fract(&lambda, &one, &one);
        let z_min = sol.z_min().expect("non-empty solution");
        let corner = &lambda + sol.get(z_min) * Rational::from(k + 1);
        if corner < Rational::from(k + 1) && corner <= *lambda_max {
            points.push(SurplusPoint {
                surplus: normalized_surplus(&corner),
                lambda: corner,
                retired_cost: Some(z_min),
            });
        }
    }
    points
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Bricks,
    Pebbles,
}

/// First-stage bags for `n` bricks chosen by [`robust_bags`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RobustBags {
    pub branch: Branch,
    /// Robustness guaranteed by the chosen branch.
    pub rho: Rational,
    /// Bag sizes, summing to `n`.
    pub profile: BagProfile,
    /// The untrimmed coin-accounting run, when that branch was used.
    pub bricks: Option<BrickSolution>,
}

/// Dispatches on `λ = n/m`: coin accounting at `ρ = 8/5` for `λ ≤ 60`
/// (trimmed to total `n`), pebbles packing at `ρ̄(m, b) + m/n` otherwise.
/// For `b ≠ m` an unsuccessful coin run falls back to pebbles.
pub fn robust_bags(n: u64, m: u64, b: u64) -> Result<RobustBags> {
    if n == 0 || m == 0 || b == 0 {
        return Err(Error::InvalidInput("n, m, b must be positive".into()));
    }
    if n <= BRICKS_LAMBDA_LIMIT * m {
        let rho = brick_rho();
        let sol = bricks_bags(n, m, b, &rho);
        if sol.successful {
            let trimmed = trim_to_n(&sol, n)?;
            return Ok(RobustBags { branch: Branch::Bricks, rho, profile: trimmed.profile(), bricks: Some(sol) });
        }
        if b == m {
            return Err(Error::Internal(format!("bricks run failed for n={n} m={m}")));
        }
    }
    let instance = Instance::bricks(n, m as usize, b as usize)?;
    let rho = rho_bar(m, b) + Rational::frac(m as i64, n as i64);
    let packed = pebbles_bags(&instance, &rho);
    if !packed.packed_all {
        return Err(Error::Internal(format!("pebbles packing failed for n={n} m={m} b={b}")));
    }
    Ok(RobustBags { branch: Branch::Pebbles, rho, profile: packed.profile(), bricks: None })
}
