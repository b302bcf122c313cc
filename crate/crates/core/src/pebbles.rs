//! Greedy first-stage packing for `q`-pebbles: instances where every job is
//! at most `q · P/m`. Bags are filled in order while each one stays within
//! `ρ − (1/m) Σ_{j<k} d_j` at the normalization `P = m`.

use serde::Serialize;

use crate::model::{BagProfile, Instance};
use crate::numerics::Rational;

/// Smallest `q` for which the instance is `q`-pebbles: `max_j p_j · m / P`.
pub fn pebble_q(instance: &Instance) -> Rational {
    let largest = instance.job_sizes().first().cloned().unwrap_or_else(Rational::zero);
    largest * Rational::from(instance.machine_count()) / instance.total()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PebblesResult {
    /// Bag of each job (indexed like `Instance::job_sizes`); `None` when the
    /// job could not be placed.
    pub bag_of_job: Vec<Option<usize>>,
    /// `d_1 … d_b` in the caller's units, in bag order.
    pub bag_sizes: Vec<Rational>,
    pub packed_all: bool,
    #[serde(skip)]
    machine_count: usize,
    #[serde(skip)]
    total: Rational,
}

impl PebblesResult {
    /// Bag sizes rescaled so that the jobs sum to `m`.
    pub fn normalized_sizes(&self) -> Vec<Rational> {
        let factor = Rational::from(self.machine_count) / &self.total;
        self.bag_sizes.iter().map(|d| d * &factor).collect()
    }

    pub fn profile(&self) -> BagProfile {
        BagProfile::new(self.bag_sizes.clone()).expect("bag sizes are non-negative")
    }
}

/// Fills bags first to last. A job goes into the current bag `k` when
/// `m (d_k + p) + Σ_{l<k} d_l ≤ ρ P`, which is the normalized bound
/// `d_k + p ≤ ρ − (1/m) Σ_{l<k} d_l` multiplied through by `P`. Once a job
/// fits no remaining bag, it and every later job stay unplaced.
///
/// At `rho ≥ ρ̄(m, b) + pebble_q(instance)` every job is placed.
pub fn pebbles_bags(instance: &Instance, rho: &Rational) -> PebblesResult {
    let m = Rational::from(instance.machine_count());
    let b = instance.bag_count();
    let total = instance.total();
    let budget = rho * &total;

    let mut bag_sizes = vec![Rational::zero(); b];
    let mut bag_of_job = vec![None; instance.job_sizes().len()];
    let mut closed = Rational::zero();
    let mut k = 0usize;
    let mut packed_all = true;

    for (j, p) in instance.job_sizes().iter().enumerate() {
        while k < b && &m * (&bag_sizes[k] + p) + &closed > budget {
            closed += &bag_sizes[k];
            k += 1;
        }
        if k == b {
            packed_all = false;
            break;
        }
        bag_of_job[j] = Some(k);
        bag_sizes[k] += p;
    }

    PebblesResult { bag_of_job, bag_sizes, packed_all, machine_count: instance.machine_count(), total }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sand::{rho_bar, sand_reference};

    fn units(n: usize, m: usize, b: usize) -> Instance {
        Instance::bricks(n as u64, m, b).unwrap()
    }

    #[test]
    fn pebble_q_examples() {
        assert_eq!(pebble_q(&units(4, 2, 2)), Rational::frac(1, 2));
        for (n, m) in [(7usize, 3usize), (10, 10), (3, 5)] {
            assert_eq!(pebble_q(&units(n, m, m)), Rational::frac(m as i64, n as i64));
        }
        let single = Instance::new(vec![Rational::frac(5, 2)], 4, 4).unwrap();
        assert_eq!(pebble_q(&single), Rational::from(4));
    }

    #[test]
    fn four_unit_jobs_two_bags() {
        let rho = rho_bar(2, 2) + Rational::frac(1, 2);
        assert_eq!(rho, Rational::frac(11, 6));
        let r = pebbles_bags(&units(4, 2, 2), &rho);
        assert!(r.packed_all);
        assert_eq!(r.bag_of_job, vec![Some(0), Some(0), Some(0), Some(1)]);
        assert_eq!(r.normalized_sizes(), vec![Rational::frac(3, 2), Rational::frac(1, 2)]);
        assert_eq!(r.bag_sizes, vec![Rational::from(3), Rational::from(1)]);
    }

    #[test]
    fn single_job_single_bag() {
        let r = pebbles_bags(&units(1, 1, 1), &Rational::one());
        assert!(r.packed_all);
        assert_eq!(r.bag_of_job, vec![Some(0)]);
    }

    #[test]
    fn three_unit_jobs_run_out_of_bags() {
        let r = pebbles_bags(&units(3, 2, 2), &Rational::one());
        assert!(!r.packed_all);
        assert_eq!(r.bag_of_job, vec![Some(0), Some(1), None]);
        assert_eq!(r.normalized_sizes(), vec![Rational::frac(2, 3), Rational::frac(2, 3)]);
    }

    #[test]
    fn exact_fit_is_accepted() {
        // m = 1, b = 1, rho = 1: the single bag may take everything.
        let inst = Instance::new(vec![Rational::from(2), Rational::from(1)], 1, 1).unwrap();
        assert!(pebbles_bags(&inst, &Rational::one()).packed_all);
    }

    #[test]
    fn sizes_respect_normalized_bound_and_dominate_sand() {
        for (n, m, b) in [(20usize, 3usize, 3usize), (50, 4, 8), (9, 2, 4), (100, 7, 7)] {
            let inst = units(n, m, b);
            let rho = rho_bar(m as u64, b as u64) + pebble_q(&inst);
            let r = pebbles_bags(&inst, &rho);
            assert!(r.packed_all);
            let mm = Rational::from(m);
            let reference = sand_reference(m as u64, b as u64);
            let (mut pd, mut pa) = (Rational::zero(), Rational::zero());
            for (d, a) in r.normalized_sizes().iter().zip(&reference) {
                assert!(*d <= &rho - &pd / &mm);
                pd += d;
                pa += a;
                assert!(pd >= pa);
            }
        }
    }
}
