//! Cell configurations as pairs of integer partitions.
//!
//! Partitions of `n` into exactly `k` parts are counted with the recurrence
//! `P(n, k) = P(n - 1, k - 1) + P(n - k, k)`: either the smallest part is one
//! and can be removed, or every part is at least two and can be decremented.
//! Unranking walks the same recurrence, so a uniform index gives a uniform
//! partition.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CfpError, Result};
use crate::matrix::IncidenceMatrix;
use crate::solution::{CellConfiguration, Solution};

/// Partitions of `total` into exactly `parts` summands, each at least `min_part`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    pub total: usize,
    pub parts: usize,
    pub min_part: usize,
}

impl PartitionSpec {
    pub fn new(total: usize, parts: usize, min_part: usize) -> Self {
        Self {
            total,
            parts,
            min_part: min_part.max(1),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.parts >= 1 && self.parts.checked_mul(self.min_part).is_some_and(|v| v <= self.total)
    }

    /// Total left after reserving `min_part - 1` in every summand.
    fn reduced_total(&self) -> Option<usize> {
        self.total.checked_sub(self.parts.checked_mul(self.min_part - 1)?)
    }

    fn infeasible(&self) -> CfpError {
        CfpError::InfeasiblePartition {
            total: self.total,
            parts: self.parts,
            min_part: self.min_part,
        }
    }
}

/// Seeded, platform-independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomSource {
    pub seed: u64,
    pub stream_index: u64,
}

impl RandomSource {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Table of `P(n, k)` for `n <= max_total`, `k <= max_parts`, positive summands.
#[derive(Debug, Clone)]
pub struct PartitionTable {
    max_total: usize,
    max_parts: usize,
    counts: Vec<BigUint>,
}

impl PartitionTable {
    pub fn new(max_total: usize, max_parts: usize) -> Self {
        let width = max_parts + 1;
        let mut counts = vec![BigUint::zero(); (max_total + 1) * width];
        counts[0] = BigUint::one();
        for n in 1..=max_total {
            for k in 1..=max_parts.min(n) {
                let v = &counts[(n - 1) * width + k - 1] + &counts[(n - k) * width + k];
                counts[n * width + k] = v;
            }
        }
        Self {
            max_total,
            max_parts,
            counts,
        }
    }

    /// Table large enough for every spec with this total and at most `max_parts` parts.
    pub fn for_total(total: usize, max_parts: usize) -> Self {
        Self::new(total, max_parts)
    }

    fn positive(&self, n: usize, k: usize) -> &BigUint {
        assert!(n <= self.max_total && k <= self.max_parts, "P({n}, {k}) outside table");
        &self.counts[n * (self.max_parts + 1) + k]
    }

    pub fn count(&self, spec: PartitionSpec) -> BigUint {
        match spec.reduced_total() {
            Some(n) if spec.parts >= 1 => self.positive(n, spec.parts).clone(),
            _ => BigUint::zero(),
        }
    }

    /// Partition with the given rank, summands in descending order.
    pub fn unrank(&self, spec: PartitionSpec, rank: &BigUint) -> Result<Vec<usize>> {
        let n = spec
            .reduced_total()
            .filter(|_| spec.is_feasible())
            .ok_or_else(|| spec.infeasible())?;
        if rank >= self.positive(n, spec.parts) {
            return Err(CfpError::InvalidConfiguration(format!("rank {rank} out of range")));
        }
        let (mut n, mut k, mut lift) = (n, spec.parts, 0usize);
        let mut rank = rank.clone();
        let mut ascending = Vec::with_capacity(k);
        while k > 0 {
            let with_one = self.positive(n - 1, k - 1);
            if rank < *with_one {
                ascending.push(1 + lift);
                n -= 1;
                k -= 1;
            } else {
                rank -= with_one;
                lift += 1;
                n -= k;
            }
        }
        debug_assert_eq!(n, 0);
        Ok(ascending.into_iter().rev().map(|v| v + spec.min_part - 1).collect())
    }

    /// Inverse of [`PartitionTable::unrank`]. Expects a descending partition.
    pub fn rank(&self, spec: PartitionSpec, partition: &[usize]) -> Result<BigUint> {
        let valid = partition.len() == spec.parts
            && partition.iter().sum::<usize>() == spec.total
            && partition.iter().all(|&v| v >= spec.min_part)
            && partition.windows(2).all(|w| w[0] >= w[1]);
        if !valid {
            return Err(CfpError::InvalidConfiguration(format!(
                "{partition:?} is not a descending partition of {} into {} parts >= {}",
                spec.total, spec.parts, spec.min_part
            )));
        }
        let mut parts: Vec<usize> = partition.iter().rev().map(|v| v - (spec.min_part - 1)).collect();
        let mut n: usize = parts.iter().sum();
        let mut rank = BigUint::zero();
        while !parts.is_empty() {
            let k = parts.len();
            if parts[0] == 1 {
                parts.remove(0);
                n -= 1;
            } else {
                rank += self.positive(n - 1, k - 1);
                parts.iter_mut().for_each(|v| *v -= 1);
                n -= k;
            }
        }
        Ok(rank)
    }

    pub fn sample<R: RngCore + ?Sized>(&self, spec: PartitionSpec, rng: &mut R) -> Result<Vec<usize>> {
        let count = self.count(spec);
        if count.is_zero() {
            return Err(spec.infeasible());
        }
        self.unrank(spec, &uniform_below(&count, rng))
    }
}

/// Uniform integer in `[0, bound)` by rejection on the bit length of `bound`.
fn uniform_below<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_mask = match bits % 32 {
        0 => u32::MAX,
        r => (1u32 << r) - 1,
    };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(last) = digits.last_mut() {
            *last &= top_mask;
        }
        let v = BigUint::from_slice(&digits);
        if &v < bound {
            return v;
        }
    }
}

/// Number of partitions of `spec.total` into exactly `spec.parts` summands of
/// at least `spec.min_part`.
pub fn count_partitions(spec: PartitionSpec) -> BigUint {
    match spec.reduced_total() {
        Some(n) if spec.parts >= 1 && spec.parts <= n => PartitionTable::new(n, spec.parts).count(spec),
        _ => BigUint::zero(),
    }
}

/// Uniformly random partition, summands descending.
pub fn sample_partition_uniform<R: RngCore + ?Sized>(spec: PartitionSpec, rng: &mut R) -> Result<Vec<usize>> {
    let n = spec
        .reduced_total()
        .filter(|_| spec.is_feasible())
        .ok_or_else(|| spec.infeasible())?;
    PartitionTable::new(n, spec.parts).sample(spec, rng)
}

/// Random configurations: `configs_per_k` for every cell count in
/// `[min_cells, max_cells]`, clamped to `[2, min(m, p)]`. Cell counts with no
/// feasible partition are skipped.
pub fn generate_configs<R: RngCore + ?Sized>(
    min_cells: usize,
    max_cells: usize,
    configs_per_k: usize,
    machines: usize,
    parts: usize,
    min_part: usize,
    rng: &mut R,
) -> Vec<CellConfiguration> {
    let min_part = min_part.max(1);
    let lo = min_cells.max(2);
    let hi = max_cells.min(machines.min(parts));
    if lo > hi {
        return Vec::new();
    }
    let machine_table = PartitionTable::new(machines, hi);
    let part_table = PartitionTable::new(parts, hi);
    let mut out = Vec::new();
    for k in lo..=hi {
        let ms = PartitionSpec::new(machines, k, min_part);
        let ps = PartitionSpec::new(parts, k, min_part);
        if !ms.is_feasible() || !ps.is_feasible() {
            continue;
        }
        out.reserve(configs_per_k);
        for _ in 0..configs_per_k {
            let m = machine_table.sample(ms, rng).expect("feasible");
            let p = part_table.sample(ps, rng).expect("feasible");
            out.push(CellConfiguration::from_partitions(&m, &p, min_part).expect("feasible"));
        }
    }
    out
}

/// Random solution with the given configuration: shuffled machines and parts
/// are cut into consecutive groups of the configured sizes.
pub fn random_initial_solution<R: Rng + ?Sized>(
    matrix: &IncidenceMatrix,
    config: &CellConfiguration,
    rng: &mut R,
) -> Result<Solution> {
    config.check_fits(matrix)?;
    let mut machines: Vec<usize> = (0..matrix.machines()).collect();
    let mut parts: Vec<usize> = (0..matrix.parts()).collect();
    machines.shuffle(rng);
    parts.shuffle(rng);
    Ok(solution_from_orders(matrix, config, &machines, &parts))
}

/// Solution that assigns `machine_order` and `part_order` to cells in
/// consecutive runs of the configured sizes.
pub fn solution_from_orders(
    matrix: &IncidenceMatrix,
    config: &CellConfiguration,
    machine_order: &[usize],
    part_order: &[usize],
) -> Solution {
    let mut machine_cell = vec![0; matrix.machines()];
    let mut part_cell = vec![0; matrix.parts()];
    let (mut mi, mut pi) = (0, 0);
    for (cell, &(m, p)) in config.cells().iter().enumerate() {
        for &i in &machine_order[mi..mi + m] {
            machine_cell[i] = cell;
        }
        for &j in &part_order[pi..pi + p] {
            part_cell[j] = cell;
        }
        mi += m;
        pi += p;
    }
    Solution::new(matrix, machine_cell, part_cell).expect("dimensions checked")
}
