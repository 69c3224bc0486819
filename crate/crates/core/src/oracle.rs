//! Exhaustive search over every feasible solution of a small instance.
//!
//! Cells are unlabeled, so machine assignments are enumerated as restricted
//! growth strings (cell labels appear in order of their smallest machine).
//! Parts are then assigned to those labelled cells in every way that leaves
//! no cell without parts.

use rayon::prelude::*;

use crate::error::{CfpError, Result};
use crate::matrix::IncidenceMatrix;
use crate::metrics::{Efficiency, Rational, Weight};
use crate::solution::Solution;

pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleParams {
    pub q: Weight,
    pub allow_singletons: bool,
    /// Smallest cell count, at least 1.
    pub k_min: usize,
    /// Largest cell count, clamped to `min(m, p)`.
    pub k_max: usize,
    /// Refuse instances with more feasible solutions than this.
    pub budget: u64,
}

impl OracleParams {
    /// Every cell count from 2 to `min(m, p)`, singletons allowed.
    pub fn for_matrix(matrix: &IncidenceMatrix) -> Self {
        Self {
            q: Weight::HALF,
            allow_singletons: true,
            k_min: 2,
            k_max: matrix.max_cells(),
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub eta: Rational,
    pub solution: Solution,
    /// Feasible solutions evaluated.
    pub enumerated: u64,
}

/// Partitions of an `n`-set into `k` blocks of size at least `min`.
/// Saturates at `u128::MAX`.
pub fn set_partition_count(n: usize, k: usize, min: usize) -> u128 {
    // s[i][j]: partitions of i elements into j blocks.
    let mut s = vec![vec![0u128; k + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            s[i][j] = if min <= 1 {
                (j as u128).saturating_mul(s[i - 1][j]).saturating_add(s[i - 1][j - 1])
            } else {
                // The new element joins an existing block, or forms a pair
                // with one of the i - 1 others.
                let pair = if i >= 2 {
                    ((i - 1) as u128).saturating_mul(s[i - 2][j - 1])
                } else {
                    0
                };
                (j as u128).saturating_mul(s[i - 1][j]).saturating_add(pair)
            };
        }
    }
    s[n][k]
}

/// Feasible solutions with exactly `k` cells.
pub fn solution_count(machines: usize, parts: usize, k: usize, min: usize) -> u128 {
    let factorial = (1..=k as u128).fold(1u128, |acc, v| acc.saturating_mul(v));
    set_partition_count(machines, k, min)
        .saturating_mul(factorial)
        .saturating_mul(set_partition_count(parts, k, min))
}

fn machine_partitions(m: usize, k: usize, min: usize) -> Vec<Vec<usize>> {
    struct Walk {
        m: usize,
        k: usize,
        min: usize,
        cur: Vec<usize>,
        sizes: Vec<usize>,
        out: Vec<Vec<usize>>,
    }
    fn rec(w: &mut Walk, i: usize, used: usize) {
        let (m, k, min) = (w.m, w.k, w.min);
        if i == m {
            if used == k && w.sizes.iter().all(|&s| s >= min) {
                w.out.push(w.cur.clone());
            }
            return;
        }
        let deficit: usize = w.sizes.iter().map(|&s| min.saturating_sub(s)).sum::<usize>() + (k - used) * min;
        if deficit > m - i {
            return;
        }
        for c in 0..=used.min(k - 1) {
            w.cur.push(c);
            if c == used {
                w.sizes.push(1);
                rec(w, i + 1, used + 1);
                w.sizes.pop();
            } else {
                w.sizes[c] += 1;
                rec(w, i + 1, used);
                w.sizes[c] -= 1;
            }
            w.cur.pop();
        }
    }
    let mut w = Walk {
        m,
        k,
        min,
        cur: Vec::with_capacity(m),
        sizes: Vec::new(),
        out: Vec::new(),
    };
    rec(&mut w, 0, 0);
    w.out
}

struct PartSearch<'a> {
    matrix: &'a IncidenceMatrix,
    q: Weight,
    min: usize,
    k: usize,
    machines_in: Vec<usize>,
    /// `ones[j * k + c]`: ones of part `j` among machines of cell `c`.
    ones: Vec<usize>,
    parts_in: Vec<usize>,
    current: Vec<usize>,
    best: Option<(Efficiency, Vec<usize>)>,
    leaves: u64,
}

impl PartSearch<'_> {
    fn run(&mut self, j: usize, n_in: usize, n1_in: usize) {
        let p = self.matrix.parts();
        let deficit: usize = self.parts_in.iter().map(|&s| self.min.saturating_sub(s)).sum();
        if deficit > p - j {
            return;
        }
        if j == p {
            self.leaves += 1;
            let n_out = self.matrix.elements() - n_in;
            let n0_out = self.matrix.zeros() - (n_in - n1_in);
            let value = Efficiency::from_counts(n1_in, n_in, n0_out, n_out, self.q).expect("cells are nonempty");
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.best = Some((value, self.current.clone()));
            }
            return;
        }
        for c in 0..self.k {
            self.current[j] = c;
            self.parts_in[c] += 1;
            self.run(j + 1, n_in + self.machines_in[c], n1_in + self.ones[j * self.k + c]);
            self.parts_in[c] -= 1;
        }
    }
}

/// Best efficiency and part assignment found under one machine partition.
type PartBest = (Efficiency, Vec<usize>);

/// Optimal grouping efficiency over all solutions with `k_min..=k_max` cells.
///
/// Ties keep the first solution in enumeration order (fewest cells, then
/// lexicographically smallest machine and part assignments).
pub fn exact_best(matrix: &IncidenceMatrix, params: &OracleParams) -> Result<OracleResult> {
    let (m, p) = (matrix.machines(), matrix.parts());
    let min = if params.allow_singletons { 1 } else { 2 };
    let k_min = params.k_min.max(1);
    let k_max = params.k_max.min(matrix.max_cells());
    let ks: Vec<usize> = (k_min..=k_max).filter(|&k| k * min <= m && k * min <= p).collect();
    if ks.is_empty() {
        return Err(CfpError::NoFeasibleCells(format!(
            "no cell count in [{}, {}] fits a {m}x{p} matrix{}",
            params.k_min,
            params.k_max,
            if params.allow_singletons {
                ""
            } else {
                " without singletons"
            }
        )));
    }
    let required = ks
        .iter()
        .fold(0u128, |acc, &k| acc.saturating_add(solution_count(m, p, k, min)));
    if required > params.budget as u128 {
        return Err(CfpError::BudgetExceeded {
            required: if required == u128::MAX {
                "more than 2^128".into()
            } else {
                required.to_string()
            },
            budget: params.budget,
        });
    }

    let mut best: Option<(Efficiency, Vec<usize>, Vec<usize>)> = None;
    let mut enumerated = 0u64;
    for &k in &ks {
        let partitions = machine_partitions(m, k, min);
        let results: Vec<(u64, Option<PartBest>)> = partitions
            .par_iter()
            .map(|machine_cell| {
                let mut machines_in = vec![0; k];
                machine_cell.iter().for_each(|&c| machines_in[c] += 1);
                let mut ones = vec![0; p * k];
                for (i, row) in matrix.rows().enumerate() {
                    for (j, &a) in row.iter().enumerate() {
                        ones[j * k + machine_cell[i]] += a as usize;
                    }
                }
                let mut search = PartSearch {
                    matrix,
                    q: params.q,
                    min,
                    k,
                    machines_in,
                    ones,
                    parts_in: vec![0; k],
                    current: vec![0; p],
                    best: None,
                    leaves: 0,
                };
                search.run(0, 0, 0);
                (search.leaves, search.best)
            })
            .collect();
        for (machine_cell, (leaves, found)) in partitions.into_iter().zip(results) {
            enumerated += leaves;
            if let Some((value, part_cell)) = found {
                if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                    best = Some((value, machine_cell, part_cell));
                }
            }
        }
    }
    let (value, machine_cell, part_cell) =
        best.ok_or_else(|| CfpError::NoFeasibleCells("nothing enumerated".into()))?;
    Ok(OracleResult {
        eta: value.to_rational(),
        solution: Solution::new(matrix, machine_cell, part_cell)?,
        enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::solution::validate_solution;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn params(k_min: usize, k_max: usize, allow: bool) -> OracleParams {
        OracleParams {
            q: Weight::HALF,
            allow_singletons: allow,
            k_min,
            k_max,
            budget: DEFAULT_BUDGET,
        }
    }

    /// `k! * S(n, k)` by inclusion-exclusion: surjections onto `k` labels.
    fn surjections(n: u32, k: u32) -> i128 {
        let binom = |n: u32, r: u32| (0..r).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128);
        (0..=k)
            .map(|i| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                sign * binom(k, i) * ((k - i) as i128).pow(n)
            })
            .sum()
    }

    fn factorial(k: u32) -> i128 {
        (1..=k as i128).product()
    }

    #[test]
    fn diagonal_two_by_two() {
        let a = IncidenceMatrix::from_rows(&[[1u8, 0], [0, 1]]).unwrap();
        let res = exact_best(&a, &params(2, 2, true)).unwrap();
        assert_eq!(res.eta, r(1, 1));
        assert_eq!(res.enumerated, 2);
    }

    #[test]
    fn whole_matrix_cell() {
        let a = IncidenceMatrix::from_rows(&[[1u8, 1], [1, 1]]).unwrap();
        let res = exact_best(&a, &params(1, 1, true)).unwrap();
        assert_eq!(res.eta, r(1, 1));
        assert_eq!(res.solution.nonempty_cells(), 1);
    }

    #[test]
    fn small_reference_instance_optimum() {
        let a = instances::sample_5x7();
        let res = exact_best(&a, &params(2, 5, true)).unwrap();
        // Independently confirmed by a separate exhaustive enumeration.
        assert_eq!(res.eta, r(19, 23));
        assert_eq!(res.enumerated, 147_840);
        assert_eq!(res.solution.efficiency(Weight::HALF).unwrap(), res.eta);
        assert!(validate_solution(&a, &res.solution, true).is_ok());

        let strict = exact_best(&a, &params(2, 5, false)).unwrap();
        assert_eq!(strict.eta, r(38, 51));
        assert_eq!(strict.enumerated, 1_120);
        assert!(validate_solution(&a, &strict.solution, false).is_ok());

        let with_one = exact_best(&a, &params(1, 5, true)).unwrap();
        assert_eq!(with_one.eta, r(19, 23));
        assert_eq!(with_one.enumerated, 147_841);
    }

    #[test]
    fn counts_match_closed_form() {
        for m in 1..=5usize {
            for p in 1..=6usize {
                for k in 1..=m.min(p) {
                    let a = IncidenceMatrix::from_bits(m, p, vec![false; m * p]).unwrap();
                    let res = exact_best(&a, &params(k, k, true)).unwrap();
                    let sm = surjections(m as u32, k as u32) / factorial(k as u32);
                    let expected = sm * surjections(p as u32, k as u32);
                    assert_eq!(res.enumerated as i128, expected, "{m}x{p}, k={k}");
                    assert_eq!(solution_count(m, p, k, 1) as i128, expected);
                }
            }
        }
    }

    #[test]
    fn pair_restricted_counts() {
        // Partitions of 6 into 2 blocks of size >= 2: 15 (2+4) + 10 (3+3) = 25.
        assert_eq!(set_partition_count(6, 2, 2), 25);
        assert_eq!(set_partition_count(4, 2, 2), 3);
        assert_eq!(set_partition_count(5, 2, 2), 10);
        assert_eq!(set_partition_count(3, 2, 2), 0);
        let a = IncidenceMatrix::from_bits(4, 5, vec![true; 20]).unwrap();
        let res = exact_best(&a, &params(2, 2, false)).unwrap();
        assert_eq!(res.enumerated as u128, solution_count(4, 5, 2, 2));
    }

    #[test]
    fn invariant_under_permutations() {
        let a = instances::sample_5x7();
        let b = a.permuted(&[4, 2, 0, 3, 1], &[6, 1, 3, 0, 5, 2, 4]).unwrap();
        let pa = exact_best(&a, &params(2, 5, true)).unwrap();
        let pb = exact_best(&b, &params(2, 5, true)).unwrap();
        assert_eq!(pa.eta, pb.eta);
    }

    #[test]
    fn refuses_over_budget() {
        let a = instances::sample_8x12();
        let res = exact_best(&a, &OracleParams::for_matrix(&a));
        assert!(matches!(res, Err(CfpError::BudgetExceeded { .. })));
    }

    #[test]
    fn reports_infeasible_ranges() {
        let a = IncidenceMatrix::from_rows(&[[1u8, 0, 1], [0, 1, 1], [1, 1, 0]]).unwrap();
        assert!(matches!(
            exact_best(&a, &params(2, 3, false)),
            Err(CfpError::NoFeasibleCells(_))
        ));
    }
}
