//! Multistart search: a coarse pass over every cell count picks a promising
//! range, then many random configurations in that range are improved and the
//! best result kept.
//!
//! Work items are independent. Configuration `i` of a phase draws its
//! starting permutation from its own stream, and the reduction picks the
//! highest efficiency with the lowest index on ties, so the outcome does not
//! depend on the number of worker threads.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::config::{generate_configs, random_initial_solution, RandomSource};
use crate::error::{CfpError, Result};
use crate::improve::improve_solution;
use crate::matrix::IncidenceMatrix;
use crate::metrics::{exceptions_plus_voids, group_capability_index, grouping_efficacy, Efficiency, Rational, Weight};
use crate::solution::{CellConfiguration, Solution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveParams {
    pub q: Weight,
    /// Configurations per cell count in the main phase.
    pub configs_per_k: usize,
    /// Configurations per cell count when searching for the cell range.
    pub range_configs_per_k: usize,
    pub allow_singletons: bool,
    pub seed: u64,
    /// Fixed `(min_cells, max_cells)`; skips the range search.
    pub cell_range: Option<(usize, usize)>,
    /// Worker thread cap. `None` uses the global pool.
    pub threads: Option<usize>,
    /// Keep the efficiency reached from every main-phase configuration.
    pub trace: bool,
}

impl Default for SolveParams {
    fn default() -> Self {
        Self {
            q: Weight::HALF,
            configs_per_k: 2000,
            range_configs_per_k: 500,
            allow_singletons: true,
            seed: 0,
            cell_range: None,
            threads: None,
            trace: false,
        }
    }
}

impl SolveParams {
    fn min_part(&self) -> usize {
        if self.allow_singletons {
            1
        } else {
            2
        }
    }

    fn validate(&self, matrix: &IncidenceMatrix) -> Result<()> {
        if self.configs_per_k == 0 || self.range_configs_per_k == 0 {
            return Err(CfpError::InvalidConfiguration(
                "configuration counts must be positive".into(),
            ));
        }
        let limit = matrix.max_cells();
        if limit < 2 {
            return Err(CfpError::NoFeasibleCells(format!(
                "a {}x{} matrix cannot be split into two cells",
                matrix.machines(),
                matrix.parts()
            )));
        }
        if !self.allow_singletons && limit < 4 {
            return Err(CfpError::NoFeasibleCells(format!(
                "a {}x{} matrix has no two-cell solution without singletons",
                matrix.machines(),
                matrix.parts()
            )));
        }
        if let Some((min, max)) = self.cell_range {
            if min < 2 || min > max || max > limit {
                return Err(CfpError::InvalidCellRange { min, max, limit });
            }
        }
        Ok(())
    }
}

/// Efficiency reached from one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub config_index: usize,
    pub cells: usize,
    pub eta: Rational,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Solution,
    pub eta: Rational,
    pub efficacy: Rational,
    pub gci: Rational,
    pub exceptions_plus_voids: usize,
    /// Nonempty cells of the best solution.
    pub cells: usize,
    pub cell_range: (usize, usize),
    pub elapsed: Duration,
    pub seed: u64,
    pub trace: Option<Vec<TraceEntry>>,
}

impl SolveReport {
    fn new(
        solution: Solution,
        q: Weight,
        cell_range: (usize, usize),
        elapsed: Duration,
        seed: u64,
        trace: Option<Vec<TraceEntry>>,
    ) -> Result<Self> {
        let c = *solution.counters();
        Ok(Self {
            eta: solution.efficiency(q)?,
            efficacy: grouping_efficacy(&c)?,
            gci: group_capability_index(&c)?,
            exceptions_plus_voids: exceptions_plus_voids(&c),
            cells: solution.nonempty_cells(),
            cell_range,
            elapsed,
            seed,
            trace,
            solution,
        })
    }

    /// Equality of everything except the wall time.
    pub fn same_outcome(&self, other: &SolveReport) -> bool {
        self.solution == other.solution
            && self.eta == other.eta
            && self.efficacy == other.efficacy
            && self.gci == other.gci
            && self.exceptions_plus_voids == other.exceptions_plus_voids
            && self.cells == other.cells
            && self.cell_range == other.cell_range
            && self.seed == other.seed
            && self.trace == other.trace
    }
}

#[derive(Debug, Clone)]
pub struct MultiRunReport {
    pub min: Rational,
    pub avg: Rational,
    pub max: Rational,
    pub reports: Vec<SolveReport>,
}

impl MultiRunReport {
    /// Highest-efficiency run, earliest on ties.
    pub fn best(&self) -> &SolveReport {
        self.reports
            .iter()
            .reduce(|a, b| if b.eta > a.eta { b } else { a })
            .expect("at least one run")
    }

    /// Mean wall time per run.
    pub fn mean_elapsed(&self) -> Duration {
        let total: Duration = self.reports.iter().map(|r| r.elapsed).sum();
        total / self.reports.len() as u32
    }
}

#[derive(Debug, Clone, Copy)]
enum Phase {
    Range = 0,
    Main = 1,
}

fn stream(phase: Phase, index: u64) -> u64 {
    ((phase as u64) << 48) | index
}

struct Outcome {
    solution: Solution,
    config_index: usize,
    trace: Option<Vec<TraceEntry>>,
}

fn run_configs(
    matrix: &IncidenceMatrix,
    configs: &[CellConfiguration],
    params: &SolveParams,
    phase: Phase,
    keep_trace: bool,
) -> Result<Outcome> {
    if configs.is_empty() {
        return Err(CfpError::NoConfigurations);
    }
    let q = params.q;
    let improved: Vec<(usize, Solution, Efficiency)> = configs
        .par_iter()
        .enumerate()
        .map(|(i, config)| {
            let mut rng = RandomSource::new(params.seed, stream(phase, i as u64 + 1)).rng();
            let start = random_initial_solution(matrix, config, &mut rng)?;
            let s = improve_solution(matrix, &start, q, params.allow_singletons);
            let eta = s
                .efficiency_value(q)
                .ok_or(CfpError::ZeroDenominator("grouping efficiency"))?;
            Ok((i, s, eta))
        })
        .collect::<Result<_>>()?;
    let trace = keep_trace.then(|| {
        improved
            .iter()
            .map(|(i, s, eta)| TraceEntry {
                config_index: *i,
                cells: s.nonempty_cells(),
                eta: eta.to_rational(),
            })
            .collect()
    });
    let (config_index, solution, _) = improved
        .into_iter()
        .reduce(|a, b| if b.2 > a.2 { b } else { a })
        .expect("nonempty");
    Ok(Outcome {
        solution,
        config_index,
        trace,
    })
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| CfpError::InvalidConfiguration(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Improves a random start for every configuration and returns the best
/// result, lowest configuration index on ties.
pub fn cm_heuristic(matrix: &IncidenceMatrix, configs: &[CellConfiguration], params: &SolveParams) -> Result<Solution> {
    with_threads(params.threads, || {
        run_configs(matrix, configs, params, Phase::Main, false)
    })?
    .map(|o| o.solution)
}

/// `best ± floor(min_dimension / 10)`, clamped to `[2, min_dimension]`.
pub fn cell_range_around(best_cells: usize, min_dimension: usize) -> (usize, usize) {
    let spread = min_dimension / 10;
    let lo = best_cells.saturating_sub(spread).max(2);
    let hi = (best_cells + spread).min(min_dimension);
    (lo.min(hi), hi)
}

/// Range of promising cell counts around the winner of a coarse search over
/// every cell count in `[2, min(m, p)]`.
pub fn find_optimal_cell_range(matrix: &IncidenceMatrix, params: &SolveParams) -> Result<(usize, usize)> {
    params.validate(matrix)?;
    with_threads(params.threads, || range_search(matrix, params))?
}

fn range_search(matrix: &IncidenceMatrix, params: &SolveParams) -> Result<(usize, usize)> {
    let min_dimension = matrix.max_cells();
    let mut rng = RandomSource::new(params.seed, stream(Phase::Range, 0)).rng();
    let configs = generate_configs(
        2,
        min_dimension,
        params.range_configs_per_k,
        matrix.machines(),
        matrix.parts(),
        params.min_part(),
        &mut rng,
    );
    let outcome = run_configs(matrix, &configs, params, Phase::Range, false)?;
    Ok(cell_range_around(outcome.solution.nonempty_cells(), min_dimension))
}

/// Range search (unless a range is given), then the main multistart.
pub fn solve(matrix: &IncidenceMatrix, params: &SolveParams) -> Result<SolveReport> {
    params.validate(matrix)?;
    with_threads(params.threads, || solve_in_pool(matrix, params))?
}

fn solve_in_pool(matrix: &IncidenceMatrix, params: &SolveParams) -> Result<SolveReport> {
    let started = Instant::now();
    let cell_range = match params.cell_range {
        Some(range) => range,
        None => range_search(matrix, params)?,
    };
    let mut rng = RandomSource::new(params.seed, stream(Phase::Main, 0)).rng();
    let configs = generate_configs(
        cell_range.0,
        cell_range.1,
        params.configs_per_k,
        matrix.machines(),
        matrix.parts(),
        params.min_part(),
        &mut rng,
    );
    if configs.is_empty() {
        return Err(CfpError::NoFeasibleCells(format!(
            "no cell count in [{}, {}] is feasible",
            cell_range.0, cell_range.1
        )));
    }
    let outcome = run_configs(matrix, &configs, params, Phase::Main, params.trace)?;
    debug_assert!(outcome.config_index < configs.len());
    SolveReport::new(
        outcome.solution,
        params.q,
        cell_range,
        started.elapsed(),
        params.seed,
        outcome.trace,
    )
}

/// `runs` solves with seeds `seed, seed + 1, ...` and their min/avg/max efficiency.
pub fn multirun(matrix: &IncidenceMatrix, params: &SolveParams, runs: usize) -> Result<MultiRunReport> {
    if runs == 0 {
        return Err(CfpError::InvalidConfiguration("at least one run is required".into()));
    }
    params.validate(matrix)?;
    let reports = with_threads(params.threads, || {
        (0..runs as u64)
            .map(|r| {
                let run = SolveParams {
                    seed: params.seed.wrapping_add(r),
                    ..params.clone()
                };
                solve_in_pool(matrix, &run)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let etas = reports.iter().map(|r| r.eta);
    let min = etas.clone().min().expect("runs > 0");
    let max = etas.clone().max().expect("runs > 0");
    let avg = etas.sum::<Rational>() / Rational::from_integer(runs as i128);
    Ok(MultiRunReport { min, avg, max, reports })
}
