//! Cell formation: grouping machines and parts of a binary incidence matrix
//! into cells so that ones fall inside the diagonal blocks.
//!
//! The crate provides the grouping objectives ([`metrics`]), configuration
//! sampling ([`config`]), the relocation improvement procedure
//! ([`improve`]), the multistart solver ([`search`]) and an exhaustive
//! optimizer for tiny instances ([`oracle`]).

pub mod config;
pub mod error;
pub mod improve;
pub mod instances;
pub mod matrix;
pub mod metrics;
pub mod oracle;
pub mod search;
pub mod solution;

pub use config::{
    count_partitions, generate_configs, random_initial_solution, sample_partition_uniform, PartitionSpec,
    PartitionTable, RandomSource,
};
pub use error::{CfpError, Result};
pub use improve::{
    apply_move, improve_solution, improve_with_trace, move_delta_machine, move_delta_part, Move, MoveKind,
};
pub use matrix::IncidenceMatrix;
pub use metrics::{
    compare_efficiency, compute_counters, exceptions_plus_voids, group_capability_index, grouping_efficacy,
    grouping_efficiency, percent, Counters, Efficiency, Rational, Weight,
};
pub use oracle::{exact_best, OracleParams, OracleResult};
pub use search::{cm_heuristic, find_optimal_cell_range, multirun, solve, MultiRunReport, SolveParams, SolveReport};
pub use solution::{validate_solution, CellConfiguration, Solution, Violation};
