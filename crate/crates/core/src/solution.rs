use std::fmt;

use crate::error::{CfpError, Result};
use crate::matrix::IncidenceMatrix;
use crate::metrics::{compute_counters, Counters, Efficiency, Rational, Weight};

/// Per-cell machine and part counts `(m_k, p_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellConfiguration {
    cells: Vec<(usize, usize)>,
}

impl CellConfiguration {
    /// Every cell needs at least `min_size` machines and parts.
    pub fn new(cells: Vec<(usize, usize)>, min_size: usize) -> Result<Self> {
        if cells.is_empty() {
            return Err(CfpError::InvalidConfiguration("no cells".into()));
        }
        let min_size = min_size.max(1);
        if let Some((k, &(m, p))) = cells
            .iter()
            .enumerate()
            .find(|(_, &(m, p))| m < min_size || p < min_size)
        {
            return Err(CfpError::InvalidConfiguration(format!(
                "cell {} has {m} machines and {p} parts, minimum is {min_size}",
                k + 1
            )));
        }
        Ok(Self { cells })
    }

    /// Pairs two partitions cell by cell.
    pub fn from_partitions(machines: &[usize], parts: &[usize], min_size: usize) -> Result<Self> {
        if machines.len() != parts.len() {
            return Err(CfpError::InvalidConfiguration(format!(
                "{} machine groups but {} part groups",
                machines.len(),
                parts.len()
            )));
        }
        Self::new(machines.iter().copied().zip(parts.iter().copied()).collect(), min_size)
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// Number of cells `k`.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn total_machines(&self) -> usize {
        self.cells.iter().map(|c| c.0).sum()
    }

    pub fn total_parts(&self) -> usize {
        self.cells.iter().map(|c| c.1).sum()
    }

    /// Elements inside cells, `sum m_k * p_k`.
    pub fn elements_inside(&self) -> usize {
        self.cells.iter().map(|&(m, p)| m * p).sum()
    }

    pub fn check_fits(&self, matrix: &IncidenceMatrix) -> Result<()> {
        if self.total_machines() != matrix.machines() {
            return Err(CfpError::DimensionMismatch {
                what: "machines in configuration",
                expected: matrix.machines(),
                got: self.total_machines(),
            });
        }
        if self.total_parts() != matrix.parts() {
            return Err(CfpError::DimensionMismatch {
                what: "parts in configuration",
                expected: matrix.parts(),
                got: self.total_parts(),
            });
        }
        Ok(())
    }
}

/// Assignment of every machine and part to a cell, with cached counts.
///
/// Cells are labelled `0..cells()`. A label may end up with neither machines
/// nor parts; such a cell is empty and ignored by the objectives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    machine_cell: Vec<usize>,
    part_cell: Vec<usize>,
    machines_in: Vec<usize>,
    parts_in: Vec<usize>,
    counters: Counters,
}

impl Solution {
    pub fn new(matrix: &IncidenceMatrix, machine_cell: Vec<usize>, part_cell: Vec<usize>) -> Result<Self> {
        let counters = compute_counters(matrix, &machine_cell, &part_cell)?;
        let cells = machine_cell.iter().chain(&part_cell).max().map_or(0, |&c| c + 1);
        let mut machines_in = vec![0; cells];
        let mut parts_in = vec![0; cells];
        machine_cell.iter().for_each(|&c| machines_in[c] += 1);
        part_cell.iter().for_each(|&c| parts_in[c] += 1);
        Ok(Self {
            machine_cell,
            part_cell,
            machines_in,
            parts_in,
            counters,
        })
    }

    /// Builds a solution from 1-based cell numbers.
    pub fn from_one_based(matrix: &IncidenceMatrix, machine_cell: &[usize], part_cell: &[usize]) -> Result<Self> {
        let shift = |v: &[usize]| -> Result<Vec<usize>> {
            v.iter()
                .map(|&c| {
                    c.checked_sub(1)
                        .ok_or_else(|| CfpError::InvalidConfiguration("cell numbers start at 1".into()))
                })
                .collect()
        };
        Self::new(matrix, shift(machine_cell)?, shift(part_cell)?)
    }

    pub fn machine_cell(&self) -> &[usize] {
        &self.machine_cell
    }

    pub fn part_cell(&self) -> &[usize] {
        &self.part_cell
    }

    /// Number of cell labels, including empty ones.
    pub fn cells(&self) -> usize {
        self.machines_in.len()
    }

    pub fn machines_in(&self, cell: usize) -> usize {
        self.machines_in[cell]
    }

    pub fn parts_in(&self, cell: usize) -> usize {
        self.parts_in[cell]
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    /// Cells holding at least one machine or part.
    pub fn nonempty_cells(&self) -> usize {
        self.machines_in
            .iter()
            .zip(&self.parts_in)
            .filter(|&(&m, &p)| m > 0 || p > 0)
            .count()
    }

    /// Configuration induced by the nonempty cells, in label order.
    pub fn configuration(&self) -> CellConfiguration {
        CellConfiguration {
            cells: self
                .machines_in
                .iter()
                .zip(&self.parts_in)
                .filter(|&(&m, &p)| m > 0 || p > 0)
                .map(|(&m, &p)| (m, p))
                .collect(),
        }
    }

    pub fn efficiency_value(&self, q: Weight) -> Option<Efficiency> {
        Efficiency::of(&self.counters, q)
    }

    pub fn efficiency(&self, q: Weight) -> Result<Rational> {
        crate::metrics::grouping_efficiency(&self.counters, q)
    }

    /// Machines of `cell`, ascending.
    pub fn machines_of(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        self.machine_cell
            .iter()
            .enumerate()
            .filter(move |&(_, &c)| c == cell)
            .map(|(i, _)| i)
    }

    /// Parts of `cell`, ascending.
    pub fn parts_of(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        self.part_cell
            .iter()
            .enumerate()
            .filter(move |&(_, &c)| c == cell)
            .map(|(j, _)| j)
    }

    pub(crate) fn relocate_machine(
        &mut self,
        matrix: &IncidenceMatrix,
        machine: usize,
        to: usize,
        d_in: isize,
        d_ones: isize,
    ) {
        let from = self.machine_cell[machine];
        self.machine_cell[machine] = to;
        self.machines_in[from] -= 1;
        self.machines_in[to] += 1;
        self.shift_counters(matrix, d_in, d_ones);
    }

    pub(crate) fn relocate_part(
        &mut self,
        matrix: &IncidenceMatrix,
        part: usize,
        to: usize,
        d_in: isize,
        d_ones: isize,
    ) {
        let from = self.part_cell[part];
        self.part_cell[part] = to;
        self.parts_in[from] -= 1;
        self.parts_in[to] += 1;
        self.shift_counters(matrix, d_in, d_ones);
    }

    fn shift_counters(&mut self, matrix: &IncidenceMatrix, d_in: isize, d_ones: isize) {
        let n_in = self.counters.n_in.checked_add_signed(d_in).expect("n_in underflow");
        let n1_in = self.counters.n1_in.checked_add_signed(d_ones).expect("n1_in underflow");
        self.counters = Counters::from_inside(matrix, n_in, n1_in);
    }
}

/// First violated feasibility condition of a solution. Cell and entity
/// numbers print 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// A cell has machines but no parts.
    MachinesWithoutParts {
        cell: usize,
    },
    /// A cell has parts but no machines.
    PartsWithoutMachines {
        cell: usize,
    },
    TooFewMachines {
        cell: usize,
        machines: usize,
    },
    TooFewParts {
        cell: usize,
        parts: usize,
    },
    /// Cached counts differ from a recomputation.
    StaleCounters {
        cached: Box<Counters>,
        actual: Box<Counters>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { what, expected, got } => {
                write!(f, "expected {expected} {what}, got {got}")
            }
            Violation::MachinesWithoutParts { cell } => {
                write!(f, "cell {} has machines but no parts", cell + 1)
            }
            Violation::PartsWithoutMachines { cell } => {
                write!(f, "cell {} has parts but no machines", cell + 1)
            }
            Violation::TooFewMachines { cell, machines } => {
                write!(
                    f,
                    "cell {} has {machines} machine(s), singletons are not allowed",
                    cell + 1
                )
            }
            Violation::TooFewParts { cell, parts } => {
                write!(f, "cell {} has {parts} part(s), singletons are not allowed", cell + 1)
            }
            Violation::StaleCounters { cached, actual } => {
                write!(f, "cached counters {cached:?} differ from recomputed {actual:?}")
            }
        }
    }
}

impl std::error::Error for Violation {}

/// Checks that every nonempty cell has a machine and a part, and with
/// `allow_singletons == false` at least two of each.
pub fn validate_solution(matrix: &IncidenceMatrix, s: &Solution, allow_singletons: bool) -> Result<(), Violation> {
    if s.machine_cell.len() != matrix.machines() {
        return Err(Violation::DimensionMismatch {
            what: "machine assignments",
            expected: matrix.machines(),
            got: s.machine_cell.len(),
        });
    }
    if s.part_cell.len() != matrix.parts() {
        return Err(Violation::DimensionMismatch {
            what: "part assignments",
            expected: matrix.parts(),
            got: s.part_cell.len(),
        });
    }
    let min = if allow_singletons { 1 } else { 2 };
    for cell in 0..s.cells() {
        let (machines, parts) = (s.machines_in[cell], s.parts_in[cell]);
        match (machines, parts) {
            (0, 0) => continue,
            (_, 0) => return Err(Violation::MachinesWithoutParts { cell }),
            (0, _) => return Err(Violation::PartsWithoutMachines { cell }),
            _ if machines < min => return Err(Violation::TooFewMachines { cell, machines }),
            _ if parts < min => return Err(Violation::TooFewParts { cell, parts }),
            _ => {}
        }
    }
    let actual = compute_counters(matrix, &s.machine_cell, &s.part_cell).expect("dimensions checked");
    if actual != s.counters {
        return Err(Violation::StaleCounters {
            cached: Box::new(s.counters),
            actual: Box::new(actual),
        });
    }
    Ok(())
}
