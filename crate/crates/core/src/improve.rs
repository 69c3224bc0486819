//! Greedy relocation search.
//!
//! Each round evaluates relocating every part and every machine to every
//! other nonempty cell, picks the best part move and the best machine move,
//! and applies whichever raises grouping efficiency more. Ties go to the
//! machine move; within a kind, to the lowest index and then lowest target
//! cell. The search stops when no move is strictly improving.
//!
//! A part move only needs the ones of that column per machine cell, so a
//! candidate costs `O(m)` to set up and `O(1)` per target cell. Machines are
//! symmetric with rows and part cells.

use std::fmt;

use crate::error::{CfpError, Result};
use crate::matrix::IncidenceMatrix;
use crate::metrics::{Efficiency, Rational, Weight};
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Machine,
    Part,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::Machine => "machine",
            MoveKind::Part => "part",
        })
    }
}

/// Relocation of one machine or part, with the exact efficiency change it
/// causes on the solution it was evaluated against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    pub index: usize,
    pub from_cell: usize,
    pub to_cell: usize,
    pub delta: Rational,
}

impl Move {
    /// The move that undoes this one.
    pub fn reversed(&self) -> Move {
        Move {
            kind: self.kind,
            index: self.index,
            from_cell: self.to_cell,
            to_cell: self.from_cell,
            delta: -self.delta,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: cell {} -> {} ({})",
            self.kind,
            self.index + 1,
            self.from_cell + 1,
            self.to_cell + 1,
            self.delta
        )
    }
}

fn min_size(allow_singletons: bool) -> usize {
    if allow_singletons {
        1
    } else {
        2
    }
}

/// Changes `(d_in, d_ones)` of `n_in` and `n1_in` for relocating `index`
/// from `from` to `to`. `line` is the row or column of the entity, `cells`
/// the opposite side's assignment and `sizes` the opposite side's cell sizes.
#[inline]
fn line_delta(line: &[u8], cells: &[usize], sizes: &[usize], from: usize, to: usize) -> (isize, isize) {
    let (mut ones_from, mut ones_to) = (0isize, 0isize);
    for (&a, &c) in line.iter().zip(cells) {
        if a != 0 {
            if c == from {
                ones_from += 1;
            } else if c == to {
                ones_to += 1;
            }
        }
    }
    (sizes[to] as isize - sizes[from] as isize, ones_to - ones_from)
}

struct Sides<'a> {
    line: &'a [u8],
    /// Assignment of the opposite side.
    other_cells: &'a [usize],
    /// Per-cell sizes of the opposite side.
    other_sizes: Vec<usize>,
    /// Per-cell sizes of the moving entity's side.
    own_sizes: Vec<usize>,
    from: usize,
}

fn sides<'a>(matrix: &'a IncidenceMatrix, s: &'a Solution, kind: MoveKind, index: usize) -> Sides<'a> {
    let machines: Vec<usize> = (0..s.cells()).map(|c| s.machines_in(c)).collect();
    let parts: Vec<usize> = (0..s.cells()).map(|c| s.parts_in(c)).collect();
    match kind {
        MoveKind::Part => Sides {
            line: matrix.column(index),
            other_cells: s.machine_cell(),
            other_sizes: machines,
            own_sizes: parts,
            from: s.part_cell()[index],
        },
        MoveKind::Machine => Sides {
            line: matrix.row(index),
            other_cells: s.part_cell(),
            other_sizes: parts,
            own_sizes: machines,
            from: s.machine_cell()[index],
        },
    }
}

fn entity_count(matrix: &IncidenceMatrix, kind: MoveKind) -> usize {
    match kind {
        MoveKind::Machine => matrix.machines(),
        MoveKind::Part => matrix.parts(),
    }
}

fn efficiency_after(matrix: &IncidenceMatrix, s: &Solution, d_in: isize, d_ones: isize, q: Weight) -> Efficiency {
    let n_in = s.counters().n_in.wrapping_add_signed(d_in);
    let n1_in = s.counters().n1_in.wrapping_add_signed(d_ones);
    efficiency_at(matrix, n_in, n1_in, q)
}

#[inline]
fn efficiency_at(matrix: &IncidenceMatrix, n_in: usize, n1_in: usize, q: Weight) -> Efficiency {
    let n_out = matrix.elements() - n_in;
    let n0_out = matrix.zeros() - (n_in - n1_in);
    Efficiency::from_counts(n1_in, n_in, n0_out, n_out, q).expect("feasible solutions have elements inside cells")
}

/// Checks a relocation and returns its `(d_in, d_ones)`.
fn checked_delta(
    matrix: &IncidenceMatrix,
    s: &Solution,
    kind: MoveKind,
    index: usize,
    to: usize,
    allow_singletons: bool,
) -> Result<(usize, isize, isize)> {
    if index >= entity_count(matrix, kind)
        || s.machine_cell().len() != matrix.machines()
        || s.part_cell().len() != matrix.parts()
    {
        return Err(CfpError::InfeasibleMove(format!(
            "{kind} {} is out of range",
            index + 1
        )));
    }
    let sd = sides(matrix, s, kind, index);
    if to >= s.cells() || to == sd.from {
        return Err(CfpError::InfeasibleMove(format!(
            "{kind} {} cannot move from cell {} to cell {}",
            index + 1,
            sd.from + 1,
            to + 1
        )));
    }
    if sd.other_sizes[to] == 0 {
        return Err(CfpError::InfeasibleMove(format!("cell {} is empty", to + 1)));
    }
    let min = min_size(allow_singletons);
    if sd.own_sizes[sd.from] <= min {
        return Err(CfpError::InfeasibleMove(format!(
            "moving {kind} {} would leave cell {} with fewer than {min}",
            index + 1,
            sd.from + 1
        )));
    }
    let (d_in, d_ones) = line_delta(sd.line, sd.other_cells, &sd.other_sizes, sd.from, to);
    Ok((sd.from, d_in, d_ones))
}

fn evaluate(
    matrix: &IncidenceMatrix,
    s: &Solution,
    kind: MoveKind,
    index: usize,
    to: usize,
    q: Weight,
    allow_singletons: bool,
) -> Result<Move> {
    let (from, d_in, d_ones) = checked_delta(matrix, s, kind, index, to, allow_singletons)?;
    let current = s
        .efficiency_value(q)
        .ok_or(CfpError::ZeroDenominator("grouping efficiency"))?;
    let after = efficiency_after(matrix, s, d_in, d_ones, q);
    Ok(Move {
        kind,
        index,
        from_cell: from,
        to_cell: to,
        delta: after.to_rational() - current.to_rational(),
    })
}

/// Efficiency change of moving `part` to cell `to`. The solution is not modified.
pub fn move_delta_part(
    matrix: &IncidenceMatrix,
    s: &Solution,
    part: usize,
    to: usize,
    q: Weight,
    allow_singletons: bool,
) -> Result<Move> {
    evaluate(matrix, s, MoveKind::Part, part, to, q, allow_singletons)
}

/// Efficiency change of moving `machine` to cell `to`. The solution is not modified.
pub fn move_delta_machine(
    matrix: &IncidenceMatrix,
    s: &Solution,
    machine: usize,
    to: usize,
    q: Weight,
    allow_singletons: bool,
) -> Result<Move> {
    evaluate(matrix, s, MoveKind::Machine, machine, to, q, allow_singletons)
}

/// Best feasible move of `machine` to any other cell, or `None` if it cannot move.
pub fn best_machine_move(
    matrix: &IncidenceMatrix,
    s: &Solution,
    machine: usize,
    q: Weight,
    allow_singletons: bool,
) -> Option<Move> {
    (0..s.cells())
        .filter_map(|to| move_delta_machine(matrix, s, machine, to, q, allow_singletons).ok())
        .fold(None, |best: Option<Move>, mv| match best {
            Some(b) if b.delta >= mv.delta => Some(b),
            _ => Some(mv),
        })
}

/// Applies `mv` to a copy of `s`. The move's endpoints are checked against
/// the current assignment and the counts are updated incrementally.
pub fn apply_move(matrix: &IncidenceMatrix, s: &Solution, mv: &Move, allow_singletons: bool) -> Result<Solution> {
    let mut out = s.clone();
    apply_in_place(
        matrix,
        &mut out,
        mv.kind,
        mv.index,
        mv.from_cell,
        mv.to_cell,
        allow_singletons,
    )?;
    Ok(out)
}

fn apply_in_place(
    matrix: &IncidenceMatrix,
    s: &mut Solution,
    kind: MoveKind,
    index: usize,
    from: usize,
    to: usize,
    allow_singletons: bool,
) -> Result<()> {
    let (actual_from, d_in, d_ones) = checked_delta(matrix, s, kind, index, to, allow_singletons)?;
    if actual_from != from {
        return Err(CfpError::InfeasibleMove(format!(
            "{kind} {} is in cell {}, not {}",
            index + 1,
            actual_from + 1,
            from + 1
        )));
    }
    match kind {
        MoveKind::Machine => s.relocate_machine(matrix, index, to, d_in, d_ones),
        MoveKind::Part => s.relocate_part(matrix, index, to, d_in, d_ones),
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Candidate {
    value: Efficiency,
    index: usize,
    to: usize,
    d_in: isize,
    d_ones: isize,
}

/// Best strictly-better-than-seen move of one kind; first found wins ties.
fn scan(
    matrix: &IncidenceMatrix,
    s: &Solution,
    kind: MoveKind,
    q: Weight,
    min: usize,
    ones_per_cell: &mut [isize],
) -> Option<Candidate> {
    let cells = s.cells();
    let (own_cells, other_cells) = match kind {
        MoveKind::Part => (s.part_cell(), s.machine_cell()),
        MoveKind::Machine => (s.machine_cell(), s.part_cell()),
    };
    let own_size = |c: usize| match kind {
        MoveKind::Part => s.parts_in(c),
        MoveKind::Machine => s.machines_in(c),
    };
    let other_size = |c: usize| match kind {
        MoveKind::Part => s.machines_in(c),
        MoveKind::Machine => s.parts_in(c),
    };
    let (n_in, n1_in) = (s.counters().n_in as isize, s.counters().n1_in as isize);
    let mut best: Option<Candidate> = None;
    for (index, &from) in own_cells.iter().enumerate() {
        if own_size(from) <= min {
            continue;
        }
        let line = match kind {
            MoveKind::Part => matrix.column(index),
            MoveKind::Machine => matrix.row(index),
        };
        ones_per_cell.iter_mut().for_each(|v| *v = 0);
        for (&a, &c) in line.iter().zip(other_cells) {
            ones_per_cell[c] += a as isize;
        }
        for to in 0..cells {
            if to == from || other_size(to) == 0 {
                continue;
            }
            let d_in = other_size(to) as isize - other_size(from) as isize;
            let d_ones = ones_per_cell[to] - ones_per_cell[from];
            let value = efficiency_at(matrix, (n_in + d_in) as usize, (n1_in + d_ones) as usize, q);
            if best.is_none_or(|b| value > b.value) {
                best = Some(Candidate {
                    value,
                    index,
                    to,
                    d_in,
                    d_ones,
                });
            }
        }
    }
    best
}

/// Improves `s` until no single relocation raises efficiency. Returns the
/// final solution and the applied moves in order.
pub fn improve_with_trace(
    matrix: &IncidenceMatrix,
    s: &Solution,
    q: Weight,
    allow_singletons: bool,
) -> (Solution, Vec<Move>) {
    let mut s = s.clone();
    let mut trace = Vec::new();
    improve_loop(matrix, &mut s, q, allow_singletons, Some(&mut trace));
    (s, trace)
}

/// Improves `s` until no single relocation raises efficiency.
pub fn improve_solution(matrix: &IncidenceMatrix, s: &Solution, q: Weight, allow_singletons: bool) -> Solution {
    let mut s = s.clone();
    improve_loop(matrix, &mut s, q, allow_singletons, None);
    s
}

fn improve_loop(
    matrix: &IncidenceMatrix,
    s: &mut Solution,
    q: Weight,
    allow_singletons: bool,
    mut trace: Option<&mut Vec<Move>>,
) {
    let min = min_size(allow_singletons);
    let mut ones_per_cell = vec![0isize; s.cells()];
    let Some(mut current) = s.efficiency_value(q) else {
        return;
    };
    loop {
        let best_part = scan(matrix, s, MoveKind::Part, q, min, &mut ones_per_cell);
        let best_machine = scan(matrix, s, MoveKind::Machine, q, min, &mut ones_per_cell);
        let (kind, best) = match (best_part, best_machine) {
            (Some(p), Some(m)) if p.value > m.value => (MoveKind::Part, p),
            (_, Some(m)) => (MoveKind::Machine, m),
            (Some(p), None) => (MoveKind::Part, p),
            (None, None) => break,
        };
        if best.value <= current {
            break;
        }
        let from = match kind {
            MoveKind::Part => s.part_cell()[best.index],
            MoveKind::Machine => s.machine_cell()[best.index],
        };
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(Move {
                kind,
                index: best.index,
                from_cell: from,
                to_cell: best.to,
                delta: best.value.to_rational() - current.to_rational(),
            });
        }
        match kind {
            MoveKind::Machine => s.relocate_machine(matrix, best.index, best.to, best.d_in, best.d_ones),
            MoveKind::Part => s.relocate_part(matrix, best.index, best.to, best.d_in, best.d_ones),
        }
        current = best.value;
    }
}
