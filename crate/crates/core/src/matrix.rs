use rand::Rng;

use crate::error::{CfpError, Result};

/// Largest supported number of matrix elements. Keeps exact efficiency
/// comparisons within 128-bit arithmetic.
pub const MAX_ELEMENTS: usize = 1_000_000;

/// Binary machine-part incidence matrix, rows are machines and columns parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceMatrix {
    machines: usize,
    parts: usize,
    bits: Vec<u8>,
    columns: Vec<u8>,
    ones: usize,
}

impl IncidenceMatrix {
    /// Builds a matrix from row-major 0/1 entries.
    pub fn from_bits(machines: usize, parts: usize, bits: Vec<bool>) -> Result<Self> {
        if machines == 0 || parts == 0 {
            return Err(CfpError::EmptyMatrix);
        }
        if machines.checked_mul(parts).is_none_or(|n| n > MAX_ELEMENTS) {
            return Err(CfpError::TooLarge {
                machines,
                parts,
                limit: MAX_ELEMENTS,
            });
        }
        if bits.len() != machines * parts {
            return Err(CfpError::DimensionMismatch {
                what: "matrix entries",
                expected: machines * parts,
                got: bits.len(),
            });
        }
        let bits: Vec<u8> = bits.into_iter().map(u8::from).collect();
        let ones = bits.iter().map(|&b| b as usize).sum();
        let columns = (0..parts)
            .flat_map(|j| (0..machines).map(move |i| (i, j)))
            .map(|(i, j)| bits[i * parts + j])
            .collect();
        Ok(Self {
            machines,
            parts,
            bits,
            columns,
            ones,
        })
    }

    /// Builds a matrix from rows of 0/1 values. Any nonzero value counts as one.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let machines = rows.len();
        let parts = rows.first().map_or(0, |r| r.as_ref().len());
        let mut bits = Vec::with_capacity(machines * parts);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != parts {
                return Err(CfpError::RaggedMatrix {
                    rows: machines,
                    row,
                    len: r.len(),
                    parts,
                });
            }
            bits.extend(r.iter().map(|&v| v != 0));
        }
        Self::from_bits(machines, parts, bits)
    }

    /// Random matrix where every entry is one with probability `density`.
    pub fn random<R: Rng + ?Sized>(machines: usize, parts: usize, density: f64, rng: &mut R) -> Result<Self> {
        let bits = (0..machines * parts)
            .map(|_| rng.random_bool(density.clamp(0.0, 1.0)))
            .collect();
        Self::from_bits(machines, parts, bits)
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    /// `m * p`.
    pub fn elements(&self) -> usize {
        self.machines * self.parts
    }

    /// Number of ones, `n1`.
    pub fn ones(&self) -> usize {
        self.ones
    }

    /// Number of zeros, `n0`.
    pub fn zeros(&self) -> usize {
        self.elements() - self.ones
    }

    /// Upper bound on the number of cells, `min(m, p)`.
    pub fn max_cells(&self) -> usize {
        self.machines.min(self.parts)
    }

    #[inline]
    pub fn get(&self, machine: usize, part: usize) -> bool {
        self.bits[machine * self.parts + part] != 0
    }

    #[inline]
    pub fn row(&self, machine: usize) -> &[u8] {
        &self.bits[machine * self.parts..(machine + 1) * self.parts]
    }

    #[inline]
    pub fn column(&self, part: usize) -> &[u8] {
        &self.columns[part * self.machines..(part + 1) * self.machines]
    }

    /// Iterator over the rows as 0/1 slices.
    pub fn rows(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.bits.chunks_exact(self.parts)
    }

    /// Copy with rows and columns reordered: row `i` of the result is row
    /// `machine_order[i]` of `self`.
    pub fn permuted(&self, machine_order: &[usize], part_order: &[usize]) -> Result<Self> {
        if machine_order.len() != self.machines {
            return Err(CfpError::DimensionMismatch {
                what: "machine order entries",
                expected: self.machines,
                got: machine_order.len(),
            });
        }
        if part_order.len() != self.parts {
            return Err(CfpError::DimensionMismatch {
                what: "part order entries",
                expected: self.parts,
                got: part_order.len(),
            });
        }
        let bits = machine_order
            .iter()
            .flat_map(|&i| part_order.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self::from_bits(self.machines, self.parts, bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_ones_and_zeros() {
        let a = IncidenceMatrix::from_rows(&[[1u8, 0, 1], [0, 0, 1]]).unwrap();
        assert_eq!(a.machines(), 2);
        assert_eq!(a.parts(), 3);
        assert_eq!(a.ones(), 3);
        assert_eq!(a.zeros(), 3);
        assert_eq!(a.ones() + a.zeros(), a.elements());
        assert!(a.get(1, 2));
        assert_eq!(a.column(2), &[1, 1]);
        assert_eq!(a.row(0), &[1, 0, 1]);
        assert!(!a.get(1, 0));
        assert_eq!(a.max_cells(), 2);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(IncidenceMatrix::from_rows::<[u8; 0]>(&[]), Err(CfpError::EmptyMatrix));
        assert!(matches!(
            IncidenceMatrix::from_rows(&[vec![1u8, 0], vec![1]]),
            Err(CfpError::RaggedMatrix { row: 1, .. })
        ));
        assert!(matches!(
            IncidenceMatrix::from_bits(1001, 1000, vec![]),
            Err(CfpError::TooLarge { .. })
        ));
    }

    #[test]
    fn permutation_moves_rows_and_columns() {
        let a = IncidenceMatrix::from_rows(&[[1u8, 0], [0, 0]]).unwrap();
        let b = a.permuted(&[1, 0], &[1, 0]).unwrap();
        assert!(b.get(1, 1));
        assert_eq!(b.ones(), 1);
    }
}
