//! Two small published instances with reference solutions, used by tests,
//! benches and the CLI's bundled data.

use crate::matrix::IncidenceMatrix;
use crate::solution::Solution;

const SAMPLE_5X7: [[u8; 7]; 5] = [
    [1, 0, 0, 0, 1, 1, 1],
    [0, 1, 1, 1, 1, 0, 0],
    [0, 0, 1, 1, 1, 1, 0],
    [1, 1, 1, 1, 0, 0, 0],
    [0, 1, 0, 1, 1, 1, 0],
];

const SAMPLE_8X12: [[u8; 12]; 8] = [
    [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 1, 1, 1, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
];

/// 5 machines x 7 parts, 20 ones.
pub fn sample_5x7() -> IncidenceMatrix {
    IncidenceMatrix::from_rows(&SAMPLE_5X7).expect("valid literal")
}

/// 8 machines x 12 parts, 35 ones.
pub fn sample_8x12() -> IncidenceMatrix {
    IncidenceMatrix::from_rows(&SAMPLE_8X12).expect("valid literal")
}

/// Two cells on the 5x7 instance: `{m1} x {p1, p6, p7}` is a singleton cell.
/// Efficiency 121/152.
pub fn sample_5x7_with_singleton() -> Solution {
    Solution::new(&sample_5x7(), vec![0, 1, 1, 1, 1], vec![0, 1, 1, 1, 1, 0, 0]).expect("valid literal")
}

/// Two cells on the 5x7 instance, each with at least two machines and parts.
pub fn sample_5x7_without_singletons() -> Solution {
    Solution::new(&sample_5x7(), vec![0, 1, 1, 0, 1], vec![0, 1, 1, 1, 1, 1, 0]).expect("valid literal")
}

/// Three diagonal cells on the 8x12 instance, efficiency about 68.40%.
pub fn sample_8x12_start() -> Solution {
    Solution::new(
        &sample_8x12(),
        vec![0, 0, 0, 1, 1, 1, 2, 2],
        vec![0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2],
    )
    .expect("valid literal")
}
