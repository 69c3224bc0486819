//! Fixtures shared by the solver benchmarks.

use cfp_core::{generate_configs, random_initial_solution, IncidenceMatrix, RandomSource, Solution};

/// A random `machines x parts` matrix together with a random start of
/// `cells` cells, fully determined by `seed`.
pub fn random_start(
    machines: usize,
    parts: usize,
    density: f64,
    cells: usize,
    seed: u64,
) -> (IncidenceMatrix, Solution) {
    let mut rng = RandomSource::new(seed, 0).rng();
    let matrix = IncidenceMatrix::random(machines, parts, density, &mut rng).expect("valid dimensions");
    let config = generate_configs(cells, cells, 1, machines, parts, 1, &mut rng)
        .pop()
        .expect("feasible cell count");
    let start = random_initial_solution(&matrix, &config, &mut rng).expect("configuration fits");
    (matrix, start)
}
