//! Fixtures shared by the benchmarks under `benches/`.

use qkacz_core::rng::SplitMix64;
use qkacz_core::{LinearSystem, RealMatrix, RealVector};

/// Seeded `n × m` Gaussian matrix.
pub fn gaussian_matrix(n: usize, m: usize, seed: u64) -> RealMatrix {
    let mut rng = SplitMix64::new(seed);
    RealMatrix::new(n, m, (0..n * m).map(|_| rng.next_gaussian()).collect()).expect("shape matches data")
}

/// Seeded consistent system scaled to `‖A‖ ≤ 1`, `‖b‖ ≤ 1`.
pub fn consistent_system(n: usize, m: usize, seed: u64) -> LinearSystem {
    let a = gaussian_matrix(n, m, seed);
    let mut rng = SplitMix64::new(seed ^ 0x5eed);
    let x = RealVector::from((0..m).map(|_| rng.next_gaussian()).collect::<Vec<_>>());
    let b = a.matvec(&x).expect("x has m entries");
    LinearSystem::new(a, b).and_then(|s| s.normalized()).expect("Gaussian systems are well formed")
}
