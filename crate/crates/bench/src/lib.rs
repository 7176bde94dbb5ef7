//! Fixtures shared by the benchmarks in `benches/`.

use ilmsa::environment::{generate_scenario, ScenarioSpec};
use ilmsa::Environment;

/// Environment-2 layout with `fruits` fruit clusters.
pub fn orchard(seed: u64, fruits: usize) -> Environment {
    generate_scenario(&ScenarioSpec::environment_2(seed).with_fruits(fruits)).expect("scenario generation")
}

/// Same layout, but with the fruits pushed apart in x so the side view has a gap.
pub fn planar_orchard(seed: u64, fruits: usize) -> Environment {
    generate_scenario(&ScenarioSpec::environment_2(seed).with_fruits(fruits).with_planar_clearance())
        .expect("scenario generation")
}

/// Deterministic, tie-free sample of length `n` shifted by `shift`.
pub fn sample(n: usize, shift: f64, salt: u64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let h = (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt.wrapping_mul(0xBF58_476D_1CE4_E5B9);
            (h >> 11) as f64 / (1u64 << 53) as f64 + shift
        })
        .collect()
}
