//! Fixtures shared by the benchmarks.

use hopfaut_core::{sample, AutElement, ManifoldSpec};

pub fn spec(a: u32, b: u32) -> ManifoldSpec {
    ManifoldSpec::canonical(a, b, ManifoldSpec::default_lambda()).expect("canonical spec")
}

/// Deterministic random automorphisms.
pub fn elements(spec: &ManifoldSpec, n: usize) -> Vec<AutElement> {
    let mut rng = sample::rng(7);
    (0..n).map(|_| sample::automorphism(spec, &mut rng)).collect()
}
