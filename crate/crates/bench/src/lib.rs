//! Shared fixtures for the criterion benchmarks.

use novas_core::{generate, Dataset, Model, ModelSpec};

/// Standardized model 1 data.
pub fn model1(n: usize, p: usize, seed: u64) -> Dataset {
    let spec = ModelSpec {
        model: Model::M1,
        n,
        p,
        seed,
        ..Default::default()
    };
    generate(&spec)
        .and_then(|d| d.standardize())
        .expect("benchmark fixture")
}
