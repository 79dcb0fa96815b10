//! Shared fixtures for the benches.

use tsbench_core::synth::{gen_split, GenConfig};
use tsbench_core::{AnnotatedSample, DatasetKind, Split};

/// `n` test-split samples of `kind` with the default config.
pub fn test_samples(kind: DatasetKind, n: usize) -> Vec<AnnotatedSample> {
    gen_split(kind, Split::Test, n, &GenConfig::default()).expect("default config generates")
}
