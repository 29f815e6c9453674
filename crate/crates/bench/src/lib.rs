//! Shared fixtures for the benchmark suite.

use frankl_core::{random_family, union_closure, SetFamily, SetWord};

/// The power set of `{1..n}` minus the empty set: the closure of the
/// singletons, and the densest family on its universe.
pub fn power_set(n: usize) -> SetFamily {
    let singletons: Vec<SetWord> = (0..n).map(|e| SetWord::from_mask(1 << e)).collect();
    union_closure(&singletons, n).expect("singletons close to the power set")
}

/// A deterministic batch of seeded random families for throughput runs.
pub fn random_batch(n: usize, count: u64) -> Vec<SetFamily> {
    (0..count)
        .map(|i| random_family(n, (i % 6) as usize + 1, i).expect("parameters are in range"))
        .collect()
}
