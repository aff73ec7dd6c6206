//! Lasso evaluation on edge sequences without building words: the spoke is
//! shortened while its tail repeats the period backwards.

use automata_core::EdgeId;

/// Length of the canonical spoke of the run `prefix · period^ω`, where
/// `period` is a closed walk at the end of `prefix`. `prefix(i)` returns the
/// i-th spoke edge.
pub(crate) fn canonical_spoke(n: usize, prefix: impl Fn(usize) -> EdgeId, period: &[EdgeId]) -> usize {
    let m = period.len() as i64;
    let mut j = n;
    while j > 0 && prefix(j - 1) == period[((j as i64 - 1) - n as i64).rem_euclid(m) as usize] {
        j -= 1;
    }
    j
}
