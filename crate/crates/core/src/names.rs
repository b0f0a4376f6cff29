//! Stable variable and row names. Box indices are 0-based in the API and
//! 1-based in names.

use crate::instance::Axis;

pub fn c(s: Axis, i: usize) -> String {
    format!("c_{}_{}", s, i + 1)
}

pub fn l(s: Axis, i: usize) -> String {
    format!("l_{}_{}", s, i + 1)
}

/// Distance auxiliary for the unordered pair `{i, j}`.
pub fn d(s: Axis, i: usize, j: usize) -> String {
    format!("d_{}_{}_{}", s, i.min(j) + 1, i.max(j) + 1)
}

/// Ordered-pair binary with prefix `z` or `u`.
pub fn ordered(prefix: &str, s: Axis, p: usize, q: usize) -> String {
    format!("{}_{}_{}_{}", prefix, s, p + 1, q + 1)
}

/// Indexed pair binary such as `w1_1_2`, `y2_1_3` or `v4_2_3`.
pub fn indexed(prefix: &str, k: usize, i: usize, j: usize) -> String {
    format!("{}{}_{}_{}", prefix, k, i + 1, j + 1)
}

/// Extended-formulation copy of a center (`ce`) or width (`le`) of box `p`
/// for pair `(i, j)` and branch `k` (1-based).
pub fn copy(prefix: &str, s: Axis, p: usize, i: usize, j: usize, k: usize) -> String {
    format!("{}_{}_{}_{}_{}_{}", prefix, s, p + 1, i + 1, j + 1, k)
}

/// Suffix `_<i>_<j>` used in row names.
pub fn pair(i: usize, j: usize) -> String {
    format!("{}_{}", i + 1, j + 1)
}
