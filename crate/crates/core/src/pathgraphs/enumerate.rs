use super::graph::PathGraph;
use crate::error::{Error, Result};

/// Largest `k` accepted by the enumerators.
pub const MAX_ENUMERATION_K: usize = 10;

/// Equivalence class of path graphs under relabelling of heights, with its
/// canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalClass {
    representative: PathGraph,
    height: usize,
}

impl CanonicalClass {
    pub fn representative(&self) -> &PathGraph {
        &self.representative
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of graphs in the class over `n` heights:
    /// `n (n-1) ... (n-h+1)`.
    pub fn class_size(&self, n: usize) -> f64 {
        falling_factorial(n, self.height)
    }
}

/// `x (x-1) ... (x-j+1)`; zero when `j > x`.
pub fn falling_factorial(x: usize, j: usize) -> f64 {
    if j > x {
        return 0.0;
    }
    (0..j).map(|t| (x - t) as f64).product()
}

/// All canonical `k`-path graphs with start color `a`, i.e. restricted
/// growth strings of length `k + 1`, in lexicographic order.
pub fn enumerate_canonical(m: usize, k: usize, a: usize) -> Result<Vec<CanonicalClass>> {
    if k > MAX_ENUMERATION_K {
        return Err(Error::GuardExceeded(format!(
            "path-graph enumeration supports k <= {MAX_ENUMERATION_K}, got {k}"
        )));
    }
    let mut out = Vec::new();
    let mut current = vec![1usize];
    grow(k + 1, &mut current, 1, &mut |hs: &[usize], max| {
        out.push((hs.to_vec(), max));
    });
    out.into_iter()
        .map(|(heights, height)| {
            Ok(CanonicalClass {
                representative: PathGraph::new(m, a, heights, k + 1)?,
                height,
            })
        })
        .collect()
}

fn grow(len: usize, current: &mut Vec<usize>, max: usize, emit: &mut dyn FnMut(&[usize], usize)) {
    if current.len() == len {
        emit(current, max);
        return;
    }
    for next in 1..=max + 1 {
        current.push(next);
        grow(len, current, max.max(next), emit);
        current.pop();
    }
}

/// The unique canonical `k`-path graph (start color 1) with `k/2` distinct
/// heights in which every edge is parallel to exactly one other edge.
/// Enumerates all candidates and fails with
/// [`Error::InvariantViolation`] unless exactly
/// `G^1(1, 2, ..., k/2, 1, 2, ..., k/2, 1)` survives.
pub fn unique_half_height_graph(m: usize, k: usize) -> Result<PathGraph> {
    if k < 2 || !k.is_multiple_of(2) || k > MAX_ENUMERATION_K {
        return Err(Error::InvalidArgument(format!(
            "k must be even with 2 <= k <= {MAX_ENUMERATION_K}, got {k}"
        )));
    }
    let half = k / 2;
    let survivors: Vec<PathGraph> = enumerate_canonical(m, k, 1)?
        .into_iter()
        .filter(|c| c.height() == half && c.representative().is_perfectly_paired())
        .map(|c| c.representative)
        .collect();
    let heights: Vec<usize> = (1..=half).chain(1..=half).chain([1]).collect();
    let expected = PathGraph::new(m, 1, heights, k + 1)?;
    match survivors.as_slice() {
        [only] if *only == expected => Ok(expected),
        _ => Err(Error::InvariantViolation(format!(
            "expected exactly {expected} at k = {k}, found [{}]",
            survivors.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
        ))),
    }
}
