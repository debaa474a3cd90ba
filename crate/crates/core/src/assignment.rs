//! Bipartite assignment: minimum-sum (Hungarian) and minimum-maximum
//! (bottleneck) matchings on dense cost matrices.

use crate::error::{Error, Result};

/// Dense `rows x cols` cost matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    costs: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, costs: Vec<f64>) -> Result<Self> {
        if costs.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} costs for a {rows}x{cols} assignment",
                costs.len()
            )));
        }
        if costs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("assignment costs must be finite".into()));
        }
        Ok(Self { rows, cols, costs })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let costs = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self::new(rows, cols, costs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.costs[i * self.cols + j]
    }

    fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            costs: (0..self.rows * self.cols)
                .map(|k| self.get(k % self.rows, k / self.rows))
                .collect(),
        }
    }
}

/// Matched `(row, col)` pairs, sorted by row.
pub type Assignment = Vec<(usize, usize)>;

/// Minimum total cost matching of size `min(rows, cols)`.
pub fn hungarian(costs: &CostMatrix) -> Assignment {
    if costs.rows == 0 || costs.cols == 0 {
        return Vec::new();
    }
    if costs.rows > costs.cols {
        let mut pairs: Assignment = hungarian(&costs.transpose()).into_iter().map(|(r, c)| (c, r)).collect();
        pairs.sort_unstable();
        return pairs;
    }
    // Shortest augmenting paths with potentials; rows <= cols.
    let (n, m) = (costs.rows, costs.cols);
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = costs.get(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut pairs: Assignment = (1..=m)
        .filter(|&j| owner[j] != 0)
        .map(|j| (owner[j] - 1, j - 1))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Matching of size `min(rows, cols)` whose largest cost is as small as
/// possible; ties are broken by minimum total cost.
pub fn bottleneck_assignment(costs: &CostMatrix) -> Assignment {
    let size = costs.rows.min(costs.cols);
    if size == 0 {
        return Vec::new();
    }
    let mut levels = costs.costs.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    // smallest level admitting a full matching
    let (mut lo, mut hi) = (0, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if max_matching(costs, levels[mid]) == size {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let cap = levels[lo];
    let penalty = 1.0 + levels.last().copied().unwrap_or(0.0).abs() * (size as f64 + 1.0);
    let masked = CostMatrix::from_fn(costs.rows, costs.cols, |i, j| {
        let c = costs.get(i, j);
        if c <= cap {
            c
        } else {
            c + penalty
        }
    })
    .expect("finite costs");
    hungarian(&masked)
}

/// Largest cost in an assignment (0 when empty).
pub fn max_cost(costs: &CostMatrix, pairs: &[(usize, usize)]) -> f64 {
    pairs.iter().map(|&(i, j)| costs.get(i, j)).fold(0.0, f64::max)
}

// Kuhn's augmenting paths on edges with cost <= cap.
fn max_matching(costs: &CostMatrix, cap: f64) -> usize {
    let mut col_owner: Vec<Option<usize>> = vec![None; costs.cols];
    let mut size = 0;
    for r in 0..costs.rows {
        let mut seen = vec![false; costs.cols];
        if augment(costs, cap, r, &mut seen, &mut col_owner) {
            size += 1;
        }
    }
    size
}

fn augment(costs: &CostMatrix, cap: f64, r: usize, seen: &mut [bool], col_owner: &mut [Option<usize>]) -> bool {
    for c in 0..costs.cols {
        if costs.get(r, c) > cap || seen[c] {
            continue;
        }
        seen[c] = true;
        let free = match col_owner[c] {
            None => true,
            Some(other) => augment(costs, cap, other, seen, col_owner),
        };
        if free {
            col_owner[c] = Some(r);
            return true;
        }
    }
    false
}
