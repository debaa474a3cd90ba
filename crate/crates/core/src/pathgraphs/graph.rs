use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::ensembles::AtomVariable;
use crate::error::{Error, Result};

/// Edge classification: type I edges end on a height not visited before.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeType {
    I,
    II,
}

/// An `m`-colored `k`-path graph: heights `i_1, ..., i_{k+1}` visited at
/// times `1, ..., k+1`, with edge `t` running from `(t, i_t)` to
/// `(t+1, i_{t+1})` in color `((a + t - 2) mod m) + 1` for start color `a`.
/// Heights and colors are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathGraph {
    m: usize,
    start_color: usize,
    heights: Vec<usize>,
    n_ambient: usize,
}

impl PathGraph {
    pub fn new(m: usize, start_color: usize, heights: Vec<usize>, n_ambient: usize) -> Result<Self> {
        if m == 0 || start_color == 0 || start_color > m {
            return Err(Error::InvalidArgument(format!(
                "start color {start_color} is not in 1..={m}"
            )));
        }
        if heights.is_empty() {
            return Err(Error::InvalidArgument("a path graph visits at least one height".into()));
        }
        if let Some(h) = heights.iter().find(|&&h| h == 0 || h > n_ambient) {
            return Err(Error::InvalidArgument(format!("height {h} is not in 1..={n_ambient}")));
        }
        Ok(Self {
            m,
            start_color,
            heights,
            n_ambient,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn start_color(&self) -> usize {
        self.start_color
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn n_ambient(&self) -> usize {
        self.n_ambient
    }

    /// Number of edges.
    pub fn k(&self) -> usize {
        self.heights.len() - 1
    }

    /// Color of edge `t` (1-based).
    pub fn edge_color(&self, t: usize) -> usize {
        (self.start_color + t - 2) % self.m + 1
    }

    /// Ordered height span `(i_t, i_{t+1})` of edge `t` (1-based).
    pub fn span(&self, t: usize) -> (usize, usize) {
        (self.heights[t - 1], self.heights[t])
    }

    pub fn edge_type(&self, t: usize) -> EdgeType {
        if self.heights[..t].contains(&self.heights[t]) {
            EdgeType::II
        } else {
            EdgeType::I
        }
    }

    pub fn edge_types(&self) -> Vec<EdgeType> {
        (1..=self.k()).map(|t| self.edge_type(t)).collect()
    }

    /// Number of distinct heights visited.
    pub fn height(&self) -> usize {
        let mut seen = self.heights.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Pairs `(s, t)`, `s < t`, of edges with the same ordered span.
    pub fn parallel_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.k();
        (1..=k)
            .flat_map(|s| (s + 1..=k).map(move |t| (s, t)))
            .filter(|&(s, t)| self.span(s) == self.span(t))
            .collect()
    }

    /// Each edge is parallel to exactly one other edge.
    pub fn is_perfectly_paired(&self) -> bool {
        let pairs = self.parallel_pairs();
        let mut count = vec![0usize; self.k() + 1];
        for (s, t) in pairs {
            count[s] += 1;
            count[t] += 1;
        }
        count[1..].iter().all(|&c| c == 1)
    }

    /// Heights relabelled in order of first appearance.
    pub fn canonicalize(&self) -> PathGraph {
        let mut labels: Vec<(usize, usize)> = Vec::new();
        let heights = self
            .heights
            .iter()
            .map(|&h| match labels.iter().find(|(old, _)| *old == h) {
                Some(&(_, new)) => new,
                None => {
                    let new = labels.len() + 1;
                    labels.push((h, new));
                    new
                }
            })
            .collect();
        PathGraph {
            heights,
            ..self.clone()
        }
    }

    /// Every height `j > 1` is first visited after some visit to `j - 1`,
    /// starting from height 1.
    pub fn is_canonical(&self) -> bool {
        let mut max_seen = 0;
        for &h in &self.heights {
            if h > max_seen + 1 {
                return false;
            }
            max_seen = max_seen.max(h);
        }
        self.heights[0] == 1
    }

    pub fn is_equivalent(&self, other: &PathGraph) -> bool {
        self.m == other.m
            && self.start_color == other.start_color
            && self.canonicalize().heights == other.canonicalize().heights
    }

    /// Multiplicity of each `(color, span)` among the edges.
    pub fn edge_multiplicities(&self) -> BTreeMap<(usize, usize, usize), usize> {
        let mut groups = BTreeMap::new();
        for t in 1..=self.k() {
            let (i, j) = self.span(t);
            *groups.entry((self.edge_color(t), i, j)).or_insert(0) += 1;
        }
        groups
    }
}

impl fmt::Display for PathGraph {
    /// `G^a(i_1,...,i_{k+1})`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hs: Vec<String> = self.heights.iter().map(|h| h.to_string()).collect();
        write!(f, "G^{}({})", self.start_color, hs.join(","))
    }
}

/// `E[x_G]`: the product over distinct `(color, span)` groups of the
/// corresponding atom moment `E[xi_c^p]`, with `p` the group multiplicity.
pub fn expectation_contribution(g: &PathGraph, atoms: &[AtomVariable]) -> Result<Complex64> {
    if atoms.len() != g.m() {
        return Err(Error::InvalidArgument(format!(
            "{} atoms supplied for {} colors",
            atoms.len(),
            g.m()
        )));
    }
    let groups = g.edge_multiplicities();
    // a lone centered entry kills the term before any high moment is needed
    if groups
        .iter()
        .any(|(&(c, _, _), &p)| p == 1 && atoms[c - 1].moment(1, 0).map(|z| z.norm() == 0.0).unwrap_or(false))
    {
        return Ok(Complex64::new(0.0, 0.0));
    }
    groups
        .iter()
        .try_fold(Complex64::new(1.0, 0.0), |acc, (&(c, _, _), &p)| {
            Ok(acc * atoms[c - 1].moment(p, 0)?)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: usize, m: usize, hs: &[usize]) -> PathGraph {
        PathGraph::new(m, a, hs.to_vec(), 10).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(g(1, 1, &[4, 1, 4, 3]).canonicalize(), g(1, 1, &[1, 2, 1, 3]));
        assert_eq!(g(2, 2, &[7, 7, 7]).canonicalize(), g(2, 2, &[1, 1, 1]));
        let c = g(1, 1, &[1, 2, 1, 3]);
        assert_eq!(c.canonicalize(), c);
        assert!(c.is_canonical());
        assert!(!g(1, 1, &[1, 3, 2]).is_canonical());
    }

    #[test]
    fn parallel_pair_examples() {
        assert_eq!(g(1, 1, &[1, 2, 1, 2, 1]).parallel_pairs(), vec![(1, 3), (2, 4)]);
        assert!(g(1, 1, &[1, 2, 3, 4]).parallel_pairs().is_empty());
        assert_eq!(g(1, 1, &[1, 2, 3, 1, 3, 4, 3, 4]).parallel_pairs(), vec![(5, 7)]);
    }

    #[test]
    fn heights_and_types() {
        assert_eq!(g(1, 1, &[1, 1, 1]).height(), 1);
        assert_eq!(g(1, 1, &[1, 2, 1, 3]).height(), 3);
        assert_eq!(
            g(1, 1, &[1, 2, 1, 3]).edge_types(),
            vec![EdgeType::I, EdgeType::II, EdgeType::I]
        );
    }

    #[test]
    fn colors_cycle_from_start() {
        let x = g(3, 4, &[1, 1, 1, 1, 1, 1]);
        let colors: Vec<usize> = (1..=5).map(|t| x.edge_color(t)).collect();
        assert_eq!(colors, vec![3, 4, 1, 2, 3]);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(PathGraph::new(2, 3, vec![1], 2).is_err());
        assert!(PathGraph::new(2, 1, vec![0, 1], 2).is_err());
        assert!(PathGraph::new(2, 1, vec![1, 3], 2).is_err());
    }
}
