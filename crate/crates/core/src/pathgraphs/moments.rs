use num_complex::Complex64;

use super::enumerate::{enumerate_canonical, falling_factorial};
use super::graph::{expectation_contribution, PathGraph};
use crate::ensembles::AtomVariable;
use crate::error::{Error, Result};
use crate::par::Execution;

/// Largest `m n^{k+1}` accepted by [`exact_moment_bruteforce`].
pub const BRUTE_FORCE_LIMIT: f64 = 1e7;

fn check_inputs(u: &[Complex64], v: &[Complex64], atoms: &[AtomVariable], n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("moment needs n >= 1 and m >= 1".into()));
    }
    if u.len() != m * n || v.len() != m * n {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {} for m n = {}",
            u.len(),
            v.len(),
            m * n
        )));
    }
    if atoms.len() != m {
        return Err(Error::InvalidArgument(format!("{} atoms for m = {m}", atoms.len())));
    }
    Ok(())
}

/// `E[u^* (Y / sqrt(n))^k v]` for the block-cycle matrix `Y` with iid
/// blocks `X_1, ..., X_m`, by summing over every index tuple.
///
/// Only block `(a, a + k mod m)` of `Y^k` is nonzero and it equals
/// `X_a X_{a+1} ... X_{a+k-1}`.
pub fn exact_moment_bruteforce(
    u: &[Complex64],
    v: &[Complex64],
    atoms: &[AtomVariable],
    n: usize,
    m: usize,
    k: usize,
) -> Result<Complex64> {
    check_inputs(u, v, atoms, n, m)?;
    let work = m as f64 * (n as f64).powi(k as i32 + 1);
    if work > BRUTE_FORCE_LIMIT {
        return Err(Error::GuardExceeded(format!(
            "brute-force moment needs m n^(k+1) <= {BRUTE_FORCE_LIMIT:e}, got {work:e}"
        )));
    }
    let tuples = n.pow(k as u32 + 1);
    let mut total = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; k + 1];
    let mut keys: Vec<(usize, usize, usize)> = Vec::with_capacity(k);
    for a in 0..m {
        let b = (a + k) % m;
        for code in 0..tuples {
            let mut rest = code;
            for slot in idx.iter_mut() {
                *slot = rest % n;
                rest /= n;
            }
            let boundary = u[a * n + idx[0]].conj() * v[b * n + idx[k]];
            if boundary.norm() == 0.0 {
                continue;
            }
            keys.clear();
            keys.extend((0..k).map(|t| ((a + t) % m, idx[t], idx[t + 1])));
            keys.sort_unstable();
            let mut runs: Vec<(usize, usize)> = Vec::new();
            for (pos, key) in keys.iter().enumerate() {
                match runs.last_mut() {
                    Some((_, count)) if keys[pos - 1] == *key => *count += 1,
                    _ => runs.push((key.0, 1)),
                }
            }
            let mut lone_centered = false;
            for &(c, p) in &runs {
                lone_centered |= p == 1 && atoms[c].moment(1, 0)?.norm() == 0.0;
            }
            if lone_centered {
                continue;
            }
            let mut e = Complex64::new(1.0, 0.0);
            for &(c, p) in &runs {
                e *= atoms[c].moment(p, 0)?;
            }
            total += boundary * e;
        }
    }
    Ok(total * (n as f64).powf(-(k as f64) / 2.0))
}

/// How [`exact_moment_by_classes`] produced its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentMethod {
    Classes,
    /// The vectors were neither coordinate nor constant on some block, so the
    /// value was computed by [`exact_moment_bruteforce`].
    BruteForceFallback,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassMoment {
    pub value: Complex64,
    pub method: MomentMethod,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum BlockShape {
    Zero,
    Coordinate(usize, Complex64),
    Constant(Complex64),
    Other,
}

fn block_shape(x: &[Complex64]) -> BlockShape {
    let nonzero: Vec<usize> = (0..x.len()).filter(|&i| x[i].norm() != 0.0).collect();
    match nonzero.as_slice() {
        [] => BlockShape::Zero,
        [p] => BlockShape::Coordinate(*p, x[*p]),
        _ if x.iter().all(|z| *z == x[0]) => BlockShape::Constant(x[0]),
        _ => BlockShape::Other,
    }
}

// sum of conj(u[phi(i_1)]) v[phi(i_{k+1})] over injective relabellings phi
fn boundary_weight(u: BlockShape, v: BlockShape, g: &PathGraph, h: usize, n: usize) -> Complex64 {
    let last_is_first = g.heights()[g.k()] == g.heights()[0];
    let count = match (u, v) {
        (BlockShape::Coordinate(p, _), BlockShape::Coordinate(q, _)) => {
            if last_is_first {
                if p == q {
                    falling_factorial(n - 1, h - 1)
                } else {
                    0.0
                }
            } else if p != q && n >= 2 && h >= 2 {
                falling_factorial(n - 2, h - 2)
            } else {
                0.0
            }
        }
        (BlockShape::Coordinate(..), BlockShape::Constant(_))
        | (BlockShape::Constant(_), BlockShape::Coordinate(..)) => falling_factorial(n - 1, h - 1),
        (BlockShape::Constant(_), BlockShape::Constant(_)) => falling_factorial(n, h),
        _ => 0.0,
    };
    let coeff = |s: BlockShape| match s {
        BlockShape::Coordinate(_, c) | BlockShape::Constant(c) => c,
        _ => Complex64::new(0.0, 0.0),
    };
    coeff(u).conj() * coeff(v) * count
}

/// Same quantity as [`exact_moment_bruteforce`], summed over canonical
/// classes: each class contributes `E[x_G]` times the closed-form sum of the
/// boundary weights of its members. Closed forms exist when every block of
/// `u` and `v` is zero, a multiple of a coordinate vector, or constant;
/// otherwise the brute-force sum is used and reported in the method flag.
pub fn exact_moment_by_classes(
    u: &[Complex64],
    v: &[Complex64],
    atoms: &[AtomVariable],
    n: usize,
    m: usize,
    k: usize,
    execution: Execution,
) -> Result<ClassMoment> {
    check_inputs(u, v, atoms, n, m)?;
    let u_blocks: Vec<BlockShape> = u.chunks(n).map(block_shape).collect();
    let v_blocks: Vec<BlockShape> = v.chunks(n).map(block_shape).collect();
    let needed = (0..m).map(|a| (u_blocks[a], v_blocks[(a + k) % m]));
    if needed
        .clone()
        .any(|(x, y)| x == BlockShape::Other || y == BlockShape::Other)
    {
        return Ok(ClassMoment {
            value: exact_moment_bruteforce(u, v, atoms, n, m, k)?,
            method: MomentMethod::BruteForceFallback,
        });
    }
    let classes = enumerate_canonical(m, k, 1)?;
    let starts: Vec<(usize, BlockShape, BlockShape)> = needed
        .enumerate()
        .filter(|(_, (x, y))| *x != BlockShape::Zero && *y != BlockShape::Zero)
        .map(|(a, (x, y))| (a, x, y))
        .collect();
    let per_class = execution.try_map(classes.len(), |i| -> Result<Complex64> {
        let class = &classes[i];
        if class.height() > n {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let heights = class.representative().heights().to_vec();
        starts.iter().try_fold(Complex64::new(0.0, 0.0), |acc, &(a, ub, vb)| {
            let g = PathGraph::new(m, a + 1, heights.clone(), k + 1)?;
            let w = boundary_weight(ub, vb, &g, class.height(), n);
            if w.norm() == 0.0 {
                return Ok(acc);
            }
            Ok(acc + expectation_contribution(&g, atoms)? * w)
        })
    })?;
    let total: Complex64 = per_class.into_iter().sum();
    Ok(ClassMoment {
        value: total * (n as f64).powf(-(k as f64) / 2.0),
        method: MomentMethod::Classes,
    })
}

/// One row of the per-class table: representative, height, parallel pairs
/// and expectation contribution `E[x_G]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassRow {
    pub representative: PathGraph,
    pub height: usize,
    pub parallel_pairs: Vec<(usize, usize)>,
    pub contribution: Complex64,
}

/// All canonical classes for `(m, k, a)` with their contributions, in
/// lexicographic order of representatives.
pub fn class_table(m: usize, k: usize, a: usize, atoms: &[AtomVariable]) -> Result<Vec<ClassRow>> {
    enumerate_canonical(m, k, a)?
        .into_iter()
        .map(|c| {
            let g = c.representative().clone();
            Ok(ClassRow {
                contribution: expectation_contribution(&g, atoms)?,
                parallel_pairs: g.parallel_pairs(),
                height: c.height(),
                representative: g,
            })
        })
        .collect()
}
