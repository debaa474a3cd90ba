//! Block-cycle linearization of a matrix product.
//!
//! For blocks `M_1, ..., M_m` of size `n`, the `mn x mn` matrix with `M_a` in
//! block `(a, a+1 mod m)` has an `m`-th power that is block diagonal, with
//! the cyclic products `M_k ... M_m M_1 ... M_{k-1}` on the diagonal. Its
//! eigenvalues are therefore the `m`-th roots of those of `M_1 ... M_m`.

use num_complex::Complex64;

use crate::assignment::{bottleneck_assignment, max_cost, CostMatrix};
use crate::ensembles::{sample_iid_matrix_on_stream, EntryLaw};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, resolvent, ComplexMatrix};

/// Largest `m n` accepted by [`verify_linearization`].
pub const MAX_VERIFY_DIM: usize = 400;

#[derive(Clone, Debug, PartialEq)]
pub struct BlockCycle {
    n: usize,
    blocks: Vec<ComplexMatrix>,
}

impl BlockCycle {
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        let n = blocks
            .first()
            .ok_or_else(|| Error::InvalidArgument("a block cycle needs at least one block".into()))?
            .rows();
        if let Some(bad) = blocks.iter().position(|b| b.rows() != n || b.cols() != n) {
            return Err(Error::Dimension(format!(
                "block {} is {}x{}, expected {n}x{n}",
                bad + 1,
                blocks[bad].rows(),
                blocks[bad].cols()
            )));
        }
        Ok(Self { n, blocks })
    }

    /// Blocks `X_k / sqrt(n)` with `X_k` drawn from stream `k` of `seed`.
    pub fn scaled_iid<L: EntryLaw + ?Sized>(laws: &[&L], n: usize, seed: u64) -> Result<Self> {
        let scale = 1.0 / (n as f64).sqrt();
        Self::new(
            laws.iter()
                .enumerate()
                .map(|(k, law)| sample_iid_matrix_on_stream(*law, n, seed, k as u64).scale_real(scale))
                .collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// `M_1 M_2 ... M_m`.
    pub fn product(&self) -> ComplexMatrix {
        self.cyclic_product(0)
    }

    /// `M_{k+1} ... M_m M_1 ... M_k` (zero-based start `k`).
    pub fn cyclic_product(&self, k: usize) -> ComplexMatrix {
        let m = self.m();
        (1..m).fold(self.blocks[k % m].clone(), |acc, t| {
            acc.matmul(&self.blocks[(k + t) % m])
        })
    }

    /// Dense `mn x mn` block-cycle matrix.
    pub fn materialize(&self) -> ComplexMatrix {
        let (m, n) = (self.m(), self.n);
        let mut out = ComplexMatrix::zeros(m * n, m * n);
        for (a, block) in self.blocks.iter().enumerate() {
            out.set_block(a * n, ((a + 1) % m) * n, block);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationReport {
    /// Largest distance in the capacity-`m` matching of the two spectra.
    pub max_distance: f64,
    pub ok: bool,
}

/// Compares the spectrum of the `m`-th power of the linearization with the
/// spectrum of the product, each product eigenvalue matched to exactly `m`
/// eigenvalues of the power.
pub fn verify_linearization(bc: &BlockCycle, tol: f64) -> Result<LinearizationReport> {
    let (m, n) = (bc.m(), bc.n());
    if m * n > MAX_VERIFY_DIM {
        return Err(Error::GuardExceeded(format!(
            "verify_linearization supports m n <= {MAX_VERIFY_DIM}, got {}",
            m * n
        )));
    }
    let power = bc.materialize().pow(m as u32);
    let lifted = eigenvalues(&power)?.into_vec();
    let base = eigenvalues(&bc.product())?.into_vec();
    let max_distance = capacity_matching_distance(&lifted, &base, m, tol);
    Ok(LinearizationReport {
        max_distance,
        ok: max_distance <= tol,
    })
}

// Greedy nearest neighbour with `capacity` slots per target; exact bottleneck
// assignment when greedy misses `tol`.
fn capacity_matching_distance(points: &[Complex64], targets: &[Complex64], capacity: usize, tol: f64) -> f64 {
    let mut slots = vec![capacity; targets.len()];
    let mut greedy = 0.0f64;
    for p in points {
        let best = targets
            .iter()
            .enumerate()
            .filter(|(j, _)| slots[*j] > 0)
            .map(|(j, t)| (j, (p - t).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, d)) => {
                slots[j] -= 1;
                greedy = greedy.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    if greedy <= tol {
        return greedy;
    }
    let costs = CostMatrix::from_fn(points.len(), targets.len() * capacity, |i, j| {
        (points[i] - targets[j / capacity]).norm()
    })
    .expect("finite spectra");
    max_cost(&costs, &bottleneck_assignment(&costs))
}

/// `z^{m-1} (P - z^m I)^{-1}`, the `(1,1)` block of the linearization's
/// resolvent when `P` is the product of its blocks.
pub fn block_resolvent_11(p: &ComplexMatrix, z: Complex64, m: usize) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let zm = z.powu(m as u32);
    Ok(resolvent(p, zm)?.scale(z.powu(m as u32 - 1)))
}
