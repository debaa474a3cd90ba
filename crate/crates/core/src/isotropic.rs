//! Resolvent statistics of a matrix over an annulus of shifts: bilinear
//! forms `u^* (Y - zI)^{-1} v`, resolvent norms and least singular values.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{inner, vec_norm, ComplexMatrix, Lu, ShiftedSystem};
use crate::par::Execution;
use crate::rng::stream_rng;

/// Polar grid of shifts `r e^{i theta}` with `inner <= r <= outer`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusGrid {
    inner_radius: f64,
    outer_radius: f64,
    radial_points: usize,
    angular_points: usize,
}

impl Default for AnnulusGrid {
    fn default() -> Self {
        Self {
            inner_radius: 1.5,
            outer_radius: 6.0,
            radial_points: 12,
            angular_points: 16,
        }
    }
}

impl AnnulusGrid {
    pub fn new(inner_radius: f64, outer_radius: f64, radial_points: usize, angular_points: usize) -> Result<Self> {
        if !(inner_radius > 1.0 && inner_radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "inner radius must exceed 1, got {inner_radius}"
            )));
        }
        if !(outer_radius >= inner_radius && outer_radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "outer radius {outer_radius} is below inner radius {inner_radius}"
            )));
        }
        if radial_points == 0 || angular_points == 0 {
            return Err(Error::InvalidArgument(
                "grid needs at least one node per direction".into(),
            ));
        }
        Ok(Self {
            inner_radius,
            outer_radius,
            radial_points,
            angular_points,
        })
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn radial_points(&self) -> usize {
        self.radial_points
    }

    pub fn angular_points(&self) -> usize {
        self.angular_points
    }

    pub fn len(&self) -> usize {
        self.radial_points * self.angular_points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes, radius-major; radii evenly spaced from inner to outer, angles
    /// `2 pi j / angular_points`.
    pub fn nodes(&self) -> Vec<Complex64> {
        let step = if self.radial_points > 1 {
            (self.outer_radius - self.inner_radius) / (self.radial_points - 1) as f64
        } else {
            0.0
        };
        (0..self.radial_points)
            .flat_map(|i| {
                let r = self.inner_radius + step * i as f64;
                (0..self.angular_points).map(move |j| {
                    Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / self.angular_points as f64)
                })
            })
            .collect()
    }
}

fn check_unit(name: &str, x: &[Complex64]) -> Result<()> {
    let norm = vec_norm(x);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "{name} must be a unit vector, has norm {norm}"
        )));
    }
    Ok(())
}

fn check_dims(y: &ComplexMatrix, u: &[Complex64], v: &[Complex64]) -> Result<()> {
    if !y.is_square() || u.len() != y.rows() || v.len() != y.rows() {
        return Err(Error::Dimension(format!(
            "bilinear form of a {}x{} matrix with vectors of length {} and {}",
            y.rows(),
            y.cols(),
            u.len(),
            v.len()
        )));
    }
    check_unit("u", u)?;
    check_unit("v", v)
}

/// `u^* (Y - zI)^{-1} v` from one LU solve.
pub fn bilinear_resolvent(y: &ComplexMatrix, u: &[Complex64], v: &[Complex64], z: Complex64) -> Result<Complex64> {
    check_dims(y, u, v)?;
    let lu = Lu::factor(&y.shift_diagonal(z))?;
    if lu.is_singular() {
        return Err(Error::NearSingularShift { z, s_min: 0.0 });
    }
    Ok(inner(u, &lu.solve(v)?))
}

/// `|u^* G(z) v + u^* v / z|` at every grid node, in node order.
pub fn isotropic_deviations(
    y: &ComplexMatrix,
    u: &[Complex64],
    v: &[Complex64],
    grid: &AnnulusGrid,
    execution: Execution,
) -> Result<Vec<f64>> {
    check_dims(y, u, v)?;
    let system = ShiftedSystem::new(y)?;
    let uv = inner(u, v);
    let nodes = grid.nodes();
    execution.try_map(nodes.len(), |k| {
        let z = nodes[k];
        let f = system.factor(z)?;
        Ok((f.bilinear(u, v) + uv / z).norm())
    })
}

/// Maximum of [`isotropic_deviations`].
pub fn isotropic_deviation(
    y: &ComplexMatrix,
    u: &[Complex64],
    v: &[Complex64],
    grid: &AnnulusGrid,
    execution: Execution,
) -> Result<f64> {
    Ok(isotropic_deviations(y, u, v, grid, execution)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// `||(Y - zI)^{-1}||` at every node.
pub fn resolvent_norms(y: &ComplexMatrix, grid: &AnnulusGrid, execution: Execution) -> Result<Vec<f64>> {
    let system = ShiftedSystem::new(y)?;
    let nodes = grid.nodes();
    execution.try_map(nodes.len(), |k| Ok(system.factor(nodes[k])?.inverse_norm()))
}

pub fn resolvent_norm_sup(y: &ComplexMatrix, grid: &AnnulusGrid, execution: Execution) -> Result<f64> {
    Ok(resolvent_norms(y, grid, execution)?.into_iter().fold(0.0, f64::max))
}

/// `s_min(Y - zI)` at every node; exactly singular nodes give 0.
pub fn least_singular_values(y: &ComplexMatrix, grid: &AnnulusGrid, execution: Execution) -> Result<Vec<f64>> {
    let system = ShiftedSystem::new(y)?;
    let nodes = grid.nodes();
    Ok(execution.map(nodes.len(), |k| {
        system
            .factor(nodes[k])
            .map(|f| f.smallest_singular_value())
            .unwrap_or(0.0)
    }))
}

pub fn least_singular_inf(y: &ComplexMatrix, grid: &AnnulusGrid, execution: Execution) -> Result<f64> {
    Ok(least_singular_values(y, grid, execution)?
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

/// First coordinate vector.
pub fn coordinate_vector(dim: usize, index: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); dim];
    e[index] = Complex64::new(1.0, 0.0);
    e
}

/// `(1, ..., 1) / sqrt(dim)`.
pub fn uniform_vector(dim: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim]
}

/// Orthonormal pair from complex Gaussian draws on stream 0 of `seed`.
pub fn random_orthonormal_pair(dim: usize, seed: u64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut rng = stream_rng(seed, 0);
    let mut draw = || -> Vec<Complex64> {
        (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect()
    };
    let normalize = |x: Vec<Complex64>| {
        let n = vec_norm(&x);
        x.into_iter().map(|z| z / n).collect::<Vec<_>>()
    };
    let u = normalize(draw());
    let w = draw();
    let proj = inner(&u, &w);
    let v = normalize(w.iter().zip(&u).map(|(wi, ui)| wi - ui * proj).collect());
    (u, v)
}
