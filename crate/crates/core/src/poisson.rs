//! Least-squares integration of a gradient field into a depth map.
//!
//! The depth `z` minimizes `sum ||forward_diff(z) - (p, q)||^2` with `z`
//! held at zero on the outer ring of pixels. The normal equations are the
//! five-point Poisson problem `lap(z) = div(p, q)` on the
//! `(W-2) x (H-2)` interior, diagonalized by the type-I sine transform:
//! mode `k` of an axis with `N` pixels has eigenvalue `2cos(pi k/(N-1)) - 2`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use thiserror::Error;

use crate::fft::{Complex, Dst1};
use crate::grid::{DepthMap, GradientField};
use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PoissonError {
    #[error("grid {0}x{1} is too small; both sides must be at least 3")]
    TooSmall(usize, usize),
    #[error("gradient sample {0} is not finite")]
    NonFinite(usize),
}

/// Backward-difference divergence, the adjoint (up to sign) of the forward
/// difference gradient. Neighbours outside the grid count as zero.
pub fn divergence(grad: &GradientField) -> Result<Vec<f64>, PoissonError> {
    check_finite(grad)?;
    let (w, h) = (grad.width(), grad.height());
    let (p, q) = (grad.p(), grad.q());
    let mut f = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let px = p[i] - if x > 0 { p[i - 1] } else { 0.0 };
            let qy = q[i] - if y > 0 { q[i - w] } else { 0.0 };
            f[i] = px + qy;
        }
    }
    Ok(f)
}

fn check_finite(grad: &GradientField) -> Result<(), PoissonError> {
    let n = grad.p().len();
    match grad.p().iter().chain(grad.q()).position(|v| !v.is_finite()) {
        Some(i) => Err(PoissonError::NonFinite(i % n)),
        None => Ok(()),
    }
}

/// Eigenvalues of the 1-D Dirichlet second difference on an axis of
/// `pixels` samples (the `pixels - 2` interior modes).
pub fn laplacian_eigenvalues(pixels: usize) -> Vec<f64> {
    let n = pixels - 2;
    (1..=n).map(|k| 2.0 * math::cos(PI * k as f64 / (pixels - 1) as f64) - 2.0).collect()
}

/// Integrates `grad` with homogeneous Dirichlet boundary conditions.
///
/// Runs in `O(WH log WH)`; the result's outer ring is exactly zero.
pub fn integrate(grad: &GradientField) -> Result<DepthMap, PoissonError> {
    let (w, h) = (grad.width(), grad.height());
    if w < 3 || h < 3 {
        return Err(PoissonError::TooSmall(w, h));
    }
    let f = divergence(grad)?;
    let (nx, ny) = (w - 2, h - 2);

    let mut interior = vec![0.0; nx * ny];
    for j in 0..ny {
        let src = (j + 1) * w + 1;
        interior[j * nx..(j + 1) * nx].copy_from_slice(&f[src..src + nx]);
    }

    let dst_x = Dst1::new(nx);
    let dst_y = Dst1::new(ny);
    let mut scratch: Vec<Complex> = Vec::new();
    let mut column = vec![0.0; ny];

    transform_2d(&mut interior, nx, ny, &dst_x, &dst_y, &mut scratch, &mut column);

    let lx = laplacian_eigenvalues(w);
    let ly = laplacian_eigenvalues(h);
    for j in 0..ny {
        for i in 0..nx {
            interior[j * nx + i] /= lx[i] + ly[j];
        }
    }

    transform_2d(&mut interior, nx, ny, &dst_x, &dst_y, &mut scratch, &mut column);
    let norm = 4.0 / ((nx + 1) * (ny + 1)) as f64;

    let mut z = vec![0.0; w * h];
    for j in 0..ny {
        for i in 0..nx {
            z[(j + 1) * w + i + 1] = interior[j * nx + i] * norm;
        }
    }
    Ok(DepthMap::new(w, h, z).expect("finite by construction"))
}

fn transform_2d(
    data: &mut [f64],
    nx: usize,
    ny: usize,
    dst_x: &Dst1,
    dst_y: &Dst1,
    scratch: &mut Vec<Complex>,
    column: &mut [f64],
) {
    for row in data.chunks_exact_mut(nx) {
        dst_x.apply(row, scratch);
    }
    for i in 0..nx {
        for j in 0..ny {
            column[j] = data[j * nx + i];
        }
        dst_y.apply(column, scratch);
        for j in 0..ny {
            data[j * nx + i] = column[j];
        }
    }
}
