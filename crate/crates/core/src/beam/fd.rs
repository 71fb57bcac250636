//! Finite-difference Euler–Bernoulli cantilever with a tip point load.
//!
//! Nodes `x_i = i h`, `h = L / (N - 1)`. Interior equations use the
//! five-point stencil `w[i-2] - 4w[i-1] + 6w[i] - 4w[i+1] + w[i+2] = h^4 q_i / EI`.
//! Boundary handling:
//!
//! * clamped root: `w[0] = 0` and ghost `w[-1] = w[1]` (zero slope);
//! * free tip: ghosts from `w'' = 0` (`w[N] = 2w[N-1] - w[N-2]`) and
//!   `w''' = 0` (`w[N+1] = 2w[N] - 2w[N-2] + w[N-3]`);
//! * the point load enters as a shear jump lumped on the tip node's half
//!   cell, `q_{N-1} = 2F / h`.
//!
//! The scheme is second order in `h`.

use alloc::vec;
use alloc::vec::Vec;

use super::BeamSpec;

/// Discrete deflection curve of a tip-loaded cantilever.
#[derive(Debug, Clone, PartialEq)]
pub struct FdSolution {
    /// Node spacing, m.
    pub spacing: f64,
    /// Deflection at each node, m (positive in the load direction).
    pub deflection: Vec<f64>,
    flexural_rigidity: f64,
}

impl FdSolution {
    pub fn tip_deflection(&self) -> f64 {
        *self.deflection.last().expect("at least 4 nodes")
    }

    /// Bending moment at the root from the discrete curvature
    /// `(w[1] - 2w[0] + w[-1]) / h^2`, N m.
    pub fn root_moment(&self) -> f64 {
        let h = self.spacing;
        self.flexural_rigidity * 2.0 * (self.deflection[1] - self.deflection[0]) / (h * h)
    }
}

/// Solves the discretized cantilever on `nodes >= 4` nodes.
pub fn solve_tip_loaded(spec: &BeamSpec, force: f64, nodes: usize) -> FdSolution {
    assert!(nodes >= 4, "need at least 4 nodes");
    let n = nodes;
    let h = spec.length / (n - 1) as f64;
    let ei = spec.flexural_rigidity();

    // Unknowns are w[1..n]; w[0] = 0 is substituted directly.
    let m = n - 1;
    let mut a = Banded::new(m, 2, 2);
    let mut b = vec![0.0; m];
    const STENCIL: [f64; 5] = [1.0, -4.0, 6.0, -4.0, 1.0];
    for i in 1..n {
        for (o, &c) in STENCIL.iter().enumerate() {
            let j = i as isize + o as isize - 2;
            for (k, v) in ghost(j, n) {
                if k > 0 {
                    a.add(i - 1, k - 1, c * v);
                }
            }
        }
    }
    b[m - 1] = 2.0 * force * h * h * h / ei;
    let mut deflection = vec![0.0];
    deflection.extend(a.solve(b));
    FdSolution { spacing: h, deflection, flexural_rigidity: ei }
}

/// Expresses node `j` (possibly a ghost) as a combination of real nodes.
fn ghost(j: isize, n: usize) -> Vec<(usize, f64)> {
    let n_i = n as isize;
    if j == -1 {
        vec![(1, 1.0)]
    } else if (0..n_i).contains(&j) {
        vec![(j as usize, 1.0)]
    } else if j == n_i {
        vec![(n - 1, 2.0), (n - 2, -1.0)]
    } else if j == n_i + 1 {
        // 2 w[N] - 2 w[N-2] + w[N-3]
        vec![(n - 1, 4.0), (n - 2, -2.0 - 2.0), (n - 3, 1.0)]
    } else {
        unreachable!("stencil reaches at most two nodes past either end")
    }
}

/// Square band matrix stored densely, eliminated with partial pivoting
/// restricted to the band.
struct Banded {
    n: usize,
    lower: usize,
    upper: usize,
    rows: Vec<f64>,
}

impl Banded {
    fn new(n: usize, lower: usize, upper: usize) -> Self {
        Self { n, lower, upper, rows: vec![0.0; n * n] }
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        self.rows[i * self.n + j] += v;
    }

    fn solve(mut self, mut b: Vec<f64>) -> Vec<f64> {
        let n = self.n;
        // Row swaps within the lower band widen the upper band by `lower`.
        let width = self.upper + self.lower;
        for k in 0..n {
            let last = (k + self.lower).min(n - 1);
            let pivot = (k..=last)
                .max_by(|&r, &s| self.rows[r * n + k].abs().total_cmp(&self.rows[s * n + k].abs()))
                .expect("non-empty range");
            if pivot != k {
                for j in k..=(k + width).min(n - 1) {
                    self.rows.swap(k * n + j, pivot * n + j);
                }
                b.swap(k, pivot);
            }
            let d = self.rows[k * n + k];
            for r in k + 1..=last {
                let f = self.rows[r * n + k] / d;
                if f == 0.0 {
                    continue;
                }
                for j in k..=(k + width).min(n - 1) {
                    self.rows[r * n + j] -= f * self.rows[k * n + j];
                }
                b[r] -= f * b[k];
            }
        }
        for k in (0..n).rev() {
            let hi = (k + width).min(n - 1);
            let row = &self.rows[k * n + k + 1..=k * n + hi];
            let s = b[k] - row.iter().zip(&b[k + 1..=hi]).map(|(a, x)| a * x).sum::<f64>();
            b[k] = s / self.rows[k * n + k];
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::Material;

    fn spec() -> BeamSpec {
        BeamSpec::new(0.04, 0.003, 0.02, Material::new("m", 1.4e9, 40e6).unwrap()).unwrap()
    }

    #[test]
    fn root_is_clamped() {
        let s = solve_tip_loaded(&spec(), 1.0, 40);
        assert_eq!(s.deflection[0], 0.0);
        // Zero slope: the first step is second order small.
        assert!(s.deflection[1] < 1e-3 * s.tip_deflection());
    }

    #[test]
    fn deflection_is_linear_in_force() {
        let a = solve_tip_loaded(&spec(), 1.0, 60).tip_deflection();
        let b = solve_tip_loaded(&spec(), 3.0, 60).tip_deflection();
        assert!((b - 3.0 * a).abs() < 1e-12 * b);
    }
}
