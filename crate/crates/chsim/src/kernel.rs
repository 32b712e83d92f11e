//! Periodic Green's kernel of `1 - d^2/dx^2` on the unit interval and the
//! nonlocal smoothing operator `f -> G * f`.
//!
//! `G(x) = cosh(x - [x] - 1/2) / (2 sinh(1/2))` with `[x]` the integer part,
//! so the argument is reduced to [0,1) before evaluation. Convolution is
//! direct trapezoidal quadrature, O(n^2); the inversion identity
//! `(1 - d^2/dx^2)(G * f) = f` is measured rather than assumed, see
//! [`helmholtz_residual`].

use crate::error::{Error, Result};
use crate::grid::{diff2, Field, Grid};

/// Evaluate the kernel at any real argument.
pub fn kernel_value(xi: f64) -> f64 {
    let frac = xi - xi.floor();
    (frac - 0.5).cosh() / (2.0 * (0.5f64).sinh())
}

/// Tabulated kernel samples `g_j = G(j h)` plus trapezoidal quadrature
/// weights for the grid.
#[derive(Debug, Clone)]
pub struct KernelTable {
    grid: Grid,
    g: Vec<f64>,
    weights: Vec<f64>,
}

impl KernelTable {
    pub fn new(grid: Grid) -> Self {
        let n = grid.n();
        let mut g = vec![0.0; n];
        // Fill the left half and mirror so that g_j == g_{n-1-j} bit for bit
        // (G(xi) = G(1 - xi), and G(1) = G(0) after argument reduction).
        for j in 0..=(n - 1) / 2 {
            let v = kernel_value(grid.node(j));
            g[j] = v;
            g[n - 1 - j] = v;
        }
        let h = grid.h();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        KernelTable { grid, g, weights }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn g_values(&self) -> &[f64] {
        &self.g
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.weights
    }

    fn convolve_row(&self, wf: &[f64], i: usize) -> f64 {
        let n = self.grid.n();
        let g = &self.g;
        // j <= i: G((i-j)h) = g[i-j]; j > i: G((i-j)h + 1) = g[n-1-(j-i)].
        let left: f64 = wf[..=i]
            .iter()
            .zip(g[..=i].iter().rev())
            .map(|(a, b)| a * b)
            .sum();
        let right: f64 = wf[i + 1..]
            .iter()
            .zip(g[i..n - 1].iter().rev())
            .map(|(a, b)| a * b)
            .sum();
        left + right
    }

    /// `(G * f)(x_i) = int_0^1 G(x_i - y) f(y) dy` by trapezoidal quadrature
    /// at every node. The kernel argument is reduced periodically, so the
    /// lookup stays inside the table.
    ///
    /// Rows in the right half are accumulated in mirrored order, so that a
    /// reflection-(anti)symmetric input yields a bit-exactly symmetric
    /// output; the midpoint-symmetry invariants of the dynamics then hold
    /// to round-off over arbitrarily many steps.
    pub fn convolve(&self, f: &Field) -> Result<Field> {
        if *f.grid() != self.grid {
            return Err(Error::GridMismatch {
                expected: self.grid.n(),
                got: f.grid().n(),
            });
        }
        let n = self.grid.n();
        let wf: Vec<f64> = self
            .weights
            .iter()
            .zip(f.values())
            .map(|(w, v)| w * v)
            .collect();
        let wf_mirror: Vec<f64> = wf.iter().rev().cloned().collect();
        let mut out = vec![0.0; n];
        for i in 0..n {
            out[i] = if n % 2 == 1 && 2 * i == n - 1 {
                // midpoint row folded in reflection pairs, so the odd part
                // of the input cancels exactly
                let g = &self.g;
                let mut acc = wf[i] * g[0];
                for j in 0..i {
                    let gv = g[i - j];
                    acc += wf[j] * gv + wf[n - 1 - j] * gv;
                }
                acc
            } else if 2 * i < n {
                self.convolve_row(&wf, i)
            } else {
                self.convolve_row(&wf_mirror, n - 1 - i)
            };
        }
        Field::new(self.grid.clone(), out)
    }
}

/// How far `w = G * f` is from satisfying `w - w'' = f`, measured in the
/// max norm over interior nodes (three nodes at each boundary excluded).
/// Converges at second order for smooth `f`; the kernel's derivative kink
/// at the periodic seam limits the trapezoidal rule to O(h^2).
pub fn helmholtz_residual(f: &Field, w: &Field) -> Result<f64> {
    f.same_grid(w)?;
    let wxx = diff2(w);
    let n = f.len();
    let mut worst = 0.0f64;
    for i in 3..n - 3 {
        let r = (w.values()[i] - wxx.values()[i] - f.values()[i]).abs();
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::diff1;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn kernel_closed_form_values() {
        let s = 2.0 * (0.5f64).sinh();
        assert!((kernel_value(0.0) - (0.5f64).cosh() / s).abs() < 1e-15);
        assert!((kernel_value(0.0) - 1.08197).abs() < 1e-5);
        assert!((kernel_value(0.5) - 1.0 / s).abs() < 1e-15);
        assert!((kernel_value(0.5) - 0.95952).abs() < 1e-5);
        assert_eq!(kernel_value(0.25), kernel_value(0.75));
    }

    #[test]
    fn kernel_periodic_reduction() {
        assert_eq!(kernel_value(0.3), kernel_value(1.3));
        assert_eq!(kernel_value(0.3), kernel_value(-0.7));
        assert_eq!(kernel_value(0.0), kernel_value(1.0));
    }

    #[test]
    fn table_symmetry_and_positivity() {
        for n in [9usize, 10, 64, 65, 257] {
            let t = KernelTable::new(Grid::new(n).unwrap());
            let g = t.g_values();
            assert!(g.iter().all(|&v| v > 0.0), "n={n}: kernel not positive");
            for j in 0..n {
                assert_eq!(g[j], g[n - 1 - j], "n={n}: asymmetric at {j}");
            }
        }
    }

    #[test]
    fn table_extrema_locations() {
        let grid = Grid::new(65).unwrap();
        let t = KernelTable::new(grid.clone());
        let g = t.g_values();
        let (argmin, _) = g
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        assert_eq!(argmin, grid.nearest_node(0.5));
        let max = g.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(g[0], max);
        assert_eq!(g[64], max);
    }

    #[test]
    fn convolve_constant_is_identity() {
        // int_0^1 G = 1, so G * 1 = 1 up to quadrature error.
        let grid = Grid::new(1025).unwrap();
        let t = KernelTable::new(grid.clone());
        let one = Field::from_fn(grid, |_| 1.0);
        let w = t.convolve(&one).unwrap();
        for &v in w.values() {
            assert!((v - 1.0).abs() <= 1e-5, "{v}");
        }
    }

    #[test]
    fn convolve_sine_eigenvalue() {
        // On the periodic extension, G* acts on sin(2 pi x) as 1/(1+4 pi^2).
        let grid = Grid::new(1025).unwrap();
        let t = KernelTable::new(grid.clone());
        let f = Field::from_fn(grid.clone(), |x| (2.0 * PI * x).sin());
        let w = t.convolve(&f).unwrap();
        let i = grid.nearest_node(0.25);
        let expected = 1.0 / (1.0 + 4.0 * PI * PI);
        assert!((expected - 0.024705).abs() < 1e-5);
        assert!((w.values()[i] - expected).abs() < 1e-4);
    }

    #[test]
    fn convolve_grid_mismatch() {
        let t = KernelTable::new(Grid::new(65).unwrap());
        let f = Field::zeros(Grid::new(33).unwrap());
        assert!(matches!(
            t.convolve(&f),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn convolve_nonnegative_input_nonnegative_output() {
        let grid = Grid::new(129).unwrap();
        let t = KernelTable::new(grid.clone());
        let f = Field::from_fn(grid, |x| (6.0 * PI * x).sin().powi(2));
        let w = t.convolve(&f).unwrap();
        assert!(w.min() >= 0.0);
    }

    #[test]
    fn helmholtz_residual_zero_field() {
        let grid = Grid::new(65).unwrap();
        let t = KernelTable::new(grid.clone());
        let z = Field::zeros(grid);
        let w = t.convolve(&z).unwrap();
        assert_eq!(helmholtz_residual(&z, &w).unwrap(), 0.0);
    }

    #[test]
    fn helmholtz_residual_constant() {
        let grid = Grid::new(1025).unwrap();
        let t = KernelTable::new(grid.clone());
        let one = Field::from_fn(grid, |_| 1.0);
        let w = t.convolve(&one).unwrap();
        assert!(helmholtz_residual(&one, &w).unwrap() <= 1e-5);
    }

    #[test]
    fn helmholtz_residual_sine_with_refinement() {
        let errs: Vec<f64> = [257usize, 513, 1025]
            .iter()
            .map(|&n| {
                let grid = Grid::new(n).unwrap();
                let t = KernelTable::new(grid.clone());
                let f = Field::from_fn(grid, |x| (2.0 * PI * x).sin());
                let w = t.convolve(&f).unwrap();
                helmholtz_residual(&f, &w).unwrap()
            })
            .collect();
        assert!(errs[1] <= 5e-3, "residual at n=513: {}", errs[1]);
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 1.8, "order {order}, residuals {errs:?}");
        }
    }

    #[test]
    fn neumann_derivative_of_smoothed_field_is_tame() {
        // d/dx (G*f) stays bounded by the kernel's Lipschitz constant.
        let grid = Grid::new(257).unwrap();
        let t = KernelTable::new(grid.clone());
        let f = Field::from_fn(grid, |x| (2.0 * PI * x).sin().powi(2));
        let w = t.convolve(&f).unwrap();
        assert!(diff1(&w).max_abs() < 1.0);
    }

    proptest! {
        #[test]
        fn convolve_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, seed in 0u64..32) {
            let grid = Grid::new(65).unwrap();
            let t = KernelTable::new(grid.clone());
            let f = Field::from_fn(grid.clone(), |x| ((seed as f64 + 1.0) * x).sin());
            let g = Field::from_fn(grid, |x| (2.0 * x + seed as f64).cos());
            let lhs = t
                .convolve(&f.zip_with(&g, |x, y| a * x + b * y).unwrap())
                .unwrap();
            let cf = t.convolve(&f).unwrap();
            let cg = t.convolve(&g).unwrap();
            let rhs = cf.zip_with(&cg, |x, y| a * x + b * y).unwrap();
            for (l, r) in lhs.values().iter().zip(rhs.values()) {
                prop_assert!((l - r).abs() <= 1e-12);
            }
        }

        #[test]
        fn kernel_positive_everywhere(xi in -10.0f64..10.0) {
            prop_assert!(kernel_value(xi) > 0.0);
        }
    }
}
