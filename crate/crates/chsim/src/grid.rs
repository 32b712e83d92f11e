//! Uniform grid on the unit interval and finite-difference derivatives.
//!
//! `diff1` and `diff2` are fourth-order accurate everywhere (centered
//! stencils in the interior, shifted/one-sided closures at the boundary
//! rows); `diff3` is second order throughout. The one-sided stencils on the
//! right edge are exact floating-point mirrors of the left edge so that
//! derivatives of (anti)symmetric fields keep their symmetry to round-off.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Smallest grid that admits the five-point boundary stencils.
pub const MIN_NODES: usize = 9;

/// Uniform discretization of `[0,1]` with `n` nodes, spacing `h = 1/(n-1)`.
///
/// Cloning is cheap; the node table is shared.
#[derive(Debug, Clone)]
pub struct Grid {
    n: usize,
    h: f64,
    nodes: Arc<[f64]>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Grid {
    /// Build the uniform grid. Fails for `n < 9`.
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::config(format!(
                "grid needs at least {MIN_NODES} nodes, got {n}"
            )));
        }
        let denom = (n - 1) as f64;
        // i/(n-1) puts x_0 = 0 and x_{n-1} = 1 exactly.
        let nodes: Arc<[f64]> = (0..n).map(|i| i as f64 / denom).collect();
        Ok(Grid {
            n,
            h: 1.0 / denom,
            nodes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    /// Index of the grid node closest to `x`.
    pub fn nearest_node(&self, x: f64) -> usize {
        let i = (x / self.h).round() as isize;
        i.clamp(0, self.n as isize - 1) as usize
    }

    /// True when `x` coincides with a grid node to round-off.
    pub fn is_node(&self, x: f64) -> bool {
        let i = self.nearest_node(x);
        (self.nodes[i] - x).abs() <= 1e-12
    }
}

/// Real-valued samples on a [`Grid`], one value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let values = vec![0.0; grid.n()];
        Field { grid, values }
    }

    /// Sample `f` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Field { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// NaN/Inf is a corrupt state that must never propagate silently.
    pub fn check_finite(&self, t: f64, context: &str) -> Result<()> {
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::CorruptState {
                t,
                context: format!("{context}: non-finite value at node {i}"),
            });
        }
        Ok(())
    }

    pub fn same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch {
                expected: self.grid.n(),
                got: other.grid.n(),
            });
        }
        Ok(())
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Field {
            grid: self.grid.clone(),
            values,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, a: f64) -> Field {
        self.map(|v| a * v)
    }
}

// Stencil coefficients; divisors folded in at application time.
const D1_EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0]; // /(12h)
const D1_EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0]; // /(12h)
const D1_CENTER: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0]; // /(12h)
const D2_EDGE0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0]; // /(12h^2)
const D2_EDGE1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0]; // /(12h^2)
const D2_CENTER5: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0]; // /(12h^2)
const D3_EDGE0: [f64; 5] = [-5.0, 18.0, -24.0, 14.0, -3.0]; // /(2h^3)
const D3_EDGE1: [f64; 5] = [-3.0, 10.0, -12.0, 6.0, -1.0]; // /(2h^3)
const D3_CENTER: [f64; 5] = [-1.0, 2.0, 0.0, -2.0, 1.0]; // /(2h^3)

fn dot<const K: usize>(c: &[f64; K], v: &[f64]) -> f64 {
    c.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn dot_rev<const K: usize>(c: &[f64; K], v: &[f64]) -> f64 {
    // Same coefficients applied to the mirrored window, in the same
    // accumulation order, so left/right evaluations are exact floating-point
    // mirrors of each other.
    c.iter().zip(v.iter().rev()).map(|(a, b)| a * b).sum()
}

/// Centered stencil folded around the window midpoint: coefficient pairs
/// are combined before accumulation, so the opposite-parity component of
/// the input cancels exactly in floating point. At the grid midpoint this
/// pins the derivative's symmetry class bit-exactly (e.g. the second
/// derivative of an odd field is exactly zero there), which matters because
/// the breaking dynamics amplify any midpoint defect exponentially.
fn dot_folded<const C: usize>(c: &[f64; C], v: &[f64]) -> f64 {
    let mut acc = c[C / 2] * v[C / 2];
    for k in 0..C / 2 {
        acc += c[k] * v[k] + c[C - 1 - k] * v[C - 1 - k];
    }
    acc
}

/// Shared application pattern: explicit closures at the two rows next to
/// each boundary, a centered stencil elsewhere. The right half (boundary
/// closures and interior rows alike) is evaluated through the mirrored
/// traversal, which makes derivatives of bit-exactly (anti)symmetric fields
/// bit-exactly (anti)symmetric; the midpoint-symmetry invariants of the
/// dynamics survive arbitrarily many steps because of this.
fn apply_stencils<const E: usize, const C: usize>(
    f: &Field,
    scale: f64,
    sign: f64,
    edge0: &[f64; E],
    edge1: &[f64; E],
    center: &[f64; C],
) -> Field {
    let n = f.len();
    let v = f.values();
    let mut out = vec![0.0; n];
    out[0] = scale * dot(edge0, &v[..E]);
    out[1] = scale * dot(edge1, &v[..E]);
    let half = C / 2;
    let mid = (n - 1) / 2;
    for i in 2..n - 2 {
        let window = &v[i - half..i + half + 1];
        out[i] = if n % 2 == 1 && i == mid {
            scale * dot_folded(center, window)
        } else if i <= mid {
            scale * dot(center, window)
        } else {
            sign * scale * dot_rev(center, window)
        };
    }
    out[n - 2] = sign * scale * dot_rev(edge1, &v[n - E..]);
    out[n - 1] = sign * scale * dot_rev(edge0, &v[n - E..]);
    Field {
        grid: f.grid().clone(),
        values: out,
    }
}

/// First derivative, fourth-order accurate at every node.
pub fn diff1(f: &Field) -> Field {
    let s = 1.0 / (12.0 * f.grid().h());
    apply_stencils(f, s, -1.0, &D1_EDGE0, &D1_EDGE1, &D1_CENTER)
}

/// Second derivative, fourth-order accurate at every node (six-point
/// one-sided closures at the boundary rows).
pub fn diff2(f: &Field) -> Field {
    let h = f.grid().h();
    let s = 1.0 / (12.0 * h * h);
    apply_stencils(f, s, 1.0, &D2_EDGE0, &D2_EDGE1, &D2_CENTER5)
}

/// Third derivative, second-order accurate at every node.
pub fn diff3(f: &Field) -> Field {
    let h = f.grid().h();
    let s = 1.0 / (2.0 * h * h * h);
    apply_stencils(f, s, -1.0, &D3_EDGE0, &D3_EDGE1, &D3_CENTER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn max_err(a: &Field, b: &Field) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn grid_basics() {
        let g = Grid::new(11).unwrap();
        assert_eq!(g.n(), 11);
        assert!((g.h() - 0.1).abs() < 1e-15);
        assert!((g.node(5) - 0.5).abs() < 1e-15);

        let g = Grid::new(1025).unwrap();
        assert_eq!(g.h(), 1.0 / 1024.0);
        assert_eq!(g.node(1024), 1.0);
        assert_eq!(g.node(0), 0.0);
    }

    #[test]
    fn grid_too_small() {
        let err = Grid::new(2).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("at least 9"));
    }

    #[test]
    fn nodes_strictly_increasing_constant_spacing() {
        let g = Grid::new(257).unwrap();
        for w in g.nodes().windows(2) {
            assert!(w[1] > w[0]);
            assert!((w[1] - w[0] - g.h()).abs() < 1e-15);
        }
    }

    #[test]
    fn diff1_annihilates_constants() {
        let g = Grid::new(33).unwrap();
        let f = Field::from_fn(g, |_| 1.0);
        assert!(diff1(&f).max_abs() <= 1e-12);
    }

    #[test]
    fn diff1_sine_zero_at_quarter() {
        let g = Grid::new(257).unwrap();
        let f = Field::from_fn(g.clone(), |x| (2.0 * PI * x).sin());
        let d = diff1(&f);
        let i = g.nearest_node(0.25);
        assert!(d.values()[i].abs() < 1e-6, "got {}", d.values()[i]);
    }

    #[test]
    fn diff1_fourth_order() {
        // Richardson order fit against the analytic derivative.
        let errs: Vec<f64> = [129usize, 257, 513]
            .iter()
            .map(|&n| {
                let g = Grid::new(n).unwrap();
                let f = Field::from_fn(g.clone(), |x| (2.0 * PI * x).sin());
                let exact = Field::from_fn(g, |x| 2.0 * PI * (2.0 * PI * x).cos());
                max_err(&diff1(&f), &exact)
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 3.8, "observed order {order}, errors {errs:?}");
        }
    }

    #[test]
    fn diff2_exact_on_quadratic() {
        let g = Grid::new(65).unwrap();
        let f = Field::from_fn(g, |x| x * (1.0 - x));
        let d = diff2(&f);
        for (i, &v) in d.values().iter().enumerate() {
            assert!((v + 2.0).abs() < 1e-8, "node {i}: {v}");
        }
    }

    #[test]
    fn diff2_sine_value() {
        let g = Grid::new(513).unwrap();
        let f = Field::from_fn(g.clone(), |x| (2.0 * PI * x).sin());
        let d = diff2(&f);
        let i = g.nearest_node(0.25);
        let expected = -4.0 * PI * PI;
        let rel = (d.values()[i] - expected).abs() / expected.abs();
        assert!(rel < 1e-4, "rel err {rel}");
    }

    #[test]
    fn diff3_annihilates_constants() {
        let g = Grid::new(33).unwrap();
        let f = Field::from_fn(g, |_| 4.2);
        assert!(diff3(&f).max_abs() <= 1e-10);
    }

    #[test]
    fn diff3_exact_on_cubic() {
        let g = Grid::new(33).unwrap();
        let f = Field::from_fn(g, |x| x * x * x);
        let d = diff3(&f);
        for &v in d.values() {
            assert!((v - 6.0).abs() < 1e-7, "{v}");
        }
    }

    #[test]
    fn diff2_fourth_order_at_boundary() {
        let errs: Vec<f64> = [129usize, 257]
            .iter()
            .map(|&n| {
                let g = Grid::new(n).unwrap();
                let f = Field::from_fn(g, |x| (2.0 * PI * x).sin());
                let d = diff2(&f);
                (d.values()[0] - 0.0).abs()
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order >= 3.5, "boundary order {order}");
    }

    #[test]
    fn mirrored_stencils_preserve_antisymmetry() {
        // u(1-x) = -u(x)  =>  u'(1-x) = u'(x) exactly, including edges.
        let g = Grid::new(65).unwrap();
        let f = Field::from_fn(g, |x| (2.0 * PI * x).sin() - 0.5 * (4.0 * PI * x).sin());
        let n = f.len();
        let d1 = diff1(&f);
        let d3 = diff3(&f);
        for i in 0..n {
            let j = n - 1 - i;
            assert!(
                (d1.values()[i] - d1.values()[j]).abs() <= 1e-9,
                "diff1 asymmetric at {i}"
            );
            assert!(
                (d3.values()[i] - d3.values()[j]).abs() <= 1e-4 * d3.max_abs(),
                "diff3 asymmetric at {i}"
            );
        }
    }

    #[test]
    fn field_length_mismatch() {
        let g = Grid::new(9).unwrap();
        assert!(matches!(
            Field::new(g, vec![0.0; 4]),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn non_finite_detected() {
        let g = Grid::new(9).unwrap();
        let mut f = Field::zeros(g);
        f.values_mut()[3] = f64::NAN;
        assert!(matches!(
            f.check_finite(0.0, "test"),
            Err(Error::CorruptState { .. })
        ));
    }
}
