//! Initial-data families for the solver.
//!
//! All generated profiles lie in the boundary class of the problem:
//! `u(0) = u(1) = u_x(0) = u_x(1) = 0`.
//!
//! * Family A: `a (sin 2pi x)(1 - cos 2pi x)`, `a > 0` — odd about `x = 1/2`,
//!   steep enough in the middle to break in finite time for every amplitude.
//! * Family B: `a x^2 (1-x)^2 sin 3pi x` — no symmetry; negative control for
//!   the antisymmetry invariant.
//! * Family C: family A's profile with `a < 0` — the midpoint slope flips
//!   sign, the breaking criterion fails, smooth control runs.
//! * Custom: caller-supplied node samples.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{diff1, Field, Grid};

/// Generated fields must satisfy the four boundary values to this tolerance.
pub const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::B => write!(f, "B"),
            Family::C => write!(f, "C"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            other => Err(Error::config(format!(
                "unknown initial-data family {other:?} (expected A, B or C)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialDataSpec {
    Family { family: Family, amplitude: f64 },
    /// Explicit node values; the caller is responsible for boundary
    /// compatibility (checked again by the integrator).
    CustomSamples { values: Vec<f64> },
}

impl InitialDataSpec {
    pub fn family(family: Family, amplitude: f64) -> Self {
        InitialDataSpec::Family { family, amplitude }
    }

    /// Families A and C are evaluated at the midpoint, so the grid must
    /// carry `x = 1/2` as a node.
    pub fn needs_odd_n(&self) -> bool {
        matches!(
            self,
            InitialDataSpec::Family {
                family: Family::A | Family::C,
                ..
            }
        )
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            InitialDataSpec::Family { family, amplitude } => {
                match family {
                    Family::A if *amplitude <= 0.0 => {
                        return Err(Error::config(
                            "family A requires a positive amplitude (negative amplitudes are family C)",
                        ))
                    }
                    Family::C if *amplitude >= 0.0 => {
                        return Err(Error::config(
                            "family C requires a negative amplitude (positive amplitudes are family A)",
                        ))
                    }
                    Family::B if *amplitude == 0.0 => {
                        return Err(Error::config("family B requires a nonzero amplitude"))
                    }
                    _ => {}
                }
                if self.needs_odd_n() && n % 2 == 0 {
                    return Err(Error::config("n must be odd for symmetric families"));
                }
                Ok(())
            }
            InitialDataSpec::CustomSamples { values } => {
                if values.len() != n {
                    return Err(Error::config(format!(
                        "custom samples carry {} values but the grid has {n} nodes",
                        values.len()
                    )));
                }
                Ok(())
            }
        }
    }
}

fn family_a_profile(a: f64, x: f64) -> f64 {
    a * ((2.0 * PI * x).sin() - 0.5 * (4.0 * PI * x).sin())
}

fn family_a_slope(a: f64, x: f64) -> f64 {
    2.0 * PI * a * ((2.0 * PI * x).cos() - (4.0 * PI * x).cos())
}

fn family_b_profile(a: f64, x: f64) -> f64 {
    a * x * x * (1.0 - x) * (1.0 - x) * (3.0 * PI * x).sin()
}

fn family_b_slope(a: f64, x: f64) -> f64 {
    let w = (3.0 * PI * x).sin();
    let dw = 3.0 * PI * (3.0 * PI * x).cos();
    let p = x * x * (1.0 - x) * (1.0 - x);
    let dp = 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
    a * (dp * w + p * dw)
}

/// Sample the specified initial profile on the grid.
///
/// Families A and C are built by evaluating the left half and mirroring with
/// a sign flip, so the sampled field is exactly odd about the midpoint.
pub fn make_initial_data(spec: &InitialDataSpec, grid: &Grid) -> Result<Field> {
    spec.validate(grid.n())?;
    match spec {
        InitialDataSpec::Family { family, amplitude } => {
            let a = *amplitude;
            match family {
                Family::A | Family::C => {
                    let n = grid.n();
                    let mut values = vec![0.0; n];
                    for j in 0..n / 2 {
                        let v = family_a_profile(a, grid.node(j));
                        values[j] = v;
                        values[n - 1 - j] = -v;
                    }
                    // midpoint of an odd profile is zero; n is odd here
                    values[n / 2] = 0.0;
                    Field::new(grid.clone(), values)
                }
                Family::B => Ok(Field::from_fn(grid.clone(), |x| family_b_profile(a, x))),
            }
        }
        InitialDataSpec::CustomSamples { values } => Field::new(grid.clone(), values.clone()),
    }
}

/// `[|u(0)|, |u(1)|, |u_x(0)|, |u_x(1)|]` for membership in the boundary
/// class. Families use their closed-form slopes (analytic zeros); custom
/// samples fall back to the numerical derivative.
pub fn boundary_quadruple(spec: &InitialDataSpec, field: &Field) -> [f64; 4] {
    let n = field.len();
    let u0 = field.values()[0].abs();
    let u1 = field.values()[n - 1].abs();
    let (s0, s1) = match spec {
        InitialDataSpec::Family { family, amplitude } => match family {
            Family::A | Family::C => (
                family_a_slope(*amplitude, 0.0).abs(),
                family_a_slope(*amplitude, 1.0).abs(),
            ),
            Family::B => (
                family_b_slope(*amplitude, 0.0).abs(),
                family_b_slope(*amplitude, 1.0).abs(),
            ),
        },
        InitialDataSpec::CustomSamples { .. } => {
            let d = diff1(field);
            (d.values()[0].abs(), d.values()[n - 1].abs())
        }
    };
    [u0, u1, s0, s1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_a_quarter_point() {
        // sin(pi/2) (1 - cos(pi/2)) = 1
        let grid = Grid::new(1025).unwrap();
        let spec = InitialDataSpec::family(Family::A, 1.0);
        let u = make_initial_data(&spec, &grid).unwrap();
        let i = grid.nearest_node(0.25);
        assert!((u.values()[i] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn family_a_midpoint_slope() {
        let grid = Grid::new(1025).unwrap();
        let spec = InitialDataSpec::family(Family::A, 1.0);
        let u = make_initial_data(&spec, &grid).unwrap();
        let d = diff1(&u);
        let mid = grid.nearest_node(0.5);
        let expected = -4.0 * PI;
        assert!((expected + 12.5664).abs() < 1e-4);
        assert!(
            (d.values()[mid] - expected).abs() < 1e-6,
            "{}",
            d.values()[mid]
        );
    }

    #[test]
    fn boundary_quadruple_analytic_zeros() {
        let grid = Grid::new(513).unwrap();
        for spec in [
            InitialDataSpec::family(Family::A, 1.0),
            InitialDataSpec::family(Family::A, 3.5),
            InitialDataSpec::family(Family::B, 2.0),
            InitialDataSpec::family(Family::C, -0.1),
        ] {
            let u = make_initial_data(&spec, &grid).unwrap();
            for (i, b) in boundary_quadruple(&spec, &u).iter().enumerate() {
                assert!(*b <= 1e-12, "{spec:?} boundary value {i}: {b}");
            }
        }
    }

    #[test]
    fn family_a_exactly_antisymmetric() {
        let grid = Grid::new(257).unwrap();
        let spec = InitialDataSpec::family(Family::A, 2.0);
        let u = make_initial_data(&spec, &grid).unwrap();
        let n = u.len();
        for j in 0..n {
            assert_eq!(u.values()[j], -u.values()[n - 1 - j]);
        }
        assert_eq!(u.values()[n / 2], 0.0);
    }

    #[test]
    fn family_a_second_derivative_vanishes_at_midpoint() {
        let grid = Grid::new(513).unwrap();
        let spec = InitialDataSpec::family(Family::A, 1.0);
        let u = make_initial_data(&spec, &grid).unwrap();
        let uxx = crate::grid::diff2(&u);
        let mid = grid.nearest_node(0.5);
        assert!(uxx.values()[mid].abs() <= 1e-10 * uxx.max_abs());
    }

    #[test]
    fn even_n_rejected_for_symmetric_families() {
        let grid = Grid::new(512).unwrap();
        let spec = InitialDataSpec::family(Family::A, 1.0);
        let err = make_initial_data(&spec, &grid).unwrap_err();
        assert!(err.to_string().contains("odd"));
        let spec_b = InitialDataSpec::family(Family::B, 1.0);
        assert!(make_initial_data(&spec_b, &grid).is_ok());
    }

    #[test]
    fn amplitude_sign_conventions() {
        assert!(InitialDataSpec::family(Family::A, -1.0).validate(65).is_err());
        assert!(InitialDataSpec::family(Family::C, 1.0).validate(65).is_err());
        assert!(InitialDataSpec::family(Family::B, 0.0).validate(65).is_err());
        assert!(InitialDataSpec::family(Family::C, -0.1).validate(65).is_ok());
    }

    #[test]
    fn custom_samples_length_checked() {
        let spec = InitialDataSpec::CustomSamples { values: vec![0.0; 5] };
        assert!(spec.validate(9).is_err());
    }
}
