//! Functional inequalities and the integration-by-parts identity.
//!
//! ```bash
//! cargo run --release --example inequalities
//! ```

use rand::rngs::StdRng;
use rand::SeedableRng;
use std::f64::consts::PI;

use chsim::diagnostics::random_sine_mixture;
use chsim::{
    agmon_check, lambda_identity_check, make_initial_data, poincare_check, Family, Field, Grid,
    InitialDataSpec,
};

fn main() -> chsim::Result<()> {
    let grid = Grid::new(513)?;

    println!("u = sin(pi x):");
    let u = Field::from_fn(grid.clone(), |x| (PI * x).sin());
    let a = agmon_check(&u);
    println!("  agmon:    {:.4} <= {:.4}  ({})", a.lhs, a.rhs, a.holds);
    let p = poincare_check(&u);
    println!("  poincare: {:.4} <= {:.4}  ({})", p.lhs, p.rhs, p.holds);

    println!("\nintegration-by-parts identity under refinement:");
    for n in [257usize, 513, 1025] {
        let grid = Grid::new(n)?;
        let u = make_initial_data(&InitialDataSpec::family(Family::A, 1.0), &grid)?;
        let id = lambda_identity_check(&u)?;
        println!(
            "  n = {n:>5}: lhs {:.4}, rhs {:.4}, rel err {:.3e}",
            id.lhs, id.rhs, id.rel_err
        );
    }

    println!("\nseeded random sine mixtures (1000 cases):");
    let grid = Grid::new(257)?;
    let mut rng = StdRng::seed_from_u64(0x0c0ffee);
    let mut failures = 0;
    for _ in 0..1000 {
        let u = random_sine_mixture(&mut rng, &grid, 10);
        if !agmon_check(&u).holds || !poincare_check(&u).holds {
            failures += 1;
        }
    }
    println!("  {failures} failures");
    Ok(())
}
