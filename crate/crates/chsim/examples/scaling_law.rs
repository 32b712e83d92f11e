//! Amplitude scaling of the breaking time.
//!
//! For the symmetric family both `h(0)` and `||u_0||_1` are linear in the
//! amplitude, so the bound obeys `T0(a) = T0(1)/a` exactly — and the
//! measured breaking time follows the same law because the Riccati term
//! dominates.
//!
//! ```bash
//! cargo run --release --example scaling_law
//! ```

use chsim::{
    blowup_time_bound, make_initial_data, run_blowup_experiment, Family, Grid, InitialDataSpec,
    RhsForm, SimConfig,
};

fn main() -> chsim::Result<()> {
    let n = 513;
    let grid = Grid::new(n)?;

    println!("bound scaling (exact in the amplitude):");
    let t0_ref = blowup_time_bound(
        &make_initial_data(&InitialDataSpec::family(Family::A, 1.0), &grid)?,
        0.5,
    )?
    .unwrap();
    for a in [0.5, 1.0, 2.0, 4.0] {
        let u0 = make_initial_data(&InitialDataSpec::family(Family::A, a), &grid)?;
        let t0 = blowup_time_bound(&u0, 0.5)?.unwrap();
        println!("  a = {a:>3}: T0 = {t0:.5}   a T0 = {:.5}", a * t0);
    }
    println!("  (a T0 is constant = {t0_ref:.5})");

    println!("\nmeasured breaking times:");
    let mut t_ref = None;
    for a in [1.0, 2.0] {
        let mut cfg = SimConfig::new(InitialDataSpec::family(Family::A, a), n, 0.0, 0.5);
        cfg.rhs_form = RhsForm::MForm;
        cfg.record_stride = ((n - 1) / 128).max(1);
        let (report, _) = run_blowup_experiment(&cfg, 0.5)?;
        let t_est = report.t_est.unwrap();
        println!(
            "  a = {a}: T_est = {t_est:.5}{}",
            match t_ref {
                Some(t1) => format!("   ratio to a = 1: {:.4}", t_est / t1),
                None => String::new(),
            }
        );
        t_ref.get_or_insert(t_est);
    }
    Ok(())
}
