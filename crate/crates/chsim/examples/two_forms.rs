//! The nonlocal u-form and the transport m-form as mutual oracles.
//!
//! Both right-hand sides discretize the same equation through different
//! algebra; integrating both from the same data and comparing the states
//! bounds the discretization error of either route.
//!
//! ```bash
//! cargo run --release --example two_forms
//! ```

use chsim::{integrate, Family, InitialDataSpec, RhsForm, SimConfig};

fn main() -> chsim::Result<()> {
    println!("family C (a = -0.1), k = 0, compared at t = 0.05:");
    let mut previous: Option<(usize, f64)> = None;
    for n in [257usize, 513, 1025] {
        let state = |form: RhsForm| -> chsim::Result<_> {
            let mut cfg = SimConfig::new(InitialDataSpec::family(Family::C, -0.1), n, 0.0, 0.05);
            cfg.rhs_form = form;
            cfg.record_stride = 100;
            Ok(integrate(&cfg)?.final_state().u.clone())
        };
        let u = state(RhsForm::UForm)?;
        let m = state(RhsForm::MForm)?;
        let diff = u.zip_with(&m, |a, b| (a - b).abs())?.max_abs();
        let order = previous
            .map(|(pn, pdiff)| {
                let ratio = (n - 1) as f64 / (pn - 1) as f64;
                format!("{:.2}", (pdiff / diff).ln() / ratio.ln())
            })
            .unwrap_or_else(|| "-".into());
        println!("  n = {n:>5}: max-norm distance {diff:.3e}   observed order {order}");
        previous = Some((n, diff));
    }
    Ok(())
}
