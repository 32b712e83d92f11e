//! Resolution study: drift, inversion residual and observed orders.
//!
//! ```bash
//! cargo run --release --example convergence
//! ```

use chsim::{convergence_study, Family, InitialDataSpec, SimConfig};

fn main() -> chsim::Result<()> {
    let mut cfg = SimConfig::new(InitialDataSpec::family(Family::C, -0.1), 129, 0.0, 0.25);
    cfg.record_stride = 20;
    let study = convergence_study(&cfg, &[129, 257, 513])?;
    println!("smooth control, k = 0, t_end = 0.25:\n");
    println!("{study}");
    Ok(())
}
