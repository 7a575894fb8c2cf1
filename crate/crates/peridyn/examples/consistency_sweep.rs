//! Force-consistency sweeps: interpolation order in h at fixed horizon, and
//! the nonlinear/linearized/local force gaps across horizons.
//!
//! ```bash
//! cargo run --release --example consistency_sweep
//! ```

use peridyn::experiment::{run_consistency, ExperimentKind, ExperimentSpec};

fn main() -> peridyn::Result<()> {
    let mut spec = ExperimentSpec::new(ExperimentKind::Consistency);
    spec.eps = Some(0.1);
    spec.h_list = vec![0.0125, 0.00625, 0.003125, 0.0015625];
    spec.p_list = vec![1, 2];
    spec.eps_list = vec![0.1, 0.05, 0.025, 0.0125];
    spec.eps_over_h = Some(4.0);
    // strain amplitude 0.05 keeps the nonlinear force in its Taylor regime
    spec.test_amplitude = 0.05 / (2.0 * std::f64::consts::PI);
    let out = run_consistency(&spec)?;
    for table in &out.tables {
        print!("{}", table.to_csv_string());
        println!();
    }
    Ok(())
}
