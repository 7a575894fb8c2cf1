//! Timestep bounds, exact spectra, and Stieltjes checks across a grid sweep.
//!
//! ```bash
//! cargo run --release --example stability_study
//! ```

use peridyn::experiment::{run_stability, ExperimentKind, ExperimentSpec};

fn main() -> peridyn::Result<()> {
    let mut spec = ExperimentSpec::new(ExperimentKind::Stability);
    spec.grids = vec![
        (32, 2), (32, 4), (32, 8),
        (64, 2), (64, 4), (64, 8),
        (128, 2), (128, 4), (128, 8),
    ];
    let out = run_stability(&spec)?;
    print!("{}", out.tables[0].to_csv_string());
    Ok(())
}
