//! Per-step slope of the NPD-LPD solution gap against the horizon; the
//! expected slope is one.
//!
//! ```bash
//! cargo run --release --example npd_lpd_gap
//! ```

use peridyn::experiment::{run_npd_lpd_gap, ExperimentKind, ExperimentSpec, IcDescriptor};

fn main() -> peridyn::Result<()> {
    let mut spec = ExperimentSpec::new(ExperimentKind::Gap);
    spec.pair_eps = vec![0.02, 0.01];
    spec.pair_h = vec![0.001, 0.00025];
    spec.dt = Some(2e-4);
    spec.t_final = Some(0.4);
    spec.ic = IcDescriptor::parse("gauss2(0.001,0.003,0.25,0.75)")?;
    spec.sample_every = Some(40);
    let out = run_npd_lpd_gap(&spec)?;
    print!("{}", out.tables[0].to_csv_string());
    Ok(())
}
