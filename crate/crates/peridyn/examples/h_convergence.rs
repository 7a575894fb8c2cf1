//! Desk-scale mesh-refinement convergence study (both nonlocal models on
//! three nested meshes at fixed horizon).
//!
//! ```bash
//! cargo run --release --example h_convergence
//! ```

use peridyn::experiment::{run_h_convergence, ExperimentKind, ExperimentSpec, IcDescriptor};

fn main() -> peridyn::Result<()> {
    let mut spec = ExperimentSpec::new(ExperimentKind::HConv);
    spec.eps = Some(0.1);
    spec.h_list = vec![0.02, 0.01, 0.005];
    spec.dt = Some(1e-4);
    spec.t_final = Some(0.2);
    spec.ic = IcDescriptor::parse("gauss(0.005,1e-5,0.5)")?;
    spec.sample_steps = vec![500, 1000, 1500, 2000];
    let out = run_h_convergence(&spec)?;
    print!("{}", out.tables[0].to_csv_string());
    Ok(())
}
