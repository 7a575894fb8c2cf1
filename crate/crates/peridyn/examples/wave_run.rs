//! One nonlinear peridynamic run; writes the sampled trajectory (and prints
//! where it went).
//!
//! ```bash
//! cargo run --release --example wave_run [out_dir]
//! ```

use peridyn::experiment::{execute, ExperimentKind, ExperimentSpec, IcDescriptor};

fn main() -> peridyn::Result<()> {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| "wave_run_out".into());
    let mut spec = ExperimentSpec::new(ExperimentKind::SingleRun);
    spec.eps = Some(0.02);
    spec.h = Some(0.002);
    spec.dt = Some(1e-3);
    spec.t_final = Some(0.4);
    spec.ic = IcDescriptor::parse("gauss(0.005,0.002,0.5)")?;
    spec.sample_steps = vec![0, 100, 200, 300, 400];
    let output = execute(&spec)?;
    let paths = output.write_to_dir(std::path::Path::new(&out_dir))?;
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}
