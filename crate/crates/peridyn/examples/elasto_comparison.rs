//! Nonlocal solutions against a fine local elastodynamic reference. The
//! time-max errors show a coarse h/eps ratio defeating a smaller horizon.
//!
//! ```bash
//! cargo run --release --example elasto_comparison
//! ```

use std::collections::BTreeMap;

use peridyn::experiment::{run_comparison, ExperimentKind, ExperimentSpec, IcDescriptor};

fn main() -> peridyn::Result<()> {
    let mut spec = ExperimentSpec::new(ExperimentKind::Compare);
    spec.pair_eps = vec![0.01, 0.02, 0.01];
    spec.pair_h = vec![0.00125, 0.0025, 0.005];
    spec.reference_h = Some(0.000625);
    spec.dt = Some(2.5e-4);
    spec.t_final = Some(0.3);
    spec.ic = IcDescriptor::parse("gauss2(0.001,0.003,0.25,0.75)")?;
    spec.sample_every = Some(10);
    let out = run_comparison(&spec)?;

    let mut time_max: BTreeMap<String, f64> = BTreeMap::new();
    for row in &out.tables[0].rows {
        let err: f64 = row[2].parse().unwrap();
        let entry = time_max.entry(row[4].clone()).or_insert(0.0);
        *entry = entry.max(err);
    }
    println!("time-max L2 error vs the local reference:");
    for (pair, err) in time_max {
        println!("{err:>12.6e}  {pair}");
    }
    Ok(())
}
