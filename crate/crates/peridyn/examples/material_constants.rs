//! Prints the shipped material's derived constants and the timestep bounds
//! for a sample grid.
//!
//! ```bash
//! cargo run --example material_constants
//! ```

use peridyn::assembly::{cfl_local_dt, stable_dt};
use peridyn::material::MaterialModel;

fn main() -> peridyn::Result<()> {
    let m = MaterialModel::default_nondimensional();
    println!("influence first moment : {:.12}", m.influence_first_moment());
    println!("influence max          : {:.12}", m.influence_max());
    println!("bond stiffness f'(0)   : {:.12}", m.potential_deriv(0.0));
    println!("elastic modulus        : {:.12}", m.elastic_modulus());
    println!("wave speed             : {:.12}", m.wave_speed());
    println!("critical strain (d=1)  : {:.12}", m.critical_strain(1.0)?);
    let (_, t0) = m.nondimensionalize(1.0)?;
    println!("time scale (L=1)       : {:.12}", t0);

    println!("\ntimestep bounds, eps = 0.1:");
    println!("{:>10} {:>14} {:>14} {:>8}", "h", "dt_theorem", "dt_cfl_local", "ratio");
    for m_el in [2usize, 4, 8, 16] {
        let h = 0.1 / m_el as f64;
        let dt = stable_dt(&m, h, 0.1);
        let cfl = cfl_local_dt(&m, h);
        println!("{h:>10.5} {dt:>14.8} {cfl:>14.8} {:>8.5}", dt / cfl);
    }
    Ok(())
}
