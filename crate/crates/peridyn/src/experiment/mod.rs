//! Declarative experiment harness: flat-file configs, drivers for the
//! convergence/consistency/stability studies, and CSV emission.
//!
//! Outputs are deterministic: rerunning a spec yields byte-identical CSV
//! bodies, and every file's provenance header echoes the full spec so a run
//! is reconstructible from its outputs alone.

mod config;
mod drivers;
mod ic;
mod table;

pub use config::{ExperimentKind, ExperimentSpec, Overrides};
pub use drivers::{
    execute, material, material_info, run_comparison, run_consistency, run_eps_convergence,
    run_h_convergence, run_npd_lpd_gap, run_single, run_stability, ExperimentOutput,
};
pub use ic::IcDescriptor;
pub use table::{fmt, fmt_full, ResultTable};

use std::path::{Path, PathBuf};

use crate::error::Result;

impl ExperimentOutput {
    /// Writes every table and field snapshot into `dir`; returns the paths.
    pub fn write_to_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for table in &self.tables {
            paths.push(table.write_to_dir(dir)?);
        }
        for (name, field) in &self.fields {
            let path = dir.join(format!("{name}.csv"));
            let file = std::fs::File::create(&path)?;
            field.write_csv(std::io::BufWriter::new(file))?;
            paths.push(path);
        }
        Ok(paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_rerun_bytes() {
        let text = "\
eps = 0.1
h = 0.02
dt = 2e-3
T = 0.05
sample_steps = 25
ic = gauss(0.005,0.001,0.5)
";
        let spec = ExperimentSpec::from_str(ExperimentKind::SingleRun, text).unwrap();
        let a = execute(&spec).unwrap();
        let b = execute(&spec).unwrap();
        assert_eq!(
            a.tables[0].to_csv_string(),
            b.tables[0].to_csv_string(),
            "reruns must be byte-identical"
        );
    }

    #[test]
    fn stability_of_empty_grid_list_is_empty_table() {
        let spec = ExperimentSpec::new(ExperimentKind::Stability);
        let out = execute(&spec).unwrap();
        assert!(out.tables[0].rows.is_empty());
    }

    #[test]
    fn h_conv_rejects_identical_meshes() {
        let text = "\
eps = 0.1
h_list = 0.02,0.02,0.02
dt = 1e-3
T = 0.01
";
        let spec = ExperimentSpec::from_str(ExperimentKind::HConv, text).unwrap();
        assert!(execute(&spec).is_err());
    }

    #[test]
    fn h_conv_rejects_zero_initial_condition() {
        // coincident solutions make every rate undefined
        let text = "\
eps = 0.1
h_list = 0.02,0.01,0.005
dt = 1e-3
T = 0.01
sample_steps = 10
ic = gauss(0.0,1e-3,0.5)
";
        let spec = ExperimentSpec::from_str(ExperimentKind::HConv, text).unwrap();
        let err = execute(&spec).unwrap_err();
        assert!(format!("{err}").contains("positive"), "got: {err}");
    }

    #[test]
    fn eps_conv_rejects_mismatched_ratio() {
        let text = "\
eps_list = 0.016,0.008,0.002
eps_over_h = 4
dt = 1e-4
T = 0.001
";
        let spec = ExperimentSpec::from_str(ExperimentKind::EpsConv, text).unwrap();
        assert!(execute(&spec).is_err());
    }

    #[test]
    fn gap_rejects_coincident_horizons() {
        let text = "\
pair_eps = 0.02,0.02
pair_h = 0.001,0.001
dt = 1e-4
T = 0.001
";
        let spec = ExperimentSpec::from_str(ExperimentKind::Gap, text).unwrap();
        assert!(execute(&spec).is_err());
    }

    #[test]
    fn compare_rejects_coarse_reference() {
        let text = "\
pair_eps = 0.02
pair_h = 0.0025
reference_h = 0.01
dt = 1e-4
T = 0.001
ic = gauss2(0.001,0.003,0.25,0.75)
";
        let spec = ExperimentSpec::from_str(ExperimentKind::Compare, text).unwrap();
        assert!(execute(&spec).is_err());
    }

    #[test]
    fn compare_with_zero_data_reports_zero_errors() {
        let text = "\
pair_eps = 0.02
pair_h = 0.0025
reference_h = 0.000625
dt = 2.5e-4
T = 0.01
ic = gauss(0.0,0.003,0.5)
sample_every = 10
";
        let spec = ExperimentSpec::from_str(ExperimentKind::Compare, text).unwrap();
        let out = execute(&spec).unwrap();
        assert!(!out.tables[0].rows.is_empty());
        for row in &out.tables[0].rows {
            assert_eq!(row[2].parse::<f64>().unwrap(), 0.0, "row {row:?}");
            assert_eq!(row[3].parse::<f64>().unwrap(), 0.0, "row {row:?}");
        }
    }

    #[test]
    fn consistency_rejects_short_sweeps() {
        let spec =
            ExperimentSpec::from_str(ExperimentKind::Consistency, "eps = 0.1\nh_list = 0.02,0.01")
                .unwrap();
        assert!(execute(&spec).is_err());
        let spec = ExperimentSpec::from_str(ExperimentKind::Consistency, "").unwrap();
        assert!(execute(&spec).is_err());
    }

    #[test]
    fn gap_scales_cubically_with_amplitude() {
        // doubling the pulse amplitude quadruples the amplitude-relative
        // NPD-LPD gap (the absolute gap is cubic in the strain scale) and
        // leaves the slope in the horizon unchanged
        let base = "\
pair_eps = 0.04, 0.02
pair_h = 0.004, 0.002
dt = 1e-3
T = 0.05
sample_steps = 50
";
        let run_amp = |amp: f64| {
            let text = format!("{base}ic = gauss2({amp},0.003,0.25,0.75)\n");
            let spec = ExperimentSpec::from_str(ExperimentKind::Gap, &text).unwrap();
            let out = execute(&spec).unwrap();
            let row = &out.tables[0].rows[0];
            let gap: f64 = row[2].parse().unwrap();
            let slope: f64 = row[4].parse().unwrap();
            (gap, slope)
        };
        let (gap1, slope1) = run_amp(0.001);
        let (gap2, slope2) = run_amp(0.002);
        let relative_ratio = (gap2 / 0.002) / (gap1 / 0.001);
        assert!(
            (3.4..=4.6).contains(&relative_ratio),
            "relative gap ratio {relative_ratio}"
        );
        assert!((slope1 - slope2).abs() <= 0.2, "slopes {slope1}, {slope2}");
    }

    #[test]
    fn unstable_dt_is_rejected_without_override() {
        let text = "\
eps = 0.1
h = 0.02
dt = 0.05
T = 0.1
ic = gauss(0.005,0.001,0.5)
";
        let spec = ExperimentSpec::from_str(ExperimentKind::SingleRun, text).unwrap();
        let err = execute(&spec).unwrap_err();
        assert!(format!("{err}").contains("stable"), "got: {err}");
    }
}
