//! Thin command-line front end over the experiment drivers.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use peridyn::error::Error;
use peridyn::experiment::{
    execute, material_info, ExperimentKind, ExperimentSpec, IcDescriptor, Overrides,
};
use peridyn::integrator::ModelVariant;

#[derive(Parser)]
#[command(
    name = "peridyn",
    version,
    about = "1-D nonlocal solid dynamics: peridynamic solvers and convergence studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Flat `key = value` config file; flags override file entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Horizon of nonlocal interaction.
    #[arg(long)]
    eps: Option<f64>,
    /// Mesh (element) size.
    #[arg(long)]
    h: Option<f64>,
    /// Lagrange interpolation order.
    #[arg(long)]
    p: Option<usize>,
    /// Time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Final time.
    #[arg(long = "T")]
    t_final: Option<f64>,
    /// Output directory for CSV files (tables print to stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Model variant: npd, lpd, or elasto.
    #[arg(long)]
    model: Option<String>,
    /// Initial condition, e.g. `gauss:0.005,1e-5,0.5`.
    #[arg(long)]
    ic: Option<String>,
    /// Skip the timestep stability guard.
    #[arg(long)]
    allow_unstable: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the material constants and timestep bounds.
    Info(CommonArgs),
    /// Force-consistency sweeps in h and in eps.
    Consistency(CommonArgs),
    /// Mesh-refinement convergence rates at fixed horizon.
    #[command(name = "h-conv")]
    HConv(CommonArgs),
    /// Horizon-convergence rates at fixed eps/h.
    #[command(name = "eps-conv")]
    EpsConv(CommonArgs),
    /// Nonlocal solutions against a fine local elastodynamic reference.
    Compare(CommonArgs),
    /// Slope of the NPD-LPD solution gap against the horizon.
    Gap(CommonArgs),
    /// Timestep bounds, spectra, and Stieltjes checks for a grid list.
    Stability(CommonArgs),
    /// One dynamic run with trajectory output.
    Run(CommonArgs),
}

fn build_spec(kind: ExperimentKind, args: &CommonArgs) -> peridyn::Result<ExperimentSpec> {
    let mut spec = match &args.config {
        Some(path) => ExperimentSpec::from_file(kind, path)?,
        None => ExperimentSpec::new(kind),
    };
    let overrides = Overrides {
        eps: args.eps,
        h: args.h,
        p: args.p,
        dt: args.dt,
        t_final: args.t_final,
        out: args.out.clone(),
        model: args.model.as_deref().map(ModelVariant::parse).transpose()?,
        ic: args.ic.as_deref().map(IcDescriptor::parse).transpose()?,
        allow_unstable: args.allow_unstable,
    };
    overrides.apply(&mut spec);
    Ok(spec)
}

fn dispatch(command: &Command) -> peridyn::Result<()> {
    let (kind, args) = match command {
        Command::Info(a) => (ExperimentKind::SingleRun, a),
        Command::Consistency(a) => (ExperimentKind::Consistency, a),
        Command::HConv(a) => (ExperimentKind::HConv, a),
        Command::EpsConv(a) => (ExperimentKind::EpsConv, a),
        Command::Compare(a) => (ExperimentKind::Compare, a),
        Command::Gap(a) => (ExperimentKind::Gap, a),
        Command::Stability(a) => (ExperimentKind::Stability, a),
        Command::Run(a) => (ExperimentKind::SingleRun, a),
    };
    let spec = build_spec(kind, args)?;

    if matches!(command, Command::Info(_)) {
        let table = material_info(&spec)?;
        print!("{}", table.to_csv_string());
        return Ok(());
    }

    let output = execute(&spec)?;
    match &spec.out {
        Some(dir) => {
            let paths = output.write_to_dir(dir)?;
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        None => {
            for table in &output.tables {
                print!("{}", table.to_csv_string());
            }
            for (name, field) in &output.fields {
                println!("# field {name}");
                let mut buf = Vec::new();
                field.write_csv(&mut buf)?;
                print!("{}", String::from_utf8_lossy(&buf));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("PERIDYN_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        } else {
            eprintln!("ignoring unparseable PERIDYN_THREADS='{threads}'");
        }
    }
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::from(0),
        Err(err @ Error::BlowUp { .. }) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
