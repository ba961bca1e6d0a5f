//! Command-line interface for the axisymmetric mass/stability toolkit.
//!
//! Exit codes: 0 on success (including a condition check that reports
//! "fails"), 1 when a computation rejects its inputs or breaks down
//! (precondition, domain, or numerical errors, and failed verification
//! cases), 2 for configuration problems (bad flags, malformed config files,
//! unknown keys, non-finite values).

mod config;
mod handlers;

use std::path::PathBuf;
use std::process::ExitCode;

use axipmt::error::{AxiError, Result};
use axipmt::field_core::Resolution;
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::FileConfig;
use handlers::FamilySelection;

#[derive(Parser)]
#[command(
    name = "axipmt",
    version,
    about = "Numerical toolkit for axisymmetric masses, curvature, and stability conditions",
    propagate_version = true
)]
struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker thread cap (falls back to AXIPMT_THREADS, then the config file).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Quadrature resolution profile.
    #[arg(long, global = true, value_enum, default_value_t = Profile::Default)]
    resolution: Profile,

    /// Seed for randomized batteries and sweep provenance.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Default,
    Coarse,
}

#[derive(Args)]
struct FamilyArgs {
    /// Metric family: flat, kerr-newman, or geometrostatic.
    #[arg(long)]
    family: Option<String>,
    /// Mass parameter (kerr-newman).
    #[arg(long)]
    m: Option<f64>,
    /// Rotation parameter (kerr-newman).
    #[arg(long)]
    a: Option<f64>,
    /// Charge parameter (kerr-newman).
    #[arg(long)]
    e: Option<f64>,
    /// Puncture scale (geometrostatic: equal punctures at z = ±1).
    #[arg(long)]
    scale: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a total-mass functional for one family member.
    Mass {
        #[command(flatten)]
        family: FamilyArgs,
        /// flux (sphere limit) or brill (bulk integral).
        #[arg(long, default_value = "flux")]
        method: String,
        /// Flux sphere radii, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        radii: Vec<f64>,
        /// Truncation ball radius for the bulk integral.
        #[arg(long, default_value_t = 200.0)]
        truncation: f64,
        /// Write the result as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Scalar curvature of the orbit-quotient geometry at a point or on a grid.
    Curvature {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        z: f64,
        /// Also sample a log-linear grid (CSV to stdout or --csv).
        #[arg(long)]
        grid: bool,
        /// Grid bounds rho_lo,rho_hi,z_lo,z_hi.
        #[arg(long, value_delimiter = ',', num_args = 4, default_value = "0.9,10,-10,10")]
        bounds: Vec<f64>,
        /// Write the grid CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate a stability condition over a standard grid.
    Check {
        #[command(flatten)]
        family: FamilyArgs,
        /// radial-monotone, area-enlarging, sub-imcf, or rm-implies-ae.
        #[arg(long)]
        condition: Option<String>,
        #[arg(long)]
        n_rho: Option<usize>,
        #[arg(long)]
        n_z: Option<usize>,
        /// Write the verdict as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Volumes, areas, and segment lengths in a family metric.
    Geometry {
        #[command(flatten)]
        family: FamilyArgs,
        /// volume, area, or length.
        #[arg(long)]
        measure: String,
        /// Solid footprint [rho0, rho1] for volume.
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
        #[arg(long, default_value_t = 2.0)]
        rho1: f64,
        /// Axis inset for the solid footprint.
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        /// Area of the coordinate sphere of this radius (instead of a band).
        #[arg(long)]
        sphere: Option<f64>,
        /// Band generator rho,z_lo,z_hi for area.
        #[arg(long, value_delimiter = ',', num_args = 3, default_value = "2,0,1")]
        band: Vec<f64>,
        /// Chord start rho,z,phi for length.
        #[arg(long = "from", value_delimiter = ',', num_args = 3, default_value = "1.2,-0.5,0")]
        from_pt: Vec<f64>,
        /// Chord end rho,z,phi for length.
        #[arg(long = "to", value_delimiter = ',', num_args = 3, default_value = "2.5,0.8,0.9")]
        to_pt: Vec<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Weighted Sobolev and Hölder deviation functionals.
    Norms {
        #[command(flatten)]
        family: FamilyArgs,
        /// Integrability exponent in [1, 2).
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Hölder exponent in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Axis inset of the sample regions.
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the planar-analysis verification batteries.
    VerifyAnalysis {
        /// log-moment, riesz, integrability, green, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Randomized cases per battery.
        #[arg(long, default_value_t = 20)]
        cases: usize,
        /// Write battery rows as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Drive a family toward zero mass and report deviation decay.
    Sweep {
        /// kerr-newman, geometrostatic, or flat.
        #[arg(long)]
        family: Option<String>,
        /// Mass schedule, strictly decreasing, comma separated.
        #[arg(long, value_delimiter = ',')]
        masses: Option<Vec<f64>>,
        /// Rotation-to-mass ratio held fixed along the sweep.
        #[arg(long)]
        a_over_m: Option<f64>,
        /// Charge-to-mass ratio held fixed along the sweep.
        #[arg(long)]
        e_over_m: Option<f64>,
        /// Puncture scale schedule (geometrostatic), comma separated.
        #[arg(long, value_delimiter = ',')]
        scales: Option<Vec<f64>>,
        /// Write the per-member table to this path instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the slope summary to this path instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Describe the built-in metric families.
    Families,
}

fn resolve_threads(cli_threads: Option<usize>, cfg: &FileConfig) -> Option<usize> {
    cli_threads
        .or_else(|| std::env::var("AXIPMT_THREADS").ok().and_then(|s| s.parse::<usize>().ok()))
        .or(cfg.threads)
}

fn run(cli: Cli) -> Result<usize> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    if let Some(n) = resolve_threads(cli.threads, &cfg) {
        if n == 0 {
            return Err(AxiError::Config("thread count must be positive".into()));
        }
        // A second build_global in the same process is fine to ignore: the
        // pool can only be installed once and tests drive the binary fresh.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let base = match cli.resolution {
        Profile::Default => Resolution::default(),
        Profile::Coarse => Resolution::coarse(),
    };
    let res = cfg.resolution(base);
    let seed = cli.seed.or(cfg.seed).unwrap_or(7);

    match cli.cmd {
        Cmd::Mass { family, method, radii, truncation, json } => {
            let fam = FamilySelection::resolve(
                &cfg,
                family.family.as_deref(),
                family.m,
                family.a,
                family.e,
                family.scale,
            );
            handlers::run_mass(&fam, &method, &radii, truncation, &res, json.as_deref())?;
            Ok(0)
        }
        Cmd::Curvature { family, rho, z, grid, bounds, csv } => {
            let fam = FamilySelection::resolve(
                &cfg,
                family.family.as_deref(),
                family.m,
                family.a,
                family.e,
                family.scale,
            );
            let b = (bounds[0], bounds[1], bounds[2], bounds[3]);
            handlers::run_curvature(&fam, rho, z, grid, b, &res, csv.as_deref())?;
            Ok(0)
        }
        Cmd::Check { family, condition, n_rho, n_z, json } => {
            let fam = FamilySelection::resolve(
                &cfg,
                family.family.as_deref(),
                family.m,
                family.a,
                family.e,
                family.scale,
            );
            handlers::run_check(
                &cfg,
                &fam,
                condition.as_deref(),
                n_rho,
                n_z,
                &res,
                json.as_deref(),
            )?;
            Ok(0)
        }
        Cmd::Geometry {
            family,
            measure,
            rho0,
            rho1,
            sigma,
            sphere,
            band,
            from_pt,
            to_pt,
            json,
        } => {
            let fam = FamilySelection::resolve(
                &cfg,
                family.family.as_deref(),
                family.m,
                family.a,
                family.e,
                family.scale,
            );
            handlers::run_geometry(
                &fam,
                &measure,
                rho0,
                rho1,
                sigma,
                sphere,
                (band[0], band[1], band[2]),
                (&from_pt, &to_pt),
                &res,
                json.as_deref(),
            )?;
            Ok(0)
        }
        Cmd::Norms { family, p, beta, sigma, json } => {
            let fam = FamilySelection::resolve(
                &cfg,
                family.family.as_deref(),
                family.m,
                family.a,
                family.e,
                family.scale,
            );
            handlers::run_norms(&fam, p, beta, sigma, &res, json.as_deref())?;
            Ok(0)
        }
        Cmd::VerifyAnalysis { suite, cases, csv } => {
            let failures = handlers::run_verify(&suite, seed, cases, &res, csv.as_deref())?;
            if failures > 0 {
                eprintln!("{failures} verification case(s) failed");
            }
            Ok(failures)
        }
        Cmd::Sweep { family, masses, a_over_m, e_over_m, scales, csv, json } => {
            let csv = csv.or_else(|| cfg.output.as_ref().and_then(|o| o.csv.clone()));
            let json = json.or_else(|| cfg.output.as_ref().and_then(|o| o.json.clone()));
            handlers::run_sweep_cmd(
                &cfg,
                family.as_deref(),
                masses,
                a_over_m,
                e_over_m,
                scales,
                seed,
                res,
                csv.as_ref(),
                json.as_ref(),
            )?;
            Ok(0)
        }
        Cmd::Families => {
            handlers::run_families();
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                AxiError::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
