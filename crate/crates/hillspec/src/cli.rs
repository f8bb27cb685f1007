//! Argument grammar and subcommand dispatch.
//!
//! Every subcommand follows the same shape: parse flags, load and validate
//! inputs, compute fully in memory, then write outputs — so a failing run
//! never leaves partial files behind.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hill_core::asymptotics;
use hill_core::decay::{self, Thresholds};
use hill_core::floquet;
use hill_core::potential::FourierPotential;
use hill_core::Parity;

use crate::config::{canonical_modes, load_potential, require, RunConfig};
use crate::{corpus, driver, emit, CliError, ResultBundle};

#[derive(Debug, Parser)]
#[command(
    name = "hillspec",
    version,
    about = "Spectral toolkit for the Hill operator -y'' + q(x)y with a 1-periodic potential",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Periodic and anti-periodic eigenvalues via shooting-based refinement
    Spectrum(SpectrumArgs),
    /// Instability intervals (spectral gaps) from the refined spectrum
    Gaps(SpectrumArgs),
    /// Fourier coefficients of the potential
    Coeffs(PotentialOnlyArgs),
    /// Eigenvalues of the truncated-matrix (Galerkin) operator
    Galerkin(GalerkinArgs),
    /// Asymptotic pair predictions compared against measured eigenvalues
    Asym(AsymArgs),
    /// Run a verification harness
    Verify {
        #[command(subcommand)]
        harness: VerifyCommand,
    },
    /// Emit the built-in potential corpus
    Corpus(CorpusArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ParityArg {
    Periodic,
    Antiperiodic,
}

impl ParityArg {
    fn to_core(self) -> Parity {
        match self {
            ParityArg::Periodic => Parity::Periodic,
            ParityArg::Antiperiodic => Parity::Antiperiodic,
        }
    }

    fn text(self) -> &'static str {
        match self {
            ParityArg::Periodic => "periodic",
            ParityArg::Antiperiodic => "antiperiodic",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RouteArg {
    /// Truncated-matrix eigensolve
    Galerkin,
    /// Shooting-based discriminant refinement
    Floquet,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Potential config file (JSON; see README for the schema)
    #[arg(long)]
    pub potential: PathBuf,
    /// Eigenvalues per boundary-condition family
    #[arg(long, default_value_t = 8)]
    pub count: usize,
    /// Refinement tolerance on eigenvalue location
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Restrict CSV rows to one family
    #[arg(long)]
    pub parity: Option<ParityArg>,
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct PotentialOnlyArgs {
    #[arg(long)]
    pub potential: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GalerkinArgs {
    #[arg(long)]
    pub potential: PathBuf,
    /// Eigenvalues per boundary-condition family
    #[arg(long, default_value_t = 8)]
    pub count: usize,
    /// Override the automatic truncation cutoff
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    #[arg(long)]
    pub potential: PathBuf,
    /// Pair family to analyze
    #[arg(long, value_enum, default_value_t = ParityArg::Periodic)]
    pub parity: ParityArg,
    /// First pair index
    #[arg(long, default_value_t = 8)]
    pub m_min: usize,
    /// Last pair index (inclusive)
    #[arg(long, default_value_t = 16)]
    pub m_max: usize,
    /// Measurement route for the eigenvalue pairs
    #[arg(long, value_enum, default_value_t = RouteArg::Galerkin)]
    pub route: RouteArg,
    /// Refinement tolerance (floquet route only)
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Forward harness: gap decay implies coefficient decay
    Thm1(Thm1Args),
    /// Inverse harness: spectral smallness pins the potential to zero
    Thm2(Thm2Args),
}

#[derive(Debug, Args)]
pub struct Thm1Args {
    #[arg(long)]
    pub potential: PathBuf,
    /// Largest gap index in the sweep
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
    /// Per-block decay ratio for the small-o verdict
    #[arg(long, default_value_t = Thresholds::default().rho)]
    pub rho: f64,
    /// Absolute floor on the scaled tail
    #[arg(long, default_value_t = Thresholds::default().tau_abs)]
    pub tau_abs: f64,
    /// Allowed total block growth for the big-O verdict
    #[arg(long, default_value_t = Thresholds::default().gamma)]
    pub gamma: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct Thm2Args {
    #[arg(long)]
    pub potential: PathBuf,
    /// Gap smallness is required for indices beyond this
    #[arg(long, default_value_t = 8)]
    pub n0: usize,
    /// Smallness constant in the hypothesis l_n < eps/n²
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Refinement tolerance for the underlying spectrum
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Directory to populate
    #[arg(long, default_value = "corpus")]
    pub out_dir: PathBuf,
    /// Seed for the randomized corpus entry
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Spot-check indices for the forward harness: dense at low index where
/// both measurement routes are sharp, then thinning out.
fn default_spot_checks(n_max: usize) -> Vec<usize> {
    [1, 2, 3, 4, 6, 8, 12, 16]
        .into_iter()
        .filter(|&n| n <= n_max)
        .collect()
}

impl Cli {
    pub fn execute(self) -> Result<ResultBundle, CliError> {
        match self.command {
            Command::Spectrum(args) => run_spectrum(args, false),
            Command::Gaps(args) => run_spectrum(args, true),
            Command::Coeffs(args) => run_coeffs(args),
            Command::Galerkin(args) => run_galerkin(args),
            Command::Asym(args) => run_asym(args),
            Command::Verify { harness } => match harness {
                VerifyCommand::Thm1(args) => run_thm1(args),
                VerifyCommand::Thm2(args) => run_thm2(args),
            },
            Command::Corpus(args) => run_corpus(args),
        }
    }
}

fn bundle(config_hash: String, files: Vec<PathBuf>, verification_failed: bool) -> ResultBundle {
    for f in &files {
        println!("wrote {}", f.display());
    }
    ResultBundle {
        config_hash,
        files,
        verification_failed,
    }
}

fn spectrum_config(command: &str, q: &FourierPotential, args: &SpectrumArgs) -> RunConfig {
    RunConfig {
        potential: Some(canonical_modes(q)),
        count: Some(args.count),
        tol: Some(args.tol),
        parity: args.parity.map(|p| p.text().to_owned()),
        ..RunConfig::new(command)
    }
}

fn run_spectrum(args: SpectrumArgs, emit_gaps: bool) -> Result<ResultBundle, CliError> {
    require(args.count >= 1, "--count must be at least 1")?;
    require(args.tol > 0.0, "--tol must be positive")?;
    let (q, _) = load_potential(&args.potential)?;
    let command = if emit_gaps { "gaps" } else { "spectrum" };
    let cfg = spectrum_config(command, &q, &args);
    let hash = cfg.hash();

    let table = driver::spectrum_parallel(&q, args.count, args.tol)?;
    let (name, text) = if emit_gaps {
        let gaps = floquet::gap_table(&table);
        ("gaps.csv", emit::gaps_csv(&gaps, &hash))
    } else {
        (
            "spectrum.csv",
            emit::spectrum_csv(&table, &hash, args.parity.map(ParityArg::to_core)),
        )
    };
    let path = emit::write_file(&args.out_dir, name, &text)?;
    Ok(bundle(hash, vec![path], false))
}

fn run_coeffs(args: PotentialOnlyArgs) -> Result<ResultBundle, CliError> {
    let (q, _) = load_potential(&args.potential)?;
    let cfg = RunConfig {
        potential: Some(canonical_modes(&q)),
        ..RunConfig::new("coeffs")
    };
    let hash = cfg.hash();
    let text = emit::coeffs_csv(&q, &hash);
    let path = emit::write_file(&args.out_dir, "coeffs.csv", &text)?;
    Ok(bundle(hash, vec![path], false))
}

fn run_galerkin(args: GalerkinArgs) -> Result<ResultBundle, CliError> {
    require(args.count >= 1, "--count must be at least 1")?;
    let (q, _) = load_potential(&args.potential)?;
    let cfg = RunConfig {
        potential: Some(canonical_modes(&q)),
        count: Some(args.count),
        cutoff: args.cutoff,
        ..RunConfig::new("galerkin")
    };
    let hash = cfg.hash();
    let table = driver::matrix_spectrum(&q, args.count, args.cutoff)?;
    let text = emit::spectrum_csv(&table, &hash, None);
    let path = emit::write_file(&args.out_dir, "galerkin.csv", &text)?;
    Ok(bundle(hash, vec![path], false))
}

fn run_asym(args: AsymArgs) -> Result<ResultBundle, CliError> {
    require(args.m_min >= 2, "--m-min must be at least 2")?;
    require(args.m_max >= args.m_min, "--m-max must be >= --m-min")?;
    require(args.m_max <= 96, "--m-max larger than 96 is not supported")?;
    let (q, _) = load_potential(&args.potential)?;
    let parity = args.parity.to_core();
    let route_text = match args.route {
        RouteArg::Galerkin => "galerkin",
        RouteArg::Floquet => "floquet",
    };
    let cfg = RunConfig {
        potential: Some(canonical_modes(&q)),
        parity: Some(args.parity.text().to_owned()),
        m_min: Some(args.m_min),
        m_max: Some(args.m_max),
        route: Some(route_text.to_owned()),
        tol: Some(args.tol),
        ..RunConfig::new("asym")
    };
    let hash = cfg.hash();

    let count = 2 * args.m_max + 3;
    let table = match args.route {
        RouteArg::Galerkin => driver::matrix_spectrum(&q, count, None)?,
        RouteArg::Floquet => driver::spectrum_parallel(&q, count, args.tol)?,
    };
    let mut measured = Vec::with_capacity(args.m_max - args.m_min + 1);
    for m in args.m_min..=args.m_max {
        let (p1, p2) = parity.pair_positions(m);
        let fam = table.family(parity);
        measured.push((m, fam[p1].lambda, fam[p2].lambda));
    }
    let rows = asymptotics::report_rows(&q, parity, &measured)?;
    let text = emit::asym_csv(&rows, &hash);
    let path = emit::write_file(&args.out_dir, "asym.csv", &text)?;
    Ok(bundle(hash, vec![path], false))
}

fn run_thm1(args: Thm1Args) -> Result<ResultBundle, CliError> {
    require(
        (16..=200).contains(&args.n_max),
        "--n-max must lie in [16, 200]",
    )?;
    require(
        args.rho > 0.0 && args.rho < 1.0,
        "--rho must lie in (0, 1)",
    )?;
    require(args.tau_abs > 0.0, "--tau-abs must be positive")?;
    require(args.gamma >= 1.0, "--gamma must be at least 1")?;
    let (q, _) = load_potential(&args.potential)?;
    let thresholds = Thresholds {
        rho: args.rho,
        tau_abs: args.tau_abs,
        gamma: args.gamma,
    };
    let cfg = RunConfig {
        potential: Some(canonical_modes(&q)),
        n_max: Some(args.n_max),
        rho: Some(args.rho),
        tau_abs: Some(args.tau_abs),
        gamma: Some(args.gamma),
        ..RunConfig::new("verify-thm1")
    };
    let hash = cfg.hash();

    let subset = default_spot_checks(args.n_max);
    let report = decay::theorem1_harness(&q, args.n_max, &thresholds, &subset)?;
    let pass = report.implication_holds && report.cross_checks_pass();
    let text = emit::thm1_verdict_json(&report, &hash);
    let path = emit::write_file(&args.out_dir, "verdict_thm1.json", &text)?;
    println!(
        "thm1: gaps {}, coefficients {}, implication {}, spot checks {}",
        emit::class_text(report.gap_verdict.classification),
        emit::class_text(report.coefficient_verdict.classification),
        if report.implication_holds { "holds" } else { "violated" },
        if report.cross_checks_pass() { "pass" } else { "fail" },
    );
    Ok(bundle(hash, vec![path], !pass))
}

fn run_thm2(args: Thm2Args) -> Result<ResultBundle, CliError> {
    require(
        (4..=48).contains(&args.n0),
        "--n0 must lie in [4, 48]",
    )?;
    require(args.eps > 0.0, "--eps must be positive")?;
    require(args.tol > 0.0, "--tol must be positive")?;
    let (q, _) = load_potential(&args.potential)?;
    let cfg = RunConfig {
        potential: Some(canonical_modes(&q)),
        n0: Some(args.n0),
        eps: Some(args.eps),
        tol: Some(args.tol),
        ..RunConfig::new("verify-thm2")
    };
    let hash = cfg.hash();

    let table = driver::spectrum_parallel(&q, 2 * args.n0 + 2, args.tol)?;
    let report = decay::theorem2_analyze(&table, args.n0, args.eps, args.tol)?;
    let pass = report.consistent_with_zero == Some(true);
    let text = emit::thm2_verdict_json(&report, &hash);
    let path = emit::write_file(&args.out_dir, "verdict_thm2.json", &text)?;
    println!(
        "thm2: gap hypothesis {}, membership {}, mean {:.3e}, norm {:.3e}",
        if report.gap_hypothesis_holds { "holds" } else { "fails" },
        if report.membership_holds { "holds" } else { "fails" },
        report.recovered_mean,
        report.recovered_norm,
    );
    Ok(bundle(hash, vec![path], !pass))
}

fn run_corpus(args: CorpusArgs) -> Result<ResultBundle, CliError> {
    let cfg = RunConfig {
        seed: Some(args.seed),
        ..RunConfig::new("corpus")
    };
    let hash = cfg.hash();
    let files = corpus::write_corpus(&args.out_dir, args.seed, &hash)?;
    Ok(bundle(hash, files, false))
}
