//! Command-line front end.
//!
//! Four subcommands share one flag set: `static` (self-consistent ground
//! state per alpha), `emft-sweep` and `exact-sweep` (trajectory sweeps in
//! CSV), and `compare` (both theories side by side with turning-point
//! counts). Settings resolve as flags over config file over defaults.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numerical
//! failure (non-convergence under `--strict`, unstable integration),
//! 4 I/O error. Output goes to stdout unless `--out` is given; repeated
//! runs with the same settings produce byte-identical output.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{ConfigError, Mode, PartialConfig, SweepConfig};
use super::csv::{render_compare_csv, render_sweep_csv};
use super::sweep::{self, SweepRecord, SweepResult};
use super::HarnessError;
use crate::emft::{self, EmftError, QuenchProtocol};
use crate::entanglement::{log_negativity, DensityMatrix};
use crate::exactchain::{self, ChainSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "emft-quench",
    version,
    about = "Entanglement dynamics of the quenched transverse-field Ising model: \
             self-consistent bond mean field against the exact ring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Self-consistent ground state per alpha, one CSV row each
    Static(CommonArgs),
    /// Mean-field entanglement trajectories over the (alpha, tau) grid
    EmftSweep(CommonArgs),
    /// Exact-ring entanglement trajectories over the same grid
    ExactSweep(CommonArgs),
    /// Mean field vs exact ring at one alpha, with crest/trough counts
    Compare(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Static(a)
            | Command::EmftSweep(a)
            | Command::ExactSweep(a)
            | Command::Compare(a) => a,
        }
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Scaled pre-quench field (shorthand for a one-point alpha grid)
    #[arg(long, conflicts_with_all = ["alpha_min", "alpha_max", "alpha_steps"])]
    alpha: Option<f64>,
    /// Lower edge of the alpha grid
    #[arg(long)]
    alpha_min: Option<f64>,
    /// Upper edge of the alpha grid
    #[arg(long)]
    alpha_max: Option<f64>,
    /// Number of alpha grid points, ends inclusive
    #[arg(long)]
    alpha_steps: Option<usize>,
    /// End of the scaled-time grid [0, tau-max]
    #[arg(long)]
    tau_max: Option<f64>,
    /// Number of tau grid points, ends inclusive
    #[arg(long)]
    tau_steps: Option<usize>,
    /// Coordination number of the mean-field bond (EMFT side only)
    #[arg(long)]
    nu_e: Option<u32>,
    /// Ring size for the exact chain, even and at least 8
    #[arg(long)]
    chain_n: Option<usize>,
    /// Dynamical closure for the mean-field side
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Hysteresis width for crest/trough counting
    #[arg(long)]
    extrema_eps: Option<f64>,
    /// Read `key = value` settings from this file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fail (exit 3) if any record does not converge
    #[arg(long)]
    strict: bool,
    /// Worker threads for the alpha sweep (default: one per core)
    #[arg(long)]
    threads: Option<usize>,
}

impl CommonArgs {
    fn to_partial(&self) -> PartialConfig {
        PartialConfig {
            mode: self.mode,
            alpha: self.alpha,
            alpha_min: self.alpha_min,
            alpha_max: self.alpha_max,
            alpha_steps: self.alpha_steps,
            tau_max: self.tau_max,
            tau_steps: self.tau_steps,
            nu_e: self.nu_e,
            chain_n: self.chain_n,
            extrema_eps: self.extrema_eps,
            out: self.out.clone(),
            strict: self.strict.then_some(true),
            threads: self.threads,
        }
    }
}

fn exit_code(err: &HarnessError) -> i32 {
    match err {
        HarnessError::Config(_)
        | HarnessError::Csv(_)
        | HarnessError::Extrema(_)
        | HarnessError::GridMismatch
        | HarnessError::ThreadPool(_) => EXIT_USAGE,
        HarnessError::Emft(_) | HarnessError::Exact(_) | HarnessError::NotConverged(..) => {
            EXIT_NUMERICAL
        }
        HarnessError::Io(_) => EXIT_IO,
    }
}

fn resolve_config(args: &CommonArgs) -> Result<SweepConfig, HarnessError> {
    let mut file_layer = PartialConfig::default();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        file_layer = PartialConfig::parse_str(&text)?;
    }
    Ok(SweepConfig::resolve(
        &file_layer.overlaid(&args.to_partial()),
    )?)
}

/// Count toward `--strict`: `(failed, total)` when the flag is armed and
/// at least one record did not converge.
fn strict_violation(cfg: &SweepConfig, result: &SweepResult) -> Option<(usize, usize)> {
    (cfg.strict && !result.all_converged())
        .then(|| (result.nonconverged_count(), result.records.len()))
}

fn static_csv(cfg: &SweepConfig) -> Result<(String, Option<(usize, usize)>), HarnessError> {
    let mut records = Vec::new();
    for alpha in cfg.alpha_grid() {
        let protocol = QuenchProtocol::from_alpha_nu(alpha, cfg.nu_e)?;
        let sol = emft::static_fixed_point(&protocol);
        let rho = DensityMatrix::from_pure(&sol.state).map_err(EmftError::from)?;
        records.push(SweepRecord {
            alpha,
            tau: 0.0,
            c: sol.c,
            log_negativity: log_negativity(&rho),
            converged: sol.converged,
            iterations: sol.iterations,
            residual: sol.residual,
        });
    }
    let result = SweepResult { records };
    Ok((
        render_sweep_csv(&result.records),
        strict_violation(cfg, &result),
    ))
}

fn compare_csv(cfg: &SweepConfig) -> Result<(String, Option<(usize, usize)>), HarnessError> {
    let invalid = |msg: &str| HarnessError::Config(ConfigError::Invalid(msg.to_string()));
    if cfg.nu_e != 1 {
        return Err(invalid(
            "compare requires nu-e = 1: the ring pairs each site with one bond partner",
        ));
    }
    if cfg.alpha_steps != 1 {
        return Err(invalid("compare runs at a single alpha"));
    }
    if cfg.tau_steps < 3 {
        return Err(invalid(
            "compare needs at least 3 tau points to count extrema",
        ));
    }
    let alpha = cfg.alpha_min;
    let taus = cfg.tau_grid();
    let protocol = QuenchProtocol::from_alpha(alpha)?;
    let emft_traj = match cfg.mode {
        Mode::Fixed => emft::emft_entanglement_trajectory(&protocol, &taus)?,
        Mode::Tdscf => emft::evolve_tdscf(&protocol, &taus)?,
    };
    let spec = ChainSpec::new(cfg.chain_n, 1.0, alpha)?;
    let exact_traj = exactchain::exact_entanglement_trajectory(&spec, &taus)?;
    let report = sweep::compare_sections(&emft_traj, &exact_traj, cfg.extrema_eps)?;
    let text = render_compare_csv(&report, cfg);
    let bad = emft_traj.iter().filter(|p| !p.converged).count();
    let failed = (cfg.strict && bad > 0).then_some((bad, emft_traj.len()));
    Ok((text, failed))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), HarnessError> {
    let cfg = resolve_config(cli.command.args())?;
    let (text, failed) = match &cli.command {
        Command::Static(_) => static_csv(&cfg)?,
        Command::EmftSweep(_) => {
            let result = sweep::run_emft_sweep(&cfg)?;
            (
                render_sweep_csv(&result.records),
                strict_violation(&cfg, &result),
            )
        }
        Command::ExactSweep(_) => {
            let result = sweep::run_exact_sweep(&cfg)?;
            (
                render_sweep_csv(&result.records),
                strict_violation(&cfg, &result),
            )
        }
        Command::Compare(_) => compare_csv(&cfg)?,
    };
    // data first, verdict second: strict failures still emit their output
    emit(&cfg.out, &text)?;
    if let Some((bad, total)) = failed {
        return Err(HarnessError::NotConverged(bad, total));
    }
    Ok(())
}

/// Parse `std::env::args`, run, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(argv: &[&str]) -> Cli {
        Cli::try_parse_from(argv).unwrap()
    }

    #[test]
    fn flags_override_config_file_which_overrides_defaults() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "tau-max = 5\ntau-steps = 11\nnu-e = 3").unwrap();
        let path = file.path().to_str().unwrap().to_string();
        let cli = parse(&[
            "emft-quench",
            "emft-sweep",
            "--config",
            &path,
            "--tau-max",
            "9",
        ]);
        let cfg = resolve_config(cli.command.args()).unwrap();
        assert_eq!(cfg.tau_max, 9.0); // flag beats file
        assert_eq!(cfg.tau_steps, 11); // file beats default
        assert_eq!(cfg.nu_e, 3);
        assert_eq!(cfg.tau_grid().len(), 11);
        assert_eq!(cfg.alpha_grid(), vec![0.594]); // untouched default
    }

    #[test]
    fn alpha_flag_conflicts_with_range_flags() {
        let err = Cli::try_parse_from([
            "emft-quench",
            "static",
            "--alpha",
            "0.5",
            "--alpha-min",
            "0.2",
        ])
        .unwrap_err();
        assert!(err.use_stderr());
    }

    #[test]
    fn mode_values_are_restricted() {
        let cli = parse(&["emft-quench", "compare", "--mode", "tdscf"]);
        assert_eq!(cli.command.args().mode, Some(Mode::Tdscf));
        assert!(Cli::try_parse_from(["emft-quench", "compare", "--mode", "both"]).is_err());
    }

    #[test]
    fn missing_config_file_is_an_io_error() {
        let cli = parse(&[
            "emft-quench",
            "static",
            "--config",
            "/definitely/not/here.conf",
        ]);
        let err = resolve_config(cli.command.args()).unwrap_err();
        assert!(matches!(err, HarnessError::Io(_)));
        assert_eq!(exit_code(&err), EXIT_IO);
    }

    #[test]
    fn exit_codes_partition_the_error_space() {
        assert_eq!(
            exit_code(&HarnessError::Config(ConfigError::Invalid("x".into()))),
            EXIT_USAGE
        );
        assert_eq!(exit_code(&HarnessError::GridMismatch), EXIT_USAGE);
        assert_eq!(
            exit_code(&HarnessError::NotConverged(3, 10)),
            EXIT_NUMERICAL
        );
        assert_eq!(exit_code(&HarnessError::Io(io::Error::other("x"))), EXIT_IO);
    }

    #[test]
    fn static_subcommand_writes_one_row_per_alpha() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("static.csv");
        let cli = parse(&[
            "emft-quench",
            "static",
            "--alpha-min",
            "0.4",
            "--alpha-max",
            "0.8",
            "--alpha-steps",
            "3",
            "--out",
            out.to_str().unwrap(),
        ]);
        dispatch(&cli).unwrap();
        let text = fs::read_to_string(&out).unwrap();
        let records = super::super::csv::parse_sweep_csv(&text).unwrap();
        assert_eq!(records.len(), 3);
        for r in &records {
            assert!(r.converged);
            assert_eq!(r.tau, 0.0);
            // static law on the ordered side
            let law = r.c * r.c + r.alpha * r.alpha;
            assert!((law - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn compare_guards_reject_unusable_settings() {
        let run = |argv: &[&str]| {
            let cli = Cli::try_parse_from(argv).unwrap();
            dispatch(&cli).unwrap_err()
        };
        let err = run(&["emft-quench", "compare", "--nu-e", "4"]);
        assert_eq!(exit_code(&err), EXIT_USAGE);
        let err = run(&[
            "emft-quench",
            "compare",
            "--alpha-min",
            "0.2",
            "--alpha-max",
            "0.8",
            "--alpha-steps",
            "5",
        ]);
        assert_eq!(exit_code(&err), EXIT_USAGE);
        let err = run(&["emft-quench", "compare", "--tau-steps", "2"]);
        assert_eq!(exit_code(&err), EXIT_USAGE);
    }

    #[test]
    fn unwritable_output_path_maps_to_io() {
        let cli = parse(&[
            "emft-quench",
            "static",
            "--alpha",
            "0.5",
            "--out",
            "/nonexistent-dir-for-sure/out.csv",
        ]);
        let err = dispatch(&cli).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_IO);
    }
}
