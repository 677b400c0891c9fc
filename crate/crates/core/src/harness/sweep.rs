//! Alpha-grid sweeps over both solver families and the side-by-side
//! comparison.
//!
//! Sweeps parallelize over the alpha grid with rayon; each trajectory is
//! sequential in `tau` (the fixed-point solver seeds by continuation).
//! Records are collected in grid order, so output does not depend on the
//! thread count.

use rayon::prelude::*;

use super::config::{Mode, SweepConfig};
use super::extrema::count_extrema;
use super::HarnessError;
use crate::emft::{self, QuenchProtocol, Trajectory, TrajectoryPoint};
use crate::exactchain::{self, ChainSpec};

/// One sweep row: a trajectory record tagged with its scaled field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub alpha: f64,
    pub tau: f64,
    /// Bond correlator: self-consistent `C` for EMFT runs, `⟨σx σx⟩` of
    /// neighbouring sites for exact-chain runs.
    pub c: f64,
    pub log_negativity: f64,
    pub converged: bool,
    pub iterations: u32,
    pub residual: f64,
}

/// All records of a sweep, in `(alpha, tau)` grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    pub fn all_converged(&self) -> bool {
        self.records.iter().all(|r| r.converged)
    }

    pub fn nonconverged_count(&self) -> usize {
        self.records.iter().filter(|r| !r.converged).count()
    }
}

/// One comparison row: both predictions at the same scaled time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub tau: f64,
    pub l_emft: f64,
    pub l_exact: f64,
}

/// Side-by-side trajectories plus their turning-point statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub emft_crests: usize,
    pub emft_troughs: usize,
    pub exact_crests: usize,
    pub exact_troughs: usize,
    /// Whether both series show the same number of crests and troughs.
    pub counts_equal: bool,
}

fn with_pool<R: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> R + Send,
) -> Result<R, HarnessError> {
    match threads {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| HarnessError::ThreadPool(e.to_string())),
    }
}

fn flatten(alphas: &[f64], per_alpha: Vec<Trajectory>) -> SweepResult {
    let records = alphas
        .iter()
        .zip(per_alpha)
        .flat_map(|(&alpha, traj)| {
            traj.into_iter().map(move |pt| SweepRecord {
                alpha,
                tau: pt.tau,
                c: pt.c,
                log_negativity: pt.log_negativity,
                converged: pt.converged,
                iterations: pt.iterations,
                residual: pt.residual,
            })
        })
        .collect();
    SweepResult { records }
}

/// Mean-field sweep: one trajectory per alpha in the configured mode.
///
/// Solver non-convergence is recorded per row, not raised; hard failures
/// (an unstable integration step) abort the sweep.
pub fn run_emft_sweep(cfg: &SweepConfig) -> Result<SweepResult, HarnessError> {
    let alphas = cfg.alpha_grid();
    let taus = cfg.tau_grid();
    let per_alpha = with_pool(cfg.threads, || {
        alphas
            .par_iter()
            .map(|&alpha| {
                let protocol = QuenchProtocol::from_alpha_nu(alpha, cfg.nu_e)?;
                match cfg.mode {
                    Mode::Fixed => emft::emft_entanglement_trajectory(&protocol, &taus),
                    Mode::Tdscf => emft::evolve_tdscf(&protocol, &taus),
                }
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(flatten(&alphas, per_alpha))
}

/// Exact-chain sweep on the same grids; the ring size comes from
/// `cfg.chain_n` and the records are always converged.
pub fn run_exact_sweep(cfg: &SweepConfig) -> Result<SweepResult, HarnessError> {
    let alphas = cfg.alpha_grid();
    let taus = cfg.tau_grid();
    let per_alpha = with_pool(cfg.threads, || {
        alphas
            .par_iter()
            .map(|&alpha| {
                let spec = ChainSpec::new(cfg.chain_n, 1.0, alpha)?;
                exactchain::exact_entanglement_trajectory(&spec, &taus)
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(flatten(&alphas, per_alpha))
}

/// Pair two trajectories on the same time grid and count turning points
/// of each entanglement series with hysteresis width `eps`.
pub fn compare_sections(
    emft_traj: &[TrajectoryPoint],
    exact_traj: &[TrajectoryPoint],
    eps: f64,
) -> Result<CompareReport, HarnessError> {
    if emft_traj.len() != exact_traj.len()
        || emft_traj
            .iter()
            .zip(exact_traj)
            .any(|(a, b)| a.tau != b.tau)
    {
        return Err(HarnessError::GridMismatch);
    }
    let l_emft: Vec<f64> = emft_traj.iter().map(|p| p.log_negativity).collect();
    let l_exact: Vec<f64> = exact_traj.iter().map(|p| p.log_negativity).collect();
    let (emft_crests, emft_troughs) = count_extrema(&l_emft, eps)?;
    let (exact_crests, exact_troughs) = count_extrema(&l_exact, eps)?;
    let rows = emft_traj
        .iter()
        .zip(exact_traj)
        .map(|(a, b)| CompareRow {
            tau: a.tau,
            l_emft: a.log_negativity,
            l_exact: b.log_negativity,
        })
        .collect();
    Ok(CompareReport {
        rows,
        emft_crests,
        emft_troughs,
        exact_crests,
        exact_troughs,
        counts_equal: emft_crests == exact_crests && emft_troughs == exact_troughs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::PartialConfig;

    fn cfg_of(text: &str) -> SweepConfig {
        SweepConfig::resolve(&PartialConfig::parse_str(text).unwrap()).unwrap()
    }

    fn small_cfg(alpha_lines: &str) -> SweepConfig {
        cfg_of(&format!(
            "tau-max = 2\ntau-steps = 9\nchain-n = 8\n{alpha_lines}"
        ))
    }

    #[test]
    fn emft_sweep_matches_the_direct_trajectory() {
        let cfg = small_cfg("alpha = 0.5");
        let result = run_emft_sweep(&cfg).unwrap();
        assert_eq!(result.records.len(), 9);
        assert!(result.all_converged());
        let protocol = QuenchProtocol::from_alpha(0.5).unwrap();
        let direct = emft::emft_entanglement_trajectory(&protocol, &cfg.tau_grid()).unwrap();
        for (rec, pt) in result.records.iter().zip(&direct) {
            assert_eq!(rec.alpha, 0.5);
            assert_eq!(rec.tau, pt.tau);
            assert_eq!(rec.c.to_bits(), pt.c.to_bits());
            assert_eq!(rec.log_negativity.to_bits(), pt.log_negativity.to_bits());
        }
    }

    #[test]
    fn exact_sweep_matches_the_direct_trajectory() {
        let cfg = small_cfg("alpha = 0.594");
        let result = run_exact_sweep(&cfg).unwrap();
        assert_eq!(result.records.len(), 9);
        assert!(result.all_converged());
        let spec = ChainSpec::new(8, 1.0, 0.594).unwrap();
        let direct = exactchain::exact_entanglement_trajectory(&spec, &cfg.tau_grid()).unwrap();
        for (rec, pt) in result.records.iter().zip(&direct) {
            assert_eq!(rec.log_negativity.to_bits(), pt.log_negativity.to_bits());
            assert_eq!(rec.c.to_bits(), pt.c.to_bits());
            assert_eq!(rec.iterations, 0);
        }
    }

    #[test]
    fn sweeps_are_thread_count_invariant() {
        let base = small_cfg("alpha-min = 0.3\nalpha-max = 0.9\nalpha-steps = 4");
        let mut twice = base.clone();
        twice.threads = Some(2);
        let mut quad = base.clone();
        quad.threads = Some(4);
        let r1 = run_emft_sweep(&base).unwrap();
        let r2 = run_emft_sweep(&twice).unwrap();
        let r3 = run_emft_sweep(&quad).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1, r3);
        // records arrive in alpha-major order
        let alphas: Vec<f64> = r1.records.iter().map(|r| r.alpha).collect();
        assert!(alphas.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn critical_point_reports_nonconvergence_without_failing() {
        // at alpha = 1 the fixed-point map loses linear stability and the
        // damped iteration stalls inside the iteration budget
        let cfg = cfg_of("alpha = 1.0\ntau-max = 1\ntau-steps = 3\nchain-n = 8");
        let result = run_emft_sweep(&cfg).unwrap();
        assert!(!result.all_converged());
        assert!(result.nonconverged_count() > 0);
    }

    #[test]
    fn compare_counts_both_series() {
        let mk = |vals: &[f64]| -> Vec<TrajectoryPoint> {
            vals.iter()
                .enumerate()
                .map(|(i, &l)| TrajectoryPoint {
                    tau: i as f64,
                    c: 0.0,
                    log_negativity: l,
                    converged: true,
                    iterations: 0,
                    residual: 0.0,
                })
                .collect()
        };
        let one_peak = mk(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let two_peaks = mk(&[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        let report = compare_sections(&one_peak, &two_peaks, 0.1).unwrap();
        assert_eq!((report.emft_crests, report.emft_troughs), (1, 0));
        assert_eq!((report.exact_crests, report.exact_troughs), (3, 2));
        assert!(!report.counts_equal);
        assert_eq!(report.rows.len(), 7);
        assert_eq!(report.rows[1].l_emft, 1.0);
        assert_eq!(report.rows[3].l_exact, 1.0);

        let same = compare_sections(&two_peaks, &two_peaks, 0.1).unwrap();
        assert!(same.counts_equal);
    }

    #[test]
    fn compare_rejects_mismatched_grids() {
        let mk = |taus: &[f64]| -> Vec<TrajectoryPoint> {
            taus.iter()
                .map(|&tau| TrajectoryPoint {
                    tau,
                    c: 0.0,
                    log_negativity: 0.0,
                    converged: true,
                    iterations: 0,
                    residual: 0.0,
                })
                .collect()
        };
        let a = mk(&[0.0, 1.0, 2.0]);
        let short = mk(&[0.0, 1.0]);
        assert!(matches!(
            compare_sections(&a, &short, 0.1),
            Err(HarnessError::GridMismatch)
        ));
        let shifted = mk(&[0.0, 1.0, 2.5]);
        assert!(matches!(
            compare_sections(&a, &shifted, 0.1),
            Err(HarnessError::GridMismatch)
        ));
        // degenerate eps propagates as an extrema error
        assert!(matches!(
            compare_sections(&a, &a, 0.0),
            Err(HarnessError::Extrema(_))
        ));
    }
}
