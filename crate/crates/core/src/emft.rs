//! Self-consistent two-site reduction of the quenched transverse-field
//! Ising chain.
//!
//! The many-body chain is replaced by one special bond governed by
//!
//! ```text
//! H(C, h) = −J·ν_E·C·(σx⊗σx) − (h/2)·(σz⊗I + I⊗σz)
//! ```
//!
//! where the bond correlator `C = ⟨σx⊗σx⟩` must be determined
//! self-consistently from the state it generates. The factor 1/2 on the
//! field term reflects that each field line touches only one member of the
//! pair. Two dynamical closures are provided:
//!
//! * [`evolve_fixed_point`] — per-time global fixed point: find `C` such
//!   that propagating the initial state with the constant `H(C, hPost)`
//!   for time `t` reproduces `C` as the final ⟨σx⊗σx⟩ (primary mode);
//! * [`evolve_tdscf`] — instantaneous closure: integrate the Schrödinger
//!   equation with `H(C(t))` re-evaluated continuously (secondary mode).
//!
//! Both coincide for the sudden quench to zero field, where the bond
//! operator commutes with the post-quench Hamiltonian.
//!
//! Scaled variables used at every interface: `α = a/(ν_E·J)` and
//! `τ = t·ν_E·J/ħ` with `ħ = 1`.

use num_complex::Complex64;

use crate::entanglement::{log_negativity, DensityMatrix, EntanglementError};
use crate::qmat::{self, ComplexMatrix, QmatError, StateVector};
use crate::tol;

/// Failure modes of the mean-field layer.
#[derive(Debug, thiserror::Error)]
pub enum EmftError {
    #[error("coupling J must be positive, got {0}")]
    NonPositiveCoupling(f64),
    #[error("pre-quench field amplitude a must be nonzero")]
    ZeroFieldAmplitude,
    #[error("coordination number nu_E must be at least 1")]
    ZeroCoordination,
    #[error("time grid must be nonempty, start at tau = 0, and increase strictly")]
    BadGrid,
    #[error("integrator norm drift {drift:.3e} per unit time at tau = {tau} exceeds {limit:.0e}")]
    StepInstability { tau: f64, drift: f64, limit: f64 },
    #[error(transparent)]
    State(#[from] EntanglementError),
    #[error(transparent)]
    Linalg(#[from] QmatError),
}

/// The physical scenario: coupling, coordination number, sudden field drop.
///
/// The field is `a` up to `t = 0` and `hPost` (default 0) afterwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchProtocol {
    j: f64,
    nu_e: u32,
    a: f64,
    h_post: f64,
}

impl QuenchProtocol {
    /// Validating constructor: `J > 0`, `ν_E ≥ 1`, `a ≠ 0`.
    pub fn new(j: f64, nu_e: u32, a: f64, h_post: f64) -> Result<Self, EmftError> {
        if j <= 0.0 || j.is_nan() {
            return Err(EmftError::NonPositiveCoupling(j));
        }
        if nu_e == 0 {
            return Err(EmftError::ZeroCoordination);
        }
        if a == 0.0 || !a.is_finite() {
            return Err(EmftError::ZeroFieldAmplitude);
        }
        Ok(Self { j, nu_e, a, h_post })
    }

    /// Standard sudden quench to zero field at scaled field `α`, in
    /// internal units `J = 1`, `ν_E = 1`.
    pub fn from_alpha(alpha: f64) -> Result<Self, EmftError> {
        Self::new(1.0, 1, alpha, 0.0)
    }

    /// Same, with an explicit coordination number (`a = α·ν_E·J`).
    pub fn from_alpha_nu(alpha: f64, nu_e: u32) -> Result<Self, EmftError> {
        Self::new(1.0, nu_e, alpha * f64::from(nu_e), 0.0)
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn nu_e(&self) -> u32 {
        self.nu_e
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn h_post(&self) -> f64 {
        self.h_post
    }

    /// Scaled initial field `α = a/(ν_E·J)`.
    pub fn alpha(&self) -> f64 {
        self.a / (f64::from(self.nu_e) * self.j)
    }

    /// Physical time behind a scaled time `τ = t·ν_E·J/ħ`.
    fn physical_time(&self, tau: f64) -> f64 {
        tau / (f64::from(self.nu_e) * self.j)
    }
}

/// One self-consistency solve: correlator, state, and diagnostics.
#[derive(Debug, Clone)]
pub struct EmftSolution {
    /// Self-consistent bond correlator, in `[−1, 1]`.
    pub c: f64,
    /// The state realizing it (ground state or time-evolved state).
    pub state: StateVector,
    /// `|C − ⟨state|σx⊗σx|state⟩|` at exit.
    pub residual: f64,
    /// Damped-iteration updates performed.
    pub iterations: u32,
    pub converged: bool,
}

/// One record of an entanglement trajectory, with solver diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    /// Scaled time `τ = t·ν_E·J/ħ`.
    pub tau: f64,
    pub c: f64,
    /// Logarithmic negativity of the two-site state, in ebits.
    pub log_negativity: f64,
    pub converged: bool,
    pub iterations: u32,
    pub residual: f64,
}

/// Time-ordered trajectory records (strictly increasing `tau`).
pub type Trajectory = Vec<TrajectoryPoint>;

/// The reduced two-site Hamiltonian `H(C, h)` as a 4×4 Hermitian matrix.
///
/// Requires `|C| ≤ 1` (a Pauli-product expectation bound).
pub fn build_hamiltonian(protocol: &QuenchProtocol, c: f64, h: f64) -> ComplexMatrix {
    assert!(c.abs() <= 1.0, "correlator |C| = {} exceeds 1", c.abs());
    let bond = -protocol.j * f64::from(protocol.nu_e) * c;
    let field = -h / 2.0;
    // real entries throughout: −JνC on the anti-diagonal (σx⊗σx),
    // ∓h on the outer diagonal entries (σz⊗I + I⊗σz = diag(2, 0, 0, −2))
    ComplexMatrix::from_fn(4, 4, |i, j| {
        let mut v = 0.0;
        if i + j == 3 {
            v += bond;
        }
        if i == j {
            v += field * [2.0, 0.0, 0.0, -2.0][i];
        }
        Complex64::new(v, 0.0)
    })
}

/// `⟨ψ|σx⊗σx|ψ⟩`; the operator reverses the basis order, so this is
/// `Σ_i Re(ψ̄_i ψ_{3−i})`.
fn sigma_xx_expectation(psi: &StateVector) -> f64 {
    (0..4).map(|i| (psi[i].conj() * psi[3 - i]).re).sum()
}

/// One damped self-consistency run from a given seed.
///
/// `eval` maps a trial correlator to the state it generates; the loop is
/// `C ← (1−γ)C + γ⟨σx⊗σx⟩` until the residual drops below
/// [`tol::FIXED_POINT_RESIDUAL`] or the iteration cap is hit.
fn damped_iteration(seed: f64, mut eval: impl FnMut(f64) -> StateVector) -> EmftSolution {
    let mut c = seed;
    let mut iterations = 0;
    loop {
        let state = eval(c);
        let m = sigma_xx_expectation(&state);
        let residual = (c - m).abs();
        if residual <= tol::FIXED_POINT_RESIDUAL || iterations >= tol::FIXED_POINT_MAX_ITER {
            return EmftSolution {
                c,
                state,
                residual,
                iterations,
                converged: residual <= tol::FIXED_POINT_RESIDUAL,
            };
        }
        c = (1.0 - tol::FIXED_POINT_DAMPING) * c + tol::FIXED_POINT_DAMPING * m;
        iterations += 1;
    }
}

/// Seeds covering both sign branches and the interior of `[−1, 1]`.
const FIXED_POINT_SEEDS: [f64; 5] = [-1.0, -0.5, 0.25, 0.5, 1.0];

/// Self-consistent ground state: `C*` with `|g(C*)⟩` the ground state of
/// `H(C*, a)` and `C* = ⟨g|σx⊗σx|g⟩`.
///
/// All seeds in [`FIXED_POINT_SEEDS`] are tried; among distinct converged
/// solutions the one with the lowest ground-state energy wins, ties broken
/// toward `C ≥ 0`. If no seed converges the best (smallest-residual)
/// attempt is returned with `converged = false`.
pub fn static_fixed_point(protocol: &QuenchProtocol) -> EmftSolution {
    let ground = |c: f64| {
        qmat::hermitian_eig(&build_hamiltonian(protocol, c, protocol.a))
            .expect("reduced Hamiltonian is Hermitian by construction")
            .ground_state()
    };
    let runs: Vec<EmftSolution> = FIXED_POINT_SEEDS
        .iter()
        .map(|&seed| damped_iteration(seed, ground))
        .collect();

    let mut candidates: Vec<&EmftSolution> = Vec::new();
    for run in runs.iter().filter(|r| r.converged) {
        if !candidates
            .iter()
            .any(|c| (c.c - run.c).abs() <= tol::FIXED_POINT_DISTINCT)
        {
            candidates.push(run);
        }
    }
    if candidates.is_empty() {
        return runs
            .into_iter()
            .min_by(|a, b| a.residual.total_cmp(&b.residual))
            .expect("seed list is nonempty");
    }

    let energy = |sol: &EmftSolution| {
        qmat::hermitian_eig(&build_hamiltonian(protocol, sol.c, protocol.a))
            .expect("reduced Hamiltonian is Hermitian by construction")
            .eigenvalues[0]
    };
    let mut best = candidates[0];
    let mut best_energy = energy(best);
    for &cand in &candidates[1..] {
        let e = energy(cand);
        let tied = (e - best_energy).abs() <= tol::FIXED_POINT_ENERGY_TIE;
        if e < best_energy - tol::FIXED_POINT_ENERGY_TIE || (tied && cand.c > best.c) {
            best = cand;
            best_energy = e;
        }
    }
    best.clone()
}

/// Inner solve shared by [`evolve_fixed_point`] and the trajectory driver:
/// given the frozen initial state, find `C` consistent with propagation
/// under the constant `H(C, hPost)` for scaled time `tau`.
fn dynamic_fixed_point(
    protocol: &QuenchProtocol,
    tau: f64,
    psi0: &StateVector,
    seed: f64,
) -> EmftSolution {
    let t = protocol.physical_time(tau);
    damped_iteration(seed, |c| {
        let h = build_hamiltonian(protocol, c, protocol.h_post);
        qmat::evolve(&h, t, psi0).expect("propagating a validated state under a Hermitian H")
    })
}

/// Per-time global fixed point of the dynamical self-consistency condition,
/// seeded from the static solution.
///
/// Non-convergence (of the static stage or the dynamic stage) is reported
/// through `converged = false`, never a panic.
pub fn evolve_fixed_point(protocol: &QuenchProtocol, tau: f64) -> EmftSolution {
    let init = static_fixed_point(protocol);
    if !init.converged {
        return init;
    }
    dynamic_fixed_point(protocol, tau, &init.state, init.c)
}

/// A usable time grid is nonempty, starts at `τ ≥ 0` (exactly 0 when the
/// caller integrates from the quench), and increases strictly.
pub(crate) fn grid_is_valid(tau_grid: &[f64], must_start_at_zero: bool) -> bool {
    !tau_grid.is_empty()
        && tau_grid[0] >= 0.0
        && (!must_start_at_zero || tau_grid[0] == 0.0)
        && tau_grid.windows(2).all(|w| w[0] < w[1])
}

fn check_grid(tau_grid: &[f64], must_start_at_zero: bool) -> Result<(), EmftError> {
    if grid_is_valid(tau_grid, must_start_at_zero) {
        Ok(())
    } else {
        Err(EmftError::BadGrid)
    }
}

/// Entanglement trajectory in the per-time fixed-point mode: for each grid
/// point, `L(τ)` is the logarithmic negativity of `|ψ(τ)⟩⟨ψ(τ)|` from
/// [`evolve_fixed_point`], with the solver seeded by continuation (the
/// previous point's `C`; the static `C*` at the first point).
pub fn emft_entanglement_trajectory(
    protocol: &QuenchProtocol,
    tau_grid: &[f64],
) -> Result<Trajectory, EmftError> {
    check_grid(tau_grid, false)?;
    let init = static_fixed_point(protocol);
    let mut last_c = init.c;
    let mut out = Trajectory::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let sol = dynamic_fixed_point(protocol, tau, &init.state, last_c);
        if sol.converged {
            last_c = sol.c;
        }
        let rho = DensityMatrix::from_pure(&sol.state)?;
        out.push(TrajectoryPoint {
            tau,
            c: sol.c,
            log_negativity: log_negativity(&rho),
            converged: sol.converged && init.converged,
            iterations: sol.iterations,
            residual: sol.residual,
        });
    }
    Ok(out)
}

/// Entanglement trajectory in the instantaneous self-consistency mode:
/// fixed-step classic Runge-Kutta on `i dψ/dt = H(C(ψ), hPost) ψ` with
/// `C(ψ) = ⟨ψ|σx⊗σx|ψ⟩` re-evaluated inside every stage.
///
/// The grid must start at `τ = 0`. Each grid interval is subdivided to
/// steps of at most [`tol::TDSCF_MAX_STEP`]; the state norm is checked
/// against [`tol::TDSCF_NORM_DRIFT`] per unit time before renormalization,
/// and a violation aborts with a diagnostic.
pub fn evolve_tdscf(protocol: &QuenchProtocol, tau_grid: &[f64]) -> Result<Trajectory, EmftError> {
    check_grid(tau_grid, true)?;
    let init = static_fixed_point(protocol);
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |psi: &StateVector| -> StateVector {
        let h = build_hamiltonian(protocol, sigma_xx_expectation(psi), protocol.h_post);
        (h * psi) * minus_i
    };

    let mut psi = init.state.clone();
    let mut out = Trajectory::with_capacity(tau_grid.len());
    let record = |tau: f64, steps: u32, psi: &StateVector| -> Result<TrajectoryPoint, EmftError> {
        let rho = DensityMatrix::from_pure(psi)?;
        Ok(TrajectoryPoint {
            tau,
            c: sigma_xx_expectation(psi),
            log_negativity: log_negativity(&rho),
            converged: init.converged,
            iterations: steps,
            residual: 0.0,
        })
    };

    out.push(record(tau_grid[0], 0, &psi)?);
    for w in tau_grid.windows(2) {
        let interval = protocol.physical_time(w[1] - w[0]);
        let steps = (interval / tol::TDSCF_MAX_STEP).ceil().max(1.0) as u32;
        let h = interval / f64::from(steps);
        let half = Complex64::new(h / 2.0, 0.0);
        let sixth = Complex64::new(h / 6.0, 0.0);
        for _ in 0..steps {
            let k1 = rhs(&psi);
            let k2 = rhs(&(&psi + &k1 * half));
            let k3 = rhs(&(&psi + &k2 * half));
            let k4 = rhs(&(&psi + &k3 * Complex64::new(h, 0.0)));
            psi += (k1 + k2.scale(2.0) + k3.scale(2.0) + k4) * sixth;
            let norm = psi.norm();
            let drift = (norm - 1.0).abs() / h;
            if drift > tol::TDSCF_NORM_DRIFT {
                return Err(EmftError::StepInstability {
                    tau: w[1],
                    drift,
                    limit: tol::TDSCF_NORM_DRIFT,
                });
            }
            psi /= Complex64::new(norm, 0.0);
        }
        out.push(record(w[1], steps, &psi)?);
    }
    Ok(out)
}
