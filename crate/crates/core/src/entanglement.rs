//! Entanglement of a pair of spin-1/2 systems: partial transposition, the
//! Peres-Horodecki test, negativity, and logarithmic negativity.
//!
//! Only the 2×2 ⊗ 2×2 case is supported, where negativity of the partial
//! transpose is an exact entanglement criterion. Subsystem A is always the
//! first tensor factor; for two qubits every quantity here is symmetric
//! under swapping the factors, so no generality is lost.

use num_complex::Complex64;

use crate::qmat::{self, ComplexMatrix, StateVector};
use crate::tol;

/// Dimension of the two-qubit Hilbert space.
const DIM: usize = 4;

/// Failure modes of density-matrix construction.
#[derive(Debug, thiserror::Error)]
pub enum EntanglementError {
    #[error("density matrix must be 4x4, got {rows}x{cols}")]
    WrongShape { rows: usize, cols: usize },
    #[error("density matrix is not Hermitian: defect {defect:.3e} exceeds {limit:.0e}")]
    NotHermitian { defect: f64, limit: f64 },
    #[error("density matrix trace {trace:.17} deviates from 1 beyond {limit:.0e}")]
    BadTrace { trace: f64, limit: f64 },
    #[error("density matrix has eigenvalue {eigenvalue:.3e} below -{limit:.0e}")]
    NegativeEigenvalue { eigenvalue: f64, limit: f64 },
    #[error("pure state must have 4 amplitudes, got {len}")]
    WrongStateLength { len: usize },
    #[error("pure state norm² = {norm_sq:.17} deviates from 1 beyond {limit:.0e}")]
    UnnormalizedState { norm_sq: f64, limit: f64 },
}

/// Validated 4×4 density operator of two spin-1/2 systems.
///
/// Construction enforces hermiticity, unit trace, and spectrum bounded
/// below by −[`tol::DENSITY_VALID`]. The stored matrix is symmetrized as
/// `(M + M†)/2` (exactly Hermitian in f64) so downstream spectra are
/// well defined.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a 4×4 matrix.
    pub fn new(m: ComplexMatrix) -> Result<Self, EntanglementError> {
        let m = Self::check_shape_trace(m)?;
        let floor = Self::min_eigenvalue(&m);
        if floor < -tol::DENSITY_VALID {
            return Err(EntanglementError::NegativeEigenvalue {
                eigenvalue: floor,
                limit: tol::DENSITY_VALID,
            });
        }
        Ok(Self { m })
    }

    /// Validate a reconstructed matrix, clipping eigenvalues in
    /// `[−clip, 0)` to zero and renormalizing; an eigenvalue below `−clip`
    /// is a hard error (the upstream data is inconsistent, not noisy).
    pub fn new_clipped(m: ComplexMatrix, clip: f64) -> Result<Self, EntanglementError> {
        let m = Self::check_shape_trace(m)?;
        let eig = qmat::hermitian_eig(&m).expect("symmetrized matrix is Hermitian");
        if eig.eigenvalues[0] < -clip {
            return Err(EntanglementError::NegativeEigenvalue {
                eigenvalue: eig.eigenvalues[0],
                limit: clip,
            });
        }
        let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let mut rebuilt = ComplexMatrix::zeros(DIM, DIM);
        for (j, &l) in clipped.iter().enumerate() {
            let v = eig.eigenvectors.column(j);
            rebuilt += (v * v.adjoint()).map(|e| e * Complex64::new(l / total, 0.0));
        }
        // rebuilt from an orthonormal basis: already Hermitian and unit
        // trace to rounding, but run the full check anyway
        Self::new(rebuilt)
    }

    /// Projector `|ψ⟩⟨ψ|` of a normalized 4-amplitude pure state.
    pub fn from_pure(psi: &StateVector) -> Result<Self, EntanglementError> {
        if psi.len() != DIM {
            return Err(EntanglementError::WrongStateLength { len: psi.len() });
        }
        let norm_sq = psi.norm_squared();
        if (norm_sq - 1.0).abs() > tol::STATE_NORM {
            return Err(EntanglementError::UnnormalizedState {
                norm_sq,
                limit: tol::STATE_NORM,
            });
        }
        Self::new(psi * psi.adjoint())
    }

    /// The wrapped (symmetrized) matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    fn check_shape_trace(m: ComplexMatrix) -> Result<ComplexMatrix, EntanglementError> {
        if m.nrows() != DIM || m.ncols() != DIM {
            return Err(EntanglementError::WrongShape {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let defect = qmat::hermiticity_defect(&m);
        if defect > tol::DENSITY_VALID {
            return Err(EntanglementError::NotHermitian {
                defect,
                limit: tol::DENSITY_VALID,
            });
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs().max(trace.im.abs()) > tol::DENSITY_VALID {
            return Err(EntanglementError::BadTrace {
                trace: trace.re,
                limit: tol::DENSITY_VALID,
            });
        }
        Ok((&m + m.adjoint()).scale(0.5))
    }

    fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
        qmat::hermitian_eig(m)
            .expect("symmetrized matrix is Hermitian")
            .eigenvalues[0]
    }
}

/// Transposition over subsystem A only: element `((i,μ),(j,ν))` of the
/// output equals element `((j,μ),(i,ν))` of the input. Hermitian and
/// trace-preserving; applying it twice restores the input exactly.
pub fn partial_transpose(rho: &DensityMatrix) -> ComplexMatrix {
    partial_transpose_raw(rho.matrix())
}

fn partial_transpose_raw(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(DIM, DIM, |row, col| {
        let (i, mu) = (row / 2, row % 2);
        let (j, nu) = (col / 2, col % 2);
        m[(j * 2 + mu, i * 2 + nu)]
    })
}

/// Sum of moduli of the negative eigenvalues of `ρ^{T_A}`; eigenvalues in
/// `[−`[`tol::NEGATIVITY_FLOOR`]`, 0)` count as zero.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    pt_spectrum(rho)
        .into_iter()
        .filter(|&l| l < -tol::NEGATIVITY_FLOOR)
        .map(f64::abs)
        .sum()
}

/// Logarithmic negativity `L = log₂(2N + 1)` in ebits; zero iff `N` is.
pub fn log_negativity(rho: &DensityMatrix) -> f64 {
    (1.0 + 2.0 * negativity(rho)).log2()
}

/// Peres-Horodecki test: true iff `ρ^{T_A}` has an eigenvalue below
/// −[`tol::NEGATIVITY_FLOOR`] (exact iff for a pair of qubits).
pub fn is_entangled(rho: &DensityMatrix) -> bool {
    pt_spectrum(rho)[0] < -tol::NEGATIVITY_FLOOR
}

fn pt_spectrum(rho: &DensityMatrix) -> Vec<f64> {
    // PT of an exactly Hermitian matrix is exactly Hermitian
    qmat::hermitian_eig(&partial_transpose(rho))
        .expect("partial transpose of a density matrix is Hermitian")
        .eigenvalues
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use qmat::{identity, kron, pauli, PauliAxis};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        DensityMatrix::from_pure(&psi).unwrap()
    }

    fn real_diagonal(p: [f64; 4]) -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                c(p[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        }))
        .unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
        let v = StateVector::from_fn(n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let norm = v.norm();
        v / c(norm, 0.0)
    }

    /// Random 2×2 unitary: eigenbasis of a random Hermitian matrix.
    fn random_unitary2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(2, 2);
        h[(0, 0)] = c(rng.gen_range(-1.0..1.0), 0.0);
        h[(1, 1)] = c(rng.gen_range(-1.0..1.0), 0.0);
        let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        h[(0, 1)] = z;
        h[(1, 0)] = z.conj();
        qmat::hermitian_eig(&h).unwrap().eigenvectors
    }

    fn random_mixed(rng: &mut ChaCha8Rng) -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        let mut weights = [0.0; 3];
        for w in &mut weights {
            *w = rng.gen_range(0.01..1.0);
        }
        let total: f64 = weights.iter().sum();
        for w in weights {
            let psi = random_state(rng, 4);
            m += (&psi * psi.adjoint()).map(|e| e * c(w / total, 0.0));
        }
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn product_state_is_pt_invariant() {
        // |0⟩⟨0| ⊗ |+⟩⟨+| is real-symmetric, so transposing A changes nothing
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::from_vec(vec![c(s, 0.0), c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let pt = partial_transpose(&rho);
        assert!((pt - rho.matrix()).norm() < 1e-15);
    }

    #[test]
    fn diagonal_state_is_pt_invariant() {
        let rho = real_diagonal([0.4, 0.3, 0.2, 0.1]);
        assert!((partial_transpose(&rho) - rho.matrix()).norm() == 0.0);
    }

    #[test]
    fn bell_pt_spectrum_is_three_halves_and_minus_half() {
        let eig = qmat::hermitian_eig(&partial_transpose(&bell())).unwrap();
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (got, expect) in eig.eigenvalues.iter().zip(want) {
            assert_abs_diff_eq!(*got, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn pt_is_an_involution_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let rho = random_mixed(&mut rng);
            let back = partial_transpose_raw(&partial_transpose(&rho));
            assert_eq!(back, *rho.matrix());
        }
    }

    #[test]
    fn pt_preserves_trace_and_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..20 {
            let rho = random_mixed(&mut rng);
            let pt = partial_transpose(&rho);
            assert!((pt.trace() - rho.matrix().trace()).norm() < 1e-12);
            assert!(qmat::hermiticity_defect(&pt) == 0.0);
        }
    }

    #[test]
    fn bell_negativity_is_one_half() {
        assert_abs_diff_eq!(negativity(&bell()), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn maximally_mixed_state_is_ppt() {
        let rho = real_diagonal([0.25; 4]);
        assert_eq!(negativity(&rho), 0.0);
        assert_eq!(log_negativity(&rho), 0.0);
        assert!(!is_entangled(&rho));
    }

    #[test]
    fn schmidt_pair_negativity_is_uv() {
        // u|00⟩ + v|11⟩ has PT eigenvalues {u², v², ±uv}
        for theta in [0.1, 0.4, std::f64::consts::FRAC_PI_4, 1.2, 1.5] {
            let (u, v) = (theta.cos(), theta.sin());
            let psi = StateVector::from_vec(vec![c(u, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(v, 0.0)]);
            let rho = DensityMatrix::from_pure(&psi).unwrap();
            assert_abs_diff_eq!(negativity(&rho), (u * v).abs(), epsilon = 1e-10);
            assert_abs_diff_eq!(
                log_negativity(&rho),
                (1.0 + 2.0 * (u * v).abs()).log2(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn bell_log_negativity_is_one_ebit() {
        assert_abs_diff_eq!(log_negativity(&bell()), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn bell_is_entangled_product_is_not() {
        assert!(is_entangled(&bell()));
        let psi = StateVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(!is_entangled(&DensityMatrix::from_pure(&psi).unwrap()));
    }

    /// Self-consistent two-site ground state at α = 0.5: `cos θ|00⟩ +
    /// sin θ|11⟩` with `tan 2θ = x/a`, `x = √(1−α²)`, is entangled.
    #[test]
    fn self_consistent_ground_state_is_entangled() {
        let (a, x) = (0.5, 0.75f64.sqrt());
        let theta = 0.5 * x.atan2(a);
        let psi = StateVector::from_vec(vec![
            c(theta.cos(), 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(theta.sin(), 0.0),
        ]);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        assert!(is_entangled(&rho));
        // its negativity is C/2 with C = sin 2θ = √(1−α²)
        assert_abs_diff_eq!(negativity(&rho), x / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn local_unitaries_leave_log_negativity_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let rho = random_mixed(&mut rng);
            let u = kron(&random_unitary2(&mut rng), &random_unitary2(&mut rng));
            let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
            assert!((log_negativity(&rotated) - log_negativity(&rho)).abs() < 1e-9);
        }
    }

    #[test]
    fn separable_mixtures_have_zero_log_negativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..100 {
            let terms = rng.gen_range(1..5);
            let mut m = ComplexMatrix::zeros(4, 4);
            let weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.01..1.0)).collect();
            let total: f64 = weights.iter().sum();
            for w in weights {
                let a = random_state(&mut rng, 2);
                let b = random_state(&mut rng, 2);
                let prod = kron(&(&a * a.adjoint()), &(&b * b.adjoint()));
                m += prod.map(|e| e * c(w / total, 0.0));
            }
            let rho = DensityMatrix::new(m).unwrap();
            assert_eq!(log_negativity(&rho), 0.0);
            assert!(!is_entangled(&rho));
        }
    }

    #[test]
    fn construction_rejects_malformed_input() {
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::zeros(2, 2)),
            Err(EntanglementError::WrongShape { .. })
        ));
        let mut skew = identity(4).scale(0.25);
        skew[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(skew),
            Err(EntanglementError::NotHermitian { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(identity(4).scale(0.5)),
            Err(EntanglementError::BadTrace { .. })
        ));
        let indefinite = ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                c([1.5, -0.5, 0.0, 0.0][i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        assert!(matches!(
            DensityMatrix::new(indefinite),
            Err(EntanglementError::NegativeEigenvalue { .. })
        ));
        let psi3 = StateVector::from_vec(vec![c(1.0, 0.0); 3]);
        assert!(matches!(
            DensityMatrix::from_pure(&psi3),
            Err(EntanglementError::WrongStateLength { .. })
        ));
        let unnorm = StateVector::from_vec(vec![c(1.0, 0.0); 4]);
        assert!(matches!(
            DensityMatrix::from_pure(&unnorm),
            Err(EntanglementError::UnnormalizedState { .. })
        ));
    }

    #[test]
    fn clipping_accepts_small_negative_noise_and_rejects_real_violations() {
        // mostly |00⟩⟨00| with a −5e-9 eigenvalue leaking into another level
        let noisy = ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                c([1.0 + 5e-9, -5e-9, 0.0, 0.0][i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let rho = DensityMatrix::new_clipped(noisy, tol::RHO_CLIP).unwrap();
        let eig = qmat::hermitian_eig(rho.matrix()).unwrap();
        assert!(eig.eigenvalues[0] >= 0.0);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);

        let broken = ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                c([1.001, -0.001, 0.0, 0.0][i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        assert!(matches!(
            DensityMatrix::new_clipped(broken, tol::RHO_CLIP),
            Err(EntanglementError::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn pure_constructor_matches_manual_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let psi = random_state(&mut rng, 4);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let manual = &psi * psi.adjoint();
        assert!((rho.matrix() - manual).norm() < 1e-14);
        assert_eq!(pauli(PauliAxis::X).nrows(), 2);
    }
}
