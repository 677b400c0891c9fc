//! Dense complex linear algebra for small Hermitian problems.
//!
//! Everything is sized for two-spin (4×4) work plus the dense chain oracle
//! (up to 2¹²); no sparsity, no tensor networks. Conventions fixed here and
//! used everywhere else:
//!
//! * natural units `ħ = 1`;
//! * basis `|0⟩` is the +1 eigenstate of `σz`;
//! * [`kron`] puts its first argument on the first (left) tensor factor.
//!
//! All operations are pure; values are safe to share across threads.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::tol;

/// Dense complex matrix, the working representation for every operator.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Pure state amplitudes, length `2^n` for `n` spins; unit norm within
/// [`tol::STATE_NORM`] wherever a propagator consumes one.
pub type StateVector = DVector<Complex64>;

/// Failure modes of the linear-algebra layer.
#[derive(Debug, thiserror::Error)]
pub enum QmatError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max |M - M†| = {defect:.3e} exceeds {limit:.0e}")]
    NotHermitian { defect: f64, limit: f64 },
    #[error("state norm² = {norm_sq:.17} deviates from 1 beyond {limit:.0e}")]
    NotNormalized { norm_sq: f64, limit: f64 },
    #[error("dimension mismatch: operator is {dim}-dimensional, state has {len} amplitudes")]
    DimensionMismatch { dim: usize, len: usize },
}

/// Pauli matrix label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// The standard 2×2 Pauli matrix in the `σz` eigenbasis with `|0⟩ ↦ +1`.
pub fn pauli(axis: PauliAxis) -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        PauliAxis::X => ComplexMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        PauliAxis::Y => ComplexMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        PauliAxis::Z => ComplexMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    }
}

/// Complex identity matrix of dimension `n`.
pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Kronecker product with `a` on the first (left) spin factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `max |M − M†|` over all entries; 0 for exactly Hermitian input.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let mut defect = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect
}

fn require_hermitian(m: &ComplexMatrix) -> Result<(), QmatError> {
    if m.nrows() != m.ncols() {
        return Err(QmatError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let defect = hermiticity_defect(m);
    if defect > tol::HERMITICITY {
        return Err(QmatError::NotHermitian {
            defect,
            limit: tol::HERMITICITY,
        });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix: `H V = V diag(λ)`.
#[derive(Debug, Clone)]
pub struct Eigh {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvector columns, ordered to match `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl Eigh {
    /// Column of the lowest eigenvalue as an owned state.
    pub fn ground_state(&self) -> StateVector {
        self.eigenvectors.column(0).into_owned()
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// Rejects non-square or non-Hermitian (beyond [`tol::HERMITICITY`]) input.
/// The input is symmetrized as `(M + M†)/2` before factorization so that
/// rounding-level asymmetry cannot leak into complex eigenvalues. Results
/// are refined until every eigenpair meets [`tol::EIG_RESIDUAL`]; the
/// backing solver alone can miss that by orders of magnitude on nearly
/// diagonal input.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Eigh, QmatError> {
    require_hermitian(h)?;
    let n = h.nrows();
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.clone().symmetric_eigen();
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let mut eigenvectors = eig.eigenvectors;
    refine_eigenpairs(&sym, &mut eigenvalues, &mut eigenvectors);
    // neither the backing solver nor refinement orders the spectrum
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
    let sorted_values: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let mut sorted_vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &eigenvectors.column(src));
    }
    Ok(Eigh {
        eigenvalues: sorted_values,
        eigenvectors: sorted_vectors,
    })
}

/// Upper bound on cyclic Jacobi sweeps in [`refine_eigenpairs`]. Nearly
/// diagonal input converges quadratically, so one or two suffice.
const JACOBI_SWEEPS: usize = 8;

/// Post-factorization cleanup of an approximate eigenframe.
///
/// The backing solver always returns an orthonormal `V` (it accumulates
/// rotations), but for nearly diagonal matrices its convergence test can
/// stop with `V† H V` still carrying off-diagonal mass around `√ε`, which
/// ruins the small components of well-separated eigenvectors. When any
/// column misses [`tol::EIG_RESIDUAL`], a few complex Jacobi sweeps on
/// `V† H V` rotate that mass away and restore machine-level residuals.
/// Couplings below `ε · max|λ|` are beneath the resolution of the problem
/// and are left alone. `V` stays orthonormal: only unitary updates touch it.
fn refine_eigenpairs(h: &ComplexMatrix, eigenvalues: &mut [f64], v: &mut ComplexMatrix) {
    let n = h.nrows();
    let hv = h * &*v;
    let worst = (0..n)
        .map(|j| (hv.column(j) - v.column(j) * Complex64::new(eigenvalues[j], 0.0)).norm())
        .fold(0.0f64, f64::max);
    if worst <= tol::EIG_RESIDUAL {
        return;
    }
    let mut m = v.adjoint() * hv;
    let m_adj = m.adjoint();
    m = (m + m_adj).scale(0.5);
    for _ in 0..JACOBI_SWEEPS {
        let scale = (0..n).map(|j| m[(j, j)].re.abs()).fold(0.0f64, f64::max);
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m[(p, q)];
                let babs = b.norm();
                if babs <= f64::EPSILON * scale {
                    continue;
                }
                rotated = true;
                // phase out b, then a real rotation kills the 2×2 block:
                // U = [[c, −s], [s e^{−iβ}, c e^{−iβ}]] with t = tan θ the
                // small root of t² − 2τt − 1 = 0, τ = (m_qq − m_pp)/(2|b|)
                let beta = b.arg();
                let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * babs);
                let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sgn / (tau.abs() + (tau * tau + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let phase = Complex64::from_polar(1.0, -beta);
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                for i in 0..n {
                    let (mp, mq) = (m[(i, p)], m[(i, q)]);
                    m[(i, p)] = mp.scale(c) + mq * phase.scale(s);
                    m[(i, q)] = mp.scale(-s) + mq * phase.scale(c);
                }
                for i in 0..n {
                    let (mp, mq) = (m[(p, i)], m[(q, i)]);
                    m[(p, i)] = mp.scale(c) + mq * phase.conj().scale(s);
                    m[(q, i)] = mp.scale(-s) + mq * phase.conj().scale(c);
                }
                // the block lands on closed forms; write them to keep m
                // exactly Hermitian with a hard zero in the cleared slot
                let shift = 2.0 * c * s * babs;
                m[(p, p)] = Complex64::new(c * c * app + s * s * aqq + shift, 0.0);
                m[(q, q)] = Complex64::new(s * s * app + c * c * aqq - shift, 0.0);
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                for i in 0..v.nrows() {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = vp.scale(c) + vq * phase.scale(s);
                    v[(i, q)] = vp.scale(-s) + vq * phase.scale(c);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    for (j, value) in eigenvalues.iter_mut().enumerate() {
        *value = m[(j, j)].re;
    }
}

/// `exp(−iHt)ψ` via eigendecomposition of the Hermitian generator `H`.
///
/// Norm is preserved to the orthonormality of the eigenbasis (well inside
/// [`tol::STATE_NORM`]); no renormalization is applied.
pub fn evolve(h: &ComplexMatrix, t: f64, psi: &StateVector) -> Result<StateVector, QmatError> {
    let eig = hermitian_eig(h)?;
    if psi.len() != h.nrows() {
        return Err(QmatError::DimensionMismatch {
            dim: h.nrows(),
            len: psi.len(),
        });
    }
    let norm_sq = psi.norm_squared();
    if (norm_sq - 1.0).abs() > tol::STATE_NORM {
        return Err(QmatError::NotNormalized {
            norm_sq,
            limit: tol::STATE_NORM,
        });
    }
    evolve_in_eigenbasis(&eig, t, psi)
}

/// Same propagation step reusing an existing factorization of `H`.
pub fn evolve_in_eigenbasis(
    eig: &Eigh,
    t: f64,
    psi: &StateVector,
) -> Result<StateVector, QmatError> {
    if psi.len() != eig.eigenvectors.nrows() {
        return Err(QmatError::DimensionMismatch {
            dim: eig.eigenvectors.nrows(),
            len: psi.len(),
        });
    }
    let mut coeffs = eig.eigenvectors.adjoint() * psi;
    for (j, c) in coeffs.iter_mut().enumerate() {
        *c *= Complex64::from_polar(1.0, -eig.eigenvalues[j] * t);
    }
    Ok(&eig.eigenvectors * coeffs)
}
