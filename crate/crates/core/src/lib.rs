//! Two-site self-consistent mean-field dynamics for the transverse-field
//! Ising chain under a sudden field quench, validated against the exact
//! Jordan-Wigner free-fermion solution in one dimension.
//!
//! The crate has five layers:
//!
//! * [`qmat`] — dense complex linear algebra for small Hermitian problems
//!   (Pauli matrices, Kronecker products, eigendecomposition, propagators).
//! * [`entanglement`] — partial transposition, the Peres-Horodecki test,
//!   negativity and logarithmic negativity for a pair of spin-1/2 systems.
//! * [`emft`] — the reduced two-site Hamiltonian with a self-consistent
//!   bond correlator `C = ⟨σx⊗σx⟩`, its static ground state, and two
//!   dynamical closures of the self-consistency condition.
//! * [`exactchain`] — the exact quench dynamics of the 1D chain via free
//!   fermions (momentum-pair modes plus Wick reconstruction of the
//!   nearest-neighbor density matrix), with a dense small-chain oracle.
//! * [`harness`] — deterministic CSV parameter sweeps, the mean-field vs
//!   exact comparator, the crest/trough counter, and the `emft-quench` CLI.
//!
//! Units are natural: `ħ = 1`, coupling `J = 1` internally. Externally all
//! times are the scaled `τ = t·ν_E·J/ħ` and fields the scaled `α = a/(ν_E J)`.

pub mod emft;
pub mod entanglement;
pub mod exactchain;
pub mod harness;
pub mod qmat;
pub mod tol;
