//! Exact Pauli-string algebra, Jordan-Wigner generator families and the Lie
//! algebras they generate on an n-qubit spin chain.
//!
//! The crate is organised bottom-up:
//!
//! - [`pauli`]: phase-tracked Pauli strings and phase-free words.
//! - [`operator`]: complex linear combinations of words, fermionic ladder
//!   operators and the anticommutation checks built on them.
//! - [`generators`]: the `e_k`, `d_k`, third-order and chirality generators and
//!   the three control buses.
//! - [`closure`]: dynamical Lie algebra closure, dimension classification and
//!   universality.
//! - [`dense`]: `2^n x 2^n` matrices, pulse schedules and the induced
//!   `(2n+1)`-dimensional rotations.

pub mod closure;
pub mod dense;
pub mod error;
pub mod generators;
pub mod operator;
pub mod pauli;

pub use closure::{
    check_universality, classify_dimension, closure_general, closure_strings, ClosureLabel,
    ClosureReport, Universality, DEFAULT_GENERAL_TOLERANCE,
};
pub use dense::{
    adjoint_rotation, exp_hermitian, exp_pulse, gamma_basis, pauli_decompose, run_schedule,
    so_membership, DenseMatrix, Membership, PauliOperator, Pulse, PulseSchedule, RotationMatrix,
    DEFAULT_MEMBERSHIP_TOLERANCE, N_MAX_MATRIX, N_MAX_PIPELINE,
};
pub use error::{Error, Result};
pub use generators::{
    build_bus, build_chirality, build_d, build_e, build_third_order, subset_product, BusId,
    GateBus, GeneratorRef,
};
pub use operator::{
    build_annihilation, build_bilinear, build_creation, verify_car, verify_car_with, BilinearKind,
    CarFailure, CarRelation, CarReport, PauliSum, PRUNE_TOLERANCE,
};
pub use pauli::{parse_pauli, Letter, PauliString, PauliWord, Phase, MAX_QUBITS};
