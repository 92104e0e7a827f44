//! Synthesis and exact simulation of linear-optical networks acting on the
//! orbital angular momentum (OAM) of single photons.
//!
//! The crate is organised as a small compiler stack:
//!
//! * [`numerics`] — dense complex linear algebra: unitarity tests, unitary
//!   eigendecomposition, matrix powers and a global-phase-invariant distance.
//! * [`modes`] — the OAM ⊗ path (optionally polarisation) basis, finite
//!   simulation windows and sparse photon states.
//! * [`elements`] — exact single-element semantics, the netlist IR, canonical
//!   JSON serialisation and transfer-matrix simulation.
//! * [`blocks`] — parameterised building blocks: Leach interferometer, OAM
//!   exchangers, binary-tree sorters and swap operators.
//! * [`synth`] — gate-level synthesis (Reck meshes, universal OAM unitaries,
//!   Pauli powers, controlled gates, parallelised gates) and the peephole
//!   simplification pass.
//! * [`analysis`] — resource accounting, closed-form element counts, scaling
//!   ratios, the loss model and periodicity checks.

pub mod analysis;
pub mod blocks;
pub mod elements;
pub mod error;
pub mod modes;
pub mod numerics;
pub mod synth;

pub use elements::{apply_element, apply_netlist, transfer_matrix, Element, Netlist};
pub use error::{Error, Result};
pub use modes::{required_window, Mode, ModeWindow, Pol, StateVector};
pub use numerics::{
    eig_unitary, is_unitary, matrix_power, phase_aligned_distance, CMatrix, EigenDecomp,
};
