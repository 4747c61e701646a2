//! Hybrid quantum-classical simulation of ion-atom collision dynamics.
//!
//! The crate covers the full pipeline for desk-scale proton-hydrogen charge
//! transfer studies: traveling-orbital channel integrals, Bravyi-Kitaev
//! encoding into Pauli frames, a numerically exact reference propagator, two
//! variational time-evolution engines (a fixed moment-basis simulator and an
//! adaptively grown rotation ansatz), and the observables that turn state
//! histories into capture probabilities and cross sections.

pub mod avqds;
pub mod collision;
pub mod constants;
pub mod error;
pub mod exact;
pub mod fermion;
pub mod lcu;
pub mod linalg;
pub mod observables;
pub mod pauli;
pub mod qas;

pub use avqds::{
    adapt_and_step, evolve_avqds, mclachlan_distance, mclachlan_matrices, prepare_ansatz_state,
    AdaptiveAnsatz, AvqdsOutcome, McLachlanState, StepRecord,
};
pub use collision::{
    build_frames, build_frames_with, channel_matrices, ChannelMatrices, ChannelOptions,
    EpsilonMode, GaussianOrbital, OrbitalBasis, TrajectoryContext,
};
pub use constants::velocity_from_energy;
pub use error::{CoreError, Result};
pub use exact::propagate_exact;
pub use fermion::{
    bk_transform, build_bk_sets, occupation_to_qubit, BkIndexSets, OccupationState,
    SecondQuantizedHamiltonian,
};
pub use lcu::{hamiltonian_matrix_apply, LcuFrame, LcuHamiltonian};
pub use observables::{
    asymptotic_probability, cross_section, cumulative_mclachlan_error, fidelity,
    target_probability, transfer_probability, variational_fidelity_bound, CrossSectionPoint,
    Method, RecordStatus, SimulationRecord,
};
pub use pauli::{apply_pauli, expectation, inner_product, pauli_mul, PauliString, StateVector};
pub use qas::{build_moment_basis, evolve_qas, measure_model, MomentBasis, QasModel};
