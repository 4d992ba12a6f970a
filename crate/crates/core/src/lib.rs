//! Numerical toolkit for locally accessible information.
//!
//! Given a multipartite ensemble `{p_x, rho_x}`, the toolkit evaluates an
//! entropic upper bound on the information any LOCC protocol can extract
//! about the member identity,
//!
//! ```text
//! I_LOCC <= S(rho^B1) + ... + S(rho^BN) - max_Z sum_x p_x S(rho_x^Z),
//! ```
//!
//! compares it against the Holevo information of the ensemble to certify
//! LOCC indistinguishability, and builds on the same machinery for the
//! pure-state complementarity check, a distributed dense-coding capacity
//! bound, and an adaptive local-measurement protocol simulator.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices, Kronecker products, partial traces,
//!   and a Jacobi eigensolver for Hermitian matrices.
//! - [`ensemble`]: validated states and ensembles plus their JSON format.
//! - [`info`]: entropies, Holevo quantity, and outcome mutual information.
//! - [`bounds`]: the accessible-information and dense-coding bounds.
//! - [`sim`]: adaptive measurement trees and the information they extract.
//! - [`catalog`]: built-in ensemble families, sweeps, and threshold finding.
//! - [`random`]: seeded generators backing the property suites.

pub mod bounds;
pub mod catalog;
pub mod ensemble;
pub mod error;
pub mod info;
pub mod linalg;
pub mod random;
pub mod sim;

pub use bounds::{
    bipartite_bound, build_encoding_ensemble, complementarity_check, dense_coding_bound,
    locc_bound, pure_squashed_entanglement, BoundReport, ComplementarityReport, Verdict,
};
pub use catalog::{
    bell_ensemble, build_e1, build_e2, build_e3, find_e2_crossings, ghz_state, sweep, sweep_csv,
    SweepRow, SweepTarget,
};
pub use ensemble::{Ensemble, Member, QuantumState};
pub use error::{Error, Result};
pub use info::{
    binary_entropy, holevo_chi, mutual_information, outcome_mutual_information, shannon_entropy,
    von_neumann_entropy, Bits,
};
pub use linalg::{
    apply_local_to_vec, c64, embed_local, hermitian_eigen, hermitian_eigenvalues,
    partial_trace_pure, ComplexMatrix, SystemLayout,
};
pub use sim::{
    apply_local_measurement, basis_protocol, round_inequality_check, run_protocol, RoundInequalityReport,
    LocalMeasurement, ProtocolRun, ProtocolTree, TranscriptDistribution, TranscriptRow,
};

/// Formats a number with 12 significant digits, the precision used by all
/// CSV and report output.
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}
