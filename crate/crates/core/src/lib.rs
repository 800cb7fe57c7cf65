//! Coherence distribution in bipartite quantum states.
//!
//! The coherence of a bipartite state in the product computational basis
//! splits into five nonnegative parts: the coherence of each marginal, the
//! coherence each party can additionally reach when the other party measures
//! in the reference basis and reports the outcome (locally accessible
//! coherence), and the remaining coherence neither party can reach. Both the
//! l1-norm and relative-entropy measures are supported.
//!
//! ```
//! use cohdist::{distribution_report, intro_example_state, MeasureKind};
//!
//! let r = distribution_report(&intro_example_state(), MeasureKind::L1).unwrap();
//! assert!((r.acc_a - 1.0).abs() < 1e-12);
//! assert!(r.remaining.abs() < 1e-12);
//! ```

pub mod cli;
pub mod correlations;
pub mod distribution;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod random;
pub mod search;
pub mod states;

pub use correlations::{
    classical_correlation, dephased_holevo, discord, holevo, mutual_information, ClassicalSide,
    DiscordReport, LocalEntropies,
};
pub use distribution::{
    distribution_report, ensemble_accessible_coherence, local_accessible_coherence,
    remaining_coherence, DistributionReport,
};
pub use error::{Error, Result};
pub use linalg::{eigh, kron, trace_norm, ComplexMatrix, EigenDecomposition, LogBase};
pub use measures::{bipartite_rel_coherence, coherence, l1_coherence, rel_ent_coherence, MeasureKind};
pub use search::{
    accessible_upper_bound, decomposition_from_isometry, max_accessible_coherence, DecompositionSpec,
    SearchOptions, SearchResult,
};
pub use states::{
    bell_state, intro_example_state, ising_ground_state, relative_entropy, schmidt_correlated,
    von_neumann_entropy, BipartiteState, DensityMatrix, Ensemble, MeasurementSide, Subsystem,
};
