//! Bounded decision procedures for conjugacy of quasiconvex subgroups in
//! torsion-free hyperbolic groups.
//!
//! The crate is `no_std` (it needs `alloc`). Enabling the `parallel` feature
//! pulls in `std` and `rayon` and spreads the conjugator search and ball
//! construction over the current rayon pool; results do not depend on the
//! number of worker threads.
//!
//! Layout:
//!
//! * [`presentation`]: letters, words, alphabets and presentations.
//! * [`normalizer`]: word problem (free reduction, Dehn's algorithm) behind a
//!   [`GroupContext`].
//! * [`cayley`]: balls, ShortLex geodesics, the conjugacy quadrilateral and the
//!   fellow-traveling check, empirical thinness estimates.
//! * [`subgroup`]: Stallings graphs, ball-closure membership, double cosets.
//! * [`bounds`]: exact conjugator and element length bounds.
//! * [`solver`]: the decision procedures and their brute-force oracles.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod cayley;
mod error;
pub mod normalizer;
mod par;
pub mod presentation;
pub mod solver;
pub mod subgroup;

pub use bounds::{compute_bounds, count_elements, count_words, free_ball_size, BoundReport};
pub use cayley::{
    a_geodesic, build_quadrilateral, check_lemma3, estimate_delta, estimate_delta_capped, Ball,
    DeltaEstimate, Lemma3Report, QuadrilateralTrace,
};
pub use error::{Error, Result};
pub use normalizer::{validate_small_cancellation, Backend, GroupContext};
pub use presentation::{Alphabet, Letter, Presentation, Word};
pub use solver::{
    decide_conjugate_into, decide_power_conjugacy, decide_subgroup_conjugacy, oracle_brute_force,
    oracle_free_conjugacy, verify_witness, Budget, Decision, Verdict, Witness,
};
pub use subgroup::{
    double_coset_contains, estimate_mu_free, reduce_double_coset, shortest_double_coset_rep,
    stallings_graph, BackendKind, CoreGraph, DoubleCosetReducer, Membership, Subgroup,
    SubgroupBackend,
};
