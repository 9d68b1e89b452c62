//! Exact desk-scale verification of the identities and inequalities the rest
//! of the crate is built around.
//!
//! Everything here either decides a claim exactly (rational arithmetic,
//! exhaustive enumeration) or, for constant-bearing claims, runs a fit study
//! that reports the smallest constant making the claim hold on a grid of
//! instances and re-certifies it in a second pass.  Constant-bearing claims
//! are never asserted universally.

pub mod badnorm;
pub mod decomposition;
pub mod exposure;
pub mod studies;
pub mod tails;
pub mod thresholds;

pub use badnorm::bad_norm_halfspace_check;
pub use decomposition::{
    gain_terms_check, loss_term_check, phi_pushforward, simplified_route_check, three_term_check,
};
pub use exposure::{two_uniform_neighbors_coupling_check, BRule, ExposureScheme};
pub use studies::{
    corollary_torus_study, default_prop_grid, free_energy_gap_check, free_energy_gap_fit,
    main_tail_rate_fit, main_theorem_study, prop_i_le_phi_constant_fit, torus_bad_event_rate_fit,
    PropInstance,
};
pub use tails::{fixed_size_chain_check, hoeffding_check, hoeffding_point};
pub use thresholds::{
    blow_up_equivalence_check, gadget_threshold_scan, weitz_asymptote_check, weitz_threshold,
};
