//! Reflection machinery on tori: the dihedral block action, boundary-halving
//! weights, disseminated seminorms, and the signed phase observable with its
//! separator and contour bounds.

pub mod action;
pub mod phase;
pub mod seminorm;
pub mod weights;

pub use action::{block_image, group_elements, tau_s, AxisElement, GroupElement, ReflectionSpec};
pub use phase::{
    check_f_block_local, check_f_expectation_zero, check_f_zero_set_matches_b, check_separator,
    contour_probability_chain, default_c_alpha, neighbor_translate_pairs, scan_torus,
    separator_pointwise, translate_tuples, PhaseObservable, PhaseScan,
};
pub use seminorm::{
    block_bits, chessboard_seminorm, check_chessboard_estimate, check_reflection_positivity,
    check_seminorm_properties, element_positions, endpoint_matrix, seminorm_inner,
    seminorm_torus_comparison, trace_insertion_power, zeta_product, EndpointMatrix,
    LocalObservable,
};
pub use weights::{check_domain_tiling, check_sums_identity, stabilizer_size, weight_of, weighted_sum};
