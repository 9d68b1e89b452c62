//! Global expansion (Cheeger constants) and local expansion certificates,
//! including the random-walk / Green-function route.

mod cheeger;
mod certificate;
mod green;

pub use cheeger::{cheeger_exact, CheegerResult};
pub use certificate::{
    torus_cheeger_bound, torus_local_expansion_certificate, uniform_edge_dist,
    verify_local_expansion, Edge, LocalExpansionCertificate, OrbitTreeDist, SubgraphDist,
    UniformEdgeDist, VerifyMode, WalkTraceDist,
};
pub use green::{
    check_green_positivity, green_table, local_expansion_from_walk, walk_edge_probability,
    walk_hit_probability, GreenTable,
};
