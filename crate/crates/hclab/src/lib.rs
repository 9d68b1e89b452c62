//! hclab: the hard-core lattice gas on finite (mostly bipartite, mostly regular)
//! graphs, at desk scale and with exact arithmetic wherever the object itself is
//! rational.
//!
//! The crate is organised around a few families of objects:
//!
//! * [`graphs`] — tori `Z_L^d`, cycles, hypercubes, gadget/blow-up constructions,
//!   Hamming-code dominating sets and dominating trees, torus automorphisms, and a
//!   tiny text file format.
//! * [`hardcore`] — independent-set enumeration, exact partition functions
//!   (brute force and transfer matrix), exact distributions, and two samplers
//!   (heat-bath Glauber and a fixed-occupancy relocation chain).
//! * [`entropy`] — Shannon entropy, conditional entropy, KL, Shearer-type
//!   covers, and free-energy functionals `I = S - E[H]` on finite distributions.
//! * [`order`] — the coarse field, its roughness `Phi`, the balance order
//!   parameter `M = min(|sigma_E|, |sigma_O|)`, and bad events on tori.
//! * [`expansion`] — exact edge-Cheeger constants, local-expansion certificates
//!   (uniform edge, dominating-tree images, random-walk traces) and their
//!   verification, Green-function tables.
//! * [`chessboard`] — the reflection group of a torus, chessboard seminorms,
//!   transfer-matrix comparisons across torus sizes, block weights, and the
//!   phase observable used in the contour argument.
//! * [`verify`] — end-to-end checks tying the above together: exposure schemes,
//!   three-term free-energy decompositions, gain/loss chains, tail bounds, and
//!   constant-fitting studies with re-certification.
//! * [`cli`] — the `hclab` binary: subcommands over the library with JSON/CSV
//!   output and reproducible seeding.
//!
//! Exact rational arithmetic (`num::BigRational`) is used for partition
//! functions, distributions and event masses whenever the fugacity is rational;
//! floating point only enters through logarithms and entropies, with pinned
//! tolerances (see [`report`]).

pub mod chessboard;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod expansion;
pub mod fsutil;
pub mod graphs;
pub mod hardcore;
pub mod numeric;
pub mod order;
pub mod report;
pub mod seeding;
pub mod verify;

pub use error::{Error, Result};
