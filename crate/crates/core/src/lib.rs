//! Exact combinatorics of non-trivial cross-intersecting families.
//!
//! The crate is organized bottom-up:
//!
//! * [`exactmath`]: big-integer binomials, the Hilton–Milner size `h(n,k)`
//!   and the cross-multiplied comparison kernels.
//! * [`kset`]: k-subsets as bit masks, lexicographic and shifting orders,
//!   rank/unrank and lexicographic initial families.
//! * [`family`]: uniform families, intersection predicates, transversals and
//!   the named extremal constructions.
//! * [`shifting`]: `(i,j)`-compressions, shiftedness and the weight functional.
//! * [`certify`]: pointwise exact certification of the binomial inequalities.
//! * [`search`]: exhaustive and branch-and-bound search for the maximal
//!   product, plus seeded randomized drivers for the structural lemmas.
//! * [`io`]: the `family/1`, `cert/1`, `report/1` and `trace/1` documents.

pub mod certify;
pub mod error;
pub mod exactmath;
pub mod family;
pub mod io;
pub mod kset;
pub mod search;
pub mod shifting;

pub use error::{Error, Result};
pub use exactmath::{binom, hm_size, ExactInt, ExactRatio};
pub use family::{Family, PairStats};
pub use kset::{GroundSpec, KSet};

/// Version string stamped into every emitted document.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
