//! Mesh pattern containment and the enclosed-diagonal criterion for
//! superfluous meshes.
//!
//! A mesh pattern `(π, R)` pairs a classical pattern `π` of length `k` with a
//! set `R` of shaded unit squares over `[0,k]^2`. The mesh is superfluous when
//! `(π, R)` and `π` are avoided by the same permutations, which happens
//! exactly when `(π, R)` has no enclosed diagonal.
//!
//! ```
//! use meshpat::{is_superfluous, MeshPattern};
//!
//! let mp: MeshPattern = "123:1,1".parse().unwrap();
//! assert!(is_superfluous(&mp));
//! ```

pub mod coincidence;
pub mod diagonal;
pub mod enumeration;
mod error;
pub mod mesh;
pub mod perm;
pub mod repair;

pub use coincidence::{
    av_count, minimal_basis_check, scan_coincidence, verify_coincidence, witness, CoincidenceOracle,
    CoincidenceReport, LengthCounts, Pattern, Verdict,
};
pub use diagonal::{
    candidate_diagonals, enclosed_diagonals, is_superfluous, runs, CandidateMasks, ConsecutiveRun,
    Direction, EnclosedDiagonal, RunDirection,
};
pub use enumeration::{
    a002464_count, extremal_permutations, max_supmesh, min_supmesh, sup_mesh_direct, sup_mesh_ie,
    sup_mesh_table, ExtremalReport, SupMeshReport,
};
pub use error::{Error, Result};
pub use mesh::{
    contains_mesh, mesh_occurrences, region_contents, transform, violations, Mesh, MeshPattern,
    MeshSquare, MAX_MESH_K,
};
pub use perm::{all_permutations, flatten, Occurrence, Permutation, Point, Symmetry};
pub use repair::{repair_occurrence, repair_path};
