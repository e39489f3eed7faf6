//! Zero-mean Gaussian states as labeled covariance matrices, together with
//! the symplectic, entropic and measurement primitives the attack
//! pipelines are built from.

mod covmat;
mod entropy;
mod measure;
mod symplectic;

pub(crate) use covmat::tmsv_entries;
pub use covmat::{thermal, tmsv, CovMat, TwoModeStd, PHYSICAL_TOL, SYMMETRY_TOL};
pub use entropy::{entropy_term, symplectic_eigenvalues, von_neumann_entropy, NU_FLOOR};
pub use measure::{condition_heterodyne, condition_homodyne, Quadrature};
pub use symplectic::{
    apply_symplectic, beam_splitter, omega, partial_trace, two_mode_squeezer, Symplectic,
    SYMPLECTIC_TOL,
};
