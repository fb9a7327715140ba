//! Monodromy of one-parameter degenerations of irreducible symplectic
//! manifolds, computed from Jordan types of `N = log T`.
//!
//! * [`sl2`]: Jordan types as `sl2`-representations, with tensor, symmetric
//!   and exterior powers and monodromy weight filtrations.
//! * [`graded`]: per-degree profiles, Künneth products, surface fixtures and
//!   the nilpotency bounds.
//! * [`moduli`]: Hilbert schemes of K3 surfaces, generalized Kummers and
//!   symmetric products of surfaces.
//! * [`snc`]: dual complexes of semistable singular fibers, the weight
//!   spectral sequence row and the no-cycle test.
//! * [`verbitsky`]: the subalgebra of cohomology generated by `H^2`.
//! * [`cli`]: the `monodromy` command.

pub mod cli;
pub mod error;
pub mod fixture;
pub mod graded;
pub mod linalg;
pub mod moduli;
pub mod sl2;
pub mod snc;
pub mod verbitsky;

pub use error::{Error, Result};
pub use fixture::ProfileFile;
pub use graded::{
    deconvolve, kunneth, lower_bound_nilp, sym_product_surface, validate_bounds,
    GradedMonodromyProfile, SurfaceFixture, SurfaceKind,
};
pub use moduli::{
    closed_form_sym_nilp, compare_sym_nilp, hilb_profile, kummer_product_profile, kummer_profile,
    kunneth_nilp_estimate, partitions, Partition,
};
pub use sl2::{JordanType, WeightCharacter};
pub use snc::{
    clemens_schmid_consistency, nocycle_check, staircase_fixture, DualComplex, Verdict, VerdictKind,
};
pub use verbitsky::{ideal_dim, sh_dims, BBLattice, IdealDim};
