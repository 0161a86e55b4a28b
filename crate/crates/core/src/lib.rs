//! Exact computation of the Benson-Symonds invariant for two-part
//! permutation modules of symmetric groups in characteristic p.
//!
//! The invariant gamma measures the asymptotic non-projective share of
//! tensor powers: the limit of the n-th root of the core dimension. For the
//! permutation module M^(n-r, r) it is computed here by three independent
//! routes and reconciled:
//!
//! - [`gamma::gamma_closed`]: the closed binomial formula;
//! - [`gamma::gamma_structural`]: summand counting over the restriction to
//!   the all-p-cycles elementary abelian subgroup;
//! - [`gamma::gamma_oracle`]: brute-force fixed-tabloid counts maximized
//!   over order-p subgroups of every maximal elementary abelian orbit type.
//!
//! Supporting layers are usable on their own: exact composition/block-sum
//! combinatorics ([`combinatorics`]), an executable suite of the underlying
//! binomial identities ([`identities`]), concrete elementary abelian
//! permutation groups ([`groups`]), tabloid orbit decompositions
//! ([`tabloids`]), and the tensor semigroup of non-projective classes with
//! growth-rate estimation ([`tensor`]).
//!
//! All arithmetic is exact; multiplicities and dimensions are arbitrary-
//! precision integers and growth ratios are exact rationals.

pub mod combinatorics;
pub mod error;
pub mod gamma;
pub mod groups;
pub mod identities;
pub mod tabloids;
pub mod tensor;

pub use error::{Error, Result};

pub use combinatorics::{binom, block_sum, compositions, is_prime, Composition};
pub use gamma::{
    gamma_closed, gamma_oracle, gamma_structural, gamma_symmetric_group,
    young_gamma_first_hook, GammaReport, OrbitTypeGamma,
};
pub use groups::{
    build_group, enumerate_orbit_types, ElementaryGroup, GroupElement, OrbitType,
    SubgroupOrderP, MAX_DEGREE,
};
pub use identities::{standard_sweep, Identity, IdentityCheck};
pub use tabloids::{
    decompose_enumerated, decompose_formula, enumerate_tabloids, fixed_count,
    formula_multiplicities_by_size, signature_of, Decomposition, DecompositionRow,
    PartitionPair, PrimeData, SummandSignature, Tabloid, DEFAULT_ENUMERATION_BUDGET,
};
pub use tensor::{
    core_of, growth, tensor_classes, tensor_step, CoreState, GrowthEstimate, TensorProduct,
    TENSOR_RANK_BUDGET,
};
