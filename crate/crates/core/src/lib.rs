//! Twisted conjugation and nonabelian cohomology for compact matrix Lie groups.
//!
//! Given a compact matrix group `G` (unitary, special unitary, special
//! orthogonal, torus, or block-diagonal products of these) together with an
//! automorphism `σ`, this crate computes the first nonabelian cohomology set
//! `H¹(ℤ/nℤ, G)` by
//!
//! 1. finding a maximal torus `T` of the identity component of the fixed
//!    group `G^σ`,
//! 2. enumerating the `n`-torsion subgroup `E_n(T)` through the exponential
//!    lattice of `T`,
//! 3. constructing the twisted Weyl group `W = N_σ(T)/Z_σ(T)` through its
//!    permutation action on `E_n(T)`, and
//! 4. partitioning `E_n(T)` into `W`-orbits, cross-validating every orbit
//!    against an independent numerical σ-conjugacy decider.
//!
//! Every conjugacy claim comes with either an explicit witness element (a
//! `g` with `g·t₁·σ(g)⁻¹ = t₂`) or a spectral certificate (two eigenvalue
//! multisets that provably differ), so results can be re-verified from the
//! reported data alone.
//!
//! All randomness flows through explicit seeds; repeated runs with the same
//! seed produce identical results. With the default `parallel` feature,
//! independent restarts and pairwise oracle calls run on rayon; build with
//! `--no-default-features` for a fully sequential fallback.

pub mod automorphism;
pub mod cohomology;
pub mod config;
pub mod conjugacy;
pub mod error;
pub mod group;
pub mod int_linalg;
pub mod linalg;
pub mod optimize;
pub mod par;
pub mod rng;
pub mod torus;
pub mod verify;
pub mod weyl;

pub use automorphism::{Automorphism, Differential, Kind, Order};
pub use cohomology::{CohomologyResult, Status};
pub use config::{Config, Search, Tolerances};
pub use conjugacy::{ConjugacyDecision, Verdict};
pub use error::{Error, Result};
pub use group::{AlgebraElement, Family, Group, GroupDescriptor, GroupElement};
pub use torus::{FixedTorus, TorsionPoint};
pub use verify::CheckReport;
pub use weyl::{TwistedWeylGroup, WeylGenerator};
