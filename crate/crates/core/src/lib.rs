//! Non-abelian tensor squares of finite groups.
//!
//! The crate works with finite groups given as explicit multiplication
//! tables. For a group `G` it realizes the group `nu(G)` on two isomorphic
//! copies of `G` by coset enumeration, extracts the tensor square
//! `G (x) G = [G, G^phi]` as a concrete group together with the pair map
//! `(g, h) -> g (x) h`, the commutator homomorphism `kappa`, its kernel
//! `J2(G)`, the diagonal subgroup `nabla(G)`, the exterior square and the
//! Schur multiplier, and then checks order bounds, equality classifications
//! and structure statements for small p-groups.
//!
//! Modules:
//! - [`group`]: multiplication tables and the structural toolkit
//!   (center, derived subgroup, quotients, abelian invariants, isomorphism).
//! - [`fp`]: finitely presented groups and Todd-Coxeter coset enumeration.
//! - [`tensor`]: the `nu(G)` construction and everything derived from it.
//! - [`verify`]: bound reports, equality classification and the batch suite.
//! - [`catalog`]: built-in group constructors and the group-spec parser.
//! - [`record`] / [`cache`]: serializable computation records and the
//!   content-addressed result cache.

pub mod cache;
pub mod catalog;
pub mod fp;
pub mod group;
pub mod record;
pub mod tensor;
pub mod verify;

/// Largest order for which explicit multiplication tables are built.
pub const DEFAULT_TABLE_CAP: usize = 4096;

/// Default limit on live cosets during enumeration.
pub const DEFAULT_MAX_COSETS: usize = 2_000_000;

/// Largest order accepted by the backtracking isomorphism test.
pub const ISO_ORDER_CAP: usize = 256;

/// Version stamp recorded in cache entries and JSON output.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Deterministic 64-bit mixer used for sampled validation checks.
pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
