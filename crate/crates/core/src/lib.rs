//! Automorphisms of finite split extensions `G = H ⋊ K` that map the
//! complement `K` onto itself, computed from triples `(α, γ, δ)` and checked
//! against an independent brute-force search.

pub mod autk;
pub mod error;
pub mod families;
pub mod fuzz;
pub mod group;
pub mod oracle;
pub mod par;
pub mod perm;
pub mod search;
pub mod semidirect;
pub mod soundness;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupHom, GroupLike, IsoFingerprint, IsoVerdict, Subgroup};
pub use semidirect::{build_semidirect, ActionHom, ImplicitSemidirect, SemidirectGroup};
