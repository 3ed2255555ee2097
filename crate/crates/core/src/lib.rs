//! Rough finite state machines: machines whose transitions land in rough
//! sets of an approximation space, together with their morphisms, coverings
//! and products.

pub mod error;
pub mod fixtures;
pub mod format;
pub mod machine;
pub mod morphism;
pub mod products;
pub mod propositions;
pub mod random;
pub mod rough;

pub use error::{Error, Result};
pub use machine::{Machine, SymbolId, Violation, ViolationKind, Word};
pub use morphism::{
    check_covering, check_homomorphism, check_isomorphism, search_coverings, Counterexample,
    CoveringPair, MorphismPair, Verdict,
};
pub use rough::{ApproximationSpace, BlockId, DefinableSet, RoughSet, StateId, StateSubset};
