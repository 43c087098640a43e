//! Exact computational toolkit for strict ω-categories at desk scale.
//!
//! The crate works with Steiner's model: augmented directed complexes with a
//! distinguished basis stand in for strict ω-categories, and the functor ν
//! turns complexes back into categories by enumerating cell tables. On top of
//! that sit the Gray tensor product with its comparison maps and decomposition
//! colimits, globular-sum combinatorics, finite strict n-categories with full
//! composition tables, companion calculus in finite double categories, and
//! the square/Čech-nerve functors — every construction with an exhaustive
//! finite verifier next to it.
//!
//! No floats anywhere: all arithmetic is exact integer arithmetic, every
//! operation is a pure function of immutable values, and all outputs are
//! canonically ordered.

pub mod acceptance;
pub mod adc;
pub mod chain;
pub mod chainmap;
pub mod corpus;
pub mod doublecat;
pub mod graymaps;
pub mod iso;
pub mod json;
pub mod label;
pub mod nu;
pub mod rng;
pub mod squarecech;
pub mod strictcat;
pub mod theta;

pub use adc::{Adc, BasisConditions, ValidationReport};
pub use chain::Chain;
pub use chainmap::{pushout_adc, ChainMap, Pushout};
pub use label::Label;
pub use nu::{nu_cells, nu_compose, NuCell, NuConfig};
pub use theta::GlobularSum;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid complex: {0}")]
    InvalidAdc(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("invalid cell table: {0}")]
    InvalidCell(String),
    #[error("label syntax: {0}")]
    LabelSyntax(String),
    #[error("missing endpoint designation: {0}")]
    MissingEndpoints(String),
    #[error("pushout span unsupported: {0}")]
    PushoutSpan(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("cells are not composable along dimension {0}")]
    NotComposable(usize),
    #[error("dimension {0} exceeds the supported maximum {1}")]
    DimensionTooHigh(usize, usize),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid double category: {0}")]
    InvalidDouble(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod concurrency {
    // Every value type is immutable after construction and freely shareable.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn values_are_send_and_sync() {
        assert_send_sync::<crate::Adc>();
        assert_send_sync::<crate::Chain>();
        assert_send_sync::<crate::ChainMap>();
        assert_send_sync::<crate::NuCell>();
        assert_send_sync::<crate::GlobularSum>();
        assert_send_sync::<crate::strictcat::FiniteStrictNCat>();
        assert_send_sync::<crate::strictcat::CatFunctor>();
        assert_send_sync::<crate::doublecat::FiniteDoubleCat>();
        assert_send_sync::<crate::graymaps::DecompositionWitness>();
    }
}
