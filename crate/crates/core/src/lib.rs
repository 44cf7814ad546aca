//! Located words over doubly infinite alphabets, Schreier families indexed by
//! ordinals below epsilon-zero, a factorial-base codec for rationals, and
//! bounded witness search for finite partition statements.

pub mod families;
pub mod ordinals;
pub mod rationals;
pub mod schreier;
pub mod search;
pub mod words;

use thiserror::Error;

pub use families::{FamilyError, WordFamily};
pub use ordinals::{Ordinal, OrdinalClass, OrdinalError};
pub use rationals::{ExactRational, RationalError};
pub use schreier::{CanonicalDecomposition, FiniteSet, SchreierError};
pub use search::{Coloring, SearchError, SearchWindow, Semigroup};
pub use words::{Letter, LocatedWord, OrderlyTuple, Profile, WordError};

/// Any domain error raised by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Schreier(#[from] SchreierError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error(transparent)]
    Search(#[from] SearchError),
}
