//! Finite topological spaces, lattice closures of open families, quotient
//! maps, embedding relations, the open-open game, and exhaustive checks of
//! the lattice/club characterizations on small spaces.
pub mod embed;
pub mod family;
pub mod game;
pub mod io;
pub mod maps;
pub mod space;
pub mod verify;

pub use embed::{is_bang_embedded, is_completely_embedded, is_predense, EmbedError};
pub use family::{generate_lattice, FamilyError, LatticeClosure, OpenFamily};
pub use game::{play, solve_game, GameError, Player, Strategy};
pub use maps::{quotient, MapError, QuotientResult, SpaceMap};
pub use space::{CanonicalForm, FinSpace, PointSet, SpaceCatalog, SpaceError};
pub use verify::{theorem_suite, SuiteConfig, TheoremReport, Verdict, VerifyError};
