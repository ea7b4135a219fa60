//! Lattices of maps, clubs, the constructions between them, and the
//! exhaustive theorem suite.

mod club;
mod lattice;
mod suite;

use thiserror::Error;

use crate::maps::MapError;

pub use club::{
    club_from_lattice, join_closure, lattice_from_club, verify_club, AxiomVerdict, ClubCandidate,
    ClubKind, ClubLattice, ClubVerdict, SeqGrade,
};
pub use lattice::{
    check_l1, check_l2, diagonal_closure, test_maps, L1Verdict, L2Verdict, MapKind, MapLattice,
    WeightClause, L2_SUBSET_LIMIT,
};
pub use suite::{
    space_id, suite_spaces, theorem_suite, Checkers, Mutation, SuiteConfig, SuiteLimits,
    TheoremReport, Universe, Verdict, THEOREMS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("map {index} does not start at the lattice's space")]
    ForeignMap { index: usize },
    #[error("family does not live on the club's space")]
    ForeignFamily,
    #[error("map {index} is not {kind:?}")]
    KindViolated { index: usize, kind: MapKind },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Map(#[from] MapError),
}
