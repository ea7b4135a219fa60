//! Families of open sets and the lattice closure `⟨A⟩`.

mod closure;
mod seq;

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::space::{FinSpace, PointSet};

pub use closure::{
    finite_absorption, generate_lattice, lattice_closure, Absorption, LatticeClosure, Operation,
    Provenance,
};
pub use seq::{
    has_seq, search_seq_witness, seq_extend, seq_preserved_by_join, SeqReport, SeqVerdict,
    SeqWitness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{set} is not open in the space")]
    NotOpen { set: PointSet },
    #[error("families live on different spaces")]
    MixedSpaces,
    #[error("{0} has a non-open complement; the family cannot be closed under complements")]
    NotSeqExtendable(PointSet),
    #[error("{0} is not in the lattice closure of the generators")]
    NotInClosure(PointSet),
    #[error("no families given")]
    NoFamilies,
}

#[derive(Clone, Default)]
struct Flags {
    covers: OnceLock<bool>,
    inter_closed: OnceLock<bool>,
    union_closed: OnceLock<bool>,
    seq: OnceLock<bool>,
}

/// A finite family of open sets of one space. Members are kept sorted and
/// deduplicated; structural flags are computed on first use.
#[derive(Clone)]
pub struct OpenFamily {
    space: Arc<FinSpace>,
    members: Vec<PointSet>,
    flags: Flags,
}

impl OpenFamily {
    pub fn new<I>(space: Arc<FinSpace>, members: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = PointSet>,
    {
        let members: Vec<PointSet> = members.into_iter().collect();
        if let Some(&set) = members.iter().find(|&&m| !space.is_open(m)) {
            return Err(FamilyError::NotOpen { set });
        }
        Ok(Self::from_open_sets(space, members))
    }

    /// Members must already be open in `space`.
    pub(crate) fn from_open_sets(space: Arc<FinSpace>, mut members: Vec<PointSet>) -> Self {
        members.sort_unstable();
        members.dedup();
        OpenFamily {
            space,
            members,
            flags: Flags::default(),
        }
    }

    /// Every open set of the space.
    pub fn full_topology(space: Arc<FinSpace>) -> Self {
        let members = space.opens().to_vec();
        Self::from_open_sets(space, members)
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn nonempty_members(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.members.iter().copied().filter(|m| !m.is_empty())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: PointSet) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    pub fn union_of_members(&self) -> PointSet {
        self.members.iter().fold(PointSet::EMPTY, |acc, &m| acc | m)
    }

    pub fn is_subfamily_of(&self, other: &OpenFamily) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn same_space(&self, other: &OpenFamily) -> bool {
        same_space(&self.space, &other.space)
    }

    /// `X = ∪P`.
    pub fn covers_space(&self) -> bool {
        *self
            .flags
            .covers
            .get_or_init(|| self.union_of_members() == self.space.points())
    }

    /// Closed under pairwise (hence finite nonempty) intersection.
    pub fn is_inter_closed(&self) -> bool {
        *self
            .flags
            .inter_closed
            .get_or_init(|| self.closed_under(|a, b| a & b))
    }

    pub fn is_union_closed(&self) -> bool {
        *self
            .flags
            .union_closed
            .get_or_init(|| self.closed_under(|a, b| a | b))
    }

    pub fn is_lattice(&self) -> bool {
        self.is_inter_closed() && self.is_union_closed()
    }

    /// The finite-model Seq test: every member's complement is a member.
    pub fn has_seq(&self) -> bool {
        *self.flags.seq.get_or_init(|| {
            let full = self.space.points();
            self.members.iter().all(|&w| self.contains(full - w))
        })
    }

    fn closed_under(&self, op: impl Fn(PointSet, PointSet) -> PointSet) -> bool {
        let lookup: HashSet<PointSet> = self.members.iter().copied().collect();
        self.members.iter().enumerate().all(|(i, &a)| {
            self.members[i + 1..]
                .iter()
                .all(|&b| lookup.contains(&op(a, b)))
        })
    }

    /// The family of all members of all `families`.
    pub fn merge<'a, I>(families: I) -> Result<OpenFamily, FamilyError>
    where
        I: IntoIterator<Item = &'a OpenFamily>,
    {
        let mut iter = families.into_iter();
        let first = iter.next().ok_or(FamilyError::NoFamilies)?;
        let mut members = first.members.clone();
        for f in iter {
            if !f.same_space(first) {
                return Err(FamilyError::MixedSpaces);
            }
            members.extend_from_slice(&f.members);
        }
        Ok(Self::from_open_sets(Arc::clone(&first.space), members))
    }
}

pub(crate) fn same_space(a: &Arc<FinSpace>, b: &Arc<FinSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for OpenFamily {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.same_space(other)
    }
}

impl Eq for OpenFamily {}

impl std::hash::Hash for OpenFamily {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl fmt::Debug for OpenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.members).finish()
    }
}

impl fmt::Display for OpenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("]")
    }
}
