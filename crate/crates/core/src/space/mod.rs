//! Finite topological spaces.
//!
//! Every finite space is Alexandrov: each point `x` has a smallest open
//! neighbourhood `U_x`, and the opens are exactly the unions of those. A
//! space is stored as its sorted list of open bitmaps together with the
//! minimal neighbourhoods, which makes interior and closure single scans.

mod canonical;
mod enumerate;
mod pointset;
mod product;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub use canonical::{CanonicalForm, CANONICAL_MAX_POINTS};
pub use enumerate::{
    enumerate_t0, known_labeled_t0_count, known_topology_count, known_unlabeled_t0_count,
    SpaceCatalog, TopologyIter, DEFAULT_ENUMERATION_MAX,
};
pub use pointset::{PointSet, Points};
pub use product::{product, Product, DEFAULT_POINT_BUDGET};

/// Bitmaps are single machine words.
pub const MAX_POINTS: usize = 64;

/// The first closure axiom a candidate topology was found to break.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureWitness {
    MissingEmpty,
    MissingFull,
    Union(PointSet, PointSet),
    Intersection(PointSet, PointSet),
}

impl fmt::Display for ClosureWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureWitness::MissingEmpty => write!(f, "the empty set is not open"),
            ClosureWitness::MissingFull => write!(f, "the full point set is not open"),
            ClosureWitness::Union(a, b) => write!(f, "{a} ∪ {b} is not open"),
            ClosureWitness::Intersection(a, b) => write!(f, "{a} ∩ {b} is not open"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("a space needs at least one point")]
    EmptySpace,
    #[error("{0} points exceeds the supported maximum of {MAX_POINTS}")]
    TooManyPoints(usize),
    #[error("set {set} mentions points outside 0..{n}")]
    OutOfRange { set: PointSet, n: usize },
    #[error("not a topology: {0}")]
    NotATopology(ClosureWitness),
    #[error("point {point}: {reason}")]
    InvalidNeighborhood { point: usize, reason: &'static str },
    #[error("enumeration bound {requested} exceeds the configured maximum {max}")]
    BoundExceeded { requested: usize, max: usize },
    #[error("product has {points} points, over the point budget of {budget}")]
    SizeOverflow { points: u128, budget: usize },
    #[error("canonical forms are limited to {CANONICAL_MAX_POINTS} points, got {0}")]
    CanonicalFormTooLarge(usize),
}

/// A finite topological space on the points `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSpace {
    n: usize,
    opens: Vec<PointSet>,
    min_nbhd: Vec<PointSet>,
    t0: bool,
}

/// Checks the topology axioms for `candidate` and builds the space.
pub fn validate_topology<I>(n: usize, candidate: I) -> Result<FinSpace, SpaceError>
where
    I: IntoIterator<Item = PointSet>,
{
    FinSpace::new(n, candidate)
}

impl FinSpace {
    /// Validates a candidate open-set list. Duplicates are ignored.
    pub fn new<I>(n: usize, candidate: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = PointSet>,
    {
        check_size(n)?;
        let full = PointSet::full(n);
        let mut opens: Vec<PointSet> = candidate.into_iter().collect();
        opens.sort_unstable();
        opens.dedup();
        if let Some(&set) = opens.iter().find(|s| !s.is_subset(full)) {
            return Err(SpaceError::OutOfRange { set, n });
        }
        let lookup: HashSet<PointSet> = opens.iter().copied().collect();
        if !lookup.contains(&PointSet::EMPTY) {
            return Err(SpaceError::NotATopology(ClosureWitness::MissingEmpty));
        }
        if !lookup.contains(&full) {
            return Err(SpaceError::NotATopology(ClosureWitness::MissingFull));
        }
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if !lookup.contains(&(a | b)) {
                    return Err(SpaceError::NotATopology(ClosureWitness::Union(a, b)));
                }
                if !lookup.contains(&(a & b)) {
                    return Err(SpaceError::NotATopology(ClosureWitness::Intersection(a, b)));
                }
            }
        }
        Ok(Self::from_valid_opens(n, opens))
    }

    /// Builds the space whose opens are all unions of the given minimal
    /// neighbourhoods. `nbhds[x]` must contain `x`, and `y ∈ nbhds[x]`
    /// must imply `nbhds[y] ⊆ nbhds[x]`.
    pub fn from_min_neighborhoods(nbhds: Vec<PointSet>) -> Result<Self, SpaceError> {
        let n = nbhds.len();
        check_size(n)?;
        let full = PointSet::full(n);
        for (x, &u) in nbhds.iter().enumerate() {
            if !u.is_subset(full) {
                return Err(SpaceError::OutOfRange { set: u, n });
            }
            if !u.contains(x) {
                return Err(SpaceError::InvalidNeighborhood {
                    point: x,
                    reason: "neighbourhood does not contain its point",
                });
            }
            if u.iter().any(|y| !nbhds[y].is_subset(u)) {
                return Err(SpaceError::InvalidNeighborhood {
                    point: x,
                    reason: "neighbourhoods are not transitive",
                });
            }
        }
        Ok(Self::from_trusted_neighborhoods(nbhds))
    }

    pub(crate) fn from_trusted_neighborhoods(nbhds: Vec<PointSet>) -> Self {
        let n = nbhds.len();
        let mut seen: HashSet<PointSet> = HashSet::new();
        let mut opens = vec![PointSet::EMPTY];
        seen.insert(PointSet::EMPTY);
        for &u in &nbhds {
            let snapshot = opens.len();
            for i in 0..snapshot {
                let s = opens[i] | u;
                if seen.insert(s) {
                    opens.push(s);
                }
            }
        }
        opens.sort_unstable();
        let t0 = distinct(&nbhds);
        FinSpace {
            n,
            opens,
            min_nbhd: nbhds,
            t0,
        }
    }

    fn from_valid_opens(n: usize, opens: Vec<PointSet>) -> Self {
        let min_nbhd: Vec<PointSet> = (0..n)
            .map(|x| {
                opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(PointSet::full(n), |acc, &o| acc & o)
            })
            .collect();
        let t0 = distinct(&min_nbhd);
        FinSpace {
            n,
            opens,
            min_nbhd,
            t0,
        }
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_min_neighborhoods((0..n).map(PointSet::singleton).collect())
            .expect("discrete neighbourhoods are valid")
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::from_min_neighborhoods(vec![PointSet::full(n); n])
            .expect("indiscrete neighbourhoods are valid")
    }

    /// Two points, `1` open and `0` closed: opens `∅, {1}, {0,1}`.
    pub fn sierpinski() -> Self {
        Self::from_min_neighborhoods(vec![PointSet::full(2), PointSet::singleton(1)])
            .expect("Sierpiński neighbourhoods are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> PointSet {
        PointSet::full(self.n)
    }

    /// Open sets in ascending bitmap order.
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn nonempty_opens(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().copied().filter(|o| !o.is_empty())
    }

    pub fn closed_sets(&self) -> impl Iterator<Item = PointSet> + '_ {
        let full = self.points();
        self.opens.iter().map(move |&o| full - o)
    }

    pub fn is_t0(&self) -> bool {
        self.t0
    }

    pub fn is_discrete(&self) -> bool {
        self.min_nbhd.iter().all(|u| u.len() == 1)
    }

    /// Smallest open set containing `x`.
    pub fn min_neighborhood(&self, x: usize) -> PointSet {
        self.min_nbhd[x]
    }

    pub fn min_neighborhoods(&self) -> &[PointSet] {
        &self.min_nbhd
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: PointSet) -> bool {
        self.is_open(self.points() - s)
    }

    /// Largest open subset of `s`.
    pub fn interior(&self, s: PointSet) -> PointSet {
        s.iter()
            .filter(|&x| self.min_nbhd[x].is_subset(s))
            .collect()
    }

    /// Smallest closed superset of `s`.
    pub fn closure(&self, s: PointSet) -> PointSet {
        let full = self.points();
        full - self.interior(full - s)
    }

    pub fn is_dense(&self, s: PointSet) -> bool {
        self.closure(s) == self.points()
    }

    /// The subspace on `points`, relabelled `0..k` in ascending order.
    /// The returned vector maps new labels to original points.
    pub fn subspace(&self, points: PointSet) -> (FinSpace, Vec<usize>) {
        let embedding: Vec<usize> = points.iter().collect();
        let nbhds = embedding
            .iter()
            .map(|&x| reindex(self.min_nbhd[x] & points, &embedding))
            .collect();
        (Self::from_trusted_neighborhoods(nbhds), embedding)
    }

    /// The homeomorphic copy obtained by renaming point `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> FinSpace {
        assert_eq!(
            perm.len(),
            self.n,
            "permutation length must match the space"
        );
        let mut nbhds = vec![PointSet::EMPTY; self.n];
        for x in 0..self.n {
            nbhds[perm[x]] = self.min_nbhd[x].map_points(perm);
        }
        Self::from_trusted_neighborhoods(nbhds)
    }

    /// Searches for a homeomorphism `self → other`, returned as a point
    /// permutation. Candidates are pruned by open-set count and by the
    /// degree profile of the specialization order.
    pub fn find_homeomorphism(&self, other: &FinSpace) -> Option<Vec<usize>> {
        if self.n != other.n || self.opens.len() != other.opens.len() {
            return None;
        }
        let da = self.degree_profile();
        let db = other.degree_profile();
        let mut sa = da.clone();
        let mut sb = db.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        let mut assignment = vec![usize::MAX; self.n];
        let mut used = PointSet::EMPTY;
        if self.extend_homeomorphism(other, &da, &db, 0, &mut assignment, &mut used) {
            Some(assignment)
        } else {
            None
        }
    }

    fn extend_homeomorphism(
        &self,
        other: &FinSpace,
        da: &[(usize, usize)],
        db: &[(usize, usize)],
        x: usize,
        assignment: &mut [usize],
        used: &mut PointSet,
    ) -> bool {
        if x == self.n {
            return true;
        }
        for y in 0..other.n {
            if used.contains(y) || da[x] != db[y] {
                continue;
            }
            let consistent = (0..x).all(|z| {
                let fz = assignment[z];
                self.min_nbhd[x].contains(z) == other.min_nbhd[y].contains(fz)
                    && self.min_nbhd[z].contains(x) == other.min_nbhd[fz].contains(y)
            });
            if !consistent {
                continue;
            }
            assignment[x] = y;
            used.insert(y);
            if self.extend_homeomorphism(other, da, db, x + 1, assignment, used) {
                return true;
            }
            used.remove(y);
        }
        assignment[x] = usize::MAX;
        false
    }

    /// `(|U_x|, |cl{x}|)` per point.
    pub(crate) fn degree_profile(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .map(|x| {
                let below = (0..self.n)
                    .filter(|&y| self.min_nbhd[y].contains(x))
                    .count();
                (self.min_nbhd[x].len(), below)
            })
            .collect()
    }
}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinSpace")
            .field("n", &self.n)
            .field("opens", &self.opens)
            .field("t0", &self.t0)
            .finish()
    }
}

fn check_size(n: usize) -> Result<(), SpaceError> {
    if n == 0 {
        Err(SpaceError::EmptySpace)
    } else if n > MAX_POINTS {
        Err(SpaceError::TooManyPoints(n))
    } else {
        Ok(())
    }
}

fn distinct(nbhds: &[PointSet]) -> bool {
    let set: HashSet<PointSet> = nbhds.iter().copied().collect();
    set.len() == nbhds.len()
}

fn reindex(s: PointSet, embedding: &[usize]) -> PointSet {
    embedding
        .iter()
        .enumerate()
        .filter(|(_, &x)| s.contains(x))
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(points: &[usize]) -> PointSet {
        points.iter().copied().collect()
    }

    #[test]
    fn sierpinski_validates_as_t0() {
        let s = FinSpace::new(2, [ps(&[]), ps(&[1]), ps(&[0, 1])]).unwrap();
        assert!(s.is_t0());
        assert_eq!(s, FinSpace::sierpinski());
        assert!(!s.is_discrete());
    }

    #[test]
    fn discrete_two_validates() {
        let s = FinSpace::new(2, [ps(&[]), ps(&[0]), ps(&[1]), ps(&[0, 1])]).unwrap();
        assert!(s.is_t0());
        assert!(s.is_discrete());
        assert_eq!(s, FinSpace::discrete(2));
    }

    #[test]
    fn missing_full_set_is_rejected() {
        let err = FinSpace::new(2, [ps(&[]), ps(&[0])]).unwrap_err();
        assert_eq!(err, SpaceError::NotATopology(ClosureWitness::MissingFull));
    }

    #[test]
    fn union_violation_reports_witness() {
        let err = FinSpace::new(3, [ps(&[]), ps(&[0]), ps(&[1]), ps(&[0, 1, 2])]).unwrap_err();
        assert_eq!(
            err,
            SpaceError::NotATopology(ClosureWitness::Union(ps(&[0]), ps(&[1])))
        );
    }

    #[test]
    fn zero_points_is_an_error() {
        assert_eq!(
            FinSpace::new(0, [PointSet::EMPTY]).unwrap_err(),
            SpaceError::EmptySpace
        );
    }

    #[test]
    fn out_of_range_is_an_error() {
        assert!(matches!(
            FinSpace::new(2, [ps(&[]), ps(&[0, 1]), ps(&[2])]),
            Err(SpaceError::OutOfRange { .. })
        ));
    }

    #[test]
    fn indiscrete_is_not_t0() {
        assert!(!FinSpace::indiscrete(2).is_t0());
        assert!(FinSpace::indiscrete(1).is_t0());
    }

    #[test]
    fn interior_and_closure_examples() {
        let s = FinSpace::sierpinski();
        assert_eq!(s.interior(ps(&[0])), PointSet::EMPTY);
        assert_eq!(s.interior(s.points()), s.points());
        assert_eq!(s.closure(ps(&[1])), ps(&[0, 1]));
        assert_eq!(s.closure(PointSet::EMPTY), PointSet::EMPTY);
        assert!(s.is_dense(ps(&[1])));
        assert!(!s.is_dense(ps(&[0])));
        let d = FinSpace::discrete(2);
        assert_eq!(d.interior(ps(&[0])), ps(&[0]));
        for bits in 0..4u64 {
            let set = PointSet::from_bits(bits);
            assert_eq!(d.closure(set), set);
        }
    }

    #[test]
    fn subspace_of_chain() {
        // 0 ≤ 1 ≤ 2 with opens the up-sets.
        let chain =
            FinSpace::from_min_neighborhoods(vec![ps(&[0, 1, 2]), ps(&[1, 2]), ps(&[2])]).unwrap();
        let (sub, emb) = chain.subspace(ps(&[0, 2]));
        assert_eq!(emb, vec![0, 2]);
        assert_eq!(sub, FinSpace::sierpinski());
    }

    #[test]
    fn relabel_gives_homeomorphic_copy() {
        let chain =
            FinSpace::from_min_neighborhoods(vec![ps(&[0, 1, 2]), ps(&[1, 2]), ps(&[2])]).unwrap();
        let moved = chain.relabel(&[2, 0, 1]);
        assert_ne!(moved, chain);
        let h = chain.find_homeomorphism(&moved).unwrap();
        assert_eq!(h, vec![2, 0, 1]);
        assert!(chain.find_homeomorphism(&FinSpace::discrete(3)).is_none());
    }

    #[test]
    fn invalid_neighbourhoods_are_rejected() {
        assert!(FinSpace::from_min_neighborhoods(vec![ps(&[1]), ps(&[1])]).is_err());
        assert!(
            FinSpace::from_min_neighborhoods(vec![ps(&[0, 1]), ps(&[0, 1, 2]), ps(&[2])]).is_err()
        );
    }
}
