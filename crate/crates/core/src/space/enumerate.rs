use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, Mutex};

use super::{CanonicalForm, FinSpace, PointSet, SpaceError};

pub const DEFAULT_ENUMERATION_MAX: usize = 5;

/// Hard ceiling for the catalog; the backtracking visits up to
/// `2^(n(n-1))` neighbourhood assignments before pruning.
const CATALOG_CEILING: usize = 7;

const LABELED_T0: [u64; 8] = [1, 1, 3, 19, 219, 4231, 130023, 6129859];
const UNLABELED_T0: [u64; 8] = [1, 1, 2, 5, 16, 63, 318, 2045];
const ALL_TOPOLOGIES: [u64; 8] = [1, 1, 4, 29, 355, 6942, 209527, 9535241];

/// Number of labeled T0 topologies (equivalently labeled posets) on `n` points.
pub fn known_labeled_t0_count(n: usize) -> Option<u64> {
    LABELED_T0.get(n).copied()
}

/// Number of T0 topologies on `n` points up to homeomorphism.
pub fn known_unlabeled_t0_count(n: usize) -> Option<u64> {
    UNLABELED_T0.get(n).copied()
}

/// Number of labeled topologies (preorders) on `n` points.
pub fn known_topology_count(n: usize) -> Option<u64> {
    ALL_TOPOLOGIES.get(n).copied()
}

/// Every labeled T0 topology on exactly `n` points, with the default bound.
pub fn enumerate_t0(n: usize) -> Result<TopologyIter, SpaceError> {
    SpaceCatalog::default().labeled(n)
}

/// Backtracking stream of topologies on `0..n`.
///
/// Point `x` is assigned its minimal neighbourhood `U_x` in turn. A choice
/// is kept only if it is transitive with every earlier point, and, for T0
/// streams, antisymmetric. Each preorder (poset) is therefore reached
/// exactly once.
#[derive(Debug, Clone)]
pub struct TopologyIter {
    n: usize,
    t0_only: bool,
    nbhds: Vec<PointSet>,
    next_choice: Vec<u64>,
    depth: usize,
    done: bool,
}

impl TopologyIter {
    fn new(n: usize, t0_only: bool) -> Self {
        TopologyIter {
            n,
            t0_only,
            nbhds: vec![PointSet::EMPTY; n],
            next_choice: vec![0; n],
            depth: 0,
            done: n == 0,
        }
    }

    fn candidate(&self, x: usize, choice: u64) -> PointSet {
        // spread the n-1 choice bits over the points other than x
        let low = choice & ((1u64 << x) - 1);
        let high = (choice >> x) << (x + 1);
        PointSet::from_bits(low | high | (1u64 << x))
    }

    fn consistent(&self, x: usize, u: PointSet) -> bool {
        (0..x).all(|y| {
            let uy = self.nbhds[y];
            let y_in_x = u.contains(y);
            let x_in_y = uy.contains(x);
            if self.t0_only && y_in_x && x_in_y {
                return false;
            }
            (!y_in_x || uy.is_subset(u)) && (!x_in_y || u.is_subset(uy))
        })
    }
}

impl Iterator for TopologyIter {
    type Item = FinSpace;

    fn next(&mut self) -> Option<FinSpace> {
        let limit = 1u64 << (self.n.max(1) - 1);
        loop {
            if self.done {
                return None;
            }
            if self.depth == self.n {
                self.depth -= 1;
                return Some(FinSpace::from_trusted_neighborhoods(self.nbhds.clone()));
            }
            let d = self.depth;
            if self.next_choice[d] == limit {
                if d == 0 {
                    self.done = true;
                    return None;
                }
                self.next_choice[d] = 0;
                self.depth -= 1;
                continue;
            }
            let u = self.candidate(d, self.next_choice[d]);
            self.next_choice[d] += 1;
            if self.consistent(d, u) {
                self.nbhds[d] = u;
                self.depth += 1;
            }
        }
    }
}

/// Enumeration front end with a size bound and a per-size cache of
/// homeomorphism-class representatives.
#[derive(Debug)]
pub struct SpaceCatalog {
    max_points: usize,
    representatives: Mutex<BTreeMap<usize, Arc<Vec<FinSpace>>>>,
}

impl Default for SpaceCatalog {
    fn default() -> Self {
        Self::new(DEFAULT_ENUMERATION_MAX).expect("default bound is within the ceiling")
    }
}

impl SpaceCatalog {
    pub fn new(max_points: usize) -> Result<Self, SpaceError> {
        if max_points > CATALOG_CEILING {
            return Err(SpaceError::BoundExceeded {
                requested: max_points,
                max: CATALOG_CEILING,
            });
        }
        Ok(SpaceCatalog {
            max_points,
            representatives: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    fn check(&self, n: usize) -> Result<(), SpaceError> {
        if n == 0 {
            Err(SpaceError::EmptySpace)
        } else if n > self.max_points {
            Err(SpaceError::BoundExceeded {
                requested: n,
                max: self.max_points,
            })
        } else {
            Ok(())
        }
    }

    /// Labeled T0 topologies on exactly `n` points.
    pub fn labeled(&self, n: usize) -> Result<TopologyIter, SpaceError> {
        self.check(n)?;
        Ok(TopologyIter::new(n, true))
    }

    /// All labeled topologies on exactly `n` points, T0 or not.
    pub fn all_topologies(&self, n: usize) -> Result<TopologyIter, SpaceError> {
        self.check(n)?;
        Ok(TopologyIter::new(n, false))
    }

    /// One T0 space per homeomorphism class on exactly `n` points, each in
    /// its canonical labelling, sorted by canonical form.
    pub fn up_to_homeomorphism(&self, n: usize) -> Result<Arc<Vec<FinSpace>>, SpaceError> {
        self.check(n)?;
        if let Some(reps) = self.lock().get(&n) {
            return Ok(Arc::clone(reps));
        }
        let mut seen = HashSet::new();
        let mut reps = Vec::new();
        for space in TopologyIter::new(n, true) {
            let form = CanonicalForm::of(&space)?;
            if seen.insert(form.clone()) {
                reps.push((form.clone(), form.to_space()));
            }
        }
        reps.sort_by(|a, b| a.0.cmp(&b.0));
        let reps = Arc::new(reps.into_iter().map(|(_, s)| s).collect::<Vec<_>>());
        self.lock().insert(n, Arc::clone(&reps));
        Ok(reps)
    }

    /// Representatives for every size `1..=n`, smallest spaces first.
    pub fn up_to_homeomorphism_through(&self, n: usize) -> Result<Vec<FinSpace>, SpaceError> {
        let mut all = Vec::new();
        for k in 1..=n {
            all.extend(self.up_to_homeomorphism(k)?.iter().cloned());
        }
        Ok(all)
    }

    /// Labeled spaces for every size `1..=n`.
    pub fn labeled_through(&self, n: usize) -> Result<Vec<FinSpace>, SpaceError> {
        let mut all = Vec::new();
        for k in 1..=n {
            all.extend(self.labeled(k)?);
        }
        Ok(all)
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, BTreeMap<usize, Arc<Vec<FinSpace>>>> {
        self.representatives
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }
}
