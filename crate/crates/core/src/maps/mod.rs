//! Continuous maps between finite spaces and their classification.
//!
//! For a map `f: X → Y` and open `U ⊆ X`:
//! * `f` is *open* when every `f[U]` is open;
//! * `f` is *d-open* when `f[U] ⊆ int cl f[U]`;
//! * `f` is *skeletal* when `int cl f[U] ≠ ∅` for every nonempty `U`.

mod factor;
mod quotient;

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::family::same_space;
use crate::space::{FinSpace, PointSet, SpaceError};

pub use factor::{diagonal, factors_through, maps_homeomorphic, DiagonalMap, Factorization};
pub use quotient::{quotient, BaseCheck, QuotientResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("assignment has {got} entries but the domain has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("point {point} is sent to {value}, outside the codomain")]
    PointOutOfRange { point: usize, value: usize },
    #[error("not continuous: the preimage {preimage} of the open set {open} is not open")]
    NotContinuous { open: PointSet, preimage: PointSet },
    #[error("maps do not share a domain")]
    DomainMismatch,
    #[error("no maps given")]
    EmptyMapList,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Which of the three map classes a map belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Classification {
    pub open: bool,
    pub d_open: bool,
    pub skeletal: bool,
    pub surjective: bool,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        write!(
            f,
            "open: {} | d-open: {} | skeletal: {} | surjective: {}",
            yn(self.open),
            yn(self.d_open),
            yn(self.skeletal),
            yn(self.surjective)
        )
    }
}

/// A continuous map, checked at construction.
#[derive(Clone)]
pub struct SpaceMap {
    domain: Arc<FinSpace>,
    codomain: Arc<FinSpace>,
    assignment: Vec<usize>,
    class: OnceLock<Classification>,
}

/// A map onto its image, with the image points listed in the codomain.
#[derive(Debug, Clone)]
pub struct Corestriction {
    pub map: SpaceMap,
    /// `points[i]` is the codomain point labelled `i` in the image space.
    pub points: Vec<usize>,
}

impl SpaceMap {
    pub fn new(
        domain: Arc<FinSpace>,
        codomain: Arc<FinSpace>,
        assignment: Vec<usize>,
    ) -> Result<Self, MapError> {
        if assignment.len() != domain.n() {
            return Err(MapError::LengthMismatch {
                expected: domain.n(),
                got: assignment.len(),
            });
        }
        if let Some((point, &value)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &v)| v >= codomain.n())
        {
            return Err(MapError::PointOutOfRange { point, value });
        }
        // f is continuous iff f[U_x] ⊆ U_{f(x)} for every x
        for x in domain.points() {
            let target = codomain.min_neighborhood(assignment[x]);
            let image = domain.min_neighborhood(x).map_points(&assignment);
            if !image.is_subset(target) {
                let preimage = (0..domain.n())
                    .filter(|&y| target.contains(assignment[y]))
                    .collect();
                return Err(MapError::NotContinuous {
                    open: target,
                    preimage,
                });
            }
        }
        Ok(SpaceMap {
            domain,
            codomain,
            assignment,
            class: OnceLock::new(),
        })
    }

    pub fn identity(space: Arc<FinSpace>) -> Self {
        let assignment = (0..space.n()).collect();
        SpaceMap {
            domain: Arc::clone(&space),
            codomain: space,
            assignment,
            class: OnceLock::new(),
        }
    }

    /// The constant map with value `point`; always continuous.
    pub fn constant(
        domain: Arc<FinSpace>,
        codomain: Arc<FinSpace>,
        point: usize,
    ) -> Result<Self, MapError> {
        let assignment = vec![point; domain.n()];
        Self::new(domain, codomain, assignment)
    }

    pub fn domain(&self) -> &Arc<FinSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinSpace> {
        &self.codomain
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn image(&self) -> PointSet {
        self.image_of(self.domain.points())
    }

    pub fn image_of(&self, s: PointSet) -> PointSet {
        s.map_points(&self.assignment)
    }

    pub fn preimage(&self, s: PointSet) -> PointSet {
        (0..self.domain.n())
            .filter(|&x| s.contains(self.assignment[x]))
            .collect()
    }

    /// Evaluates the three classes by scanning every nonempty open of the
    /// domain.
    pub fn classify(&self) -> Classification {
        *self.class.get_or_init(|| {
            let cod = &self.codomain;
            let mut c = Classification {
                open: true,
                d_open: true,
                skeletal: true,
                surjective: self.image() == cod.points(),
            };
            for u in self.domain.nonempty_opens() {
                let image = self.image_of(u);
                let core = cod.interior(cod.closure(image));
                c.open &= cod.is_open(image);
                c.d_open &= image.is_subset(core);
                c.skeletal &= !core.is_empty();
            }
            c
        })
    }

    pub fn is_open_map(&self) -> bool {
        self.classify().open
    }

    pub fn is_d_open(&self) -> bool {
        self.classify().d_open
    }

    pub fn is_skeletal(&self) -> bool {
        self.classify().skeletal
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == self.codomain.points()
    }

    /// The same map viewed as a surjection onto its image subspace.
    pub fn corestrict(&self) -> Corestriction {
        let (image_space, points) = self.codomain.subspace(self.image());
        let mut index = vec![usize::MAX; self.codomain.n()];
        for (i, &y) in points.iter().enumerate() {
            index[y] = i;
        }
        let assignment = self.assignment.iter().map(|&y| index[y]).collect();
        Corestriction {
            map: SpaceMap {
                domain: Arc::clone(&self.domain),
                codomain: Arc::new(image_space),
                assignment,
                class: OnceLock::new(),
            },
            points,
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SpaceMap) -> Result<SpaceMap, MapError> {
        if !same_space(&self.codomain, &next.domain) {
            return Err(MapError::DomainMismatch);
        }
        let assignment = self
            .assignment
            .iter()
            .map(|&y| next.assignment[y])
            .collect();
        Ok(SpaceMap {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&next.codomain),
            assignment,
            class: OnceLock::new(),
        })
    }

    /// The nonempty fibers, ordered by their least point.
    pub fn fibers(&self) -> Vec<PointSet> {
        let mut fibers: Vec<PointSet> = self
            .image()
            .iter()
            .map(|y| self.preimage(PointSet::singleton(y)))
            .collect();
        fibers.sort_unstable_by_key(|f| f.min_point());
        fibers
    }

    /// `{f⁻¹(V) : V open}`, sorted.
    pub fn pullback_topology(&self) -> Vec<PointSet> {
        let mut opens: Vec<PointSet> = self
            .codomain
            .opens()
            .iter()
            .map(|&v| self.preimage(v))
            .collect();
        opens.sort_unstable();
        opens.dedup();
        opens
    }

    /// Two maps from one domain are homeomorphic exactly when they have
    /// the same fibers and pull back the same topology; this pair is a
    /// complete invariant.
    pub fn equivalence_key(&self) -> (Vec<PointSet>, Vec<PointSet>) {
        (self.fibers(), self.pullback_topology())
    }

    /// `f⁻¹(U_{f(x)})` for every domain point.
    pub(crate) fn pulled_neighborhoods(&self) -> Vec<PointSet> {
        (0..self.domain.n())
            .map(|x| self.preimage(self.codomain.min_neighborhood(self.assignment[x])))
            .collect()
    }
}

impl PartialEq for SpaceMap {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment
            && same_space(&self.domain, &other.domain)
            && same_space(&self.codomain, &other.codomain)
    }
}

impl Eq for SpaceMap {}

impl fmt::Debug for SpaceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpaceMap")
            .field("domain_points", &self.domain.n())
            .field("codomain_points", &self.codomain.n())
            .field("assignment", &self.assignment)
            .finish()
    }
}

impl fmt::Display for SpaceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, y) in self.assignment.iter().enumerate() {
            if x > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_everything() {
        let s = Arc::new(FinSpace::sierpinski());
        let c = SpaceMap::identity(s).classify();
        assert!(c.open && c.d_open && c.skeletal && c.surjective);
    }

    #[test]
    fn collapse_to_closed_point() {
        let d = Arc::new(FinSpace::discrete(2));
        let s = Arc::new(FinSpace::sierpinski());
        let f = SpaceMap::new(d, s, vec![0, 0]).unwrap();
        let c = f.classify();
        assert!(!c.skeletal);
        assert!(!c.d_open);
        assert!(!c.open);
    }

    #[test]
    fn identity_points_into_discrete_is_discontinuous() {
        let d = Arc::new(FinSpace::discrete(2));
        let s = Arc::new(FinSpace::sierpinski());
        assert_eq!(
            SpaceMap::new(s, d, vec![0, 1]).unwrap_err(),
            MapError::NotContinuous {
                open: PointSet::singleton(0),
                preimage: PointSet::singleton(0),
            }
        );
    }

    #[test]
    fn constant_to_point_is_skeletal() {
        let s = Arc::new(FinSpace::sierpinski());
        let one = Arc::new(FinSpace::discrete(1));
        assert!(SpaceMap::constant(s, one, 0).unwrap().is_skeletal());
    }

    #[test]
    fn corestriction_is_surjective() {
        let d = Arc::new(FinSpace::discrete(3));
        let f = SpaceMap::new(d.clone(), d, vec![2, 2, 0]).unwrap();
        let c = f.corestrict();
        assert_eq!(c.points, vec![0, 2]);
        assert!(c.map.is_surjective());
        assert_eq!(c.map.assignment(), &[1, 1, 0]);
    }

    #[test]
    fn fibers_are_ordered() {
        let d = Arc::new(FinSpace::discrete(3));
        let f = SpaceMap::new(d.clone(), d, vec![2, 0, 2]).unwrap();
        assert_eq!(
            f.fibers(),
            vec![[0, 2].into_iter().collect(), PointSet::singleton(1)]
        );
    }
}
