use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::family::same_space;
use crate::maps::{diagonal, factors_through, SpaceMap};
use crate::space::{enumerate_t0, FinSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapKind {
    Skeletal,
    DOpen,
    Open,
}

impl MapKind {
    pub fn admits(self, f: &SpaceMap) -> bool {
        let c = f.classify();
        match self {
            MapKind::Skeletal => c.skeletal,
            MapKind::DOpen => c.d_open,
            MapKind::Open => c.open,
        }
    }
}

/// A set of maps out of one space, all of one kind.
#[derive(Debug, Clone)]
pub struct MapLattice {
    space: Arc<FinSpace>,
    members: Vec<SpaceMap>,
    kind: MapKind,
}

impl MapLattice {
    /// Members are corestricted onto their images; maps equivalent to an
    /// earlier member are dropped.
    pub fn new(
        space: Arc<FinSpace>,
        members: Vec<SpaceMap>,
        kind: MapKind,
    ) -> Result<Self, VerifyError> {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (index, m) in members.into_iter().enumerate() {
            if !same_space(m.domain(), &space) {
                return Err(VerifyError::ForeignMap { index });
            }
            let m = m.corestrict().map;
            if !kind.admits(&m) {
                return Err(VerifyError::KindViolated { index, kind });
            }
            if seen.insert(m.equivalence_key()) {
                kept.push(m);
            }
        }
        Ok(MapLattice {
            space,
            members: kept,
            kind,
        })
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn members(&self) -> &[SpaceMap] {
        &self.members
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Every continuous surjection from `space` onto a T0 space, one per
/// homeomorphism class of maps. Images are built from set partitions of
/// the points and labelled T0 topologies on the blocks.
pub fn test_maps(space: &Arc<FinSpace>) -> Vec<SpaceMap> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for blocks in set_partitions(space.n()) {
        let k = blocks.iter().max().map_or(0, |&b| b + 1);
        let images = enumerate_t0(k).expect("blocks never exceed the domain size");
        for image in images {
            let image = Arc::new(image);
            if let Ok(f) = SpaceMap::new(Arc::clone(space), image, blocks.clone()) {
                if seen.insert(f.equivalence_key()) {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// Restricted-growth strings: `labels[x]` is the block of `x`.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0; n];
    fn go(x: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if x == labels.len() {
            out.push(labels.clone());
            return;
        }
        for b in 0..=max + 1 {
            labels[x] = b;
            go(x + 1, max.max(b), labels, out);
        }
    }
    if n > 0 {
        go(1, 0, &mut labels, &mut out);
    }
    out
}

/// How the weight clause `w(φ[X]) ≤ w(f[X])` of (L1) is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightClause {
    /// Weight counts as an infinite cardinal, so the clause always holds.
    Vacuous,
    /// The clause is read as `|φ[X]| ≤ |f[X]|`.
    Cardinality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L1Verdict {
    pub holds: bool,
    /// Index into the test maps of one that nothing in the lattice factors.
    pub counterexample: Option<usize>,
}

/// (L1): every test map `f` has a member `φ ≺ f`.
pub fn check_l1(
    psi: &MapLattice,
    test: &[SpaceMap],
    clause: WeightClause,
) -> Result<L1Verdict, VerifyError> {
    for (i, f) in test.iter().enumerate() {
        let mut found = false;
        for phi in psi.members() {
            if clause == WeightClause::Cardinality && phi.image().len() > f.image().len() {
                continue;
            }
            if factors_through(f, phi)?.is_some() {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(L1Verdict {
                holds: false,
                counterexample: Some(i),
            });
        }
    }
    Ok(L1Verdict {
        holds: true,
        counterexample: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L2Verdict {
    pub holds: bool,
    /// Member indices whose diagonal matches no member.
    pub counterexample: Option<Vec<usize>>,
}

/// Lattices up to this size have every subset checked; above it only
/// pairs are, which suffices because diagonals can be formed two at a time.
pub const L2_SUBSET_LIMIT: usize = 12;

/// (L2): the diagonal of any nonempty subset of members is homeomorphic
/// to a member.
pub fn check_l2(psi: &MapLattice) -> Result<L2Verdict, VerifyError> {
    let keys: HashSet<_> = psi.members().iter().map(|m| m.equivalence_key()).collect();
    let m = psi.len();
    let fail = |subset: Vec<usize>| L2Verdict {
        holds: false,
        counterexample: Some(subset),
    };
    if m <= L2_SUBSET_LIMIT {
        for mask in 1u32..(1 << m) {
            if mask.count_ones() == 1 {
                continue;
            }
            let subset: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
            let maps: Vec<SpaceMap> = subset.iter().map(|&i| psi.members()[i].clone()).collect();
            if !keys.contains(&diagonal(&maps)?.map.equivalence_key()) {
                return Ok(fail(subset));
            }
        }
    } else {
        for i in 0..m {
            for j in i + 1..m {
                let maps = [psi.members()[i].clone(), psi.members()[j].clone()];
                if !keys.contains(&diagonal(&maps)?.map.equivalence_key()) {
                    return Ok(fail(vec![i, j]));
                }
            }
        }
    }
    Ok(L2Verdict {
        holds: true,
        counterexample: None,
    })
}

/// Closes a set of maps under pairwise diagonals, up to homeomorphism.
pub fn diagonal_closure(maps: Vec<SpaceMap>) -> Result<Vec<SpaceMap>, VerifyError> {
    let mut seen = HashSet::new();
    let mut items: Vec<SpaceMap> = Vec::new();
    for m in maps {
        let m = m.corestrict().map;
        if seen.insert(m.equivalence_key()) {
            items.push(m);
        }
    }
    let mut i = 0;
    while i < items.len() {
        for j in 0..i {
            let d = diagonal(&[items[i].clone(), items[j].clone()])?.map;
            if seen.insert(d.equivalence_key()) {
                items.push(d);
            }
        }
        i += 1;
    }
    Ok(items)
}
