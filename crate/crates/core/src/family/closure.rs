use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{FamilyError, OpenFamily};
use crate::space::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Union,
    Intersection,
}

/// Where a closure element first appeared: its level, and the finite
/// family one level down that the operation was applied to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub level: usize,
    pub operation: Option<Operation>,
    pub support: Vec<PointSet>,
}

/// The closure `⟨A⟩` together with its level decomposition
/// `⟨A⟩^0 ⊆ ⟨A⟩^1 ⊆ …`.
///
/// Level `k + 1` adds the union and the intersection of every nonempty
/// finite subfamily of level `k`. The empty subfamily is never used, so
/// neither `∅` nor `X` is adjoined unless generated.
#[derive(Debug, Clone)]
pub struct LatticeClosure {
    generators: OpenFamily,
    levels: Vec<OpenFamily>,
    provenance: HashMap<PointSet, Provenance>,
}

impl LatticeClosure {
    pub fn generators(&self) -> &OpenFamily {
        &self.generators
    }

    pub fn levels(&self) -> &[OpenFamily] {
        &self.levels
    }

    /// The stabilized level.
    pub fn result(&self) -> &OpenFamily {
        self.levels.last().expect("level 0 always exists")
    }

    pub fn into_result(mut self) -> OpenFamily {
        self.levels.pop().expect("level 0 always exists")
    }

    pub fn provenance(&self, set: PointSet) -> Option<&Provenance> {
        self.provenance.get(&set)
    }

    pub fn level_of(&self, set: PointSet) -> Option<usize> {
        self.provenance.get(&set).map(|p| p.level)
    }
}

/// Computes `⟨a⟩` level by level, recording provenance for every element.
pub fn generate_lattice(a: &OpenFamily) -> LatticeClosure {
    let space = Arc::clone(a.space());
    let mut provenance: HashMap<PointSet, Provenance> = a
        .members()
        .iter()
        .map(|&m| {
            (
                m,
                Provenance {
                    level: 0,
                    operation: None,
                    support: vec![m],
                },
            )
        })
        .collect();
    let mut levels = vec![a.clone()];
    loop {
        let current = levels.last().unwrap().members().to_vec();
        let level = levels.len();
        let mut grew = false;
        let mut next = current.clone();
        for (op, combine) in [
            (
                Operation::Union,
                (|x, y| x | y) as fn(PointSet, PointSet) -> PointSet,
            ),
            (Operation::Intersection, |x, y| x & y),
        ] {
            for (set, support) in semilattice_closure(&current, combine) {
                if provenance.contains_key(&set) {
                    continue;
                }
                provenance.insert(
                    set,
                    Provenance {
                        level,
                        operation: Some(op),
                        support,
                    },
                );
                next.push(set);
                grew = true;
            }
        }
        if !grew {
            break;
        }
        levels.push(OpenFamily::from_open_sets(Arc::clone(&space), next));
    }
    LatticeClosure {
        generators: a.clone(),
        levels,
        provenance,
    }
}

/// `⟨a⟩` as a pairwise ∪/∩ fixpoint, without levels or provenance.
pub fn lattice_closure(a: &OpenFamily) -> OpenFamily {
    let mut items = a.members().to_vec();
    let mut seen: HashSet<PointSet> = items.iter().copied().collect();
    let mut i = 0;
    while i < items.len() {
        let x = items[i];
        for j in 0..i {
            for z in [x | items[j], x & items[j]] {
                if seen.insert(z) {
                    items.push(z);
                }
            }
        }
        i += 1;
    }
    OpenFamily::from_open_sets(Arc::clone(a.space()), items)
}

/// Every value of `op` over a nonempty subfamily of `base`, each with one
/// subfamily producing it. Worklist over pairs.
fn semilattice_closure(
    base: &[PointSet],
    op: fn(PointSet, PointSet) -> PointSet,
) -> Vec<(PointSet, Vec<PointSet>)> {
    let mut items: Vec<PointSet> = base.to_vec();
    let mut support: HashMap<PointSet, Vec<PointSet>> =
        base.iter().map(|&b| (b, vec![b])).collect();
    let mut i = 0;
    while i < items.len() {
        let x = items[i];
        for j in 0..i {
            let y = items[j];
            let z = op(x, y);
            if !support.contains_key(&z) {
                let merged = merge_sorted(&support[&x], &support[&y]);
                support.insert(z, merged);
                items.push(z);
            }
        }
        i += 1;
    }
    items
        .into_iter()
        .map(|s| {
            let sup = support.remove(&s).unwrap();
            (s, sup)
        })
        .collect()
}

fn merge_sorted(a: &[PointSet], b: &[PointSet]) -> Vec<PointSet> {
    let mut out: Vec<PointSet> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Result of pulling a finite `V ⊆ ⟨A⟩` back to a finite `W ⊆ A`.
#[derive(Debug, Clone)]
pub struct Absorption {
    pub family: OpenFamily,
    /// The intermediate families, from `V` down to `W`.
    pub descent: Vec<Vec<PointSet>>,
    /// `⟨V⟩ ⊆ ⟨W⟩ ⊆ ⟨A⟩`, recomputed from scratch.
    pub sandwich_holds: bool,
}

/// Finds a finite `W ⊆ a` with `⟨v⟩ ⊆ ⟨W⟩ ⊆ ⟨a⟩` by replacing, level by
/// level from the top, each element of `v` with the subfamily it was
/// generated from.
pub fn finite_absorption(a: &OpenFamily, v: &OpenFamily) -> Result<Absorption, FamilyError> {
    if !a.same_space(v) {
        return Err(FamilyError::MixedSpaces);
    }
    let closure = generate_lattice(a);
    if let Some(&missing) = v.members().iter().find(|&&m| closure.level_of(m).is_none()) {
        return Err(FamilyError::NotInClosure(missing));
    }
    let mut current: Vec<PointSet> = v.members().to_vec();
    let mut descent = vec![current.clone()];
    loop {
        let top = current
            .iter()
            .map(|&m| closure.level_of(m).unwrap())
            .max()
            .unwrap_or(0);
        if top == 0 {
            break;
        }
        let mut next: HashSet<PointSet> = HashSet::new();
        for &m in &current {
            let p = closure.provenance(m).unwrap();
            if p.level == top {
                next.extend(p.support.iter().copied());
            } else {
                next.insert(m);
            }
        }
        current = next.into_iter().collect();
        current.sort_unstable();
        descent.push(current.clone());
    }
    let family = OpenFamily::from_open_sets(Arc::clone(a.space()), current);
    let closed_v = generate_lattice(v).into_result();
    let closed_w = generate_lattice(&family).into_result();
    let sandwich_holds =
        closed_v.is_subfamily_of(&closed_w) && closed_w.is_subfamily_of(closure.result());
    Ok(Absorption {
        family,
        descent,
        sandwich_holds,
    })
}
