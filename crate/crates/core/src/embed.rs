//! Predensity and the embedding relations `⊂_c` and `⊂_!`.
//!
//! The open lattice of the space stands in for the co-zero sets, and `∅` is
//! never a quantified member: predensity and condition (c) range over
//! nonempty sets only.

use std::collections::HashMap;

use thiserror::Error;

use crate::family::OpenFamily;
use crate::space::PointSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("{0} is not a member of the ambient family")]
    NotSubfamily(PointSet),
    #[error("families live on different spaces")]
    MixedSpaces,
    #[error("the family is not closed under intersections")]
    NotInterClosed,
}

/// `w` is predense in `p`: every nonempty `P ∈ p` has `V ∈ w` and a
/// nonempty `Q ∈ p` with `Q ⊆ V ∩ P`.
pub fn is_predense(w: &OpenFamily, p: &OpenFamily) -> Result<bool, EmbedError> {
    if !w.same_space(p) {
        return Err(EmbedError::MixedSpaces);
    }
    if let Some(&m) = w.members().iter().find(|&&m| !p.contains(m)) {
        return Err(EmbedError::NotSubfamily(m));
    }
    Ok(predense_unchecked(w.members(), p))
}

pub(crate) fn predense_unchecked(w: &[PointSet], p: &OpenFamily) -> bool {
    p.nonempty_members().all(|big| {
        w.iter().any(|&v| {
            let meet = v & big;
            !meet.is_empty() && p.nonempty_members().any(|q| q.is_subset(meet))
        })
    })
}

/// Predensity in the full open lattice, which amounts to `∪w` being dense.
pub fn predense_in_lattice(w: &OpenFamily) -> bool {
    w.space().is_dense(w.union_of_members())
}

/// The outcome of condition (c), with the first nonempty open `V` that no
/// member guards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingVerdict {
    pub holds: bool,
    pub witness: Option<PointSet>,
}

/// Condition (c): for each nonempty open `V` there is a nonempty `W ∈ p`
/// such that every nonempty `U ∈ p` with `U ⊆ W` meets `V`.
pub fn is_completely_embedded(p: &OpenFamily) -> EmbeddingVerdict {
    let witness = p
        .space()
        .nonempty_opens()
        .find(|&v| guards(p, v).next().is_none());
    EmbeddingVerdict {
        holds: witness.is_none(),
        witness,
    }
}

/// The members `W` that witness condition (c) for the open set `v`.
pub fn guards(p: &OpenFamily, v: PointSet) -> impl Iterator<Item = PointSet> + '_ {
    p.nonempty_members().filter(move |&w| {
        p.nonempty_members()
            .filter(|u| u.is_subset(w))
            .all(|u| u.meets(v))
    })
}

/// Which halves of condition (c*) hold for an ∩-closed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CStarVerdict {
    /// Predense in `p` implies predense in the open lattice.
    pub transfer: bool,
    /// Predense in the open lattice implies predense in `p`.
    pub converse: bool,
}

impl CStarVerdict {
    pub fn holds(&self) -> bool {
        self.transfer && self.converse
    }
}

/// Condition (c*) over every subfamily of `p`, decided without listing
/// the subfamilies.
///
/// A subfamily is predense in `p` iff it meets every
/// `G_P = {V ∈ p : some nonempty Q ∈ p lies in V ∩ P}`, and predense in
/// the lattice iff it meets every `H_O = {V ∈ p : V ∩ O ≠ ∅}`. The first
/// condition implies the second for all subfamilies iff each `H_O`
/// contains some `G_P`, since otherwise `p ∖ H_O` separates them; the
/// converse is symmetric.
pub fn c_star(p: &OpenFamily) -> Result<CStarVerdict, EmbedError> {
    if !p.is_inter_closed() {
        return Err(EmbedError::NotInterClosed);
    }
    Ok(c_star_unchecked(p))
}

pub(crate) fn c_star_unchecked(p: &OpenFamily) -> CStarVerdict {
    let members = p.members();
    let as_mask = |pred: &dyn Fn(PointSet) -> bool| -> Vec<bool> {
        members.iter().map(|&m| pred(m)).collect()
    };
    let g: Vec<Vec<bool>> = p
        .nonempty_members()
        .map(|big| {
            as_mask(&|v| {
                let meet = v & big;
                !meet.is_empty() && p.nonempty_members().any(|q| q.is_subset(meet))
            })
        })
        .collect();
    let h: Vec<Vec<bool>> = p
        .space()
        .nonempty_opens()
        .map(|o| as_mask(&|v| v.meets(o)))
        .collect();
    let within = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(&x, &y)| !x || y);
    CStarVerdict {
        transfer: h.iter().all(|ho| g.iter().any(|gp| within(gp, ho))),
        converse: g.iter().all(|gp| h.iter().any(|ho| within(ho, gp))),
    }
}

pub fn c_star_holds(p: &OpenFamily) -> Result<bool, EmbedError> {
    c_star(p).map(|v| v.holds())
}

/// A failed instance of `⊂_!`: a subfamily and a point outside the closure
/// of its union that no member separates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BangWitness {
    pub subfamily: Vec<PointSet>,
    pub point: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BangVerdict {
    pub holds: bool,
    pub witness: Option<BangWitness>,
}

/// `p ⊂_!`: for every `S ⊆ p` and `x ∉ cl(∪S)` some `W ∈ p` contains `x`
/// and misses `∪S`.
///
/// Only `∪S` matters, so the check runs over the distinct unions of
/// subfamilies, the empty subfamily included, each with one subfamily
/// realising it.
pub fn is_bang_embedded(p: &OpenFamily) -> BangVerdict {
    let space = p.space();
    for (union, subfamily) in subfamily_unions(p) {
        let outside = space.points() - space.closure(union);
        for x in outside.iter() {
            let separated = p
                .members()
                .iter()
                .any(|&w| w.contains(x) && !w.meets(union));
            if !separated {
                return BangVerdict {
                    holds: false,
                    witness: Some(BangWitness {
                        subfamily,
                        point: x,
                    }),
                };
            }
        }
    }
    BangVerdict {
        holds: true,
        witness: None,
    }
}

/// Every union of a subfamily of `p`, with a smallest-first support.
fn subfamily_unions(p: &OpenFamily) -> Vec<(PointSet, Vec<PointSet>)> {
    let mut support: HashMap<PointSet, Vec<PointSet>> = HashMap::new();
    support.insert(PointSet::EMPTY, Vec::new());
    let mut order = vec![PointSet::EMPTY];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &m in p.members() {
            let next = u | m;
            if !support.contains_key(&next) {
                let mut s = support[&u].clone();
                s.push(m);
                support.insert(next, s);
                order.push(next);
            }
        }
        i += 1;
    }
    order
        .into_iter()
        .map(|u| {
            let s = support.remove(&u).unwrap();
            (u, s)
        })
        .collect()
}
