//! The Seq property.
//!
//! A family `P` has Seq when every `W ∈ P` is the union of a chain
//! `U_0 ⊆ X∖V_0 ⊆ U_1 ⊆ X∖V_1 ⊆ …` with all `U_k, V_k ∈ P`. Over a finite
//! space such a chain is eventually constant, so the tail forces
//! `W = X∖V` for some `V ∈ P`. [`has_seq`] evaluates that closed form and,
//! independently, searches for explicit chains; the two verdicts are
//! reported side by side.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::{generate_lattice, FamilyError, OpenFamily};
use crate::space::PointSet;

/// A finite chain standing for the eventually constant sequence obtained
/// by repeating its last pair: `u_k ⊆ X∖v_k ⊆ u_{k+1}`, with
/// `u_{L} := u_{L-1}`, and `u_{L-1} = target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqWitness {
    pub target: PointSet,
    pub u_chain: Vec<PointSet>,
    pub v_chain: Vec<PointSet>,
}

impl SeqWitness {
    /// Checks the chain conditions and that every chain member is in `p`.
    pub fn is_valid_for(&self, p: &OpenFamily) -> bool {
        let full = p.space().points();
        let len = self.u_chain.len();
        if len == 0 || self.v_chain.len() != len {
            return false;
        }
        let union = self.u_chain.iter().fold(PointSet::EMPTY, |acc, &u| acc | u);
        if union != self.target || self.u_chain[len - 1] != self.target {
            return false;
        }
        let members_ok = self
            .u_chain
            .iter()
            .chain(&self.v_chain)
            .all(|&s| p.contains(s));
        members_ok
            && (0..len).all(|k| {
                let gap = full - self.v_chain[k];
                let next = self.u_chain[(k + 1).min(len - 1)];
                self.u_chain[k].is_subset(gap) && gap.is_subset(next)
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqVerdict {
    pub target: PointSet,
    /// `X∖W ∈ P`.
    pub closed_form: bool,
    /// A chain found by bounded search, if any.
    pub witness: Option<SeqWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqReport {
    pub holds: bool,
    pub verdicts: Vec<SeqVerdict>,
}

impl SeqReport {
    /// Whether the closed form and the chain search agree on every member.
    pub fn routes_agree(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| v.closed_form == v.witness.is_some())
    }
}

/// Seq for every member of `p`, with a witness or refusal per member.
pub fn has_seq(p: &OpenFamily) -> SeqReport {
    let full = p.space().points();
    let verdicts: Vec<SeqVerdict> = p
        .members()
        .iter()
        .map(|&w| SeqVerdict {
            target: w,
            closed_form: p.contains(full - w),
            witness: search_seq_witness(p, w, p.len()),
        })
        .collect();
    SeqReport {
        holds: verdicts.iter().all(|v| v.closed_form),
        verdicts,
    }
}

/// Breadth-first search over chains `u_0, u_1, …` of members of `p` below
/// `target`, of length at most `max_len`, ending in `target` with a valid
/// tail pair.
pub fn search_seq_witness(p: &OpenFamily, target: PointSet, max_len: usize) -> Option<SeqWitness> {
    if max_len == 0 || !p.contains(target) {
        return None;
    }
    let full = p.space().points();
    let below: Vec<PointSet> = p
        .members()
        .iter()
        .copied()
        .filter(|u| u.is_subset(target))
        .collect();
    let closes = |u: PointSet| -> Option<PointSet> {
        p.members().iter().copied().find(|&v| {
            let gap = full - v;
            u.is_subset(gap) && gap.is_subset(u)
        })
    };
    // parent[u] = (previous u, the v linking them)
    let mut parent: HashMap<PointSet, Option<(PointSet, PointSet)>> = HashMap::new();
    let mut depth: HashMap<PointSet, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &u in &below {
        parent.insert(u, None);
        depth.insert(u, 1);
        queue.push_back(u);
    }
    while let Some(u) = queue.pop_front() {
        let d = depth[&u];
        if u == target {
            if let Some(tail) = closes(u) {
                let mut u_chain = vec![u];
                let mut v_chain = vec![tail];
                let mut cur = u;
                while let Some((prev, link)) = parent[&cur] {
                    u_chain.push(prev);
                    v_chain.push(link);
                    cur = prev;
                }
                u_chain.reverse();
                v_chain.reverse();
                return Some(SeqWitness {
                    target,
                    u_chain,
                    v_chain,
                });
            }
        }
        if d == max_len {
            continue;
        }
        for &v in p.members() {
            let gap = full - v;
            if !u.is_subset(gap) {
                continue;
            }
            for &next in &below {
                if gap.is_subset(next) && !parent.contains_key(&next) {
                    parent.insert(next, Some((u, v)));
                    depth.insert(next, d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

/// The smallest family containing `a` closed under pairwise union,
/// intersection and complement. Fails on the first generated set whose
/// complement is not open.
pub fn seq_extend(a: &OpenFamily) -> Result<OpenFamily, FamilyError> {
    let space = a.space();
    let full = space.points();
    let mut items: Vec<PointSet> = Vec::new();
    let mut seen: HashSet<PointSet> = HashSet::new();
    for &m in a.members() {
        if seen.insert(m) {
            items.push(m);
        }
    }
    let mut i = 0;
    while i < items.len() {
        let x = items[i];
        let complement = full - x;
        if !space.is_open(complement) {
            return Err(FamilyError::NotSeqExtendable(x));
        }
        if seen.insert(complement) {
            items.push(complement);
        }
        for j in 0..i {
            let y = items[j];
            for z in [x | y, x & y] {
                if seen.insert(z) {
                    items.push(z);
                }
            }
        }
        i += 1;
    }
    Ok(OpenFamily::from_open_sets(Arc::clone(space), items))
}

/// Seq of `⟨∪ families⟩`.
pub fn seq_preserved_by_join(families: &[OpenFamily]) -> Result<bool, FamilyError> {
    let union = OpenFamily::merge(families)?;
    Ok(generate_lattice(&union).result().has_seq())
}
