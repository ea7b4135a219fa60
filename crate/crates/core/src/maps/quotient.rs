use std::sync::Arc;

use super::SpaceMap;
use crate::family::OpenFamily;
use crate::space::{FinSpace, PointSet};

/// Whether the quotient satisfied the continuity-and-base conclusions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseCheck {
    /// Hypotheses held and both conclusions were confirmed.
    Verified,
    /// The family does not cover the space or is not ∩-closed; the
    /// quotient was built but nothing is asserted about it.
    HypothesesUnmet { covers: bool, inter_closed: bool },
    /// Hypotheses held but a conclusion failed.
    Violated(String),
}

/// `X/P` together with `q_P`.
#[derive(Debug, Clone)]
pub struct QuotientResult {
    pub family: OpenFamily,
    /// `[x]_P`, ordered by least point.
    pub classes: Vec<PointSet>,
    pub class_of: Vec<usize>,
    pub quotient_space: Arc<FinSpace>,
    pub q: SpaceMap,
    pub base_check: BaseCheck,
}

impl QuotientResult {
    /// `{q[V] : V ∈ P}`.
    pub fn base(&self) -> Vec<PointSet> {
        let mut base: Vec<PointSet> = self
            .family
            .members()
            .iter()
            .map(|&v| v.map_points(&self.class_of))
            .collect();
        base.sort_unstable();
        base.dedup();
        base
    }
}

/// Builds `X/P`: points are the classes of "belongs to exactly the same
/// members of `P`", and the topology is generated by `{q[V] : V ∈ P}`.
pub fn quotient(p: &OpenFamily) -> QuotientResult {
    let space = p.space();
    let classes = refine(space.points(), p.members());
    let mut class_of = vec![0; space.n()];
    for (i, c) in classes.iter().enumerate() {
        for x in c.iter() {
            class_of[x] = i;
        }
    }
    let images: Vec<PointSet> = p
        .members()
        .iter()
        .map(|&v| v.map_points(&class_of))
        .collect();
    let k = classes.len();
    let full = PointSet::full(k);
    // the generated topology has U_c = ∩{q[V] : c ∈ q[V]}
    let nbhds: Vec<PointSet> = (0..k)
        .map(|c| {
            images
                .iter()
                .filter(|b| b.contains(c))
                .fold(full, |acc, &b| acc & b)
        })
        .collect();
    let quotient_space = Arc::new(FinSpace::from_trusted_neighborhoods(nbhds));
    let base_check = check_conclusions(p, &class_of, &images, &quotient_space);
    // every member is a union of classes, so q⁻¹(q[V]) = V
    let q = SpaceMap::new(
        Arc::clone(space),
        Arc::clone(&quotient_space),
        class_of.clone(),
    )
    .expect("q is continuous for the generated topology");
    QuotientResult {
        family: p.clone(),
        classes,
        class_of,
        quotient_space,
        q,
        base_check,
    }
}

/// Splits `points` by membership in each set in turn.
fn refine(points: PointSet, sets: &[PointSet]) -> Vec<PointSet> {
    let mut blocks = vec![points];
    for &s in sets {
        blocks = blocks
            .into_iter()
            .flat_map(|b| [b & s, b - s])
            .filter(|b| !b.is_empty())
            .collect();
    }
    blocks.sort_unstable_by_key(|b| b.min_point());
    blocks
}

fn check_conclusions(
    p: &OpenFamily,
    class_of: &[usize],
    images: &[PointSet],
    quotient_space: &FinSpace,
) -> BaseCheck {
    let covers = p.covers_space();
    let inter_closed = p.is_inter_closed();
    if !(covers && inter_closed) {
        return BaseCheck::HypothesesUnmet {
            covers,
            inter_closed,
        };
    }
    let space = p.space();
    for &o in quotient_space.opens() {
        let pre: PointSet = space
            .points()
            .iter()
            .filter(|&x| o.contains(class_of[x]))
            .collect();
        if !space.is_open(pre) {
            return BaseCheck::Violated(format!("q is not continuous: preimage of {o} is {pre}"));
        }
    }
    // in a finite space a family is a base iff it contains every minimal
    // neighbourhood
    for c in 0..quotient_space.n() {
        let u = quotient_space.min_neighborhood(c);
        if !images.contains(&u) {
            return BaseCheck::Violated(format!(
                "{{q[V]}} is not a base: the neighbourhood {u} of class {c} is not an image"
            ));
        }
    }
    BaseCheck::Verified
}
