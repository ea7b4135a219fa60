use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::{MapError, SpaceMap};
use crate::family::same_space;
use crate::space::{FinSpace, PointSet};

/// A witness for `φ ≺ g`: `h: φ[X] → g[X]` with `g = h ∘ φ`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub h: SpaceMap,
    /// `φ[g⁻¹(U)] = h⁻¹(U)` for every open `U` of `g[X]`.
    pub preimage_transfer: bool,
}

/// Decides `φ ≺ g`. The factor `h` is forced on the image of `φ` by
/// `h(φ(x)) = g(x)`, so the answer is whether that assignment is well
/// defined and continuous between the image subspaces.
pub fn factors_through(g: &SpaceMap, phi: &SpaceMap) -> Result<Option<Factorization>, MapError> {
    if !same_space(g.domain(), phi.domain()) {
        return Err(MapError::DomainMismatch);
    }
    let gc = g.corestrict();
    let pc = phi.corestrict();
    let mut h_assign = vec![usize::MAX; pc.map.codomain().n()];
    for x in 0..g.domain().n() {
        let a = pc.map.apply(x);
        let b = gc.map.apply(x);
        if h_assign[a] == usize::MAX {
            h_assign[a] = b;
        } else if h_assign[a] != b {
            return Ok(None);
        }
    }
    let h = match SpaceMap::new(
        Arc::clone(pc.map.codomain()),
        Arc::clone(gc.map.codomain()),
        h_assign,
    ) {
        Ok(h) => h,
        Err(MapError::NotContinuous { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let preimage_transfer = gc
        .map
        .codomain()
        .opens()
        .iter()
        .all(|&u| pc.map.image_of(gc.map.preimage(u)) == h.preimage(u));
    Ok(Some(Factorization {
        h,
        preimage_transfer,
    }))
}

/// `△{f_i}` corestricted to its image.
#[derive(Debug, Clone)]
pub struct DiagonalMap {
    pub map: SpaceMap,
    /// The product coordinates of each image point.
    pub tuples: Vec<Vec<usize>>,
}

/// The diagonal `x ↦ (f_1(x), …, f_k(x))` onto its image, a subspace of
/// the product of the codomains.
///
/// The image's topology is read off directly: the minimal neighbourhood
/// of a tuple in the product is the box of its coordinates' minimal
/// neighbourhoods, and a subspace keeps the traces of those boxes. The
/// product itself is never built, so there is no point budget here.
pub fn diagonal(maps: &[SpaceMap]) -> Result<DiagonalMap, MapError> {
    let first = maps.first().ok_or(MapError::EmptyMapList)?;
    if maps.iter().any(|m| !same_space(m.domain(), first.domain())) {
        return Err(MapError::DomainMismatch);
    }
    let domain = first.domain();
    let tuple = |x: usize| -> Vec<usize> { maps.iter().map(|m| m.apply(x)).collect() };
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for x in 0..domain.n() {
        index.entry(tuple(x)).or_insert(0);
    }
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    let tuples: Vec<Vec<usize>> = index.keys().cloned().collect();
    let nbhds = tuples
        .iter()
        .map(|t| {
            tuples
                .iter()
                .enumerate()
                .filter(|(_, s)| {
                    maps.iter()
                        .zip(t.iter().zip(s.iter()))
                        .all(|(m, (&ti, &si))| m.codomain().min_neighborhood(ti).contains(si))
                })
                .map(|(j, _)| j)
                .collect::<PointSet>()
        })
        .collect();
    let image = Arc::new(FinSpace::from_trusted_neighborhoods(nbhds));
    let assignment = (0..domain.n()).map(|x| index[&tuple(x)]).collect();
    let map = SpaceMap::new(Arc::clone(domain), image, assignment)
        .expect("a diagonal of continuous maps is continuous");
    Ok(DiagonalMap { map, tuples })
}

/// Looks for a homeomorphism `h: g[X] → f[X]` with `f = h ∘ g`.
///
/// Any such `h` must send `g(x)` to `f(x)`, so there is at most one
/// candidate. It exists iff `f` and `g` have the same fibers, and it is a
/// homeomorphism iff `f⁻¹(U_{f(x)}) = g⁻¹(U_{g(x)})` for every `x`.
pub fn maps_homeomorphic(f: &SpaceMap, g: &SpaceMap) -> Result<Option<SpaceMap>, MapError> {
    if !same_space(f.domain(), g.domain()) {
        return Err(MapError::DomainMismatch);
    }
    let n = f.domain().n();
    let fc = f.corestrict();
    let gc = g.corestrict();
    if fc.points.len() != gc.points.len() {
        return Ok(None);
    }
    let mut h = vec![usize::MAX; gc.points.len()];
    for x in 0..n {
        let a = gc.map.apply(x);
        let b = fc.map.apply(x);
        if h[a] == usize::MAX {
            h[a] = b;
        } else if h[a] != b {
            return Ok(None);
        }
    }
    let mut hit = PointSet::EMPTY;
    for &b in &h {
        if hit.contains(b) {
            return Ok(None);
        }
        hit.insert(b);
    }
    if f.pulled_neighborhoods() != g.pulled_neighborhoods() {
        return Ok(None);
    }
    Ok(Some(SpaceMap {
        domain: Arc::clone(gc.map.codomain()),
        codomain: Arc::clone(fc.map.codomain()),
        assignment: h,
        class: OnceLock::new(),
    }))
}
