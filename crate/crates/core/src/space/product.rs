use std::sync::Arc;

use super::{FinSpace, PointSet, SpaceError, MAX_POINTS};
use crate::maps::SpaceMap;

/// Default ceiling on the number of points a constructed product may have.
pub const DEFAULT_POINT_BUDGET: usize = 12;

/// A finite product with its canonical projections.
///
/// Points are numbered in row-major order: the last factor varies fastest.
#[derive(Debug, Clone)]
pub struct Product {
    pub space: Arc<FinSpace>,
    pub factors: Vec<Arc<FinSpace>>,
    pub projections: Vec<SpaceMap>,
    strides: Vec<usize>,
}

impl Product {
    pub fn coordinates(&self, point: usize) -> Vec<usize> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(f, &stride)| (point / stride) % f.n())
            .collect()
    }

    pub fn point_of(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }
}

/// The product space of `spaces`. Its opens are the unions of boxes; in a
/// finite product the minimal neighbourhood of a point is the box of the
/// coordinates' minimal neighbourhoods.
pub fn product(spaces: &[Arc<FinSpace>], budget: usize) -> Result<Product, SpaceError> {
    if spaces.is_empty() {
        return Err(SpaceError::EmptySpace);
    }
    let points: u128 = spaces.iter().map(|s| s.n() as u128).product();
    if points > budget.min(MAX_POINTS) as u128 {
        return Err(SpaceError::SizeOverflow { points, budget });
    }
    let total = points as usize;
    let mut strides = vec![1; spaces.len()];
    for i in (0..spaces.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * spaces[i + 1].n();
    }
    let coords = |p: usize| -> Vec<usize> {
        spaces
            .iter()
            .zip(&strides)
            .map(|(f, &s)| (p / s) % f.n())
            .collect()
    };
    let nbhds = (0..total)
        .map(|p| {
            let cp = coords(p);
            (0..total)
                .filter(|&r| {
                    coords(r)
                        .iter()
                        .zip(&cp)
                        .zip(spaces)
                        .all(|((&rc, &pc), f)| f.min_neighborhood(pc).contains(rc))
                })
                .collect::<PointSet>()
        })
        .collect();
    let space = Arc::new(FinSpace::from_trusted_neighborhoods(nbhds));
    let projections = spaces
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let assignment = (0..total).map(|p| coords(p)[i]).collect();
            SpaceMap::new(Arc::clone(&space), Arc::clone(f), assignment)
                .expect("projections are continuous")
        })
        .collect();
    Ok(Product {
        space,
        factors: spaces.to_vec(),
        projections,
        strides,
    })
}
