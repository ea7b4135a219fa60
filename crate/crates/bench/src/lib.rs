//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use fintop_core::{FinSpace, OpenFamily, PointSet, SpaceCatalog};

/// The homeomorphism classes on exactly `n` points.
pub fn spaces(n: usize) -> Vec<Arc<FinSpace>> {
    SpaceCatalog::new(n)
        .expect("small n")
        .up_to_homeomorphism(n)
        .expect("small n")
        .iter()
        .cloned()
        .map(Arc::new)
        .collect()
}

/// The singletons of the discrete space on `n` points, whose closure is
/// the whole open lattice.
pub fn singletons(n: usize) -> OpenFamily {
    let space = Arc::new(FinSpace::discrete(n));
    OpenFamily::new(space, (0..n).map(|x| PointSet::from_bits(1 << x)))
        .expect("singletons are open")
}

/// Two covering lattices on the discrete space, one splitting the points
/// into halves and one into even and odd points.
pub fn crossing_lattices(n: usize) -> (OpenFamily, OpenFamily) {
    let space = Arc::new(FinSpace::discrete(n));
    let full = space.points();
    let split = |a: PointSet| {
        OpenFamily::new(Arc::clone(&space), [PointSet::EMPTY, a, full - a, full])
            .expect("opens of a discrete space")
    };
    (
        split((0..n / 2).collect()),
        split((0..n).step_by(2).collect()),
    )
}
