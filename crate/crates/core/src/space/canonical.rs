use std::fmt;
use std::str::FromStr;

use super::{FinSpace, PointSet, SpaceError};

pub const CANONICAL_MAX_POINTS: usize = 9;

/// Homeomorphism-invariant name of a space: the lexicographically least
/// list of minimal neighbourhoods over all relabellings that order points
/// by their degree profile.
///
/// Displays as `n:hex.hex...`, one hex bitmap per point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    nbhds: Vec<u64>,
}

impl CanonicalForm {
    pub fn of(space: &FinSpace) -> Result<Self, SpaceError> {
        let n = space.n();
        if n > CANONICAL_MAX_POINTS {
            return Err(SpaceError::CanonicalFormTooLarge(n));
        }
        let profile = space.degree_profile();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| profile[x]);
        // positions p..q share a profile value; only permute inside such blocks
        let mut blocks = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || profile[order[i]] != profile[order[start]] {
                blocks.push((start, i));
                start = i;
            }
        }
        let mut best: Option<Vec<u64>> = None;
        let mut slots = order.clone();
        permute_blocks(&mut slots, &blocks, 0, &mut |slots| {
            // slots[new] = old
            let mut perm = vec![0; n];
            for (new, &old) in slots.iter().enumerate() {
                perm[old] = new;
            }
            let encoded: Vec<u64> = slots
                .iter()
                .map(|&old| space.min_neighborhood(old).map_points(&perm).bits())
                .collect();
            if best.as_ref().is_none_or(|b| encoded < *b) {
                best = Some(encoded);
            }
        });
        Ok(CanonicalForm {
            n,
            nbhds: best.unwrap_or_default(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The canonical representative itself.
    pub fn to_space(&self) -> FinSpace {
        FinSpace::from_trusted_neighborhoods(
            self.nbhds.iter().map(|&b| PointSet::from_bits(b)).collect(),
        )
    }
}

fn permute_blocks(
    slots: &mut [usize],
    blocks: &[(usize, usize)],
    block: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if block == blocks.len() {
        visit(slots);
        return;
    }
    let (lo, hi) = blocks[block];
    heap_permute(slots, lo, hi - lo, &mut |slots| {
        let mut copy = slots.to_vec();
        permute_blocks(&mut copy, blocks, block + 1, visit);
    });
}

fn heap_permute(slots: &mut [usize], lo: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        visit(slots);
        return;
    }
    for i in 0..k {
        heap_permute(slots, lo, k - 1, visit);
        let j = if k.is_multiple_of(2) { lo + i } else { lo };
        if i + 1 < k {
            slots.swap(j, lo + k - 1);
        }
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for (i, b) in self.nbhds.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{b:x}")?;
        }
        Ok(())
    }
}

impl FromStr for CanonicalForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (n, rest) = s.split_once(':').ok_or("missing ':'")?;
        let n: usize = n.parse().map_err(|e| format!("bad point count: {e}"))?;
        let nbhds = rest
            .split('.')
            .map(|h| u64::from_str_radix(h, 16).map_err(|e| format!("bad bitmap {h:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if nbhds.len() != n {
            return Err(format!("expected {n} bitmaps, got {}", nbhds.len()));
        }
        let form = CanonicalForm { n, nbhds };
        FinSpace::from_min_neighborhoods(
            form.nbhds.iter().map(|&b| PointSet::from_bits(b)).collect(),
        )
        .map_err(|e| e.to_string())?;
        Ok(form)
    }
}
