//! Brute-force oracles written from the definitions. They only read the
//! open-set lists of spaces and never call the library's algorithms.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use fintop_core::{FinSpace, OpenFamily, PointSet, SpaceMap};

pub fn ps(points: &[usize]) -> PointSet {
    points.iter().copied().collect()
}

pub fn bits(s: PointSet) -> u64 {
    s.bits()
}

/// A topology as raw bitmaps.
#[derive(Clone, Debug)]
pub struct Top {
    pub n: usize,
    pub full: u64,
    pub opens: Vec<u64>,
    lookup: HashSet<u64>,
}

impl Top {
    pub fn of(space: &FinSpace) -> Self {
        let opens: Vec<u64> = space.opens().iter().map(|o| o.bits()).collect();
        Top {
            n: space.n(),
            full: (1u64 << space.n()) - 1,
            lookup: opens.iter().copied().collect(),
            opens,
        }
    }

    pub fn is_open(&self, s: u64) -> bool {
        self.lookup.contains(&s)
    }

    pub fn interior(&self, s: u64) -> u64 {
        self.opens
            .iter()
            .filter(|&&o| o & !s == 0)
            .fold(0, |a, &o| a | o)
    }

    pub fn closure(&self, s: u64) -> u64 {
        self.full & !self.interior(self.full & !s)
    }

    pub fn dense(&self, s: u64) -> bool {
        self.closure(s) == self.full
    }

    pub fn nonempty_opens(&self) -> impl Iterator<Item = u64> + '_ {
        self.opens.iter().copied().filter(|&o| o != 0)
    }
}

/// Counts preorders (all topologies) and partial orders (T0 topologies)
/// on `n` labelled points by listing every relation.
pub fn count_orders(n: usize) -> (u64, u64) {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let (mut pre, mut partial) = (0, 0);
    for mask in 0u64..(1 << pairs.len()) {
        let mut rel = vec![vec![false; n]; n];
        for i in 0..n {
            rel[i][i] = true;
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            rel[i][j] = mask >> k & 1 == 1;
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(rel[i][j] && rel[j][k]) || rel[i][k])));
        if !transitive {
            continue;
        }
        pre += 1;
        if (0..n).all(|i| (0..n).all(|j| i == j || !(rel[i][j] && rel[j][i]))) {
            partial += 1;
        }
    }
    (pre, partial)
}

/// Repeats "add all pairwise unions and intersections" until nothing new
/// appears.
pub fn naive_closure(members: &[PointSet]) -> Vec<u64> {
    let mut set: HashSet<u64> = members.iter().map(|m| m.bits()).collect();
    loop {
        let items: Vec<u64> = set.iter().copied().collect();
        let before = set.len();
        for &a in &items {
            for &b in &items {
                set.insert(a | b);
                set.insert(a & b);
            }
        }
        if set.len() == before {
            let mut out: Vec<u64> = set.into_iter().collect();
            out.sort_unstable();
            return out;
        }
    }
}

pub fn family_bits(p: &OpenFamily) -> Vec<u64> {
    p.members().iter().map(|m| m.bits()).collect()
}

/// Predensity read literally from the definition.
pub fn predense(w: &[u64], p: &[u64]) -> bool {
    let nonempty: Vec<u64> = p.iter().copied().filter(|&x| x != 0).collect();
    nonempty.iter().all(|&big| {
        w.iter()
            .any(|&v| nonempty.iter().any(|&q| q & !(v & big) == 0))
    })
}

/// Condition (c) read literally.
pub fn condition_c(top: &Top, p: &[u64]) -> bool {
    let nonempty: Vec<u64> = p.iter().copied().filter(|&x| x != 0).collect();
    top.nonempty_opens().all(|v| {
        nonempty.iter().any(|&w| {
            nonempty
                .iter()
                .filter(|&&u| u & !w == 0)
                .all(|&u| u & v != 0)
        })
    })
}

/// Condition (c*) by listing every subfamily.
pub fn condition_c_star(top: &Top, p: &[u64]) -> bool {
    subfamilies(p).all(|w| predense(&w, p) == top.dense(w.iter().fold(0, |a, &b| a | b)))
}

pub fn subfamilies(p: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    (0u64..(1 << p.len())).map(move |mask| {
        (0..p.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| p[i])
            .collect()
    })
}

/// `⊂_!` read literally over every subfamily.
pub fn condition_bang(top: &Top, p: &[u64]) -> bool {
    subfamilies(p).all(|s| {
        let u = s.iter().fold(0, |a, &b| a | b);
        let outside = top.full & !top.closure(u);
        (0..top.n)
            .filter(|&x| outside >> x & 1 == 1)
            .all(|x| p.iter().any(|&w| w >> x & 1 == 1 && w & u == 0))
    })
}

pub fn image(f: &[usize], s: u64) -> u64 {
    (0..f.len())
        .filter(|&x| s >> x & 1 == 1)
        .fold(0, |a, x| a | 1 << f[x])
}

pub fn preimage(f: &[usize], s: u64) -> u64 {
    (0..f.len())
        .filter(|&x| s >> f[x] & 1 == 1)
        .fold(0, |a, x| a | 1 << x)
}

pub fn continuous(dom: &Top, cod: &Top, f: &[usize]) -> bool {
    cod.opens.iter().all(|&o| dom.is_open(preimage(f, o)))
}

/// (open, d-open, skeletal) straight from the definitions.
pub fn classify(dom: &Top, cod: &Top, f: &[usize]) -> (bool, bool, bool) {
    let mut open = true;
    let mut d_open = true;
    let mut skeletal = true;
    for &u in &dom.opens {
        let fu = image(f, u);
        open &= cod.is_open(fu);
        d_open &= fu & !cod.interior(cod.closure(fu)) == 0;
        if u != 0 {
            skeletal &= cod.interior(cod.closure(fu)) != 0;
        }
    }
    (open, d_open, skeletal)
}

/// Every assignment `n → k`.
pub fn assignments(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|a: Vec<usize>| {
                (0..k).map(move |j| {
                    let mut b = a.clone();
                    b.push(j);
                    b
                })
            })
            .collect();
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Subspace topology of `image` in `top`, as bitmaps over its points.
fn subspace(top: &Top, image: u64) -> (Vec<usize>, HashSet<u64>) {
    let points: Vec<usize> = (0..top.n).filter(|&x| image >> x & 1 == 1).collect();
    let compress = |s: u64| {
        points
            .iter()
            .enumerate()
            .filter(|(_, &x)| s >> x & 1 == 1)
            .fold(0u64, |a, (i, _)| a | 1 << i)
    };
    let opens = top.opens.iter().map(|&o| compress(o & image)).collect();
    (points, opens)
}

/// `f ≅ g` (maps from one domain): some homeomorphism `h` between the
/// images has `f = h ∘ g`. Tries every bijection.
pub fn maps_homeomorphic(f: &SpaceMap, g: &SpaceMap) -> bool {
    let (tf, tg) = (Top::of(f.codomain()), Top::of(g.codomain()));
    let (imf, img) = (f.image().bits(), g.image().bits());
    let (pf, of) = subspace(&tf, imf);
    let (pg, og) = subspace(&tg, img);
    if pf.len() != pg.len() || of.len() != og.len() {
        return false;
    }
    let k = pf.len();
    permutations(k).into_iter().any(|h| {
        // h sends the i-th point of g's image to the h[i]-th of f's
        let commutes = (0..f.domain().n()).all(|x| {
            let i = pg.iter().position(|&y| y == g.apply(x)).unwrap();
            pf[h[i]] == f.apply(x)
        });
        commutes
            && og.iter().all(|&o| {
                let moved = (0..k)
                    .filter(|&i| o >> i & 1 == 1)
                    .fold(0u64, |a, i| a | 1 << h[i]);
                of.contains(&moved)
            })
    })
}

/// Rounds I needs to force a dense union of II's answers, by plain
/// minimax over unions (not closures), or `None` beyond `limit`.
pub fn game_rounds(top: &Top, limit: usize) -> Option<usize> {
    fn wins(top: &Top, union: u64, r: usize, memo: &mut HashMap<(u64, usize), bool>) -> bool {
        if top.dense(union) {
            return true;
        }
        if r == 0 {
            return false;
        }
        if let Some(&v) = memo.get(&(union, r)) {
            return v;
        }
        let opens: Vec<u64> = top.nonempty_opens().collect();
        let v = opens.iter().any(|&a| {
            opens
                .iter()
                .filter(|&&b| b & !a == 0)
                .all(|&b| wins(top, union | b, r - 1, memo))
        });
        memo.insert((union, r), v);
        v
    }
    let mut memo = HashMap::new();
    (0..=limit).find(|&r| wins(top, 0, r, &mut memo))
}

pub fn family(space: &Arc<FinSpace>, sets: &[&[usize]]) -> OpenFamily {
    OpenFamily::new(Arc::clone(space), sets.iter().map(|s| ps(s))).unwrap()
}

/// Every nonempty family of opens, as sorted member lists.
pub fn all_families(space: &Arc<FinSpace>) -> Vec<OpenFamily> {
    let opens = space.opens().to_vec();
    (1u64..(1 << opens.len()))
        .map(|mask| {
            let members = (0..opens.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| opens[i]);
            OpenFamily::new(Arc::clone(space), members).unwrap()
        })
        .collect()
}

pub fn inter_closed(p: &[u64]) -> bool {
    p.iter().all(|&a| p.iter().all(|&b| p.contains(&(a & b))))
}

pub fn union_closed(p: &[u64]) -> bool {
    p.iter().all(|&a| p.iter().all(|&b| p.contains(&(a | b))))
}
