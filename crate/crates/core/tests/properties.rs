mod common;

use std::sync::Arc;

use common::{
    classify, condition_c_star, continuous, family_bits, inter_closed, naive_closure, predense,
    subfamilies, Top,
};
use fintop_core::embed::c_star;
use fintop_core::family::{has_seq, lattice_closure};
use fintop_core::maps::BaseCheck;
use fintop_core::{
    generate_lattice, is_bang_embedded, is_completely_embedded, quotient, solve_game, FinSpace,
    OpenFamily, PointSet,
};
use proptest::prelude::*;

/// A T0 space from a random DAG on `n` points, relabelled by a shuffle.
fn arb_space() -> impl Strategy<Value = Arc<FinSpace>> {
    (1usize..=6)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(any::<bool>(), n * (n - 1) / 2),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, edges, labels)| {
            let mut reach = vec![vec![false; n]; n];
            let mut k = 0;
            for i in 0..n {
                reach[i][i] = true;
                for j in i + 1..n {
                    reach[i][j] = edges[k];
                    k += 1;
                }
            }
            for m in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        reach[i][j] |= reach[i][m] && reach[m][j];
                    }
                }
            }
            let nbhds = (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| reach[i][j])
                        .map(|j| labels[j])
                        .collect::<PointSet>()
                })
                .collect::<Vec<_>>();
            let mut by_label = vec![PointSet::EMPTY; n];
            for i in 0..n {
                by_label[labels[i]] = nbhds[i];
            }
            Arc::new(FinSpace::from_min_neighborhoods(by_label).unwrap())
        })
}

/// A space with a family of at most `max` of its opens.
fn arb_family(max: usize) -> impl Strategy<Value = OpenFamily> {
    arb_space().prop_flat_map(move |space| {
        let count = space.opens().len();
        prop::collection::vec(0..count, 1..=max).prop_map(move |picks| {
            let opens = space.opens();
            OpenFamily::new(Arc::clone(&space), picks.into_iter().map(|i| opens[i])).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_the_least_lattice_above(a in arb_family(5)) {
        let c = lattice_closure(&a);
        prop_assert_eq!(family_bits(&c), naive_closure(a.members()));
        prop_assert!(a.is_subfamily_of(&c) && c.is_lattice());
        prop_assert_eq!(&lattice_closure(&c), &c);
        let levels = generate_lattice(&a);
        prop_assert_eq!(levels.result(), &c);
    }

    #[test]
    fn closure_is_monotone(b in arb_family(6), keep in prop::collection::vec(any::<bool>(), 6)) {
        let kept = b.members().iter().zip(&keep).filter(|(_, &k)| k).map(|(&m, _)| m);
        let a = OpenFamily::new(Arc::clone(b.space()), kept).unwrap();
        prop_assert!(lattice_closure(&a).is_subfamily_of(&lattice_closure(&b)));
    }

    #[test]
    fn quotient_maps_are_continuous(p in arb_family(6)) {
        let r = quotient(&p);
        let (td, tq) = (Top::of(p.space()), Top::of(&r.quotient_space));
        prop_assert!(continuous(&td, &tq, r.q.assignment()));
        if p.covers_space() && p.is_inter_closed() {
            prop_assert_eq!(r.base_check, BaseCheck::Verified);
        }
    }

    #[test]
    fn map_hierarchy_and_classification(p in arb_family(6)) {
        let q = quotient(&lattice_closure(&p)).q;
        let c = q.classify();
        prop_assert!(!c.open || c.d_open);
        prop_assert!(!c.d_open || c.skeletal);
        let expected = classify(&Top::of(q.domain()), &Top::of(q.codomain()), q.assignment());
        prop_assert_eq!((c.open, c.d_open, c.skeletal), expected);
    }

    #[test]
    fn embedded_lattices_have_skeletal_quotients(p in arb_family(6)) {
        let a = lattice_closure(&p);
        if a.covers_space() && is_completely_embedded(&a).holds {
            prop_assert!(quotient(&a).q.is_skeletal());
        }
        if a.covers_space() && is_bang_embedded(&a).holds {
            prop_assert!(quotient(&a).q.is_d_open());
        }
    }

    #[test]
    fn seq_is_complement_closure(p in arb_family(6)) {
        let full = p.space().points();
        let literal = p.members().iter().all(|&w| p.contains(full - w));
        let report = has_seq(&p);
        prop_assert_eq!(report.holds, literal);
        prop_assert!(report.routes_agree());
    }

    #[test]
    fn bang_implies_complete_embedding(p in arb_family(6)) {
        prop_assert!(!is_bang_embedded(&p).holds || is_completely_embedded(&p).holds);
    }

    #[test]
    fn c_matches_c_star_on_inter_closed_families(p in arb_family(5)) {
        let closed = {
            let mut sets: Vec<u64> = family_bits(&p);
            loop {
                let before = sets.len();
                for i in 0..sets.len() {
                    for j in 0..sets.len() {
                        let m = sets[i] & sets[j];
                        if !sets.contains(&m) {
                            sets.push(m);
                        }
                    }
                }
                if sets.len() == before {
                    break sets;
                }
            }
        };
        prop_assert!(inter_closed(&closed));
        let q = OpenFamily::new(Arc::clone(p.space()), closed.iter().map(|&b| PointSet::from_bits(b))).unwrap();
        let v = c_star(&q).unwrap();
        prop_assert_eq!(v.holds(), is_completely_embedded(&q).holds);
        prop_assert!(v.converse);
        if q.len() <= 10 {
            prop_assert_eq!(v.holds(), condition_c_star(&Top::of(q.space()), &family_bits(&q)));
        }
    }

    #[test]
    fn dense_unions_are_predense(p in arb_family(5)) {
        let a = lattice_closure(&p);
        let bits = family_bits(&a);
        prop_assume!(bits.len() <= 10);
        let top = Top::of(a.space());
        for w in subfamilies(&bits) {
            if top.dense(w.iter().fold(0, |x, &y| x | y)) {
                prop_assert!(predense(&w, &bits));
            }
        }
    }

    #[test]
    fn game_rounds_ignore_labels(space in arb_space(), shift in 0usize..6) {
        let n = space.n();
        let perm: Vec<usize> = (0..n).map(|x| (x + shift) % n).collect();
        let moved = FinSpace::new(n, space.opens().iter().map(|o| o.map_points(&perm))).unwrap();
        prop_assert_eq!(solve_game(&space).rounds, solve_game(&Arc::new(moved)).rounds);
    }
}
