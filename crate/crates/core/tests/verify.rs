mod common;

use std::sync::Arc;

use common::family;
use fintop_core::verify::{
    check_l1, check_l2, club_from_lattice, lattice_from_club, test_maps, verify_club,
    ClubCandidate, ClubKind, MapKind, MapLattice, SeqGrade, Universe, VerifyError, WeightClause,
};
use fintop_core::verify::{Checkers, Mutation, THEOREMS};
use fintop_core::{quotient, theorem_suite, FinSpace, OpenFamily, SpaceMap, SuiteConfig, Verdict};

#[test]
fn l1_examples() {
    let d = Arc::new(FinSpace::discrete(2));
    let test = test_maps(&d);
    let id = MapLattice::new(
        d.clone(),
        vec![SpaceMap::identity(d.clone())],
        MapKind::Skeletal,
    )
    .unwrap();
    assert!(check_l1(&id, &test, WeightClause::Vacuous).unwrap().holds);
    let one = Arc::new(FinSpace::discrete(1));
    let constant = MapLattice::new(
        d.clone(),
        vec![SpaceMap::constant(d.clone(), one, 0).unwrap()],
        MapKind::Skeletal,
    )
    .unwrap();
    let v = check_l1(&constant, &test, WeightClause::Vacuous).unwrap();
    assert!(!v.holds);
    assert_eq!(test[v.counterexample.unwrap()].image().len(), 2);
    // the cardinality surrogate refuses the identity for the constant test map
    assert!(
        !check_l1(&id, &test, WeightClause::Cardinality)
            .unwrap()
            .holds
    );
}

#[test]
fn l2_examples() {
    let d = Arc::new(FinSpace::discrete(3));
    let id = MapLattice::new(
        d.clone(),
        vec![SpaceMap::identity(d.clone())],
        MapKind::Skeletal,
    )
    .unwrap();
    assert!(check_l2(&id).unwrap().holds);
    let p1 = family(&d, &[&[], &[0], &[1, 2], &[0, 1, 2]]);
    let p2 = family(&d, &[&[], &[0, 1], &[2], &[0, 1, 2]]);
    let pair = vec![quotient(&p1).q, quotient(&p2).q];
    let psi = MapLattice::new(d.clone(), pair.clone(), MapKind::Skeletal).unwrap();
    let v = check_l2(&psi).unwrap();
    assert_eq!(v.counterexample, Some(vec![0, 1]));
    let join = fintop_core::family::lattice_closure(&OpenFamily::merge([&p1, &p2]).unwrap());
    let mut closed = pair;
    closed.push(quotient(&join).q);
    assert!(
        check_l2(&MapLattice::new(d, closed, MapKind::Skeletal).unwrap())
            .unwrap()
            .holds
    );
}

#[test]
fn map_lattice_rejects_wrong_kinds() {
    let d = Arc::new(FinSpace::discrete(2));
    let s = Arc::new(FinSpace::sierpinski());
    let onto = SpaceMap::new(d.clone(), s, vec![0, 1]).unwrap();
    assert!(matches!(
        MapLattice::new(d, vec![onto], MapKind::Skeletal),
        Err(VerifyError::KindViolated { index: 0, .. })
    ));
}

#[test]
fn club_axiom_examples() {
    let d = Arc::new(FinSpace::discrete(2));
    let full = OpenFamily::full_topology(d.clone());
    let club = ClubCandidate::new(d.clone(), vec![full.clone()], ClubKind::C).unwrap();
    let v = verify_club(&club);
    assert!(v.is_additive_club(SeqGrade::Strict), "{v:?}");

    let trivial = family(&d, &[&[], &[0, 1]]);
    let v = verify_club(&ClubCandidate::new(d.clone(), vec![trivial], ClubKind::C).unwrap());
    assert!(!v.cofinal.holds && v.cofinal.counterexample.is_some());

    let loose = family(&d, &[&[0]]);
    let v = verify_club(&ClubCandidate::new(d.clone(), vec![full, loose], ClubKind::C).unwrap());
    assert!(!v.embedded.holds);
}

#[test]
fn lattice_from_club_examples() {
    let s = Arc::new(FinSpace::sierpinski());
    let club = ClubCandidate::new(
        s.clone(),
        vec![OpenFamily::full_topology(s.clone())],
        ClubKind::C,
    )
    .unwrap();
    let built = lattice_from_club(&club, SeqGrade::WithoutSeq).unwrap();
    assert_eq!(built.lattice.len(), 1);
    assert!(built.lattice.members()[0].is_skeletal());
    assert!(matches!(
        lattice_from_club(&club, SeqGrade::Strict),
        Err(VerifyError::PreconditionFailed(_))
    ));

    let d = Arc::new(FinSpace::discrete(3));
    let members = vec![
        OpenFamily::full_topology(d.clone()),
        family(&d, &[&[], &[0], &[1, 2], &[0, 1, 2]]),
    ];
    let club = ClubCandidate::new(d.clone(), members, ClubKind::D).unwrap();
    let built = lattice_from_club(&club, SeqGrade::Strict).unwrap();
    assert!(built.lattice.members().iter().all(|q| q.is_open_map()));
}

#[test]
fn club_from_lattice_examples() {
    let d = Arc::new(FinSpace::discrete(2));
    let psi = MapLattice::new(
        d.clone(),
        vec![SpaceMap::identity(d.clone())],
        MapKind::Skeletal,
    )
    .unwrap();
    let (club, verdict) = club_from_lattice(&psi).unwrap();
    assert!(verdict.is_additive_club(SeqGrade::Strict));
    assert_eq!(club.families(), &[OpenFamily::full_topology(d.clone())]);
    let back = lattice_from_club(&club, SeqGrade::Strict).unwrap();
    assert_eq!(back.lattice.len(), 1);
}

#[test]
fn suite_is_clean_through_three_points() {
    let reports = theorem_suite(&SuiteConfig::new(3)).unwrap();
    assert_eq!(reports.len(), THEOREMS.len() * 8);
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| r.is_failure())
        .map(|r| r.to_string())
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(reports.iter().all(|r| r.verdict == Verdict::Pass));
}

#[test]
fn labeled_universe_is_clean() {
    for n in [2, 3] {
        let mut config = SuiteConfig::new(n);
        config.universe = Universe::LabeledExact;
        config.theorems = Some(vec![
            "quotient-continuity".into(),
            "c-cstar-equivalence".into(),
            "seq-join".into(),
        ]);
        let reports = theorem_suite(&config).unwrap();
        assert!(reports.iter().all(|r| r.verdict == Verdict::Pass));
        assert_eq!(reports.len(), 3 * [0, 1, 3, 19][n]);
    }
}

#[test]
fn every_mutation_is_detected() {
    for m in Mutation::ALL {
        let mut config = SuiteConfig::new(3);
        config.checkers = Checkers::mutated(m);
        let reports = theorem_suite(&config).unwrap();
        let failed: Vec<&str> = reports
            .iter()
            .filter(|r| r.is_failure())
            .map(|r| r.theorem.as_str())
            .collect();
        assert!(!failed.is_empty(), "{m:?} went unnoticed");
        for r in reports.iter().filter(|r| r.is_failure()) {
            assert!(r.counterexample.is_some(), "{r}");
        }
    }
}
