//! Exhaustive theorem checks over every small T0 space.
//!
//! Each theorem yields one [`TheoremReport`] per space. The predicates the
//! checks lean on are collected in [`Checkers`] so that a corrupted copy
//! can be swapped in; the suite must then report counterexamples.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::club::{
    club_from_lattice, join_closure, lattice_from_club, verify_club, ClubCandidate, ClubKind,
    SeqGrade,
};
use super::lattice::{
    check_l1, check_l2, diagonal_closure, test_maps, MapKind, MapLattice, WeightClause,
};
use crate::embed::{c_star_unchecked, guards, is_bang_embedded, predense_unchecked};
use crate::family::{lattice_closure, OpenFamily};
use crate::game::{adversary_search, club_strategy, default_round_bound, solve_game, Player};
use crate::maps::{diagonal, maps_homeomorphic, quotient, BaseCheck, Classification, SpaceMap};
use crate::space::{FinSpace, PointSet, SpaceCatalog, SpaceError};

/// Every theorem id the suite knows, in report order.
pub const THEOREMS: &[&str] = &[
    "quotient-continuity",
    "diagonal-homeomorphism",
    "seq-join",
    "predensity-transfer",
    "c-cstar-equivalence",
    "bang-implies-c",
    "dense-union-predense",
    "d-open-skeletal",
    "open-surjection-d-open",
    "d-open-open-discrete",
    "game-first-player",
    "club-strategy",
    "lattice-to-club",
    "club-to-lattice",
    "d-lattice-to-club",
    "d-club-to-lattice",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// One theorem checked on one space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    /// The space's minimal neighbourhoods as `n:hex.hex…`; canonical
    /// when the suite runs over homeomorphism classes.
    pub space: String,
    pub points: usize,
    /// Number of instances examined.
    pub instances: usize,
    pub verdict: Verdict,
    pub counterexample: Option<String>,
    pub note: Option<String>,
}

impl TheoremReport {
    pub fn is_failure(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "skip",
        };
        write!(
            f,
            "{verdict} {} {} ({} instances)",
            self.theorem, self.space, self.instances
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, " counterexample: {c}")?;
        }
        if let Some(n) = &self.note {
            write!(f, " [{n}]")?;
        }
        Ok(())
    }
}

/// Which spaces the suite visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Universe {
    /// One representative per homeomorphism class, sizes `1..=max_points`.
    Canonical,
    /// Every labelled T0 space on exactly `max_points` points.
    LabeledExact,
}

/// Size ceilings for the expensive checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteLimits {
    /// Checks over arbitrary (not ∩-closed) families.
    pub all_families_max_points: usize,
    /// Triples of families in the diagonal check.
    pub triple_max_points: usize,
    /// Adversary search against the club strategy.
    pub game_strategy_max_points: usize,
    /// Club and lattice round trips.
    pub round_trip_max_points: usize,
    /// Codomain sizes in the map-order checks.
    pub codomain_max_points: usize,
}

impl Default for SuiteLimits {
    fn default() -> Self {
        SuiteLimits {
            all_families_max_points: 3,
            triple_max_points: 4,
            game_strategy_max_points: 3,
            round_trip_max_points: 3,
            codomain_max_points: 4,
        }
    }
}

/// The predicates the suite relies on.
#[derive(Clone, Copy)]
pub struct Checkers {
    pub predense: fn(&[PointSet], &OpenFamily) -> bool,
    pub completely_embedded: fn(&OpenFamily) -> bool,
    pub bang_embedded: fn(&OpenFamily) -> bool,
    pub closure: fn(&OpenFamily) -> OpenFamily,
    pub classify: fn(&SpaceMap) -> Classification,
    pub has_seq: fn(&OpenFamily) -> bool,
}

impl fmt::Debug for Checkers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Checkers")
    }
}

impl Default for Checkers {
    fn default() -> Self {
        Checkers {
            predense: predense_unchecked,
            completely_embedded: |p| crate::embed::is_completely_embedded(p).holds,
            bang_embedded: |p| is_bang_embedded(p).holds,
            closure: lattice_closure,
            classify: SpaceMap::classify,
            has_seq: OpenFamily::has_seq,
        }
    }
}

/// Deliberate single-checker corruptions for the self-test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mutation {
    /// Predensity accepts `V ∩ P ≠ ∅` without a member below it.
    PredenseWithoutRefinement,
    /// Condition (c) lets `∅` act as a guard.
    EmbeddingAllowsEmptyGuard,
    /// `⊂_!` only asks for a member containing the point.
    BangWithoutSeparation,
    /// `⟨A⟩` closes under unions only.
    ClosureWithoutIntersections,
    /// d-openness drops the interior: `f[U] ⊆ cl f[U]`.
    DOpenWithoutInterior,
    /// Seq takes complements inside `∪P` instead of the space.
    SeqComplementInUnion,
}

impl Mutation {
    pub const ALL: [Mutation; 6] = [
        Mutation::PredenseWithoutRefinement,
        Mutation::EmbeddingAllowsEmptyGuard,
        Mutation::BangWithoutSeparation,
        Mutation::ClosureWithoutIntersections,
        Mutation::DOpenWithoutInterior,
        Mutation::SeqComplementInUnion,
    ];
}

impl Checkers {
    pub fn mutated(mutation: Mutation) -> Self {
        let mut c = Checkers::default();
        match mutation {
            Mutation::PredenseWithoutRefinement => {
                c.predense = |w, p| {
                    p.nonempty_members()
                        .all(|big| w.iter().any(|v| v.meets(big)))
                };
            }
            Mutation::EmbeddingAllowsEmptyGuard => {
                c.completely_embedded = |p| {
                    p.contains(PointSet::EMPTY)
                        || p.space()
                            .nonempty_opens()
                            .all(|v| guards(p, v).next().is_some())
                };
            }
            Mutation::BangWithoutSeparation => {
                c.bang_embedded = |p| {
                    let space = p.space();
                    let unions = generate_unions(p);
                    unions.iter().all(|&u| {
                        (space.points() - space.closure(u))
                            .iter()
                            .all(|x| p.members().iter().any(|w| w.contains(x)))
                    })
                };
            }
            Mutation::ClosureWithoutIntersections => {
                c.closure = |a| {
                    let mut items: Vec<PointSet> = a.members().to_vec();
                    let mut seen: HashSet<PointSet> = items.iter().copied().collect();
                    let mut i = 0;
                    while i < items.len() {
                        for j in 0..i {
                            let u = items[i] | items[j];
                            if seen.insert(u) {
                                items.push(u);
                            }
                        }
                        i += 1;
                    }
                    OpenFamily::new(Arc::clone(a.space()), items).expect("unions of opens are open")
                };
            }
            Mutation::DOpenWithoutInterior => {
                c.classify = |f| {
                    let mut class = f.classify();
                    let cod = f.codomain();
                    class.d_open = f
                        .domain()
                        .opens()
                        .iter()
                        .all(|&u| f.image_of(u).is_subset(cod.closure(f.image_of(u))));
                    class
                };
            }
            Mutation::SeqComplementInUnion => {
                c.has_seq = |p| {
                    let within = p.union_of_members();
                    p.members().iter().all(|&w| p.contains(within - w))
                };
            }
        }
        c
    }
}

fn generate_unions(p: &OpenFamily) -> Vec<PointSet> {
    let mut out = vec![PointSet::EMPTY];
    let mut seen: HashSet<PointSet> = out.iter().copied().collect();
    let mut i = 0;
    while i < out.len() {
        let u = out[i];
        for &m in p.members() {
            if seen.insert(u | m) {
                out.push(u | m);
            }
        }
        i += 1;
    }
    out
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub max_points: usize,
    pub universe: Universe,
    /// Restrict to these theorem ids; all when `None`.
    pub theorems: Option<Vec<String>>,
    pub checkers: Checkers,
    pub limits: SuiteLimits,
}

impl SuiteConfig {
    pub fn new(max_points: usize) -> Self {
        SuiteConfig {
            max_points,
            universe: Universe::Canonical,
            theorems: None,
            checkers: Checkers::default(),
            limits: SuiteLimits::default(),
        }
    }

    fn wants(&self, theorem: &str) -> bool {
        self.theorems
            .as_ref()
            .is_none_or(|ts| ts.iter().any(|t| t == theorem))
    }
}

/// The spaces a configuration visits, in report order.
pub fn suite_spaces(config: &SuiteConfig) -> Result<Vec<FinSpace>, SpaceError> {
    let catalog = SpaceCatalog::new(config.max_points.max(1))?;
    match config.universe {
        Universe::Canonical => catalog.up_to_homeomorphism_through(config.max_points),
        Universe::LabeledExact => Ok(catalog.labeled(config.max_points)?.collect()),
    }
}

/// Runs the selected theorems on every space of the universe. Spaces are
/// checked in parallel; reports come back grouped by theorem, then in
/// space order.
pub fn theorem_suite(config: &SuiteConfig) -> Result<Vec<TheoremReport>, SpaceError> {
    let spaces = suite_spaces(config)?;
    let codomains = SpaceCatalog::new(config.limits.codomain_max_points.max(1))?
        .up_to_homeomorphism_through(config.limits.codomain_max_points)?
        .into_iter()
        .map(Arc::new)
        .collect::<Vec<_>>();
    let per_space: Vec<Vec<TheoremReport>> = spaces
        .into_par_iter()
        .map(|space| SpaceRun::new(Arc::new(space), config, &codomains).run())
        .collect();
    let mut reports = Vec::new();
    for theorem in THEOREMS {
        for space_reports in &per_space {
            reports.extend(
                space_reports
                    .iter()
                    .filter(|r| r.theorem == *theorem)
                    .cloned(),
            );
        }
    }
    Ok(reports)
}

/// `n:hex.hex…` of the minimal neighbourhoods in the given labelling.
pub fn space_id(space: &FinSpace) -> String {
    let nbhds: Vec<String> = space
        .min_neighborhoods()
        .iter()
        .map(|u| format!("{:x}", u.bits()))
        .collect();
    format!("{}:{}", space.n(), nbhds.join("."))
}

/// Families of opens on one space, enumerated once.
struct Families {
    inter_closed: Vec<OpenFamily>,
    lattices: Vec<OpenFamily>,
    covering_lattices: Vec<OpenFamily>,
    seq: Vec<OpenFamily>,
    all: Option<Vec<OpenFamily>>,
}

impl Families {
    fn enumerate(space: &Arc<FinSpace>, checkers: &Checkers, with_all: bool) -> Self {
        let opens = space.opens();
        let m = opens.len();
        assert!(m <= 20, "family enumeration is limited to 20 opens");
        let index = |s: PointSet| opens.binary_search(&s).expect("open");
        let meet: Vec<Vec<usize>> = (0..m)
            .map(|i| (0..m).map(|j| index(opens[i] & opens[j])).collect())
            .collect();
        let join: Vec<Vec<usize>> = (0..m)
            .map(|i| (0..m).map(|j| index(opens[i] | opens[j])).collect())
            .collect();
        let full = index(space.points());
        let closed = |mask: u32, table: &[Vec<usize>]| {
            (0..m).filter(|&i| mask & (1 << i) != 0).all(|i| {
                (i + 1..m)
                    .filter(|&j| mask & (1 << j) != 0)
                    .all(|j| mask & (1 << table[i][j]) != 0)
            })
        };
        let to_family = |mask: u32| {
            let members = (0..m)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| opens[i])
                .collect();
            OpenFamily::from_open_sets(Arc::clone(space), members)
        };
        let mut fams = Families {
            inter_closed: Vec::new(),
            lattices: Vec::new(),
            covering_lattices: Vec::new(),
            seq: Vec::new(),
            all: with_all.then(Vec::new),
        };
        for mask in 1u32..(1u32 << m) {
            let f = to_family(mask);
            if (checkers.has_seq)(&f) {
                fams.seq.push(f.clone());
            }
            if closed(mask, &meet) {
                fams.inter_closed.push(f.clone());
                if closed(mask, &join) {
                    if mask & (1 << full) != 0 {
                        fams.covering_lattices.push(f.clone());
                    }
                    fams.lattices.push(f.clone());
                }
            }
            if let Some(all) = fams.all.as_mut() {
                all.push(f);
            }
        }
        fams
    }
}

/// Subfamilies this large are listed in full; larger ones are probed
/// only at the subfamilies that can separate the two predensities.
const SUBFAMILY_LIMIT: usize = 10;

struct SpaceRun<'a> {
    space: Arc<FinSpace>,
    id: String,
    config: &'a SuiteConfig,
    codomains: &'a [Arc<FinSpace>],
    checkers: Checkers,
    families: Families,
}

#[derive(Default)]
struct Tally {
    instances: usize,
    counterexample: Option<String>,
    note: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }
}

impl<'a> SpaceRun<'a> {
    fn new(space: Arc<FinSpace>, config: &'a SuiteConfig, codomains: &'a [Arc<FinSpace>]) -> Self {
        let with_all = space.n() <= config.limits.all_families_max_points;
        let families = Families::enumerate(&space, &config.checkers, with_all);
        SpaceRun {
            id: space_id(&space),
            space,
            config,
            codomains,
            checkers: config.checkers,
            families,
        }
    }

    fn run(&self) -> Vec<TheoremReport> {
        let n = self.space.n();
        let limits = &self.config.limits;
        let mut out = Vec::new();
        for &theorem in THEOREMS {
            if !self.config.wants(theorem) {
                continue;
            }
            let limit = match theorem {
                "club-strategy" => Some(limits.game_strategy_max_points),
                "lattice-to-club" | "club-to-lattice" | "d-lattice-to-club"
                | "d-club-to-lattice" => Some(limits.round_trip_max_points),
                _ => None,
            };
            if let Some(limit) = limit.filter(|&l| n > l) {
                out.push(TheoremReport {
                    theorem: theorem.into(),
                    space: self.id.clone(),
                    points: n,
                    instances: 0,
                    verdict: Verdict::Skipped,
                    counterexample: None,
                    note: Some(format!("run on spaces with at most {limit} points")),
                });
                continue;
            }
            let tally = match theorem {
                "quotient-continuity" => self.quotient_continuity(),
                "diagonal-homeomorphism" => self.diagonal_homeomorphism(),
                "seq-join" => self.seq_join(),
                "predensity-transfer" => self.predensity_transfer(),
                "c-cstar-equivalence" => self.c_cstar_equivalence(),
                "bang-implies-c" => self.bang_implies_c(),
                "dense-union-predense" => self.dense_union_predense(),
                "d-open-skeletal" => self.map_order(|c, _, _| !c.d_open || c.skeletal),
                "open-surjection-d-open" => {
                    self.map_order(|c, _, _| !(c.open && c.surjective) || c.d_open)
                }
                "d-open-open-discrete" => self.map_order(|c, dom, cod| {
                    !(dom.is_discrete() || cod.is_discrete()) || c.d_open == c.open
                }),
                "game-first-player" => self.game_first_player(),
                "club-strategy" => self.club_strategy(),
                "lattice-to-club" => self.lattice_to_club(MapKind::Skeletal),
                "d-lattice-to-club" => self.lattice_to_club(MapKind::DOpen),
                "club-to-lattice" => self.club_to_lattice(ClubKind::C),
                "d-club-to-lattice" => self.club_to_lattice(ClubKind::D),
                other => unreachable!("unknown theorem {other}"),
            };
            out.push(TheoremReport {
                theorem: theorem.into(),
                space: self.id.clone(),
                points: n,
                instances: tally.instances,
                verdict: if tally.counterexample.is_some() {
                    Verdict::Fail
                } else {
                    Verdict::Pass
                },
                counterexample: tally.counterexample,
                note: tally.note,
            });
        }
        out
    }

    fn quotient_continuity(&self) -> Tally {
        let mut t = Tally::default();
        for p in self
            .families
            .inter_closed
            .iter()
            .filter(|p| p.covers_space())
        {
            let r = quotient(p);
            t.check(r.base_check == BaseCheck::Verified, || {
                format!("P = {p}: {:?}", r.base_check)
            });
        }
        t
    }

    fn diagonal_homeomorphism(&self) -> Tally {
        let mut t = Tally::default();
        let fams = &self.families.covering_lattices;
        let qs: Vec<SpaceMap> = fams.iter().map(|p| quotient(p).q).collect();
        let joined: RefCell<HashMap<Vec<PointSet>, SpaceMap>> = RefCell::default();
        let check = |idx: &[usize], t: &mut Tally| {
            let members: Vec<&OpenFamily> = idx.iter().map(|&i| &fams[i]).collect();
            let join = (self.checkers.closure)(
                &OpenFamily::merge(members.iter().copied()).expect("one space"),
            );
            let q = joined
                .borrow_mut()
                .entry(join.members().to_vec())
                .or_insert_with(|| quotient(&join).q)
                .clone();
            let maps: Vec<SpaceMap> = idx.iter().map(|&i| qs[i].clone()).collect();
            let diag = diagonal(&maps).expect("shared domain").map;
            let homeomorphic = maps_homeomorphic(&q, &diag)
                .expect("shared domain")
                .is_some();
            // q⁻¹(q[U]) = U and q[U] open, for the diagonal q
            let saturated = join.members().iter().all(|&u| {
                let image = diag.image_of(u);
                diag.preimage(image) == u && diag.codomain().is_open(image)
            });
            t.check(homeomorphic && saturated, || {
                let names: Vec<String> = members.iter().map(|p| p.to_string()).collect();
                format!(
                    "families {}: homeomorphic={homeomorphic} saturated={saturated}",
                    names.join(" ; ")
                )
            });
        };
        // The claim is invariant under automorphisms of the space, so only
        // tuples that are lexicographically least in their orbit are checked.
        let orbits = FamilyOrbits::new(&self.space, fams);
        let firsts: Vec<usize> = (0..fams.len()).filter(|&i| orbits.is_least(&[i])).collect();
        for &i in &firsts {
            for j in i + 1..fams.len() {
                if orbits.is_least(&[i, j]) {
                    check(&[i, j], &mut t);
                }
            }
        }
        if self.space.n() <= self.config.limits.triple_max_points {
            for &i in &firsts {
                for j in i + 1..fams.len() {
                    for k in j + 1..fams.len() {
                        if orbits.is_least(&[i, j, k]) {
                            check(&[i, j, k], &mut t);
                        }
                    }
                }
            }
        } else {
            t.note = Some("pairs only".into());
        }
        t
    }

    fn seq_join(&self) -> Tally {
        let mut t = Tally::default();
        let fams = &self.families.seq;
        for i in 0..fams.len() {
            for j in i..fams.len() {
                let join = (self.checkers.closure)(
                    &OpenFamily::merge([&fams[i], &fams[j]]).expect("one space"),
                );
                t.check((self.checkers.has_seq)(&join), || {
                    format!("⟨{} ∪ {}⟩ = {join} lacks Seq", fams[i], fams[j])
                });
            }
        }
        t
    }

    /// Subfamilies of `p` to test: all of them when `p` is small,
    /// otherwise the complements of the given cut sets.
    fn subfamilies(
        p: &OpenFamily,
        cuts: impl Iterator<Item = Vec<PointSet>>,
    ) -> Vec<Vec<PointSet>> {
        let m = p.members();
        if m.len() <= SUBFAMILY_LIMIT {
            (0u32..(1 << m.len()))
                .map(|mask| {
                    (0..m.len())
                        .filter(|&i| mask & (1 << i) != 0)
                        .map(|i| m[i])
                        .collect()
                })
                .collect()
        } else {
            cuts.map(|cut| m.iter().copied().filter(|v| !cut.contains(v)).collect())
                .collect()
        }
    }

    /// Predense in `p` implies predense in the open lattice, whenever `p`
    /// satisfies (c). Checked on ∩-closed families and, for small spaces,
    /// on every family, since the argument does not need ∩-closure.
    fn predensity_transfer(&self) -> Tally {
        let mut t = Tally::default();
        let extra = self
            .families
            .all
            .iter()
            .flatten()
            .filter(|p| !p.is_inter_closed());
        for p in self.families.inter_closed.iter().chain(extra) {
            if !(self.checkers.completely_embedded)(p) {
                continue;
            }
            // the members meeting O; a subfamily avoiding all of them misses O
            let cuts = self
                .space
                .nonempty_opens()
                .map(|o| p.members().iter().copied().filter(|v| v.meets(o)).collect());
            for w in Self::subfamilies(p, cuts) {
                let union = w.iter().fold(PointSet::EMPTY, |acc, &v| acc | v);
                let ok = !(self.checkers.predense)(&w, p) || self.space.is_dense(union);
                t.check(ok, || {
                    format!(
                        "P = {p}, W = {} is predense in P but not dense",
                        fmt_sets(&w)
                    )
                });
            }
        }
        t
    }

    fn c_cstar_equivalence(&self) -> Tally {
        let mut t = Tally::default();
        for p in &self.families.inter_closed {
            let c = (self.checkers.completely_embedded)(p);
            let star = c_star_unchecked(p);
            t.check(c == star.holds(), || {
                format!("P = {p}: (c) = {c}, (c*) = {} ({star:?})", star.holds())
            });
        }
        t
    }

    fn bang_implies_c(&self) -> Tally {
        let mut t = Tally::default();
        let extra = self
            .families
            .all
            .iter()
            .flatten()
            .filter(|p| !p.is_inter_closed());
        for p in self.families.inter_closed.iter().chain(extra) {
            let ok = !(self.checkers.bang_embedded)(p) || (self.checkers.completely_embedded)(p);
            t.check(ok, || format!("P = {p} is ⊂_! but not ⊂_c"));
        }
        t
    }

    /// A subfamily of an ∩-closed `p` with dense union is predense in `p`.
    fn dense_union_predense(&self) -> Tally {
        let mut t = Tally::default();
        for p in &self.families.inter_closed {
            // G_P: the members with a nonempty member of p below their meet with P
            let cuts = p.nonempty_members().map(|big| {
                p.members()
                    .iter()
                    .copied()
                    .filter(|&v| {
                        let meet = v & big;
                        !meet.is_empty() && p.nonempty_members().any(|q| q.is_subset(meet))
                    })
                    .collect()
            });
            for w in Self::subfamilies(p, cuts) {
                let union = w.iter().fold(PointSet::EMPTY, |acc, &v| acc | v);
                let ok = !self.space.is_dense(union) || (self.checkers.predense)(&w, p);
                t.check(ok, || {
                    format!("P = {p}, W = {} is dense but not predense", fmt_sets(&w))
                });
            }
        }
        t
    }

    fn map_order(&self, holds: impl Fn(Classification, &FinSpace, &FinSpace) -> bool) -> Tally {
        let mut t = Tally::default();
        let n = self.space.n();
        for cod in self.codomains {
            let k = cod.n();
            let mut assignment = vec![0usize; n];
            loop {
                if let Ok(f) =
                    SpaceMap::new(Arc::clone(&self.space), Arc::clone(cod), assignment.clone())
                {
                    let c = (self.checkers.classify)(&f);
                    t.check(holds(c, &self.space, cod), || {
                        format!("map {f} into {}: {c}", space_id(cod))
                    });
                }
                // next assignment in base k
                let mut i = 0;
                while i < n && assignment[i] + 1 == k {
                    assignment[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                assignment[i] += 1;
            }
        }
        t
    }

    fn game_first_player(&self) -> Tally {
        let mut t = Tally::default();
        let solution = solve_game(&self.space);
        t.check(solution.winner == Player::I, || "player II wins".into());
        let reversed: Vec<usize> = (0..self.space.n()).rev().collect();
        let relabeled = solve_game(&Arc::new(self.space.relabel(&reversed)));
        t.check(relabeled.rounds == solution.rounds, || {
            format!(
                "relabeling changes the value: {:?} vs {:?}",
                solution.rounds, relabeled.rounds
            )
        });
        t.note = solution.rounds.map(|r| format!("I wins in {r} rounds"));
        t
    }

    fn club_strategy(&self) -> Tally {
        let mut t = Tally::default();
        let bound = default_round_bound(&self.space);
        for p in &self.families.inter_closed {
            if !(self.checkers.completely_embedded)(p) {
                continue;
            }
            match club_strategy(p) {
                Ok(strategy) => match adversary_search(&self.space, &strategy, bound) {
                    Ok(report) => t.check(report.losing_line.is_none(), || {
                        format!(
                            "P = {p}: II avoids density along {}",
                            fmt_sets(report.losing_line.as_deref().unwrap_or_default())
                        )
                    }),
                    Err(e) => t.check(false, || format!("P = {p}: {e}")),
                },
                Err(e) => t.check(false, || format!("P = {p}: {e}")),
            }
        }
        t
    }

    /// Lattices `Ψ` are the diagonal closures of the identity with up to
    /// two further maps of the kind; `club_from_lattice(Ψ)` must be an
    /// additive club, and rebuilding a lattice from it must succeed.
    fn lattice_to_club(&self, kind: MapKind) -> Tally {
        let mut t = Tally::default();
        let id = SpaceMap::identity(Arc::clone(&self.space));
        let good: Vec<SpaceMap> = test_maps(&self.space)
            .into_iter()
            .filter(|f| {
                kind == MapKind::Skeletal && (self.checkers.classify)(f).skeletal
                    || kind != MapKind::Skeletal && (self.checkers.classify)(f).d_open
            })
            .collect();
        let mut seeds: Vec<Vec<SpaceMap>> = vec![vec![id.clone()]];
        for i in 0..good.len() {
            seeds.push(vec![id.clone(), good[i].clone()]);
            for j in i + 1..good.len() {
                seeds.push(vec![id.clone(), good[i].clone(), good[j].clone()]);
            }
        }
        let mut seen = HashSet::new();
        let mut strict = 0;
        for seed in seeds {
            let closed = diagonal_closure(seed).expect("shared domain");
            let mut keys: Vec<_> = closed.iter().map(|m| m.equivalence_key()).collect();
            keys.sort();
            if !seen.insert(keys) {
                continue;
            }
            let Ok(psi) = MapLattice::new(Arc::clone(&self.space), closed, kind) else {
                continue;
            };
            let outcome = club_from_lattice(&psi).and_then(|(club, verdict)| {
                if !verdict.is_additive_club(SeqGrade::WithoutSeq) {
                    let failed: Vec<String> = verdict
                        .axioms()
                        .iter()
                        .filter(|(name, v)| !v.holds && *name != "seq")
                        .map(|(name, v)| format!("{name} {v}"))
                        .collect();
                    return Ok(Some(failed.join("; ")));
                }
                if verdict.is_additive_club(SeqGrade::Strict) {
                    strict += 1;
                }
                lattice_from_club(&club, SeqGrade::WithoutSeq)?;
                Ok(None)
            });
            match outcome {
                Ok(None) => t.check(true, String::new),
                Ok(Some(reason)) => t.check(false, || format!("Ψ of {} maps: {reason}", psi.len())),
                Err(e) => t.check(false, || format!("Ψ of {} maps: {e}", psi.len())),
            }
        }
        t.note = Some(format!("{strict} of {} also satisfy Seq", t.instances));
        t
    }

    /// Clubs are the join closures of the open lattice with up to two
    /// embedded lattice families; every additive club must yield a lattice
    /// of maps of the matching kind satisfying (L1) and (L2).
    fn club_to_lattice(&self, kind: ClubKind) -> Tally {
        let mut t = Tally::default();
        let top = OpenFamily::full_topology(Arc::clone(&self.space));
        let embeds = |p: &OpenFamily| match kind {
            ClubKind::C => (self.checkers.completely_embedded)(p),
            ClubKind::D => (self.checkers.bang_embedded)(p),
        };
        let good: Vec<&OpenFamily> = self
            .families
            .lattices
            .iter()
            .filter(|p| embeds(p))
            .collect();
        let mut seeds: Vec<Vec<OpenFamily>> = vec![vec![top.clone()]];
        for i in 0..good.len() {
            seeds.push(vec![top.clone(), good[i].clone()]);
            for j in i + 1..good.len() {
                seeds.push(vec![top.clone(), good[i].clone(), good[j].clone()]);
            }
        }
        let mut seen = HashSet::new();
        let mut strict = 0;
        for seed in seeds {
            let families = join_closure(&seed);
            let mut key: Vec<Vec<PointSet>> =
                families.iter().map(|f| f.members().to_vec()).collect();
            key.sort();
            if !seen.insert(key) {
                continue;
            }
            let club =
                ClubCandidate::new(Arc::clone(&self.space), families, kind).expect("one space");
            let verdict = verify_club(&club);
            if !verdict.is_additive_club(SeqGrade::WithoutSeq) {
                continue;
            }
            if verdict.is_additive_club(SeqGrade::Strict) {
                strict += 1;
            }
            let built = lattice_from_club(&club, SeqGrade::WithoutSeq);
            let consistent = built.as_ref().map(|b| {
                let test = test_maps(&self.space);
                check_l1(&b.lattice, &test, WeightClause::Vacuous)
                    .map(|v| v.holds)
                    .unwrap_or(false)
                    && check_l2(&b.lattice).map(|v| v.holds).unwrap_or(false)
            });
            t.check(matches!(consistent, Ok(true)), || match &built {
                Err(e) => format!("club of {} families: {e}", club.families().len()),
                Ok(_) => format!(
                    "club of {} families: lattice fails (L1)/(L2)",
                    club.families().len()
                ),
            });
        }
        t.note = Some(format!("{strict} of {} also satisfy Seq", t.instances));
        t
    }
}

/// How the automorphisms of a space permute a list of families.
struct FamilyOrbits {
    /// `images[g][i]` is the index of the image of family `i` under `g`.
    images: Vec<Vec<usize>>,
}

impl FamilyOrbits {
    fn new(space: &FinSpace, fams: &[OpenFamily]) -> Self {
        let index: HashMap<&[PointSet], usize> = fams
            .iter()
            .enumerate()
            .map(|(i, f)| (f.members(), i))
            .collect();
        let images = automorphisms(space)
            .into_iter()
            .map(|g| {
                fams.iter()
                    .map(|f| {
                        let mut moved: Vec<PointSet> =
                            f.members().iter().map(|m| m.map_points(&g)).collect();
                        moved.sort_unstable();
                        index[moved.as_slice()]
                    })
                    .collect()
            })
            .collect();
        FamilyOrbits { images }
    }

    /// `tuple` is sorted and no automorphism maps it to a smaller one.
    fn is_least(&self, tuple: &[usize]) -> bool {
        let mut moved = [0usize; 4];
        self.images.iter().all(|g| {
            let moved = &mut moved[..tuple.len()];
            for (slot, &i) in moved.iter_mut().zip(tuple) {
                *slot = g[i];
            }
            moved.sort_unstable();
            *moved >= *tuple
        })
    }
}

/// Point permutations preserving the topology. Only the identity is
/// returned above six points.
fn automorphisms(space: &FinSpace) -> Vec<Vec<usize>> {
    let n = space.n();
    let identity: Vec<usize> = (0..n).collect();
    if n > 6 {
        return vec![identity];
    }
    let nbhds = space.min_neighborhoods();
    let mut out = Vec::new();
    let mut perm = identity;
    permute(&mut perm, 0, &mut |g| {
        if (0..n).all(|x| nbhds[x].map_points(g) == nbhds[g[x]]) {
            out.push(g.to_vec());
        }
    });
    out
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

fn fmt_sets(sets: &[PointSet]) -> String {
    let parts: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(" "))
}
