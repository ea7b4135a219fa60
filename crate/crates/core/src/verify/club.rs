use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::lattice::{check_l1, check_l2, test_maps, MapKind, MapLattice, WeightClause};
use super::VerifyError;
use crate::embed::{is_bang_embedded, is_completely_embedded};
use crate::family::{lattice_closure, OpenFamily};
use crate::maps::quotient;
use crate::space::FinSpace;

/// c-clubs ask for `⊂_c` members, d-clubs for `⊂_!` members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClubKind {
    C,
    D,
}

impl ClubKind {
    pub fn map_kind(self) -> MapKind {
        match self {
            ClubKind::C => MapKind::Skeletal,
            ClubKind::D => MapKind::DOpen,
        }
    }

    pub fn embeds(self, p: &OpenFamily) -> bool {
        match self {
            ClubKind::C => is_completely_embedded(p).holds,
            ClubKind::D => is_bang_embedded(p).holds,
        }
    }
}

/// Whether Seq is required of club members. Seq holds for a family only
/// when it is closed under complements, which the full open lattice of a
/// non-discrete space never is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeqGrade {
    Strict,
    WithoutSeq,
}

/// A collection of open families proposed as a club.
#[derive(Debug, Clone)]
pub struct ClubCandidate {
    space: Arc<FinSpace>,
    families: Vec<OpenFamily>,
    kind: ClubKind,
}

impl ClubCandidate {
    pub fn new(
        space: Arc<FinSpace>,
        families: Vec<OpenFamily>,
        kind: ClubKind,
    ) -> Result<Self, VerifyError> {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for f in families {
            if !crate::family::same_space(f.space(), &space) {
                return Err(VerifyError::ForeignFamily);
            }
            if seen.insert(f.members().to_vec()) {
                kept.push(f);
            }
        }
        Ok(ClubCandidate {
            space,
            families: kept,
            kind,
        })
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn families(&self) -> &[OpenFamily] {
        &self.families
    }

    pub fn kind(&self) -> ClubKind {
        self.kind
    }

    fn contains(&self, f: &OpenFamily) -> bool {
        self.families.iter().any(|g| g.members() == f.members())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub holds: bool,
    pub counterexample: Option<String>,
}

impl AxiomVerdict {
    fn pass() -> Self {
        AxiomVerdict {
            holds: true,
            counterexample: None,
        }
    }

    fn fail(reason: String) -> Self {
        AxiomVerdict {
            holds: false,
            counterexample: Some(reason),
        }
    }

    fn first_failure(mut it: impl Iterator<Item = String>) -> Self {
        match it.next() {
            Some(reason) => Self::fail(reason),
            None => Self::pass(),
        }
    }
}

impl fmt::Display for AxiomVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => f.write_str("holds"),
            Some(c) => write!(f, "fails: {c}"),
        }
    }
}

/// One verdict per club axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClubVerdict {
    /// (i) closed under unions of increasing chains.
    pub chains: AxiomVerdict,
    /// (ii) every family of opens lies inside some member.
    pub cofinal: AxiomVerdict,
    /// (iii) members are closed under finite unions and intersections.
    pub lattice: AxiomVerdict,
    /// (iii) members are `⊂_c` (or `⊂_!` for d-clubs).
    pub embedded: AxiomVerdict,
    /// (iii) members have Seq.
    pub seq: AxiomVerdict,
    /// `⟨A ∪ B⟩` is a member whenever `A` and `B` are.
    pub additive: AxiomVerdict,
}

impl ClubVerdict {
    pub fn is_club(&self, grade: SeqGrade) -> bool {
        self.chains.holds
            && self.cofinal.holds
            && self.lattice.holds
            && self.embedded.holds
            && (grade == SeqGrade::WithoutSeq || self.seq.holds)
    }

    pub fn is_additive_club(&self, grade: SeqGrade) -> bool {
        self.is_club(grade) && self.additive.holds
    }

    pub fn axioms(&self) -> [(&'static str, &AxiomVerdict); 6] {
        [
            ("chains", &self.chains),
            ("cofinal", &self.cofinal),
            ("lattice", &self.lattice),
            ("embedded", &self.embedded),
            ("seq", &self.seq),
            ("additive", &self.additive),
        ]
    }
}

/// Evaluates every axiom on the finite universe. Increasing chains of
/// finitely many families stop at their largest member, and the families
/// of opens are all contained in the full open lattice, so (i) reduces to
/// pairs and (ii) to the open lattice itself being a member.
pub fn verify_club(c: &ClubCandidate) -> ClubVerdict {
    let fams = c.families();
    let chains = AxiomVerdict::first_failure(fams.iter().enumerate().flat_map(|(i, a)| {
        fams.iter().skip(i + 1).filter_map(move |b| {
            let (small, big) = if a.is_subfamily_of(b) { (a, b) } else { (b, a) };
            if !small.is_subfamily_of(big) {
                return None;
            }
            let union = OpenFamily::merge([small, big]).expect("one space");
            (!c.contains(&union))
                .then(|| format!("the chain {small} ⊆ {big} has no member as its union"))
        })
    }));
    let top = OpenFamily::full_topology(Arc::clone(c.space()));
    let cofinal = if fams.iter().any(|f| top.is_subfamily_of(f)) {
        AxiomVerdict::pass()
    } else {
        AxiomVerdict::fail(format!("no member contains the open lattice {top}"))
    };
    let lattice = AxiomVerdict::first_failure(
        fams.iter()
            .filter(|f| !f.is_lattice())
            .map(|f| format!("{f} is not closed under unions and intersections")),
    );
    let relation = match c.kind() {
        ClubKind::C => "completely embedded",
        ClubKind::D => "⊂_!-embedded",
    };
    let embedded = AxiomVerdict::first_failure(
        fams.iter()
            .filter(|f| !c.kind().embeds(f))
            .map(|f| format!("{f} is not {relation}")),
    );
    let seq = AxiomVerdict::first_failure(
        fams.iter()
            .filter(|f| !f.has_seq())
            .map(|f| format!("{f} lacks Seq")),
    );
    let additive = AxiomVerdict::first_failure(fams.iter().enumerate().flat_map(|(i, a)| {
        fams.iter().skip(i + 1).filter_map(move |b| {
            let join = join(a, b);
            (!c.contains(&join)).then(|| format!("⟨{a} ∪ {b}⟩ = {join} is not a member"))
        })
    }));
    ClubVerdict {
        chains,
        cofinal,
        lattice,
        embedded,
        seq,
        additive,
    }
}

fn join(a: &OpenFamily, b: &OpenFamily) -> OpenFamily {
    lattice_closure(&OpenFamily::merge([a, b]).expect("one space"))
}

/// `{⟨∪R⟩ : R a nonempty subcollection}`, as the closure under pairwise
/// joins.
pub fn join_closure(families: &[OpenFamily]) -> Vec<OpenFamily> {
    let mut seen = HashSet::new();
    let mut items: Vec<OpenFamily> = Vec::new();
    for f in families {
        let closed = lattice_closure(f);
        if seen.insert(closed.members().to_vec()) {
            items.push(closed);
        }
    }
    let mut i = 0;
    while i < items.len() {
        for j in 0..i {
            let joined = join(&items[i], &items[j]);
            if seen.insert(joined.members().to_vec()) {
                items.push(joined);
            }
        }
        i += 1;
    }
    items
}

/// The lattice `{q_A : A ∈ S}` built from a club, with `S` its joins.
#[derive(Debug, Clone)]
pub struct ClubLattice {
    pub lattice: MapLattice,
    pub joins: Vec<OpenFamily>,
}

/// Builds `Ψ = {q_A : A = ⟨∪R⟩, R ⊆ C}` and checks that every join is
/// embedded, that every `q_A` has the club's map kind, and that `Ψ`
/// satisfies (L1) and (L2).
pub fn lattice_from_club(c: &ClubCandidate, grade: SeqGrade) -> Result<ClubLattice, VerifyError> {
    let verdict = verify_club(c);
    if !verdict.is_club(grade) {
        let (name, v) = verdict
            .axioms()
            .into_iter()
            .find(|(name, v)| {
                !v.holds && (*name != "seq" || grade == SeqGrade::Strict) && *name != "additive"
            })
            .expect("a failing axiom");
        return Err(VerifyError::PreconditionFailed(format!(
            "club axiom {name} {v}"
        )));
    }
    let joins = join_closure(c.families());
    let kind = c.kind().map_kind();
    let mut maps = Vec::new();
    for a in &joins {
        if !c.kind().embeds(a) {
            return Err(VerifyError::ConstructionFailed(format!(
                "the join {a} is not embedded"
            )));
        }
        let q = quotient(a).q;
        if !kind.admits(&q) {
            return Err(VerifyError::ConstructionFailed(format!(
                "q for {a} is not {kind:?}: {}",
                q.classify()
            )));
        }
        maps.push(q);
    }
    let lattice = MapLattice::new(Arc::clone(c.space()), maps, kind)?;
    let test = test_maps(c.space());
    if let Some(i) = check_l1(&lattice, &test, WeightClause::Vacuous)?.counterexample {
        return Err(VerifyError::ConstructionFailed(format!(
            "(L1) fails: nothing factors {}",
            test[i]
        )));
    }
    if let Some(subset) = check_l2(&lattice)?.counterexample {
        return Err(VerifyError::ConstructionFailed(format!(
            "(L2) fails for the members {subset:?}"
        )));
    }
    Ok(ClubLattice { lattice, joins })
}

/// `C = {{φ⁻¹(V) : V open in φ[X]} : φ ∈ Ψ}`, with the full image topology
/// as each base, together with its verdict.
pub fn club_from_lattice(psi: &MapLattice) -> Result<(ClubCandidate, ClubVerdict), VerifyError> {
    let test = test_maps(psi.space());
    if let Some(i) = check_l1(psi, &test, WeightClause::Vacuous)?.counterexample {
        return Err(VerifyError::PreconditionFailed(format!(
            "(L1) fails: nothing factors {}",
            test[i]
        )));
    }
    if let Some(subset) = check_l2(psi)?.counterexample {
        return Err(VerifyError::PreconditionFailed(format!(
            "(L2) fails for the members {subset:?}"
        )));
    }
    let kind = match psi.kind() {
        MapKind::Skeletal => ClubKind::C,
        MapKind::DOpen | MapKind::Open => ClubKind::D,
    };
    let families = psi
        .members()
        .iter()
        .map(|phi| {
            OpenFamily::new(Arc::clone(psi.space()), phi.pullback_topology())
                .expect("preimages of opens under a continuous map are open")
        })
        .collect();
    let club = ClubCandidate::new(Arc::clone(psi.space()), families, kind)?;
    let verdict = verify_club(&club);
    Ok((club, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::SpaceMap;
    use crate::space::PointSet;

    #[test]
    fn open_lattice_of_discrete_two_is_a_club() {
        let d = Arc::new(FinSpace::discrete(2));
        let c =
            ClubCandidate::new(d.clone(), vec![OpenFamily::full_topology(d)], ClubKind::C).unwrap();
        let v = verify_club(&c);
        assert!(v.is_additive_club(SeqGrade::Strict));
    }

    #[test]
    fn missing_open_lattice_breaks_cofinality() {
        let d = Arc::new(FinSpace::discrete(2));
        let f = OpenFamily::new(d.clone(), [PointSet::EMPTY, d.points()]).unwrap();
        let v = verify_club(&ClubCandidate::new(d, vec![f], ClubKind::C).unwrap());
        assert!(!v.cofinal.holds);
        assert!(v.embedded.holds);
    }

    #[test]
    fn non_embedded_member_breaks_iii() {
        let d = Arc::new(FinSpace::discrete(2));
        let bad = OpenFamily::new(d.clone(), [PointSet::EMPTY, PointSet::singleton(0)]).unwrap();
        let c = ClubCandidate::new(
            d.clone(),
            vec![OpenFamily::full_topology(d), bad],
            ClubKind::C,
        )
        .unwrap();
        assert!(!verify_club(&c).embedded.holds);
    }

    #[test]
    fn sierpinski_club_lacks_seq_only() {
        let s = Arc::new(FinSpace::sierpinski());
        let c =
            ClubCandidate::new(s.clone(), vec![OpenFamily::full_topology(s)], ClubKind::C).unwrap();
        let v = verify_club(&c);
        assert!(!v.is_club(SeqGrade::Strict));
        assert!(v.is_additive_club(SeqGrade::WithoutSeq));
        let built = lattice_from_club(&c, SeqGrade::WithoutSeq).unwrap();
        assert_eq!(built.lattice.len(), 1);
        assert!(built.lattice.members()[0].is_skeletal());
    }

    #[test]
    fn discrete_d_club_gives_open_quotients() {
        let d = Arc::new(FinSpace::discrete(3));
        let c =
            ClubCandidate::new(d.clone(), vec![OpenFamily::full_topology(d)], ClubKind::D).unwrap();
        let built = lattice_from_club(&c, SeqGrade::Strict).unwrap();
        assert!(built.lattice.members().iter().all(|q| q.is_open_map()));
    }

    #[test]
    fn identity_lattice_round_trip() {
        let d = Arc::new(FinSpace::discrete(2));
        let psi =
            MapLattice::new(d.clone(), vec![SpaceMap::identity(d)], MapKind::Skeletal).unwrap();
        let (club, verdict) = club_from_lattice(&psi).unwrap();
        assert!(verdict.is_additive_club(SeqGrade::Strict));
        assert!(lattice_from_club(&club, SeqGrade::Strict).is_ok());
    }

    #[test]
    fn join_closure_collects_all_joins() {
        let d = Arc::new(FinSpace::discrete(3));
        let f = |a: &[usize]| {
            let s: PointSet = a.iter().copied().collect();
            OpenFamily::new(d.clone(), [PointSet::EMPTY, s, d.points() - s, d.points()]).unwrap()
        };
        let joins = join_closure(&[f(&[0]), f(&[1]), f(&[2])]);
        // every pair already generates the discrete topology
        assert_eq!(joins.len(), 4);
    }
}
