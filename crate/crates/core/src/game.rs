//! The open-open game on a finite space.
//!
//! Each round player I names a nonempty open `A` and player II answers
//! with a nonempty open `B ⊆ A`. Player I wins once the union of II's
//! answers is dense. Since only the closure of that union matters, a
//! position is the closed set `cl(∪B)`, called the progress.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use thiserror::Error;

use crate::embed::{guards, is_completely_embedded};
use crate::family::OpenFamily;
use crate::space::{FinSpace, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    I,
    II,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::I => f.write_str("I"),
            Player::II => f.write_str("II"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("round {round}: player {player} played {played}, which is illegal: {reason}")]
    IllegalMove {
        player: Player,
        round: usize,
        played: PointSet,
        reason: String,
    },
    #[error("strategy precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("strategy for player {got} used where player {expected} was needed")]
    WrongRole { expected: Player, got: Player },
}

/// Solver state: the closure of II's answers so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GamePosition {
    pub space: Arc<FinSpace>,
    pub progress: PointSet,
    pub round: usize,
}

impl GamePosition {
    pub fn start(space: Arc<FinSpace>) -> Self {
        GamePosition {
            space,
            progress: PointSet::EMPTY,
            round: 0,
        }
    }

    /// The largest open set disjoint from the progress.
    pub fn hole(&self) -> PointSet {
        self.space.points() - self.progress
    }

    pub fn is_won(&self) -> bool {
        self.progress == self.space.points()
    }

    pub fn advance(&self, answer: PointSet) -> Self {
        GamePosition {
            space: Arc::clone(&self.space),
            progress: self.space.closure(self.progress | answer),
            round: self.round + 1,
        }
    }
}

/// A player's rule for choosing moves. `history` alternates I's and II's
/// moves, I's at even indices; II is called with I's pending move last.
pub trait Strategy {
    fn role(&self) -> Player;
    fn choose(&mut self, space: &FinSpace, history: &[PointSet]) -> PointSet;
    fn describe(&self) -> String;
}

fn progress_of(space: &FinSpace, history: &[PointSet]) -> PointSet {
    let answers = history
        .iter()
        .skip(1)
        .step_by(2)
        .fold(PointSet::EMPTY, |acc, &b| acc | b);
    space.closure(answers)
}

fn subopens(space: &FinSpace, within: PointSet) -> impl Iterator<Item = PointSet> + '_ {
    space.nonempty_opens().filter(move |o| o.is_subset(within))
}

/// Plays the same set every round.
#[derive(Debug, Clone)]
pub struct FixedMove {
    pub role: Player,
    pub set: PointSet,
}

impl Strategy for FixedMove {
    fn role(&self) -> Player {
        self.role
    }
    fn choose(&mut self, _: &FinSpace, _: &[PointSet]) -> PointSet {
        self.set
    }
    fn describe(&self) -> String {
        format!("fixed {}", self.set)
    }
}

/// Plays the listed sets in turn, wrapping around.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub role: Player,
    pub moves: Vec<PointSet>,
    next: usize,
}

impl Cycle {
    pub fn new(role: Player, moves: Vec<PointSet>) -> Self {
        assert!(!moves.is_empty(), "a cycle needs at least one move");
        Cycle {
            role,
            moves,
            next: 0,
        }
    }
}

impl Strategy for Cycle {
    fn role(&self) -> Player {
        self.role
    }
    fn choose(&mut self, _: &FinSpace, _: &[PointSet]) -> PointSet {
        let m = self.moves[self.next % self.moves.len()];
        self.next += 1;
        m
    }
    fn describe(&self) -> String {
        let moves: Vec<String> = self.moves.iter().map(|m| m.to_string()).collect();
        format!("cycle {}", moves.join(" "))
    }
}

/// II answers with I's move unchanged.
#[derive(Debug, Clone, Default)]
pub struct Echo;

impl Strategy for Echo {
    fn role(&self) -> Player {
        Player::II
    }
    fn choose(&mut self, _: &FinSpace, history: &[PointSet]) -> PointSet {
        *history.last().expect("II moves after I")
    }
    fn describe(&self) -> String {
        "echo".into()
    }
}

/// II answers with the smallest open inside I's move (fewest points, then
/// least bitmap).
#[derive(Debug, Clone, Default)]
pub struct MinimalReply;

impl Strategy for MinimalReply {
    fn role(&self) -> Player {
        Player::II
    }
    fn choose(&mut self, space: &FinSpace, history: &[PointSet]) -> PointSet {
        let a = *history.last().expect("II moves after I");
        subopens(space, a)
            .min_by_key(|o| (o.len(), *o))
            .unwrap_or(a)
    }
    fn describe(&self) -> String {
        "minimal".into()
    }
}

/// II answers so as to keep the progress as small as possible.
#[derive(Debug, Clone, Default)]
pub struct AvoidingReply;

impl Strategy for AvoidingReply {
    fn role(&self) -> Player {
        Player::II
    }
    fn choose(&mut self, space: &FinSpace, history: &[PointSet]) -> PointSet {
        let a = *history.last().expect("II moves after I");
        let progress = progress_of(space, &history[..history.len() - 1]);
        subopens(space, a)
            .min_by_key(|&o| (space.closure(progress | o).len(), o.len(), o))
            .unwrap_or(a)
    }
    fn describe(&self) -> String {
        "avoiding".into()
    }
}

/// II answers with a uniformly random open inside I's move.
#[derive(Debug, Clone)]
pub struct RandomReply {
    seed: u64,
    rng: StdRng,
}

impl RandomReply {
    pub fn new(seed: u64) -> Self {
        RandomReply {
            seed,
            rng: StdRng::seed_from_u64(seed),
        }
    }
}

impl Strategy for RandomReply {
    fn role(&self) -> Player {
        Player::II
    }
    fn choose(&mut self, space: &FinSpace, history: &[PointSet]) -> PointSet {
        let a = *history.last().expect("II moves after I");
        let options: Vec<PointSet> = subopens(space, a).collect();
        options.choose(&mut self.rng).copied().unwrap_or(a)
    }
    fn describe(&self) -> String {
        format!("random (seed {})", self.seed)
    }
}

/// Player I's strategy read off a completely embedded, ∩-closed family.
///
/// Against the current hole `H`, I plays a member of the family that
/// guards `H` in the sense of condition (c) and lies inside `cl(H)`,
/// taking the smallest such member. Any nonempty open inside `cl(H)`
/// meets `H`, so II's answer always adds a point to the progress. When no
/// member qualifies, I plays `H` itself.
#[derive(Debug, Clone)]
pub struct ClubStrategy {
    family: OpenFamily,
}

pub fn club_strategy(p: &OpenFamily) -> Result<ClubStrategy, GameError> {
    if !p.is_inter_closed() {
        return Err(GameError::PreconditionFailed(
            "the family is not closed under intersections".into(),
        ));
    }
    let verdict = is_completely_embedded(p);
    if let Some(v) = verdict.witness {
        return Err(GameError::PreconditionFailed(format!(
            "the family is not completely embedded: no member guards {v}"
        )));
    }
    Ok(ClubStrategy { family: p.clone() })
}

impl ClubStrategy {
    pub fn family(&self) -> &OpenFamily {
        &self.family
    }

    /// I's move at a given progress.
    pub fn move_at(&self, space: &FinSpace, progress: PointSet) -> PointSet {
        let hole = space.points() - progress;
        let room = space.closure(hole);
        guards(&self.family, hole)
            .filter(|w| w.is_subset(room))
            .min_by_key(|&w| (w.len(), w))
            .unwrap_or(hole)
    }
}

impl Strategy for ClubStrategy {
    fn role(&self) -> Player {
        Player::I
    }
    fn choose(&mut self, space: &FinSpace, history: &[PointSet]) -> PointSet {
        self.move_at(space, progress_of(space, history))
    }
    fn describe(&self) -> String {
        format!("club {}", self.family)
    }
}

/// The solver's winning moves for player I, keyed by progress.
#[derive(Debug, Clone)]
pub struct SolvedStrategy {
    moves: Arc<HashMap<PointSet, PointSet>>,
}

impl Strategy for SolvedStrategy {
    fn role(&self) -> Player {
        Player::I
    }
    fn choose(&mut self, space: &FinSpace, history: &[PointSet]) -> PointSet {
        let progress = progress_of(space, history);
        self.moves
            .get(&progress)
            .copied()
            .unwrap_or(space.points() - progress)
    }
    fn describe(&self) -> String {
        "solved".into()
    }
}

#[derive(Debug, Clone)]
pub struct GameSolution {
    pub winner: Player,
    /// Rounds I needs against best play, when I wins.
    pub rounds: Option<usize>,
    /// Rounds-to-win from each reachable progress set I can force.
    pub rank: HashMap<PointSet, usize>,
    moves: Arc<HashMap<PointSet, PointSet>>,
}

impl GameSolution {
    pub fn strategy(&self) -> SolvedStrategy {
        SolvedStrategy {
            moves: Arc::clone(&self.moves),
        }
    }

    pub fn move_at(&self, progress: PointSet) -> Option<PointSet> {
        self.moves.get(&progress).copied()
    }
}

/// Solves the game as a reachability game over progress sets.
///
/// `rank[S] = 0` when `S` is everything; otherwise `rank[S] = 1 + min_A
/// max_{B ⊆ A} rank[cl(S ∪ B)]`, computed as an attractor: a position is
/// ranked `k` once I has a move all of whose answers lead to positions
/// ranked below `k`. Player I wins iff the empty progress gets a rank.
pub fn solve_game(space: &Arc<FinSpace>) -> GameSolution {
    let full = space.points();
    let positions: Vec<PointSet> = space.closed_sets().collect();
    let opens: Vec<PointSet> = space.nonempty_opens().collect();
    let answers: Vec<Vec<PointSet>> = opens
        .iter()
        .map(|&a| opens.iter().copied().filter(|b| b.is_subset(a)).collect())
        .collect();
    let mut rank: HashMap<PointSet, usize> = HashMap::from([(full, 0)]);
    let mut moves: HashMap<PointSet, PointSet> = HashMap::new();
    let mut level = 0;
    loop {
        level += 1;
        let mut fresh = Vec::new();
        for &s in &positions {
            if rank.contains_key(&s) {
                continue;
            }
            let best = opens.iter().zip(&answers).find(|(_, bs)| {
                bs.iter()
                    .all(|&b| rank.get(&space.closure(s | b)).is_some_and(|&r| r < level))
            });
            if let Some((&a, _)) = best {
                fresh.push((s, a));
            }
        }
        if fresh.is_empty() {
            break;
        }
        for (s, a) in fresh {
            rank.insert(s, level);
            moves.insert(s, a);
        }
    }
    let rounds = rank.get(&PointSet::EMPTY).copied();
    GameSolution {
        winner: if rounds.is_some() {
            Player::I
        } else {
            Player::II
        },
        rounds,
        rank,
        moves: Arc::new(moves),
    }
}

/// One round: I's move, II's answer, and whether II's union became dense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Round {
    pub first: PointSet,
    pub second: PointSet,
    pub dense: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayTranscript {
    pub rounds: Vec<Round>,
    /// First round (1-based) after which II's union was dense.
    pub winner_at_round: Option<usize>,
    pub max_rounds: usize,
    /// Stopped at `max_rounds`, or aborted, without density.
    pub truncated: bool,
}

impl PlayTranscript {
    pub fn moves(&self) -> Vec<PointSet> {
        self.rounds
            .iter()
            .flat_map(|r| [r.first, r.second])
            .collect()
    }

    pub fn first_player_won(&self) -> bool {
        self.winner_at_round.is_some()
    }
}

impl fmt::Display for Round {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "I: {} | II: {} | dense: {}",
            self.first,
            self.second,
            if self.dense { "yes" } else { "no" }
        )
    }
}

impl fmt::Display for PlayTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rounds.iter().enumerate() {
            writeln!(f, "round {} | {r}", i + 1)?;
        }
        match self.winner_at_round {
            Some(k) => write!(f, "winner: I (round {k})"),
            None if self.truncated => write!(f, "truncated after {} rounds", self.rounds.len()),
            None => write!(f, "no winner"),
        }
    }
}

/// Default round bound: twice the number of opens.
pub fn default_round_bound(space: &FinSpace) -> usize {
    2 * space.opens().len()
}

/// Checks one move against the rules.
pub fn check_move(
    space: &FinSpace,
    player: Player,
    round: usize,
    played: PointSet,
    previous: Option<PointSet>,
) -> Result<(), GameError> {
    let illegal = |reason: String| GameError::IllegalMove {
        player,
        round,
        played,
        reason,
    };
    if played.is_empty() {
        return Err(illegal("the empty set is not a move".into()));
    }
    if !played.is_subset(space.points()) {
        return Err(illegal("the move names points outside the space".into()));
    }
    if !space.is_open(played) {
        return Err(illegal("the move is not open".into()));
    }
    if let Some(a) = previous {
        if !played.is_subset(a) {
            return Err(illegal(format!("the move is not inside I's move {a}")));
        }
    }
    Ok(())
}

/// Plays until II's union is dense or `max_rounds` rounds have passed.
pub fn play(
    space: &FinSpace,
    first: &mut dyn Strategy,
    second: &mut dyn Strategy,
    max_rounds: usize,
) -> Result<PlayTranscript, GameError> {
    for (expected, s) in [(Player::I, first.role()), (Player::II, second.role())] {
        if s != expected {
            return Err(GameError::WrongRole { expected, got: s });
        }
    }
    let mut history = Vec::new();
    let mut rounds = Vec::new();
    let mut union = PointSet::EMPTY;
    for round in 1..=max_rounds {
        let a = first.choose(space, &history);
        check_move(space, Player::I, round, a, None)?;
        history.push(a);
        let b = second.choose(space, &history);
        check_move(space, Player::II, round, b, Some(a))?;
        history.push(b);
        union = union | b;
        let dense = space.is_dense(union);
        rounds.push(Round {
            first: a,
            second: b,
            dense,
        });
        if dense {
            return Ok(PlayTranscript {
                rounds,
                winner_at_round: Some(round),
                max_rounds,
                truncated: false,
            });
        }
    }
    Ok(PlayTranscript {
        rounds,
        winner_at_round: None,
        max_rounds,
        truncated: true,
    })
}

/// Result of playing a strategy for I against every deterministic II.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryReport {
    /// Complete plays examined.
    pub plays: usize,
    /// Longest play before density.
    pub longest: usize,
    /// A play that was not dense within the bound, as alternating moves.
    pub losing_line: Option<Vec<PointSet>>,
}

/// Plays `first` against every deterministic strategy for II, bounded by
/// `max_rounds`. A deterministic II is a function of the history, so the
/// plays are exactly the branches of the tree where II may answer with
/// any nonempty open inside I's move.
pub fn adversary_search<S>(
    space: &FinSpace,
    first: &S,
    max_rounds: usize,
) -> Result<AdversaryReport, GameError>
where
    S: Strategy + Clone,
{
    let mut report = AdversaryReport {
        plays: 0,
        longest: 0,
        losing_line: None,
    };
    let mut history = Vec::new();
    explore(
        space,
        first,
        &mut history,
        PointSet::EMPTY,
        max_rounds,
        &mut report,
    )?;
    Ok(report)
}

fn explore<S>(
    space: &FinSpace,
    first: &S,
    history: &mut Vec<PointSet>,
    union: PointSet,
    max_rounds: usize,
    report: &mut AdversaryReport,
) -> Result<(), GameError>
where
    S: Strategy + Clone,
{
    if report.losing_line.is_some() {
        return Ok(());
    }
    let round = history.len() / 2 + 1;
    if round > max_rounds {
        report.plays += 1;
        report.losing_line = Some(history.clone());
        return Ok(());
    }
    // replay from scratch so stateful strategies see a consistent history
    let mut player = first.clone();
    let mut replay = Vec::new();
    for pair in history.chunks(2) {
        player.choose(space, &replay);
        replay.extend_from_slice(pair);
    }
    let a = player.choose(space, history);
    check_move(space, Player::I, round, a, None)?;
    history.push(a);
    let answers: Vec<PointSet> = subopens(space, a).collect();
    for b in answers {
        history.push(b);
        let next = union | b;
        if space.is_dense(next) {
            report.plays += 1;
            report.longest = report.longest.max(round);
        } else {
            explore(space, first, history, next, max_rounds, report)?;
        }
        history.pop();
        if report.losing_line.is_some() {
            break;
        }
    }
    history.pop();
    Ok(())
}
