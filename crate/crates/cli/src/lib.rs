//! The `fintop` command line.

mod repl;

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fintop_core::embed::{c_star, is_bang_embedded, is_completely_embedded, is_predense};
use fintop_core::family::{finite_absorption, has_seq, seq_extend};
use fintop_core::game::{
    club_strategy, default_round_bound, play, solve_game, AvoidingReply, Cycle, Echo, FixedMove,
    MinimalReply, RandomReply, Strategy,
};
use fintop_core::io::{
    parse_family, parse_map, parse_point_set, parse_space, write_family, write_space,
};
use fintop_core::verify::{
    space_id, theorem_suite, Checkers, Mutation, SuiteConfig, Universe, Verdict, THEOREMS,
};
use fintop_core::{
    generate_lattice, quotient, CanonicalForm, FinSpace, OpenFamily, Player, SpaceCatalog,
};

pub use repl::repl_play;

/// Overrides the largest space the CLI will load.
pub const POINT_BUDGET_VAR: &str = "FINTOP_POINT_BUDGET";
const DEFAULT_POINT_BUDGET: usize = 12;

#[derive(Parser, Debug)]
#[command(
    name = "fintop",
    version,
    about = "Finite spaces, open families, quotient maps and the open-open game"
)]
struct Cli {
    /// Seed for randomized strategies; echoed in the output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate or enumerate spaces.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Lattice closure, Seq, and finite absorption.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Quotient by a family of opens.
    #[command(subcommand)]
    Quotient(QuotientCmd),
    /// Classify continuous maps.
    #[command(subcommand)]
    Map(MapCmd),
    /// Predensity and the embedding relations.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Solve or play the open-open game.
    #[command(subcommand)]
    Game(GameCmd),
    /// Run the exhaustive theorem suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SpaceArg {
    /// Space file.
    #[arg(long)]
    space: PathBuf,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[command(flatten)]
    space: SpaceArg,
    /// Family file on that space.
    #[arg(long)]
    family: PathBuf,
}

#[derive(Subcommand, Debug)]
enum SpaceCmd {
    /// Load a space file and report its shape.
    Validate(SpaceArg),
    /// List T0 spaces on `n` points in the space file format.
    Enumerate {
        #[arg(long)]
        points: usize,
        /// Every labelling instead of one per homeomorphism class.
        #[arg(long)]
        labeled: bool,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Close a family under finite unions and intersections.
    Close(FamilyArgs),
    /// Check Seq for each member, optionally extending to a Seq lattice.
    Seq {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        extend: bool,
    },
    /// Pull a finite part of the closure back to generators.
    Absorb {
        #[command(flatten)]
        family: FamilyArgs,
        /// Family of closure elements to absorb.
        #[arg(long)]
        target: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum QuotientCmd {
    /// Build X/P and the quotient map.
    Build(FamilyArgs),
}

#[derive(Subcommand, Debug)]
enum MapCmd {
    /// Classify a map between two loaded spaces.
    Classify {
        /// `name=file`, or a file whose stem is the name; repeatable.
        #[arg(long = "space", required = true)]
        spaces: Vec<String>,
        #[arg(long)]
        map: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Relation {
    C,
    Bang,
    Predense,
}

#[derive(Subcommand, Debug)]
enum EmbedCmd {
    /// Check `⊂_c`, `⊂_!`, or predensity of `--sub` in the family.
    Check {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        relation: Relation,
        /// Subfamily file, for `--relation predense`.
        #[arg(long)]
        sub: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GameCmd {
    /// Decide the game and print I's winning moves.
    Solve(SpaceArg),
    /// Play two strategies against each other.
    Play {
        #[command(flatten)]
        space: SpaceArg,
        /// `club:FAMILY_FILE`, `solved`, or `fixed:POINTS`.
        #[arg(long = "strategy-i", default_value = "solved")]
        strategy_i: String,
        /// `echo`, `minimal`, `avoiding`, `random`, `fixed:POINTS`, or
        /// `cycle:POINTS;POINTS;…`.
        #[arg(long = "strategy-ii", default_value = "minimal")]
        strategy_ii: String,
        /// Read II's moves from standard input.
        #[arg(long)]
        interactive: bool,
        /// Round bound; twice the number of opens by default.
        #[arg(long)]
        rounds: Option<usize>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum UniverseArg {
    Canonical,
    Labeled,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MutationArg {
    PredenseWithoutRefinement,
    EmbeddingAllowsEmptyGuard,
    BangWithoutSeparation,
    ClosureWithoutIntersections,
    DOpenWithoutInterior,
    SeqComplementInUnion,
}

impl From<MutationArg> for Mutation {
    fn from(m: MutationArg) -> Self {
        match m {
            MutationArg::PredenseWithoutRefinement => Mutation::PredenseWithoutRefinement,
            MutationArg::EmbeddingAllowsEmptyGuard => Mutation::EmbeddingAllowsEmptyGuard,
            MutationArg::BangWithoutSeparation => Mutation::BangWithoutSeparation,
            MutationArg::ClosureWithoutIntersections => Mutation::ClosureWithoutIntersections,
            MutationArg::DOpenWithoutInterior => Mutation::DOpenWithoutInterior,
            MutationArg::SeqComplementInUnion => Mutation::SeqComplementInUnion,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "max-points")]
    max_points: usize,
    /// Restrict to a theorem id; repeatable.
    #[arg(long = "theorem")]
    theorems: Vec<String>,
    /// Write one JSON record per verdict.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = UniverseArg::Canonical)]
    universe: UniverseArg,
    /// Run with one checker deliberately corrupted.
    #[arg(long, value_enum)]
    mutate: Option<MutationArg>,
}

/// Runs the command line `args` (program name first) and returns the exit
/// status: 0 on success, 1 when a check finds a counterexample, 2 on
/// usage or input errors.
pub fn run<R, W, E>(args: &[String], input: R, mut out: W, mut err: E) -> i32
where
    R: BufRead,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, input, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn point_budget() -> Result<usize> {
    match std::env::var(POINT_BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow!("{POINT_BUDGET_VAR}={v} is not a number")),
        Err(_) => Ok(DEFAULT_POINT_BUDGET),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_space(path: &Path) -> Result<Arc<FinSpace>> {
    let space =
        parse_space(&read(path)?).with_context(|| format!("invalid space {}", path.display()))?;
    let budget = point_budget()?;
    if space.n() > budget {
        bail!(
            "{} has {} points, over the point budget of {budget} (set {POINT_BUDGET_VAR} to raise it)",
            path.display(),
            space.n()
        );
    }
    Ok(Arc::new(space))
}

fn load_family(path: &Path, space: &Arc<FinSpace>) -> Result<OpenFamily> {
    parse_family(&read(path)?, space).with_context(|| format!("invalid family {}", path.display()))
}

fn load_pair(args: &FamilyArgs) -> Result<(Arc<FinSpace>, OpenFamily)> {
    let space = load_space(&args.space.space)?;
    let family = load_family(&args.family, &space)?;
    Ok((space, family))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dispatch<R: BufRead>(cli: Cli, input: R, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Space(cmd) => space_cmd(cmd, out),
        Command::Lattice(cmd) => lattice_cmd(cmd, out),
        Command::Quotient(QuotientCmd::Build(args)) => quotient_build(&args, out),
        Command::Map(MapCmd::Classify { spaces, map }) => map_classify(&spaces, &map, out),
        Command::Embed(EmbedCmd::Check {
            family,
            relation,
            sub,
        }) => embed_check(&family, relation, sub.as_deref(), out),
        Command::Game(GameCmd::Solve(args)) => game_solve(&args, out),
        Command::Game(GameCmd::Play {
            space,
            strategy_i,
            strategy_ii,
            interactive,
            rounds,
        }) => {
            let space = load_space(&space.space)?;
            let mut first = parse_strategy_i(&strategy_i, &space)?;
            let rounds = rounds.unwrap_or_else(|| default_round_bound(&space));
            writeln!(out, "I: {}", first.describe())?;
            if interactive {
                writeln!(out, "II: interactive")?;
                let transcript = repl_play(&space, first.as_mut(), rounds, input, &mut *out)?;
                writeln!(out, "{transcript}")?;
                return Ok(0);
            }
            let mut second = parse_strategy_ii(&strategy_ii, cli.seed)?;
            writeln!(out, "II: {}", second.describe())?;
            if strategy_ii == "random" {
                writeln!(out, "seed: {}", cli.seed)?;
            }
            let transcript = play(&space, first.as_mut(), second.as_mut(), rounds)?;
            writeln!(out, "{transcript}")?;
            Ok(if transcript.first_player_won() { 0 } else { 1 })
        }
        Command::Verify(args) => verify(&args, out),
    }
}

fn space_cmd(cmd: SpaceCmd, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        SpaceCmd::Validate(args) => {
            let space = load_space(&args.space)?;
            writeln!(out, "points: {}", space.n())?;
            writeln!(out, "opens: {}", space.opens().len())?;
            writeln!(out, "t0: {}", yes_no(space.is_t0()))?;
            let nbhds: Vec<String> = space
                .min_neighborhoods()
                .iter()
                .map(|u| u.to_string())
                .collect();
            writeln!(out, "minimal neighbourhoods: {}", nbhds.join(" "))?;
            if let Ok(form) = CanonicalForm::of(&space) {
                writeln!(out, "canonical form: {form}")?;
            }
            Ok(0)
        }
        SpaceCmd::Enumerate { points, labeled } => {
            let budget = point_budget()?;
            if points > budget {
                bail!("{points} points is over the point budget of {budget}");
            }
            let catalog = SpaceCatalog::new(points)?;
            let spaces: Vec<FinSpace> = if labeled {
                catalog.labeled(points)?.collect()
            } else {
                catalog.up_to_homeomorphism(points)?.to_vec()
            };
            for space in &spaces {
                writeln!(out, "# {}", space_id(space))?;
                write!(out, "{}", write_space(space))?;
            }
            writeln!(out, "# {} spaces", spaces.len())?;
            Ok(0)
        }
    }
}

fn lattice_cmd(cmd: LatticeCmd, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        LatticeCmd::Close(args) => {
            let (_, family) = load_pair(&args)?;
            let closure = generate_lattice(&family);
            let mut listed: Vec<_> = closure
                .result()
                .members()
                .iter()
                .map(|&set| {
                    (
                        closure
                            .provenance(set)
                            .expect("every element has provenance"),
                        set,
                    )
                })
                .collect();
            listed.sort_by_key(|(p, set)| (p.level, *set));
            for (p, set) in listed {
                match p.operation {
                    None => writeln!(out, "level 0 | {set} | generator")?,
                    Some(op) => {
                        let support: Vec<String> =
                            p.support.iter().map(|s| s.to_string()).collect();
                        writeln!(
                            out,
                            "level {} | {set} | {} of {}",
                            p.level,
                            format!("{op:?}").to_lowercase(),
                            support.join(" ")
                        )?
                    }
                }
            }
            writeln!(out, "levels: {}", closure.levels().len())?;
            write!(out, "{}", write_family(closure.result()))?;
            Ok(0)
        }
        LatticeCmd::Seq { family, extend } => {
            let (_, family) = load_pair(&family)?;
            let report = has_seq(&family);
            for v in &report.verdicts {
                let chain = match &v.witness {
                    Some(w) => {
                        let u: Vec<String> = w.u_chain.iter().map(|s| s.to_string()).collect();
                        let v: Vec<String> = w.v_chain.iter().map(|s| s.to_string()).collect();
                        format!("u: {} v: {}", u.join(" "), v.join(" "))
                    }
                    None => "none".into(),
                };
                writeln!(
                    out,
                    "{} | seq: {} | chain: {chain}",
                    v.target,
                    yes_no(v.closed_form)
                )?;
            }
            writeln!(out, "seq: {}", yes_no(report.holds))?;
            if extend {
                let extended = seq_extend(&family)?;
                writeln!(out, "extension:")?;
                write!(out, "{}", write_family(&extended))?;
            }
            Ok(if report.holds || extend { 0 } else { 1 })
        }
        LatticeCmd::Absorb { family, target } => {
            let (space, a) = load_pair(&family)?;
            let v = load_family(&target, &space)?;
            let abs = finite_absorption(&a, &v)?;
            for (i, step) in abs.descent.iter().enumerate() {
                let sets: Vec<String> = step.iter().map(|s| s.to_string()).collect();
                writeln!(out, "step {i} | {}", sets.join(" "))?;
            }
            writeln!(out, "sandwich: {}", yes_no(abs.sandwich_holds))?;
            write!(out, "{}", write_family(&abs.family))?;
            Ok(if abs.sandwich_holds { 0 } else { 1 })
        }
    }
}

fn quotient_build(args: &FamilyArgs, out: &mut dyn Write) -> Result<i32> {
    let (_, family) = load_pair(args)?;
    let r = quotient(&family);
    for (i, c) in r.classes.iter().enumerate() {
        writeln!(out, "class {i} | {c}")?;
    }
    let base: Vec<String> = r.base().iter().map(|s| s.to_string()).collect();
    writeln!(out, "base: {}", base.join(" "))?;
    writeln!(out, "q: {}", r.q)?;
    writeln!(out, "q {}", r.q.classify())?;
    writeln!(out, "base check: {:?}", r.base_check)?;
    write!(out, "{}", write_space(&r.quotient_space))?;
    Ok(0)
}

fn map_classify(spaces: &[String], map: &Path, out: &mut dyn Write) -> Result<i32> {
    let mut named: HashMap<String, Arc<FinSpace>> = HashMap::new();
    for spec in spaces {
        let (name, path) = match spec.split_once('=') {
            Some((name, path)) => (name.to_string(), PathBuf::from(path)),
            None => {
                let path = PathBuf::from(spec);
                let stem = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .ok_or_else(|| anyhow!("cannot name the space at {spec}"))?
                    .to_string();
                (stem, path)
            }
        };
        let space = load_space(&path)?;
        if named.insert(name.clone(), space).is_some() {
            bail!("space name {name} is given twice");
        }
    }
    let spec = parse_map(&read(map)?).with_context(|| format!("invalid map {}", map.display()))?;
    let lookup = |name: &str| {
        named
            .get(name)
            .cloned()
            .ok_or_else(|| anyhow!("map refers to unknown space {name}"))
    };
    let f = spec.build(lookup(&spec.domain)?, lookup(&spec.codomain)?)?;
    let c = f.classify();
    writeln!(out, "map: {f}")?;
    writeln!(out, "continuous: yes")?;
    writeln!(out, "open: {}", yes_no(c.open))?;
    writeln!(out, "d-open: {}", yes_no(c.d_open))?;
    writeln!(out, "skeletal: {}", yes_no(c.skeletal))?;
    writeln!(out, "surjective: {}", yes_no(c.surjective))?;
    let core = f.corestrict().map.classify();
    if core != c {
        writeln!(out, "onto image: {core}")?;
    }
    Ok(0)
}

fn embed_check(
    args: &FamilyArgs,
    relation: Relation,
    sub: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let (space, family) = load_pair(args)?;
    let holds = match relation {
        Relation::C => {
            let v = is_completely_embedded(&family);
            writeln!(out, "(c): {}", yes_no(v.holds))?;
            if let Some(w) = v.witness {
                writeln!(out, "unguarded open: {w}")?;
            }
            if let Ok(star) = c_star(&family) {
                writeln!(out, "(c*): {}", yes_no(star.holds()))?;
            }
            v.holds
        }
        Relation::Bang => {
            let v = is_bang_embedded(&family);
            writeln!(out, "bang: {}", yes_no(v.holds))?;
            if let Some(w) = &v.witness {
                let s: Vec<String> = w.subfamily.iter().map(|s| s.to_string()).collect();
                writeln!(out, "unseparated: point {} from [{}]", w.point, s.join(" "))?;
            }
            v.holds
        }
        Relation::Predense => {
            let sub = sub.ok_or_else(|| anyhow!("--relation predense needs --sub"))?;
            let w = load_family(sub, &space)?;
            let holds = is_predense(&w, &family)?;
            writeln!(out, "predense: {}", yes_no(holds))?;
            writeln!(
                out,
                "dense union: {}",
                yes_no(space.is_dense(w.union_of_members()))
            )?;
            holds
        }
    };
    Ok(if holds { 0 } else { 1 })
}

fn game_solve(args: &SpaceArg, out: &mut dyn Write) -> Result<i32> {
    let space = load_space(&args.space)?;
    let solution = solve_game(&space);
    match solution.rounds {
        Some(k) => writeln!(out, "winner: {} (round {k})", solution.winner)?,
        None => writeln!(out, "winner: {}", solution.winner)?,
    }
    let mut ranked: Vec<_> = solution
        .rank
        .iter()
        .map(|(&p, &r)| (std::cmp::Reverse(r), p))
        .collect();
    ranked.sort_unstable();
    for (std::cmp::Reverse(rank), progress) in ranked {
        match solution.move_at(progress) {
            Some(m) => writeln!(
                out,
                "progress {progress} | rounds left {rank} | I plays {m}"
            )?,
            None => writeln!(out, "progress {progress} | rounds left {rank}")?,
        }
    }
    Ok(if solution.winner == Player::I { 0 } else { 1 })
}

fn parse_points(text: &str) -> Result<fintop_core::PointSet> {
    parse_point_set(text).map_err(|e| anyhow!(e))
}

fn parse_strategy_i(spec: &str, space: &Arc<FinSpace>) -> Result<Box<dyn Strategy>> {
    if spec == "solved" {
        return Ok(Box::new(solve_game(space).strategy()));
    }
    if let Some(path) = spec.strip_prefix("club:") {
        let family = load_family(Path::new(path), space)?;
        return Ok(Box::new(club_strategy(&family)?));
    }
    if let Some(points) = spec.strip_prefix("fixed:") {
        return Ok(Box::new(FixedMove {
            role: Player::I,
            set: parse_points(points)?,
        }));
    }
    bail!("unknown strategy for I: {spec} (expected club:FILE, solved, or fixed:POINTS)")
}

fn parse_strategy_ii(spec: &str, seed: u64) -> Result<Box<dyn Strategy>> {
    Ok(match spec {
        "echo" => Box::new(Echo),
        "minimal" => Box::new(MinimalReply),
        "avoiding" => Box::new(AvoidingReply),
        "random" => Box::new(RandomReply::new(seed)),
        _ => {
            if let Some(points) = spec.strip_prefix("fixed:") {
                Box::new(FixedMove {
                    role: Player::II,
                    set: parse_points(points)?,
                })
            } else if let Some(list) = spec.strip_prefix("cycle:") {
                let moves = list
                    .split(';')
                    .map(parse_points)
                    .collect::<Result<Vec<_>>>()?;
                if moves.is_empty() {
                    bail!("cycle needs at least one move");
                }
                Box::new(Cycle::new(Player::II, moves))
            } else {
                bail!("unknown strategy for II: {spec} (expected echo, minimal, avoiding, random, fixed:POINTS, or cycle:POINTS;…)")
            }
        }
    })
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let budget = point_budget()?;
    if args.max_points == 0 || args.max_points > budget {
        bail!("--max-points must be between 1 and the point budget {budget}");
    }
    if let Some(bad) = args
        .theorems
        .iter()
        .find(|t| !THEOREMS.contains(&t.as_str()))
    {
        bail!("unknown theorem {bad}; known: {}", THEOREMS.join(", "));
    }
    let mut config = SuiteConfig::new(args.max_points);
    config.universe = match args.universe {
        UniverseArg::Canonical => Universe::Canonical,
        UniverseArg::Labeled => Universe::LabeledExact,
    };
    if !args.theorems.is_empty() {
        config.theorems = Some(args.theorems.clone());
    }
    if let Some(m) = args.mutate {
        config.checkers = Checkers::mutated(m.into());
        writeln!(out, "mutation: {:?}", Mutation::from(m))?;
    }
    let reports = theorem_suite(&config)?;
    let mut file = match &args.report {
        Some(path) => Some(
            fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        ),
        None => None,
    };
    for r in &reports {
        writeln!(out, "{r}")?;
        if let Some(f) = file.as_mut() {
            writeln!(f, "{}", serde_json::to_string(r)?)?;
        }
    }
    let failures = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .count();
    let instances: usize = reports.iter().map(|r| r.instances).sum();
    writeln!(
        out,
        "{} verdicts, {instances} instances, {failures} with counterexamples",
        reports.len()
    )?;
    Ok(if failures > 0 { 1 } else { 0 })
}
