use std::io::{self, BufRead, Write};

use fintop_core::game::{check_move, PlayTranscript, Round, Strategy};
use fintop_core::io::parse_point_set;
use fintop_core::{FinSpace, PointSet};

/// Plays `first` against a human at `input`, who answers for player II.
///
/// Each round prints I's move and reads a point list such as `1,2` or
/// `{1,2}`. Illegal answers are reported and asked for again. `quit` or
/// end of input stops the play with a truncated transcript.
pub fn repl_play<R, W>(
    space: &FinSpace,
    first: &mut dyn Strategy,
    max_rounds: usize,
    mut input: R,
    mut output: W,
) -> io::Result<PlayTranscript>
where
    R: BufRead,
    W: Write,
{
    let mut history = Vec::new();
    let mut rounds = Vec::new();
    let mut union = PointSet::EMPTY;
    let truncated = |rounds: Vec<Round>| PlayTranscript {
        rounds,
        winner_at_round: None,
        max_rounds,
        truncated: true,
    };
    for round in 1..=max_rounds {
        let a = first.choose(space, &history);
        if let Err(e) = check_move(space, first.role(), round, a, None) {
            writeln!(output, "{e}")?;
            return Ok(truncated(rounds));
        }
        writeln!(output, "round {round} | I: {a}")?;
        let b = loop {
            write!(output, "II> ")?;
            output.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                writeln!(output)?;
                return Ok(truncated(rounds));
            }
            let line = line.trim();
            if line == "quit" {
                return Ok(truncated(rounds));
            }
            let answer = match parse_point_set(line) {
                Ok(s) => s,
                Err(e) => {
                    writeln!(output, "invalid move: {e}")?;
                    continue;
                }
            };
            match check_move(space, fintop_core::Player::II, round, answer, Some(a)) {
                Ok(()) => break answer,
                Err(fintop_core::GameError::IllegalMove { reason, .. }) => {
                    writeln!(output, "invalid move: {reason}")?;
                }
                Err(e) => writeln!(output, "invalid move: {e}")?,
            }
        };
        history.extend([a, b]);
        union = union | b;
        let dense = space.is_dense(union);
        rounds.push(Round {
            first: a,
            second: b,
            dense,
        });
        if dense {
            writeln!(output, "dense after round {round}")?;
            return Ok(PlayTranscript {
                rounds,
                winner_at_round: Some(round),
                max_rounds,
                truncated: false,
            });
        }
    }
    Ok(truncated(rounds))
}
