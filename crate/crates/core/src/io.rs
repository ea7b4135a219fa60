//! Line-oriented text formats for spaces, families and maps.
//!
//! ```text
//! points 2          family            map d s
//! open -            open 1            send 0 1
//! open 1            open 0,1          send 1 1
//! open 0,1
//! ```
//!
//! Blank lines and `#` comments are ignored. Emitted files list sets in
//! bitmap order, so parsing and re-emitting is idempotent.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::family::{FamilyError, OpenFamily};
use crate::maps::{MapError, SpaceMap};
use crate::space::{FinSpace, PointSet, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Space(#[from] SpaceError),
    #[error("{0}")]
    Family(#[from] FamilyError),
    #[error("{0}")]
    Map(#[from] MapError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-blank lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Parses `-` or a comma-separated list of point indices.
pub fn parse_point_set(text: &str) -> Result<PointSet, String> {
    let text = text.trim();
    let text = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(text);
    if text == "-" || text.trim().is_empty() {
        return Ok(PointSet::EMPTY);
    }
    let mut set = PointSet::EMPTY;
    for part in text.split(',') {
        let x: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("`{}` is not a point index", part.trim()))?;
        if x >= crate::space::MAX_POINTS {
            return Err(format!("point {x} is out of range"));
        }
        set.insert(x);
    }
    Ok(set)
}

fn format_point_set(set: PointSet) -> String {
    if set.is_empty() {
        return "-".into();
    }
    set.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn open_line(line: usize, body: &str) -> Result<PointSet, ParseError> {
    let rest = body
        .strip_prefix("open")
        .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
        .ok_or_else(|| syntax(line, format!("expected `open <points>`, got `{body}`")))?;
    parse_point_set(rest).map_err(|m| syntax(line, m))
}

pub fn parse_space(text: &str) -> Result<FinSpace, ParseError> {
    let mut it = lines(text);
    let (line, header) = it.next().ok_or_else(|| syntax(1, "empty space file"))?;
    let n: usize = header
        .strip_prefix("points")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| syntax(line, format!("expected `points <n>`, got `{header}`")))?;
    let mut opens = Vec::new();
    for (line, body) in it {
        opens.push(open_line(line, body)?);
    }
    Ok(FinSpace::new(n, opens)?)
}

pub fn write_space(space: &FinSpace) -> String {
    let mut out = format!("points {}\n", space.n());
    for &open in space.opens() {
        let _ = writeln!(out, "open {}", format_point_set(open));
    }
    out
}

pub fn parse_family(text: &str, space: &Arc<FinSpace>) -> Result<OpenFamily, ParseError> {
    let mut it = lines(text);
    match it.next() {
        Some((_, "family")) => {}
        Some((line, other)) => {
            return Err(syntax(line, format!("expected `family`, got `{other}`")))
        }
        None => return Err(syntax(1, "empty family file")),
    }
    let mut members = Vec::new();
    for (line, body) in it {
        members.push(open_line(line, body)?);
    }
    Ok(OpenFamily::new(Arc::clone(space), members)?)
}

pub fn write_family(family: &OpenFamily) -> String {
    let mut out = String::from("family\n");
    for &m in family.members() {
        let _ = writeln!(out, "open {}", format_point_set(m));
    }
    out
}

/// A parsed map header and its point assignments, before the spaces
/// named in the header are resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpec {
    pub domain: String,
    pub codomain: String,
    pub assignment: Vec<usize>,
}

impl MapSpec {
    pub fn build(
        &self,
        domain: Arc<FinSpace>,
        codomain: Arc<FinSpace>,
    ) -> Result<SpaceMap, ParseError> {
        Ok(SpaceMap::new(domain, codomain, self.assignment.clone())?)
    }
}

/// Parses `map <domain-id> <codomain-id>` followed by `send <i> <j>`
/// lines; every domain point must be sent exactly once.
pub fn parse_map(text: &str) -> Result<MapSpec, ParseError> {
    let mut it = lines(text);
    let (line, header) = it.next().ok_or_else(|| syntax(1, "empty map file"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let ["map", domain, codomain] = words[..] else {
        return Err(syntax(
            line,
            format!("expected `map <domain> <codomain>`, got `{header}`"),
        ));
    };
    let mut sends: Vec<Option<usize>> = Vec::new();
    for (line, body) in it {
        let words: Vec<&str> = body.split_whitespace().collect();
        let ["send", i, j] = words[..] else {
            return Err(syntax(
                line,
                format!("expected `send <i> <j>`, got `{body}`"),
            ));
        };
        let parse = |w: &str| {
            w.parse::<usize>()
                .map_err(|_| syntax(line, format!("`{w}` is not a point index")))
        };
        let (i, j) = (parse(i)?, parse(j)?);
        if i >= crate::space::MAX_POINTS {
            return Err(syntax(line, format!("point {i} is out of range")));
        }
        if sends.len() <= i {
            sends.resize(i + 1, None);
        }
        if sends[i].replace(j).is_some() {
            return Err(syntax(line, format!("point {i} is sent twice")));
        }
    }
    let assignment = sends
        .iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| syntax(line, format!("point {i} is never sent"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MapSpec {
        domain: domain.into(),
        codomain: codomain.into(),
        assignment,
    })
}

pub fn write_map(map: &SpaceMap, domain: &str, codomain: &str) -> String {
    let mut out = format!("map {domain} {codomain}\n");
    for (i, j) in map.assignment().iter().enumerate() {
        let _ = writeln!(out, "send {i} {j}");
    }
    out
}
