//! Instance and solution text files.
//!
//! Instance files are line oriented, `#` starts a comment:
//!
//! ```text
//! vertices 4
//! edge 0 1 1
//! edge 1 2 3/2
//! req 0 2 1
//! bound 1 2
//! lower 3 1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use degsnd_core::{EdgeId, Instance, InstanceError, Rational, VertexId};
use num_traits::Signed;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("unknown directive {0:?}")]
    UnknownDirective(String),
    #[error("expected `vertices <n>` before any other directive")]
    MissingVertices,
    #[error("`vertices` given more than once")]
    DuplicateVertices,
    #[error("vertex id out of range: {vertex} (instance has {n} vertices)")]
    OutOfRange { vertex: VertexId, n: usize },
    #[error("negative cost {0}")]
    NegativeCost(Rational),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("requirement between vertex {0} and itself")]
    SelfRequirement(VertexId),
    #[error("conflicting req for pair ({u}, {v}): {first} (line {first_line}) vs {second}")]
    ConflictingRequirement { u: VertexId, v: VertexId, first: u32, first_line: usize, second: u32 },
    #[error("conflicting {kind} for vertex {vertex}: {first} (line {first_line}) vs {second}")]
    ConflictingValue { kind: &'static str, vertex: VertexId, first: u32, first_line: usize, second: u32 },
    #[error("edge {0} picked twice")]
    DuplicatePick(EdgeId),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// A parse failure at a 1-based line number (0 for end of input).
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn err<T>(line: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { line, kind })
}

fn malformed<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    err(line, ParseErrorKind::Malformed(msg.into()))
}

/// Non-empty lines with comments removed, as `(line number, tokens)`.
fn tokenized(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn expect_args<'a>(line: usize, tokens: &[&'a str], count: usize) -> Result<Vec<&'a str>, ParseError> {
    if tokens.len() != count + 1 {
        return malformed(line, format!("`{}` takes {count} arguments, got {}", tokens[0], tokens.len() - 1));
    }
    Ok(tokens[1..].to_vec())
}

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token.parse().or_else(|_| malformed(line, format!("bad {what} {token:?}")))
}

pub fn parse_rational(token: &str) -> Option<Rational> {
    if token.contains(|c: char| !(c.is_ascii_digit() || c == '/' || c == '-')) {
        return None;
    }
    Rational::from_str(token).ok()
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = tokenized(text);
    let n = match lines.next() {
        Some((line, tokens)) if tokens[0] == "vertices" => {
            number::<usize>(line, expect_args(line, &tokens, 1)?[0], "vertex count")?
        }
        Some((line, _)) => return err(line, ParseErrorKind::MissingVertices),
        None => return err(0, ParseErrorKind::MissingVertices),
    };
    let vertex = |line: usize, token: &str| -> Result<VertexId, ParseError> {
        let v = number::<VertexId>(line, token, "vertex id")?;
        if v < n {
            Ok(v)
        } else {
            err(line, ParseErrorKind::OutOfRange { vertex: v, n })
        }
    };

    let mut builder = Instance::builder(n);
    let mut reqs: BTreeMap<(VertexId, VertexId), (u32, usize)> = BTreeMap::new();
    let mut bounds: BTreeMap<VertexId, (u32, usize)> = BTreeMap::new();
    let mut lowers: BTreeMap<VertexId, (u32, usize)> = BTreeMap::new();
    let mut last = 0;
    for (line, tokens) in lines {
        last = line;
        match tokens[0] {
            "vertices" => return err(line, ParseErrorKind::DuplicateVertices),
            "edge" => {
                let args = expect_args(line, &tokens, 3)?;
                let (u, v) = (vertex(line, args[0])?, vertex(line, args[1])?);
                let cost = match parse_rational(args[2]) {
                    Some(c) => c,
                    None => return malformed(line, format!("bad cost {:?}", args[2])),
                };
                if u == v {
                    return err(line, ParseErrorKind::SelfLoop(u));
                }
                if cost.is_negative() {
                    return err(line, ParseErrorKind::NegativeCost(cost));
                }
                builder = builder.edge(u, v, cost);
            }
            "req" => {
                let args = expect_args(line, &tokens, 3)?;
                let (u, v) = (vertex(line, args[0])?, vertex(line, args[1])?);
                let rho: u32 = number(line, args[2], "requirement")?;
                if u == v {
                    return err(line, ParseErrorKind::SelfRequirement(u));
                }
                if rho == 0 {
                    return malformed(line, "requirement must be at least 1");
                }
                let key = (u.min(v), u.max(v));
                match reqs.get(&key) {
                    Some(&(first, first_line)) if first != rho => {
                        return err(
                            line,
                            ParseErrorKind::ConflictingRequirement {
                                u: key.0,
                                v: key.1,
                                first,
                                first_line,
                                second: rho,
                            },
                        )
                    }
                    Some(_) => {}
                    None => {
                        reqs.insert(key, (rho, line));
                    }
                }
            }
            directive @ ("bound" | "lower") => {
                let kind = if directive == "bound" { "bound" } else { "lower" };
                let args = expect_args(line, &tokens, 2)?;
                let v = vertex(line, args[0])?;
                let value: u32 = number(line, args[1], kind)?;
                if kind == "lower" && value == 0 {
                    return malformed(line, "lower bound must be at least 1");
                }
                let map = if kind == "bound" { &mut bounds } else { &mut lowers };
                match map.get(&v) {
                    Some(&(first, first_line)) if first != value => {
                        return err(
                            line,
                            ParseErrorKind::ConflictingValue { kind, vertex: v, first, first_line, second: value },
                        )
                    }
                    Some(_) => {}
                    None => {
                        map.insert(v, (value, line));
                    }
                }
            }
            other => return err(line, ParseErrorKind::UnknownDirective(other.to_string())),
        }
    }
    for ((u, v), (rho, _)) in reqs {
        builder = builder.req(u, v, rho);
    }
    for (v, (b, _)) in bounds {
        builder = builder.bound(v, b);
    }
    for (v, (l, _)) in lowers {
        builder = builder.lower(v, l);
    }
    builder.build().map_err(|e| ParseError { line: last, kind: e.into() })
}

/// Canonical text form: `vertices`, edges in id order, `req` with `u < v`
/// sorted, then `bound` and `lower` sorted by vertex.
pub fn write_instance(inst: &Instance) -> String {
    let mut s = String::new();
    writeln!(s, "vertices {}", inst.n()).unwrap();
    for e in inst.edges() {
        writeln!(s, "edge {} {} {}", e.u, e.v, e.cost).unwrap();
    }
    for ((u, v), rho) in inst.requirements() {
        writeln!(s, "req {u} {v} {rho}").unwrap();
    }
    for (v, b) in inst.bounds() {
        writeln!(s, "bound {v} {b}").unwrap();
    }
    for (v, l) in inst.lower_bounds() {
        writeln!(s, "lower {v} {l}").unwrap();
    }
    s
}

/// Contents of a solution file. `picks` keeps file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFile {
    pub cost: Rational,
    pub picks: Vec<EdgeId>,
}

pub fn write_solution(cost: &Rational, picked: &[EdgeId]) -> String {
    let mut ids = picked.to_vec();
    ids.sort_unstable();
    let mut s = format!("cost {cost}\n");
    for e in ids {
        writeln!(s, "pick {e}").unwrap();
    }
    s
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, ParseError> {
    let mut lines = tokenized(text);
    let cost = match lines.next() {
        Some((line, tokens)) if tokens[0] == "cost" => {
            let arg = expect_args(line, &tokens, 1)?[0];
            match parse_rational(arg) {
                Some(c) => c,
                None => return malformed(line, format!("bad cost {arg:?}")),
            }
        }
        Some((line, _)) => return malformed(line, "expected `cost <value>` first"),
        None => return malformed(0, "empty solution file"),
    };
    let mut picks = Vec::new();
    for (line, tokens) in lines {
        match tokens[0] {
            "pick" => {
                let e: EdgeId = number(line, expect_args(line, &tokens, 1)?[0], "edge id")?;
                if picks.contains(&e) {
                    return err(line, ParseErrorKind::DuplicatePick(e));
                }
                picks.push(e);
            }
            other => return err(line, ParseErrorKind::UnknownDirective(other.to_string())),
        }
    }
    Ok(SolutionFile { cost, picks })
}
