//! Iteration trace files: one `key=value` line per LP solve.
//!
//! ```text
//! start active=6 constrained=4 bounds=0:1,1:1,2:1,3:1
//! iteration=0 lp_value=2 support_size=4 action=zero_edge:1 active=5 constrained=4 changes=-
//! iteration=1 lp_value=2 support_size=4 action=one_edge:0 active=4 constrained=4 changes=0:1>0,1:1>0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use degsnd_core::{Instance, IterationRecord, Rational, VertexId};

use crate::format::{parse_rational, ParseError, ParseErrorKind};

const HEADER: &str = "\
# one line per LP solve; active = |E'| and constrained = |W'| after the action
# residual requirements subtract the edges picked so far
# each LP is solved to the first optimal basis reached by Bland's rule
";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Start {
    pub active: usize,
    pub constrained: usize,
    pub bounds: BTreeMap<VertexId, Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceAction {
    pub kind: String,
    pub witness: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceChange {
    pub vertex: VertexId,
    pub before: Rational,
    pub after: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub iteration: usize,
    pub lp_value: Rational,
    pub support_size: usize,
    pub actions: Vec<TraceAction>,
    pub active: usize,
    pub constrained: usize,
    pub changes: Vec<TraceChange>,
}

impl TraceLine {
    pub fn size(&self) -> usize {
        self.active + self.constrained
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub start: Start,
    pub lines: Vec<TraceLine>,
}

impl Trace {
    pub fn from_run(inst: &Instance, records: &[IterationRecord]) -> Self {
        let bounds = inst.bounds().iter().map(|(&v, &b)| (v, Rational::from_integer(b.into()))).collect();
        let start = Start { active: inst.num_edges(), constrained: inst.bounds().len(), bounds };
        let lines = records
            .iter()
            .map(|r| TraceLine {
                iteration: r.iteration,
                lp_value: r.lp_value.clone(),
                support_size: r.support_size,
                actions: r
                    .actions
                    .iter()
                    .map(|a| TraceAction { kind: a.case.kind().to_string(), witness: a.case.witness().unwrap_or(0) })
                    .collect(),
                active: r.active,
                constrained: r.constrained,
                changes: r
                    .actions
                    .iter()
                    .flat_map(|a| &a.changes)
                    .map(|c| TraceChange { vertex: c.vertex, before: c.before.clone(), after: c.after.clone() })
                    .collect(),
            })
            .collect();
        Trace { start, lines }
    }

    /// First iteration whose `|E'| + |W'|` fails to drop below the previous
    /// line (or the start line).
    pub fn first_stall(&self) -> Option<usize> {
        let mut last = self.start.active + self.start.constrained;
        for line in &self.lines {
            if line.size() >= last {
                return Some(line.iteration);
            }
            last = line.size();
        }
        None
    }
}

fn list<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.iter().map(f).collect::<Vec<_>>().join(",")
    }
}

pub fn write_trace(trace: &Trace) -> String {
    let mut s = String::from(HEADER);
    let bounds: Vec<_> = trace.start.bounds.iter().collect();
    writeln!(
        s,
        "start active={} constrained={} bounds={}",
        trace.start.active,
        trace.start.constrained,
        list(&bounds, |(v, b)| format!("{v}:{b}"))
    )
    .unwrap();
    for l in &trace.lines {
        writeln!(
            s,
            "iteration={} lp_value={} support_size={} action={} active={} constrained={} changes={}",
            l.iteration,
            l.lp_value,
            l.support_size,
            list(&l.actions, |a| format!("{}:{}", a.kind, a.witness)),
            l.active,
            l.constrained,
            list(&l.changes, |c| format!("{}:{}>{}", c.vertex, c.before, c.after)),
        )
        .unwrap();
    }
    s
}

struct Fields<'a> {
    line: usize,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Fields<'a> {
    fn new(line: usize, tokens: &[&'a str]) -> Result<Self, ParseError> {
        let mut map = BTreeMap::new();
        for t in tokens {
            let (k, v) = t.split_once('=').ok_or_else(|| bad(line, format!("expected key=value, got {t:?}")))?;
            if map.insert(k, v).is_some() {
                return Err(bad(line, format!("field {k} repeated")));
            }
        }
        Ok(Fields { line, map })
    }

    fn raw(&self, key: &str) -> Result<&'a str, ParseError> {
        self.map.get(key).copied().ok_or_else(|| bad(self.line, format!("missing field {key}")))
    }

    fn count(&self, key: &str) -> Result<usize, ParseError> {
        let raw = self.raw(key)?;
        raw.parse().map_err(|_| bad(self.line, format!("bad {key} {raw:?}")))
    }

    fn rational(&self, key: &str) -> Result<Rational, ParseError> {
        let raw = self.raw(key)?;
        parse_rational(raw).ok_or_else(|| bad(self.line, format!("bad {key} {raw:?}")))
    }

    fn items(&self, key: &str) -> Result<Vec<&'a str>, ParseError> {
        let raw = self.raw(key)?;
        Ok(if raw == "-" { Vec::new() } else { raw.split(',').collect() })
    }
}

fn bad(line: usize, msg: String) -> ParseError {
    ParseError { line, kind: ParseErrorKind::Malformed(msg) }
}

fn rational_at(line: usize, raw: &str) -> Result<Rational, ParseError> {
    parse_rational(raw).ok_or_else(|| bad(line, format!("bad value {raw:?}")))
}

fn index_at(line: usize, raw: &str) -> Result<usize, ParseError> {
    raw.parse().map_err(|_| bad(line, format!("bad index {raw:?}")))
}

pub fn parse_trace(text: &str) -> Result<Trace, ParseError> {
    let mut start = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens[0] == "start" {
            if start.is_some() || !lines.is_empty() {
                return Err(bad(line, "`start` must come first and only once".to_string()));
            }
            let f = Fields::new(line, &tokens[1..])?;
            let mut bounds = BTreeMap::new();
            for item in f.items("bounds")? {
                let (v, b) = item.split_once(':').ok_or_else(|| bad(line, format!("bad bound {item:?}")))?;
                bounds.insert(index_at(line, v)?, rational_at(line, b)?);
            }
            start = Some(Start { active: f.count("active")?, constrained: f.count("constrained")?, bounds });
            continue;
        }
        if start.is_none() {
            return Err(bad(line, "trace must open with a `start` line".to_string()));
        }
        let f = Fields::new(line, &tokens)?;
        let mut actions = Vec::new();
        for item in f.items("action")? {
            let (kind, w) = item.split_once(':').ok_or_else(|| bad(line, format!("bad action {item:?}")))?;
            actions.push(TraceAction { kind: kind.to_string(), witness: index_at(line, w)? });
        }
        let mut changes = Vec::new();
        for item in f.items("changes")? {
            let parsed = item.split_once(':').and_then(|(v, rest)| rest.split_once('>').map(|(b, a)| (v, b, a)));
            let (v, before, after) = parsed.ok_or_else(|| bad(line, format!("bad change {item:?}")))?;
            changes.push(TraceChange {
                vertex: index_at(line, v)?,
                before: rational_at(line, before)?,
                after: rational_at(line, after)?,
            });
        }
        lines.push(TraceLine {
            iteration: f.count("iteration")?,
            lp_value: f.rational("lp_value")?,
            support_size: f.count("support_size")?,
            actions,
            active: f.count("active")?,
            constrained: f.count("constrained")?,
            changes,
        });
    }
    let start = start.ok_or_else(|| bad(0, "empty trace".to_string()))?;
    Ok(Trace { start, lines })
}

/// Human-readable table of the iterations, the `b'` trajectory of every
/// degree-bounded vertex, and the progress check.
pub fn render_trace(trace: &Trace) -> String {
    let mut s = String::new();
    writeln!(s, "start |E'|={} |W'|={}", trace.start.active, trace.start.constrained).unwrap();
    writeln!(
        s,
        "{:>5}  {:>10}  {:>7}  {:<20}  {:>5}  {:>5}  {:>9}",
        "iter", "lp_value", "support", "action", "|E'|", "|W'|", "|E'|+|W'|"
    )
    .unwrap();
    let mut paths: BTreeMap<VertexId, Vec<String>> =
        trace.start.bounds.iter().map(|(&v, b)| (v, vec![b.to_string()])).collect();
    for l in &trace.lines {
        let action = list(&l.actions, |a| format!("{}:{}", a.kind, a.witness));
        writeln!(
            s,
            "{:>5}  {:>10}  {:>7}  {:<20}  {:>5}  {:>5}  {:>9}",
            l.iteration,
            l.lp_value.to_string(),
            l.support_size,
            action,
            l.active,
            l.constrained,
            l.size()
        )
        .unwrap();
        for c in &l.changes {
            paths.entry(c.vertex).or_insert_with(|| vec![c.before.to_string()]).push(c.after.to_string());
        }
        for a in l.actions.iter().filter(|a| a.kind == "relax_vertex") {
            paths.entry(a.witness).or_default().push("relaxed".to_string());
        }
    }
    if !paths.is_empty() {
        writeln!(s, "b' trajectories").unwrap();
        for (v, path) in &paths {
            writeln!(s, "  v{v}: {}", path.join(" -> ")).unwrap();
        }
    }
    match trace.first_stall() {
        None => writeln!(s, "progress: |E'|+|W'| strictly decreasing over {} iterations", trace.lines.len()).unwrap(),
        Some(i) => writeln!(s, "progress: |E'|+|W'| did not decrease at iteration {i}").unwrap(),
    }
    s
}
