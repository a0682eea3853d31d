//! Traces of transformation steps and their text form.
//!
//! One step per line:
//!
//! ```text
//! collapse n=2 boundary=0,1,3 interior=4,5 new=6
//! expand v=3 disk=5:0-1,0-2,1-2,2-3,2-4,3-4 glue=0:1,1:2,3:5,4:7
//! ct-delete-point v=4
//! ct-glue-point v=9 attach=1,2
//! ct-delete-edge u=1 v=2
//! ct-glue-edge u=1 v=2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::TransformStep;
use crate::classify::{Decision, Topology};
use crate::cliques::clique_number;
use crate::error::{FormatError, TransformError};
use crate::format::{read_inline, write_inline};
use crate::space::{DigitalSpace, Label, VertexSet};

/// A step together with the step that undoes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: TransformStep,
    pub inverse: TransformStep,
}

/// Predicate every intermediate space of a trace must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "n", rename_all = "kebab-case")]
pub enum TracePredicate {
    Unchecked,
    ClosedManifold(usize),
    Disk(usize),
}

impl TracePredicate {
    fn holds(self, g: &DigitalSpace, topo: &Topology) -> Decision {
        match self {
            TracePredicate::Unchecked => Decision::True,
            TracePredicate::ClosedManifold(n) => topo.manifold_decision(g, n),
            TracePredicate::Disk(n) => topo.disk_decision(g, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformTrace {
    pub initial: DigitalSpace,
    pub entries: Vec<TraceEntry>,
    pub final_space: DigitalSpace,
    pub predicate: TracePredicate,
}

impl TransformTrace {
    pub fn new(initial: DigitalSpace, predicate: TracePredicate) -> Self {
        Self {
            final_space: initial.clone(),
            initial,
            entries: Vec::new(),
            predicate,
        }
    }

    /// Appends an entry whose step was applied to the current final space.
    pub fn push(&mut self, entry: TraceEntry, next: DigitalSpace) {
        self.entries.push(entry);
        self.final_space = next;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn steps(&self) -> impl Iterator<Item = &TransformStep> {
        self.entries.iter().map(|e| &e.step)
    }

    pub fn to_text(&self) -> String {
        write_steps(self.steps())
    }

    /// Replays every step from the initial space, checking the predicate on
    /// each intermediate space and the recorded final space at the end.
    pub fn validate(&self, topo: &Topology) -> Result<(), TransformError> {
        let mut cur = self.initial.clone();
        for (step, entry) in self.entries.iter().enumerate() {
            let wrap = |e| TransformError::Step {
                step,
                source: Box::new(e),
            };
            let (next, inverse) = entry.step.apply(&cur, topo).map_err(wrap)?;
            if inverse != entry.inverse {
                return Err(wrap(TransformError::ReplayMismatch));
            }
            match self.predicate.holds(&next, topo) {
                Decision::True => {}
                Decision::Indeterminate => return Err(wrap(TransformError::Indeterminate)),
                Decision::False => return Err(wrap(TransformError::ReplayMismatch)),
            }
            cur = next;
        }
        if cur != self.final_space {
            return Err(TransformError::ReplayMismatch);
        }
        Ok(())
    }
}

/// Applies `steps` to `initial` in order.
pub fn replay<'a, I>(initial: &DigitalSpace, steps: I, topo: &Topology) -> Result<DigitalSpace, TransformError>
where
    I: IntoIterator<Item = &'a TransformStep>,
{
    let mut cur = initial.clone();
    for (step, s) in steps.into_iter().enumerate() {
        cur = s
            .apply(&cur, topo)
            .map_err(|e| TransformError::Step {
                step,
                source: Box::new(e),
            })?
            .0;
    }
    Ok(cur)
}

fn ids(set: &VertexSet) -> String {
    set.iter().map(Label::to_string).collect::<Vec<_>>().join(",")
}

fn write_step(out: &mut String, step: &TransformStep) {
    let _ = match step {
        TransformStep::Collapse {
            n,
            boundary,
            interior,
            new,
        } => writeln!(
            out,
            "collapse n={n} boundary={} interior={} new={new}",
            ids(boundary),
            ids(interior)
        ),
        TransformStep::Expand { v, disk, glue } => {
            let pairs: Vec<String> = glue.iter().map(|(a, b)| format!("{a}:{b}")).collect();
            writeln!(out, "expand v={v} disk={} glue={}", write_inline(disk), pairs.join(","))
        }
        TransformStep::DeletePoint { v } => writeln!(out, "ct-delete-point v={v}"),
        TransformStep::GluePoint { v, attach } => writeln!(out, "ct-glue-point v={v} attach={}", ids(attach)),
        TransformStep::DeleteEdge { u, v } => writeln!(out, "ct-delete-edge u={u} v={v}"),
        TransformStep::GlueEdge { u, v } => writeln!(out, "ct-glue-edge u={u} v={v}"),
    };
}

pub fn write_steps<'a, I: IntoIterator<Item = &'a TransformStep>>(steps: I) -> String {
    let mut out = String::new();
    for s in steps {
        write_step(&mut out, s);
    }
    out
}

struct Fields<'a> {
    line: usize,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Fields<'a> {
    fn parse(line: usize, tokens: &[&'a str]) -> Result<Self, FormatError> {
        let mut map = BTreeMap::new();
        for t in tokens {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| FormatError::new(line, format!("expected key=value, found `{t}`")))?;
            if map.insert(k, v).is_some() {
                return Err(FormatError::new(line, format!("repeated field `{k}`")));
            }
        }
        Ok(Self { line, map })
    }

    fn raw(&self, key: &str) -> Result<&'a str, FormatError> {
        self.map
            .get(key)
            .copied()
            .ok_or_else(|| FormatError::new(self.line, format!("missing field `{key}`")))
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<T, FormatError> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| FormatError::new(self.line, format!("invalid number `{raw}` for `{key}`")))
    }

    fn set(&self, key: &str) -> Result<VertexSet, FormatError> {
        let raw = self.raw(key)?;
        raw.split(',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|_| FormatError::new(self.line, format!("invalid label `{s}` in `{key}`")))
            })
            .collect()
    }

    fn pairs(&self, key: &str) -> Result<BTreeMap<Label, Label>, FormatError> {
        let raw = self.raw(key)?;
        let mut out = BTreeMap::new();
        for p in raw.split(',').filter(|s| !s.is_empty()) {
            let bad = || FormatError::new(self.line, format!("invalid pair `{p}` in `{key}`"));
            let (a, b) = p.split_once(':').ok_or_else(bad)?;
            let a = a.parse().map_err(|_| bad())?;
            let b = b.parse().map_err(|_| bad())?;
            if out.insert(a, b).is_some() {
                return Err(bad());
            }
        }
        Ok(out)
    }

    fn expect_only(&self, keys: &[&str]) -> Result<(), FormatError> {
        match self.map.keys().find(|k| !keys.contains(k)) {
            Some(k) => Err(FormatError::new(self.line, format!("unexpected field `{k}`"))),
            None => Ok(()),
        }
    }
}

/// Parses trace text into steps; errors carry 1-based line numbers.
pub fn parse_steps(text: &str) -> Result<Vec<TransformStep>, FormatError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let f = Fields::parse(line, &tokens[1..])?;
        let step = match tokens[0] {
            "collapse" => {
                f.expect_only(&["n", "boundary", "interior", "new"])?;
                TransformStep::Collapse {
                    n: f.number("n")?,
                    boundary: f.set("boundary")?,
                    interior: f.set("interior")?,
                    new: f.number("new")?,
                }
            }
            "expand" => {
                f.expect_only(&["v", "disk", "glue"])?;
                let disk = read_inline(f.raw("disk")?, line)?;
                if clique_number(&disk) < 2 {
                    return Err(FormatError::new(line, "expansion disk has no edges"));
                }
                TransformStep::Expand {
                    v: f.number("v")?,
                    disk,
                    glue: f.pairs("glue")?,
                }
            }
            "ct-delete-point" => {
                f.expect_only(&["v"])?;
                TransformStep::DeletePoint { v: f.number("v")? }
            }
            "ct-glue-point" => {
                f.expect_only(&["v", "attach"])?;
                TransformStep::GluePoint {
                    v: f.number("v")?,
                    attach: f.set("attach")?,
                }
            }
            "ct-delete-edge" => {
                f.expect_only(&["u", "v"])?;
                TransformStep::DeleteEdge {
                    u: f.number("u")?,
                    v: f.number("v")?,
                }
            }
            "ct-glue-edge" => {
                f.expect_only(&["u", "v"])?;
                TransformStep::GlueEdge {
                    u: f.number("u")?,
                    v: f.number("v")?,
                }
            }
            other => return Err(FormatError::new(line, format!("unknown step `{other}`"))),
        };
        steps.push(step);
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cycle, path};
    use crate::transform::{collapse_disk, expand_ball};

    #[test]
    fn text_round_trip() {
        let steps = vec![
            TransformStep::Collapse {
                n: 1,
                boundary: VertexSet::from([0, 3]),
                interior: VertexSet::from([1, 2]),
                new: 6,
            },
            TransformStep::Expand {
                v: 6,
                disk: path(4),
                glue: BTreeMap::from([(0, 0), (3, 3)]),
            },
            TransformStep::DeletePoint { v: 4 },
            TransformStep::GluePoint {
                v: 9,
                attach: VertexSet::from([1, 2]),
            },
            TransformStep::DeleteEdge { u: 1, v: 2 },
            TransformStep::GlueEdge { u: 1, v: 2 },
        ];
        let text = write_steps(&steps);
        assert!(text.starts_with("collapse n=1 boundary=0,3 interior=1,2 new=6\nexpand v=6 disk=4:0-1,1-2,2-3 glue=0:0,3:3\n"));
        assert_eq!(parse_steps(&text).unwrap(), steps);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_steps("# header\n\nct-delete-point w=3\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_steps("teleport v=1\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(parse_steps("ct-glue-edge u=1\n").is_err());
    }

    #[test]
    fn trace_validates_and_replays() {
        let t = Topology::default();
        let mut trace = TransformTrace::new(cycle(4), TracePredicate::ClosedManifold(1));
        let (g, e) = expand_ball(&trace.final_space, 0, &path(5), 1, None, &t).unwrap();
        trace.push(e, g);
        let (g, e) = collapse_disk(&trace.final_space, &VertexSet::from([1, 4, 5, 6]), 1, &t).unwrap();
        trace.push(e, g);
        trace.validate(&t).unwrap();
        let reparsed = parse_steps(&trace.to_text()).unwrap();
        assert_eq!(replay(&trace.initial, &reparsed, &t).unwrap(), trace.final_space);

        let mut broken = trace.clone();
        broken.final_space = cycle(4);
        assert_eq!(broken.validate(&t), Err(TransformError::ReplayMismatch));
    }
}
