//! Homeomorphic and contractible transformations.
//!
//! Every transformation is a [`TransformStep`] value. Applying a step checks
//! its precondition against the current space, produces the next space and
//! the inverse step, so a sequence of steps can be audited, replayed and
//! undone.

mod random;
mod search;
mod trace;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::canon::least_isomorphism;
use crate::classify::{Decision, Topology};
use crate::cliques::clique_number;
use crate::error::TransformError;
use crate::space::{DigitalSpace, Label, VertexSet};

pub use random::{compress_with_restarts, random_contractible_step, random_expansion, random_disk_for, stellar_subdivide};
pub use search::{compress, for_each_connected_set as for_each_connected_set_public, find_disks, reduce_contractible, DiskStage, FoundDisk, DEFAULT_SIZE_CAP};
pub use trace::{parse_steps, replay, write_steps, TraceEntry, TracePredicate, TransformTrace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    CollapseDisk,
    ExpandBall,
    CtDeletePoint,
    CtGluePoint,
    CtDeleteEdge,
    CtGlueEdge,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::CollapseDisk => "collapse-disk",
            StepKind::ExpandBall => "expand-ball",
            StepKind::CtDeletePoint => "ct-delete-point",
            StepKind::CtGluePoint => "ct-glue-point",
            StepKind::CtDeleteEdge => "ct-delete-edge",
            StepKind::CtGlueEdge => "ct-glue-edge",
        })
    }
}

/// One replayable transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformStep {
    /// Replace the disk `boundary ∪ interior` by the point `new` joined to
    /// the boundary.
    Collapse {
        n: usize,
        boundary: VertexSet,
        interior: VertexSet,
        new: Label,
    },
    /// Replace the ball of `v` by `disk`, whose labels are `0..N`; `glue`
    /// sends each boundary point of `disk` to a point of the rim of `v`.
    Expand {
        v: Label,
        disk: DigitalSpace,
        glue: BTreeMap<Label, Label>,
    },
    DeletePoint { v: Label },
    GluePoint { v: Label, attach: VertexSet },
    DeleteEdge { u: Label, v: Label },
    GlueEdge { u: Label, v: Label },
}

impl TransformStep {
    pub fn kind(&self) -> StepKind {
        match self {
            TransformStep::Collapse { .. } => StepKind::CollapseDisk,
            TransformStep::Expand { .. } => StepKind::ExpandBall,
            TransformStep::DeletePoint { .. } => StepKind::CtDeletePoint,
            TransformStep::GluePoint { .. } => StepKind::CtGluePoint,
            TransformStep::DeleteEdge { .. } => StepKind::CtDeleteEdge,
            TransformStep::GlueEdge { .. } => StepKind::CtGlueEdge,
        }
    }

    pub fn is_contractible_move(&self) -> bool {
        !matches!(self, TransformStep::Collapse { .. } | TransformStep::Expand { .. })
    }

    /// Applies the step, returning the new space and the step that undoes it.
    pub fn apply(&self, g: &DigitalSpace, topo: &Topology) -> Result<(DigitalSpace, TransformStep), TransformError> {
        match self {
            TransformStep::Collapse {
                n,
                boundary,
                interior,
                new,
            } => apply_collapse(g, *n, boundary, interior, *new, topo),
            TransformStep::Expand { v, disk, glue } => apply_expand(g, *v, disk, glue, topo),
            _ => apply_contractible(g, self, topo),
        }
    }
}

fn require_disk(decision: Decision, n: usize) -> Result<(), TransformError> {
    match decision {
        Decision::True => Ok(()),
        Decision::False => Err(TransformError::NotADisk(n)),
        Decision::Indeterminate => Err(TransformError::Indeterminate),
    }
}

fn require_contractible(decision: Decision, err: TransformError) -> Result<(), TransformError> {
    match decision {
        Decision::True => Ok(()),
        Decision::False => Err(err),
        Decision::Indeterminate => Err(TransformError::Indeterminate),
    }
}

fn apply_collapse(
    g: &DigitalSpace,
    n: usize,
    boundary: &VertexSet,
    interior: &VertexSet,
    new: Label,
    topo: &Topology,
) -> Result<(DigitalSpace, TransformStep), TransformError> {
    let disk_set: VertexSet = boundary.union(interior).copied().collect();
    let disk = g.induced(&disk_set)?;
    let dec = topo.disk_decomposition(&disk, n)?;
    require_disk(dec.is_disk, n)?;
    if &dec.boundary != boundary || &dec.interior != interior || interior.is_empty() {
        return Err(TransformError::NotADisk(n));
    }
    for &x in interior {
        if !g.neighbors(x)?.is_subset(&disk_set) {
            return Err(TransformError::InteriorContainment(x));
        }
    }
    if new != g.fresh_label() {
        return Err(TransformError::ReplayMismatch);
    }
    let out = g.minus(interior).with_point(new, boundary)?;
    let normal = disk.normalized();
    let glue = disk
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, l)| boundary.contains(l))
        .map(|(i, &l)| (i as Label, l))
        .collect();
    let inverse = TransformStep::Expand {
        v: new,
        disk: normal,
        glue,
    };
    Ok((out, inverse))
}

fn apply_expand(
    g: &DigitalSpace,
    v: Label,
    disk: &DigitalSpace,
    glue: &BTreeMap<Label, Label>,
    topo: &Topology,
) -> Result<(DigitalSpace, TransformStep), TransformError> {
    let rim = g.rim(v)?;
    let n = clique_number(disk).saturating_sub(1);
    if n == 0 {
        return Err(TransformError::NotADisk(n));
    }
    let dec = topo.disk_decomposition(disk, n)?;
    require_disk(dec.is_disk, n)?;
    let keys: VertexSet = glue.keys().copied().collect();
    let images: VertexSet = glue.values().copied().collect();
    if keys != dec.boundary || images != rim.vertex_set() || images.len() != keys.len() {
        return Err(TransformError::GluingMismatch(v));
    }
    for (&a, &x) in glue {
        for (&b, &y) in glue.range(a + 1..) {
            if disk.adjacent(a, b) != rim.adjacent(x, y) {
                return Err(TransformError::GluingMismatch(v));
            }
        }
    }
    let fresh = g.fresh_labels(dec.interior.len());
    let mut map = glue.clone();
    map.extend(dec.interior.iter().copied().zip(fresh.iter().copied()));
    let mut edges = g.minus([v].iter()).edges();
    edges.extend(
        disk.edges()
            .into_iter()
            .filter(|(a, b)| dec.interior.contains(a) || dec.interior.contains(b))
            .map(|(a, b)| (map[&a], map[&b])),
    );
    let vertices = g.vertices().iter().copied().filter(|&x| x != v).chain(fresh.iter().copied());
    let out = DigitalSpace::new(vertices, edges)?;
    let inverse = TransformStep::Collapse {
        n,
        boundary: images,
        interior: fresh.into_iter().collect(),
        new: out.fresh_label(),
    };
    Ok((out, inverse))
}

fn apply_contractible(
    g: &DigitalSpace,
    step: &TransformStep,
    topo: &Topology,
) -> Result<(DigitalSpace, TransformStep), TransformError> {
    match *step {
        TransformStep::DeletePoint { v } => {
            let rim = g.rim(v)?;
            require_contractible(topo.contractible_decision(&rim), TransformError::RimNotContractible(v))?;
            let attach = rim.vertex_set();
            Ok((g.remove_point(v)?, TransformStep::GluePoint { v, attach }))
        }
        TransformStep::GluePoint { v, ref attach } => {
            let sub = g.induced(attach)?;
            require_contractible(
                topo.contractible_decision(&sub),
                TransformError::AttachmentNotContractible(attach.clone()),
            )?;
            Ok((g.with_point(v, attach)?, TransformStep::DeletePoint { v }))
        }
        TransformStep::DeleteEdge { u, v } => {
            let jr = g.joint_rim(&[u, v])?;
            if !g.adjacent(u, v) {
                return Err(crate::error::SpaceError::MissingEdge(u, v).into());
            }
            require_contractible(topo.contractible_decision(&jr), TransformError::JointRimNotContractible(u, v))?;
            Ok((g.without_edge(u, v)?, TransformStep::GlueEdge { u, v }))
        }
        TransformStep::GlueEdge { u, v } => {
            let jr = g.joint_rim(&[u, v])?;
            if g.adjacent(u, v) {
                return Err(TransformError::AlreadyAdjacent(u, v));
            }
            require_contractible(topo.contractible_decision(&jr), TransformError::JointRimNotContractible(u, v))?;
            Ok((g.with_edge(u, v)?, TransformStep::DeleteEdge { u, v }))
        }
        _ => unreachable!("homeomorphic steps are handled separately"),
    }
}

/// Replaces the `n`-disk spanned by `d` with a cone over its boundary.
pub fn collapse_disk(
    g: &DigitalSpace,
    d: &VertexSet,
    n: usize,
    topo: &Topology,
) -> Result<(DigitalSpace, TraceEntry), TransformError> {
    let disk = g.induced(d)?;
    let dec = topo.disk_decomposition(&disk, n)?;
    require_disk(dec.is_disk, n)?;
    let step = TransformStep::Collapse {
        n,
        boundary: dec.boundary,
        interior: dec.interior,
        new: g.fresh_label(),
    };
    let (out, inverse) = step.apply(g, topo)?;
    Ok((out, TraceEntry { step, inverse }))
}

/// Replaces the ball of `v` with the `n`-disk `disk`. Without an explicit
/// gluing the lexicographically least isomorphism from the boundary of
/// `disk` onto the rim of `v` is used.
pub fn expand_ball(
    g: &DigitalSpace,
    v: Label,
    disk: &DigitalSpace,
    n: usize,
    gluing: Option<&BTreeMap<Label, Label>>,
    topo: &Topology,
) -> Result<(DigitalSpace, TraceEntry), TransformError> {
    if n == 0 || clique_number(disk) != n + 1 {
        return Err(TransformError::NotADisk(n));
    }
    let rim = g.rim(v)?;
    let glue = match gluing {
        Some(m) => m.clone(),
        None => {
            let dec = topo.disk_decomposition(disk, n)?;
            require_disk(dec.is_disk, n)?;
            least_isomorphism(&disk.induced(&dec.boundary)?, &rim).ok_or(TransformError::GluingMismatch(v))?
        }
    };
    let index: BTreeMap<Label, Label> = disk
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as Label))
        .collect();
    let mut normal_glue = BTreeMap::new();
    for (a, x) in glue {
        let i = *index.get(&a).ok_or(TransformError::GluingMismatch(v))?;
        normal_glue.insert(i, x);
    }
    let step = TransformStep::Expand {
        v,
        disk: disk.normalized(),
        glue: normal_glue,
    };
    let (out, inverse) = step.apply(g, topo)?;
    Ok((out, TraceEntry { step, inverse }))
}

/// Applies one contractible move after checking its precondition.
pub fn contractible_step(g: &DigitalSpace, step: &TransformStep, topo: &Topology) -> Result<DigitalSpace, TransformError> {
    if !step.is_contractible_move() {
        return Err(TransformError::ReplayMismatch);
    }
    Ok(step.apply(g, topo)?.0)
}
