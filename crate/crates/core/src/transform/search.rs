//! Disk search, compression and contractible reduction.

use std::cmp::Reverse;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{collapse_disk, TraceEntry, TracePredicate, TransformStep, TransformTrace};
use crate::classify::{Decision, Topology};
use crate::error::TransformError;
use crate::invariants::euler_characteristic;
use crate::space::{DigitalSpace, VertexSet};

pub const DEFAULT_SIZE_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiskStage {
    Balls,
    BallPairs,
    Exhaustive,
}

impl DiskStage {
    pub const ALL: [DiskStage; 3] = [DiskStage::Balls, DiskStage::BallPairs, DiskStage::Exhaustive];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoundDisk {
    pub vertices: VertexSet,
    pub boundary: VertexSet,
    pub interior: VertexSet,
    pub stage: DiskStage,
}

/// Vertex sets spanning `n`-disks, stage by stage: balls, unions of two
/// adjacent balls, then connected sets of at most `size_cap` points. Within
/// a stage the order is by size, then lexicographic; a set found in an
/// earlier stage is not repeated.
pub fn find_disks(g: &DigitalSpace, n: usize, size_cap: usize, topo: &Topology) -> Vec<FoundDisk> {
    let mut out: Vec<FoundDisk> = Vec::new();
    for stage in DiskStage::ALL {
        for d in disks_at_stage(g, n, size_cap, stage, topo) {
            if !out.iter().any(|e| e.vertices == d.vertices) {
                out.push(d);
            }
        }
    }
    out
}

fn sort_key(s: &VertexSet) -> (usize, Vec<u32>) {
    (s.len(), s.iter().copied().collect())
}

pub(crate) fn disks_at_stage(
    g: &DigitalSpace,
    n: usize,
    size_cap: usize,
    stage: DiskStage,
    topo: &Topology,
) -> Vec<FoundDisk> {
    let mut candidates: Vec<FixedBitSet> = Vec::new();
    match stage {
        DiskStage::Balls => candidates.extend((0..g.len()).map(|i| g.ball_mask(i))),
        DiskStage::BallPairs => {
            for i in 0..g.len() {
                for j in g.row(i).ones().filter(|&j| j > i) {
                    let mut m = g.ball_mask(i);
                    m.union_with(&g.ball_mask(j));
                    candidates.push(m);
                }
            }
        }
        DiskStage::Exhaustive => {
            if topo.manifold_decision(g, n).is_true() {
                // Interior points of a disk in a closed manifold have their
                // whole ball inside it, so the disk is the closed
                // neighbourhood of its (connected) interior.
                for_each_connected_set(
                    g,
                    |s| closed_neighbourhood(g, s).count_ones(..) <= size_cap,
                    |s| candidates.push(closed_neighbourhood(g, s)),
                );
            } else {
                for_each_connected_set(g, |s| s.count_ones(..) <= size_cap, |s| candidates.push(s.clone()));
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for m in candidates {
        if !seen.insert(m.clone()) {
            continue;
        }
        if let Some(d) = check_disk(g, &m, n, stage, topo) {
            out.push(d);
        }
    }
    out.sort_by_cached_key(|d| sort_key(&d.vertices));
    out
}

fn check_disk(g: &DigitalSpace, m: &FixedBitSet, n: usize, stage: DiskStage, topo: &Topology) -> Option<FoundDisk> {
    let sub = g.induced_mask(m);
    if sub.len() < 2 * n + 1 || !sub.is_connected() || euler_characteristic(&sub) != 1 {
        return None;
    }
    let dec = topo.disk_decomposition(&sub, n).ok()?;
    if !dec.is_disk.is_true() {
        return None;
    }
    Some(FoundDisk {
        vertices: sub.vertex_set(),
        boundary: dec.boundary,
        interior: dec.interior,
        stage,
    })
}

fn closed_neighbourhood(g: &DigitalSpace, s: &FixedBitSet) -> FixedBitSet {
    let mut m = s.clone();
    for i in s.ones() {
        m.union_with(g.row(i));
    }
    m
}

/// Visits every connected vertex set accepted by the monotone predicate
/// `admit` exactly once (each set is grown from its smallest position).
pub fn for_each_connected_set<A, V>(g: &DigitalSpace, admit: A, mut visit: V)
where
    A: Fn(&FixedBitSet) -> bool,
    V: FnMut(&FixedBitSet),
{
    let n = g.len();
    for root in 0..n {
        let mut set = FixedBitSet::with_capacity(n);
        set.insert(root);
        if !admit(&set) {
            continue;
        }
        let mut ext: Vec<usize> = g.row(root).ones().filter(|&u| u > root).collect();
        let mut closed = g.ball_mask(root);
        ext.reverse();
        grow(g, root, &mut set, ext, &mut closed, &admit, &mut visit);
    }

    fn grow<A: Fn(&FixedBitSet) -> bool, V: FnMut(&FixedBitSet)>(
        g: &DigitalSpace,
        root: usize,
        set: &mut FixedBitSet,
        mut ext: Vec<usize>,
        closed: &mut FixedBitSet,
        admit: &A,
        visit: &mut V,
    ) {
        visit(set);
        while let Some(w) = ext.pop() {
            set.insert(w);
            if admit(set) {
                let mut next = ext.clone();
                let mut new_closed = closed.clone();
                for u in g.row(w).ones() {
                    if u > root && !closed.contains(u) {
                        next.insert(0, u);
                    }
                }
                new_closed.union_with(g.row(w));
                grow(g, root, set, next, &mut new_closed, admit, visit);
            }
            set.set(w, false);
        }
    }
}

/// Collapses disks with more than one interior point until none is found
/// at `size_cap`. Stages are tried in order and the first stage with a
/// candidate supplies the disk with the largest interior, ties broken by
/// the lexicographically smallest vertex set.
pub fn compress(
    g: &DigitalSpace,
    n: usize,
    size_cap: usize,
    topo: &Topology,
) -> Result<(DigitalSpace, TransformTrace), TransformError> {
    match topo.manifold_decision(g, n) {
        Decision::True => {}
        Decision::False => return Err(TransformError::NotClosedManifold(n)),
        Decision::Indeterminate => return Err(TransformError::Indeterminate),
    }
    let mut trace = TransformTrace::new(g.clone(), TracePredicate::ClosedManifold(n));
    'outer: loop {
        for stage in DiskStage::ALL {
            let best = disks_at_stage(&trace.final_space, n, size_cap, stage, topo)
                .into_iter()
                .filter(|d| d.interior.len() > 1)
                .min_by_key(|d| (Reverse(d.interior.len()), sort_key(&d.vertices)));
            if let Some(d) = best {
                let (next, entry) = collapse_disk(&trace.final_space, &d.vertices, n, topo)?;
                trace.push(entry, next);
                continue 'outer;
            }
        }
        break;
    }
    Ok((trace.final_space.clone(), trace))
}

/// Greedily deletes points with contractible rims, then edges with
/// contractible joint rims, until neither applies. Points are tried in
/// ascending (degree, label) order and every deletion re-queues the
/// neighbourhood it touched.
pub fn reduce_contractible(g: &DigitalSpace, topo: &Topology) -> (DigitalSpace, TransformTrace) {
    let mut trace = TransformTrace::new(g.clone(), TracePredicate::Unchecked);
    loop {
        let cur = &trace.final_space;
        let mut order: Vec<usize> = (0..cur.len()).collect();
        order.sort_by_key(|&i| (cur.degree_idx(i), cur.label(i)));
        let point = order
            .into_iter()
            .find(|&i| cur.len() > 1 && topo.contractible_decision(&cur.rim_idx(i)).is_true())
            .map(|i| TransformStep::DeletePoint { v: cur.label(i) });
        let step = point.or_else(|| {
            let mut edges: Vec<(usize, u32, u32)> = cur
                .edges()
                .into_iter()
                .map(|(u, v)| (cur.joint_rim(&[u, v]).map_or(0, |r| r.len()), u, v))
                .collect();
            edges.sort_unstable();
            edges
                .into_iter()
                .find(|&(_, u, v)| {
                    cur.joint_rim(&[u, v])
                        .is_ok_and(|jr| topo.contractible_decision(&jr).is_true())
                })
                .map(|(_, u, v)| TransformStep::DeleteEdge { u, v })
        });
        let Some(step) = step else { break };
        let (next, inverse) = step.apply(cur, topo).expect("precondition was just checked");
        trace.push(TraceEntry { step, inverse }, next);
    }
    (trace.final_space.clone(), trace)
}
