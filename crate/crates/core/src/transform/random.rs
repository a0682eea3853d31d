//! Seeded random transformations.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{compress, expand_ball, TraceEntry, TransformStep};
use crate::classify::Topology;
use crate::error::{SpaceError, TransformError};
use crate::space::{cone, DigitalSpace, Label, VertexSet};

/// Stellar subdivision of the edge `xy`: a new point `w` adjacent to `x`,
/// `y` and their common neighbours replaces the edge.
pub fn stellar_subdivide(d: &DigitalSpace, x: Label, y: Label, w: Label) -> Result<DigitalSpace, SpaceError> {
    let mut attach = d.joint_rim(&[x, y])?.vertex_set();
    attach.insert(x);
    attach.insert(y);
    d.without_edge(x, y)?.with_point(w, &attach)
}

/// A disk whose boundary is the rim of `v` (with the same labels): the cone
/// over the rim followed by `subdivisions` random stellar subdivisions of
/// edges with at least one interior endpoint.
pub fn random_disk_for<R: Rng + ?Sized>(
    g: &DigitalSpace,
    v: Label,
    subdivisions: usize,
    rng: &mut R,
) -> Result<DigitalSpace, SpaceError> {
    let rim = g.rim(v)?;
    let boundary = rim.vertex_set();
    let mut d = cone(g.fresh_label(), &rim)?;
    for _ in 0..subdivisions {
        let edges: Vec<(Label, Label)> = d
            .edges()
            .into_iter()
            .filter(|(a, b)| !boundary.contains(a) || !boundary.contains(b))
            .collect();
        let &(x, y) = edges.choose(rng).expect("the cone point is interior");
        d = stellar_subdivide(&d, x, y, d.fresh_label())?;
    }
    Ok(d)
}

/// Expands the ball of `v` into a random disk built by [`random_disk_for`].
pub fn random_expansion<R: Rng + ?Sized>(
    g: &DigitalSpace,
    v: Label,
    n: usize,
    subdivisions: usize,
    rng: &mut R,
    topo: &Topology,
) -> Result<(DigitalSpace, TraceEntry), TransformError> {
    let disk = random_disk_for(g, v, subdivisions, rng)?;
    let glue: BTreeMap<Label, Label> = g.neighbors(v)?.into_iter().map(|b| (b, b)).collect();
    expand_ball(g, v, &disk, n, Some(&glue), topo)
}

/// A uniformly chosen kind of contractible move that applies to `g`, with
/// a uniformly chosen instance of that kind. Glued points attach to the
/// ball of a random point.
pub fn random_contractible_step<R: Rng + ?Sized>(g: &DigitalSpace, rng: &mut R, topo: &Topology) -> Option<TransformStep> {
    let mut kinds: Vec<Vec<TransformStep>> = Vec::new();
    if g.len() > 1 {
        kinds.push(
            g.vertices()
                .iter()
                .filter(|&&v| topo.contractible_decision(&g.rim(v).unwrap()).is_true())
                .map(|&v| TransformStep::DeletePoint { v })
                .collect(),
        );
    }
    let mut delete_edges = Vec::new();
    let mut glue_edges = Vec::new();
    let vs = g.vertices();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            let jr = g.joint_rim(&[u, v]).unwrap();
            if jr.is_empty() || !topo.contractible_decision(&jr).is_true() {
                continue;
            }
            if g.adjacent(u, v) {
                delete_edges.push(TransformStep::DeleteEdge { u, v });
            } else {
                glue_edges.push(TransformStep::GlueEdge { u, v });
            }
        }
    }
    kinds.push(delete_edges);
    kinds.push(glue_edges);
    if let Some(&u) = vs.choose(rng) {
        let attach: VertexSet = g.ball(u).unwrap().vertex_set();
        kinds.push(vec![TransformStep::GluePoint {
            v: g.fresh_label(),
            attach,
        }]);
    }
    kinds.retain(|k| !k.is_empty());
    let kind = kinds.choose(rng)?;
    kind.choose(rng).cloned()
}

/// Compresses `g`, then repeatedly perturbs the compressed space by one to
/// three random expansions and compresses again. Returns the first result
/// with at most `target` points and the attempt (0 for the plain
/// compression) that produced it.
pub fn compress_with_restarts<R: Rng + ?Sized>(
    g: &DigitalSpace,
    n: usize,
    size_cap: usize,
    target: usize,
    attempts: usize,
    rng: &mut R,
    topo: &Topology,
) -> Result<Option<(DigitalSpace, usize)>, TransformError> {
    let (base, _) = compress(g, n, size_cap, topo)?;
    if base.len() <= target {
        return Ok(Some((base, 0)));
    }
    for attempt in 1..=attempts {
        let mut cur = base.clone();
        for _ in 0..rng.gen_range(1..=3) {
            let v = *cur.vertices().choose(rng).expect("manifolds are nonempty");
            let subdivisions = rng.gen_range(0..4);
            cur = random_expansion(&cur, v, n, subdivisions, rng, topo)?.0;
        }
        let (out, _) = compress(&cur, n, size_cap, topo)?;
        if out.len() <= target {
            return Ok(Some((out, attempt)));
        }
    }
    Ok(None)
}
