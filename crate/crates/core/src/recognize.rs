//! Sphere recognition criteria for closed manifolds.
//!
//! The criteria are sufficient conditions: when one holds the space is a
//! sphere, when it fails nothing follows. Every verdict that holds is
//! cross-checked against [`Topology::is_sphere`].

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::canon::is_isomorphic;
use crate::classify::{Decision, Topology};
use crate::error::RecognizeError;
use crate::generate::minimal_sphere;
use crate::space::{DigitalSpace, Label, VertexSet};
use crate::transform::{find_disks, DiskStage, FoundDisk};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Criterion {
    /// Every one-sphere bounds a two-disk.
    #[serde(rename = "thm-5.1")]
    BoundingDisks2,
    /// Every one-disk inside a rim is embedded.
    #[serde(rename = "thm-5.2")]
    EmbeddedArcs2,
    /// Every two-disk is embedded and every one-sphere bounds a two-disk.
    #[serde(rename = "thm-6.1")]
    Embedded3,
    /// Every `(n-1)`-disk is embedded and every `(n-2)`-sphere from a joint
    /// rim bounds an `(n-1)`-disk.
    #[serde(rename = "thm-6.2")]
    EmbeddedN,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::BoundingDisks2,
        Criterion::EmbeddedArcs2,
        Criterion::Embedded3,
        Criterion::EmbeddedN,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Criterion::BoundingDisks2 => "thm-5.1",
            Criterion::EmbeddedArcs2 => "thm-5.2",
            Criterion::Embedded3 => "thm-6.1",
            Criterion::EmbeddedN => "thm-6.2",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.id() == id)
    }

    /// Criteria that apply to closed `n`-manifolds by default.
    pub fn for_dimension(n: usize) -> Vec<Criterion> {
        match n {
            2 => vec![Criterion::BoundingDisks2, Criterion::EmbeddedArcs2],
            3 => vec![Criterion::Embedded3],
            n if n > 3 => vec![Criterion::EmbeddedN],
            _ => Vec::new(),
        }
    }

    fn dimension_ok(self, n: usize) -> bool {
        match self {
            Criterion::BoundingDisks2 | Criterion::EmbeddedArcs2 => n == 2,
            Criterion::Embedded3 => n == 3,
            Criterion::EmbeddedN => n >= 3,
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    Sphere,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessRole {
    /// A sphere that bounds no disk.
    UnboundedSphere,
    /// A disk with no ambient disk around it.
    UnembeddedDisk,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub role: WitnessRole,
    /// Dimension of the witness sphere or disk.
    pub dimension: usize,
    pub vertices: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecognitionVerdict {
    pub criterion: Criterion,
    pub holds: Decision,
    pub conclusion: Conclusion,
    pub witness: Option<Witness>,
    /// Spheres and disks examined.
    pub checked: usize,
}

/// Vertex sets of induced chordless cycles with 4 to `max_len` points, by
/// size and then lexicographically.
pub fn enumerate_one_spheres(g: &DigitalSpace, max_len: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for_each_one_sphere(g, max_len, |c| {
        out.push(c);
        true
    });
    out.sort_by_cached_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
    out
}

/// Visits each chordless cycle once: it is grown from its smallest position
/// `s`, and the neighbour of `s` visited first is smaller than the one that
/// closes the cycle. The visitor returns `false` to stop.
fn for_each_one_sphere<F: FnMut(VertexSet) -> bool>(g: &DigitalSpace, max_len: usize, mut visit: F) {
    let n = g.len();
    for s in 0..n {
        for p1 in g.row(s).ones().filter(|&p| p > s) {
            // `blocked` holds the points adjacent to an inner path point
            // other than the last one; they cannot extend the path.
            let mut path = vec![s, p1];
            let blocked = FixedBitSet::with_capacity(n);
            if !extend(g, max_len, &mut path, blocked, &mut visit) {
                return;
            }
        }
    }

    fn extend<F: FnMut(VertexSet) -> bool>(
        g: &DigitalSpace,
        max_len: usize,
        path: &mut Vec<usize>,
        blocked: FixedBitSet,
        visit: &mut F,
    ) -> bool {
        let s = path[0];
        let last = *path.last().unwrap();
        let prev = path[path.len() - 2];
        let mut next_blocked = blocked;
        if path.len() > 2 {
            next_blocked.union_with(g.row(prev));
        }
        for x in g.row(last).ones() {
            if x <= s || path.contains(&x) || next_blocked.contains(x) {
                continue;
            }
            if g.adjacent_idx(x, s) {
                // Closing point: chords to `s` are only allowed here.
                if path.len() >= 3 && path.len() < max_len && path[1] < x {
                    let mut cycle: Vec<usize> = path.clone();
                    cycle.push(x);
                    if !visit(cycle.into_iter().map(|i| g.label(i)).collect()) {
                        return false;
                    }
                }
                continue;
            }
            if path.len() + 1 < max_len {
                path.push(x);
                let go_on = extend(g, max_len, path, next_blocked.clone(), visit);
                path.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn sphere_check(topo: &Topology, sub: &DigitalSpace, dim: usize) -> Result<(), RecognizeError> {
    match topo.sphere_decision(sub, dim) {
        Decision::True => Ok(()),
        Decision::False => Err(RecognizeError::NotASphere(dim)),
        Decision::Indeterminate => Err(RecognizeError::Indeterminate),
    }
}

/// Result of a bounded search: found, proven absent, or absent at the cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Search<T> {
    Found(T),
    Absent,
    NotFoundAtCap,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// A `k`-disk `D ⊇ S` with boundary exactly `S`, searched among at most
/// `size_cap` points. In a closed `k`-manifold the interior of such a disk
/// is a component of `G − S`, which makes the search exact.
pub fn find_bounding_disk(
    g: &DigitalSpace,
    s: &VertexSet,
    k: usize,
    size_cap: usize,
    topo: &Topology,
) -> Result<Search<VertexSet>, RecognizeError> {
    if k == 0 {
        return Err(RecognizeError::DimensionOrder { k, n: 0 });
    }
    sphere_check(topo, &g.induced(s)?, k - 1)?;
    let bounds = |d: &VertexSet| -> bool {
        let sub = g.induced(d).expect("subset of g");
        topo.disk_decomposition(&sub, k)
            .is_ok_and(|dec| dec.is_disk.is_true() && &dec.boundary == s)
    };
    if topo.manifold_decision(g, k).is_true() {
        let mut candidates: Vec<VertexSet> = g
            .minus(s)
            .components()
            .into_iter()
            .map(|c| c.union(s).copied().collect())
            .collect();
        candidates.sort_by_cached_key(|d: &VertexSet| (d.len(), d.iter().copied().collect::<Vec<_>>()));
        return Ok(candidates.into_iter().find(|d| bounds(d)).map_or(Search::Absent, Search::Found));
    }
    let rest = g.minus(s);
    let budget = size_cap.saturating_sub(s.len());
    let mut candidates = Vec::new();
    crate::transform::for_each_connected_set_public(&rest, |m| m.count_ones(..) <= budget, |m| {
        let inner: VertexSet = m.ones().map(|i| rest.vertices()[i]).collect();
        // Every interior point must touch the sphere for it to be a boundary.
        candidates.push(inner.union(s).copied().collect::<VertexSet>());
    });
    candidates.sort_by_cached_key(|d| (d.len(), d.iter().copied().collect::<Vec<_>>()));
    if let Some(d) = candidates.into_iter().find(|d| bounds(d)) {
        return Ok(Search::Found(d));
    }
    Ok(if size_cap >= g.len() {
        Search::Absent
    } else {
        Search::NotFoundAtCap
    })
}

fn embedding_in(disks: &[FoundDisk], boundary: &VertexSet, interior: &VertexSet) -> Option<VertexSet> {
    disks
        .iter()
        .find(|e| boundary.is_subset(&e.boundary) && interior.is_subset(&e.interior))
        .map(|e| e.vertices.clone())
}

/// Whether the `k`-disk spanned by `d` lies in an `n`-disk `E` with
/// `∂D ⊆ ∂E` and `Int D ⊆ Int E`; returns the ambient disk when found.
pub fn is_embedded(
    g: &DigitalSpace,
    d: &VertexSet,
    k: usize,
    n: usize,
    size_cap: usize,
    topo: &Topology,
) -> Result<Search<VertexSet>, RecognizeError> {
    if k >= n {
        return Err(RecognizeError::DimensionOrder { k, n });
    }
    let (boundary, interior) = disk_parts(g, d, k, topo)?;
    let disks = find_disks(g, n, size_cap, topo);
    Ok(match embedding_in(&disks, &boundary, &interior) {
        Some(e) => Search::Found(e),
        None if size_cap >= g.len() => Search::Absent,
        None => Search::NotFoundAtCap,
    })
}

fn disk_parts(g: &DigitalSpace, d: &VertexSet, k: usize, topo: &Topology) -> Result<(VertexSet, VertexSet), RecognizeError> {
    let sub = g.induced(d)?;
    if k == 0 {
        return if sub.len() == 1 {
            Ok((VertexSet::new(), d.clone()))
        } else {
            Err(RecognizeError::NotADisk(0))
        };
    }
    let dec = topo
        .disk_decomposition(&sub, k)
        .map_err(|_| RecognizeError::NotADisk(k))?;
    match dec.is_disk {
        Decision::True => Ok((dec.boundary, dec.interior)),
        Decision::False => Err(RecognizeError::NotADisk(k)),
        Decision::Indeterminate => Err(RecognizeError::Indeterminate),
    }
}

/// Running verdict: the first definite failure wins; an undecided item
/// downgrades a success to indeterminate.
struct Tally {
    holds: Decision,
    witness: Option<Witness>,
    checked: usize,
}

impl Tally {
    fn new() -> Self {
        Self {
            holds: Decision::True,
            witness: None,
            checked: 0,
        }
    }

    fn failed(&self) -> bool {
        self.holds.is_false()
    }

    fn record<T>(&mut self, outcome: Search<T>, role: WitnessRole, dimension: usize, vertices: &VertexSet) {
        self.checked += 1;
        let witness = || Witness {
            role,
            dimension,
            vertices: vertices.clone(),
        };
        match outcome {
            Search::Found(_) => {}
            Search::Absent => {
                self.holds = Decision::False;
                self.witness = Some(witness());
            }
            Search::NotFoundAtCap => {
                if self.holds.is_true() {
                    self.holds = Decision::Indeterminate;
                    self.witness = Some(witness());
                }
            }
        }
    }

    /// An incomplete hypothesis scan cannot support a positive verdict.
    fn incomplete(&mut self) {
        if self.holds.is_true() {
            self.holds = Decision::Indeterminate;
        }
    }
}

/// Evaluates one criterion on a closed `n`-manifold.
pub fn check_criterion(
    g: &DigitalSpace,
    criterion: Criterion,
    n: usize,
    size_cap: usize,
    topo: &Topology,
) -> Result<RecognitionVerdict, RecognizeError> {
    match topo.manifold_decision(g, n) {
        Decision::True => {}
        Decision::False => return Err(RecognizeError::NotClosedManifold(n)),
        Decision::Indeterminate => return Err(RecognizeError::Indeterminate),
    }
    if !criterion.dimension_ok(n) {
        return Err(RecognizeError::DimensionOrder { k: n, n });
    }
    let complete = size_cap >= g.len();
    let mut tally = Tally::new();
    match criterion {
        Criterion::BoundingDisks2 => {
            bounding_scan(g, &enumerate_one_spheres(g, g.len()), 2, size_cap, topo, &mut tally)?;
        }
        Criterion::EmbeddedArcs2 => {
            let disks = find_disks(g, 2, size_cap, topo);
            for arc in rim_arcs(g) {
                let (boundary, interior) = disk_parts(g, &arc, 1, topo)?;
                let found = match embedding_in(&disks, &boundary, &interior) {
                    Some(e) => Search::Found(e),
                    None if complete => Search::Absent,
                    None => Search::NotFoundAtCap,
                };
                tally.record(found, WitnessRole::UnembeddedDisk, 1, &arc);
                if tally.failed() {
                    break;
                }
            }
        }
        Criterion::Embedded3 | Criterion::EmbeddedN => {
            let k = n - 1;
            embedded_scan(g, k, n, size_cap, topo, &mut tally)?;
            if !tally.failed() {
                let spheres = if criterion == Criterion::Embedded3 {
                    enumerate_one_spheres(g, g.len())
                } else {
                    joint_rim_spheres(g, n - 2, topo)
                };
                bounding_scan(g, &spheres, k, size_cap, topo, &mut tally)?;
            }
            if !complete {
                tally.incomplete();
            }
        }
    }
    let verdict = RecognitionVerdict {
        criterion,
        holds: tally.holds,
        conclusion: if tally.holds.is_true() {
            Conclusion::Sphere
        } else {
            Conclusion::Inconclusive
        },
        witness: tally.witness,
        checked: tally.checked,
    };
    if verdict.holds.is_true() && topo.sphere_decision(g, n).is_false() {
        return Err(RecognizeError::SoundnessViolation(criterion.id()));
    }
    Ok(verdict)
}

/// The default criteria for dimension `n`, each evaluated by
/// [`check_criterion`].
pub fn check_sphere_criteria(
    g: &DigitalSpace,
    n: usize,
    size_cap: usize,
    topo: &Topology,
) -> Result<Vec<RecognitionVerdict>, RecognizeError> {
    Criterion::for_dimension(n)
        .into_iter()
        .map(|c| check_criterion(g, c, n, size_cap, topo))
        .collect()
}

fn bounding_scan(
    g: &DigitalSpace,
    spheres: &[VertexSet],
    k: usize,
    size_cap: usize,
    topo: &Topology,
    tally: &mut Tally,
) -> Result<(), RecognizeError> {
    for s in spheres {
        let found = find_bounding_disk(g, s, k, size_cap, topo)?;
        tally.record(found, WitnessRole::UnboundedSphere, k - 1, s);
        if tally.failed() {
            break;
        }
    }
    Ok(())
}

fn embedded_scan(
    g: &DigitalSpace,
    k: usize,
    n: usize,
    size_cap: usize,
    topo: &Topology,
    tally: &mut Tally,
) -> Result<(), RecognizeError> {
    let ambient = find_disks(g, n, size_cap, topo);
    let complete = size_cap >= g.len();
    for d in find_disks(g, k, size_cap, topo) {
        let found = match embedding_in(&ambient, &d.boundary, &d.interior) {
            Some(e) => Search::Found(e),
            None if complete => Search::Absent,
            None => Search::NotFoundAtCap,
        };
        tally.record(found, WitnessRole::UnembeddedDisk, k, &d.vertices);
        if tally.failed() {
            break;
        }
    }
    Ok(())
}

/// Arcs `O(v) − u` and `u ⊕ O(v, u)` of every rim that are one-disks.
fn rim_arcs(g: &DigitalSpace) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = Vec::new();
    for &v in g.vertices() {
        let rim = g.rim(v).expect("v is a point of g");
        for &u in rim.vertices() {
            let mut long = rim.vertex_set();
            long.remove(&u);
            let mut short = rim.neighbors(u).expect("u is a point of the rim");
            short.insert(u);
            for arc in [short, long] {
                if arc.len() >= 3 && !out.contains(&arc) {
                    out.push(arc);
                }
            }
        }
    }
    out.sort_by_cached_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
    out
}

/// Distinct joint rims of edges that are `dim`-spheres.
fn joint_rim_spheres(g: &DigitalSpace, dim: usize, topo: &Topology) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = Vec::new();
    for (u, v) in g.edges() {
        let jr = g.joint_rim(&[u, v]).expect("edge endpoints are points");
        let set = jr.vertex_set();
        if !out.contains(&set) && topo.sphere_decision(&jr, dim).is_true() {
            out.push(set);
        }
    }
    out.sort_by_cached_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
    out
}

/// When `U(u) ∪ U(v)` is not an `n`-disk, a four-point one-sphere through
/// `u` and `v`; `None` when the union is a disk.
pub fn ball_union_witness(
    g: &DigitalSpace,
    u: Label,
    v: Label,
    n: usize,
    topo: &Topology,
) -> Result<Option<VertexSet>, RecognizeError> {
    if !g.adjacent(u, v) {
        g.neighbors(u)?;
        g.neighbors(v)?;
        return Err(RecognizeError::NotAdjacent(u, v));
    }
    match topo.manifold_decision(g, n) {
        Decision::True => {}
        Decision::False => return Err(RecognizeError::NotClosedManifold(n)),
        Decision::Indeterminate => return Err(RecognizeError::Indeterminate),
    }
    let mut union = g.ball(u)?.vertex_set();
    union.extend(g.ball(v)?.vertex_set());
    match topo.disk_decision(&g.induced(&union)?, n) {
        Decision::True => return Ok(None),
        Decision::Indeterminate => return Err(RecognizeError::Indeterminate),
        Decision::False => {}
    }
    let nu = g.neighbors(u)?;
    let nv = g.neighbors(v)?;
    for &a in nu.difference(&nv).filter(|&&a| a != v) {
        for &b in nv.difference(&nu).filter(|&&b| b != u) {
            if g.adjacent(a, b) {
                return Ok(Some(VertexSet::from([u, v, a, b])));
            }
        }
    }
    Err(RecognizeError::MissingFourCycle)
}

/// Outcome of the compression test together with the scans of the
/// consequences a compressed manifold must satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressionReport {
    pub compressed: bool,
    /// A disk that is not the ball of any point.
    pub violating_disk: Option<FoundDisk>,
    /// Adjacent pairs whose union of balls is a disk.
    pub ball_union_disks: Vec<(Label, Label)>,
    /// Non-adjacent pairs whose joint rim is an `(n-1)`-disk.
    pub joint_rim_disks: Vec<(Label, Label)>,
    /// Adjacent pair with both rims minimal `(n-1)`-spheres, if any.
    pub minimal_rim_pair: Option<(Label, Label)>,
    pub is_minimal_sphere: bool,
    /// A point whose rim is not the minimal `(n-1)`-sphere.
    pub non_minimal_rim: Option<Label>,
    /// A one-sphere (at most `size_cap` points) with no point adjacent to
    /// all of it.
    pub uncovered_one_sphere: Option<VertexSet>,
}

/// Whether every disk found at `size_cap` is the ball of a point.
pub fn is_compressed(
    g: &DigitalSpace,
    n: usize,
    size_cap: usize,
    topo: &Topology,
) -> Result<CompressionReport, RecognizeError> {
    match topo.manifold_decision(g, n) {
        Decision::True => {}
        Decision::False => return Err(RecognizeError::NotClosedManifold(n)),
        Decision::Indeterminate => return Err(RecognizeError::Indeterminate),
    }
    let balls: Vec<VertexSet> = g.vertices().iter().map(|&v| g.ball(v).unwrap().vertex_set()).collect();
    let disks = find_disks(g, n, size_cap, topo);
    let violating_disk = disks
        .into_iter()
        .find(|d| d.stage != DiskStage::Balls || !balls.contains(&d.vertices));

    let mut ball_union_disks = Vec::new();
    let mut joint_rim_disks = Vec::new();
    let minimal_rim = minimal_sphere(n as i32 - 1);
    let rim_minimal: Vec<bool> = g
        .vertices()
        .iter()
        .map(|&v| is_isomorphic(&g.rim(v).unwrap(), &minimal_rim))
        .collect();
    let mut minimal_rim_pair = None;
    let vs = g.vertices();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let (u, v) = (vs[i], vs[j]);
            if g.adjacent(u, v) {
                let union: VertexSet = balls[i].union(&balls[j]).copied().collect();
                if topo.disk_decision(&g.induced(&union)?, n).is_true() {
                    ball_union_disks.push((u, v));
                }
                if minimal_rim_pair.is_none() && rim_minimal[i] && rim_minimal[j] {
                    minimal_rim_pair = Some((u, v));
                }
            } else {
                let jr = g.joint_rim(&[u, v])?;
                if !jr.is_empty() && topo.disk_decision(&jr, n - 1).is_true() {
                    joint_rim_disks.push((u, v));
                }
            }
        }
    }
    let non_minimal_rim = vs.iter().zip(&rim_minimal).find(|(_, &m)| !m).map(|(&v, _)| v);
    let mut uncovered_one_sphere = None;
    for_each_one_sphere(g, size_cap.min(g.len()), |s| {
        let covered = vs.iter().any(|&w| s.iter().all(|&x| g.adjacent(w, x)));
        if covered {
            true
        } else {
            uncovered_one_sphere = Some(s);
            false
        }
    });
    Ok(CompressionReport {
        compressed: violating_disk.is_none(),
        violating_disk,
        ball_union_disks,
        joint_rim_disks,
        minimal_rim_pair,
        is_minimal_sphere: is_isomorphic(g, &minimal_sphere(n as i32)),
        non_minimal_rim,
        uncovered_one_sphere,
    })
}
