//! Finite simple graphs viewed as digital spaces.
//!
//! A [`DigitalSpace`] keeps its vertex labels sorted and stores adjacency as
//! one bitset row per vertex position, so induced subspaces, rims and joint
//! rims are cheap bit operations. Labels are opaque `u32` values; positions
//! are an implementation detail exposed to the crate only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::SpaceError;

/// Opaque vertex label.
pub type Label = u32;

/// A set of vertex labels, always iterated in ascending order.
pub type VertexSet = BTreeSet<Label>;

/// A finite simple graph `G = (V, W)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DigitalSpace {
    labels: Vec<Label>,
    adj: Vec<FixedBitSet>,
}

/// Ball and rim of a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub ball: DigitalSpace,
    pub rim: DigitalSpace,
}

impl DigitalSpace {
    /// Builds a space from a vertex list and an edge list.
    ///
    /// Duplicate edges are collapsed; self-loops, unknown endpoints and
    /// duplicate vertex labels are rejected.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, SpaceError>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let mut labels: Vec<Label> = vertices.into_iter().collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(SpaceError::DuplicateVertex(w[0]));
        }
        let n = labels.len();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for (a, b) in edges {
            if a == b {
                return Err(SpaceError::SelfLoop(a));
            }
            let i = labels
                .binary_search(&a)
                .map_err(|_| SpaceError::UnknownVertex(a))?;
            let j = labels
                .binary_search(&b)
                .map_err(|_| SpaceError::UnknownVertex(b))?;
            adj[i].insert(j);
            adj[j].insert(i);
        }
        Ok(Self { labels, adj })
    }

    pub fn empty() -> Self {
        Self {
            labels: Vec::new(),
            adj: Vec::new(),
        }
    }

    pub fn point(label: Label) -> Self {
        Self {
            labels: vec![label],
            adj: vec![FixedBitSet::with_capacity(1)],
        }
    }

    /// Two non-adjacent points `S^0(a, b)`.
    pub fn zero_sphere(a: Label, b: Label) -> Result<Self, SpaceError> {
        Self::new([a, b], [])
    }

    /// Complete graph on the given labels.
    pub fn complete<V: IntoIterator<Item = Label>>(vertices: V) -> Result<Self, SpaceError> {
        let labels: Vec<Label> = vertices.into_iter().collect();
        let mut edges = Vec::new();
        for (i, &a) in labels.iter().enumerate() {
            for &b in &labels[i + 1..] {
                edges.push((a, b));
            }
        }
        Self::new(labels, edges)
    }

    /// Space on positions `0..n` with the given adjacency rows.
    pub(crate) fn from_rows(adj: Vec<FixedBitSet>) -> Self {
        let labels = (0..adj.len() as Label).collect();
        Self { labels, adj }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Vertex labels in ascending order.
    pub fn vertices(&self) -> &[Label] {
        &self.labels
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.labels.iter().copied().collect()
    }

    pub fn contains(&self, v: Label) -> bool {
        self.labels.binary_search(&v).is_ok()
    }

    pub(crate) fn index_of(&self, v: Label) -> Option<usize> {
        self.labels.binary_search(&v).ok()
    }

    fn require(&self, v: Label) -> Result<usize, SpaceError> {
        self.index_of(v).ok_or(SpaceError::UnknownVertex(v))
    }

    pub(crate) fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub(crate) fn row(&self, i: usize) -> &FixedBitSet {
        &self.adj[i]
    }

    pub(crate) fn rows(&self) -> &[FixedBitSet] {
        &self.adj
    }

    pub(crate) fn adjacent_idx(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges as `(a, b)` with `a < b`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, row) in self.adj.iter().enumerate() {
            for j in row.ones().filter(|&j| j > i) {
                out.push((self.labels[i], self.labels[j]));
            }
        }
        out
    }

    pub fn adjacent(&self, a: Label, b: Label) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.adj[i].contains(j),
            _ => false,
        }
    }

    pub fn degree(&self, v: Label) -> Result<usize, SpaceError> {
        Ok(self.adj[self.require(v)?].count_ones(..))
    }

    pub(crate) fn degree_idx(&self, i: usize) -> usize {
        self.adj[i].count_ones(..)
    }

    pub fn neighbors(&self, v: Label) -> Result<VertexSet, SpaceError> {
        let i = self.require(v)?;
        Ok(self.adj[i].ones().map(|j| self.labels[j]).collect())
    }

    /// Induced subspace on a set of positions.
    pub(crate) fn induced_mask(&self, keep: &FixedBitSet) -> Self {
        let idx: Vec<usize> = keep.ones().collect();
        let mut remap = vec![usize::MAX; self.len()];
        for (new, &old) in idx.iter().enumerate() {
            remap[old] = new;
        }
        let m = idx.len();
        let adj = idx
            .iter()
            .map(|&old| {
                let mut row = FixedBitSet::with_capacity(m);
                for j in self.adj[old].ones() {
                    if remap[j] != usize::MAX {
                        row.insert(remap[j]);
                    }
                }
                row
            })
            .collect();
        let labels = idx.iter().map(|&i| self.labels[i]).collect();
        Self { labels, adj }
    }

    pub(crate) fn mask_of<'a, I>(&self, set: I) -> Result<FixedBitSet, SpaceError>
    where
        I: IntoIterator<Item = &'a Label>,
    {
        let mut mask = FixedBitSet::with_capacity(self.len());
        for &v in set {
            mask.insert(self.require(v)?);
        }
        Ok(mask)
    }

    pub(crate) fn labels_of(&self, mask: &FixedBitSet) -> VertexSet {
        mask.ones().map(|i| self.labels[i]).collect()
    }

    /// Induced subspace `H = (V_1, W ∩ (V_1 × V_1))`.
    pub fn induced<'a, I>(&self, set: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = &'a Label>,
    {
        let mask = self.mask_of(set)?;
        Ok(self.induced_mask(&mask))
    }

    /// Removes the given points; labels not present are ignored.
    pub fn minus<'a, I>(&self, set: I) -> Self
    where
        I: IntoIterator<Item = &'a Label>,
    {
        let mut keep = FixedBitSet::with_capacity(self.len());
        keep.insert_range(..);
        for &v in set {
            if let Some(i) = self.index_of(v) {
                keep.set(i, false);
            }
        }
        self.induced_mask(&keep)
    }

    pub fn remove_point(&self, v: Label) -> Result<Self, SpaceError> {
        self.require(v)?;
        Ok(self.minus([v].iter()))
    }

    pub(crate) fn remove_idx(&self, i: usize) -> Self {
        let mut keep = FixedBitSet::with_capacity(self.len());
        keep.insert_range(..);
        keep.set(i, false);
        self.induced_mask(&keep)
    }

    pub(crate) fn rim_idx(&self, i: usize) -> Self {
        self.induced_mask(&self.adj[i])
    }

    pub(crate) fn ball_mask(&self, i: usize) -> FixedBitSet {
        let mut m = self.adj[i].clone();
        m.insert(i);
        m
    }

    /// Ball `U(v)` and rim `O(v) = U(v) - v`.
    pub fn neighborhood(&self, v: Label) -> Result<Neighborhood, SpaceError> {
        let i = self.require(v)?;
        Ok(Neighborhood {
            ball: self.induced_mask(&self.ball_mask(i)),
            rim: self.rim_idx(i),
        })
    }

    pub fn rim(&self, v: Label) -> Result<Self, SpaceError> {
        Ok(self.rim_idx(self.require(v)?))
    }

    pub fn ball(&self, v: Label) -> Result<Self, SpaceError> {
        Ok(self.induced_mask(&self.ball_mask(self.require(v)?)))
    }

    pub(crate) fn joint_rim_mask(&self, idx: &[usize]) -> FixedBitSet {
        let mut mask = FixedBitSet::with_capacity(self.len());
        mask.insert_range(..);
        for &i in idx {
            mask.intersect_with(&self.adj[i]);
        }
        for &i in idx {
            mask.set(i, false);
        }
        mask
    }

    /// Joint rim `O(v_1) ∩ … ∩ O(v_p)`.
    pub fn joint_rim(&self, vs: &[Label]) -> Result<Self, SpaceError> {
        if vs.is_empty() {
            return Err(SpaceError::EmptyVertexSet);
        }
        let idx = vs
            .iter()
            .map(|&v| self.require(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.induced_mask(&self.joint_rim_mask(&idx)))
    }

    /// Positions of each connected component, in order of smallest member.
    pub(crate) fn component_masks(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for s in 0..n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = FixedBitSet::with_capacity(n);
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(x) = stack.pop() {
                comp.insert(x);
                for y in self.adj[x].ones() {
                    if !seen.contains(y) {
                        seen.insert(y);
                        stack.push(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.component_masks()
            .iter()
            .map(|m| self.labels_of(m))
            .collect()
    }

    /// The empty space counts as disconnected.
    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.component_masks().len() == 1
    }

    pub fn is_complete(&self) -> bool {
        let n = self.len();
        self.adj.iter().all(|r| r.count_ones(..) + 1 == n)
    }

    /// Lowest-labelled point adjacent to every other point, if any.
    pub fn universal_point(&self) -> Option<Label> {
        let n = self.len();
        (0..n)
            .find(|&i| self.adj[i].count_ones(..) + 1 == n)
            .map(|i| self.labels[i])
    }

    pub fn max_label(&self) -> Option<Label> {
        self.labels.last().copied()
    }

    /// Smallest non-negative integer not used as a label.
    pub fn fresh_label(&self) -> Label {
        let mut next = 0;
        for &l in &self.labels {
            if l != next {
                break;
            }
            next += 1;
        }
        next
    }

    /// `count` distinct smallest unused labels, ascending.
    pub fn fresh_labels(&self, count: usize) -> Vec<Label> {
        let mut out = Vec::with_capacity(count);
        let mut candidate = 0;
        let mut it = self.labels.iter().peekable();
        while out.len() < count {
            while it.peek().is_some_and(|&&l| l < candidate) {
                it.next();
            }
            if it.peek() != Some(&&candidate) {
                out.push(candidate);
            }
            candidate += 1;
        }
        out
    }

    /// Adds a new point adjacent to exactly `attach`.
    pub fn with_point(&self, v: Label, attach: &VertexSet) -> Result<Self, SpaceError> {
        if self.contains(v) {
            return Err(SpaceError::LabelCollision(v));
        }
        let mut edges = self.edges();
        for &a in attach {
            self.require(a)?;
            edges.push((v, a));
        }
        Self::new(self.labels.iter().copied().chain([v]), edges)
    }

    pub fn with_edge(&self, a: Label, b: Label) -> Result<Self, SpaceError> {
        if a == b {
            return Err(SpaceError::SelfLoop(a));
        }
        let (i, j) = (self.require(a)?, self.require(b)?);
        let mut out = self.clone();
        out.adj[i].insert(j);
        out.adj[j].insert(i);
        Ok(out)
    }

    pub fn without_edge(&self, a: Label, b: Label) -> Result<Self, SpaceError> {
        let (i, j) = (self.require(a)?, self.require(b)?);
        if !self.adj[i].contains(j) {
            return Err(SpaceError::MissingEdge(a, b));
        }
        let mut out = self.clone();
        out.adj[i].set(j, false);
        out.adj[j].set(i, false);
        Ok(out)
    }

    pub(crate) fn without_edge_idx(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.adj[i].set(j, false);
        out.adj[j].set(i, false);
        out
    }

    /// Relabels every point through `map`, which must be injective and
    /// defined on all vertices.
    pub fn relabel(&self, map: &BTreeMap<Label, Label>) -> Result<Self, SpaceError> {
        let mut seen = VertexSet::new();
        let mut labels = Vec::with_capacity(self.len());
        for &l in &self.labels {
            let m = *map.get(&l).ok_or(SpaceError::UnknownVertex(l))?;
            if !seen.insert(m) {
                return Err(SpaceError::DuplicateVertex(m));
            }
            labels.push(m);
        }
        let edges = self
            .edges()
            .into_iter()
            .map(|(a, b)| (map[&a], map[&b]));
        Self::new(labels, edges)
    }

    /// Relabels points `0..n` in ascending label order.
    pub fn normalized(&self) -> Self {
        Self::from_rows(self.adj.clone())
    }

    pub fn is_normalized(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, &l)| l as usize == i)
    }
}

impl fmt::Debug for DigitalSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitalSpace")
            .field("vertices", &self.labels)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Join `G ⊕ H`: both operands plus every cross edge. Label sets must be
/// disjoint.
pub fn join(g: &DigitalSpace, h: &DigitalSpace) -> Result<DigitalSpace, SpaceError> {
    if let Some(&c) = h.vertices().iter().find(|&&l| g.contains(l)) {
        return Err(SpaceError::LabelCollision(c));
    }
    let mut edges = g.edges();
    edges.extend(h.edges());
    for &a in g.vertices() {
        for &b in h.vertices() {
            edges.push((a, b));
        }
    }
    DigitalSpace::new(
        g.vertices().iter().chain(h.vertices()).copied(),
        edges,
    )
}

/// Join that moves `H` into the contiguous label range just above `G`.
/// Returns the join and the relabelling applied to `H`.
pub fn join_relabeled(
    g: &DigitalSpace,
    h: &DigitalSpace,
) -> (DigitalSpace, BTreeMap<Label, Label>) {
    let base = g.max_label().map_or(0, |m| m + 1);
    let map: BTreeMap<Label, Label> = h
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, base + i as Label))
        .collect();
    let moved = h.relabel(&map).expect("relabel map is a bijection");
    let joined = join(g, &moved).expect("label ranges are disjoint");
    (joined, map)
}

/// Cone `v ⊕ G`.
pub fn cone(apex: Label, g: &DigitalSpace) -> Result<DigitalSpace, SpaceError> {
    join(&DigitalSpace::point(apex), g)
}

/// Connected sum `G # H` over `A ⊆ G`.
///
/// `gluing` maps each point of `A` to its counterpart in `B ⊆ H` and must be
/// an isomorphism of the induced subspaces. Points of `B` take the labels of
/// `A`; the remaining points of `H` are moved above `max(G)` in ascending
/// order. Returns the sum and the label map applied to `H`.
pub fn connected_sum(
    g: &DigitalSpace,
    h: &DigitalSpace,
    gluing: &BTreeMap<Label, Label>,
) -> Result<(DigitalSpace, BTreeMap<Label, Label>), SpaceError> {
    if gluing.is_empty() {
        return Err(SpaceError::EmptyGluing);
    }
    let mut inverse = BTreeMap::new();
    for (&a, &b) in gluing {
        if !g.contains(a) {
            return Err(SpaceError::UnknownVertex(a));
        }
        if !h.contains(b) {
            return Err(SpaceError::UnknownVertex(b));
        }
        if inverse.insert(b, a).is_some() {
            return Err(SpaceError::GluingNotIsomorphism);
        }
    }
    for (&a1, &b1) in gluing {
        for (&a2, &b2) in gluing.range(a1 + 1..) {
            if g.adjacent(a1, a2) != h.adjacent(b1, b2) {
                return Err(SpaceError::GluingNotIsomorphism);
            }
        }
    }
    let mut next = g.max_label().map_or(0, |m| m + 1);
    let mut map = BTreeMap::new();
    for &l in h.vertices() {
        let target = match inverse.get(&l) {
            Some(&a) => a,
            None => {
                next += 1;
                next - 1
            }
        };
        map.insert(l, target);
    }
    let mut edges = g.edges();
    edges.extend(h.edges().into_iter().map(|(a, b)| (map[&a], map[&b])));
    let vertices = g
        .vertices()
        .iter()
        .copied()
        .chain(h.vertices().iter().filter(|l| !inverse.contains_key(l)).map(|l| map[l]));
    Ok((DigitalSpace::new(vertices, edges)?, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> DigitalSpace {
        DigitalSpace::new([0, 1, 2, 3], [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn octahedron() -> DigitalSpace {
        let s = DigitalSpace::zero_sphere(0, 1).unwrap();
        let (j, _) = join_relabeled(&s, &s);
        join_relabeled(&j, &s).0
    }

    #[test]
    fn make_space_rejects_bad_input() {
        assert_eq!(
            DigitalSpace::new([0], [(0, 0)]),
            Err(SpaceError::SelfLoop(0))
        );
        assert_eq!(
            DigitalSpace::new([0, 1], [(0, 2)]),
            Err(SpaceError::UnknownVertex(2))
        );
        assert_eq!(
            DigitalSpace::new([0, 1, 1], []),
            Err(SpaceError::DuplicateVertex(1))
        );
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = DigitalSpace::new([0, 1], [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn rims_of_small_spaces() {
        let g = c4();
        let nb = g.neighborhood(0).unwrap();
        assert_eq!(nb.rim.vertices(), &[1, 3]);
        assert_eq!(nb.rim.edge_count(), 0);
        assert_eq!(nb.ball.len(), 3);

        let p = DigitalSpace::point(7);
        assert!(p.rim(7).unwrap().is_empty());
        assert!(g.rim(9).is_err());

        let o = octahedron();
        for &v in o.vertices() {
            let r = o.rim(v).unwrap();
            assert_eq!((r.len(), r.edge_count()), (4, 4));
        }
    }

    #[test]
    fn joint_rims() {
        let o = octahedron();
        // 0 and 2 are adjacent; common neighbours are the third zero-sphere.
        let jr = o.joint_rim(&[0, 2]).unwrap();
        assert_eq!(jr.vertices(), &[4, 5]);
        assert_eq!(jr.edge_count(), 0);

        assert!(c4().joint_rim(&[0, 1]).unwrap().is_empty());
        let k3 = DigitalSpace::complete([0, 1, 2]).unwrap();
        assert_eq!(k3.joint_rim(&[0, 1]).unwrap().vertices(), &[2]);
        assert_eq!(k3.joint_rim(&[]), Err(SpaceError::EmptyVertexSet));
        assert_eq!(k3.joint_rim(&[5]), Err(SpaceError::UnknownVertex(5)));
        assert_eq!(k3.joint_rim(&[1]).unwrap(), k3.rim(1).unwrap());
    }

    #[test]
    fn join_counts_and_collisions() {
        let s = DigitalSpace::zero_sphere(0, 1).unwrap();
        let t = DigitalSpace::zero_sphere(2, 3).unwrap();
        let c = join(&s, &t).unwrap();
        assert_eq!((c.len(), c.edge_count()), (4, 4));
        assert_eq!(join(&s, &s), Err(SpaceError::LabelCollision(0)));

        let (j, map) = join_relabeled(&s, &s);
        assert_eq!(map, BTreeMap::from([(0, 2), (1, 3)]));
        assert_eq!(j, c);

        let path = cone(9, &s).unwrap();
        assert_eq!((path.len(), path.edge_count()), (3, 2));
    }

    #[test]
    fn connected_sum_of_two_one_disks_is_c4() {
        let d = DigitalSpace::new([0, 1, 2], [(0, 1), (1, 2)]).unwrap();
        let e = DigitalSpace::new([10, 11, 12], [(10, 11), (11, 12)]).unwrap();
        let glue = BTreeMap::from([(0, 10), (2, 12)]);
        let (sum, map) = connected_sum(&d, &e, &glue).unwrap();
        assert_eq!(map[&11], 3);
        assert_eq!(sum.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn connected_sum_rejections() {
        let d = DigitalSpace::new([0, 1, 2], [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            connected_sum(&d, &d, &BTreeMap::new()),
            Err(SpaceError::EmptyGluing)
        );
        // 0-1 adjacent but 0-2 is not.
        assert_eq!(
            connected_sum(&d, &d, &BTreeMap::from([(0, 0), (1, 2)])),
            Err(SpaceError::GluingNotIsomorphism)
        );
    }

    #[test]
    fn fresh_labels_fill_gaps() {
        let g = DigitalSpace::new([0, 1, 3, 7], []).unwrap();
        assert_eq!(g.fresh_label(), 2);
        assert_eq!(g.fresh_labels(4), vec![2, 4, 5, 6]);
        assert_eq!(DigitalSpace::empty().fresh_labels(2), vec![0, 1]);
    }

    #[test]
    fn connectivity() {
        assert!(!DigitalSpace::empty().is_connected());
        assert!(!DigitalSpace::zero_sphere(0, 1).unwrap().is_connected());
        assert!(c4().is_connected());
        assert_eq!(c4().minus([1, 3].iter()).components().len(), 2);
    }
}
