//! Canonical labelling by partition refinement and individualization.
//!
//! The search tree is the usual one: refine the ordered partition to an
//! equitable one, pick the first smallest non-singleton cell, and branch on
//! each of its members. Leaves are discrete partitions; the canonical form is
//! the leaf whose permuted adjacency matrix is lexicographically largest.
//! Automorphisms found by comparing leaves prune children that lie in the
//! same orbit under the pointwise stabilizer of the current prefix.

use std::collections::{BTreeMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::space::{DigitalSpace, Label};

/// Isomorphism-invariant key: point count plus the upper triangle of the
/// canonically ordered adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonKey {
    n: u32,
    bits: Vec<u64>,
}

impl CanonKey {
    pub fn point_count(&self) -> usize {
        self.n as usize
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonKey,
    /// `order[i]` is the original label placed at canonical position `i`.
    pub order: Vec<Label>,
}

impl CanonicalForm {
    /// The canonical representative on labels `0..n`.
    pub fn space(&self) -> DigitalSpace {
        let n = self.key.n as usize;
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        let mut bit = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if self.key.bits[bit / 64] >> (bit % 64) & 1 == 1 {
                    rows[i].insert(j);
                    rows[j].insert(i);
                }
                bit += 1;
            }
        }
        DigitalSpace::from_rows(rows)
    }
}

#[derive(Clone)]
struct Partition {
    lab: Vec<usize>,
    cell_of: Vec<usize>,
    // Length of the cell starting at each position; meaningful at cell starts.
    len_at: Vec<usize>,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut len_at = vec![0; n];
        if n > 0 {
            len_at[0] = n;
        }
        Self {
            lab: (0..n).collect(),
            cell_of: vec![0; n],
            len_at,
        }
    }

    fn is_discrete(&self) -> bool {
        let n = self.lab.len();
        let mut c = 0;
        while c < n {
            if self.len_at[c] > 1 {
                return false;
            }
            c += 1;
        }
        true
    }

    fn target_cell(&self) -> Option<usize> {
        let n = self.lab.len();
        let mut best: Option<usize> = None;
        let mut c = 0;
        while c < n {
            let len = self.len_at[c];
            if len > 1 && best.is_none_or(|b| len < self.len_at[b]) {
                best = Some(c);
            }
            c += len;
        }
        best
    }

    fn individualize(&mut self, v: usize) -> usize {
        let c = self.cell_of[v];
        let len = self.len_at[c];
        let pos = c + self.lab[c..c + len].iter().position(|&x| x == v).unwrap();
        self.lab.swap(c, pos);
        self.len_at[c] = 1;
        self.len_at[c + 1] = len - 1;
        for &x in &self.lab[c + 1..c + len] {
            self.cell_of[x] = c + 1;
        }
        c
    }

    fn refine(&mut self, rows: &[FixedBitSet], initial: &[usize]) {
        let n = self.lab.len();
        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        for &s in initial {
            if !queued[s] {
                queued[s] = true;
                queue.push_back(s);
            }
        }
        let mut counts = vec![0usize; n];
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            let mut splitter = FixedBitSet::with_capacity(n);
            for &x in &self.lab[w..w + self.len_at[w]] {
                splitter.insert(x);
            }
            let mut c = 0;
            while c < n {
                let len = self.len_at[c];
                if len > 1 {
                    for &x in &self.lab[c..c + len] {
                        counts[x] = rows[x].intersection_count(&splitter);
                    }
                    let first = counts[self.lab[c]];
                    if self.lab[c..c + len].iter().any(|&x| counts[x] != first) {
                        self.lab[c..c + len].sort_by_key(|&x| counts[x]);
                        let mut start = c;
                        for p in c + 1..=c + len {
                            if p == c + len || counts[self.lab[p]] != counts[self.lab[start]] {
                                self.len_at[start] = p - start;
                                for &x in &self.lab[start..p] {
                                    self.cell_of[x] = start;
                                }
                                if !queued[start] {
                                    queued[start] = true;
                                    queue.push_back(start);
                                }
                                start = p;
                            }
                        }
                    }
                }
                c += len;
            }
        }
    }
}

struct Search<'a> {
    rows: &'a [FixedBitSet],
    best: Option<(Vec<u64>, Vec<usize>)>,
    first: Option<(Vec<u64>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn certificate(&self, lab: &[usize]) -> Vec<u64> {
        let n = lab.len();
        let total = n * n.saturating_sub(1) / 2;
        let mut bits = vec![0u64; total.div_ceil(64)];
        let mut bit = 0usize;
        for i in 0..n {
            let row = &self.rows[lab[i]];
            for &y in &lab[i + 1..] {
                if row.contains(y) {
                    bits[bit / 64] |= 1 << (bit % 64);
                }
                bit += 1;
            }
        }
        bits
    }

    fn leaf(&mut self, lab: &[usize]) {
        let cert = self.certificate(lab);
        for reference in [&self.first, &self.best].into_iter().flatten() {
            if reference.0 == cert {
                let mut gamma = vec![0; lab.len()];
                for (i, &x) in reference.1.iter().enumerate() {
                    gamma[x] = lab[i];
                }
                if gamma.iter().enumerate().any(|(i, &g)| i != g) && !self.generators.contains(&gamma) {
                    self.generators.push(gamma);
                }
                break;
            }
        }
        if self.first.is_none() {
            self.first = Some((cert.clone(), lab.to_vec()));
        }
        if self.best.as_ref().is_none_or(|(b, _)| cert > *b) {
            self.best = Some((cert, lab.to_vec()));
        }
    }

    fn orbit_root(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }

    fn stabilizer_orbits(&self, prefix: &[usize], n: usize) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..n).collect();
        for g in &self.generators {
            if prefix.iter().any(|&p| g[p] != p) {
                continue;
            }
            for (x, &y) in g.iter().enumerate() {
                let (a, b) = (Self::orbit_root(&mut parent, x), Self::orbit_root(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        for x in 0..n {
            Self::orbit_root(&mut parent, x);
        }
        parent
    }

    fn explore(&mut self, part: Partition, prefix: &mut Vec<usize>) {
        let Some(c) = part.target_cell() else {
            self.leaf(&part.lab);
            return;
        };
        let mut children: Vec<usize> = part.lab[c..c + part.len_at[c]].to_vec();
        children.sort_unstable();
        let n = part.lab.len();
        let mut explored: Vec<usize> = Vec::new();
        for w in children {
            if !explored.is_empty() {
                let mut orbits = self.stabilizer_orbits(prefix, n);
                let rw = Self::orbit_root(&mut orbits, w);
                if explored.iter().any(|&x| Self::orbit_root(&mut orbits, x) == rw) {
                    continue;
                }
            }
            explored.push(w);
            let mut child = part.clone();
            let start = child.individualize(w);
            child.refine(self.rows, &[start]);
            prefix.push(w);
            self.explore(child, prefix);
            prefix.pop();
        }
    }
}

pub fn canonical_form(g: &DigitalSpace) -> CanonicalForm {
    let n = g.len();
    let rows = g.rows();
    let mut part = Partition::unit(n);
    if n > 0 {
        part.refine(rows, &[0]);
    }
    debug_assert!(n == 0 || part.is_discrete() || part.target_cell().is_some());
    let mut search = Search {
        rows,
        best: None,
        first: None,
        generators: Vec::new(),
    };
    search.explore(part, &mut Vec::new());
    let (bits, lab) = search.best.expect("search tree has at least one leaf");
    CanonicalForm {
        key: CanonKey { n: n as u32, bits },
        order: lab.iter().map(|&i| g.label(i)).collect(),
    }
}

pub fn canonical_key(g: &DigitalSpace) -> CanonKey {
    canonical_form(g).key
}

/// Isomorphism test. Returns a witness bijection `G → H` when one exists.
pub fn isomorphism(g: &DigitalSpace, h: &DigitalSpace) -> Option<BTreeMap<Label, Label>> {
    if g.len() != h.len() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut dg: Vec<usize> = (0..g.len()).map(|i| g.degree_idx(i)).collect();
    let mut dh: Vec<usize> = (0..h.len()).map(|i| h.degree_idx(i)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return None;
    }
    let (cg, ch) = (canonical_form(g), canonical_form(h));
    (cg.key == ch.key).then(|| cg.order.into_iter().zip(ch.order).collect())
}

pub fn is_isomorphic(g: &DigitalSpace, h: &DigitalSpace) -> bool {
    isomorphism(g, h).is_some()
}

/// Every isomorphism `G → H`, visited with the images of `G`'s points (in
/// ascending label order) in lexicographic order. The visitor returns `false`
/// to stop.
pub fn for_each_isomorphism<F>(g: &DigitalSpace, h: &DigitalSpace, mut visit: F)
where
    F: FnMut(&BTreeMap<Label, Label>) -> bool,
{
    if g.len() != h.len() || g.edge_count() != h.edge_count() {
        return;
    }
    let n = g.len();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec<F: FnMut(&BTreeMap<Label, Label>) -> bool>(
        g: &DigitalSpace,
        h: &DigitalSpace,
        i: usize,
        image: &mut [usize],
        used: &mut [bool],
        visit: &mut F,
    ) -> bool {
        let n = g.len();
        if i == n {
            let map = (0..n).map(|k| (g.label(k), h.label(image[k]))).collect();
            return visit(&map);
        }
        for cand in 0..n {
            if used[cand] || g.degree_idx(i) != h.degree_idx(cand) {
                continue;
            }
            if (0..i).any(|k| g.adjacent_idx(i, k) != h.adjacent_idx(cand, image[k])) {
                continue;
            }
            image[i] = cand;
            used[cand] = true;
            let go_on = rec(g, h, i + 1, image, used, visit);
            used[cand] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(g, h, 0, &mut image, &mut used, &mut visit);
}

/// Lexicographically least isomorphism `G → H`, if any.
pub fn least_isomorphism(g: &DigitalSpace, h: &DigitalSpace) -> Option<BTreeMap<Label, Label>> {
    if !is_isomorphic(g, h) {
        return None;
    }
    let mut found = None;
    for_each_isomorphism(g, h, |m| {
        found = Some(m.clone());
        false
    });
    found
}
