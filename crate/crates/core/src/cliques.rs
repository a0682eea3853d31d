//! Complete-subgraph enumeration.

use fixedbitset::FixedBitSet;

use crate::space::{DigitalSpace, Label, VertexSet};

/// Visits every nonempty complete subgraph exactly once as an increasing
/// list of positions, stopping at `max_size` points when given.
pub(crate) fn for_each_clique<F: FnMut(&[usize])>(g: &DigitalSpace, max_size: Option<usize>, mut f: F) {
    let n = g.len();
    let limit = max_size.unwrap_or(usize::MAX);
    if limit == 0 {
        return;
    }
    let mut stack = Vec::new();
    for v in 0..n {
        let mut cand = g.row(v).clone();
        cand.set_range(0..v + 1, false);
        stack.push(v);
        extend(g, &mut stack, &cand, limit, &mut f);
        stack.pop();
    }

    fn extend<F: FnMut(&[usize])>(
        g: &DigitalSpace,
        stack: &mut Vec<usize>,
        cand: &FixedBitSet,
        limit: usize,
        f: &mut F,
    ) {
        f(stack);
        if stack.len() == limit {
            return;
        }
        for w in cand.ones() {
            let mut next = cand.clone();
            next.intersect_with(g.row(w));
            next.set_range(0..w + 1, false);
            stack.push(w);
            extend(g, stack, &next, limit, f);
            stack.pop();
        }
    }
}

/// Visits every nonempty complete subgraph once as an increasing list of
/// labels.
pub fn for_each_complete_subgraph<F: FnMut(&[Label])>(g: &DigitalSpace, mut f: F) {
    let mut labels = Vec::new();
    for_each_clique(g, None, |c| {
        labels.clear();
        labels.extend(c.iter().map(|&i| g.label(i)));
        f(&labels);
    });
}

/// `counts[i]` is the number of complete subgraphs with `i + 1` points.
pub fn clique_counts(g: &DigitalSpace, max_size: Option<usize>) -> Vec<u64> {
    let mut counts: Vec<u64> = Vec::new();
    for_each_clique(g, max_size, |c| {
        if counts.len() < c.len() {
            counts.resize(c.len(), 0);
        }
        counts[c.len() - 1] += 1;
    });
    counts
}

/// Complete subgraphs grouped by size (index `k` holds the `k+1`-point
/// cliques), each as sorted positions, each group sorted lexicographically.
pub(crate) fn cliques_by_size(g: &DigitalSpace) -> Vec<Vec<Vec<u32>>> {
    let mut out: Vec<Vec<Vec<u32>>> = Vec::new();
    for_each_clique(g, None, |c| {
        if out.len() < c.len() {
            out.resize(c.len(), Vec::new());
        }
        out[c.len() - 1].push(c.iter().map(|&i| i as u32).collect());
    });
    for group in &mut out {
        group.sort_unstable();
    }
    out
}

/// Maximal complete subgraphs by Bron–Kerbosch with Tomita pivoting.
pub fn maximal_cliques(g: &DigitalSpace) -> Vec<VertexSet> {
    let n = g.len();
    let mut out = Vec::new();
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    let x = FixedBitSet::with_capacity(n);
    let mut r = Vec::new();
    bron_kerbosch(g, &mut r, p, x, &mut out);
    out.sort();
    out
}

fn bron_kerbosch(
    g: &DigitalSpace,
    r: &mut Vec<usize>,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    out: &mut Vec<VertexSet>,
) {
    if p.is_clear() {
        if x.is_clear() && !r.is_empty() {
            out.push(r.iter().map(|&i| g.label(i)).collect());
        }
        return;
    }
    let pivot = p
        .union(&x)
        .max_by_key(|&u| g.row(u).intersection_count(&p))
        .expect("P ∪ X is nonempty");
    let mut todo = p.clone();
    todo.difference_with(g.row(pivot));
    for v in todo.ones() {
        let mut np = p.clone();
        np.intersect_with(g.row(v));
        let mut nx = x.clone();
        nx.intersect_with(g.row(v));
        r.push(v);
        bron_kerbosch(g, r, np, nx, out);
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
}

/// Size of the largest complete subgraph (0 for the empty space).
pub fn clique_number(g: &DigitalSpace) -> usize {
    maximal_cliques(g).iter().map(|c| c.len()).max().unwrap_or(0)
}
