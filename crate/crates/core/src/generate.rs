//! Standard spaces: minimal spheres and disks, cycles, paths, the toroidal
//! grid and barycentric subdivisions of abstract simplicial complexes.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::SpaceError;
use crate::space::{cone, join_relabeled, DigitalSpace, Label};

/// Join of `n + 1` zero-spheres on labels `0..2n+2`; copy `i` is `{2i, 2i+1}`.
/// `n = -1` gives the empty space.
pub fn minimal_sphere(n: i32) -> DigitalSpace {
    let mut s = DigitalSpace::empty();
    for _ in 0..=n {
        let (next, _) = join_relabeled(&s, &DigitalSpace::zero_sphere(0, 1).unwrap());
        s = next;
    }
    s
}

/// Cone over the minimal `(n-1)`-sphere; the apex is labelled `2n`.
pub fn minimal_disk(n: usize) -> DigitalSpace {
    let base = minimal_sphere(n as i32 - 1);
    cone(2 * n as Label, &base).expect("apex label is above the base")
}

pub fn cycle(len: u32) -> DigitalSpace {
    DigitalSpace::new(0..len, (0..len).map(|i| (i, (i + 1) % len))).unwrap()
}

pub fn path(len: u32) -> DigitalSpace {
    DigitalSpace::new(0..len, (1..len).map(|i| (i - 1, i))).unwrap()
}

/// `rows × cols` grid on the torus with the `(+1, +1)` diagonal in every
/// square; point `(i, j)` is labelled `i * cols + j`. Each rim is a
/// chordless hexagon when both sides are at least 4.
pub fn torus_grid(rows: u32, cols: u32) -> DigitalSpace {
    let label = |i: u32, j: u32| (i % rows) * cols + (j % cols);
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let v = label(i, j);
            edges.push((v, label(i + 1, j)));
            edges.push((v, label(i, j + 1)));
            edges.push((v, label(i + 1, j + 1)));
        }
    }
    DigitalSpace::new(0..rows * cols, edges.into_iter().filter(|(a, b)| a != b)).unwrap()
}

/// Comparability graph of the face poset of a simplicial complex given by
/// its facets. Faces are labelled in (size, lexicographic) order.
pub fn barycentric_subdivision(facets: &[Vec<Label>]) -> Result<DigitalSpace, SpaceError> {
    let mut faces: BTreeSet<(usize, Vec<Label>)> = BTreeSet::new();
    for f in facets {
        let mut f = f.clone();
        f.sort_unstable();
        f.dedup();
        for mask in 1u32..(1 << f.len()) {
            let face: Vec<Label> = (0..f.len()).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            faces.insert((face.len(), face));
        }
    }
    let faces: Vec<Vec<Label>> = faces.into_iter().map(|(_, f)| f).collect();
    let index: BTreeMap<&[Label], Label> = faces
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_slice(), i as Label))
        .collect();
    let mut edges = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        for mask in 1u32..(1 << f.len()) - 1 {
            let sub: Vec<Label> = (0..f.len()).filter(|&k| mask >> k & 1 == 1).map(|k| f[k]).collect();
            edges.push((index[sub.as_slice()], i as Label));
        }
    }
    DigitalSpace::new(0..faces.len() as Label, edges)
}

/// Facets of the six-vertex real projective plane.
pub const RP2_SIX_VERTEX: [[Label; 3]; 10] = [
    [1, 2, 3],
    [1, 3, 4],
    [1, 4, 5],
    [1, 5, 6],
    [1, 2, 6],
    [2, 3, 5],
    [3, 4, 6],
    [2, 4, 5],
    [3, 5, 6],
    [2, 4, 6],
];

/// Barycentric subdivision of the six-vertex projective plane (31 points).
pub fn projective_plane_subdivided() -> DigitalSpace {
    let facets: Vec<Vec<Label>> = RP2_SIX_VERTEX.iter().map(|f| f.to_vec()).collect();
    barycentric_subdivision(&facets).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;
    use crate::invariants::euler_characteristic;

    #[test]
    fn minimal_sphere_sizes() {
        assert!(minimal_sphere(-1).is_empty());
        for n in 0..5 {
            let s = minimal_sphere(n);
            assert_eq!(s.len(), 2 * n as usize + 2);
            for &v in s.vertices() {
                assert!(is_isomorphic(&s.rim(v).unwrap(), &minimal_sphere(n - 1)));
            }
        }
        assert!(is_isomorphic(&minimal_sphere(1), &cycle(4)));
    }

    #[test]
    fn minimal_disks() {
        assert!(is_isomorphic(&minimal_disk(1), &path(3)));
        assert_eq!(minimal_disk(2).len(), 5);
        assert_eq!(minimal_disk(2).degree(4).unwrap(), 4);
    }

    #[test]
    fn torus_grid_is_regular_with_euler_zero() {
        let t = torus_grid(4, 4);
        assert_eq!(t.len(), 16);
        for &v in t.vertices() {
            let rim = t.rim(v).unwrap();
            assert!(is_isomorphic(&rim, &cycle(6)));
        }
        assert_eq!(euler_characteristic(&t), 0);
    }

    #[test]
    fn subdivided_projective_plane() {
        let p = projective_plane_subdivided();
        assert_eq!(p.len(), 6 + 15 + 10);
        assert_eq!(euler_characteristic(&p), 1);
    }
}
