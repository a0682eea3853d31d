//! Voxel digitization of implicit surfaces.
//!
//! The box is tiled by cubes of side `h` anchored at its minimum corner. A
//! cube is selected when the function changes sign over its eight corners
//! or vanishes at one of them, and selected cubes are adjacent when they
//! share at least a corner.

use std::collections::HashMap;

use serde::Serialize;

use crate::classify::{Classification, Topology};
use crate::error::DigitizeError;
use crate::invariants::{Field, InvariantReport};
use crate::space::DigitalSpace;
use crate::transform::reduce_contractible;

/// Largest number of grid corners a single digitization may evaluate.
pub const MAX_CORNERS: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundingBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl BoundingBox {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Result<Self, DigitizeError> {
        let ok = (0..3).all(|a| min[a].is_finite() && max[a].is_finite() && min[a] < max[a]);
        if ok {
            Ok(Self { min, max })
        } else {
            Err(DigitizeError::DegenerateBox)
        }
    }

    pub fn cube(half: f64) -> Result<Self, DigitizeError> {
        Self::new([-half; 3], [half; 3])
    }

    pub fn scaled(&self, factor: f64) -> Result<Self, DigitizeError> {
        Self::new(self.min.map(|x| x * factor), self.max.map(|x| x * factor))
    }
}

/// A real-valued function whose zero set is the surface.
pub trait ImplicitSurface {
    fn eval(&self, p: [f64; 3]) -> f64;
}

impl<F: Fn([f64; 3]) -> f64> ImplicitSurface for F {
    fn eval(&self, p: [f64; 3]) -> f64 {
        self(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "surface", rename_all = "kebab-case")]
pub enum Surface {
    /// `x² + y² + z² − r²`.
    Sphere { radius: f64 },
    /// Torus of revolution about the z axis.
    Torus { major: f64, minor: f64 },
    /// `z − height`.
    Plane { height: f64 },
}

impl ImplicitSurface for Surface {
    fn eval(&self, [x, y, z]: [f64; 3]) -> f64 {
        match *self {
            Surface::Sphere { radius } => x * x + y * y + z * z - radius * radius,
            Surface::Torus { major, minor } => {
                let q = (x * x + y * y).sqrt() - major;
                q * q + z * z - minor * minor
            }
            Surface::Plane { height } => z - height,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VoxelModel {
    pub bounds: BoundingBox,
    pub side: f64,
    /// Selected cubes in lexicographic order; cube `i` is point `i` of the graph.
    pub cubes: Vec<[i64; 3]>,
    #[serde(skip)]
    pub graph: DigitalSpace,
}

fn steps(lo: f64, hi: f64, h: f64) -> usize {
    let raw = (hi - lo) / h;
    let rounded = raw.round();
    if (raw - rounded).abs() < 1e-9 * raw.max(1.0) {
        rounded as usize
    } else {
        raw.ceil() as usize
    }
}

pub fn voxelize_surface<S: ImplicitSurface + ?Sized>(
    f: &S,
    bounds: BoundingBox,
    h: f64,
) -> Result<VoxelModel, DigitizeError> {
    if !(h.is_finite() && h > 0.0) {
        return Err(DigitizeError::CubeSide(h));
    }
    let dims: [usize; 3] = std::array::from_fn(|a| steps(bounds.min[a], bounds.max[a], h));
    let corners = dims.iter().map(|d| d + 1).try_fold(1usize, |acc, d| acc.checked_mul(d));
    let corners = match corners {
        Some(c) if c <= MAX_CORNERS => c,
        _ => return Err(DigitizeError::GridTooLarge(dims.iter().product())),
    };
    let [nx, ny, nz] = dims.map(|d| d + 1);
    let mut value = Vec::with_capacity(corners);
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                let p = [
                    bounds.min[0] + i as f64 * h,
                    bounds.min[1] + j as f64 * h,
                    bounds.min[2] + k as f64 * h,
                ];
                value.push(f.eval(p));
            }
        }
    }
    let at = |i: usize, j: usize, k: usize| value[(i * ny + j) * nz + k];
    let mut cubes = Vec::new();
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let (mut neg, mut pos, mut zero) = (false, false, false);
                for c in 0..8 {
                    let v = at(i + (c & 1), j + (c >> 1 & 1), k + (c >> 2 & 1));
                    neg |= v < 0.0;
                    pos |= v > 0.0;
                    zero |= v == 0.0;
                }
                if zero || (neg && pos) {
                    cubes.push([i as i64, j as i64, k as i64]);
                }
            }
        }
    }
    let graph = intersection_graph(&cubes);
    Ok(VoxelModel {
        bounds,
        side: h,
        cubes,
        graph,
    })
}

/// Graph on cubes in which distinct cubes are adjacent when their integer
/// coordinates differ by at most one on every axis.
pub fn intersection_graph(cubes: &[[i64; 3]]) -> DigitalSpace {
    let index: HashMap<[i64; 3], u32> = cubes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
    let mut edges = Vec::new();
    for (i, c) in cubes.iter().enumerate() {
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(&j) = index.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) {
                        if (i as u32) < j {
                            edges.push((i as u32, j));
                        }
                    }
                }
            }
        }
    }
    DigitalSpace::new(0..cubes.len() as u32, edges).expect("cube labels are distinct")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    pub side: f64,
    pub points: usize,
    pub classification: Classification,
    pub invariants: InvariantReport,
    /// Points left after greedy contractible deletions.
    pub reduced_points: usize,
    pub reduction_steps: usize,
    pub reduced_classification: Classification,
    pub reduced_invariants: InvariantReport,
    #[serde(skip)]
    pub reduced: DigitalSpace,
    #[serde(skip)]
    pub model: VoxelModel,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinementReport {
    pub levels: Vec<LevelReport>,
    pub euler_stable: bool,
    pub betti_stable: bool,
    /// Sides at which nothing was selected.
    pub empty_levels: Vec<f64>,
}

/// Digitizes at `h, h/2, …` (`levels` sides) and compares invariants. Each
/// level is also reduced by contractible deletions and classified at
/// dimension `n`.
pub fn refine_and_compare<S: ImplicitSurface + ?Sized>(
    f: &S,
    bounds: BoundingBox,
    h: f64,
    levels: usize,
    n: usize,
    topo: &Topology,
) -> Result<RefinementReport, DigitizeError> {
    if levels < 2 {
        return Err(DigitizeError::Levels { min: 2, got: levels });
    }
    let mut out = Vec::new();
    let mut empty = Vec::new();
    for l in 0..levels {
        let side = h / f64::from(1u32 << l);
        let model = voxelize_surface(f, bounds, side)?;
        if model.graph.is_empty() {
            empty.push(side);
            continue;
        }
        let (reduced, trace) = reduce_contractible(&model.graph, topo);
        out.push(LevelReport {
            side,
            points: model.graph.len(),
            classification: topo.classify(&model.graph, Some(n)),
            invariants: InvariantReport::compute(&model.graph, Field::Rationals),
            reduced_points: reduced.len(),
            reduction_steps: trace.len(),
            reduced_classification: topo.classify(&reduced, Some(n)),
            reduced_invariants: InvariantReport::compute(&reduced, Field::Rationals),
            reduced,
            model,
        });
    }
    let all_same = |key: &dyn Fn(&LevelReport) -> Vec<i64>| {
        empty.is_empty() && out.windows(2).all(|w| key(&w[0]) == key(&w[1]))
    };
    let euler_stable = all_same(&|r| vec![r.invariants.euler]);
    let betti_stable = all_same(&|r| r.invariants.betti.iter().map(|&b| b as i64).collect());
    Ok(RefinementReport {
        levels: out,
        euler_stable,
        betti_stable,
        empty_levels: empty,
    })
}
