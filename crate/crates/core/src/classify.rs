//! Recursive classification of digital spaces.
//!
//! Everything here is decided through rims: a normal `n`-space has normal
//! `(n-1)`-dimensional rims, a closed `n`-manifold has `(n-1)`-sphere rims,
//! an `n`-sphere is a closed `n`-manifold that becomes contractible after
//! deleting one point, and an `n`-disk is a contractible space whose points
//! have sphere or disk rims and which closes up into a closed `n`-manifold
//! when a cone point is attached over its boundary.
//!
//! [`Topology`] owns the memo tables. Every entry is keyed on the canonical
//! form of the space, so isomorphic rims met anywhere in a computation are
//! decided once. Indeterminate outcomes (search budget exhausted) are never
//! cached.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Mutex;

use serde::{Serialize, Serializer};

use crate::canon::{canonical_key, CanonKey};
use crate::error::ClassifyError;
use crate::invariants::euler_characteristic;
use crate::space::{DigitalSpace, Label, VertexSet};

/// Three-valued outcome of a bounded decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    True,
    False,
    Indeterminate,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Decision::True
    }

    pub fn is_false(self) -> bool {
        self == Decision::False
    }

    pub fn and(self, other: Decision) -> Decision {
        match (self, other) {
            (Decision::False, _) | (_, Decision::False) => Decision::False,
            (Decision::True, Decision::True) => Decision::True,
            _ => Decision::Indeterminate,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::True => "true",
            Decision::False => "false",
            Decision::Indeterminate => "indeterminate",
        })
    }
}

/// Dimension of a normal space; `Dim(-1)` is the empty space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormalDimension {
    Dim(i32),
    NotNormal,
}

impl Serialize for NormalDimension {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            NormalDimension::Dim(d) => s.serialize_i32(*d),
            NormalDimension::NotNormal => s.serialize_str("not-normal"),
        }
    }
}

impl fmt::Display for NormalDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalDimension::Dim(d) => write!(f, "{d}"),
            NormalDimension::NotNormal => f.write_str("not-normal"),
        }
    }
}

/// A contractible deletion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "kebab-case")]
pub enum Deletion {
    /// Delete a point whose rim is contractible.
    Point { v: Label },
    /// Delete an edge whose joint rim is contractible.
    Edge { u: Label, v: Label },
}

/// Deletions that reduce a space to a single point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ContractionCertificate {
    pub moves: Vec<Deletion>,
}

impl ContractionCertificate {
    /// Replays the moves on `g`, re-checking every precondition. Returns the
    /// final space, which is a single point when the certificate is valid.
    pub fn replay(&self, g: &DigitalSpace, topo: &Topology) -> Result<DigitalSpace, CertificateError> {
        let mut cur = g.clone();
        for (step, mv) in self.moves.iter().enumerate() {
            cur = match *mv {
                Deletion::Point { v } => {
                    let rim = cur.rim(v).map_err(|_| CertificateError { step })?;
                    if !topo.contractible_decision(&rim).is_true() {
                        return Err(CertificateError { step });
                    }
                    cur.remove_point(v).map_err(|_| CertificateError { step })?
                }
                Deletion::Edge { u, v } => {
                    if !cur.adjacent(u, v) {
                        return Err(CertificateError { step });
                    }
                    let jr = cur.joint_rim(&[u, v]).map_err(|_| CertificateError { step })?;
                    if !topo.contractible_decision(&jr).is_true() {
                        return Err(CertificateError { step });
                    }
                    cur.without_edge(u, v).map_err(|_| CertificateError { step })?
                }
            };
        }
        Ok(cur)
    }

    pub fn verify(&self, g: &DigitalSpace, topo: &Topology) -> bool {
        self.replay(g, topo).is_ok_and(|end| end.len() == 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("certificate move {step} is not applicable")]
pub struct CertificateError {
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contractibility {
    Contractible(ContractionCertificate),
    NotContractible,
    Indeterminate,
}

impl Contractibility {
    pub fn decision(&self) -> Decision {
        match self {
            Contractibility::Contractible(_) => Decision::True,
            Contractibility::NotContractible => Decision::False,
            Contractibility::Indeterminate => Decision::Indeterminate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereCheck {
    pub decision: Decision,
    /// A point whose deletion leaves a contractible space.
    pub witness: Option<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiskDecomposition {
    pub is_disk: Decision,
    /// Points whose rim is an `(n-1)`-disk.
    pub boundary: VertexSet,
    /// Points whose rim is an `(n-1)`-sphere.
    pub interior: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub normal_dimension: NormalDimension,
    /// Dimension the manifold predicates were evaluated at.
    pub dimension: usize,
    pub is_closed_manifold: Decision,
    pub is_sphere: Decision,
    pub sphere_witness: Option<Label>,
    pub is_disk: Decision,
    pub boundary: VertexSet,
    pub interior: VertexSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// States explored by one contractibility search before giving up.
    pub contraction_budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            contraction_budget: 1_000_000,
        }
    }
}

#[derive(Default)]
struct Memo {
    normal: HashMap<CanonKey, NormalDimension>,
    contractible: HashMap<CanonKey, bool>,
    sphere: HashMap<(CanonKey, usize), bool>,
    manifold: HashMap<(CanonKey, usize), bool>,
    disk: HashMap<(CanonKey, usize), bool>,
}

/// Classifier with shared memo tables.
#[derive(Default)]
pub struct Topology {
    config: SearchConfig,
    memo: Mutex<Memo>,
}

impl Topology {
    pub fn new(config: SearchConfig) -> Self {
        Self {
            config,
            memo: Mutex::default(),
        }
    }

    pub fn config(&self) -> SearchConfig {
        self.config
    }

    fn memo<R>(&self, f: impl FnOnce(&mut Memo) -> R) -> R {
        f(&mut self.memo.lock().unwrap_or_else(|e| e.into_inner()))
    }

    pub fn normal_dimension(&self, g: &DigitalSpace) -> NormalDimension {
        if g.is_empty() {
            return NormalDimension::Dim(-1);
        }
        if g.len() == 2 && g.edge_count() == 0 {
            return NormalDimension::Dim(0);
        }
        if g.len() == 1 || !g.is_connected() {
            return NormalDimension::NotNormal;
        }
        let key = canonical_key(g);
        if let Some(&d) = self.memo(|m| m.normal.get(&key).copied()).as_ref() {
            return d;
        }
        let mut dim = None;
        let mut result = NormalDimension::NotNormal;
        for i in 0..g.len() {
            match self.normal_dimension(&g.rim_idx(i)) {
                NormalDimension::Dim(d) if d >= 0 && dim.is_none_or(|x| x == d) => dim = Some(d),
                _ => {
                    dim = None;
                    break;
                }
            }
        }
        if let Some(d) = dim {
            result = NormalDimension::Dim(d + 1);
        }
        self.memo(|m| m.normal.insert(key, result));
        result
    }

    /// Bounded contractibility decision used for rims and joint rims.
    pub fn contractible_decision(&self, g: &DigitalSpace) -> Decision {
        if let Some(d) = quick_contractible(g) {
            return d;
        }
        let key = canonical_key(g);
        if let Some(b) = self.memo(|m| m.contractible.get(&key).copied()) {
            return Decision::from_bool(b);
        }
        let outcome = ContractionSearch::new(self).run(g);
        let d = outcome.decision();
        if d != Decision::Indeterminate {
            self.memo(|m| m.contractible.insert(key, d.is_true()));
        }
        d
    }

    /// Decides contractibility by contractible deletions and returns the
    /// move sequence when the space reduces to a point.
    pub fn is_contractible(&self, g: &DigitalSpace) -> Result<Contractibility, ClassifyError> {
        if g.is_empty() {
            return Err(ClassifyError::EmptySpace);
        }
        if let Some(Decision::False) = quick_contractible(g) {
            return Ok(Contractibility::NotContractible);
        }
        if g.len() > 1 && g.universal_point().is_none() {
            let key = canonical_key(g);
            if self.memo(|m| m.contractible.get(&key).copied()) == Some(false) {
                return Ok(Contractibility::NotContractible);
            }
        }
        Ok(ContractionSearch::new(self).run(g))
    }

    pub fn is_closed_manifold(&self, g: &DigitalSpace, n: usize) -> Result<Decision, ClassifyError> {
        if n < 1 {
            return Err(ClassifyError::Dimension { min: 1, got: n });
        }
        Ok(self.manifold_decision(g, n))
    }

    pub(crate) fn manifold_decision(&self, g: &DigitalSpace, n: usize) -> Decision {
        if n == 0 || !g.is_connected() {
            return Decision::False;
        }
        if (0..g.len()).any(|i| g.degree_idx(i) < 2 * n) {
            return Decision::False;
        }
        let key = canonical_key(g);
        if let Some(b) = self.memo(|m| m.manifold.get(&(key.clone(), n)).copied()) {
            return Decision::from_bool(b);
        }
        let mut result = Decision::True;
        for i in 0..g.len() {
            result = result.and(self.sphere_decision(&g.rim_idx(i), n - 1));
            if result.is_false() {
                break;
            }
        }
        if result != Decision::Indeterminate {
            self.memo(|m| m.manifold.insert((key, n), result.is_true()));
        }
        result
    }

    pub fn is_sphere(&self, g: &DigitalSpace, n: usize) -> SphereCheck {
        let decision = self.sphere_decision(g, n);
        let witness = if decision.is_true() && n > 0 {
            (0..g.len())
                .find(|&i| self.contractible_decision(&g.remove_idx(i)).is_true())
                .map(|i| g.label(i))
        } else {
            None
        };
        SphereCheck { decision, witness }
    }

    pub(crate) fn sphere_decision(&self, g: &DigitalSpace, n: usize) -> Decision {
        if n == 0 {
            return Decision::from_bool(g.len() == 2 && g.edge_count() == 0);
        }
        if g.len() < 2 * n + 2 || !g.is_connected() {
            return Decision::False;
        }
        let key = canonical_key(g);
        if let Some(b) = self.memo(|m| m.sphere.get(&(key.clone(), n)).copied()) {
            return Decision::from_bool(b);
        }
        let mut result = self.manifold_decision(g, n);
        if !result.is_false() {
            let mut found = Decision::False;
            for i in 0..g.len() {
                match self.contractible_decision(&g.remove_idx(i)) {
                    Decision::True => {
                        found = Decision::True;
                        break;
                    }
                    Decision::Indeterminate => found = Decision::Indeterminate,
                    Decision::False => {}
                }
            }
            result = result.and(found);
        }
        if result != Decision::Indeterminate {
            self.memo(|m| m.sphere.insert((key, n), result.is_true()));
        }
        result
    }

    pub fn disk_decomposition(&self, g: &DigitalSpace, n: usize) -> Result<DiskDecomposition, ClassifyError> {
        if n < 1 {
            return Err(ClassifyError::Dimension { min: 1, got: n });
        }
        let (boundary, interior, _) = self.split_boundary(g, n);
        Ok(DiskDecomposition {
            is_disk: self.disk_decision(g, n),
            boundary: boundary.into_iter().map(|i| g.label(i)).collect(),
            interior: interior.into_iter().map(|i| g.label(i)).collect(),
        })
    }

    /// Positions with disk rims, positions with sphere rims, and whether any
    /// rim was undecided.
    fn split_boundary(&self, g: &DigitalSpace, n: usize) -> (Vec<usize>, Vec<usize>, Decision) {
        let mut boundary = Vec::new();
        let mut interior = Vec::new();
        let mut all = Decision::True;
        for i in 0..g.len() {
            let rim = g.rim_idx(i);
            let s = self.sphere_decision(&rim, n - 1);
            if s.is_true() {
                interior.push(i);
                continue;
            }
            let d = self.disk_decision(&rim, n - 1);
            if d.is_true() {
                boundary.push(i);
            } else if s == Decision::Indeterminate || d == Decision::Indeterminate {
                all = all.and(Decision::Indeterminate);
            } else {
                all = Decision::False;
            }
        }
        (boundary, interior, all)
    }

    pub(crate) fn disk_decision(&self, g: &DigitalSpace, n: usize) -> Decision {
        if n == 0 {
            return Decision::from_bool(g.len() == 1);
        }
        if g.len() < 2 * n + 1 || !g.is_connected() {
            return Decision::False;
        }
        if euler_characteristic(g) != 1 {
            return Decision::False;
        }
        let key = canonical_key(g);
        if let Some(b) = self.memo(|m| m.disk.get(&(key.clone(), n)).copied()) {
            return Decision::from_bool(b);
        }
        let result = self.disk_uncached(g, n);
        if result != Decision::Indeterminate {
            self.memo(|m| m.disk.insert((key, n), result.is_true()));
        }
        result
    }

    fn disk_uncached(&self, g: &DigitalSpace, n: usize) -> Decision {
        let (boundary, _, covered) = self.split_boundary(g, n);
        if covered.is_false() || boundary.is_empty() {
            return Decision::False;
        }
        let apex = g.fresh_label();
        let attach: VertexSet = boundary.iter().map(|&i| g.label(i)).collect();
        let closed = g.with_point(apex, &attach).expect("apex label is fresh");
        covered
            .and(self.manifold_decision(&closed, n))
            .and(self.contractible_decision(g))
    }

    /// Classification record at dimension `dim`, or at the normal dimension
    /// (falling back to clique number minus one) when `dim` is absent.
    pub fn classify(&self, g: &DigitalSpace, dim: Option<usize>) -> Classification {
        let normal = self.normal_dimension(g);
        let dimension = dim.unwrap_or_else(|| match normal {
            NormalDimension::Dim(d) if d >= 1 => d as usize,
            _ => crate::cliques::clique_number(g).saturating_sub(1).max(1),
        });
        let sphere = self.is_sphere(g, dimension);
        let closed = self.manifold_decision(g, dimension);
        let disk = if g.is_empty() {
            DiskDecomposition {
                is_disk: Decision::False,
                boundary: VertexSet::new(),
                interior: VertexSet::new(),
            }
        } else {
            self.disk_decomposition(g, dimension).expect("dimension is at least 1")
        };
        Classification {
            normal_dimension: normal,
            dimension,
            is_closed_manifold: closed,
            is_sphere: sphere.decision,
            sphere_witness: sphere.witness,
            is_disk: disk.is_disk,
            boundary: disk.boundary,
            interior: disk.interior,
        }
    }
}

/// Decides the cases that need no search: single points and cones are
/// contractible; empty and disconnected spaces, and spaces whose Euler
/// characteristic is not 1, are not.
fn quick_contractible(g: &DigitalSpace) -> Option<Decision> {
    match g.len() {
        0 => return Some(Decision::False),
        1 => return Some(Decision::True),
        _ => {}
    }
    if g.universal_point().is_some() {
        return Some(Decision::True);
    }
    if !g.is_connected() || euler_characteristic(g) != 1 {
        return Some(Decision::False);
    }
    None
}

/// Depth-first search over contractible deletions: points first in
/// ascending rim size, then edges in ascending joint-rim size, ties by
/// label. The first branch is the greedy reduction; failures are remembered
/// by canonical form.
struct ContractionSearch<'a> {
    topo: &'a Topology,
    explored: usize,
    failed: HashSet<CanonKey>,
    exhausted: bool,
    incomplete: bool,
}

impl<'a> ContractionSearch<'a> {
    fn new(topo: &'a Topology) -> Self {
        Self {
            topo,
            explored: 0,
            failed: HashSet::new(),
            exhausted: false,
            incomplete: false,
        }
    }

    fn run(mut self, g: &DigitalSpace) -> Contractibility {
        if g.is_empty() || !g.is_connected() && g.len() > 1 {
            return Contractibility::NotContractible;
        }
        if g.len() > 1 && g.universal_point().is_none() && euler_characteristic(g) != 1 {
            return Contractibility::NotContractible;
        }
        let mut moves = Vec::new();
        if self.descend(g.clone(), &mut moves) {
            Contractibility::Contractible(ContractionCertificate { moves })
        } else if self.exhausted || self.incomplete {
            Contractibility::Indeterminate
        } else {
            Contractibility::NotContractible
        }
    }

    fn descend(&mut self, g: DigitalSpace, moves: &mut Vec<Deletion>) -> bool {
        if g.len() == 1 {
            return true;
        }
        if let Some(apex) = g.universal_point() {
            moves.extend(
                g.vertices()
                    .iter()
                    .filter(|&&v| v != apex)
                    .map(|&v| Deletion::Point { v }),
            );
            return true;
        }
        if self.explored >= self.topo.config.contraction_budget {
            self.exhausted = true;
            return false;
        }
        self.explored += 1;
        if !self.failed.is_empty() && self.failed.contains(&canonical_key(&g)) {
            return false;
        }

        let mut points: Vec<usize> = (0..g.len()).collect();
        points.sort_by_key(|&i| (g.degree_idx(i), g.label(i)));
        for i in points {
            match self.topo.contractible_decision(&g.rim_idx(i)) {
                Decision::True => {
                    moves.push(Deletion::Point { v: g.label(i) });
                    if self.descend(g.remove_idx(i), moves) {
                        return true;
                    }
                    moves.pop();
                    if self.exhausted {
                        return false;
                    }
                }
                Decision::Indeterminate => self.incomplete = true,
                Decision::False => {}
            }
        }

        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        for i in 0..g.len() {
            for j in g.row(i).ones().filter(|&j| j > i) {
                edges.push((g.joint_rim_mask(&[i, j]).count_ones(..), i, j));
            }
        }
        edges.sort_unstable();
        for (_, i, j) in edges {
            let jr = g.induced_mask(&g.joint_rim_mask(&[i, j]));
            match self.topo.contractible_decision(&jr) {
                Decision::True => {
                    moves.push(Deletion::Edge {
                        u: g.label(i),
                        v: g.label(j),
                    });
                    if self.descend(g.without_edge_idx(i, j), moves) {
                        return true;
                    }
                    moves.pop();
                    if self.exhausted {
                        return false;
                    }
                }
                Decision::Indeterminate => self.incomplete = true,
                Decision::False => {}
            }
        }
        self.failed.insert(canonical_key(&g));
        false
    }
}
