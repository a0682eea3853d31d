//! Digital topology on finite graphs.
//!
//! A digital space is a finite simple graph whose points are vertices. The
//! crate classifies spaces (normal dimension, contractibility, closed
//! manifolds, spheres, disks), transforms them by contractible and
//! homeomorphic moves with replayable traces, computes clique-complex
//! invariants, evaluates sphere recognition criteria and digitizes implicit
//! surfaces into cube intersection graphs.
//!
//! ```
//! use digitop::classify::Topology;
//! use digitop::generate::minimal_sphere;
//!
//! let topo = Topology::default();
//! let octahedron = minimal_sphere(2);
//! assert!(topo.is_sphere(&octahedron, 2).decision.is_true());
//! ```

pub mod canon;
pub mod classify;
pub mod cliques;
pub mod digitize;
pub mod error;
pub mod format;
pub mod generate;
pub mod invariants;
pub mod recognize;
pub mod space;
pub mod transform;

pub use classify::{Classification, Decision, NormalDimension, Topology};
pub use error::{ClassifyError, DigitizeError, FormatError, RecognizeError, SpaceError, TransformError};
pub use space::{DigitalSpace, Label, VertexSet};
