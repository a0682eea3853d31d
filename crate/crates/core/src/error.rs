use thiserror::Error;

use crate::space::{Label, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("self-loop at point {0}")]
    SelfLoop(Label),
    #[error("point {0} is not in the space")]
    UnknownVertex(Label),
    #[error("duplicate point label {0}")]
    DuplicateVertex(Label),
    #[error("label {0} is used by both operands")]
    LabelCollision(Label),
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("connected sum needs a nonempty gluing set")]
    EmptyGluing,
    #[error("gluing map is not an isomorphism of the induced subspaces")]
    GluingNotIsomorphism,
    #[error("points {0} and {1} are not adjacent")]
    MissingEdge(Label, Label),
}

/// Parse error for the line-oriented text formats, with a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("contractibility is undefined for the empty space")]
    EmptySpace,
    #[error("dimension must be at least {min}, got {got}")]
    Dimension { min: usize, got: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("vertex set does not span a {0}-disk")]
    NotADisk(usize),
    #[error("disk decomposition is indeterminate at the search budget")]
    Indeterminate,
    #[error("interior point {0} has neighbours outside the disk")]
    InteriorContainment(Label),
    #[error("the space is not a closed {0}-manifold")]
    NotClosedManifold(usize),
    #[error("boundary gluing is not an isomorphism onto the rim of {0}")]
    GluingMismatch(Label),
    #[error("rim of point {0} is not contractible")]
    RimNotContractible(Label),
    #[error("joint rim of {0} and {1} is not contractible")]
    JointRimNotContractible(Label, Label),
    #[error("attachment set {0:?} is not contractible")]
    AttachmentNotContractible(VertexSet),
    #[error("points {0} and {1} are already adjacent")]
    AlreadyAdjacent(Label, Label),
    #[error("replay produced a different space than the recorded final space")]
    ReplayMismatch,
    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<TransformError>,
    },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error("the space is not a closed {0}-manifold")]
    NotClosedManifold(usize),
    #[error("vertex set is not a {0}-sphere")]
    NotASphere(usize),
    #[error("vertex set is not a {0}-disk")]
    NotADisk(usize),
    #[error("disk dimension {k} must be below the ambient dimension {n}")]
    DimensionOrder { k: usize, n: usize },
    #[error("points {0} and {1} are not adjacent")]
    NotAdjacent(Label, Label),
    #[error("decision is indeterminate at the search budget")]
    Indeterminate,
    #[error("criterion {0} holds but the sphere test rejects the space")]
    SoundnessViolation(&'static str),
    #[error("union of balls is not a disk but no four-point one-sphere contains both points")]
    MissingFourCycle,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DigitizeError {
    #[error("bounding box is degenerate")]
    DegenerateBox,
    #[error("cube side must be positive and finite, got {0}")]
    CubeSide(f64),
    #[error("at least {min} refinement levels are required, got {got}")]
    Levels { min: usize, got: usize },
    #[error("grid of {0} cubes is too large")]
    GridTooLarge(usize),
}
