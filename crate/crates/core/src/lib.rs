//! Functorial invariants of framed links over truncated deformation rings,
//! Vassiliev coefficient extraction, and the deformation cohomology of
//! monoidal functors on finitely presented skeletal categories.
//!
//! All arithmetic is exact: rationals with arbitrary-precision fallback, or a
//! prime field `F_p`, extended to the truncated ring `R_n = K[eps]/<eps^{n+1}>`.
//!
//! The `parallel` feature (on by default) runs the exhaustive coherence sweeps
//! and batch evaluations on rayon; without it every code path degrades to the
//! equivalent sequential loop.

pub mod defcomplex;
pub mod field;
pub mod invariants;
pub mod skeletal;
pub mod tangles;
pub mod matrix;
mod parallel;
pub mod ribbon;
pub mod series;

pub use defcomplex::{
    cochain_from_basis, cohomology_dims, delta_matrix, parse_cochain, parse_deformation,
    proper_closure_check, Cochain, CohomologyDims, DeformError, DeformationSeries, ExtendOutcome,
    ObstructionClass,
};
pub use field::{Field, FieldElem, ScalarError};
pub use invariants::{
    check_disjoint_union, evaluate, evaluate_batch, normalized_value, resolve_singular,
    vassiliev_coeff, verify_type_bound, ConvolutionRow, DisjointReport, EvaluationResult,
    InvariantError, Sign, TypeBoundReport,
};
pub use matrix::{LinalgError, Matrix, MatrixK, MatrixR, Solve};
pub use ribbon::{Axiom, AxiomCheck, AxiomReport, RibbonError, TortileObjectData};
pub use series::{SeriesRing, TruncatedScalar};
pub use skeletal::{FunctorPresentation, ObjId, ParenTree, SkelError, SkeletalPresentation};
pub use tangles::{unknot_diagram, BraidWord, MorseDiagram, Orientation, Slice, SliceKind, TangleError};
