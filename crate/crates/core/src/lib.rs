//! Peaceful point sets on the `n × n` grid: sets in which no three chosen points
//! form a given angle θ at any vertex.
//!
//! All geometry is exact integer arithmetic. The crate covers angle parsing and
//! detection ([`angle`]), the grid model with slope buckets ([`grid`]), explicit
//! constructions ([`constructions`]), bucket statistics and bound formulas
//! ([`analysis`]), and maximum-set searches ([`solver`]).

pub mod analysis;
pub mod angle;
pub mod constructions;
pub mod error;
pub mod grid;
pub mod solver;

pub use analysis::{
    bounds, bucket_stats, capacity_after, interior_report, lower_bound, upper_bound, BoundFormula,
    Bounds, BucketStats, InteriorFlags, InteriorReport, LowerBound, UpperBound,
};
pub use angle::{
    angle_equals, blocked_cells, blocked_cells_with_witness, classify_triple, forbidden_triples,
    forbidden_triples_iter, parse_theta, tangent_at_vertex, verify, verify_limited, AngleSpec,
    ForbiddenTriple, TripleKind, Verdict, VertexAngle,
};
pub use constructions::{two_columns, two_rows, witness, Witness, WitnessKind};
pub use error::{Error, Result};
pub use grid::{
    bucket_id, count_buckets, representative_set, Construction, GridDim, Point, Slope,
    SlopeBucketIndex, Symmetry,
};
pub use solver::{
    enumerate_peaceful, solve, solve_exact, solve_greedy, solve_oracle, solve_oracle_with,
    SearchConfig, SearchMode, SolveReport,
};
