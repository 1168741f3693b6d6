//! Explicit constructions: the two-row lower-bound set and angle witnesses.

use serde::Serialize;

use crate::angle::{AngleSpec, ForbiddenTriple};
use crate::error::{Error, Result};
use crate::grid::{Construction, GridDim, Point};

/// Rows `y = 1` and `y = n`, fully chosen. Peaceful for `135° <= θ < 180°`.
pub fn two_rows(dim: GridDim) -> Result<Construction> {
    let n = dim.n() as i32;
    if n < 2 {
        return Err(Error::Domain(
            "two_rows needs n >= 2 (the rows coincide at n = 1)".into(),
        ));
    }
    Construction::new(
        dim,
        (1..=n).flat_map(|x| [Point::new(x, 1), Point::new(x, n)]),
    )
}

/// Columns `x = 1` and `x = n`; the transpose of [`two_rows`].
pub fn two_columns(dim: GridDim) -> Result<Construction> {
    let rows = two_rows(dim)?;
    Construction::new(dim, rows.points().map(|p| Point::new(p.y, p.x)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Three points on the bottom row region built from the tangent.
    TangentFormula,
    /// The corner of an axis-aligned L.
    AxisAlignedL,
    /// Three consecutive points of a row.
    CollinearRow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub dim: GridDim,
    pub triple: ForbiddenTriple,
    pub kind: WitnessKind,
}

impl Witness {
    pub fn construction(&self) -> Construction {
        Construction::new(self.dim, self.triple.points()).expect("witness lies in its grid")
    }
}

/// Three grid points realising `theta` at the returned vertex.
///
/// For `tan θ = p/q` (with `q` carrying the sign when negative) the grid has side
/// `2·max(|p|, |q|) + 2` and the points are `(n/2+1, 1)` (vertex), `(n/2+2, 1)`
/// and `(n/2+1+q, 1+p)`.
pub fn witness(theta: AngleSpec) -> Result<Witness> {
    match theta {
        AngleSpec::Tangent { negative, p, q } => {
            let (p, q) = (p as i64, q as i64);
            let q = if negative { -q } else { q };
            let n = 2 * p.max(q.abs()) + 2;
            let half = n / 2;
            let dim = GridDim::new(
                u32::try_from(n)
                    .map_err(|_| Error::UnsupportedParameter("tangent too large".into()))?,
            )?;
            let at = |x: i64, y: i64| Point::new(x as i32, y as i32);
            let vertex = at(half + 1, 1);
            let a = at(half + 2, 1);
            let c = at(half + 1 + q, 1 + p);
            Ok(Witness {
                dim,
                triple: ForbiddenTriple::new(a, vertex, c),
                kind: WitnessKind::TangentFormula,
            })
        }
        AngleSpec::Right => Ok(Witness {
            dim: GridDim::new(2)?,
            triple: ForbiddenTriple::new(Point::new(2, 1), Point::new(1, 1), Point::new(1, 2)),
            kind: WitnessKind::AxisAlignedL,
        }),
        AngleSpec::Collinear => Ok(Witness {
            dim: GridDim::new(3)?,
            triple: ForbiddenTriple::new(Point::new(1, 1), Point::new(2, 1), Point::new(3, 1)),
            kind: WitnessKind::CollinearRow,
        }),
    }
}
