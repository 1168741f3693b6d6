//! Interior points, anti-diagonal bucket statistics and the bound formulas.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::angle::{verify, AngleSpec};
use crate::error::{Error, Result};
use crate::grid::{count_buckets, Construction, GridDim, Point, Slope, SlopeBucketIndex};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InteriorFlags {
    pub column_interior: bool,
    pub row_interior: bool,
    /// Strictly between two chosen points of its anti-diagonal.
    pub bucket_interior: bool,
}

impl InteriorFlags {
    pub fn any(&self) -> bool {
        self.column_interior || self.row_interior || self.bucket_interior
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InteriorReport {
    pub points: Vec<(Point, InteriorFlags)>,
}

impl InteriorReport {
    pub fn flags(&self, p: Point) -> Option<InteriorFlags> {
        self.points
            .binary_search_by(|(q, _)| q.cmp(&p))
            .ok()
            .map(|i| self.points[i].1)
    }
}

/// Whether `v` lies strictly between the extremes of `values`.
fn strictly_inside(values: &[i32], v: i32) -> bool {
    values.iter().any(|&w| w < v) && values.iter().any(|&w| w > v)
}

pub fn interior_report(c: &Construction) -> InteriorReport {
    let mut columns: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    let mut rows: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    let mut diagonals: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    for p in c.points() {
        columns.entry(p.x).or_default().push(p.y);
        rows.entry(p.y).or_default().push(p.x);
        diagonals.entry(p.x + p.y).or_default().push(p.x);
    }
    let points = c
        .points()
        .map(|p| {
            let flags = InteriorFlags {
                column_interior: strictly_inside(&columns[&p.x], p.y),
                row_interior: strictly_inside(&rows[&p.y], p.x),
                bucket_interior: strictly_inside(&diagonals[&(p.x + p.y)], p.x),
            };
            (p, flags)
        })
        .collect();
    InteriorReport { points }
}

/// Occupancy of the slope -1 buckets by a construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BucketStats {
    /// Occupied buckets.
    pub k: usize,
    /// Buckets holding at least two chosen points.
    pub multi_buckets: usize,
    /// Chosen points in those buckets.
    pub multi_points: usize,
    /// Bucket-interior points among them.
    pub interior_multi: usize,
}

pub fn bucket_stats(c: &Construction) -> BucketStats {
    let index = SlopeBucketIndex::new(c.dim(), Slope::ANTI_DIAGONAL);
    let mut occupancy = vec![0usize; index.len()];
    for p in c.points() {
        occupancy[index.bucket_of(p).expect("construction points are in grid")] += 1;
    }
    let report = interior_report(c);
    let interior_multi = report
        .points
        .iter()
        .filter(|(p, f)| f.bucket_interior && occupancy[(p.x + p.y - 2) as usize] >= 2)
        .count();
    BucketStats {
        k: occupancy.iter().filter(|&&m| m > 0).count(),
        multi_buckets: occupancy.iter().filter(|&&m| m >= 2).count(),
        multi_points: occupancy.iter().filter(|&&m| m >= 2).sum(),
        interior_multi,
    }
}

/// Where a bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BoundFormula {
    /// The two-row construction.
    #[serde(rename = "2n (two rows)")]
    TwoRows,
    #[serde(rename = "n^2 (whole grid)")]
    WholeGrid,
    #[serde(rename = "3n-2")]
    ThreeNMinusTwo,
    #[serde(rename = "2n+f(p,q)-2max(p,q)")]
    SlopeBuckets,
    /// Same argument with the enumerated longest line `L` in place of `n / max(p, q)`.
    #[serde(rename = "2n+f(p,q)-ceil(2n/L) (enumerated line length, not used in the minimum)")]
    SlopeBucketsEnumerated,
    /// Pigeonhole on rows.
    #[serde(rename = "2n (row pigeonhole)")]
    RowPigeonhole,
    /// Published result for right angles, not re-derived here.
    #[serde(rename = "2n-2 (external)")]
    RightAngleExternal,
}

impl BoundFormula {
    pub fn label(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCandidate {
    pub formula: BoundFormula,
    pub value: u64,
    pub external: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum LowerBound {
    Known { value: u64, formula: BoundFormula },
    Unknown { note: String },
}

impl LowerBound {
    pub fn value(&self) -> Option<u64> {
        match self {
            LowerBound::Known { value, .. } => Some(*value),
            LowerBound::Unknown { .. } => None,
        }
    }
}

pub fn lower_bound(theta: AngleSpec, dim: GridDim) -> LowerBound {
    let n = dim.n() as u64;
    if theta.is_steep_obtuse() {
        return if n >= 2 {
            LowerBound::Known {
                value: 2 * n,
                formula: BoundFormula::TwoRows,
            }
        } else {
            LowerBound::Known {
                value: 1,
                formula: BoundFormula::WholeGrid,
            }
        };
    }
    match theta {
        AngleSpec::Collinear => LowerBound::Unknown {
            note: "2n is attained for small n but open in general".into(),
        },
        _ => LowerBound::Unknown {
            note: format!("no general lower bound for {theta}"),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpperBound {
    /// Smallest applicable bound, if any formula applies.
    pub value: Option<u64>,
    pub formula: Option<BoundFormula>,
    pub external: bool,
    /// Every bound that applied. The minimum is taken over the non-informational ones.
    pub candidates: Vec<BoundCandidate>,
    /// Reported beside the others, never used for the minimum.
    pub informational: Vec<BoundCandidate>,
    pub reason: Option<String>,
}

/// `2n + f(p,q) - 2·max(p,q)` when `p, q < n`.
fn slope_bucket_bound(p: u32, q: u32, dim: GridDim) -> Result<(u64, u64)> {
    let slope = Slope::new(p as i64, q as i64)?;
    let f = count_buckets(slope, dim)?;
    let n = dim.n() as u64;
    let stated = 2 * n + f - 2 * p.max(q) as u64;
    let longest = SlopeBucketIndex::new(dim, slope).max_population() as u64;
    let enumerated = 2 * n + f - (2 * n).div_ceil(longest);
    Ok((stated, enumerated))
}

pub fn upper_bound(theta: AngleSpec, dim: GridDim) -> UpperBound {
    let n = dim.n() as u64;
    let mut candidates = Vec::new();
    let mut informational = Vec::new();
    let mut reason = None;
    let internal = |formula, value| BoundCandidate {
        formula,
        value,
        external: false,
    };
    match theta {
        AngleSpec::Tangent { p, q, .. } => {
            if theta == AngleSpec::DEG135 {
                candidates.push(internal(BoundFormula::ThreeNMinusTwo, 3 * n - 2));
            }
            match slope_bucket_bound(p, q, dim) {
                Ok((stated, enumerated)) => {
                    candidates.push(internal(BoundFormula::SlopeBuckets, stated));
                    informational.push(internal(BoundFormula::SlopeBucketsEnumerated, enumerated));
                }
                Err(e) => reason = Some(e.to_string()),
            }
        }
        AngleSpec::Collinear => candidates.push(internal(BoundFormula::RowPigeonhole, 2 * n)),
        AngleSpec::Right => {
            if n >= 2 {
                candidates.push(BoundCandidate {
                    formula: BoundFormula::RightAngleExternal,
                    value: 2 * n - 2,
                    external: true,
                });
            } else {
                reason = Some("the right-angle result is stated for n >= 2".into());
            }
        }
    }
    let best = candidates
        .iter()
        .min_by_key(|c| (c.value, c.external))
        .cloned();
    UpperBound {
        value: best.as_ref().map(|b| b.value),
        formula: best.as_ref().map(|b| b.formula),
        external: best.as_ref().is_some_and(|b| b.external),
        candidates,
        informational,
        reason: if best.is_some() { None } else { reason },
    }
}

/// The lower and upper bound together, as served to clients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub n: GridDim,
    pub theta: AngleSpec,
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub formula: Option<String>,
    pub external: bool,
    pub lower_formula: Option<BoundFormula>,
    pub candidates: Vec<BoundCandidate>,
    pub informational: Vec<BoundCandidate>,
    pub notes: Vec<String>,
}

pub fn bounds(theta: AngleSpec, dim: GridDim) -> Bounds {
    let lower = lower_bound(theta, dim);
    let upper = upper_bound(theta, dim);
    let mut notes = Vec::new();
    if let LowerBound::Unknown { note } = &lower {
        notes.push(note.clone());
    }
    if let Some(reason) = &upper.reason {
        notes.push(reason.clone());
    }
    if upper.formula == Some(BoundFormula::SlopeBuckets) {
        notes.push("the slope-bucket bound is argued from a 2n-point construction".into());
    }
    Bounds {
        n: dim,
        theta,
        lower: lower.value(),
        upper: upper.value,
        formula: upper.formula.map(BoundFormula::label),
        external: upper.external,
        lower_formula: match lower {
            LowerBound::Known { formula, .. } => Some(formula),
            LowerBound::Unknown { .. } => None,
        },
        candidates: upper.candidates,
        informational: upper.informational,
        notes,
    }
}

/// How many points a peaceful 135° construction of exactly `2n` points can
/// still take: `2n - 1 - k`.
pub fn capacity_after(c: &Construction) -> Result<u64> {
    let n = c.dim().n() as usize;
    if c.len() != 2 * n {
        return Err(Error::HypothesisNotMet(format!(
            "construction has {} points, expected 2n = {}",
            c.len(),
            2 * n
        )));
    }
    if !verify(c, AngleSpec::DEG135).is_peaceful() {
        return Err(Error::HypothesisNotMet(
            "construction is not peaceful for 135°".into(),
        ));
    }
    let k = bucket_stats(c).k;
    Ok((2 * n - 1 - k) as u64)
}
