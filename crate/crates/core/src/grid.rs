//! Grid points, constructions and slope buckets.
//!
//! Coordinates are 1-based: `(1, 1)` is the bottom-left corner of `G_n`,
//! `x` is the column and `y` the row.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A lattice point. Ordered row-major: by `y`, then by `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Option<Point> {
        let x = i32::try_from(self.x as i64 + dx).ok()?;
        let y = i32::try_from(self.y as i64 + dy).ok()?;
        Some(Point { x, y })
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(i32, i32)> for Point {
    fn from((x, y): (i32, i32)) -> Self {
        Point { x, y }
    }
}

// Points travel as `[x, y]` on the wire.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[i32; 2]>::deserialize(deserializer)?;
        Ok(Point { x, y })
    }
}

/// Side length of the square grid `G_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GridDim(u32);

impl GridDim {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("grid dimension must be at least 1".into()));
        }
        Ok(GridDim(n))
    }

    pub const fn n(self) -> u32 {
        self.0
    }

    pub const fn cell_count(self) -> usize {
        (self.0 as usize) * (self.0 as usize)
    }

    pub fn contains(self, p: Point) -> bool {
        let n = self.0 as i64;
        (1..=n).contains(&(p.x as i64)) && (1..=n).contains(&(p.y as i64))
    }

    pub fn check(self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfGrid {
                point: p,
                n: self.0,
            })
        }
    }

    /// All grid points in row-major order.
    pub fn points(self) -> impl Iterator<Item = Point> + Clone {
        let n = self.0 as i32;
        (1..=n).flat_map(move |y| (1..=n).map(move |x| Point { x, y }))
    }

    /// Row-major cell index of an in-grid point.
    pub fn index_of(self, p: Point) -> usize {
        debug_assert!(self.contains(p));
        (p.y as usize - 1) * self.0 as usize + (p.x as usize - 1)
    }

    pub fn point_at(self, index: usize) -> Point {
        let n = self.0 as usize;
        Point::new((index % n) as i32 + 1, (index / n) as i32 + 1)
    }
}

impl<'de> Deserialize<'de> for GridDim {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let n = u32::deserialize(deserializer)?;
        GridDim::new(n).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for GridDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One of the eight symmetries of the square grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry {
    transpose: bool,
    flip_x: bool,
    flip_y: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        transpose: false,
        flip_x: false,
        flip_y: false,
    };

    pub fn all() -> [Symmetry; 8] {
        let mut out = [Symmetry::IDENTITY; 8];
        for (i, s) in out.iter_mut().enumerate() {
            *s = Symmetry {
                transpose: i & 1 != 0,
                flip_x: i & 2 != 0,
                flip_y: i & 4 != 0,
            };
        }
        out
    }

    pub fn apply(self, p: Point, dim: GridDim) -> Point {
        let n = dim.n() as i32;
        let (mut x, mut y) = if self.transpose {
            (p.y, p.x)
        } else {
            (p.x, p.y)
        };
        if self.flip_x {
            x = n + 1 - x;
        }
        if self.flip_y {
            y = n + 1 - y;
        }
        Point { x, y }
    }
}

/// A chosen subset of `G_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Construction {
    dim: GridDim,
    points: BTreeSet<Point>,
}

impl Construction {
    pub fn empty(dim: GridDim) -> Self {
        Construction {
            dim,
            points: BTreeSet::new(),
        }
    }

    /// Builds a construction, rejecting out-of-grid points. Duplicates collapse.
    pub fn new(dim: GridDim, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut c = Construction::empty(dim);
        for p in points {
            c.insert(p)?;
        }
        Ok(c)
    }

    pub fn dim(&self) -> GridDim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.contains(&p)
    }

    /// Returns whether the point was newly added.
    pub fn insert(&mut self, p: Point) -> Result<bool> {
        self.dim.check(p)?;
        Ok(self.points.insert(p))
    }

    pub fn remove(&mut self, p: Point) -> bool {
        self.points.remove(&p)
    }

    /// Points in row-major order.
    pub fn points(&self) -> impl ExactSizeIterator<Item = Point> + '_ {
        self.points.iter().copied()
    }

    pub fn with(&self, p: Point) -> Result<Self> {
        let mut c = self.clone();
        c.insert(p)?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("construction serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct ConstructionWire {
    n: GridDim,
    points: Vec<Point>,
}

impl Serialize for Construction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ConstructionWire {
            n: self.dim,
            points: self.points.iter().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Construction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ConstructionWire::deserialize(deserializer)?;
        Construction::new(wire.n, wire.points).map_err(serde::de::Error::custom)
    }
}

/// Direction of a family of parallel lines, reduced to lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    Vertical,
    /// `rise / run` with `gcd(rise, run) = 1`, `run > 0`; a zero rise is never negative.
    Finite {
        rise: u32,
        run: u32,
        negative: bool,
    },
}

impl Slope {
    pub const HORIZONTAL: Slope = Slope::Finite {
        rise: 0,
        run: 1,
        negative: false,
    };
    pub const ANTI_DIAGONAL: Slope = Slope::Finite {
        rise: 1,
        run: 1,
        negative: true,
    };

    /// The slope `dy / dx`, reduced. `dx = 0` gives `Vertical`.
    pub fn new(dy: i64, dx: i64) -> Result<Self> {
        if dx == 0 {
            if dy == 0 {
                return Err(Error::Domain("slope 0/0 is undefined".into()));
            }
            return Ok(Slope::Vertical);
        }
        let negative = (dy < 0) != (dx < 0) && dy != 0;
        let (dy, dx) = (dy.unsigned_abs(), dx.unsigned_abs());
        let g = gcd(dy, dx);
        let rise = u32::try_from(dy / g).map_err(|_| Error::Domain("slope too steep".into()))?;
        let run = u32::try_from(dx / g).map_err(|_| Error::Domain("slope too shallow".into()))?;
        Ok(Slope::Finite {
            rise,
            run,
            negative,
        })
    }

    /// Direction vector `(dx, dy)` of the lines, primitive.
    pub fn direction(self) -> (i64, i64) {
        match self {
            Slope::Vertical => (0, 1),
            Slope::Finite {
                rise,
                run,
                negative,
            } => (
                run as i64,
                if negative {
                    -(rise as i64)
                } else {
                    rise as i64
                },
            ),
        }
    }

    /// A linear form constant exactly along each line of this slope.
    fn line_key(self, p: Point) -> i64 {
        let (dx, dy) = self.direction();
        dx * p.y as i64 - dy * p.x as i64
    }

    /// Whether the line through two distinct points has this slope.
    pub fn joins(self, p: Point, q: Point) -> bool {
        let (dx, dy) = self.direction();
        (q.y as i64 - p.y as i64) * dx == (q.x as i64 - p.x as i64) * dy
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Slope::Vertical => f.write_str("vertical"),
            Slope::Finite {
                rise,
                run,
                negative,
            } => {
                let sign = if negative { "-" } else { "" };
                if run == 1 {
                    write!(f, "{sign}{rise}")
                } else {
                    write!(f, "{sign}{rise}/{run}")
                }
            }
        }
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts `vertical`/`inf`, integers such as `-1`, and fractions such as `3/2` or `-1/2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("vertical") || s.eq_ignore_ascii_case("inf") {
            return Ok(Slope::Vertical);
        }
        let bad = || Error::Parse(format!("invalid slope {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let dy: i64 = num.parse().map_err(|_| bad())?;
        let dx: i64 = den.parse().map_err(|_| bad())?;
        if dx < 0 {
            return Err(bad());
        }
        Slope::new(dy, dx)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Partition of `G_n` into the lines of one slope.
#[derive(Clone, Debug)]
pub struct SlopeBucketIndex {
    dim: GridDim,
    slope: Slope,
    bucket_of: HashMap<Point, usize>,
    buckets: Vec<Vec<Point>>,
}

impl SlopeBucketIndex {
    /// Bucket ids are handed out in row-major discovery order, so for slope -1
    /// the id of `(x, y)` is `x + y - 2`.
    pub fn new(dim: GridDim, slope: Slope) -> Self {
        let mut by_key: HashMap<i64, usize> = HashMap::new();
        let mut bucket_of = HashMap::with_capacity(dim.cell_count());
        let mut buckets: Vec<Vec<Point>> = Vec::new();
        for p in dim.points() {
            let next = buckets.len();
            let id = *by_key.entry(slope.line_key(p)).or_insert(next);
            if id == next {
                buckets.push(Vec::new());
            }
            buckets[id].push(p);
            bucket_of.insert(p, id);
        }
        SlopeBucketIndex {
            dim,
            slope,
            bucket_of,
            buckets,
        }
    }

    pub fn dim(&self) -> GridDim {
        self.dim
    }

    pub fn slope(&self) -> Slope {
        self.slope
    }

    pub fn bucket_of(&self, p: Point) -> Result<usize> {
        self.bucket_of.get(&p).copied().ok_or(Error::OutOfGrid {
            point: p,
            n: self.dim.n(),
        })
    }

    pub fn buckets(&self) -> &[Vec<Point>] {
        &self.buckets
    }

    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    /// Largest number of grid points on a single line of this slope.
    pub fn max_population(&self) -> usize {
        self.buckets.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn bucket_id(point: Point, slope: Slope, dim: GridDim) -> Result<usize> {
    dim.check(point)?;
    if slope == Slope::ANTI_DIAGONAL {
        return Ok((point.x + point.y - 2) as usize);
    }
    SlopeBucketIndex::new(dim, slope).bucket_of(point)
}

/// `(p, q)` for a slope the line-count formula supports, after reflecting
/// negative slopes onto positive ones.
fn formula_params(slope: Slope, dim: GridDim) -> Result<(u64, u64)> {
    let (rise, run) = match slope {
        Slope::Finite { rise, run, .. } if rise > 0 => (rise, run),
        other => {
            return Err(Error::UnsupportedParameter(format!(
                "line count formula needs a nonzero finite slope, got {other}"
            )))
        }
    };
    if rise >= dim.n() || run >= dim.n() {
        return Err(Error::UnsupportedParameter(format!(
            "line count formula needs p, q < n (p={rise}, q={run}, n={dim})"
        )));
    }
    Ok((rise as u64, run as u64))
}

/// Number of lines of slope `p/q` meeting `G_n`: `pn + qn - pq`.
pub fn count_buckets(slope: Slope, dim: GridDim) -> Result<u64> {
    let (p, q) = formula_params(slope, dim)?;
    let n = dim.n() as u64;
    Ok(p * n + q * n - p * q)
}

/// One point from every line of the slope: the first `p` rows together with the
/// first `q` columns (the last `q` columns for a negative slope).
pub fn representative_set(slope: Slope, dim: GridDim) -> Result<Construction> {
    let (p, q) = formula_params(slope, dim)?;
    let negative = matches!(slope, Slope::Finite { negative: true, .. });
    let n = dim.n() as i64;
    let in_columns = |x: i64| {
        if negative {
            x > n - q as i64
        } else {
            x <= q as i64
        }
    };
    Construction::new(
        dim,
        dim.points()
            .filter(|pt| (pt.y as i64) <= p as i64 || in_columns(pt.x as i64)),
    )
}
