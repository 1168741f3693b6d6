//! Exact angle evaluation in integer arithmetic.
//!
//! The angle at a vertex `B` between rays `BA` and `BC` is characterised by the
//! pair `(|BA x BC|, BA . BC)`: its tangent is the quotient, and the sign of the
//! dot product separates acute from obtuse. No floating point is used anywhere.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{gcd, Construction, GridDim, Point};

/// The target angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AngleSpec {
    /// `tan = ±p/q` with `gcd(p, q) = 1`; `negative` selects the obtuse angle.
    Tangent {
        negative: bool,
        p: u32,
        q: u32,
    },
    Right,
    Collinear,
}

impl AngleSpec {
    pub const DEG45: AngleSpec = AngleSpec::Tangent {
        negative: false,
        p: 1,
        q: 1,
    };
    pub const DEG135: AngleSpec = AngleSpec::Tangent {
        negative: true,
        p: 1,
        q: 1,
    };

    /// Reduced tangent `num / den` (signs combine).
    pub fn tangent(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Ok(AngleSpec::Right);
        }
        if num == 0 {
            return Err(Error::DegenerateAngle(
                "tan = 0 is a zero angle, not an angle of a triangle".into(),
            ));
        }
        let negative = (num < 0) != (den < 0);
        let (a, b) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd(a, b);
        let too_big = || Error::UnsupportedParameter("tangent component too large".into());
        Ok(AngleSpec::Tangent {
            negative,
            p: u32::try_from(a / g).map_err(|_| too_big())?,
            q: u32::try_from(b / g).map_err(|_| too_big())?,
        })
    }

    /// Whether `135° <= θ < 180°`, i.e. `tan θ ∈ [-1, 0)`.
    pub fn is_steep_obtuse(self) -> bool {
        matches!(self, AngleSpec::Tangent { negative: true, p, q } if p <= q)
    }
}

impl fmt::Display for AngleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AngleSpec::DEG45 => f.write_str("deg=45"),
            AngleSpec::DEG135 => f.write_str("deg=135"),
            AngleSpec::Right => f.write_str("deg=90"),
            AngleSpec::Collinear => f.write_str("deg=180"),
            AngleSpec::Tangent { negative, p, q } => {
                write!(f, "tan={}{p}/{q}", if negative { "-" } else { "" })
            }
        }
    }
}

impl FromStr for AngleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_theta(s)
    }
}

impl Serialize for AngleSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AngleSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_theta(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses `tan=[±]p[/q]` or `deg=D` with `D ∈ {45, 90, 135, 180}`.
pub fn parse_theta(text: &str) -> Result<AngleSpec> {
    let text = text.trim();
    let malformed = || Error::Parse(format!("expected tan=±p/q or deg=D, got {text:?}"));
    let (key, value) = text.split_once('=').ok_or_else(malformed)?;
    let value = value.trim();
    match key.trim() {
        "deg" => {
            let deg: f64 = value.parse().map_err(|_| malformed())?;
            match value.parse::<i64>() {
                Ok(45) => Ok(AngleSpec::DEG45),
                Ok(90) => Ok(AngleSpec::Right),
                Ok(135) => Ok(AngleSpec::DEG135),
                Ok(180) => Ok(AngleSpec::Collinear),
                Ok(0) => Err(Error::DegenerateAngle(
                    "0° is not an angle of a triple".into(),
                )),
                _ if deg.is_finite() => Err(Error::NotRepresentable(format!("{value}°"))),
                _ => Err(malformed()),
            }
        }
        "tan" => {
            let (num, den) = match value.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (value, "1"),
            };
            let num: i64 = num.parse().map_err(|_| malformed())?;
            let den: i64 = den.parse().map_err(|_| malformed())?;
            if den <= 0 {
                return Err(malformed());
            }
            AngleSpec::tangent(num, den)
        }
        _ => Err(malformed()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    None,
    CoincidentPoints,
    /// `A` and `C` on the same ray from the vertex.
    ZeroAngle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VertexAngle {
    pub cross_abs: u64,
    pub dot: i64,
    pub degeneracy: Degeneracy,
}

pub fn tangent_at_vertex(a: Point, vertex: Point, c: Point) -> VertexAngle {
    let (ux, uy) = (a.x as i64 - vertex.x as i64, a.y as i64 - vertex.y as i64);
    let (vx, vy) = (c.x as i64 - vertex.x as i64, c.y as i64 - vertex.y as i64);
    let cross_abs = (ux * vy - vx * uy).unsigned_abs();
    let dot = ux * vx + uy * vy;
    let degeneracy = if a == vertex || c == vertex || a == c {
        Degeneracy::CoincidentPoints
    } else if cross_abs == 0 && dot > 0 {
        Degeneracy::ZeroAngle
    } else {
        Degeneracy::None
    };
    VertexAngle {
        cross_abs,
        dot,
        degeneracy,
    }
}

impl VertexAngle {
    pub fn matches(&self, theta: AngleSpec) -> bool {
        if self.degeneracy != Degeneracy::None {
            return false;
        }
        let cross = self.cross_abs as i128;
        let dot = self.dot as i128;
        match theta {
            AngleSpec::Right => dot == 0,
            AngleSpec::Collinear => cross == 0 && dot < 0,
            AngleSpec::Tangent {
                negative: false,
                p,
                q,
            } => dot > 0 && cross * q as i128 == p as i128 * dot,
            AngleSpec::Tangent {
                negative: true,
                p,
                q,
            } => dot < 0 && cross * q as i128 == p as i128 * -dot,
        }
    }
}

pub fn angle_equals(a: Point, vertex: Point, c: Point, theta: AngleSpec) -> bool {
    tangent_at_vertex(a, vertex, c).matches(theta)
}

/// Three grid points whose angle at `vertex` equals the target, with `a < c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ForbiddenTriple {
    pub a: Point,
    pub vertex: Point,
    pub c: Point,
}

impl ForbiddenTriple {
    /// Canonical form with the two non-vertex points in order.
    pub fn new(a: Point, vertex: Point, c: Point) -> Self {
        let (a, c) = if c < a { (c, a) } else { (a, c) };
        ForbiddenTriple { a, vertex, c }
    }

    pub fn points(&self) -> [Point; 3] {
        [self.a, self.vertex, self.c]
    }

    /// Ordering key used for reports: vertex first, then the legs.
    fn report_key(&self) -> (Point, Point, Point) {
        (self.vertex, self.a, self.c)
    }
}

impl fmt::Display for ForbiddenTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}- {}", self.a, self.vertex, self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleKind {
    GridFitted,
    Sneaky,
}

pub fn classify_triple(t: &ForbiddenTriple) -> TripleKind {
    let axis = |p: Point| p.x == t.vertex.x || p.y == t.vertex.y;
    if axis(t.a) || axis(t.c) {
        TripleKind::GridFitted
    } else {
        TripleKind::Sneaky
    }
}

/// Primitive directions `w` such that the angle between `u` and `w` is `theta`.
fn rotated_directions(u: (i64, i64), theta: AngleSpec) -> impl Iterator<Item = (i64, i64)> {
    let (ux, uy) = u;
    // (cos, sin) up to a positive common factor.
    let (cos, sin) = match theta {
        AngleSpec::Right => (0, 1),
        AngleSpec::Collinear => (-1, 0),
        AngleSpec::Tangent { negative, p, q } => {
            (if negative { -(q as i64) } else { q as i64 }, p as i64)
        }
    };
    let ccw = (cos * ux - sin * uy, sin * ux + cos * uy);
    let cw = (cos * ux + sin * uy, -sin * ux + cos * uy);
    let second = (sin != 0).then_some(cw);
    std::iter::once(ccw).chain(second).map(|(x, y)| {
        let g = gcd(x.unsigned_abs(), y.unsigned_abs()) as i64;
        (x / g, y / g)
    })
}

/// All grid cells `c` with `angle_equals(a, vertex, c, theta)`.
pub fn completions(
    dim: GridDim,
    a: Point,
    vertex: Point,
    theta: AngleSpec,
) -> impl Iterator<Item = Point> {
    let dirs: Vec<(i64, i64)> = if a == vertex {
        Vec::new()
    } else {
        let u = (a.x as i64 - vertex.x as i64, a.y as i64 - vertex.y as i64);
        rotated_directions(u, theta).collect()
    };
    dirs.into_iter().flat_map(move |(dx, dy)| {
        (1i64..)
            .map(move |t| vertex.offset(dx * t, dy * t))
            .take_while(move |p| p.is_some_and(|p| dim.contains(p)))
            .flatten()
            .filter(move |&c| c != a)
    })
}

/// Default size cap for materialising every forbidden triple of a grid.
pub const DEFAULT_TRIPLE_CAP: u32 = 64;

/// Streams every forbidden triple of `G_n`: vertices in row-major order, then
/// `(a, c)` pairs in order.
pub fn forbidden_triples_iter(
    dim: GridDim,
    theta: AngleSpec,
) -> impl Iterator<Item = ForbiddenTriple> {
    dim.points().flat_map(move |vertex| {
        let mut here: Vec<ForbiddenTriple> = dim
            .points()
            .flat_map(|a| {
                completions(dim, a, vertex, theta)
                    .filter(move |&c| a < c)
                    .map(move |c| ForbiddenTriple { a, vertex, c })
            })
            .collect();
        here.sort_unstable();
        here.dedup();
        here
    })
}

pub fn forbidden_triples(dim: GridDim, theta: AngleSpec) -> Result<Vec<ForbiddenTriple>> {
    forbidden_triples_capped(dim, theta, DEFAULT_TRIPLE_CAP)
}

pub fn forbidden_triples_capped(
    dim: GridDim,
    theta: AngleSpec,
    cap: u32,
) -> Result<Vec<ForbiddenTriple>> {
    if dim.n() > cap {
        return Err(Error::TooLarge {
            n: dim.n(),
            cap,
            hint: "use forbidden_triples_iter to stream instead".into(),
        });
    }
    Ok(forbidden_triples_iter(dim, theta).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "violations", rename_all = "snake_case")]
pub enum Verdict {
    Peaceful,
    Violations(Vec<ForbiddenTriple>),
}

impl Verdict {
    pub fn is_peaceful(&self) -> bool {
        matches!(self, Verdict::Peaceful)
    }

    pub fn violations(&self) -> &[ForbiddenTriple] {
        match self {
            Verdict::Peaceful => &[],
            Verdict::Violations(v) => v,
        }
    }
}

/// Checks a construction. With `limit`, stops after that many violations.
pub fn verify_limited(c: &Construction, theta: AngleSpec, limit: Option<usize>) -> Verdict {
    let dim = c.dim();
    let chosen: HashSet<Point> = c.points().collect();
    let mut found = Vec::new();
    'outer: for vertex in c.points() {
        let mut here = BTreeSet::new();
        for a in c.points() {
            for z in completions(dim, a, vertex, theta) {
                if a < z && chosen.contains(&z) {
                    here.insert(ForbiddenTriple { a, vertex, c: z });
                }
            }
        }
        for t in here {
            found.push(t);
            if limit.is_some_and(|k| found.len() >= k) {
                break 'outer;
            }
        }
    }
    if found.is_empty() {
        Verdict::Peaceful
    } else {
        Verdict::Violations(found)
    }
}

pub fn verify(c: &Construction, theta: AngleSpec) -> Verdict {
    verify_limited(c, theta, None)
}

/// Every empty cell that would complete a forbidden triple with two chosen
/// points, mapped to the least such triple.
pub fn blocked_cells_with_witness(
    c: &Construction,
    theta: AngleSpec,
) -> Result<BTreeMap<Point, ForbiddenTriple>> {
    if let Verdict::Violations(v) = verify_limited(c, theta, Some(1)) {
        return Err(Error::NotPeaceful(v[0]));
    }
    let dim = c.dim();
    let chosen: Vec<Point> = c.points().collect();
    let mut out: BTreeMap<Point, ForbiddenTriple> = BTreeMap::new();
    let mut offer = |z: Point, t: ForbiddenTriple| {
        out.entry(z)
            .and_modify(|w| {
                if t.report_key() < w.report_key() {
                    *w = t;
                }
            })
            .or_insert(t);
    };
    // New cell as an end point of the angle.
    for &vertex in &chosen {
        for &a in &chosen {
            for z in completions(dim, a, vertex, theta) {
                if !c.contains(z) {
                    offer(z, ForbiddenTriple::new(a, vertex, z));
                }
            }
        }
    }
    // New cell as the vertex.
    if chosen.len() >= 2 {
        let members: HashSet<Point> = chosen.iter().copied().collect();
        for z in dim.points().filter(|z| !c.contains(*z)) {
            for &a in &chosen {
                for other in completions(dim, a, z, theta) {
                    if members.contains(&other) {
                        offer(z, ForbiddenTriple::new(a, z, other));
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn blocked_cells(c: &Construction, theta: AngleSpec) -> Result<BTreeSet<Point>> {
    Ok(blocked_cells_with_witness(c, theta)?.into_keys().collect())
}
