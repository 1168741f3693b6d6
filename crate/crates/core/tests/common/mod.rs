//! Brute-force references and configuration generators shared by the test targets.
#![allow(dead_code)]

use std::collections::BTreeSet;

use peaceful_core::{angle_equals, AngleSpec, Construction, ForbiddenTriple, GridDim, Point};

pub fn dim(n: u32) -> GridDim {
    GridDim::new(n).unwrap()
}

pub fn pt(x: i32, y: i32) -> Point {
    Point::new(x, y)
}

pub fn theta(s: &str) -> AngleSpec {
    s.parse().unwrap()
}

/// The angle set exercised by the solver equivalence checks.
pub fn test_matrix() -> Vec<AngleSpec> {
    [
        "deg=45", "deg=90", "deg=135", "deg=180", "tan=1/2", "tan=-1/2", "tan=2", "tan=-2",
        "tan=-3/2",
    ]
    .iter()
    .map(|s| theta(s))
    .collect()
}

/// Every (a, vertex, c) with a < c by scanning all ordered triples.
pub fn brute_triples(g: GridDim, th: AngleSpec) -> BTreeSet<ForbiddenTriple> {
    let pts: Vec<Point> = g.points().collect();
    let mut out = BTreeSet::new();
    for &v in &pts {
        for &a in &pts {
            for &c in &pts {
                if a < c && angle_equals(a, v, c, th) {
                    out.insert(ForbiddenTriple { a, vertex: v, c });
                }
            }
        }
    }
    out
}

pub fn brute_peaceful(pts: &[Point], th: AngleSpec) -> bool {
    for &v in pts {
        for &a in pts {
            for &c in pts {
                if a < c && angle_equals(a, v, c, th) {
                    return false;
                }
            }
        }
    }
    true
}

/// Plain exhaustive maximum over all 2^(n²) subsets (n ≤ 3 only).
pub fn brute_max(g: GridDim, th: AngleSpec) -> usize {
    let pts: Vec<Point> = g.points().collect();
    assert!(pts.len() <= 16);
    let mut best = 0;
    for mask in 0u32..(1 << pts.len()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let chosen: Vec<Point> = (0..pts.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pts[i])
            .collect();
        if brute_peaceful(&chosen, th) {
            best = size;
        }
    }
    best
}

pub fn construction(g: GridDim, pts: &[Point]) -> Construction {
    Construction::new(g, pts.iter().copied()).unwrap()
}

/// One instantiation of a 135° configuration: the angle at `vertex` between
/// `a` and `c` must be 135°.
#[derive(Clone, Copy, Debug)]
pub struct FittedCase {
    pub family: &'static str,
    pub a: Point,
    pub vertex: Point,
    pub c: Point,
}

fn inside(g: GridDim, p: Point) -> bool {
    g.contains(p)
}

/// All grid-fitted 135° configurations built from a shared column, row or
/// anti-diagonal, over every valid placement on `G_n`.
pub fn grid_fitted_cases(n: u32) -> Vec<FittedCase> {
    let g = dim(n);
    let n = n as i32;
    let mut out = Vec::new();
    let mut push = |family, a: Point, vertex: Point, c: Point| {
        if inside(g, a) && inside(g, vertex) && inside(g, c) {
            out.push(FittedCase {
                family,
                a,
                vertex,
                c,
            });
        }
    };
    for x in 1..=n {
        for hi in 1..=n {
            for lo in 1..hi {
                for d in 1..n {
                    // Column x holds A = (x, hi) above B = (x, lo).
                    let (a, b) = (pt(x, hi), pt(x, lo));
                    push(
                        "column: bucket-mate of upper point to the left",
                        pt(x - d, hi + d),
                        a,
                        b,
                    );
                    push(
                        "column: bucket-mate of lower point to the right",
                        a,
                        b,
                        pt(x + d, lo - d),
                    );
                    if x == 1 {
                        push(
                            "left edge column: bucket-mate of lower point",
                            a,
                            b,
                            pt(1 + d, lo - d),
                        );
                    }
                    if x == n {
                        push(
                            "right edge column: bucket-mate of upper point",
                            pt(n - d, hi + d),
                            a,
                            b,
                        );
                    }
                    // Row x holds A = (hi, x) right of B = (lo, x).
                    let (a, b) = (pt(hi, x), pt(lo, x));
                    push(
                        "row: bucket-mate of right point below",
                        pt(hi + d, x - d),
                        a,
                        b,
                    );
                    push(
                        "row: bucket-mate of left point above",
                        pt(lo - d, x + d),
                        b,
                        a,
                    );
                }
            }
        }
    }
    // A above B on one anti-diagonal.
    for bx in 1..=n {
        for by in 1..=n {
            for d in 1..n {
                let b = pt(bx, by);
                let a = pt(bx - d, by + d);
                for e in 1..n {
                    push("bucket: column point above upper", pt(a.x, a.y + e), a, b);
                    push("bucket: column point below lower", a, b, pt(b.x, b.y - e));
                    push("bucket: row point left of upper", pt(a.x - e, a.y), a, b);
                    push("bucket: row point right of lower", a, b, pt(b.x + e, b.y));
                }
            }
        }
    }
    out
}

/// A chosen point with neighbours that, by the interior-point arguments, must
/// make it the vertex of some 135° angle.
#[derive(Clone, Debug)]
pub struct InteriorCase {
    pub family: &'static str,
    pub centre: Point,
    pub points: Vec<Point>,
}

pub fn interior_cases(n: u32) -> Vec<InteriorCase> {
    let g = dim(n);
    let n = n as i32;
    let mut out = Vec::new();
    for centre in g.points() {
        let s = centre.x + centre.y;
        let left_bucket: Vec<Point> = (1..centre.x)
            .map(|x| pt(x, s - x))
            .filter(|p| g.contains(*p))
            .collect();
        let right_bucket: Vec<Point> = (centre.x + 1..=n)
            .map(|x| pt(x, s - x))
            .filter(|p| g.contains(*p))
            .collect();
        let row: Vec<Point> = (1..=n)
            .filter(|&x| x != centre.x)
            .map(|x| pt(x, centre.y))
            .collect();
        let column: Vec<Point> = (1..=n)
            .filter(|&y| y != centre.y)
            .map(|y| pt(centre.x, y))
            .collect();

        // Interior on its anti-diagonal, plus a row or column neighbour.
        for &b in &left_bucket {
            for &c in &right_bucket {
                for &x in row.iter().chain(&column) {
                    out.push(InteriorCase {
                        family: "bucket-interior point with a row or column neighbour",
                        centre,
                        points: vec![b, centre, c, x],
                    });
                }
            }
        }
        // Interior in its column or row, plus an anti-diagonal neighbour.
        let below: Vec<Point> = column.iter().copied().filter(|p| p.y < centre.y).collect();
        let above: Vec<Point> = column.iter().copied().filter(|p| p.y > centre.y).collect();
        let left: Vec<Point> = row.iter().copied().filter(|p| p.x < centre.x).collect();
        let right: Vec<Point> = row.iter().copied().filter(|p| p.x > centre.x).collect();
        for (lo_side, hi_side) in [(&below, &above), (&left, &right)] {
            for &u in lo_side {
                for &w in hi_side {
                    for &d in left_bucket.iter().chain(&right_bucket) {
                        out.push(InteriorCase {
                            family: "row- or column-interior point with a bucket neighbour",
                            centre,
                            points: vec![u, centre, w, d],
                        });
                    }
                }
            }
        }
    }
    out
}
