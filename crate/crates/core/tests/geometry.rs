mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use peaceful_core::*;
use proptest::prelude::*;

fn all_slopes(n: i64) -> Vec<Slope> {
    let mut out: Vec<Slope> = vec![Slope::Vertical, Slope::HORIZONTAL];
    for dy in -(n + 1)..=(n + 1) {
        for dx in 1..=(n + 1) {
            if dy != 0 {
                out.push(Slope::new(dy, dx).unwrap());
            }
        }
    }
    out.sort_by_key(|s| format!("{s}"));
    out.dedup();
    out
}

#[test]
fn buckets_partition_the_grid_and_respect_collinearity() {
    for n in 1..=12u32 {
        let g = dim(n);
        for slope in all_slopes(n as i64) {
            let idx = SlopeBucketIndex::new(g, slope);
            let mut seen = HashSet::new();
            for (id, bucket) in idx.buckets().iter().enumerate() {
                assert!(!bucket.is_empty());
                for &p in bucket {
                    assert!(seen.insert(p), "{p} in two buckets");
                    assert_eq!(idx.bucket_of(p).unwrap(), id);
                }
            }
            assert_eq!(seen.len(), g.cell_count());
            if n <= 6 {
                let (dx, dy) = slope.direction();
                for p in g.points() {
                    for q in g.points() {
                        let same = idx.bucket_of(p).unwrap() == idx.bucket_of(q).unwrap();
                        let collinear = (q.y - p.y) as i64 * dx == (q.x - p.x) as i64 * dy;
                        assert_eq!(same, collinear, "{p} {q} slope {slope}");
                    }
                }
            }
        }
    }
}

#[test]
fn bucket_ids_are_dense_in_discovery_order() {
    let g = dim(7);
    for slope in all_slopes(7) {
        let idx = SlopeBucketIndex::new(g, slope);
        let mut next = 0;
        for p in g.points() {
            let id = bucket_id(p, slope, g).unwrap();
            assert!(id <= next);
            if id == next {
                next += 1;
            }
        }
        assert_eq!(next, idx.len());
    }
}

#[test]
fn half_slope_on_g4_has_ten_lines() {
    // Distinct values of 2y - x over G_4 identify the slope-1/2 lines.
    let g = dim(4);
    let lines: BTreeSet<i32> = g.points().map(|p| 2 * p.y - p.x).collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(
        SlopeBucketIndex::new(g, Slope::new(1, 2).unwrap()).len(),
        10
    );
}

#[test]
fn representatives_cover_every_line_once() {
    for n in 2..=8u32 {
        let g = dim(n);
        for p in 1..n as i64 {
            for q in 1..n as i64 {
                for sign in [1, -1] {
                    let slope = Slope::new(sign * p, q).unwrap();
                    if slope.direction() != (q, sign * p) {
                        continue; // not reduced
                    }
                    let reps = representative_set(slope, g).unwrap();
                    let idx = SlopeBucketIndex::new(g, slope);
                    assert_eq!(reps.len() as u64, count_buckets(slope, g).unwrap());
                    let ids: BTreeSet<usize> =
                        reps.points().map(|r| idx.bucket_of(r).unwrap()).collect();
                    assert_eq!(ids.len(), reps.len(), "two representatives share a line");
                    assert_eq!(ids.len(), idx.len(), "some line has no representative");
                }
            }
        }
    }
}

#[test]
fn half_slope_representatives_cover_g6() {
    let g = dim(6);
    let slope = Slope::new(1, 2).unwrap();
    let reps: Vec<Point> = representative_set(slope, g).unwrap().points().collect();
    for p in g.points() {
        assert!(
            reps.iter().any(|&r| r == p || slope.joins(r, p)),
            "{p} uncovered"
        );
    }
}

#[test]
fn triple_enumeration_matches_brute_force() {
    for n in 1..=5 {
        let g = dim(n);
        for th in test_matrix() {
            let fast: Vec<ForbiddenTriple> = forbidden_triples(g, th).unwrap();
            let brute: Vec<ForbiddenTriple> = brute_triples(g, th).into_iter().collect();
            let fast_set: BTreeSet<_> = fast.iter().copied().collect();
            assert_eq!(fast_set.len(), fast.len(), "duplicates for n={n} {th}");
            assert_eq!(fast_set, brute.iter().copied().collect(), "n={n} {th}");
            // Deterministic order: vertex row-major, then legs.
            let keys: Vec<_> = fast.iter().map(|t| (t.vertex, t.a, t.c)).collect();
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(keys, sorted);
        }
    }
}

#[test]
fn frozen_triple_counts() {
    // Values from an exhaustive scan of all ordered triples.
    assert_eq!(
        forbidden_triples(dim(2), AngleSpec::Right).unwrap().len(),
        4
    );
    assert_eq!(
        forbidden_triples(dim(2), AngleSpec::DEG135).unwrap().len(),
        0
    );
    assert_eq!(
        forbidden_triples(dim(6), AngleSpec::DEG135).unwrap().len(),
        776
    );
}

#[test]
fn angles_are_invariant_under_grid_symmetries() {
    for n in 1..=5 {
        let g = dim(n);
        let pts: Vec<Point> = g.points().collect();
        for th in test_matrix() {
            for &a in &pts {
                for &v in &pts {
                    for &c in &pts {
                        let base = angle_equals(a, v, c, th);
                        for s in Symmetry::all() {
                            assert_eq!(
                                angle_equals(s.apply(a, g), s.apply(v, g), s.apply(c, g), th),
                                base
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn verify_agrees_with_brute_force() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..400 {
        let n = rng.random_range(1..=6u32);
        let g = dim(n);
        let th = test_matrix()[rng.random_range(0..9)];
        let pts: Vec<Point> = g.points().filter(|_| rng.random_bool(0.3)).collect();
        let c = construction(g, &pts);
        let verdict = verify(&c, th);
        assert_eq!(verdict.is_peaceful(), brute_peaceful(&pts, th));
        for t in verdict.violations() {
            assert!(angle_equals(t.a, t.vertex, t.c, th));
            assert!(t.a < t.c && c.contains(t.a) && c.contains(t.vertex) && c.contains(t.c));
        }
    }
}

#[test]
fn sneaky_triples_exist_on_g6() {
    let triples = forbidden_triples(dim(6), AngleSpec::DEG135).unwrap();
    let exemplar = ForbiddenTriple::new(pt(5, 6), pt(4, 4), pt(1, 3));
    assert!(triples.contains(&exemplar));
    assert_eq!(classify_triple(&exemplar), TripleKind::Sneaky);
    for t in &triples {
        let kind = classify_triple(t);
        let fitted = [t.a, t.c]
            .iter()
            .any(|p| p.x == t.vertex.x || p.y == t.vertex.y);
        assert_eq!(kind == TripleKind::GridFitted, fitted);
    }
}

#[test]
fn grid_fitted_configurations_are_135() {
    for n in 2..=6 {
        for case in grid_fitted_cases(n) {
            assert!(
                angle_equals(case.a, case.vertex, case.c, AngleSpec::DEG135),
                "{}: {} {} {}",
                case.family,
                case.a,
                case.vertex,
                case.c
            );
        }
    }
}

#[test]
fn interior_points_with_neighbours_are_vertices_of_135() {
    for n in 3..=6 {
        for case in interior_cases(n) {
            let c = construction(dim(n), &case.points);
            let verdict = verify(&c, AngleSpec::DEG135);
            assert!(
                verdict.violations().iter().any(|t| t.vertex == case.centre),
                "{}: {:?}",
                case.family,
                case.points
            );
        }
    }
}

#[test]
fn pair_on_g5_blocks_exactly_the_brute_force_cells() {
    let g = dim(5);
    let c = construction(g, &[pt(3, 3), pt(3, 1)]);
    let witnessed = blocked_cells_with_witness(&c, AngleSpec::DEG135).unwrap();
    let brute: BTreeSet<Point> = g
        .points()
        .filter(|z| !c.contains(*z))
        .filter(|&z| !brute_peaceful(&[pt(3, 3), pt(3, 1), z], AngleSpec::DEG135))
        .collect();
    assert_eq!(witnessed.keys().copied().collect::<BTreeSet<_>>(), brute);
    assert!(brute.contains(&pt(2, 4)) && brute.contains(&pt(1, 5)));
    for (z, t) in &witnessed {
        assert!(t.points().contains(z));
        assert!(angle_equals(t.a, t.vertex, t.c, AngleSpec::DEG135));
    }
}

fn small_point(n: i32) -> impl Strategy<Value = Point> {
    (1..=n, 1..=n).prop_map(|(x, y)| Point::new(x, y))
}

fn any_theta() -> impl Strategy<Value = AngleSpec> {
    prop_oneof![
        Just(AngleSpec::Right),
        Just(AngleSpec::Collinear),
        (any::<bool>(), 1..12i64, 1..12i64)
            .prop_map(|(neg, p, q)| { AngleSpec::tangent(if neg { -p } else { p }, q).unwrap() }),
    ]
}

proptest! {
    #[test]
    fn tangent_is_symmetric_in_the_legs(a in small_point(40), v in small_point(40), c in small_point(40)) {
        prop_assert_eq!(tangent_at_vertex(a, v, c), tangent_at_vertex(c, v, a));
    }

    #[test]
    fn tangent_is_translation_invariant(
        a in small_point(40), v in small_point(40), c in small_point(40),
        dx in -1000i64..1000, dy in -1000i64..1000,
    ) {
        let shift = |p: Point| p.offset(dx, dy).unwrap();
        prop_assert_eq!(tangent_at_vertex(a, v, c), tangent_at_vertex(shift(a), shift(v), shift(c)));
    }

    #[test]
    fn angle_decisions_are_reproducible(
        a in small_point(30), v in small_point(30), c in small_point(30), th in any_theta(),
    ) {
        let first = angle_equals(a, v, c, th);
        prop_assert_eq!(first, angle_equals(a, v, c, th));
        prop_assert_eq!(first, angle_equals(c, v, a, th));
    }

    #[test]
    fn completions_match_angle_equals(
        n in 2u32..9, a in small_point(8), v in small_point(8), th in any_theta(),
    ) {
        let g = dim(n);
        prop_assume!(g.contains(a) && g.contains(v));
        let got: BTreeSet<Point> = peaceful_core::angle::completions(g, a, v, th).collect();
        let want: BTreeSet<Point> = g.points().filter(|&c| angle_equals(a, v, c, th)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn blocked_cells_match_verify(
        n in 2u32..=4,
        picks in proptest::collection::vec((1i32..=4, 1i32..=4), 0..8),
        th in prop_oneof![Just(AngleSpec::DEG135), Just(AngleSpec::Right), Just(AngleSpec::Collinear), Just(AngleSpec::DEG45)],
    ) {
        let g = dim(n);
        // Build a peaceful set by keeping compatible picks only.
        let mut c = Construction::empty(g);
        for (x, y) in picks {
            let p = Point::new(x, y);
            if g.contains(p) && verify(&c.with(p).unwrap(), th).is_peaceful() {
                c.insert(p).unwrap();
            }
        }
        let blocked = blocked_cells(&c, th).unwrap();
        for z in g.points().filter(|z| !c.contains(*z)) {
            let fails = !verify(&c.with(z).unwrap(), th).is_peaceful();
            prop_assert_eq!(blocked.contains(&z), fails, "cell {}", z);
        }
        prop_assert!(blocked.iter().all(|z| !c.contains(*z)));
    }

    #[test]
    fn json_roundtrip(n in 1u32..10, pts in proptest::collection::vec((1i32..10, 1i32..10), 0..30)) {
        let g = dim(n);
        let c = Construction::new(g, pts.into_iter().map(Point::from).filter(|p| g.contains(*p))).unwrap();
        let text = c.to_json();
        prop_assert_eq!(Construction::from_json(&text).unwrap(), c);
    }
}
