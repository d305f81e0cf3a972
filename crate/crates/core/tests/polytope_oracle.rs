//! Hull completeness: a rational point satisfies every enumerated facet iff
//! it is a convex combination of the vertices. Membership is decided without
//! linear programming, by searching all vertex simplices for nonnegative
//! barycentric coordinates (exact, Cramer's rule on integers).

use contextsim_core::polytope::{enumerate_facets, product_vertices, raw_vertices, VertexSet};
use itertools::Itertools;
use proptest::prelude::*;

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

/// Is `num / den` in the hull of `vs`?
fn in_hull(vs: &VertexSet, num: &[i64], den: i64) -> bool {
    let d = vs.dim();
    for simplex in vs.points().iter().combinations(d + 1) {
        // columns: den·vᵢ, last row all den; rhs: (num, den)
        let build = |replace: Option<usize>| -> Vec<Vec<i128>> {
            (0..=d)
                .map(|r| {
                    (0..=d)
                        .map(|c| {
                            if Some(c) == replace {
                                if r < d { num[r] as i128 } else { den as i128 }
                            } else if r < d {
                                (simplex[c][r] * den) as i128
                            } else {
                                den as i128
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let base = det(&build(None));
        if base == 0 {
            continue;
        }
        if (0..=d).all(|c| {
            let dc = det(&build(Some(c)));
            dc == 0 || (dc > 0) == (base > 0)
        }) {
            return true;
        }
    }
    false
}

fn satisfies_all(vs: &VertexSet, num: &[i64], den: i64) -> bool {
    enumerate_facets(vs)
        .unwrap()
        .iter()
        .all(|f| f.value(num) <= f.rhs * den)
}

fn check(vs: &VertexSet, points: &[Vec<i64>], den: i64) {
    let mut inside = 0;
    for p in points {
        let a = in_hull(vs, p, den);
        assert_eq!(a, satisfies_all(vs, p, den), "point {p:?}/{den}");
        inside += usize::from(a);
    }
    // both branches exercised
    assert!(inside > 0 && inside < points.len());
}

fn lcg_points(seed: u64, count: usize, dim: usize, span: i64) -> Vec<Vec<i64>> {
    let mut s = seed;
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((s >> 33) as i64).rem_euclid(2 * span + 1) - span
                })
                .collect()
        })
        .collect()
}

#[test]
fn product_polytope_completeness() {
    // coordinates in [−1.5, 1.5] with denominator 4
    check(&product_vertices(), &lcg_points(1, 100, 4, 6), 4);
}

#[test]
fn cube_completeness() {
    check(&raw_vertices(), &lcg_points(2, 100, 4, 6), 4);
}

#[test]
fn irregular_3d_completeness() {
    let vs = VertexSet::new(vec![
        vec![0, 0, 0],
        vec![3, 0, 0],
        vec![0, 2, 0],
        vec![0, 0, 4],
        vec![2, 2, 2],
        vec![1, 1, 0],
    ])
    .unwrap();
    check(&vs, &lcg_points(3, 100, 3, 16), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn facets_valid_tight_and_sorted(pts in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 4..10)) {
        let vs = VertexSet::new(pts).unwrap();
        prop_assume!(vs.affine_rank() == 3);
        let facets = enumerate_facets(&vs).unwrap();
        prop_assert!(facets.windows(2).all(|w| w[0] < w[1]));
        for f in &facets {
            prop_assert!(vs.points().iter().all(|p| f.holds(p)));
            let tight: Vec<Vec<i64>> = vs.points().iter().filter(|p| f.is_tight(p)).cloned().collect();
            prop_assert!(tight.len() >= 3);
            prop_assert_eq!(VertexSet::new(tight).unwrap().affine_rank(), 2);
            let g = f.coeffs.iter().fold(f.rhs.abs(), |g, c| num_gcd(g, c.abs()));
            prop_assert_eq!(g, 1);
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { num_gcd(b, a % b) }
}
