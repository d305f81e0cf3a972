//! Correlation polytopes and exact facet enumeration.
//!
//! Vertices come from the two-valued assignments, either as raw tuples
//! `(a, a′, b, b′)` or as product coordinates `(ab, ab′, a′b, a′b′)`. The hull
//! is found by brute force: every `d`-subset of vertices that spans a
//! hyperplane is a candidate, and it is kept iff all vertices lie weakly on
//! one side. All arithmetic is on integers.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::urn::enumerate_assignments;

pub const MAX_DIM: usize = 8;

/// `(+, +, +, −)`: `E(α,β) + E(α,β′) + E(α′,β) − E(α′,β′)`.
pub const CANONICAL_SIGNS: [i8; 4] = [1, 1, 1, -1];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexSet {
    dim: usize,
    points: Vec<Vec<i64>>,
}

impl VertexSet {
    /// Sorts and deduplicates `points`.
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidVertexSet("no points".into()))?;
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidVertexSet(format!(
                "dimension {dim} not in 1..={MAX_DIM}"
            )));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::InvalidVertexSet(format!(
                "point {p:?} has dimension {}, expected {dim}",
                p.len()
            )));
        }
        let points: Vec<_> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    /// Dimension of the affine hull.
    pub fn affine_rank(&self) -> usize {
        let base = &self.points[0];
        let rows: Vec<Vec<i128>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| i128::from(a - b)).collect())
            .collect();
        integer_rank(rows)
    }
}

/// The 16 tuples `(a, a′, b, b′) ∈ {±1}⁴`.
pub fn raw_vertices() -> VertexSet {
    let points = enumerate_assignments()
        .iter()
        .map(|s| s.values().to_vec())
        .collect();
    VertexSet::new(points).expect("16 points in dimension 4")
}

/// Product coordinates `(ab, ab′, a′b, a′b′)` over the 16 assignments.
pub fn product_vertices() -> VertexSet {
    let points = enumerate_assignments()
        .iter()
        .map(|s| {
            let [a, ap, b, bp] = s.values();
            vec![a * b, a * bp, ap * b, ap * bp]
        })
        .collect();
    VertexSet::new(points).expect("8 points in dimension 4")
}

/// `coeffs · p ≤ rhs`, with `gcd(coeffs, rhs) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

impl Facet {
    pub fn value(&self, p: &[i64]) -> i64 {
        self.coeffs.iter().zip(p).map(|(c, x)| c * x).sum()
    }

    pub fn holds(&self, p: &[i64]) -> bool {
        self.value(p) <= self.rhs
    }

    pub fn is_tight(&self, p: &[i64]) -> bool {
        self.value(p) == self.rhs
    }

    /// Parses the line format written by `Display`.
    pub fn parse(line: &str) -> Option<Facet> {
        let (lhs, rhs) = line.split_once("<=")?;
        let coeffs = lhs
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<Vec<i64>, _>>()
            .ok()?;
        let rhs = rhs.trim().parse().ok()?;
        (!coeffs.is_empty()).then_some(Facet { coeffs, rhs })
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.coeffs {
            write!(f, "{c} ")?;
        }
        write!(f, "<= {}", self.rhs)
    }
}

/// Writes one facet per line.
pub fn format_facets(facets: &[Facet]) -> String {
    facets.iter().map(|f| format!("{f}\n")).collect()
}

/// Complete facet list of the hull of `vs`, sorted by `(coeffs, rhs)`.
pub fn enumerate_facets(vs: &VertexSet) -> Result<Vec<Facet>> {
    let d = vs.dim();
    let rank = vs.affine_rank();
    if rank < d {
        return Err(Error::Degenerate { rank, dim: d });
    }
    let points = vs.points();
    let mut found = BTreeSet::new();
    for subset in (0..points.len()).combinations(d) {
        let Some(normal) = hyperplane_normal(subset.iter().map(|&i| points[i].as_slice())) else {
            continue;
        };
        let rhs: i128 = dot(&normal, &points[subset[0]]);
        let (mut below, mut above) = (false, false);
        for p in points {
            let v = dot(&normal, p);
            below |= v < rhs;
            above |= v > rhs;
            if below && above {
                break;
            }
        }
        let facet = match (below, above) {
            (true, false) => normalize(normal, rhs),
            (false, true) => normalize(normal.iter().map(|c| -c).collect(), -rhs),
            _ => continue,
        };
        found.insert(facet);
    }
    Ok(found.into_iter().collect())
}

/// `Σ signᵢ·Eᵢ`.
pub fn chsh_sum(e: [f64; 4], signs: [i8; 4]) -> f64 {
    e.iter().zip(signs).map(|(v, s)| f64::from(s) * v).sum()
}

/// The eight CHSH facets `±E₁ ± E₂ ± E₃ ± E₄ ≤ 2` (odd number of minus signs).
pub fn chsh_facets() -> Vec<Facet> {
    let mut out: Vec<Facet> = (0..16u32)
        .filter(|m| m.count_ones() % 2 == 1)
        .map(|m| Facet {
            coeffs: (0..4).map(|k| if m >> k & 1 == 1 { -1 } else { 1 }).collect(),
            rhs: 2,
        })
        .collect();
    out.sort();
    out
}

fn dot(normal: &[i128], p: &[i64]) -> i128 {
    normal.iter().zip(p).map(|(c, x)| c * i128::from(*x)).sum()
}

fn normalize(coeffs: Vec<i128>, rhs: i128) -> Facet {
    let g = coeffs.iter().fold(rhs.abs(), |g, c| gcd(g, c.abs()));
    Facet {
        coeffs: coeffs.iter().map(|c| (c / g) as i64).collect(),
        rhs: (rhs / g) as i64,
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Normal of the hyperplane through `d` points in dimension `d`, by cofactor
/// expansion of the `(d−1) × d` difference matrix. `None` if the points are
/// affinely dependent.
fn hyperplane_normal<'a>(mut pts: impl Iterator<Item = &'a [i64]>) -> Option<Vec<i128>> {
    let base = pts.next()?;
    let d = base.len();
    let diffs: Vec<Vec<i128>> = pts
        .map(|p| p.iter().zip(base).map(|(a, b)| i128::from(a - b)).collect())
        .collect();
    let normal: Vec<i128> = (0..d)
        .map(|col| {
            let minor: Vec<Vec<i128>> = diffs
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != col)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if col % 2 == 0 { 1 } else { -1 };
            sign * determinant(minor)
        })
        .collect();
    normal.iter().any(|c| *c != 0).then_some(normal)
}

/// Bareiss fraction-free elimination; exact for integer input.
pub(crate) fn determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn integer_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in rank + 1..rows.len() {
            let (p, q) = (rows[rank][col], rows[r][col]);
            if q == 0 {
                continue;
            }
            let (top, rest) = rows.split_at_mut(r);
            for (v, &w) in rest[0][col..width].iter_mut().zip(&top[rank][col..width]) {
                *v = *v * p - w * q;
            }
            let g = rows[r].iter().fold(0, |g, v| gcd(g, v.abs()));
            if g > 1 {
                rows[r].iter_mut().for_each(|v| *v /= g);
            }
        }
        rank += 1;
    }
    rank
}
