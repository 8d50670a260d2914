use std::cmp::Ordering;

use crate::ffield::FieldLike;

use super::{NewtonError, SparseBivarPoly};

pub type Point = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PolygonKind {
    Point,
    Segment,
    Polygon,
}

/// A convex lattice polygon with vertices listed counterclockwise from the
/// lowest (then leftmost) vertex. Points and segments are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolygon {
    vertices: Vec<Point>,
    /// Primitive edge directions with multiplicities, in boundary order.
    edges: Vec<(Point, u64)>,
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Total order on directions by polar angle in `[0, 2π)`.
pub(crate) fn angle_cmp(a: Point, b: Point) -> Ordering {
    let half = |v: Point| if v.1 > 0 || (v.1 == 0 && v.0 > 0) { 0 } else { 1 };
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

impl LatticePolygon {
    /// Convex hull of a nonempty point set, collinear points removed.
    pub fn hull(points: impl IntoIterator<Item = Point>) -> Self {
        let mut pts: Vec<Point> = points.into_iter().collect();
        assert!(!pts.is_empty(), "hull of an empty point set");
        pts.sort();
        pts.dedup();
        if pts.len() == 1 {
            return Self::from_vertices(pts);
        }
        let mut lower: Vec<Point> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::from_vertices(lower)
    }

    /// `vertices` must already be a counterclockwise convex cycle.
    fn from_vertices(mut vertices: Vec<Point>) -> Self {
        let start = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, &(x, y))| (y, x))
            .map(|(i, _)| i)
            .unwrap_or(0);
        vertices.rotate_left(start);
        let n = vertices.len();
        let edges = if n < 2 {
            Vec::new()
        } else {
            (0..n)
                .map(|i| {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                    let g = gcd(dx, dy);
                    ((dx / g, dy / g), g as u64)
                })
                .collect()
        };
        Self { vertices, edges }
    }

    /// Walks `edges` (any order; they are sorted by angle) from `anchor`.
    /// The edge vectors must sum to zero.
    pub fn from_edges(anchor: Point, edges: &[(Point, u64)]) -> Self {
        let mut sorted: Vec<(Point, u64)> = edges.iter().copied().filter(|&(_, m)| m > 0).collect();
        sorted.sort_by(|a, b| angle_cmp(a.0, b.0));
        // merge parallel directions
        let mut merged: Vec<(Point, u64)> = Vec::new();
        for (d, m) in sorted {
            match merged.last_mut() {
                Some((prev, pm)) if *prev == d => *pm += m,
                _ => merged.push((d, m)),
            }
        }
        let mut vertices = vec![anchor];
        let mut cur = anchor;
        for &(d, m) in &merged {
            cur = (cur.0 + d.0 * m as i64, cur.1 + d.1 * m as i64);
            vertices.push(cur);
        }
        assert_eq!(cur, anchor, "edge vectors do not close up");
        if !merged.is_empty() {
            vertices.pop();
        }
        Self::from_vertices(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(Point, u64)] {
        &self.edges
    }

    pub fn kind(&self) -> PolygonKind {
        match self.vertices.len() {
            1 => PolygonKind::Point,
            2 => PolygonKind::Segment,
            _ => PolygonKind::Polygon,
        }
    }

    /// The lowest-then-leftmost vertex.
    pub fn anchor(&self) -> Point {
        self.vertices[0]
    }

    pub fn min_corner(&self) -> Point {
        let x = self.vertices.iter().map(|v| v.0).min().expect("nonempty");
        let y = self.vertices.iter().map(|v| v.1).min().expect("nonempty");
        (x, y)
    }

    pub fn translate(&self, (dx, dy): Point) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&(x, y)| (x + dx, y + dy)).collect(),
            edges: self.edges.clone(),
        }
    }

    /// Translate so the polygon touches both coordinate axes.
    pub fn normalized(&self) -> Self {
        let (x, y) = self.min_corner();
        self.translate((-x, -y))
    }

    pub fn same_up_to_translation(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn in_first_quadrant(&self) -> bool {
        self.vertices.iter().all(|&(x, y)| x >= 0 && y >= 0)
    }

    /// Twice the enclosed area.
    pub fn area2(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum::<i64>()
            .abs()
    }

    /// Sum of all edge vectors; zero for every valid polygon.
    pub fn edge_sum(&self) -> Point {
        self.edges
            .iter()
            .fold((0, 0), |acc, &(d, m)| (acc.0 + d.0 * m as i64, acc.1 + d.1 * m as i64))
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        n < 3
            || (0..n).all(|i| {
                cross(self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]) > 0
            })
    }

    /// `gcd` of the edge multiplicities: the largest `s` with the polygon an
    /// `s`-fold dilate of a lattice polygon. Zero for a point.
    pub fn dilation_gcd(&self) -> u64 {
        self.edges.iter().fold(0, |g, &(_, m)| gcd(g as i64, m as i64) as u64)
    }

    pub fn contains(&self, p: Point) -> bool {
        let n = self.vertices.len();
        match n {
            1 => p == self.vertices[0],
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                cross(a, b, p) == 0
                    && p.0 >= a.0.min(b.0)
                    && p.0 <= a.0.max(b.0)
                    && p.1 >= a.1.min(b.1)
                    && p.1 <= a.1.max(b.1)
            }
            _ => (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0),
        }
    }

    /// Every lattice point in the closed polygon, in `(x, y)` order.
    pub fn lattice_points(&self) -> Vec<Point> {
        let (x0, y0) = self.min_corner();
        let x1 = self.vertices.iter().map(|v| v.0).max().expect("nonempty");
        let y1 = self.vertices.iter().map(|v| v.1).max().expect("nonempty");
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                if self.contains((x, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Minkowski sum by merging edge sequences.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        let anchor = (self.anchor().0 + other.anchor().0, self.anchor().1 + other.anchor().1);
        let edges: Vec<(Point, u64)> = self.edges.iter().chain(&other.edges).copied().collect();
        Self::from_edges(anchor, &edges)
    }
}

/// Convex hull of the exponent vectors of the nonzero terms.
pub fn newton_polygon<F: FieldLike>(p: &SparseBivarPoly<F>) -> Result<LatticePolygon, NewtonError> {
    if p.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    Ok(LatticePolygon::hull(
        p.support().map(|(i, j)| (i as i64, j as i64)),
    ))
}
