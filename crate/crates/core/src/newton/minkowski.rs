use std::cmp::Ordering;

use super::polygon::{LatticePolygon, Point, PolygonKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SplitKind {
    /// A point plus the whole polygon (constant factor).
    Trivial,
    SegmentSegment,
    PolygonSegment,
    PolygonPolygon,
}

/// An unordered decomposition `Q = A + B` up to translation. Both summands
/// are translated to touch the axes; `summand_a` is the one with the smaller
/// area (ties broken by its edge-multiplicity vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiSplit {
    pub summand_a: LatticePolygon,
    pub summand_b: LatticePolygon,
    pub kind: SplitKind,
}

impl MinkowskiSplit {
    pub fn is_trivial(&self) -> bool {
        self.kind == SplitKind::Trivial
    }
}

fn classify(a: PolygonKind, b: PolygonKind) -> SplitKind {
    use PolygonKind::*;
    match (a.min(b), a.max(b)) {
        (Point, _) => SplitKind::Trivial,
        (Segment, Segment) => SplitKind::SegmentSegment,
        (Segment, Polygon) => SplitKind::PolygonSegment,
        _ => SplitKind::PolygonPolygon,
    }
}

fn summand(dirs: &[Point], mult: &[u64]) -> LatticePolygon {
    let edges: Vec<(Point, u64)> = dirs.iter().copied().zip(mult.iter().copied()).collect();
    LatticePolygon::from_edges((0, 0), &edges).normalized()
}

/// Every unordered Minkowski decomposition of `q`, found by choosing a
/// sub-multiplicity `0 ≤ m′_e ≤ m_e` for each primitive edge direction with
/// `Σ m′_e·e = 0`. Choices are enumerated lexicographically; the trivial
/// split is included and flagged.
pub fn minkowski_splits(q: &LatticePolygon) -> Vec<MinkowskiSplit> {
    let dirs: Vec<Point> = q.edges().iter().map(|&(d, _)| d).collect();
    let full: Vec<u64> = q.edges().iter().map(|&(_, m)| m).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u64; dirs.len()];
    loop {
        let closes = dirs
            .iter()
            .zip(&cur)
            .fold((0i64, 0i64), |acc, (d, &m)| (acc.0 + d.0 * m as i64, acc.1 + d.1 * m as i64))
            == (0, 0);
        if closes {
            let rest: Vec<u64> = full.iter().zip(&cur).map(|(f, c)| f - c).collect();
            let a = summand(&dirs, &cur);
            let b = summand(&dirs, &rest);
            let order = a.area2().cmp(&b.area2()).then_with(|| cur.cmp(&rest));
            if order != Ordering::Greater {
                out.push(MinkowskiSplit {
                    kind: classify(a.kind(), b.kind()),
                    summand_a: a,
                    summand_b: b,
                });
            }
        }
        // odometer increment, last digit fastest
        let mut i = dirs.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < full[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nontrivial(q: &LatticePolygon) -> Vec<MinkowskiSplit> {
        minkowski_splits(q).into_iter().filter(|s| !s.is_trivial()).collect()
    }

    #[test]
    fn rotated_square_has_one_split() {
        let q = LatticePolygon::hull([(1, 0), (0, 1), (1, 2), (2, 1)]);
        let all = minkowski_splits(&q);
        assert_eq!(all.iter().filter(|s| s.is_trivial()).count(), 1);
        let splits = nontrivial(&q);
        assert_eq!(splits.len(), 1);
        let s = &splits[0];
        assert_eq!(s.kind, SplitKind::SegmentSegment);
        let mut pair = [s.summand_a.vertices().to_vec(), s.summand_b.vertices().to_vec()];
        pair.sort();
        assert_eq!(pair, [vec![(0, 0), (1, 1)], vec![(1, 0), (0, 1)]]);
    }

    #[test]
    fn two_by_two_square_has_four_classes() {
        let q = LatticePolygon::hull([(0, 0), (2, 0), (2, 2), (0, 2)]);
        let splits = nontrivial(&q);
        assert_eq!(splits.len(), 4);
        let mut kinds: Vec<SplitKind> = splits.iter().map(|s| s.kind).collect();
        kinds.sort();
        assert_eq!(
            kinds,
            vec![
                SplitKind::SegmentSegment,
                SplitKind::PolygonSegment,
                SplitKind::PolygonSegment,
                SplitKind::PolygonPolygon
            ]
        );
        for s in &splits {
            assert!(s.summand_a.minkowski_sum(&s.summand_b).same_up_to_translation(&q));
        }
    }

    #[test]
    fn primitive_segment_is_indecomposable() {
        let q = LatticePolygon::hull([(0, 0), (1, 3)]);
        let all = minkowski_splits(&q);
        assert_eq!(all.len(), 1);
        assert!(all[0].is_trivial());
    }

    #[test]
    fn splits_reconstruct_hexagon() {
        let q = LatticePolygon::hull([(0, 0), (2, 0), (3, 1), (3, 3), (1, 3), (0, 2)]);
        for s in minkowski_splits(&q) {
            assert!(s.summand_a.is_convex() && s.summand_b.is_convex());
            assert!(s.summand_a.in_first_quadrant() && s.summand_b.in_first_quadrant());
            let sum = s.summand_a.minkowski_sum(&s.summand_b);
            assert!(sum.same_up_to_translation(&q));
        }
    }
}
