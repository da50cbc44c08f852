//! Convex bodies of any dimension 0..2 and their exact meet classification.
//!
//! Zipper cells degenerate to segments or points (a zipper along a straight
//! line is the common case), so the refinement machinery works on a body
//! type that covers all three shapes.

use std::cmp::Ordering;

use super::polygon::{clip_segment_to_polygon, intersection_points, ConvexPolygon};
use super::predicates::{orient, point_on_segment, segment_meet, SegMeet, Turn};
use super::similarity::Similarity;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexBody {
    Point(Scalar),
    Segment(Scalar, Scalar),
    Polygon(ConvexPolygon),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BodyMeet {
    Empty,
    Single(Scalar),
    /// Segment or positive-area overlap.
    Many,
}

impl ConvexBody {
    pub fn apply(&self, map: &Similarity) -> ConvexBody {
        match self {
            ConvexBody::Point(p) => ConvexBody::Point(map.apply(p)),
            ConvexBody::Segment(a, b) => ConvexBody::Segment(map.apply(a), map.apply(b)),
            ConvexBody::Polygon(q) => ConvexBody::Polygon(q.apply(map)),
        }
    }

    pub fn defining_points(&self) -> Vec<&Scalar> {
        match self {
            ConvexBody::Point(p) => vec![p],
            ConvexBody::Segment(a, b) => vec![a, b],
            ConvexBody::Polygon(q) => q.vertices().iter().collect(),
        }
    }

    pub fn contains_point(&self, p: &Scalar) -> bool {
        match self {
            ConvexBody::Point(q) => p == q,
            ConvexBody::Segment(a, b) => point_on_segment(p, a, b),
            ConvexBody::Polygon(q) => q.contains_point(p),
        }
    }

    /// Closed containment; inner's defining points suffice by convexity.
    pub fn contains_body(&self, inner: &ConvexBody) -> bool {
        inner.defining_points().iter().all(|p| self.contains_point(p))
    }
}

/// Exact convex hull (monotone chain). Collapses to a segment or point for
/// degenerate input.
pub fn convex_hull(points: &[Scalar]) -> ConvexBody {
    assert!(!points.is_empty());
    let mut sorted: Vec<Scalar> = points.to_vec();
    sorted.sort_by(|a, b| a.cmp_lex(b));
    sorted.dedup();
    if sorted.len() == 1 {
        return ConvexBody::Point(sorted.pop().expect("one point"));
    }
    let all_collinear = sorted[2..]
        .iter()
        .all(|p| orient(&sorted[0], &sorted[1], p) == Turn::Collinear);
    if all_collinear {
        // Lexicographic extremes span the hull.
        let last = sorted.len() - 1;
        return ConvexBody::Segment(sorted[0].clone(), sorted[last].clone());
    }
    let chain = |iter: &mut dyn Iterator<Item = &Scalar>| {
        let mut out: Vec<Scalar> = Vec::new();
        for p in iter {
            while out.len() >= 2
                && orient(&out[out.len() - 2], &out[out.len() - 1], p) != Turn::Left
            {
                out.pop();
            }
            out.push(p.clone());
        }
        out
    };
    let mut lower = chain(&mut sorted.iter());
    let mut upper = chain(&mut sorted.iter().rev());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    ConvexBody::Polygon(ConvexPolygon::new(lower).expect("hull of non-collinear points is strictly convex"))
}

fn meet_point_body(p: &Scalar, b: &ConvexBody) -> BodyMeet {
    if b.contains_point(p) {
        BodyMeet::Single(p.clone())
    } else {
        BodyMeet::Empty
    }
}

fn meet_segment_polygon(a: &Scalar, b: &Scalar, q: &ConvexPolygon) -> BodyMeet {
    match clip_segment_to_polygon(a, b, q) {
        None => BodyMeet::Empty,
        Some((lo, hi)) => match lo.cmp_real(&hi) {
            Ordering::Equal => {
                let d = b - a;
                BodyMeet::Single(a + &(&d * &lo))
            }
            Ordering::Less => BodyMeet::Many,
            Ordering::Greater => BodyMeet::Empty,
        },
    }
}

/// Classification of the intersection of two convex bodies.
pub fn body_meet(x: &ConvexBody, y: &ConvexBody) -> BodyMeet {
    use ConvexBody::*;
    match (x, y) {
        (Point(p), _) => meet_point_body(p, y),
        (_, Point(p)) => meet_point_body(p, x),
        (Segment(a, b), Segment(c, d)) => match segment_meet(a, b, c, d) {
            SegMeet::Empty => BodyMeet::Empty,
            SegMeet::Point(p) => BodyMeet::Single(p),
            SegMeet::Overlap(_, _) => BodyMeet::Many,
        },
        (Segment(a, b), Polygon(q)) | (Polygon(q), Segment(a, b)) => {
            meet_segment_polygon(a, b, q)
        }
        (Polygon(q1), Polygon(q2)) => {
            let pts = intersection_points(q1, q2);
            match pts.len() {
                0 => BodyMeet::Empty,
                1 => BodyMeet::Single(pts.into_iter().next().expect("one point")),
                _ => BodyMeet::Many,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ipt(x: i64, y: i64) -> Scalar {
        Scalar::from_poly(
            4,
            vec![BigRational::from_integer(x.into()), BigRational::from_integer(y.into())],
        )
    }

    #[test]
    fn hull_shapes() {
        let pts = [ipt(0, 0), ipt(2, 0), ipt(1, 1), ipt(0, 2), ipt(2, 2), ipt(1, 0)];
        match convex_hull(&pts) {
            ConvexBody::Polygon(p) => assert_eq!(p.len(), 4),
            other => panic!("expected polygon, got {other:?}"),
        }
        let collinear = [ipt(3, 3), ipt(0, 0), ipt(1, 1)];
        assert_eq!(
            convex_hull(&collinear),
            ConvexBody::Segment(ipt(0, 0), ipt(3, 3))
        );
        assert_eq!(convex_hull(&[ipt(5, 5), ipt(5, 5)]), ConvexBody::Point(ipt(5, 5)));
    }

    #[test]
    fn meets_across_shapes() {
        let sq = ConvexPolygon::new(vec![ipt(0, 0), ipt(2, 0), ipt(2, 2), ipt(0, 2)]).unwrap();
        let poly = ConvexBody::Polygon(sq);
        assert_eq!(
            body_meet(&poly, &ConvexBody::Point(ipt(1, 1))),
            BodyMeet::Single(ipt(1, 1))
        );
        assert_eq!(body_meet(&poly, &ConvexBody::Point(ipt(5, 5))), BodyMeet::Empty);
        assert_eq!(
            body_meet(&poly, &ConvexBody::Segment(ipt(-1, -1), ipt(5, 5))),
            BodyMeet::Many
        );
        // Segment touching at a corner only.
        assert_eq!(
            body_meet(&poly, &ConvexBody::Segment(ipt(2, 2), ipt(3, 4))),
            BodyMeet::Single(ipt(2, 2))
        );
        assert_eq!(
            body_meet(
                &ConvexBody::Segment(ipt(0, 0), ipt(2, 0)),
                &ConvexBody::Segment(ipt(1, 0), ipt(1, 5))
            ),
            BodyMeet::Single(ipt(1, 0))
        );
    }
}
