//! Strictly convex polygons with exact vertices and the predicates used by
//! the validation conditions: point location, containment, and pairwise
//! intersection classification.

use std::cmp::Ordering;

use num_rational::BigRational;

use super::predicates::{cross_2i, line_intersection, line_parameter, orient, sector, Turn};
use super::similarity::Similarity;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKey};

/// Counterclockwise strictly convex polygon (no three collinear vertices).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvexPolygon {
    vertices: Vec<Scalar>,
}

/// Canonical comparison key; equal iff the polygons are equal as vertex cycles.
pub type PolygonKey = Vec<ScalarKey>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    Vertex(usize),
    EdgeInterior(usize),
    Exterior,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionClass {
    Disjoint,
    SingleCommonVertex(Scalar),
    Other,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Scalar>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::DegeneratePolygon(format!("{n} vertices")));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::DegeneratePolygon(format!("repeated vertex at index {i}")));
            }
        }
        for i in 0..n {
            let t = orient(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if t != Turn::Left {
                return Err(Error::DegeneratePolygon(format!(
                    "vertices {i}, {}, {} do not make a strict left turn (clockwise or collinear input)",
                    (i + 1) % n,
                    (i + 2) % n
                )));
            }
        }
        // All-left-turn vertex chains still admit multiply-wound cycles; the
        // direction vector must wind exactly once.
        let dirs: Vec<Scalar> = (0..n)
            .map(|i| &vertices[(i + 1) % n] - &vertices[i])
            .collect();
        let mut winding = 0usize;
        for i in 0..n {
            let cur = &dirs[i];
            let next = &dirs[(i + 1) % n];
            if sector(next) < sector(cur) {
                winding += 1;
            }
        }
        if winding != 1 {
            return Err(Error::DegeneratePolygon(format!(
                "vertex cycle winds {winding} times"
            )));
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Scalar] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> u32 {
        self.vertices[0].order()
    }

    pub fn edge(&self, i: usize) -> (&Scalar, &Scalar) {
        (&self.vertices[i], &self.vertices[(i + 1) % self.vertices.len()])
    }

    /// Image polygon under a similarity, renormalized to counterclockwise.
    pub fn apply(&self, map: &Similarity) -> ConvexPolygon {
        let mut vs: Vec<Scalar> = self.vertices.iter().map(|v| map.apply(v)).collect();
        if map.mirror {
            vs.reverse();
        }
        ConvexPolygon { vertices: vs }
    }

    pub fn centroid(&self) -> Scalar {
        let mut sum = Scalar::zero(self.order());
        for v in &self.vertices {
            sum = &sum + v;
        }
        sum.div_int(self.vertices.len() as i64)
    }

    /// Canonical key: the vertex cycle rotated to start at the smallest vertex key.
    pub fn key(&self) -> PolygonKey {
        let keys: Vec<ScalarKey> = self.vertices.iter().map(Scalar::key).collect();
        let start = keys
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.cmp(b))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let n = keys.len();
        (0..n).map(|i| keys[(start + i) % n].clone()).collect()
    }

    pub fn locate(&self, p: &Scalar) -> Location {
        let n = self.vertices.len();
        let mut on_edges: Vec<usize> = Vec::new();
        for i in 0..n {
            let (a, b) = self.edge(i);
            match orient(a, b, p) {
                Turn::Right => return Location::Exterior,
                Turn::Collinear => on_edges.push(i),
                Turn::Left => {}
            }
        }
        match on_edges.len() {
            0 => Location::Interior,
            1 => {
                let i = on_edges[0];
                let (a, b) = self.edge(i);
                if p == a {
                    Location::Vertex(i)
                } else if p == b {
                    Location::Vertex((i + 1) % n)
                } else {
                    // Inside the closed polygon and on the edge line means on
                    // the edge segment itself.
                    Location::EdgeInterior(i)
                }
            }
            2 => {
                // Two edge lines meet inside the closed region only at their
                // shared vertex (adjacency forced by strict convexity).
                let (i, j) = (on_edges[0], on_edges[1]);
                let v = if (i + 1) % n == j {
                    j
                } else if (j + 1) % n == i {
                    i
                } else {
                    panic!("point on two non-adjacent edge lines of a strictly convex polygon");
                };
                debug_assert_eq!(p, &self.vertices[v]);
                Location::Vertex(v)
            }
            _ => panic!("point on three edge lines of a strictly convex polygon"),
        }
    }

    pub fn contains_point(&self, p: &Scalar) -> bool {
        self.locate(p) != Location::Exterior
    }

    /// Closed containment of another convex polygon (vertex check suffices).
    pub fn contains_polygon(&self, inner: &ConvexPolygon) -> bool {
        inner.vertices.iter().all(|v| self.contains_point(v))
    }

    pub fn is_image_vertex(&self, p: &Scalar) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Angle handle at vertex k: a field element whose argument is the
    /// interior angle (in (0, pi) by strict convexity).
    pub fn angle_handle(&self, k: usize) -> Scalar {
        let n = self.vertices.len();
        let e1 = &self.vertices[(k + 1) % n] - &self.vertices[k];
        let e2 = &self.vertices[(k + n - 1) % n] - &self.vertices[k];
        let w = &e1.conj() * &e2;
        debug_assert_eq!(w.im_sign(), Ordering::Greater);
        w
    }

    /// Handle of the minimal interior angle.
    pub fn min_angle_handle(&self) -> Scalar {
        (0..self.vertices.len())
            .map(|k| self.angle_handle(k))
            .min_by(super::predicates::cmp_angle)
            .expect("polygon has vertices")
    }

    /// Handle of the maximal interior angle.
    pub fn max_angle_handle(&self) -> Scalar {
        (0..self.vertices.len())
            .map(|k| self.angle_handle(k))
            .max_by(super::predicates::cmp_angle)
            .expect("polygon has vertices")
    }

    /// 4i times the signed area (positive for counterclockwise).
    pub fn area_4i(&self) -> Scalar {
        let n = self.vertices.len();
        let mut acc = Scalar::zero(self.order());
        for i in 0..n {
            acc = &acc + &cross_2i(&self.vertices[i], &self.vertices[(i + 1) % n]);
        }
        acc
    }

    /// Exact rational area; available when the field contains i.
    pub fn area_rational(&self) -> Option<BigRational> {
        let i = Scalar::unit_imag(self.order())?;
        let quarter = BigRational::new(1.into(), 4.into());
        let a = (&self.area_4i() * &i.conj()).scale(&quarter);
        a.as_rational().cloned()
    }

    /// Center and one-step rotation when the polygon is regular.
    pub fn regular_structure(&self) -> Option<RegularInfo> {
        let n = self.vertices.len() as u32;
        let r = primitive_root_in_field(self.order(), n)?;
        let center = self.centroid();
        let rotation = Similarity::rotation(&center, r);
        let count = self.vertices.len();
        for k in 0..count {
            if rotation.apply(&self.vertices[k]) != self.vertices[(k + 1) % count] {
                return None;
            }
        }
        Some(RegularInfo { center, rotation })
    }
}

/// Center and the 2*pi/n rotation step of a regular polygon.
#[derive(Clone, Debug)]
pub struct RegularInfo {
    pub center: Scalar,
    pub rotation: Similarity,
}

/// exp(2*pi*i/n) as an element of Q(zeta_order), when it lies there.
pub fn primitive_root_in_field(order: u32, n: u32) -> Option<Scalar> {
    if n == 0 {
        return None;
    }
    if order.is_multiple_of(n) {
        return Some(Scalar::zeta_pow(order, (order / n) as i64));
    }
    // zeta_{2m} = -zeta_m^{(m+1)/2} for odd m.
    if n.is_multiple_of(2) {
        let m = n / 2;
        if m % 2 == 1 && order.is_multiple_of(m) {
            let e = (order / m) as i64 * ((m as i64 + 1) / 2);
            return Some(-&Scalar::zeta_pow(order, e));
        }
    }
    None
}

/// Sutherland-Hodgman clip of an arbitrary point cycle by one half-plane
/// (keep the closed left side of a -> b).
fn clip_halfplane(points: &[Scalar], a: &Scalar, b: &Scalar) -> Vec<Scalar> {
    let n = points.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let s = &points[i];
        let e = &points[(i + 1) % n];
        let ss = orient(a, b, s);
        let se = orient(a, b, e);
        if ss != Turn::Right {
            out.push(s.clone());
        }
        let strictly_opposed = (ss == Turn::Left && se == Turn::Right)
            || (ss == Turn::Right && se == Turn::Left);
        if strictly_opposed {
            out.push(line_intersection(a, b, s, e));
        }
    }
    out
}

/// Distinct points of the intersection region of two convex polygons.
///
/// Empty for disjoint polygons; one point for a touching point; two or more
/// (collinear or not) for segment and positive-area intersections.
pub fn intersection_points(q1: &ConvexPolygon, q2: &ConvexPolygon) -> Vec<Scalar> {
    let mut pts: Vec<Scalar> = q1.vertices.to_vec();
    let n2 = q2.vertices.len();
    for i in 0..n2 {
        if pts.is_empty() {
            break;
        }
        let (a, b) = q2.edge(i);
        pts = clip_halfplane(&pts, a, b);
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for p in pts {
        if seen.insert(p.key()) {
            out.push(p);
        }
    }
    out
}

/// The pairwise-contact classification behind the single-vertex condition.
pub fn classify_intersection(q1: &ConvexPolygon, q2: &ConvexPolygon) -> IntersectionClass {
    let pts = intersection_points(q1, q2);
    match pts.len() {
        0 => IntersectionClass::Disjoint,
        1 => {
            let p = pts.into_iter().next().expect("one point");
            if q1.is_image_vertex(&p).is_some() && q2.is_image_vertex(&p).is_some() {
                IntersectionClass::SingleCommonVertex(p)
            } else {
                IntersectionClass::Other
            }
        }
        _ => IntersectionClass::Other,
    }
}

/// Clip the closed segment a-b to a convex polygon; the surviving closed
/// parameter range along a -> b, if any.
pub fn clip_segment_to_polygon(
    a: &Scalar,
    b: &Scalar,
    poly: &ConvexPolygon,
) -> Option<(Scalar, Scalar)> {
    let order = a.order();
    let mut lo = Scalar::zero(order);
    let mut hi = Scalar::one(order);
    for i in 0..poly.len() {
        let (u, v) = poly.edge(i);
        let sa = orient(u, v, a);
        let sb = orient(u, v, b);
        match (sa, sb) {
            (Turn::Right, Turn::Right) => return None,
            (Turn::Right, _) | (_, Turn::Right) => {
                // Crossing parameter of the edge line along a -> b.
                let t = line_parameter(&line_intersection(u, v, a, b), a, b);
                if sa == Turn::Right {
                    if t.cmp_real(&lo) == Ordering::Greater {
                        lo = t;
                    }
                } else if t.cmp_real(&hi) == Ordering::Less {
                    hi = t;
                }
            }
            _ => {}
        }
        if lo.cmp_real(&hi) == Ordering::Greater {
            return None;
        }
    }
    Some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> Scalar {
        Scalar::from_poly(4, vec![q(x.0, x.1), q(y.0, y.1)])
    }

    fn ipt(x: i64, y: i64) -> Scalar {
        pt((x, 1), (y, 1))
    }

    pub(crate) fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(vec![ipt(0, 0), ipt(1, 0), ipt(1, 1), ipt(0, 1)]).unwrap()
    }

    fn square(x0: (i64, i64), y0: (i64, i64), s: (i64, i64)) -> ConvexPolygon {
        let x0 = q(x0.0, x0.1);
        let y0 = q(y0.0, y0.1);
        let s = q(s.0, s.1);
        let v = |dx: i64, dy: i64| {
            let dx = BigRational::from_integer(dx.into());
            let dy = BigRational::from_integer(dy.into());
            Scalar::from_poly(4, vec![&x0 + &s * dx, &y0 + &s * dy])
        };
        ConvexPolygon::new(vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)]).unwrap()
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(ConvexPolygon::new(vec![ipt(0, 0), ipt(1, 0)]).is_err());
        // Clockwise.
        assert!(ConvexPolygon::new(vec![ipt(0, 0), ipt(0, 1), ipt(1, 1), ipt(1, 0)]).is_err());
        // Collinear triple.
        assert!(ConvexPolygon::new(vec![ipt(0, 0), ipt(1, 0), ipt(2, 0), ipt(0, 1)]).is_err());
        // Repeated vertex.
        assert!(ConvexPolygon::new(vec![ipt(0, 0), ipt(0, 0), ipt(1, 1)]).is_err());
        // Non-convex.
        assert!(ConvexPolygon::new(vec![
            ipt(0, 0),
            ipt(2, 0),
            ipt(1, 1),
            ipt(2, 2),
            ipt(0, 2)
        ])
        .is_err());
    }

    #[test]
    fn locate_cases() {
        let sq = unit_square();
        assert_eq!(sq.locate(&pt((1, 2), (1, 2))), Location::Interior);
        assert_eq!(sq.locate(&ipt(0, 0)), Location::Vertex(0));
        assert_eq!(sq.locate(&pt((1, 2), (0, 1))), Location::EdgeInterior(0));
        assert_eq!(sq.locate(&ipt(2, 0)), Location::Exterior);
        assert_eq!(sq.locate(&pt((0, 1), (1, 2))), Location::EdgeInterior(3));
        assert_eq!(sq.locate(&ipt(1, 1)), Location::Vertex(2));
    }

    #[test]
    fn containment() {
        let sq = unit_square();
        let center_cell = square((1, 3), (1, 3), (1, 3));
        assert!(sq.contains_polygon(&center_cell));
        let protruding = square((1, 2), (0, 1), (1, 1));
        assert!(!sq.contains_polygon(&protruding));
        // Scaled copy toward a vertex.
        let third = square((0, 1), (0, 1), (1, 3));
        assert!(sq.contains_polygon(&third));
    }

    #[test]
    fn classify_center_and_corner_cells() {
        let center = square((1, 3), (1, 3), (1, 3));
        let corner00 = square((0, 1), (0, 1), (1, 3));
        let corner10 = square((2, 3), (0, 1), (1, 3));
        match classify_intersection(&center, &corner00) {
            IntersectionClass::SingleCommonVertex(p) => assert_eq!(p, pt((1, 3), (1, 3))),
            other => panic!("expected single common vertex, got {other:?}"),
        }
        assert_eq!(
            classify_intersection(&corner00, &corner10),
            IntersectionClass::Disjoint
        );
        let sq = unit_square();
        assert_eq!(classify_intersection(&sq, &sq), IntersectionClass::Other);
        // Symmetry of the classification.
        assert_eq!(
            classify_intersection(&corner00, &center),
            classify_intersection(&center, &corner00)
        );
    }

    #[test]
    fn classify_shared_edge_and_vertex_on_edge() {
        let left = square((0, 1), (0, 1), (1, 2));
        let right = square((1, 2), (0, 1), (1, 2));
        assert_eq!(classify_intersection(&left, &right), IntersectionClass::Other);
        // Vertex of one touching the edge interior of another: single point
        // but not a common vertex.
        let diamond = ConvexPolygon::new(vec![ipt(2, 1), ipt(3, 2), ipt(2, 3), ipt(1, 2)]).unwrap();
        let box2 = ConvexPolygon::new(vec![ipt(-2, 0), ipt(1, 0), ipt(1, 4), ipt(-2, 4)]).unwrap();
        assert_eq!(classify_intersection(&diamond, &box2), IntersectionClass::Other);
    }

    #[test]
    fn area_and_centroid() {
        let sq = unit_square();
        assert_eq!(sq.area_rational().unwrap(), q(1, 1));
        assert_eq!(sq.centroid(), pt((1, 2), (1, 2)));
        let cell = square((1, 3), (1, 3), (1, 3));
        assert_eq!(cell.area_rational().unwrap(), q(1, 9));
    }

    #[test]
    fn regular_structure_square_and_triangle() {
        let sq = unit_square();
        let info = sq.regular_structure().unwrap();
        assert_eq!(info.center, pt((1, 2), (1, 2)));
        assert_eq!(info.rotation.apply(&ipt(0, 0)), ipt(1, 0));
        // Equilateral triangle over the order-3 field.
        let tri = ConvexPolygon::new(vec![
            Scalar::one(3),
            Scalar::zeta_pow(3, 1),
            Scalar::zeta_pow(3, 2),
        ])
        .unwrap();
        let info = tri.regular_structure().unwrap();
        assert!(info.center.is_zero());
        // Non-regular rectangle.
        let rect = ConvexPolygon::new(vec![ipt(0, 0), ipt(2, 0), ipt(2, 1), ipt(0, 1)]).unwrap();
        assert!(rect.regular_structure().is_none());
    }

    #[test]
    fn regular_hexagon_over_order_three_field() {
        // zeta_6 = -zeta_3^2 lies in Q(zeta_3).
        let z6 = primitive_root_in_field(3, 6).unwrap();
        let mut vs = vec![Scalar::one(3)];
        for _ in 1..6 {
            vs.push(&z6 * vs.last().unwrap());
        }
        let hex = ConvexPolygon::new(vs).unwrap();
        assert!(hex.regular_structure().is_some());
    }

    #[test]
    fn angle_extremes_of_unit_square() {
        let sq = unit_square();
        let w = sq.min_angle_handle();
        assert_eq!(super::super::predicates::ceil_two_pi_over_angle(&w), 4);
    }

    #[test]
    fn mirror_image_stays_counterclockwise() {
        let sq = unit_square();
        let m = Similarity::new(
            Scalar::from_rational(4, q(1, 2)),
            Scalar::zero(4),
            true,
        );
        let img = sq.apply(&m);
        // Re-validate: construction from these vertices must succeed.
        assert!(ConvexPolygon::new(img.vertices().to_vec()).is_ok());
    }

    #[test]
    fn segment_clipping() {
        let sq = unit_square();
        // Diagonal of the square survives whole.
        let (lo, hi) = clip_segment_to_polygon(&ipt(0, 0), &ipt(1, 1), &sq).unwrap();
        assert_eq!(lo, Scalar::zero(4));
        assert_eq!(hi, Scalar::one(4));
        // A segment passing through gets trimmed.
        let (lo, hi) = clip_segment_to_polygon(&ipt(-1, 0), &ipt(2, 0), &sq).unwrap();
        assert_eq!(lo, Scalar::from_rational(4, q(1, 3)));
        assert_eq!(hi, Scalar::from_rational(4, q(2, 3)));
        // A segment missing the polygon.
        assert!(clip_segment_to_polygon(&ipt(-1, 2), &ipt(2, 5), &sq).is_none());
    }
}
