//! Exact planar geometry over cyclotomic coordinates: predicates,
//! similarities, strictly convex polygons and convex bodies.

pub mod body;
pub mod polygon;
pub mod predicates;
pub mod similarity;

pub use body::{body_meet, convex_hull, BodyMeet, ConvexBody};
pub use polygon::{
    classify_intersection, clip_segment_to_polygon, intersection_points, primitive_root_in_field,
    ConvexPolygon, IntersectionClass, Location, PolygonKey, RegularInfo,
};
pub use predicates::{
    ceil_two_pi_over_angle, cmp_angle, cross_2i, line_intersection, line_parameter, orient,
    point_on_segment, sector, segment_meet, SegMeet, Turn,
};
pub use similarity::Similarity;
