//! Exact planar predicates over field points.
//!
//! Points are complex numbers in the working cyclotomic field. The cross
//! product of u and v appears as the purely imaginary element
//! conj(u)*v - u*conj(v) = 2i*cross(u, v); its sign is read off exactly and
//! ratios of two such elements are exact real field elements, which is all
//! the constructions below need.

use std::cmp::Ordering;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Turn {
    Left,
    Collinear,
    Right,
}

/// Orientation of c relative to the directed line a -> b.
pub fn orient(a: &Scalar, b: &Scalar, c: &Scalar) -> Turn {
    let u = b - a;
    let v = c - a;
    match (&u.conj() * &v).im_sign() {
        Ordering::Greater => Turn::Left,
        Ordering::Equal => Turn::Collinear,
        Ordering::Less => Turn::Right,
    }
}

/// 2i * cross(u, v); purely imaginary.
pub fn cross_2i(u: &Scalar, v: &Scalar) -> Scalar {
    &(&u.conj() * v) - &(u * &v.conj())
}

/// Intersection point of the lines a1-a2 and b1-b2 (must not be parallel).
pub fn line_intersection(a1: &Scalar, a2: &Scalar, b1: &Scalar, b2: &Scalar) -> Scalar {
    let da = a2 - a1;
    let db = b2 - b1;
    let denom = cross_2i(&da, &db);
    assert!(!denom.is_zero(), "parallel lines have no unique intersection");
    let num = cross_2i(&(b1 - a1), &db);
    let t = num.div(&denom); // exact real ratio
    a1 + &(&da * &t)
}

/// Parameter t with p = a + t*(b - a), for p on the line through a and b.
pub fn line_parameter(p: &Scalar, a: &Scalar, b: &Scalar) -> Scalar {
    let d = b - a;
    debug_assert!(!d.is_zero());
    let t = (p - a).div(&d);
    debug_assert!(t.is_real(), "point is not on the line");
    t
}

/// Closed-segment membership.
pub fn point_on_segment(p: &Scalar, a: &Scalar, b: &Scalar) -> bool {
    if orient(a, b, p) != Turn::Collinear {
        return false;
    }
    if a == b {
        return p == a;
    }
    let t = line_parameter(p, a, b);
    t.re_sign() != Ordering::Less && (&t - &Scalar::one(t.order())).re_sign() != Ordering::Greater
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegMeet {
    Empty,
    Point(Scalar),
    /// A positive-length common subsegment.
    Overlap(Scalar, Scalar),
}

/// Exact intersection of closed segments p1-p2 and q1-q2.
pub fn segment_meet(p1: &Scalar, p2: &Scalar, q1: &Scalar, q2: &Scalar) -> SegMeet {
    debug_assert!(p1 != p2 && q1 != q2, "degenerate segment");
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    if o1 == Turn::Collinear && o2 == Turn::Collinear {
        // Shared line: intersect parameter ranges along p1 -> p2.
        let one = Scalar::one(p1.order());
        let zero = Scalar::zero(p1.order());
        let tq1 = line_parameter(q1, p1, p2);
        let tq2 = line_parameter(q2, p1, p2);
        let (qlo, qhi) = if tq1.cmp_real(&tq2) == Ordering::Greater {
            (tq2, tq1)
        } else {
            (tq1, tq2)
        };
        let lo = if qlo.cmp_real(&zero) == Ordering::Less { zero } else { qlo };
        let hi = if qhi.cmp_real(&one) == Ordering::Greater { one } else { qhi };
        let d = p2 - p1;
        match lo.cmp_real(&hi) {
            Ordering::Greater => SegMeet::Empty,
            Ordering::Equal => SegMeet::Point(p1 + &(&d * &lo)),
            Ordering::Less => SegMeet::Overlap(p1 + &(&d * &lo), p1 + &(&d * &hi)),
        }
    } else {
        let o3 = orient(q1, q2, p1);
        let o4 = orient(q1, q2, p2);
        let opposed = |a: Turn, b: Turn| !(a == b && a != Turn::Collinear);
        if opposed(o1, o2) && opposed(o3, o4) {
            SegMeet::Point(line_intersection(p1, p2, q1, q2))
        } else {
            SegMeet::Empty
        }
    }
}

/// Angular sector of a nonzero vector: 0 = +x ray, 1 = open Q1, 2 = +y ray,
/// and so on counterclockwise up to 7 = open Q4.
pub fn sector(v: &Scalar) -> u8 {
    let re = v.re_sign();
    let im = v.im_sign();
    match (re, im) {
        (Ordering::Greater, Ordering::Equal) => 0,
        (Ordering::Greater, Ordering::Greater) => 1,
        (Ordering::Equal, Ordering::Greater) => 2,
        (Ordering::Less, Ordering::Greater) => 3,
        (Ordering::Less, Ordering::Equal) => 4,
        (Ordering::Less, Ordering::Less) => 5,
        (Ordering::Equal, Ordering::Less) => 6,
        (Ordering::Greater, Ordering::Less) => 7,
        (Ordering::Equal, Ordering::Equal) => panic!("sector of the zero vector"),
    }
}

/// Smallest integer k with k*theta >= 2*pi, where theta = arg(w) in (0, pi).
///
/// Walks the powers of w, counting the step at which the accumulated angle
/// passes (or lands exactly on) the positive real axis. Each step advances
/// by less than pi, so a wrap is exactly a drop in the sector index.
pub fn ceil_two_pi_over_angle(w: &Scalar) -> usize {
    assert_eq!(w.im_sign(), Ordering::Greater, "angle must lie in (0, pi)");
    let cap = 1_000_000;
    let mut cur = w.clone();
    let mut k = 1usize;
    loop {
        let next = &cur * w;
        if sector(&next) < sector(&cur) {
            return k + 1;
        }
        cur = next;
        k += 1;
        assert!(k < cap, "angle too small: winding count exceeded cap");
    }
}

/// Compare two angles in (0, pi) given as handles w with arg(w) = angle.
///
/// cos is strictly decreasing on (0, pi), so compare Re(w)/|w| exactly by
/// sign cases and squaring.
pub fn cmp_angle(w1: &Scalar, w2: &Scalar) -> Ordering {
    debug_assert!(w1.im_sign() == Ordering::Greater && w2.im_sign() == Ordering::Greater);
    let half = num_rational::BigRational::new(1.into(), 2.into());
    let r1 = w1.re_twice().scale(&half);
    let r2 = w2.re_twice().scale(&half);
    let s1 = r1.re_sign();
    let s2 = r2.re_sign();
    match (s1, s2) {
        (Ordering::Greater, Ordering::Less | Ordering::Equal) => return Ordering::Less,
        (Ordering::Equal, Ordering::Less) => return Ordering::Less,
        (Ordering::Less | Ordering::Equal, Ordering::Greater) => return Ordering::Greater,
        (Ordering::Less, Ordering::Equal) => return Ordering::Greater,
        (Ordering::Equal, Ordering::Equal) => return Ordering::Equal,
        _ => {}
    }
    // Same strict sign s: compare Re^2 * |other|^2 cross-wise.
    let lhs = &(&r1 * &r1) * &w2.abs_sq();
    let rhs = &(&r2 * &r2) * &w1.abs_sq();
    let cmp_sq = lhs.cmp_real(&rhs);
    if s1 == Ordering::Greater {
        // Larger cos means smaller angle.
        cmp_sq.reverse()
    } else {
        cmp_sq
    }
}
