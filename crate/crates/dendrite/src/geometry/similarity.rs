//! Direct and mirror similarities of the plane with exact coefficients.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;

/// z -> a*z + b (direct) or z -> a*conj(z) + b (mirror), a != 0.
#[derive(Clone, PartialEq, Eq)]
pub struct Similarity {
    pub a: Scalar,
    pub b: Scalar,
    pub mirror: bool,
}

impl Similarity {
    pub fn new(a: Scalar, b: Scalar, mirror: bool) -> Self {
        assert!(!a.is_zero(), "similarity with zero linear coefficient");
        Similarity { a, b, mirror }
    }

    pub fn identity(order: u32) -> Self {
        Similarity::new(Scalar::one(order), Scalar::zero(order), false)
    }

    /// Rotation about `center` by the unit coefficient `r` (|r| = 1).
    pub fn rotation(center: &Scalar, r: Scalar) -> Self {
        let b = center - &(&r * center);
        Similarity::new(r, b, false)
    }

    /// Reflection through the line through `center` with e^(2*i*alpha) = u.
    pub fn reflection(center: &Scalar, u: Scalar) -> Self {
        let b = center - &(&u * &center.conj());
        Similarity::new(u, b, true)
    }

    pub fn order(&self) -> u32 {
        self.a.order()
    }

    pub fn apply(&self, p: &Scalar) -> Scalar {
        if self.mirror {
            &(&self.a * &p.conj()) + &self.b
        } else {
            &(&self.a * p) + &self.b
        }
    }

    /// self after other: (self.compose(other))(z) = self(other(z)).
    pub fn compose(&self, other: &Similarity) -> Similarity {
        let (ga, gb) = if self.mirror {
            (other.a.conj(), other.b.conj())
        } else {
            (other.a.clone(), other.b.clone())
        };
        Similarity {
            a: &self.a * &ga,
            b: &(&self.a * &gb) + &self.b,
            mirror: self.mirror ^ other.mirror,
        }
    }

    /// |a|^2 as an exact real field element.
    pub fn ratio_sq(&self) -> Scalar {
        self.a.abs_sq()
    }

    pub fn is_contraction(&self) -> bool {
        let one = Scalar::one(self.a.order());
        (&one - &self.ratio_sq()).re_sign() == Ordering::Greater
    }

    pub fn is_identity(&self) -> bool {
        !self.mirror && self.a == Scalar::one(self.a.order()) && self.b.is_zero()
    }

    /// The unique fixed point, if one exists.
    pub fn fixed_point(&self) -> Option<Scalar> {
        let one = Scalar::one(self.a.order());
        if self.mirror {
            // z = a*conj(z) + b  =>  z = (a*conj(b) + b) / (1 - |a|^2).
            let denom = &one - &self.a.abs_sq();
            if denom.is_zero() {
                return None;
            }
            let num = &(&self.a * &self.b.conj()) + &self.b;
            let z = num.div(&denom);
            debug_assert_eq!(self.apply(&z), z);
            Some(z)
        } else {
            let denom = &one - &self.a;
            if denom.is_zero() {
                return None;
            }
            Some(self.b.div(&denom))
        }
    }
}

impl fmt::Display for Similarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.mirror { "mirror" } else { "direct" };
        write!(f, "{kind} a={} b={}", self.a, self.b)
    }
}

impl fmt::Debug for Similarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Similarity({self})")
    }
}
