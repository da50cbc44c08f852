//! Exact arithmetic in a cyclotomic number field.
//!
//! A [`Scalar`] is an element of Q(zeta_N) stored as the canonical
//! representative of degree < phi(N) modulo the N-th cyclotomic polynomial,
//! interpreted as a complex number with zeta_N = exp(2*pi*i/N). Equality,
//! zero tests and conjugation are exact; signs of real and imaginary parts
//! are decided exactly (canonical zero test first, then adaptive interval
//! evaluation of the roots of unity).
//!
//! All planar coordinates in this crate are Scalars, which is what makes
//! the geometric predicates decidable.

pub mod interval;
pub mod poly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use interval::{cached_root_enclosures, RatInterval, PRECISION_LADDER};
use poly::Poly;

struct FieldData {
    degree: usize,
    modulus: Poly,
}

fn field_data(order: u32) -> Arc<FieldData> {
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    let mut map = FIELDS
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .expect("field cache poisoned");
    map.entry(order)
        .or_insert_with(|| {
            let modulus = poly::cyclotomic(order);
            let degree = poly::degree(&modulus).expect("cyclotomic polynomial is nonzero");
            Arc::new(FieldData { degree, modulus })
        })
        .clone()
}

/// Canonical element of Q(zeta_N); the coordinate type for all geometry.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

/// Exact comparison key: (numerator, denominator) per canonical coefficient.
pub type ScalarKey = Vec<(BigInt, BigInt)>;

impl Scalar {
    fn from_reduced(order: u32, mut coeffs: Poly) -> Self {
        let degree = field_data(order).degree;
        coeffs.resize(degree, BigRational::zero());
        Scalar { order, coeffs }
    }

    /// Build from raw polynomial coefficients in zeta_N (any length), reducing
    /// modulo the cyclotomic polynomial.
    pub fn from_poly(order: u32, coeffs: Vec<BigRational>) -> Self {
        let data = field_data(order);
        let reduced = poly::rem_monic(&coeffs, &data.modulus);
        Scalar::from_reduced(order, reduced)
    }

    pub fn zero(order: u32) -> Self {
        Scalar::from_reduced(order, Vec::new())
    }

    pub fn one(order: u32) -> Self {
        Scalar::from_rational(order, BigRational::from_integer(BigInt::from(1)))
    }

    pub fn from_rational(order: u32, q: BigRational) -> Self {
        Scalar::from_reduced(order, vec![q])
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Scalar::from_rational(order, BigRational::from_integer(BigInt::from(n)))
    }

    /// zeta_N^k for any integer exponent.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::from_integer(BigInt::from(1));
        Scalar::from_poly(order, coeffs)
    }

    /// The imaginary unit, available when 4 divides the field order.
    pub fn unit_imag(order: u32) -> Option<Self> {
        order.is_multiple_of(4).then(|| Scalar::zeta_pow(order, order as i64 / 4))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Some(q) iff the element is the rational number q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    /// Complex conjugate (the field automorphism zeta -> zeta^(N-1)).
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut raw = vec![BigRational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(n - j) % n] += c;
            }
        }
        Scalar::from_poly(self.order, raw)
    }

    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "zero has no inverse");
        if let Some(q) = self.as_rational() {
            return Scalar::from_rational(self.order, q.recip());
        }
        let data = field_data(self.order);
        let inv = poly::inverse_mod(&self.coeffs, &data.modulus);
        Scalar::from_reduced(self.order, inv)
    }

    pub fn div(&self, other: &Scalar) -> Self {
        self * &other.inverse()
    }

    /// Squared modulus z * conj(z); a real element of the field.
    pub fn abs_sq(&self) -> Self {
        self * &self.conj()
    }

    /// Twice the real part, as a field element.
    pub fn re_twice(&self) -> Self {
        self + &self.conj()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Scalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn div_int(&self, n: i64) -> Self {
        self.scale(&BigRational::new(BigInt::from(1), BigInt::from(n)))
    }

    /// Interval enclosure of the complex value at the given dyadic precision.
    pub fn evaluate(&self, bits: u32) -> (RatInterval, RatInterval) {
        let degree = self.coeffs.len();
        let roots = cached_root_enclosures(self.order, degree, bits);
        let mut re = RatInterval::zero();
        let mut im = RatInterval::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            re = re.add(&roots[j].0.scale(c));
            im = im.add(&roots[j].1.scale(c));
        }
        (re, im)
    }

    fn interval_sign(&self, pick_im: bool) -> Ordering {
        for bits in PRECISION_LADDER {
            let (re, im) = self.evaluate(bits);
            let iv = if pick_im { im } else { re };
            if let Some(s) = iv.definite_sign() {
                return s;
            }
        }
        panic!("sign determination exhausted the precision ladder on a nonzero element");
    }

    /// Exact sign of the real part.
    pub fn re_sign(&self) -> Ordering {
        let w = self.re_twice();
        if w.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = w.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        w.interval_sign(false)
    }

    /// Exact sign of the imaginary part.
    pub fn im_sign(&self) -> Ordering {
        let w = self - &self.conj(); // 2i Im(z)
        if w.is_zero() {
            return Ordering::Equal;
        }
        if field_data(self.order).degree == 2 {
            // Quadratic fields (orders 3, 4, 6): Im(z) = c1 * Im(zeta), Im(zeta) > 0.
            return self.coeffs[1].cmp(&BigRational::zero());
        }
        if self.order.is_multiple_of(4) {
            // Divide by i: w/i = 2 Im(z) is real, often rational.
            let u = &w * &Scalar::zeta_pow(self.order, 3 * self.order as i64 / 4);
            if let Some(q) = u.as_rational() {
                return q.cmp(&BigRational::zero());
            }
            return u.interval_sign(false);
        }
        self.interval_sign(true)
    }

    /// True when the element equals its own conjugate.
    pub fn is_real(&self) -> bool {
        (self - &self.conj()).is_zero()
    }

    /// Exact comparison of two real elements (panics if either is not real
    /// in debug builds; callers only compare certified-real quantities).
    pub fn cmp_real(&self, other: &Scalar) -> Ordering {
        debug_assert!(self.is_real() && other.is_real());
        (self - other).re_sign()
    }

    /// Lexicographic order by (Re, Im); a total order on field elements.
    pub fn cmp_lex(&self, other: &Scalar) -> Ordering {
        let d = self - other;
        match d.re_sign() {
            Ordering::Equal => d.im_sign(),
            o => o,
        }
    }

    pub fn key(&self) -> ScalarKey {
        self.coeffs
            .iter()
            .map(|c| (c.numer().clone(), c.denom().clone()))
            .collect()
    }

    /// Approximate complex value; for rendering and diagnostics only.
    pub fn to_f64(&self) -> (f64, f64) {
        if let Some(q) = self.as_rational() {
            return (q.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        let (re, im) = self.evaluate(64);
        (
            re.midpoint().to_f64().unwrap_or(f64::NAN),
            im.midpoint().to_f64().unwrap_or(f64::NAN),
        )
    }
}

fn assert_same_order(a: &Scalar, b: &Scalar) {
    assert_eq!(a.order, b.order, "mixed field orders in scalar arithmetic");
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        assert_same_order(self, rhs);
        Scalar {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        assert_same_order(self, rhs);
        Scalar {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        assert_same_order(self, rhs);
        let prod = poly::mul(&self.coeffs, &rhs.coeffs);
        Scalar::from_poly(self.order, prod)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Scalar {
    /// Canonical literal form, `poly(c0, c1, ...)` with trailing zeroes trimmed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self
            .coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |i| i);
        write!(f, "poly(")?;
        for (j, c) in self.coeffs[..=last].iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[{}]{}", self.order, self)
    }
}
