//! Rational interval arithmetic and enclosures of roots of unity.
//!
//! Sign determination of nonzero field elements evaluates the element over
//! interval enclosures of cos(2*pi*j/N) and sin(2*pi*j/N), doubling the
//! working precision until the interval excludes zero. Exact zeroes are
//! certified beforehand from the canonical form, so the loop terminates.
//!
//! Endpoints are rounded outward to dyadic rationals after every enclosure
//! so coefficient sizes stay bounded.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn point(v: BigRational) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    /// Scale by an exact rational.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_negative() {
            Self { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            Self { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    pub fn widen(&self, pad: &BigRational) -> Self {
        Self { lo: &self.lo - pad, hi: &self.hi + pad }
    }

    /// Sign if the interval excludes zero, otherwise None.
    pub fn definite_sign(&self) -> Option<std::cmp::Ordering> {
        if self.lo.is_positive() {
            Some(std::cmp::Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(std::cmp::Ordering::Less)
        } else {
            None
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    /// Round endpoints outward to multiples of 2^-bits.
    pub fn round_dyadic(&self, bits: u32) -> Self {
        Self { lo: floor_dyadic(&self.lo, bits), hi: ceil_dyadic(&self.hi, bits) }
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn floor_dyadic(v: &BigRational, bits: u32) -> BigRational {
    let scaled = v * BigRational::from_integer(pow2(bits));
    BigRational::new(scaled.floor().to_integer(), pow2(bits))
}

fn ceil_dyadic(v: &BigRational, bits: u32) -> BigRational {
    let scaled = v * BigRational::from_integer(pow2(bits));
    BigRational::new(scaled.ceil().to_integer(), pow2(bits))
}

/// arctan(1/x) bracketed by consecutive partial sums of the alternating series.
fn atan_inv(x: i64, bits: u32) -> RatInterval {
    let threshold = BigRational::new(BigInt::one(), pow2(bits + 6));
    let x2 = BigRational::from_integer(BigInt::from(x * x));
    let mut term = BigRational::new(BigInt::one(), BigInt::from(x));
    let mut sum = BigRational::zero();
    let mut k: u64 = 0;
    loop {
        let contrib = &term / BigRational::from_integer(BigInt::from(2 * k + 1));
        let next_sum = if k.is_multiple_of(2) { &sum + &contrib } else { &sum - &contrib };
        if contrib < threshold {
            let (lo, hi) = if k.is_multiple_of(2) { (sum, next_sum) } else { (next_sum, sum) };
            return RatInterval { lo, hi };
        }
        sum = next_sum;
        term = &term / &x2;
        k += 1;
    }
}

/// pi via Machin's formula, rounded outward to 2^-(bits) dyadics.
pub fn pi_interval(bits: u32) -> RatInterval {
    let a = atan_inv(5, bits + 8);
    let b = atan_inv(239, bits + 8);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    let lo = &a.lo * &sixteen - &b.hi * &four;
    let hi = &a.hi * &sixteen - &b.lo * &four;
    RatInterval { lo, hi }.round_dyadic(bits)
}

/// cos and sin of the interval `x`, valid for |x| <= 7.
fn cos_sin_interval(x: &RatInterval, bits: u32) -> (RatInterval, RatInterval) {
    let two = BigRational::from_integer(BigInt::from(2));
    let mid = floor_dyadic(&(&(&x.lo + &x.hi) / &two), bits + 6);
    let half_width = {
        let hw_a = (&x.hi - &mid).abs();
        let hw_b = (&x.lo - &mid).abs();
        if hw_a > hw_b { hw_a } else { hw_b }
    };
    // Taylor sums at the midpoint; the derivative of cos and sin is bounded
    // by 1, so the half-width is an additive error bound.
    let threshold = BigRational::new(BigInt::one(), pow2(bits + 6));
    let mut cos_sum = BigRational::one();
    let mut sin_sum = mid.clone();
    let mut term = mid.clone(); // mid^k / k!
    let mut k: u64 = 1;
    let tail;
    loop {
        // term currently holds mid^k / k!
        let next = &term * &mid / BigRational::from_integer(BigInt::from(k + 1));
        let k1 = k + 1;
        if k1.is_multiple_of(2) {
            if k1.is_multiple_of(4) {
                cos_sum += &next;
            } else {
                cos_sum -= &next;
            }
        } else if k1 % 4 == 1 {
            sin_sum += &next;
        } else {
            sin_sum -= &next;
        }
        term = next;
        k = k1;
        // Tail bound: once |mid| < k/2, terms at least halve each step.
        let bound = term.abs() * &two;
        if k >= 16 && bound < threshold {
            tail = bound;
            break;
        }
    }
    let pad = &tail + &half_width;
    let cos = RatInterval::point(cos_sum).widen(&pad).round_dyadic(bits);
    let sin = RatInterval::point(sin_sum).widen(&pad).round_dyadic(bits);
    (cos, sin)
}

/// Enclosures of zeta_N^j = exp(2*pi*i*j/N) for j = 0..count-1.
fn root_enclosures(order: u32, count: usize, bits: u32) -> Vec<(RatInterval, RatInterval)> {
    let pi = pi_interval(bits + 8);
    (0..count)
        .map(|j| {
            let f = BigRational::new(BigInt::from(2 * j as i64), BigInt::from(order));
            let x = pi.scale(&f);
            cos_sin_interval(&x, bits)
        })
        .collect()
}

type Cache = Mutex<HashMap<(u32, u32), Arc<Vec<(RatInterval, RatInterval)>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn cached_root_enclosures(order: u32, count: usize, bits: u32) -> Arc<Vec<(RatInterval, RatInterval)>> {
    let mut map = cache().lock().expect("enclosure cache poisoned");
    map.entry((order, bits))
        .or_insert_with(|| Arc::new(root_enclosures(order, count, bits)))
        .clone()
}

/// Precision ladder used by adaptive sign evaluation.
pub const PRECISION_LADDER: [u32; 8] = [48, 96, 192, 384, 768, 1536, 3072, 6144];
