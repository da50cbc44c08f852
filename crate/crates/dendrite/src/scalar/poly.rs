//! Dense univariate polynomial arithmetic over the rationals.
//!
//! Coefficient vectors are little-endian (index = exponent). These helpers
//! back the quotient-ring arithmetic in [`super::Scalar`]; they are not a
//! general polynomial library.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Poly = Vec<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn degree(p: &Poly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub fn rem_monic(a: &Poly, m: &Poly) -> Poly {
    let dm = degree(m).expect("modulus must be nonzero");
    debug_assert!(m[dm].is_one(), "modulus must be monic");
    let mut r = a.clone();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let q = r[dr].clone();
        let shift = dr - dm;
        for (k, c) in m.iter().enumerate() {
            if !c.is_zero() {
                let t = &q * c;
                r[shift + k] -= t;
            }
        }
        trim(&mut r);
    }
    r
}

/// Exact quotient `a / b`; panics if the division is not exact.
pub fn div_exact(a: &Poly, b: &Poly) -> Poly {
    let db = degree(b).expect("divisor must be nonzero");
    let lead = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    let da = match degree(&r) {
        Some(d) => d,
        None => return Vec::new(),
    };
    assert!(da >= db, "division not exact");
    let mut q = vec![BigRational::zero(); da - db + 1];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        q[shift] = c.clone();
        for (k, bc) in b.iter().enumerate() {
            if !bc.is_zero() {
                let t = &c * bc;
                r[shift + k] -= t;
            }
        }
        trim(&mut r);
    }
    assert!(r.is_empty(), "division not exact");
    q
}

/// Modular inverse of `a` in Q[x]/(m) for monic irreducible `m`.
///
/// Extended Euclid; returns the canonical representative of degree < deg m.
pub fn inverse_mod(a: &Poly, m: &Poly) -> Poly {
    let mut r0 = m.clone();
    let mut r1 = rem_monic(a, m);
    assert!(degree(&r1).is_some(), "zero has no inverse");
    let mut t0: Poly = Vec::new();
    let mut t1: Poly = vec![BigRational::one()];
    while let Some(d1) = degree(&r1) {
        if d1 == 0 {
            // r1 is a nonzero constant: inverse = t1 / r1.
            let c = r1[0].clone();
            let mut out: Poly = t1.iter().map(|t| t / &c).collect();
            out = rem_monic(&out, m);
            return out;
        }
        let (q, r) = div_rem(&r0, &r1);
        let t_next = sub(&t0, &mul(&q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t_next;
    }
    unreachable!("modulus must be irreducible and a nonzero mod m");
}

pub fn sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("divisor must be nonzero");
    let lead = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    let da = match degree(&r) {
        Some(d) => d,
        None => return (Vec::new(), Vec::new()),
    };
    if da < db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); da - db + 1];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        q[shift] = c.clone();
        for (k, bc) in b.iter().enumerate() {
            if !bc.is_zero() {
                let t = &c * bc;
                r[shift + k] -= t;
            }
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// The N-th cyclotomic polynomial, monic with integer coefficients.
pub fn cyclotomic(n: u32) -> Poly {
    assert!(n >= 1);
    // x^n - 1 divided by the cyclotomic polynomials of all proper divisors.
    let mut p = vec![BigRational::zero(); n as usize + 1];
    p[0] = -BigRational::one();
    p[n as usize] = BigRational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = div_exact(&p, &cyclotomic(d));
        }
    }
    p
}

pub fn euler_phi(n: u32) -> usize {
    let mut result = n;
    let mut n_left = n;
    let mut p = 2;
    while p * p <= n_left {
        if n_left.is_multiple_of(p) {
            while n_left.is_multiple_of(p) {
                n_left /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n_left > 1 {
        result -= result / n_left;
    }
    result as usize
}
