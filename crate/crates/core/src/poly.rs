//! Exact univariate polynomial arithmetic over Z and Q.
//!
//! Coefficient vectors are dense, constant term first. Everything here is
//! computed in arbitrary-precision rational arithmetic: discriminants via
//! the resultant recursion, real-root counts via Sturm sequences, and
//! squarefreeness via a rational gcd. No floating point enters any of
//! these paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is empty or zero")]
    Zero,
    #[error("polynomial has degree 0; a positive degree is required")]
    DegreeZero,
    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(BigInt),
    #[error("polynomial is not squarefree: gcd(f, f') has degree {0}")]
    NotSquarefree(usize),
}

/// Degree of a coefficient vector, ignoring trailing zeros.
/// Returns None for the zero polynomial.
pub fn degree(coeffs: &[BigInt]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

pub fn is_monic(coeffs: &[BigInt]) -> bool {
    match degree(coeffs) {
        Some(d) => coeffs[d].is_one(),
        None => false,
    }
}

/// Rational polynomial, dense, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
struct QPoly(Vec<BigRational>);

impl QPoly {
    fn from_ints(coeffs: &[BigInt]) -> Self {
        let mut v: Vec<BigRational> = coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        QPoly(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn deg(&self) -> usize {
        debug_assert!(!self.is_zero());
        self.0.len() - 1
    }

    fn lc(&self) -> &BigRational {
        self.0.last().expect("leading coefficient of zero poly")
    }

    fn derivative(&self) -> QPoly {
        if self.0.len() <= 1 {
            return QPoly(vec![]);
        }
        let v = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        QPoly(v)
    }

    fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    fn normalize(mut self) -> QPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    /// Euclidean remainder of self by rhs (rhs nonzero).
    fn rem(&self, rhs: &QPoly) -> QPoly {
        assert!(!rhs.is_zero());
        let mut r = self.0.clone();
        let dr = rhs.deg();
        let lc = rhs.lc();
        while r.len() > dr {
            let k = r.len() - 1;
            let q = &r[k] / lc;
            if !q.is_zero() {
                for i in 0..dr {
                    let t = &q * &rhs.0[i];
                    r[k - dr + i] -= t;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        QPoly(r).normalize()
    }

    /// Sign of the polynomial at +infinity (`dir = +1`) or -infinity (-1).
    fn sign_at_infinity(&self, dir: i32) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let mut s = if self.lc().is_positive() { 1 } else { -1 };
        if dir < 0 && self.deg() % 2 == 1 {
            s = -s;
        }
        s
    }
}

/// Resultant of two rational polynomials by the Euclidean recursion
///   Res(f, g) = lc(g)^(deg f - deg r) * (-1)^(deg f * deg g) * Res(g, r).
fn resultant(f: &QPoly, g: &QPoly) -> BigRational {
    if f.is_zero() || g.is_zero() {
        return BigRational::zero();
    }
    if f.deg() < g.deg() {
        let sign = if (f.deg() * g.deg()) % 2 == 1 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        return sign * resultant(g, f);
    }
    if g.deg() == 0 {
        return pow_rat(g.lc(), f.deg());
    }
    let r = f.rem(g);
    if r.is_zero() {
        return BigRational::zero();
    }
    let sign = if (f.deg() * g.deg()) % 2 == 1 {
        -BigRational::one()
    } else {
        BigRational::one()
    };
    sign * pow_rat(g.lc(), f.deg() - r.deg()) * resultant(g, &r)
}

fn pow_rat(base: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

/// Exact discriminant of a monic integer polynomial of degree >= 1:
/// disc(f) = (-1)^(n(n-1)/2) * Res(f, f').
pub fn poly_discriminant(coeffs: &[BigInt]) -> Result<BigInt, PolyError> {
    let d = degree(coeffs).ok_or(PolyError::Zero)?;
    if d == 0 {
        return Err(PolyError::DegreeZero);
    }
    if !is_monic(coeffs) {
        return Err(PolyError::NotMonic(coeffs[d].clone()));
    }
    if d == 1 {
        return Ok(BigInt::one());
    }
    let f = QPoly::from_ints(coeffs);
    let fp = f.derivative();
    let res = resultant(&f, &fp);
    let res = if (d * (d - 1) / 2) % 2 == 1 { -res } else { res };
    debug_assert!(res.is_integer(), "discriminant of integer poly not integral");
    Ok(res.to_integer())
}

/// True iff gcd(f, f') is a nonzero constant.
pub fn is_squarefree(coeffs: &[BigInt]) -> bool {
    let Some(d) = degree(coeffs) else { return false };
    if d == 0 {
        return true;
    }
    let f = QPoly::from_ints(coeffs);
    let g = rational_gcd(&f, &f.derivative());
    !g.is_zero() && g.deg() == 0
}

fn rational_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a
}

/// Number of real roots of a monic squarefree integer polynomial, counted
/// by the sign variations of its Sturm sequence at -infinity and +infinity,
/// together with the complex-pair count: returns (r1, r2) with
/// r1 + 2*r2 = deg f.
pub fn signature(coeffs: &[BigInt]) -> Result<(u32, u32), PolyError> {
    let d = degree(coeffs).ok_or(PolyError::Zero)?;
    if d == 0 {
        return Err(PolyError::DegreeZero);
    }
    if !is_monic(coeffs) {
        return Err(PolyError::NotMonic(coeffs[d].clone()));
    }
    let f = QPoly::from_ints(coeffs);
    let fp = f.derivative();
    let g = rational_gcd(&f, &fp);
    if g.deg() > 0 {
        return Err(PolyError::NotSquarefree(g.deg()));
    }

    // Sturm chain: p0 = f, p1 = f', p_{k+1} = -(p_{k-1} mod p_k).
    let mut chain = vec![f, fp];
    loop {
        let k = chain.len();
        let r = chain[k - 2].rem(&chain[k - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }

    let variations = |dir: i32| -> u32 {
        let mut count = 0;
        let mut prev = 0;
        for p in &chain {
            let s = p.sign_at_infinity(dir);
            if s != 0 {
                if prev != 0 && s != prev {
                    count += 1;
                }
                prev = s;
            }
        }
        count
    };

    let r1 = variations(-1) as i64 - variations(1) as i64;
    debug_assert!(r1 >= 0 && (d as i64 - r1) % 2 == 0);
    let r1 = r1 as u32;
    let r2 = (d as u32 - r1) / 2;
    Ok((r1, r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> Vec<BigInt> {
        coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn signature_known_fields() {
        // x^2 + 1: no real roots.
        assert_eq!(signature(&p(&[1, 0, 1])).unwrap(), (0, 1));
        // x^2 - x - 1: roots (1 +- sqrt 5)/2, both real.
        assert_eq!(signature(&p(&[-1, -1, 1])).unwrap(), (2, 0));
        // x^3 - x - 1: discriminant -23 < 0 forces exactly one real root.
        assert_eq!(signature(&p(&[-1, -1, 0, 1])).unwrap(), (1, 1));
        // Degree 1.
        assert_eq!(signature(&p(&[0, 1])).unwrap(), (1, 0));
        // x^4 + 1: totally complex.
        assert_eq!(signature(&p(&[1, 0, 0, 0, 1])).unwrap(), (0, 2));
        // x^3 - 2: one real cube root.
        assert_eq!(signature(&p(&[-2, 0, 0, 1])).unwrap(), (1, 1));
        // x^4 - x^3 - x^2 + x + 1 (disc 117 > 0, no real roots).
        assert_eq!(signature(&p(&[1, 1, -1, -1, 1])).unwrap(), (0, 2));
    }

    #[test]
    fn signature_rejects_bad_input() {
        assert_eq!(
            signature(&p(&[1, 0, 2])).unwrap_err(),
            PolyError::NotMonic(BigInt::from(2))
        );
        // (x-1)^2 = x^2 - 2x + 1 is not squarefree.
        assert_eq!(
            signature(&p(&[1, -2, 1])).unwrap_err(),
            PolyError::NotSquarefree(1)
        );
        assert_eq!(signature(&p(&[5])).unwrap_err(), PolyError::DegreeZero);
        assert_eq!(signature(&p(&[])).unwrap_err(), PolyError::Zero);
    }

    #[test]
    fn discriminant_known_values() {
        // Quadratics: b^2 - 4c for x^2 + bx + c.
        assert_eq!(poly_discriminant(&p(&[1, 0, 1])).unwrap(), BigInt::from(-4));
        assert_eq!(poly_discriminant(&p(&[-1, -1, 1])).unwrap(), BigInt::from(5));
        // Depressed cubic x^3 + px + q: -4p^3 - 27q^2, here p = q = -1.
        assert_eq!(
            poly_discriminant(&p(&[-1, -1, 0, 1])).unwrap(),
            BigInt::from(-23)
        );
        // x^4 + 1 has discriminant 256.
        assert_eq!(
            poly_discriminant(&p(&[1, 0, 0, 0, 1])).unwrap(),
            BigInt::from(256)
        );
        // Degree 1 convention.
        assert_eq!(poly_discriminant(&p(&[7, 1])).unwrap(), BigInt::one());
        // Repeated root -> 0: (x-1)^2.
        assert_eq!(poly_discriminant(&p(&[1, -2, 1])).unwrap(), BigInt::zero());
    }

    #[test]
    fn discriminant_rejects_degree_zero() {
        assert_eq!(poly_discriminant(&p(&[3])).unwrap_err(), PolyError::DegreeZero);
    }

    #[test]
    fn squarefree_check() {
        assert!(is_squarefree(&p(&[1, 0, 1])));
        assert!(!is_squarefree(&p(&[1, -2, 1])));
        assert!(!is_squarefree(&p(&[0, 0, 1]))); // x^2
    }
}
