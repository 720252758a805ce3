//! Number fields at desk scale: certified invariants with exact
//! cross-checks, prime splitting, rigorously enclosed Dedekind zeta values,
//! ideal counting, and an independent class-number oracle for imaginary
//! quadratic fields.
//!
//! A [`NumberField`] is built only through [`validate_field`], which checks
//! every structural invariant it can recompute exactly (signature by Sturm
//! sequence, discriminant by resultant, index square). The analytic
//! invariants h_k, Reg_k and omega_k are certified inputs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::BoundedValue;
use crate::modp::{self, is_prime_u64, primes_up_to, FpPoly};
use crate::poly;

pub use crate::poly::{is_squarefree, poly_discriminant, signature};

/// A prime of k above the rational prime p, with ramification index e,
/// residue degree f and norm p^f.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub norm: u128,
}

impl PrimeIdeal {
    pub fn new(p: u64, e: u32, f: u32) -> Result<Self, SplitError> {
        let norm = (p as u128)
            .checked_pow(f)
            .ok_or(SplitError::NormOverflow { p, f })?;
        Ok(PrimeIdeal { p, e, f, norm })
    }
}

/// Raw corpus record: everything a field entry certifies, before
/// validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub label: String,
    /// Monic integer polynomial, constant term first.
    pub poly: Vec<i64>,
    pub r1: u32,
    pub r2: u32,
    /// Absolute value of the field discriminant.
    pub d_k: u64,
    /// Certified class number.
    pub h_k: u64,
    /// Certified regulator (1 when the unit rank is 0).
    pub reg_k: f64,
    /// Certified number of roots of unity.
    pub omega_k: u32,
    /// Certified splitting data (e, f) pairs for primes dividing the index
    /// [O_k : Z[theta]], where the Dedekind criterion does not apply.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bad_prime_splittings: BTreeMap<u64, Vec<(u32, u32)>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum FieldViolation {
    #[error("polynomial must be nonzero of degree >= 1")]
    BadPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("degree mismatch: poly has degree {poly_degree}, but r1 + 2*r2 = {signature_degree}")]
    DegreeMismatch {
        poly_degree: u32,
        signature_degree: u32,
    },
    #[error("signature mismatch: Sturm count gives ({got_r1}, {got_r2}), record says ({r1}, {r2})")]
    SignatureMismatch {
        r1: u32,
        r2: u32,
        got_r1: u32,
        got_r2: u32,
    },
    #[error("discriminant sign mismatch: disc(f) = {disc} but r2 = {r2} requires sign {expected_sign}")]
    DiscriminantSign {
        disc: BigInt,
        r2: u32,
        expected_sign: i8,
    },
    #[error("discriminant mismatch: |disc(f)| = {disc_abs} is not a multiple of d_k = {d_k}")]
    DiscriminantMismatch { disc_abs: BigInt, d_k: u64 },
    #[error("non-square index: |disc(f)|/d_k = {ratio} is not a perfect square")]
    NonSquareIndex { ratio: BigInt },
    #[error("class number must be >= 1")]
    BadClassNumber,
    #[error("omega_k must be even and >= 2, got {0}")]
    BadRootsOfUnity(u32),
    #[error("regulator must be positive and finite, got {0}")]
    BadRegulator(f64),
    #[error("d_k must be >= 1")]
    BadDiscriminant,
    #[error("bad_prime_splittings[{p}]: {reason}")]
    BadSplittingOverride { p: u64, reason: String },
}

/// A validated number field. Construct via [`validate_field`].
#[derive(Debug, Clone, PartialEq)]
pub struct NumberField {
    label: String,
    poly: Vec<BigInt>,
    degree: u32,
    r1: u32,
    r2: u32,
    d_k: u64,
    h_k: u64,
    reg_k: f64,
    omega_k: u32,
    index: BigInt,
    index_sq: BigInt,
    bad_prime_splittings: BTreeMap<u64, Vec<(u32, u32)>>,
}

impl NumberField {
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn r1(&self) -> u32 {
        self.r1
    }
    pub fn r2(&self) -> u32 {
        self.r2
    }
    pub fn d_k(&self) -> u64 {
        self.d_k
    }
    pub fn h_k(&self) -> u64 {
        self.h_k
    }
    pub fn reg_k(&self) -> f64 {
        self.reg_k
    }
    pub fn omega_k(&self) -> u32 {
        self.omega_k
    }
    /// The index [O_k : Z[theta]].
    pub fn index(&self) -> &BigInt {
        &self.index
    }
    /// Its square, |disc(f)| / d_k.
    pub fn index_sq(&self) -> &BigInt {
        &self.index_sq
    }
    pub fn bad_prime_splittings(&self) -> &BTreeMap<u64, Vec<(u32, u32)>> {
        &self.bad_prime_splittings
    }
    pub fn unit_rank(&self) -> u32 {
        self.r1 + self.r2 - 1
    }
    pub fn is_imaginary_quadratic(&self) -> bool {
        self.degree == 2 && self.r2 == 1
    }
    /// Signed field discriminant, -d_k for imaginary quadratic fields.
    pub fn signed_discriminant(&self) -> i64 {
        let sign = if self.r2.is_multiple_of(2) { 1 } else { -1 };
        sign * self.d_k as i64
    }

    fn divides_index(&self, p: u64) -> bool {
        (&self.index % BigInt::from(p)).is_zero()
    }
}

/// Validate a raw corpus record against every invariant this crate can
/// recompute exactly. Returns the validated field or the full list of
/// violated invariants.
pub fn validate_field(spec: &FieldSpec) -> Result<NumberField, Vec<FieldViolation>> {
    let mut errs = Vec::new();

    if spec.h_k < 1 {
        errs.push(FieldViolation::BadClassNumber);
    }
    if spec.omega_k < 2 || !spec.omega_k.is_multiple_of(2) {
        errs.push(FieldViolation::BadRootsOfUnity(spec.omega_k));
    }
    if !(spec.reg_k > 0.0 && spec.reg_k.is_finite()) {
        errs.push(FieldViolation::BadRegulator(spec.reg_k));
    }
    if spec.d_k < 1 {
        errs.push(FieldViolation::BadDiscriminant);
    }

    let poly: Vec<BigInt> = spec.poly.iter().map(|&c| BigInt::from(c)).collect();
    let deg = match poly::degree(&poly) {
        Some(d) if d >= 1 => d as u32,
        _ => {
            errs.push(FieldViolation::BadPolynomial);
            return Err(errs);
        }
    };
    if !poly::is_monic(&poly) {
        errs.push(FieldViolation::NotMonic);
        return Err(errs);
    }
    if !poly::is_squarefree(&poly) {
        errs.push(FieldViolation::NotSquarefree);
        return Err(errs);
    }

    let signature_degree = spec.r1 + 2 * spec.r2;
    if deg != signature_degree {
        errs.push(FieldViolation::DegreeMismatch {
            poly_degree: deg,
            signature_degree,
        });
    }

    let (got_r1, got_r2) = poly::signature(&poly).expect("checked monic squarefree");
    if (got_r1, got_r2) != (spec.r1, spec.r2) {
        errs.push(FieldViolation::SignatureMismatch {
            r1: spec.r1,
            r2: spec.r2,
            got_r1,
            got_r2,
        });
    }

    let disc = poly::poly_discriminant(&poly).expect("checked degree >= 1");
    let expected_sign: i8 = if spec.r2.is_multiple_of(2) { 1 } else { -1 };
    let sign_ok = if expected_sign == 1 {
        disc.is_positive()
    } else {
        disc.is_negative()
    };
    if !sign_ok {
        errs.push(FieldViolation::DiscriminantSign {
            disc: disc.clone(),
            r2: spec.r2,
            expected_sign,
        });
    }

    let disc_abs = disc.abs();
    let mut index = BigInt::from(1);
    let mut index_sq = BigInt::from(1);
    if spec.d_k >= 1 {
        let dk = BigInt::from(spec.d_k);
        if (&disc_abs % &dk).is_zero() {
            let ratio = &disc_abs / &dk;
            let root = ratio.sqrt();
            if &root * &root == ratio {
                index = root;
                index_sq = ratio;
            } else {
                errs.push(FieldViolation::NonSquareIndex { ratio });
            }
        } else {
            errs.push(FieldViolation::DiscriminantMismatch {
                disc_abs: disc_abs.clone(),
                d_k: spec.d_k,
            });
        }
    }

    for (&p, splitting) in &spec.bad_prime_splittings {
        if !is_prime_u64(p) {
            errs.push(FieldViolation::BadSplittingOverride {
                p,
                reason: "key is not a rational prime".into(),
            });
            continue;
        }
        if !(&index % BigInt::from(p)).is_zero() {
            errs.push(FieldViolation::BadSplittingOverride {
                p,
                reason: "prime does not divide the index; Dedekind splitting applies".into(),
            });
        }
        let total: u64 = splitting
            .iter()
            .map(|&(e, f)| e as u64 * f as u64)
            .sum();
        if splitting.iter().any(|&(e, f)| e < 1 || f < 1) {
            errs.push(FieldViolation::BadSplittingOverride {
                p,
                reason: "entries must have e >= 1 and f >= 1".into(),
            });
        } else if total != deg as u64 {
            errs.push(FieldViolation::BadSplittingOverride {
                p,
                reason: format!("sum of e*f is {total}, expected the degree {deg}"),
            });
        }
    }

    if !errs.is_empty() {
        return Err(errs);
    }

    Ok(NumberField {
        label: spec.label.clone(),
        poly,
        degree: deg,
        r1: spec.r1,
        r2: spec.r2,
        d_k: spec.d_k,
        h_k: spec.h_k,
        reg_k: spec.reg_k,
        omega_k: spec.omega_k,
        index,
        index_sq,
        bad_prime_splittings: spec.bad_prime_splittings.clone(),
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SplitError {
    #[error("{0} is not a rational prime")]
    NotPrime(u64),
    #[error("index-divisor prime {p} without certified splitting in field {label}")]
    IndexDivisorPrime { label: String, p: u64 },
    #[error("prime power {p}^{f} overflows the norm type")]
    NormOverflow { p: u64, f: u32 },
}

/// Split a rational prime into prime ideals of k.
///
/// Uses the certified override when p divides the index, otherwise the
/// Dedekind criterion (factor the field polynomial mod p). Output is
/// sorted by ascending norm, then ramification index; ideals with equal
/// (e, f) over the same p are indistinguishable and keep the canonical
/// mod-p factor order.
pub fn split_prime(field: &NumberField, p: u64) -> Result<Vec<PrimeIdeal>, SplitError> {
    if !is_prime_u64(p) {
        return Err(SplitError::NotPrime(p));
    }
    let mut out = if let Some(splitting) = field.bad_prime_splittings.get(&p) {
        splitting
            .iter()
            .map(|&(e, f)| PrimeIdeal::new(p, e, f))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        if field.divides_index(p) {
            return Err(SplitError::IndexDivisorPrime {
                label: field.label.clone(),
                p,
            });
        }
        let reduced = FpPoly::from_bigint_coeffs(&field.poly, p);
        debug_assert_eq!(reduced.deg() as u32, field.degree, "monic poly stays monic mod p");
        modp::factor(&reduced)
            .iter()
            .map(|(g, e)| PrimeIdeal::new(p, *e, g.deg() as u32))
            .collect::<Result<Vec<_>, _>>()?
    };
    out.sort_by_key(|q| (q.norm, q.e));
    let total: u64 = out.iter().map(|q| q.e as u64 * q.f as u64).sum();
    debug_assert_eq!(total, field.degree as u64, "splitting must cover the degree");
    Ok(out)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZetaError {
    #[error("zeta enclosure requires s > 1, got {0}")]
    SRange(String),
    #[error("prime bound must be at least 2, got {0}")]
    PrimeBound(u64),
    #[error(transparent)]
    Split(#[from] SplitError),
}

/// Tail majorant T(P, s): the true log-defect of the truncated Euler
/// product is at most n * T(P, s).
///
/// For s = 2 the bound is sum_{m > P} 1/(m^2 - 1) <= sum 1/(m(m-1)) = 1/P
/// (telescoping). For general s > 1, -log(1 - x) <= x / (1 - 2^-s) for
/// x <= 2^-s, and sum_{m > P} m^-s <= P^(1-s)/(s-1) by the integral test.
fn zeta_tail(prime_bound: u64, s: f64) -> f64 {
    let p = prime_bound as f64;
    if s == 2.0 {
        (1.0 / p).next_up()
    } else {
        let tail_sum = p.powf(1.0 - s) / (s - 1.0);
        let scale = 1.0 / (1.0 - 2f64.powf(-s));
        (tail_sum * scale).next_up().next_up()
    }
}

/// Rigorous enclosure of the Dedekind zeta value zeta_k(s), s > 1, from
/// the Euler product over all prime ideals above rational primes <= P.
///
/// Every omitted Euler factor is >= 1, so the finite product is a valid
/// lower endpoint; the upper endpoint multiplies by exp(n * T(P, s)) with
/// the tail majorant above.
pub fn dedekind_zeta(
    field: &NumberField,
    s: f64,
    prime_bound: u64,
) -> Result<BoundedValue, ZetaError> {
    if !s.is_finite() || s <= 1.0 {
        return Err(ZetaError::SRange(format!("{s}")));
    }
    if prime_bound < 2 {
        return Err(ZetaError::PrimeBound(prime_bound));
    }
    let mut product = BoundedValue::exact(1.0);
    for p in primes_up_to(prime_bound) {
        for ideal in split_prime(field, p)? {
            // (1 - norm^-s)^-1, computed outward.
            let norm = ideal.norm as f64; // rounds for norms beyond 2^53
            let norm_iv = BoundedValue::new(norm.next_down(), norm.next_up());
            let inv_pow = norm_iv.powf(-s);
            let denom = BoundedValue::exact(1.0).sub(&inv_pow);
            product = product.mul(&denom.recip_positive());
        }
    }
    let tail = zeta_tail(prime_bound, s);
    let factor = BoundedValue::new(1.0, (field.degree as f64 * tail).exp().next_up().next_up());
    let hi = product.mul(&factor).hi;
    Ok(BoundedValue::new(product.lo, hi))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealCountError {
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error("norm bound {0} is too large for exact enumeration")]
    BoundTooLarge(String),
}

/// Exact number of integral ideals of k with norm <= x, the unit ideal
/// included. Depth-first multiplicative enumeration over prime-ideal
/// powers; entirely in integer arithmetic.
pub fn count_ideals(field: &NumberField, x: f64) -> Result<u64, IdealCountError> {
    if !x.is_finite() || x < 1.0 {
        return Ok(0);
    }
    if x > 1e8 {
        return Err(IdealCountError::BoundTooLarge(format!("{x}")));
    }
    let budget = x.floor() as u128;
    let mut norms: Vec<u128> = Vec::new();
    for p in primes_up_to(budget as u64) {
        for ideal in split_prime(field, p)? {
            if ideal.norm <= budget {
                norms.push(ideal.norm);
            }
        }
    }
    norms.sort_unstable();
    Ok(count_products(&norms, 0, budget))
}

/// Number of products of powers of norms[i..] that stay <= budget.
/// Integer floor division is exact here: for integers n, m <= b/n iff
/// m <= floor(b/n).
fn count_products(norms: &[u128], i: usize, budget: u128) -> u64 {
    if i == norms.len() || norms[i] > budget {
        return 1;
    }
    let mut total = count_products(norms, i + 1, budget);
    let mut b = budget;
    while b >= norms[i] {
        b /= norms[i];
        total += count_products(norms, i + 1, b);
    }
    total
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("discriminant must be negative, got {0}")]
    NotNegative(i64),
    #[error("{0} is not congruent to 0 or 1 mod 4")]
    BadCongruence(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
}

fn is_squarefree_u64(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            n /= q;
            if n.is_multiple_of(q) {
                return false;
            }
        }
        q += 1;
    }
    true
}

/// True for negative fundamental discriminants.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree_u64(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            let r = m.rem_euclid(4);
            (r == 2 || r == 3) && is_squarefree_u64(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Independent class-number oracle for imaginary quadratic fields: count
/// the reduced binary quadratic forms (a, b, c) of discriminant d, i.e.
/// b^2 - 4ac = d with |b| <= a <= c and b >= 0 whenever |b| = a or a = c.
pub fn class_number_oracle(d: i64) -> Result<u64, OracleError> {
    if d >= 0 {
        return Err(OracleError::NotNegative(d));
    }
    let r = d.rem_euclid(4);
    if r != 0 && r != 1 {
        return Err(OracleError::BadCongruence(d));
    }
    if !is_fundamental_discriminant(d) {
        return Err(OracleError::NotFundamental(d));
    }
    let abs_d = d.unsigned_abs();
    let b_max = (abs_d / 3).isqrt();
    let mut count = 0u64;
    let parity = abs_d % 2; // |d| and b have equal parity
    let mut b = parity;
    while b <= b_max {
        let m = (b * b + abs_d) / 4; // = a*c, integral by the parity choice
        let mut a = b.max(1);
        while a * a <= m {
            if m.is_multiple_of(a) {
                let c = m / a;
                if b == 0 || b == a || a == c {
                    count += 1;
                } else {
                    count += 2; // (a, b, c) and (a, -b, c)
                }
            }
            a += 1;
        }
        b += 2;
    }
    Ok(count)
}
