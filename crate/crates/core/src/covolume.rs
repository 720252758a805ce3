//! Covolume formulas for the unit-norm lattice and the minimal-covolume
//! maximal lattice of a quaternion algebra, the generalized-index interval
//! for the level-S lattices, and exact enumeration of admissible S-sets.
//!
//! The exact part of each formula (powers of 2 and 4, Phi, d_k) is
//! assembled in rational arithmetic and converted to an interval once;
//! only pi-powers, the square root of d_k and the zeta enclosure carry
//! floating intervals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::interval::BoundedValue;
use crate::numfield::{split_prime, IdealCountError, NumberField};
use crate::quatalg::{PlacedPrime, QuaternionAlgebra};

/// The formula inputs echoed with every covolume value.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaInputs {
    pub d_k: u64,
    pub s: u32,
    pub r1: u32,
    pub r2: u32,
    pub phi: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovolumeResult {
    pub value: BoundedValue,
    pub inputs: FormulaInputs,
}

/// Covolume of the unit-norm lattice:
///   2 (4 pi)^s d_k^(3/2) zeta_k(2) Phi(D) / ((4 pi^2)^r1 (8 pi^2)^r2).
///
/// `zeta2` must enclose zeta_k(2).
pub fn covolume_gamma1(alg: &QuaternionAlgebra, zeta2: &BoundedValue) -> CovolumeResult {
    let field = alg.field();
    let (r1, r2) = (field.r1(), field.r2());
    let s = alg.split_real_places();
    let d_k = field.d_k();
    let phi = alg.phi_discriminant();

    // Rational factor: 2 * 4^s * Phi * d_k / (4^r1 * 8^r2).
    let mut rational = BigRational::from_integer(2.into());
    rational *= pow_big(4, s);
    rational *= &phi;
    rational *= BigRational::from_integer(BigInt::from(d_k));
    rational /= pow_big(4, r1);
    rational /= pow_big(8, r2);

    let pi_exponent = s as i32 - 2 * (r1 as i32) - 2 * (r2 as i32);
    let value = BoundedValue::from_rational(&rational)
        .mul(&BoundedValue::pi().powi(pi_exponent))
        .mul(&BoundedValue::sqrt_of(d_k as f64))
        .mul(zeta2);

    CovolumeResult {
        value,
        inputs: FormulaInputs {
            d_k,
            s,
            r1,
            r2,
            phi,
        },
    }
}

/// The unconditional floor d_k^(3/2) / ((4 pi^2)^r1 (8 pi^2)^r2) obtained
/// from zeta_k(2), Phi, (4 pi)^s >= 1.
pub fn covolume_floor(field: &NumberField) -> BoundedValue {
    let (r1, r2) = (field.r1(), field.r2());
    let mut rational = BigRational::from_integer(BigInt::from(field.d_k()));
    rational /= pow_big(4, r1);
    rational /= pow_big(8, r2);
    BoundedValue::from_rational(&rational)
        .mul(&BoundedValue::pi().powi(-2 * (r1 as i32) - 2 * (r2 as i32)))
        .mul(&BoundedValue::sqrt_of(field.d_k() as f64))
}

/// Exact index bound [Gamma_O : Gamma^1_O] <= 2^(n + |Ram_f|) h_k.
pub fn index_bound_gamma(alg: &QuaternionAlgebra) -> BigInt {
    let field = alg.field();
    let exponent = field.degree() + alg.ram_f().len() as u32;
    BigInt::from(2u32).pow(exponent) * BigInt::from(field.h_k())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalCovolume {
    /// Unit-lattice covolume divided by the exact index bound.
    pub exact_form: BoundedValue,
    /// The simplified lower bound d_k^(3/4) / 75^n.
    pub simplified: f64,
}

/// Lower bound for the covolume of the minimal-covolume lattice Gamma_O:
/// covolume_gamma1 divided by the index bound, plus the simplified display
/// form. The exact form always dominates the simplified one.
pub fn minimal_covolume_lower(alg: &QuaternionAlgebra, zeta2: &BoundedValue) -> MinimalCovolume {
    let gamma1 = covolume_gamma1(alg, zeta2);
    let index = BigRational::from_integer(index_bound_gamma(alg));
    let exact_form = gamma1.value.div(&BoundedValue::from_rational(&index));
    let field = alg.field();
    let simplified =
        (field.d_k() as f64).powf(0.75) / 75f64.powi(field.degree() as i32);
    debug_assert!(
        exact_form.lo + 1e-12 >= simplified,
        "exact form {} fell below the simplified bound {}",
        exact_form.lo,
        simplified
    );
    MinimalCovolume {
        exact_form,
        simplified,
    }
}

/// A finite set S of primes disjoint from Ram_f, indexing a level-S
/// lattice. The Maclachlan-Reid exponent m is only known to lie in
/// [0, |S|].
#[derive(Debug, Clone, PartialEq)]
pub struct SLevelSet {
    /// Selected primes, sorted by (norm, p, index).
    pub primes: Vec<PlacedPrime>,
}

impl SLevelSet {
    pub fn m_range(&self) -> (u32, u32) {
        (0, self.primes.len() as u32)
    }
}

/// Exact interval for the generalized index [Gamma_O : Gamma_{S,O}] =
/// 2^(-m) prod (N(p) + 1) over the unknown m in [0, |S|]: hi is the m = 0
/// value, lo divides it by 2^|S|.
pub fn gamma_s_index_interval(set: &SLevelSet) -> (BigRational, BigRational) {
    let mut hi = BigRational::one();
    for prime in &set.primes {
        hi *= BigRational::from_integer(BigInt::from(prime.ideal.norm) + BigInt::one());
    }
    let lo = &hi / pow_big(2, set.primes.len() as u32);
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SEnumeration {
    /// Exact number of admissible sets, independent of the cap.
    pub count: u64,
    /// Materialized sets, at most `limit` of them, in enumeration order.
    pub sets: Vec<SLevelSet>,
    pub truncated: bool,
}

/// Enumerate the sets S of primes disjoint from Ram_f whose norm product
/// over primes of norm != 2 is at most `x`. Norm-2 primes outside Ram_f do
/// not enter the product and may appear freely. For x < 1 nothing
/// qualifies (the empty product is 1).
pub fn enumerate_s_sets(
    alg: &QuaternionAlgebra,
    x: f64,
    limit: usize,
) -> Result<SEnumeration, IdealCountError> {
    if !x.is_finite() || x < 1.0 {
        return Ok(SEnumeration {
            count: 0,
            sets: vec![],
            truncated: false,
        });
    }
    if x > 1e8 {
        return Err(IdealCountError::BoundTooLarge(format!("{x}")));
    }
    let field = alg.field();
    let budget = x.floor() as u128;
    let ram: std::collections::BTreeSet<_> =
        alg.ram_f().iter().map(|rp| rp.place).collect();

    let mut norm2_pool: Vec<PlacedPrime> = Vec::new();
    let mut main_pool: Vec<PlacedPrime> = Vec::new();
    for p in crate::modp::primes_up_to((budget as u64).max(2)) {
        for (index, ideal) in split_prime(field, p)?.into_iter().enumerate() {
            let place = crate::quatalg::PlaceId { p, index };
            if ram.contains(&place) {
                continue;
            }
            if ideal.norm == 2 {
                norm2_pool.push(PlacedPrime { place, ideal });
            } else if ideal.norm <= budget {
                main_pool.push(PlacedPrime { place, ideal });
            }
        }
    }
    main_pool.sort_by_key(|rp| (rp.ideal.norm, rp.place));
    norm2_pool.sort_by_key(|rp| rp.place);

    let main_count = count_subsets(&main_pool, 0, budget);
    let count = main_count
        .checked_mul(1u64 << norm2_pool.len())
        .expect("S-set count overflow");

    let mut sets = Vec::new();
    let mut truncated = false;
    let mut current: Vec<PlacedPrime> = Vec::new();
    materialize(
        &main_pool,
        &norm2_pool,
        0,
        budget,
        &mut current,
        &mut sets,
        limit,
        &mut truncated,
    );
    Ok(SEnumeration {
        count,
        sets,
        truncated,
    })
}

fn count_subsets(pool: &[PlacedPrime], i: usize, budget: u128) -> u64 {
    if i == pool.len() {
        return 1;
    }
    let mut total = count_subsets(pool, i + 1, budget);
    if pool[i].ideal.norm <= budget {
        total += count_subsets(pool, i + 1, budget / pool[i].ideal.norm);
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn materialize(
    pool: &[PlacedPrime],
    norm2_pool: &[PlacedPrime],
    i: usize,
    budget: u128,
    current: &mut Vec<PlacedPrime>,
    out: &mut Vec<SLevelSet>,
    limit: usize,
    truncated: &mut bool,
) {
    // Emit the current selection combined with every norm-2 subset.
    for mask in 0u32..(1u32 << norm2_pool.len()) {
        if out.len() >= limit {
            *truncated = true;
            return;
        }
        let mut primes = current.clone();
        for (bit, rp) in norm2_pool.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                primes.push(*rp);
            }
        }
        primes.sort_by_key(|rp| (rp.ideal.norm, rp.place));
        out.push(SLevelSet { primes });
    }
    for j in i..pool.len() {
        if pool[j].ideal.norm > budget {
            break;
        }
        current.push(pool[j]);
        materialize(
            pool,
            norm2_pool,
            j + 1,
            budget / pool[j].ideal.norm,
            current,
            out,
            limit,
            truncated,
        );
        current.pop();
        if *truncated {
            return;
        }
    }
}

fn pow_big(base: u32, e: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(base).pow(e))
}

/// Default cap on materialized S-sets; the count stays exact regardless.
pub const DEFAULT_S_SET_LIMIT: usize = 10_000;
