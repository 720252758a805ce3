//! Quaternion algebras over validated number fields: ramification data,
//! the discriminant factor Phi, norm-2 ramified prime counting, and upper
//! bounds on the type number.
//!
//! A finite ramified place is specified as (rational prime p, index into
//! the canonical `split_prime` output); that keeps corpus files
//! human-writable, and the deterministic splitting order makes the
//! reference stable. Two primes above p with identical (e, f) are
//! interchangeable in every quantity computed here.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfield::{split_prime, NumberField, PrimeIdeal, SplitError};

/// A finite place of k, addressed by rational prime and splitting index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlaceId {
    pub p: u64,
    pub index: usize,
}

/// A finite place together with its resolved prime ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedPrime {
    pub place: PlaceId,
    pub ideal: PrimeIdeal,
}

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("parity violation: |Ram_inf| + |Ram_f| = {total} is odd")]
    ParityViolation { total: usize },
    #[error("duplicate infinite place index {0}")]
    DuplicateInfinitePlace(u32),
    #[error("infinite place index {index} out of range: field has r1 = {r1} real places")]
    InfinitePlaceOutOfRange { index: u32, r1: u32 },
    #[error("duplicate finite prime ({p}, {index})")]
    DuplicateFinitePrime { p: u64, index: usize },
    #[error("prime index {index} out of range: {count} primes above {p}")]
    PrimeIndexOutOfRange { p: u64, index: usize, count: usize },
    #[error(transparent)]
    Split(#[from] SplitError),
}

/// A quaternion algebra over a validated number field, given by its
/// ramification set. Construct via [`validate_algebra`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionAlgebra {
    label: String,
    field: NumberField,
    ram_inf: Vec<u32>,
    ram_f: Vec<PlacedPrime>,
}

impl QuaternionAlgebra {
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn field(&self) -> &NumberField {
        &self.field
    }
    /// Ramified real places, as indices below r1.
    pub fn ram_inf(&self) -> &[u32] {
        &self.ram_inf
    }
    /// Ramified finite primes, sorted by (p, index).
    pub fn ram_f(&self) -> &[PlacedPrime] {
        &self.ram_f
    }
    /// r = |Ram_inf|, the number of ramified real places.
    pub fn ramified_real_places(&self) -> u32 {
        self.ram_inf.len() as u32
    }
    /// s = r1 - r, the number of split real places.
    pub fn split_real_places(&self) -> u32 {
        self.field.r1() - self.ramified_real_places()
    }
    /// Number of two-dimensional hyperbolic factors (= s).
    pub fn hyperbolic_plane_factors(&self) -> u32 {
        self.split_real_places()
    }
    /// Number of three-dimensional hyperbolic factors (= r2).
    pub fn hyperbolic_space_factors(&self) -> u32 {
        self.field.r2()
    }
    /// B is a division algebra, hence the lattices are cocompact, exactly
    /// when the ramification set is nonempty.
    pub fn is_cocompact(&self) -> bool {
        !(self.ram_inf.is_empty() && self.ram_f.is_empty())
    }
    /// Ramified at every archimedean place of a totally real field; the
    /// symmetric space collapses to a point.
    pub fn is_totally_definite(&self) -> bool {
        self.split_real_places() + self.field.r2() == 0
    }

    /// Phi(D) = N(D) * prod_{p | D} (1 - 1/N(p)), in exact rational
    /// arithmetic; 1 for empty Ram_f.
    pub fn phi_discriminant(&self) -> BigRational {
        let mut norm_product = BigRational::one();
        let mut defect_product = BigRational::one();
        for rp in &self.ram_f {
            let n = BigRational::from_integer(BigInt::from(rp.ideal.norm));
            defect_product *= BigRational::one() - n.recip();
            norm_product *= n;
        }
        norm_product * defect_product
    }

    /// Number of ramified primes of norm 2.
    pub fn omega2(&self) -> u32 {
        self.ram_f.iter().filter(|rp| rp.ideal.norm == 2).count() as u32
    }

    /// Upper bounds for the type number of B: the strict-class-field
    /// degree 2^r1 * h_k, and the discriminant form 242 * 1.22^r1 * d_k^(3/4).
    /// The true type number is not computed.
    pub fn type_number_bound(&self) -> TypeNumberBound {
        let r1 = self.field.r1();
        let coarse = BigInt::from(2u32).pow(r1) * BigInt::from(self.field.h_k());
        let refined = 242.0 * 1.22f64.powi(r1 as i32) * (self.field.d_k() as f64).powf(0.75);
        TypeNumberBound { coarse, refined }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeNumberBound {
    /// 2^r1 * h_k, exact.
    pub coarse: BigInt,
    /// 242 * (1.22)^r1 * d_k^(3/4).
    pub refined: f64,
}

/// Resolve and validate ramification data over a validated field.
pub fn validate_algebra(
    field: &NumberField,
    label: &str,
    ram_inf: &[u32],
    ram_f_spec: &[(u64, usize)],
) -> Result<QuaternionAlgebra, AlgebraError> {
    let mut inf = ram_inf.to_vec();
    inf.sort_unstable();
    for w in inf.windows(2) {
        if w[0] == w[1] {
            return Err(AlgebraError::DuplicateInfinitePlace(w[0]));
        }
    }
    if let Some(&bad) = inf.iter().find(|&&i| i >= field.r1()) {
        return Err(AlgebraError::InfinitePlaceOutOfRange {
            index: bad,
            r1: field.r1(),
        });
    }

    let mut fin = ram_f_spec.to_vec();
    fin.sort_unstable();
    for w in fin.windows(2) {
        if w[0] == w[1] {
            return Err(AlgebraError::DuplicateFinitePrime {
                p: w[0].0,
                index: w[0].1,
            });
        }
    }
    let mut ram_f = Vec::with_capacity(fin.len());
    for (p, index) in fin {
        let split = split_prime(field, p)?;
        let ideal = *split
            .get(index)
            .ok_or(AlgebraError::PrimeIndexOutOfRange {
                p,
                index,
                count: split.len(),
            })?;
        ram_f.push(PlacedPrime {
            place: PlaceId { p, index },
            ideal,
        });
    }

    let total = inf.len() + ram_f.len();
    if !total.is_multiple_of(2) {
        return Err(AlgebraError::ParityViolation { total });
    }

    Ok(QuaternionAlgebra {
        label: label.to_string(),
        field: field.clone(),
        ram_inf: inf,
        ram_f,
    })
}
