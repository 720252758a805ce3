//! Monic polynomial factorization over prime fields F_p.
//!
//! This is the engine behind Dedekind splitting of rational primes: reduce
//! the field polynomial mod p, factor it into irreducibles with
//! multiplicity, and read off residue degrees and ramification indices.
//!
//! The factorization is the classical pipeline: peel repeated content via
//! gcd(f, f') (taking p-th roots when f' vanishes, which happens in
//! characteristic p), then distinct-degree factorization with Frobenius
//! powers, then equal-degree splitting (Cantor-Zassenhaus for odd p, the
//! trace map for p = 2). The random elements for the splitting step come
//! from a splitmix64 stream seeded from p, so results are deterministic;
//! the returned factor list is additionally sorted canonically by
//! (degree, coefficient vector).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Dense polynomial over F_p, constant term first, no trailing zeros.
/// The zero polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_u64(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    // p prime, a nonzero mod p.
    powmod_u64(a, p - 2, p)
}

impl FpPoly {
    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn constant(c: u64, p: u64) -> Self {
        let c = c % p;
        if c == 0 {
            Self::zero(p)
        } else {
            FpPoly { p, coeffs: vec![c] }
        }
    }

    pub fn x(p: u64) -> Self {
        FpPoly {
            p,
            coeffs: vec![0, 1],
        }
    }

    pub fn from_bigint_coeffs(coeffs: &[BigInt], p: u64) -> Self {
        let bp = BigInt::from(p);
        let mut v: Vec<u64> = coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&bp);
                r.to_u64().expect("residue fits u64")
            })
            .collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        FpPoly { p, coeffs: v }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; panics on the zero polynomial.
    pub fn deg(&self) -> usize {
        debug_assert!(!self.is_zero());
        self.coeffs.len() - 1
    }

    fn lc(&self) -> u64 {
        *self.coeffs.last().expect("lc of zero poly")
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, rhs: &FpPoly) -> FpPoly {
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % p
            })
            .collect();
        FpPoly { p, coeffs: v }.trim()
    }

    pub fn sub(&self, rhs: &FpPoly) -> FpPoly {
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        FpPoly { p, coeffs: v }.trim()
    }

    pub fn mul(&self, rhs: &FpPoly) -> FpPoly {
        if self.is_zero() || rhs.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut v = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = (v[i + j] + mulmod(a, b, p)) % p;
            }
        }
        FpPoly { p, coeffs: v }.trim()
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divmod(&self, rhs: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.is_zero() || self.deg() < rhs.deg() {
            return (FpPoly::zero(p), self.clone());
        }
        let dr = rhs.deg();
        let inv_lc = invmod(rhs.lc(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.deg() - dr + 1];
        for k in (dr..rem.len()).rev() {
            let q = mulmod(rem[k], inv_lc, p);
            quot[k - dr] = q;
            if q != 0 {
                for i in 0..=dr {
                    let t = mulmod(q, rhs.coeffs[i], p);
                    rem[k - dr + i] = (rem[k - dr + i] + p - t) % p;
                }
            }
        }
        rem.truncate(dr);
        (
            FpPoly { p, coeffs: quot }.trim(),
            FpPoly { p, coeffs: rem }.trim(),
        )
    }

    pub fn rem(&self, rhs: &FpPoly) -> FpPoly {
        self.divmod(rhs).1
    }

    pub fn make_monic(&self) -> FpPoly {
        if self.is_zero() || self.lc() == 1 {
            return self.clone();
        }
        let inv = invmod(self.lc(), self.p);
        FpPoly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| mulmod(c, inv, self.p)).collect(),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn derivative(&self) -> FpPoly {
        if self.coeffs.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, (i as u64) % p, p))
            .collect();
        FpPoly { p, coeffs: v }.trim()
    }

    /// self^e mod m, with an arbitrary-precision exponent.
    pub fn pow_mod(&self, e: &BigUint, modulus: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::constant(1, self.p);
        let mut base = self.rem(modulus);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
        }
        acc
    }

    /// For f with f' = 0 in characteristic p, f(x) = g(x)^p where g picks
    /// every p-th coefficient (Frobenius fixes F_p pointwise).
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        let v: Vec<u64> = self.coeffs.iter().step_by(p).copied().collect();
        FpPoly {
            p: self.p,
            coeffs: v,
        }
        .trim()
    }
}

/// Deterministic stream for the equal-degree splitting step.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

/// Factor a nonconstant polynomial over F_p into monic irreducibles with
/// multiplicity. The input need not be monic; the leading coefficient is
/// dropped (callers here always pass monic reductions). Factors are sorted
/// by (degree, coefficient vector).
pub fn factor(poly: &FpPoly) -> Vec<(FpPoly, u32)> {
    assert!(!poly.is_zero() && poly.deg() >= 1, "factor needs degree >= 1");
    let f = poly.make_monic();
    let mut found: Vec<(FpPoly, u32)> = Vec::new();
    factor_rec(&f, 1, &mut found);
    // Merge duplicates, then sort canonically.
    found.sort_by(|a, b| cmp_factor(&a.0, &b.0));
    let mut merged: Vec<(FpPoly, u32)> = Vec::new();
    for (g, e) in found {
        if let Some(last) = merged.last_mut() {
            if last.0 == g {
                last.1 += e;
                continue;
            }
        }
        merged.push((g, e));
    }
    merged
}

fn cmp_factor(a: &FpPoly, b: &FpPoly) -> std::cmp::Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs.cmp(&b.coeffs))
}

fn factor_rec(f: &FpPoly, mult: u32, out: &mut Vec<(FpPoly, u32)>) {
    if f.deg() == 0 {
        return;
    }
    if f.deg() == 1 {
        out.push((f.clone(), mult));
        return;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(x^p) = g(x)^p.
        let g = f.pth_root();
        factor_rec(&g, mult * f.p as u32, out);
        return;
    }
    let g = f.gcd(&d);
    if g.deg() == 0 {
        for h in factor_squarefree(f) {
            out.push((h, mult));
        }
        return;
    }
    let (q, r) = f.divmod(&g);
    debug_assert!(r.is_zero());
    factor_rec(&g, mult, out);
    factor_rec(&q, mult, out);
}

/// Distinct-degree then equal-degree factorization of a squarefree monic f.
fn factor_squarefree(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let mut fs = f.clone();
    let mut out = Vec::new();
    let x = FpPoly::x(p);
    let mut h = x.rem(&fs); // x^(p^d) mod fs, built up by Frobenius steps
    let pe = BigUint::from(p);
    let mut d = 0usize;
    while !fs.is_zero() && fs.deg() >= 1 {
        d += 1;
        if 2 * d > fs.deg() {
            // Whatever is left is irreducible.
            out.push(fs.clone());
            break;
        }
        h = h.pow_mod(&pe, &fs);
        let g = h.sub(&x.rem(&fs)).gcd(&fs);
        if !g.is_zero() && g.deg() > 0 {
            equal_degree_split(&g, d, &mut out);
            let (q, r) = fs.divmod(&g);
            debug_assert!(r.is_zero());
            fs = q;
            if fs.deg() == 0 {
                break;
            }
            h = h.rem(&fs);
        }
    }
    out
}

/// Split a product of distinct irreducibles, all of degree d.
fn equal_degree_split(g: &FpPoly, d: usize, out: &mut Vec<FpPoly>) {
    if g.deg() == d {
        out.push(g.make_monic());
        return;
    }
    let p = g.p;
    let mut rng = SplitMix64(p ^ 0xc0f_ee00 ^ (g.deg() as u64).rotate_left(17));
    loop {
        let a = random_poly(&mut rng, p, g.deg());
        if a.is_zero() {
            continue;
        }
        let t = a.gcd(g);
        if !t.is_zero() && t.deg() > 0 && t.deg() < g.deg() {
            return split_both(g, &t, d, out);
        }
        let candidate = if p == 2 {
            // Trace map: a + a^2 + a^4 + ... + a^(2^(d-1)) mod g.
            let mut acc = a.clone();
            let mut term = a.clone();
            let two = BigUint::from(2u32);
            for _ in 1..d {
                term = term.pow_mod(&two, g);
                acc = acc.add(&term).rem(g);
            }
            acc
        } else {
            // a^((p^d - 1)/2) - 1 mod g.
            let e = (BigUint::from(p).pow(d as u32) - BigUint::from(1u32)) / BigUint::from(2u32);
            let b = a.pow_mod(&e, g);
            b.sub(&FpPoly::constant(1, p))
        };
        if candidate.is_zero() {
            continue;
        }
        let t = candidate.gcd(g);
        if !t.is_zero() && t.deg() > 0 && t.deg() < g.deg() {
            return split_both(g, &t, d, out);
        }
    }
}

fn split_both(g: &FpPoly, t: &FpPoly, d: usize, out: &mut Vec<FpPoly>) {
    let (q, r) = g.divmod(t);
    debug_assert!(r.is_zero());
    equal_degree_split(t, d, out);
    equal_degree_split(&q, d, out);
}

fn random_poly(rng: &mut SplitMix64, p: u64, max_deg: usize) -> FpPoly {
    let len = 1 + (rng.next() as usize % max_deg.max(1));
    let coeffs: Vec<u64> = (0..=len).map(|_| rng.next() % p).collect();
    FpPoly { p, coeffs }.trim()
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sorted list of primes up to and including `bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return vec![];
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}
