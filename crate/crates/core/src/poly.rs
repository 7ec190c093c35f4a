//! Dense univariate polynomials over a prime field F_p and their complete
//! factorization: squarefree decomposition, distinct-degree splitting and
//! Cantor-Zassenhaus equal-degree splitting.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256StarStar};

use crate::error::{Error, Result};
use crate::primes::{is_prime_u64, mul_mod};

/// Largest admissible characteristic (exclusive): primes must fit in 63 bits.
pub const MAX_PRIME: u64 = 1 << 63;

/// Salt mixed into every Cantor-Zassenhaus seed; part of the determinism
/// contract of [`factor_mod_p`].
pub const FACTOR_SEED_SALT: u64 = 0x6f6b_6465_6e73_4346;

/// A polynomial over F_p, constant term first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

/// Inverse of a nonzero residue modulo a prime, by the extended Euclidean
/// algorithm.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "{a} is not invertible mod {p}");
    t0.rem_euclid(p as i128) as u64
}

impl PolyModP {
    /// Builds a polynomial from coefficients that are reduced mod `p`.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = PolyModP {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        let reduced = coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced residue fits u64"))
            .collect();
        PolyModP::new(p, reduced)
    }

    pub fn from_i64s(p: u64, coeffs: &[i64]) -> Self {
        let reduced = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
            .collect();
        PolyModP::new(p, reduced)
    }

    pub fn zero(p: u64) -> Self {
        PolyModP {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: u64) -> Self {
        PolyModP::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        PolyModP::new(p, vec![c])
    }

    /// The monomial `x`.
    pub fn x(p: u64) -> Self {
        PolyModP::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                add_mod(a, b, p)
            })
            .collect();
        let mut out = PolyModP { p, coeffs };
        out.trim();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                sub_mod(a, b, p)
            })
            .collect();
        let mut out = PolyModP { p, coeffs };
        out.trim();
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        let mut out = PolyModP {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        };
        out.trim();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PolyModP::zero(self.p);
        }
        let p = self.p;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % pp;
            }
        }
        let mut out = PolyModP {
            p,
            coeffs: acc.into_iter().map(|c| c as u64).collect(),
        };
        out.trim();
        out
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = inv_mod(divisor.leading(), p);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (PolyModP::zero(p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = mul_mod(c, lead_inv, p);
            quot[i - dd] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let t = mul_mod(q, d, p);
                rem[i - dd + j] = sub_mod(rem[i - dd + j], t, p);
            }
        }
        rem.truncate(dd);
        let mut q = PolyModP { p, coeffs: quot };
        let mut r = PolyModP { p, coeffs: rem };
        q.trim();
        r.trim();
        (q, r)
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Scales to leading coefficient 1; the zero polynomial is unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `g = gcd(self, modulus)` monic and
    /// `s * self == g (mod modulus)`.
    pub fn gcd_cofactor(&self, modulus: &Self) -> (Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus));
        let (mut s0, mut s1) = (PolyModP::zero(p), PolyModP::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.is_zero() {
            return (r0, s0);
        }
        let inv = inv_mod(r0.leading(), p);
        (r0.scale(inv), s0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect();
        let mut out = PolyModP { p, coeffs };
        out.trim();
        out
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    /// `self^exp mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &Self) -> Self {
        let mut acc = PolyModP::one(self.p).rem(modulus);
        let base = self.rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus);
            if exp.bit(i) {
                acc = acc.mul_mod(&base, modulus);
            }
        }
        acc
    }

    pub fn pow_mod_u64(&self, exp: u64, modulus: &Self) -> Self {
        self.pow_mod(&BigUint::from(exp), modulus)
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(PolyModP::one(self.p), |acc, _| acc.mul(self))
    }

    fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.p)
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p >= MAX_PRIME {
        return Err(Error::PrimeTooLarge(BigInt::from(p)));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    Ok(())
}

/// Factors a monic polynomial over F_p into monic irreducibles with
/// multiplicities, sorted by degree and then by coefficient vector.
pub fn factor_mod_p(f: &PolyModP) -> Result<Vec<(PolyModP, u32)>> {
    check_prime(f.p)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::PolyNotMonic);
    }
    let mut rng = factor_rng(f);
    let mut out: Vec<(PolyModP, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (block, d) in distinct_degree(&part) {
            for g in equal_degree(&block, d, &mut rng) {
                out.push((g, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    let mut merged: Vec<(PolyModP, u32)> = Vec::with_capacity(out.len());
    for (g, e) in out {
        match merged.last_mut() {
            Some((h, m)) if *h == g => *m += e,
            _ => merged.push((g, e)),
        }
    }
    Ok(merged)
}

/// Inertia degrees of the irreducible factors, with repetition, for a
/// squarefree monic `f`. Cheaper than [`factor_mod_p`]: no equal-degree split.
pub fn factor_degrees_squarefree(f: &PolyModP) -> Vec<usize> {
    let mut out = Vec::new();
    for (block, d) in distinct_degree(f) {
        let count = block.degree().unwrap_or(0) / d;
        out.extend(std::iter::repeat_n(d, count));
    }
    out
}

fn factor_rng(f: &PolyModP) -> Xoshiro256StarStar {
    let mut mix = SplitMix64::seed_from_u64(FACTOR_SEED_SALT ^ f.p);
    let mut h = mix.next_u64();
    for &c in &f.coeffs {
        h = SplitMix64::seed_from_u64(h ^ c).next_u64();
    }
    Xoshiro256StarStar::seed_from_u64(h)
}

/// Yun-style squarefree decomposition in characteristic p: returns coprime
/// squarefree monic parts `(g, e)` with `f = prod g^e`.
fn squarefree_decomposition(f: &PolyModP) -> Vec<(PolyModP, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if c.degree().unwrap_or(0) > 0 {
        // Only exponents divisible by p remain; in F_p the p-th root of a
        // coefficient is the coefficient itself.
        let root = PolyModP::new(p, c.coeffs.iter().step_by(p as usize).copied().collect());
        for (g, e) in squarefree_decomposition(&root) {
            out.push((g, e * p as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree `d`.
fn distinct_degree(f: &PolyModP) -> Vec<(PolyModP, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyModP::x(p);
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod_u64(p, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((rest, deg));
    }
    out
}

fn random_below(rng: &mut Xoshiro256StarStar, p: u64, len: usize) -> PolyModP {
    PolyModP::new(p, (0..len).map(|_| rng.next_u64() % p).collect())
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of
/// degree `d`.
fn equal_degree(f: &PolyModP, d: usize, rng: &mut Xoshiro256StarStar) -> Vec<PolyModP> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.clone()];
    }
    let p = f.p;
    let half_exp = if p == 2 {
        None
    } else {
        Some((BigUint::from(p).pow(d as u32) - 1u32) >> 1)
    };
    loop {
        let a = random_below(rng, p, n);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let candidate = match &half_exp {
            Some(e) => a.pow_mod(e, f).sub(&PolyModP::one(p)),
            None => {
                // trace map a + a^2 + ... + a^(2^(d-1))
                let mut t = a.rem(f);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul_mod(&t, f);
                    acc = acc.add(&t);
                }
                acc
            }
        };
        let g = candidate.gcd(f);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.div_rem(&g).0;
            let mut parts = equal_degree(&g, d, rng);
            parts.extend(equal_degree(&h, d, rng));
            return parts;
        }
    }
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(f: &PolyModP) -> bool {
    let n = match f.degree() {
        Some(0) | None => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let p = f.p;
    let x = PolyModP::x(p);
    // frob[i] = x^(p^i) mod f
    let mut frob = vec![x.rem(f)];
    for i in 1..=n {
        let next = frob[i - 1].pow_mod_u64(p, f);
        frob.push(next);
    }
    if frob[n] != x.rem(f) {
        return false;
    }
    let mut m = n;
    let mut q = 2;
    let mut prime_divisors = Vec::new();
    while q * q <= m {
        if m % q == 0 {
            prime_divisors.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        prime_divisors.push(m);
    }
    prime_divisors
        .into_iter()
        .all(|q| frob[n / q].sub(&x).gcd(f).is_one())
}

/// The finite field F_p[x]/(g) for a monic irreducible `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    modulus: PolyModP,
}

impl ResidueField {
    pub fn new(modulus: PolyModP) -> Self {
        debug_assert!(modulus.is_monic());
        ResidueField { modulus }
    }

    pub fn characteristic(&self) -> u64 {
        self.modulus.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn modulus(&self) -> &PolyModP {
        &self.modulus
    }

    /// Order of the field, `p^deg`.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree() as u32)
    }

    pub fn reduce(&self, a: &PolyModP) -> PolyModP {
        a.rem(&self.modulus)
    }

    pub fn mul(&self, a: &PolyModP, b: &PolyModP) -> PolyModP {
        a.mul_mod(b, &self.modulus)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &PolyModP) -> Option<PolyModP> {
        if a.is_zero() {
            return None;
        }
        let (g, s) = a.gcd_cofactor(&self.modulus);
        g.is_one().then_some(s)
    }

    pub fn one(&self) -> PolyModP {
        PolyModP::one(self.characteristic()).rem(&self.modulus)
    }
}
