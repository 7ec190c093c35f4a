//! Predicted densities `prod_{i<n} 1/zeta_K(m - i)` as truncated Euler
//! products with a certified truncation bound.
//!
//! Products are accumulated in double-double arithmetic (106-bit mantissa).
//! The prime range is cut into blocks of `SEGMENT_LEN` integers; each block
//! is multiplied out sequentially and block partials are combined in block
//! order, so results do not depend on the number of worker threads.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::field::NumberField;
use crate::poly::{factor_degrees_squarefree, PolyModP};
use crate::primes::{base_primes_for, primes_in_segment, segment_plan};
use crate::splitting::{split_prime, PrimeSplit};

pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct EulerProductResult {
    value: TwoFloat,
    pub prime_bound: u64,
    /// Bound on `|true - value| / value`.
    pub tail_bound: f64,
    pub n: usize,
    pub m: usize,
    pub warning: Option<String>,
}

impl EulerProductResult {
    pub fn value(&self) -> f64 {
        self.value.hi() + self.value.lo()
    }

    pub fn value_extended(&self) -> TwoFloat {
        self.value
    }
}

impl Serialize for EulerProductResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            value: f64,
            value_lo: f64,
            prime_bound: u64,
            tail_bound: f64,
            n: usize,
            m: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            warning: &'a Option<String>,
        }
        View {
            value: self.value.hi(),
            value_lo: self.value.lo(),
            prime_bound: self.prime_bound,
            tail_bound: self.tail_bound,
            n: self.n,
            m: self.m,
            warning: &self.warning,
        }
        .serialize(s)
    }
}

/// `1 - p^(-deg * s)` for every prime ideal of the given inertia degrees.
fn local_factor(p: u64, degrees: &[u8], s: u32) -> TwoFloat {
    let inv_p = TwoFloat::from(p as f64).recip();
    degrees.iter().fold(TwoFloat::from(1.0), |acc, &d| {
        acc * (TwoFloat::from(1.0) - inv_p.powi((d as u32 * s) as i32))
    })
}

/// `prod_{P | p} (1 - N(P)^(-s))`; ramification indices do not enter.
pub fn euler_factor(split: &PrimeSplit, s: i64) -> Result<TwoFloat> {
    if s < 2 {
        return Err(Error::BadExponent(s));
    }
    let degrees: Vec<u8> = split
        .inertia_degrees()
        .into_iter()
        .map(|d| d as u8)
        .collect();
    Ok(local_factor(split.p(), &degrees, s as u32))
}

/// Inertia degrees of the primes above `p`. Unramified primes skip the
/// equal-degree splitting step, which degrees do not need.
pub fn inertia_degrees(field: &NumberField, p: u64) -> Result<Vec<usize>> {
    if field.discriminant().is_multiple_of(&BigInt::from(p)) {
        return Ok(split_prime(field, p)?.inertia_degrees());
    }
    Ok(factor_degrees_squarefree(&PolyModP::from_bigints(
        p,
        field.coeffs(),
    )))
}

struct Block {
    primes: Vec<u64>,
    /// `degrees[offsets[i]..offsets[i + 1]]` belongs to `primes[i]`.
    offsets: Vec<u32>,
    degrees: Vec<u8>,
}

/// Inertia degrees of all primes up to a bound, computed once per field
/// and shared by every `(n, m)` cell.
pub struct SplitTable {
    degree: usize,
    prime_bound: u64,
    warning: Option<String>,
    blocks: Vec<Block>,
}

impl SplitTable {
    pub fn build(field: &NumberField, prime_bound: u64) -> Result<Self> {
        if prime_bound < 2 {
            return Err(Error::BadBound(format!(
                "prime bound {prime_bound} must be at least 2"
            )));
        }
        let base = base_primes_for(prime_bound);
        let blocks = segment_plan(prime_bound)
            .into_par_iter()
            .map(|(lo, hi)| {
                let primes = primes_in_segment(lo, hi, &base);
                let mut offsets = Vec::with_capacity(primes.len() + 1);
                let mut degrees = Vec::with_capacity(primes.len() * field.degree());
                offsets.push(0);
                for &p in &primes {
                    degrees.extend(inertia_degrees(field, p)?.into_iter().map(|d| d as u8));
                    offsets.push(degrees.len() as u32);
                }
                Ok(Block {
                    primes,
                    offsets,
                    degrees,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitTable {
            degree: field.degree(),
            prime_bound,
            warning: field.warning(),
            blocks,
        })
    }

    pub fn prime_bound(&self) -> u64 {
        self.prime_bound
    }

    pub fn prime_count(&self) -> usize {
        self.blocks.iter().map(|b| b.primes.len()).sum()
    }

    /// Iterates `(p, inertia degrees)` in increasing order of `p`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &[u8])> {
        self.blocks.iter().flat_map(|b| {
            b.primes.iter().enumerate().map(move |(i, &p)| {
                (
                    p,
                    &b.degrees[b.offsets[i] as usize..b.offsets[i + 1] as usize],
                )
            })
        })
    }

    /// `prod_{p <= P} prod_s prod_{P | p} (1 - N(P)^(-s))`.
    pub fn euler_product(&self, exponents: &[u32]) -> TwoFloat {
        let partials: Vec<TwoFloat> = self
            .blocks
            .par_iter()
            .map(|b| {
                let mut acc = TwoFloat::from(1.0);
                for (i, &p) in b.primes.iter().enumerate() {
                    let degs = &b.degrees[b.offsets[i] as usize..b.offsets[i + 1] as usize];
                    for &s in exponents {
                        acc *= local_factor(p, degs, s);
                    }
                }
                acc
            })
            .collect();
        partials
            .into_iter()
            .fold(TwoFloat::from(1.0), |acc, x| acc * x)
    }

    /// Truncated density for `n x m` matrices.
    pub fn density(&self, n: usize, m: usize) -> Result<EulerProductResult> {
        if n == 0 || n >= m {
            return Err(Error::BadShape(format!(
                "predicted density needs 1 <= n < m, got n = {n}, m = {m}"
            )));
        }
        let exponents: Vec<u32> = (0..n).map(|i| (m - i) as u32).collect();
        let value = self.euler_product(&exponents);
        Ok(EulerProductResult {
            value,
            prime_bound: self.prime_bound,
            tail_bound: tail_bound(self.degree, n, m, self.prime_bound),
            n,
            m,
            warning: self.warning.clone(),
        })
    }
}

/// `2 k n P^(1 - s) / (s - 1)` with `s = m - n + 1`, the smallest exponent.
///
/// Each omitted local factor is at least `(1 - p^-s)^(k n)`, so the omitted
/// product is at least `1 - k n sum_{p > P} p^-s >= 1 - k n P^(1-s)/(s-1)`.
pub fn tail_bound(degree: usize, n: usize, m: usize, prime_bound: u64) -> f64 {
    let s = (m - n + 1) as f64;
    2.0 * degree as f64 * n as f64 * (prime_bound as f64).powf(1.0 - s) / (s - 1.0)
}

pub fn predicted_density(
    field: &NumberField,
    n: usize,
    m: usize,
    prime_bound: u64,
) -> Result<EulerProductResult> {
    if n == 0 || n >= m {
        return Err(Error::BadShape(format!(
            "predicted density needs 1 <= n < m, got n = {n}, m = {m}"
        )));
    }
    SplitTable::build(field, prime_bound)?.density(n, m)
}
