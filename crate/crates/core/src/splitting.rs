//! Splitting of rational primes in O_K = Z[theta]: `p O_K = prod P_i^e_i`
//! with `P_i = (p, g_i(theta))` read off from `f = prod g_i^e_i mod p`.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{AlgElem, NumberField};
use crate::poly::{factor_mod_p, PolyModP, ResidueField, MAX_PRIME};
use crate::primes::is_prime_u64;

/// One prime ideal `(p, g(theta))` above `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub g: PolyModP,
    /// Ramification index.
    pub e: u32,
    /// Inertia degree, equal to `deg g`.
    pub f_deg: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSplit {
    p: u64,
    degree: usize,
    factors: Vec<PrimeIdeal>,
}

impl PrimeSplit {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Degree of the field this split belongs to.
    pub fn field_degree(&self) -> usize {
        self.degree
    }

    pub fn factors(&self) -> &[PrimeIdeal] {
        &self.factors
    }

    pub fn inertia_degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.f_deg).collect()
    }

    pub fn residue_field(&self, i: usize) -> Result<ResidueField> {
        let ideal = self.factor(i)?;
        Ok(ResidueField::new(ideal.g.clone()))
    }

    pub fn factor(&self, i: usize) -> Result<&PrimeIdeal> {
        self.factors.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.factors.len(),
        })
    }
}

/// Serializable view: `{"p": 7, "factors": [{"g": [3, 1], "e": 1, "f": 1}, ...]}`.
#[derive(Debug, Clone, Serialize)]
pub struct SplitSummary {
    pub p: u64,
    pub factors: Vec<IdealSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealSummary {
    pub g: Vec<u64>,
    pub e: u32,
    pub f: usize,
}

impl From<&PrimeSplit> for SplitSummary {
    fn from(s: &PrimeSplit) -> Self {
        SplitSummary {
            p: s.p,
            factors: s
                .factors
                .iter()
                .map(|i| IdealSummary {
                    g: i.g.coeffs().to_vec(),
                    e: i.e,
                    f: i.f_deg,
                })
                .collect(),
        }
    }
}

/// Factors `p O_K` into prime ideals.
pub fn split_prime(field: &NumberField, p: u64) -> Result<PrimeSplit> {
    if p >= MAX_PRIME {
        return Err(Error::PrimeTooLarge(BigInt::from(p)));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    if !field.maximal_at(p) {
        return Err(Error::UnverifiedAtP(p));
    }
    let fbar = PolyModP::from_bigints(p, field.coeffs());
    let factors = factor_mod_p(&fbar)?
        .into_iter()
        .map(|(g, e)| {
            let f_deg = g.degree().expect("nonconstant factor");
            PrimeIdeal { g, e, f_deg }
        })
        .collect::<Vec<_>>();
    debug_assert!(
        field.discriminant().is_multiple_of(&BigInt::from(p)) || factors.iter().all(|f| f.e == 1)
    );
    Ok(PrimeSplit {
        p,
        degree: field.degree(),
        factors,
    })
}

/// Image of `a` in the residue field `O_K / P_i = F_p[x]/(g_i)`.
pub fn reduce_elem(split: &PrimeSplit, i: usize, a: &AlgElem) -> Result<PolyModP> {
    let ideal = split.factor(i)?;
    if a.coords().len() != split.degree {
        return Err(Error::DegreeMismatch {
            expected: split.degree,
            found: a.coords().len(),
        });
    }
    Ok(PolyModP::from_bigints(split.p, a.coords()).rem(&ideal.g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldOptions;
    use crate::primes::primes_up_to;
    use proptest::prelude::*;

    fn field(c: &[i64]) -> NumberField {
        NumberField::from_i64s(c, FieldOptions::default()).unwrap()
    }

    const TABLE_FIELDS: [&[i64]; 4] = [&[0, 1], &[-2, 0, 1], &[1, 1, 0, 1], &[-7, -13, 0, 0, 0, 1]];

    #[test]
    fn sqrt2_examples() {
        let k = field(&[-2, 0, 1]);
        let s7 = split_prime(&k, 7).unwrap();
        assert_eq!(s7.inertia_degrees(), vec![1, 1]);
        assert!(s7.factors().iter().all(|f| f.e == 1));
        let s3 = split_prime(&k, 3).unwrap();
        assert_eq!(s3.inertia_degrees(), vec![2]);
        assert_eq!(s3.factors()[0].e, 1);
        let s2 = split_prime(&k, 2).unwrap();
        assert_eq!(s2.factors().len(), 1);
        assert_eq!(s2.factors()[0].g, PolyModP::x(2));
        assert_eq!(s2.factors()[0].e, 2);
        assert!(matches!(split_prime(&k, 9), Err(Error::NotPrime(_))));
    }

    #[test]
    fn reduction_examples() {
        let k = field(&[-2, 0, 1]);
        let s2 = split_prime(&k, 2).unwrap();
        assert!(reduce_elem(&s2, 0, &k.theta()).unwrap().is_zero());
        assert!(reduce_elem(&s2, 0, &k.one()).unwrap().is_one());
        let s7 = split_prime(&k, 7).unwrap();
        assert_eq!(s7.factors()[0].g, PolyModP::from_i64s(7, &[3, 1]));
        let a = k.elem_i64(&[1, 1]).unwrap();
        assert_eq!(reduce_elem(&s7, 0, &a).unwrap(), PolyModP::constant(7, 5));
        assert_eq!(
            reduce_elem(&s7, 2, &a).unwrap_err(),
            Error::IndexOutOfRange { index: 2, len: 2 }
        );
    }

    #[test]
    fn degree_identity_up_to_10_000() {
        for c in TABLE_FIELDS {
            let k = field(c);
            for p in primes_up_to(10_000) {
                let s = split_prime(&k, p).unwrap();
                let sum: usize = s.factors().iter().map(|f| f.e as usize * f.f_deg).sum();
                assert_eq!(sum, k.degree(), "field {c:?}, p = {p}");
                if !k.discriminant().is_multiple_of(&BigInt::from(p)) {
                    assert!(s.factors().iter().all(|f| f.e == 1));
                }
                for w in s.factors().windows(2) {
                    assert_ne!(w[0].g, w[1].g);
                }
                if k.degree() == 1 {
                    assert_eq!(s.inertia_degrees(), vec![1]);
                }
            }
        }
    }

    fn case() -> impl Strategy<Value = (usize, usize, Vec<i64>, Vec<i64>)> {
        (0..TABLE_FIELDS.len(), 0usize..40).prop_flat_map(|(fi, pi)| {
            let k = TABLE_FIELDS[fi].len() - 1;
            (
                Just(fi),
                Just(pi),
                prop::collection::vec(-1000i64..1000, k),
                prop::collection::vec(-1000i64..1000, k),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2_000))]
        #[test]
        fn reduction_is_a_ring_hom((fi, pi, xa, xb) in case()) {
            let k = field(TABLE_FIELDS[fi]);
            let p = primes_up_to(200)[pi];
            let s = split_prime(&k, p).unwrap();
            let (a, b) = (k.elem_i64(&xa)?, k.elem_i64(&xb)?);
            for i in 0..s.factors().len() {
                let res = s.residue_field(i)?;
                let (ra, rb) = (reduce_elem(&s, i, &a)?, reduce_elem(&s, i, &b)?);
                prop_assert_eq!(reduce_elem(&s, i, &k.mul(&a, &b)?)?, res.mul(&ra, &rb));
                prop_assert_eq!(reduce_elem(&s, i, &k.add(&a, &b)?)?, res.reduce(&ra.add(&rb)));
                if reduce_elem(&s, i, &a)?.is_zero() {
                    prop_assert!(k.norm(&a)?.is_multiple_of(&BigInt::from(p)));
                }
            }
        }
    }
}
