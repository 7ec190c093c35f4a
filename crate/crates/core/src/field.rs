//! Monogenic number fields K = Q[x]/(f) and exact arithmetic in Z[theta].
//!
//! Elements are coordinate vectors in the power basis `1, theta, ...,
//! theta^(k-1)`. The rational field is the degree-one case `f = x`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{factorize, FactorBudget};
use crate::linalg::{bareiss_det, IntMatrix};
use crate::poly::{factor_mod_p, is_irreducible, PolyModP, MAX_PRIME};
use crate::primes::{is_prime_u64, small_primes};
use crate::scalar::{mul_by_theta, mul_reduce};

/// Number of primes not dividing the discriminant tried by the
/// irreducibility certificate.
pub const IRREDUCIBILITY_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FieldOptions {
    /// Accept `f` without an irreducibility certificate.
    pub assume_irreducible: bool,
    /// Compute over the order Z[theta] even where it is not maximal.
    pub allow_nonmaximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Maximality {
    /// The Dedekind criterion passed at every prime whose square divides
    /// the discriminant.
    Verified { primes_checked: Vec<u64> },
    /// The user accepted Z[theta] without a full certificate. `failed`
    /// lists primes where the criterion failed; `unverified` is set when
    /// the discriminant could not be factored.
    AssumedByUser {
        primes_checked: Vec<u64>,
        failed: Vec<u64>,
        unverified: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Irreducibility {
    Linear,
    /// `f mod p` is irreducible for this prime.
    IrreducibleModP {
        p: u64,
    },
    AssumedByUser,
}

#[derive(Clone, PartialEq, Eq)]
pub struct NumberField {
    coeffs: Vec<BigInt>,
    disc: BigInt,
    maximality: Maximality,
    irreducibility: Irreducibility,
}

/// An element of Z[theta] in the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgElem {
    #[serde(with = "crate::json::vec")]
    coords: Vec<BigInt>,
}

impl AlgElem {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<BigInt>) -> Self {
        AlgElem { coords }
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Discriminant of a monic polynomial, `(-1)^(k(k-1)/2) Res(f, f')`, with
/// the resultant taken as the Bareiss determinant of the Sylvester matrix.
pub fn discriminant(coeffs: &[BigInt]) -> BigInt {
    let k = coeffs.len() - 1;
    let deriv: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i)
        .collect();
    let size = 2 * k - 1;
    let mut entries = vec![BigInt::zero(); size * size];
    // rows of f (degree k), repeated deg f' = k - 1 times, highest term first
    for r in 0..k - 1 {
        for (j, c) in coeffs.iter().rev().enumerate() {
            entries[r * size + r + j] = c.clone();
        }
    }
    for r in 0..k {
        for (j, c) in deriv.iter().rev().enumerate() {
            entries[(k - 1 + r) * size + r + j] = c.clone();
        }
    }
    let sylvester = IntMatrix::new(size, size, entries).expect("square Sylvester matrix");
    let res = bareiss_det(&sylvester).expect("square");
    if (k * (k - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Dedekind's criterion: is Z[theta] maximal at `p` for the monic `f`?
pub fn dedekind_check(f: &[BigInt], p: u64) -> Result<bool> {
    if p >= MAX_PRIME {
        return Err(Error::PrimeTooLarge(BigInt::from(p)));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    let fbar = PolyModP::from_bigints(p, f);
    let factors = factor_mod_p(&fbar)?;
    let mut g = PolyModP::one(p);
    let mut h = PolyModP::one(p);
    for (gi, e) in &factors {
        g = g.mul(gi);
        h = h.mul(&gi.pow(e - 1));
    }
    let common = g.gcd(&h);
    if common.is_one() {
        return Ok(true);
    }
    // F = (g* h* - f) / p with g*, h* the lifts with coefficients in [0, p)
    let lift =
        |q: &PolyModP| -> Vec<BigInt> { q.coeffs().iter().map(|&c| BigInt::from(c)).collect() };
    let product = int_poly_mul(&lift(&g), &lift(&h));
    let pb = BigInt::from(p);
    let n = product.len().max(f.len());
    let big_f: Vec<BigInt> = (0..n)
        .map(|i| {
            let a = product.get(i).cloned().unwrap_or_default();
            let b = f.get(i).cloned().unwrap_or_default();
            let diff = a - b;
            debug_assert!(diff.is_multiple_of(&pb));
            diff / &pb
        })
        .collect();
    let fbar2 = PolyModP::from_bigints(p, &big_f);
    Ok(fbar2.gcd(&common).is_one())
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn eval_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// An integer root of the monic `f`, if one exists.
fn rational_root(coeffs: &[BigInt]) -> Result<Option<BigInt>> {
    let c0 = &coeffs[0];
    if c0.is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    // every root r satisfies |r| <= 1 + max |a_i| and r | a_0
    let k = coeffs.len() - 1;
    let cauchy: BigInt = coeffs[..k].iter().map(|c| c.abs()).max().unwrap() + 1;
    let test = |d: BigInt| -> Option<BigInt> {
        [d.clone(), -d]
            .into_iter()
            .find(|r| eval_int(coeffs, r).is_zero())
    };
    let bound = cauchy.clone().min(c0.abs());
    if let Some(b) = bound.to_u64().filter(|&b| b <= 1_000_000) {
        for d in 1..=b {
            let d = BigInt::from(d);
            if c0.is_multiple_of(&d) {
                if let Some(r) = test(d) {
                    return Ok(Some(r));
                }
            }
        }
        return Ok(None);
    }
    let mut divisors = vec![BigInt::one()];
    for (p, e) in factorize(c0, FactorBudget::default())? {
        let p = BigInt::from(p);
        let mut next = Vec::new();
        for d in &divisors {
            let mut pk = d.clone();
            for _ in 0..=e {
                if pk > cauchy {
                    break;
                }
                next.push(pk.clone());
                pk *= &p;
            }
        }
        divisors = next;
    }
    Ok(divisors.into_iter().find_map(test))
}

impl NumberField {
    /// Validates a monic defining polynomial (constant term first) and
    /// certifies irreducibility and maximality of Z[theta].
    pub fn new(coeffs: Vec<BigInt>, opts: FieldOptions) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        let k = coeffs.len() - 1;
        if k == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let disc = discriminant(&coeffs);
        if disc.is_zero() {
            return Err(Error::NotSquarefree);
        }
        if k == 1 {
            return Ok(NumberField {
                coeffs,
                disc,
                maximality: Maximality::Verified {
                    primes_checked: Vec::new(),
                },
                irreducibility: Irreducibility::Linear,
            });
        }
        if let Some(r) = rational_root(&coeffs)? {
            return Err(Error::HasRationalRoot(r));
        }
        let irreducibility = match irreducibility_witness(&coeffs, &disc) {
            Some(p) => Irreducibility::IrreducibleModP { p },
            None if opts.assume_irreducible => Irreducibility::AssumedByUser,
            None => {
                return Err(Error::IrreducibilityUnverified {
                    tried: IRREDUCIBILITY_TRIALS,
                })
            }
        };
        let maximality = check_maximality(&coeffs, &disc, opts.allow_nonmaximal)?;
        Ok(NumberField {
            coeffs,
            disc,
            maximality,
            irreducibility,
        })
    }

    pub fn from_i64s(coeffs: &[i64], opts: FieldOptions) -> Result<Self> {
        NumberField::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), opts)
    }

    /// The rational numbers, encoded by `f = x`.
    pub fn rationals() -> Self {
        NumberField::from_i64s(&[0, 1], FieldOptions::default()).expect("x defines Q")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Defining polynomial, constant term first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn maximality(&self) -> &Maximality {
        &self.maximality
    }

    pub fn irreducibility(&self) -> &Irreducibility {
        &self.irreducibility
    }

    /// Warning to attach to every report when Z[theta] was not certified.
    pub fn warning(&self) -> Option<String> {
        match &self.maximality {
            Maximality::Verified { .. } => None,
            Maximality::AssumedByUser {
                failed, unverified, ..
            } => Some(if *unverified {
                "WARNING: maximality of Z[theta] could not be verified; results are for the order Z[theta]".to_string()
            } else {
                format!(
                    "WARNING: Z[theta] is not maximal at p in {failed:?}; results are for the order Z[theta], not O_K"
                )
            }),
        }
    }

    /// Whether splitting `p` through `f mod p` is justified.
    pub fn maximal_at(&self, p: u64) -> bool {
        match &self.maximality {
            Maximality::AssumedByUser { .. } => true,
            Maximality::Verified { primes_checked } => {
                let p2 = BigInt::from(p) * p;
                !self.disc.is_multiple_of(&p2) || primes_checked.contains(&p)
            }
        }
    }

    /// Comma-separated coefficient list, constant term first.
    pub fn spec_string(&self) -> String {
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn elem(&self, coords: Vec<BigInt>) -> Result<AlgElem> {
        self.check_len(coords.len())?;
        Ok(AlgElem { coords })
    }

    pub fn elem_i64(&self, coords: &[i64]) -> Result<AlgElem> {
        self.elem(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_int(&self, v: impl Into<BigInt>) -> AlgElem {
        let mut coords = vec![BigInt::zero(); self.degree()];
        coords[0] = v.into();
        AlgElem { coords }
    }

    pub fn zero(&self) -> AlgElem {
        self.from_int(0)
    }

    pub fn one(&self) -> AlgElem {
        self.from_int(1)
    }

    /// The generator theta.
    pub fn theta(&self) -> AlgElem {
        self.mul_by_theta(&self.one())
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        self.check_len(a.coords.len())?;
        self.check_len(b.coords.len())?;
        Ok(AlgElem {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        self.check_len(a.coords.len())?;
        self.check_len(b.coords.len())?;
        Ok(AlgElem {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn neg(&self, a: &AlgElem) -> Result<AlgElem> {
        self.check_len(a.coords.len())?;
        Ok(AlgElem {
            coords: a.coords.iter().map(|x| -x).collect(),
        })
    }

    /// Product in Z[theta], reduced modulo `f`.
    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        self.check_len(a.coords.len())?;
        self.check_len(b.coords.len())?;
        Ok(AlgElem {
            coords: self.mul_coords(&a.coords, &b.coords),
        })
    }

    pub(crate) fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        mul_reduce(a, b, self.low_coeffs()).expect("BigInt arithmetic cannot overflow")
    }

    /// `f_0 .. f_(k-1)`, the non-leading coefficients.
    pub(crate) fn low_coeffs(&self) -> &[BigInt] {
        &self.coeffs[..self.degree()]
    }

    pub fn mul_by_theta(&self, a: &AlgElem) -> AlgElem {
        AlgElem {
            coords: mul_by_theta(&a.coords, self.low_coeffs())
                .expect("BigInt arithmetic cannot overflow"),
        }
    }

    /// Matrix whose i-th row is the coordinate vector of `a * theta^i`.
    pub fn multiplication_matrix(&self, a: &AlgElem) -> Result<IntMatrix> {
        self.check_len(a.coords.len())?;
        let k = self.degree();
        let mut rows = Vec::with_capacity(k);
        let mut cur = a.clone();
        for i in 0..k {
            if i > 0 {
                cur = self.mul_by_theta(&cur);
            }
            rows.push(cur.coords.clone());
        }
        IntMatrix::from_rows(k, rows)
    }

    /// Absolute norm N_{K/Q}(a), the determinant of multiplication by `a`.
    pub fn norm(&self, a: &AlgElem) -> Result<BigInt> {
        bareiss_det(&self.multiplication_matrix(a)?)
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField[{}]", self.spec_string())
    }
}

fn irreducibility_witness(coeffs: &[BigInt], disc: &BigInt) -> Option<u64> {
    small_primes()
        .iter()
        .copied()
        .filter(|&p| !disc.is_multiple_of(&BigInt::from(p)))
        .take(IRREDUCIBILITY_TRIALS)
        .find(|&p| is_irreducible(&PolyModP::from_bigints(p, coeffs)))
}

fn check_maximality(coeffs: &[BigInt], disc: &BigInt, allow: bool) -> Result<Maximality> {
    let factors = match factorize(disc, FactorBudget::default()) {
        Ok(f) => f,
        Err(_) if allow => {
            return Ok(Maximality::AssumedByUser {
                primes_checked: Vec::new(),
                failed: Vec::new(),
                unverified: true,
            });
        }
        Err(e) => return Err(e),
    };
    let mut checked = Vec::new();
    let mut failed = Vec::new();
    let mut unverified = false;
    for (p, e) in factors {
        if e < 2 {
            continue;
        }
        let Some(p) = p.to_u64().filter(|&p| p < MAX_PRIME) else {
            if allow {
                unverified = true;
                continue;
            }
            return Err(Error::PrimeTooLarge(p.into()));
        };
        if dedekind_check(coeffs, p)? {
            checked.push(p);
        } else if allow {
            failed.push(p);
        } else {
            return Err(Error::NotMaximal(p));
        }
    }
    Ok(if failed.is_empty() && !unverified {
        Maximality::Verified {
            primes_checked: checked,
        }
    } else {
        Maximality::AssumedByUser {
            primes_checked: checked,
            failed,
            unverified,
        }
    })
}

/// Parses a coefficient list given as `"-7,-13,0,0,0,1"` or as a JSON
/// integer array `"[-7,-13,0,0,0,1]"`.
pub fn parse_coeff_list(text: &str) -> Result<Vec<BigInt>> {
    let t = text.trim();
    let body = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(t);
    if body.trim().is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    body.split(',')
        .map(|s| {
            BigInt::from_str(s.trim())
                .map_err(|_| Error::Parse(format!("bad coefficient {:?} in {text:?}", s.trim())))
        })
        .collect()
}

/// Builds a field from its textual coefficient list.
pub fn parse_field(text: &str, opts: FieldOptions) -> Result<NumberField> {
    NumberField::new(parse_coeff_list(text)?, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(c: &[i64]) -> NumberField {
        NumberField::from_i64s(c, FieldOptions::default()).unwrap()
    }

    fn el(k: &NumberField, c: &[i64]) -> AlgElem {
        k.elem_i64(c).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn quadratic_discriminants() {
        // oracle: b^2 - 4c for x^2 + bx + c
        assert_eq!(field(&[-2, 0, 1]).discriminant(), &big(8));
        assert_eq!(field(&[1, 0, 1]).discriminant(), &big(-4));
        for b in -6i64..=6 {
            for c in -6i64..=6 {
                let d = discriminant(&[big(c), big(b), big(1)]);
                assert_eq!(d, big(b * b - 4 * c), "x^2 + {b}x + {c}");
            }
        }
    }

    #[test]
    fn cubic_and_quintic_discriminants() {
        // -4a^3 - 27b^2 for x^3 + ax + b
        assert_eq!(discriminant(&[big(1), big(1), big(0), big(1)]), big(-31));
        // 5^5 c^4 + 4^4 a^5 for x^5 + ax + c
        let q = 3125i64 * 7i64.pow(4) + 256 * (-13i64).pow(5);
        assert_eq!(
            discriminant(&[big(-7), big(-13), big(0), big(0), big(0), big(1)]),
            big(q)
        );
    }

    #[test]
    fn construction_errors() {
        let opts = FieldOptions::default();
        assert_eq!(
            NumberField::from_i64s(&[-4, 0, 1], opts).unwrap_err(),
            Error::HasRationalRoot(big(2))
        );
        assert_eq!(
            NumberField::from_i64s(&[1, 0, 2], opts).unwrap_err(),
            Error::NotMonic
        );
        assert_eq!(
            NumberField::from_i64s(&[], opts).unwrap_err(),
            Error::EmptyPolynomial
        );
        assert_eq!(
            NumberField::from_i64s(&[1, 2, 1], opts).unwrap_err(),
            Error::NotSquarefree
        );
        assert_eq!(
            NumberField::from_i64s(&[3, 0, 1], opts).unwrap_err(),
            Error::NotMaximal(2)
        );
        // x^4 + 1 is reducible modulo every prime
        assert_eq!(
            NumberField::from_i64s(&[1, 0, 0, 0, 1], opts).unwrap_err(),
            Error::IrreducibilityUnverified { tried: 100 }
        );
        let assumed = NumberField::from_i64s(
            &[1, 0, 0, 0, 1],
            FieldOptions {
                assume_irreducible: true,
                ..opts
            },
        )
        .unwrap();
        assert_eq!(assumed.irreducibility(), &Irreducibility::AssumedByUser);
    }

    #[test]
    fn nonmaximal_order_on_request() {
        let k = NumberField::from_i64s(
            &[3, 0, 1],
            FieldOptions {
                allow_nonmaximal: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(k.warning().unwrap().contains("[2]"));
        assert!(k.maximal_at(2));
    }

    #[test]
    fn table_fields_are_monogenic() {
        for c in [
            &[0, 1][..],
            &[-2, 0, 1],
            &[1, 1, 0, 1],
            &[-7, -13, 0, 0, 0, 1],
        ] {
            let k = field(c);
            assert!(matches!(k.maximality(), Maximality::Verified { .. }));
            assert!(k.warning().is_none());
        }
        assert_eq!(
            field(&[-2, 0, 1]).maximality(),
            &Maximality::Verified {
                primes_checked: vec![2]
            }
        );
    }

    #[test]
    fn dedekind_examples() {
        let f = [big(-2), big(0), big(1)];
        assert!(dedekind_check(&f, 5).unwrap());
        assert!(dedekind_check(&f, 2).unwrap());
        assert!(!dedekind_check(&[big(3), big(0), big(1)], 2).unwrap());
        assert!(matches!(dedekind_check(&f, 4), Err(Error::NotPrime(_))));
        // x^2 - 5: Z[sqrt5] has index 2 in the maximal order
        assert!(!dedekind_check(&[big(-5), big(0), big(1)], 2).unwrap());
        // x^2 - 3 is maximal at 2 and 3
        assert!(dedekind_check(&[big(-3), big(0), big(1)], 2).unwrap());
        assert!(dedekind_check(&[big(-3), big(0), big(1)], 3).unwrap());
    }

    #[test]
    fn multiplication_examples() {
        let k = field(&[-2, 0, 1]);
        assert_eq!(
            k.mul(&el(&k, &[1, 1]), &el(&k, &[1, -1])).unwrap(),
            el(&k, &[-1, 0])
        );
        assert_eq!(
            k.mul(&el(&k, &[0, 1]), &el(&k, &[0, 1])).unwrap(),
            el(&k, &[2, 0])
        );
        let c = field(&[1, 1, 0, 1]);
        assert_eq!(
            c.mul(&el(&c, &[0, 1, 0]), &el(&c, &[0, 0, 1])).unwrap(),
            el(&c, &[-1, -1, 0])
        );
        assert_eq!(
            k.mul(&el(&k, &[1, 2]), &el(&c, &[1, 2, 3])).unwrap_err(),
            Error::DegreeMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn norm_examples() {
        let k = field(&[-2, 0, 1]);
        // det [[0,2],[1,0]] = -2
        assert_eq!(k.norm(&el(&k, &[0, 1])).unwrap(), big(-2));
        assert_eq!(k.norm(&k.one()).unwrap(), big(1));
        // a^2 - 2b^2 at (3, 1)
        assert_eq!(k.norm(&el(&k, &[3, 1])).unwrap(), big(7));
        let q = NumberField::rationals();
        assert_eq!(q.norm(&el(&q, &[-5])).unwrap(), big(-5));
        assert_eq!(
            q.mul(&el(&q, &[-5]), &el(&q, &[7])).unwrap(),
            el(&q, &[-35])
        );
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!(
            parse_coeff_list("-7,-13,0,0,0,1").unwrap(),
            [-7, -13, 0, 0, 0, 1].map(big).to_vec()
        );
        assert_eq!(
            parse_coeff_list("[ -2, 0, 1 ]").unwrap(),
            [-2, 0, 1].map(big).to_vec()
        );
        assert!(matches!(parse_coeff_list("1,x"), Err(Error::Parse(_))));
        assert_eq!(parse_coeff_list(""), Err(Error::EmptyPolynomial));
    }

    const TABLE_FIELDS: [&[i64]; 4] = [&[0, 1], &[-2, 0, 1], &[1, 1, 0, 1], &[-7, -13, 0, 0, 0, 1]];

    fn field_and_elems(n: usize, range: i64) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (0..TABLE_FIELDS.len()).prop_flat_map(move |fi| {
            let k = TABLE_FIELDS[fi].len() - 1;
            (
                Just(fi),
                prop::collection::vec(prop::collection::vec(-range..=range, k), n),
            )
        })
    }

    #[test]
    fn ring_axioms_exhaustive_small() {
        let k = field(&[-2, 0, 1]);
        let vals: Vec<AlgElem> = (-1..=1)
            .flat_map(|a| (-1..=1).map(move |b| [a, b]))
            .map(|c| el(&k, &c))
            .collect();
        for a in &vals {
            for b in &vals {
                assert_eq!(k.mul(a, b).unwrap(), k.mul(b, a).unwrap());
                for c in &vals {
                    let l = k.mul(&k.mul(a, b).unwrap(), c).unwrap();
                    let r = k.mul(a, &k.mul(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                    let d1 = k.mul(a, &k.add(b, c).unwrap()).unwrap();
                    let d2 = k.add(&k.mul(a, b).unwrap(), &k.mul(a, c).unwrap()).unwrap();
                    assert_eq!(d1, d2);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2_000))]

        #[test]
        fn ring_axioms((fi, xs) in field_and_elems(3, 50)) {
            let k = field(TABLE_FIELDS[fi]);
            let (a, b, c) = (el(&k, &xs[0]), el(&k, &xs[1]), el(&k, &xs[2]));
            prop_assert_eq!(k.mul(&a, &b)?, k.mul(&b, &a)?);
            prop_assert_eq!(k.mul(&k.mul(&a, &b)?, &c)?, k.mul(&a, &k.mul(&b, &c)?)?);
            prop_assert_eq!(k.mul(&a, &k.add(&b, &c)?)?, k.add(&k.mul(&a, &b)?, &k.mul(&a, &c)?)?);
            prop_assert_eq!(k.mul(&a, &k.one())?, a.clone());
            prop_assert_eq!(k.sub(&k.add(&a, &b)?, &b)?, a.clone());
            prop_assert!(k.add(&a, &k.neg(&a)?)?.is_zero());
        }

        #[test]
        fn norm_zero_iff_zero((fi, xs) in field_and_elems(1, 3)) {
            let k = field(TABLE_FIELDS[fi]);
            let a = el(&k, &xs[0]);
            prop_assert_eq!(k.norm(&a)?.is_zero(), a.is_zero());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn norm_multiplicative((fi, xs) in field_and_elems(2, 20)) {
            let k = field(TABLE_FIELDS[fi]);
            let (a, b) = (el(&k, &xs[0]), el(&k, &xs[1]));
            prop_assert_eq!(k.norm(&k.mul(&a, &b)?)?, k.norm(&a)? * k.norm(&b)?);
        }
    }
}
