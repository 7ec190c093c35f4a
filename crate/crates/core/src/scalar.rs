//! Integer scalars for the exact kernels (minors, HNF). Every operation is
//! checked: `i128` reports overflow as `None` so callers can rerun the same
//! computation over `BigInt`, which never overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub(crate) trait Scalar: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Floored quotient; `o` is nonzero.
    fn div_floor(&self, o: &Self) -> Option<Self>;
    /// `Some(self / o)` when `o` divides `self` exactly.
    fn exact_quo(&self, o: &Self) -> Option<Option<Self>>;
    /// `(g, x, y)` with `g = gcd(self, o) = x self + y o`.
    fn xgcd(&self, o: &Self) -> Option<(Self, Self, Self)>;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Least nonnegative residue modulo a positive `m`.
    fn modulo(&self, m: &Self) -> Option<Self> {
        self.sub_mul(&self.div_floor(m)?, m)
    }

    /// `self - q * y`
    fn sub_mul(&self, q: &Self, y: &Self) -> Option<Self> {
        self.sub(&q.mul(y)?)
    }
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn modulo(&self, m: &Self) -> Option<Self> {
        self.checked_rem_euclid(*m)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_floor(&self, o: &Self) -> Option<Self> {
        let q = self.checked_div(*o)?;
        if (self % o != 0) && ((*self < 0) != (*o < 0)) {
            q.checked_sub(1)
        } else {
            Some(q)
        }
    }
    fn exact_quo(&self, o: &Self) -> Option<Option<Self>> {
        let r = self.checked_rem(*o)?;
        if r != 0 {
            return Some(None);
        }
        Some(Some(self.checked_div(*o)?))
    }
    fn xgcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let (mut r0, mut r1) = (*self, *o);
        let (mut x0, mut x1) = (1i128, 0i128);
        let (mut y0, mut y1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0.checked_div(r1)?;
            (r0, r1) = (r1, r0.checked_sub(q.checked_mul(r1)?)?);
            (x0, x1) = (x1, x0.checked_sub(q.checked_mul(x1)?)?);
            (y0, y1) = (y1, y0.checked_sub(q.checked_mul(y1)?)?);
        }
        if r0 < 0 {
            Some((r0.checked_neg()?, x0.checked_neg()?, y0.checked_neg()?))
        } else {
            Some((r0, x0, y0))
        }
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn modulo(&self, m: &Self) -> Option<Self> {
        Some(self.mod_floor(m))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_floor(&self, o: &Self) -> Option<Self> {
        Some(Integer::div_floor(self, o))
    }
    fn exact_quo(&self, o: &Self) -> Option<Option<Self>> {
        let (q, r) = self.div_rem(o);
        Some(Zero::is_zero(&r).then_some(q))
    }
    fn xgcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let e = self.extended_gcd(o);
        Some((e.gcd, e.x, e.y))
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn sub_mul(&self, q: &Self, y: &Self) -> Option<Self> {
        Some(self - q * y)
    }
}

pub(crate) fn convert<T: Scalar>(v: &[BigInt]) -> Option<Vec<T>> {
    v.iter().map(T::from_big).collect()
}

/// Reduces coefficients of degree `>= k` with `theta^k = -sum f_j theta^j`,
/// where `f_low` holds `f_0 .. f_(k-1)`, then truncates to length `k`.
pub(crate) fn reduce_mod_f<T: Scalar>(prod: &mut Vec<T>, f_low: &[T]) -> Option<()> {
    let k = f_low.len();
    for i in (k..prod.len()).rev() {
        if prod[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut prod[i], T::zero());
        for (j, fj) in f_low.iter().enumerate() {
            if !fj.is_zero() {
                prod[i - k + j] = prod[i - k + j].sub_mul(&c, fj)?;
            }
        }
    }
    prod.truncate(k);
    Some(())
}

/// Product of two coordinate vectors in Z[theta].
pub(crate) fn mul_reduce<T: Scalar>(a: &[T], b: &[T], f_low: &[T]) -> Option<Vec<T>> {
    let mut prod = vec![T::zero(); 2 * f_low.len() - 1];
    mul_reduce_into(a, b, f_low, &mut prod)?;
    prod.truncate(f_low.len());
    Some(prod)
}

/// As [`mul_reduce`], writing into `prod` (length `2k - 1`); the result is
/// the first `k` entries.
pub(crate) fn mul_reduce_into<T: Scalar>(
    a: &[T],
    b: &[T],
    f_low: &[T],
    prod: &mut [T],
) -> Option<()> {
    let k = f_low.len();
    for v in prod.iter_mut() {
        *v = T::zero();
    }
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] = prod[i + j].add(&x.mul(y)?)?;
            }
        }
    }
    for i in (k..prod.len()).rev() {
        if prod[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut prod[i], T::zero());
        for (j, fj) in f_low.iter().enumerate() {
            if !fj.is_zero() {
                prod[i - k + j] = prod[i - k + j].sub_mul(&c, fj)?;
            }
        }
    }
    Some(())
}

pub(crate) fn mul_by_theta<T: Scalar>(a: &[T], f_low: &[T]) -> Option<Vec<T>> {
    let mut shifted = Vec::with_capacity(a.len() + 1);
    shifted.push(T::zero());
    shifted.extend(a.iter().cloned());
    reduce_mod_f(&mut shifted, f_low)?;
    Some(shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn i128_matches_bigint(a in -1_000_000i128..1_000_000, b in -1_000_000i128..1_000_000) {
            let (ba, bb) = (BigInt::from(a), BigInt::from(b));
            if b != 0 {
                prop_assert_eq!(Scalar::div_floor(&a, &b).unwrap().to_big(), Scalar::div_floor(&ba, &bb).unwrap());
                prop_assert_eq!(
                    a.exact_quo(&b).unwrap().map(|v| v.to_big()),
                    ba.exact_quo(&bb).unwrap()
                );
            }
            let (g, x, y) = a.xgcd(&b).unwrap();
            prop_assert!(g >= 0);
            prop_assert_eq!(g, x * a + y * b);
            prop_assert_eq!(g.to_big(), Integer::gcd(&ba, &bb));
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(Scalar::mul(&i128::MAX, &2), None);
        assert_eq!(Scalar::neg(&i128::MIN), None);
        assert_eq!(Scalar::div_floor(&i128::MIN, &-1), None);
    }
}
