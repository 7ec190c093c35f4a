//! Exact integer linear algebra: fraction-free determinants, row-style
//! Hermite normal form, and rank of O_K matrices modulo a prime ideal.
//!
//! HNF convention: the result's rows are the nonzero rows of an echelon
//! basis of the row lattice. Pivot columns increase strictly from row to
//! row, every pivot is positive, and every entry above a pivot lies in
//! `[0, pivot)`. Entries left of a row's pivot are zero.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::AlgElem;
use crate::scalar::{self, convert};
use crate::splitting::{reduce_elem, PrimeSplit};

/// A dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadShape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::BadShape(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(IntMatrix {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub fn bareiss_det(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let rows = m.row_vecs();
    let small = rows
        .iter()
        .map(|r| convert::<i128>(r))
        .collect::<Option<Vec<_>>>();
    Ok(small
        .and_then(bareiss_rows)
        .map(|d| scalar::Scalar::to_big(&d))
        .unwrap_or_else(|| bareiss_rows(rows).expect("BigInt arithmetic cannot overflow")))
}

pub(crate) fn bareiss_rows<T: scalar::Scalar>(mut a: Vec<Vec<T>>) -> Option<T> {
    let n = a.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Some(T::zero()),
            }
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let v = row[j]
                    .mul(&pivot_row[k])?
                    .sub(&row[k].mul(&pivot_row[j])?)?;
                row[j] = v.exact_quo(&prev)?.expect("Bareiss division is exact");
            }
            row[k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        Some(det)
    }
}

/// `[Z^k : L]` for the lattice spanned by `rows` plus `d Z^k`, where `d` is
/// positive. When `d` is a multiple of the index of the lattice spanned by
/// `rows` alone, the two indices coincide.
pub(crate) fn index_mod<T: scalar::Scalar>(mut rows: Vec<Vec<T>>, k: usize, d: T) -> Option<T> {
    let mut r = d;
    let mut index = T::one();
    for row in rows.iter_mut() {
        for v in row.iter_mut() {
            *v = v.modulo(&r)?;
        }
    }
    for c in 0..k {
        if r.is_one() {
            break;
        }
        let mut pivot: Option<usize> = None;
        for i in 0..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let Some(p) = pivot else {
                pivot = Some(i);
                continue;
            };
            combine_rows(&mut rows, p, i, c)?;
            for t in [p, i] {
                for v in rows[t].iter_mut().skip(c + 1) {
                    *v = v.modulo(&r)?;
                }
            }
        }
        let a = match pivot {
            Some(p) => rows.swap_remove(p)[c].clone(),
            None => T::zero(),
        };
        let (g, _, _) = a.xgcd(&r)?;
        index = index.mul(&g)?;
        r = r.exact_quo(&g)?.expect("gcd divides the modulus");
        for row in rows.iter_mut() {
            for v in row.iter_mut().skip(c + 1) {
                *v = v.modulo(&r)?;
            }
        }
        rows.retain(|row| row.iter().skip(c + 1).any(|v| !v.is_zero()));
    }
    Some(index)
}

fn combine_rows<T: scalar::Scalar>(
    rows: &mut [Vec<T>],
    top: usize,
    other: usize,
    col: usize,
) -> Option<()> {
    let a = rows[top][col].clone();
    let b = rows[other][col].clone();
    let (t, o) = pick_two(rows, top, other);
    if let Some(q) = b.exact_quo(&a)? {
        for (x, y) in o.iter_mut().zip(t.iter()).skip(col) {
            *x = x.sub_mul(&q, y)?;
        }
        return Some(());
    }
    let (g, s, u) = a.xgcd(&b)?;
    let a_g = a.exact_quo(&g)??;
    let b_g = b.exact_quo(&g)??;
    for (x, y) in t.iter_mut().zip(o.iter_mut()).skip(col) {
        let new_top = s.mul(x)?.add(&u.mul(y)?)?;
        let new_other = a_g.mul(y)?.sub(&b_g.mul(x)?)?;
        *x = new_top;
        *y = new_other;
    }
    Some(())
}

fn pick_two<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    debug_assert!(i < j);
    let (lo, hi) = v.split_at_mut(j);
    (&mut lo[i], &mut hi[0])
}

/// Row-style HNF of the given rows; `None` on scalar overflow.
pub(crate) fn hnf_rows<T: scalar::Scalar>(rows: Vec<Vec<T>>, cols: usize) -> Option<Vec<Vec<T>>> {
    let mut rows: Vec<Vec<T>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows.len() {
            break;
        }
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            if rows[r][c].is_zero() {
                rows.swap(r, i);
                continue;
            }
            combine_rows(&mut rows, r, i, c)?;
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for v in rows[r].iter_mut() {
                *v = v.neg()?;
            }
        }
        let (above, rest) = rows.split_at_mut(r);
        let pivot_row = &rest[0];
        let pivot = &pivot_row[c];
        for row in above.iter_mut() {
            let q = row[c].div_floor(pivot)?;
            if q.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                *x = x.sub_mul(&q, y)?;
            }
        }
        r += 1;
        // rows emptied by the elimination carry no information
        let mut keep = r;
        for i in r..rows.len() {
            if rows[i].iter().any(|v| !v.is_zero()) {
                rows.swap(keep, i);
                keep += 1;
            }
        }
        rows.truncate(keep);
    }
    rows.truncate(r);
    Some(rows)
}

/// Row-style Hermite normal form; zero rows are dropped, so the zero
/// matrix yields an empty (0 x cols) result.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let rows = m.row_vecs();
    let out = rows
        .iter()
        .map(|r| convert::<i128>(r))
        .collect::<Option<Vec<_>>>()
        .and_then(|small| hnf_rows(small, m.cols))
        .map(|h| {
            h.into_iter()
                .map(|r| r.iter().map(scalar::Scalar::to_big).collect())
                .collect()
        })
        .unwrap_or_else(|| hnf_rows(rows, m.cols).expect("BigInt arithmetic cannot overflow"));
    IntMatrix::from_rows(m.cols, out).expect("row lengths preserved")
}

/// Index `[Z^cols : L]` of the lattice spanned by an HNF basis, or `None`
/// when the lattice does not have full rank.
pub fn hnf_index(h: &IntMatrix) -> Option<BigInt> {
    if h.rows != h.cols {
        return None;
    }
    Some((0..h.rows).map(|i| h.get(i, i).clone()).product())
}

/// Rank of the image of an O_K matrix in the residue field of the `i`-th
/// prime ideal of `split`, by Gaussian elimination.
pub fn rank_over_residue_field(split: &PrimeSplit, i: usize, m: &[Vec<AlgElem>]) -> Result<usize> {
    let field = split.residue_field(i)?;
    let mut rows = m
        .iter()
        .map(|row| row.iter().map(|a| reduce_elem(split, i, a)).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = field.inv(&rows[rank][c]).expect("nonzero in a field");
        let pivot_row: Vec<_> = rows[rank].iter().map(|v| field.mul(v, &inv)).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                *x = x.sub(&field.mul(&factor, y));
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    fn to_matrix(m: &[Vec<i64>]) -> IntMatrix {
        let cols = m.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(
            cols,
            m.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Reduces `v` against an HNF basis; zero remainder iff `v` is in the lattice.
    fn in_lattice(h: &IntMatrix, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for i in 0..h.rows() {
            let row = h.row(i);
            let c = row.iter().position(|x| !x.is_zero()).unwrap();
            if v[..c].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, r) = v[c].div_rem(&row[c]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    fn check_hnf_shape(h: &IntMatrix) {
        let mut last_pivot = None;
        for i in 0..h.rows() {
            let c = h.row(i).iter().position(|x| !x.is_zero()).unwrap();
            assert!(last_pivot.is_none_or(|p| c > p));
            assert!(h.get(i, c).is_positive());
            for j in 0..i {
                assert!(!h.get(j, c).is_negative() && h.get(j, c) < h.get(i, c));
            }
            last_pivot = Some(c);
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(
            bareiss_det(&to_matrix(&[vec![2, 0], vec![0, 3]])).unwrap(),
            6.into()
        );
        assert_eq!(
            bareiss_det(&to_matrix(&[vec![1, 2], vec![3, 4]])).unwrap(),
            (-2).into()
        );
        let m = vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]];
        assert_eq!(cofactor_det(&m), -3);
        assert_eq!(bareiss_det(&to_matrix(&m)).unwrap(), (-3).into());
        assert!(matches!(
            bareiss_det(&to_matrix(&[vec![1, 2]])),
            Err(Error::NotSquare { rows: 1, cols: 2 })
        ));
        let zero_pivot = vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]];
        assert_eq!(
            bareiss_det(&to_matrix(&zero_pivot)).unwrap(),
            cofactor_det(&zero_pivot).into()
        );
    }

    #[test]
    fn hnf_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(hnf(&id), id);
        let h = hnf(&to_matrix(&[vec![2, 0], vec![3, 0], vec![0, 1]]));
        assert_eq!(h, IntMatrix::identity(2));
        let d = to_matrix(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(hnf(&d), d);
        let z = hnf(&to_matrix(&[vec![0, 0], vec![0, 0]]));
        assert_eq!((z.rows(), z.cols()), (0, 2));
        assert_eq!(hnf_index(&z), None);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let h = hnf(&to_matrix(&[vec![1, 7, 3], vec![0, 2, -5], vec![0, 0, 3]]));
        assert_eq!(h, to_matrix(&[vec![1, 1, 0], vec![0, 2, 1], vec![0, 0, 3]]));
        check_hnf_shape(&h);
    }

    fn small_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1..=max_dim)
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n))
    }

    fn rect_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..7, 1usize..5)
            .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20i64..=20, c), r))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn bareiss_matches_cofactor(m in small_matrix(4)) {
            prop_assert_eq!(bareiss_det(&to_matrix(&m)).unwrap(), BigInt::from(cofactor_det(&m)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1_000))]
        #[test]
        fn hnf_canonical_and_span_preserving(m in rect_matrix()) {
            let a = to_matrix(&m);
            let h = hnf(&a);
            check_hnf_shape(&h);
            prop_assert_eq!(hnf(&h), h.clone());
            for i in 0..a.rows() {
                prop_assert!(in_lattice(&h, a.row(i)));
            }
            // a unimodular change of generators spans the same lattice, so
            // both must reach the same canonical form
            let mut moved = a.row_vecs();
            moved.reverse();
            let last = moved.last().unwrap().clone();
            if moved.len() > 1 {
                for (x, y) in moved[0].iter_mut().zip(&last) {
                    *x += y * 3;
                }
            }
            let moved = IntMatrix::from_rows(a.cols(), moved).unwrap();
            prop_assert_eq!(hnf(&moved), h);
        }

        #[test]
        fn hnf_det_matches(m in small_matrix(4)) {
            let a = to_matrix(&m);
            let d = bareiss_det(&a).unwrap();
            let h = hnf(&a);
            if d.is_zero() {
                prop_assert!(h.rows() < a.rows());
            } else {
                prop_assert_eq!(hnf_index(&h).unwrap(), d.abs());
            }
        }
    }
}
