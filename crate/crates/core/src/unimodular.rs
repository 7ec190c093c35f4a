//! Rectangular unimodularity over O_K.
//!
//! An n x m matrix (n <= m) is unimodular iff its n x n minors generate the
//! unit ideal. The primary test builds the Z-lattice of that ideal from the
//! products `minor * theta^i` and reads the index `[O_K : I]` off its
//! Hermite normal form. The cross-check tests full rank modulo every prime
//! ideal above the primes dividing the gcd of the minors' norms.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factor::{prime_divisors, FactorBudget};
use crate::field::{AlgElem, FieldOptions, NumberField};
use crate::linalg::{bareiss_rows, index_mod, rank_over_residue_field, IntMatrix};
use crate::poly::MAX_PRIME;
use crate::scalar::{self, convert};
use crate::splitting::{split_prime, PrimeSplit};

/// An n x m matrix over O_K, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOK {
    field: Arc<NumberField>,
    n: usize,
    m: usize,
    entries: Vec<AlgElem>,
}

impl MatrixOK {
    pub fn new(field: Arc<NumberField>, n: usize, m: usize, entries: Vec<AlgElem>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::BadShape(format!("{n}x{m} matrix has no entries")));
        }
        if entries.len() != n * m {
            return Err(Error::BadShape(format!(
                "{} entries for a {n}x{m} matrix",
                entries.len()
            )));
        }
        let k = field.degree();
        if let Some(bad) = entries.iter().find(|e| e.coords().len() != k) {
            return Err(Error::DegreeMismatch {
                expected: k,
                found: bad.coords().len(),
            });
        }
        Ok(MatrixOK {
            field,
            n,
            m,
            entries,
        })
    }

    pub fn from_rows(field: Arc<NumberField>, rows: Vec<Vec<AlgElem>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::BadShape("ragged rows".into()));
        }
        MatrixOK::new(field, n, m, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from nested integer coordinates `[row][col][coord]`.
    pub fn from_i64s(field: Arc<NumberField>, rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| field.elem_i64(c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixOK::from_rows(field, rows)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgElem {
        &self.entries[i * self.m + j]
    }

    pub fn rows(&self) -> Vec<Vec<AlgElem>> {
        self.entries
            .chunks(self.m)
            .map(<[AlgElem]>::to_vec)
            .collect()
    }
}

/// `[O_K : I]` for the ideal of minors; `Infinite` when every minor is 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealIndex {
    Finite(BigInt),
    Infinite,
}

impl IdealIndex {
    pub fn is_one(&self) -> bool {
        matches!(self, IdealIndex::Finite(v) if v.is_one())
    }
}

impl fmt::Display for IdealIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealIndex::Finite(v) => write!(f, "{v}"),
            IdealIndex::Infinite => write!(f, "Infinite"),
        }
    }
}

impl Serialize for IdealIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IdealIndex::Finite(v) => crate::json::serialize(v, s),
            IdealIndex::Infinite => s.serialize_str("Infinite"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    MinorIdealHNF,
    ModPRank,
}

/// A prime ideal `(p, g(theta))` modulo which the matrix loses rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub p: u64,
    /// Coefficients of `g` over F_p, constant term first.
    pub g: Vec<u64>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodReport {
    pub verdict: bool,
    /// Absent when the mod-p method ran without requesting the index.
    pub index: Option<IdealIndex>,
    pub witness: Option<Witness>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn check_shape(mat: &MatrixOK) -> Result<()> {
    if mat.n > mat.m {
        return Err(Error::BadShape(format!(
            "{}x{} matrix has more rows than columns",
            mat.n, mat.m
        )));
    }
    if mat.m > 64 {
        return Err(Error::BadShape("at most 64 columns are supported".into()));
    }
    Ok(())
}

/// All n x n minors, over column subsets in lexicographic order.
///
/// Laplace expansion along the last row, sharing the minors of the leading
/// rows between column subsets.
pub fn minors(mat: &MatrixOK) -> Result<Vec<AlgElem>> {
    check_shape(mat)?;
    Ok(run_exact(mat, &MinorsJob))
}

/// An exact computation on the matrix coordinates, generic over the scalar.
trait ExactJob {
    type Out;
    fn run<T: scalar::Scalar>(
        &self,
        mat: &MatrixOK,
        entries: &[Vec<T>],
        f_low: &[T],
    ) -> Option<Self::Out>;
}

/// Runs `job` over `i128` coordinates, falling back to `BigInt` on overflow.
fn run_exact<J: ExactJob>(mat: &MatrixOK, job: &J) -> J::Out {
    let f_low = mat.field.low_coeffs();
    let small = mat
        .entries
        .iter()
        .map(|a| convert::<i128>(a.coords()))
        .collect::<Option<Vec<_>>>();
    if let (Some(entries), Some(f)) = (small, convert::<i128>(f_low)) {
        if let Some(out) = job.run(mat, &entries, &f) {
            return out;
        }
    }
    let entries: Vec<Vec<BigInt>> = mat.entries.iter().map(|a| a.coords().to_vec()).collect();
    job.run(mat, &entries, f_low)
        .expect("BigInt arithmetic cannot overflow")
}

fn to_elems<T: scalar::Scalar>(v: Vec<Vec<T>>) -> Vec<AlgElem> {
    v.into_iter()
        .map(|c| AlgElem::from_coords_unchecked(c.iter().map(scalar::Scalar::to_big).collect()))
        .collect()
}

struct MinorsJob;

impl ExactJob for MinorsJob {
    type Out = Vec<AlgElem>;
    fn run<T: scalar::Scalar>(
        &self,
        mat: &MatrixOK,
        entries: &[Vec<T>],
        f_low: &[T],
    ) -> Option<Self::Out> {
        minors_generic(entries, mat.n, mat.m, f_low).map(to_elems)
    }
}

struct IndexJob;

impl ExactJob for IndexJob {
    type Out = IdealIndex;
    fn run<T: scalar::Scalar>(
        &self,
        mat: &MatrixOK,
        entries: &[Vec<T>],
        f_low: &[T],
    ) -> Option<Self::Out> {
        lattice_index(&minors_generic(entries, mat.n, mat.m, f_low)?, f_low)
    }
}

/// Index of the ideal generated by `gens`: the lattice determinant is
/// computed modulo the gcd of the generators' norms, each of which is a
/// multiple of it.
fn lattice_index<T: scalar::Scalar>(gens: &[Vec<T>], f_low: &[T]) -> Option<IdealIndex> {
    let k = f_low.len();
    let rows = lattice_rows(gens, f_low)?;
    if rows.is_empty() {
        return Some(IdealIndex::Infinite);
    }
    let mut d = BigInt::zero();
    for block in rows.chunks(k) {
        let det = match bareiss_rows(block.to_vec()) {
            Some(v) => v.to_big(),
            None => {
                let big: Vec<Vec<BigInt>> = block
                    .iter()
                    .map(|r| r.iter().map(scalar::Scalar::to_big).collect())
                    .collect();
                bareiss_rows(big).expect("BigInt arithmetic cannot overflow")
            }
        };
        d = d.gcd(&det);
        if d.is_one() {
            return Some(IdealIndex::Finite(d));
        }
    }
    let d = T::from_big(&d)?;
    Some(IdealIndex::Finite(index_mod(rows, k, d)?.to_big()))
}

fn lattice_rows<T: scalar::Scalar>(gens: &[Vec<T>], f_low: &[T]) -> Option<Vec<Vec<T>>> {
    let k = f_low.len();
    let mut rows = Vec::with_capacity(gens.len() * k);
    for a in gens.iter().filter(|a| a.iter().any(|v| !v.is_zero())) {
        let mut cur = a.clone();
        for i in 0..k {
            if i > 0 {
                cur = scalar::mul_by_theta(&cur, f_low)?;
            }
            rows.push(cur.clone());
        }
    }
    Some(rows)
}

fn minors_generic<T: scalar::Scalar>(
    entries: &[Vec<T>],
    n: usize,
    m: usize,
    f_low: &[T],
) -> Option<Vec<Vec<T>>> {
    let k = f_low.len();
    let binom = binomials(m);
    // colex rank of a sorted subset, optionally skipping position `skip`
    let rank = |cols: &[usize], skip: usize| -> usize {
        let mut r = 0;
        let mut pos = 0;
        for (t, &c) in cols.iter().enumerate() {
            if t == skip {
                continue;
            }
            pos += 1;
            r += binom[c][pos];
        }
        r
    };
    let nonzero = |v: &[T]| v.iter().any(|x| !x.is_zero());
    // level r holds the minors on rows 0..r, k coordinates per column subset
    let mut level: Vec<T> = entries[..m].iter().flatten().cloned().collect();
    let mut prod = vec![T::zero(); 2 * k - 1];
    for r in 1..n {
        let mut next = vec![T::zero(); binom[m][r + 1] * k];
        let mut cols: Vec<usize> = (0..=r).collect();
        loop {
            let idx = rank(&cols, usize::MAX);
            for (t, &c) in cols.iter().enumerate() {
                let a = &entries[r * m + c];
                if !nonzero(a) {
                    continue;
                }
                let s = rank(&cols, t);
                let sub = &level[s * k..(s + 1) * k];
                if !nonzero(sub) {
                    continue;
                }
                scalar::mul_reduce_into(a, sub, f_low, &mut prod)?;
                let out = &mut next[idx * k..(idx + 1) * k];
                let negative = (r + t) % 2 == 1;
                for (x, y) in out.iter_mut().zip(&prod) {
                    *x = if negative { x.sub(y)? } else { x.add(y)? };
                }
            }
            if !next_combination(&mut cols, m) {
                break;
            }
        }
        level = next;
    }
    Some(
        combinations(m, n)
            .map(|cols| {
                let idx = rank(&cols, usize::MAX);
                level[idx * k..(idx + 1) * k].to_vec()
            })
            .collect(),
    )
}

/// Advances a sorted subset of `0..n` to its lexicographic successor.
fn next_combination(cur: &mut [usize], n: usize) -> bool {
    let k = cur.len();
    for i in (0..k).rev() {
        if cur[i] < n - k + i {
            cur[i] += 1;
            for j in i + 1..k {
                cur[j] = cur[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `binom[a][b] = C(a, b)` for `a <= m`, `b <= m + 1`.
fn binomials(m: usize) -> Vec<Vec<usize>> {
    let mut t = vec![vec![0usize; m + 2]; m + 1];
    for a in 0..=m {
        t[a][0] = 1;
        for b in 1..=a {
            t[a][b] = t[a - 1][b - 1].saturating_add(t[a - 1][b]);
        }
    }
    t
}

/// Lexicographic k-subsets of `0..n`.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        if next_combination(&mut next, n) {
            cur = Some(next);
        }
        Some(out)
    })
}

/// Z-basis generators of the ideal spanned by `gens`: rows `a * theta^i`.
pub fn ideal_lattice(field: &NumberField, gens: &[AlgElem]) -> IntMatrix {
    let k = field.degree();
    let mut rows = Vec::new();
    for a in gens.iter().filter(|a| !a.is_zero()) {
        let mut cur = a.clone();
        for i in 0..k {
            if i > 0 {
                cur = field.mul_by_theta(&cur);
            }
            rows.push(cur.coords().to_vec());
        }
    }
    IntMatrix::from_rows(k, rows).expect("coordinate rows have length k")
}

/// Index of the ideal generated by `gens` in O_K.
pub fn ideal_index(field: &NumberField, gens: &[AlgElem]) -> IdealIndex {
    let f_low = field.low_coeffs();
    let small = gens
        .iter()
        .map(|a| convert::<i128>(a.coords()))
        .collect::<Option<Vec<_>>>();
    if let (Some(g), Some(f)) = (small, convert::<i128>(f_low)) {
        if let Some(ix) = lattice_index(&g, &f) {
            return ix;
        }
    }
    let gens: Vec<Vec<BigInt>> = gens.iter().map(|a| a.coords().to_vec()).collect();
    lattice_index(&gens, f_low).expect("BigInt arithmetic cannot overflow")
}

/// `[O_K : I]` for the ideal of n x n minors; the verdict of
/// [`is_unimodular`] is exactly `minor_ideal_index(..).is_one()`.
pub fn minor_ideal_index(mat: &MatrixOK) -> Result<IdealIndex> {
    check_shape(mat)?;
    Ok(run_exact(mat, &IndexJob))
}

fn rank_drop_at(mat: &MatrixOK, split: &PrimeSplit) -> Result<Option<Witness>> {
    let rows = mat.rows();
    for (i, ideal) in split.factors().iter().enumerate() {
        let rank = rank_over_residue_field(split, i, &rows)?;
        if rank < mat.n {
            return Ok(Some(Witness {
                p: split.p(),
                g: ideal.g.coeffs().to_vec(),
                rank,
            }));
        }
    }
    Ok(None)
}

fn prime_as_u64(p: &num_bigint::BigUint) -> Result<u64> {
    p.to_u64()
        .filter(|&v| v < MAX_PRIME)
        .ok_or_else(|| Error::PrimeTooLarge(BigInt::from(p.clone())))
}

/// First prime ideal (by ascending p) above a prime divisor of `value`
/// where the matrix loses rank.
fn find_witness(mat: &MatrixOK, value: &BigInt) -> Result<Option<Witness>> {
    for p in prime_divisors(value, FactorBudget::default())? {
        let split = split_prime(&mat.field, prime_as_u64(&p)?)?;
        if let Some(w) = rank_drop_at(mat, &split)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Decides unimodularity through the Hermite normal form of the minor
/// ideal; non-unimodular matrices with a finite index get a witness prime.
pub fn is_unimodular(mat: &MatrixOK) -> Result<UnimodReport> {
    let index = minor_ideal_index(mat)?;
    let verdict = index.is_one();
    let witness = match &index {
        IdealIndex::Finite(v) if !verdict => {
            let w = find_witness(mat, v)?;
            debug_assert!(w.is_some(), "a prime ideal above the index must drop rank");
            w
        }
        _ => None,
    };
    Ok(UnimodReport {
        verdict,
        index: Some(index),
        witness,
        method: Method::MinorIdealHNF,
        warning: mat.field.warning(),
    })
}

/// Decides unimodularity by checking full rank modulo every prime ideal
/// above the primes dividing `gcd |N(minor)|`. The index is computed (by
/// the HNF route) only when `include_index` is set, or when all minors
/// vanish.
pub fn is_unimodular_modp(mat: &MatrixOK, include_index: bool) -> Result<UnimodReport> {
    let ms = minors(mat)?;
    let field = &mat.field;
    let mut g = BigInt::zero();
    for a in &ms {
        if a.is_zero() {
            continue;
        }
        g = g.gcd(&field.norm(a)?);
        if g.is_one() {
            break;
        }
    }
    let warning = field.warning();
    if g.is_zero() {
        return Ok(UnimodReport {
            verdict: false,
            index: Some(IdealIndex::Infinite),
            witness: None,
            method: Method::ModPRank,
            warning,
        });
    }
    let witness = if g.abs().is_one() {
        None
    } else {
        find_witness(mat, &g)?
    };
    let index = if include_index {
        Some(ideal_index(field, &ms))
    } else {
        None
    };
    Ok(UnimodReport {
        verdict: witness.is_none(),
        index,
        witness,
        method: Method::ModPRank,
        warning,
    })
}

/// On-disk matrix format:
/// `{"field": [..], "n": 1, "m": 2, "entries": [[[2], [4]]]}`, entries
/// row-major, each a coordinate vector with the constant coordinate first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    #[serde(with = "crate::json::vec")]
    pub field: Vec<BigInt>,
    pub n: usize,
    pub m: usize,
    #[serde(with = "crate::json::nested3")]
    pub entries: Vec<Vec<Vec<BigInt>>>,
}

impl MatrixJson {
    pub fn from_matrix(mat: &MatrixOK) -> Self {
        MatrixJson {
            field: mat.field.coeffs().to_vec(),
            n: mat.n,
            m: mat.m,
            entries: mat
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(AlgElem::into_coords).collect())
                .collect(),
        }
    }

    pub fn into_matrix(self, opts: FieldOptions) -> Result<MatrixOK> {
        let field = Arc::new(NumberField::new(self.field.clone(), opts)?);
        self.into_matrix_over(field)
    }

    /// Builds the matrix over an already constructed field, which must have
    /// the same defining polynomial.
    pub fn into_matrix_over(self, field: Arc<NumberField>) -> Result<MatrixOK> {
        if field.coeffs() != self.field.as_slice() {
            return Err(Error::Parse("matrix field does not match".into()));
        }
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.m) {
            return Err(Error::BadShape(format!(
                "entries do not form a {}x{} array",
                self.n, self.m
            )));
        }
        let rows = self
            .entries
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|c| field.elem(c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixOK::from_rows(field, rows)
    }
}

pub fn parse_matrix_json(text: &str, opts: FieldOptions) -> Result<MatrixOK> {
    let spec: MatrixJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    spec.into_matrix(opts)
}
