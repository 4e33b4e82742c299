//! Exact integer lattice algebra.
//!
//! Everything here works over arbitrary-precision integers. Smith normal form
//! intermediate entries can grow quickly, so no fixed-width arithmetic is used
//! anywhere in this module.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A lattice element of `Z^n` (either `N` or its dual `M`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Dimension("vector must have positive length".into()));
        }
        Ok(IntVector(entries))
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        assert!(!entries.is_empty(), "vector must have positive length");
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(len: usize) -> Self {
        assert!(len > 0, "vector must have positive length");
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Gcd of all entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Sum of absolute values of the entries.
    pub fn l1_norm(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).sum()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|x| x.to_i64()).collect()
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Divides `v` by the gcd of its entries.
pub fn primitive(v: &IntVector) -> Result<IntVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(IntVector(v.0.iter().map(|x| x / &g).collect()))
}

/// Ordering used for every generator listing: ascending l1 norm, then
/// lexicographically descending, so `(1,0)` precedes `(0,1)` precedes `(0,-1)`.
pub fn graded_lex_cmp(a: &IntVector, b: &IntVector) -> std::cmp::Ordering {
    a.l1_norm().cmp(&b.l1_norm()).then_with(|| b.cmp(a))
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// Matrix whose rows are the given vectors. `width` is used when `rows` is empty.
    pub fn from_rows(rows: &[IntVector], width: usize) -> Self {
        let cols = rows.first().map_or(width, IntVector::len);
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.0.iter().cloned()).collect(),
        }
    }

    /// Matrix whose columns are the given vectors. `height` is used when `cols` is empty.
    pub fn from_columns(cols: &[IntVector], height: usize) -> Self {
        Self::from_rows(cols, height).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_slice(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &IntVector) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| self.row_slice(i).iter().zip(&v.0).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(
            &rows.iter().map(|&i| self.row(i)).collect::<Vec<_>>(),
            self.cols,
        )
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(p) => {
                        m.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut h = self.clone();
        column_echelon(&mut h, None)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u * a * v == d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

/// Smith normal form with unimodular transforms `U`, `V` such that `U·A·V = D`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let offending =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Brings `h` into column echelon form by unimodular column operations,
/// mirroring them on `track` when given. Returns the rank.
///
/// Pivot rows strictly increase with the column index, each pivot is positive,
/// entries above a pivot are zero, and entries left of a pivot in its row are
/// reduced into `[0, pivot)`. Zero columns end up on the right.
fn column_echelon(h: &mut IntMatrix, mut track: Option<&mut IntMatrix>) -> usize {
    let (m, n) = (h.rows, h.cols);
    let mut col = 0;
    for r in 0..m {
        if col == n {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in col..n {
                if !h[(r, j)].is_zero() && best.is_none_or(|b| h[(r, j)].abs() < h[(r, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(col, b);
            if let Some(t) = track.as_deref_mut() {
                t.swap_cols(col, b);
            }
            let mut done = true;
            for j in col + 1..n {
                if h[(r, j)].is_zero() {
                    continue;
                }
                let q = -h[(r, j)].div_floor(&h[(r, col)]);
                h.add_col_multiple(j, col, &q);
                if let Some(t) = track.as_deref_mut() {
                    t.add_col_multiple(j, col, &q);
                }
                done &= h[(r, j)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_col(col);
            if let Some(t) = track.as_deref_mut() {
                t.negate_col(col);
            }
        }
        for j in 0..col {
            let q = -h[(r, j)].div_floor(&h[(r, col)]);
            h.add_col_multiple(j, col, &q);
            if let Some(t) = track.as_deref_mut() {
                t.add_col_multiple(j, col, &q);
            }
        }
        col += 1;
    }
    col
}

/// Canonical basis of the column lattice of `b` (column Hermite normal form
/// with zero columns dropped). Two matrices span the same lattice iff their
/// outputs are equal.
pub fn column_hnf(b: &IntMatrix) -> IntMatrix {
    let mut h = b.clone();
    let rank = column_echelon(&mut h, None);
    let cols: Vec<IntVector> = (0..rank).map(|j| h.column(j)).collect();
    IntMatrix::from_columns(&cols, b.rows)
}

/// Saturated basis of `{ c : A·c = 0 }` as the columns of the result, in
/// column Hermite normal form. The result may have zero columns.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.cols;
    let mut h = a.clone();
    let mut v = IntMatrix::identity(n);
    let rank = column_echelon(&mut h, Some(&mut v));
    let basis: Vec<IntVector> = (rank..n).map(|j| v.column(j)).collect();
    column_hnf(&IntMatrix::from_columns(&basis, n))
}

/// Lattice spanned by columns of `b`, saturated inside its rational span.
pub fn saturate_columns(b: &IntMatrix) -> IntMatrix {
    // the kernel of the kernel's transpose is the saturation
    let k = integer_kernel(&b.transpose());
    integer_kernel(&k.transpose())
}

/// Serde helpers writing integers as JSON numbers when they fit in `i64`
/// and as decimal strings otherwise.
pub mod json {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::ser::{SerializeSeq, Serializer};

    struct Int<'a>(&'a BigInt);

    impl serde::Serialize for Int<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            match self.0.to_i64() {
                Some(v) => s.serialize_i64(v),
                None => s.serialize_str(&self.0.to_string()),
            }
        }
    }

    struct Ints<'a>(&'a [BigInt]);

    impl serde::Serialize for Ints<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(self.0.len()))?;
            for x in self.0 {
                seq.serialize_element(&Int(x))?;
            }
            seq.end()
        }
    }

    pub fn ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&Ints(v), s)
    }

    pub fn int_rows<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in rows {
            seq.serialize_element(&Ints(r))?;
        }
        seq.end()
    }
}
