//! Dense linear algebra over a prime field.
//!
//! Entries are stored as `u8`, so the characteristic must be below 256.
//! Row reduction always pivots on the first nonzero entry, which keeps
//! every basis this module returns deterministic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime below 256")]
    BadPrime(u32),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("characteristic mismatch: {0} vs {1}")]
    Characteristic(u32, u32),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<(), LinalgError> {
    if p < 256 && is_prime(p) {
        Ok(())
    } else {
        Err(LinalgError::BadPrime(p))
    }
}

#[inline]
pub fn add_mod(a: u8, b: u8, p: u32) -> u8 {
    ((a as u32 + b as u32) % p) as u8
}

#[inline]
pub fn sub_mod(a: u8, b: u8, p: u32) -> u8 {
    ((a as u32 + p - b as u32) % p) as u8
}

#[inline]
pub fn mul_mod(a: u8, b: u8, p: u32) -> u8 {
    ((a as u32 * b as u32) % p) as u8
}

#[inline]
pub fn neg_mod(a: u8, p: u32) -> u8 {
    ((p - a as u32) % p) as u8
}

pub fn inv_mod(a: u8, p: u32) -> u8 {
    debug_assert!(!(a as u32).is_multiple_of(p));
    let mut result = 1u32;
    let mut base = a as u32 % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result as u8
}

/// Reduce an arbitrary integer into `0..p`.
pub fn reduce_int(v: i64, p: u32) -> u8 {
    v.rem_euclid(p as i64) as u8
}

/// A row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u8>]) -> Result<Self, LinalgError> {
        check_prime(p)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::Shape(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend(r.iter().map(|&x| (x as u32 % p) as u8));
        }
        Ok(FpMatrix { p, rows: rows.len(), cols, data })
    }

    /// Build a matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u8>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(LinalgError::Shape(format!("column of length {} in a {rows}-row matrix", c.len())));
            }
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = (x as u32 % p) as u8;
            }
        }
        Ok(m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = (v as u32 % self.p) as u8;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: u8) {
        let k = i * self.cols + j;
        self.data[k] = add_mod(self.data[k], v, self.p);
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u8::from(i == j)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        if self.p != other.p {
            return Err(LinalgError::Characteristic(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u32;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = (*d + a * b as u32) % p;
                }
            }
        }
        Ok(FpMatrix { p, rows: self.rows, cols: other.cols, data: out.into_iter().map(|x| x as u8).collect() })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                let s: u32 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>();
                (s % p) as u8
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape("sum of differently shaped matrices".into()));
        }
        let p = self.p;
        Ok(FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, p)).collect(),
        })
    }

    pub fn scale(&self, c: u8) -> FpMatrix {
        let p = self.p;
        FpMatrix { p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| mul_mod(a, c, p)).collect() }
    }

    /// Place `blocks` on the diagonal.
    pub fn block_diagonal(p: u32, blocks: &[&FpMatrix]) -> FpMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &FpMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.get(i, j);
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, b: &FpMatrix, coeff: u8) {
        if coeff == 0 {
            return;
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                let v = mul_mod(b.get(i, j), coeff, self.p);
                self.add_at(r0 + i, c0 + j, v);
            }
        }
    }

    pub fn rank(&self) -> usize {
        let mut r = RowReducer::new(self.p, self.cols);
        for i in 0..self.rows {
            r.insert(self.row(i).to_vec());
        }
        r.rank()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<u8>> {
        let mut r = RowReducer::new(self.p, self.cols);
        for i in 0..self.rows {
            r.insert(self.row(i).to_vec());
        }
        r.null_space()
    }

    /// Basis of the column space, given by the pivot columns of `A`.
    pub fn image_basis(&self) -> Vec<Vec<u8>> {
        let mut r = RowReducer::new(self.p, self.rows);
        let mut out = Vec::new();
        for j in 0..self.cols {
            let c = self.column(j);
            if r.insert(c.clone()) {
                out.push(c);
            }
        }
        out
    }

    /// One solution of `A x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.rows);
        let mut r = RowReducer::new(self.p, self.cols + 1);
        for i in 0..self.rows {
            let mut row = self.row(i).to_vec();
            row.push(b[i]);
            r.insert(row);
        }
        if r.pivot_row_of(self.cols).is_some() {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        let basis = r.basis();
        for (k, &c) in r.pivot_columns().iter().enumerate() {
            x[c] = basis[k][self.cols];
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0u8; n];
            e[j] = 1;
            cols.push(self.solve(&e)?);
        }
        if self.rank() < n {
            return None;
        }
        FpMatrix::from_columns(self.p, n, &cols).ok()
    }
}

/// Storage for one row inside a [`RowReducer`].
trait RowStore: Clone {
    fn zero(len: usize) -> Self;
    fn from_dense(v: &[u8]) -> Self;
    fn to_dense(&self, len: usize) -> Vec<u8>;
    fn get(&self, i: usize) -> u8;
    fn first_nonzero(&self, len: usize) -> Option<usize>;
    /// `self += a * other`
    fn axpy(&mut self, a: u8, other: &Self, p: u32);
    fn scale(&mut self, a: u8, p: u32);
}

#[derive(Clone)]
struct BitRow(Vec<u64>);

impl RowStore for BitRow {
    fn zero(len: usize) -> Self {
        BitRow(vec![0; len.div_ceil(64)])
    }
    fn from_dense(v: &[u8]) -> Self {
        let mut r = Self::zero(v.len());
        for (i, &x) in v.iter().enumerate() {
            if x & 1 == 1 {
                r.0[i / 64] |= 1 << (i % 64);
            }
        }
        r
    }
    fn to_dense(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.get(i)).collect()
    }
    #[inline]
    fn get(&self, i: usize) -> u8 {
        ((self.0[i / 64] >> (i % 64)) & 1) as u8
    }
    fn first_nonzero(&self, _len: usize) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
    fn axpy(&mut self, a: u8, other: &Self, _p: u32) {
        if a & 1 == 1 {
            for (x, y) in self.0.iter_mut().zip(&other.0) {
                *x ^= *y;
            }
        }
    }
    fn scale(&mut self, a: u8, _p: u32) {
        if a & 1 == 0 {
            self.0.iter_mut().for_each(|w| *w = 0);
        }
    }
}

#[derive(Clone)]
struct ByteRow(Vec<u8>);

impl RowStore for ByteRow {
    fn zero(len: usize) -> Self {
        ByteRow(vec![0; len])
    }
    fn from_dense(v: &[u8]) -> Self {
        ByteRow(v.to_vec())
    }
    fn to_dense(&self, _len: usize) -> Vec<u8> {
        self.0.clone()
    }
    #[inline]
    fn get(&self, i: usize) -> u8 {
        self.0[i]
    }
    fn first_nonzero(&self, _len: usize) -> Option<usize> {
        self.0.iter().position(|&x| x != 0)
    }
    fn axpy(&mut self, a: u8, other: &Self, p: u32) {
        if a == 0 {
            return;
        }
        let a = a as u32;
        for (x, &y) in self.0.iter_mut().zip(&other.0) {
            if y != 0 {
                *x = ((*x as u32 + a * y as u32) % p) as u8;
            }
        }
    }
    fn scale(&mut self, a: u8, p: u32) {
        for x in self.0.iter_mut() {
            *x = mul_mod(*x, a, p);
        }
    }
}

#[derive(Clone)]
struct Reducer<R: RowStore> {
    p: u32,
    cols: usize,
    rows: Vec<R>,
    tags: Vec<Vec<u8>>,
    pivots: Vec<usize>,
    pivot_of_col: Vec<u32>,
}

const NO_PIVOT: u32 = u32::MAX;

impl<R: RowStore> Reducer<R> {
    fn new(p: u32, cols: usize) -> Self {
        Reducer { p, cols, rows: Vec::new(), tags: Vec::new(), pivots: Vec::new(), pivot_of_col: vec![NO_PIVOT; cols] }
    }

    /// Eliminate every pivot column of `v`; the tag follows along.
    fn reduce(&self, v: &mut R, tag: &mut [u8]) {
        let p = self.p;
        for (k, &c) in self.pivots.iter().enumerate() {
            let x = v.get(c);
            if x != 0 {
                let a = neg_mod(x, p);
                v.axpy(a, &self.rows[k], p);
                axpy_bytes(tag, a, &self.tags[k], p);
            }
        }
    }

    fn insert(&mut self, mut v: R, mut tag: Vec<u8>) -> bool {
        self.reduce(&mut v, &mut tag);
        let Some(c) = v.first_nonzero(self.cols) else {
            return false;
        };
        let p = self.p;
        let inv = inv_mod(v.get(c), p);
        v.scale(inv, p);
        tag.iter_mut().for_each(|t| *t = mul_mod(*t, inv, p));
        // keep the basis fully reduced
        for k in 0..self.rows.len() {
            let x = self.rows[k].get(c);
            if x != 0 {
                let a = neg_mod(x, p);
                self.rows[k].axpy(a, &v, p);
                let t = tag.clone();
                axpy_bytes(&mut self.tags[k], a, &t, p);
            }
        }
        self.pivot_of_col[c] = self.rows.len() as u32;
        self.pivots.push(c);
        self.rows.push(v);
        self.tags.push(tag);
        true
    }
}

fn axpy_bytes(dst: &mut [u8], a: u8, src: &[u8], p: u32) {
    if a == 0 {
        return;
    }
    for (x, &y) in dst.iter_mut().zip(src) {
        *x = add_mod(*x, mul_mod(a, y, p), p);
    }
}

#[derive(Clone)]
enum Backend {
    Bits(Reducer<BitRow>),
    Bytes(Reducer<ByteRow>),
}

/// Incremental reduced row echelon form.
///
/// Rows may carry a tag vector that records how they were combined; this
/// is how coordinates with respect to the inserted vectors are recovered.
#[derive(Clone)]
pub struct RowReducer {
    backend: Backend,
    tag_len: usize,
    pivots: Vec<usize>,
}

impl RowReducer {
    pub fn new(p: u32, cols: usize) -> Self {
        Self::with_tags(p, cols, 0)
    }

    pub fn with_tags(p: u32, cols: usize, tag_len: usize) -> Self {
        let backend = if p == 2 { Backend::Bits(Reducer::new(p, cols)) } else { Backend::Bytes(Reducer::new(p, cols)) };
        RowReducer { backend, tag_len, pivots: Vec::new() }
    }

    pub fn p(&self) -> u32 {
        match &self.backend {
            Backend::Bits(r) => r.p,
            Backend::Bytes(r) => r.p,
        }
    }

    pub fn cols(&self) -> usize {
        match &self.backend {
            Backend::Bits(r) => r.cols,
            Backend::Bytes(r) => r.cols,
        }
    }

    pub fn rank(&self) -> usize {
        match &self.backend {
            Backend::Bits(r) => r.rows.len(),
            Backend::Bytes(r) => r.rows.len(),
        }
    }

    /// Insert a row; returns whether it enlarged the row space.
    pub fn insert(&mut self, v: Vec<u8>) -> bool {
        let tag = vec![0; self.tag_len];
        self.insert_tagged(v, tag)
    }

    pub fn insert_tagged(&mut self, v: Vec<u8>, tag: Vec<u8>) -> bool {
        debug_assert_eq!(v.len(), self.cols());
        let grew = match &mut self.backend {
            Backend::Bits(r) => r.insert(BitRow::from_dense(&v), tag),
            Backend::Bytes(r) => r.insert(ByteRow::from_dense(&v), tag),
        };
        if grew {
            let c = match &self.backend {
                Backend::Bits(r) => *r.pivots.last().unwrap(),
                Backend::Bytes(r) => *r.pivots.last().unwrap(),
            };
            self.pivots.push(c);
        }
        grew
    }

    /// Insert a sparse row given as `(column, value)` pairs.
    pub fn insert_sparse(&mut self, entries: &[(usize, u8)]) -> bool {
        let p = self.p();
        let mut v = vec![0u8; self.cols()];
        for &(c, x) in entries {
            v[c] = add_mod(v[c], x, p);
        }
        self.insert(v)
    }

    /// Residual of `v` after elimination, with the accumulated tag.
    pub fn reduce_tagged(&self, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
        let mut tag = vec![0; self.tag_len];
        match &self.backend {
            Backend::Bits(r) => {
                let mut row = BitRow::from_dense(v);
                r.reduce(&mut row, &mut tag);
                (row.to_dense(r.cols), tag)
            }
            Backend::Bytes(r) => {
                let mut row = ByteRow::from_dense(v);
                r.reduce(&mut row, &mut tag);
                (row.to_dense(r.cols), tag)
            }
        }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce_tagged(v).0.iter().all(|&x| x == 0)
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    pub fn pivot_row_of(&self, col: usize) -> Option<usize> {
        let k = match &self.backend {
            Backend::Bits(r) => r.pivot_of_col[col],
            Backend::Bytes(r) => r.pivot_of_col[col],
        };
        (k != NO_PIVOT).then_some(k as usize)
    }

    /// The stored rows in reduced echelon form.
    pub fn basis(&self) -> Vec<Vec<u8>> {
        match &self.backend {
            Backend::Bits(r) => r.rows.iter().map(|x| x.to_dense(r.cols)).collect(),
            Backend::Bytes(r) => r.rows.iter().map(|x| x.to_dense(r.cols)).collect(),
        }
    }

    pub fn tags(&self) -> &[Vec<u8>] {
        match &self.backend {
            Backend::Bits(r) => &r.tags,
            Backend::Bytes(r) => &r.tags,
        }
    }

    /// Basis of the vectors orthogonal to every stored row, one per free column.
    pub fn null_space(&self) -> Vec<Vec<u8>> {
        let cols = self.cols();
        let p = self.p();
        let basis = self.basis();
        let mut out = Vec::new();
        for f in 0..cols {
            if self.pivot_row_of(f).is_some() {
                continue;
            }
            let mut x = vec![0u8; cols];
            x[f] = 1;
            for (k, &c) in self.pivots.iter().enumerate() {
                x[c] = neg_mod(basis[k][f], p);
            }
            out.push(x);
        }
        out
    }
}

/// Span bookkeeping for a subspace of F_p^n.
#[derive(Clone)]
pub struct Subspace {
    reducer: RowReducer,
    basis: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn new(p: u32, n: usize) -> Self {
        Subspace { reducer: RowReducer::new(p, n), basis: Vec::new() }
    }

    pub fn spanned_by(p: u32, n: usize, vectors: impl IntoIterator<Item = Vec<u8>>) -> Self {
        let mut s = Self::new(p, n);
        for v in vectors {
            s.add(v);
        }
        s
    }

    /// Add a vector; returns whether the dimension grew.
    pub fn add(&mut self, v: Vec<u8>) -> bool {
        if self.reducer.insert(v.clone()) {
            self.basis.push(v);
            true
        } else {
            false
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.reducer.cols()
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reducer.contains(v)
    }

    /// The vectors that were accepted, in insertion order.
    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn contains_all(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

/// Coordinates with respect to a fixed list of independent vectors.
#[derive(Clone)]
pub struct Coordinates {
    reducer: RowReducer,
    dim: usize,
}

impl Coordinates {
    /// `vectors` must be linearly independent.
    pub fn new(p: u32, n: usize, vectors: &[Vec<u8>]) -> Self {
        Self::modulo(p, n, &[], vectors)
    }

    /// Coordinates along `vectors` modulo the span of `ignored`.
    ///
    /// The vectors must stay independent modulo `ignored`.
    pub fn modulo(p: u32, n: usize, ignored: &[Vec<u8>], vectors: &[Vec<u8>]) -> Self {
        let k = vectors.len();
        let mut reducer = RowReducer::with_tags(p, n, k);
        for v in ignored {
            reducer.insert(v.clone());
        }
        for (i, v) in vectors.iter().enumerate() {
            let mut tag = vec![0u8; k];
            tag[i] = 1;
            let grew = reducer.insert_tagged(v.clone(), tag);
            assert!(grew, "coordinate vectors are dependent");
        }
        Coordinates { reducer, dim: k }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of `v`, or `None` when it is outside the span.
    pub fn of(&self, v: &[u8]) -> Option<Vec<u8>> {
        let (res, tag) = self.reducer.reduce_tagged(v);
        if res.iter().any(|&x| x != 0) {
            return None;
        }
        let p = self.reducer.p();
        Some(tag.into_iter().map(|t| neg_mod(t, p)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[u8]]) -> FpMatrix {
        let cols = rows[0].len();
        FpMatrix::from_rows(p, cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rank_and_kernel_over_f2() {
        let a = m(2, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k, vec![vec![1, 1, 1]]);
        assert!(a.apply(&k[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn solve_over_f3() {
        let a = m(3, &[&[1, 2], &[2, 2]]);
        let x = a.solve(&[0, 1]).unwrap();
        assert_eq!(a.apply(&x), vec![0, 1]);
        let sing = m(3, &[&[1, 1], &[2, 2]]);
        assert!(sing.solve(&[1, 0]).is_none());
        assert!(sing.inverse().is_none());
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn image_basis_uses_pivot_columns() {
        let a = m(5, &[&[1, 2, 3, 0], &[0, 0, 1, 1]]);
        let img = a.image_basis();
        assert_eq!(img, vec![vec![1, 0], vec![3, 1]]);
    }

    #[test]
    fn tagged_coordinates_modulo_subspace() {
        let p = 3;
        let ignored = vec![vec![1, 1, 0]];
        let basis = vec![vec![0, 1, 0], vec![0, 0, 1]];
        let c = Coordinates::modulo(p, 3, &ignored, &basis);
        // 2*(1,1,0) + 1*(0,1,0) + 2*(0,0,1)
        assert_eq!(c.of(&[2, 0, 2]), Some(vec![1, 2]));
        let c2 = Coordinates::new(p, 3, &basis);
        assert_eq!(c2.of(&[1, 0, 0]), None);
    }

    #[test]
    fn inverse_mod_p() {
        for p in [2u32, 3, 5, 7, 251] {
            for a in 1..p.min(50) {
                assert_eq!(mul_mod(a as u8, inv_mod(a as u8, p), p), 1);
            }
        }
    }

    #[test]
    fn bad_prime_rejected() {
        assert_eq!(check_prime(4), Err(LinalgError::BadPrime(4)));
        assert_eq!(check_prime(257), Err(LinalgError::BadPrime(257)));
    }
}
