//! Dense exact linear algebra over a prime field GF(p).
//!
//! Entries are stored as `u32` residues in `[0, p)`; products are accumulated
//! in 64 bits and reduced with a Barrett step. Row reduction detects block
//! structure (connected components of the row/column incidence graph) and
//! reduces each block separately. The reduced echelon form is unique, so the
//! split never changes any output.

use std::fmt;

/// Arithmetic in GF(p) for a prime `2 <= p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    p: u64,
    barrett: u64,
}

impl Field {
    /// The caller guarantees `p` is prime; see [`is_prime`].
    pub fn new(p: u32) -> Self {
        debug_assert!(p >= 2 && p < (1u32 << 31));
        let p = p as u64;
        Field {
            p,
            barrett: u64::MAX / p,
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p as u32
    }

    /// Reduces any `x < 2^63`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p {
            (s - self.p) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            (self.p - a as u64) as u32
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    /// `a + b*c`.
    #[inline]
    pub fn mul_add(&self, a: u32, b: u32, c: u32) -> u32 {
        self.reduce(a as u64 + b as u64 * c as u64)
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        self.pow(a, self.p - 2)
    }

    /// Canonical residue of a signed integer.
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 || p >= (1u32 << 31) {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF({})", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Matrix::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from signed rows, reducing every entry mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let f = Field::new(p);
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.data[i * cols + j] = f.from_i64(v);
            }
        }
        m
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&v| v < p));
        Matrix {
            p,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
        }
        m
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> Field {
        Field::new(self.p)
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.p);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_same_field(&self, other: &Matrix) {
        assert_eq!(
            self.p, other.p,
            "cross-field operation: GF({}) vs GF({})",
            self.p, other.p
        );
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.check_same_field(other);
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = self.field();
        let mut out = Matrix::zeros(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        // Lazy reduction: `pending` bounds every accumulator.
        let bound = u64::MAX / 2;
        let step = (self.p as u64 - 1) * (self.p as u64 - 1);
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            let mut pending = 0u64;
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                if pending > bound - step {
                    for v in acc.iter_mut() {
                        *v = f.reduce(*v) as u64;
                    }
                    pending = self.p as u64;
                }
                let orow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot += a as u64 * b as u64;
                }
                pending += step;
            }
            for (c, v) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = f.reduce(*v);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field();
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u32;
                for (a, &b) in self.row(r).iter().zip(v) {
                    if *a != 0 && b != 0 {
                        acc = f.mul_add(acc, *a, b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix::from_vec(self.p, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix::from_vec(self.p, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let f = self.field();
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        Matrix::from_vec(self.p, self.rows, self.cols, data)
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Matrix, s: u32) {
        self.check_same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s == 0 {
            return;
        }
        let f = self.field();
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = f.mul_add(*a, s, b);
            }
        }
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let p = parts[0].p;
        let rows = parts[0].rows;
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.p, p);
            assert_eq!(m.rows, rows, "hstack row mismatch");
            for r in 0..rows {
                out.data[r * cols + off..r * cols + off + m.cols].copy_from_slice(m.row(r));
            }
            off += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        let p = parts[0].p;
        let cols = parts[0].cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.p, p);
            assert_eq!(m.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Matrix::from_vec(p, rows, cols, data)
    }

    /// Block-diagonal matrix.
    pub fn block_diag(p: u32, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            assert_eq!(b.p, p);
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.data[(ro + r) * cols + co + c] = b.get(r, c);
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.p, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix::from_vec(self.p, idx.len(), self.cols, data)
    }

    /// Reduced row echelon form (nonzero rows only) with pivot columns.
    pub fn rref(&self) -> Rref {
        rref_split(self)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns form a basis of the right kernel: free variables in increasing
    /// order, each basis vector has a 1 at its free variable and zeros at the
    /// other free variables.
    pub fn kernel_basis(&self) -> Matrix {
        kernel_from_rref(&self.rref(), self.cols)
    }

    /// Deterministic particular solution of `self * X = b` (free variables 0).
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        self.check_same_field(b);
        assert_eq!(self.rows, b.rows, "solve: row mismatch");
        let aug = Matrix::hstack(&[self, b]);
        let rr = aug.rref();
        let n = self.cols;
        if rr.pivots.iter().any(|&c| c >= n) {
            return None;
        }
        let mut x = Matrix::zeros(self.p, n, b.cols);
        for (r, &pc) in rr.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = rr.mat.get(r, n + j);
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.p, self.rows))?;
        // solve() only guarantees a particular solution; check invertibility.
        if self.rank() == self.rows {
            Some(x)
        } else {
            None
        }
    }
}

/// Result of row reduction: the nonzero rows of the RREF and their pivots.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: Matrix,
    pub pivots: Vec<usize>,
}

fn kernel_from_rref(rr: &Rref, cols: usize) -> Matrix {
    let p = rr.mat.p;
    let f = Field::new(p);
    let mut is_pivot = vec![false; cols];
    for &c in &rr.pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = Matrix::zeros(p, cols, free.len());
    for (j, &fv) in free.iter().enumerate() {
        k.data[fv * free.len() + j] = 1;
        for (r, &pc) in rr.pivots.iter().enumerate() {
            let v = rr.mat.get(r, fv);
            if v != 0 {
                k.data[pc * free.len() + j] = f.neg(v);
            }
        }
    }
    k
}

/// Gauss-Jordan elimination of a list of dense rows, in place. Returns the
/// pivot columns; the first `pivots.len()` rows hold the reduced form.
fn gauss_jordan(f: &Field, rows: &mut [Vec<u32>], cols: usize) -> Vec<usize> {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut nz: Vec<usize> = Vec::with_capacity(cols);
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(pr) = (r..n).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        if inv != 1 {
            for v in rows[r][c..].iter_mut() {
                if *v != 0 {
                    *v = f.mul(*v, inv);
                }
            }
        }
        nz.clear();
        nz.extend((c..cols).filter(|&j| rows[r][j] != 0));
        let (head, tail) = rows.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(tail.iter_mut()) {
            let a = other[c];
            if a == 0 {
                continue;
            }
            let m = f.neg(a);
            for &j in &nz {
                other[j] = f.mul_add(other[j], m, prow[j]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Gauss-Jordan elimination, using packed bit rows over GF(2).
fn eliminate(f: &Field, rows: &mut [Vec<u32>], cols: usize) -> Vec<usize> {
    if f.p() != 2 {
        return gauss_jordan(f, rows, cols);
    }
    let words = cols.div_ceil(64);
    let mut bits: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut b = vec![0u64; words];
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    b[j / 64] |= 1 << (j % 64);
                }
            }
            b
        })
        .collect();
    let pivots = gauss_jordan_gf2(&mut bits, cols);
    for (row, b) in rows.iter_mut().zip(&bits) {
        for (j, v) in row.iter_mut().enumerate() {
            *v = ((b[j / 64] >> (j % 64)) & 1) as u32;
        }
    }
    pivots
}

fn gauss_jordan_gf2(rows: &mut [Vec<u64>], cols: usize) -> Vec<usize> {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let (w, bit) = (c / 64, 1u64 << (c % 64));
        let Some(pr) = (r..n).find(|&i| rows[i][w] & bit != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let (head, tail) = rows.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if other[w] & bit != 0 {
                for (a, b) in other[w..].iter_mut().zip(&prow[w..]) {
                    *a ^= b;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn rref_dense(m: &Matrix) -> Rref {
    let f = m.field();
    let mut rows: Vec<Vec<u32>> = (0..m.rows)
        .map(|r| m.row(r).to_vec())
        .filter(|row| row.iter().any(|&v| v != 0))
        .collect();
    let pivots = eliminate(&f, &mut rows, m.cols);
    rows.truncate(pivots.len());
    let data: Vec<u32> = rows.into_iter().flatten().collect();
    Rref {
        mat: Matrix::from_vec(m.p, pivots.len(), m.cols, data),
        pivots,
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

const SPLIT_THRESHOLD: usize = 64;

fn rref_split(m: &Matrix) -> Rref {
    if m.rows < SPLIT_THRESHOLD || m.cols < SPLIT_THRESHOLD {
        return rref_dense(m);
    }
    let mut uf = UnionFind::new(m.cols);
    let mut row_first = vec![usize::MAX; m.rows];
    for r in 0..m.rows {
        let row = m.row(r);
        let mut first = usize::MAX;
        for (c, &v) in row.iter().enumerate() {
            if v != 0 {
                if first == usize::MAX {
                    first = c;
                } else {
                    uf.union(first, c);
                }
            }
        }
        row_first[r] = first;
    }
    // Group columns and rows by component root.
    let mut comp_of_col = vec![0usize; m.cols];
    let mut roots: Vec<usize> = Vec::new();
    let mut root_index = vec![usize::MAX; m.cols];
    for c in 0..m.cols {
        let root = uf.find(c);
        if root_index[root] == usize::MAX {
            root_index[root] = roots.len();
            roots.push(root);
        }
        comp_of_col[c] = root_index[root];
    }
    if roots.len() <= 1 {
        return rref_dense(m);
    }
    let ncomp = roots.len();
    let mut comp_cols: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for c in 0..m.cols {
        comp_cols[comp_of_col[c]].push(c);
    }
    let mut comp_rows: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for r in 0..m.rows {
        if row_first[r] != usize::MAX {
            comp_rows[comp_of_col[row_first[r]]].push(r);
        }
    }
    let f = m.field();
    let mut pivot_rows: Vec<(usize, Vec<u32>)> = Vec::new();
    for k in 0..ncomp {
        if comp_rows[k].is_empty() {
            continue;
        }
        let cols = &comp_cols[k];
        let mut rows: Vec<Vec<u32>> = comp_rows[k]
            .iter()
            .map(|&r| cols.iter().map(|&c| m.get(r, c)).collect())
            .collect();
        let piv = eliminate(&f, &mut rows, cols.len());
        for (i, &pc) in piv.iter().enumerate() {
            let mut full = vec![0u32; m.cols];
            for (j, &c) in cols.iter().enumerate() {
                full[c] = rows[i][j];
            }
            pivot_rows.push((cols[pc], full));
        }
    }
    pivot_rows.sort_by_key(|(c, _)| *c);
    let pivots: Vec<usize> = pivot_rows.iter().map(|(c, _)| *c).collect();
    let data: Vec<u32> = pivot_rows.into_iter().flat_map(|(_, r)| r).collect();
    Rref {
        mat: Matrix::from_vec(m.p, pivots.len(), m.cols, data),
        pivots,
    }
}

/// Free-standing form of [`Matrix::kernel_basis`].
pub fn kernel_basis(a: &Matrix) -> Matrix {
    a.kernel_basis()
}

/// Free-standing form of [`Matrix::solve`].
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    a.solve(b)
}

/// A subspace of `GF(p)^n` with a basis in reduced form: the basis restricted
/// to `coord_rows` is the identity, so coordinates are read off directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
    coord_rows: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(p, ambient, 0),
            coord_rows: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(p, ambient),
            coord_rows: (0..ambient).collect(),
        }
    }

    /// Span of the columns of `gens`.
    pub fn span(gens: &Matrix) -> Self {
        let rr = gens.transpose().rref();
        Subspace {
            basis: rr.mat.transpose(),
            coord_rows: rr.pivots,
        }
    }

    pub fn kernel(a: &Matrix) -> Self {
        let rr = a.rref();
        let basis = kernel_from_rref(&rr, a.cols());
        let mut is_pivot = vec![false; a.cols()];
        for &c in &rr.pivots {
            is_pivot[c] = true;
        }
        Subspace {
            basis,
            coord_rows: (0..a.cols()).filter(|&c| !is_pivot[c]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vector(&self, j: usize) -> Vec<u32> {
        self.basis.col(j)
    }

    pub fn coord_rows(&self) -> &[usize] {
        &self.coord_rows
    }

    /// Coordinates of a vector assumed to lie in the subspace.
    pub fn coords(&self, v: &[u32]) -> Vec<u32> {
        self.coord_rows.iter().map(|&r| v[r]).collect()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.basis.mul_vec(&self.coords(v)) == v
    }

    /// Coordinates of every column of `m` (columns assumed in the subspace).
    pub fn coords_matrix(&self, m: &Matrix) -> Matrix {
        m.select_rows(&self.coord_rows)
    }

    pub fn contains_all(&self, m: &Matrix) -> bool {
        self.basis.mul(&self.coords_matrix(m)) == *m
    }
}

/// The quotient `GF(p)^n / W` with the standard-coordinate complement basis.
#[derive(Clone, Debug)]
pub struct Quotient {
    ambient: usize,
    reduced: Matrix,
    pivots: Vec<usize>,
    complement: Vec<usize>,
}

impl Quotient {
    /// Quotient by the span of the columns of `w`.
    pub fn new(w: &Matrix) -> Self {
        let rr = w.transpose().rref();
        let ambient = w.rows();
        let mut is_pivot = vec![false; ambient];
        for &c in &rr.pivots {
            is_pivot[c] = true;
        }
        Quotient {
            ambient,
            reduced: rr.mat,
            pivots: rr.pivots,
            complement: (0..ambient).filter(|&c| !is_pivot[c]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn sub_dim(&self) -> usize {
        self.pivots.len()
    }

    /// Positions of the standard basis vectors forming the complement.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let f = self.reduced.field();
        let mut w = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let a = v[pc];
            if a == 0 {
                continue;
            }
            let m = f.neg(a);
            for (slot, &b) in w.iter_mut().zip(self.reduced.row(r)) {
                if b != 0 {
                    *slot = f.mul_add(*slot, m, b);
                }
            }
        }
        self.complement.iter().map(|&c| w[c]).collect()
    }

    /// `dim x ambient` matrix of the projection.
    pub fn projection_matrix(&self) -> Matrix {
        let p = self.reduced.p();
        let cols: Vec<Vec<u32>> = (0..self.ambient)
            .map(|c| {
                let mut e = vec![0u32; self.ambient];
                e[c] = 1;
                self.project(&e)
            })
            .collect();
        Matrix::from_columns(p, self.dim(), &cols)
    }

    /// `ambient x dim` matrix of the standard section.
    pub fn section_matrix(&self) -> Matrix {
        let p = self.reduced.p();
        let mut s = Matrix::zeros(p, self.ambient, self.dim());
        for (j, &c) in self.complement.iter().enumerate() {
            s.set(c, j, 1);
        }
        s
    }

    /// Projects every column of `m`.
    pub fn project_matrix(&self, m: &Matrix) -> Matrix {
        let cols: Vec<Vec<u32>> = m.columns().iter().map(|c| self.project(c)).collect();
        Matrix::from_columns(m.p(), self.dim(), &cols)
    }
}

/// Indices of the columns of `m` that are independent of all earlier columns
/// (the pivot columns of its reduced echelon form).
pub fn independent_columns(m: &Matrix) -> Vec<usize> {
    m.rref().pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let k = m(5, &[&[1, 0], &[0, 1]]).kernel_basis();
        assert_eq!((k.rows(), k.cols()), (2, 0));
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let k = Matrix::zeros(5, 2, 3).kernel_basis();
        assert_eq!(k, Matrix::identity(5, 3));
    }

    #[test]
    fn kernel_of_single_row() {
        let a = m(5, &[&[1, 2, 3]]);
        let k = a.kernel_basis();
        assert_eq!(k, m(5, &[&[3, 2], &[1, 0], &[0, 1]]));
        assert!(a.mul(&k).is_zero());
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn solve_examples() {
        let b = m(5, &[&[3, 1], &[4, 2]]);
        assert_eq!(Matrix::identity(5, 2).solve(&b), Some(b.clone()));
        let x = m(5, &[&[1, 1]]).solve(&m(5, &[&[3]])).unwrap();
        assert_eq!(x, m(5, &[&[3], &[0]]));
        assert_eq!(Matrix::zeros(5, 1, 1).solve(&m(5, &[&[1]])), None);
    }

    #[test]
    fn empty_matrices_behave_as_zero_maps() {
        let a = Matrix::zeros(7, 0, 4);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.kernel_basis(), Matrix::identity(7, 4));
        let b = Matrix::zeros(7, 3, 0);
        assert_eq!(b.kernel_basis().cols(), 0);
        assert_eq!(
            b.solve(&Matrix::zeros(7, 3, 1)),
            Some(Matrix::zeros(7, 0, 1))
        );
    }

    #[test]
    #[should_panic(expected = "cross-field")]
    fn cross_field_rejected() {
        let _ = Matrix::identity(2, 2).mul(&Matrix::identity(5, 2));
    }

    #[test]
    fn barrett_reduction_matches_remainder() {
        let f = Field::new(2147483647);
        for &x in &[
            0u64,
            1,
            2147483646,
            2147483647,
            4611686014132420609,
            (1 << 62) + 12345,
        ] {
            assert_eq!(f.reduce(x) as u64, x % 2147483647);
        }
        let g = Field::new(5);
        assert_eq!(g.inv(2), 3);
        assert_eq!(g.mul(4, 4), 1);
    }

    #[test]
    fn quotient_projection_kills_subspace() {
        let w = m(5, &[&[1, 0], &[2, 0], &[0, 1], &[0, 3]]);
        let q = Quotient::new(&w);
        assert_eq!(q.dim(), 2);
        assert!(q.project_matrix(&w).is_zero());
        assert_eq!(
            q.projection_matrix().mul(&q.section_matrix()),
            Matrix::identity(5, 2)
        );
    }

    #[test]
    fn subspace_coordinates() {
        let g = m(3, &[&[1, 1], &[1, 2], &[0, 1]]);
        let s = Subspace::span(&g);
        for c in g.columns() {
            assert!(s.contains(&c));
        }
        assert!(!s.contains(&[1, 0, 0]) || s.dim() == 3);
    }

    #[test]
    fn split_and_dense_reduction_agree() {
        // Block-diagonal matrix large enough to trigger the component split.
        let p = 5;
        let mut big = Matrix::zeros(p, 80, 90);
        let mut state = 17u64;
        for r in 0..80 {
            for c in 0..90 {
                if (r < 40) == (c < 45) {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    if (state >> 33) % 3 == 0 {
                        big.set(r, c, ((state >> 40) % 5) as u32);
                    }
                }
            }
        }
        let a = rref_split(&big);
        let b = rref_dense(&big);
        assert_eq!(a.pivots, b.pivots);
        assert_eq!(a.mat, b.mat);
    }

    #[test]
    fn packed_binary_elimination_matches_generic() {
        let f = Field::new(2);
        let mut state = 99u64;
        for &(n, c) in &[(7usize, 5usize), (30, 70), (65, 130)] {
            let mut rows: Vec<Vec<u32>> = (0..n)
                .map(|_| {
                    (0..c)
                        .map(|_| {
                            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                            ((state >> 60) & 1) as u32
                        })
                        .collect()
                })
                .collect();
            let mut generic = rows.clone();
            let pa = eliminate(&f, &mut rows, c);
            let pb = gauss_jordan(&f, &mut generic, c);
            assert_eq!(pa, pb);
            assert_eq!(rows, generic);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(p: u32) -> impl Strategy<Value = Matrix> {
            (0usize..7, 0usize..7).prop_flat_map(move |(r, c)| {
                proptest::collection::vec(0..p, r * c)
                    .prop_map(move |data| Matrix::from_vec(p, r, c, data))
            })
        }

        proptest! {
            #[test]
            fn rank_nullity(a in matrix(5)) {
                let k = a.kernel_basis();
                prop_assert_eq!(a.rank() + k.cols(), a.cols());
                prop_assert!(a.mul(&k).is_zero());
                prop_assert_eq!(k.rank(), k.cols());
            }

            #[test]
            fn solve_consistent_systems(a in matrix(7), seed in 0u32..1000) {
                let x0 = Matrix::from_vec(7, a.cols(), 1, (0..a.cols() as u32).map(|i| (i * 3 + seed) % 7).collect());
                let b = a.mul(&x0);
                let x = a.solve(&b).expect("consistent system");
                prop_assert_eq!(a.mul(&x), b);
            }

            #[test]
            fn reduction_is_deterministic(a in matrix(2)) {
                let r1 = a.rref();
                let r2 = a.clone().rref();
                prop_assert_eq!(r1.mat, r2.mat);
                prop_assert_eq!(r1.pivots, r2.pivots);
            }
        }
    }
}
