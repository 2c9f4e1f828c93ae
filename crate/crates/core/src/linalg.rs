//! Dense vectors and matrices over Z/p^r and F_p.
//!
//! Sizes are tiny at the scales this crate targets, so everything is
//! row-major dense storage with straightforward loops. The F_p layer carries
//! the Gaussian elimination machinery (rank, kernel bases, linear solving);
//! injectivity and surjectivity over Z/p^r reduce to mod-p rank because every
//! matrix over the local ring is equivalent to a diagonal of p-powers.

use std::fmt;

use thiserror::Error;

use crate::ring::{RingError, RingParams, RingScalar};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A vector with entries in Z/p^r, stored as canonical residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingVector {
    params: RingParams,
    vals: Vec<u64>,
}

impl fmt::Debug for RingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.vals)
    }
}

impl RingVector {
    pub fn zero(params: RingParams, len: usize) -> Self {
        RingVector {
            params,
            vals: vec![0; len],
        }
    }

    pub fn from_i64(params: RingParams, vals: &[i64]) -> Self {
        RingVector {
            params,
            vals: vals.iter().map(|&v| params.scalar(v).value()).collect(),
        }
    }

    pub fn from_raw(params: RingParams, vals: Vec<u64>) -> Self {
        debug_assert!(vals.iter().all(|&v| v < params.modulus()));
        RingVector { params, vals }
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(|&v| v == 0)
    }

    pub fn get(&self, i: usize) -> RingScalar {
        self.params.scalar(self.vals[i] as i64)
    }

    pub fn set(&mut self, i: usize, v: RingScalar) {
        self.vals[i] = v.value();
    }

    pub fn values(&self) -> &[u64] {
        &self.vals
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.vals.iter().filter(|&&v| v != 0).count()
    }

    pub fn add(&self, rhs: &RingVector) -> RingVector {
        assert_eq!(self.len(), rhs.len());
        let m = self.params.modulus();
        RingVector {
            params: self.params,
            vals: self
                .vals
                .iter()
                .zip(&rhs.vals)
                .map(|(&a, &b)| (a + b) % m)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &RingVector) -> RingVector {
        assert_eq!(self.len(), rhs.len());
        let m = self.params.modulus();
        RingVector {
            params: self.params,
            vals: self
                .vals
                .iter()
                .zip(&rhs.vals)
                .map(|(&a, &b)| (a + m - b) % m)
                .collect(),
        }
    }

    pub fn neg(&self) -> RingVector {
        let m = self.params.modulus();
        RingVector {
            params: self.params,
            vals: self.vals.iter().map(|&a| (m - a) % m).collect(),
        }
    }

    /// Entry-wise reduction to F_p.
    pub fn mod_p(&self) -> Vec<u64> {
        let p = self.params.p();
        self.vals.iter().map(|&v| v % p).collect()
    }

    /// The i-th p-adic digit of every entry.
    pub fn digit_layer(&self, i: u32) -> Vec<u64> {
        let p = self.params.p();
        let d = self.params.p_pow(i);
        self.vals.iter().map(|&v| (v / d) % p).collect()
    }

    /// Entry-wise exact division by p^i.
    pub fn exact_div_pow(&self, i: u32) -> Result<RingVector, RingError> {
        let mut vals = Vec::with_capacity(self.vals.len());
        for &v in &self.vals {
            vals.push(self.params.scalar(v as i64).exact_div_pow(i)?.value());
        }
        Ok(RingVector {
            params: self.params,
            vals,
        })
    }

    /// Adds p^layer times a mod-p digit vector.
    pub fn add_layer(&self, digits: &[u64], layer: u32) -> RingVector {
        assert_eq!(self.len(), digits.len());
        let m = self.params.modulus();
        let scale = self.params.p_pow(layer);
        RingVector {
            params: self.params,
            vals: self
                .vals
                .iter()
                .zip(digits)
                .map(|(&a, &d)| (a + d * scale % m) % m)
                .collect(),
        }
    }

    /// Lifts a mod-p digit vector into the ring scaled by p^layer.
    pub fn from_layer(params: RingParams, digits: &[u64], layer: u32) -> RingVector {
        RingVector::zero(params, digits.len()).add_layer(digits, layer)
    }

    pub fn concat(parts: &[&RingVector]) -> RingVector {
        assert!(!parts.is_empty());
        let params = parts[0].params;
        let mut vals = Vec::new();
        for part in parts {
            assert_eq!(part.params, params);
            vals.extend_from_slice(&part.vals);
        }
        RingVector { params, vals }
    }

    /// Splits into consecutive chunks of the given length.
    pub fn chunks(&self, chunk: usize) -> Vec<RingVector> {
        assert!(chunk > 0 && self.len() % chunk == 0);
        self.vals
            .chunks(chunk)
            .map(|c| RingVector {
                params: self.params,
                vals: c.to_vec(),
            })
            .collect()
    }

    /// Hamming distance to another vector of the same length.
    pub fn distance(&self, rhs: &RingVector) -> usize {
        assert_eq!(self.len(), rhs.len());
        self.vals
            .iter()
            .zip(&rhs.vals)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// A dense matrix over Z/p^r.
#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    params: RingParams,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RingMatrix {}x{} over {:?} [", self.rows, self.cols, self.params)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl RingMatrix {
    pub fn zeros(params: RingParams, rows: usize, cols: usize) -> Self {
        RingMatrix {
            params,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(params: RingParams, n: usize) -> Self {
        let mut m = Self::zeros(params, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows_i64(params: RingParams, rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = if nrows == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            data.extend(row.iter().map(|&v| params.scalar(v).value()));
        }
        RingMatrix {
            params,
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn from_fn(
        params: RingParams,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(params.scalar(f(r, c)).value());
            }
        }
        RingMatrix {
            params,
            rows,
            cols,
            data,
        }
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> RingScalar {
        self.params.scalar(self.data[r * self.cols + c] as i64)
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingScalar) {
        self.data[r * self.cols + c] = v.value();
    }

    fn raw(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut out = Self::zeros(self.params, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.raw(r, c);
            }
        }
        out
    }

    pub fn mul(&self, rhs: &RingMatrix) -> RingMatrix {
        assert_eq!(self.params, rhs.params, "mixed ring parameters");
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let m = self.params.modulus();
        let mut out = Self::zeros(self.params, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.raw(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let cell = &mut out.data[r * rhs.cols + c];
                    *cell = (*cell + a * rhs.raw(k, c)) % m;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &RingVector) -> RingVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let m = self.params.modulus();
        let mut out = vec![0u64; self.rows];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for c in 0..self.cols {
                acc = (acc + self.raw(r, c) * v.vals[c]) % m;
            }
            out[r] = acc;
        }
        RingVector {
            params: self.params,
            vals: out,
        }
    }

    pub fn pow(&self, e: u32) -> RingMatrix {
        assert_eq!(self.rows, self.cols, "matrix power of non-square matrix");
        let mut acc = Self::identity(self.params, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn add(&self, rhs: &RingMatrix) -> RingMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let m = self.params.modulus();
        RingMatrix {
            params: self.params,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| (a + b) % m)
                .collect(),
        }
    }

    pub fn neg(&self) -> RingMatrix {
        let m = self.params.modulus();
        RingMatrix {
            params: self.params,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| (m - a) % m).collect(),
        }
    }

    /// Horizontal concatenation.
    pub fn hstack(parts: &[&RingMatrix]) -> RingMatrix {
        assert!(!parts.is_empty());
        let params = parts[0].params;
        let rows = parts[0].rows;
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(params, rows, cols);
        let mut off = 0;
        for part in parts {
            assert_eq!(part.rows, rows);
            for r in 0..rows {
                for c in 0..part.cols {
                    out.data[r * cols + off + c] = part.raw(r, c);
                }
            }
            off += part.cols;
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(parts: &[&RingMatrix]) -> RingMatrix {
        assert!(!parts.is_empty());
        let params = parts[0].params;
        let cols = parts[0].cols;
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for part in parts {
            assert_eq!(part.cols, cols);
            data.extend_from_slice(&part.data);
        }
        RingMatrix {
            params,
            rows,
            cols,
            data,
        }
    }

    pub fn column(&self, c: usize) -> RingVector {
        RingVector {
            params: self.params,
            vals: (0..self.rows).map(|r| self.raw(r, c)).collect(),
        }
    }

    /// Entry-wise reduction to F_p.
    pub fn mod_p(&self) -> FieldMatrix {
        let p = self.params.p();
        FieldMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v % p).collect(),
        }
    }

    /// The i-th p-adic digit of every entry, as a mod-p matrix.
    pub fn digit_layer(&self, i: u32) -> FieldMatrix {
        let p = self.params.p();
        let d = self.params.p_pow(i);
        FieldMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| (v / d) % p).collect(),
        }
    }

    pub fn rank_mod_p(&self) -> usize {
        self.mod_p().rank()
    }

    /// Kernel over Z/p^r is trivial iff the mod-p column rank is full.
    pub fn is_injective(&self) -> bool {
        self.rank_mod_p() == self.cols
    }

    /// Image over Z/p^r is everything iff the mod-p row rank is full.
    pub fn is_surjective(&self) -> bool {
        self.rank_mod_p() == self.rows
    }

    /// Solves `self * x = b` over Z/p^r by lifting a mod-p solution one
    /// digit layer at a time. Returns None when some layer is inconsistent;
    /// never fails when the matrix is surjective.
    pub fn lift_solve(&self, b: &RingVector) -> Option<RingVector> {
        assert_eq!(self.rows, b.len());
        let a0 = self.mod_p();
        let mut x = RingVector::zero(self.params, self.cols);
        for layer in 0..self.params.r() {
            let resid = b.sub(&self.mul_vec(&x));
            let delta = resid.exact_div_pow(layer).ok()?.mod_p();
            let sol = a0.solve(&delta).ok()?;
            x = x.add_layer(&sol.particular, layer);
        }
        debug_assert_eq!(self.mul_vec(&x), *b);
        Some(x)
    }
}

/// A dense matrix over the residue field F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} over F_{} [", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Solution set of a consistent mod-p linear system: one particular solution
/// plus a basis of the kernel.
#[derive(Debug, Clone)]
pub struct FieldSolution {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

fn field_inv(a: u64, p: u64) -> u64 {
    // p is prime and a != 0
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u64
}

impl FieldMatrix {
    pub fn new(p: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        assert!(data.iter().all(|&v| v < p));
        FieldMatrix { p, rows, cols, data }
    }

    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        assert!(v < self.p);
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let nrows = rows.len();
        let ncols = if nrows == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols);
            data.extend_from_slice(row);
        }
        Self::new(p, nrows, ncols, data)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc = (acc + self.get(r, c) * v[c]) % self.p;
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form. Pivoting is first-nonzero in deterministic
    /// row order so kernel bases are reproducible across runs.
    fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            for c in 0..m.cols {
                m.data.swap(row * m.cols + c, pr * m.cols + c);
            }
            let inv = field_inv(m.get(row, col), p);
            for c in 0..m.cols {
                let v = m.get(row, c) * inv % p;
                m.data[row * m.cols + c] = v;
            }
            for r in 0..m.rows {
                if r != row && m.get(r, col) != 0 {
                    let factor = m.get(r, col);
                    for c in 0..m.cols {
                        let v = (m.get(r, c) + (p - factor) * m.get(row, c)) % p;
                        m.data[r * m.cols + c] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A deterministic basis of ker(self) over F_p.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - rref.get(i, fc)) % p;
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b`, returning a particular solution and a kernel
    /// basis, or Inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<FieldSolution, LinalgError> {
        assert_eq!(self.rows, b.len());
        let p = self.p;
        let mut aug = FieldMatrix::zeros(p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.data[r * (self.cols + 1) + c] = self.get(r, c);
            }
            aug.data[r * (self.cols + 1) + self.cols] = b[r] % p;
        }
        let (rref, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(LinalgError::Inconsistent);
        }
        let mut particular = vec![0u64; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            particular[pc] = rref.get(i, self.cols);
        }
        Ok(FieldSolution {
            particular,
            kernel: self.kernel_basis(),
        })
    }
}

/// Visits every vector of the given length with entries in `[0, base)`.
/// The closure returns false to stop early.
pub fn for_each_vector(len: usize, base: u64, mut f: impl FnMut(&[u64]) -> bool) {
    let mut v = vec![0u64; len];
    loop {
        if !f(&v) {
            return;
        }
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            v[i] += 1;
            if v[i] < base {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}
