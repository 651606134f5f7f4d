//! Compressed-sparse-row complex matrices.
//!
//! Just enough sparse algebra to assemble operators on the atom-cavity tensor
//! space and the vectorized Liouvillian: Kronecker products, sums, products,
//! adjoints and matrix-vector products. Factorization is delegated to faer.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Builds a matrix from `(row, col, value)` entries. Duplicates are summed
    /// and exact zeros are dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut rows: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in entries {
            assert!(r < nrows && c < ncols, "entry ({r}, {c}) out of bounds");
            *rows[r].entry(c).or_insert(ZERO) += v;
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in rows {
            for (c, v) in row {
                if v != ZERO {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let entries = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, m[(i, j)]));
        Self::from_triplets(m.nrows(), m.ncols(), entries)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates over stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.values[k]))
        })
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.indptr[r]..self.indptr[r + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let range = self.indptr[r]..self.indptr[r + 1];
        match self.indices[range.clone()].binary_search(&c) {
            Ok(k) => self.values[range.start + k],
            Err(_) => ZERO,
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.iter().map(|(r, c, v)| (c, r, v)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.iter().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = v.conj());
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.iter().map(|(r, c, v)| (r, c, v * factor)),
        )
    }

    /// Linear combination `Σ cᵢ Aᵢ` of equally shaped matrices.
    pub fn linear_combination(terms: &[(Complex64, &CsrMatrix)]) -> Self {
        let (nrows, ncols) = terms
            .first()
            .map(|(_, m)| (m.nrows, m.ncols))
            .expect("at least one term");
        for (_, m) in terms {
            assert_eq!((m.nrows, m.ncols), (nrows, ncols), "shape mismatch");
        }
        Self::from_triplets(
            nrows,
            ncols,
            terms
                .iter()
                .flat_map(|(c, m)| m.iter().map(move |(r, j, v)| (r, j, c * v))),
        )
    }

    pub fn add(&self, other: &CsrMatrix) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::linear_combination(&[(one, self), (one, other)])
    }

    pub fn sub(&self, other: &CsrMatrix) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::linear_combination(&[(one, self), (-one, other)])
    }

    pub fn matmul(&self, other: &CsrMatrix) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimensions differ");
        let mut entries = Vec::new();
        for r in 0..self.nrows {
            let mut acc: BTreeMap<usize, Complex64> = BTreeMap::new();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    *acc.entry(c).or_insert(ZERO) += a * b;
                }
            }
            entries.extend(acc.into_iter().map(|(c, v)| (r, c, v)));
        }
        Self::from_triplets(self.nrows, other.ncols, entries)
    }

    /// Kronecker product `self ⊗ other`; `self` indexes the outer block.
    pub fn kron(&self, other: &CsrMatrix) -> Self {
        let entries = self.iter().flat_map(|(r1, c1, v1)| {
            other.iter().map(move |(r2, c2, v2)| {
                (r1 * other.nrows + r2, c1 * other.ncols + c2, v1 * v2)
            })
        });
        Self::from_triplets(self.nrows * other.nrows, self.ncols * other.ncols, entries)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            *out = acc;
        }
    }

    /// `Tr(A ρ)` for a dense `ρ`.
    pub fn trace_product(&self, rho: &DMatrix<Complex64>) -> Complex64 {
        self.iter().map(|(r, c, v)| v * rho[(c, r)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &CsrMatrix) -> f64 {
        self.sub(other)
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Returns a copy with row `r` replaced by the given entries.
    pub fn with_row_replaced(&self, r: usize, entries: &[(usize, Complex64)]) -> Self {
        let kept = self.iter().filter(|&(row, _, _)| row != r);
        let new = entries.iter().map(|&(c, v)| (r, c, v));
        Self::from_triplets(self.nrows, self.ncols, kept.chain(new))
    }
}
