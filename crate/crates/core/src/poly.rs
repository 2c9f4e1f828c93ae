//! Polynomial encoder matrices over Z/p^r[z].
//!
//! An encoder is an n x k polynomial matrix acting on message polynomials by
//! column convolution. The leading-coefficient matrix G_h (one column per
//! constraint length) decides the predictable degree property, and the sum of
//! the column degrees is the complexity, which equals the state dimension of
//! a minimal realization when the PDP holds.

use thiserror::Error;

use crate::linalg::{RingMatrix, RingVector};
use crate::ring::RingParams;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("encoder column {0} is zero")]
    ZeroColumn(usize),
    #[error("encoder columns have mismatched dimensions")]
    DimensionMismatch,
}

/// A vector of polynomials, stored as the sequence of coefficient vectors by
/// ascending z-degree with trailing zero coefficients trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVector {
    params: RingParams,
    dim: usize,
    coeffs: Vec<RingVector>,
}

impl PolyVector {
    pub fn zero(params: RingParams, dim: usize) -> Self {
        PolyVector {
            params,
            dim,
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(params: RingParams, dim: usize, mut coeffs: Vec<RingVector>) -> Self {
        assert!(coeffs.iter().all(|c| c.len() == dim));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyVector { params, dim, coeffs }
    }

    /// Convenience constructor: one inner slice per coefficient, ascending
    /// degree.
    pub fn from_i64(params: RingParams, dim: usize, coeffs: &[&[i64]]) -> Self {
        Self::from_coeffs(
            params,
            dim,
            coeffs
                .iter()
                .map(|c| RingVector::from_i64(params, c))
                .collect(),
        )
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Degree of the highest nonzero coefficient; None for the zero vector.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of z^i, zero-padded beyond the stored degree.
    pub fn coeff(&self, i: usize) -> RingVector {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| RingVector::zero(self.params, self.dim))
    }

    pub fn coeffs(&self) -> &[RingVector] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &PolyVector) -> PolyVector {
        assert_eq!(self.dim, rhs.dim);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect();
        PolyVector::from_coeffs(self.params, self.dim, coeffs)
    }

    /// Total Hamming weight across all coefficient vectors.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().map(|c| c.weight()).sum()
    }
}

/// An n x k polynomial encoder with columns ordered by descending constraint
/// length. Columns must be nonzero; injectivity as a polynomial matrix is the
/// caller's contract and holds in particular whenever `is_pdp` returns true.
#[derive(Debug, Clone)]
pub struct PolyEncoder {
    params: RingParams,
    n: usize,
    k: usize,
    columns: Vec<PolyVector>,
    nu: Vec<usize>,
    permutation: Vec<usize>,
}

impl PolyEncoder {
    /// Builds an encoder from its columns (each an n-dimensional polynomial
    /// vector). Columns are sorted by descending degree; the applied
    /// permutation is retained so message coordinates can be mapped back.
    pub fn new(columns: Vec<PolyVector>) -> Result<Self, PolyError> {
        assert!(!columns.is_empty());
        let params = columns[0].params();
        let n = columns[0].dim();
        if columns.iter().any(|c| c.dim() != n) {
            return Err(PolyError::DimensionMismatch);
        }
        for (i, c) in columns.iter().enumerate() {
            if c.is_zero() {
                return Err(PolyError::ZeroColumn(i));
            }
        }
        let mut order: Vec<usize> = (0..columns.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(columns[i].degree().unwrap()));
        let sorted: Vec<PolyVector> = order.iter().map(|&i| columns[i].clone()).collect();
        let nu = sorted.iter().map(|c| c.degree().unwrap()).collect();
        Ok(PolyEncoder {
            params,
            n,
            k: sorted.len(),
            columns: sorted,
            nu,
            permutation: order,
        })
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.k
    }

    /// Constraint lengths nu_1 >= ... >= nu_k.
    pub fn constraint_lengths(&self) -> &[usize] {
        &self.nu
    }

    /// Position of each sorted column in the caller's original ordering.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Largest constraint length.
    pub fn memory(&self) -> usize {
        self.nu[0]
    }

    /// Sum of the column degrees.
    pub fn complexity(&self) -> usize {
        self.nu.iter().sum()
    }

    pub fn column(&self, i: usize) -> &PolyVector {
        &self.columns[i]
    }

    /// The matrix of column-wise top-degree coefficients.
    pub fn leading_matrix(&self) -> RingMatrix {
        let mut out = RingMatrix::zeros(self.params, self.n, self.k);
        for (j, col) in self.columns.iter().enumerate() {
            let top = col.coeff(self.nu[j]);
            for i in 0..self.n {
                out.set(i, j, top.get(i));
            }
        }
        out
    }

    /// Predictable degree property: encoding never drops degree, which holds
    /// exactly when the leading-coefficient matrix is injective.
    pub fn is_pdp(&self) -> bool {
        self.leading_matrix().is_injective()
    }

    /// Column convolution v(z) = G(z) u(z) for a k-dimensional message
    /// polynomial vector.
    pub fn encode(&self, u: &PolyVector) -> PolyVector {
        assert_eq!(u.dim(), self.k);
        let mut acc = PolyVector::zero(self.params, self.n);
        let Some(u_deg) = u.degree() else {
            return acc;
        };
        for (j, col) in self.columns.iter().enumerate() {
            // scalar polynomial u_j(z) times column polynomial vector
            let col_deg = self.nu[j];
            let mut coeffs = vec![RingVector::zero(self.params, self.n); u_deg + col_deg + 1];
            for (d, c) in col.coeffs().iter().enumerate() {
                for t in 0..=u_deg {
                    let scalar = u.coeff(t).get(j);
                    if scalar.is_zero() {
                        continue;
                    }
                    let scaled = RingVector::from_raw(
                        self.params,
                        c.values()
                            .iter()
                            .map(|&v| v * scalar.value() % self.params.modulus())
                            .collect(),
                    );
                    coeffs[d + t] = coeffs[d + t].add(&scaled);
                }
            }
            acc = acc.add(&PolyVector::from_coeffs(self.params, self.n, coeffs));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::for_each_vector;

    fn z4() -> RingParams {
        RingParams::new(2, 2).unwrap()
    }

    #[test]
    fn leading_matrix_examples() {
        // constant encoder: leading matrix is the encoder itself
        let g = PolyEncoder::new(vec![
            PolyVector::from_i64(z4(), 2, &[&[1, 2]]),
            PolyVector::from_i64(z4(), 2, &[&[0, 1]]),
        ])
        .unwrap();
        assert_eq!(g.constraint_lengths(), &[0, 0]);
        assert_eq!(
            g.leading_matrix(),
            RingMatrix::from_rows_i64(z4(), &[&[1, 0], &[2, 1]])
        );

        // column (1+z, 2)^T has degree 1 and leading coefficients (1, 0)
        let g = PolyEncoder::new(vec![PolyVector::from_i64(z4(), 2, &[&[1, 2], &[1, 0]])])
            .unwrap();
        assert_eq!(g.constraint_lengths(), &[1]);
        assert_eq!(
            g.leading_matrix(),
            RingMatrix::from_rows_i64(z4(), &[&[1], &[0]])
        );
    }

    #[test]
    fn pdp_examples() {
        // identity leading matrix
        let g = PolyEncoder::new(vec![
            PolyVector::from_i64(z4(), 2, &[&[0, 0], &[1, 0]]),
            PolyVector::from_i64(z4(), 2, &[&[0, 1]]),
        ])
        .unwrap();
        assert!(g.is_pdp());

        // (2z+1, 2)^T: leading column (2, 0) is killed by 2
        let g = PolyEncoder::new(vec![PolyVector::from_i64(z4(), 2, &[&[1, 2], &[2, 0]])])
            .unwrap();
        assert!(!g.is_pdp());
    }

    #[test]
    fn complexity_examples() {
        let constant = PolyEncoder::new(vec![PolyVector::from_i64(z4(), 1, &[&[3]])]).unwrap();
        assert_eq!(constant.complexity(), 0);

        let g = PolyEncoder::new(vec![
            PolyVector::from_i64(z4(), 3, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 0]]),
            PolyVector::from_i64(z4(), 3, &[&[0, 1, 0], &[0, 0, 1]]),
        ])
        .unwrap();
        assert_eq!(g.constraint_lengths(), &[2, 1]);
        assert_eq!(g.complexity(), 3);
        assert_eq!(g.memory(), 2);
    }

    #[test]
    fn encode_examples() {
        // (1+z, 1)^T times u(z) = 1 + 2z: expand (1+z)(1+2z) = 1 + 3z + 2z^2
        let g = PolyEncoder::new(vec![PolyVector::from_i64(z4(), 2, &[&[1, 1], &[1, 0]])])
            .unwrap();
        let u = PolyVector::from_i64(z4(), 1, &[&[1], &[2]]);
        let v = g.encode(&u);
        assert_eq!(
            v,
            PolyVector::from_i64(z4(), 2, &[&[1, 1], &[3, 2], &[2, 0]])
        );

        // zero message
        assert!(g.encode(&PolyVector::zero(z4(), 1)).is_zero());

        // constant identity
        let id = PolyEncoder::new(vec![
            PolyVector::from_i64(z4(), 2, &[&[1, 0]]),
            PolyVector::from_i64(z4(), 2, &[&[0, 1]]),
        ])
        .unwrap();
        let u = PolyVector::from_i64(z4(), 2, &[&[1, 2], &[3, 0]]);
        assert_eq!(id.encode(&u), u);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(PolyVector::zero(z4(), 2).weight(), 0);
        assert_eq!(
            PolyVector::from_i64(z4(), 2, &[&[1, 0], &[2, 0]]).weight(),
            2
        );
        assert_eq!(PolyVector::from_i64(z4(), 3, &[&[3, 3, 3]]).weight(), 3);
    }

    /// Enumerates all messages of bounded degree and checks the PDP degree
    /// equality deg(G u) = max(deg u_j + nu_j); a non-PDP encoder must show a
    /// strict drop for some message.
    #[test]
    fn pdp_degree_equality_exhaustive() {
        let pdp = PolyEncoder::new(vec![PolyVector::from_i64(z4(), 2, &[&[0, 1], &[1, 0]])])
            .unwrap();
        assert!(pdp.is_pdp());
        let non_pdp =
            PolyEncoder::new(vec![PolyVector::from_i64(z4(), 2, &[&[1, 2], &[2, 0]])]).unwrap();
        assert!(!non_pdp.is_pdp());

        let mut drop_seen = false;
        for_each_vector(3, 4, |vals| {
            let u = PolyVector::from_coeffs(
                z4(),
                1,
                vals.iter()
                    .map(|&v| RingVector::from_i64(z4(), &[v as i64]))
                    .collect(),
            );
            let Some(u_deg) = u.degree() else {
                return true;
            };
            let predicted = u_deg + 1; // both encoders have nu_1 = 1
            assert_eq!(
                pdp.encode(&u).degree(),
                Some(predicted),
                "PDP encoder must preserve degree"
            );
            if non_pdp.encode(&u).degree() != Some(predicted) {
                drop_seen = true;
            }
            true
        });
        assert!(drop_seen, "non-PDP encoder never dropped degree");
    }

    #[test]
    fn encode_is_linear() {
        let g = PolyEncoder::new(vec![
            PolyVector::from_i64(z4(), 2, &[&[1, 1], &[1, 0]]),
            PolyVector::from_i64(z4(), 2, &[&[0, 1]]),
        ])
        .unwrap();
        for_each_vector(4, 4, |vals| {
            let u1 = PolyVector::from_i64(z4(), 2, &[&[vals[0] as i64, vals[1] as i64]]);
            let u2 = PolyVector::from_i64(
                z4(),
                2,
                &[&[3, 1], &[vals[2] as i64, vals[3] as i64]],
            );
            let lhs = g.encode(&u1.add(&u2));
            let rhs = g.encode(&u1).add(&g.encode(&u2));
            assert_eq!(lhs, rhs);
            true
        });
    }

    #[test]
    fn columns_sorted_with_permutation() {
        let short = PolyVector::from_i64(z4(), 1, &[&[1]]);
        let long = PolyVector::from_i64(z4(), 1, &[&[1], &[1]]);
        let g = PolyEncoder::new(vec![short, long]).unwrap();
        assert_eq!(g.constraint_lengths(), &[1, 0]);
        assert_eq!(g.permutation(), &[1, 0]);
    }
}
