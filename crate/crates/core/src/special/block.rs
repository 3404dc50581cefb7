use nalgebra::DMatrix;

use super::C64;
use crate::error::{domain, Result};

/// A `(2l+1) x (2l+1)` complex matrix acting on one angular momentum multiplet.
///
/// Row and column 0 correspond to `mu = +l`, the last ones to `mu = -l`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBlock {
    l: u32,
    matrix: DMatrix<C64>,
}

impl OperatorBlock {
    pub fn new(l: u32, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = 2 * l as usize + 1;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(domain(format!(
                "block for l={l} must be {dim}x{dim}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { l, matrix })
    }

    pub fn identity(l: u32) -> Self {
        let dim = 2 * l as usize + 1;
        Self { l, matrix: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(l: u32) -> Self {
        let dim = 2 * l as usize + 1;
        Self { l, matrix: DMatrix::zeros(dim, dim) }
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn dim(&self) -> usize {
        2 * self.l as usize + 1
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// Row/column position of magnetic number `mu`.
    #[inline]
    pub fn position(&self, mu: i32) -> usize {
        debug_assert!(mu.unsigned_abs() <= self.l);
        (self.l as i32 - mu) as usize
    }

    /// Magnetic number stored at row/column `k`.
    #[inline]
    pub fn mu_at(&self, k: usize) -> i32 {
        self.l as i32 - k as i32
    }

    /// Matrix element `<l, mu| A |l, nu>`.
    pub fn entry(&self, mu: i32, nu: i32) -> C64 {
        self.matrix[(self.position(mu), self.position(nu))]
    }

    /// `max |A^dagger A - 1|` over all entries.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let dim = self.dim();
        max_abs_diff(&prod, &DMatrix::identity(dim, dim))
    }

    /// `max |A - A^dagger|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn mul(&self, other: &OperatorBlock) -> OperatorBlock {
        assert_eq!(self.l, other.l, "blocks from different multiplets");
        Self { l: self.l, matrix: &self.matrix * &other.matrix }
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &OperatorBlock) -> OperatorBlock {
        assert_eq!(self.l, other.l, "blocks from different multiplets");
        Self {
            l: self.l,
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        }
    }
}

pub(crate) fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
