//! Exact dense (and a little sparse) linear algebra over the prime field 𝔽p.
//!
//! Residues are stored as `u32` in `[0, p)`; the modulus lives on the
//! containers rather than on every scalar. Products of two residues fit in
//! 30 bits for the supported moduli (`p < 2^15`), so inner products are
//! accumulated in `u64` and reduced once at the end.

mod matrix;
mod solver;
mod sparse;

pub use matrix::{FpMatrix, Rref};
pub use solver::SpanSolver;
pub use sparse::{SparseMatrix, SparseVec};

use std::fmt;

use thiserror::Error;

/// Largest modulus accepted by [`PrimeField::new`].
pub const MAX_MODULUS: u32 = 1 << 15;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FflaError {
    #[error("modulus {0} is not a prime in [3, 2^15)")]
    BadModulus(u32),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("basis vectors are linearly dependent (vector {0})")]
    DependentBasis(usize),
}

/// The prime field 𝔽p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FflaError> {
        if !(3..MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(FflaError::BadModulus(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    /// All residues `0..p`.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A single residue together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    p: u32,
}

impl FpScalar {
    pub fn new(field: PrimeField, value: i64) -> Self {
        Self {
            value: field.reduce(value),
            p: field.p(),
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A coordinate vector over 𝔽p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpVector {
    field: PrimeField,
    data: Vec<u32>,
}

impl FpVector {
    pub fn zeros(field: PrimeField, len: usize) -> Self {
        Self {
            field,
            data: vec![0; len],
        }
    }

    pub fn unit(field: PrimeField, len: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, len);
        v.data[i] = 1;
        v
    }

    pub fn from_i64(field: PrimeField, values: &[i64]) -> Self {
        Self {
            field,
            data: values.iter().map(|&v| field.reduce(v)).collect(),
        }
    }

    /// Wraps residues that are already reduced.
    pub fn from_residues(field: PrimeField, data: Vec<u32>) -> Self {
        debug_assert!(data.iter().all(|&v| v < field.p()));
        Self { field, data }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.data
    }

    pub fn get(&self, i: usize) -> u32 {
        self.data[i]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Self { field: f, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Self { field: f, data }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self {
            field: f,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: u32, other: &[u32]) {
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(other) {
            *a = f.add(*a, f.mul(c, b));
        }
    }
}

/// Σ coeffs[i] · vectors[i], all of length `len`.
pub fn combine(field: PrimeField, len: usize, coeffs: &[u32], vectors: &[FpVector]) -> FpVector {
    let mut out = FpVector::zeros(field, len);
    for (&c, v) in coeffs.iter().zip(vectors) {
        out.add_scaled(c, v.as_slice());
    }
    out
}

/// Reduced row-echelon form of a list of vectors: returns a canonical basis
/// of their span (the nonzero rref rows).
pub fn canonical_basis(field: PrimeField, len: usize, vectors: &[FpVector]) -> Vec<FpVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = FpMatrix::from_row_vectors(field, len, vectors);
    let rref = m.rref();
    (0..rref.rank).map(|i| rref.reduced.row_vector(i)).collect()
}

/// Basis of span(a) ∩ span(b). Inputs need not be independent.
pub fn intersect_spans(
    field: PrimeField,
    len: usize,
    a: &[FpVector],
    b: &[FpVector],
) -> Vec<FpVector> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // columns: a_1..a_k, b_1..b_l; kernel vectors (x, y) give Σ x_i a_i = -Σ y_j b_j
    let cols = a.len() + b.len();
    let mut m = FpMatrix::zeros(field, len, cols);
    for (j, v) in a.iter().chain(b).enumerate() {
        for i in 0..len {
            m.set(i, j, v.get(i));
        }
    }
    let kernel = m.kernel_basis();
    let images: Vec<FpVector> = kernel
        .iter()
        .map(|k| combine(field, len, &k.as_slice()[..a.len()], a))
        .collect();
    canonical_basis(field, len, &images)
}

/// Dimension of the span of the given vectors.
pub fn span_dim(field: PrimeField, len: usize, vectors: &[FpVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    FpMatrix::from_row_vectors(field, len, vectors).rank()
}

/// Coordinates of `target` in the span of `basis`, or `None` when outside.
pub fn coords_in_span(
    basis: &[FpVector],
    target: &FpVector,
) -> Result<Option<FpVector>, FflaError> {
    let field = target.field();
    let len = target.len();
    let mut solver = SpanSolver::new(field, len);
    for (i, b) in basis.iter().enumerate() {
        if b.len() != len {
            return Err(FflaError::DimensionMismatch {
                expected: len,
                found: b.len(),
            });
        }
        if b.field() != field {
            return Err(FflaError::ModulusMismatch(field.p(), b.field().p()));
        }
        if !solver.insert(&SparseVec::from_dense(b.as_slice())) {
            return Err(FflaError::DependentBasis(i));
        }
    }
    Ok(solver
        .solve(&SparseVec::from_dense(target.as_slice()))
        .map(|c| FpVector::from_residues(field, c)))
}

/// Basis of ker(M − cI).
pub fn eigenspace(m: &FpMatrix, c: FpScalar) -> Result<Vec<FpVector>, FflaError> {
    m.require_square()?;
    let shifted = m.sub(&FpMatrix::identity(m.field(), m.rows()).scale(c.value()));
    Ok(shifted.kernel_basis())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn field_rejects_bad_moduli() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1 << 15).is_err());
        assert!(PrimeField::new(32749).is_ok());
    }

    #[test]
    fn inverses() {
        let k = f(7);
        for a in 1..7 {
            assert_eq!(k.mul(a, k.inv(a)), 1);
        }
    }

    #[test]
    fn coords_examples() {
        let k = f(3);
        let e1 = FpVector::from_i64(k, &[1, 0]);
        let e2 = FpVector::from_i64(k, &[0, 1]);
        let t = FpVector::from_i64(k, &[1, 2]);
        let c = coords_in_span(&[e1.clone(), e2.clone()], &t)
            .unwrap()
            .unwrap();
        assert_eq!(c.as_slice(), &[1, 2]);
        assert_eq!(coords_in_span(&[e1], &e2).unwrap(), None);

        let k5 = f(5);
        let b = FpVector::from_i64(k5, &[1, 1]);
        let t = FpVector::from_i64(k5, &[2, 2]);
        assert_eq!(coords_in_span(&[b], &t).unwrap().unwrap().as_slice(), &[2]);
    }

    #[test]
    fn coords_rejects_dependent_basis() {
        let k = f(5);
        let a = FpVector::from_i64(k, &[1, 2]);
        let b = FpVector::from_i64(k, &[2, 4]);
        assert_eq!(
            coords_in_span(&[a.clone(), b], &a),
            Err(FflaError::DependentBasis(1))
        );
    }

    #[test]
    fn eigenspace_examples() {
        let k = f(3);
        let d = FpMatrix::from_i64(k, &[vec![1, 0], vec![0, 2]]);
        let e = eigenspace(&d, FpScalar::new(k, 1)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].as_slice(), &[1, 0]);
        let id = FpMatrix::identity(k, 3);
        assert!(eigenspace(&id, FpScalar::new(k, 0)).unwrap().is_empty());
    }

    #[test]
    fn intersection_of_planes() {
        let k = f(5);
        let a = vec![
            FpVector::from_i64(k, &[1, 0, 0]),
            FpVector::from_i64(k, &[0, 1, 0]),
        ];
        let b = vec![
            FpVector::from_i64(k, &[0, 1, 0]),
            FpVector::from_i64(k, &[0, 0, 1]),
        ];
        let i = intersect_spans(k, 3, &a, &b);
        assert_eq!(i.len(), 1);
        assert_eq!(i[0].as_slice(), &[0, 1, 0]);
    }
}
