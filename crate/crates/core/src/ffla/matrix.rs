use super::{FflaError, FpVector, PrimeField, SparseMatrix};

/// Dense row-major matrix over 𝔽p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FpMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_i64(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix literal");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = field.reduce(v);
            }
        }
        m
    }

    /// Rows given as vectors of length `cols`.
    pub fn from_row_vectors(field: PrimeField, cols: usize, rows: &[FpVector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r.as_slice());
        }
        Self {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Columns given as vectors of length `rows`.
    pub fn from_column_vectors(field: PrimeField, rows: usize, cols: &[FpVector]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m.data[i * m.cols + j] = c.get(i);
            }
        }
        m
    }

    pub fn from_raw(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(v < self.field.p());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> FpVector {
        FpVector::from_residues(self.field, self.row(i).to_vec())
    }

    pub fn column_vector(&self, j: usize) -> FpVector {
        FpVector::from_residues(self.field, (0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<(), FflaError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(FflaError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Self { data, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Self { data, ..*self }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Self { data, ..*self }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: u32, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = f.add(*a, f.mul(c, b));
            }
        }
    }

    /// Matrix product. Zero entries of the left factor are skipped, which
    /// keeps products of the (typically sparse) realization matrices cheap.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let p = self.field.p() as u64;
        let n = other.cols;
        let mut out = vec![0u32; self.rows * n];
        let mut acc = vec![0u64; n];
        // each term < 2^30; flush every 2^30 additions at the latest
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            let mut pending = 0u32;
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                for (s, &b) in acc.iter_mut().zip(other.row(k)) {
                    *s += a * b as u64;
                }
                pending += 1;
                if pending == 1 << 30 {
                    acc.iter_mut().for_each(|s| *s %= p);
                    pending = 0;
                }
            }
            for (o, s) in out[i * n..(i + 1) * n].iter_mut().zip(&acc) {
                *o = (*s % p) as u32;
            }
        }
        Self {
            field: self.field,
            rows: self.rows,
            cols: n,
            data: out,
        }
    }

    pub fn mul_vec(&self, v: &[u32]) -> FpVector {
        assert_eq!(self.cols, v.len());
        let p = self.field.p() as u64;
        let data = (0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect();
        FpVector::from_residues(self.field, data)
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `M^e` by square-and-multiply.
    pub fn pow(&self, mut e: u64) -> Result<Self, FflaError> {
        self.require_square()?;
        let mut result = Self::identity(self.field, self.rows);
        let mut base = self.clone();
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first {
                    base.clone()
                } else {
                    result.mul(&base)
                };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// `M^p` for the field characteristic `p`.
    pub fn mat_p_power(&self) -> Result<Self, FflaError> {
        self.pow(self.field.p() as u64)
    }

    pub fn rref(&self) -> Rref {
        let f = self.field;
        let p = f.p();
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut support: Vec<usize> = Vec::new();
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    m.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m[r * cols + c]);
            support.clear();
            for j in c..cols {
                let v = &mut m[r * cols + j];
                if *v != 0 {
                    *v = f.mul(*v, inv);
                    support.push(j);
                }
            }
            let (head, tail) = m.split_at_mut(r * cols);
            let (pivot_row, rest) = tail.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let fac = row[c];
                if fac != 0 {
                    let nf = p - fac;
                    for &j in &support {
                        row[j] = (row[j] + nf * pivot_row[j]) % p;
                    }
                }
            };
            head.chunks_exact_mut(cols).for_each(eliminate);
            rest.chunks_exact_mut(cols).for_each(eliminate);
            pivots.push(c);
            r += 1;
        }
        Rref {
            reduced: Self {
                field: f,
                rows,
                cols,
                data: m,
            },
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel `{v : Mv = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<FpVector> {
        let f = self.field;
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(reduced.get(k, free));
                }
                FpVector::from_residues(f, v)
            })
            .collect()
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix::from_dense(self)
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(field: PrimeField, cols: usize, blocks: &[FpMatrix]) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Self {
            field,
            rows,
            cols,
            data,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let k3 = f(3);
        let r = FpMatrix::identity(k3, 3).rref();
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let m = FpMatrix::from_i64(f(5), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);

        assert_eq!(FpMatrix::zeros(k3, 4, 4).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        let k3 = f(3);
        assert!(FpMatrix::identity(k3, 3).kernel_basis().is_empty());
        assert_eq!(FpMatrix::zeros(k3, 2, 2).kernel_basis().len(), 2);
        let m = FpMatrix::from_i64(k3, &[vec![1, 1], vec![2, 2]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (1, 2)
        let v = k[0].as_slice();
        assert_eq!(k3.mul(v[0], 2), v[1]);
    }

    #[test]
    fn p_power_examples() {
        let k3 = f(3);
        let j = FpMatrix::from_i64(k3, &[vec![0, 1], vec![0, 0]]);
        assert!(j.mat_p_power().unwrap().is_zero());
        let d = FpMatrix::from_i64(k3, &[vec![1, 0], vec![0, 2]]);
        assert_eq!(d.mat_p_power().unwrap(), d);
        // companion matrix of X^2 - 1
        let c = FpMatrix::from_i64(k3, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(c.mul(&c).mul(&c), c);
        assert_eq!(c.mat_p_power().unwrap(), c);
        assert!(FpMatrix::zeros(k3, 2, 3).mat_p_power().is_err());
    }

    fn arb_matrix(p: u32, rows: usize, cols: usize) -> impl Strategy<Value = FpMatrix> {
        proptest::collection::vec(0..p, rows * cols)
            .prop_map(move |d| FpMatrix::from_raw(f(p), rows, cols, d))
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix(5, 4, 6)) {
            let r = m.rref();
            prop_assert_eq!(r.reduced.rref().reduced, r.reduced.clone());
            prop_assert_eq!(r.rank, r.pivots.len());
        }

        #[test]
        fn kernel_vectors_are_annihilated(m in arb_matrix(7, 5, 7)) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.len(), m.cols() - m.rank());
            for v in &k {
                prop_assert!(m.mul_vec(v.as_slice()).is_zero());
            }
        }

        #[test]
        fn p_power_matches_repeated_products(m in arb_matrix(5, 5, 5)) {
            let mut naive = m.clone();
            for _ in 1..5 {
                naive = naive.mul(&m);
            }
            prop_assert_eq!(m.mat_p_power().unwrap(), naive);
        }

        #[test]
        fn idempotent_p_map_gives_full_eigenspace_split(diag in proptest::collection::vec(0u32..3, 4), mix in arb_matrix(3, 4, 4)) {
            // M = S D S^{-1} with D diagonal over F_3 satisfies M^p = M
            let k = f(3);
            prop_assume!(mix.rank() == 4);
            let mut d = FpMatrix::zeros(k, 4, 4);
            for (i, &v) in diag.iter().enumerate() { d.set(i, i, v); }
            let aug = {
                // invert mix via rref of [mix | I]
                let mut a = FpMatrix::zeros(k, 4, 8);
                for i in 0..4 { for j in 0..4 { a.set(i, j, mix.get(i, j)); } a.set(i, 4 + i, 1); }
                a.rref().reduced
            };
            let mut inv = FpMatrix::zeros(k, 4, 4);
            for i in 0..4 { for j in 0..4 { inv.set(i, j, aug.get(i, 4 + j)); } }
            let m = mix.mul(&d).mul(&inv);
            prop_assert_eq!(m.mat_p_power().unwrap(), m.clone());
            let total: usize = (0..3)
                .map(|c| super::super::eigenspace(&m, super::super::FpScalar::new(k, c)).unwrap().len())
                .sum();
            prop_assert_eq!(total, 4);
        }
    }
}
