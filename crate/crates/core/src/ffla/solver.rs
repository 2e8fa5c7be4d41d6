use std::collections::HashMap;

use super::sparse::Accumulator;
use super::{PrimeField, SparseVec};

/// Incremental reduced row-echelon form of a growing list of independent
/// vectors, with enough bookkeeping to express any vector of the span in
/// terms of the inserted vectors.
///
/// Rows are kept fully reduced (each row vanishes at every other row's
/// pivot), so the coefficient of row `k` in a member of the span is simply
/// that member's entry at pivot `k`.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    field: PrimeField,
    len: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    row_of_pivot: HashMap<usize, usize>,
    /// row k = Σ combos[k][j] · input_j
    combos: Vec<SparseVec>,
}

impl SpanSolver {
    pub fn new(field: PrimeField, len: usize) -> Self {
        Self {
            field,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_pivot: HashMap::new(),
            combos: Vec::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Ambient length.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Echelon rows (not sorted by pivot).
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Echelon rows ordered by pivot column: the canonical basis of the span.
    pub fn canonical_rows(&self) -> Vec<SparseVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&k| self.pivots[k]);
        order.into_iter().map(|k| self.rows[k].clone()).collect()
    }

    fn coefficients(&self, v: &SparseVec) -> Vec<(usize, u32)> {
        v.entries()
            .iter()
            .filter_map(|&(c, x)| self.row_of_pivot.get(&c).map(|&k| (k, x)))
            .collect()
    }

    /// Residual of `v` after removing its component along the span; zero
    /// exactly when `v` lies in the span. The residual vanishes at every pivot.
    pub fn residual(&self, v: &SparseVec) -> SparseVec {
        let coeffs = self.coefficients(v);
        if coeffs.is_empty() {
            return v.clone();
        }
        let f = self.field;
        let mut acc = Accumulator::new(f, self.len);
        acc.add_scaled(1, v);
        for (k, a) in coeffs {
            acc.add_scaled(f.neg(a), &self.rows[k]);
        }
        acc.drain()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.residual(v).is_zero()
    }

    /// Adds `v` to the span. Returns `false` (leaving the solver unchanged)
    /// when `v` is already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let f = self.field;
        let coeffs = self.coefficients(v);
        let residual = self.residual(v);
        let Some((col, lead)) = residual.leading() else {
            return false;
        };
        let inv = f.inv(lead);
        let new_row = residual.scale(f, inv);
        let input_index = self.rows.len();
        let mut combo = SparseVec::from_unsorted(f, vec![(input_index, 1)]);
        for &(k, a) in &coeffs {
            combo = combo.add_scaled(f, f.neg(a), &self.combos[k]);
        }
        let combo = combo.scale(f, inv);
        for k in 0..self.rows.len() {
            let beta = self.rows[k].get(col);
            if beta != 0 {
                let nb = f.neg(beta);
                self.rows[k] = self.rows[k].add_scaled(f, nb, &new_row);
                self.combos[k] = self.combos[k].add_scaled(f, nb, &combo);
            }
        }
        self.row_of_pivot.insert(col, self.rows.len());
        self.pivots.push(col);
        self.rows.push(new_row);
        self.combos.push(combo);
        true
    }

    /// Coordinates of `v` with respect to the inserted vectors, or `None`
    /// when `v` lies outside their span.
    pub fn solve(&self, v: &SparseVec) -> Option<Vec<u32>> {
        if !self.residual(v).is_zero() {
            return None;
        }
        let f = self.field;
        let mut acc = Accumulator::new(f, self.rows.len());
        for (k, a) in self.coefficients(v) {
            acc.add_scaled(a, &self.combos[k]);
        }
        Some(acc.drain().to_dense(self.rows.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn solve_recombines_exactly(
            vecs in proptest::collection::vec(proptest::collection::vec(0u32..5, 8), 1..6),
            coeffs in proptest::collection::vec(0u32..5, 6),
        ) {
            let f = PrimeField::new(5).unwrap();
            let mut s = SpanSolver::new(f, 8);
            let mut kept = Vec::new();
            for v in &vecs {
                if s.insert(&SparseVec::from_dense(v)) {
                    kept.push(v.clone());
                }
            }
            let mut target = vec![0u32; 8];
            for (c, v) in coeffs.iter().zip(&kept) {
                for (t, x) in target.iter_mut().zip(v) {
                    *t = f.add(*t, f.mul(*c, *x));
                }
            }
            let sol = s.solve(&SparseVec::from_dense(&target)).unwrap();
            prop_assert_eq!(&sol[..], &coeffs[..kept.len()]);
        }
    }

    #[test]
    fn rejects_dependent_and_outside() {
        let f = PrimeField::new(3).unwrap();
        let mut s = SpanSolver::new(f, 3);
        assert!(s.insert(&SparseVec::from_dense(&[1, 1, 0])));
        assert!(!s.insert(&SparseVec::from_dense(&[2, 2, 0])));
        assert_eq!(s.solve(&SparseVec::from_dense(&[0, 0, 1])), None);
        assert!(s.insert(&SparseVec::from_dense(&[0, 1, 1])));
        assert_eq!(
            s.solve(&SparseVec::from_dense(&[1, 2, 1])),
            Some(vec![1, 1])
        );
    }
}
