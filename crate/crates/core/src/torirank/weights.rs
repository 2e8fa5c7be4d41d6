use serde::Serialize;

use crate::ffla::{FpMatrix, FpVector, PrimeField};

use super::TorusError;

/// Simultaneous eigenspaces of commuting operators with M^p = M.
#[derive(Clone, Debug, Serialize)]
pub struct WeightDecomposition {
    pub total_dim: usize,
    /// Sorted lexicographically; the zero weight comes first when present.
    pub weights: Vec<Vec<u32>>,
    #[serde(skip)]
    pub spaces: Vec<Vec<FpVector>>,
}

impl WeightDecomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Vec::len).collect()
    }

    pub fn dim_of(&self, weight: &[u32]) -> usize {
        self.weights
            .iter()
            .position(|w| w == weight)
            .map_or(0, |i| self.spaces[i].len())
    }

    pub fn zero_weight_dim(&self) -> usize {
        self.weights
            .iter()
            .position(|w| w.iter().all(|&c| c == 0))
            .map_or(0, |i| self.spaces[i].len())
    }

    /// Dimensions of the nonzero weight spaces.
    pub fn nonzero_dims(&self) -> Vec<usize> {
        self.weights
            .iter()
            .zip(&self.spaces)
            .filter(|(w, _)| w.iter().any(|&c| c != 0))
            .map(|(_, s)| s.len())
            .collect()
    }

    /// The common dimension of all nonzero weight spaces, if they agree.
    pub fn common_nonzero_dim(&self) -> Option<usize> {
        let d = self.nonzero_dims();
        match d.first() {
            Some(&x) if d.iter().all(|&y| y == x) => Some(x),
            _ => None,
        }
    }
}

fn eigen_refine(field: PrimeField, m: &FpMatrix, basis: &[FpVector], c: u32) -> Vec<FpVector> {
    let n = m.rows();
    let v = FpMatrix::from_column_vectors(field, n, basis);
    let shifted = m.sub(&FpMatrix::identity(field, n).scale(c));
    let k = shifted.mul(&v).kernel_basis();
    let combos = v.mul(&FpMatrix::from_column_vectors(field, basis.len(), &k));
    let out: Vec<FpVector> = (0..combos.cols())
        .map(|j| combos.column_vector(j))
        .collect();
    crate::ffla::canonical_basis(field, n, &out)
}

/// Decomposes the space acted on by `operators` into simultaneous
/// eigenspaces. Each operator must satisfy M^p = M.
pub fn weight_decomposition(
    field: PrimeField,
    n: usize,
    operators: &[FpMatrix],
) -> Result<WeightDecomposition, TorusError> {
    for (i, m) in operators.iter().enumerate() {
        if m.mat_p_power()
            .map_err(|_| TorusError::NotSemisimpleAction(i))?
            != *m
        {
            return Err(TorusError::NotSemisimpleAction(i));
        }
    }
    let mut pieces: Vec<(Vec<u32>, Vec<FpVector>)> = vec![(
        Vec::new(),
        (0..n).map(|i| FpVector::unit(field, n, i)).collect(),
    )];
    if n == 0 {
        pieces.clear();
    }
    for m in operators {
        let mut next = Vec::new();
        for (w, basis) in &pieces {
            for c in field.elements() {
                let e = eigen_refine(field, m, basis, c);
                if !e.is_empty() {
                    let mut w2 = w.clone();
                    w2.push(c);
                    next.push((w2, e));
                }
            }
        }
        pieces = next;
    }
    pieces.sort_by(|a, b| a.0.cmp(&b.0));
    let total: usize = pieces.iter().map(|p| p.1.len()).sum();
    if total != n {
        return Err(TorusError::NotSemisimpleAction(operators.len()));
    }
    let (weights, spaces) = pieces.into_iter().unzip();
    Ok(WeightDecomposition {
        total_dim: n,
        weights,
        spaces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartanfam::build_w;

    #[test]
    fn w1_weights() {
        let w = build_w(1, 3).unwrap();
        let ad = w.ad_matrix_coords(&[0, 1, 0]);
        let dec = weight_decomposition(w.field(), 3, std::slice::from_ref(&ad)).unwrap();
        assert_eq!(dec.weights, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(dec.dims(), vec![1, 1, 1]);
        for (wt, space) in dec.weights.iter().zip(&dec.spaces) {
            for v in space {
                assert_eq!(ad.mul_vec(v.as_slice()), v.scale(wt[0]));
            }
        }
        let nil = w.ad_matrix_coords(&[1, 0, 0]);
        assert_eq!(
            weight_decomposition(w.field(), 3, &[nil]).unwrap_err(),
            TorusError::NotSemisimpleAction(0)
        );
    }
}
