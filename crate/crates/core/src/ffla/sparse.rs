use super::{FpMatrix, PrimeField};

/// Sparse vector: entries sorted by index, no explicit zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, u32)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_dense(values: &[u32]) -> Self {
        Self {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| (i, v))
                .collect(),
        }
    }

    /// Entries in arbitrary order, duplicates summed.
    pub fn from_unsorted(field: PrimeField, mut entries: Vec<(usize, u32)>) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|e| e.1 != 0);
        Self { entries: out }
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries
            .binary_search_by_key(&i, |e| e.0)
            .map_or(0, |k| self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, u32)> {
        self.entries.first().copied()
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    pub fn scale(&self, field: PrimeField, c: u32) -> Self {
        if c == 0 {
            return Self::new();
        }
        Self {
            entries: self
                .entries
                .iter()
                .map(|&(i, v)| (i, field.mul(v, c)))
                .collect(),
        }
    }

    /// `self + c * other`
    pub fn add_scaled(&self, field: PrimeField, c: u32, other: &Self) -> Self {
        if c == 0 {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i]);
                i += 1;
            } else if take_b {
                out.push((b[j].0, field.mul(c, b[j].1)));
                j += 1;
            } else {
                let v = field.add(a[i].1, field.mul(c, b[j].1));
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        Self { entries: out }
    }
}

/// Dense accumulator used to sum many sparse contributions.
pub(crate) struct Accumulator {
    field: PrimeField,
    values: Vec<u32>,
    touched: Vec<usize>,
}

impl Accumulator {
    pub(crate) fn new(field: PrimeField, len: usize) -> Self {
        Self {
            field,
            values: vec![0; len],
            touched: Vec::new(),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, i: usize, v: u32) {
        if v == 0 {
            return;
        }
        let slot = &mut self.values[i];
        if *slot == 0 {
            self.touched.push(i);
        }
        *slot = self.field.add(*slot, v);
        // zero slots stay in `touched`; filtered on drain
    }

    pub(crate) fn add_scaled(&mut self, c: u32, v: &SparseVec) {
        if c == 0 {
            return;
        }
        for &(i, x) in v.entries() {
            self.add(i, self.field.mul(c, x));
        }
    }

    pub(crate) fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        self.touched.dedup();
        let mut entries = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let v = std::mem::take(&mut self.values[i]);
            if v != 0 {
                entries.push((i, v));
            }
        }
        self.touched.clear();
        SparseVec { entries }
    }
}

/// Square sparse matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: PrimeField,
    m: usize,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(field: PrimeField, m: usize) -> Self {
        Self {
            field,
            m,
            rows: vec![SparseVec::new(); m],
        }
    }

    pub fn from_triplets(field: PrimeField, m: usize, triplets: &[(usize, usize, u32)]) -> Self {
        let mut per_row: Vec<Vec<(usize, u32)>> = vec![Vec::new(); m];
        for &(r, c, v) in triplets {
            assert!(r < m && c < m, "entry ({r},{c}) outside {m}x{m}");
            per_row[r].push((c, v % field.p()));
        }
        Self {
            field,
            m,
            rows: per_row
                .into_iter()
                .map(|e| SparseVec::from_unsorted(field, e))
                .collect(),
        }
    }

    pub fn from_dense(d: &FpMatrix) -> Self {
        assert!(d.is_square());
        Self {
            field: d.field(),
            m: d.rows(),
            rows: (0..d.rows())
                .map(|i| SparseVec::from_dense(d.row(i)))
                .collect(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(SparseVec::is_zero)
    }

    /// Triplets `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, u32)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.entries().iter().map(move |&(c, v)| (r, c, v)))
            .collect()
    }

    pub fn to_dense(&self) -> FpMatrix {
        let mut d = FpMatrix::zeros(self.field, self.m, self.m);
        for (r, c, v) in self.triplets() {
            d.set(r, c, v);
        }
        d
    }

    /// Row-major flattening `row * m + col`.
    pub fn flatten(&self) -> SparseVec {
        let m = self.m;
        SparseVec {
            entries: self
                .rows
                .iter()
                .enumerate()
                .flat_map(|(r, row)| row.entries().iter().map(move |&(c, v)| (r * m + c, v)))
                .collect(),
        }
    }

    pub fn unflatten(field: PrimeField, m: usize, v: &SparseVec) -> Self {
        let triplets: Vec<_> = v
            .entries()
            .iter()
            .map(|&(i, x)| (i / m, i % m, x))
            .collect();
        Self::from_triplets(field, m, &triplets)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let mut acc = Accumulator::new(self.field, self.m);
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &(k, a) in row.entries() {
                    acc.add_scaled(a, &other.rows[k]);
                }
                acc.drain()
            })
            .collect();
        Self {
            field: self.field,
            m: self.m,
            rows,
        }
    }

    pub fn add_scaled(&self, c: u32, other: &Self) -> Self {
        Self {
            field: self.field,
            m: self.m,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.add_scaled(self.field, c, b))
                .collect(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        let f = self.field;
        self.mul(other).add_scaled(f.neg(1), &other.mul(self))
    }

    /// `M^p` by square-and-multiply on sparse factors.
    pub fn p_power(&self) -> Self {
        let mut e = self.field.p();
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result.expect("p >= 3")
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let off = self.m;
        let mut triplets = self.triplets();
        triplets.extend(
            other
                .triplets()
                .into_iter()
                .map(|(r, c, v)| (r + off, c + off, v)),
        );
        Self::from_triplets(self.field, self.m + other.m, &triplets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_matches_dense_products() {
        let k = PrimeField::new(5).unwrap();
        let a = FpMatrix::from_i64(k, &[vec![1, 2, 0], vec![0, 0, 3], vec![4, 0, 1]]);
        let b = FpMatrix::from_i64(k, &[vec![0, 1, 1], vec![2, 0, 0], vec![0, 3, 4]]);
        let (sa, sb) = (a.to_sparse(), b.to_sparse());
        assert_eq!(sa.mul(&sb).to_dense(), a.mul(&b));
        assert_eq!(sa.commutator(&sb).to_dense(), a.commutator(&b));
        assert_eq!(sa.p_power().to_dense(), a.mat_p_power().unwrap());
        assert_eq!(SparseMatrix::unflatten(k, 3, &sa.flatten()), sa);
    }

    #[test]
    fn add_scaled_merges() {
        let k = PrimeField::new(3).unwrap();
        let a = SparseVec::from_dense(&[1, 0, 2, 0]);
        let b = SparseVec::from_dense(&[2, 1, 0, 0]);
        assert_eq!(a.add_scaled(k, 1, &b).to_dense(4), vec![0, 1, 2, 0]);
    }
}
