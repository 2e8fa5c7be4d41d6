//! Realized restricted Lie algebras.
//!
//! Every algebra carries a realization: a basis of derivations of A(n), a
//! basis of square matrices, or a link to a parent algebra (subalgebra,
//! quotient, direct sum). The p-map is always computed as an associative
//! p-th power inside the realization followed by a coordinate solve; it is
//! never stored as a formula. Structure constants and the p-powers of basis
//! elements are computed, and closure verified, when an algebra is built.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::ffla::{
    canonical_basis, FflaError, FpMatrix, FpVector, PrimeField, SpanSolver, SparseMatrix, SparseVec,
};
use crate::truncpoly::{Derivation, Ring, TruncPolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("basis element {0} is a linear combination of the previous ones")]
    DependentBasis(usize),
    #[error("bracket [{left}, {right}] leaves the span of the basis")]
    Closure { left: String, right: String },
    #[error("p-th power of {0} leaves the span of the basis")]
    PClosure(String),
    #[error("realization matrices must be square and of equal size")]
    BadMatrices,
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("coordinate vector has length {found}, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("subspace is not a p-ideal: {0}")]
    NotPIdeal(String),
    #[error("element is not in the algebra {0}")]
    NotMember(String),
    #[error(transparent)]
    Ffla(#[from] FflaError),
    #[error(transparent)]
    Poly(#[from] TruncPolyError),
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// How an algebra computes brackets and p-th powers beyond its basis.
#[derive(Clone, Debug)]
pub enum Realization {
    /// Span of derivations of A(n), inside W(n).
    Derivations {
        ring: Ring,
        basis: Vec<Derivation>,
        solver: SpanSolver,
    },
    /// Span of `m × m` matrices under the commutator.
    Matrices {
        m: usize,
        basis: Vec<SparseMatrix>,
        solver: SpanSolver,
    },
    /// Subalgebra of `parent`, basis given by parent coordinates.
    Sub {
        parent: Arc<RealizedAlgebra>,
        embed: Vec<FpVector>,
        solver: SpanSolver,
    },
    /// Direct sum, blockwise.
    Sum {
        left: Arc<RealizedAlgebra>,
        right: Arc<RealizedAlgebra>,
    },
    /// `parent / ideal`, presented on the coordinate complement of the
    /// ideal's echelon form.
    Quotient {
        parent: Arc<RealizedAlgebra>,
        ideal: SpanSolver,
        complement: Vec<usize>,
    },
}

/// A restricted Lie algebra given by a basis closed under the commutator
/// and the associative p-th power of its realization.
pub struct RealizedAlgebra {
    id: u64,
    field: PrimeField,
    name: String,
    labels: Vec<String>,
    dim: usize,
    /// `[b_i, b_j]` for `i < j`, packed row by row.
    brackets: Vec<SparseVec>,
    /// `b_i^{[p]}`.
    pmap: Vec<SparseVec>,
    realization: Realization,
}

impl fmt::Debug for RealizedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealizedAlgebra")
            .field("name", &self.name)
            .field("p", &self.field.p())
            .field("dim", &self.dim)
            .finish()
    }
}

/// An element of a specific algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    algebra: u64,
    coords: FpVector,
}

impl Element {
    pub fn coords(&self) -> &FpVector {
        &self.coords
    }

    pub fn into_coords(self) -> FpVector {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

#[inline]
fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim);
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

fn sparse(v: &[u32]) -> SparseVec {
    SparseVec::from_dense(v)
}

impl RealizedAlgebra {
    fn assemble(
        field: PrimeField,
        name: String,
        labels: Vec<String>,
        dim: usize,
        realization: Realization,
    ) -> Result<Arc<Self>, LieError> {
        let mut alg = Self {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            field,
            name,
            labels,
            dim,
            brackets: Vec::new(),
            pmap: Vec::new(),
            realization,
        };
        let mut brackets = Vec::with_capacity(dim * dim.saturating_sub(1) / 2);
        for i in 0..dim {
            for j in i + 1..dim {
                let c = alg
                    .realized_basis_bracket(i, j)
                    .ok_or_else(|| LieError::Closure {
                        left: alg.labels[i].clone(),
                        right: alg.labels[j].clone(),
                    })?;
                brackets.push(c);
            }
        }
        alg.brackets = brackets;
        let mut pmap = Vec::with_capacity(dim);
        for i in 0..dim {
            let e = FpVector::unit(field, dim, i);
            let c = alg
                .realized_p_power(e.as_slice())
                .ok_or_else(|| LieError::PClosure(alg.labels[i].clone()))?;
            pmap.push(c);
        }
        alg.pmap = pmap;
        Ok(Arc::new(alg))
    }

    /// Algebra spanned by derivations of A(n).
    pub fn from_derivations(
        name: impl Into<String>,
        ring: Ring,
        basis: Vec<Derivation>,
        labels: Option<Vec<String>>,
    ) -> Result<Arc<Self>, LieError> {
        let field = ring.field();
        let mut solver = SpanSolver::new(field, ring.n() * ring.dim());
        for (i, d) in basis.iter().enumerate() {
            if !solver.insert(&d.witt_coords()) {
                return Err(LieError::DependentBasis(i));
            }
        }
        let labels = labels.unwrap_or_else(|| basis.iter().map(|d| d.to_string()).collect());
        let dim = basis.len();
        Self::assemble(
            field,
            name.into(),
            labels,
            dim,
            Realization::Derivations {
                ring,
                basis,
                solver,
            },
        )
    }

    /// Algebra spanned by square matrices under the commutator.
    pub fn from_matrices(
        p: u32,
        name: impl Into<String>,
        matrices: Vec<SparseMatrix>,
        labels: Option<Vec<String>>,
    ) -> Result<Arc<Self>, LieError> {
        let field = PrimeField::new(p)?;
        let m = matrices.first().map_or(0, SparseMatrix::size);
        if matrices.iter().any(|x| x.size() != m) {
            return Err(LieError::BadMatrices);
        }
        if let Some(bad) = matrices.iter().find(|x| x.field() != field) {
            return Err(LieError::ModulusMismatch(p, bad.field().p()));
        }
        let mut solver = SpanSolver::new(field, m * m);
        for (i, x) in matrices.iter().enumerate() {
            if !solver.insert(&x.flatten()) {
                return Err(LieError::DependentBasis(i));
            }
        }
        let dim = matrices.len();
        let labels = labels.unwrap_or_else(|| (0..dim).map(|i| format!("b{i}")).collect());
        Self::assemble(
            field,
            name.into(),
            labels,
            dim,
            Realization::Matrices {
                m,
                basis: matrices,
                solver,
            },
        )
    }

    /// Dense-matrix convenience wrapper around [`Self::from_matrices`].
    pub fn from_dense_matrices(
        name: impl Into<String>,
        matrices: &[FpMatrix],
        labels: Option<Vec<String>>,
    ) -> Result<Arc<Self>, LieError> {
        let p = matrices.first().map_or(3, |m| m.field().p());
        if matrices.iter().any(|m| !m.is_square()) {
            return Err(LieError::BadMatrices);
        }
        Self::from_matrices(
            p,
            name,
            matrices.iter().map(FpMatrix::to_sparse).collect(),
            labels,
        )
    }

    /// Subalgebra of `parent` spanned by `vectors` (parent coordinates).
    /// The stored basis is the reduced echelon basis of the span.
    pub fn subalgebra(
        parent: &Arc<Self>,
        name: impl Into<String>,
        vectors: &[FpVector],
    ) -> Result<Arc<Self>, LieError> {
        for v in vectors {
            parent.check_len(v)?;
        }
        let basis = canonical_basis(parent.field, parent.dim, vectors);
        let mut solver = SpanSolver::new(parent.field, parent.dim);
        for b in &basis {
            solver.insert(&sparse(b.as_slice()));
        }
        let labels = basis
            .iter()
            .map(|v| parent.describe(v.as_slice()))
            .collect();
        let dim = basis.len();
        Self::assemble(
            parent.field,
            name.into(),
            labels,
            dim,
            Realization::Sub {
                parent: Arc::clone(parent),
                embed: basis,
                solver,
            },
        )
    }

    pub fn direct_sum(
        left: &Arc<Self>,
        right: &Arc<Self>,
        name: impl Into<String>,
    ) -> Result<Arc<Self>, LieError> {
        if left.field != right.field {
            return Err(LieError::ModulusMismatch(left.field.p(), right.field.p()));
        }
        let labels = left
            .labels
            .iter()
            .map(|l| format!("({l},0)"))
            .chain(right.labels.iter().map(|l| format!("(0,{l})")))
            .collect();
        Self::assemble(
            left.field,
            name.into(),
            labels,
            left.dim + right.dim,
            Realization::Sum {
                left: Arc::clone(left),
                right: Arc::clone(right),
            },
        )
    }

    /// `g / n` for a p-ideal `n`.
    pub fn quotient(ideal: &Ideal, name: impl Into<String>) -> Result<Arc<Self>, LieError> {
        if !ideal.is_p_ideal() {
            return Err(LieError::NotPIdeal(format!(
                "cannot form a quotient of {}",
                ideal.algebra().name()
            )));
        }
        let parent = ideal.algebra();
        let mut solver = SpanSolver::new(parent.field, parent.dim);
        for b in ideal.basis() {
            solver.insert(&sparse(b.as_slice()));
        }
        let mut is_pivot = vec![false; parent.dim];
        for &c in solver.pivots() {
            is_pivot[c] = true;
        }
        let complement: Vec<usize> = (0..parent.dim).filter(|&c| !is_pivot[c]).collect();
        let labels = complement
            .iter()
            .map(|&c| format!("[{}]", parent.labels[c]))
            .collect();
        let dim = complement.len();
        Self::assemble(
            parent.field,
            name.into(),
            labels,
            dim,
            Realization::Quotient {
                parent: Arc::clone(parent),
                ideal: solver,
                complement,
            },
        )
    }

    /// Same algebra under a different name (shares the realization).
    pub fn renamed(self: &Arc<Self>, name: impl Into<String>) -> Arc<Self> {
        Arc::new(Self {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            field: self.field,
            name: name.into(),
            labels: self.labels.clone(),
            dim: self.dim,
            brackets: self.brackets.clone(),
            pmap: self.pmap.clone(),
            realization: self.realization.clone(),
        })
    }

    // ---- realization-level operations used during assembly ----

    fn realized_basis_bracket(&self, i: usize, j: usize) -> Option<SparseVec> {
        match &self.realization {
            Realization::Derivations { basis, solver, .. } => {
                let c = basis[i].bracket(&basis[j]).witt_coords();
                solver.solve(&c).map(|v| sparse(&v))
            }
            Realization::Matrices { basis, solver, .. } => {
                let c = basis[i].commutator(&basis[j]).flatten();
                solver.solve(&c).map(|v| sparse(&v))
            }
            Realization::Sub {
                parent,
                embed,
                solver,
            } => {
                let c = parent.bracket_coords(embed[i].as_slice(), embed[j].as_slice());
                solver.solve(&sparse(&c)).map(|v| sparse(&v))
            }
            Realization::Sum { left, right } => {
                let a = left.dim;
                let v = if j < a {
                    left.basis_bracket(i, j)
                } else if i >= a {
                    let inner = right.basis_bracket(i - a, j - a);
                    SparseVec::from_unsorted(
                        self.field,
                        inner.entries().iter().map(|&(k, c)| (k + a, c)).collect(),
                    )
                } else {
                    SparseVec::new()
                };
                Some(v)
            }
            Realization::Quotient {
                parent, complement, ..
            } => {
                let c = parent.basis_bracket(complement[i], complement[j]);
                Some(sparse(&self.project(&c)))
            }
        }
    }

    fn realized_p_power(&self, x: &[u32]) -> Option<SparseVec> {
        self.p_power_via_realization(x).map(|v| sparse(&v))
    }

    fn p_power_via_realization(&self, x: &[u32]) -> Option<Vec<u32>> {
        let f = self.field;
        match &self.realization {
            Realization::Derivations {
                ring,
                basis,
                solver,
            } => {
                let d = Derivation::combination(*ring, x, basis);
                solver.solve(&d.p_power().witt_coords())
            }
            Realization::Matrices { m, basis, solver } => {
                let mut acc = SparseMatrix::zeros(f, *m);
                for (&c, b) in x.iter().zip(basis) {
                    if c != 0 {
                        acc = acc.add_scaled(c, b);
                    }
                }
                solver.solve(&acc.p_power().flatten())
            }
            Realization::Sub {
                parent,
                embed,
                solver,
            } => {
                let lift = crate::ffla::combine(f, parent.dim, x, embed);
                let img = parent.p_power_coords(lift.as_slice());
                solver.solve(&sparse(&img))
            }
            Realization::Sum { left, right } => {
                let a = left.dim;
                let mut out = left.p_power_coords(&x[..a]);
                out.extend(right.p_power_coords(&x[a..]));
                Some(out)
            }
            Realization::Quotient {
                parent, complement, ..
            } => {
                let mut lift = vec![0u32; parent.dim];
                for (&c, &k) in x.iter().zip(complement) {
                    lift[k] = c;
                }
                let img = parent.p_power_coords(&lift);
                Some(self.project(&sparse(&img)))
            }
        }
    }

    /// Projection of parent coordinates onto quotient coordinates.
    fn project(&self, v: &SparseVec) -> Vec<u32> {
        let Realization::Quotient {
            ideal, complement, ..
        } = &self.realization
        else {
            unreachable!("project on a non-quotient algebra");
        };
        let r = ideal.residual(v);
        let mut out = vec![0u32; complement.len()];
        for &(i, c) in r.entries() {
            let k = complement
                .binary_search(&i)
                .expect("residual vanishes on pivots");
            out[k] = c;
        }
        out
    }

    // ---- public accessors ----

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    /// The parent algebra and the parent coordinates of each basis element,
    /// for subalgebras.
    pub fn parent_embedding(&self) -> Option<(&Arc<RealizedAlgebra>, &[FpVector])> {
        match &self.realization {
            Realization::Sub { parent, embed, .. } => Some((parent, embed)),
            _ => None,
        }
    }

    /// Nonzero structure constants `(i, j, [b_i, b_j])`, `i < j`.
    pub fn bracket_table(&self) -> impl Iterator<Item = (usize, usize, &SparseVec)> + '_ {
        let dim = self.dim;
        (0..dim)
            .flat_map(move |i| (i + 1..dim).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, &self.brackets[pair_index(dim, i, j)]))
            .filter(|(_, _, c)| !c.is_zero())
    }

    /// `b_i^{[p]}` for every basis element.
    pub fn pmap_table(&self) -> &[SparseVec] {
        &self.pmap
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> SparseVec {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.brackets[pair_index(self.dim, i, j)].clone(),
            Equal => SparseVec::new(),
            Greater => {
                self.brackets[pair_index(self.dim, j, i)].scale(self.field, self.field.neg(1))
            }
        }
    }

    fn check_len(&self, v: &FpVector) -> Result<(), LieError> {
        if v.len() != self.dim {
            return Err(LieError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        if v.field() != self.field {
            return Err(LieError::ModulusMismatch(self.field.p(), v.field().p()));
        }
        Ok(())
    }

    pub fn element(&self, coords: FpVector) -> Result<Element, LieError> {
        self.check_len(&coords)?;
        Ok(Element {
            algebra: self.id,
            coords,
        })
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element {
            algebra: self.id,
            coords: FpVector::unit(self.field, self.dim, i),
        }
    }

    pub fn zero_element(&self) -> Element {
        Element {
            algebra: self.id,
            coords: FpVector::zeros(self.field, self.dim),
        }
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.dim).map(|i| self.basis_element(i)).collect()
    }

    pub fn random_coords<R: Rng + ?Sized>(&self, rng: &mut R) -> FpVector {
        let p = self.p();
        FpVector::from_residues(
            self.field,
            (0..self.dim).map(|_| rng.gen_range(0..p)).collect(),
        )
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let c = self.random_coords(rng);
        Element {
            algebra: self.id,
            coords: c,
        }
    }

    fn owns(&self, x: &Element) -> Result<(), LieError> {
        if x.algebra != self.id {
            return Err(LieError::MixedAlgebras);
        }
        Ok(())
    }

    /// Readable name of a coordinate vector.
    pub fn describe(&self, coords: &[u32]) -> String {
        let terms: Vec<String> = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                if c == 1 {
                    self.labels[i].clone()
                } else {
                    format!("{c}*{}", self.labels[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_owned()
        } else {
            terms.join(" + ")
        }
    }

    // ---- coordinate-level Lie structure ----

    /// `[x, y]` in coordinates via the structure constants.
    pub fn bracket_coords(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let nx: Vec<(usize, u32)> = x.iter().copied().enumerate().filter(|e| e.1 != 0).collect();
        let ny: Vec<(usize, u32)> = y.iter().copied().enumerate().filter(|e| e.1 != 0).collect();
        let mut out = vec![0u32; self.dim];
        for &(a, xa) in &nx {
            for &(b, yb) in &ny {
                if a == b {
                    continue;
                }
                let (i, j, c) = if a < b {
                    (a, b, f.mul(xa, yb))
                } else {
                    (b, a, f.neg(f.mul(xa, yb)))
                };
                if c == 0 {
                    continue;
                }
                for &(k, v) in self.brackets[pair_index(self.dim, i, j)].entries() {
                    out[k] = f.add(out[k], f.mul(c, v));
                }
            }
        }
        out
    }

    /// `x^{[p]}` in coordinates.
    pub fn p_power_coords(&self, x: &[u32]) -> Vec<u32> {
        let nonzero: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0).collect();
        match nonzero.as_slice() {
            [] => vec![0; self.dim],
            // (c b)^{[p]} = c^p b^{[p]} = c b^{[p]}
            &[i] => {
                let mut out = vec![0u32; self.dim];
                for &(k, v) in self.pmap[i].entries() {
                    out[k] = self.field.mul(x[i], v);
                }
                out
            }
            _ => self
                .p_power_via_realization(x)
                .expect("restricted subalgebra is closed under the p-map"),
        }
    }

    /// ad(x) as a `dim × dim` matrix: column j holds `[x, b_j]`.
    pub fn ad_matrix_coords(&self, x: &[u32]) -> FpMatrix {
        let f = self.field;
        let mut m = FpMatrix::zeros(f, self.dim, self.dim);
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for j in 0..self.dim {
                let c = self.basis_bracket(a, j);
                for &(k, v) in c.entries() {
                    m.set(k, j, f.add(m.get(k, j), f.mul(xa, v)));
                }
            }
        }
        m
    }

    // ---- element-level API ----

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element, LieError> {
        self.owns(x)?;
        self.owns(y)?;
        Ok(Element {
            algebra: self.id,
            coords: FpVector::from_residues(
                self.field,
                self.bracket_coords(x.coords.as_slice(), y.coords.as_slice()),
            ),
        })
    }

    pub fn p_power(&self, x: &Element) -> Result<Element, LieError> {
        self.owns(x)?;
        Ok(Element {
            algebra: self.id,
            coords: FpVector::from_residues(self.field, self.p_power_coords(x.coords.as_slice())),
        })
    }

    pub fn ad_matrix(&self, x: &Element) -> Result<FpMatrix, LieError> {
        self.owns(x)?;
        Ok(self.ad_matrix_coords(x.coords.as_slice()))
    }

    // ---- realization export ----

    /// The realizing matrices of the basis, when the algebra has a faithful
    /// matrix realization (everything except quotients).
    pub fn basis_matrices(&self) -> Option<(usize, Vec<SparseMatrix>)> {
        match &self.realization {
            Realization::Derivations { ring, basis, .. } => Some((
                ring.dim(),
                basis.iter().map(|d| d.sparse_matrix().clone()).collect(),
            )),
            Realization::Matrices { m, basis, .. } => Some((*m, basis.clone())),
            Realization::Sub { parent, embed, .. } => {
                let (m, mats) = parent.basis_matrices()?;
                Some((
                    m,
                    embed
                        .iter()
                        .map(|v| {
                            let mut acc = SparseMatrix::zeros(self.field, m);
                            for (&c, b) in v.as_slice().iter().zip(&mats) {
                                if c != 0 {
                                    acc = acc.add_scaled(c, b);
                                }
                            }
                            acc
                        })
                        .collect(),
                ))
            }
            Realization::Sum { left, right } => {
                let (ml, a) = left.basis_matrices()?;
                let (mr, b) = right.basis_matrices()?;
                let zl = SparseMatrix::zeros(self.field, ml);
                let zr = SparseMatrix::zeros(self.field, mr);
                Some((
                    ml + mr,
                    a.iter()
                        .map(|x| x.block_diag(&zr))
                        .chain(b.iter().map(|y| zl.block_diag(y)))
                        .collect(),
                ))
            }
            Realization::Quotient { .. } => None,
        }
    }

    /// Coordinates of a derivation, when the algebra is (a subalgebra of)
    /// an algebra of derivations or of matrices acting on the same ring.
    pub fn coords_of_derivation(&self, d: &Derivation) -> Result<Option<FpVector>, LieError> {
        match &self.realization {
            Realization::Derivations { ring, solver, .. } => {
                if d.ring() != *ring {
                    return Err(LieError::NotMember(d.to_string()));
                }
                Ok(solver
                    .solve(&d.witt_coords())
                    .map(|c| FpVector::from_residues(self.field, c)))
            }
            Realization::Sub { parent, solver, .. } => {
                let Some(pc) = parent.coords_of_derivation(d)? else {
                    return Ok(None);
                };
                Ok(solver
                    .solve(&sparse(pc.as_slice()))
                    .map(|c| FpVector::from_residues(self.field, c)))
            }
            Realization::Matrices { m, solver, .. } if *m == d.ring().dim() => Ok(solver
                .solve(&d.sparse_matrix().flatten())
                .map(|c| FpVector::from_residues(self.field, c))),
            _ => Err(LieError::NotMember(d.to_string())),
        }
    }

    /// Coordinates of a parent element in this subalgebra.
    pub fn coords_from_parent(&self, v: &FpVector) -> Option<FpVector> {
        match &self.realization {
            Realization::Sub { solver, .. } => solver
                .solve(&sparse(v.as_slice()))
                .map(|c| FpVector::from_residues(self.field, c)),
            _ => None,
        }
    }

    /// Parent coordinates of an element of this subalgebra, or a
    /// representative of a quotient class.
    pub fn lift_to_parent(&self, x: &[u32]) -> Option<FpVector> {
        match &self.realization {
            Realization::Sub { parent, embed, .. } => {
                Some(crate::ffla::combine(self.field, parent.dim, x, embed))
            }
            Realization::Quotient {
                parent, complement, ..
            } => {
                let mut v = vec![0; parent.dim];
                for (&i, &c) in complement.iter().zip(x) {
                    v[i] = c;
                }
                Some(FpVector::from_residues(self.field, v))
            }
            _ => None,
        }
    }

    /// Quotient coordinates of a parent element.
    pub fn project_from_parent(&self, v: &FpVector) -> Option<FpVector> {
        match &self.realization {
            Realization::Quotient { .. } => Some(FpVector::from_residues(
                self.field,
                self.project(&sparse(v.as_slice())),
            )),
            _ => None,
        }
    }

    // ---- checks ----

    /// Checks the Jacobi identity on `samples` random triples.
    pub fn check_jacobi<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> bool {
        let f = self.field;
        (0..samples).all(|_| {
            let (x, y, z) = (
                self.random_coords(rng),
                self.random_coords(rng),
                self.random_coords(rng),
            );
            let (x, y, z) = (x.as_slice(), y.as_slice(), z.as_slice());
            let a = self.bracket_coords(x, &self.bracket_coords(y, z));
            let b = self.bracket_coords(y, &self.bracket_coords(z, x));
            let c = self.bracket_coords(z, &self.bracket_coords(x, y));
            a.iter()
                .zip(&b)
                .zip(&c)
                .all(|((&a, &b), &c)| f.add(f.add(a, b), c) == 0)
        })
    }

    /// Checks ad(x^{[p]}) = (ad x)^p on `samples` random elements.
    pub fn check_jacobson<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> bool {
        (0..samples).all(|_| {
            let x = self.random_coords(rng);
            let lhs = self.ad_matrix_coords(&self.p_power_coords(x.as_slice()));
            let rhs = self
                .ad_matrix_coords(x.as_slice())
                .mat_p_power()
                .expect("square");
            lhs == rhs
        })
    }
}

/// A subspace of an algebra with its ideal / p-ideal status machine-checked.
#[derive(Clone, Debug)]
pub struct Ideal {
    algebra: Arc<RealizedAlgebra>,
    basis: Vec<FpVector>,
    is_ideal: bool,
    is_p_ideal: bool,
}

impl Ideal {
    pub fn new(algebra: &Arc<RealizedAlgebra>, vectors: &[FpVector]) -> Result<Self, LieError> {
        for v in vectors {
            algebra.check_len(v)?;
        }
        let f = algebra.field;
        let basis = canonical_basis(f, algebra.dim, vectors);
        let mut solver = SpanSolver::new(f, algebra.dim);
        for b in &basis {
            solver.insert(&sparse(b.as_slice()));
        }
        let is_ideal = basis.iter().all(|b| {
            (0..algebra.dim).all(|i| {
                let e = FpVector::unit(f, algebra.dim, i);
                solver.contains(&sparse(&algebra.bracket_coords(e.as_slice(), b.as_slice())))
            })
        });
        // for an ideal, (a + b)^{[p]} − a^{[p]} − b^{[p]} is a Lie word in the ideal
        let is_p_ideal = is_ideal
            && basis
                .iter()
                .all(|b| solver.contains(&sparse(&algebra.p_power_coords(b.as_slice()))));
        Ok(Self {
            algebra: Arc::clone(algebra),
            basis,
            is_ideal,
            is_p_ideal,
        })
    }

    /// The image of a subalgebra of `algebra` as a subspace.
    pub fn from_subalgebra(
        algebra: &Arc<RealizedAlgebra>,
        sub: &RealizedAlgebra,
    ) -> Result<Self, LieError> {
        match sub.parent_embedding() {
            Some((parent, embed)) if parent.id == algebra.id => Self::new(algebra, embed),
            _ => Err(LieError::NotMember(sub.name.clone())),
        }
    }

    pub fn algebra(&self) -> &Arc<RealizedAlgebra> {
        &self.algebra
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_ideal(&self) -> bool {
        self.is_ideal
    }

    pub fn is_p_ideal(&self) -> bool {
        self.is_p_ideal
    }
}

// ---- substructures ----

/// `C_g(S) = {y : [s, y] = 0 for all s ∈ S}`.
pub fn centralizer(
    g: &Arc<RealizedAlgebra>,
    elements: &[Element],
) -> Result<Arc<RealizedAlgebra>, LieError> {
    let f = g.field;
    let mut basis = FpMatrix::identity(f, g.dim);
    for s in elements {
        g.owns(s)?;
        if basis.cols() == 0 {
            break;
        }
        let image = g.ad_matrix_coords(s.coords.as_slice()).mul(&basis);
        let kernel = image.kernel_basis();
        let k = FpMatrix::from_column_vectors(f, basis.cols(), &kernel);
        basis = basis.mul(&k);
    }
    let vectors: Vec<FpVector> = (0..basis.cols()).map(|j| basis.column_vector(j)).collect();
    RealizedAlgebra::subalgebra(g, format!("C_{}(...)", g.name), &vectors)
}

/// Subspace spanned by all brackets `[a, b]` with `a` from `left` and `b` from `right` (coordinates in g).
fn bracket_span(g: &RealizedAlgebra, left: &[FpVector], right: &[FpVector]) -> Vec<FpVector> {
    let mut solver = SpanSolver::new(g.field, g.dim);
    for a in left {
        for b in right {
            solver.insert(&sparse(&g.bracket_coords(a.as_slice(), b.as_slice())));
        }
    }
    solver
        .canonical_rows()
        .into_iter()
        .map(|r| FpVector::from_residues(g.field, r.to_dense(g.dim)))
        .collect()
}

/// `[g, g]`.
pub fn derived_subalgebra(g: &Arc<RealizedAlgebra>) -> Result<Arc<RealizedAlgebra>, LieError> {
    let mut solver = SpanSolver::new(g.field, g.dim);
    for c in &g.brackets {
        if !c.is_zero() {
            solver.insert(c);
        }
    }
    let vectors: Vec<FpVector> = solver
        .canonical_rows()
        .into_iter()
        .map(|r| FpVector::from_residues(g.field, r.to_dense(g.dim)))
        .collect();
    RealizedAlgebra::subalgebra(g, format!("[{0},{0}]", g.name), &vectors)
}

/// `Z(g)`.
pub fn center(g: &Arc<RealizedAlgebra>) -> Result<Arc<RealizedAlgebra>, LieError> {
    let all = g.basis_elements();
    let c = centralizer(g, &all)?;
    Ok(c.renamed(format!("Z({})", g.name)))
}

/// Dimensions of the lower central series g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ … until it stabilizes.
pub fn lower_central_series_dims(g: &RealizedAlgebra) -> Vec<usize> {
    let full: Vec<FpVector> = (0..g.dim)
        .map(|i| FpVector::unit(g.field, g.dim, i))
        .collect();
    let mut current = full.clone();
    let mut dims = vec![current.len()];
    loop {
        let next = bracket_span(g, &full, &current);
        let stalled = next.len() == current.len();
        dims.push(next.len());
        if next.is_empty() || stalled {
            return dims;
        }
        current = next;
    }
}

/// Lie-nilpotent: the lower central series reaches 0.
pub fn is_lie_nilpotent(g: &RealizedAlgebra) -> bool {
    lower_central_series_dims(g).last() == Some(&0)
}

/// Every element has a p-power iterate equal to 0.
///
/// The algebra must be Lie-nilpotent, and then every toral element is central,
/// so it suffices that the (additive) p-map on the center is nilpotent.
pub fn is_p_nilpotent(g: &Arc<RealizedAlgebra>) -> Result<bool, LieError> {
    if g.dim == 0 {
        return Ok(true);
    }
    if !is_lie_nilpotent(g) {
        return Ok(false);
    }
    let z = center(g)?;
    let (_, embed) = z.parent_embedding().expect("center is a subalgebra");
    let mut current: Vec<FpVector> = embed.to_vec();
    while !current.is_empty() {
        let images: Vec<FpVector> = current
            .iter()
            .map(|v| FpVector::from_residues(g.field, g.p_power_coords(v.as_slice())))
            .collect();
        let next = canonical_basis(g.field, g.dim, &images);
        if next.len() == current.len() {
            return Ok(false);
        }
        current = next;
    }
    Ok(true)
}

/// `{x ∈ g : [x, h] ⊆ h}` for a subspace `h` (coordinates in g).
pub fn normalizer(g: &RealizedAlgebra, h: &[FpVector]) -> Vec<FpVector> {
    let f = g.field;
    let h = canonical_basis(f, g.dim, h);
    // rows of `annihilator` cut out h: v ∈ h ⇔ annihilator · v = 0
    let hm = FpMatrix::from_row_vectors(f, g.dim, &h);
    let annihilator_rows = if h.is_empty() {
        (0..g.dim).map(|i| FpVector::unit(f, g.dim, i)).collect()
    } else {
        hm.kernel_basis()
    };
    if annihilator_rows.is_empty() {
        return (0..g.dim).map(|i| FpVector::unit(f, g.dim, i)).collect();
    }
    let q = FpMatrix::from_row_vectors(f, g.dim, &annihilator_rows);
    // x ↦ [x, h_j] = −ad(h_j) x
    let blocks: Vec<FpMatrix> = h
        .iter()
        .map(|hj| q.mul(&g.ad_matrix_coords(hj.as_slice())))
        .collect();
    if blocks.is_empty() {
        return (0..g.dim).map(|i| FpVector::unit(f, g.dim, i)).collect();
    }
    FpMatrix::vstack(f, g.dim, &blocks).kernel_basis()
}

/// span{b_i^{[p]}} + [g, g] as a list of spanning vectors.
pub fn p_span_plus_derived(g: &RealizedAlgebra) -> Vec<FpVector> {
    let mut solver = SpanSolver::new(g.field, g.dim);
    for c in g.brackets.iter().chain(&g.pmap) {
        if !c.is_zero() {
            solver.insert(c);
        }
    }
    solver
        .canonical_rows()
        .into_iter()
        .map(|r| FpVector::from_residues(g.field, r.to_dense(g.dim)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truncpoly::TruncPoly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn witt1(p: u32) -> Arc<RealizedAlgebra> {
        let ring = Ring::new(1, PrimeField::new(p).unwrap());
        let basis = (0..p as usize)
            .map(|a| Derivation::simple(TruncPoly::from_index(ring, a), 1).unwrap())
            .collect();
        RealizedAlgebra::from_derivations("W(1)", ring, basis, None).unwrap()
    }

    fn coords(g: &RealizedAlgebra, v: &[i64]) -> Element {
        g.element(FpVector::from_i64(g.field(), v)).unwrap()
    }

    #[test]
    fn witt_brackets_and_p_map() {
        let w = witt1(3);
        assert_eq!(w.dim(), 3);
        let (d, xd, x2d) = (w.basis_element(0), w.basis_element(1), w.basis_element(2));
        assert_eq!(w.bracket(&d, &xd).unwrap(), d);
        assert!(w.bracket(&xd, &xd).unwrap().is_zero());
        assert_eq!(w.bracket(&d, &x2d).unwrap(), coords(&w, &[0, 2, 0]));
        assert_eq!(w.p_power(&xd).unwrap(), xd);
        assert!(w.p_power(&d).unwrap().is_zero());
        let shifted = coords(&w, &[1, 1, 0]);
        assert_eq!(w.p_power(&shifted).unwrap(), shifted);
    }

    #[test]
    fn mixed_algebras_rejected() {
        let a = witt1(3);
        let b = witt1(3);
        assert_eq!(
            a.bracket(&a.basis_element(0), &b.basis_element(0)),
            Err(LieError::MixedAlgebras)
        );
    }

    #[test]
    fn matrix_realized_subalgebra_of_w1() {
        let w = witt1(3);
        let (_, mats) = w.basis_matrices().unwrap();
        let two =
            RealizedAlgebra::from_matrices(3, "span{d, xd}", mats[..2].to_vec(), None).unwrap();
        assert_eq!(two.dim(), 2);
        let bad = RealizedAlgebra::from_matrices(
            3,
            "span{d, x2d}",
            vec![mats[0].clone(), mats[2].clone()],
            None,
        );
        assert!(matches!(bad, Err(LieError::Closure { .. })));
        let dep =
            RealizedAlgebra::from_matrices(3, "dup", vec![mats[0].clone(), mats[0].clone()], None);
        assert_eq!(dep.unwrap_err(), LieError::DependentBasis(1));
    }

    #[test]
    fn one_dimensional_toral_algebra() {
        let k = PrimeField::new(5).unwrap();
        let t =
            RealizedAlgebra::from_dense_matrices("k", &[FpMatrix::identity(k, 1)], None).unwrap();
        let x = t.basis_element(0);
        assert_eq!(t.p_power(&x).unwrap(), x);
        assert!(!is_p_nilpotent(&t).unwrap());
    }

    #[test]
    fn centralizer_and_center_of_w1() {
        let w = witt1(3);
        let c = centralizer(&w, &[w.basis_element(1)]).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(centralizer(&w, &[]).unwrap().dim(), 3);
        assert_eq!(center(&w).unwrap().dim(), 0);
        assert!(!is_p_nilpotent(&w).unwrap());
        assert_eq!(derived_subalgebra(&w).unwrap().dim(), 3);
    }

    #[test]
    fn direct_sum_and_quotient() {
        let k = PrimeField::new(3).unwrap();
        let w = witt1(3);
        let nil = RealizedAlgebra::from_dense_matrices(
            "k_nil",
            &[FpMatrix::from_i64(k, &[vec![0, 1], vec![0, 0]])],
            None,
        )
        .unwrap();
        assert!(is_p_nilpotent(&nil).unwrap());
        let g = RealizedAlgebra::direct_sum(&w, &nil, "W(1)+k").unwrap();
        assert_eq!(g.dim(), 4);
        let z = FpVector::unit(k, 4, 3);
        let ideal = Ideal::new(&g, &[z]).unwrap();
        assert!(ideal.is_p_ideal());
        let q = RealizedAlgebra::quotient(&ideal, "W(1)").unwrap();
        assert_eq!(q.dim(), 3);
        // identical structure constants to W(1)
        let a: Vec<_> = q
            .bracket_table()
            .map(|(i, j, c)| (i, j, c.clone()))
            .collect();
        let b: Vec<_> = w
            .bracket_table()
            .map(|(i, j, c)| (i, j, c.clone()))
            .collect();
        assert_eq!(a, b);
        assert_eq!(q.pmap_table(), w.pmap_table());

        let whole = Ideal::new(
            &g,
            &(0..4).map(|i| FpVector::unit(k, 4, i)).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(RealizedAlgebra::quotient(&whole, "0").unwrap().dim(), 0);

        let not_ideal = Ideal::new(&g, &[FpVector::unit(k, 4, 1)]).unwrap();
        assert!(!not_ideal.is_ideal());
        assert!(matches!(
            RealizedAlgebra::quotient(&not_ideal, "bad"),
            Err(LieError::NotPIdeal(_))
        ));

        let ww = RealizedAlgebra::direct_sum(&w, &w, "W(1)+W(1)").unwrap();
        assert_eq!(derived_subalgebra(&ww).unwrap().dim(), 6);
    }

    #[test]
    fn abelian_sum_has_zero_derived() {
        let k = PrimeField::new(3).unwrap();
        let t =
            RealizedAlgebra::from_dense_matrices("k", &[FpMatrix::identity(k, 1)], None).unwrap();
        let kk = RealizedAlgebra::direct_sum(&t, &t, "k+k").unwrap();
        assert_eq!(kk.dim(), 2);
        assert_eq!(derived_subalgebra(&kk).unwrap().dim(), 0);
        assert_eq!(center(&kk).unwrap().dim(), 2);
    }

    #[test]
    fn jacobson_and_jacobi_on_w2() {
        let ring = Ring::new(2, PrimeField::new(3).unwrap());
        let mut basis = Vec::new();
        for i in 1..=2 {
            for a in 0..ring.dim() {
                basis.push(Derivation::simple(TruncPoly::from_index(ring, a), i).unwrap());
            }
        }
        let w = RealizedAlgebra::from_derivations("W(2)", ring, basis, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(w.check_jacobi(&mut rng, 20));
        assert!(w.check_jacobson(&mut rng, 20));
    }

    #[test]
    fn normalizer_of_cartan_in_w1() {
        let w = witt1(3);
        let h = vec![FpVector::unit(w.field(), 3, 1)];
        assert_eq!(normalizer(&w, &h).len(), 1);
        assert_eq!(normalizer(&w, &[]).len(), 3);
    }
}
