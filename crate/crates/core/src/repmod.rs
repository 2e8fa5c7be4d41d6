//! Restricted modules: axioms, the density modules of W(1), spinning,
//! composition series, annihilators and the trivial-factor criteria.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cartanfam::{build_w, CartanError};
use crate::ffla::{canonical_basis, FpMatrix, FpVector, PrimeField, SpanSolver, SparseVec};
use crate::liealg::{centralizer, p_span_plus_derived, Ideal, LieError, RealizedAlgebra};
use crate::truncpoly::{Ring, TruncPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("rho([b{0}, b{1}]) != [rho(b{0}), rho(b{1})]")]
    BracketMismatch(usize, usize),
    #[error("rho(b{0}^[p]) != rho(b{0})^p")]
    PPowerMismatch(usize),
    #[error("expected {expected} action matrices, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("action matrices must be square of one size")]
    BadMatrices,
    #[error("simplicity of a {0}-dimensional subquotient cannot be certified")]
    Inconclusive(usize),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("not an ideal: {0}")]
    NotIdeal(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Upper bound on dim V for composition series.
pub const MAX_MODULE_DIM: usize = 512;
const PROJECTIVE_LIMIT: u128 = 100_000;
const NORTON_TRIALS: usize = 64;
const NORTON_POINTS: u128 = 2_000;

/// ρ : g → gl(V) given on a basis, with the restricted-module axioms checked.
#[derive(Clone, Debug)]
pub struct RestrictedModule {
    algebra: Arc<RealizedAlgebra>,
    dim_v: usize,
    action: Vec<FpMatrix>,
}

fn combine_matrices(field: PrimeField, n: usize, coeffs: &[u32], mats: &[FpMatrix]) -> FpMatrix {
    let mut out = FpMatrix::zeros(field, n, n);
    for (&c, m) in coeffs.iter().zip(mats) {
        if c != 0 {
            out.add_scaled(c, m);
        }
    }
    out
}

/// Verifies ρ([b_i, b_j]) = [ρ(b_i), ρ(b_j)] and ρ(b_i^[p]) = ρ(b_i)^p exactly.
pub fn check_restricted_module(
    g: &Arc<RealizedAlgebra>,
    matrices: Vec<FpMatrix>,
) -> Result<RestrictedModule, ModuleError> {
    if matrices.len() != g.dim() {
        return Err(ModuleError::WrongCount {
            expected: g.dim(),
            found: matrices.len(),
        });
    }
    let f = g.field();
    let n = matrices.first().map_or(0, FpMatrix::rows);
    if matrices
        .iter()
        .any(|m| m.rows() != n || m.cols() != n || m.field() != f)
    {
        return Err(ModuleError::BadMatrices);
    }
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            let c = g.basis_bracket(i, j).to_dense(g.dim());
            if combine_matrices(f, n, &c, &matrices) != matrices[i].commutator(&matrices[j]) {
                return Err(ModuleError::BracketMismatch(i, j));
            }
        }
        let c = g.pmap_table()[i].to_dense(g.dim());
        let lhs = combine_matrices(f, n, &c, &matrices);
        if lhs != matrices[i].mat_p_power().expect("square") {
            return Err(ModuleError::PPowerMismatch(i));
        }
    }
    Ok(RestrictedModule {
        algebra: Arc::clone(g),
        dim_v: n,
        action: matrices,
    })
}

impl RestrictedModule {
    pub fn algebra(&self) -> &Arc<RealizedAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim_v
    }

    pub fn action(&self) -> &[FpMatrix] {
        &self.action
    }

    /// ρ(x) for x in coordinates.
    pub fn rho(&self, x: &[u32]) -> FpMatrix {
        combine_matrices(self.algebra.field(), self.dim_v, x, &self.action)
    }

    /// The adjoint module.
    pub fn adjoint(g: &Arc<RealizedAlgebra>) -> Result<Self, ModuleError> {
        let mats = (0..g.dim())
            .map(|i| g.ad_matrix_coords(FpVector::unit(g.field(), g.dim(), i).as_slice()))
            .collect();
        check_restricted_module(g, mats)
    }

    /// The module given by the algebra's own realization.
    pub fn natural(g: &Arc<RealizedAlgebra>) -> Result<Self, ModuleError> {
        let (_, mats) = g.basis_matrices().ok_or_else(|| {
            ModuleError::HypothesisNotMet(format!("{} has no realization", g.name()))
        })?;
        check_restricted_module(g, mats.iter().map(|m| m.to_dense()).collect())
    }

    /// k^n with zero action.
    pub fn trivial(g: &Arc<RealizedAlgebra>, n: usize) -> Result<Self, ModuleError> {
        check_restricted_module(g, vec![FpMatrix::zeros(g.field(), n, n); g.dim()])
    }
}

/// A(1) as a W(1)-module via (f∂)·g = f g′ − λ f′ g; λ = 1 is the adjoint module.
pub fn density_module(p: u32, lambda: u32) -> Result<RestrictedModule, ModuleError> {
    let w = build_w(1, p)?;
    let field = w.field();
    let ring = Ring::new(1, field);
    let minus_lambda = field.neg(lambda % p);
    let n = p as usize;
    let mats = (0..n)
        .map(|a| {
            let f = TruncPoly::from_index(ring, a);
            let df = f.partial(1).expect("one variable");
            let mut m = FpMatrix::zeros(field, n, n);
            for j in 0..n {
                let g = TruncPoly::from_index(ring, j);
                let img = f
                    .multiply(&g.partial(1).expect("one variable"))
                    .and_then(|x| x.add(&df.multiply(&g)?.scale(minus_lambda)))
                    .expect("same ring");
                for (i, c) in img.terms() {
                    m.set(i, j, c);
                }
            }
            m
        })
        .collect();
    check_restricted_module(&w, mats)
}

fn spin_with(
    field: PrimeField,
    n: usize,
    mats: &[FpMatrix],
    vectors: &[FpVector],
) -> Vec<FpVector> {
    let mut solver = SpanSolver::new(field, n);
    let mut queue: Vec<Vec<u32>> = Vec::new();
    for v in vectors {
        if solver.insert(&SparseVec::from_dense(v.as_slice())) {
            queue.push(v.as_slice().to_vec());
        }
    }
    while let Some(v) = queue.pop() {
        if solver.rank() == n {
            break;
        }
        for m in mats {
            let w = m.mul_vec(&v);
            if solver.insert(&SparseVec::from_dense(w.as_slice())) {
                queue.push(w.into_inner());
            }
        }
    }
    solver
        .canonical_rows()
        .iter()
        .map(|r| FpVector::from_residues(field, r.to_dense(n)))
        .collect()
}

/// The smallest submodule containing `vectors`.
pub fn spin(v: &RestrictedModule, vectors: &[FpVector]) -> Vec<FpVector> {
    spin_with(v.algebra.field(), v.dim_v, &v.action, vectors)
}

/// Action on a submodule with basis `basis` (coordinates in that basis).
fn restrict(field: PrimeField, mats: &[FpMatrix], basis: &[FpVector]) -> Vec<FpMatrix> {
    let n = mats.first().map_or(0, FpMatrix::rows);
    let mut solver = SpanSolver::new(field, n);
    for b in basis {
        solver.insert(&SparseVec::from_dense(b.as_slice()));
    }
    let k = basis.len();
    mats.iter()
        .map(|m| {
            let mut out = FpMatrix::zeros(field, k, k);
            for (j, b) in basis.iter().enumerate() {
                let img = m.mul_vec(b.as_slice());
                let c = solver
                    .solve(&SparseVec::from_dense(img.as_slice()))
                    .expect("basis spans a submodule");
                for (i, x) in c.into_iter().enumerate() {
                    out.set(i, j, x);
                }
            }
            out
        })
        .collect()
}

/// Action on V/W for a submodule W, presented on the coordinates that are
/// not pivots of W's echelon basis. Returns (complement, matrices).
fn quotient_action(
    field: PrimeField,
    mats: &[FpMatrix],
    sub: &[FpVector],
) -> (Vec<usize>, Vec<FpMatrix>) {
    let n = mats.first().map_or(0, FpMatrix::rows);
    let mut solver = SpanSolver::new(field, n);
    for b in sub {
        solver.insert(&SparseVec::from_dense(b.as_slice()));
    }
    let mut is_pivot = vec![false; n];
    for &c in solver.pivots() {
        is_pivot[c] = true;
    }
    let complement: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let k = complement.len();
    let q = mats
        .iter()
        .map(|m| {
            let mut out = FpMatrix::zeros(field, k, k);
            for (j, &c) in complement.iter().enumerate() {
                let img: Vec<u32> = (0..n).map(|i| m.get(i, c)).collect();
                let r = solver.residual(&SparseVec::from_dense(&img));
                for &(i, x) in r.entries() {
                    let row = complement
                        .binary_search(&i)
                        .expect("residual vanishes on pivots");
                    out.set(row, j, x);
                }
            }
            out
        })
        .collect();
    (complement, q)
}

fn random_algebra_element<R: Rng>(
    field: PrimeField,
    n: usize,
    mats: &[FpMatrix],
    rng: &mut R,
) -> FpMatrix {
    let p = field.p();
    let mut a = FpMatrix::zeros(field, n, n);
    for m in mats {
        a.add_scaled(rng.gen_range(0..p), m);
    }
    if mats.len() >= 2 {
        for _ in 0..2 {
            let i = rng.gen_range(0..mats.len());
            let j = rng.gen_range(0..mats.len());
            a.add_scaled(rng.gen_range(1..p), &mats[i].mul(&mats[j]));
        }
    }
    a
}

fn projective_count(p: u32, k: usize) -> u128 {
    let p = p as u128;
    (p.checked_pow(k as u32).unwrap_or(u128::MAX) - 1) / (p - 1)
}

/// One nonzero vector on each line of span(`basis`), `basis` independent.
fn projective_points<'a>(
    field: PrimeField,
    n: usize,
    basis: &'a [FpVector],
) -> impl Iterator<Item = FpVector> + 'a {
    let p = field.p() as u64;
    let k = basis.len();
    (0..k).flat_map(move |lead| {
        let tail = k - lead - 1;
        (0..p.pow(tail as u32)).map(move |mut idx| {
            let mut c = vec![0u32; k];
            c[lead] = 1;
            for x in c[lead + 1..].iter_mut() {
                *x = (idx % p) as u32;
                idx /= p;
            }
            crate::ffla::combine(field, n, &c, basis)
        })
    })
}

/// A proper nonzero submodule, `None` when the action is certified
/// irreducible, or `Inconclusive`.
///
/// Irreducibility is certified by Norton's test: for a singular b in the
/// enveloping algebra, every nonzero vector of ker b generates V and some
/// nonzero vector of ker bᵀ generates the dual.
fn find_submodule<R: Rng>(
    field: PrimeField,
    mats: &[FpMatrix],
    n: usize,
    rng: &mut R,
) -> Result<Option<Vec<FpVector>>, ModuleError> {
    if n <= 1 {
        return Ok(None);
    }
    let proper = |vs: Vec<FpVector>| (!vs.is_empty() && vs.len() < n).then_some(vs);
    let transposed: Vec<FpMatrix> = mats.iter().map(FpMatrix::transpose).collect();
    let identity = FpMatrix::identity(field, n);
    for _ in 0..NORTON_TRIALS {
        let a = random_algebra_element(field, n, mats, rng);
        for c in field.elements() {
            let b = a.sub(&identity.scale(c));
            let ker = b.kernel_basis();
            if ker.is_empty() {
                continue;
            }
            if let Some(s) = proper(spin_with(field, n, mats, &ker[..1])) {
                return Ok(Some(s));
            }
            if projective_count(field.p(), ker.len()) > NORTON_POINTS {
                continue;
            }
            for v in projective_points(field, n, &ker) {
                if let Some(s) = proper(spin_with(field, n, mats, &[v])) {
                    return Ok(Some(s));
                }
            }
            let w = b.transpose().kernel_basis();
            let dual = spin_with(field, n, &transposed, &w[..1]);
            if dual.len() == n {
                return Ok(None);
            }
            // the annihilator of a proper dual submodule
            return Ok(Some(
                FpMatrix::from_row_vectors(field, n, &dual).kernel_basis(),
            ));
        }
    }
    for i in 0..n {
        if let Some(s) = proper(spin_with(field, n, mats, &[FpVector::unit(field, n, i)])) {
            return Ok(Some(s));
        }
    }
    if projective_count(field.p(), n) > PROJECTIVE_LIMIT {
        return Err(ModuleError::Inconclusive(n));
    }
    let all: Vec<FpVector> = (0..n).map(|i| FpVector::unit(field, n, i)).collect();
    for v in projective_points(field, n, &all) {
        if let Some(s) = proper(spin_with(field, n, mats, &[v])) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionData {
    /// Factor dimensions from the bottom of the series up.
    pub dims: Vec<usize>,
    /// Whether each factor is the trivial module.
    pub trivial: Vec<bool>,
    pub all_trivial: bool,
    /// Bases of 0 ⊂ V_1 ⊂ … ⊂ V_r = V (V_0 omitted).
    #[serde(skip)]
    pub series: Vec<Vec<FpVector>>,
}

impl CompositionData {
    pub fn sorted_dims(&self) -> Vec<usize> {
        let mut d = self.dims.clone();
        d.sort_unstable();
        d
    }
}

/// A composition series of V, each factor certified simple.
pub fn composition_factors(
    v: &RestrictedModule,
    seed: u64,
) -> Result<CompositionData, ModuleError> {
    if v.dim_v > MAX_MODULE_DIM {
        return Err(ModuleError::Inconclusive(v.dim_v));
    }
    let field = v.algebra.field();
    let n = v.dim_v;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current: Vec<FpVector> = Vec::new();
    let mut series = Vec::new();
    let mut dims = Vec::new();
    let mut trivial = Vec::new();
    while current.len() < n {
        let (complement, qmats) = quotient_action(field, &v.action, &current);
        let m = complement.len();
        // shrink to a simple submodule of V/current
        let mut sub: Vec<FpVector> = (0..m).map(|i| FpVector::unit(field, m, i)).collect();
        let mut smats = qmats.clone();
        while let Some(w) = find_submodule(field, &smats, sub.len(), &mut rng)? {
            let next: Vec<FpVector> = w
                .iter()
                .map(|c| crate::ffla::combine(field, m, c.as_slice(), &sub))
                .collect();
            sub = canonical_basis(field, m, &next);
            smats = restrict(field, &qmats, &sub);
        }
        dims.push(sub.len());
        trivial.push(smats.iter().all(FpMatrix::is_zero));
        let mut next = current.clone();
        for s in &sub {
            let mut lifted = vec![0u32; n];
            for (k, &c) in complement.iter().enumerate() {
                lifted[c] = s.get(k);
            }
            next.push(FpVector::from_residues(field, lifted));
        }
        current = canonical_basis(field, n, &next);
        series.push(current.clone());
    }
    Ok(CompositionData {
        all_trivial: trivial.iter().all(|&t| t),
        dims,
        trivial,
        series,
    })
}

/// {x ∈ g : ρ(x) = 0}, a p-ideal.
pub fn annihilator(v: &RestrictedModule) -> Result<Ideal, ModuleError> {
    let g = &v.algebra;
    let f = g.field();
    let n = v.dim_v;
    let mut m = FpMatrix::zeros(f, n * n, g.dim());
    for (j, a) in v.action.iter().enumerate() {
        for (k, &x) in a.data().iter().enumerate() {
            m.set(k, j, x);
        }
    }
    let ideal = Ideal::new(g, &m.kernel_basis())?;
    debug_assert!(ideal.is_p_ideal());
    Ok(ideal)
}

/// g = span{b_i^[p]} + [g, g].
pub fn perfect_p_criterion(g: &RealizedAlgebra) -> bool {
    p_span_plus_derived(g).len() == g.dim()
}

#[derive(Clone, Debug, Serialize)]
pub struct TrivialFactorVerdict {
    pub dim_v: usize,
    pub bound: usize,
    pub stabilizer_citation: String,
    /// Every composition factor is trivial.
    pub only_trivial_factors: bool,
    /// Whether g = g^[p] + [g, g] held, so that V itself must be trivial.
    pub perfect: bool,
    /// ρ = 0, checked when `perfect`.
    pub action_zero: Option<bool>,
    pub factor_dims: Vec<usize>,
}

impl TrivialFactorVerdict {
    /// Both conclusions that apply hold.
    pub fn consistent(&self) -> bool {
        self.only_trivial_factors && self.action_zero.unwrap_or(true)
    }
}

/// Checks the conclusions of the trivial-composition-factor theorem when
/// dim V < p^μ − 1 and the toral stabilizer is the full general linear group
/// (a literature fact supplied by the caller).
pub fn trivial_factor_check(
    v: &RestrictedModule,
    mu_ref: usize,
    stabilizer_full: bool,
    seed: u64,
) -> Result<TrivialFactorVerdict, ModuleError> {
    let g = &v.algebra;
    let bound = (g.p() as usize).pow(mu_ref as u32) - 1;
    if v.dim_v >= bound {
        return Err(ModuleError::HypothesisNotMet(format!(
            "dim V = {} is not below p^mu - 1 = {bound}",
            v.dim_v
        )));
    }
    if !stabilizer_full {
        return Err(ModuleError::HypothesisNotMet(
            "toral stabilizer not asserted to be GL_mu(F_p)".into(),
        ));
    }
    let comp = composition_factors(v, seed)?;
    let perfect = perfect_p_criterion(g);
    let action_zero = perfect.then(|| v.action.iter().all(FpMatrix::is_zero));
    Ok(TrivialFactorVerdict {
        dim_v: v.dim_v,
        bound,
        stabilizer_citation:
            "toral stabilizer equal to GL_mu(F_p), supplied by the caller from the literature"
                .into(),
        only_trivial_factors: comp.all_trivial,
        perfect,
        action_zero,
        factor_dims: comp.dims,
    })
}

#[derive(Clone, Debug)]
pub struct SplitVerdict {
    pub centralizer: Arc<RealizedAlgebra>,
    pub is_ideal: bool,
    pub direct_sum: bool,
    pub codim: usize,
    pub bound: usize,
    /// codim < p^μ(h) − 1, so the ideal property also follows from the theorem.
    pub within_hypothesis: bool,
}

/// For a simple p-subalgebra h of g (given by g-coordinates), checks that
/// h is an ideal and that g = C_g(h) ⊕ h.
pub fn split_off_simple_ideal(
    g: &Arc<RealizedAlgebra>,
    h: &[FpVector],
    mu_h: usize,
) -> Result<SplitVerdict, ModuleError> {
    let f = g.field();
    let sub = RealizedAlgebra::subalgebra(g, "h", h)?;
    let (_, embed) = sub.parent_embedding().expect("subalgebra");
    let embed = embed.to_vec();
    let ideal = Ideal::new(g, &embed)?;
    if !ideal.is_ideal() {
        let mut solver = SpanSolver::new(f, g.dim());
        for b in &embed {
            solver.insert(&SparseVec::from_dense(b.as_slice()));
        }
        for i in 0..g.dim() {
            for b in &embed {
                let e = FpVector::unit(f, g.dim(), i);
                let c = g.bracket_coords(e.as_slice(), b.as_slice());
                if !solver.contains(&SparseVec::from_dense(&c)) {
                    return Err(ModuleError::NotIdeal(format!(
                        "[{}, {}] = {}",
                        g.labels()[i],
                        g.describe(b.as_slice()),
                        g.describe(&c)
                    )));
                }
            }
        }
    }
    let elems: Vec<_> = embed
        .iter()
        .map(|v| g.element(v.clone()))
        .collect::<Result<_, _>>()?;
    let c = centralizer(g, &elems)?;
    let (_, c_embed) = c.parent_embedding().expect("subalgebra");
    let mut all = embed.clone();
    all.extend(c_embed.iter().cloned());
    let direct_sum =
        c.dim() + sub.dim() == g.dim() && crate::ffla::span_dim(f, g.dim(), &all) == g.dim();
    let codim = g.dim() - sub.dim();
    let bound = (g.p() as usize).pow(mu_h as u32) - 1;
    Ok(SplitVerdict {
        centralizer: c,
        is_ideal: true,
        direct_sum,
        codim,
        bound,
        within_hypothesis: codim < bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w1_plus_nil(p: u32) -> Arc<RealizedAlgebra> {
        let w = build_w(1, p).unwrap();
        let k = PrimeField::new(p).unwrap();
        let nil = RealizedAlgebra::from_dense_matrices(
            "k_nil",
            &[FpMatrix::from_i64(k, &[vec![0, 1], vec![0, 0]])],
            None,
        )
        .unwrap();
        RealizedAlgebra::direct_sum(&w, &nil, "W(1)+k_nil").unwrap()
    }

    #[test]
    fn module_checks() {
        let w = build_w(1, 3).unwrap();
        assert_eq!(RestrictedModule::adjoint(&w).unwrap().dim(), 3);
        assert_eq!(RestrictedModule::natural(&w).unwrap().dim(), 3);
        let mut mats: Vec<FpMatrix> = RestrictedModule::adjoint(&w).unwrap().action().to_vec();
        mats[1] = FpMatrix::zeros(w.field(), 3, 3);
        assert!(matches!(
            check_restricted_module(&w, mats),
            Err(ModuleError::BracketMismatch(..))
        ));
    }

    #[test]
    fn density_table_p5() {
        let expected = [vec![1, 4], vec![5], vec![5], vec![5], vec![4, 1]];
        for (lambda, want) in expected.iter().enumerate() {
            let v = density_module(5, lambda as u32).unwrap();
            let c = composition_factors(&v, 0).unwrap();
            assert_eq!(&c.dims, want, "lambda = {lambda}");
            for seed in 1..4 {
                assert_eq!(
                    composition_factors(&v, seed).unwrap().sorted_dims(),
                    c.sorted_dims()
                );
            }
        }
    }

    #[test]
    fn spin_examples() {
        let f = PrimeField::new(5).unwrap();
        let v0 = density_module(5, 0).unwrap();
        assert_eq!(spin(&v0, &[FpVector::unit(f, 5, 0)]).len(), 1);
        let v1 = density_module(5, 1).unwrap();
        assert_eq!(spin(&v1, &[FpVector::unit(f, 5, 3)]).len(), 5);
        assert!(spin(&v1, &[FpVector::zeros(f, 5)]).is_empty());
    }

    #[test]
    fn trivial_and_small() {
        let w = build_w(1, 3).unwrap();
        let t = RestrictedModule::trivial(&w, 3).unwrap();
        let c = composition_factors(&t, 0).unwrap();
        assert_eq!(c.dims, vec![1, 1, 1]);
        assert!(c.all_trivial);
        assert_eq!(
            composition_factors(&density_module(3, 1).unwrap(), 0)
                .unwrap()
                .dims,
            vec![3]
        );
    }

    #[test]
    fn annihilators() {
        let w = build_w(1, 3).unwrap();
        assert_eq!(
            annihilator(&RestrictedModule::adjoint(&w).unwrap())
                .unwrap()
                .dim(),
            0
        );
        assert_eq!(
            annihilator(&RestrictedModule::trivial(&w, 2).unwrap())
                .unwrap()
                .dim(),
            3
        );
        let g = w1_plus_nil(3);
        let mut mats = density_module(3, 1).unwrap().action().to_vec();
        mats.push(FpMatrix::zeros(g.field(), 3, 3));
        let v = check_restricted_module(&g, mats).unwrap();
        let ann = annihilator(&v).unwrap();
        assert!(ann.is_p_ideal());
        assert_eq!(ann.basis(), &[FpVector::unit(g.field(), 4, 3)]);
    }

    #[test]
    fn perfect_criterion() {
        let k = PrimeField::new(3).unwrap();
        assert!(perfect_p_criterion(&build_w(1, 3).unwrap()));
        let nil = RealizedAlgebra::from_dense_matrices(
            "k_nil",
            &[FpMatrix::from_i64(k, &[vec![0, 1], vec![0, 0]])],
            None,
        )
        .unwrap();
        assert!(!perfect_p_criterion(&nil));
        let tor =
            RealizedAlgebra::from_dense_matrices("k", &[FpMatrix::identity(k, 1)], None).unwrap();
        assert!(perfect_p_criterion(&tor));
    }

    #[test]
    fn trivial_factor_theorem() {
        let w = build_w(1, 5).unwrap();
        let v = RestrictedModule::trivial(&w, 3).unwrap();
        let verdict = trivial_factor_check(&v, 1, true, 0).unwrap();
        assert!(verdict.consistent());
        assert_eq!(verdict.action_zero, Some(true));
        assert!(matches!(
            trivial_factor_check(&density_module(5, 1).unwrap(), 1, true, 0),
            Err(ModuleError::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn summand_detection() {
        let g = w1_plus_nil(3);
        let f = g.field();
        let h: Vec<FpVector> = (0..3).map(|i| FpVector::unit(f, 4, i)).collect();
        let s = split_off_simple_ideal(&g, &h, 1).unwrap();
        assert!(s.direct_sum && s.within_hypothesis);
        assert_eq!(s.centralizer.dim(), 1);

        let w = build_w(1, 3).unwrap();
        let all: Vec<FpVector> = (0..3).map(|i| FpVector::unit(f, 3, i)).collect();
        let s = split_off_simple_ideal(&w, &all, 1).unwrap();
        assert_eq!(s.centralizer.dim(), 0);
        assert!(s.direct_sum);

        let ww = RealizedAlgebra::direct_sum(&w, &w, "W(1)+W(1)").unwrap();
        let first: Vec<FpVector> = (0..3).map(|i| FpVector::unit(f, 6, i)).collect();
        let s = split_off_simple_ideal(&ww, &first, 1).unwrap();
        assert!(s.direct_sum && !s.within_hypothesis);
        assert_eq!(s.centralizer.dim(), 3);
    }
}
