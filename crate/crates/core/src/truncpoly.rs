//! The truncated polynomial ring A(n) = k[X₁,…,X_n]/(X₁^p,…,X_n^p) and its
//! derivations.
//!
//! Monomials are identified with their lexicographic index: the exponent
//! tuple `(a₁,…,a_n)` read as a base-`p` numeral with `a₁` most significant.
//! Adding exponents then amounts to adding indices, provided no digit
//! overflows.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::ffla::{FpMatrix, PrimeField, SparseMatrix, SparseVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TruncPolyError {
    #[error("ring mismatch: A({0}) over F_{1} vs A({2}) over F_{3}")]
    RingMismatch(usize, u32, usize, u32),
    #[error("variable index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("exponent {exp} of x{var} is not below p = {p}")]
    ExponentOutOfRange { var: usize, exp: u32, p: u32 },
    #[error("a derivation of A({n}) needs {n} components, got {got}")]
    ComponentCount { n: usize, got: usize },
    #[error("cannot parse polynomial {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Shape of A(n): variable count, field, and index arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    n: usize,
    field: PrimeField,
}

impl Ring {
    pub fn new(n: usize, field: PrimeField) -> Self {
        assert!(n >= 1, "A(n) needs n >= 1");
        Self { n, field }
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn p(self) -> u32 {
        self.field.p()
    }

    /// dim A(n) = p^n.
    pub fn dim(self) -> usize {
        (self.p() as usize).pow(self.n as u32)
    }

    /// Place value of variable `i` (1-based) in a monomial index.
    pub fn weight(self, i: usize) -> usize {
        (self.p() as usize).pow((self.n - i) as u32)
    }

    pub fn exponent(self, mono: usize, i: usize) -> u32 {
        ((mono / self.weight(i)) % self.p() as usize) as u32
    }

    pub fn exponents(self, mono: usize) -> Vec<u32> {
        (1..=self.n).map(|i| self.exponent(mono, i)).collect()
    }

    pub fn index_of(self, exps: &[u32]) -> Result<usize, TruncPolyError> {
        if exps.len() != self.n {
            return Err(TruncPolyError::IndexOutOfRange {
                index: exps.len(),
                n: self.n,
            });
        }
        let mut idx = 0usize;
        for (i, &e) in exps.iter().enumerate() {
            if e >= self.p() {
                return Err(TruncPolyError::ExponentOutOfRange {
                    var: i + 1,
                    exp: e,
                    p: self.p(),
                });
            }
            idx = idx * self.p() as usize + e as usize;
        }
        Ok(idx)
    }

    /// Index of the product monomial, or `None` if some exponent reaches p.
    #[inline]
    pub fn mono_mul(self, a: usize, b: usize) -> Option<usize> {
        let p = self.p() as usize;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.n {
            if x % p + y % p >= p {
                return None;
            }
            x /= p;
            y /= p;
        }
        Some(a + b)
    }

    /// The monomial x₁^{p−1}⋯x_n^{p−1}.
    pub fn top_monomial(self) -> usize {
        self.dim() - 1
    }

    pub fn check_var(self, i: usize) -> Result<(), TruncPolyError> {
        if i == 0 || i > self.n {
            Err(TruncPolyError::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn mono_label(self, mono: usize) -> String {
        let parts: Vec<String> = self
            .exponents(mono)
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_owned()
        } else {
            parts.join("*")
        }
    }
}

/// All exponent tuples of A(n) in lexicographic order; length p^n.
pub fn monomial_basis(n: usize, p: u32) -> Result<Vec<Vec<u32>>, crate::ffla::FflaError> {
    let ring = Ring::new(n, PrimeField::new(p)?);
    Ok((0..ring.dim()).map(|m| ring.exponents(m)).collect())
}

/// An element of A(n).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    ring: Ring,
    terms: BTreeMap<usize, u32>,
}

impl TruncPoly {
    pub fn zero(ring: Ring) -> Self {
        Self {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: Ring, c: i64) -> Self {
        Self::from_terms(ring, [(0, ring.field.reduce(c))])
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, 1)
    }

    /// `x_i` (1-based).
    pub fn var(ring: Ring, i: usize) -> Result<Self, TruncPolyError> {
        ring.check_var(i)?;
        Ok(Self::from_terms(ring, [(ring.weight(i), 1)]))
    }

    pub fn monomial(ring: Ring, exps: &[u32]) -> Result<Self, TruncPolyError> {
        Ok(Self::from_terms(ring, [(ring.index_of(exps)?, 1)]))
    }

    pub fn from_index(ring: Ring, mono: usize) -> Self {
        assert!(mono < ring.dim());
        Self::from_terms(ring, [(mono, 1)])
    }

    /// Terms `(monomial index, coefficient)`; coefficients already reduced.
    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut out = Self::zero(ring);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, mono: usize) -> u32 {
        self.terms.get(&mono).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, mono: usize, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.ring.field;
        let e = self.terms.entry(mono).or_insert(0);
        *e = f.add(*e, c);
        if *e == 0 {
            self.terms.remove(&mono);
        }
    }

    fn same_ring(&self, other: &Self) -> Result<(), TruncPolyError> {
        if self.ring != other.ring {
            return Err(TruncPolyError::RingMismatch(
                self.ring.n,
                self.ring.p(),
                other.ring.n,
                other.ring.p(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, TruncPolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TruncPolyError> {
        self.add(&other.scale(self.ring.field.neg(1)))
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.ring.field;
        Self::from_terms(self.ring, self.terms().map(|(m, x)| (m, f.mul(x, c))))
    }

    /// Product in A(n); exponents reaching p vanish.
    pub fn multiply(&self, other: &Self) -> Result<Self, TruncPolyError> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let f = self.ring.field;
        let mut out = Self::zero(self.ring);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                if let Some(m) = self.ring.mono_mul(a, b) {
                    out.add_term(m, f.mul(x, y));
                }
            }
        }
        out
    }

    /// ∂_i, 1-based.
    pub fn partial(&self, i: usize) -> Result<Self, TruncPolyError> {
        self.ring.check_var(i)?;
        Ok(self.partial_unchecked(i))
    }

    pub(crate) fn partial_unchecked(&self, i: usize) -> Self {
        let w = self.ring.weight(i);
        let f = self.ring.field;
        Self::from_terms(
            self.ring,
            self.terms().filter_map(|(m, c)| {
                let e = self.ring.exponent(m, i);
                (e > 0).then(|| (m - w, f.mul(c, e)))
            }),
        )
    }

    /// Parses `c*x1^a1*...*xn^an` terms joined by `+`/`-`, e.g. `1+x3`, `x1*x2`, `2*x1^2 - x2`.
    pub fn parse(ring: Ring, text: &str) -> Result<Self, TruncPolyError> {
        let err = |reason: &str| TruncPolyError::Parse {
            text: text.to_owned(),
            reason: reason.to_owned(),
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut out = Self::zero(ring);
        let mut chunks: Vec<(i64, String)> = Vec::new();
        let mut sign = 1i64;
        let mut current = String::new();
        for ch in compact.chars() {
            match ch {
                '+' | '-' if !current.is_empty() => {
                    chunks.push((sign, std::mem::take(&mut current)));
                    sign = if ch == '-' { -1 } else { 1 };
                }
                '+' if current.is_empty() => {}
                '-' if current.is_empty() => sign = -sign,
                _ => current.push(ch),
            }
        }
        if current.is_empty() {
            return Err(err("dangling operator"));
        }
        chunks.push((sign, current));
        for (sign, term) in chunks {
            let mut coeff = sign;
            let mut exps = vec![0u32; ring.n];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let var: usize = var.parse().map_err(|_| err("bad variable index"))?;
                    ring.check_var(var)?;
                    exps[var - 1] += exp;
                } else {
                    let c: i64 = factor.parse().map_err(|_| err("bad coefficient"))?;
                    coeff *= c;
                }
            }
            if exps.iter().any(|&e| e >= ring.p()) {
                continue; // truncated to zero
            }
            let m = ring.index_of(&exps)?;
            out.add_term(m, ring.field.reduce(coeff));
        }
        Ok(out)
    }
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| {
                let mono = self.ring.mono_label(m);
                match (c, mono.as_str()) {
                    (c, "1") => c.to_string(),
                    (1, _) => mono,
                    _ => format!("{c}*{mono}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// A derivation Σ f_i ∂_i of A(n), i.e. an element of W(n).
pub struct Derivation {
    ring: Ring,
    components: Vec<TruncPoly>,
    matrix: OnceLock<SparseMatrix>,
}

impl Clone for Derivation {
    fn clone(&self) -> Self {
        Self {
            ring: self.ring,
            components: self.components.clone(),
            matrix: self.matrix.clone(),
        }
    }
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.components == other.components
    }
}

impl Eq for Derivation {}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.num_terms() == 1 {
                    let s = c.to_string();
                    if s == "1" {
                        format!("d{}", i + 1)
                    } else {
                        format!("{s}*d{}", i + 1)
                    }
                } else {
                    format!("({c})*d{}", i + 1)
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl Derivation {
    pub fn new(components: Vec<TruncPoly>) -> Result<Self, TruncPolyError> {
        let ring = components
            .first()
            .map(TruncPoly::ring)
            .ok_or(TruncPolyError::ComponentCount { n: 0, got: 0 })?;
        if components.len() != ring.n {
            return Err(TruncPolyError::ComponentCount {
                n: ring.n,
                got: components.len(),
            });
        }
        for c in &components {
            if c.ring != ring {
                return Err(TruncPolyError::RingMismatch(
                    ring.n,
                    ring.p(),
                    c.ring.n,
                    c.ring.p(),
                ));
            }
        }
        Ok(Self::from_parts(ring, components))
    }

    fn from_parts(ring: Ring, components: Vec<TruncPoly>) -> Self {
        Self {
            ring,
            components,
            matrix: OnceLock::new(),
        }
    }

    pub fn zero(ring: Ring) -> Self {
        Self::from_parts(ring, vec![TruncPoly::zero(ring); ring.n])
    }

    /// `f ∂_i`.
    pub fn simple(f: TruncPoly, i: usize) -> Result<Self, TruncPolyError> {
        let ring = f.ring;
        ring.check_var(i)?;
        let mut components = vec![TruncPoly::zero(ring); ring.n];
        components[i - 1] = f;
        Ok(Self::from_parts(ring, components))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn components(&self) -> &[TruncPoly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TruncPoly::is_zero)
    }

    /// D(f) = Σ f_i ∂_i(f).
    pub fn apply(&self, f: &TruncPoly) -> Result<TruncPoly, TruncPolyError> {
        if f.ring != self.ring {
            return Err(TruncPolyError::RingMismatch(
                self.ring.n,
                self.ring.p(),
                f.ring.n,
                f.ring.p(),
            ));
        }
        Ok(self.apply_unchecked(f))
    }

    pub(crate) fn apply_unchecked(&self, f: &TruncPoly) -> TruncPoly {
        let mut out = TruncPoly::zero(self.ring);
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.partial_unchecked(i + 1);
            if d.is_zero() {
                continue;
            }
            for (m, x) in c.mul_unchecked(&d).terms() {
                out.add_term(m, x);
            }
        }
        out
    }

    /// Commutator [D, E] = Σ_i (D(e_i) − E(d_i)) ∂_i.
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring);
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(d, e)| {
                self.apply_unchecked(e)
                    .sub(&other.apply_unchecked(d))
                    .expect("same ring")
            })
            .collect();
        Self::from_parts(self.ring, components)
    }

    /// D^p, which is again a derivation in characteristic p; its components
    /// are D^p(x_i).
    pub fn p_power(&self) -> Self {
        let components = (1..=self.ring.n)
            .map(|i| {
                // D(x_i) = f_i, then p − 1 further applications
                let mut g = self.components[i - 1].clone();
                for _ in 1..self.ring.p() {
                    if g.is_zero() {
                        break;
                    }
                    g = self.apply_unchecked(&g);
                }
                g
            })
            .collect();
        Self::from_parts(self.ring, components)
    }

    pub fn scale(&self, c: u32) -> Self {
        Self::from_parts(
            self.ring,
            self.components.iter().map(|f| f.scale(c)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_parts(
            self.ring,
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b).expect("same ring"))
                .collect(),
        )
    }

    /// Σ c_k D_k.
    pub fn combination(ring: Ring, coeffs: &[u32], ders: &[Derivation]) -> Self {
        let f = ring.field;
        let mut comps: Vec<BTreeMap<usize, u32>> = vec![BTreeMap::new(); ring.n];
        for (&c, d) in coeffs.iter().zip(ders) {
            if c == 0 {
                continue;
            }
            for (slot, comp) in comps.iter_mut().zip(&d.components) {
                for (m, x) in comp.terms() {
                    let e = slot.entry(m).or_insert(0);
                    *e = f.add(*e, f.mul(c, x));
                }
            }
        }
        Self::from_parts(
            ring,
            comps
                .into_iter()
                .map(|t| TruncPoly::from_terms(ring, t.into_iter().filter(|e| e.1 != 0)))
                .collect(),
        )
    }

    /// Divergence Σ ∂_i(f_i).
    pub fn divergence(&self) -> TruncPoly {
        let mut out = TruncPoly::zero(self.ring);
        for (i, c) in self.components.iter().enumerate() {
            out = out.add(&c.partial_unchecked(i + 1)).expect("same ring");
        }
        out
    }

    /// Coordinates in the basis {x^a ∂_i} of W(n), index `(i−1)·p^n + a`.
    pub fn witt_coords(&self) -> SparseVec {
        let dim = self.ring.dim();
        let entries = self
            .components
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.terms().map(move |(m, x)| (i * dim + m, x)))
            .collect();
        SparseVec::from_unsorted(self.ring.field, entries)
    }

    pub fn from_witt_coords(ring: Ring, coords: &SparseVec) -> Self {
        let dim = ring.dim();
        let mut comps: Vec<Vec<(usize, u32)>> = vec![Vec::new(); ring.n];
        for &(idx, x) in coords.entries() {
            comps[idx / dim].push((idx % dim, x));
        }
        Self::from_parts(
            ring,
            comps
                .into_iter()
                .map(|t| TruncPoly::from_terms(ring, t))
                .collect(),
        )
    }

    /// Matrix of f ↦ D(f) on the monomial basis (column j = image of monomial j), cached.
    pub fn sparse_matrix(&self) -> &SparseMatrix {
        self.matrix.get_or_init(|| {
            let dim = self.ring.dim();
            let mut triplets = Vec::new();
            for j in 0..dim {
                let img = self.apply_unchecked(&TruncPoly::from_index(self.ring, j));
                triplets.extend(img.terms().map(|(i, c)| (i, j, c)));
            }
            SparseMatrix::from_triplets(self.ring.field, dim, &triplets)
        })
    }

    /// Dense matrix of the derivation acting on A(n).
    pub fn derivation_matrix(&self) -> FpMatrix {
        self.sparse_matrix().to_dense()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(n: usize, p: u32) -> Ring {
        Ring::new(n, PrimeField::new(p).unwrap())
    }

    fn parse(r: Ring, s: &str) -> TruncPoly {
        TruncPoly::parse(r, s).unwrap()
    }

    #[test]
    fn monomial_basis_sizes() {
        assert_eq!(
            monomial_basis(1, 3).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(monomial_basis(2, 3).unwrap().len(), 9);
        let b = monomial_basis(3, 5).unwrap();
        assert_eq!(b.len(), 125);
        assert_eq!(b[1], vec![0, 0, 1]);
        assert_eq!(b[5], vec![0, 1, 0]);
    }

    #[test]
    fn multiply_examples() {
        let r = ring(2, 5);
        let x1 = TruncPoly::var(r, 1).unwrap();
        assert!(x1.multiply(&parse(r, "x1^4")).unwrap().is_zero());
        assert_eq!(
            x1.multiply(&TruncPoly::var(r, 2).unwrap()).unwrap(),
            parse(r, "x1*x2")
        );
        let r3 = ring(1, 3);
        let a = parse(r3, "1+x1");
        assert_eq!(a.multiply(&a).unwrap(), parse(r3, "1+2*x1+x1^2"));
        assert!(a.multiply(&x1).is_err());
    }

    #[test]
    fn partial_examples() {
        let r = ring(2, 5);
        assert_eq!(parse(r, "x1*x2").partial(1).unwrap(), parse(r, "x2"));
        assert!(parse(r, "x2").partial(1).unwrap().is_zero());
        assert_eq!(parse(r, "x1^2").partial(1).unwrap(), parse(r, "2*x1"));
        assert!(parse(r, "x1").partial(3).is_err());
        assert!(parse(r, "x1").partial(0).is_err());
    }

    #[test]
    fn parse_and_display() {
        let r = ring(3, 5);
        let f = parse(r, "1 + x3");
        assert_eq!(f.to_string(), "1+x3");
        assert_eq!(parse(r, "-x1").to_string(), "4*x1");
        assert_eq!(
            parse(r, "2*x1^2*x2 - x2").coeff(r.index_of(&[0, 1, 0]).unwrap()),
            4
        );
        assert!(parse(r, "x1^5").is_zero());
        assert!(TruncPoly::parse(r, "x4").is_err());
        assert!(TruncPoly::parse(r, "1+").is_err());
    }

    #[test]
    fn derivation_matrices_on_a1() {
        let r = ring(1, 3);
        let d = Derivation::simple(TruncPoly::one(r), 1).unwrap();
        let m = d.derivation_matrix();
        assert!(!m.is_zero());
        assert!(m.mul(&m).mul(&m).is_zero());

        let xd = Derivation::simple(parse(r, "x1"), 1).unwrap();
        let k = r.field();
        assert_eq!(
            xd.derivation_matrix(),
            FpMatrix::from_i64(k, &[vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]])
        );

        // x²∂: 1 ↦ 0, x ↦ x², x² ↦ 2x³ = 0; images in columns, so strictly lower triangular
        let x2d = Derivation::simple(parse(r, "x1^2"), 1).unwrap();
        let m = x2d.derivation_matrix();
        for i in 0..3 {
            for j in i..3 {
                assert_eq!(m.get(i, j), 0);
            }
        }
        assert_eq!(m.get(2, 1), 1);
        assert!(m.mul(&m).is_zero());
    }

    #[test]
    fn p_power_of_toral_derivation() {
        let r = ring(1, 3);
        let d = Derivation::simple(parse(r, "1+x1"), 1).unwrap();
        assert_eq!(d.p_power(), d);
        let dd = Derivation::simple(TruncPoly::one(r), 1).unwrap();
        assert!(dd.p_power().is_zero());
    }

    fn arb_poly(r: Ring) -> impl Strategy<Value = TruncPoly> {
        proptest::collection::vec(0..r.p(), r.dim())
            .prop_map(move |c| TruncPoly::from_terms(r, c.into_iter().enumerate()))
    }

    fn arb_der(r: Ring) -> impl Strategy<Value = Derivation> {
        proptest::collection::vec(arb_poly(r), r.n()).prop_map(|c| Derivation::new(c).unwrap())
    }

    proptest! {
        #[test]
        fn leibniz_rule(d in arb_der(ring(2, 3)), f in arb_poly(ring(2, 3)), g in arb_poly(ring(2, 3))) {
            let lhs = d.apply(&f.multiply(&g).unwrap()).unwrap();
            let rhs = d.apply(&f).unwrap().multiply(&g).unwrap()
                .add(&f.multiply(&d.apply(&g).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ring_axioms(f in arb_poly(ring(2, 5)), g in arb_poly(ring(2, 5)), h in arb_poly(ring(2, 5))) {
            prop_assert_eq!(f.multiply(&g).unwrap(), g.multiply(&f).unwrap());
            prop_assert_eq!(
                f.multiply(&g).unwrap().multiply(&h).unwrap(),
                f.multiply(&g.multiply(&h).unwrap()).unwrap()
            );
            prop_assert_eq!(f.multiply(&TruncPoly::one(ring(2, 5))).unwrap(), f.clone());
            prop_assert_eq!(
                f.partial(1).unwrap().partial(2).unwrap(),
                f.partial(2).unwrap().partial(1).unwrap()
            );
        }

        #[test]
        fn matrix_realizes_bracket_and_p_power(d in arb_der(ring(2, 3)), e in arb_der(ring(2, 3))) {
            let (md, me) = (d.derivation_matrix(), e.derivation_matrix());
            prop_assert_eq!(d.bracket(&e).derivation_matrix(), md.commutator(&me));
            prop_assert_eq!(d.p_power().derivation_matrix(), md.mat_p_power().unwrap());
            // a derivation is determined by its images of the variables
            prop_assert_eq!(Derivation::from_witt_coords(d.ring(), &d.witt_coords()), d);
        }
    }
}
