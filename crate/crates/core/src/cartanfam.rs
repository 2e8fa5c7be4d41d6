//! The restricted Cartan-type families W, S, H, K and their relatives
//! H′, K″, P, realized as derivations of A(n), with registered tori.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::ffla::{FpMatrix, FpVector, PrimeField, SpanSolver};
use crate::liealg::{centralizer, derived_subalgebra, LieError, RealizedAlgebra};
use crate::truncpoly::{Derivation, Ring, TruncPoly, TruncPolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("invalid family: {0}")]
    InvalidSpec(String),
    #[error("contact bracket leaves the image of D_K")]
    Pullback,
    #[error("registered torus generator {0} is invalid")]
    TorusInvalid(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Poly(#[from] TruncPolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    W,
    S,
    H,
    HPrime,
    Kpp,
    K,
    P,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::W,
        Family::S,
        Family::H,
        Family::HPrime,
        Family::Kpp,
        Family::K,
        Family::P,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Family::W => "W",
            Family::S => "S",
            Family::H => "H",
            Family::HPrime => "H'",
            Family::Kpp => "K''",
            Family::K => "K",
            Family::P => "P",
        }
    }

    /// Simple families (those the root-space identities apply to).
    pub fn is_simple(self) -> bool {
        matches!(self, Family::W | Family::S | Family::H | Family::K)
    }
}

impl FromStr for Family {
    type Err = CartanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "W" | "w" => Family::W,
            "S" | "s" => Family::S,
            "H" | "h" => Family::H,
            "H'" | "Hprime" | "HPrime" | "hprime" => Family::HPrime,
            "K''" | "Kpp" | "kpp" | "K\"" => Family::Kpp,
            "K" | "k" => Family::K,
            "P" | "p" => Family::P,
            _ => return Err(CartanError::InvalidSpec(format!("unknown family {s:?}"))),
        })
    }
}

/// A member of one of the families. `n` is the number of variables for
/// W, S, K″, K and the even number 2r for H, H′, P.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilySpec {
    family: Family,
    n: usize,
    p: u32,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, p: u32) -> Result<Self, CartanError> {
        PrimeField::new(p).map_err(|e| CartanError::InvalidSpec(e.to_string()))?;
        let bad = |why: &str| {
            Err(CartanError::InvalidSpec(format!(
                "{}({n}): {why}",
                family.symbol()
            )))
        };
        match family {
            Family::W if n == 0 => return bad("n must be at least 1"),
            Family::S if n < 3 => return bad("n must be at least 3"),
            Family::H | Family::HPrime | Family::P if n == 0 || n % 2 == 1 => {
                return bad("n = 2r must be even and positive")
            }
            Family::Kpp | Family::K if n < 3 || n.is_multiple_of(2) => {
                return bad("n = 2r+1 must be odd and at least 3")
            }
            _ => {}
        }
        Ok(Self { family, n, p })
    }

    /// Builds from the half-size `r` for H, H′, P (n = 2r) and K″, K (n = 2r+1).
    pub fn from_r(family: Family, r: usize, p: u32) -> Result<Self, CartanError> {
        let n = match family {
            Family::H | Family::HPrime | Family::P => 2 * r,
            Family::Kpp | Family::K => 2 * r + 1,
            _ => {
                return Err(CartanError::InvalidSpec(format!(
                    "{} takes n, not r",
                    family.symbol()
                )))
            }
        };
        Self::new(family, n, p)
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn r(self) -> usize {
        self.n / 2
    }

    pub fn name(self) -> String {
        format!("{}({})", self.family.symbol(), self.n)
    }

    /// `[p | n+3]` for the contact families.
    fn contact_defect(self) -> bool {
        (self.n as u32 + 3).is_multiple_of(self.p)
    }

    /// Literature value of μ.
    pub fn reference_mu(self) -> usize {
        match self.family {
            Family::W => self.n,
            Family::S => self.n - 1,
            Family::H | Family::HPrime => self.r(),
            Family::Kpp | Family::K | Family::P => self.r() + 1,
        }
    }

    /// Literature value of the rank.
    pub fn reference_rank(self) -> usize {
        let p = self.p as usize;
        let pr = p.pow(self.r() as u32);
        match self.family {
            Family::W => self.n,
            Family::S => (self.n - 1) * (p - 1),
            Family::H => pr - 2,
            Family::HPrime => pr - 1,
            Family::P | Family::Kpp => pr,
            Family::K => pr - usize::from(self.contact_defect()),
        }
    }

    pub fn reference_dim(self) -> usize {
        let p = self.p as usize;
        let pn = p.pow(self.n as u32);
        match self.family {
            Family::W => self.n * pn,
            Family::S => (self.n - 1) * (pn - 1),
            Family::H => pn - 2,
            Family::HPrime => pn - 1,
            Family::P | Family::Kpp => pn,
            Family::K => pn - usize::from(self.contact_defect()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@p{}", self.name(), self.p)
    }
}

impl FromStr for FamilySpec {
    type Err = CartanError;

    /// Parses `W(1)@3`, `K''(3)@p5` and similar.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CartanError::InvalidSpec(format!("cannot parse {s:?}"));
        let (head, p) = s.split_once('@').ok_or_else(bad)?;
        let p: u32 = p.trim_start_matches('p').parse().map_err(|_| bad())?;
        let (fam, rest) = head.split_once('(').ok_or_else(bad)?;
        let n: usize = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        Self::new(fam.parse()?, n, p)
    }
}

fn ring_for(n: usize, p: u32) -> Result<Ring, CartanError> {
    Ok(Ring::new(
        n,
        PrimeField::new(p).map_err(|e| CartanError::InvalidSpec(e.to_string()))?,
    ))
}

fn add_to(slot: &mut TruncPoly, term: &TruncPoly) {
    *slot = slot.add(term).expect("same ring");
}

/// The contact map D_K : A(2r+1) → W(2r+1).
pub fn d_k(f: &TruncPoly) -> Result<Derivation, CartanError> {
    let ring = f.ring();
    let n = ring.n();
    if n < 3 || n.is_multiple_of(2) {
        return Err(CartanError::InvalidSpec(format!(
            "D_K needs odd n >= 3, got {n}"
        )));
    }
    let r = (n - 1) / 2;
    let fl = ring.field();
    let dn = f.partial_unchecked(n);
    let mut comps = vec![TruncPoly::zero(ring); n];
    let mut euler = TruncPoly::zero(ring);
    for i in 1..=2 * r {
        let xi = TruncPoly::var(ring, i)?;
        let mut c = xi.mul_unchecked(&dn);
        if i <= r {
            add_to(&mut c, &f.partial_unchecked(i + r).scale(fl.neg(1)));
        } else {
            add_to(&mut c, &f.partial_unchecked(i - r));
        }
        comps[i - 1] = c;
        add_to(&mut euler, &xi.mul_unchecked(&f.partial_unchecked(i)));
    }
    comps[n - 1] = f.scale(2).sub(&euler)?;
    Ok(Derivation::new(comps)?)
}

/// The Hamiltonian map D_H : A(2r) → W(2r).
pub fn d_h(f: &TruncPoly) -> Result<Derivation, CartanError> {
    let ring = f.ring();
    let n = ring.n();
    if n == 0 || n % 2 == 1 {
        return Err(CartanError::InvalidSpec(format!(
            "D_H needs even n, got {n}"
        )));
    }
    let r = n / 2;
    let fl = ring.field();
    let mut comps = vec![TruncPoly::zero(ring); n];
    for i in 1..=r {
        add_to(&mut comps[i + r - 1], &f.partial_unchecked(i));
        add_to(
            &mut comps[i - 1],
            &f.partial_unchecked(i + r).scale(fl.neg(1)),
        );
    }
    Ok(Derivation::new(comps)?)
}

fn label_with(prefix: &str, ring: Ring, mono: usize) -> String {
    format!("{prefix}({})", ring.mono_label(mono))
}

/// W(n): all derivations x^a ∂_i, ordered by i, then by monomial.
pub fn build_w(n: usize, p: u32) -> Result<Arc<RealizedAlgebra>, CartanError> {
    let spec = FamilySpec::new(Family::W, n, p)?;
    let ring = ring_for(n, p)?;
    let mut basis = Vec::with_capacity(n * ring.dim());
    let mut labels = Vec::with_capacity(n * ring.dim());
    for i in 1..=n {
        for a in 0..ring.dim() {
            basis.push(Derivation::simple(TruncPoly::from_index(ring, a), i)?);
            let m = ring.mono_label(a);
            labels.push(if m == "1" {
                format!("d{i}")
            } else {
                format!("{m}*d{i}")
            });
        }
    }
    Ok(RealizedAlgebra::from_derivations(
        spec.name(),
        ring,
        basis,
        Some(labels),
    )?)
}

/// S(n): derived algebra of the divergence-free derivations.
pub fn build_s(n: usize, p: u32) -> Result<Arc<RealizedAlgebra>, CartanError> {
    let spec = FamilySpec::new(Family::S, n, p)?;
    let ring = ring_for(n, p)?;
    let field = ring.field();
    let dim = ring.dim();
    // column (i−1)·p^n + a holds div(x^a ∂_i) = a_i x^{a − e_i}
    let mut div = FpMatrix::zeros(field, dim, n * dim);
    for i in 1..=n {
        for a in 0..dim {
            let d = TruncPoly::from_index(ring, a).partial_unchecked(i);
            for (m, c) in d.terms() {
                div.set(m, (i - 1) * dim + a, c);
            }
        }
    }
    let basis: Vec<Derivation> = crate::ffla::canonical_basis(field, n * dim, &div.kernel_basis())
        .iter()
        .map(|v| {
            Derivation::from_witt_coords(ring, &crate::ffla::SparseVec::from_dense(v.as_slice()))
        })
        .collect();
    let s_prime = RealizedAlgebra::from_derivations(format!("S'({n})"), ring, basis, None)?;
    Ok(derived_subalgebra(&s_prime)?.renamed(spec.name()))
}

/// (H′(2r), H(2r)) with H′ = D_H(A(2r)) and H = [H′, H′].
pub fn build_h_family(
    r: usize,
    p: u32,
) -> Result<(Arc<RealizedAlgebra>, Arc<RealizedAlgebra>), CartanError> {
    let hp = FamilySpec::from_r(Family::HPrime, r, p)?;
    let h = FamilySpec::from_r(Family::H, r, p)?;
    let ring = ring_for(2 * r, p)?;
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for a in 1..ring.dim() {
        basis.push(d_h(&TruncPoly::from_index(ring, a))?);
        labels.push(label_with("D_H", ring, a));
    }
    let hprime = RealizedAlgebra::from_derivations(hp.name(), ring, basis, Some(labels))?;
    let hder = derived_subalgebra(&hprime)?.renamed(h.name());
    Ok((hprime, hder))
}

/// (K″(n), K(n)) with K″ = D_K(A(n)) and K = K″ unless p | n+3, where K = [K″, K″].
pub fn build_k_family(
    n: usize,
    p: u32,
) -> Result<(Arc<RealizedAlgebra>, Arc<RealizedAlgebra>), CartanError> {
    let kpp_spec = FamilySpec::new(Family::Kpp, n, p)?;
    let k_spec = FamilySpec::new(Family::K, n, p)?;
    let kpp = build_kpp(n, p)?;
    let k = if k_spec.contact_defect() {
        derived_subalgebra(&kpp)?.renamed(k_spec.name())
    } else {
        kpp.renamed(k_spec.name())
    };
    debug_assert_eq!(kpp.name(), kpp_spec.name());
    Ok((kpp, k))
}

fn build_kpp(n: usize, p: u32) -> Result<Arc<RealizedAlgebra>, CartanError> {
    let spec = FamilySpec::new(Family::Kpp, n, p)?;
    let ring = ring_for(n, p)?;
    let mut basis = Vec::with_capacity(ring.dim());
    let mut labels = Vec::with_capacity(ring.dim());
    for a in 0..ring.dim() {
        basis.push(d_k(&TruncPoly::from_index(ring, a))?);
        labels.push(label_with("D_K", ring, a));
    }
    Ok(RealizedAlgebra::from_derivations(
        spec.name(),
        ring,
        basis,
        Some(labels),
    )?)
}

/// The derivation D_K(f) or D_H(f) that the text form of f denotes in the
/// ring underlying `spec` (for P(2r), the contact ring A(2r+1)).
pub fn image_of_poly(spec: FamilySpec, text: &str) -> Result<Derivation, CartanError> {
    match spec.family {
        Family::Kpp | Family::K => d_k(&TruncPoly::parse(ring_for(spec.n, spec.p)?, text)?),
        Family::P => d_k(&TruncPoly::parse(ring_for(spec.n + 1, spec.p)?, text)?),
        Family::H | Family::HPrime => d_h(&TruncPoly::parse(ring_for(spec.n, spec.p)?, text)?),
        Family::W | Family::S => Err(CartanError::InvalidSpec(format!(
            "{} elements are not images of polynomials",
            spec.family.symbol()
        ))),
    }
}

/// D_K(1 + x_n).
pub fn contact_unit_shift(ring: Ring) -> Result<Derivation, CartanError> {
    let f = TruncPoly::one(ring).add(&TruncPoly::var(ring, ring.n())?)?;
    d_k(&f)
}

/// P(2r) as the centralizer of D_K(1 + x_n) in K″(2r+1).
pub fn build_p(r: usize, p: u32) -> Result<Arc<RealizedAlgebra>, CartanError> {
    let spec = FamilySpec::from_r(Family::P, r, p)?;
    let kpp = build_kpp(2 * r + 1, p)?;
    let ring = ring_for(2 * r + 1, p)?;
    let z = kpp
        .coords_of_derivation(&contact_unit_shift(ring)?)?
        .ok_or_else(|| CartanError::TorusInvalid("D_K(1+x_n)".into()))?;
    let c = centralizer(&kpp, &[kpp.element(z)?])?;
    Ok(c.renamed(spec.name()))
}

/// Builds any family member.
pub fn build(spec: FamilySpec) -> Result<Arc<RealizedAlgebra>, CartanError> {
    let (n, p) = (spec.n, spec.p);
    match spec.family {
        Family::W => build_w(n, p),
        Family::S => build_s(n, p),
        Family::HPrime => Ok(build_h_family(spec.r(), p)?.0),
        Family::H => Ok(build_h_family(spec.r(), p)?.1),
        Family::Kpp => build_kpp(n, p),
        Family::K => Ok(build_k_family(n, p)?.1),
        Family::P => build_p(spec.r(), p),
    }
}

/// D_K restricted to A(n), with a solver for pulling brackets back.
pub struct ContactMap {
    ring: Ring,
    solver: SpanSolver,
}

impl ContactMap {
    pub fn new(ring: Ring) -> Result<Self, CartanError> {
        let mut solver = SpanSolver::new(ring.field(), ring.n() * ring.dim());
        for a in 0..ring.dim() {
            if !solver.insert(&d_k(&TruncPoly::from_index(ring, a))?.witt_coords()) {
                return Err(CartanError::Lie(LieError::DependentBasis(a)));
            }
        }
        Ok(Self { ring, solver })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Rank of D_K as a linear map (p^n when injective).
    pub fn rank(&self) -> usize {
        self.solver.rank()
    }

    /// The unique h with D_K(h) = D, if any.
    pub fn pullback(&self, d: &Derivation) -> Option<TruncPoly> {
        self.solver.solve(&d.witt_coords()).map(|c| {
            TruncPoly::from_terms(self.ring, c.into_iter().enumerate().filter(|e| e.1 != 0))
        })
    }

    /// ⟨f, g⟩ with D_K(⟨f, g⟩) = [D_K(f), D_K(g)].
    pub fn bracket(&self, f: &TruncPoly, g: &TruncPoly) -> Result<TruncPoly, CartanError> {
        if f.ring() != self.ring || g.ring() != self.ring {
            return Err(CartanError::Poly(TruncPolyError::RingMismatch(
                self.ring.n(),
                self.ring.p(),
                f.ring().n(),
                f.ring().p(),
            )));
        }
        let d = d_k(f)?.bracket(&d_k(g)?);
        self.pullback(&d).ok_or(CartanError::Pullback)
    }
}

/// The contact bracket on A(n).
pub fn contact_bracket(f: &TruncPoly, g: &TruncPoly) -> Result<TruncPoly, CartanError> {
    ContactMap::new(f.ring())?.bracket(f, g)
}

/// A torus taken from the literature, given by derivations and their
/// coordinates in the family member.
#[derive(Clone, Debug)]
pub struct RegisteredTorus {
    pub spec: FamilySpec,
    pub generators: Vec<Derivation>,
    pub descriptions: Vec<String>,
    pub coords: Vec<FpVector>,
    pub mu_reference: usize,
    pub note: String,
}

fn registered_generators(
    spec: FamilySpec,
) -> Result<(Vec<Derivation>, Vec<String>, String), CartanError> {
    let ring = match spec.family {
        Family::P => ring_for(spec.n + 1, spec.p)?,
        _ => ring_for(spec.n, spec.p)?,
    };
    let field = ring.field();
    let var = |i: usize| TruncPoly::var(ring, i);
    let mut gens = Vec::new();
    let mut desc = Vec::new();
    let note = match spec.family {
        Family::W => {
            for i in 1..=spec.n {
                gens.push(Derivation::simple(var(i)?, i)?);
                desc.push(format!("x{i}*d{i}"));
            }
            "diagonal derivations x_i d_i".to_owned()
        }
        Family::S => {
            for i in 1..spec.n {
                let a = Derivation::simple(var(i)?, i)?;
                let b = Derivation::simple(var(i + 1)?, i + 1)?;
                gens.push(a.add(&b.scale(field.neg(1))));
                desc.push(format!("x{i}*d{i} - x{}*d{}", i + 1, i + 1));
            }
            "differences of diagonal derivations".to_owned()
        }
        Family::H | Family::HPrime => {
            let r = spec.r();
            for i in 1..=r {
                gens.push(d_h(&var(i)?.mul_unchecked(&var(i + r)?))?);
                desc.push(format!("D_H(x{i}*x{})", i + r));
            }
            "Hamiltonian images of x_i x_{r+i}".to_owned()
        }
        Family::Kpp | Family::K | Family::P => {
            let n = ring.n();
            let r = (n - 1) / 2;
            for i in 1..=r {
                gens.push(d_k(&var(i)?.mul_unchecked(&var(i + r)?))?);
                desc.push(format!("D_K(x{i}*x{})", i + r));
            }
            gens.push(contact_unit_shift(ring)?);
            desc.push(format!("D_K(1+x{n})"));
            "contact images of x_i x_{r+i} and 1+x_n".to_owned()
        }
    };
    Ok((gens, desc, note))
}

/// The registered torus of `spec`, located inside `algebra` (which must be
/// the algebra built for `spec`). Generators outside the algebra yield
/// `TorusInvalid`.
pub fn registered_torus(
    spec: FamilySpec,
    algebra: &RealizedAlgebra,
) -> Result<RegisteredTorus, CartanError> {
    let (generators, descriptions, note) = registered_generators(spec)?;
    let mut coords = Vec::with_capacity(generators.len());
    for (g, d) in generators.iter().zip(&descriptions) {
        let c = algebra.coords_of_derivation(g)?.ok_or_else(|| {
            CartanError::TorusInvalid(format!("{d} is not in {}", algebra.name()))
        })?;
        if algebra.p_power_coords(c.as_slice()) != c.as_slice() {
            return Err(CartanError::TorusInvalid(format!("{d} is not toral")));
        }
        coords.push(c);
    }
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            if algebra
                .bracket_coords(coords[i].as_slice(), coords[j].as_slice())
                .iter()
                .any(|&c| c != 0)
            {
                return Err(CartanError::TorusInvalid(format!(
                    "{} and {} do not commute",
                    descriptions[i], descriptions[j]
                )));
            }
        }
    }
    Ok(RegisteredTorus {
        spec,
        generators,
        descriptions,
        coords,
        mu_reference: spec.reference_mu(),
        note,
    })
}
