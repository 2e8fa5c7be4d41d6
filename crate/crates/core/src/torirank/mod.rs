//! Toral elements, tori, ranks, weight decompositions, oracles and the
//! invariant and decomposition reports.

mod decomposition;
mod oracle;
mod report;
mod weights;

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cartanfam::CartanError;
use crate::ffla::{FpMatrix, FpVector, SpanSolver, SparseVec};
use crate::liealg::{
    centralizer, is_lie_nilpotent, normalizer, Element, LieError, RealizedAlgebra,
};

pub use decomposition::{verify_decomposition_theorems, DecompositionInput, DecompositionReport};
pub use oracle::{brute_force_mu, brute_force_toral, mu_search, ORACLE_LIMIT};
pub use report::{
    invariant_report, invariant_report_for, registered_torus_checked, ClaimRecord, ClaimValue,
    InvariantReport, ReportOptions, Status,
};
pub use weights::{weight_decomposition, WeightDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("{0} and {1} do not commute")]
    NotCommuting(String, String),
    #[error("{0} is not toral")]
    NotToral(String),
    #[error("generator {0} depends on the previous ones")]
    Dependent(String),
    #[error("operator {0} is not semisimple over F_p (M^p != M)")]
    NotSemisimpleAction(usize),
    #[error("enumeration of {0} elements exceeds the oracle bound")]
    TooLarge(String),
    #[error("p-power sequence did not cycle within {0} steps")]
    CycleOverflow(usize),
    #[error("cannot certify: {0}")]
    PreconditionUnverifiable(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Registered,
    Searched,
    User,
}

/// The F_p-span of commuting, independent toral elements.
#[derive(Clone, Debug)]
pub struct Torus {
    algebra: Arc<RealizedAlgebra>,
    basis: Vec<Element>,
    provenance: Provenance,
    mu_reference: Option<usize>,
}

impl Torus {
    pub fn algebra(&self) -> &Arc<RealizedAlgebra> {
        &self.algebra
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn mu_reference(&self) -> Option<usize> {
        self.mu_reference
    }

    pub fn coords(&self) -> Vec<FpVector> {
        self.basis.iter().map(|e| e.coords().clone()).collect()
    }

    /// ad(t_i) for each basis element.
    pub fn ad_matrices(&self) -> Vec<FpMatrix> {
        self.basis
            .iter()
            .map(|t| self.algebra.ad_matrix_coords(t.coords().as_slice()))
            .collect()
    }
}

pub fn is_toral(g: &RealizedAlgebra, x: &Element) -> Result<bool, TorusError> {
    Ok(g.p_power(x)? == *x)
}

/// The semisimple part of `x`, read off the p-power sequence
/// x, x^[p], x^[p²], … once it cycles.
pub fn semisimple_part(g: &RealizedAlgebra, x: &Element) -> Result<Element, TorusError> {
    let coords = semisimple_coords(g, x.coords().as_slice())?;
    Ok(g.element(FpVector::from_residues(g.field(), coords))?)
}

fn cycle_cap(g: &RealizedAlgebra) -> usize {
    10 * (g.dim() + 1)
}

pub(crate) fn p_power_sequence(
    g: &RealizedAlgebra,
    x: &[u32],
) -> Result<(Vec<Vec<u32>>, usize, usize), TorusError> {
    let cap = cycle_cap(g);
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut seq: Vec<Vec<u32>> = Vec::new();
    let mut y = x.to_vec();
    loop {
        if let Some(&k) = seen.get(&y) {
            let m = seq.len() - k;
            return Ok((seq, k, m));
        }
        if seq.len() >= cap {
            return Err(TorusError::CycleOverflow(cap));
        }
        seen.insert(y.clone(), seq.len());
        let next = g.p_power_coords(&y);
        seq.push(y);
        y = next;
    }
}

pub(crate) fn semisimple_coords(g: &RealizedAlgebra, x: &[u32]) -> Result<Vec<u32>, TorusError> {
    let (seq, k, m) = p_power_sequence(g, x)?;
    // seq holds indices k..k+m of the cycle, which contain exactly one multiple of m
    let e = k.div_ceil(m) * m;
    Ok(seq[e].clone())
}

fn independent(g: &RealizedAlgebra, vectors: &[FpVector]) -> Option<usize> {
    let mut s = SpanSolver::new(g.field(), g.dim());
    vectors
        .iter()
        .position(|v| !s.insert(&SparseVec::from_dense(v.as_slice())))
}

const EXHAUSTIVE_COMBINATIONS: u64 = 100_000;
const SAMPLED_COMBINATIONS: usize = 10_000;

/// Checks that `elements` span a torus of `g`: independent, pairwise
/// commuting, each toral, and every F_p-combination toral (all of them when
/// there are at most 10^5, otherwise 10^4 seeded samples).
pub fn verify_torus(
    g: &Arc<RealizedAlgebra>,
    elements: &[Element],
    provenance: Provenance,
    mu_reference: Option<usize>,
) -> Result<Torus, TorusError> {
    let coords: Vec<FpVector> = elements.iter().map(|e| e.coords().clone()).collect();
    for e in elements {
        g.p_power(e)?;
    }
    let name = |v: &FpVector| g.describe(v.as_slice());
    if let Some(i) = independent(g, &coords) {
        return Err(TorusError::Dependent(name(&coords[i])));
    }
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            if g.bracket_coords(coords[i].as_slice(), coords[j].as_slice())
                .iter()
                .any(|&c| c != 0)
            {
                return Err(TorusError::NotCommuting(name(&coords[i]), name(&coords[j])));
            }
        }
    }
    for c in &coords {
        if g.p_power_coords(c.as_slice()) != c.as_slice() {
            return Err(TorusError::NotToral(name(c)));
        }
    }
    let d = coords.len() as u32;
    let p = g.p();
    let field = g.field();
    let check = |coeffs: &[u32]| -> Result<(), TorusError> {
        let x = crate::ffla::combine(field, g.dim(), coeffs, &coords);
        if g.p_power_coords(x.as_slice()) != x.as_slice() {
            return Err(TorusError::NotToral(name(&x)));
        }
        Ok(())
    };
    if d >= 2 {
        let total = (p as u64).checked_pow(d);
        match total {
            Some(t) if t <= EXHAUSTIVE_COMBINATIONS => {
                let mut coeffs = vec![0u32; d as usize];
                for mut k in 0..t {
                    for c in coeffs.iter_mut() {
                        *c = (k % p as u64) as u32;
                        k /= p as u64;
                    }
                    check(&coeffs)?;
                }
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(0);
                for _ in 0..SAMPLED_COMBINATIONS {
                    let coeffs: Vec<u32> = (0..d).map(|_| rng.gen_range(0..p)).collect();
                    check(&coeffs)?;
                }
            }
        }
    }
    Ok(Torus {
        algebra: Arc::clone(g),
        basis: elements.to_vec(),
        provenance,
        mu_reference,
    })
}

/// dim C_g(t); the rank of `g` when `t` has maximal dimension.
pub fn rank_via_torus(t: &Torus) -> Result<usize, TorusError> {
    Ok(centralizer(&t.algebra, &t.basis)?.dim())
}

/// Nilpotent and self-normalizing. `h` is given by coordinates in `g`.
pub fn is_cartan_subalgebra(g: &Arc<RealizedAlgebra>, h: &[FpVector]) -> Result<bool, TorusError> {
    let sub = RealizedAlgebra::subalgebra(g, "h", h)?;
    if !is_lie_nilpotent(&sub) {
        return Ok(false);
    }
    let (_, embed) = sub.parent_embedding().expect("subalgebra");
    Ok(normalizer(g, embed).len() == sub.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartanfam::{build, build_w, registered_torus, Family, FamilySpec};

    fn el(g: &RealizedAlgebra, v: &[i64]) -> Element {
        g.element(FpVector::from_i64(g.field(), v)).unwrap()
    }

    #[test]
    fn toral_examples_in_w1() {
        let w = build_w(1, 3).unwrap();
        let xd = el(&w, &[0, 1, 0]);
        let d = el(&w, &[1, 0, 0]);
        let shifted = el(&w, &[1, 1, 0]);
        assert!(is_toral(&w, &xd).unwrap());
        assert_eq!(semisimple_part(&w, &xd).unwrap(), xd);
        assert!(!is_toral(&w, &d).unwrap());
        assert!(semisimple_part(&w, &d).unwrap().is_zero());
        assert!(is_toral(&w, &shifted).unwrap());
    }

    #[test]
    fn verify_torus_examples() {
        let w = build_w(1, 3).unwrap();
        assert_eq!(
            verify_torus(&w, &[el(&w, &[0, 1, 0])], Provenance::User, Some(1))
                .unwrap()
                .dim(),
            1
        );
        assert!(matches!(
            verify_torus(&w, &[el(&w, &[1, 0, 0])], Provenance::User, None),
            Err(TorusError::NotToral(_))
        ));
        assert!(matches!(
            verify_torus(
                &w,
                &[el(&w, &[0, 1, 0]), el(&w, &[1, 1, 0])],
                Provenance::User,
                None
            ),
            Err(TorusError::NotCommuting(..))
        ));
        assert!(matches!(
            verify_torus(
                &w,
                &[el(&w, &[0, 1, 0]), el(&w, &[0, 2, 0])],
                Provenance::User,
                None
            ),
            Err(TorusError::Dependent(_))
        ));
    }

    #[test]
    fn premet_invariance_in_w1() {
        let w = build_w(1, 3).unwrap();
        let a = verify_torus(&w, &[el(&w, &[0, 1, 0])], Provenance::User, Some(1)).unwrap();
        let b = verify_torus(&w, &[el(&w, &[1, 1, 0])], Provenance::User, Some(1)).unwrap();
        assert_eq!(rank_via_torus(&a).unwrap(), 1);
        assert_eq!(rank_via_torus(&b).unwrap(), 1);
    }

    #[test]
    fn cartan_subalgebra_examples() {
        let w = build_w(1, 3).unwrap();
        let f = w.field();
        let c = centralizer(&w, &[el(&w, &[0, 1, 0])]).unwrap();
        let (_, embed) = c.parent_embedding().unwrap();
        assert!(is_cartan_subalgebra(&w, embed).unwrap());
        let all: Vec<FpVector> = (0..3).map(|i| FpVector::unit(f, 3, i)).collect();
        assert!(!is_cartan_subalgebra(&w, &all).unwrap());
        assert!(!is_cartan_subalgebra(&w, &[]).unwrap());
    }

    #[test]
    fn registered_ranks_small() {
        for (spec, rank) in [
            (FamilySpec::new(Family::W, 1, 3).unwrap(), 1),
            (FamilySpec::new(Family::Kpp, 3, 3).unwrap(), 3),
            (FamilySpec::new(Family::K, 3, 3).unwrap(), 2),
        ] {
            let g = build(spec).unwrap();
            let reg = registered_torus(spec, &g).unwrap();
            let elems: Vec<Element> = reg
                .coords
                .iter()
                .map(|c| g.element(c.clone()).unwrap())
                .collect();
            let t =
                verify_torus(&g, &elems, Provenance::Registered, Some(reg.mu_reference)).unwrap();
            assert_eq!(rank_via_torus(&t).unwrap(), rank, "{spec}");
        }
    }

    #[test]
    fn semisimple_part_properties() {
        use rand::SeedableRng;
        let g = build(FamilySpec::new(Family::Kpp, 3, 3).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = g.random_element(&mut rng);
            let s = semisimple_part(&g, &x).unwrap();
            assert!(g.bracket(&x, &s).unwrap().is_zero());
            let (_, _, m) = p_power_sequence(&g, s.coords().as_slice()).unwrap();
            let mut y = s.clone();
            for _ in 0..m {
                y = g.p_power(&y).unwrap();
            }
            assert_eq!(y, s);
            let n = g.element(x.coords().sub(s.coords())).unwrap();
            let (seq, k, m) = p_power_sequence(&g, n.coords().as_slice()).unwrap();
            assert!(m == 1 && seq[k].iter().all(|&c| c == 0));
        }
    }
}
