use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ffla::{canonical_basis, combine, FpMatrix, FpVector, SpanSolver, SparseVec};
use crate::liealg::{centralizer, Element, RealizedAlgebra};

use super::{p_power_sequence, semisimple_coords, verify_torus, Provenance, Torus, TorusError};

/// Largest element count the exhaustive oracles will enumerate.
pub const ORACLE_LIMIT: u64 = 10_000_000;

fn element_count(g: &RealizedAlgebra) -> Result<u64, TorusError> {
    (g.p() as u64)
        .checked_pow(g.dim() as u32)
        .filter(|&c| c <= ORACLE_LIMIT)
        .ok_or_else(|| TorusError::TooLarge(format!("{}^{}", g.p(), g.dim())))
}

fn decode(mut k: u64, p: u32, dim: usize) -> Vec<u32> {
    (0..dim)
        .map(|_| {
            let c = (k % p as u64) as u32;
            k /= p as u64;
            c
        })
        .collect()
}

/// Every x with x^[p] = x, including 0.
pub fn brute_force_toral(g: &RealizedAlgebra) -> Result<Vec<Element>, TorusError> {
    let total = element_count(g)?;
    let mut out = Vec::new();
    for k in 0..total {
        let x = decode(k, g.p(), g.dim());
        if g.p_power_coords(&x) == x {
            out.push(g.element(FpVector::from_residues(g.field(), x))?);
        }
    }
    Ok(out)
}

/// The largest d ≤ `cap` (at most 2) such that a d-dimensional torus exists.
pub fn brute_force_mu(g: &RealizedAlgebra, cap: usize) -> Result<usize, TorusError> {
    if cap > 2 {
        return Err(TorusError::PreconditionUnverifiable(format!(
            "torus-dimension search is limited to cap 2, got {cap}"
        )));
    }
    // one representative per line: leading coordinate 1
    let toral: Vec<Vec<u32>> = brute_force_toral(g)?
        .into_iter()
        .map(|e| e.into_coords().into_inner())
        .filter(|x| x.iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    if cap == 0 || toral.is_empty() {
        return Ok(0);
    }
    if cap == 1 {
        return Ok(1);
    }
    // a second torus direction must lie in C(a)
    let lines: HashSet<&[u32]> = toral.iter().map(Vec::as_slice).collect();
    let f = g.field();
    for a in &toral {
        let cent = g.ad_matrix_coords(a).kernel_basis();
        if cent.len() < 2 {
            continue;
        }
        let points = (g.p() as u64)
            .checked_pow(cent.len() as u32)
            .unwrap_or(u64::MAX);
        if points <= toral.len() as u64 {
            for k in 1..points {
                let b = combine(f, g.dim(), &decode(k, g.p(), cent.len()), &cent);
                let lead = b.as_slice().iter().find(|&&c| c != 0).copied();
                if lead == Some(1) && b.as_slice() != a.as_slice() && lines.contains(b.as_slice()) {
                    return Ok(2);
                }
            }
        } else {
            for b in &toral {
                if b != a && g.bracket_coords(a, b).iter().all(|&c| c == 0) {
                    return Ok(2);
                }
            }
        }
    }
    Ok(1)
}

/// Toral elements in the span of the p-orbit of a semisimple `s`.
fn toral_in_orbit(g: &RealizedAlgebra, s: &[u32]) -> Result<Vec<FpVector>, TorusError> {
    let f = g.field();
    let (seq, _, _) = p_power_sequence(g, s)?;
    let orbit: Vec<FpVector> = seq
        .into_iter()
        .map(|v| FpVector::from_residues(f, v))
        .collect();
    let basis = canonical_basis(f, g.dim(), &orbit);
    let mut solver = SpanSolver::new(f, g.dim());
    for b in &basis {
        solver.insert(&SparseVec::from_dense(b.as_slice()));
    }
    // matrix of the (linear) p-map on the span, minus the identity
    let k = basis.len();
    let mut m = FpMatrix::zeros(f, k, k);
    for (j, b) in basis.iter().enumerate() {
        let img = solver
            .solve(&SparseVec::from_dense(&g.p_power_coords(b.as_slice())))
            .expect("p-orbit span is p-closed");
        for (i, c) in img.into_iter().enumerate() {
            m.set(i, j, if i == j { f.sub(c, 1) } else { c });
        }
    }
    Ok(m.kernel_basis()
        .into_iter()
        .map(|c| combine(f, g.dim(), c.as_slice(), &basis))
        .collect())
}

/// Greedy randomized search for a large torus: sample in the current
/// centralizer, take semisimple parts, adjoin toral elements that enlarge
/// the span. The result is a certified lower bound for μ.
pub fn mu_search(g: &Arc<RealizedAlgebra>, seed: u64, budget: usize) -> Result<Torus, TorusError> {
    let f = g.field();
    let p = g.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut torus: Vec<FpVector> = Vec::new();
    let mut span = SpanSolver::new(f, g.dim());
    let mut cent: Vec<FpVector> = (0..g.dim())
        .map(|i| FpVector::unit(f, g.dim(), i))
        .collect();
    for _ in 0..budget {
        if cent.len() == torus.len() {
            break;
        }
        let coeffs: Vec<u32> = (0..cent.len()).map(|_| rng.gen_range(0..p)).collect();
        let x = combine(f, g.dim(), &coeffs, &cent);
        let s = semisimple_coords(g, x.as_slice())?;
        if s.iter().all(|&c| c == 0) {
            continue;
        }
        let mut grew = false;
        for t in toral_in_orbit(g, &s)? {
            if span.insert(&SparseVec::from_dense(t.as_slice())) {
                torus.push(t);
                grew = true;
            }
        }
        if grew {
            let elems: Vec<Element> = torus
                .iter()
                .map(|t| g.element(t.clone()))
                .collect::<Result<_, _>>()?;
            let c = centralizer(g, &elems)?;
            cent = c.parent_embedding().expect("subalgebra").1.to_vec();
        }
    }
    let elems: Vec<Element> = torus
        .into_iter()
        .map(|t| g.element(t))
        .collect::<Result<_, _>>()?;
    verify_torus(g, &elems, Provenance::Searched, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartanfam::{build, build_w, Family, FamilySpec};
    use crate::ffla::PrimeField;

    #[test]
    fn w1_toral_scan() {
        let w = build_w(1, 3).unwrap();
        let toral: Vec<Vec<u32>> = brute_force_toral(&w)
            .unwrap()
            .into_iter()
            .map(|e| e.into_coords().into_inner())
            .collect();
        assert!(toral.contains(&vec![0, 1, 0]));
        assert!(toral.contains(&vec![1, 1, 0]));
        assert!(!toral.contains(&vec![1, 0, 0]));
        assert!(!toral.contains(&vec![0, 0, 1]));
        assert_eq!(brute_force_mu(&w, 2).unwrap(), 1);
    }

    #[test]
    fn abelian_toral_line() {
        let k = PrimeField::new(5).unwrap();
        let t =
            RealizedAlgebra::from_dense_matrices("k", &[FpMatrix::identity(k, 1)], None).unwrap();
        assert_eq!(brute_force_mu(&t, 2).unwrap(), 1);
        assert_eq!(mu_search(&t, 0, 10).unwrap().dim(), 1);
    }

    #[test]
    fn search_bounded_by_oracle() {
        let w = build_w(1, 3).unwrap();
        for seed in 0..5 {
            assert_eq!(mu_search(&w, seed, 50).unwrap().dim(), 1);
        }
        let h = build(FamilySpec::new(Family::H, 2, 3).unwrap()).unwrap();
        assert_eq!(brute_force_mu(&h, 2).unwrap(), 1);
        assert!(mu_search(&h, 0, 50).unwrap().dim() <= 1);
    }

    #[test]
    fn search_on_kpp3() {
        let g = build(FamilySpec::new(Family::Kpp, 3, 3).unwrap()).unwrap();
        assert_eq!(mu_search(&g, 0, 200).unwrap().dim(), 2);
    }

    #[test]
    fn oracle_refuses_large() {
        let g = build(FamilySpec::new(Family::Kpp, 3, 3).unwrap()).unwrap();
        assert!(matches!(
            brute_force_toral(&g),
            Err(TorusError::TooLarge(_))
        ));
    }
}
