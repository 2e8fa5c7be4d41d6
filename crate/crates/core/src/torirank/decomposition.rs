use serde::Serialize;

use crate::ffla::{canonical_basis, intersect_spans, FpVector};
use crate::liealg::{centralizer, is_p_nilpotent, Element, Ideal, RealizedAlgebra};

use super::oracle::brute_force_mu;
use super::{ClaimRecord, Torus, TorusError};

/// Reference values of μ for the pieces that the oracle cannot reach.
#[derive(Clone, Copy, Debug, Default)]
pub struct DecompositionInput {
    pub ideal_mu: Option<usize>,
    pub quotient_mu: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub name: String,
    pub mu_g: usize,
    pub mu_n: usize,
    pub mu_quotient: usize,
    pub rk_g: usize,
    pub rk_n: usize,
    pub rk_quotient: usize,
    pub rk_t_plus_n: usize,
    pub dim_quotient: usize,
    pub quotient_p_nilpotent: bool,
    pub claims: Vec<ClaimRecord>,
    pub notes: Vec<String>,
}

impl DecompositionReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(ClaimRecord::passed)
    }
}

fn certify_mu(
    alg: &RealizedAlgebra,
    reference: Option<usize>,
    what: &str,
) -> Result<usize, TorusError> {
    if let Some(r) = reference {
        return Ok(r);
    }
    match brute_force_mu(alg, 2) {
        Ok(2) => Err(TorusError::PreconditionUnverifiable(format!(
            "mu({what}) is at least 2, beyond the oracle's cap"
        ))),
        Ok(m) => Ok(m),
        Err(TorusError::TooLarge(bound)) => Err(TorusError::PreconditionUnverifiable(format!(
            "mu({what}) needs enumeration of {bound} elements"
        ))),
        Err(e) => Err(e),
    }
}

fn centralizer_dim(
    alg: &std::sync::Arc<RealizedAlgebra>,
    vectors: &[FpVector],
) -> Result<usize, TorusError> {
    let elems: Vec<Element> = vectors
        .iter()
        .map(|v| alg.element(v.clone()))
        .collect::<Result<_, _>>()?;
    Ok(centralizer(alg, &elems)?.dim())
}

/// Checks μ additivity, the maximality of t ∩ n and of the image of t,
/// the rank inequality and identity, and (for p-nilpotent quotients) the
/// corollary, for a p-ideal `ideal` and a maximal torus `torus` of g.
pub fn verify_decomposition_theorems(
    name: &str,
    ideal: &Ideal,
    torus: &Torus,
    input: DecompositionInput,
) -> Result<DecompositionReport, TorusError> {
    let g = ideal.algebra();
    if torus.algebra().id() != g.id() {
        return Err(TorusError::Lie(crate::liealg::LieError::MixedAlgebras));
    }
    let mu_g = torus.mu_reference().ok_or_else(|| {
        TorusError::PreconditionUnverifiable("torus carries no reference value of mu".into())
    })?;
    if torus.dim() != mu_g {
        return Err(TorusError::PreconditionUnverifiable(format!(
            "torus has dimension {} but mu = {mu_g}",
            torus.dim()
        )));
    }
    if !ideal.is_p_ideal() {
        return Err(TorusError::Lie(crate::liealg::LieError::NotPIdeal(
            name.into(),
        )));
    }
    let f = g.field();
    let t = torus.coords();

    // n and t ∩ n
    let n_alg = RealizedAlgebra::subalgebra(g, format!("n in {}", g.name()), ideal.basis())?;
    let t_cap_n = intersect_spans(f, g.dim(), &t, ideal.basis());
    let t_cap_n_local: Vec<FpVector> = t_cap_n
        .iter()
        .map(|v| n_alg.coords_from_parent(v).expect("t ∩ n lies in n"))
        .collect();
    let mu_n = certify_mu(&n_alg, input.ideal_mu, "n")?;
    let rk_n = centralizer_dim(&n_alg, &t_cap_n_local)?;

    // g/n and the image of t
    let q = RealizedAlgebra::quotient(ideal, format!("{}/n", g.name()))?;
    let t_bar = canonical_basis(
        f,
        q.dim(),
        &t.iter()
            .map(|v| q.project_from_parent(v).expect("quotient"))
            .collect::<Vec<_>>(),
    );
    let mu_q = certify_mu(&q, input.quotient_mu, "g/n")?;
    let rk_q = centralizer_dim(&q, &t_bar)?;
    let q_nil = is_p_nilpotent(&q)?;

    // t + n
    let mut span = t.clone();
    span.extend(ideal.basis().iter().cloned());
    let tn = RealizedAlgebra::subalgebra(g, "t+n", &span)?;
    let t_local: Vec<FpVector> = t
        .iter()
        .map(|v| tn.coords_from_parent(v).expect("t lies in t+n"))
        .collect();
    let rk_tn = centralizer_dim(&tn, &t_local)?;

    let rk_g = centralizer_dim(g, &t)?;

    let id = |what: &str| format!("decomposition[{name}].{what}");
    let mut claims = vec![
        ClaimRecord::equal(
            id("lemma1_t_cap_n_maximal"),
            mu_n,
            t_cap_n.len(),
            "dim(t ∩ n) = mu(n)",
        ),
        ClaimRecord::equal(
            id("lemma1_image_maximal"),
            mu_q,
            t_bar.len(),
            "dim((t+n)/n) = mu(g/n)",
        ),
        ClaimRecord::equal(
            id("lemma2_mu_additivity"),
            mu_g,
            mu_n + mu_q,
            "mu(g) = mu(n) + mu(g/n)",
        ),
        ClaimRecord::at_most(
            id("prop1_rank_bound"),
            (rk_n + rk_q) as i64,
            rk_g as i64,
            "rk(g) <= rk(n) + rk(g/n)",
        ),
        ClaimRecord::equal(
            id("prop2_rank_identity"),
            rk_g as i64,
            rk_tn as i64 + rk_q as i64 - mu_q as i64,
            "rk(g) = rk(t+n) + rk(g/n) - mu(g/n)",
        ),
    ];
    let mut notes = Vec::new();
    if q_nil {
        claims.push(ClaimRecord::equal(
            id("cor_quotient_mu_zero"),
            0usize,
            mu_q,
            "g/n p-nilpotent iff mu(g/n) = 0",
        ));
        claims.push(ClaimRecord::equal(
            id("cor_mu"),
            mu_g,
            mu_n,
            "mu(g) = mu(n)",
        ));
        claims.push(ClaimRecord::equal(
            id("cor_rank"),
            rk_g,
            rk_n + q.dim(),
            "rk(g) = rk(n) + dim g/n",
        ));
    } else {
        notes.push(format!(
            "{name}: g/n is not p-nilpotent; corollary not applicable"
        ));
    }
    claims.sort_by(|a, b| a.claim.cmp(&b.claim));
    Ok(DecompositionReport {
        name: name.to_owned(),
        mu_g,
        mu_n,
        mu_quotient: mu_q,
        rk_g,
        rk_n,
        rk_quotient: rk_q,
        rk_t_plus_n: rk_tn,
        dim_quotient: q.dim(),
        quotient_p_nilpotent: q_nil,
        claims,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartanfam::{build_k_family, build_w, Family, FamilySpec};
    use crate::ffla::{FpMatrix, PrimeField};
    use crate::torirank::report::registered_torus_checked;
    use crate::torirank::{verify_torus, Provenance};

    #[test]
    fn kpp_over_k() {
        let (kpp, k) = build_k_family(3, 3).unwrap();
        let spec = FamilySpec::new(Family::Kpp, 3, 3).unwrap();
        let t = registered_torus_checked(spec, &kpp).unwrap();
        let ideal = Ideal::from_subalgebra(&kpp, &k).unwrap();
        let r = verify_decomposition_theorems(
            "K''(3),K(3)",
            &ideal,
            &t,
            DecompositionInput {
                ideal_mu: Some(2),
                quotient_mu: None,
            },
        )
        .unwrap();
        assert!(r.all_pass(), "{:?}", r.claims);
        assert_eq!((r.rk_g, r.rk_n, r.rk_quotient, r.rk_t_plus_n), (3, 2, 1, 2));
        assert!(r.quotient_p_nilpotent);
    }

    #[test]
    fn whole_algebra() {
        let w = build_w(1, 3).unwrap();
        let f = w.field();
        let t = verify_torus(&w, &[w.basis_element(1)], Provenance::Registered, Some(1)).unwrap();
        let all: Vec<FpVector> = (0..3).map(|i| FpVector::unit(f, 3, i)).collect();
        let ideal = Ideal::new(&w, &all).unwrap();
        let r = verify_decomposition_theorems("g,g", &ideal, &t, DecompositionInput::default())
            .unwrap();
        assert!(r.all_pass(), "{:?}", r.claims);
        assert_eq!((r.mu_quotient, r.rk_g, r.rk_n), (0, 1, 1));
    }

    #[test]
    fn witt_plus_nilpotent_line() {
        let w = build_w(1, 3).unwrap();
        let k = PrimeField::new(3).unwrap();
        let nil = RealizedAlgebra::from_dense_matrices(
            "k_nil",
            &[FpMatrix::from_i64(k, &[vec![0, 1], vec![0, 0]])],
            None,
        )
        .unwrap();
        let g = RealizedAlgebra::direct_sum(&w, &nil, "W(1)+k_nil").unwrap();
        let t = verify_torus(&g, &[g.basis_element(1)], Provenance::Registered, Some(1)).unwrap();
        let ideal = Ideal::new(&g, &[FpVector::unit(k, 4, 3)]).unwrap();
        let r = verify_decomposition_theorems(
            "W(1)+k_nil,k_nil",
            &ideal,
            &t,
            DecompositionInput::default(),
        )
        .unwrap();
        assert!(r.all_pass(), "{:?}", r.claims);
        assert_eq!((r.mu_g, r.mu_n, r.mu_quotient, r.rk_g), (1, 0, 1, 2));
        assert!(!r.quotient_p_nilpotent);
    }
}
