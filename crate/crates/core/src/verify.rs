//! The regression table behind `verify-paper`: independent cases, each
//! producing claim records, assembled into one report sorted by claim id.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartanfam::{build, build_h_family, build_k_family, build_w, Family, FamilySpec};
use crate::ffla::{FpMatrix, FpVector, PrimeField};
use crate::liealg::{centralizer, Ideal, RealizedAlgebra};
use crate::repmod::{
    composition_factors, density_module, split_off_simple_ideal, trivial_factor_check,
    RestrictedModule,
};
use crate::torirank::{
    brute_force_mu, invariant_report_for, mu_search, registered_torus_checked,
    verify_decomposition_theorems, verify_torus, ClaimRecord, ClaimValue, DecompositionInput,
    Provenance, ReportOptions, Status, TorusError,
};

/// Largest algebra dimension the table will build.
pub const DIM_CAP: usize = 1250;
/// Algebras up to this dimension also get a randomized torus search.
pub const SEARCH_DIM_CAP: usize = 30;
pub const SEARCH_BUDGET: usize = 200;
pub const PROPERTY_SAMPLES: usize = 100;

#[derive(Clone, Debug, Default, Serialize)]
pub struct CaseOutcome {
    pub claims: Vec<ClaimRecord>,
    pub warnings: Vec<String>,
}

type Runner = Box<dyn Fn(u64) -> Result<CaseOutcome, String> + Send + Sync>;

pub struct VerificationCase {
    pub id: String,
    run: Runner,
}

impl VerificationCase {
    fn new(
        id: impl Into<String>,
        run: impl Fn(u64) -> Result<CaseOutcome, String> + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            run: Box::new(run),
        }
    }

    /// Runs the case; an internal error becomes a failing claim.
    pub fn run(&self, seed: u64) -> CaseOutcome {
        match (self.run)(seed) {
            Ok(o) => o,
            Err(e) => CaseOutcome {
                claims: vec![ClaimRecord::equal(
                    format!("{}.completed", self.id),
                    true,
                    false,
                    "case ran to completion",
                )],
                warnings: vec![format!("{}: {e}", self.id)],
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub p_list: Vec<u32>,
    pub max_n: usize,
    pub seed: u64,
    pub summary: Summary,
    pub claims: Vec<ClaimRecord>,
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.claim == id)
    }
}

pub fn assemble(
    p_list: &[u32],
    max_n: usize,
    seed: u64,
    outcomes: Vec<CaseOutcome>,
) -> VerificationReport {
    let mut claims: Vec<ClaimRecord> = Vec::new();
    let mut warnings = Vec::new();
    for o in outcomes {
        claims.extend(o.claims);
        warnings.extend(o.warnings);
    }
    claims.sort_by(|a, b| a.claim.cmp(&b.claim));
    warnings.sort();
    let passed = claims.iter().filter(|c| c.status == Status::Pass).count();
    VerificationReport {
        p_list: p_list.to_vec(),
        max_n,
        seed,
        summary: Summary {
            total: claims.len(),
            passed,
            failed: claims.len() - passed,
        },
        claims,
        warnings,
    }
}

/// Runs every case in order on the current thread.
pub fn verify_paper(p_list: &[u32], max_n: usize, seed: u64) -> VerificationReport {
    let outcomes = paper_cases(p_list, max_n)
        .iter()
        .map(|c| c.run(seed))
        .collect();
    assemble(p_list, max_n, seed, outcomes)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Every family member with n ≤ `max_n` and dimension ≤ [`DIM_CAP`].
pub fn family_members(p: u32, max_n: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for n in 1..=max_n {
            if let Ok(spec) = FamilySpec::new(family, n, p) {
                if spec.reference_dim() <= DIM_CAP {
                    out.push(spec);
                }
            }
        }
    }
    out
}

pub fn paper_cases(p_list: &[u32], max_n: usize) -> Vec<VerificationCase> {
    let mut cases = Vec::new();
    for &p in p_list {
        for spec in family_members(p, max_n) {
            cases.push(VerificationCase::new(
                format!("family[{spec}]"),
                move |seed| family_case(spec, seed),
            ));
        }
        cases.push(VerificationCase::new(
            format!("decomposition[W(1)]@p{p}"),
            move |_| witt_decompositions(p),
        ));
        if max_n >= 2 {
            cases.push(VerificationCase::new(
                format!("decomposition[H'(2),H(2)]@p{p}"),
                move |_| hamiltonian_decomposition(p),
            ));
        }
        if max_n >= 3 && 6 % p == 0 {
            cases.push(VerificationCase::new(
                format!("decomposition[K''(3),K(3)]@p{p}"),
                move |_| contact_decomposition(p),
            ));
        }
        cases.push(VerificationCase::new(
            format!("modules[W(1)]@p{p}"),
            move |seed| density_table(p, seed),
        ));
        cases.push(VerificationCase::new(
            format!("oracle[W(1)]@p{p}"),
            move |seed| oracle_case(Family::W, 1, p, seed),
        ));
        if max_n >= 2 {
            cases.push(VerificationCase::new(
                format!("oracle[H(2)]@p{p}"),
                move |seed| oracle_case(Family::H, 2, p, seed),
            ));
        }
        cases.push(VerificationCase::new(
            format!("premet[W(1)]@p{p}"),
            move |_| premet_case(p),
        ));
        cases.push(VerificationCase::new(
            format!("summand[W(1)]@p{p}"),
            move |_| summand_case(p),
        ));
    }
    cases
}

fn family_case(spec: FamilySpec, seed: u64) -> Result<CaseOutcome, String> {
    let g = build(spec).map_err(err)?;
    let torus = registered_torus_checked(spec, &g).map_err(err)?;
    let search = (g.dim() <= SEARCH_DIM_CAP).then_some((seed, SEARCH_BUDGET));
    let report = invariant_report_for(
        spec,
        &g,
        &torus,
        ReportOptions {
            search,
            force_weights: false,
        },
    )
    .map_err(err)?;
    let mut out = CaseOutcome {
        claims: report.claims,
        warnings: report.warnings,
    };
    out.claims.extend(property_claims(&g, &spec.name(), seed));
    Ok(out)
}

/// Jacobi on random triples and ad(x^[p]) = (ad x)^p on random elements.
pub fn property_claims(g: &RealizedAlgebra, name: &str, seed: u64) -> Vec<ClaimRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        ClaimRecord::equal(
            format!("jacobi({name})@p{}", g.p()),
            true,
            g.check_jacobi(&mut rng, PROPERTY_SAMPLES),
            "Jacobi identity on random triples",
        ),
        ClaimRecord::equal(
            format!("jacobson({name})@p{}", g.p()),
            true,
            g.check_jacobson(&mut rng, PROPERTY_SAMPLES),
            "ad(x^[p]) = (ad x)^p on random elements",
        ),
    ]
}

pub fn nilpotent_line(p: u32) -> Result<Arc<RealizedAlgebra>, String> {
    let k = PrimeField::new(p).map_err(err)?;
    RealizedAlgebra::from_dense_matrices(
        "k_nil",
        &[FpMatrix::from_i64(k, &[vec![0, 1], vec![0, 0]])],
        None,
    )
    .map_err(err)
}

/// W(1) ⊕ k_nil, with W(1) in the first p coordinates.
pub fn witt_plus_nilpotent(p: u32) -> Result<Arc<RealizedAlgebra>, String> {
    let w = build_w(1, p).map_err(err)?;
    RealizedAlgebra::direct_sum(&w, &nilpotent_line(p)?, "W(1)+k_nil").map_err(err)
}

fn suffix(claims: &mut [ClaimRecord], p: u32) {
    for c in claims {
        c.claim = format!("{}@p{p}", c.claim);
    }
}

fn decomposition_outcome(
    name: &str,
    ideal: &Ideal,
    torus: &crate::torirank::Torus,
    input: DecompositionInput,
    p: u32,
) -> Result<CaseOutcome, String> {
    let r = verify_decomposition_theorems(name, ideal, torus, input).map_err(err)?;
    let mut claims = r.claims;
    suffix(&mut claims, p);
    Ok(CaseOutcome {
        claims,
        warnings: r.notes,
    })
}

fn witt_decompositions(p: u32) -> Result<CaseOutcome, String> {
    let w = build_w(1, p).map_err(err)?;
    let f = w.field();
    let t =
        verify_torus(&w, &[w.basis_element(1)], Provenance::Registered, Some(1)).map_err(err)?;
    let all: Vec<FpVector> = (0..w.dim())
        .map(|i| FpVector::unit(f, w.dim(), i))
        .collect();
    let whole = Ideal::new(&w, &all).map_err(err)?;
    let mut out = decomposition_outcome(
        "W(1),W(1)",
        &whole,
        &t,
        DecompositionInput {
            ideal_mu: Some(1),
            quotient_mu: None,
        },
        p,
    )?;

    let g = witt_plus_nilpotent(p)?;
    let t =
        verify_torus(&g, &[g.basis_element(1)], Provenance::Registered, Some(1)).map_err(err)?;
    let nil = Ideal::new(&g, &[FpVector::unit(f, g.dim(), g.dim() - 1)]).map_err(err)?;
    let o = decomposition_outcome(
        "W(1)+k_nil,k_nil",
        &nil,
        &t,
        DecompositionInput {
            ideal_mu: None,
            quotient_mu: Some(1),
        },
        p,
    )?;
    out.claims.extend(o.claims);
    out.warnings.extend(o.warnings);
    Ok(out)
}

fn hamiltonian_decomposition(p: u32) -> Result<CaseOutcome, String> {
    let (hp, h) = build_h_family(1, p).map_err(err)?;
    let spec = FamilySpec::new(Family::HPrime, 2, p).map_err(err)?;
    let t = registered_torus_checked(spec, &hp).map_err(err)?;
    let ideal = Ideal::from_subalgebra(&hp, &h).map_err(err)?;
    let mu_h = FamilySpec::new(Family::H, 2, p)
        .map_err(err)?
        .reference_mu();
    let mut out = decomposition_outcome(
        "H'(2),H(2)",
        &ideal,
        &t,
        DecompositionInput {
            ideal_mu: Some(mu_h),
            quotient_mu: None,
        },
        p,
    )?;
    out.claims.push(ClaimRecord::equal(
        format!("decomposition[H'(2),H(2)].codim@p{p}"),
        1usize,
        hp.dim() - h.dim(),
        "H(2) has codimension 1 in H'(2)",
    ));
    Ok(out)
}

fn contact_decomposition(p: u32) -> Result<CaseOutcome, String> {
    let (kpp, k) = build_k_family(3, p).map_err(err)?;
    let spec = FamilySpec::new(Family::Kpp, 3, p).map_err(err)?;
    let t = registered_torus_checked(spec, &kpp).map_err(err)?;
    let ideal = Ideal::from_subalgebra(&kpp, &k).map_err(err)?;
    let mu_k = FamilySpec::new(Family::K, 3, p)
        .map_err(err)?
        .reference_mu();
    decomposition_outcome(
        "K''(3),K(3)",
        &ideal,
        &t,
        DecompositionInput {
            ideal_mu: Some(mu_k),
            quotient_mu: None,
        },
        p,
    )
}

/// Expected composition-factor dimensions of the density module with weight λ.
pub fn expected_density_factors(p: u32, lambda: u32) -> Vec<usize> {
    let p = p as usize;
    if lambda == 0 || lambda == p as u32 - 1 {
        vec![1, p - 1]
    } else {
        vec![p]
    }
}

fn density_table(p: u32, seed: u64) -> Result<CaseOutcome, String> {
    let mut claims = Vec::new();
    let mut min_nontrivial = usize::MAX;
    for lambda in 0..p {
        let v = density_module(p, lambda).map_err(err)?;
        let comp = composition_factors(&v, seed).map_err(err)?;
        let dims = comp.sorted_dims();
        min_nontrivial = min_nontrivial.min(
            comp.dims
                .iter()
                .zip(&comp.trivial)
                .filter(|(_, &t)| !t)
                .map(|(&d, _)| d)
                .min()
                .unwrap_or(usize::MAX),
        );
        claims.push(ClaimRecord::equal(
            format!("density_factors(W(1),lambda={lambda})@p{p}"),
            expected_density_factors(p, lambda),
            dims,
            "composition factors of the W(1) density modules",
        ));
    }
    claims.push(ClaimRecord::equal(
        format!("min_nontrivial_simple(W(1))@p{p}"),
        p as usize - 1,
        min_nontrivial,
        "smallest nontrivial simple W(1)-module has dimension p^mu - 1",
    ));

    // a module below the bound has only trivial factors, and W(1) is perfect
    let w = build_w(1, p).map_err(err)?;
    let v = RestrictedModule::trivial(&w, p as usize - 2).map_err(err)?;
    let verdict = trivial_factor_check(&v, 1, true, seed).map_err(err)?;
    claims.push(ClaimRecord::equal(
        format!("trivial_factors(W(1),dimV={})@p{p}", p - 2),
        true,
        verdict.consistent() && verdict.perfect,
        "dim V < p^mu - 1 forces trivial factors; perfect g acts by zero",
    ));
    Ok(CaseOutcome {
        claims,
        warnings: vec![],
    })
}

fn oracle_case(family: Family, n: usize, p: u32, seed: u64) -> Result<CaseOutcome, String> {
    let spec = FamilySpec::new(family, n, p).map_err(err)?;
    let g = build(spec).map_err(err)?;
    let tag = spec.name();
    let oracle = match brute_force_mu(&g, 2) {
        Ok(m) => m,
        Err(TorusError::TooLarge(size)) => {
            return Ok(CaseOutcome {
                claims: vec![],
                warnings: vec![format!("oracle({tag})@p{p}: skipped, {size} elements")],
            })
        }
        Err(e) => return Err(err(e)),
    };
    let searched = mu_search(&g, seed, SEARCH_BUDGET).map_err(err)?.dim();
    let mut warnings = Vec::new();
    if searched < oracle {
        warnings.push(format!(
            "mu_search({tag})@p{p}: found {searched} < oracle {oracle}"
        ));
    }
    Ok(CaseOutcome {
        claims: vec![
            ClaimRecord::equal(
                format!("oracle_mu({tag})@p{p}"),
                spec.reference_mu().min(2),
                oracle,
                "exhaustive torus search (capped at 2)",
            ),
            ClaimRecord::at_most(
                format!("oracle_search_bound({tag})@p{p}"),
                oracle as i64,
                searched as i64,
                "searched torus never exceeds the exhaustive value",
            ),
        ],
        warnings,
    })
}

fn premet_case(p: u32) -> Result<CaseOutcome, String> {
    let w = build_w(1, p).map_err(err)?;
    let f = w.field();
    // x∂ and (1+x)∂
    let xd = FpVector::unit(f, w.dim(), 1);
    let shifted = xd.add(&FpVector::unit(f, w.dim(), 0));
    let mut claims = Vec::new();
    for (what, v) in [("x*d1", xd), ("(1+x1)*d1", shifted)] {
        let e = w.element(v).map_err(err)?;
        verify_torus(&w, std::slice::from_ref(&e), Provenance::User, Some(1)).map_err(err)?;
        let c = centralizer(&w, &[e]).map_err(err)?;
        claims.push(ClaimRecord::equal(
            format!("premet(W(1),{what})@p{p}"),
            1usize,
            c.dim(),
            "every maximal torus has centralizer of dimension rk",
        ));
    }
    Ok(CaseOutcome {
        claims,
        warnings: vec![],
    })
}

fn summand_case(p: u32) -> Result<CaseOutcome, String> {
    let g = witt_plus_nilpotent(p)?;
    let f = g.field();
    let h: Vec<FpVector> = (0..p as usize)
        .map(|i| FpVector::unit(f, g.dim(), i))
        .collect();
    let v = split_off_simple_ideal(&g, &h, 1).map_err(err)?;
    let claims = vec![
        ClaimRecord::equal(
            format!("summand(W(1)+k_nil).ideal@p{p}"),
            true,
            v.is_ideal,
            "W(1) is an ideal",
        ),
        ClaimRecord::equal(
            format!("summand(W(1)+k_nil).direct_sum@p{p}"),
            true,
            v.direct_sum,
            "g = C_g(W(1)) + W(1) as a direct sum",
        ),
        ClaimRecord::equal(
            format!("summand(W(1)+k_nil).centralizer_dim@p{p}"),
            1usize,
            v.centralizer.dim(),
            "C_g(W(1)) = k_nil",
        ),
    ];
    Ok(CaseOutcome {
        claims,
        warnings: vec![],
    })
}

/// The computed value of one claim in a finished report.
pub fn claim_value(report: &VerificationReport, id: &str) -> Option<ClaimValue> {
    report.claim(id).map(|c| c.computed.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table_passes() {
        let r = verify_paper(&[3], 2, 0);
        let failed: Vec<_> = r.claims.iter().filter(|c| !c.passed()).collect();
        assert!(failed.is_empty(), "{failed:?}\n{:?}", r.warnings);
        assert_eq!(claim_value(&r, "rk(W(2))@p3"), Some(ClaimValue::Int(2)));
        assert_eq!(
            claim_value(&r, "oracle_mu(H(2))@p3"),
            Some(ClaimValue::Int(1))
        );
        assert!(r.claims.windows(2).all(|w| w[0].claim <= w[1].claim));
    }

    #[test]
    fn case_order_does_not_matter() {
        let cases = paper_cases(&[3], 1);
        let forward: Vec<_> = cases.iter().map(|c| c.run(0)).collect();
        let backward: Vec<_> = cases.iter().rev().map(|c| c.run(0)).collect();
        let a = serde_json::to_string(&assemble(&[3], 1, 0, forward)).unwrap();
        let b = serde_json::to_string(&assemble(&[3], 1, 0, backward)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn density_expectations() {
        assert_eq!(expected_density_factors(5, 0), vec![1, 4]);
        assert_eq!(expected_density_factors(5, 2), vec![5]);
        assert_eq!(expected_density_factors(5, 4), vec![1, 4]);
    }
}
