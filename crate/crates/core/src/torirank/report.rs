use std::sync::Arc;

use serde::Serialize;

use crate::cartanfam::{build, registered_torus, FamilySpec};
use crate::liealg::{Element, RealizedAlgebra};

use super::{
    mu_search, rank_via_torus, verify_torus, weight_decomposition, Provenance, Torus, TorusError,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ClaimValue {
    Int(i64),
    Bool(bool),
    List(Vec<i64>),
}

impl From<usize> for ClaimValue {
    fn from(v: usize) -> Self {
        ClaimValue::Int(v as i64)
    }
}

impl From<i64> for ClaimValue {
    fn from(v: i64) -> Self {
        ClaimValue::Int(v)
    }
}

impl From<Vec<usize>> for ClaimValue {
    fn from(v: Vec<usize>) -> Self {
        ClaimValue::List(v.into_iter().map(|x| x as i64).collect())
    }
}

impl From<bool> for ClaimValue {
    fn from(v: bool) -> Self {
        ClaimValue::Bool(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// One checked claim: `computed` compared to `expected` by exact equality,
/// or by `computed <= expected` when `relation` is `"<="`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimRecord {
    pub claim: String,
    pub expected: ClaimValue,
    pub computed: ClaimValue,
    pub status: Status,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
}

impl ClaimRecord {
    pub fn equal(
        claim: impl Into<String>,
        expected: impl Into<ClaimValue>,
        computed: impl Into<ClaimValue>,
        source: impl Into<String>,
    ) -> Self {
        let (expected, computed) = (expected.into(), computed.into());
        Self {
            claim: claim.into(),
            status: if expected == computed {
                Status::Pass
            } else {
                Status::Fail
            },
            expected,
            computed,
            source: source.into(),
            relation: None,
        }
    }

    pub fn at_most(
        claim: impl Into<String>,
        bound: i64,
        computed: i64,
        source: impl Into<String>,
    ) -> Self {
        Self {
            claim: claim.into(),
            expected: ClaimValue::Int(bound),
            computed: ClaimValue::Int(computed),
            status: if computed <= bound {
                Status::Pass
            } else {
                Status::Fail
            },
            source: source.into(),
            relation: Some("<=".into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    /// Run `mu_search` with this (seed, budget).
    pub search: Option<(u64, usize)>,
    /// Compute the weight decomposition even for non-simple families.
    pub force_weights: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub algebra: String,
    pub dim: usize,
    pub mu_reference: usize,
    pub mu_searched: Option<usize>,
    pub rank: usize,
    pub dim_tor: usize,
    pub zero_weight_dim: Option<usize>,
    pub root_space_dim: Option<usize>,
    pub nonzero_weight_dims_equal: Option<bool>,
    pub self_centralizing: bool,
    pub torus: Vec<String>,
    pub claims: Vec<ClaimRecord>,
    pub warnings: Vec<String>,
}

impl InvariantReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(ClaimRecord::passed)
    }
}

/// The registered torus of `spec` inside `g`, machine-verified.
pub fn registered_torus_checked(
    spec: FamilySpec,
    g: &Arc<RealizedAlgebra>,
) -> Result<Torus, TorusError> {
    let reg = registered_torus(spec, g)?;
    let elems: Vec<Element> = reg
        .coords
        .iter()
        .map(|c| g.element(c.clone()))
        .collect::<Result<_, _>>()?;
    verify_torus(g, &elems, Provenance::Registered, Some(reg.mu_reference))
}

pub fn invariant_report(
    spec: FamilySpec,
    options: ReportOptions,
) -> Result<InvariantReport, TorusError> {
    let g = build(spec)?;
    let t = registered_torus_checked(spec, &g)?;
    invariant_report_for(spec, &g, &t, options)
}

/// max{m : m·q < dim}
fn root_bound(q: usize, dim: usize) -> usize {
    if q == 0 {
        return 0;
    }
    (dim - 1) / q
}

pub fn invariant_report_for(
    spec: FamilySpec,
    g: &Arc<RealizedAlgebra>,
    torus: &Torus,
    options: ReportOptions,
) -> Result<InvariantReport, TorusError> {
    let id = |what: &str| format!("{what}({})@p{}", spec.name(), spec.p());
    let dim = g.dim();
    let mu = torus.dim();
    let rank = rank_via_torus(torus)?;
    let mu_ref = spec.reference_mu();
    let mut claims = vec![
        ClaimRecord::equal(
            id("dim"),
            spec.reference_dim(),
            dim,
            "dim from the family formula",
        ),
        ClaimRecord::equal(
            id("mu"),
            mu_ref,
            mu,
            "mu from the family formula; registered torus size",
        ),
        ClaimRecord::equal(
            id("rk"),
            spec.reference_rank(),
            rank,
            "rk from the family formula; dim C(t)",
        ),
        ClaimRecord::equal(
            id("dimTor"),
            spec.reference_dim() - spec.reference_rank(),
            dim - rank,
            "dim Tor = dim - rk",
        ),
        ClaimRecord::equal(
            id("selfcentralizing"),
            spec.reference_rank() == mu_ref,
            rank == mu,
            "self-centralizing iff rk = mu",
        ),
    ];
    let mut warnings = Vec::new();

    let (mut zero_dim, mut root_dim, mut equal) = (None, None, None);
    if spec.family().is_simple() || options.force_weights {
        let dec = weight_decomposition(g.field(), dim, &torus.ad_matrices())?;
        zero_dim = Some(dec.zero_weight_dim());
        claims.push(ClaimRecord::equal(
            id("weight0"),
            rank,
            dec.zero_weight_dim(),
            "g_0 = C(t)",
        ));
        let common = dec.common_nonzero_dim();
        equal = Some(common.is_some());
        root_dim = common;
        if spec.family().is_simple() {
            let q = (g.p() as usize).pow(mu as u32) - 1;
            let d = common.map_or(-1, |d| d as i64);
            claims.push(ClaimRecord::equal(
                id("rootdims_equal"),
                true,
                common.is_some(),
                "nonzero weight spaces have equal dimension",
            ));
            claims.push(ClaimRecord::equal(
                id("rootdim"),
                root_bound(q, dim),
                d,
                "dim g_a = max{m : m(p^mu - 1) < dim g}",
            ));
            claims.push(ClaimRecord::equal(
                id("root_identity"),
                dim as i64,
                rank as i64 + q as i64 * d,
                "dim g = rk + (p^mu - 1) dim g_a",
            ));
        }
    }

    let mut mu_searched = None;
    if let Some((seed, budget)) = options.search {
        let found = mu_search(g, seed, budget)?.dim();
        mu_searched = Some(found);
        claims.push(ClaimRecord::at_most(
            id("mu_search"),
            mu_ref as i64,
            found as i64,
            "searched torus dimension is a lower bound for mu",
        ));
        if found < mu_ref {
            warnings.push(format!(
                "{}: search found a torus of dimension {found} < mu = {mu_ref} (seed {seed}, budget {budget})",
                spec
            ));
        }
    }

    claims.sort_by(|a, b| a.claim.cmp(&b.claim));
    Ok(InvariantReport {
        algebra: spec.to_string(),
        dim,
        mu_reference: mu_ref,
        mu_searched,
        rank,
        dim_tor: dim - rank,
        zero_weight_dim: zero_dim,
        root_space_dim: root_dim,
        nonzero_weight_dims_equal: equal,
        self_centralizing: rank == mu,
        torus: torus
            .basis()
            .iter()
            .map(|t| g.describe(t.coords().as_slice()))
            .collect(),
        claims,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartanfam::Family;

    fn report(f: Family, n: usize, p: u32) -> InvariantReport {
        invariant_report(FamilySpec::new(f, n, p).unwrap(), ReportOptions::default()).unwrap()
    }

    #[test]
    fn k3_p3() {
        let r = report(Family::K, 3, 3);
        assert!(r.all_pass(), "{:?}", r.claims);
        assert_eq!(
            (r.dim, r.rank, r.root_space_dim, r.self_centralizing),
            (26, 2, Some(3), true)
        );
    }

    #[test]
    fn h2_p3() {
        let r = report(Family::H, 2, 3);
        assert!(r.all_pass(), "{:?}", r.claims);
        assert_eq!((r.dim, r.rank, r.self_centralizing), (7, 1, true));
    }

    #[test]
    fn root_bound_values() {
        assert_eq!(root_bound(2, 7), 3);
        assert_eq!(root_bound(24, 125), 5);
        assert_eq!(root_bound(8, 52), 6);
    }
}
