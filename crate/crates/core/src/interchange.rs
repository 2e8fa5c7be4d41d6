//! JSON forms of algebras, elements and modules.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartanfam::FamilySpec;
use crate::ffla::{FpMatrix, FpVector, PrimeField, SparseMatrix, SparseVec};
use crate::liealg::{LieError, RealizedAlgebra};
use crate::repmod::{check_restricted_module, ModuleError, RestrictedModule};

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid data: {0}")]
    Invalid(String),
    #[error("structure constants in the file disagree with its realization: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

pub type Terms = Vec<(usize, u32)>;
pub type Triplets = Vec<(usize, usize, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationJson {
    pub m: usize,
    pub matrices: Vec<Triplets>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub p: u32,
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    /// `[i, j, [[k, c], …]]` for i < j with nonzero bracket.
    pub bracket: Vec<(usize, usize, Terms)>,
    /// `[i, [[k, c], …]]` for every basis element.
    pub pmap: Vec<(usize, Terms)>,
    pub realization: Option<RealizationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub algebra: String,
    pub coords: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub algebra: String,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    pub action: Vec<Triplets>,
}

fn terms(v: &SparseVec) -> Terms {
    v.entries().to_vec()
}

pub fn algebra_to_json(g: &RealizedAlgebra, torus: Option<&[FpVector]>) -> AlgebraJson {
    let realization = g.basis_matrices().map(|(m, mats)| RealizationJson {
        m,
        matrices: mats.iter().map(SparseMatrix::triplets).collect(),
    });
    AlgebraJson {
        p: g.p(),
        name: g.name().to_owned(),
        dim: g.dim(),
        labels: g.labels().to_vec(),
        bracket: g
            .bracket_table()
            .map(|(i, j, c)| (i, j, terms(c)))
            .collect(),
        pmap: g
            .pmap_table()
            .iter()
            .enumerate()
            .map(|(i, c)| (i, terms(c)))
            .collect(),
        realization,
        torus: torus.map(|t| t.iter().map(|v| v.as_slice().to_vec()).collect()),
    }
}

fn check_residues(
    p: u32,
    it: impl IntoIterator<Item = u32>,
    what: &str,
) -> Result<(), InterchangeError> {
    if let Some(c) = it.into_iter().find(|&c| c >= p) {
        return Err(InterchangeError::Invalid(format!(
            "{what}: entry {c} is not reduced mod {p}"
        )));
    }
    Ok(())
}

/// Rebuilds the algebra from its realization and checks that the recorded
/// structure constants and p-map agree with it.
pub fn algebra_from_json(
    json: &AlgebraJson,
) -> Result<(Arc<RealizedAlgebra>, Option<Vec<FpVector>>), InterchangeError> {
    let field = PrimeField::new(json.p).map_err(|e| InterchangeError::Invalid(e.to_string()))?;
    let real = json.realization.as_ref().ok_or_else(|| {
        InterchangeError::Invalid(
            "algebra has no realization (quotients cannot be reloaded)".into(),
        )
    })?;
    if real.matrices.len() != json.dim || json.labels.len() != json.dim {
        return Err(InterchangeError::Invalid(format!(
            "dim {} but {} matrices and {} labels",
            json.dim,
            real.matrices.len(),
            json.labels.len()
        )));
    }
    let mut mats = Vec::with_capacity(real.matrices.len());
    for (k, t) in real.matrices.iter().enumerate() {
        if let Some(&(r, c, _)) = t.iter().find(|&&(r, c, _)| r >= real.m || c >= real.m) {
            return Err(InterchangeError::Invalid(format!(
                "matrix {k}: entry ({r},{c}) outside {0}x{0}",
                real.m
            )));
        }
        check_residues(json.p, t.iter().map(|e| e.2), "realization")?;
        mats.push(SparseMatrix::from_triplets(field, real.m, t));
    }
    let g =
        RealizedAlgebra::from_matrices(json.p, json.name.clone(), mats, Some(json.labels.clone()))?;

    for (i, j, t) in &json.bracket {
        if i >= j || *j >= json.dim {
            return Err(InterchangeError::Invalid(format!(
                "bracket index pair ({i},{j})"
            )));
        }
        check_residues(json.p, t.iter().map(|e| e.1), "bracket")?;
    }
    let file_brackets: Vec<(usize, usize, Terms)> = json.bracket.clone();
    let computed: Vec<(usize, usize, Terms)> = g
        .bracket_table()
        .map(|(i, j, c)| (i, j, terms(c)))
        .collect();
    if file_brackets != computed {
        return Err(InterchangeError::Mismatch("bracket".into()));
    }
    let computed_pmap: Vec<(usize, Terms)> = g
        .pmap_table()
        .iter()
        .enumerate()
        .map(|(i, c)| (i, terms(c)))
        .collect();
    if json.pmap != computed_pmap {
        return Err(InterchangeError::Mismatch("pmap".into()));
    }
    let torus = match &json.torus {
        None => None,
        Some(t) => {
            let mut out = Vec::with_capacity(t.len());
            for v in t {
                if v.len() != json.dim {
                    return Err(InterchangeError::Invalid("torus vector length".into()));
                }
                check_residues(json.p, v.iter().copied(), "torus")?;
                out.push(FpVector::from_residues(field, v.clone()));
            }
            Some(out)
        }
    };
    Ok((g, torus))
}

pub fn parse_algebra(
    text: &str,
) -> Result<(Arc<RealizedAlgebra>, Option<Vec<FpVector>>), InterchangeError> {
    algebra_from_json(&serde_json::from_str(text)?)
}

/// The family member an algebra name and modulus denote, if any.
pub fn family_of(name: &str, p: u32) -> Option<FamilySpec> {
    format!("{name}@{p}").parse().ok()
}

pub fn module_to_json(v: &RestrictedModule, algebra_id: &str) -> ModuleJson {
    ModuleJson {
        algebra: algebra_id.to_owned(),
        dim_v: v.dim(),
        action: v
            .action()
            .iter()
            .map(|m| m.to_sparse().triplets())
            .collect(),
    }
}

/// Loads a module over `g`, re-checking the module axioms.
pub fn module_from_json(
    g: &Arc<RealizedAlgebra>,
    json: &ModuleJson,
) -> Result<RestrictedModule, InterchangeError> {
    let n = json.dim_v;
    let mut mats = Vec::with_capacity(json.action.len());
    for t in &json.action {
        check_residues(g.p(), t.iter().map(|e| e.2), "action")?;
        let mut m = FpMatrix::zeros(g.field(), n, n);
        for &(r, c, v) in t {
            if r >= n || c >= n {
                return Err(InterchangeError::Invalid(format!(
                    "action entry ({r},{c}) outside {n}x{n}"
                )));
            }
            m.set(r, c, v);
        }
        mats.push(m);
    }
    Ok(check_restricted_module(g, mats)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartanfam::{build_w, Family};
    use crate::repmod::density_module;

    #[test]
    fn algebra_round_trip() {
        let w = build_w(1, 3).unwrap();
        let torus = vec![FpVector::unit(w.field(), 3, 1)];
        let json = algebra_to_json(&w, Some(&torus));
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.starts_with(r#"{"p":3,"name":"W(1)","dim":3,"labels":"#));
        let (g, t) = parse_algebra(&text).unwrap();
        assert_eq!(algebra_to_json(&g, t.as_deref()), json);
        assert_eq!(
            family_of(g.name(), g.p()),
            Some(FamilySpec::new(Family::W, 1, 3).unwrap())
        );
    }

    #[test]
    fn tampered_constants_rejected() {
        let w = build_w(1, 3).unwrap();
        let mut json = algebra_to_json(&w, None);
        json.bracket[0].2[0].1 = (json.bracket[0].2[0].1 + 1) % 3;
        assert!(matches!(
            algebra_from_json(&json),
            Err(InterchangeError::Mismatch(_))
        ));
        json.realization = None;
        assert!(matches!(
            algebra_from_json(&json),
            Err(InterchangeError::Invalid(_))
        ));
        assert!(parse_algebra("{not json").is_err());
    }

    #[test]
    fn module_round_trip() {
        let v = density_module(5, 2).unwrap();
        let json = module_to_json(&v, "W(1)@5");
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains(r#""dimV":5"#));
        let back = module_from_json(v.algebra(), &serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.action(), v.action());
    }
}
