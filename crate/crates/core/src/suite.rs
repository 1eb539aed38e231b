//! Name-based registry of every randomized law check.

use serde::Serialize;

use crate::derivation::{check_deriv_law, DerivLaw};
use crate::error::{Error, Result};
use crate::hilbert::{Complex, Operator};
use crate::kerner::check_reconstruction;
use crate::operator::{check_op_law, OpLaw};
use crate::report::{CheckParams, CheckReport};
use crate::symmetry::{
    check_isometry_action, check_linear_map_action, check_similarity_action, check_unitary_action, cocycle_check,
    projective_rep_check, CocycleReport, ProjectiveRep, ProjectiveRepReport,
};
use crate::vector::{check_law, VecLaw};

/// Target dimension of the tall isometries in `hom-isometry`, as an offset
/// from the source dimension (2 maps into 5).
pub const ISOMETRY_EXTRA_DIM: usize = 3;

/// Laws with a [`CheckReport`] beyond the vector and operator families.
pub const OTHER_LAWS: [&str; 8] = [
    "hom-unitary",
    "hom-isometry",
    "hom-scaled",
    "hom-op-action",
    "gen-leibniz",
    "distributivity",
    "derivation",
    "kerner-reconstruction",
];

/// Laws whose report is specific to finite groups.
pub const GROUP_LAWS: [&str; 2] = ["cocycle", "projective-rep"];

pub fn law_names() -> Vec<&'static str> {
    VecLaw::ALL
        .iter()
        .map(|l| l.name())
        .chain(OpLaw::ALL.iter().map(|l| l.name()))
        .chain(OTHER_LAWS)
        .chain(GROUP_LAWS)
        .collect()
}

pub fn unknown_law(name: &str) -> Error {
    Error::UnknownLaw {
        name: name.to_string(),
        valid: law_names().join(", "),
    }
}

/// Outcome of a registry run.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum LawOutcome {
    Check(CheckReport),
    Cocycle(CocycleReport),
    ProjectiveRep(ProjectiveRepReport),
}

impl LawOutcome {
    pub fn pass(&self) -> bool {
        match self {
            LawOutcome::Check(r) => r.pass,
            LawOutcome::Cocycle(r) => r.pass,
            LawOutcome::ProjectiveRep(r) => r.pass,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        match self {
            LawOutcome::Check(r) => r.to_json_value(),
            other => serde_json::to_value(other).expect("report serializes"),
        }
    }

    pub fn summary(&self) -> String {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        match self {
            LawOutcome::Check(r) => r.summary(),
            LawOutcome::Cocycle(r) => format!(
                "{verdict} cocycle order={} triples={} residual={:.3e}",
                r.order, r.triples, r.cocycle_residual
            ),
            LawOutcome::ProjectiveRep(r) => format!(
                "{verdict} projective-rep dim={} product_residual={:.3e} hom_residual={:.3e} first_failure={:?}",
                r.dim, r.product_residual, r.hom_residual, r.first_failure
            ),
        }
    }
}

/// Runs the law `name`. Group laws use `rep` (default: the Pauli
/// representation of ℤ₂ × ℤ₂) and ignore `params.dim`.
pub fn run_law(name: &str, params: &CheckParams, rep: Option<&ProjectiveRep>) -> Result<LawOutcome> {
    if let Ok(law) = name.parse::<VecLaw>() {
        return check_law(law, params).map(LawOutcome::Check);
    }
    if let Ok(law) = name.parse::<OpLaw>() {
        return check_op_law(law, params).map(LawOutcome::Check);
    }
    if let Ok(law) = name.parse::<DerivLaw>() {
        return check_deriv_law(law, params).map(LawOutcome::Check);
    }
    let default_rep;
    let rep = match rep {
        Some(r) => r,
        None => {
            default_rep = ProjectiveRep::pauli_klein_four();
            &default_rep
        }
    };
    let report = match name {
        "hom-unitary" => check_unitary_action(params)?,
        "hom-isometry" => check_isometry_action(params, params.dim + ISOMETRY_EXTRA_DIM)?,
        "hom-scaled" => {
            let two = Operator::identity(params.dim).scale(Complex::new(2.0, 0.0));
            check_linear_map_action("hom-scaled", two.as_matrix(), params)?
        }
        "hom-op-action" => check_similarity_action(params)?,
        "kerner-reconstruction" => check_reconstruction(params)?,
        "cocycle" => return Ok(LawOutcome::Cocycle(cocycle_check(rep.cocycle(), &params.tol))),
        "projective-rep" => {
            return projective_rep_check(rep, params.trials, params.seed, &params.tol).map(LawOutcome::ProjectiveRep)
        }
        _ => return Err(unknown_law(name)),
    };
    Ok(LawOutcome::Check(report))
}
