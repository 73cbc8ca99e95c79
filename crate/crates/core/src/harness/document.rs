//! JSON problem documents and result persistence.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::formats::parse_coupling;
use crate::error::{Error, Result};
use crate::hamiltonians::{HermitianXYProblem, IsingProblem, PottsProblem, XYProblem};
use crate::mappings::{PhaseRetrievalInstance, TspInstance};

/// A spin problem in one of the forms the solvers accept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "problem", rename_all = "snake_case")]
pub enum Problem {
    Ising(IsingProblem),
    #[serde(rename = "xy")]
    XY(XYProblem),
    Potts(PottsProblem),
    #[serde(rename = "hermitian_xy")]
    HermitianXY(HermitianXYProblem),
}

impl Problem {
    pub fn n(&self) -> usize {
        match self {
            Problem::Ising(p) => p.n(),
            Problem::XY(p) => p.n(),
            Problem::Potts(p) => p.n(),
            Problem::HermitianXY(p) => p.n(),
        }
    }

    pub fn kind(&self) -> ProblemType {
        match self {
            Problem::Ising(_) => ProblemType::Ising,
            Problem::XY(_) => ProblemType::XY,
            Problem::Potts(_) => ProblemType::Potts,
            Problem::HermitianXY(_) => ProblemType::HermitianXY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemType {
    Ising,
    #[serde(rename = "xy")]
    XY,
    Potts,
    #[serde(rename = "hermitian_xy")]
    HermitianXY,
}

impl std::fmt::Display for ProblemType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProblemType::Ising => "ising",
            ProblemType::XY => "xy",
            ProblemType::Potts => "potts",
            ProblemType::HermitianXY => "hermitian_xy",
        })
    }
}

/// Where a mapped problem came from, with what is needed to decode it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// `cut = offset − E/2`.
    MaxCut { offset: f64 },
    /// `tour cost = E + offset` on valid tours.
    Tsp { instance: TspInstance, fix_first_city: bool, offset: f64 },
    PhaseRetrieval { instance: PhaseRetrievalInstance, svd_tolerance: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDocument {
    #[serde(flatten)]
    pub problem: Problem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl ProblemDocument {
    pub fn plain(problem: Problem) -> Self {
        ProblemDocument { problem, provenance: None }
    }
}

/// Reads a problem file.
///
/// Files whose first non-blank character is `{` are JSON documents;
/// anything else is a coupling file, read as a field-free problem of type
/// `as_type` (Ising when `None`). A `Potts` reading needs `n_states`.
pub fn load_problem(path: impl AsRef<Path>, as_type: Option<ProblemType>, n_states: usize) -> Result<ProblemDocument> {
    parse_problem(&std::fs::read_to_string(path)?, as_type, n_states)
}

pub fn parse_problem(text: &str, as_type: Option<ProblemType>, n_states: usize) -> Result<ProblemDocument> {
    if text.trim_start().starts_with('{') {
        let doc: ProblemDocument = serde_json::from_str(text)?;
        if let Some(t) = as_type {
            if t != doc.problem.kind() {
                return Err(Error::invalid(format!("document holds a {} problem, not {t}", doc.problem.kind())));
            }
        }
        return Ok(doc);
    }
    let j = parse_coupling(text)?;
    let problem = match as_type.unwrap_or(ProblemType::Ising) {
        ProblemType::Ising => Problem::Ising(IsingProblem::without_field(j)),
        ProblemType::XY => Problem::XY(XYProblem::new(j)),
        ProblemType::Potts => Problem::Potts(PottsProblem::new(j, n_states)?),
        ProblemType::HermitianXY => {
            return Err(Error::invalid("Hermitian XY problems are only read from JSON documents"));
        }
    };
    Ok(ProblemDocument::plain(problem))
}

/// Pretty-printed JSON. Floats are written with enough digits to parse
/// back to the same bits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn save_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn load_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}
