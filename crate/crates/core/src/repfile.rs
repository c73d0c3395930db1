//! JSON documents describing a linear representation:
//!
//! ```json
//! {"radix": 2, "dim": 2, "initial": ["1", "-1/3"],
//!  "digit_mats": [[["1", "-1/2"], ["0", "-1/2"]], [["-1/2", "0"], ["-1/2", "1"]]],
//!  "final": ["1", "0"]}
//! ```
//!
//! Scalars are fraction strings (bare integers are accepted too). `final`
//! is optional and defaults to `e_1`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Rational};
use crate::linrep::{LinearRep, Representation, ValidationReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub radix: u64,
    pub dim: usize,
    pub initial: Vec<Rational>,
    pub digit_mats: Vec<Vec<Vec<Rational>>>,
    #[serde(rename = "final", default, skip_serializing_if = "Option::is_none")]
    pub final_vec: Option<Vec<Rational>>,
}

impl RepFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("rep file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_rep(rep: &LinearRep) -> Self {
        RepFile {
            radix: rep.radix(),
            dim: rep.dim(),
            initial: rep.initial().entries().to_vec(),
            digit_mats: rep.digit_mats().iter().map(Matrix::to_rows).collect(),
            final_vec: Some(rep.final_vector().entries().to_vec()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    fn shapes_ok(&self) -> bool {
        let d = self.dim;
        d >= 1
            && self.radix >= 2
            && self.digit_mats.len() as u64 == self.radix
            && self.initial.len() == d
            && self.final_vec.as_ref().is_none_or(|f| f.len() == d)
            && self
                .digit_mats
                .iter()
                .all(|m| m.len() == d && m.iter().all(|r| r.len() == d))
    }

    /// Shape and leading-zero checks without building the representation.
    pub fn check(&self) -> ValidationReport {
        match self.to_rep() {
            Ok(rep) => rep.validate(),
            Err(_) => ValidationReport {
                shapes_ok: false,
                leading_zero_invariant: false,
            },
        }
    }

    pub fn to_rep(&self) -> Result<LinearRep> {
        if !self.shapes_ok() {
            return Err(Error::MalformedRep(format!(
                "shapes do not match radix {} and dim {}",
                self.radix, self.dim
            )));
        }
        let d = self.dim;
        let initial = Matrix::row_vector(self.initial.clone())?;
        let mats = self
            .digit_mats
            .iter()
            .map(|m| Matrix::from_rows(m.clone()))
            .collect::<Result<Vec<_>>>()?;
        let final_vec = match &self.final_vec {
            Some(f) => Matrix::column_vector(f.clone())?,
            None => Matrix::basis_column(d, 0),
        };
        LinearRep::with_final(self.radix, initial, mats, final_vec)
    }
}
