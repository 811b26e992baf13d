//! The JSON state-tuple document.
//!
//! ```json
//! {
//!   "version": 1,
//!   "dim": 2,
//!   "states": [
//!     {"type": "pure", "amplitudes": [[0.7071, 0.0], [0.7071, 0.0]]},
//!     {"type": "mixed", "rho": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
//!   ],
//!   "labels": ["plus", "mixed"]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Parsing preserves the document
//! verbatim (serialize ∘ parse is value-identical); validation happens when
//! the document is converted to a state tuple.

use bargmann_core::nalgebra;
use bargmann_core::num_complex::Complex64;
use bargmann_core::states::{MixedState, PureState, StateTuple, TupleState};
use bargmann_core::Error as CoreError;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleDocument {
    pub version: u32,
    pub dim: usize,
    pub states: Vec<StateDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum StateDoc {
    Pure { amplitudes: Vec<[f64; 2]> },
    Mixed { rho: Vec<Vec<[f64; 2]>> },
}

impl TupleDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: TupleDocument = serde_json::from_str(text)
            .map_err(|e| CliError::Parse(format!("invalid tuple document: {e}")))?;
        if doc.version != DOCUMENT_VERSION {
            return Err(CliError::Parse(format!(
                "unsupported document version {} (expected {DOCUMENT_VERSION})",
                doc.version
            )));
        }
        Ok(doc)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Validates and converts to a state tuple; errors carry the field path.
    pub fn to_tuple(&self) -> Result<StateTuple, CliError> {
        let mut members = Vec::with_capacity(self.states.len());
        for (k, state) in self.states.iter().enumerate() {
            let member = match state {
                StateDoc::Pure { amplitudes } => {
                    if amplitudes.len() != self.dim {
                        return Err(field_error(
                            k,
                            "amplitudes",
                            CoreError::DimensionMismatch {
                                expected: self.dim,
                                actual: amplitudes.len(),
                            },
                        ));
                    }
                    let amps: Vec<Complex64> =
                        amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                    TupleState::Pure(
                        PureState::new(amps).map_err(|e| field_error(k, "amplitudes", e))?,
                    )
                }
                StateDoc::Mixed { rho } => {
                    if rho.len() != self.dim || rho.iter().any(|row| row.len() != self.dim) {
                        return Err(field_error(
                            k,
                            "rho",
                            CoreError::DimensionMismatch { expected: self.dim, actual: rho.len() },
                        ));
                    }
                    let m = nalgebra_matrix(rho, self.dim);
                    TupleState::Mixed(MixedState::new(m).map_err(|e| field_error(k, "rho", e))?)
                }
            };
            members.push(member);
        }
        StateTuple::new(members).map_err(CliError::Validation)
    }
}

fn nalgebra_matrix(rows: &[Vec<[f64; 2]>], dim: usize) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_fn(dim, dim, |i, j| {
        let [re, im] = rows[i][j];
        Complex64::new(re, im)
    })
}

fn field_error(state_index: usize, field: &str, err: CoreError) -> CliError {
    CliError::Validation(bargmann_core::Error::InvalidArgument(format!(
        "states[{state_index}].{field}: {err}"
    )))
}
