use std::fmt;

use thiserror::Error;

/// Parameter fields subject to range checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Pi1,
    Pi2,
    F1,
    F2,
    Alpha,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Pi1 => "pi1",
            Field::Pi2 => "pi2",
            Field::F1 => "f1",
            Field::F2 => "f2",
            Field::Alpha => "alpha",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    OutOfRange {
        field: Field,
        value: f64,
        expected: &'static str,
    },
    NotFinite {
        field: Field,
    },
}

impl Violation {
    pub fn field(&self) -> Field {
        match self {
            Violation::OutOfRange { field, .. } | Violation::NotFinite { field } => *field,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { field, value, expected } => {
                write!(f, "OutOfRange({field}): {value} not in {expected}")
            }
            Violation::NotFinite { field } => write!(f, "OutOfRange({field}): not a finite number"),
        }
    }
}

/// Every constraint a raw parameter set violates. Never partially applied.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ParamError {
    pub violations: Vec<Violation>,
}

impl ParamError {
    pub fn fields(&self) -> Vec<Field> {
        self.violations.iter().map(Violation::field).collect()
    }
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("{0}")]
    RegimeMismatch(String),
    #[error("{0}")]
    DegenerateFormula(String),
    #[error("{0}")]
    MalformedProfile(String),
    #[error("{0}")]
    Boundary(String),
    #[error("{0}")]
    InvalidArgument(String),
}

impl GameError {
    /// Stable error name printed on the diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            GameError::Params(_) => "OutOfRange",
            GameError::RegimeMismatch(_) => "RegimeMismatch",
            GameError::DegenerateFormula(_) => "DegenerateFormula",
            GameError::MalformedProfile(_) => "MalformedProfile",
            GameError::Boundary(_) => "Boundary",
            GameError::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
