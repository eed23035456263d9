//! JSON envelope shared by every subcommand.

use serde::Serialize;
use serde_json::Value;
use ultragas::exactnum::{format_rational, rational_to_f64};
use ultragas::{BigRational, Error};

pub const SCHEMA_VERSION: u32 = 1;

/// An exact rational next to its double approximation. `rational` is
/// `None` when the value went through a floating point approximation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Number {
    pub rational: Option<String>,
    pub float: f64,
}

impl Number {
    pub fn exact(x: &BigRational) -> Self {
        Number {
            rational: Some(format_rational(x)),
            float: rational_to_f64(x),
        }
    }

    pub fn approximate(x: &BigRational) -> Self {
        Number {
            rational: None,
            float: rational_to_f64(x),
        }
    }

    pub fn new(x: &BigRational, exact: bool) -> Self {
        if exact {
            Self::exact(x)
        } else {
            Self::approximate(x)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::DivisionByZero => "division_by_zero",
            Error::Pole(_) => "pole",
            Error::PoleAtOrigin => "pole_at_origin",
            Error::InvalidQ(_) => "invalid_q",
            Error::SeriesMismatch(_) => "series_mismatch",
            Error::InvalidBall(_) => "invalid_ball",
            Error::Overlap(..) => "overlap",
            Error::NotContained(..) => "not_contained",
            Error::InvalidEvent(_) => "invalid_event",
            Error::ResourceLimit(_) => "resource_limit",
            Error::TruncationTooShort { .. } => "truncation_too_short",
            Error::ToleranceUnattainable { .. } => "tolerance_unattainable",
            Error::PrecisionExhausted(_) => "precision_exhausted",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
        };
        ErrorInfo {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl Envelope {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
