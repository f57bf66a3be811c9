//! Error codes and the library error type.
//!
//! Every failure maps onto a stable integral [`ErrorCode`]. `OK` is zero; the
//! remaining values start at 10 so they never collide with the conventional
//! process exit codes 1 (generic failure) and 2 (usage error) used by the CLI.

use std::fmt;

/// Integral status code returned by every entry point of the [`api`](crate::api) layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(i32)]
pub enum ErrorCode {
    Ok = 0,
    Parse = 10,
    ExtentMismatch = 11,
    OutputMismatch = 12,
    Aliasing = 13,
    Unsupported = 14,
    DtypeMismatch = 15,
    OutOfBounds = 16,
    InvalidHandle = 17,
    KeyNotFound = 18,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 10] = [
        ErrorCode::Ok,
        ErrorCode::Parse,
        ErrorCode::ExtentMismatch,
        ErrorCode::OutputMismatch,
        ErrorCode::Aliasing,
        ErrorCode::Unsupported,
        ErrorCode::DtypeMismatch,
        ErrorCode::OutOfBounds,
        ErrorCode::InvalidHandle,
        ErrorCode::KeyNotFound,
    ];

    pub fn as_i32(self) -> i32 {
        self as i32
    }

    pub fn from_i32(value: i32) -> Option<ErrorCode> {
        Self::ALL.iter().copied().find(|c| c.as_i32() == value)
    }

    pub fn is_ok(self) -> bool {
        self == ErrorCode::Ok
    }

    /// Symbolic name, e.g. `ERR_ALIASING`.
    pub fn name(self) -> &'static str {
        match self {
            ErrorCode::Ok => "OK",
            ErrorCode::Parse => "ERR_PARSE",
            ErrorCode::ExtentMismatch => "ERR_EXTENT_MISMATCH",
            ErrorCode::OutputMismatch => "ERR_OUTPUT_MISMATCH",
            ErrorCode::Aliasing => "ERR_ALIASING",
            ErrorCode::Unsupported => "ERR_UNSUPPORTED",
            ErrorCode::DtypeMismatch => "ERR_DTYPE_MISMATCH",
            ErrorCode::OutOfBounds => "ERR_OUT_OF_BOUNDS",
            ErrorCode::InvalidHandle => "ERR_INVALID_HANDLE",
            ErrorCode::KeyNotFound => "ERR_KEY_NOT_FOUND",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ErrorCode::Ok => "success",
            ErrorCode::Parse => "malformed label string or operation specification",
            ErrorCode::ExtentMismatch => "extents disagree for indices sharing a label",
            ErrorCode::OutputMismatch => "tensor C does not match tensor D",
            ErrorCode::Aliasing => "aliasing within the output tensor: distinct indices share one element",
            ErrorCode::Unsupported => "operation not supported (isolated output indices)",
            ErrorCode::DtypeMismatch => "datatype mismatch between operand and descriptor",
            ErrorCode::OutOfBounds => "tensor layout addresses elements outside its buffer",
            ErrorCode::InvalidHandle => "invalid, destroyed, or foreign object handle",
            ErrorCode::KeyNotFound => "key not present in key-value store",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Plain-text description for any integer code, in the spirit of `strerror`.
///
/// Total: values that are not a defined [`ErrorCode`] map to `"unknown error"`.
pub fn error_string(code: i32) -> &'static str {
    ErrorCode::from_i32(code)
        .map(ErrorCode::description)
        .unwrap_or("unknown error")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TappError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("extent mismatch: {0}")]
    ExtentMismatch(String),
    #[error("output mismatch: {0}")]
    OutputMismatch(String),
    #[error("aliasing in output: {0}")]
    Aliasing(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dtype mismatch: {0}")]
    DtypeMismatch(String),
    #[error("out of bounds: {0}")]
    OutOfBounds(String),
    #[error("invalid handle")]
    InvalidHandle,
    #[error("key {0} not found")]
    KeyNotFound(u64),
}

impl TappError {
    pub fn code(&self) -> ErrorCode {
        match self {
            TappError::Parse(_) => ErrorCode::Parse,
            TappError::ExtentMismatch(_) => ErrorCode::ExtentMismatch,
            TappError::OutputMismatch(_) => ErrorCode::OutputMismatch,
            TappError::Aliasing(_) => ErrorCode::Aliasing,
            TappError::Unsupported(_) => ErrorCode::Unsupported,
            TappError::DtypeMismatch(_) => ErrorCode::DtypeMismatch,
            TappError::OutOfBounds(_) => ErrorCode::OutOfBounds,
            TappError::InvalidHandle => ErrorCode::InvalidHandle,
            TappError::KeyNotFound(_) => ErrorCode::KeyNotFound,
        }
    }
}

impl From<TappError> for ErrorCode {
    fn from(err: TappError) -> ErrorCode {
        err.code()
    }
}

pub type Result<T> = std::result::Result<T, TappError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ok_is_zero_and_codes_distinct() {
        assert_eq!(ErrorCode::Ok.as_i32(), 0);
        let mut seen: Vec<i32> = ErrorCode::ALL.iter().map(|c| c.as_i32()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), ErrorCode::ALL.len());
        for code in ErrorCode::ALL {
            assert_eq!(ErrorCode::from_i32(code.as_i32()), Some(code));
        }
    }

    #[test]
    fn error_string_mapping() {
        assert_eq!(error_string(0), "success");
        assert!(error_string(ErrorCode::Aliasing.as_i32()).contains("alias"));
        assert_eq!(error_string(9999), "unknown error");
        assert_eq!(error_string(-1), "unknown error");
        for code in ErrorCode::ALL {
            assert!(!error_string(code.as_i32()).is_empty());
        }
    }
}
