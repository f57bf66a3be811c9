//! The document printed by `tapp run`.

use serde::Serialize;

use crate::case::{Case, Number};
use crate::check::{logical_values, EngineRun};

#[derive(Debug, Clone, Serialize)]
pub struct OutputTensor {
    pub dtype: String,
    pub extents: Vec<usize>,
    pub strides: Vec<isize>,
    pub base: usize,
    /// The whole output buffer.
    pub data: Vec<Number>,
    /// D's elements in column-major order of its modes.
    pub values: Vec<Number>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatusDoc {
    pub elapsed_ns: u128,
    pub elements_written: u64,
    pub multiply_adds: u64,
    pub executor: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunDoc {
    pub d: OutputTensor,
    pub status: StatusDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorDoc {
    pub error: &'static str,
    pub code: i32,
    pub message: String,
}

pub fn run_document(case: &Case, run: &EngineRun) -> RunDoc {
    let desc = &case.d.desc;
    let dtype = desc.dtype();
    let numbers = |v: Vec<num_complex::Complex64>| v.into_iter().map(|z| Number::from_c64(dtype, z)).collect();
    RunDoc {
        d: OutputTensor {
            dtype: dtype.name().into(),
            extents: desc.extents().to_vec(),
            strides: desc.strides().to_vec(),
            base: case.d.base,
            data: numbers(run.d.to_c64_vec()),
            values: numbers(logical_values(desc, &run.d, case.d.base)),
        },
        status: StatusDoc {
            elapsed_ns: run.status.elapsed.as_nanos(),
            elements_written: run.status.elements_written,
            multiply_adds: run.status.multiply_adds,
            executor: run.status.executor,
        },
    }
}

pub fn error_document(code: tapp::ErrorCode, message: impl Into<String>) -> ErrorDoc {
    ErrorDoc {
        error: code.name(),
        code: code.as_i32(),
        message: message.into(),
    }
}
