//! Engine execution through the handle API, the oracle path, and their
//! comparison.

use num_complex::Complex64;
use serde::Serialize;
use tapp::api::{
    tapp_create_contraction, tapp_create_handle, tapp_create_tensor_info, tapp_destroy_handle, tapp_execute_product,
    tapp_get_default_executor, DataMut, DataRef, Status, TensorInfo,
};
use tapp::engine::StatusRecord;
use tapp::labels::Label;
use tapp::oracle::{
    check_output_aliasing, check_output_shape, densify, max_relative_error, oracle_contract, DenseTensor, LabeledTensor,
};
use tapp::tensor::{element_offset, odometer_increment, Buffer, TensorDesc};
use tapp::{ErrorCode, Result, TappError};

use crate::case::{Case, Operand};

/// Output of one engine run.
#[derive(Debug, Clone)]
pub struct EngineRun {
    pub d: Buffer,
    pub status: StatusRecord,
}

fn info(handle: &tapp::api::Handle, desc: &TensorDesc) -> std::result::Result<TensorInfo, ErrorCode> {
    let extents: Vec<i64> = desc.extents().iter().map(|&e| e as i64).collect();
    let strides: Vec<i64> = desc.strides().iter().map(|&s| s as i64).collect();
    let mut out = None;
    match tapp_create_tensor_info(handle, desc.dtype(), desc.nmodes(), &extents, &strides, &mut out) {
        ErrorCode::Ok => Ok(out.expect("created")),
        code => Err(code),
    }
}

/// Execute the case through a fresh handle. Errors are reported as the
/// [`ErrorCode`] returned by the failing call.
pub fn run_engine(case: &Case) -> std::result::Result<EngineRun, ErrorCode> {
    let mut handle = None;
    let code = tapp_create_handle(&mut handle);
    if !code.is_ok() {
        return Err(code);
    }
    let result = run_with(handle.as_ref().expect("created"), case);
    tapp_destroy_handle(&mut handle);
    result
}

fn run_with(handle: &tapp::api::Handle, case: &Case) -> std::result::Result<EngineRun, ErrorCode> {
    let [ia, ib, ic, id] = [&case.a, &case.b, &case.c, &case.d].map(|op| info(handle, &op.desc));
    let (ia, ib, ic, id) = (ia?, ib?, ic?, id?);
    let (la, lb, ld) = (case.labels_a(), case.labels_b(), case.labels_d());
    let mut plan = None;
    let code = tapp_create_contraction(handle, (&ia, &la), (&ib, &lb), (&ic, &ld), (&id, &ld), None, &mut plan);
    if !code.is_ok() {
        return Err(code);
    }
    let mut exec = None;
    let code = tapp_get_default_executor(handle, &mut exec);
    if !code.is_ok() {
        return Err(code);
    }
    let mut d = case.d.buffer.clone();
    let mut status: Option<Status> = None;
    let code = tapp_execute_product(
        plan.as_ref().expect("created"),
        exec.as_ref().expect("created"),
        case.alpha,
        DataRef::new(case.a.buffer.as_ref(), case.a.base),
        DataRef::new(case.b.buffer.as_ref(), case.b.base),
        case.beta,
        Some(DataRef::new(case.c.buffer.as_ref(), case.c.base)),
        DataMut::new(d.as_mut(), case.d.base),
        Some(&mut status),
    );
    if !code.is_ok() {
        return Err(code);
    }
    Ok(EngineRun {
        d,
        status: status.expect("requested").record().clone(),
    })
}

fn labeled(op: &Operand, labels: &[Label]) -> Result<LabeledTensor> {
    densify(&op.desc, op.buffer.as_ref(), op.base, labels)
}

/// Evaluate the case with the reference oracle. Validation mirrors the
/// engine so that invalid cases fail with the same error code.
pub fn run_oracle(case: &Case) -> Result<DenseTensor> {
    check_output_shape(&case.c.desc, &case.d.desc)?;
    let a = labeled(&case.a, &case.spec.a)?;
    let b = labeled(&case.b, &case.spec.b)?;
    let c = labeled(&case.c, &case.spec.d)?;
    let d = labeled(&case.d, &case.spec.d)?;
    if d.tensor.extents != c.tensor.extents {
        return Err(TappError::OutputMismatch(
            "C and D disagree on their merged extents".into(),
        ));
    }
    check_output_aliasing(&case.d.desc, &case.spec.d)?;
    let complex_scalar = case.alpha.im() != 0.0 || case.beta.im() != 0.0;
    if complex_scalar && case.dtypes().iter().all(|d| !d.is_complex()) {
        return Err(TappError::DtypeMismatch(
            "complex scalar with nonzero imaginary part applied to real tensors".into(),
        ));
    }
    oracle_contract(&a, &b, &c, case.alpha, case.beta, case.d.desc.dtype())
}

/// Engine output over D's distinct labels, column-major.
pub fn engine_dense(case: &Case, d: &Buffer) -> Result<Vec<Complex64>> {
    Ok(densify(&case.d.desc, d.as_ref(), case.d.base, &case.spec.d)?
        .tensor
        .elements)
}

/// D's values over its modes in column-major order, read through its layout.
pub fn logical_values(desc: &TensorDesc, buffer: &Buffer, base: usize) -> Vec<Complex64> {
    let mut idx = vec![0; desc.nmodes()];
    (0..desc.size())
        .map(|_| {
            let offset = base as isize + element_offset(&idx, desc.strides());
            odometer_increment(&mut idx, desc.extents());
            buffer.as_ref().load(offset as usize)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CheckOutcome {
    /// Engine and oracle agree within tolerance.
    Pass { max_rel_error: f64, tolerance: f64 },
    /// Both paths reject the case with the same code.
    Rejected {
        #[serde(serialize_with = "ser_code")]
        code: ErrorCode,
    },
    Mismatch {
        max_rel_error: f64,
        tolerance: f64,
        position: Option<usize>,
        engine: Option<[f64; 2]>,
        oracle: Option<[f64; 2]>,
    },
    /// The two paths disagree on whether, or how, the case fails.
    ErrorDisagreement {
        #[serde(serialize_with = "ser_opt_code")]
        engine: Option<ErrorCode>,
        #[serde(serialize_with = "ser_opt_code")]
        oracle: Option<ErrorCode>,
    },
}

impl CheckOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckOutcome::Pass { .. })
    }

    /// Process exit code: 0 on pass, the shared or engine error code on
    /// rejection, 1 on numeric mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            CheckOutcome::Pass { .. } => 0,
            CheckOutcome::Rejected { code } => code.as_i32(),
            CheckOutcome::Mismatch { .. } => 1,
            CheckOutcome::ErrorDisagreement { engine, .. } => engine.map_or(1, |c| c.as_i32()),
        }
    }
}

/// Serialize an [`ErrorCode`] as its name, e.g. `"ERR_ALIASING"`.
pub fn ser_code<S: serde::Serializer>(code: &ErrorCode, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(code.name())
}

fn ser_opt_code<S: serde::Serializer>(code: &Option<ErrorCode>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match code {
        Some(code) => s.serialize_str(code.name()),
        None => s.serialize_none(),
    }
}

/// Compare engine and oracle on one case. `perturb` shifts every expected
/// value by `p * max(|v|, 1)` to exercise the failure path.
pub fn check_case(case: &Case, tolerance: f64, perturb: f64) -> CheckOutcome {
    let engine = run_engine(case);
    let oracle = run_oracle(case);
    match (engine, oracle) {
        (Ok(run), Ok(expected)) => {
            let actual = match engine_dense(case, &run.d) {
                Ok(v) => v,
                Err(e) => {
                    return CheckOutcome::ErrorDisagreement {
                        engine: Some(e.code()),
                        oracle: None,
                    }
                }
            };
            let expected: Vec<Complex64> = expected
                .elements
                .iter()
                .map(|&v| v + perturb * v.norm().max(1.0))
                .collect();
            let (err, position) = max_relative_error(&actual, &expected);
            if err <= tolerance {
                CheckOutcome::Pass {
                    max_rel_error: err,
                    tolerance,
                }
            } else {
                let pair = |v: &[Complex64]| position.and_then(|p| v.get(p)).map(|z| [z.re, z.im]);
                CheckOutcome::Mismatch {
                    max_rel_error: err,
                    tolerance,
                    position,
                    engine: pair(&actual),
                    oracle: pair(&expected),
                }
            }
        }
        (Err(e), Err(o)) if e == o.code() => CheckOutcome::Rejected { code: e },
        (e, o) => CheckOutcome::ErrorDisagreement {
            engine: e.err(),
            oracle: o.err().map(|o| o.code()),
        },
    }
}
