use crate::engine::{binary_op, contract, unary_op, Addend, StatusRecord};
use crate::error::{ErrorCode, TappError};
use crate::tensor::{BufferMut, BufferRef, ScalarValue, TensorView, TensorViewMut};

use super::handle::{check_live, Executor};
use super::objects::{BinaryDescriptor, ContractionDescriptor, Status, UnaryDescriptor};

/// Read-only tensor data: a buffer plus the element offset of the tensor's
/// origin within it.
#[derive(Debug, Clone, Copy)]
pub struct DataRef<'a> {
    pub buffer: BufferRef<'a>,
    pub base: usize,
}

impl<'a> DataRef<'a> {
    pub fn new(buffer: impl Into<BufferRef<'a>>, base: usize) -> Self {
        DataRef {
            buffer: buffer.into(),
            base,
        }
    }
}

impl<'a, T: Into<BufferRef<'a>>> From<T> for DataRef<'a> {
    fn from(buffer: T) -> Self {
        DataRef::new(buffer, 0)
    }
}

/// Writable tensor data.
#[derive(Debug)]
pub struct DataMut<'a> {
    pub buffer: BufferMut<'a>,
    pub base: usize,
}

impl<'a> DataMut<'a> {
    pub fn new(buffer: impl Into<BufferMut<'a>>, base: usize) -> Self {
        DataMut {
            buffer: buffer.into(),
            base,
        }
    }
}

impl<'a, T: Into<BufferMut<'a>>> From<T> for DataMut<'a> {
    fn from(buffer: T) -> Self {
        DataMut::new(buffer, 0)
    }
}

fn check_objects(handle_id: u64, executor: &Executor) -> Result<(), ErrorCode> {
    check_live(handle_id)?;
    if executor.handle_id() != handle_id {
        return Err(ErrorCode::InvalidHandle);
    }
    Ok(())
}

fn finish(
    result: Result<StatusRecord, TappError>,
    executor: &Executor,
    status: Option<&mut Option<Status>>,
) -> ErrorCode {
    match result {
        Ok(mut record) => {
            record.executor = Some(executor.id());
            if let Some(slot) = status {
                *slot = Some(Status::new(record));
            }
            ErrorCode::Ok
        }
        Err(err) => err.code(),
    }
}

/// Execute a planned contraction. `c = None` reads C from D's buffer (in-place
/// update); passing `None` for `status` skips status creation.
#[allow(clippy::too_many_arguments)]
pub fn tapp_execute_product(
    descriptor: &ContractionDescriptor,
    executor: &Executor,
    alpha: ScalarValue,
    a: DataRef<'_>,
    b: DataRef<'_>,
    beta: ScalarValue,
    c: Option<DataRef<'_>>,
    d: DataMut<'_>,
    status: Option<&mut Option<Status>>,
) -> ErrorCode {
    if let Err(code) = check_objects(descriptor.handle_id, executor) {
        return code;
    }
    let plan = &descriptor.plan;
    let result = (|| {
        let av = TensorView::new(plan.desc_a(), a.buffer, a.base)?;
        let bv = TensorView::new(plan.desc_b(), b.buffer, b.base)?;
        let addend = match c {
            Some(c) => Addend::Separate(TensorView::new(plan.desc_c(), c.buffer, c.base)?),
            None => Addend::InPlace,
        };
        let mut dv = TensorViewMut::new(plan.desc_d(), d.buffer, d.base)?;
        contract(plan, alpha, &av, &bv, beta, addend, &mut dv)
    })();
    finish(result, executor, status)
}

/// Execute `C := alpha * A + beta * B`; `b = None` reads B from C's buffer.
#[allow(clippy::too_many_arguments)]
pub fn tapp_execute_binary(
    descriptor: &BinaryDescriptor,
    executor: &Executor,
    alpha: ScalarValue,
    a: DataRef<'_>,
    beta: ScalarValue,
    b: Option<DataRef<'_>>,
    c: DataMut<'_>,
    status: Option<&mut Option<Status>>,
) -> ErrorCode {
    if let Err(code) = check_objects(descriptor.handle_id, executor) {
        return code;
    }
    let plan = &descriptor.plan;
    let result = (|| {
        let av = TensorView::new(plan.desc_a(), a.buffer, a.base)?;
        let addend = match b {
            Some(b) => Addend::Separate(TensorView::new(plan.desc_b(), b.buffer, b.base)?),
            None => Addend::InPlace,
        };
        let mut cv = TensorViewMut::new(plan.desc_c(), c.buffer, c.base)?;
        binary_op(plan, alpha, &av, beta, addend, &mut cv)
    })();
    finish(result, executor, status)
}

/// Execute `B := alpha * A`.
pub fn tapp_execute_unary(
    descriptor: &UnaryDescriptor,
    executor: &Executor,
    alpha: ScalarValue,
    a: DataRef<'_>,
    b: DataMut<'_>,
    status: Option<&mut Option<Status>>,
) -> ErrorCode {
    if let Err(code) = check_objects(descriptor.handle_id, executor) {
        return code;
    }
    let plan = &descriptor.plan;
    let result = (|| {
        let av = TensorView::new(plan.desc_a(), a.buffer, a.base)?;
        let mut bv = TensorViewMut::new(plan.desc_b(), b.buffer, b.base)?;
        unary_op(plan, alpha, &av, &mut bv)
    })();
    finish(result, executor, status)
}
