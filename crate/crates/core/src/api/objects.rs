use std::sync::Mutex;

use crate::engine::{
    make_binary_plan, make_plan, make_unary_plan, BinaryPlan, ContractionPlan, StatusRecord, UnaryPlan,
};
use crate::error::ErrorCode;
use crate::labels::{parse_labels, LabelSpec};
use crate::tensor::{DType, TensorDesc};

use super::handle::Handle;
use super::vkv::{KeyValue, VkvStore};

macro_rules! key_value {
    ($($ty:ty),*) => {$(
        impl KeyValue for $ty {
            fn kv(&self) -> &Mutex<VkvStore> {
                &self.kv
            }
        }
    )*};
}

/// Tensor descriptor registered with a handle.
#[derive(Debug)]
pub struct TensorInfo {
    handle_id: u64,
    desc: TensorDesc,
    kv: Mutex<VkvStore>,
}

impl TensorInfo {
    pub fn desc(&self) -> &TensorDesc {
        &self.desc
    }

    pub fn handle_id(&self) -> u64 {
        self.handle_id
    }
}

/// Reusable contraction descriptor.
#[derive(Debug)]
pub struct ContractionDescriptor {
    pub(crate) handle_id: u64,
    pub(crate) plan: ContractionPlan,
    kv: Mutex<VkvStore>,
}

impl ContractionDescriptor {
    pub fn plan(&self) -> &ContractionPlan {
        &self.plan
    }
}

/// Reusable binary-operation descriptor.
#[derive(Debug)]
pub struct BinaryDescriptor {
    pub(crate) handle_id: u64,
    pub(crate) plan: BinaryPlan,
    kv: Mutex<VkvStore>,
}

impl BinaryDescriptor {
    pub fn plan(&self) -> &BinaryPlan {
        &self.plan
    }
}

/// Reusable unary-operation descriptor.
#[derive(Debug)]
pub struct UnaryDescriptor {
    pub(crate) handle_id: u64,
    pub(crate) plan: UnaryPlan,
    kv: Mutex<VkvStore>,
}

impl UnaryDescriptor {
    pub fn plan(&self) -> &UnaryPlan {
        &self.plan
    }
}

/// Result metadata of one execution.
#[derive(Debug)]
pub struct Status {
    record: StatusRecord,
    kv: Mutex<VkvStore>,
}

impl Status {
    pub(crate) fn new(record: StatusRecord) -> Self {
        Status {
            record,
            kv: Mutex::new(VkvStore::new()),
        }
    }

    pub fn record(&self) -> &StatusRecord {
        &self.record
    }
}

key_value!(
    TensorInfo,
    ContractionDescriptor,
    BinaryDescriptor,
    UnaryDescriptor,
    Status
);

/// A tensor info together with the labels of its modes, e.g. `(&info, "ijk")`.
pub type Operand<'a> = (&'a TensorInfo, &'a str);

fn check_owned(handle: &Handle, infos: &[&TensorInfo]) -> Result<(), ErrorCode> {
    handle.check()?;
    if infos.iter().any(|info| info.handle_id != handle.id()) {
        return Err(ErrorCode::InvalidHandle);
    }
    Ok(())
}

fn to_code<T>(result: Result<T, ErrorCode>, out: &mut Option<T>) -> ErrorCode {
    match result {
        Ok(value) => {
            *out = Some(value);
            ErrorCode::Ok
        }
        Err(code) => code,
    }
}

/// Register a tensor descriptor. `extents` and `strides` must have `nmodes`
/// entries; extents must be positive.
pub fn tapp_create_tensor_info(
    handle: &Handle,
    dtype: DType,
    nmodes: usize,
    extents: &[i64],
    strides: &[i64],
    out: &mut Option<TensorInfo>,
) -> ErrorCode {
    let result = (|| {
        handle.check()?;
        if extents.len() != nmodes || strides.len() != nmodes || extents.iter().any(|&e| e <= 0) {
            return Err(ErrorCode::ExtentMismatch);
        }
        let desc = TensorDesc::new(
            dtype,
            extents.iter().map(|&e| e as usize).collect(),
            strides.iter().map(|&s| s as isize).collect(),
        )
        .map_err(|e| e.code())?;
        Ok(TensorInfo {
            handle_id: handle.id(),
            desc,
            kv: Mutex::new(VkvStore::new()),
        })
    })();
    to_code(result, out)
}

pub fn tapp_destroy_tensor_info(slot: &mut Option<TensorInfo>) -> ErrorCode {
    match slot.take() {
        Some(_) => ErrorCode::Ok,
        None => ErrorCode::InvalidHandle,
    }
}

/// Plan `D := alpha * A * B + beta * C`.
pub fn tapp_create_contraction(
    handle: &Handle,
    a: Operand<'_>,
    b: Operand<'_>,
    c: Operand<'_>,
    d: Operand<'_>,
    compute_dtype: Option<DType>,
    out: &mut Option<ContractionDescriptor>,
) -> ErrorCode {
    let result = (|| {
        check_owned(handle, &[a.0, b.0, c.0, d.0])?;
        let parse = |s: &str| parse_labels(s).map_err(|e| e.code());
        let spec = LabelSpec::new(parse(a.1)?, parse(b.1)?, parse(c.1)?, parse(d.1)?);
        let plan = make_plan(&spec, &a.0.desc, &b.0.desc, &c.0.desc, &d.0.desc, compute_dtype).map_err(|e| e.code())?;
        Ok(ContractionDescriptor {
            handle_id: handle.id(),
            plan,
            kv: Mutex::new(VkvStore::new()),
        })
    })();
    to_code(result, out)
}

/// Plan `C := alpha * A + beta * B`.
pub fn tapp_create_binary(
    handle: &Handle,
    a: Operand<'_>,
    b: Operand<'_>,
    c: Operand<'_>,
    compute_dtype: Option<DType>,
    out: &mut Option<BinaryDescriptor>,
) -> ErrorCode {
    let result = (|| {
        check_owned(handle, &[a.0, b.0, c.0])?;
        let parse = |s: &str| parse_labels(s).map_err(|e| e.code());
        let plan = make_binary_plan(
            &parse(a.1)?,
            &a.0.desc,
            &parse(b.1)?,
            &b.0.desc,
            &parse(c.1)?,
            &c.0.desc,
            compute_dtype,
        )
        .map_err(|e| e.code())?;
        Ok(BinaryDescriptor {
            handle_id: handle.id(),
            plan,
            kv: Mutex::new(VkvStore::new()),
        })
    })();
    to_code(result, out)
}

/// Plan `B := alpha * A`.
pub fn tapp_create_unary(
    handle: &Handle,
    a: Operand<'_>,
    b: Operand<'_>,
    compute_dtype: Option<DType>,
    out: &mut Option<UnaryDescriptor>,
) -> ErrorCode {
    let result = (|| {
        check_owned(handle, &[a.0, b.0])?;
        let parse = |s: &str| parse_labels(s).map_err(|e| e.code());
        let plan =
            make_unary_plan(&parse(a.1)?, &a.0.desc, &parse(b.1)?, &b.0.desc, compute_dtype).map_err(|e| e.code())?;
        Ok(UnaryDescriptor {
            handle_id: handle.id(),
            plan,
            kv: Mutex::new(VkvStore::new()),
        })
    })();
    to_code(result, out)
}
