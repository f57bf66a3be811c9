//! Execution of ternary contractions, binary and unary operations over
//! strided views.
//!
//! Every operation is split into a plan, built once from descriptors and
//! labels, and an execution that only needs data. Plans are immutable and
//! may be reused for any number of executions.
//!
//! The contraction follows the classic grouped loop nest: one odometer over
//! the output labels (free and Hadamard indices), an inner odometer over the
//! contracted labels, and per-operand reduction loops over isolated input
//! labels that are summed before multiplication. Every group carries one
//! stride vector per tensor, with zero strides for tensors lacking a label,
//! so Cases 1 through 4 share one code path.

mod binary;
mod contract;
mod plan;
mod unary;

use std::time::Duration;

use crate::error::{ErrorCode, Result, TappError};
use crate::tensor::{element_offset, odometer_increment, Element, TensorDesc, TensorView};

pub use binary::{binary_op, make_binary_plan, BinaryPlan};
pub use contract::contract;
pub use plan::{check_no_aliasing, make_plan, ContractionPlan};
pub use unary::{make_unary_plan, unary_op, UnaryPlan};

/// Execution metadata.
///
/// `multiply_adds` counts accumulated `A * B` products for a contraction and
/// scaled terms (`alpha * ...`, `beta * ...`) for binary and unary
/// operations. Reduction additions are not counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatusRecord {
    pub elapsed: Duration,
    pub elements_written: u64,
    pub multiply_adds: u64,
    pub error: ErrorCode,
    pub executor: Option<u64>,
}

impl StatusRecord {
    pub(crate) fn ok(elapsed: Duration, elements_written: usize, multiply_adds: usize) -> Self {
        StatusRecord {
            elapsed,
            elements_written: elements_written as u64,
            multiply_adds: multiply_adds as u64,
            error: ErrorCode::Ok,
            executor: None,
        }
    }
}

/// The term that is scaled by `beta` and added into the output.
#[derive(Debug, Clone, Copy)]
pub enum Addend<'a> {
    /// Read from a separate tensor.
    Separate(TensorView<'a>),
    /// Read from the output buffer itself before it is overwritten. Requires
    /// the addend's planned descriptor to equal the output's.
    InPlace,
}

/// A set of labels iterated together, with one stride vector per tensor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Loop {
    pub extents: Vec<usize>,
    pub strides: [Vec<isize>; 4],
}

pub(crate) const A: usize = 0;
pub(crate) const B: usize = 1;
pub(crate) const C: usize = 2;
pub(crate) const D: usize = 3;

impl Loop {
    pub fn push(&mut self, extent: usize, strides: [isize; 4]) {
        self.extents.push(extent);
        for (v, s) in self.strides.iter_mut().zip(strides) {
            v.push(s);
        }
    }

    pub fn size(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn offset(&self, tensor: usize, indices: &[usize]) -> isize {
        element_offset(indices, &self.strides[tensor])
    }
}

/// Sum of `view` over every index tuple of `lp`, starting at `start`.
#[inline]
pub(crate) fn reduce<T: Element>(view: &TensorView<'_>, start: isize, lp: &Loop, tensor: usize) -> T {
    if lp.extents.is_empty() {
        return view.load_as(start);
    }
    let mut idx = vec![0; lp.extents.len()];
    let mut acc = T::zero();
    for _ in 0..lp.size() {
        acc = acc + view.load_as(start + lp.offset(tensor, &idx));
        odometer_increment(&mut idx, &lp.extents);
    }
    acc
}

/// The view must describe exactly the planned layout.
pub(crate) fn check_conforms(planned: &TensorDesc, actual: &TensorDesc, name: &str) -> Result<()> {
    if planned.dtype() != actual.dtype() {
        return Err(TappError::DtypeMismatch(format!(
            "{name} was planned as {} but the view holds {}",
            planned.dtype(),
            actual.dtype()
        )));
    }
    if planned != actual {
        return Err(TappError::OutOfBounds(format!(
            "layout of {name} differs from its planned descriptor"
        )));
    }
    Ok(())
}
