//! Datatypes, scalars, strided tensor descriptors and buffer views.

mod dtype;
mod layout;
mod scalar;
mod view;

pub use dtype::{dtype_promote, dtype_promote_all, DType};
pub use layout::{column_major_strides, element_offset, odometer_increment, row_major_strides, TensorDesc};
pub use scalar::{round_to, Element, ScalarValue};
pub use view::{validate_view, Buffer, BufferMut, BufferRef, TensorView, TensorViewMut};
