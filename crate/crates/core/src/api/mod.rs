//! Handle-based object layer.
//!
//! Entry points follow a C-style convention: each `tapp_*` function returns
//! an [`ErrorCode`](crate::ErrorCode) and writes results through `&mut
//! Option<T>` out-parameters. Destroy functions take the slot and reset it to
//! `None`, the uninitialized value. Every object type implements
//! [`KeyValue`] and can store arbitrary bytes under integral keys.
//!
//! There is a single serial back-end; handles still scope every object so
//! that objects from different handles cannot be mixed.

mod execute;
mod handle;
mod objects;
mod vkv;

pub use crate::error::error_string as tapp_error_string;
pub use execute::{tapp_execute_binary, tapp_execute_product, tapp_execute_unary, DataMut, DataRef};
pub use handle::{tapp_create_handle, tapp_destroy_handle, tapp_get_default_executor, Executor, Handle};
pub use objects::{
    tapp_create_binary, tapp_create_contraction, tapp_create_tensor_info, tapp_create_unary, tapp_destroy_tensor_info,
    BinaryDescriptor, ContractionDescriptor, Operand, Status, TensorInfo, UnaryDescriptor,
};
pub use vkv::{tapp_create_attr, tapp_vkv_get, tapp_vkv_set, Attr, KeyValue, VkvStore};
