//! Reference tensor contraction library.
//!
//! Computes `D := alpha * A * B + beta * C` for tensors with general strided
//! layouts, where the index structure comes from einsum-style label strings.
//! Hadamard (batch) indices, repeated labels (diagonals) and isolated input
//! labels (reductions) are all supported. Binary (`C := alpha * A + beta * B`)
//! and unary (`B := alpha * A`) operations use the same label machinery.
//!
//! ```
//! use tapp::engine::{contract, make_plan, Addend};
//! use tapp::labels::parse_einsum;
//! use tapp::tensor::{DType, ScalarValue, TensorDesc, TensorView, TensorViewMut};
//!
//! let spec = parse_einsum("ij,jk->ik").unwrap();
//! let desc = TensorDesc::column_major(DType::R64, vec![2, 2]).unwrap();
//! let plan = make_plan(&spec, &desc, &desc, &desc, &desc, None).unwrap();
//!
//! // column-major [[1,2],[3,4]] and [[5,6],[7,8]]
//! let a = vec![1.0, 3.0, 2.0, 4.0];
//! let b = vec![5.0, 7.0, 6.0, 8.0];
//! let mut d = vec![0.0; 4];
//! let one = ScalarValue::real(DType::R64, 1.0);
//! let zero = ScalarValue::real(DType::R64, 0.0);
//! contract(
//!     &plan,
//!     one,
//!     &TensorView::new(&desc, &a, 0).unwrap(),
//!     &TensorView::new(&desc, &b, 0).unwrap(),
//!     zero,
//!     Addend::InPlace,
//!     &mut TensorViewMut::new(&desc, &mut d, 0).unwrap(),
//! )
//! .unwrap();
//! assert_eq!(d, [19.0, 43.0, 22.0, 50.0]);
//! ```
//!
//! Modules, bottom up: [`tensor`] (dtypes, descriptors, views), [`labels`]
//! (parsing and classification), [`engine`] (plans and execution),
//! [`oracle`] (brute-force reference for testing) and [`api`] (handles,
//! descriptors, status objects and key-value stores).

pub mod api;
pub mod engine;
pub mod error;
pub mod labels;
pub mod oracle;
pub mod tensor;

pub use error::{error_string, ErrorCode, Result, TappError};

// The guide under book/ is compiled as doctests so its snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/layouts.md")]
    mod layouts {}
    #[doc = include_str!("../../../book/src/labels.md")]
    mod labels {}
    #[doc = include_str!("../../../book/src/contraction.md")]
    mod contraction {}
    #[doc = include_str!("../../../book/src/precision.md")]
    mod precision {}
    #[doc = include_str!("../../../book/src/api.md")]
    mod api {}
    #[doc = include_str!("../../../book/src/conformance.md")]
    mod conformance {}
}
