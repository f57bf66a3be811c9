//! The JSON case-file format.
//!
//! ```json
//! {
//!   "einsum": "ij,jk->ik",
//!   "alpha": 1.0,
//!   "beta": [0.5, 0.0],
//!   "a": { "dtype": "r64", "extents": [2, 2], "data": [1, 3, 2, 4] },
//!   "b": { "dtype": "r64", "extents": [2, 2], "strides": [2, 1], "base": 0, "data": [5, 6, 7, 8] },
//!   "d": { "dtype": "r64", "extents": [2, 2] }
//! }
//! ```
//!
//! Scalars and complex elements are either a bare number or a `[re, im]`
//! pair. Strides default to column-major, `base` to 0. `c` is optional and
//! defaults to zeros laid out like `d`. The output buffer of `d` is sized to
//! the span its layout reaches; when `base` is omitted for `d` the smallest
//! base that keeps every offset non-negative is used.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tapp::labels::{labels_to_string, parse_einsum, LabelSpec};
use tapp::tensor::{column_major_strides, Buffer, DType, ScalarValue, TensorDesc};
use tapp::{Result, TappError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Real(f64),
    Complex([f64; 2]),
}

impl Number {
    pub fn to_c64(self) -> Complex64 {
        match self {
            Number::Real(x) => Complex64::new(x, 0.0),
            Number::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    /// A bare number for real dtypes, a pair otherwise.
    pub fn from_c64(dtype: DType, v: Complex64) -> Number {
        if dtype.is_complex() {
            Number::Complex([v.re, v.im])
        } else {
            Number::Real(v.re)
        }
    }

    fn scalar(self) -> ScalarValue {
        match self {
            Number::Real(x) => ScalarValue::real(DType::R64, x),
            Number::Complex([re, im]) => ScalarValue::new(DType::C64, re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorSpec {
    pub dtype: String,
    pub extents: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strides: Option<Vec<isize>>,
    #[serde(default)]
    pub base: usize,
    pub data: Vec<Number>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub dtype: String,
    pub extents: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strides: Option<Vec<isize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub einsum: String,
    pub alpha: Number,
    pub beta: Number,
    pub a: TensorSpec,
    pub b: TensorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<TensorSpec>,
    pub d: OutputSpec,
}

/// A tensor operand ready for execution.
#[derive(Debug, Clone, PartialEq)]
pub struct Operand {
    pub desc: TensorDesc,
    pub buffer: Buffer,
    pub base: usize,
}

/// A parsed, materialized case.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub spec: LabelSpec,
    pub alpha: ScalarValue,
    pub beta: ScalarValue,
    pub a: Operand,
    pub b: Operand,
    pub c: Operand,
    pub d: Operand,
}

impl Case {
    pub fn einsum(&self) -> String {
        self.spec.to_string()
    }

    pub fn dtypes(&self) -> [DType; 4] {
        [&self.a, &self.b, &self.c, &self.d].map(|o| o.desc.dtype())
    }

    pub fn labels_a(&self) -> String {
        labels_to_string(&self.spec.a)
    }

    pub fn labels_b(&self) -> String {
        labels_to_string(&self.spec.b)
    }

    pub fn labels_d(&self) -> String {
        labels_to_string(&self.spec.d)
    }

    /// Default comparison tolerance: 1e-12 when every operand is 64-bit,
    /// 1e-4 otherwise.
    pub fn default_tolerance(&self) -> f64 {
        if self.dtypes().iter().all(|d| d.component_bits() == 64) {
            1e-12
        } else {
            1e-4
        }
    }
}

fn desc_from(dtype: &str, extents: &[usize], strides: Option<&Vec<isize>>) -> Result<TensorDesc> {
    let dtype: DType = dtype.parse()?;
    let strides = strides.cloned().unwrap_or_else(|| column_major_strides(extents));
    TensorDesc::new(dtype, extents.to_vec(), strides)
}

impl TensorSpec {
    fn materialize(&self) -> Result<Operand> {
        let desc = desc_from(&self.dtype, &self.extents, self.strides.as_ref())?;
        let values: Vec<Complex64> = self.data.iter().map(|n| n.to_c64()).collect();
        Ok(Operand {
            buffer: Buffer::from_c64(desc.dtype(), &values),
            desc,
            base: self.base,
        })
    }

    pub fn from_operand(op: &Operand) -> TensorSpec {
        let dtype = op.desc.dtype();
        TensorSpec {
            dtype: dtype.name().to_string(),
            extents: op.desc.extents().to_vec(),
            strides: Some(op.desc.strides().to_vec()),
            base: op.base,
            data: op
                .buffer
                .to_c64_vec()
                .into_iter()
                .map(|v| Number::from_c64(dtype, v))
                .collect(),
        }
    }
}

impl OutputSpec {
    fn materialize(&self) -> Result<Operand> {
        let desc = desc_from(&self.dtype, &self.extents, self.strides.as_ref())?;
        let (lo, hi) = desc.offset_range();
        let base = match self.base {
            Some(b) => b,
            None => (-lo) as usize,
        };
        let len = (base as isize + hi + 1).max(1) as usize;
        Ok(Operand {
            buffer: Buffer::zeros(desc.dtype(), len),
            desc,
            base,
        })
    }
}

impl CaseSpec {
    pub fn from_json(text: &str) -> Result<CaseSpec> {
        serde_json::from_str(text).map_err(|e| TappError::Parse(format!("case file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("case specs always serialize")
    }

    pub fn materialize(&self) -> Result<Case> {
        let spec = parse_einsum(&self.einsum)?;
        let a = self.a.materialize()?;
        let b = self.b.materialize()?;
        let d = self.d.materialize()?;
        let c = match &self.c {
            Some(c) => c.materialize()?,
            None => Operand {
                desc: d.desc.clone(),
                buffer: Buffer::zeros(d.desc.dtype(), d.buffer.len()),
                base: d.base,
            },
        };
        Ok(Case {
            spec,
            alpha: self.alpha.scalar(),
            beta: self.beta.scalar(),
            a,
            b,
            c,
            d,
        })
    }
}
