use std::fmt::Debug;
use std::ops::{Add, Mul};

use num_complex::{Complex32, Complex64};

use super::dtype::{dtype_promote, DType};

/// A concrete element type the engine can compute in.
///
/// Every element converts losslessly into `Complex64`, which serves as the
/// common interchange representation. Conversions back to a real type keep
/// the real part.
pub trait Element: Copy + Debug + Add<Output = Self> + Mul<Output = Self> + 'static {
    const DTYPE: DType;

    fn zero() -> Self;
    fn from_c64(value: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
}

impl Element for f32 {
    const DTYPE: DType = DType::R32;

    fn zero() -> Self {
        0.0
    }
    fn from_c64(value: Complex64) -> Self {
        value.re as f32
    }
    fn to_c64(self) -> Complex64 {
        Complex64::new(self as f64, 0.0)
    }
}

impl Element for f64 {
    const DTYPE: DType = DType::R64;

    fn zero() -> Self {
        0.0
    }
    fn from_c64(value: Complex64) -> Self {
        value.re
    }
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Element for Complex32 {
    const DTYPE: DType = DType::C32;

    fn zero() -> Self {
        Complex32::new(0.0, 0.0)
    }
    fn from_c64(value: Complex64) -> Self {
        Complex32::new(value.re as f32, value.im as f32)
    }
    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl Element for Complex64 {
    const DTYPE: DType = DType::C64;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_c64(value: Complex64) -> Self {
        value
    }
    fn to_c64(self) -> Complex64 {
        self
    }
}

/// Round a value to what `dtype` can hold.
pub fn round_to(dtype: DType, value: Complex64) -> Complex64 {
    match dtype {
        DType::R32 => f32::from_c64(value).to_c64(),
        DType::R64 => f64::from_c64(value).to_c64(),
        DType::C32 => Complex32::from_c64(value).to_c64(),
        DType::C64 => value,
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Mul,
}

impl BinOp {
    fn eval<T: Element>(self, x: Complex64, y: Complex64) -> Complex64 {
        let (x, y) = (T::from_c64(x), T::from_c64(y));
        match self {
            BinOp::Add => (x + y).to_c64(),
            BinOp::Mul => (x * y).to_c64(),
        }
    }

    fn eval_in(self, dtype: DType, x: Complex64, y: Complex64) -> Complex64 {
        match dtype {
            DType::R32 => self.eval::<f32>(x, y),
            DType::R64 => self.eval::<f64>(x, y),
            DType::C32 => self.eval::<Complex32>(x, y),
            DType::C64 => self.eval::<Complex64>(x, y),
        }
    }
}

/// A dtype-tagged scalar, used for `alpha`, `beta` and for element values.
///
/// The stored value is always representable in `dtype`; the imaginary part
/// of a real scalar is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarValue {
    dtype: DType,
    re: f64,
    im: f64,
}

impl ScalarValue {
    /// Build a scalar, rounding to `dtype` and dropping `im` for real dtypes.
    pub fn new(dtype: DType, re: f64, im: f64) -> Self {
        Self::from_c64(dtype, Complex64::new(re, im))
    }

    pub fn real(dtype: DType, re: f64) -> Self {
        Self::new(dtype, re, 0.0)
    }

    pub fn from_c64(dtype: DType, value: Complex64) -> Self {
        let v = round_to(dtype, value);
        ScalarValue {
            dtype,
            re: v.re,
            im: v.im,
        }
    }

    pub fn dtype(&self) -> DType {
        self.dtype
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Exactly zero in both components (NaN is not zero).
    pub fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    pub fn cast(&self, dtype: DType) -> Self {
        Self::from_c64(dtype, self.to_c64())
    }

    pub fn add(&self, other: &ScalarValue) -> ScalarValue {
        self.binop(other, BinOp::Add)
    }

    pub fn mul(&self, other: &ScalarValue) -> ScalarValue {
        self.binop(other, BinOp::Mul)
    }

    /// Multiply by a plain real factor, keeping this scalar's dtype.
    pub fn scale(&self, factor: f64) -> ScalarValue {
        self.mul(&ScalarValue::real(self.dtype, factor)).cast(self.dtype)
    }

    fn binop(&self, other: &ScalarValue, op: BinOp) -> ScalarValue {
        let dtype = dtype_promote(self.dtype, other.dtype);
        let value = op.eval_in(dtype, self.to_c64(), other.to_c64());
        ScalarValue::from_c64(dtype, value)
    }
}
