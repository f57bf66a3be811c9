use num_complex::{Complex32, Complex64};

use crate::error::{Result, TappError};

use super::dtype::DType;
use super::layout::TensorDesc;
use super::scalar::Element;

/// Owned flat element storage of a single dtype.
#[derive(Debug, Clone, PartialEq)]
pub enum Buffer {
    R32(Vec<f32>),
    R64(Vec<f64>),
    C32(Vec<Complex32>),
    C64(Vec<Complex64>),
}

/// Borrowed read-only storage.
#[derive(Debug, Clone, Copy)]
pub enum BufferRef<'a> {
    R32(&'a [f32]),
    R64(&'a [f64]),
    C32(&'a [Complex32]),
    C64(&'a [Complex64]),
}

/// Borrowed writable storage.
#[derive(Debug)]
pub enum BufferMut<'a> {
    R32(&'a mut [f32]),
    R64(&'a mut [f64]),
    C32(&'a mut [Complex32]),
    C64(&'a mut [Complex64]),
}

impl Buffer {
    pub fn zeros(dtype: DType, len: usize) -> Buffer {
        match dtype {
            DType::R32 => Buffer::R32(vec![0.0; len]),
            DType::R64 => Buffer::R64(vec![0.0; len]),
            DType::C32 => Buffer::C32(vec![Complex32::new(0.0, 0.0); len]),
            DType::C64 => Buffer::C64(vec![Complex64::new(0.0, 0.0); len]),
        }
    }

    /// Build a buffer of `dtype` from interchange values, rounding each.
    pub fn from_c64(dtype: DType, values: &[Complex64]) -> Buffer {
        fn conv<T: Element>(values: &[Complex64]) -> Vec<T> {
            values.iter().map(|&v| T::from_c64(v)).collect()
        }
        match dtype {
            DType::R32 => Buffer::R32(conv(values)),
            DType::R64 => Buffer::R64(conv(values)),
            DType::C32 => Buffer::C32(conv(values)),
            DType::C64 => Buffer::C64(conv(values)),
        }
    }

    pub fn dtype(&self) -> DType {
        self.as_ref().dtype()
    }

    pub fn len(&self) -> usize {
        self.as_ref().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_ref(&self) -> BufferRef<'_> {
        match self {
            Buffer::R32(v) => BufferRef::R32(v),
            Buffer::R64(v) => BufferRef::R64(v),
            Buffer::C32(v) => BufferRef::C32(v),
            Buffer::C64(v) => BufferRef::C64(v),
        }
    }

    pub fn as_mut(&mut self) -> BufferMut<'_> {
        match self {
            Buffer::R32(v) => BufferMut::R32(v),
            Buffer::R64(v) => BufferMut::R64(v),
            Buffer::C32(v) => BufferMut::C32(v),
            Buffer::C64(v) => BufferMut::C64(v),
        }
    }

    pub fn to_c64_vec(&self) -> Vec<Complex64> {
        let b = self.as_ref();
        (0..b.len()).map(|i| b.load(i)).collect()
    }
}

impl<'a> BufferRef<'a> {
    pub fn dtype(&self) -> DType {
        match self {
            BufferRef::R32(_) => DType::R32,
            BufferRef::R64(_) => DType::R64,
            BufferRef::C32(_) => DType::C32,
            BufferRef::C64(_) => DType::C64,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            BufferRef::R32(v) => v.len(),
            BufferRef::R64(v) => v.len(),
            BufferRef::C32(v) => v.len(),
            BufferRef::C64(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Element `index` widened to `Complex64` (exact for every dtype).
    #[inline]
    pub fn load(&self, index: usize) -> Complex64 {
        match self {
            BufferRef::R32(v) => v[index].to_c64(),
            BufferRef::R64(v) => v[index].to_c64(),
            BufferRef::C32(v) => v[index].to_c64(),
            BufferRef::C64(v) => v[index],
        }
    }

    /// Element `index` converted to the compute type `T`.
    #[inline]
    pub fn load_as<T: Element>(&self, index: usize) -> T {
        T::from_c64(self.load(index))
    }
}

impl<'a> BufferMut<'a> {
    pub fn dtype(&self) -> DType {
        self.as_ref().dtype()
    }

    pub fn len(&self) -> usize {
        self.as_ref().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_ref(&self) -> BufferRef<'_> {
        match self {
            BufferMut::R32(v) => BufferRef::R32(v),
            BufferMut::R64(v) => BufferRef::R64(v),
            BufferMut::C32(v) => BufferRef::C32(v),
            BufferMut::C64(v) => BufferRef::C64(v),
        }
    }

    #[inline]
    pub fn load(&self, index: usize) -> Complex64 {
        self.as_ref().load(index)
    }

    /// Store `value`, cast to the buffer's dtype (real buffers keep the real part).
    #[inline]
    pub fn store(&mut self, index: usize, value: Complex64) {
        match self {
            BufferMut::R32(v) => v[index] = f32::from_c64(value),
            BufferMut::R64(v) => v[index] = f64::from_c64(value),
            BufferMut::C32(v) => v[index] = Complex32::from_c64(value),
            BufferMut::C64(v) => v[index] = value,
        }
    }
}

macro_rules! buffer_from_slices {
    ($($ty:ty => $variant:ident),*) => {$(
        impl<'a> From<&'a [$ty]> for BufferRef<'a> {
            fn from(v: &'a [$ty]) -> Self {
                BufferRef::$variant(v)
            }
        }
        impl<'a> From<&'a Vec<$ty>> for BufferRef<'a> {
            fn from(v: &'a Vec<$ty>) -> Self {
                BufferRef::$variant(v)
            }
        }
        impl<'a> From<&'a mut [$ty]> for BufferMut<'a> {
            fn from(v: &'a mut [$ty]) -> Self {
                BufferMut::$variant(v)
            }
        }
        impl<'a> From<&'a mut Vec<$ty>> for BufferMut<'a> {
            fn from(v: &'a mut Vec<$ty>) -> Self {
                BufferMut::$variant(v)
            }
        }
        impl From<Vec<$ty>> for Buffer {
            fn from(v: Vec<$ty>) -> Self {
                Buffer::$variant(v)
            }
        }
    )*};
}

buffer_from_slices!(f32 => R32, f64 => R64, Complex32 => C32, Complex64 => C64);

/// Check that every offset `base + sum_k i_k * s_k` reachable through `desc`
/// lies inside a buffer of `buffer_len` elements.
pub fn validate_view(desc: &TensorDesc, base: usize, buffer_len: usize) -> Result<()> {
    let (lo, hi) = desc.offset_range();
    let lo = base as i128 + lo as i128;
    let hi = base as i128 + hi as i128;
    if lo < 0 || hi >= buffer_len as i128 {
        return Err(TappError::OutOfBounds(format!(
            "layout reaches offsets [{lo}, {hi}] but the buffer holds {buffer_len} elements"
        )));
    }
    Ok(())
}

fn check_dtype(desc: &TensorDesc, actual: DType) -> Result<()> {
    if desc.dtype() != actual {
        return Err(TappError::DtypeMismatch(format!(
            "descriptor says {} but buffer holds {}",
            desc.dtype(),
            actual
        )));
    }
    Ok(())
}

/// A descriptor bound to read-only storage at a base offset.
#[derive(Debug, Clone, Copy)]
pub struct TensorView<'a> {
    desc: &'a TensorDesc,
    buffer: BufferRef<'a>,
    base: usize,
}

impl<'a> TensorView<'a> {
    pub fn new(desc: &'a TensorDesc, buffer: impl Into<BufferRef<'a>>, base: usize) -> Result<Self> {
        let buffer = buffer.into();
        check_dtype(desc, buffer.dtype())?;
        validate_view(desc, base, buffer.len())?;
        Ok(TensorView { desc, buffer, base })
    }

    pub fn desc(&self) -> &'a TensorDesc {
        self.desc
    }

    pub fn buffer(&self) -> BufferRef<'a> {
        self.buffer
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Absolute buffer index of a relative offset. Valid views never go negative.
    #[inline]
    pub fn index(&self, offset: isize) -> usize {
        (self.base as isize + offset) as usize
    }

    #[inline]
    pub fn load_as<T: Element>(&self, offset: isize) -> T {
        self.buffer.load_as(self.index(offset))
    }
}

/// A descriptor bound to writable storage at a base offset.
#[derive(Debug)]
pub struct TensorViewMut<'a> {
    desc: &'a TensorDesc,
    buffer: BufferMut<'a>,
    base: usize,
}

impl<'a> TensorViewMut<'a> {
    pub fn new(desc: &'a TensorDesc, buffer: impl Into<BufferMut<'a>>, base: usize) -> Result<Self> {
        let buffer = buffer.into();
        check_dtype(desc, buffer.dtype())?;
        validate_view(desc, base, buffer.len())?;
        Ok(TensorViewMut { desc, buffer, base })
    }

    pub fn desc(&self) -> &'a TensorDesc {
        self.desc
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn buffer(&self) -> BufferRef<'_> {
        self.buffer.as_ref()
    }

    #[inline]
    pub fn index(&self, offset: isize) -> usize {
        (self.base as isize + offset) as usize
    }

    #[inline]
    pub fn load_as<T: Element>(&self, offset: isize) -> T {
        self.buffer.as_ref().load_as(self.index(offset))
    }

    #[inline]
    pub fn store<T: Element>(&mut self, offset: isize, value: T) {
        let i = self.index(offset);
        self.buffer.store(i, value.to_c64());
    }

    pub fn as_view(&self) -> TensorView<'_> {
        TensorView {
            desc: self.desc,
            buffer: self.buffer.as_ref(),
            base: self.base,
        }
    }
}
