use crate::error::{Result, TappError};

use super::dtype::DType;

/// Logical shape plus general strided layout of one tensor operand.
///
/// Strides are in elements and may be negative or zero. A descriptor with no
/// modes describes a scalar occupying one element at the view's base offset.
/// The descriptor never refers to data; a [`TensorView`](super::TensorView)
/// pairs it with a buffer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorDesc {
    dtype: DType,
    extents: Vec<usize>,
    strides: Vec<isize>,
}

impl TensorDesc {
    pub fn new(dtype: DType, extents: Vec<usize>, strides: Vec<isize>) -> Result<Self> {
        if extents.len() != strides.len() {
            return Err(TappError::ExtentMismatch(format!(
                "{} extents but {} strides",
                extents.len(),
                strides.len()
            )));
        }
        if let Some(k) = extents.iter().position(|&e| e == 0) {
            return Err(TappError::ExtentMismatch(format!("extent of mode {k} is zero")));
        }
        Ok(TensorDesc {
            dtype,
            extents,
            strides,
        })
    }

    /// Dense column-major descriptor: `s_k = e_0 * ... * e_{k-1}`.
    pub fn column_major(dtype: DType, extents: Vec<usize>) -> Result<Self> {
        let strides = column_major_strides(&extents);
        Self::new(dtype, extents, strides)
    }

    /// Dense row-major descriptor: `s_k = e_{k+1} * ... * e_{n-1}`.
    pub fn row_major(dtype: DType, extents: Vec<usize>) -> Result<Self> {
        let strides = row_major_strides(&extents);
        Self::new(dtype, extents, strides)
    }

    pub fn scalar(dtype: DType) -> Self {
        TensorDesc {
            dtype,
            extents: Vec::new(),
            strides: Vec::new(),
        }
    }

    pub fn dtype(&self) -> DType {
        self.dtype
    }

    pub fn nmodes(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn strides(&self) -> &[isize] {
        &self.strides
    }

    /// Number of logical elements (1 for a scalar).
    pub fn size(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn with_dtype(&self, dtype: DType) -> Self {
        TensorDesc { dtype, ..self.clone() }
    }

    /// Smallest and largest offsets, relative to the base, that the layout can
    /// address.
    pub fn offset_range(&self) -> (isize, isize) {
        self.extents
            .iter()
            .zip(&self.strides)
            .fold((0, 0), |(lo, hi), (&e, &s)| {
                let reach = s * (e as isize - 1);
                (lo + reach.min(0), hi + reach.max(0))
            })
    }

    /// Smallest base offset for which every addressable offset is non-negative,
    /// and the buffer length needed with that base.
    pub fn minimal_buffer(&self) -> (usize, usize) {
        let (lo, hi) = self.offset_range();
        let base = (-lo) as usize;
        (base, (hi - lo) as usize + 1)
    }
}

pub fn column_major_strides(extents: &[usize]) -> Vec<isize> {
    let mut acc = 1isize;
    extents
        .iter()
        .map(|&e| {
            let s = acc;
            acc *= e as isize;
            s
        })
        .collect()
}

pub fn row_major_strides(extents: &[usize]) -> Vec<isize> {
    let mut strides = column_major_strides(&extents.iter().rev().copied().collect::<Vec<_>>());
    strides.reverse();
    strides
}

/// `sum_k indices[k] * strides[k]`.
pub fn element_offset(indices: &[usize], strides: &[isize]) -> isize {
    debug_assert_eq!(indices.len(), strides.len());
    indices.iter().zip(strides).map(|(&i, &s)| i as isize * s).sum()
}

/// Advance `indices` to the next multi-index in reverse-lexicographic order
/// (position 0 varies fastest). The last multi-index wraps to all zeros.
pub fn odometer_increment(indices: &mut [usize], extents: &[usize]) {
    debug_assert_eq!(indices.len(), extents.len());
    for (i, &e) in indices.iter_mut().zip(extents) {
        *i += 1;
        if *i < e {
            return;
        }
        *i = 0;
    }
}
