use std::fmt;
use std::str::FromStr;

use crate::error::TappError;

/// Element datatype: real or complex, 32- or 64-bit components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DType {
    R32,
    R64,
    C32,
    C64,
}

impl DType {
    pub const ALL: [DType; 4] = [DType::R32, DType::R64, DType::C32, DType::C64];

    pub fn is_complex(self) -> bool {
        matches!(self, DType::C32 | DType::C64)
    }

    /// Width of one component in bits.
    pub fn component_bits(self) -> u32 {
        match self {
            DType::R32 | DType::C32 => 32,
            DType::R64 | DType::C64 => 64,
        }
    }

    fn from_parts(complex: bool, wide: bool) -> DType {
        match (complex, wide) {
            (false, false) => DType::R32,
            (false, true) => DType::R64,
            (true, false) => DType::C32,
            (true, true) => DType::C64,
        }
    }

    /// True when `self` can represent every value of `other` exactly.
    pub fn dominates(self, other: DType) -> bool {
        dtype_promote(self, other) == self
    }

    pub fn name(self) -> &'static str {
        match self {
            DType::R32 => "r32",
            DType::R64 => "r64",
            DType::C32 => "c32",
            DType::C64 => "c64",
        }
    }
}

/// Smallest dtype holding both operands: the wider component width, complex
/// if either side is complex.
pub fn dtype_promote(a: DType, b: DType) -> DType {
    DType::from_parts(
        a.is_complex() || b.is_complex(),
        a.component_bits() == 64 || b.component_bits() == 64,
    )
}

/// Promotion over any number of dtypes; `None` for an empty iterator.
pub fn dtype_promote_all<I: IntoIterator<Item = DType>>(dtypes: I) -> Option<DType> {
    dtypes.into_iter().reduce(dtype_promote)
}

impl fmt::Display for DType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DType {
    type Err = TappError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "r32" => Ok(DType::R32),
            "r64" => Ok(DType::R64),
            "c32" => Ok(DType::C32),
            "c64" => Ok(DType::C64),
            other => Err(TappError::Parse(format!("unknown dtype {other:?}"))),
        }
    }
}
