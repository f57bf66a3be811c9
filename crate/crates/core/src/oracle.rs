//! Brute-force reference evaluator for conformance testing.
//!
//! The oracle deliberately shares no loop machinery with [`engine`](crate::engine):
//! it materializes operands into dense column-major tensors over their
//! distinct labels, then enumerates the full Cartesian product of every
//! distinct label of A, B and D with one flat counter decoded by division,
//! accumulating `A * B` into the output in `Complex64`. Isolated output labels
//! (broadcast) are supported here even though the engine rejects them.

use std::collections::{BTreeMap, HashSet};

use num_complex::Complex64;

use crate::error::{Result, TappError};
use crate::labels::Label;
use crate::tensor::{round_to, BufferRef, DType, ScalarValue, TensorDesc};

/// Dense column-major tensor holding widened element values.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    pub extents: Vec<usize>,
    pub elements: Vec<Complex64>,
    pub dtype: DType,
}

impl DenseTensor {
    pub fn new(dtype: DType, extents: Vec<usize>, elements: Vec<Complex64>) -> Result<Self> {
        if elements.len() != extents.iter().product::<usize>() {
            return Err(TappError::ExtentMismatch(format!(
                "{} elements for extents {extents:?}",
                elements.len()
            )));
        }
        Ok(DenseTensor {
            extents,
            elements,
            dtype,
        })
    }

    pub fn zeros(dtype: DType, extents: Vec<usize>) -> Self {
        let n = extents.iter().product();
        DenseTensor {
            extents,
            elements: vec![Complex64::new(0.0, 0.0); n],
            dtype,
        }
    }
}

/// A dense tensor with one distinct label per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTensor {
    pub labels: Vec<Label>,
    pub tensor: DenseTensor,
}

/// Column-major multi-index of `flat` within `extents`.
fn decode(mut flat: usize, extents: &[usize], out: &mut [usize]) {
    for (slot, &e) in out.iter_mut().zip(extents) {
        *slot = flat % e;
        flat /= e;
    }
}

/// Column-major flat position of a multi-index.
fn encode(indices: impl Iterator<Item = usize>, extents: &[usize]) -> usize {
    let mut flat = 0;
    let mut scale = 1;
    for (i, &e) in indices.zip(extents) {
        flat += i * scale;
        scale *= e;
    }
    flat
}

/// Materialize a strided tensor over its distinct labels.
///
/// Modes sharing a label are read on their (semi-)diagonal. Every element
/// address is bounds-checked against `buffer`.
pub fn densify(desc: &TensorDesc, buffer: BufferRef<'_>, base: usize, labels: &[Label]) -> Result<LabeledTensor> {
    if labels.len() != desc.nmodes() {
        return Err(TappError::Parse(format!(
            "{} labels given for a tensor with {} modes",
            labels.len(),
            desc.nmodes()
        )));
    }
    let mut unique: Vec<Label> = Vec::new();
    let mut extents: Vec<usize> = Vec::new();
    let mut mode_slot = Vec::with_capacity(labels.len());
    for (mode, &label) in labels.iter().enumerate() {
        let extent = desc.extents()[mode];
        match unique.iter().position(|&l| l == label) {
            Some(slot) => {
                if extents[slot] != extent {
                    return Err(TappError::ExtentMismatch(format!(
                        "label {label} repeated with extents {} and {extent}",
                        extents[slot]
                    )));
                }
                mode_slot.push(slot);
            }
            None => {
                mode_slot.push(unique.len());
                unique.push(label);
                extents.push(extent);
            }
        }
    }
    let total: usize = extents.iter().product();
    let mut idx = vec![0; unique.len()];
    let mut elements = Vec::with_capacity(total);
    for flat in 0..total {
        decode(flat, &extents, &mut idx);
        let mut offset = base as i128;
        for (mode, &slot) in mode_slot.iter().enumerate() {
            offset += idx[slot] as i128 * desc.strides()[mode] as i128;
        }
        if offset < 0 || offset >= buffer.len() as i128 {
            return Err(TappError::OutOfBounds(format!(
                "element {idx:?} at offset {offset} outside buffer of {}",
                buffer.len()
            )));
        }
        elements.push(buffer.load(offset as usize));
    }
    Ok(LabeledTensor {
        labels: unique,
        tensor: DenseTensor {
            extents,
            elements,
            dtype: desc.dtype(),
        },
    })
}

/// The addend C must have exactly D's extents.
pub fn check_output_shape(c: &TensorDesc, d: &TensorDesc) -> Result<()> {
    if c.extents() != d.extents() {
        return Err(TappError::OutputMismatch(format!(
            "C extents {:?} vs D extents {:?}",
            c.extents(),
            d.extents()
        )));
    }
    Ok(())
}

/// Every distinct-label multi-index of D must address its own element.
pub fn check_output_aliasing(d: &TensorDesc, labels: &[Label]) -> Result<()> {
    let mut unique: Vec<Label> = Vec::new();
    let mut extents: Vec<usize> = Vec::new();
    let mut mode_slot = Vec::new();
    for (mode, &label) in labels.iter().enumerate() {
        match unique.iter().position(|&l| l == label) {
            Some(slot) => mode_slot.push(slot),
            None => {
                mode_slot.push(unique.len());
                unique.push(label);
                extents.push(d.extents()[mode]);
            }
        }
    }
    let total: usize = extents.iter().product();
    let mut idx = vec![0; unique.len()];
    let mut seen = HashSet::with_capacity(total);
    for flat in 0..total {
        decode(flat, &extents, &mut idx);
        let offset: i128 = mode_slot
            .iter()
            .enumerate()
            .map(|(mode, &slot)| idx[slot] as i128 * d.strides()[mode] as i128)
            .sum();
        if !seen.insert(offset) {
            return Err(TappError::Aliasing(format!(
                "output element {idx:?} shares offset {offset}"
            )));
        }
    }
    Ok(())
}

/// `D := alpha * sum (A * B) + beta * C` by full enumeration over every
/// distinct label. D's labels and extents are those of `c`; the result is
/// rounded to `d_dtype`. Zero `alpha` skips A and B, zero `beta` skips C.
pub fn oracle_contract(
    a: &LabeledTensor,
    b: &LabeledTensor,
    c: &LabeledTensor,
    alpha: ScalarValue,
    beta: ScalarValue,
    d_dtype: DType,
) -> Result<DenseTensor> {
    let mut extent_of: BTreeMap<Label, usize> = BTreeMap::new();
    let mut order: Vec<Label> = Vec::new();
    for (name, t) in [("A", a), ("B", b), ("C", c)] {
        if t.labels.len() != t.tensor.extents.len() {
            return Err(TappError::Parse(format!("{name} has mismatched labels and extents")));
        }
        let mut local = HashSet::new();
        for (&label, &extent) in t.labels.iter().zip(&t.tensor.extents) {
            if !local.insert(label) {
                return Err(TappError::Parse(format!("{name} repeats label {label}")));
            }
            match extent_of.get(&label) {
                Some(&e) if e != extent => {
                    return Err(TappError::ExtentMismatch(format!(
                        "label {label} has extents {e} and {extent}"
                    )))
                }
                Some(_) => {}
                None => {
                    extent_of.insert(label, extent);
                    order.push(label);
                }
            }
        }
    }
    let extents: Vec<usize> = order.iter().map(|l| extent_of[l]).collect();
    let position = |labels: &[Label]| -> Vec<usize> {
        labels
            .iter()
            .map(|l| order.iter().position(|o| o == l).unwrap())
            .collect()
    };
    let (pos_a, pos_b, pos_d) = (position(&a.labels), position(&b.labels), position(&c.labels));

    let out_len = c.tensor.elements.len();
    let mut acc = vec![Complex64::new(0.0, 0.0); out_len];
    if !alpha.is_zero() {
        let total: usize = extents.iter().product();
        let mut idx = vec![0; order.len()];
        for flat in 0..total {
            decode(flat, &extents, &mut idx);
            let ia = encode(pos_a.iter().map(|&p| idx[p]), &a.tensor.extents);
            let ib = encode(pos_b.iter().map(|&p| idx[p]), &b.tensor.extents);
            let id = encode(pos_d.iter().map(|&p| idx[p]), &c.tensor.extents);
            acc[id] += a.tensor.elements[ia] * b.tensor.elements[ib];
        }
    }
    let (alpha, beta) = (alpha.to_c64(), beta.to_c64());
    let use_c = beta != Complex64::new(0.0, 0.0);
    let use_ab = alpha != Complex64::new(0.0, 0.0);
    let elements = (0..out_len)
        .map(|i| {
            let mut v = Complex64::new(0.0, 0.0);
            if use_ab {
                v += alpha * acc[i];
            }
            if use_c {
                v += beta * c.tensor.elements[i];
            }
            round_to(d_dtype, v)
        })
        .collect();
    Ok(DenseTensor {
        extents: c.tensor.extents.clone(),
        elements,
        dtype: d_dtype,
    })
}

/// Elementwise `|x - y| / max(|y|, 1)`, maximized; `y` is the reference.
/// Returns the worst error and its flat position. NaN anywhere counts as
/// infinite error.
pub fn max_relative_error(actual: &[Complex64], expected: &[Complex64]) -> (f64, Option<usize>) {
    if actual.len() != expected.len() {
        return (f64::INFINITY, None);
    }
    let mut worst = (0.0f64, None);
    for (i, (x, y)) in actual.iter().zip(expected).enumerate() {
        let err = (x - y).norm() / y.norm().max(1.0);
        let err = if err.is_nan() { f64::INFINITY } else { err };
        if err > worst.0 || worst.1.is_none() && err >= worst.0 {
            worst = (err, Some(i));
        }
    }
    worst
}
