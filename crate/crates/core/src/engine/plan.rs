use std::collections::HashSet;

use crate::error::{Result, TappError};
use crate::labels::{classify, labels_to_string, merge_repeats, ClassifiedLabels, LabelSpec};
use crate::tensor::{dtype_promote_all, element_offset, odometer_increment, DType, TensorDesc};

use super::{Loop, A, B, C, D};

/// A validated, preprocessed contraction `D := alpha * A * B + beta * C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionPlan {
    spec: LabelSpec,
    descs: [TensorDesc; 4],
    classified: ClassifiedLabels,
    compute_dtype: DType,
    /// Output labels ordered `fb`, `fa`, `h` so the `fb` indices vary fastest.
    pub(crate) outer: Loop,
    pub(crate) contracted: Loop,
    pub(crate) reduce_a: Loop,
    pub(crate) reduce_b: Loop,
}

impl ContractionPlan {
    pub fn spec(&self) -> &LabelSpec {
        &self.spec
    }

    pub fn classified(&self) -> &ClassifiedLabels {
        &self.classified
    }

    pub fn compute_dtype(&self) -> DType {
        self.compute_dtype
    }

    pub fn desc_a(&self) -> &TensorDesc {
        &self.descs[A]
    }

    pub fn desc_b(&self) -> &TensorDesc {
        &self.descs[B]
    }

    pub fn desc_c(&self) -> &TensorDesc {
        &self.descs[C]
    }

    pub fn desc_d(&self) -> &TensorDesc {
        &self.descs[D]
    }

    pub fn size_h(&self) -> usize {
        self.classified.h.size()
    }

    pub fn size_fa(&self) -> usize {
        self.classified.fa.size()
    }

    pub fn size_fb(&self) -> usize {
        self.classified.fb.size()
    }

    pub fn size_p(&self) -> usize {
        self.classified.p.size()
    }

    pub fn size_ia(&self) -> usize {
        self.classified.ia.size()
    }

    pub fn size_ib(&self) -> usize {
        self.classified.ib.size()
    }
}

/// Fail with `Aliasing` if two distinct multi-indices of the layout share an
/// offset. Exact: enumerates every offset.
pub fn check_no_aliasing(extents: &[usize], strides: &[isize]) -> Result<()> {
    let total: usize = extents.iter().product();
    let mut seen = HashSet::with_capacity(total);
    let mut idx = vec![0; extents.len()];
    for _ in 0..total {
        if !seen.insert(element_offset(&idx, strides)) {
            return Err(TappError::Aliasing(format!(
                "index {idx:?} reuses an offset already written (extents {extents:?}, strides {strides:?})"
            )));
        }
        odometer_increment(&mut idx, extents);
    }
    Ok(())
}

pub(crate) fn resolve_compute_dtype(operands: &[DType], requested: Option<DType>) -> Result<DType> {
    let promoted = dtype_promote_all(operands.iter().copied()).unwrap_or(DType::R64);
    match requested {
        None => Ok(promoted),
        Some(dt) if dt.dominates(promoted) => Ok(dt),
        Some(dt) => Err(TappError::DtypeMismatch(format!(
            "compute dtype {dt} cannot hold operands promoted to {promoted}"
        ))),
    }
}

/// Validate and preprocess a contraction.
///
/// Checks run in this order: C against D (`OutputMismatch`), label counts
/// (`Parse`), repeated and shared extents (`ExtentMismatch`), isolated output
/// labels (`Unsupported`), compute dtype (`DtypeMismatch`) and finally output
/// aliasing (`Aliasing`).
pub fn make_plan(
    spec: &LabelSpec,
    desc_a: &TensorDesc,
    desc_b: &TensorDesc,
    desc_c: &TensorDesc,
    desc_d: &TensorDesc,
    compute_dtype: Option<DType>,
) -> Result<ContractionPlan> {
    if spec.c != spec.d {
        return Err(TappError::OutputMismatch(format!(
            "C labels {:?} differ from D labels {:?}",
            labels_to_string(&spec.c),
            labels_to_string(&spec.d)
        )));
    }
    if desc_c.extents() != desc_d.extents() {
        return Err(TappError::OutputMismatch(format!(
            "C extents {:?} differ from D extents {:?}",
            desc_c.extents(),
            desc_d.extents()
        )));
    }
    let ma = merge_repeats(&spec.a, desc_a)?;
    let mb = merge_repeats(&spec.b, desc_b)?;
    let mc = merge_repeats(&spec.c, desc_c)?;
    let md = merge_repeats(&spec.d, desc_d)?;

    let classified = classify(&ma, &mb, &md)?;
    if !classified.ic.is_empty() {
        return Err(TappError::Unsupported(format!(
            "labels {:?} appear only in the output",
            labels_to_string(&classified.ic.labels)
        )));
    }
    let compute_dtype = resolve_compute_dtype(
        &[desc_a.dtype(), desc_b.dtype(), desc_c.dtype(), desc_d.dtype()],
        compute_dtype,
    )?;
    check_no_aliasing(&md.extents, &md.strides)?;

    let mut outer = Loop::default();
    for group in [&classified.fb, &classified.fa, &classified.h] {
        for (k, &label) in group.labels.iter().enumerate() {
            outer.push(
                group.extents[k],
                [
                    group.strides_a[k],
                    group.strides_b[k],
                    mc.stride_of(label),
                    group.strides_d[k],
                ],
            );
        }
    }
    let mut contracted = Loop::default();
    let p = &classified.p;
    for k in 0..p.len() {
        contracted.push(p.extents[k], [p.strides_a[k], p.strides_b[k], 0, 0]);
    }
    let mut reduce_a = Loop::default();
    let ia = &classified.ia;
    for k in 0..ia.len() {
        reduce_a.push(ia.extents[k], [ia.strides_a[k], 0, 0, 0]);
    }
    let mut reduce_b = Loop::default();
    let ib = &classified.ib;
    for k in 0..ib.len() {
        reduce_b.push(ib.extents[k], [0, ib.strides_b[k], 0, 0]);
    }

    Ok(ContractionPlan {
        spec: spec.clone(),
        descs: [desc_a.clone(), desc_b.clone(), desc_c.clone(), desc_d.clone()],
        classified,
        compute_dtype,
        outer,
        contracted,
        reduce_a,
        reduce_b,
    })
}
