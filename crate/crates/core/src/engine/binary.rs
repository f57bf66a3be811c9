use std::time::Instant;

use num_complex::{Complex32, Complex64};

use crate::error::{Result, TappError};
use crate::labels::{labels_to_string, merge_repeats, Label, MergedTensorLabels};
use crate::tensor::{odometer_increment, DType, Element, ScalarValue, TensorDesc, TensorView, TensorViewMut};

use super::plan::{check_no_aliasing, resolve_compute_dtype};
use super::{check_conforms, reduce, Addend, Loop, StatusRecord, A, B, C};

/// A validated binary operation `C := alpha * A + beta * B`.
///
/// B and C carry identical labels. Labels only in A are reduced; labels only
/// in B (and C) broadcast the reduced A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryPlan {
    labels: [Vec<Label>; 3],
    descs: [TensorDesc; 3],
    compute_dtype: DType,
    pub(crate) outer: Loop,
    pub(crate) reduce_a: Loop,
}

impl BinaryPlan {
    pub fn desc_a(&self) -> &TensorDesc {
        &self.descs[A]
    }

    pub fn desc_b(&self) -> &TensorDesc {
        &self.descs[B]
    }

    pub fn desc_c(&self) -> &TensorDesc {
        &self.descs[C]
    }

    pub fn labels_a(&self) -> &[Label] {
        &self.labels[A]
    }

    pub fn labels_b(&self) -> &[Label] {
        &self.labels[B]
    }

    pub fn compute_dtype(&self) -> DType {
        self.compute_dtype
    }
}

pub(crate) fn check_shared(x: &MergedTensorLabels, y: &MergedTensorLabels) -> Result<()> {
    for (k, &label) in x.labels.iter().enumerate() {
        if let Some(e) = y.extent_of(label) {
            if e != x.extents[k] {
                return Err(TappError::ExtentMismatch(format!(
                    "label {label} has extents {} and {e}",
                    x.extents[k]
                )));
            }
        }
    }
    Ok(())
}

pub fn make_binary_plan(
    labels_a: &[Label],
    desc_a: &TensorDesc,
    labels_b: &[Label],
    desc_b: &TensorDesc,
    labels_c: &[Label],
    desc_c: &TensorDesc,
    compute_dtype: Option<DType>,
) -> Result<BinaryPlan> {
    if labels_b != labels_c {
        return Err(TappError::OutputMismatch(format!(
            "B labels {:?} differ from C labels {:?}",
            labels_to_string(labels_b),
            labels_to_string(labels_c)
        )));
    }
    if desc_b.extents() != desc_c.extents() {
        return Err(TappError::OutputMismatch(format!(
            "B extents {:?} differ from C extents {:?}",
            desc_b.extents(),
            desc_c.extents()
        )));
    }
    let ma = merge_repeats(labels_a, desc_a)?;
    let mb = merge_repeats(labels_b, desc_b)?;
    let mc = merge_repeats(labels_c, desc_c)?;
    check_shared(&ma, &mb)?;
    let compute_dtype = resolve_compute_dtype(&[desc_a.dtype(), desc_b.dtype(), desc_c.dtype()], compute_dtype)?;
    check_no_aliasing(&mc.extents, &mc.strides)?;

    let mut outer = Loop::default();
    for (k, &label) in mc.labels.iter().enumerate() {
        outer.push(mc.extents[k], [ma.stride_of(label), mb.strides[k], mc.strides[k], 0]);
    }
    let mut reduce_a = Loop::default();
    for (k, &label) in ma.labels.iter().enumerate() {
        if !mc.contains(label) {
            reduce_a.push(ma.extents[k], [ma.strides[k], 0, 0, 0]);
        }
    }
    Ok(BinaryPlan {
        labels: [labels_a.to_vec(), labels_b.to_vec(), labels_c.to_vec()],
        descs: [desc_a.clone(), desc_b.clone(), desc_c.clone()],
        compute_dtype,
        outer,
        reduce_a,
    })
}

/// Execute `C := alpha * (sum over A-only labels of A) + beta * B`.
///
/// `b` may be [`Addend::InPlace`] to read B from the output buffer.
pub fn binary_op(
    plan: &BinaryPlan,
    alpha: ScalarValue,
    a: &TensorView<'_>,
    beta: ScalarValue,
    b: Addend<'_>,
    c: &mut TensorViewMut<'_>,
) -> Result<StatusRecord> {
    check_conforms(plan.desc_a(), a.desc(), "A")?;
    check_conforms(plan.desc_c(), c.desc(), "C")?;
    let b = match b {
        Addend::Separate(view) => {
            check_conforms(plan.desc_b(), view.desc(), "B")?;
            Some(view)
        }
        Addend::InPlace => {
            if plan.desc_b() != plan.desc_c() {
                return Err(TappError::OutputMismatch(
                    "in-place update requires B and C to share one descriptor".into(),
                ));
            }
            None
        }
    };
    let all_real = plan.descs.iter().all(|d| !d.dtype().is_complex());
    if all_real && (alpha.im() != 0.0 || beta.im() != 0.0) {
        return Err(TappError::DtypeMismatch(
            "complex scalar with nonzero imaginary part applied to real tensors".into(),
        ));
    }
    let start = Instant::now();
    let (written, terms) = match plan.compute_dtype {
        DType::R32 => run::<f32>(plan, alpha, a, beta, b.as_ref(), c),
        DType::R64 => run::<f64>(plan, alpha, a, beta, b.as_ref(), c),
        DType::C32 => run::<Complex32>(plan, alpha, a, beta, b.as_ref(), c),
        DType::C64 => run::<Complex64>(plan, alpha, a, beta, b.as_ref(), c),
    };
    Ok(StatusRecord::ok(start.elapsed(), written, terms))
}

fn run<T: Element>(
    plan: &BinaryPlan,
    alpha: ScalarValue,
    a: &TensorView<'_>,
    beta: ScalarValue,
    b: Option<&TensorView<'_>>,
    c: &mut TensorViewMut<'_>,
) -> (usize, usize) {
    let use_a = !alpha.is_zero();
    let use_b = !beta.is_zero();
    let alpha_t = T::from_c64(alpha.to_c64());
    let beta_t = T::from_c64(beta.to_c64());
    let outer = &plan.outer;
    let mut idx = vec![0; outer.extents.len()];
    let size = outer.size();
    for _ in 0..size {
        let off_c = outer.offset(C, &idx);
        let mut value = T::zero();
        if use_a {
            let sum: T = reduce(a, outer.offset(A, &idx), &plan.reduce_a, A);
            value = alpha_t * sum;
        }
        if use_b {
            let bv: T = match b {
                Some(view) => view.load_as(outer.offset(B, &idx)),
                None => c.load_as(off_c),
            };
            value = value + beta_t * bv;
        }
        c.store(off_c, value);
        odometer_increment(&mut idx, &outer.extents);
    }
    (size, size * (use_a as usize + use_b as usize))
}
