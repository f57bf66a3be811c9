use std::time::Instant;

use num_complex::{Complex32, Complex64};

use crate::error::{Result, TappError};
use crate::labels::{merge_repeats, Label};
use crate::tensor::{odometer_increment, DType, Element, ScalarValue, TensorDesc, TensorView, TensorViewMut};

use super::binary::check_shared;
use super::plan::{check_no_aliasing, resolve_compute_dtype};
use super::{check_conforms, reduce, Loop, StatusRecord, A, B};

/// A validated unary operation `B := alpha * A`.
///
/// Repeated labels in A read its (semi-)diagonal, labels of A missing from B
/// are summed, and B's label order applies a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryPlan {
    labels: [Vec<Label>; 2],
    descs: [TensorDesc; 2],
    compute_dtype: DType,
    pub(crate) outer: Loop,
    pub(crate) reduce_a: Loop,
}

impl UnaryPlan {
    pub fn desc_a(&self) -> &TensorDesc {
        &self.descs[A]
    }

    pub fn desc_b(&self) -> &TensorDesc {
        &self.descs[B]
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

pub fn make_unary_plan(
    labels_a: &[Label],
    desc_a: &TensorDesc,
    labels_b: &[Label],
    desc_b: &TensorDesc,
    compute_dtype: Option<DType>,
) -> Result<UnaryPlan> {
    let ma = merge_repeats(labels_a, desc_a)?;
    let mb = merge_repeats(labels_b, desc_b)?;
    check_shared(&ma, &mb)?;
    if let Some(&missing) = mb.labels.iter().find(|&&l| !ma.contains(l)) {
        return Err(TappError::Unsupported(format!(
            "output label {missing} does not appear in the input"
        )));
    }
    let compute_dtype = resolve_compute_dtype(&[desc_a.dtype(), desc_b.dtype()], compute_dtype)?;
    check_no_aliasing(&mb.extents, &mb.strides)?;

    let mut outer = Loop::default();
    for (k, &label) in mb.labels.iter().enumerate() {
        outer.push(mb.extents[k], [ma.stride_of(label), mb.strides[k], 0, 0]);
    }
    let mut reduce_a = Loop::default();
    for (k, &label) in ma.labels.iter().enumerate() {
        if !mb.contains(label) {
            reduce_a.push(ma.extents[k], [ma.strides[k], 0, 0, 0]);
        }
    }
    Ok(UnaryPlan {
        labels: [labels_a.to_vec(), labels_b.to_vec()],
        descs: [desc_a.clone(), desc_b.clone()],
        compute_dtype,
        outer,
        reduce_a,
    })
}

/// Execute `B := alpha * (sum over A-only labels of A)`. With `alpha` exactly
/// zero, A is not read and B is zero-filled.
pub fn unary_op(
    plan: &UnaryPlan,
    alpha: ScalarValue,
    a: &TensorView<'_>,
    b: &mut TensorViewMut<'_>,
) -> Result<StatusRecord> {
    check_conforms(plan.desc_a(), a.desc(), "A")?;
    check_conforms(plan.desc_b(), b.desc(), "B")?;
    let all_real = plan.descs.iter().all(|d| !d.dtype().is_complex());
    if all_real && alpha.im() != 0.0 {
        return Err(TappError::DtypeMismatch(
            "complex scalar with nonzero imaginary part applied to real tensors".into(),
        ));
    }
    let start = Instant::now();
    let (written, terms) = match plan.compute_dtype {
        DType::R32 => run::<f32>(plan, alpha, a, b),
        DType::R64 => run::<f64>(plan, alpha, a, b),
        DType::C32 => run::<Complex32>(plan, alpha, a, b),
        DType::C64 => run::<Complex64>(plan, alpha, a, b),
    };
    Ok(StatusRecord::ok(start.elapsed(), written, terms))
}

fn run<T: Element>(
    plan: &UnaryPlan,
    alpha: ScalarValue,
    a: &TensorView<'_>,
    b: &mut TensorViewMut<'_>,
) -> (usize, usize) {
    let use_a = !alpha.is_zero();
    let alpha_t = T::from_c64(alpha.to_c64());
    let outer = &plan.outer;
    let mut idx = vec![0; outer.extents.len()];
    let size = outer.size();
    for _ in 0..size {
        let value = if use_a {
            let sum: T = reduce(a, outer.offset(A, &idx), &plan.reduce_a, A);
            alpha_t * sum
        } else {
            T::zero()
        };
        b.store(outer.offset(B, &idx), value);
        odometer_increment(&mut idx, &outer.extents);
    }
    (size, if use_a { size } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::parse_labels;
    use crate::ErrorCode;

    fn run_unary(la: &str, ea: &[usize], a: &[f64], lb: &str, eb: &[usize], alpha: f64) -> Vec<f64> {
        let da = TensorDesc::column_major(DType::R64, ea.to_vec()).unwrap();
        let db = TensorDesc::column_major(DType::R64, eb.to_vec()).unwrap();
        let plan = make_unary_plan(&parse_labels(la).unwrap(), &da, &parse_labels(lb).unwrap(), &db, None).unwrap();
        let mut out = vec![0.0; db.size()];
        let mut bv = TensorViewMut::new(&db, &mut out, 0).unwrap();
        unary_op(
            &plan,
            ScalarValue::real(DType::R64, alpha),
            &TensorView::new(&da, a, 0).unwrap(),
            &mut bv,
        )
        .unwrap();
        out
    }

    // A = [[1,2],[3,4]] (rows i), stored column-major
    const A: [f64; 4] = [1.0, 3.0, 2.0, 4.0];

    #[test]
    fn transpose() {
        // B_{ji} = A_{ij}; B = [[1,3],[2,4]] -> column-major [1,2,3,4]
        assert_eq!(run_unary("ij", &[2, 2], &A, "ji", &[2, 2], 1.0), [1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn diagonal() {
        assert_eq!(run_unary("ii", &[2, 2], &A, "i", &[2], 1.0), [1.0, 4.0]);
    }

    #[test]
    fn full_reduction_scaled() {
        assert_eq!(run_unary("i", &[3], &[1.0, 2.0, 3.0], "", &[], 2.0), [12.0]);
    }

    #[test]
    fn trace() {
        assert_eq!(run_unary("ii", &[2, 2], &A, "", &[], 1.0), [5.0]);
    }

    #[test]
    fn unary_errors() {
        let d2 = TensorDesc::column_major(DType::R64, vec![2]).unwrap();
        let d3 = TensorDesc::column_major(DType::R64, vec![3]).unwrap();
        let i = parse_labels("i").unwrap();
        let j = parse_labels("j").unwrap();
        assert_eq!(
            make_unary_plan(&i, &d2, &i, &d3, None).unwrap_err().code(),
            ErrorCode::ExtentMismatch
        );
        assert_eq!(
            make_unary_plan(&i, &d2, &j, &d2, None).unwrap_err().code(),
            ErrorCode::Unsupported
        );
        let alias = TensorDesc::new(DType::R64, vec![2], vec![0]).unwrap();
        assert_eq!(
            make_unary_plan(&i, &d2, &i, &alias, None).unwrap_err().code(),
            ErrorCode::Aliasing
        );
    }
}
