use std::time::Instant;

use num_complex::{Complex32, Complex64};

use crate::error::{Result, TappError};
use crate::tensor::{odometer_increment, DType, Element, ScalarValue, TensorView, TensorViewMut};

use super::plan::ContractionPlan;
use super::{check_conforms, reduce, Addend, StatusRecord, A, B, C, D};

/// Execute a planned contraction.
///
/// For every output multi-index the engine computes
/// `D := alpha * sum_P (sum_IA A) (sum_IB B) + beta * C`
/// in the plan's compute dtype and casts once into D's dtype. If `alpha` is
/// exactly zero, A and B are never read; if `beta` is exactly zero, C is
/// never read.
pub fn contract(
    plan: &ContractionPlan,
    alpha: ScalarValue,
    a: &TensorView<'_>,
    b: &TensorView<'_>,
    beta: ScalarValue,
    c: Addend<'_>,
    d: &mut TensorViewMut<'_>,
) -> Result<StatusRecord> {
    check_conforms(plan.desc_a(), a.desc(), "A")?;
    check_conforms(plan.desc_b(), b.desc(), "B")?;
    check_conforms(plan.desc_d(), d.desc(), "D")?;
    let c = match c {
        Addend::Separate(view) => {
            check_conforms(plan.desc_c(), view.desc(), "C")?;
            Some(view)
        }
        Addend::InPlace => {
            if plan.desc_c() != plan.desc_d() {
                return Err(TappError::OutputMismatch(
                    "in-place update requires C and D to share one descriptor".into(),
                ));
            }
            None
        }
    };
    let all_real = [plan.desc_a(), plan.desc_b(), plan.desc_c(), plan.desc_d()]
        .iter()
        .all(|desc| !desc.dtype().is_complex());
    if all_real && (alpha.im() != 0.0 || beta.im() != 0.0) {
        return Err(TappError::DtypeMismatch(
            "complex scalar with nonzero imaginary part applied to real tensors".into(),
        ));
    }

    let run = match plan.compute_dtype() {
        DType::R32 => run::<f32>,
        DType::R64 => run::<f64>,
        DType::C32 => run::<Complex32>,
        DType::C64 => run::<Complex64>,
    };
    let start = Instant::now();
    let (written, products) = run(plan, alpha, a, b, beta, c.as_ref(), d);
    Ok(StatusRecord::ok(start.elapsed(), written, products))
}

fn run<T: Element>(
    plan: &ContractionPlan,
    alpha: ScalarValue,
    a: &TensorView<'_>,
    b: &TensorView<'_>,
    beta: ScalarValue,
    c: Option<&TensorView<'_>>,
    d: &mut TensorViewMut<'_>,
) -> (usize, usize) {
    let use_ab = !alpha.is_zero();
    let use_c = !beta.is_zero();
    let alpha_t = T::from_c64(alpha.to_c64());
    let beta_t = T::from_c64(beta.to_c64());

    let outer = &plan.outer;
    let inner = &plan.contracted;
    let mut out_idx = vec![0; outer.extents.len()];
    let mut p_idx = vec![0; inner.extents.len()];
    let size_out = outer.size();
    let size_p = inner.size();

    for _ in 0..size_out {
        let off_d = outer.offset(D, &out_idx);
        let mut value = T::zero();
        if use_ab {
            let off_a = outer.offset(A, &out_idx);
            let off_b = outer.offset(B, &out_idx);
            let mut sum = T::zero();
            p_idx.fill(0);
            for _ in 0..size_p {
                let ra: T = reduce(a, off_a + inner.offset(A, &p_idx), &plan.reduce_a, A);
                let rb: T = reduce(b, off_b + inner.offset(B, &p_idx), &plan.reduce_b, B);
                sum = sum + ra * rb;
                odometer_increment(&mut p_idx, &inner.extents);
            }
            value = alpha_t * sum;
        }
        if use_c {
            let cv: T = match c {
                Some(view) => view.load_as(outer.offset(C, &out_idx)),
                None => d.load_as(off_d),
            };
            value = value + beta_t * cv;
        }
        d.store(off_d, value);
        odometer_increment(&mut out_idx, &outer.extents);
    }
    (size_out, if use_ab { size_out * size_p } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::make_plan;
    use crate::labels::parse_einsum;
    use crate::tensor::TensorDesc;
    use crate::ErrorCode;

    fn r64(x: f64) -> ScalarValue {
        ScalarValue::real(DType::R64, x)
    }

    /// Column-major 2x2 from row-major literal rows.
    fn mat(rows: [[f64; 2]; 2]) -> Vec<f64> {
        vec![rows[0][0], rows[1][0], rows[0][1], rows[1][1]]
    }

    fn matmul(a: &[f64], b: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
        let spec = parse_einsum("ij,jk->ik").unwrap();
        let desc = TensorDesc::column_major(DType::R64, vec![2, 2]).unwrap();
        let plan = make_plan(&spec, &desc, &desc, &desc, &desc, None).unwrap();
        let zeros = vec![0.0; 4];
        let mut out = vec![0.0; 4];
        let av = TensorView::new(&desc, a, 0).unwrap();
        let bv = TensorView::new(&desc, b, 0).unwrap();
        let cv = TensorView::new(&desc, &zeros, 0).unwrap();
        let mut dv = TensorViewMut::new(&desc, &mut out, 0).unwrap();
        contract(&plan, r64(alpha), &av, &bv, r64(beta), Addend::Separate(cv), &mut dv).unwrap();
        out
    }

    #[test]
    fn identity_matmul() {
        let a = mat([[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(matmul(&a, &mat([[1.0, 0.0], [0.0, 1.0]]), 1.0, 0.0), a);
    }

    #[test]
    fn matmul_values() {
        let d = matmul(&mat([[1.0, 2.0], [3.0, 4.0]]), &mat([[5.0, 6.0], [7.0, 8.0]]), 1.0, 0.0);
        assert_eq!(d, mat([[19.0, 22.0], [43.0, 50.0]]));
    }

    #[test]
    fn dot_with_accumulate() {
        let spec = parse_einsum("i,i->").unwrap();
        let v = TensorDesc::column_major(DType::R64, vec![3]).unwrap();
        let s = TensorDesc::scalar(DType::R64);
        let plan = make_plan(&spec, &v, &v, &s, &s, None).unwrap();
        let (x, y, c) = (vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![10.0]);
        let mut out = vec![0.0];
        let mut dv = TensorViewMut::new(&s, &mut out, 0).unwrap();
        let status = contract(
            &plan,
            r64(2.0),
            &TensorView::new(&v, &x, 0).unwrap(),
            &TensorView::new(&v, &y, 0).unwrap(),
            r64(1.0),
            Addend::Separate(TensorView::new(&s, &c, 0).unwrap()),
            &mut dv,
        )
        .unwrap();
        assert_eq!(out, [74.0]);
        assert_eq!(status.elements_written, 1);
        assert_eq!(status.multiply_adds, 3);
    }

    #[test]
    fn alpha_zero_skips_inputs_and_beta_zero_skips_c() {
        let nan = f64::NAN;
        let d = matmul(&[nan; 4], &[nan; 4], 0.0, 0.0);
        assert_eq!(d, [0.0; 4]);

        let spec = parse_einsum("ij,jk->ik").unwrap();
        let desc = TensorDesc::column_major(DType::R64, vec![2, 2]).unwrap();
        let plan = make_plan(&spec, &desc, &desc, &desc, &desc, None).unwrap();
        let a = vec![nan; 4];
        let c = vec![1.0, 2.0, 3.0, 4.0];
        let mut out = vec![0.0; 4];
        let mut dv = TensorViewMut::new(&desc, &mut out, 0).unwrap();
        let av = TensorView::new(&desc, &a, 0).unwrap();
        let status = contract(
            &plan,
            r64(0.0),
            &av,
            &av,
            r64(1.0),
            Addend::Separate(TensorView::new(&desc, &c, 0).unwrap()),
            &mut dv,
        )
        .unwrap();
        assert_eq!(out, c);
        assert_eq!(status.multiply_adds, 0);

        let d = {
            let a = mat([[1.0, 2.0], [3.0, 4.0]]);
            let cnan = vec![nan; 4];
            let mut out = vec![0.0; 4];
            let mut dv = TensorViewMut::new(&desc, &mut out, 0).unwrap();
            let av = TensorView::new(&desc, &a, 0).unwrap();
            contract(
                &plan,
                r64(1.0),
                &av,
                &av,
                r64(0.0),
                Addend::Separate(TensorView::new(&desc, &cnan, 0).unwrap()),
                &mut dv,
            )
            .unwrap();
            out
        };
        assert!(d.iter().all(|x: &f64| x.is_finite()));
    }

    #[test]
    fn in_place_update() {
        let spec = parse_einsum("ij,jk->ik").unwrap();
        let desc = TensorDesc::column_major(DType::R64, vec![2, 2]).unwrap();
        let plan = make_plan(&spec, &desc, &desc, &desc, &desc, None).unwrap();
        let a = mat([[1.0, 2.0], [3.0, 4.0]]);
        let id = mat([[1.0, 0.0], [0.0, 1.0]]);
        let mut out = vec![1.0; 4];
        let mut dv = TensorViewMut::new(&desc, &mut out, 0).unwrap();
        contract(
            &plan,
            r64(1.0),
            &TensorView::new(&desc, &a, 0).unwrap(),
            &TensorView::new(&desc, &id, 0).unwrap(),
            r64(2.0),
            Addend::InPlace,
            &mut dv,
        )
        .unwrap();
        assert_eq!(out, mat([[3.0, 4.0], [5.0, 6.0]]));
    }

    #[test]
    fn complex_scalar_on_real_tensors_rejected() {
        let spec = parse_einsum("i,i->").unwrap();
        let v = TensorDesc::column_major(DType::R64, vec![1]).unwrap();
        let s = TensorDesc::scalar(DType::R64);
        let plan = make_plan(&spec, &v, &v, &s, &s, None).unwrap();
        let x = vec![1.0];
        let mut out = vec![0.0];
        let mut dv = TensorViewMut::new(&s, &mut out, 0).unwrap();
        let xv = TensorView::new(&v, &x, 0).unwrap();
        let err = contract(
            &plan,
            ScalarValue::new(DType::C64, 1.0, 1.0),
            &xv,
            &xv,
            r64(0.0),
            Addend::InPlace,
            &mut dv,
        )
        .unwrap_err();
        assert_eq!(err.code(), ErrorCode::DtypeMismatch);
        // a complex-typed scalar with zero imaginary part is fine
        contract(
            &plan,
            ScalarValue::new(DType::C64, 3.0, 0.0),
            &xv,
            &xv,
            r64(0.0),
            Addend::InPlace,
            &mut dv,
        )
        .unwrap();
        assert_eq!(out, [3.0]);
    }

    #[test]
    fn view_must_conform_to_plan() {
        let spec = parse_einsum("i,i->").unwrap();
        let v = TensorDesc::column_major(DType::R64, vec![2]).unwrap();
        let other = TensorDesc::new(DType::R64, vec![2], vec![2]).unwrap();
        let s = TensorDesc::scalar(DType::R64);
        let plan = make_plan(&spec, &v, &v, &s, &s, None).unwrap();
        let x = vec![1.0; 4];
        let mut out = vec![0.0];
        let mut dv = TensorViewMut::new(&s, &mut out, 0).unwrap();
        let good = TensorView::new(&v, &x, 0).unwrap();
        let bad = TensorView::new(&other, &x, 0).unwrap();
        let err = contract(&plan, r64(1.0), &bad, &good, r64(0.0), Addend::InPlace, &mut dv).unwrap_err();
        assert_eq!(err.code(), ErrorCode::OutOfBounds);
        let xs = vec![1.0f32; 2];
        let v32 = v.with_dtype(DType::R32);
        let wrong_type = TensorView::new(&v32, &xs, 0).unwrap();
        let err = contract(&plan, r64(1.0), &good, &wrong_type, r64(0.0), Addend::InPlace, &mut dv).unwrap_err();
        assert_eq!(err.code(), ErrorCode::DtypeMismatch);
    }

    #[test]
    fn mixed_precision_casts_once() {
        // r32 inputs, r64 output: compute in r64
        let spec = parse_einsum("i,i->").unwrap();
        let v = TensorDesc::column_major(DType::R32, vec![2]).unwrap();
        let s = TensorDesc::scalar(DType::R64);
        let plan = make_plan(&spec, &v, &v, &s, &s, None).unwrap();
        assert_eq!(plan.compute_dtype(), DType::R64);
        let x = vec![0.1f32, 0.2];
        let mut out = vec![0.0];
        let mut dv = TensorViewMut::new(&s, &mut out, 0).unwrap();
        let xv = TensorView::new(&v, &x, 0).unwrap();
        contract(&plan, r64(1.0), &xv, &xv, r64(0.0), Addend::InPlace, &mut dv).unwrap();
        let expected = (0.1f32 as f64) * (0.1f32 as f64) + (0.2f32 as f64) * (0.2f32 as f64);
        assert_eq!(out[0], expected);
    }
}
