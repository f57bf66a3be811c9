use tapp::api::*;
use tapp::tensor::{DType, ScalarValue};
use tapp::ErrorCode;

fn handle() -> Handle {
    let mut h = None;
    assert_eq!(tapp_create_handle(&mut h), ErrorCode::Ok);
    h.unwrap()
}

fn info(h: &Handle, dtype: DType, extents: &[i64]) -> TensorInfo {
    let mut strides = Vec::new();
    let mut s = 1;
    for &e in extents {
        strides.push(s);
        s *= e;
    }
    let mut out = None;
    assert_eq!(
        tapp_create_tensor_info(h, dtype, extents.len(), extents, &strides, &mut out),
        ErrorCode::Ok
    );
    out.unwrap()
}

fn executor(h: &Handle) -> Executor {
    let mut e = None;
    assert_eq!(tapp_get_default_executor(h, &mut e), ErrorCode::Ok);
    e.unwrap()
}

fn r64(x: f64) -> ScalarValue {
    ScalarValue::real(DType::R64, x)
}

#[test]
fn handle_lifecycle() {
    let h = handle();
    assert!(h.is_live());
    let mut slot = Some(h.clone());
    assert_eq!(tapp_destroy_handle(&mut slot), ErrorCode::Ok);
    assert!(slot.is_none());
    assert!(!h.is_live());
    assert_eq!(tapp_destroy_handle(&mut slot), ErrorCode::InvalidHandle);
    let mut again = Some(h.clone());
    assert_eq!(tapp_destroy_handle(&mut again), ErrorCode::InvalidHandle);

    let mut out = None;
    assert_eq!(
        tapp_create_tensor_info(&h, DType::R64, 1, &[2], &[1], &mut out),
        ErrorCode::InvalidHandle
    );
    assert!(out.is_none());
}

#[test]
fn default_executor_is_constant() {
    let h = handle();
    let other = handle();
    assert_eq!(executor(&h), executor(&h));
    assert_ne!(executor(&h), executor(&other));
    assert_ne!(h.id(), other.id());
}

#[test]
fn tensor_info_validation() {
    let h = handle();
    let mut out = None;
    assert_eq!(
        tapp_create_tensor_info(&h, DType::R32, 2, &[2, 0], &[1, 2], &mut out),
        ErrorCode::ExtentMismatch
    );
    assert_eq!(
        tapp_create_tensor_info(&h, DType::R32, 2, &[2, 3], &[1], &mut out),
        ErrorCode::ExtentMismatch
    );
    assert_eq!(
        tapp_create_tensor_info(&h, DType::R32, 3, &[2, 3], &[1, 2], &mut out),
        ErrorCode::ExtentMismatch
    );
    assert!(out.is_none());
    assert_eq!(
        tapp_create_tensor_info(&h, DType::R32, 0, &[], &[], &mut out),
        ErrorCode::Ok
    );
    assert_eq!(out.as_ref().unwrap().desc().nmodes(), 0);
    assert_eq!(tapp_destroy_tensor_info(&mut out), ErrorCode::Ok);
    assert_eq!(tapp_destroy_tensor_info(&mut out), ErrorCode::InvalidHandle);
}

#[test]
fn objects_from_different_handles_do_not_mix() {
    let (h1, h2) = (handle(), handle());
    let a = info(&h1, DType::R64, &[2]);
    let b = info(&h2, DType::R64, &[2]);
    let mut plan = None;
    let code = tapp_create_contraction(&h1, (&a, "i"), (&b, "i"), (&a, ""), (&a, ""), None, &mut plan);
    assert_eq!(code, ErrorCode::InvalidHandle);

    let d = info(&h1, DType::R64, &[]);
    let b = info(&h1, DType::R64, &[2]);
    let code = tapp_create_contraction(&h1, (&a, "i"), (&b, "i"), (&d, ""), (&d, ""), None, &mut plan);
    assert_eq!(code, ErrorCode::Ok);
    let mut out = vec![0.0];
    let x = vec![1.0, 2.0];
    let code = tapp_execute_product(
        plan.as_ref().unwrap(),
        &executor(&h2),
        r64(1.0),
        (&x).into(),
        (&x).into(),
        r64(0.0),
        None,
        (&mut out).into(),
        None,
    );
    assert_eq!(code, ErrorCode::InvalidHandle);
    assert_eq!(out, [0.0]);
}

#[test]
fn planning_errors_surface_as_codes() {
    let h = handle();
    let a = info(&h, DType::R64, &[2, 3]);
    let b = info(&h, DType::R64, &[3, 4]);
    let d = info(&h, DType::R64, &[2, 4]);
    let wrong = info(&h, DType::R64, &[2, 5]);
    let mut plan = None;
    let mut make = |la, lb, c: &TensorInfo, ld| {
        plan = None;
        tapp_create_contraction(&h, (&a, la), (&b, lb), (c, ld), (&d, ld), None, &mut plan)
    };
    assert_eq!(make("ij", "jk", &d, "ik"), ErrorCode::Ok);
    assert_eq!(make("ij", "kj", &d, "ik"), ErrorCode::ExtentMismatch);
    assert_eq!(make("ij", "jk", &wrong, "ik"), ErrorCode::OutputMismatch);
    assert_eq!(make("ij", "jk", &d, "il"), ErrorCode::Unsupported);
    assert_eq!(make("i-", "jk", &d, "ik"), ErrorCode::Parse);
    assert_eq!(make("ijk", "jk", &d, "ik"), ErrorCode::Parse);
}

#[test]
fn status_is_optional_and_records_the_run() {
    let h = handle();
    let exec = executor(&h);
    let a = info(&h, DType::R64, &[2, 3]);
    let b = info(&h, DType::R64, &[3, 2]);
    let d = info(&h, DType::R64, &[2, 2]);
    let mut plan = None;
    tapp_create_contraction(&h, (&a, "ij"), (&b, "jk"), (&d, "ik"), (&d, "ik"), None, &mut plan);
    let plan = plan.unwrap();
    let (x, y) = (vec![1.0; 6], vec![1.0; 6]);

    let mut out = vec![0.0; 4];
    let code = tapp_execute_product(
        &plan,
        &exec,
        r64(1.0),
        (&x).into(),
        (&y).into(),
        r64(0.0),
        None,
        (&mut out).into(),
        None,
    );
    assert_eq!(code, ErrorCode::Ok);
    assert_eq!(out, [3.0; 4]);

    // in-place: C is read from D's buffer
    let mut status = None;
    let code = tapp_execute_product(
        &plan,
        &exec,
        r64(1.0),
        (&x).into(),
        (&y).into(),
        r64(2.0),
        None,
        (&mut out).into(),
        Some(&mut status),
    );
    assert_eq!(code, ErrorCode::Ok);
    assert_eq!(out, [9.0; 4]);
    let record = status.as_ref().unwrap().record();
    assert_eq!(record.error, ErrorCode::Ok);
    assert_eq!(record.elements_written, 4);
    assert_eq!(record.multiply_adds, 12);
    assert_eq!(record.executor, Some(exec.id()));

    // a failed execution leaves the status slot alone
    let short = vec![1.0; 5];
    let mut status = None;
    let code = tapp_execute_product(
        &plan,
        &exec,
        r64(1.0),
        (&short).into(),
        (&y).into(),
        r64(0.0),
        None,
        (&mut out).into(),
        Some(&mut status),
    );
    assert_eq!(code, ErrorCode::OutOfBounds);
    assert!(status.is_none());
}

#[test]
fn descriptors_are_reusable() {
    let h = handle();
    let exec = executor(&h);
    let a = info(&h, DType::C64, &[3, 2]);
    let b = info(&h, DType::C64, &[2]);
    let mut plan = None;
    tapp_create_contraction(&h, (&a, "ij"), (&b, "j"), (&a, "ij"), (&a, "ij"), None, &mut plan);
    let plan = plan.unwrap();
    use num_complex::Complex64 as C;
    for set in 0..4 {
        let s = set as f64;
        let x: Vec<C> = (0..6).map(|k| C::new(k as f64 + s, -s)).collect();
        let y = vec![C::new(1.0, s), C::new(s, 1.0)];
        let c: Vec<C> = (0..6).map(|k| C::new(0.0, k as f64)).collect();
        let mut d = vec![C::new(0.0, 0.0); 6];
        let alpha = ScalarValue::new(DType::C64, 1.0, s);
        let code = tapp_execute_product(
            &plan,
            &exec,
            alpha,
            (&x).into(),
            (&y).into(),
            r64(1.0),
            Some((&c).into()),
            (&mut d).into(),
            None,
        );
        assert_eq!(code, ErrorCode::Ok);
        for i in 0..3 {
            for j in 0..2 {
                let expected = alpha.to_c64() * x[i + 3 * j] * y[j] + c[i + 3 * j];
                assert!((d[i + 3 * j] - expected).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn binary_and_unary_through_the_api() {
    let h = handle();
    let exec = executor(&h);
    let m = info(&h, DType::R64, &[2, 3]);
    let v = info(&h, DType::R64, &[2]);
    let a = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];

    let mut unary = None;
    assert_eq!(
        tapp_create_unary(&h, (&m, "ij"), (&v, "i"), None, &mut unary),
        ErrorCode::Ok
    );
    let mut rows = vec![0.0; 2];
    let mut status = None;
    let code = tapp_execute_unary(
        unary.as_ref().unwrap(),
        &exec,
        r64(1.0),
        (&a).into(),
        (&mut rows).into(),
        Some(&mut status),
    );
    assert_eq!(code, ErrorCode::Ok);
    assert_eq!(rows, [9.0, 12.0]);
    assert_eq!(status.unwrap().record().elements_written, 2);

    let mut binary = None;
    assert_eq!(
        tapp_create_binary(&h, (&v, "i"), (&m, "ij"), (&m, "ij"), None, &mut binary),
        ErrorCode::Ok
    );
    let mut c = a.clone();
    let code = tapp_execute_binary(
        binary.as_ref().unwrap(),
        &exec,
        r64(10.0),
        (&rows).into(),
        r64(1.0),
        None,
        (&mut c).into(),
        None,
    );
    assert_eq!(code, ErrorCode::Ok);
    assert_eq!(c, [91.0, 122.0, 93.0, 124.0, 95.0, 126.0]);
}

#[test]
fn key_value_storage() {
    let h = handle();
    let t = info(&h, DType::R32, &[4]);
    assert_eq!(tapp_vkv_set(&t, 1, b"first"), ErrorCode::Ok);
    assert_eq!(tapp_vkv_set(&t, 1, b"second"), ErrorCode::Ok);
    let mut out = Vec::new();
    assert_eq!(tapp_vkv_get(&t, 1, &mut out), ErrorCode::Ok);
    assert_eq!(out, b"second");
    assert_eq!(tapp_vkv_get(&t, 2, &mut out), ErrorCode::KeyNotFound);
    assert_eq!(tapp_vkv_get(&h, 1, &mut out), ErrorCode::KeyNotFound);
    let mut attr = None;
    assert_eq!(tapp_create_attr(&mut attr), ErrorCode::Ok);
    assert_eq!(tapp_vkv_set(attr.as_ref().unwrap(), u64::MAX, &[]), ErrorCode::Ok);
    assert_eq!(tapp_vkv_get(attr.as_ref().unwrap(), u64::MAX, &mut out), ErrorCode::Ok);
    assert!(out.is_empty());
}

#[test]
fn error_strings() {
    for code in ErrorCode::ALL {
        assert_eq!(ErrorCode::from_i32(code.as_i32()), Some(code));
        assert!(!tapp_error_string(code.as_i32()).is_empty());
    }
    assert_eq!(tapp_error_string(0), "success");
    assert_eq!(tapp_error_string(-5), "unknown error");
}
