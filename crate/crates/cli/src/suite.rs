//! The conformance suite: every category, `iterations` instances each.

use num_complex::Complex64;
use serde::Serialize;
use tapp::labels::{labels_to_string, Label};
use tapp::oracle::max_relative_error;
use tapp::ErrorCode;

use crate::case::{Case, CaseSpec, OutputSpec};
use crate::check::{check_case, engine_dense, run_engine, CheckOutcome};
use crate::gen::{generate, instance_seed, CATEGORY_COUNT, CATEGORY_NAMES};

/// At most this many failing cases are kept in a report.
pub const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct CategoryReport {
    pub category: u32,
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub category: u32,
    pub iteration: u64,
    /// Reproduce with `tapp gen --case <category> --seed <instance_seed>`.
    pub instance_seed: u64,
    pub reason: String,
    pub outcome: CheckOutcome,
    pub case: CaseSpec,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub iterations: u64,
    pub passed: u64,
    pub failed: u64,
    pub max_rel_error: f64,
    pub categories: Vec<CategoryReport>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// 0 when every instance passed, otherwise the exit code of the first
    /// failure.
    pub fn exit_code(&self) -> i32 {
        match self.failures.first() {
            None if self.failed == 0 => 0,
            None => 1,
            Some(f) => match f.outcome.exit_code() {
                0 => 1,
                code => code,
            },
        }
    }
}

/// Error code that an invalid-input category must produce.
pub fn expected_error(category: u32) -> Option<ErrorCode> {
    match category {
        26 => Some(ErrorCode::ExtentMismatch),
        27 => Some(ErrorCode::OutputMismatch),
        28 => Some(ErrorCode::Aliasing),
        _ => None,
    }
}

/// Outcome of one instance, its error measure, and a failure reason if any.
fn evaluate(category: u32, spec: &CaseSpec) -> (CheckOutcome, f64, Option<String>) {
    let case = match spec.materialize() {
        Ok(case) => case,
        Err(e) => {
            let outcome = CheckOutcome::Rejected { code: e.code() };
            return (outcome, 0.0, Some(format!("case did not materialize: {e}")));
        }
    };
    let tolerance = case.default_tolerance();
    let outcome = check_case(&case, tolerance, 0.0);
    if let Some(code) = expected_error(category) {
        let reason = match &outcome {
            CheckOutcome::Rejected { code: got } if *got == code => None,
            other => Some(format!(
                "expected {} from engine and oracle, got {other:?}",
                code.name()
            )),
        };
        return (outcome, 0.0, reason);
    }
    let err = match &outcome {
        CheckOutcome::Pass { max_rel_error, .. } => *max_rel_error,
        CheckOutcome::Mismatch { max_rel_error, .. } => {
            return (
                outcome.clone(),
                *max_rel_error,
                Some("engine and oracle disagree".into()),
            )
        }
        other => return (other.clone(), 0.0, Some("unexpected error".into())),
    };
    let extra = match category {
        3 => swapped_agrees(spec, &case, tolerance),
        4 => permuted_agrees(spec, &case, tolerance),
        _ => Ok(()),
    };
    match extra {
        Ok(()) => (outcome, err, None),
        Err(reason) => (outcome, err, Some(reason)),
    }
}

fn engine_values(case: &Case) -> Result<Vec<Complex64>, String> {
    let run = run_engine(case).map_err(|c| format!("engine failed with {}", c.name()))?;
    engine_dense(case, &run.d).map_err(|e| e.to_string())
}

fn materialize(spec: &CaseSpec) -> Result<Case, String> {
    spec.materialize().map_err(|e| e.to_string())
}

/// `A,B->D` and `B,A->D` agree within tolerance.
fn swapped_agrees(spec: &CaseSpec, case: &Case, tolerance: f64) -> Result<(), String> {
    let mut swapped = spec.clone();
    swapped.einsum = case.spec.swapped().to_string();
    std::mem::swap(&mut swapped.a, &mut swapped.b);
    let first = engine_values(case)?;
    let second = engine_values(&materialize(&swapped)?)?;
    let (err, _) = max_relative_error(&second, &first);
    if err <= tolerance {
        Ok(())
    } else {
        Err(format!("swapped operands differ by {err:e}"))
    }
}

/// Values over `from` labels, reordered to `to` labels (same label set).
pub fn reorder(values: &[Complex64], from: &[Label], from_extents: &[usize], to: &[Label]) -> Vec<Complex64> {
    let to_extents: Vec<usize> = to
        .iter()
        .map(|l| from_extents[from.iter().position(|f| f == l).expect("same labels")])
        .collect();
    let mut idx = vec![0; to.len()];
    (0..values.len())
        .map(|_| {
            let mut flat = 0;
            let mut scale = 1;
            for (k, l) in from.iter().enumerate() {
                flat += idx[to.iter().position(|t| t == l).expect("same labels")] * scale;
                scale *= from_extents[k];
            }
            tapp::tensor::odometer_increment(&mut idx, &to_extents);
            values[flat]
        })
        .collect()
}

/// Reversing D's label order (with C's modes permuted alike) permutes the
/// result and nothing else.
fn permuted_agrees(spec: &CaseSpec, case: &Case, tolerance: f64) -> Result<(), String> {
    let n = case.spec.d.len();
    let perm: Vec<usize> = (0..n).rev().collect();
    let pick = |v: &[usize]| perm.iter().map(|&k| v[k]).collect::<Vec<_>>();
    let picks = |v: &[isize]| perm.iter().map(|&k| v[k]).collect::<Vec<_>>();
    let d_labels: Vec<Label> = perm.iter().map(|&k| case.spec.d[k]).collect();

    let mut permuted = spec.clone();
    permuted.einsum = format!(
        "{},{}->{}",
        case.labels_a(),
        case.labels_b(),
        labels_to_string(&d_labels)
    );
    if let Some(c) = permuted.c.as_mut() {
        c.extents = pick(&c.extents);
        c.strides = c.strides.as_deref().map(picks);
    }
    permuted.d = OutputSpec {
        dtype: spec.d.dtype.clone(),
        extents: pick(&spec.d.extents),
        strides: None,
        base: None,
    };
    let first = engine_values(case)?;
    let second = engine_values(&materialize(&permuted)?)?;
    let back = reorder(&second, &d_labels, &pick(case.d.desc.extents()), &case.spec.d);
    let (err, _) = max_relative_error(&back, &first);
    if err <= tolerance {
        Ok(())
    } else {
        Err(format!("permuted output differs by {err:e}"))
    }
}

/// Run `iterations` instances of each selected category (all when
/// `category` is `None`).
pub fn run_suite(seed: u64, iterations: u64, category: Option<u32>) -> SuiteReport {
    let categories: Vec<u32> = match category {
        Some(c) => vec![c],
        None => (1..=CATEGORY_COUNT).collect(),
    };
    let mut report = SuiteReport {
        seed,
        iterations,
        passed: 0,
        failed: 0,
        max_rel_error: 0.0,
        categories: Vec::new(),
        failures: Vec::new(),
    };
    for cat in categories {
        let mut entry = CategoryReport {
            category: cat,
            name: CATEGORY_NAMES[cat as usize - 1],
            passed: 0,
            failed: 0,
            max_rel_error: 0.0,
        };
        for iteration in 0..iterations {
            let s = instance_seed(seed, cat, iteration);
            let spec = generate(cat, s);
            let (outcome, err, reason) = evaluate(cat, &spec);
            entry.max_rel_error = entry.max_rel_error.max(err);
            match reason {
                None => entry.passed += 1,
                Some(reason) => {
                    entry.failed += 1;
                    if report.failures.len() < MAX_RECORDED_FAILURES {
                        report.failures.push(Failure {
                            category: cat,
                            iteration,
                            instance_seed: s,
                            reason,
                            outcome,
                            case: spec,
                        });
                    }
                }
            }
        }
        report.passed += entry.passed;
        report.failed += entry.failed;
        report.max_rel_error = report.max_rel_error.max(entry.max_rel_error);
        report.categories.push(entry);
    }
    report
}
