//! Einsum-style label strings and their classification.
//!
//! A ternary operation `D := alpha * A * B + beta * C` is described by one
//! label per mode of each operand. After repeated labels inside a tensor are
//! merged (their strides summed), every distinct label falls into exactly one
//! of seven groups depending on which of A, B and D carry it:
//!
//! | group | in A | in B | in D | meaning                         |
//! |-------|------|------|------|---------------------------------|
//! | `h`   | yes  | yes  | yes  | Hadamard (batch) index          |
//! | `p`   | yes  | yes  | no   | contracted index                |
//! | `fa`  | yes  | no   | yes  | free index of A                 |
//! | `fb`  | no   | yes  | yes  | free index of B                 |
//! | `ia`  | yes  | no   | no   | reduced before multiplication   |
//! | `ib`  | no   | yes  | no   | reduced before multiplication   |
//! | `ic`  | no   | no   | yes  | broadcast into the output       |

use std::fmt;

use crate::error::{Result, TappError};
use crate::tensor::TensorDesc;

/// A single alphanumeric ASCII label, case-sensitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(char);

impl Label {
    pub fn new(symbol: char) -> Result<Label> {
        if symbol.is_ascii_alphanumeric() {
            Ok(Label(symbol))
        } else {
            Err(TappError::Parse(format!("invalid label {symbol:?}")))
        }
    }

    pub fn symbol(self) -> char {
        self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parse a run of labels such as `"ijk"`.
pub fn parse_labels(s: &str) -> Result<Vec<Label>> {
    s.chars().filter(|c| !c.is_whitespace()).map(Label::new).collect()
}

pub fn labels_to_string(labels: &[Label]) -> String {
    labels.iter().map(|l| l.0).collect()
}

/// Per-mode labels of the four operands of a ternary operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelSpec {
    pub a: Vec<Label>,
    pub b: Vec<Label>,
    pub c: Vec<Label>,
    pub d: Vec<Label>,
}

impl LabelSpec {
    pub fn new(a: Vec<Label>, b: Vec<Label>, c: Vec<Label>, d: Vec<Label>) -> Self {
        LabelSpec { a, b, c, d }
    }

    /// `c` takes the labels of `d`.
    pub fn with_output(a: Vec<Label>, b: Vec<Label>, d: Vec<Label>) -> Self {
        LabelSpec { a, b, c: d.clone(), d }
    }

    /// The same operation with A and B exchanged.
    pub fn swapped(&self) -> LabelSpec {
        LabelSpec {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }
}

impl fmt::Display for LabelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{}->{}",
            labels_to_string(&self.a),
            labels_to_string(&self.b),
            labels_to_string(&self.d)
        )
    }
}

/// Parse `A_labels "," B_labels "->" D_labels`. Whitespace is ignored and any
/// segment may be empty (a scalar operand). C receives D's labels.
pub fn parse_einsum(expr: &str) -> Result<LabelSpec> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let (lhs, rhs) = compact
        .split_once("->")
        .ok_or_else(|| TappError::Parse(format!("missing '->' in {expr:?}")))?;
    let (a, b) = lhs
        .split_once(',')
        .ok_or_else(|| TappError::Parse(format!("expected two input operands in {expr:?}")))?;
    if b.contains(',') || rhs.contains(',') || rhs.contains("->") {
        return Err(TappError::Parse(format!(
            "expected exactly two inputs and one output in {expr:?}"
        )));
    }
    Ok(LabelSpec::with_output(
        parse_labels(a)?,
        parse_labels(b)?,
        parse_labels(rhs)?,
    ))
}

/// One tensor's labels after merging repeats: one entry per distinct label,
/// in order of first appearance, with the member strides summed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedTensorLabels {
    pub labels: Vec<Label>,
    pub strides: Vec<isize>,
    pub extents: Vec<usize>,
}

impl MergedTensorLabels {
    pub fn position(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn contains(&self, label: Label) -> bool {
        self.position(label).is_some()
    }

    /// Stride of `label`, zero when this tensor does not carry it.
    pub fn stride_of(&self, label: Label) -> isize {
        self.position(label).map_or(0, |k| self.strides[k])
    }

    pub fn extent_of(&self, label: Label) -> Option<usize> {
        self.position(label).map(|k| self.extents[k])
    }
}

/// Collapse repeated labels of one tensor into single modes.
pub fn merge_repeats(labels: &[Label], desc: &TensorDesc) -> Result<MergedTensorLabels> {
    if labels.len() != desc.nmodes() {
        return Err(TappError::Parse(format!(
            "{} labels given for a tensor with {} modes",
            labels.len(),
            desc.nmodes()
        )));
    }
    let mut merged = MergedTensorLabels {
        labels: Vec::new(),
        strides: Vec::new(),
        extents: Vec::new(),
    };
    for ((&label, &extent), &stride) in labels.iter().zip(desc.extents()).zip(desc.strides()) {
        match merged.position(label) {
            Some(k) => {
                if merged.extents[k] != extent {
                    return Err(TappError::ExtentMismatch(format!(
                        "label {label} repeated with extents {} and {extent}",
                        merged.extents[k]
                    )));
                }
                merged.strides[k] += stride;
            }
            None => {
                merged.labels.push(label);
                merged.strides.push(stride);
                merged.extents.push(extent);
            }
        }
    }
    Ok(merged)
}

/// Labels of one group with their extents and per-tensor strides.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelGroup {
    pub labels: Vec<Label>,
    pub extents: Vec<usize>,
    pub strides_a: Vec<isize>,
    pub strides_b: Vec<isize>,
    pub strides_d: Vec<isize>,
}

impl LabelGroup {
    fn push(&mut self, label: Label, extent: usize, a: isize, b: isize, d: isize) {
        self.labels.push(label);
        self.extents.push(extent);
        self.strides_a.push(a);
        self.strides_b.push(b);
        self.strides_d.push(d);
    }

    /// Number of index tuples in this group; 1 for an empty group.
    pub fn size(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }
}

/// The seven disjoint label groups of a ternary operation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassifiedLabels {
    pub p: LabelGroup,
    pub fa: LabelGroup,
    pub fb: LabelGroup,
    pub h: LabelGroup,
    pub ia: LabelGroup,
    pub ib: LabelGroup,
    pub ic: LabelGroup,
}

impl ClassifiedLabels {
    pub fn groups(&self) -> [&LabelGroup; 7] {
        [&self.p, &self.fa, &self.fb, &self.h, &self.ia, &self.ib, &self.ic]
    }
}

fn check_shared_extents(x: &MergedTensorLabels, y: &MergedTensorLabels, names: (&str, &str)) -> Result<()> {
    for (k, &label) in x.labels.iter().enumerate() {
        if let Some(e) = y.extent_of(label) {
            if e != x.extents[k] {
                return Err(TappError::ExtentMismatch(format!(
                    "label {label} has extent {} in {} but {e} in {}",
                    x.extents[k], names.0, names.1
                )));
            }
        }
    }
    Ok(())
}

/// Split the distinct labels of A, B and D into the seven groups.
///
/// Groups that appear in D (`h`, `fa`, `fb`, `ic`) follow D's label order;
/// `p` and `ia` follow A's order and `ib` follows B's.
pub fn classify(a: &MergedTensorLabels, b: &MergedTensorLabels, d: &MergedTensorLabels) -> Result<ClassifiedLabels> {
    check_shared_extents(a, b, ("A", "B"))?;
    check_shared_extents(a, d, ("A", "D"))?;
    check_shared_extents(b, d, ("B", "D"))?;

    let mut out = ClassifiedLabels::default();
    for (k, &label) in d.labels.iter().enumerate() {
        let (sa, sb, sd) = (a.stride_of(label), b.stride_of(label), d.strides[k]);
        let extent = d.extents[k];
        let group = match (a.contains(label), b.contains(label)) {
            (true, true) => &mut out.h,
            (true, false) => &mut out.fa,
            (false, true) => &mut out.fb,
            (false, false) => &mut out.ic,
        };
        group.push(label, extent, sa, sb, sd);
    }
    for (k, &label) in a.labels.iter().enumerate() {
        if d.contains(label) {
            continue;
        }
        let group = if b.contains(label) { &mut out.p } else { &mut out.ia };
        group.push(label, a.extents[k], a.strides[k], b.stride_of(label), 0);
    }
    for (k, &label) in b.labels.iter().enumerate() {
        if !d.contains(label) && !a.contains(label) {
            out.ib.push(label, b.extents[k], 0, b.strides[k], 0);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DType;
    use crate::ErrorCode;
    use std::collections::BTreeSet;

    fn l(s: &str) -> Vec<Label> {
        parse_labels(s).unwrap()
    }

    fn merged(labels: &str, extents: &[usize]) -> MergedTensorLabels {
        let desc = TensorDesc::column_major(DType::R64, extents.to_vec()).unwrap();
        merge_repeats(&l(labels), &desc).unwrap()
    }

    fn set(g: &LabelGroup) -> String {
        let mut v: Vec<char> = g.labels.iter().map(|l| l.symbol()).collect();
        v.sort();
        v.into_iter().collect()
    }

    #[test]
    fn parse_examples() {
        let spec = parse_einsum("ijk,jlk->il").unwrap();
        assert_eq!(spec.a, l("ijk"));
        assert_eq!(spec.b, l("jlk"));
        assert_eq!(spec.d, l("il"));
        assert_eq!(spec.c, spec.d);

        let scalars = parse_einsum(",->").unwrap();
        assert!(scalars.a.is_empty() && scalars.b.is_empty() && scalars.d.is_empty());

        assert_eq!(parse_einsum("ij,jk-il").unwrap_err().code(), ErrorCode::Parse);
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in ["ij->i", "i,j,k->i", "i,j->i->j", "i$,j->i", "i,j->k,l"] {
            assert_eq!(parse_einsum(bad).unwrap_err().code(), ErrorCode::Parse, "{bad}");
        }
        assert_eq!(parse_einsum(" i j , j k -> i k ").unwrap().to_string(), "ij,jk->ik");
    }

    #[test]
    fn merge_sums_strides_of_repeats() {
        // A_{beta alpha beta}, extents [3,2,3], strides [1,3,6]
        let desc = TensorDesc::column_major(DType::R64, vec![3, 2, 3]).unwrap();
        assert_eq!(desc.strides(), [1, 3, 6]);
        let m = merge_repeats(&l("bab"), &desc).unwrap();
        assert_eq!(m.labels, l("ba"));
        assert_eq!(m.strides, [7, 3]);
        assert_eq!(m.extents, [3, 2]);

        let desc = TensorDesc::new(DType::R64, vec![2, 5], vec![1, 4]).unwrap();
        let m = merge_repeats(&l("ij"), &desc).unwrap();
        assert_eq!((m.labels, m.strides, m.extents), (l("ij"), vec![1, 4], vec![2, 5]));

        let desc = TensorDesc::column_major(DType::R64, vec![2, 3]).unwrap();
        let err = merge_repeats(&l("ii"), &desc).unwrap_err();
        assert_eq!(err.code(), ErrorCode::ExtentMismatch);
    }

    #[test]
    fn classify_simple_contraction() {
        // A_{abg} B_{bda} -> D_{dg}
        let c = classify(
            &merged("abg", &[2, 3, 4]),
            &merged("bda", &[3, 5, 2]),
            &merged("dg", &[5, 4]),
        )
        .unwrap();
        assert_eq!(set(&c.p), "ab");
        assert_eq!(set(&c.fa), "g");
        assert_eq!(set(&c.fb), "d");
        for g in [&c.h, &c.ia, &c.ib, &c.ic] {
            assert!(g.is_empty());
        }
        assert_eq!(c.p.size(), 6);
        // strides of the free index of A are zero in B
        assert_eq!(c.fa.strides_b, [0]);
    }

    #[test]
    fn classify_hadamard() {
        // A_{ab} B_{bda} -> D_{da}
        let c = classify(
            &merged("ab", &[2, 2]),
            &merged("bda", &[2, 2, 2]),
            &merged("da", &[2, 2]),
        )
        .unwrap();
        assert_eq!(set(&c.h), "a");
        assert_eq!(set(&c.p), "b");
        assert_eq!(set(&c.fb), "d");
        assert!(c.fa.is_empty());
    }

    #[test]
    fn classify_repeated_and_isolated() {
        // A_{bab} B_{bgdga} -> D_{da}
        let a = merged("bab", &[2, 2, 2]);
        let b = merged("bgdga", &[2, 2, 2, 2, 2]);
        assert_eq!(a.labels, l("ba"));
        assert_eq!(b.labels, l("bgda"));
        let c = classify(&a, &b, &merged("da", &[2, 2])).unwrap();
        assert_eq!(set(&c.h), "a");
        assert_eq!(set(&c.p), "b");
        assert_eq!(set(&c.fb), "d");
        assert_eq!(set(&c.ib), "g");
        assert!(c.fa.is_empty() && c.ia.is_empty() && c.ic.is_empty());
    }

    #[test]
    fn classify_isolated_output() {
        // A_{bab} B_{bgdga} -> D_{dae}
        let c = classify(
            &merged("bab", &[2; 3]),
            &merged("bgdga", &[2; 5]),
            &merged("dae", &[2; 3]),
        )
        .unwrap();
        assert_eq!(set(&c.ic), "e");
        assert_eq!(c.ic.strides_a, [0]);
        assert_eq!(c.ic.strides_b, [0]);
    }

    #[test]
    fn classify_extent_mismatch() {
        let err = classify(&merged("ij", &[2, 3]), &merged("jk", &[4, 2]), &merged("ik", &[2, 2])).unwrap_err();
        assert_eq!(err.code(), ErrorCode::ExtentMismatch);
    }

    #[test]
    fn groups_partition_the_labels() {
        let a = merged("abcx", &[2, 2, 2, 2]);
        let b = merged("bcdy", &[2, 2, 2, 2]);
        let d = merged("acdz", &[2, 2, 2, 2]);
        let c = classify(&a, &b, &d).unwrap();
        let mut all = BTreeSet::new();
        let mut count = 0;
        for g in c.groups() {
            count += g.len();
            all.extend(g.labels.iter().copied());
        }
        let expected: BTreeSet<Label> = l("abcdxyz").into_iter().collect();
        assert_eq!(all, expected);
        assert_eq!(count, expected.len());
        assert_eq!(set(&c.ic), "z");
    }
}
