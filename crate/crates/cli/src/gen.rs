//! Random case generation for the 28 conformance categories.
//!
//! Every instance is a pure function of `(category, seed)`. Tensors have at
//! most four modes, extents lie in `[1, 8]`, and the product of all distinct
//! extents is capped at [`EXTENT_BUDGET`] so the brute-force oracle stays
//! cheap. Element values are uniform in `[-1, 1]`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tapp::tensor::{column_major_strides, DType};

use crate::case::{CaseSpec, Number, OutputSpec, TensorSpec};

pub const CATEGORY_COUNT: u32 = 28;
pub const MAX_MODES: usize = 4;
pub const MAX_EXTENT: usize = 8;
pub const EXTENT_BUDGET: usize = 4096;

pub const CATEGORY_NAMES: [&str; CATEGORY_COUNT as usize] = [
    "hadamard",
    "contraction",
    "commutativity",
    "output permutation",
    "equal extents",
    "outer product",
    "full contraction",
    "zero-mode tensor",
    "one-mode tensor",
    "subtensor, same modes",
    "subtensor, fewer modes",
    "negative strides",
    "negative strides, subtensor same modes",
    "negative strides, subtensor fewer modes",
    "mixed-sign strides",
    "mixed-sign strides, subtensor same modes",
    "mixed-sign strides, subtensor fewer modes",
    "double precision",
    "single complex",
    "double complex",
    "zero stride input",
    "isolated indices",
    "repeated indices",
    "hadamard and free",
    "hadamard and contracted",
    "error: extent mismatch",
    "error: C and D extents differ",
    "error: aliased output",
];

/// Seed of instance `iteration` of `category` within a suite run.
pub fn instance_seed(seed: u64, category: u32, iteration: u64) -> u64 {
    // splitmix64 finalizer over the packed coordinates
    let mut z = seed
        .wrapping_add((category as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(iteration.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    h: usize,
    p: usize,
    fa: usize,
    fb: usize,
    ia: usize,
    ib: usize,
    rep_a: usize,
    rep_b: usize,
    rep_d: usize,
}

impl Counts {
    fn modes_a(&self) -> usize {
        self.h + self.p + self.fa + self.ia + self.rep_a
    }

    fn modes_b(&self) -> usize {
        self.h + self.p + self.fb + self.ib + self.rep_b
    }

    fn modes_d(&self) -> usize {
        self.h + self.fa + self.fb + self.rep_d
    }

    fn fits(&self) -> bool {
        self.modes_a() <= MAX_MODES && self.modes_b() <= MAX_MODES && self.modes_d() <= MAX_MODES
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Signs {
    Positive,
    Negative,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sub {
    None,
    SameModes,
    FewerModes,
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    signs: Signs,
    sub: Sub,
}

const DENSE: Layout = Layout {
    signs: Signs::Positive,
    sub: Sub::None,
};

struct Draft {
    a: Vec<char>,
    b: Vec<char>,
    d: Vec<char>,
    extent: Vec<(char, usize)>,
}

impl Draft {
    fn extent_of(&self, l: char) -> usize {
        self.extent.iter().find(|(c, _)| *c == l).expect("known label").1
    }

    fn set_extent(&mut self, l: char, e: usize) {
        for slot in &mut self.extent {
            if slot.0 == l {
                slot.1 = e;
            }
        }
    }

    fn extents(&self, labels: &[char]) -> Vec<usize> {
        labels.iter().map(|&l| self.extent_of(l)).collect()
    }

    fn einsum(&self) -> String {
        let s = |v: &[char]| v.iter().collect::<String>();
        format!("{},{}->{}", s(&self.a), s(&self.b), s(&self.d))
    }
}

fn draw_counts(rng: &mut ChaCha8Rng, ok: impl Fn(&Counts) -> bool) -> Counts {
    loop {
        let c = Counts {
            h: rng.gen_range(0..=2),
            p: rng.gen_range(0..=2),
            fa: rng.gen_range(0..=2),
            fb: rng.gen_range(0..=2),
            ..Counts::default()
        };
        if c.fits() && ok(&c) {
            return c;
        }
    }
}

fn draw_general(rng: &mut ChaCha8Rng) -> Counts {
    draw_counts(rng, |c| c.h + c.p + c.fa + c.fb > 0)
}

fn build_labels(rng: &mut ChaCha8Rng, counts: &Counts) -> Draft {
    let mut pool: Vec<char> = ('a'..='z').collect();
    pool.shuffle(rng);
    let mut take = |n: usize| -> Vec<char> { pool.drain(..n).collect() };
    let (h, p, fa, fb, ia, ib) = (
        take(counts.h),
        take(counts.p),
        take(counts.fa),
        take(counts.fb),
        take(counts.ia),
        take(counts.ib),
    );
    let mut a: Vec<char> = [&h, &p, &fa, &ia].into_iter().flatten().copied().collect();
    let mut b: Vec<char> = [&h, &p, &fb, &ib].into_iter().flatten().copied().collect();
    let mut d: Vec<char> = [&h, &fa, &fb].into_iter().flatten().copied().collect();
    for (labels, reps) in [(&mut a, counts.rep_a), (&mut b, counts.rep_b), (&mut d, counts.rep_d)] {
        for _ in 0..reps {
            let l = *labels.choose(rng).expect("repeats need a label");
            labels.push(l);
        }
        labels.shuffle(rng);
    }
    let mut extent: Vec<(char, usize)> = Vec::new();
    for &l in a.iter().chain(&b).chain(&d) {
        if !extent.iter().any(|(c, _)| *c == l) {
            extent.push((l, rng.gen_range(1..=MAX_EXTENT)));
        }
    }
    let mut draft = Draft { a, b, d, extent };
    fit_budget(&mut draft);
    draft
}

fn fit_budget(draft: &mut Draft) {
    while draft.extent.iter().map(|x| x.1).product::<usize>() > EXTENT_BUDGET {
        let largest = draft.extent.iter_mut().max_by_key(|x| x.1).expect("nonempty");
        largest.1 -= 1;
    }
}

fn value(rng: &mut ChaCha8Rng, dtype: DType) -> Number {
    let re = rng.gen_range(-1.0..=1.0);
    if dtype.is_complex() {
        Number::Complex([re, rng.gen_range(-1.0..=1.0)])
    } else {
        Number::Real(re)
    }
}

/// Strides, base and buffer length for a view of `extents` with `layout`.
fn strided(rng: &mut ChaCha8Rng, extents: &[usize], layout: Layout) -> (Vec<isize>, usize, usize) {
    // parent tensor: view modes plus, for FewerModes, extra fixed-index modes
    let mut parent: Vec<(usize, Option<usize>)> = extents
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let grow = if layout.sub == Sub::None {
                0
            } else {
                rng.gen_range(0..=2)
            };
            (e + grow, Some(k))
        })
        .collect();
    if layout.sub == Sub::FewerModes {
        for _ in 0..rng.gen_range(1..=2) {
            let at = rng.gen_range(0..=parent.len());
            parent.insert(at, (rng.gen_range(2..=3), None));
        }
    }
    let mut order: Vec<usize> = (0..parent.len()).collect();
    order.shuffle(rng);
    let permuted: Vec<usize> = order.iter().map(|&k| parent[k].0).collect();
    let dense = column_major_strides(&permuted);
    let mut magnitude = vec![0isize; parent.len()];
    for (pos, &k) in order.iter().enumerate() {
        magnitude[k] = dense[pos];
    }

    let n = extents.len();
    let negative: Vec<bool> = match layout.signs {
        Signs::Positive => vec![false; n],
        Signs::Negative => vec![true; n],
        Signs::Mixed => {
            let mut v: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            if n >= 2 {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                v[i] = true;
                v[j] = false;
            } else if n == 1 {
                v[0] = true;
            }
            v
        }
    };

    let mut strides = vec![0isize; n];
    let mut base = 0usize;
    for (k, &(pe, view)) in parent.iter().enumerate() {
        let s = magnitude[k] as usize;
        match view {
            Some(m) => {
                let start = rng.gen_range(0..=pe - extents[m]);
                if negative[m] {
                    strides[m] = -(s as isize);
                    base += (start + extents[m] - 1) * s;
                } else {
                    strides[m] = s as isize;
                    base += start * s;
                }
            }
            None => base += rng.gen_range(0..pe) * s,
        }
    }
    let len: usize = parent.iter().map(|x| x.0).product();
    // guard band around the parent
    let pad = rng.gen_range(0..=2);
    (strides, base + pad, len + pad + rng.gen_range(0..=2))
}

fn input(rng: &mut ChaCha8Rng, dtype: DType, extents: Vec<usize>, layout: Layout) -> TensorSpec {
    let (strides, base, len) = strided(rng, &extents, layout);
    TensorSpec {
        dtype: dtype.name().into(),
        extents,
        strides: Some(strides),
        base,
        data: (0..len).map(|_| value(rng, dtype)).collect(),
    }
}

fn output(rng: &mut ChaCha8Rng, dtype: DType, extents: Vec<usize>, layout: Layout) -> OutputSpec {
    let (strides, base, _) = strided(rng, &extents, layout);
    OutputSpec {
        dtype: dtype.name().into(),
        extents,
        strides: Some(strides),
        base: Some(base),
    }
}

fn draw_dtypes(rng: &mut ChaCha8Rng) -> [DType; 4] {
    if rng.gen_bool(0.5) {
        [*DType::ALL.choose(rng).expect("nonempty"); 4]
    } else {
        std::array::from_fn(|_| *DType::ALL.choose(rng).expect("nonempty"))
    }
}

fn scalar(rng: &mut ChaCha8Rng, complex: bool, zero_chance: f64) -> Number {
    if rng.gen_bool(zero_chance) {
        return Number::Real(0.0);
    }
    let re = rng.gen_range(-1.0..=1.0);
    if complex {
        Number::Complex([re, rng.gen_range(-1.0..=1.0)])
    } else {
        Number::Real(re)
    }
}

struct Plan {
    draft: Draft,
    dtypes: [DType; 4],
    layouts: [Layout; 4],
}

fn assemble(rng: &mut ChaCha8Rng, plan: Plan) -> CaseSpec {
    let Plan { draft, dtypes, layouts } = plan;
    let complex = dtypes.iter().any(|d| d.is_complex());
    let alpha = scalar(rng, complex, 0.02);
    let beta = scalar(rng, complex, 0.1);
    let ea = draft.extents(&draft.a);
    let eb = draft.extents(&draft.b);
    let ed = draft.extents(&draft.d);
    CaseSpec {
        einsum: draft.einsum(),
        alpha,
        beta,
        a: input(rng, dtypes[0], ea, layouts[0]),
        b: input(rng, dtypes[1], eb, layouts[1]),
        c: Some(input(rng, dtypes[2], ed.clone(), layouts[2])),
        d: output(rng, dtypes[3], ed, layouts[3]),
    }
}

/// Generate the instance of `category` (1 to 28) for `seed`.
///
/// # Panics
/// If `category` is outside `1..=28`.
pub fn generate(category: u32, seed: u64) -> CaseSpec {
    assert!(
        (1..=CATEGORY_COUNT).contains(&category),
        "category {category} out of range"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((category as u64) << 56));
    let rng = &mut rng;
    let counts = match category {
        1 => draw_counts(rng, |c| c.h >= 1 && c.p + c.fa + c.fb == 0),
        2..=4 => draw_counts(rng, |c| c.p >= 1 && c.h == 0 && (category != 4 || c.fa + c.fb >= 2)),
        6 => draw_counts(rng, |c| c.fa >= 1 && c.fb >= 1 && c.p + c.h == 0),
        7 => draw_counts(rng, |c| c.p >= 1 && c.h + c.fa + c.fb == 0),
        8 => match rng.gen_range(0..4) {
            0 => draw_counts(rng, |c| c.h + c.p + c.fa == 0 && c.fb >= 1),
            1 => draw_counts(rng, |c| c.h + c.p + c.fb == 0 && c.fa >= 1),
            2 => draw_counts(rng, |c| c.p >= 1 && c.h + c.fa + c.fb == 0),
            _ => Counts::default(),
        },
        9 => draw_counts(rng, |c| [c.modes_a(), c.modes_b(), c.modes_d()].contains(&1)),
        22 => {
            let mut c = draw_counts(rng, |c| c.modes_a() < MAX_MODES && c.modes_b() < MAX_MODES);
            match rng.gen_range(0..3) {
                0 => c.ia = 1,
                1 => c.ib = 1,
                _ => {
                    c.ia = 1;
                    c.ib = 1;
                }
            }
            c
        }
        23 => loop {
            let mut c = draw_general(rng);
            c.rep_a = rng.gen_range(0..=1);
            c.rep_b = rng.gen_range(0..=1);
            if c.rep_a + c.rep_b == 0 {
                c.rep_a = 1;
            }
            if c.modes_d() > 0 && rng.gen_bool(0.3) {
                c.rep_d = 1;
            }
            let nonempty = (c.rep_a == 0 || c.modes_a() > c.rep_a)
                && (c.rep_b == 0 || c.modes_b() > c.rep_b)
                && (c.rep_d == 0 || c.modes_d() > c.rep_d);
            if c.fits() && nonempty {
                break c;
            }
        },
        24 => draw_counts(rng, |c| c.h >= 1 && c.fa + c.fb >= 1 && c.p == 0),
        25 => draw_counts(rng, |c| c.h >= 1 && c.p >= 1),
        26 => draw_counts(rng, |c| c.h + c.p >= 1),
        28 => draw_counts(rng, |c| c.h + c.fa + c.fb >= 1),
        _ => draw_general(rng),
    };
    let mut draft = build_labels(rng, &counts);

    if category == 5 {
        let mut e = rng.gen_range(1..=MAX_EXTENT);
        while e.pow(draft.extent.len() as u32) > EXTENT_BUDGET {
            e -= 1;
        }
        for slot in &mut draft.extent {
            slot.1 = e;
        }
    }

    let dtypes = match category {
        18 => [DType::R64; 4],
        19 => [DType::C32; 4],
        20 => [DType::C64; 4],
        _ => draw_dtypes(rng),
    };
    let layout = |signs, sub| Layout { signs, sub };
    let shared = match category {
        10 => layout(Signs::Positive, Sub::SameModes),
        11 => layout(Signs::Positive, Sub::FewerModes),
        12 => layout(Signs::Negative, Sub::None),
        13 => layout(Signs::Negative, Sub::SameModes),
        14 => layout(Signs::Negative, Sub::FewerModes),
        15 => layout(Signs::Mixed, Sub::None),
        16 => layout(Signs::Mixed, Sub::SameModes),
        17 => layout(Signs::Mixed, Sub::FewerModes),
        _ => DENSE,
    };

    match category {
        26 => return extent_mismatch(rng, draft, dtypes),
        27 => return output_mismatch(rng, draft, dtypes),
        28 => return aliased_output(rng, draft, dtypes),
        _ => {}
    }

    let mut spec = assemble(
        rng,
        Plan {
            draft,
            dtypes,
            layouts: [shared; 4],
        },
    );
    if category == 21 {
        zero_stride(rng, &mut spec);
    }
    spec
}

/// Set one stride of A or B to zero, preferring a mode with extent > 1.
fn zero_stride(rng: &mut ChaCha8Rng, spec: &mut CaseSpec) {
    let mut choices: Vec<(bool, usize)> = Vec::new();
    for (is_a, t) in [(true, &spec.a), (false, &spec.b)] {
        for (k, &e) in t.extents.iter().enumerate() {
            if e > 1 {
                choices.push((is_a, k));
            }
        }
    }
    if choices.is_empty() {
        for (is_a, t) in [(true, &spec.a), (false, &spec.b)] {
            choices.extend((0..t.extents.len()).map(|k| (is_a, k)));
        }
    }
    if let Some(&(is_a, k)) = choices.choose(rng) {
        let t = if is_a { &mut spec.a } else { &mut spec.b };
        t.strides.as_mut().expect("generated")[k] = 0;
    }
}

fn extent_mismatch(rng: &mut ChaCha8Rng, draft: Draft, dtypes: [DType; 4]) -> CaseSpec {
    let shared: Vec<char> = draft.a.iter().copied().filter(|l| draft.b.contains(l)).collect();
    let label = *shared.choose(rng).expect("a shared label");
    let e = draft.extent_of(label);
    let wrong = if e < MAX_EXTENT { e + 1 } else { e - 1 };
    let mut spec = assemble(
        rng,
        Plan {
            draft,
            dtypes,
            layouts: [DENSE; 4],
        },
    );
    let parsed = tapp::labels::parse_einsum(&spec.einsum).expect("generated");
    let mut eb = spec.b.extents.clone();
    for (k, l) in parsed.b.iter().enumerate() {
        if l.symbol() == label {
            eb[k] = wrong;
        }
    }
    spec.b = input(rng, dtypes[1], eb, DENSE);
    spec
}

fn output_mismatch(rng: &mut ChaCha8Rng, draft: Draft, dtypes: [DType; 4]) -> CaseSpec {
    let mut spec = assemble(
        rng,
        Plan {
            draft,
            dtypes,
            layouts: [DENSE; 4],
        },
    );
    let mut ec = spec.d.extents.clone();
    if ec.is_empty() {
        ec.push(rng.gen_range(2..=MAX_EXTENT));
    } else {
        let k = rng.gen_range(0..ec.len());
        ec[k] = if ec[k] < MAX_EXTENT { ec[k] + 1 } else { ec[k] - 1 };
    }
    spec.c = Some(input(rng, dtypes[2], ec, DENSE));
    spec
}

fn aliased_output(rng: &mut ChaCha8Rng, mut draft: Draft, dtypes: [DType; 4]) -> CaseSpec {
    let target = *draft.d.choose(rng).expect("D has modes");
    if draft.extent_of(target) < 2 {
        draft.set_extent(target, 2);
        fit_budget(&mut draft);
    }
    let mut spec = assemble(
        rng,
        Plan {
            draft,
            dtypes,
            layouts: [DENSE; 4],
        },
    );
    let parsed = tapp::labels::parse_einsum(&spec.einsum).expect("generated");
    let k = parsed.d.iter().position(|l| l.symbol() == target).expect("target in D");
    let strides = spec.d.strides.as_mut().expect("generated");
    let other = (0..strides.len()).find(|&j| j != k && spec.d.extents[j] >= 2 && parsed.d[j] != parsed.d[k]);
    match other {
        Some(j) if rng.gen_bool(0.5) => strides[k] = strides[j],
        _ => strides[k] = 0,
    }
    spec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        for cat in 1..=CATEGORY_COUNT {
            assert_eq!(generate(cat, 7), generate(cat, 7), "category {cat}");
        }
        assert_ne!(generate(2, 1), generate(2, 2));
    }

    #[test]
    fn every_category_materializes() {
        for cat in 1..=CATEGORY_COUNT {
            for seed in 0..30 {
                let spec = generate(cat, seed);
                let case = spec.materialize().unwrap_or_else(|e| panic!("{cat}/{seed}: {e}"));
                for t in [&case.a, &case.b, &case.c, &case.d] {
                    assert!(t.desc.nmodes() <= MAX_MODES);
                    assert!(t.desc.extents().iter().all(|&e| (1..=MAX_EXTENT).contains(&e)));
                }
            }
        }
    }

    #[test]
    fn layouts_match_category() {
        for seed in 0..30 {
            let spec = generate(12, seed);
            for t in [&spec.a, &spec.b] {
                assert!(t.strides.as_ref().unwrap().iter().all(|&s| s < 0));
            }
            let spec = generate(21, seed);
            let zeros = [&spec.a, &spec.b]
                .iter()
                .flat_map(|t| t.strides.clone().unwrap())
                .filter(|&s| s == 0)
                .count();
            assert_eq!(zeros, 1);
        }
    }
}
