//! Dyck paths, binary tree shapes, the preorder bijection between them,
//! Catalan convolutions, and marked paths with their block compositions.

use crate::poly::binom;
use crate::stacksort::Permutation;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DyckError {
    #[error("step sequence is not a Dyck path (prefix dips below the diagonal or counts differ)")]
    NotBalanced,
    #[error("path starts with only {found} up steps, {needed} required")]
    TooFewLeadingUps { found: usize, needed: usize },
    #[error("composition sums to {sum} but the permutation has length {len}")]
    CompositionMismatch { sum: usize, len: usize },
    #[error("invalid step character {0:?}, expected 'U' or 'R'")]
    BadStepChar(char),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Step {
    Up,
    Right,
}

/// A lattice path of `U`/`R` steps that stays weakly above the diagonal and
/// ends on it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<DyckPath, DyckError> {
        let mut level: i64 = 0;
        for s in &steps {
            match s {
                Step::Up => level += 1,
                Step::Right => level -= 1,
            }
            if level < 0 {
                return Err(DyckError::NotBalanced);
            }
        }
        if level != 0 {
            return Err(DyckError::NotBalanced);
        }
        Ok(DyckPath { steps })
    }

    pub fn empty() -> DyckPath {
        DyckPath { steps: vec![] }
    }

    pub fn parse(s: &str) -> Result<DyckPath, DyckError> {
        let steps = s
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(Step::Up),
                'R' | 'r' => Ok(Step::Right),
                other => Err(DyckError::BadStepChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        DyckPath::new(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn semilength(&self) -> usize {
        self.steps.len() / 2
    }

    /// Number of up steps minus right steps over the first `i` steps.
    pub fn level(&self, i: usize) -> i64 {
        self.steps[..i]
            .iter()
            .map(|s| if *s == Step::Up { 1 } else { -1 })
            .sum()
    }

    /// A valley is a right step immediately followed by an up step.
    pub fn valleys(&self) -> usize {
        self.steps
            .windows(2)
            .filter(|w| w[0] == Step::Right && w[1] == Step::Up)
            .count()
    }

    pub fn leading_ups(&self) -> usize {
        self.steps.iter().take_while(|s| **s == Step::Up).count()
    }
}

impl fmt::Debug for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", if *s == Step::Up { 'U' } else { 'R' })?;
        }
        Ok(())
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for DyckPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Concatenate path fragments without re-validating intermediate prefixes.
pub(crate) struct PathBuilder {
    steps: Vec<Step>,
}

impl PathBuilder {
    pub fn new() -> PathBuilder {
        PathBuilder { steps: vec![] }
    }

    pub fn ups(&mut self, n: usize) -> &mut Self {
        self.steps.extend(std::iter::repeat_n(Step::Up, n));
        self
    }

    pub fn rights(&mut self, n: usize) -> &mut Self {
        self.steps.extend(std::iter::repeat_n(Step::Right, n));
        self
    }

    pub fn path(&mut self, p: &DyckPath) -> &mut Self {
        self.steps.extend_from_slice(p.steps());
        self
    }

    pub fn finish(self) -> Result<DyckPath, DyckError> {
        DyckPath::new(self.steps)
    }
}

/// An unlabeled binary tree. Node ids are arena indices; the empty shape has
/// no root.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TreeShape {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
    pub root: Option<usize>,
}

impl TreeShape {
    pub fn empty() -> TreeShape {
        TreeShape::default()
    }

    pub fn n_nodes(&self) -> usize {
        self.left.len()
    }

    fn clear(&mut self) {
        self.left.clear();
        self.right.clear();
        self.root = None;
    }

    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n_nodes());
        fn walk(t: &TreeShape, v: Option<usize>, out: &mut Vec<usize>) {
            if let Some(v) = v {
                walk(t, t.left[v], out);
                walk(t, t.right[v], out);
                out.push(v);
            }
        }
        walk(self, self.root, &mut out);
        out
    }

    pub fn inorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n_nodes());
        fn walk(t: &TreeShape, v: Option<usize>, out: &mut Vec<usize>) {
            if let Some(v) = v {
                walk(t, t.left[v], out);
                out.push(v);
                walk(t, t.right[v], out);
            }
        }
        walk(self, self.root, &mut out);
        out
    }

    pub fn right_edge_count(&self) -> usize {
        self.right.iter().filter(|r| r.is_some()).count()
    }

    /// The node reached from the root by following left children.
    pub fn leftmost(&self) -> Option<usize> {
        let mut v = self.root?;
        while let Some(l) = self.left[v] {
            v = l;
        }
        Some(v)
    }
}

/// Encode a binary tree as a Dyck path: complete it to a full binary tree,
/// read in preorder emitting `U` for internal nodes and `R` for leaves, and
/// drop the final leaf.
pub fn tree_to_dyck(shape: &TreeShape) -> DyckPath {
    let mut steps = Vec::with_capacity(2 * shape.n_nodes() + 1);
    fn walk(t: &TreeShape, v: Option<usize>, steps: &mut Vec<Step>) {
        match v {
            Some(v) => {
                steps.push(Step::Up);
                walk(t, t.left[v], steps);
                walk(t, t.right[v], steps);
            }
            None => steps.push(Step::Right),
        }
    }
    walk(shape, shape.root, &mut steps);
    steps.pop();
    DyckPath { steps }
}

/// Inverse of [`tree_to_dyck`]; node ids are allocated in preorder.
pub fn dyck_to_tree(path: &DyckPath) -> TreeShape {
    let mut shape = TreeShape::empty();
    dyck_to_tree_into(path.steps(), &mut shape);
    shape
}

fn dyck_to_tree_into(steps: &[Step], shape: &mut TreeShape) {
    shape.clear();
    // Virtual trailing leaf restores the full-binary preorder word.
    let mut pos = 0usize;
    fn parse(steps: &[Step], pos: &mut usize, shape: &mut TreeShape) -> Option<usize> {
        let step = steps.get(*pos).copied().unwrap_or(Step::Right);
        *pos += 1;
        match step {
            Step::Up => {
                let id = shape.left.len();
                shape.left.push(None);
                shape.right.push(None);
                let l = parse(steps, pos, shape);
                let r = parse(steps, pos, shape);
                shape.left[id] = l;
                shape.right[id] = r;
                Some(id)
            }
            Step::Right => None,
        }
    }
    shape.root = parse(steps, &mut pos, shape);
    debug_assert_eq!(pos, steps.len() + 1);
}

/// Visit every binary tree shape with `n` nodes, in lexicographic order of
/// the corresponding Dyck paths (`U` before `R`).
pub fn for_each_shape<F: FnMut(&TreeShape)>(n: usize, mut f: F) {
    let mut steps = Vec::with_capacity(2 * n);
    let mut shape = TreeShape::empty();
    fn gen<F: FnMut(&TreeShape)>(
        steps: &mut Vec<Step>,
        ups_left: usize,
        rights_left: usize,
        level: usize,
        shape: &mut TreeShape,
        f: &mut F,
    ) {
        if ups_left == 0 && rights_left == 0 {
            dyck_to_tree_into(steps, shape);
            f(shape);
            return;
        }
        if ups_left > 0 {
            steps.push(Step::Up);
            gen(steps, ups_left - 1, rights_left, level + 1, shape, f);
            steps.pop();
        }
        if rights_left > 0 && level > 0 {
            steps.push(Step::Right);
            gen(steps, ups_left, rights_left - 1, level - 1, shape, f);
            steps.pop();
        }
    }
    gen(&mut steps, n, n, 0, &mut shape, &mut f);
}

/// All Dyck paths of semilength `n`, lexicographic with `U` before `R`.
pub fn enumerate_dyck_paths(n: usize) -> Vec<DyckPath> {
    let mut out = vec![];
    let mut steps = Vec::with_capacity(2 * n);
    fn gen(
        steps: &mut Vec<Step>,
        ups: usize,
        rights: usize,
        level: usize,
        out: &mut Vec<DyckPath>,
    ) {
        if ups == 0 && rights == 0 {
            out.push(DyckPath {
                steps: steps.clone(),
            });
            return;
        }
        if ups > 0 {
            steps.push(Step::Up);
            gen(steps, ups - 1, rights, level + 1, out);
            steps.pop();
        }
        if rights > 0 && level > 0 {
            steps.push(Step::Right);
            gen(steps, ups, rights - 1, level - 1, out);
            steps.pop();
        }
    }
    gen(&mut steps, n, n, 0, &mut out);
    out
}

/// Catalan number `C_n`.
pub fn catalan(n: u64) -> u64 {
    u64::try_from(binom(2 * n, n) / (n as u128 + 1)).expect("catalan overflow")
}

/// Catalan convolution `C_n^(k) = (k+1)/(n+k+1) * binom(2n+k, n)`.
pub fn catalan_conv(n: u64, k: u64) -> u64 {
    let v = binom(2 * n + k, n) * (k as u128 + 1) / (n + k + 1) as u128;
    u64::try_from(v).expect("catalan convolution overflow")
}

/// A Dyck path of semilength `n + k` viewed with its first `k` up steps
/// marked; `marked` flags the right steps matching those up steps and
/// `composition` lists the lengths of the maximal blocks of consecutive
/// marked right steps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkedDyck {
    pub path: DyckPath,
    pub k: usize,
    pub marked: Vec<bool>,
    pub composition: Vec<usize>,
}

impl MarkedDyck {
    pub fn n(&self) -> usize {
        self.path.semilength() - self.k
    }
}

impl Serialize for MarkedDyck {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("MarkedDyck", 3)?;
        st.serialize_field("path", &self.path)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("c", &self.composition)?;
        st.end()
    }
}

/// Mark the matches of the first `k` up steps of `path` (parenthesis
/// matching) and derive the block composition.
pub fn mark(path: &DyckPath, k: usize) -> Result<MarkedDyck, DyckError> {
    let found = path.leading_ups();
    if found < k {
        return Err(DyckError::TooFewLeadingUps { found, needed: k });
    }
    let mut marked = vec![false; path.len()];
    let mut stack = Vec::new();
    for (i, s) in path.steps().iter().enumerate() {
        match s {
            Step::Up => stack.push(i),
            Step::Right => {
                let open = stack.pop().expect("balanced path");
                if open < k {
                    marked[i] = true;
                }
            }
        }
    }
    let mut composition = vec![];
    let mut run = 0usize;
    for (i, s) in path.steps().iter().enumerate() {
        if *s == Step::Right && marked[i] {
            run += 1;
        } else if run > 0 {
            composition.push(run);
            run = 0;
        }
    }
    if run > 0 {
        composition.push(run);
    }
    debug_assert_eq!(composition.iter().sum::<usize>(), k);
    Ok(MarkedDyck {
        path: path.clone(),
        k,
        marked,
        composition,
    })
}

/// Descents of `w` internal to the blocks of the composition `c`
/// (weak compositions are allowed; empty blocks contribute nothing).
pub fn des_c(w: &Permutation, c: &[usize]) -> Result<usize, DyckError> {
    let sum: usize = c.iter().sum();
    if sum != w.len() {
        return Err(DyckError::CompositionMismatch { sum, len: w.len() });
    }
    let mut count = 0;
    let mut start = 0;
    for &b in c {
        for i in start..start + b.saturating_sub(1) {
            if w.get(i) > w.get(i + 1) {
                count += 1;
            }
        }
        start += b;
    }
    Ok(count)
}

/// A pair (permutation of size `k`, marked Dyck path of semilength `n + k`).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PairNK {
    pub w: Permutation,
    pub d: MarkedDyck,
}

impl PairNK {
    pub fn new(w: Permutation, d: MarkedDyck) -> PairNK {
        debug_assert_eq!(w.len(), d.k);
        PairNK { w, d }
    }

    pub fn n(&self) -> usize {
        self.d.n()
    }

    pub fn k(&self) -> usize {
        self.d.k
    }
}

/// The descent statistic of a pair: block-internal descents of `w` plus the
/// valley count of the path.
pub fn des_pair(p: &PairNK) -> usize {
    des_c(&p.w, &p.d.composition).expect("pair invariant: composition sums to k")
        + p.d.path.valleys()
}

/// All Dyck paths of semilength `n + k` starting with at least `k` up steps,
/// marked; lexicographic order.
pub fn enumerate_d_nk(n: usize, k: usize) -> Vec<MarkedDyck> {
    let mut out = vec![];
    let mut steps = vec![Step::Up; k];
    fn gen(
        steps: &mut Vec<Step>,
        ups: usize,
        rights: usize,
        level: usize,
        k: usize,
        out: &mut Vec<MarkedDyck>,
    ) {
        if ups == 0 && rights == 0 {
            let path = DyckPath {
                steps: steps.clone(),
            };
            out.push(mark(&path, k).expect("starts with k ups by construction"));
            return;
        }
        if ups > 0 {
            steps.push(Step::Up);
            gen(steps, ups - 1, rights, level + 1, k, out);
            steps.pop();
        }
        if rights > 0 && level > 0 {
            steps.push(Step::Right);
            gen(steps, ups, rights - 1, level - 1, k, out);
            steps.pop();
        }
    }
    gen(&mut steps, n, n + k, k, k, &mut out);
    out
}

/// The full pair set: every permutation of size `k` with every path of
/// `enumerate_d_nk(n, k)`.
pub fn enumerate_p_nk(n: usize, k: usize) -> Vec<PairNK> {
    let paths = enumerate_d_nk(n, k);
    let mut out = Vec::with_capacity(paths.len());
    for w in crate::stacksort::all_permutations(k) {
        for d in &paths {
            out.push(PairNK::new(w.clone(), d.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        assert!(DyckPath::parse("UURR").is_ok());
        assert!(DyckPath::parse("URUR").is_ok());
        assert_eq!(DyckPath::parse("RU"), Err(DyckError::NotBalanced));
        assert_eq!(DyckPath::parse("UUR"), Err(DyckError::NotBalanced));
        assert_eq!(DyckPath::parse("UXRR"), Err(DyckError::BadStepChar('X')));
    }

    #[test]
    fn valleys_and_levels() {
        assert_eq!(DyckPath::parse("URUR").unwrap().valleys(), 1);
        assert_eq!(DyckPath::parse("UUURRR").unwrap().valleys(), 0);
        let p = DyckPath::parse("UURR").unwrap();
        assert_eq!(p.level(2), 2);
        assert_eq!(p.level(4), 0);
    }

    #[test]
    fn left_chain_is_staircase() {
        // a chain of left children encodes as U^n R^n
        let n = 5;
        let mut shape = TreeShape::empty();
        for i in 0..n {
            shape.left.push(if i + 1 < n { Some(i + 1) } else { None });
            shape.right.push(None);
        }
        shape.root = Some(0);
        assert_eq!(tree_to_dyck(&shape).to_string(), "UUUUURRRRR");
        assert_eq!(shape.right_edge_count(), 0);
    }

    #[test]
    fn tree_dyck_roundtrip_exhaustive() {
        for n in 0..=7 {
            let mut count = 0u64;
            for_each_shape(n, |shape| {
                count += 1;
                let d = tree_to_dyck(shape);
                assert_eq!(d.semilength(), n);
                assert_eq!(&dyck_to_tree(&d), shape);
                // right edges correspond to valleys
                assert_eq!(shape.right_edge_count(), d.valleys());
            });
            assert_eq!(count, catalan(n as u64));
        }
    }

    #[test]
    fn catalan_values() {
        let expect = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        for (n, &c) in expect.iter().enumerate() {
            assert_eq!(catalan(n as u64), c);
        }
        assert_eq!(catalan(14), 2674440);
    }

    #[test]
    fn catalan_conv_formula_matches_convolution_sum() {
        // convolution-sum definition as the independent oracle
        fn conv_sum(n: usize, k: usize) -> u64 {
            fn rec(parts: usize, total: usize) -> u64 {
                if parts == 1 {
                    return catalan(total as u64);
                }
                (0..=total)
                    .map(|a| catalan(a as u64) * rec(parts - 1, total - a))
                    .sum()
            }
            rec(k + 1, n)
        }
        for n in 0..=8 {
            for k in 0..=(12 - n) {
                assert_eq!(
                    catalan_conv(n as u64, k as u64),
                    conv_sum(n, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn catalan_conv_specializations() {
        for n in 0..=10 {
            assert_eq!(catalan_conv(n, 0), catalan(n));
            assert_eq!(catalan_conv(n, 1), catalan(n + 1));
        }
        for k in 0..=10 {
            assert_eq!(catalan_conv(0, k), 1);
            assert_eq!(catalan_conv(1, k), k + 1);
        }
        assert_eq!(catalan_conv(2, 2), 9);
    }

    #[test]
    fn marking_blocks() {
        // the same path viewed at two different k values: dropping the
        // outermost mark merges nothing but removes the earliest marked step
        let d = DyckPath::parse("UUUUURRURRRUURRRUR").unwrap();
        assert_eq!(d.semilength(), 9);
        let m4 = mark(&d, 4).unwrap();
        assert_eq!(m4.composition, vec![1, 2, 1]);
        let m3 = mark(&d, 3).unwrap();
        assert_eq!(m3.composition, vec![2, 1]);
        assert_eq!(mark(&d, 0).unwrap().composition, Vec::<usize>::new());
    }

    #[test]
    fn marking_requires_leading_ups() {
        let d = DyckPath::parse("URUR").unwrap();
        assert_eq!(
            mark(&d, 2),
            Err(DyckError::TooFewLeadingUps {
                found: 1,
                needed: 2
            })
        );
    }

    #[test]
    fn marked_matching_is_consistent() {
        // every marked right step matches one of the first k up steps and the
        // blocks tile the marked set in order
        for n in 0..=4 {
            for k in 0..=4 {
                for m in enumerate_d_nk(n, k) {
                    let marked_count = m.marked.iter().filter(|&&b| b).count();
                    assert_eq!(marked_count, k);
                    assert_eq!(m.composition.iter().sum::<usize>(), k);
                    assert!(m.composition.iter().all(|&c| c > 0));
                }
            }
        }
    }

    #[test]
    fn des_c_examples() {
        let w = Permutation::try_from_values(&[4, 3, 1, 2]).unwrap();
        assert_eq!(des_c(&w, &[2, 2]).unwrap(), 1);
        assert_eq!(des_c(&w, &[1, 1, 1, 1]).unwrap(), 0);
        assert_eq!(des_c(&w, &[4]).unwrap(), 2);
        // weak compositions: zero blocks are inert
        assert_eq!(des_c(&w, &[2, 0, 2]).unwrap(), 1);
        assert!(des_c(&w, &[2, 1]).is_err());
    }

    #[test]
    fn d_nk_counts_match_convolution() {
        for n in 0..=5 {
            for k in 0..=4 {
                assert_eq!(
                    enumerate_d_nk(n, k).len() as u64,
                    catalan_conv(n as u64, k as u64),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn d_11_is_two_paths() {
        let ps: Vec<String> = enumerate_d_nk(1, 1)
            .iter()
            .map(|m| m.path.to_string())
            .collect();
        assert_eq!(ps, vec!["UURR", "URUR"]);
    }

    #[test]
    fn p_nk_sizes() {
        for n in 0..=4 {
            for k in 0..=4 {
                if n + k == 0 {
                    continue;
                }
                let expect = (1..=k as u64).product::<u64>() * catalan_conv(n as u64, k as u64);
                assert_eq!(enumerate_p_nk(n, k).len() as u64, expect);
            }
        }
        // n = 0: the unique path is U^k R^k
        for p in enumerate_p_nk(0, 3) {
            assert_eq!(p.d.path.to_string(), "UUURRR");
        }
    }

    #[test]
    fn des_pair_examples() {
        let w = Permutation::try_from_values(&[1]).unwrap();
        let d = mark(&DyckPath::parse("URUR").unwrap(), 1).unwrap();
        assert_eq!(des_pair(&PairNK::new(w.clone(), d)), 1);
        let d = mark(&DyckPath::parse("UURR").unwrap(), 1).unwrap();
        assert_eq!(des_pair(&PairNK::new(w, d)), 0);
    }
}
