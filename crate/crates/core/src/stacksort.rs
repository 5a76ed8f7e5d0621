//! Permutations, the stack-sorting map, decreasing binary trees with their
//! inorder/postorder readings, preimage enumeration, and the right-edge
//! preserving surgery between preimage families.

use crate::dyck::TreeShape;
use crate::poly::IntPoly;
use serde::{Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StacksortError {
    #[error("values are not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("links do not form a decreasing binary tree: {0}")]
    BadTree(String),
    #[error("tree is outside the domain of the map: {0}")]
    NotInDomain(String),
}

/// A permutation in one-line notation, values `1..=n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn try_from_values(values: &[usize]) -> Result<Permutation, StacksortError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in values {
            if v == 0 || v > n || seen[v - 1] {
                return Err(StacksortError::NotAPermutation(n));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(values.iter().map(|&v| v as u8).collect()))
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation((1..=n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at 0-based position `i`.
    pub fn get(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&v| v as usize)
    }

    /// Number of indices `i` with `w_i > w_(i+1)`.
    pub fn descents(&self) -> usize {
        self.0.windows(2).filter(|w| w[0] > w[1]).count()
    }

    /// Number of interior indices `i` (so `1 < i < n` in 1-based terms) with
    /// `w_(i-1) < w_i > w_(i+1)`.
    pub fn peaks(&self) -> usize {
        self.0
            .windows(3)
            .filter(|w| w[0] < w[1] && w[1] > w[2])
            .count()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&v| v <= 9) {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|&v| v as u64))
    }
}

/// All permutations of `1..=n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = vec![];
    for_each_permutation(n, |w| out.push(w.clone()));
    out
}

/// Visit every permutation of `1..=n` in lexicographic order.
pub fn for_each_permutation<F: FnMut(&Permutation)>(n: usize, mut f: F) {
    let mut w: Vec<u8> = (1..=n as u8).collect();
    loop {
        let p = Permutation(w.clone());
        f(&p);
        // lexicographic successor
        if n < 2 {
            return;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| w[i] < w[i + 1]) else {
            return;
        };
        let j = (i + 1..n).rev().find(|&j| w[j] > w[i]).unwrap();
        w.swap(i, j);
        w[i + 1..].reverse();
    }
}

/// The single-pass stack-sorting map: push the next entry when the stack is
/// empty or the entry is smaller than the top, otherwise pop to the output.
pub fn stack_sort(w: &Permutation) -> Permutation {
    let mut stack: Vec<u8> = Vec::with_capacity(w.len());
    let mut out: Vec<u8> = Vec::with_capacity(w.len());
    for v in &w.0 {
        while let Some(&top) = stack.last() {
            if *v < top {
                break;
            }
            out.push(top);
            stack.pop();
        }
        stack.push(*v);
    }
    while let Some(top) = stack.pop() {
        out.push(top);
    }
    Permutation(out)
}

/// The set of permutations of `1..=(n+k)` fixing every position beyond `k`,
/// in lexicographic order.
pub fn gen_s_nk(n: usize, k: usize) -> Vec<Permutation> {
    let mut out = vec![];
    for_each_permutation(k, |prefix| {
        let mut v: Vec<u8> = prefix.0.clone();
        v.extend(k as u8 + 1..=(n + k) as u8);
        out.push(Permutation(v));
    });
    out
}

/// Is `w` fixed at every position beyond `k`?
pub fn in_s_nk(w: &Permutation, k: usize) -> bool {
    (k..w.len()).all(|i| w.get(i) == i + 1)
}

/// A binary tree on labels `1..=n` in which every node's label exceeds its
/// children's labels. The root is always the label `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecreasingBinaryTree {
    // indexed by label - 1
    left: Vec<Option<u8>>,
    right: Vec<Option<u8>>,
}

impl DecreasingBinaryTree {
    pub fn n(&self) -> usize {
        self.left.len()
    }

    pub fn root(&self) -> usize {
        self.n()
    }

    pub fn left(&self, label: usize) -> Option<usize> {
        self.left[label - 1].map(|v| v as usize)
    }

    pub fn right(&self, label: usize) -> Option<usize> {
        self.right[label - 1].map(|v| v as usize)
    }

    /// `parent[label - 1]`, with `None` at the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.n()];
        for l in 1..=self.n() {
            if let Some(c) = self.left(l) {
                p[c - 1] = Some(l);
            }
            if let Some(c) = self.right(l) {
                p[c - 1] = Some(l);
            }
        }
        p
    }

    pub fn from_links(
        left: Vec<Option<u8>>,
        right: Vec<Option<u8>>,
    ) -> Result<DecreasingBinaryTree, StacksortError> {
        let n = left.len();
        if right.len() != n || n == 0 {
            return Err(StacksortError::BadTree("empty or mismatched links".into()));
        }
        let mut indegree = vec![0usize; n];
        for (i, slot) in left.iter().chain(right.iter()).enumerate() {
            let parent = i % n; // left then right pass over the same labels
            if let Some(c) = slot {
                let c = *c as usize;
                if c == 0 || c > n {
                    return Err(StacksortError::BadTree(format!("label {c} out of range")));
                }
                if c > parent {
                    return Err(StacksortError::BadTree(format!(
                        "child {c} is not smaller than its parent {}",
                        parent + 1
                    )));
                }
                indegree[c - 1] += 1;
            }
        }
        if indegree[n - 1] != 0 {
            return Err(StacksortError::BadTree(
                "the maximum label has a parent".into(),
            ));
        }
        if (0..n - 1).any(|i| indegree[i] != 1) {
            return Err(StacksortError::BadTree(
                "every non-root label needs exactly one parent".into(),
            ));
        }
        Ok(DecreasingBinaryTree { left, right })
    }

    /// Read labels left subtree, node, right subtree.
    pub fn inorder_read(&self) -> Permutation {
        let mut out = Vec::with_capacity(self.n());
        self.inorder_walk(self.root(), &mut out);
        Permutation(out)
    }

    fn inorder_walk(&self, label: usize, out: &mut Vec<u8>) {
        if let Some(l) = self.left(label) {
            self.inorder_walk(l, out);
        }
        out.push(label as u8);
        if let Some(r) = self.right(label) {
            self.inorder_walk(r, out);
        }
    }

    /// Read labels left subtree, right subtree, node.
    pub fn postorder_read(&self) -> Permutation {
        let mut out = Vec::with_capacity(self.n());
        self.postorder_walk(self.root(), &mut out);
        Permutation(out)
    }

    fn postorder_walk(&self, label: usize, out: &mut Vec<u8>) {
        if let Some(l) = self.left(label) {
            self.postorder_walk(l, out);
        }
        if let Some(r) = self.right(label) {
            self.postorder_walk(r, out);
        }
        out.push(label as u8);
    }

    pub fn right_edge_count(&self) -> usize {
        self.right.iter().filter(|r| r.is_some()).count()
    }

    pub fn subtree_size(&self, label: usize) -> usize {
        1 + self.left(label).map_or(0, |l| self.subtree_size(l))
            + self.right(label).map_or(0, |r| self.subtree_size(r))
    }

    /// The unlabeled shape, together with the label carried by each shape
    /// node (shape node ids are allocated in preorder).
    pub fn shape(&self) -> (TreeShape, Vec<usize>) {
        let mut shape = TreeShape::empty();
        let mut labels = vec![];
        fn walk(
            t: &DecreasingBinaryTree,
            label: usize,
            shape: &mut TreeShape,
            labels: &mut Vec<usize>,
        ) -> usize {
            let id = shape.left.len();
            shape.left.push(None);
            shape.right.push(None);
            labels.push(label);
            if let Some(l) = t.left(label) {
                let c = walk(t, l, shape, labels);
                shape.left[id] = Some(c);
            }
            if let Some(r) = t.right(label) {
                let c = walk(t, r, shape, labels);
                shape.right[id] = Some(c);
            }
            id
        }
        let root = walk(self, self.root(), &mut shape, &mut labels);
        shape.root = Some(root);
        (shape, labels)
    }

    /// Label a shape so that reading it in postorder gives `word`; fails if
    /// the forced labeling is not decreasing.
    pub fn from_shape_postorder_word(
        shape: &TreeShape,
        word: &Permutation,
    ) -> Result<DecreasingBinaryTree, StacksortError> {
        let n = shape.n_nodes();
        assert_eq!(word.len(), n);
        let order = shape.postorder();
        let mut label_of = vec![0u8; n];
        for (pos, &node) in order.iter().enumerate() {
            label_of[node] = word.0[pos];
        }
        let mut left = vec![None; n];
        let mut right = vec![None; n];
        for node in 0..n {
            let l = label_of[node] as usize;
            left[l - 1] = shape.left[node].map(|c| label_of[c]);
            right[l - 1] = shape.right[node].map(|c| label_of[c]);
        }
        DecreasingBinaryTree::from_links(left, right)
    }
}

/// Build the decreasing tree whose inorder word is the given run of distinct
/// values, writing links into label-indexed slot arrays.
pub(crate) fn links_from_inorder_word(
    word: &[u8],
    left: &mut [Option<u8>],
    right: &mut [Option<u8>],
) -> Option<u8> {
    if word.is_empty() {
        return None;
    }
    let (mi, &mv) = word
        .iter()
        .enumerate()
        .max_by_key(|(_, &v)| v)
        .expect("nonempty");
    left[mv as usize - 1] = links_from_inorder_word(&word[..mi], left, right);
    right[mv as usize - 1] = links_from_inorder_word(&word[mi + 1..], left, right);
    Some(mv)
}

/// The unique decreasing binary tree whose inorder reading is `w`.
pub fn inorder_tree(w: &Permutation) -> DecreasingBinaryTree {
    let n = w.len();
    assert!(n >= 1);
    let mut left = vec![None; n];
    let mut right = vec![None; n];
    let root = links_from_inorder_word(&w.0, &mut left, &mut right);
    debug_assert_eq!(root, Some(n as u8));
    DecreasingBinaryTree { left, right }
}

/// Visit every preimage of `target` under stack sorting, in the lexicographic
/// order of the underlying tree shapes.
///
/// A preimage is a decreasing tree whose postorder reading is `target`; each
/// tree shape admits at most one labeling with a prescribed postorder word,
/// so the search walks shapes and keeps those whose forced labeling is
/// decreasing.
pub fn preimage_each<F: FnMut(&Permutation)>(target: &Permutation, mut f: F) {
    let m = target.len();
    crate::dyck::for_each_shape(m, |shape| {
        let order = shape.postorder();
        let mut label_of = vec![0u8; m];
        for (pos, &node) in order.iter().enumerate() {
            label_of[node] = target.0[pos];
        }
        // decreasing check on every tree edge
        for node in 0..m {
            for child in [shape.left[node], shape.right[node]].into_iter().flatten() {
                if label_of[child] >= label_of[node] {
                    return;
                }
            }
        }
        // read inorder
        let mut word = Vec::with_capacity(m);
        for node in shape.inorder() {
            word.push(label_of[node]);
        }
        f(&Permutation(word));
    });
}

/// All preimages of `target`, sorted.
pub fn preimage(target: &Permutation) -> Vec<Permutation> {
    let mut out = vec![];
    preimage_each(target, |w| out.push(w.clone()));
    out.sort();
    out
}

/// Union of preimages over a set of targets, sorted.
pub fn preimage_of_set(targets: &[Permutation]) -> Vec<Permutation> {
    let mut out = vec![];
    for t in targets {
        preimage_each(t, |w| out.push(w.clone()));
    }
    out.sort();
    out
}

/// All preimages of the family fixing positions beyond `k` in size `n + k`.
///
/// Walks tree shapes once: positions beyond `k` in postorder carry forced
/// labels that are automatically decreasing, and the first `k` postorder
/// nodes form a subtree-closed forest whose decreasing labelings are
/// enumerated directly. Equivalent to `preimage_of_set(&gen_s_nk(n, k))` but
/// enumeration cost is proportional to the output.
pub fn preimage_of_s_nk(n: usize, k: usize) -> Vec<Permutation> {
    let m = n + k;
    assert!(m >= 1);
    let mut out = vec![];
    crate::dyck::for_each_shape(m, |shape| {
        let order = shape.postorder();
        let mut pos_of = vec![0usize; m];
        for (pos, &node) in order.iter().enumerate() {
            pos_of[node] = pos;
        }
        // forest on the first k postorder nodes (a union of whole subtrees)
        let small: Vec<usize> = order[..k].to_vec();
        let mut label_of = vec![0u8; m];
        for (pos, &node) in order.iter().enumerate().skip(k) {
            label_of[node] = (pos + 1) as u8;
        }
        // roots of the small forest: small nodes whose parent is big (or absent)
        let mut parent = vec![None; m];
        for node in 0..m {
            for child in [shape.left[node], shape.right[node]].into_iter().flatten() {
                parent[child] = Some(node);
            }
        }
        let roots: Vec<usize> = small
            .iter()
            .copied()
            .filter(|&v| parent[v].is_none_or(|p| pos_of[p] >= k))
            .collect();
        // assign values k, k-1, ..., 1 to available nodes (children unlock
        // when their parent is labeled)
        fn assign<F: FnMut(&[u8])>(
            shape: &TreeShape,
            available: &mut Vec<usize>,
            label_of: &mut Vec<u8>,
            next: u8,
            emit: &mut F,
        ) {
            if next == 0 {
                let mut word = Vec::with_capacity(shape.n_nodes());
                for node in shape.inorder() {
                    word.push(label_of[node]);
                }
                emit(&word);
                return;
            }
            for i in 0..available.len() {
                let v = available.swap_remove(i);
                label_of[v] = next;
                let before = available.len();
                for child in [shape.left[v], shape.right[v]].into_iter().flatten() {
                    available.push(child);
                }
                assign(shape, available, label_of, next - 1, emit);
                available.truncate(before);
                label_of[v] = 0;
                available.push(v);
                let last = available.len() - 1;
                available.swap(i, last);
            }
        }
        let mut available = roots;
        assign(
            shape,
            &mut available,
            &mut label_of,
            k as u8,
            &mut |word: &[u8]| out.push(Permutation(word.to_vec())),
        );
    });
    out.sort();
    out
}

/// Descent generating polynomial of a set of permutations.
pub fn descent_polynomial<'a, I: IntoIterator<Item = &'a Permutation>>(perms: I) -> IntPoly {
    let mut counts: Vec<i64> = vec![];
    for w in perms {
        let d = w.descents();
        if counts.len() <= d {
            counts.resize(d + 1, 0);
        }
        counts[d] += 1;
    }
    IntPoly::new(counts)
}

/// Outcome of the peak-based gamma identity check over the preimages of a
/// permutation set.
#[derive(Clone, Debug, Serialize)]
pub struct GammaIdentity {
    pub holds: bool,
    pub gamma: IntPoly,
    pub lhs: IntPoly,
    pub rhs: IntPoly,
}

/// For `A` a subset of the permutations of size `n`, verify that the descent
/// polynomial of the stack-sorting preimages of `A` equals
/// `sum_m gamma_m x^m (1+x)^(n-1-2m)` with
/// `gamma_m = #{w in preimages : peak(w) = m} / 2^(n-1-2m)`, all divisions
/// exact.
pub fn branden_gamma_check(a: &[Permutation], n: usize) -> GammaIdentity {
    let pre = preimage_of_set(a);
    let lhs = descent_polynomial(&pre);
    let mut peak_counts = vec![0i64; (n - 1) / 2 + 1];
    for w in &pre {
        peak_counts[w.peaks()] += 1;
    }
    let mut gamma = vec![0i64; peak_counts.len()];
    let mut exact = true;
    for (m, &c) in peak_counts.iter().enumerate() {
        let denom = 1i64 << (n - 1 - 2 * m);
        if c % denom != 0 {
            exact = false;
        }
        gamma[m] = c / denom;
    }
    let gamma = IntPoly::new(gamma);
    let rhs = crate::poly::h_from_gamma(&gamma, n - 1);
    GammaIdentity {
        holds: exact && lhs == rhs,
        gamma,
        lhs,
        rhs,
    }
}

/// Right-edge preserving surgery sending preimages of the identity whose
/// first and last entries avoid `n` to preimages of the word `2 1 3 4 ... n`.
///
/// The labels `1..r` of the input form a maximal ascending chain above node 1
/// (`parent(i) = i+1`); the chain below `r` is cut off, a chain with the
/// reversed direction word is grafted above the old root, and nodes are
/// relabeled so the postorder reading is `2 1 3 ... n`.
pub fn happy_phi(t: &DecreasingBinaryTree) -> Result<DecreasingBinaryTree, StacksortError> {
    let n = t.n();
    if t.postorder_read() != Permutation::identity(n) {
        return Err(StacksortError::NotInDomain(
            "inorder word is not a preimage of the identity".into(),
        ));
    }
    if t.left(n).is_none() {
        return Err(StacksortError::NotInDomain(
            "first entry of the inorder word is the maximum".into(),
        ));
    }
    if t.right(n).is_none() {
        return Err(StacksortError::NotInDomain(
            "last entry of the inorder word is the maximum".into(),
        ));
    }
    let parents = t.parents();
    // ascending chain 1 -> 2 -> ... -> r; true = right edge
    let mut dirs: Vec<bool> = vec![];
    let mut r = 1usize;
    while parents[r - 1] == Some(r + 1) {
        dirs.push(t.right(r + 1) == Some(r));
        r += 1;
    }
    // shape surgery in label space: drop 1..r, then stack the reversed
    // direction word above the old root
    let (shape, labels) = t.shape();
    let mut keep_left: Vec<Option<usize>> = vec![];
    let mut keep_right: Vec<Option<usize>> = vec![];
    let mut id_map = vec![usize::MAX; shape.n_nodes()];
    let mut kept_nodes = vec![];
    for node in 0..shape.n_nodes() {
        if labels[node] >= r {
            id_map[node] = kept_nodes.len();
            kept_nodes.push(node);
        }
    }
    for &node in &kept_nodes {
        let remap = |c: Option<usize>| c.filter(|&c| labels[c] >= r).map(|c| id_map[c]);
        keep_left.push(remap(shape.left[node]));
        keep_right.push(remap(shape.right[node]));
    }
    let mut new_root = id_map[shape.root.unwrap()];
    for &dir in dirs.iter().rev() {
        let id = keep_left.len();
        keep_left.push(None);
        keep_right.push(None);
        if dir {
            keep_right[id] = Some(new_root);
        } else {
            keep_left[id] = Some(new_root);
        }
        new_root = id;
    }
    let new_shape = TreeShape {
        left: keep_left,
        right: keep_right,
        root: Some(new_root),
    };
    let mut word: Vec<usize> = (1..=n).collect();
    word.swap(0, 1);
    DecreasingBinaryTree::from_shape_postorder_word(
        &new_shape,
        &Permutation::try_from_values(&word).unwrap(),
    )
}

/// Inverse of [`happy_phi`]: cuts the single-child chain above the topmost
/// two-child node, grafts the reversed direction word below node 2, and
/// relabels to postorder `1 2 ... n`.
pub fn happy_phi_inverse(t: &DecreasingBinaryTree) -> Result<DecreasingBinaryTree, StacksortError> {
    let n = t.n();
    let mut expected: Vec<usize> = (1..=n).collect();
    expected.swap(0, 1);
    if t.postorder_read() != Permutation::try_from_values(&expected).unwrap() {
        return Err(StacksortError::NotInDomain(
            "inorder word is not a preimage of 213...n".into(),
        ));
    }
    // single-child chain from the root down: labels n, n-1, ..., v+1
    let mut dirs: Vec<bool> = vec![]; // from the top edge down
    let mut v = n;
    loop {
        let l = t.left(v);
        let r = t.right(v);
        match (l, r) {
            (Some(c), None) | (None, Some(c)) => {
                if c != v - 1 {
                    return Err(StacksortError::NotInDomain(
                        "single-child chain below the root is not label-consecutive".into(),
                    ));
                }
                dirs.push(r.is_some());
                v -= 1;
            }
            (Some(_), Some(_)) => break,
            (None, None) => {
                return Err(StacksortError::NotInDomain(
                    "tree is a bare chain, nodes 1 and 2 cannot be incomparable".into(),
                ))
            }
        }
    }
    let (shape, labels) = t.shape();
    let mut id_map = vec![usize::MAX; shape.n_nodes()];
    let mut kept_nodes = vec![];
    for node in 0..shape.n_nodes() {
        if labels[node] <= v {
            id_map[node] = kept_nodes.len();
            kept_nodes.push(node);
        }
    }
    let mut keep_left: Vec<Option<usize>> = vec![];
    let mut keep_right: Vec<Option<usize>> = vec![];
    let mut node2 = None;
    for (new_id, &node) in kept_nodes.iter().enumerate() {
        let remap = |c: Option<usize>| c.filter(|&c| labels[c] <= v).map(|c| id_map[c]);
        keep_left.push(remap(shape.left[node]));
        keep_right.push(remap(shape.right[node]));
        if labels[node] == 2 {
            node2 = Some(new_id);
        }
    }
    let new_root = id_map[kept_nodes
        .iter()
        .position(|&node| labels[node] == v)
        .map(|i| kept_nodes[i])
        .unwrap()];
    // graft the chain below node 2, top edge uses the deepest recorded
    // direction
    let mut attach = node2.expect("node 2 is never on the removed chain");
    for &dir in dirs.iter().rev() {
        let id = keep_left.len();
        keep_left.push(None);
        keep_right.push(None);
        debug_assert!(keep_left[attach].is_none() && keep_right[attach].is_none());
        if dir {
            keep_right[attach] = Some(id);
        } else {
            keep_left[attach] = Some(id);
        }
        attach = id;
    }
    let new_shape = TreeShape {
        left: keep_left,
        right: keep_right,
        root: Some(new_root),
    };
    DecreasingBinaryTree::from_shape_postorder_word(&new_shape, &Permutation::identity(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::try_from_values(v).unwrap()
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::try_from_values(&[2, 1, 3]).is_ok());
        assert!(Permutation::try_from_values(&[1, 1]).is_err());
        assert!(Permutation::try_from_values(&[0, 1]).is_err());
        assert!(Permutation::try_from_values(&[3, 1]).is_err());
    }

    #[test]
    fn stack_sort_worked_example() {
        assert_eq!(
            stack_sort(&perm(&[3, 4, 7, 5, 6, 1, 2])),
            perm(&[3, 4, 5, 1, 2, 6, 7])
        );
        assert_eq!(stack_sort(&perm(&[2, 3, 1])), perm(&[2, 1, 3]));
        let id = Permutation::identity(6);
        assert_eq!(stack_sort(&id), id);
    }

    #[test]
    fn statistics() {
        assert_eq!(perm(&[4, 3, 1, 2]).descents(), 2);
        assert_eq!(perm(&[1, 3, 2]).peaks(), 1);
        let id = Permutation::identity(5);
        assert_eq!(id.descents(), 0);
        assert_eq!(id.peaks(), 0);
    }

    #[test]
    fn reading_orders_match_worked_example() {
        let w = perm(&[3, 4, 7, 5, 6, 1, 2]);
        let t = inorder_tree(&w);
        assert_eq!(t.inorder_read(), w);
        assert_eq!(t.postorder_read(), perm(&[3, 4, 5, 1, 2, 6, 7]));
    }

    #[test]
    fn descending_word_gives_right_spine() {
        let t = inorder_tree(&perm(&[3, 2, 1]));
        assert_eq!(t.right(3), Some(2));
        assert_eq!(t.right(2), Some(1));
        assert_eq!(t.left(3), None);
    }

    #[test]
    fn stack_sort_equals_postorder_of_inorder_tree() {
        for n in 1..=7 {
            for_each_permutation(n, |w| {
                assert_eq!(stack_sort(w), inorder_tree(w).postorder_read());
            });
        }
    }

    #[test]
    fn right_edges_count_descents() {
        for n in 1..=7 {
            for_each_permutation(n, |w| {
                assert_eq!(inorder_tree(w).right_edge_count(), w.descents());
            });
        }
    }

    #[test]
    fn s_nk_generation() {
        let s = gen_s_nk(1, 2);
        assert_eq!(s, vec![perm(&[1, 2, 3]), perm(&[2, 1, 3])]);
        for (n, k) in [(2, 3), (0, 4), (3, 0)] {
            let s = gen_s_nk(n, k);
            let expect: usize = (1..=k).product();
            assert_eq!(s.len(), expect.max(1));
            assert!(s.iter().all(|w| in_s_nk(w, k)));
        }
        assert_eq!(gen_s_nk(4, 0), vec![Permutation::identity(4)]);
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(
            preimage(&perm(&[1, 2, 3])),
            vec![
                perm(&[1, 2, 3]),
                perm(&[1, 3, 2]),
                perm(&[2, 1, 3]),
                perm(&[3, 1, 2]),
                perm(&[3, 2, 1]),
            ]
        );
        assert_eq!(preimage(&perm(&[2, 1, 3])), vec![perm(&[2, 3, 1])]);
    }

    #[test]
    fn preimage_matches_brute_force() {
        for n in 1..=6 {
            // brute force: filter the whole symmetric group by stack_sort
            let mut by_target: std::collections::BTreeMap<Permutation, Vec<Permutation>> =
                Default::default();
            for_each_permutation(n, |w| {
                by_target.entry(stack_sort(w)).or_default().push(w.clone());
            });
            for_each_permutation(n, |target| {
                let brute = by_target.get(target).cloned().unwrap_or_default();
                assert_eq!(preimage(target), brute, "target {target}");
            });
        }
    }

    #[test]
    fn preimage_of_identity_is_catalan() {
        for n in 1..=9 {
            let mut count = 0u64;
            preimage_each(&Permutation::identity(n), |_| count += 1);
            assert_eq!(count, crate::dyck::catalan(n as u64));
        }
    }

    #[test]
    fn structured_preimages_match_generic_route() {
        for n in 0..=4 {
            for k in 0..=4 {
                if n + k == 0 || n + k > 6 {
                    continue;
                }
                assert_eq!(
                    preimage_of_s_nk(n, k),
                    preimage_of_set(&gen_s_nk(n, k)),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn descent_polynomial_of_hexagon_family() {
        let pre = preimage_of_set(&gen_s_nk(1, 2));
        assert_eq!(pre.len(), 6);
        assert_eq!(descent_polynomial(&pre), IntPoly::new(vec![1, 4, 1]));
        assert_eq!(
            descent_polynomial(&[Permutation::identity(4)]),
            IntPoly::one()
        );
    }

    #[test]
    fn branden_identity_hexagon() {
        let r = branden_gamma_check(&gen_s_nk(1, 2), 3);
        assert!(r.holds);
        assert_eq!(r.gamma, IntPoly::new(vec![1, 2]));
        assert_eq!(r.lhs, IntPoly::new(vec![1, 4, 1]));
    }

    #[test]
    fn branden_identity_narayana() {
        for n in 2..=6 {
            let r = branden_gamma_check(&[Permutation::identity(n)], n);
            assert!(r.holds, "n={n}");
            assert_eq!(r.lhs, crate::poly::narayana(n));
        }
    }

    #[test]
    fn happy_phi_round_trip_small() {
        for n in 3..=7 {
            let mut domain = 0usize;
            preimage_each(&Permutation::identity(n), |w| {
                if w.get(0) < n && w.get(n - 1) < n {
                    domain += 1;
                    let t = inorder_tree(w);
                    let image = happy_phi(&t).expect("in domain");
                    assert_eq!(
                        image.right_edge_count(),
                        t.right_edge_count(),
                        "right edges preserved, w={w}"
                    );
                    let back = happy_phi_inverse(&image).expect("image is in codomain");
                    assert_eq!(back, t, "round trip, w={w}");
                }
            });
            assert!(domain > 0);
        }
    }

    #[test]
    fn happy_phi_is_onto_the_codomain() {
        // the image set is exactly the preimages of 213...n
        for n in 3..=7 {
            let mut expect: Vec<Permutation> = vec![];
            let mut word: Vec<usize> = (1..=n).collect();
            word.swap(0, 1);
            preimage_each(&perm(&word), |w| expect.push(w.clone()));
            expect.sort();

            let mut images: Vec<Permutation> = vec![];
            preimage_each(&Permutation::identity(n), |w| {
                if w.get(0) < n && w.get(n - 1) < n {
                    images.push(happy_phi(&inorder_tree(w)).unwrap().inorder_read());
                }
            });
            images.sort();
            assert_eq!(images, expect, "n={n}");
        }
    }

    #[test]
    fn happy_phi_rejects_out_of_domain() {
        // w_n = n: root has no right child
        let t = inorder_tree(&perm(&[1, 2, 3]));
        assert!(matches!(happy_phi(&t), Err(StacksortError::NotInDomain(_))));
        // not a preimage of the identity
        let t = inorder_tree(&perm(&[2, 3, 1]));
        assert!(matches!(happy_phi(&t), Err(StacksortError::NotInDomain(_))));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn perm_strategy(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n)
            .prop_flat_map(|n| proptest::collection::vec(any::<u32>(), n))
            .prop_map(|keys| {
                let mut idx: Vec<usize> = (0..keys.len()).collect();
                idx.sort_by_key(|&i| (keys[i], i));
                let mut values = vec![0usize; keys.len()];
                for (rank, &i) in idx.iter().enumerate() {
                    values[i] = rank + 1;
                }
                Permutation::try_from_values(&values).unwrap()
            })
    }

    proptest! {
        #[test]
        fn sort_agrees_with_tree_reading(w in perm_strategy(10)) {
            prop_assert_eq!(stack_sort(&w), inorder_tree(&w).postorder_read());
        }

        #[test]
        fn inorder_round_trips(w in perm_strategy(10)) {
            prop_assert_eq!(inorder_tree(&w).inorder_read(), w);
        }
    }
}
