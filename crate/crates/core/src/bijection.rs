//! The two descent-preserving encodings into (permutation, marked Dyck path)
//! pairs: one from stack-sorting preimages of the family fixing large
//! positions, one from B-trees of lollipop graphs. Both directions of each
//! map are implemented, with the structural facts they rely on asserted at
//! runtime.

use crate::dyck::{
    dyck_to_tree, mark, tree_to_dyck, DyckPath, PairNK, PathBuilder, Step, TreeShape,
};
use crate::graph::{lollipop, BTree, GraphError};
use crate::stacksort::{
    in_s_nk, inorder_tree, links_from_inorder_word, stack_sort, DecreasingBinaryTree, Permutation,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BijectionError {
    #[error("not in the domain: {0}")]
    NotInDomain(String),
    #[error("malformed pair: {0}")]
    MalformedPair(String),
    #[error("structural invariant violated: {0}")]
    StructuralViolation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

type Result<T> = std::result::Result<T, BijectionError>;

fn structural(msg: impl Into<String>) -> BijectionError {
    BijectionError::StructuralViolation(msg.into())
}

// ---------------------------------------------------------------------------
// preimage side
// ---------------------------------------------------------------------------

/// Decomposition of a decreasing binary tree whose postorder word fixes all
/// positions beyond `k`: the induced tree on the large labels, the chain of
/// nodes holding label `k+1` in their right subtree, the left-subtree size
/// vector, and the Dyck segments of the split components.
#[derive(Clone, Debug)]
pub struct CoreDecomposition {
    /// `a_1` (closest to the root) down to `a_l = k + 1`.
    pub marked: Vec<usize>,
    /// `c_1, ..., c_(l+1)`: left-subtree sizes of the `a_i`, then the
    /// right-subtree size of `k + 1`. A weak composition of `k`.
    pub c: Vec<usize>,
    /// `D_1, ..., D_l`, each strictly positive between its endpoints.
    pub segments: Vec<DyckPath>,
}

fn core_left(t: &DecreasingBinaryTree, label: usize, k: usize) -> Option<usize> {
    t.left(label).filter(|&l| l > k)
}

fn core_right(t: &DecreasingBinaryTree, label: usize, k: usize) -> Option<usize> {
    t.right(label).filter(|&l| l > k)
}

/// Shape of one split component: descend from `root`, cutting the right
/// edges of marked nodes and omitting the component's own leftmost leaf
/// `skip`.
fn component_shape(
    t: &DecreasingBinaryTree,
    root: usize,
    k: usize,
    cut_rights: &[usize],
    skip: usize,
) -> TreeShape {
    let mut shape = TreeShape::empty();
    fn walk(
        t: &DecreasingBinaryTree,
        label: usize,
        k: usize,
        cut_rights: &[usize],
        skip: usize,
        shape: &mut TreeShape,
    ) -> Option<usize> {
        if label == skip {
            return None;
        }
        let id = shape.left.len();
        shape.left.push(None);
        shape.right.push(None);
        let l = core_left(t, label, k).and_then(|c| walk(t, c, k, cut_rights, skip, shape));
        let r = if cut_rights.contains(&label) {
            None
        } else {
            core_right(t, label, k).and_then(|c| walk(t, c, k, cut_rights, skip, shape))
        };
        shape.left[id] = l;
        shape.right[id] = r;
        Some(id)
    }
    shape.root = walk(t, root, k, cut_rights, skip, &mut shape);
    shape
}

/// Extract the core decomposition of `t`, whose postorder word must fix all
/// positions beyond `k`.
pub fn decompose_core(t: &DecreasingBinaryTree, n: usize, k: usize) -> Result<CoreDecomposition> {
    let m = t.n();
    if m != n + k {
        return Err(BijectionError::NotInDomain(format!(
            "tree has {m} labels, expected {}",
            n + k
        )));
    }
    if !in_s_nk(&t.postorder_read(), k) {
        return Err(BijectionError::NotInDomain(
            "postorder word moves a position beyond k".into(),
        ));
    }
    if n == 0 {
        return Ok(CoreDecomposition {
            marked: vec![],
            c: vec![k],
            segments: vec![],
        });
    }
    let parents = t.parents();
    // ancestors of k+1 entered through their right child, bottom-up
    let mut marked_up = vec![];
    let mut x = k + 1;
    while let Some(p) = parents[x - 1] {
        if t.right(p) == Some(x) {
            marked_up.push(p);
        }
        x = p;
    }
    let mut marked: Vec<usize> = marked_up.into_iter().rev().collect();
    marked.push(k + 1);
    let l = marked.len();

    let mut c = Vec::with_capacity(l + 1);
    for (i, &a) in marked.iter().enumerate() {
        let left_size = t.left(a).map_or(0, |ch| t.subtree_size(ch));
        if i < l - 1 && core_left(t, a, k).is_some() {
            return Err(structural(format!(
                "marked node {a} has a large label in its left subtree"
            )));
        }
        c.push(left_size);
    }
    c.push(t.right(k + 1).map_or(0, |ch| t.subtree_size(ch)));
    if c.iter().sum::<usize>() != k {
        return Err(structural("left-subtree sizes do not sum to k"));
    }

    // component roots: the core root, then the cut right children
    let cut_rights = &marked[..l - 1];
    let mut comp_roots = vec![m];
    for &a in cut_rights {
        let r = core_right(t, a, k)
            .ok_or_else(|| structural(format!("marked node {a} has no large right child")))?;
        comp_roots.push(r);
    }
    let mut segments = Vec::with_capacity(l);
    for (i, (&root, &a)) in comp_roots.iter().zip(marked.iter()).enumerate() {
        // the component's leftmost node must be a_i
        let mut leftmost = root;
        while let Some(ch) = core_left(t, leftmost, k) {
            leftmost = ch;
        }
        if leftmost != a {
            return Err(structural(format!(
                "component {i} has leftmost node {leftmost}, expected {a}"
            )));
        }
        let shape = component_shape(t, root, k, cut_rights, a);
        let inner = tree_to_dyck(&shape);
        let mut b = PathBuilder::new();
        b.ups(1).path(&inner).rights(1);
        segments.push(b.finish().expect("wrapped path is balanced"));
    }
    debug_assert_eq!(
        segments.iter().map(|d| d.len()).sum::<usize>(),
        2 * n,
        "segments cover the core"
    );
    Ok(CoreDecomposition {
        marked,
        c,
        segments,
    })
}

/// Encode a stack-sorting preimage of the family as a pair: the subword of
/// small values together with the Dyck path assembled from the core
/// segments interleaved with the composition blocks.
///
/// The assembly keeps the marked blocks in the order `c_1, ..., c_(l+1)`
/// (so block-internal descents of the small word line up with the left
/// subtrees they came from) and places segments so that the junction
/// valleys count exactly the removed right edges plus the right edge of
/// label `k+1`. Four placements cover the possible vanishing patterns of
/// `c_1` and `c_(l+1)`; each is undone positionally by the inverse.
pub fn f_nk(w: &Permutation, n: usize, k: usize) -> Result<PairNK> {
    if w.len() != n + k || !in_s_nk(&stack_sort(w), k) {
        return Err(BijectionError::NotInDomain(format!(
            "{w} does not sort into the (n={n}, k={k}) family"
        )));
    }
    let t = inorder_tree(w);
    let dec = decompose_core(&t, n, k)?;
    let omega = Permutation::try_from_values(&w.values().filter(|&v| v <= k).collect::<Vec<_>>())
        .expect("small values form a permutation");
    let l = dec.segments.len();
    let c = &dec.c;
    let seg = &dec.segments;
    let mut b = PathBuilder::new();
    b.ups(k);
    if n == 0 {
        b.rights(k);
    } else {
        match (c[0] > 0, c[l] > 0) {
            // leading and trailing blocks both present, or both absent:
            // plain alternation R^(c_i) D_i ... R^(c_(l+1))
            (true, true) | (false, false) => {
                for i in 0..l {
                    b.rights(c[i]).path(&seg[i]);
                }
                b.rights(c[l]);
            }
            // no trailing block: the tail of segments past the last
            // nonzero block moves to the front, soaking up one valley
            (true, false) => {
                let t_star = (1..=l).rev().find(|&i| c[i - 1] > 0).unwrap();
                for s in &seg[t_star - 1..] {
                    b.path(s);
                }
                for i in 1..t_star {
                    b.rights(c[i - 1]).path(&seg[i - 1]);
                }
                b.rights(c[t_star - 1]);
            }
            // no leading block: the segments before the first nonzero
            // block move behind the trailing block, adding one valley
            (false, true) => {
                let j = (1..=l + 1).find(|&i| c[i - 1] > 0).unwrap();
                for i in j..=l {
                    b.rights(c[i - 1]).path(&seg[i - 1]);
                }
                b.rights(c[l]);
                for s in &seg[..j - 1] {
                    b.path(s);
                }
            }
        }
    }
    let path = b.finish().expect("assembled path is balanced");
    debug_assert_eq!(path.len(), 2 * (n + k));
    let marked = mark(&path, k).expect("path starts with k up steps");
    Ok(PairNK::new(omega, marked))
}

/// Parse a tail of a Dyck path into alternating maximal right-step runs and
/// first-return segments: `r_1, S_1, r_2, ..., S_t, r_(t+1)`.
fn parse_runs_and_segments(steps: &[Step]) -> (Vec<usize>, Vec<DyckPath>) {
    let mut runs = vec![];
    let mut segments = vec![];
    let mut i = 0;
    loop {
        let start = i;
        while i < steps.len() && steps[i] == Step::Right {
            i += 1;
        }
        runs.push(i - start);
        if i == steps.len() {
            break;
        }
        let seg_start = i;
        let mut level = 0i64;
        loop {
            match steps[i] {
                Step::Up => level += 1,
                Step::Right => level -= 1,
            }
            i += 1;
            if level == 0 {
                break;
            }
        }
        segments.push(
            DyckPath::new(steps[seg_start..i].to_vec()).expect("first-return piece is balanced"),
        );
    }
    (runs, segments)
}

/// Arena for assembling a labeled decreasing tree out of shape components.
struct CoreAssembly {
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

impl CoreAssembly {
    fn new() -> CoreAssembly {
        CoreAssembly {
            left: vec![],
            right: vec![],
        }
    }

    fn import(&mut self, shape: &TreeShape) -> (Vec<usize>, Option<usize>) {
        let base = self.left.len();
        for i in 0..shape.n_nodes() {
            self.left.push(shape.left[i].map(|c| c + base));
            self.right.push(shape.right[i].map(|c| c + base));
        }
        (
            (base..base + shape.n_nodes()).collect(),
            shape.root.map(|r| r + base),
        )
    }

    fn alloc(&mut self) -> usize {
        self.left.push(None);
        self.right.push(None);
        self.left.len() - 1
    }

    fn leftmost_from(&self, mut v: usize) -> usize {
        while let Some(l) = self.left[v] {
            v = l;
        }
        v
    }

    fn postorder(&self, root: usize) -> Vec<usize> {
        let mut out = vec![];
        fn walk(a: &CoreAssembly, v: usize, out: &mut Vec<usize>) {
            if let Some(l) = a.left[v] {
                walk(a, l, out);
            }
            if let Some(r) = a.right[v] {
                walk(a, r, out);
            }
            out.push(v);
        }
        walk(self, root, &mut out);
        out
    }
}

/// Inverse of [`f_nk`]: segment the path by first returns, rebuild the core
/// components (grafting each segment's leaf back on the left), chain them,
/// relabel in postorder, and hang the decreasing trees of the small-value
/// slices.
pub fn f_nk_inverse(pair: &PairNK) -> Result<Permutation> {
    let k = pair.k();
    let n = pair.n();
    let m = n + k;
    let steps = pair.d.path.steps();
    if pair.w.len() != k {
        return Err(BijectionError::MalformedPair(
            "permutation length differs from k".into(),
        ));
    }
    if steps[..k].iter().any(|s| *s != Step::Up) {
        return Err(BijectionError::MalformedPair(
            "path does not start with k up steps".into(),
        ));
    }
    if n == 0 {
        // no core: the tree is just the decreasing tree of the word
        let mut left = vec![None; m];
        let mut right = vec![None; m];
        let values: Vec<u8> = pair.w.values().map(|v| v as u8).collect();
        links_from_inorder_word(&values, &mut left, &mut right);
        let t = DecreasingBinaryTree::from_links(left, right)
            .map_err(|e| BijectionError::MalformedPair(e.to_string()))?;
        return Ok(t.inorder_read());
    }
    let (runs, segs) = parse_runs_and_segments(&steps[k..]);
    let l = segs.len();
    debug_assert_eq!(runs.len(), l + 1);
    // undo the four assembly placements positionally
    let (c, segments): (Vec<usize>, Vec<DyckPath>) = match (runs[0] > 0, runs[l] > 0) {
        (true, true) | (false, false) => (runs.clone(), segs.clone()),
        (true, false) => {
            // trailing segments (no runs between) are the head of the
            // segment list; the run before them closed the composition
            let q = (0..l).take_while(|&i| runs[l - i] == 0).count();
            let mut c = vec![0usize; q];
            c.extend_from_slice(&runs[..=l - q]);
            let mut segments: Vec<DyckPath> = segs[l - q..].to_vec();
            segments.extend_from_slice(&segs[..l - q]);
            (c, segments)
        }
        (false, true) => {
            // leading segments are the tail of the segment list
            let p = (0..=l).take_while(|&i| runs[i] == 0).count();
            let mut c: Vec<usize> = runs[p..].to_vec();
            c.extend(std::iter::repeat_n(0, p));
            let mut segments: Vec<DyckPath> = segs[p..].to_vec();
            segments.extend_from_slice(&segs[..p]);
            (c, segments)
        }
    };
    debug_assert_eq!(c.len(), l + 1);
    debug_assert_eq!(segments.len(), l);

    // rebuild the core shape
    let mut arena = CoreAssembly::new();
    let mut a_nodes = Vec::with_capacity(l);
    let mut comp_roots = Vec::with_capacity(l);
    for seg in &segments {
        let inner = DyckPath::new(seg.steps()[1..seg.len() - 1].to_vec())
            .map_err(|_| BijectionError::MalformedPair("segment returns early".into()))?;
        let shape = dyck_to_tree(&inner);
        let (_, root) = arena.import(&shape);
        let a = arena.alloc();
        match root {
            Some(r) => {
                let lm = arena.leftmost_from(r);
                arena.left[lm] = Some(a);
                comp_roots.push(r);
            }
            None => comp_roots.push(a),
        }
        a_nodes.push(a);
    }
    for i in 0..l - 1 {
        debug_assert!(arena.right[a_nodes[i]].is_none());
        arena.right[a_nodes[i]] = Some(comp_roots[i + 1]);
    }
    let core_root = comp_roots[0];
    // postorder labels k+1 ..= m
    let order = arena.postorder(core_root);
    debug_assert_eq!(order.len(), n);
    let mut label_of = vec![0usize; arena.left.len()];
    for (pos, &node) in order.iter().enumerate() {
        label_of[node] = k + 1 + pos;
    }
    if label_of[a_nodes[l - 1]] != k + 1 {
        return Err(BijectionError::MalformedPair(
            "postorder labeling does not place k+1 at the chain end".into(),
        ));
    }
    // assemble label-space links
    let mut left = vec![None; m];
    let mut right = vec![None; m];
    for node in 0..arena.left.len() {
        let lab = label_of[node];
        left[lab - 1] = arena.left[node].map(|c| label_of[c] as u8);
        right[lab - 1] = arena.right[node].map(|c| label_of[c] as u8);
    }
    // hang the decreasing trees of the slices of the small word
    let values: Vec<u8> = pair.w.values().map(|v| v as u8).collect();
    let mut start = 0usize;
    for i in 0..l {
        let slice = &values[start..start + c[i]];
        start += c[i];
        let root = links_from_inorder_word(slice, &mut left, &mut right);
        let a_label = label_of[a_nodes[i]];
        debug_assert!(left[a_label - 1].is_none());
        left[a_label - 1] = root;
    }
    let tail = &values[start..];
    let root = links_from_inorder_word(tail, &mut left, &mut right);
    debug_assert!(right[k].is_none());
    right[k] = root; // right subtree of label k+1
    let t = DecreasingBinaryTree::from_links(left, right)
        .map_err(|e| BijectionError::MalformedPair(e.to_string()))?;
    let w = t.inorder_read();
    debug_assert_eq!(f_nk(&w, n, k).unwrap(), *pair);
    Ok(w)
}

// ---------------------------------------------------------------------------
// B-tree side
// ---------------------------------------------------------------------------

/// Decomposition of a B-tree of the lollipop graph: the totally ordered
/// clique labels, the other labels on the path from the lowest clique node
/// to the root, the clique counters between them, and the Dyck paths of the
/// hanging branches.
#[derive(Clone, Debug)]
pub struct CoreChain {
    /// Clique labels bottom-up: `w_1 <_T ... <_T w_k`.
    pub clique_chain: Vec<usize>,
    /// Non-clique labels on the core chain, bottom-up: `a_1 <_T ... <_T a_l`.
    pub a_nodes: Vec<usize>,
    /// `c_1, ..., c_(l+1)`: clique labels below `a_1`, between consecutive
    /// `a`s, and above `a_l`.
    pub c: Vec<usize>,
    /// Path encoding the descendants of `w_1`; may touch the diagonal.
    pub d0: DyckPath,
    /// `D_1, ..., D_l` from the secondary branches, each wrapped `U ... R`.
    pub segments: Vec<DyckPath>,
}

/// Shape of a branch of a B-tree over an ascending-label path subgraph:
/// children holding smaller labels go left, larger labels go right.
fn branch_shape(b: &BTree, root: Option<usize>) -> Result<TreeShape> {
    let mut shape = TreeShape::empty();
    fn walk(b: &BTree, v: usize, shape: &mut TreeShape) -> Result<Option<usize>> {
        let id = shape.left.len();
        shape.left.push(None);
        shape.right.push(None);
        let children = b.children(v);
        if children.len() > 2 {
            return Err(structural(format!(
                "path-branch node {} has {} children",
                v + 1,
                children.len()
            )));
        }
        let mut left = None;
        let mut right = None;
        for ch in children {
            let desc = b.descendants(ch);
            let below = desc.iter().all(|u| u < v);
            let above = desc.iter().all(|u| u > v);
            let sub = walk(b, ch, shape)?;
            if below {
                if left.is_some() {
                    return Err(structural("two left branches on a path node"));
                }
                left = sub;
            } else if above {
                if right.is_some() {
                    return Err(structural("two right branches on a path node"));
                }
                right = sub;
            } else {
                return Err(structural(format!(
                    "branch of {} mixes labels on both sides",
                    v + 1
                )));
            }
        }
        shape.left[id] = left;
        shape.right[id] = right;
        Ok(Some(id))
    }
    if let Some(r) = root {
        shape.root = walk(b, r, &mut shape)?;
    }
    Ok(shape)
}

/// Extract the core chain of a B-tree of `lollipop(n-1, k+1)` with canonical
/// labels, asserting the structural facts the encoding relies on.
pub fn decompose_chain(b: &BTree, n: usize, k: usize) -> Result<CoreChain> {
    let g = b.graph();
    if g.n() != n + k || g.labels().iter().enumerate().any(|(i, &l)| l != i + 1) {
        return Err(BijectionError::NotInDomain(
            "expected a canonically labeled lollipop B-tree".into(),
        ));
    }
    assert!(k >= 1, "the chain decomposition needs clique vertices");
    // vertices are label - 1; clique labels are n+1 ..= n+k
    let clique: Vec<usize> = (n..n + k).collect();
    // ancestor order: v is below u when u lies on the path from v to the root
    let is_ancestor = |v: usize, u: usize| {
        let mut x = Some(v);
        while let Some(cur) = x {
            if cur == u {
                return true;
            }
            x = b.parent(cur);
        }
        false
    };
    let mut chain = clique.clone();
    chain.sort_by(|&x, &y| {
        if x == y {
            std::cmp::Ordering::Equal
        } else if is_ancestor(x, y) {
            std::cmp::Ordering::Less
        } else if is_ancestor(y, x) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    for w in chain.windows(2) {
        if !is_ancestor(w[0], w[1]) {
            return Err(structural("clique vertices are not totally ordered"));
        }
    }
    for &v in &clique {
        if b.children(v).len() > 1 {
            return Err(structural(format!(
                "clique vertex {} has more than one child",
                v + 1
            )));
        }
    }
    let w1 = chain[0];
    // core chain: path from w_1 to the root
    let mut core_path = vec![w1];
    let mut x = w1;
    while let Some(p) = b.parent(x) {
        core_path.push(p);
        x = p;
    }
    let a_nodes: Vec<usize> = core_path
        .iter()
        .copied()
        .filter(|v| !clique.contains(v))
        .collect();
    let l = a_nodes.len();
    // labels a_1 > a_2 > ... > a_l, all at most n
    for w in a_nodes.windows(2) {
        if w[0] <= w[1] {
            return Err(structural("core-chain labels fail to decrease"));
        }
    }
    if a_nodes.iter().any(|&v| v >= n) {
        return Err(structural("a-node is a clique vertex"));
    }
    // clique counters around the a-nodes
    let mut c = vec![0usize; l + 1];
    let mut seen_a = 0usize;
    for &v in &core_path {
        if clique.contains(&v) {
            c[seen_a] += 1;
        } else {
            seen_a += 1;
        }
    }
    debug_assert_eq!(c.iter().sum::<usize>(), k);
    // descendants of w_1
    let b0_root = b.children(w1).first().copied();
    let b0_set = b
        .descendants(w1)
        .difference(crate::subset::Subset::singleton(w1));
    let a1_label = a_nodes.first().map(|&v| v + 1).unwrap_or(0);
    let expected_b0 = crate::subset::Subset::from_iter(a1_label..n);
    if b0_set != expected_b0 {
        return Err(structural(format!(
            "descendants of the lowest clique vertex are {b0_set}, expected {expected_b0}"
        )));
    }
    let d0 = tree_to_dyck(&branch_shape(b, b0_root)?);
    // secondary branches of the a-nodes
    let mut segments = Vec::with_capacity(l);
    for (i, &a) in a_nodes.iter().enumerate() {
        let main_child = core_path[core_path.iter().position(|&v| v == a).unwrap() - 1];
        let secondary: Vec<usize> = b
            .children(a)
            .into_iter()
            .filter(|&ch| ch != main_child)
            .collect();
        if secondary.len() > 1 {
            return Err(structural(format!(
                "core-chain node {} has two secondary branches",
                a + 1
            )));
        }
        let sec_root = secondary.first().copied();
        let lo = a_nodes.get(i + 1).map(|&v| v + 1).unwrap_or(0); // a_(i+1), 0 past the end
        let expected: crate::subset::Subset = crate::subset::Subset::from_iter(lo..a);
        let actual = sec_root
            .map(|r| b.descendants(r))
            .unwrap_or(crate::subset::Subset::EMPTY);
        if actual != expected {
            return Err(structural(format!(
                "secondary branch of {} is {actual}, expected {expected}",
                a + 1
            )));
        }
        // the main-branch edge always descends in label
        let inner = tree_to_dyck(&branch_shape(b, sec_root)?);
        let mut builder = PathBuilder::new();
        builder.ups(1).path(&inner).rights(1);
        segments.push(builder.finish().expect("wrapped path is balanced"));
    }
    Ok(CoreChain {
        clique_chain: chain.iter().map(|&v| v + 1).collect(),
        a_nodes: a_nodes.iter().map(|&v| v + 1).collect(),
        c,
        d0,
        segments,
    })
}

/// Encode a B-tree of `lollipop(n-1, k+1)` as a pair: clique labels shifted
/// down by `n`, and the path assembled from the branch encodings.
pub fn g_nk(b: &BTree, n: usize, k: usize) -> Result<PairNK> {
    if k == 0 {
        // plain path graph: the whole tree is one branch
        let shape = branch_shape(b, Some(b.root()))?;
        let d = tree_to_dyck(&shape);
        let marked = mark(&d, 0).expect("k = 0 needs no leading ups");
        return Ok(PairNK::new(Permutation::identity(0), marked));
    }
    let dec = decompose_chain(b, n, k)?;
    let w =
        Permutation::try_from_values(&dec.clique_chain.iter().map(|&l| l - n).collect::<Vec<_>>())
            .expect("shifted clique labels form a permutation");
    let l = dec.segments.len();
    let mut builder = PathBuilder::new();
    builder.ups(k).path(&dec.d0);
    for i in 0..l {
        builder.rights(dec.c[i]).path(&dec.segments[i]);
    }
    builder.rights(dec.c[l]);
    let path = builder.finish().expect("assembled path is balanced");
    debug_assert_eq!(path.len(), 2 * (n + k));
    let marked = mark(&path, k).expect("path starts with k up steps");
    Ok(PairNK::new(w, marked))
}

/// Label a shape over a consecutive interval by inorder position and push
/// its parent links (in label space) into `parent`.
fn attach_interval(
    shape: &TreeShape,
    lo_label: usize,
    parent_of_root: Option<usize>,
    parent: &mut [Option<usize>],
) -> Result<()> {
    let inorder = shape.inorder();
    let mut label_of = vec![0usize; shape.n_nodes()];
    for (pos, &node) in inorder.iter().enumerate() {
        label_of[node] = lo_label + pos;
    }
    for node in 0..shape.n_nodes() {
        for ch in [shape.left[node], shape.right[node]].into_iter().flatten() {
            parent[label_of[ch] - 1] = Some(label_of[node] - 1);
        }
    }
    if let Some(r) = shape.root {
        parent[label_of[r] - 1] = parent_of_root;
    }
    Ok(())
}

/// Inverse of [`g_nk`]: split off the branch before the first marked right
/// step, segment the rest by first returns, rebuild the chain skeleton from
/// the clique word and counters, and hang the interval-labeled branches.
pub fn g_nk_inverse(pair: &PairNK) -> Result<BTree> {
    let k = pair.k();
    let n = pair.n();
    let steps = pair.d.path.steps();
    if pair.w.len() != k {
        return Err(BijectionError::MalformedPair(
            "permutation length differs from k".into(),
        ));
    }
    let graph = lollipop(n.saturating_sub(1), k + 1).map_err(BijectionError::Graph)?;
    if k == 0 {
        let shape = dyck_to_tree(&pair.d.path);
        let mut parent = vec![None; n];
        attach_interval(&shape, 1, None, &mut parent)?;
        let root = shape
            .root
            .map(|r| {
                let inorder = shape.inorder();
                let pos = inorder.iter().position(|&v| v == r).unwrap();
                pos // label pos+1, vertex pos
            })
            .ok_or_else(|| BijectionError::MalformedPair("empty path for n >= 1".into()))?;
        return BTree::from_parts(graph, parent, root).map_err(BijectionError::Graph);
    }
    if steps[..k].iter().any(|s| *s != Step::Up) {
        return Err(BijectionError::MalformedPair(
            "path does not start with k up steps".into(),
        ));
    }
    // split the prefix that stays at or above the starting level
    let tail = &steps[k..];
    let mut level = 0i64;
    let mut split = tail.len();
    for (i, s) in tail.iter().enumerate() {
        let next = level + if *s == Step::Up { 1 } else { -1 };
        if next < 0 {
            split = i;
            break;
        }
        level = next;
    }
    let d0 = DyckPath::new(tail[..split].to_vec())
        .map_err(|_| BijectionError::MalformedPair("branch prefix is not balanced".into()))?;
    let (runs, segs) = parse_runs_and_segments(&tail[split..]);
    let l = segs.len();
    // runs[i] = c_(i+1) in order; the last run is c_(l+1)
    debug_assert_eq!(runs.len(), l + 1);
    if runs.iter().sum::<usize>() != k {
        return Err(BijectionError::MalformedPair(
            "marked right steps do not sum to k".into(),
        ));
    }
    // a-labels from segment lengths
    let mut a_labels = Vec::with_capacity(l);
    let mut prev = n - d0.semilength();
    for seg in &segs {
        a_labels.push(prev);
        prev -= seg.semilength();
    }
    if prev != 0 {
        return Err(BijectionError::MalformedPair(
            "segment lengths do not close at zero".into(),
        ));
    }
    // chain skeleton bottom-up: c_1 clique labels, a_1, c_2 clique labels, ...
    let clique_labels: Vec<usize> = pair.w.values().map(|v| v + n).collect();
    let mut chain: Vec<usize> = vec![];
    let mut used = 0usize;
    for i in 0..=l {
        for _ in 0..runs[i] {
            chain.push(clique_labels[used]);
            used += 1;
        }
        if i < l {
            chain.push(a_labels[i]);
        }
    }
    debug_assert_eq!(used, k);
    let mut parent: Vec<Option<usize>> = vec![None; n + k];
    for w in chain.windows(2) {
        parent[w[0] - 1] = Some(w[1] - 1);
    }
    let root = chain[chain.len() - 1] - 1;
    // descendants of the lowest clique vertex
    let w1 = chain[0];
    let b0_lo = a_labels.first().map(|&a| a + 1).unwrap_or(1);
    attach_interval(&dyck_to_tree(&d0), b0_lo, Some(w1 - 1), &mut parent)?;
    // secondary branches
    for (i, seg) in segs.iter().enumerate() {
        let inner = DyckPath::new(seg.steps()[1..seg.len() - 1].to_vec())
            .map_err(|_| BijectionError::MalformedPair("segment returns early".into()))?;
        let lo = a_labels.get(i + 1).map(|&a| a + 1).unwrap_or(1);
        attach_interval(
            &dyck_to_tree(&inner),
            lo,
            Some(a_labels[i] - 1),
            &mut parent,
        )?;
    }
    BTree::from_parts(graph, parent, root).map_err(BijectionError::Graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyck::des_pair;
    use crate::graph::enumerate_btrees;
    use crate::stacksort::{gen_s_nk, preimage_of_set};

    fn perm(v: &[usize]) -> Permutation {
        Permutation::try_from_values(v).unwrap()
    }

    #[test]
    fn core_decomposition_smallest_cases() {
        // n = 1, k = 1: two preimages of the identity of size 2
        let t = inorder_tree(&perm(&[1, 2]));
        let dec = decompose_core(&t, 1, 1).unwrap();
        assert_eq!(dec.c, vec![1, 0]);
        assert_eq!(dec.segments.len(), 1);
        assert_eq!(dec.segments[0].to_string(), "UR");

        let t = inorder_tree(&perm(&[2, 1]));
        let dec = decompose_core(&t, 1, 1).unwrap();
        assert_eq!(dec.c, vec![0, 1]);
        assert_eq!(dec.segments[0].to_string(), "UR");
    }

    #[test]
    fn f_worked_examples() {
        let p = f_nk(&perm(&[1, 2]), 1, 1).unwrap();
        assert_eq!(p.w, perm(&[1]));
        assert_eq!(p.d.path.to_string(), "UURR");
        let p = f_nk(&perm(&[2, 1]), 1, 1).unwrap();
        assert_eq!(p.d.path.to_string(), "URUR");
        assert_eq!(
            f_nk_inverse(&f_nk(&perm(&[1, 2]), 1, 1).unwrap()).unwrap(),
            perm(&[1, 2])
        );
        assert_eq!(
            f_nk_inverse(&f_nk(&perm(&[2, 1]), 1, 1).unwrap()).unwrap(),
            perm(&[2, 1])
        );
    }

    #[test]
    fn f_rejects_outside_domain() {
        assert!(f_nk(&perm(&[2, 1]), 1, 0).is_err());
        assert!(f_nk(&perm(&[1, 2, 3]), 1, 1).is_err());
    }

    #[test]
    fn f_round_trip_exhaustive_small() {
        for n in 0..=3 {
            for k in 0..=3 {
                if n + k == 0 || n + k > 5 {
                    continue;
                }
                let domain = preimage_of_set(&gen_s_nk(n, k));
                let mut images = std::collections::BTreeSet::new();
                for w in &domain {
                    let pair = f_nk(w, n, k).unwrap();
                    assert_eq!(
                        des_pair(&pair),
                        w.descents(),
                        "descents preserved for {w} (n={n}, k={k})"
                    );
                    assert_eq!(f_nk_inverse(&pair).unwrap(), *w);
                    images.insert(format!("{:?}|{}", pair.w, pair.d.path));
                }
                // injective onto a full-size image
                let expected =
                    (1..=k as u64).product::<u64>() * crate::dyck::catalan_conv(n as u64, k as u64);
                assert_eq!(images.len() as u64, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn f_specializes_to_tree_encoding_at_k_zero() {
        // k = 0: the pair is just the Dyck path of the preimage tree, and
        // descents land on valleys
        for w in preimage_of_set(&[Permutation::identity(4)]) {
            let pair = f_nk(&w, 4, 0).unwrap();
            assert!(pair.w.is_empty());
            assert_eq!(pair.d.path.valleys(), w.descents());
        }
    }

    #[test]
    fn chain_decomposition_of_the_single_edge() {
        // lollipop(0, 2): clique {1, 2}, two B-trees
        let g = lollipop(0, 2).unwrap();
        for b in enumerate_btrees(&g) {
            let dec = decompose_chain(&b, 1, 1).unwrap();
            if b.root() == 1 {
                // root label 2: no a-nodes, descendants of w1 = {1}
                assert_eq!(dec.a_nodes, Vec::<usize>::new());
                assert_eq!(dec.c, vec![1]);
                assert_eq!(dec.d0.to_string(), "UR");
            } else {
                // root label 1: chain 2 <_T 1, one a-node
                assert_eq!(dec.a_nodes, vec![1]);
                assert_eq!(dec.c, vec![1, 0]);
                assert_eq!(dec.d0.to_string(), "");
                assert_eq!(dec.segments[0].to_string(), "UR");
            }
        }
    }

    #[test]
    fn g_worked_examples() {
        let g = lollipop(0, 2).unwrap();
        for b in enumerate_btrees(&g) {
            let pair = g_nk(&b, 1, 1).unwrap();
            assert_eq!(pair.w, perm(&[1]));
            if b.root() == 1 {
                assert_eq!(pair.d.path.to_string(), "UURR");
            } else {
                assert_eq!(pair.d.path.to_string(), "URUR");
            }
            assert_eq!(g_nk_inverse(&pair).unwrap(), b);
        }
    }

    #[test]
    fn g_round_trip_exhaustive_small() {
        for n in 1..=4 {
            for k in 0..=3 {
                if n + k > 5 {
                    continue;
                }
                let g = lollipop(n - 1, k + 1).unwrap();
                let mut images = std::collections::BTreeSet::new();
                let btrees = enumerate_btrees(&g);
                for b in &btrees {
                    let pair = g_nk(b, n, k).unwrap();
                    assert_eq!(
                        des_pair(&pair),
                        b.descents(),
                        "descents preserved (n={n}, k={k})"
                    );
                    assert_eq!(&g_nk_inverse(&pair).unwrap(), b);
                    images.insert(format!("{:?}|{}", pair.w, pair.d.path));
                }
                let expected =
                    (1..=k as u64).product::<u64>() * crate::dyck::catalan_conv(n as u64, k as u64);
                assert_eq!(images.len() as u64, expected, "n={n} k={k}");
                assert_eq!(btrees.len() as u64, expected);
            }
        }
    }

    #[test]
    fn chain_descent_edge_facts() {
        // along the core chain the main-branch edge of each a-node descends
        // in label, and the secondary edge never does
        for (n, k) in [(2, 2), (3, 1), (2, 1)] {
            let g = lollipop(n - 1, k + 1).unwrap();
            for b in enumerate_btrees(&g) {
                let dec = decompose_chain(&b, n, k).unwrap();
                for &a in &dec.a_nodes {
                    let v = a - 1;
                    for ch in b.children(v) {
                        let desc = b.descendants(ch);
                        let is_secondary = desc.iter().all(|u| u < v);
                        if !is_secondary {
                            // main-branch child carries a larger label
                            assert!(ch > v);
                        } else {
                            assert!(ch < v);
                        }
                    }
                }
            }
        }
    }
}
