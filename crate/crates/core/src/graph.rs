//! Connected labeled graphs, graph tubings, B-trees of maximal tubings, the
//! lollipop family, and the line-graph bridge from posets whose Hasse
//! diagram is a tree.

use crate::poly::IntPoly;
use crate::poset::Poset;
use crate::subset::Subset;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index {0} out of range for {1} vertices")]
    IndexOutOfRange(usize, usize),
    #[error("graph must be connected")]
    Disconnected,
    #[error("graph needs at least one vertex")]
    Empty,
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("labels must be a permutation of 1..={0}")]
    BadLabels(usize),
    #[error("lollipop graphs need a nonempty complete part")]
    EmptyClique,
    #[error("Hasse diagram is not a tree, the line-graph correspondence needs one")]
    HasseNotATree,
    #[error("tubing is not maximal: {found} tubes, expected {expected}")]
    NotMaximal { found: usize, expected: usize },
    #[error("tube set is not a tubing of this graph")]
    NotATubing,
    #[error("at most 64 vertices are supported, got {0}")]
    TooLarge(usize),
}

/// A connected graph with integer vertex labels (a permutation of `1..=n`).
/// Vertices are indices `0..n`; adjacency is by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Subset>,
    labels: Vec<usize>,
}

impl Graph {
    pub fn new(
        n: usize,
        edges: &[(usize, usize)],
        labels: Option<Vec<usize>>,
    ) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > 64 {
            return Err(GraphError::TooLarge(n));
        }
        let mut adj = vec![Subset::EMPTY; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::IndexOutOfRange(a.max(b), n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let labels = labels.unwrap_or_else(|| (1..=n).collect());
        let mut seen = vec![false; n];
        if labels.len() != n {
            return Err(GraphError::BadLabels(n));
        }
        for &l in &labels {
            if l == 0 || l > n || seen[l - 1] {
                return Err(GraphError::BadLabels(n));
            }
            seen[l - 1] = true;
        }
        let g = Graph { n, adj, labels };
        if !g.connected_within(g.full()) {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Vertex carrying the given label.
    pub fn vertex_with_label(&self, l: usize) -> usize {
        self.labels
            .iter()
            .position(|&x| x == l)
            .expect("label in range")
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> Subset {
        self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for a in 0..self.n {
            for b in self.adj[a].iter() {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }

    fn connected_within(&self, s: Subset) -> bool {
        let Some(start) = s.min() else {
            return false;
        };
        let mut seen = Subset::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = Subset::EMPTY;
            for v in frontier.iter() {
                next = next.union(self.adj[v].intersection(s));
            }
            frontier = next.difference(seen);
            seen = seen.union(next);
        }
        seen == s
    }

    /// A tube is a nonempty proper vertex subset inducing a connected
    /// subgraph.
    pub fn is_tube(&self, s: Subset) -> bool {
        !s.is_empty() && s != self.full() && s.is_subset_of(self.full()) && self.connected_within(s)
    }

    /// Compatible: nested, or disjoint with no edge joining the two sides
    /// (so the union cannot induce a connected subgraph).
    pub fn compatible(&self, a: Subset, b: Subset) -> bool {
        if a.is_nested_with(b) {
            return true;
        }
        if !a.is_disjoint(b) {
            return false;
        }
        a.iter().all(|v| self.adj[v].intersection(b).is_empty())
    }

    /// All tubes, sorted by bitmask value.
    pub fn tubes(&self) -> Vec<Subset> {
        let full = self.full().0;
        let mut out = vec![];
        for m in 1..full {
            if self.is_tube(Subset(m)) {
                out.push(Subset(m));
            }
        }
        out
    }
}

/// Path graph with `n` vertices `1 - 2 - ... - n` (labels follow indices).
pub fn path_graph(n: usize) -> Result<Graph, GraphError> {
    Graph::new(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>(), None)
}

/// Complete graph on `n` vertices.
pub fn complete_graph(n: usize) -> Result<Graph, GraphError> {
    let mut edges = vec![];
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    Graph::new(n, &edges, None)
}

/// Lollipop graph: a path of `p` vertices joined by an edge to a complete
/// graph of `q` vertices.
///
/// Labels are canonical for the family: the path carries `p, p-1, ..., 1`
/// walking away from the complete part, the link vertex is `p + 1`, and the
/// remaining clique vertices are `p + 2, ..., p + q`. Vertex index equals
/// label minus one.
pub fn lollipop(p: usize, q: usize) -> Result<Graph, GraphError> {
    if q == 0 {
        return Err(GraphError::EmptyClique);
    }
    let n = p + q;
    let mut edges = vec![];
    for i in 1..p {
        edges.push((i - 1, i));
    }
    if p > 0 {
        edges.push((p - 1, p));
    }
    for a in p..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    Graph::new(n, &edges, None)
}

/// Line graph of the Hasse diagram of `p`: one vertex per cover relation,
/// adjacent when the covers share an endpoint. The Hasse diagram must be a
/// tree. Labels follow the sorted cover order.
pub fn line_graph_of_hasse(p: &Poset) -> Result<Graph, GraphError> {
    let covers = p.covers();
    if covers.len() + 1 != p.n() || !p.is_connected() {
        return Err(GraphError::HasseNotATree);
    }
    let m = covers.len();
    let mut edges = vec![];
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = covers[i];
            let (c, d) = covers[j];
            if a == c || a == d || b == c || b == d {
                edges.push((i, j));
            }
        }
    }
    Graph::new(m, &edges, None)
}

/// A set of pairwise compatible tubes, stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GraphTubing {
    tubes: Vec<Subset>,
}

impl GraphTubing {
    pub fn new(mut tubes: Vec<Subset>) -> GraphTubing {
        tubes.sort_unstable();
        tubes.dedup();
        GraphTubing { tubes }
    }

    pub fn tubes(&self) -> &[Subset] {
        &self.tubes
    }

    pub fn len(&self) -> usize {
        self.tubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tubes.is_empty()
    }
}

pub fn is_graph_tubing(g: &Graph, tubes: &[Subset]) -> bool {
    tubes.iter().all(|&t| g.is_tube(t))
        && (0..tubes.len()).all(|i| (i + 1..tubes.len()).all(|j| g.compatible(tubes[i], tubes[j])))
}

/// All tubings of a connected graph, including the empty one; deterministic
/// depth-first order over tubes sorted by bitmask.
pub fn enumerate_graph_tubings(g: &Graph) -> Vec<GraphTubing> {
    let tubes = g.tubes();
    let m = tubes.len();
    let mut compat = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                compat[i][j] = g.compatible(tubes[i], tubes[j]);
            }
        }
    }
    let mut out = vec![];
    let mut current: Vec<usize> = vec![];
    fn walk(
        start: usize,
        m: usize,
        compat: &[Vec<bool>],
        current: &mut Vec<usize>,
        tubes: &[Subset],
        out: &mut Vec<GraphTubing>,
    ) {
        out.push(GraphTubing {
            tubes: current.iter().map(|&i| tubes[i]).collect(),
        });
        for cand in start..m {
            if current.iter().all(|&c| compat[c][cand]) {
                current.push(cand);
                walk(cand + 1, m, compat, current, tubes, out);
                current.pop();
            }
        }
    }
    walk(0, m, &compat, &mut current, &tubes, &mut out);
    out
}

/// The maximal tubings; on a connected graph these have exactly `n - 1`
/// tubes.
pub fn enumerate_maximal_graph_tubings(g: &Graph) -> Vec<GraphTubing> {
    enumerate_graph_tubings(g)
        .into_iter()
        .filter(|t| t.len() == g.n() - 1)
        .collect()
}

/// The rooted tree encoding a maximal tubing: every non-root vertex's
/// descendant set is a tube of the tubing, and descendant sets of
/// incomparable vertices never union to a tubing member.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BTree {
    graph: Graph,
    parent: Vec<Option<usize>>,
    root: usize,
}

impl BTree {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.graph.n())
            .filter(|&c| self.parent[c] == Some(v))
            .collect()
    }

    /// Descendant set of `v`, including `v`.
    pub fn descendants(&self, v: usize) -> Subset {
        let mut s = Subset::singleton(v);
        let mut changed = true;
        while changed {
            changed = false;
            for c in 0..self.graph.n() {
                if let Some(p) = self.parent[c] {
                    if s.contains(p) && !s.contains(c) {
                        s.insert(c);
                        changed = true;
                    }
                }
            }
        }
        s
    }

    /// Tree edges `(parent, child)` where the child's label exceeds the
    /// parent's.
    pub fn descents(&self) -> usize {
        (0..self.graph.n())
            .filter(|&c| self.parent[c].is_some_and(|p| self.graph.label(c) > self.graph.label(p)))
            .count()
    }

    /// The tubing this tree encodes: descendant sets of all non-root
    /// vertices.
    pub fn tubing(&self) -> GraphTubing {
        GraphTubing::new(
            (0..self.graph.n())
                .filter(|&v| v != self.root)
                .map(|v| self.descendants(v))
                .collect(),
        )
    }

    pub fn from_parts(
        graph: Graph,
        parent: Vec<Option<usize>>,
        root: usize,
    ) -> Result<BTree, GraphError> {
        let t = BTree {
            graph,
            parent,
            root,
        };
        // the encoded tubing must be a maximal tubing
        let tubing = t.tubing();
        if tubing.len() != t.graph.n() - 1 {
            return Err(GraphError::NotMaximal {
                found: tubing.len(),
                expected: t.graph.n() - 1,
            });
        }
        if !is_graph_tubing(&t.graph, tubing.tubes()) {
            return Err(GraphError::NotATubing);
        }
        Ok(t)
    }
}

/// Build the B-tree of a maximal tubing: walk the tubes of `M + {V}` in
/// increasing size; each tube has exactly one vertex not covered by its
/// maximal proper subtubes, which becomes the tube's root and the parent of
/// those subtubes' roots.
pub fn btree_from_tubing(g: &Graph, m: &GraphTubing) -> Result<BTree, GraphError> {
    if m.len() != g.n() - 1 {
        return Err(GraphError::NotMaximal {
            found: m.len(),
            expected: g.n() - 1,
        });
    }
    if !is_graph_tubing(g, m.tubes()) {
        return Err(GraphError::NotATubing);
    }
    let mut tubes: Vec<Subset> = m.tubes().to_vec();
    tubes.push(g.full());
    tubes.sort_by_key(|t| (t.len(), t.0));
    let mut root_of: Vec<(Subset, usize)> = vec![];
    let mut parent = vec![None; g.n()];
    let mut tree_root = 0;
    for &t in &tubes {
        // maximal proper subtubes among those already processed
        let inside: Vec<&(Subset, usize)> = root_of
            .iter()
            .filter(|(s, _)| s.is_subset_of(t) && *s != t)
            .collect();
        let maximal: Vec<&(Subset, usize)> = inside
            .iter()
            .filter(|(s, _)| !inside.iter().any(|(o, _)| *s != *o && s.is_subset_of(*o)))
            .copied()
            .collect();
        let mut covered = Subset::EMPTY;
        for (s, _) in &maximal {
            covered = covered.union(*s);
        }
        let free = t.difference(covered);
        debug_assert_eq!(free.len(), 1, "every tube roots exactly one vertex");
        let r = free.min().expect("nonempty");
        for (_, child_root) in &maximal {
            parent[*child_root] = Some(r);
        }
        if t == g.full() {
            tree_root = r;
        }
        root_of.push((t, r));
    }
    Ok(BTree {
        graph: g.clone(),
        parent,
        root: tree_root,
    })
}

/// All B-trees of a graph, one per maximal tubing.
pub fn enumerate_btrees(g: &Graph) -> Vec<BTree> {
    enumerate_maximal_graph_tubings(g)
        .iter()
        .map(|m| btree_from_tubing(g, m).expect("enumerated tubings are maximal"))
        .collect()
}

/// The descent generating polynomial over all B-trees of `g`; this is the
/// h-polynomial of the graph associahedron.
pub fn hpoly_btrees(g: &Graph) -> IntPoly {
    let mut counts: Vec<i64> = vec![];
    for b in enumerate_btrees(g) {
        let d = b.descents();
        if counts.len() <= d {
            counts.resize(d + 1, 0);
        }
        counts[d] += 1;
    }
    IntPoly::new(counts)
}

/// Brute-force graph isomorphism for the small graphs in this crate's tests
/// (labels are ignored; only adjacency matters).
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() {
        return false;
    }
    let n = g.n();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(v: usize, g: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = g.n();
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || g.neighbors(v).len() != h.neighbors(w).len() {
                continue;
            }
            let consistent = (0..v).all(|u| g.adjacent(u, v) == h.adjacent(map[u], w));
            if consistent {
                map[v] = w;
                used[w] = true;
                if go(v + 1, g, h, map, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    go(0, g, h, &mut map, &mut used)
}
