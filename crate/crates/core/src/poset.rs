//! Finite posets, their tubes and tubings, enumeration of all tubings
//! (the face lattice of the poset associahedron), and autonomous-subposet
//! surgery.
//!
//! Elements are indices `0..n`; subsets are [`Subset`] bitmasks. A tube is a
//! subset that is connected in the Hasse diagram and order-convex; a tubing
//! is a set of proper tubes that are pairwise nested or disjoint and whose
//! disjoint pairs carry no directed comparability cycle.

use crate::subset::Subset;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("element index {0} out of range for {1} elements")]
    IndexOutOfRange(usize, usize),
    #[error("cover relations contain a cycle through elements {0:?}")]
    CoverCycle(Vec<usize>),
    #[error("poset has {0} elements, operation needs at least {1}")]
    TooSmall(usize, usize),
    #[error("poset is not connected")]
    Disconnected,
    #[error("subset {0} is not autonomous")]
    NotAutonomous(Subset),
    #[error("at most 64 elements are supported, got {0}")]
    TooLarge(usize),
}

/// Why a set of tubes fails to be a tubing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TubingViolation {
    /// `tubes[index]` is not a proper tube of the poset.
    NotAProperTube { index: usize },
    /// Two tubes overlap without nesting.
    NotNestedOrDisjoint { a: Subset, b: Subset },
    /// Pairwise-disjoint tubes chained into a comparability cycle.
    PrecCycle { cycle: Vec<Subset> },
}

/// A finite poset given by its Hasse diagram, with the reachability closure
/// precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    /// up[i] = elements j with i <= j (including i)
    up: Vec<Subset>,
    /// down[i] = elements j with j <= i (including i)
    down: Vec<Subset>,
    /// undirected Hasse adjacency
    adj: Vec<Subset>,
}

impl Poset {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Hasse diagram cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Non-strict order: `a <= b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn up_set(&self, a: usize) -> Subset {
        self.up[a]
    }

    pub fn down_set(&self, a: usize) -> Subset {
        self.down[a]
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.connected_within(self.full())
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

    /// Connected in the Hasse diagram and order-convex. Singletons are tubes;
    /// properness is a separate test.
    pub fn is_tube(&self, s: Subset) -> bool {
        if s.is_empty() || !s.is_subset_of(self.full()) {
            return false;
        }
        if !self.connected_within(s) {
            return false;
        }
        // convex: for x, z in s every y with x <= y <= z is in s
        for x in s.iter() {
            for z in s.iter() {
                if !self.up[x].intersection(self.down[z]).is_subset_of(s) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_proper_tube(&self, s: Subset) -> bool {
        1 < s.len() && s.len() < self.n && self.is_tube(s)
    }

    /// All proper tubes, sorted by bitmask value.
    pub fn proper_tubes(&self) -> Vec<Subset> {
        let full = self.full().0;
        let mut out = vec![];
        // scan all subsets; poset sizes here are tiny
        let mut m: u64 = 0;
        loop {
            let s = Subset(m);
            if self.is_proper_tube(s) {
                out.push(s);
            }
            if m == full {
                break;
            }
            m += 1;
        }
        out
    }

    /// Does some element of `a` lie below some element of `b`?
    fn reaches(&self, a: Subset, b: Subset) -> bool {
        a.iter().any(|x| !self.up[x].intersection(b).is_empty())
    }

    /// The subposet induced on `s`, elements renumbered in increasing order.
    pub fn induced(&self, s: Subset) -> Poset {
        let elems: Vec<usize> = s.iter().collect();
        let index_of = |e: usize| elems.iter().position(|&x| x == e).unwrap();
        let mut covers = vec![];
        for (i, &a) in elems.iter().enumerate() {
            for &b in &elems {
                if a != b && self.leq(a, b) {
                    // keep only covers within the induced order
                    let between = self.up[a]
                        .intersection(self.down[b])
                        .intersection(s)
                        .difference(Subset::from_iter([a, b]));
                    if between.is_empty() {
                        covers.push((i, index_of(b)));
                    }
                }
            }
        }
        build_poset(elems.len(), &covers).expect("induced relations stay acyclic")
    }
}

/// Build a poset from cover relations, rejecting cycles (with a witness) and
/// silently dropping covers implied by transitivity.
pub fn build_poset(n: usize, covers: &[(usize, usize)]) -> Result<Poset, PosetError> {
    if n > 64 {
        return Err(PosetError::TooLarge(n));
    }
    let mut succ: Vec<Vec<usize>> = vec![vec![]; n];
    for &(a, b) in covers {
        if a >= n || b >= n {
            return Err(PosetError::IndexOutOfRange(a.max(b), n));
        }
        succ[a].push(b);
    }
    // cycle detection with an explicit stack for the witness
    let mut state = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
    let mut order: Vec<usize> = vec![]; // reverse topological
    fn dfs(
        v: usize,
        succ: &[Vec<usize>],
        state: &mut [u8],
        order: &mut Vec<usize>,
        stack: &mut Vec<usize>,
    ) -> Result<(), Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for &w in &succ[v] {
            match state[w] {
                0 => dfs(w, succ, state, order, stack)?,
                1 => {
                    let at = stack.iter().position(|&x| x == w).unwrap();
                    return Err(stack[at..].to_vec());
                }
                _ => {}
            }
        }
        stack.pop();
        state[v] = 2;
        order.push(v);
        Ok(())
    }
    let mut stack = vec![];
    for v in 0..n {
        if state[v] == 0 {
            dfs(v, &succ, &mut state, &mut order, &mut stack).map_err(PosetError::CoverCycle)?;
        }
    }
    // reachability closure in reverse topological order
    let mut up = vec![Subset::EMPTY; n];
    for &v in &order {
        let mut u = Subset::singleton(v);
        for &w in &succ[v] {
            u = u.union(up[w]);
        }
        up[v] = u;
    }
    let mut down = vec![Subset::EMPTY; n];
    for (v, u) in up.iter().enumerate() {
        for w in u.iter() {
            down[w].insert(v);
        }
    }
    // Hasse reduction: keep (a, b) only when nothing lies strictly between
    let mut hasse: Vec<(usize, usize)> = vec![];
    for &(a, b) in covers {
        if a == b {
            continue;
        }
        let between = up[a]
            .intersection(down[b])
            .difference(Subset::from_iter([a, b]));
        if between.is_empty() && !hasse.contains(&(a, b)) {
            hasse.push((a, b));
        }
    }
    hasse.sort_unstable();
    let mut adj = vec![Subset::EMPTY; n];
    for &(a, b) in &hasse {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    Ok(Poset {
        n,
        covers: hasse,
        up,
        down,
        adj,
    })
}

/// Chain with `n` elements, `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> Poset {
    build_poset(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
}

/// Antichain with `k` pairwise-incomparable elements.
pub fn antichain(k: usize) -> Poset {
    build_poset(k, &[]).unwrap()
}

/// Ordinal sum: every element of `p` below every element of `q`.
pub fn ordinal_sum(p: &Poset, q: &Poset) -> Poset {
    let np = p.n();
    let mut covers: Vec<(usize, usize)> = p.covers().to_vec();
    covers.extend(q.covers().iter().map(|&(a, b)| (a + np, b + np)));
    // join maximal elements of p to minimal elements of q
    for a in 0..np {
        if p.up_set(a).len() == 1 {
            for b in 0..q.n() {
                if q.down_set(b).len() == 1 {
                    covers.push((a, b + np));
                }
            }
        }
    }
    build_poset(np + q.n(), &covers).unwrap()
}

/// The poset family under study: a chain of `n + 1` elements with an
/// antichain of `k` elements on top.
pub fn make_a(n: usize, k: usize) -> Poset {
    ordinal_sum(&chain(n + 1), &antichain(k))
}

/// A set of proper tubes, pairwise nested or disjoint, with no directed
/// comparability cycle among disjoint tubes. Stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Tubing {
    tubes: Vec<Subset>,
}

impl Tubing {
    pub fn empty() -> Tubing {
        Tubing { tubes: vec![] }
    }

    pub fn new(mut tubes: Vec<Subset>) -> Tubing {
        tubes.sort_unstable();
        tubes.dedup();
        Tubing { tubes }
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

/// Check the tubing conditions, returning the first violation found.
pub fn is_tubing(p: &Poset, tubes: &[Subset]) -> Result<(), TubingViolation> {
    for (i, &t) in tubes.iter().enumerate() {
        if !p.is_proper_tube(t) {
            return Err(TubingViolation::NotAProperTube { index: i });
        }
    }
    for i in 0..tubes.len() {
        for j in i + 1..tubes.len() {
            let (a, b) = (tubes[i], tubes[j]);
            if !a.is_nested_with(b) && !a.is_disjoint(b) {
                return Err(TubingViolation::NotNestedOrDisjoint { a, b });
            }
        }
    }
    // directed graph on disjoint pairs: a -> b when some element of a lies
    // below some element of b
    let m = tubes.len();
    let edge = |i: usize, j: usize| {
        i != j && tubes[i].is_disjoint(tubes[j]) && p.reaches(tubes[i], tubes[j])
    };
    // DFS cycle detection with witness
    let mut state = vec![0u8; m];
    let mut stack: Vec<usize> = vec![];
    fn dfs(
        v: usize,
        m: usize,
        edge: &dyn Fn(usize, usize) -> bool,
        state: &mut [u8],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for w in 0..m {
            if edge(v, w) {
                match state[w] {
                    0 => {
                        if let Some(c) = dfs(w, m, edge, state, stack) {
                            return Some(c);
                        }
                    }
                    1 => {
                        let at = stack.iter().position(|&x| x == w).unwrap();
                        return Some(stack[at..].to_vec());
                    }
                    _ => {}
                }
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }
    for v in 0..m {
        if state[v] == 0 {
            if let Some(cycle) = dfs(v, m, &edge, &mut state, &mut stack) {
                return Err(TubingViolation::PrecCycle {
                    cycle: cycle.into_iter().map(|i| tubes[i]).collect(),
                });
            }
        }
    }
    Ok(())
}

/// All tubings of a connected poset with at least 2 elements, including the
/// empty tubing. Deterministic order: depth-first over tubes sorted by
/// bitmask.
pub fn enumerate_tubings(p: &Poset) -> Result<Vec<Tubing>, PosetError> {
    if p.n() < 2 {
        return Err(PosetError::TooSmall(p.n(), 2));
    }
    if !p.is_connected() {
        return Err(PosetError::Disconnected);
    }
    let tubes = p.proper_tubes();
    let m = tubes.len();
    // pairwise nested-or-disjoint matrix and the comparability edges among
    // disjoint pairs
    let mut compat = vec![vec![false; m]; m];
    let mut prec = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (a, b) = (tubes[i], tubes[j]);
            compat[i][j] = a.is_nested_with(b) || a.is_disjoint(b);
            prec[i][j] = a.is_disjoint(b) && p.reaches(a, b);
        }
    }
    let mut out = vec![];
    let mut current: Vec<usize> = vec![];
    // does current + candidate stay acyclic under the comparability edges?
    fn acyclic(chosen: &[usize], prec: &[Vec<bool>]) -> bool {
        let m = chosen.len();
        let mut state = vec![0u8; m];
        fn dfs(v: usize, chosen: &[usize], prec: &[Vec<bool>], state: &mut [u8]) -> bool {
            state[v] = 1;
            for w in 0..chosen.len() {
                if prec[chosen[v]][chosen[w]] {
                    match state[w] {
                        0 => {
                            if !dfs(w, chosen, prec, state) {
                                return false;
                            }
                        }
                        1 => return false,
                        _ => {}
                    }
                }
            }
            state[v] = 2;
            true
        }
        (0..m).all(|v| state[v] != 0 || dfs(v, chosen, prec, &mut state))
    }
    fn walk(
        start: usize,
        m: usize,
        compat: &[Vec<bool>],
        prec: &[Vec<bool>],
        current: &mut Vec<usize>,
        tubes: &[Subset],
        out: &mut Vec<Tubing>,
    ) {
        out.push(Tubing {
            tubes: current.iter().map(|&i| tubes[i]).collect(),
        });
        for cand in start..m {
            if current.iter().all(|&c| compat[c][cand]) {
                current.push(cand);
                if acyclic(current, prec) {
                    walk(cand + 1, m, compat, prec, current, tubes, out);
                }
                current.pop();
            }
        }
    }
    walk(0, m, &compat, &prec, &mut current, &tubes, &mut out);
    Ok(out)
}

/// Tubings that cannot be extended. On a connected poset these all have
/// exactly `n - 2` tubes.
pub fn enumerate_maximal_tubings(p: &Poset) -> Result<Vec<Tubing>, PosetError> {
    let all = enumerate_tubings(p)?;
    let target = p.n() - 2;
    Ok(all.into_iter().filter(|t| t.len() == target).collect())
}

/// Every element outside `s` must be above all of `s`, below all of `s`, or
/// incomparable to all of `s`.
pub fn is_autonomous(p: &Poset, s: Subset) -> bool {
    if s.is_empty() || !s.is_subset_of(p.full()) {
        return false;
    }
    for e in p.full().difference(s).iter() {
        let below = s.is_subset_of(p.up_set(e)); // e below all of s
        let above = s.is_subset_of(p.down_set(e)); // e above all of s
        let incomparable =
            p.up_set(e).intersection(s).is_empty() && p.down_set(e).intersection(s).is_empty();
        if !(below || above || incomparable) {
            return false;
        }
    }
    true
}

/// Excise the autonomous subset `s` and insert the poset `r` with the same
/// external relations. Remaining elements keep their relative order followed
/// by the elements of `r`.
pub fn replace_autonomous(p: &Poset, s: Subset, r: &Poset) -> Result<Poset, PosetError> {
    if !is_autonomous(p, s) {
        return Err(PosetError::NotAutonomous(s));
    }
    let outside: Vec<usize> = p.full().difference(s).iter().collect();
    let m = outside.len();
    let n_new = m + r.n();
    // full order relation, then reduce to covers via build_poset
    let mut covers = vec![];
    let mut leq = vec![vec![false; n_new]; n_new];
    for (i, &a) in outside.iter().enumerate() {
        for (j, &b) in outside.iter().enumerate() {
            leq[i][j] = p.leq(a, b);
        }
    }
    for x in 0..r.n() {
        for y in 0..r.n() {
            leq[m + x][m + y] = r.leq(x, y);
        }
    }
    for (i, &a) in outside.iter().enumerate() {
        let below_s = s.is_subset_of(p.up_set(a));
        let above_s = s.is_subset_of(p.down_set(a));
        for x in 0..r.n() {
            if below_s {
                leq[i][m + x] = true;
            }
            if above_s {
                leq[m + x][i] = true;
            }
        }
    }
    for a in 0..n_new {
        for b in 0..n_new {
            if a != b && leq[a][b] {
                let implied = (0..n_new).any(|c| c != a && c != b && leq[a][c] && leq[c][b]);
                if !implied {
                    covers.push((a, b));
                }
            }
        }
    }
    build_poset(n_new, &covers)
}

/// Brute-force isomorphism test by backtracking over label maps; intended
/// for the small posets in this crate's test corpus.
pub fn is_isomorphic(p: &Poset, q: &Poset) -> bool {
    if p.n() != q.n() {
        return false;
    }
    let n = p.n();
    let sig = |poset: &Poset, v: usize| (poset.up_set(v).len(), poset.down_set(v).len());
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        v: usize,
        p: &Poset,
        q: &Poset,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sig: &dyn Fn(&Poset, usize) -> (usize, usize),
    ) -> bool {
        let n = p.n();
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || sig(p, v) != sig(q, w) {
                continue;
            }
            let consistent =
                (0..v).all(|u| p.leq(u, v) == q.leq(map[u], w) && p.leq(v, u) == q.leq(w, map[u]));
            if consistent {
                map[v] = w;
                used[w] = true;
                if go(v + 1, p, q, map, used, sig) {
                    return true;
                }
                used[w] = false;
                map[v] = usize::MAX;
            }
        }
        false
    }
    go(0, p, q, &mut map, &mut used, &sig)
}
