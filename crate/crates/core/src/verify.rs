//! Cross-checks wiring the enumeration, bijection, and polynomial modules
//! together, with machine-readable reports.
//!
//! Each check computes one quantity along two or more independent routes and
//! compares exactly: h-polynomials from tubings versus B-tree descents
//! versus stack-sorting descents, preimage counts versus the Catalan
//! convolution, bijection round trips, the peak-based gamma identity, the
//! recurrence and real-rootedness of the two-antichain family, and the
//! chain-replacement identities.

use crate::bijection::{f_nk, f_nk_inverse, g_nk, g_nk_inverse, BijectionError};
use crate::dyck::{catalan_conv, des_pair};
use crate::graph::{complete_graph, enumerate_btrees, hpoly_btrees, lollipop, GraphError};
use crate::poly::{
    f_from_tubings, gamma_from_h, h_from_f, narayana, type_b_narayana, FaceVector, IntPoly,
    PolyError,
};
use crate::poset::{
    enumerate_tubings, is_autonomous, make_a, replace_autonomous, Poset, PosetError,
};
use crate::roots::{count_real_roots, interleaves, is_real_rooted, RootsError};
use crate::stacksort::{
    branden_gamma_check, descent_polynomial, for_each_permutation, gen_s_nk, happy_phi,
    happy_phi_inverse, inorder_tree, preimage_each, preimage_of_s_nk, Permutation,
};
use crate::subset::Subset;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Roots(#[from] RootsError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error("{0}")]
    BadInput(String),
}

type Result<T> = std::result::Result<T, VerifyError>;

/// Schema-versioned report: one claim, the quantities on both sides, and
/// counterexample witnesses when the claim fails.
#[derive(Clone, Debug)]
pub struct ClaimReport {
    pub claim: String,
    pub parameters: Value,
    pub lhs: Value,
    pub rhs: Value,
    pub equal: bool,
    pub witnesses: Vec<Value>,
}

impl ClaimReport {
    pub fn to_value(&self) -> Value {
        json!({
            "schema": 1,
            "claim": self.claim,
            "parameters": self.parameters,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "equal": self.equal,
            "witnesses": self.witnesses,
        })
    }
}

/// f-vector, h-polynomial, optional gamma vector, and the real-root count of
/// h, for one polytope.
#[derive(Clone, Debug)]
pub struct HVecReport {
    pub f: FaceVector,
    pub h: IntPoly,
    pub gamma: Option<IntPoly>,
    pub h_real_roots: usize,
    pub h_real_rooted: bool,
}

fn hvec_from_f(f: FaceVector) -> Result<HVecReport> {
    let hf = h_from_f(&f);
    if hf.negative {
        return Err(VerifyError::BadInput(
            "face vector produced a negative h-entry".into(),
        ));
    }
    let h = hf.h;
    let gamma = gamma_from_h(&h, f.dim).ok();
    let h_real_roots = count_real_roots(&h)?;
    let h_real_rooted = is_real_rooted(&h)?;
    Ok(HVecReport {
        f,
        h,
        gamma,
        h_real_roots,
        h_real_rooted,
    })
}

/// The h-polynomial of the poset associahedron by tubing enumeration.
pub fn h_poly_of_poset(p: &Poset) -> Result<IntPoly> {
    Ok(hvec_of_poset(p)?.h)
}

pub fn hvec_of_poset(p: &Poset) -> Result<HVecReport> {
    let tubings = enumerate_tubings(p)?;
    let sizes: Vec<usize> = tubings.iter().map(|t| t.len()).collect();
    let f = f_from_tubings(&sizes, p.n() - 2)?;
    hvec_from_f(f)
}

pub fn hvec_of_graph(g: &crate::graph::Graph) -> Result<HVecReport> {
    let tubings = crate::graph::enumerate_graph_tubings(g);
    let sizes: Vec<usize> = tubings.iter().map(|t| t.len()).collect();
    let f = f_from_tubings(&sizes, g.n() - 1)?;
    hvec_from_f(f)
}

/// Descent generating polynomial of the full symmetric group, by brute
/// force.
pub fn eulerian(k: usize) -> IntPoly {
    let mut counts = vec![0i64; k.max(1)];
    for_each_permutation(k, |w| counts[w.descents()] += 1);
    IntPoly::new(counts)
}

/// The line-graph counterpart of the chain-with-antichain poset.
fn family_graph(n: usize, k: usize) -> Result<crate::graph::Graph> {
    if n >= 1 {
        Ok(lollipop(n - 1, k + 1)?)
    } else {
        Ok(complete_graph(k)?)
    }
}

/// Report of the three-route h-polynomial comparison.
#[derive(Clone, Debug)]
pub struct MainTheoremReport {
    pub n: usize,
    pub k: usize,
    pub h_tubings: IntPoly,
    pub h_btrees: IntPoly,
    pub h_preimages: IntPoly,
    pub equal: bool,
}

impl MainTheoremReport {
    pub fn to_claim(&self) -> ClaimReport {
        ClaimReport {
            claim: "h-polynomial agrees across tubings, B-trees, and stack-sorting preimages"
                .into(),
            parameters: json!({"n": self.n, "k": self.k}),
            lhs: json!({"tubings": self.h_tubings, "btrees": self.h_btrees}),
            rhs: json!({"preimages": self.h_preimages}),
            equal: self.equal,
            witnesses: vec![],
        }
    }
}

/// Compute the h-polynomial of the chain-with-antichain polytope three ways
/// and compare exactly: poset tubings, B-tree descents of the line graph,
/// and descent counts over stack-sorting preimages.
pub fn main_theorem_check(n: usize, k: usize) -> Result<MainTheoremReport> {
    if n + k == 0 {
        return Err(VerifyError::BadInput("n + k must be positive".into()));
    }
    let h_tubings = h_poly_of_poset(&make_a(n, k))?;
    let h_btrees = hpoly_btrees(&family_graph(n, k)?);
    let h_preimages = descent_polynomial(&preimage_of_s_nk(n, k));
    let equal = h_tubings == h_btrees && h_btrees == h_preimages;
    Ok(MainTheoremReport {
        n,
        k,
        h_tubings,
        h_btrees,
        h_preimages,
        equal,
    })
}

/// Exhaustive count of the preimage family versus `k! * C_n^(k)`.
pub fn size_check(n: usize, k: usize) -> Result<ClaimReport> {
    if n + k == 0 {
        return Err(VerifyError::BadInput("n + k must be positive".into()));
    }
    let count = preimage_of_s_nk(n, k).len() as u64;
    let expected = (1..=k as u64).product::<u64>() * catalan_conv(n as u64, k as u64);
    Ok(ClaimReport {
        claim: "preimage count equals k! times the Catalan convolution".into(),
        parameters: json!({"n": n, "k": k}),
        lhs: json!(count),
        rhs: json!(expected),
        equal: count == expected,
        witnesses: vec![],
    })
}

/// Which of the two pair encodings to sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhichMap {
    F,
    G,
}

/// Exhaustive round-trip and descent-preservation sweep of one encoding.
pub fn verify_descent_preservation(which: WhichMap, n: usize, k: usize) -> Result<ClaimReport> {
    let mut witnesses = vec![];
    let mut source_dist: Vec<i64> = vec![];
    let mut image_dist: Vec<i64> = vec![];
    let bump = |dist: &mut Vec<i64>, d: usize| {
        if dist.len() <= d {
            dist.resize(d + 1, 0);
        }
        dist[d] += 1;
    };
    let mut domain = 0usize;
    match which {
        WhichMap::F => {
            for w in preimage_of_s_nk(n, k) {
                domain += 1;
                let pair = f_nk(&w, n, k)?;
                bump(&mut source_dist, w.descents());
                bump(&mut image_dist, des_pair(&pair));
                let back = f_nk_inverse(&pair)?;
                if w.descents() != des_pair(&pair) || back != w {
                    witnesses.push(json!({
                        "source": w,
                        "pair": {"w": pair.w, "path": pair.d.path},
                    }));
                }
            }
        }
        WhichMap::G => {
            if n == 0 {
                return Err(VerifyError::BadInput(
                    "the B-tree encoding needs n >= 1".into(),
                ));
            }
            let g = lollipop(n - 1, k + 1)?;
            for b in enumerate_btrees(&g) {
                domain += 1;
                let pair = g_nk(&b, n, k)?;
                bump(&mut source_dist, b.descents());
                bump(&mut image_dist, des_pair(&pair));
                let back = g_nk_inverse(&pair)?;
                if b.descents() != des_pair(&pair) || back != b {
                    witnesses.push(json!({
                        "source_root": b.root() + 1,
                        "pair": {"w": pair.w, "path": pair.d.path},
                    }));
                }
            }
        }
    }
    let expected = (1..=k as u64).product::<u64>() * catalan_conv(n as u64, k as u64);
    let equal = witnesses.is_empty() && domain as u64 == expected;
    Ok(ClaimReport {
        claim: match which {
            WhichMap::F => "preimage encoding is a descent-preserving bijection".into(),
            WhichMap::G => "B-tree encoding is a descent-preserving bijection".into(),
        },
        parameters: json!({"n": n, "k": k, "domain": domain}),
        lhs: json!(IntPoly::new(source_dist)),
        rhs: json!(IntPoly::new(image_dist)),
        equal,
        witnesses,
    })
}

/// The peak-based gamma identity on the preimage family, cross-checked
/// against the gamma vector of the corresponding h-polynomial.
pub fn branden_check(n: usize, k: usize) -> Result<ClaimReport> {
    if n + k == 0 {
        return Err(VerifyError::BadInput("n + k must be positive".into()));
    }
    let identity = branden_gamma_check(&gen_s_nk(n, k), n + k);
    let h = h_poly_of_poset(&make_a(n, k))?;
    let gamma_h = gamma_from_h(&h, n + k - 1)?;
    let nonneg = identity.gamma.coeffs().iter().all(|&c| c >= 0);
    let equal = identity.holds && gamma_h == identity.gamma && nonneg;
    Ok(ClaimReport {
        claim: "peak statistics give the gamma vector, nonnegative and matching h".into(),
        parameters: json!({"n": n, "k": k}),
        lhs: json!({"gamma_from_peaks": identity.gamma, "descent_poly": identity.lhs}),
        rhs: json!({"gamma_from_h": gamma_h, "expanded": identity.rhs}),
        equal,
        witnesses: vec![],
    })
}

/// Exhaustive check that the tree surgery is a right-edge-preserving
/// bijection between the two preimage families of size `n`.
pub fn happy_check(n: usize) -> Result<ClaimReport> {
    if n < 3 {
        return Err(VerifyError::BadInput(
            "the surgery needs trees with at least 3 labels".into(),
        ));
    }
    let mut witnesses = vec![];
    let mut domain = 0usize;
    let mut images = std::collections::BTreeSet::new();
    let mut lhs_dist: Vec<i64> = vec![];
    let mut rhs_dist: Vec<i64> = vec![];
    let bump = |dist: &mut Vec<i64>, d: usize| {
        if dist.len() <= d {
            dist.resize(d + 1, 0);
        }
        dist[d] += 1;
    };
    preimage_each(&Permutation::identity(n), |w| {
        if w.get(0) < n && w.get(n - 1) < n {
            domain += 1;
            let t = inorder_tree(w);
            bump(&mut lhs_dist, t.right_edge_count());
            match happy_phi(&t) {
                Ok(image) => {
                    bump(&mut rhs_dist, image.right_edge_count());
                    let round = happy_phi_inverse(&image).map(|b| b == t).unwrap_or(false);
                    if image.right_edge_count() != t.right_edge_count() || !round {
                        witnesses.push(json!({"source": w}));
                    }
                    images.insert(image.inorder_read());
                }
                Err(e) => witnesses.push(json!({"source": w, "error": e.to_string()})),
            }
        }
    });
    // the image family: preimages of 2 1 3 ... n
    let mut word: Vec<usize> = (1..=n).collect();
    word.swap(0, 1);
    let mut codomain = std::collections::BTreeSet::new();
    preimage_each(&Permutation::try_from_values(&word).unwrap(), |w| {
        codomain.insert(w.clone());
    });
    let onto = images == codomain;
    let equal = witnesses.is_empty() && onto;
    Ok(ClaimReport {
        claim: "tree surgery is a right-edge-preserving bijection between the two families".into(),
        parameters: json!({"n": n, "domain": domain}),
        lhs: json!(IntPoly::new(lhs_dist)),
        rhs: json!(IntPoly::new(rhs_dist)),
        equal,
        witnesses,
    })
}

/// The h-polynomial of the two-antichain family from preimage enumeration.
pub fn h_of_two_antichain_family(n: usize) -> IntPoly {
    descent_polynomial(&preimage_of_s_nk(n, 2))
}

/// Exact recurrence check `H_n = 2 N_(n+2) - (1+x) N_(n+1)` with the left
/// side enumerated independently.
pub fn recurrence_check(n: usize) -> Result<ClaimReport> {
    let lhs = h_of_two_antichain_family(n);
    let rhs = crate::poly::h_recurrence_rhs(n);
    Ok(ClaimReport {
        claim: "two-antichain h-polynomial satisfies the Narayana recurrence".into(),
        parameters: json!({"n": n}),
        lhs: json!(lhs.clone()),
        rhs: json!(rhs.clone()),
        equal: lhs == rhs,
        witnesses: vec![],
    })
}

/// Real-rootedness of the two-antichain h-polynomial built from the
/// recurrence: its distinct real roots must exhaust the degree `n + 1`.
pub fn realroot_check(n: usize) -> Result<ClaimReport> {
    let h = crate::poly::h_recurrence_rhs(n);
    let roots = count_real_roots(&h)?;
    let rooted = is_real_rooted(&h)?;
    let expected = n + 1;
    Ok(ClaimReport {
        claim: "two-antichain h-polynomial is real-rooted with simple roots".into(),
        parameters: json!({"n": n, "degree": h.degree()}),
        lhs: json!({"distinct_real_roots": roots, "real_rooted": rooted}),
        rhs: json!({"distinct_real_roots": expected, "real_rooted": true}),
        equal: roots == expected && rooted,
        witnesses: vec![],
    })
}

/// `N_(n-1)` interleaves `N_n`.
pub fn interlace_check(n: usize) -> Result<ClaimReport> {
    if n < 2 {
        return Err(VerifyError::BadInput("need n >= 2".into()));
    }
    let f = narayana(n - 1);
    let g = narayana(n);
    let ok = interleaves(&f, &g)?;
    Ok(ClaimReport {
        claim: "consecutive Narayana polynomials interleave".into(),
        parameters: json!({"n": n}),
        lhs: json!(f),
        rhs: json!(g),
        equal: ok,
        witnesses: vec![],
    })
}

/// Conjectured chain-replacement identity: for an autonomous chain `S` of
/// size `m` inside `P`, with `P_i` the poset that replaces `S` by an
/// antichain of size `i`,
/// `sum_c m!/(prod_i i^(c_i) c_i!) * prod_i B_i(x)^(c_i) * h_(P_l(c)) = m! h_P`,
/// the sum over weak compositions with `sum i*c_i = m`.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub m: usize,
    pub lhs: IntPoly,
    pub rhs: IntPoly,
    pub holds: bool,
    /// For `m = 2`: the gamma-vector corollary
    /// `gamma_(P_2) + gamma_(P_1) = 2 gamma_P`.
    pub gamma_corollary: Option<bool>,
}

impl ConjectureReport {
    pub fn to_claim(&self, label: &str) -> ClaimReport {
        ClaimReport {
            claim: format!("chain-replacement identity (chain of {})", self.m),
            parameters: json!({"poset": label, "m": self.m, "gamma_corollary": self.gamma_corollary}),
            lhs: json!(self.lhs),
            rhs: json!(self.rhs),
            equal: self.holds && self.gamma_corollary.unwrap_or(true),
            witnesses: vec![],
        }
    }
}

fn partitions_of(m: usize) -> Vec<Vec<usize>> {
    // weak compositions c with sum i * c_i = m, c indexed from part size 1
    let mut out = vec![];
    fn rec(m: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=max_part.min(m)).rev() {
            current[part - 1] += 1;
            rec(m - part, part, current, out);
            current[part - 1] -= 1;
        }
    }
    let mut current = vec![0usize; m];
    rec(m, m, &mut current, &mut out);
    out
}

pub fn conjecture_chain_check(p: &Poset, s: Subset) -> Result<ConjectureReport> {
    let m = s.len();
    if m < 2 {
        return Err(VerifyError::BadInput(
            "the replaced chain needs at least 2 elements".into(),
        ));
    }
    if !is_autonomous(p, s) {
        return Err(VerifyError::Poset(PosetError::NotAutonomous(s)));
    }
    // S must induce a chain
    let induced = p.induced(s);
    if !crate::poset::is_isomorphic(&induced, &crate::poset::chain(m)) {
        return Err(VerifyError::BadInput(format!(
            "subposet {s} is not a chain of size {m}"
        )));
    }
    let mut h_replaced = Vec::with_capacity(m);
    for i in 1..=m {
        let pi = replace_autonomous(p, s, &crate::poset::antichain(i))?;
        h_replaced.push(h_poly_of_poset(&pi)?);
    }
    let h_p = h_poly_of_poset(p)?;
    let factorial: i64 = (1..=m as i64).product();
    let mut lhs = IntPoly::zero();
    for c in partitions_of(m) {
        // m! / (prod_i i^(c_i) c_i!), the count of permutations of cycle
        // type c; computed with a single exact division
        let mut denom: i64 = 1;
        let mut term = IntPoly::one();
        for (idx, &ci) in c.iter().enumerate() {
            let part = (idx + 1) as i64;
            for _ in 0..ci {
                denom *= part;
                term = &term * &type_b_narayana(idx + 1);
            }
            denom *= (1..=ci as i64).product::<i64>();
        }
        debug_assert_eq!(factorial % denom, 0);
        let coeff = factorial / denom;
        let parts_total: usize = c.iter().sum();
        term = &term * &h_replaced[parts_total - 1];
        lhs = &lhs + &term.scale(coeff);
    }
    let rhs = h_p.scale(factorial);
    let holds = lhs == rhs;
    let gamma_corollary = if m == 2 {
        let d = p.n() - 2;
        let g_p = gamma_from_h(&h_p, d)?;
        let g_p1 = gamma_from_h(&h_replaced[0], d - 1)?;
        let g_p2 = gamma_from_h(&h_replaced[1], d)?;
        Some(&g_p2 + &g_p1 == g_p.scale(2))
    } else {
        None
    };
    Ok(ConjectureReport {
        m,
        lhs,
        rhs,
        holds,
        gamma_corollary,
    })
}

/// Builtin corpus for the conjecture sweep: ordinal sums `Q + C_m + R` over
/// small chains and antichains, with the middle chain as the autonomous
/// subposet. Returns `(poset, chain elements, label)`.
pub fn conjecture_corpus(max_size: usize) -> Vec<(Poset, Subset, String)> {
    use crate::poset::{antichain, chain, ordinal_sum};
    let parts: Vec<(Option<Poset>, &str)> = vec![
        (None, "empty"),
        (Some(chain(1)), "chain(1)"),
        (Some(chain(2)), "chain(2)"),
        (Some(chain(3)), "chain(3)"),
        (Some(antichain(2)), "antichain(2)"),
        (Some(antichain(3)), "antichain(3)"),
    ];
    let mut out = vec![];
    for mid in [2usize, 3] {
        for (q, qname) in &parts {
            for (r, rname) in &parts {
                if q.is_none() && r.is_none() {
                    continue;
                }
                let qn = q.as_ref().map_or(0, |p| p.n());
                let rn = r.as_ref().map_or(0, |p| p.n());
                let total = qn + mid + rn;
                if total > max_size {
                    continue;
                }
                let mut p = q.clone().unwrap_or_else(|| antichain(0));
                p = ordinal_sum(&p, &chain(mid));
                if let Some(r) = r {
                    p = ordinal_sum(&p, r);
                }
                let s = Subset::from_iter(qn..qn + mid);
                let label = format!("{qname} + chain({mid}) + {rname}");
                out.push((p, s, label));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::new(c.to_vec())
    }

    #[test]
    fn hexagon_three_ways() {
        let r = main_theorem_check(1, 2).unwrap();
        assert!(r.equal);
        assert_eq!(r.h_tubings, p(&[1, 4, 1]));
    }

    #[test]
    fn chain_case_gives_narayana() {
        for n in 1..=5 {
            let r = main_theorem_check(n, 0).unwrap();
            assert!(r.equal, "n={n}");
            assert_eq!(r.h_preimages, narayana(n));
        }
    }

    #[test]
    fn claw_case_gives_eulerian() {
        for k in 1..=4 {
            let r = main_theorem_check(0, k).unwrap();
            assert!(r.equal, "k={k}");
            assert_eq!(r.h_preimages, eulerian(k));
        }
    }

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian(1), p(&[1]));
        assert_eq!(eulerian(3), p(&[1, 4, 1]));
        assert_eq!(eulerian(4), p(&[1, 11, 11, 1]));
    }

    #[test]
    fn size_check_worked_example() {
        // 2! * C_3^(2) = 2 * 28 = 56
        let r = size_check(3, 2).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, json!(56));
    }

    #[test]
    fn descent_preservation_hexagon() {
        let rf = verify_descent_preservation(WhichMap::F, 1, 2).unwrap();
        assert!(rf.equal);
        assert_eq!(rf.lhs, json!(p(&[1, 4, 1])));
        let rg = verify_descent_preservation(WhichMap::G, 1, 2).unwrap();
        assert!(rg.equal);
        assert_eq!(rg.lhs, json!(p(&[1, 4, 1])));
    }

    #[test]
    fn branden_hexagon() {
        let r = branden_check(1, 2).unwrap();
        assert!(r.equal);
    }

    #[test]
    fn happy_small() {
        for n in 3..=6 {
            assert!(happy_check(n).unwrap().equal, "n={n}");
        }
    }

    #[test]
    fn recurrence_small() {
        for n in 1..=4 {
            assert!(recurrence_check(n).unwrap().equal, "n={n}");
        }
    }

    #[test]
    fn realroot_small() {
        for n in 1..=6 {
            assert!(realroot_check(n).unwrap().equal, "n={n}");
        }
    }

    #[test]
    fn interlace_small() {
        for n in 2..=6 {
            assert!(interlace_check(n).unwrap().equal, "n={n}");
        }
    }

    #[test]
    fn conjecture_worked_instances() {
        use crate::poset::chain;
        // chain of 4, replace the top two
        let c4 = chain(4);
        let s = Subset::from_iter([2, 3]);
        let r = conjecture_chain_check(&c4, s).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, p(&[2, 6, 2])); // 2 * (1 + 3x + x^2)
        assert_eq!(r.gamma_corollary, Some(true));
        // chain of 4, replace the top three
        let s3 = Subset::from_iter([1, 2, 3]);
        let r3 = conjecture_chain_check(&c4, s3).unwrap();
        assert!(r3.holds);
        assert_eq!(r3.rhs, p(&[6, 18, 6]));
    }

    #[test]
    fn conjecture_rejects_non_chain() {
        let a = make_a(1, 2);
        // the top antichain is autonomous but not a chain
        let s = Subset::from_iter([2, 3]);
        assert!(conjecture_chain_check(&a, s).is_err());
    }

    #[test]
    fn corpus_is_well_formed() {
        let corpus = conjecture_corpus(8);
        assert!(!corpus.is_empty());
        for (p, s, label) in &corpus {
            assert!(is_autonomous(p, *s), "{label}");
            assert!(p.n() <= 8, "{label}");
            assert!(p.is_connected(), "{label}");
        }
        // the two worked instances are present
        assert!(corpus.iter().any(|(p, s, _)| {
            crate::poset::is_isomorphic(p, &crate::poset::chain(4)) && s.len() == 2
        }));
        assert!(corpus.iter().any(|(p, s, _)| {
            crate::poset::is_isomorphic(p, &crate::poset::chain(4)) && s.len() == 3
        }));
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions_of(2).len(), 2);
        assert_eq!(partitions_of(3).len(), 3);
        assert_eq!(partitions_of(4).len(), 5);
    }

    #[test]
    fn hvec_of_family_members() {
        let r = hvec_of_poset(&make_a(1, 2)).unwrap();
        assert_eq!(r.f.counts, vec![6, 6, 1]);
        assert_eq!(r.h, p(&[1, 4, 1]));
        assert_eq!(r.gamma, Some(p(&[1, 2])));
        assert_eq!(r.h_real_roots, 2);
        let r = hvec_of_poset(&crate::poset::chain(4)).unwrap();
        assert_eq!(r.h, p(&[1, 3, 1]));
        let r = hvec_of_poset(&make_a(0, 3)).unwrap();
        assert_eq!(r.h, p(&[1, 4, 1]));
    }

    #[test]
    fn graph_and_poset_routes_agree_on_line_graphs() {
        // posets with tree Hasse diagrams: the poset face counts match the
        // face counts of the line graph's associahedron
        let mut corpus: Vec<Poset> = vec![];
        for (n, k) in [(1usize, 2usize), (2, 1), (3, 0), (2, 2), (2, 3), (4, 2)] {
            corpus.push(make_a(n, k));
        }
        // a spider and a caterpillar, not of the chain-antichain form
        corpus
            .push(crate::poset::build_poset(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap());
        corpus.push(
            crate::poset::build_poset(7, &[(0, 1), (1, 2), (2, 3), (1, 4), (2, 5), (3, 6)])
                .unwrap(),
        );
        for p in &corpus {
            let g = crate::graph::line_graph_of_hasse(p).unwrap();
            let hp = hvec_of_poset(p).unwrap();
            let hg = hvec_of_graph(&g).unwrap();
            assert_eq!(hp.f.counts, hg.f.counts, "poset {p:?}");
        }
    }

    #[test]
    fn btree_descents_match_graph_tubing_h_vector() {
        // the descent generating polynomial over B-trees equals the
        // h-polynomial from the graph's own face enumeration
        let graphs = vec![
            crate::graph::path_graph(5).unwrap(),
            crate::graph::path_graph(7).unwrap(),
            crate::graph::complete_graph(4).unwrap(),
            crate::graph::complete_graph(5).unwrap(),
            crate::graph::lollipop(2, 3).unwrap(),
            crate::graph::lollipop(3, 4).unwrap(),
            crate::graph::lollipop(0, 5).unwrap(),
        ];
        for g in &graphs {
            assert!(g.n() <= 7);
            let from_btrees = hpoly_btrees(g);
            let from_faces = hvec_of_graph(g).unwrap().h;
            assert_eq!(from_btrees, from_faces, "graph {g:?}");
        }
    }

    #[test]
    fn pair_statistic_distribution_is_symmetric() {
        for s in 1..=6 {
            for n in 0..=s {
                let k = s - n;
                let mut counts = vec![0i64; s];
                for p in crate::dyck::enumerate_p_nk(n, k) {
                    counts[crate::dyck::des_pair(&p)] += 1;
                }
                let dist = IntPoly::new(counts);
                assert!(dist.is_symmetric(s - 1), "n={n} k={k}: {dist:?}");
            }
        }
    }
}
